use std::collections::HashSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::config::{Mode, SweepConfig};

/// Bumped whenever a column is added, removed or reinterpreted.
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 14] = [
    "mode",
    "n",
    "p",
    "graph_index",
    "graph_seed",
    "num_inits",
    "quality_fraction",
    "num_minima_estimate",
    "mean_radius",
    "radius_cv_vectors",
    "radius_cv_minima",
    "duplicate_rate",
    "nonconverged_count",
    "wall_seconds",
];

pub const ENDPOINT_HEADER: [&str; 10] = [
    "n",
    "p",
    "graph_index",
    "init_index",
    "approx_ratio",
    "value",
    "converged",
    "iterations",
    "evaluations",
    "grad_norm",
];

pub const RADII_HEADER: [&str; 8] = [
    "n",
    "p",
    "graph_index",
    "init_index",
    "vector_index",
    "radius",
    "mean_radius",
    "nonconverged_probes",
];

/// One descent from a uniform start.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Endpoint {
    pub init_index: usize,
    /// `None` for synthetic objectives without an optimum.
    pub approx_ratio: Option<f64>,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub evaluations: usize,
    pub grad_norm: f64,
}

/// Radii measured around one converged endpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbedMinimum {
    pub init_index: usize,
    pub radii: Vec<f64>,
    pub mean_radius: f64,
    pub log_volume: f64,
    pub nonconverged_probes: usize,
}

/// One graph at one `(n, p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub mode: Mode,
    pub n: usize,
    pub p: usize,
    pub graph_index: usize,
    pub graph_seed: u64,
    pub num_inits: usize,
    pub quality_fraction: f64,
    pub num_minima_estimate: Option<f64>,
    pub mean_radius: Option<f64>,
    pub radius_cv_vectors: Option<f64>,
    pub radius_cv_minima: Option<f64>,
    pub duplicate_rate: Option<f64>,
    pub nonconverged_count: usize,
    pub wall_seconds: Option<f64>,
    pub endpoints: Vec<Endpoint>,
    pub probed: Vec<ProbedMinimum>,
}

impl RunRecord {
    pub fn key(&self) -> RecordKey {
        RecordKey { n: self.n, p: self.p, graph_index: self.graph_index }
    }

    /// Quality fraction from the endpoint list alone.
    pub fn recompute_quality_fraction(&self, cutoff: f64) -> f64 {
        quality_from_endpoints(&self.endpoints, cutoff)
    }

    fn csv_row(&self) -> [String; 14] {
        [
            self.mode.as_str().to_string(),
            self.n.to_string(),
            self.p.to_string(),
            self.graph_index.to_string(),
            self.graph_seed.to_string(),
            self.num_inits.to_string(),
            self.quality_fraction.to_string(),
            opt(self.num_minima_estimate),
            opt(self.mean_radius),
            opt(self.radius_cv_vectors),
            opt(self.radius_cv_minima),
            opt(self.duplicate_rate),
            self.nonconverged_count.to_string(),
            opt(self.wall_seconds),
        ]
    }
}

pub(crate) fn quality_from_endpoints(endpoints: &[Endpoint], cutoff: f64) -> f64 {
    let hits = endpoints
        .iter()
        .filter(|e| e.converged && e.approx_ratio.is_some_and(|r| r >= cutoff))
        .count();
    hits as f64 / endpoints.len().max(1) as f64
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Identifies a record within a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecordKey {
    pub n: usize,
    pub p: usize,
    pub graph_index: usize,
}

/// Sample standard deviation over mean; 0 for a single value.
pub fn coefficient_of_variation(values: &[f64]) -> f64 {
    let k = values.len();
    if k < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / k as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    var.sqrt() / mean
}

/// Paths of everything a sweep writes next to `out`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputPaths {
    pub csv: PathBuf,
    pub sidecar: PathBuf,
    pub endpoints: PathBuf,
    pub radii: PathBuf,
}

impl OutputPaths {
    pub fn new(out: &Path) -> Self {
        let stem = out.with_extension("");
        let with = |suffix: &str| {
            let mut s = stem.clone().into_os_string();
            s.push(suffix);
            PathBuf::from(s)
        };
        Self {
            csv: out.to_path_buf(),
            sidecar: with(".json"),
            endpoints: with(".endpoints.csv"),
            radii: with(".radii.csv"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    csv_schema: u32,
    config: SweepConfig,
}

pub fn write_sidecar(path: &Path, config: &SweepConfig) -> Result<()> {
    let sidecar = Sidecar { csv_schema: CSV_SCHEMA_VERSION, config: config.clone() };
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, &sidecar)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

pub fn read_sidecar(path: &Path) -> Result<SweepConfig> {
    let sidecar: Sidecar = serde_json::from_reader(File::open(path)?)?;
    if sidecar.csv_schema != CSV_SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "sidecar schema {} does not match {}",
            sidecar.csv_schema, CSV_SCHEMA_VERSION
        )));
    }
    Ok(sidecar.config)
}

/// Appends records to the main CSV and its two side files, flushing after
/// every record.
pub struct RecordSink {
    main: csv::Writer<File>,
    endpoints: csv::Writer<File>,
    radii: csv::Writer<File>,
}

impl RecordSink {
    /// Starts fresh files, truncating anything already there.
    pub fn create(paths: &OutputPaths) -> Result<Self> {
        let mut sink = Self {
            main: csv::Writer::from_path(&paths.csv)?,
            endpoints: csv::Writer::from_path(&paths.endpoints)?,
            radii: csv::Writer::from_path(&paths.radii)?,
        };
        sink.main.write_record(CSV_HEADER)?;
        sink.endpoints.write_record(ENDPOINT_HEADER)?;
        sink.radii.write_record(RADII_HEADER)?;
        sink.flush()?;
        Ok(sink)
    }

    /// Reopens an interrupted sweep. Rows of records that never reached the
    /// main CSV are dropped from the side files, and the keys already done
    /// are returned.
    pub fn resume(paths: &OutputPaths, mode: Mode) -> Result<(Self, HashSet<RecordKey>)> {
        let main_rows = read_complete_rows(&paths.csv, &CSV_HEADER)?;
        let mut done = HashSet::new();
        for row in &main_rows {
            if &row[0] != mode.as_str() {
                return Err(Error::Config(format!(
                    "{} holds '{}' rows, not '{}'",
                    paths.csv.display(),
                    &row[0],
                    mode.as_str()
                )));
            }
            done.insert(RecordKey { n: parse(&row[1])?, p: parse(&row[2])?, graph_index: parse(&row[3])? });
        }
        let keep = |row: &csv::StringRecord| -> Result<bool> {
            let key = RecordKey { n: parse(&row[0])?, p: parse(&row[1])?, graph_index: parse(&row[2])? };
            Ok(done.contains(&key))
        };
        let endpoint_rows = filter_rows(read_complete_rows(&paths.endpoints, &ENDPOINT_HEADER)?, keep)?;
        let radii_rows = filter_rows(read_complete_rows(&paths.radii, &RADII_HEADER)?, keep)?;

        let mut sink = Self::create(paths)?;
        for row in &main_rows {
            sink.main.write_record(row)?;
        }
        for row in &endpoint_rows {
            sink.endpoints.write_record(row)?;
        }
        for row in &radii_rows {
            sink.radii.write_record(row)?;
        }
        sink.flush()?;
        Ok((sink, done))
    }

    /// Side-file rows go first so a record in the main CSV always has its
    /// endpoints on disk.
    pub fn append(&mut self, record: &RunRecord) -> Result<()> {
        let (n, p, g) = (record.n.to_string(), record.p.to_string(), record.graph_index.to_string());
        for e in &record.endpoints {
            self.endpoints.write_record([
                n.as_str(),
                &p,
                &g,
                &e.init_index.to_string(),
                &opt(e.approx_ratio),
                &e.value.to_string(),
                if e.converged { "true" } else { "false" },
                &e.iterations.to_string(),
                &e.evaluations.to_string(),
                &e.grad_norm.to_string(),
            ])?;
        }
        for m in &record.probed {
            for (v, r) in m.radii.iter().enumerate() {
                self.radii.write_record([
                    n.as_str(),
                    &p,
                    &g,
                    &m.init_index.to_string(),
                    &v.to_string(),
                    &r.to_string(),
                    &m.mean_radius.to_string(),
                    &m.nonconverged_probes.to_string(),
                ])?;
            }
        }
        self.endpoints.flush()?;
        self.radii.flush()?;
        self.main.write_record(record.csv_row())?;
        self.main.flush()?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.endpoints.flush()?;
        self.radii.flush()?;
        self.main.flush()?;
        Ok(())
    }
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Config(format!("cannot parse '{s}' in existing output")))
}

/// Rows of a headed CSV, skipping a torn final line. A missing file reads as
/// empty.
fn read_complete_rows(path: &Path, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_path(path)?;
    let found = reader.headers()?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Config(format!("{} has an unexpected header", path.display())));
    }
    let mut rows = Vec::new();
    for row in reader.records() {
        let row = row?;
        if row.len() == header.len() {
            rows.push(row);
        }
    }
    Ok(rows)
}

fn filter_rows(
    rows: Vec<csv::StringRecord>,
    keep: impl Fn(&csv::StringRecord) -> Result<bool>,
) -> Result<Vec<csv::StringRecord>> {
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        if keep(&row)? {
            out.push(row);
        }
    }
    Ok(out)
}

/// Loads the main CSV back into summary records (endpoints and radii left
/// empty).
pub fn read_records(path: &Path) -> Result<Vec<RunRecord>> {
    let rows = read_complete_rows(path, &CSV_HEADER)?;
    let opt_f = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            parse(s).map(Some)
        }
    };
    rows.iter()
        .map(|r| {
            Ok(RunRecord {
                mode: r[0].parse()?,
                n: parse(&r[1])?,
                p: parse(&r[2])?,
                graph_index: parse(&r[3])?,
                graph_seed: parse(&r[4])?,
                num_inits: parse(&r[5])?,
                quality_fraction: parse(&r[6])?,
                num_minima_estimate: opt_f(&r[7])?,
                mean_radius: opt_f(&r[8])?,
                radius_cv_vectors: opt_f(&r[9])?,
                radius_cv_minima: opt_f(&r[10])?,
                duplicate_rate: opt_f(&r[11])?,
                nonconverged_count: parse(&r[12])?,
                wall_seconds: opt_f(&r[13])?,
                endpoints: Vec::new(),
                probed: Vec::new(),
            })
        })
        .collect()
}

/// Loads the endpoints side file, grouped by record key in file order.
pub fn read_endpoints(path: &Path) -> Result<Vec<(RecordKey, Endpoint)>> {
    let rows = read_complete_rows(path, &ENDPOINT_HEADER)?;
    rows.iter()
        .map(|r| {
            let key = RecordKey { n: parse(&r[0])?, p: parse(&r[1])?, graph_index: parse(&r[2])? };
            let ratio = if r[4].is_empty() { None } else { Some(parse(&r[4])?) };
            Ok((
                key,
                Endpoint {
                    init_index: parse(&r[3])?,
                    approx_ratio: ratio,
                    value: parse(&r[5])?,
                    converged: parse(&r[6])?,
                    iterations: parse(&r[7])?,
                    evaluations: parse(&r[8])?,
                    grad_norm: parse(&r[9])?,
                },
            ))
        })
        .collect()
}
