use std::collections::HashSet;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiments::config::{Mode, SweepConfig};
use crate::experiments::records::{
    coefficient_of_variation, quality_from_endpoints, read_sidecar, write_sidecar, Endpoint, OutputPaths,
    ProbedMinimum, RecordKey, RecordSink, RunRecord,
};
use crate::graphs::{gen_er, CostTable, Graph};
use crate::landscape::{descend_from_samples, estimate_basin, LandscapeSpec};
use crate::optimizer::{same_minimum, LocalMinimum, Objective};
use crate::rng::{self, derive_seed};
use crate::simulator::QaoaObjective;

const GRAPH_STREAM: u64 = 0x0067_7261_7068;
const INIT_STREAM: u64 = 0x696e_6974;
const MAX_GRAPH_ATTEMPTS: u64 = 1000;

/// The graph used for `graph_index` at `n`: the override if one is set,
/// otherwise the first edge-bearing G(n, p_edge) sample from the streams
/// `derive_seed(master, [_, n, graph_index, attempt])`. The same graph is
/// used for every `p`.
pub fn sweep_graph(cfg: &SweepConfig, n: usize, graph_index: usize) -> Result<Graph> {
    if let Some(g) = &cfg.graph_override {
        return Ok(g.clone());
    }
    for attempt in 0..MAX_GRAPH_ATTEMPTS {
        let seed = derive_seed(cfg.master_seed, &[GRAPH_STREAM, n as u64, graph_index as u64, attempt]);
        let g = gen_er(n, cfg.p_edge, seed)?;
        if g.num_edges() > 0 {
            return Ok(g);
        }
    }
    Err(Error::Config(format!(
        "no edge-bearing G({n}, {}) sample in {MAX_GRAPH_ATTEMPTS} attempts",
        cfg.p_edge
    )))
}

/// Seed behind every random start and probe frame of one record.
pub fn instance_seed(cfg: &SweepConfig, key: RecordKey) -> u64 {
    derive_seed(cfg.master_seed, &[INIT_STREAM, key.n as u64, key.p as u64, key.graph_index as u64])
}

/// Every `(n, p, graph_index)` of the sweep in output order.
pub fn sweep_keys(cfg: &SweepConfig) -> Vec<RecordKey> {
    let mut keys = Vec::new();
    for &n in &cfg.n_values {
        for p in cfg.p_rule.rounds(n) {
            for graph_index in 0..cfg.num_graphs {
                keys.push(RecordKey { n, p, graph_index });
            }
        }
    }
    keys
}

/// Statistics for one objective, before they are tied to a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceAnalysis {
    pub endpoints: Vec<Endpoint>,
    pub quality_fraction: f64,
    pub probed: Vec<ProbedMinimum>,
    pub num_minima_estimate: Option<f64>,
    pub mean_radius: Option<f64>,
    pub radius_cv_vectors: Option<f64>,
    pub radius_cv_minima: Option<f64>,
    pub duplicate_rate: Option<f64>,
    pub nonconverged_count: usize,
}

/// Runs one instance of `cfg.mode` on any objective over `spec`.
///
/// Start `i` and its probe frame come from `derive_seed(seed, [i])` and
/// `derive_seed(seed, [i, 1])`. Basin probes, when the mode needs them, cover
/// the converged endpoints in init order, at most `cfg.probe_minima` of them.
pub fn analyze_objective<O>(
    objective: &O,
    spec: &LandscapeSpec,
    cfg: &SweepConfig,
    seed: u64,
) -> Result<InstanceAnalysis>
where
    O: Objective + Clone + Send + Sync,
{
    let minima = descend_from_samples(objective, spec, cfg.num_inits, seed, &cfg.bfgs)?;
    let endpoints: Vec<Endpoint> = minima.iter().enumerate().map(|(i, m)| endpoint(i, m)).collect();
    let nonconverged_count = endpoints.iter().filter(|e| !e.converged).count();
    if nonconverged_count == endpoints.len() {
        log::warn!("none of {} descents converged", endpoints.len());
    }
    let converged: Vec<(usize, &LocalMinimum)> = minima.iter().enumerate().filter(|(_, m)| m.converged).collect();
    let duplicate_rate = duplicate_rate(&converged, cfg.eps)?;

    let mut analysis = InstanceAnalysis {
        quality_fraction: quality_from_endpoints(&endpoints, cfg.cutoff),
        endpoints,
        probed: Vec::new(),
        num_minima_estimate: None,
        mean_radius: None,
        radius_cv_vectors: None,
        radius_cv_minima: None,
        duplicate_rate,
        nonconverged_count,
    };
    if !cfg.mode.probes_basins() {
        return Ok(analysis);
    }
    let probe_cfg = cfg.probe_config();
    let take = cfg.probe_minima.unwrap_or(usize::MAX);
    let basins = converged
        .into_iter()
        .take(take)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, m)| {
            let mut local = objective.clone();
            let mut stream = rng::stream(derive_seed(seed, &[i as u64, 1]));
            estimate_basin(&mut local, spec, m, &mut stream, &probe_cfg).map(|b| (i, b))
        })
        .collect::<Result<Vec<_>>>()?;
    if basins.is_empty() {
        log::warn!("no converged minima to probe");
        return Ok(analysis);
    }
    let plain: Vec<_> = basins.iter().map(|(_, b)| b.clone()).collect();
    analysis.num_minima_estimate = Some(crate::landscape::aggregate_num_minima(spec, &plain)?);
    let means: Vec<f64> = plain.iter().map(|b| b.mean_radius).collect();
    analysis.mean_radius = Some(means.iter().sum::<f64>() / means.len() as f64);
    analysis.radius_cv_minima = Some(coefficient_of_variation(&means));
    analysis.radius_cv_vectors =
        Some(plain.iter().map(|b| coefficient_of_variation(&b.radii)).sum::<f64>() / plain.len() as f64);
    analysis.probed = basins
        .into_iter()
        .map(|(i, b)| ProbedMinimum {
            init_index: i,
            radii: b.radii,
            mean_radius: b.mean_radius,
            log_volume: b.log_volume,
            nonconverged_probes: b.nonconverged_probes,
        })
        .collect();
    Ok(analysis)
}

fn endpoint(init_index: usize, m: &LocalMinimum) -> Endpoint {
    Endpoint {
        init_index,
        approx_ratio: m.approx_ratio,
        value: m.value,
        converged: m.converged,
        iterations: m.iterations,
        evaluations: m.evaluations,
        grad_norm: m.grad_norm,
    }
}

/// Share of converged endpoints that repeat an earlier one within `eps`.
fn duplicate_rate(converged: &[(usize, &LocalMinimum)], eps: f64) -> Result<Option<f64>> {
    if converged.is_empty() {
        return Ok(None);
    }
    let mut repeats = 0;
    for (k, (_, m)) in converged.iter().enumerate() {
        for (_, earlier) in &converged[..k] {
            if same_minimum(&m.point, &earlier.point, eps)? {
                repeats += 1;
                break;
            }
        }
    }
    Ok(Some(repeats as f64 / converged.len() as f64))
}

/// Runs the QAOA instance behind `key`.
pub fn run_instance(cfg: &SweepConfig, key: RecordKey) -> Result<RunRecord> {
    let clock = Instant::now();
    let graph = sweep_graph(cfg, key.n, key.graph_index)?;
    let table = Arc::new(CostTable::build_with_cap(&graph, cfg.qubit_cap)?);
    let objective = QaoaObjective::new(table, key.p)?;
    let spec = LandscapeSpec::periodic(2 * key.p)?;
    let a = analyze_objective(&objective, &spec, cfg, instance_seed(cfg, key))?;
    Ok(RunRecord {
        mode: cfg.mode,
        n: key.n,
        p: key.p,
        graph_index: key.graph_index,
        graph_seed: graph.seed().unwrap_or(0),
        num_inits: cfg.num_inits,
        quality_fraction: a.quality_fraction,
        num_minima_estimate: a.num_minima_estimate,
        mean_radius: a.mean_radius,
        radius_cv_vectors: a.radius_cv_vectors,
        radius_cv_minima: a.radius_cv_minima,
        duplicate_rate: a.duplicate_rate,
        nonconverged_count: a.nonconverged_count,
        wall_seconds: cfg.record_timing.then(|| clock.elapsed().as_secs_f64()),
        endpoints: a.endpoints,
        probed: a.probed,
    })
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn drive(cfg: &SweepConfig, skip: &HashSet<RecordKey>, emit: &mut (dyn FnMut(RunRecord) -> Result<()> + Send)) -> Result<()> {
    cfg.validate()?;
    with_pool(cfg.threads, || {
        for key in sweep_keys(cfg) {
            if skip.contains(&key) {
                continue;
            }
            let record = run_instance(cfg, key)?;
            log::info!(
                "{} n={} p={} graph={} quality={}",
                cfg.mode.as_str(),
                key.n,
                key.p,
                key.graph_index,
                record.quality_fraction
            );
            emit(record)?;
        }
        Ok(())
    })?
}

/// Runs every record of the sweep in memory, in output order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<RunRecord>> {
    let mut records = Vec::new();
    drive(cfg, &HashSet::new(), &mut |r| {
        records.push(r);
        Ok(())
    })?;
    Ok(records)
}

pub fn run_quality_sweep(cfg: &SweepConfig) -> Result<Vec<RunRecord>> {
    run_sweep(&SweepConfig { mode: Mode::Quality, ..cfg.clone() })
}

pub fn run_quantity_sweep(cfg: &SweepConfig) -> Result<Vec<RunRecord>> {
    run_sweep(&SweepConfig { mode: Mode::Quantity, ..cfg.clone() })
}

pub fn run_radius_stats(cfg: &SweepConfig) -> Result<Vec<RunRecord>> {
    run_sweep(&SweepConfig { mode: Mode::RadiusStats, ..cfg.clone() })
}

/// What [`run_sweep_to`] did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSummary {
    pub paths: OutputPaths,
    pub written: usize,
    pub resumed: usize,
}

/// Runs the sweep and streams each record to `out` (plus sidecar and side
/// files) as soon as it is finished. With `resume`, records already present
/// in `out` are kept and skipped; the sidecar must match `cfg`.
pub fn run_sweep_to(cfg: &SweepConfig, out: &Path, resume: bool) -> Result<SweepSummary> {
    cfg.validate()?;
    let paths = OutputPaths::new(out);
    let (mut sink, done) = if resume && paths.csv.exists() {
        if paths.sidecar.exists() {
            let previous = read_sidecar(&paths.sidecar)?;
            if previous != (SweepConfig { threads: None, ..cfg.clone() }) {
                return Err(Error::Config(format!(
                    "{} was written with a different configuration",
                    paths.csv.display()
                )));
            }
        }
        RecordSink::resume(&paths, cfg.mode)?
    } else {
        (RecordSink::create(&paths)?, HashSet::new())
    };
    write_sidecar(&paths.sidecar, cfg)?;
    let mut written = 0;
    drive(cfg, &done, &mut |r| {
        sink.append(&r)?;
        written += 1;
        Ok(())
    })?;
    sink.flush()?;
    Ok(SweepSummary { paths, written, resumed: done.len() })
}
