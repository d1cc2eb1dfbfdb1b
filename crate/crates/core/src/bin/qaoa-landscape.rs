use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qaoa_landscape::experiments::{run_sweep_to, sweep_graph, Mode, PRule, SweepConfig};
use qaoa_landscape::{Error, Result};

#[derive(Parser)]
#[command(name = "qaoa-landscape", version, about = "QAOA MaxCut landscape sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the sweep's Erdős–Rényi graphs as a JSON array.
    GenGraphs(SweepArgs),
    /// Fraction of random starts reaching the cutoff ratio.
    Quality(SweepArgs),
    /// Basin-volume estimate of the number of local minima.
    Quantity(SweepArgs),
    /// Basin radii per probe direction and their spread.
    Radius(SweepArgs),
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Round counts, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "p_log_coeff")]
    p: Vec<usize>,
    /// Use p = round(c · log(n)) instead of fixed rounds.
    #[arg(long, value_name = "C")]
    p_log_coeff: Option<f64>,
    /// Base of the logarithm for --p-log-coeff.
    #[arg(long, default_value_t = 2.0)]
    log_base: f64,
    #[arg(long, default_value_t = 0.5)]
    edge_prob: f64,
    /// Graphs per (n, p) [default: 10, or 40 with --paper-scale].
    #[arg(long)]
    graphs: Option<usize>,
    /// Random starts per graph [default: 100, or 200/1000 with --paper-scale].
    #[arg(long)]
    inits: Option<usize>,
    #[arg(long, default_value_t = 0.99)]
    cutoff: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Bisection precision of basin radii, radians.
    #[arg(long, default_value_t = 1e-3)]
    precision: f64,
    /// Distance under which two endpoints are the same minimum.
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Probe at most this many converged minima per graph.
    #[arg(long)]
    probe_minima: Option<usize>,
    /// Probe directions per minimum [default: 2p].
    #[arg(long)]
    vectors: Option<usize>,
    /// Output file; CSV for sweeps, JSON for gen-graphs (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Restore full budgets: 40 graphs, 200 starts (1000 with --p-log-coeff).
    #[arg(long)]
    paper_scale: bool,
    /// Keep finished records in --out and run only the missing ones.
    #[arg(long)]
    resume: bool,
    /// Fill the wall_seconds column.
    #[arg(long)]
    timing: bool,
}

impl SweepArgs {
    fn config(&self, mode: Mode) -> SweepConfig {
        let mut cfg = SweepConfig::desk(mode, self.n.clone());
        cfg.p_rule = match self.p_log_coeff {
            Some(coeff) => PRule::Log { coeff, base: self.log_base },
            None if self.p.is_empty() => PRule::fixed(5),
            None => PRule::Fixed { values: self.p.clone() },
        };
        if self.paper_scale {
            cfg = cfg.paper_scale();
        }
        if let Some(g) = self.graphs {
            cfg.num_graphs = g;
        }
        if let Some(i) = self.inits {
            cfg.num_inits = i;
        }
        cfg.p_edge = self.edge_prob;
        cfg.cutoff = self.cutoff;
        cfg.master_seed = self.seed;
        cfg.precision = self.precision;
        cfg.eps = self.eps;
        cfg.probe_minima = self.probe_minima;
        cfg.num_vectors = self.vectors;
        cfg.threads = self.threads;
        cfg.record_timing = self.timing;
        cfg
    }
}

fn gen_graphs(args: &SweepArgs) -> Result<()> {
    let cfg = args.config(Mode::Quality);
    cfg.validate()?;
    let mut graphs = Vec::new();
    for &n in &cfg.n_values {
        for g in 0..cfg.num_graphs {
            graphs.push(sweep_graph(&cfg, n, g)?);
        }
    }
    let lines = graphs.iter().map(|g| g.to_json()).collect::<Result<Vec<_>>>()?;
    let json = format!("[\n{}\n]", lines.join(",\n"));
    match &args.out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => writeln!(std::io::stdout(), "{json}")?,
    }
    Ok(())
}

fn sweep(args: &SweepArgs, mode: Mode) -> Result<()> {
    let out = args
        .out
        .as_ref()
        .ok_or_else(|| Error::Config("--out is required for sweeps".into()))?;
    let summary = run_sweep_to(&args.config(mode), out, args.resume)?;
    eprintln!(
        "wrote {} records to {} ({} resumed)",
        summary.written,
        summary.paths.csv.display(),
        summary.resumed
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::GenGraphs(a) => gen_graphs(a),
        Command::Quality(a) => sweep(a, Mode::Quality),
        Command::Quantity(a) => sweep(a, Mode::Quantity),
        Command::Radius(a) => sweep(a, Mode::RadiusStats),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
