//! Writes a quality sweep to disk, resumes it (nothing is left to run) and
//! reads the records back.
//!
//! cargo run --release --example sweep_to_csv -- /tmp/quality.csv

use std::path::PathBuf;

use qaoa_landscape::experiments::{read_records, run_sweep_to, Mode, PRule, SweepConfig};

fn main() -> qaoa_landscape::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("qaoa_quality.csv"), PathBuf::from);

    let mut cfg = SweepConfig::desk(Mode::Quality, vec![4, 6]);
    cfg.p_rule = PRule::Fixed { values: vec![2, 3] };
    cfg.num_graphs = 3;
    cfg.num_inits = 20;
    cfg.cutoff = 0.95;

    let first = run_sweep_to(&cfg, &out, false)?;
    println!("wrote {} records, config in {}", first.written, first.paths.sidecar.display());
    let again = run_sweep_to(&cfg, &out, true)?;
    println!("resume found {} finished records and ran {}", again.resumed, again.written);

    for r in read_records(&out)? {
        println!("n = {} p = {} graph {}: quality {:.2}", r.n, r.p, r.graph_index, r.quality_fraction);
    }
    Ok(())
}
