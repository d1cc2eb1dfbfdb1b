//! Spread of basin radii across probe directions and across minima for a
//! handful of graphs, in memory.
//!
//! cargo run --release --example radius_statistics

use qaoa_landscape::experiments::{run_radius_stats, Mode, PRule, SweepConfig};

fn main() -> qaoa_landscape::Result<()> {
    let mut cfg = SweepConfig::desk(Mode::RadiusStats, vec![6, 8]);
    cfg.p_rule = PRule::fixed(3);
    cfg.num_graphs = 3;
    cfg.num_inits = 8;
    cfg.master_seed = 17;

    println!("   n  p  graph  minima  mean radius  cv vectors  cv minima");
    for r in run_radius_stats(&cfg)? {
        println!(
            "{:4} {:2} {:6} {:7} {:12.4} {:11.4} {:10.4}",
            r.n,
            r.p,
            r.graph_index,
            r.probed.len(),
            r.mean_radius.unwrap_or(f64::NAN),
            r.radius_cv_vectors.unwrap_or(f64::NAN),
            r.radius_cv_minima.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
