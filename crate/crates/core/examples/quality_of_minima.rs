//! Fraction of random starts whose local minimum reaches a target
//! approximation ratio, for growing graph sizes at fixed depth.
//!
//! cargo run --release --example quality_of_minima -- 0.95

use std::sync::Arc;

use qaoa_landscape::graphs::{gen_er, CostTable};
use qaoa_landscape::landscape::{quality_fraction, LandscapeSpec};
use qaoa_landscape::optimizer::BfgsConfig;
use qaoa_landscape::simulator::QaoaObjective;

fn main() -> qaoa_landscape::Result<()> {
    let cutoff: f64 = std::env::args().nth(1).map_or(0.95, |s| s.parse().expect("cutoff"));
    let p = 4;
    let spec = LandscapeSpec::periodic(2 * p)?;
    for n in [4, 6, 8] {
        let table = Arc::new(CostTable::build(&gen_er(n, 0.5, 100 + n as u64)?)?);
        let objective = QaoaObjective::new(table, p)?;
        let q = quality_fraction(&objective, &spec, 50, cutoff, 1, &BfgsConfig::default())?;
        let best = q.endpoints.iter().filter_map(|m| m.approx_ratio).fold(0.0, f64::max);
        println!(
            "n = {n}: {:.2} of 50 starts reach {cutoff} (best ratio {best:.4}, {} not converged)",
            q.fraction, q.nonconverged
        );
    }
    Ok(())
}
