//! Runs BFGS on the negated QAOA expectation from a few uniform starts and
//! prints where each descent ends.
//!
//! cargo run --release --example bfgs_descent

use std::sync::Arc;

use qaoa_landscape::graphs::{gen_er, CostTable};
use qaoa_landscape::landscape::{sample_uniform, LandscapeSpec};
use qaoa_landscape::optimizer::{minimize, BfgsConfig};
use qaoa_landscape::rng;
use qaoa_landscape::simulator::QaoaObjective;

fn main() -> qaoa_landscape::Result<()> {
    let p = 3;
    let table = Arc::new(CostTable::build(&gen_er(8, 0.5, 2)?)?);
    let mut objective = QaoaObjective::new(table, p)?;
    let spec = LandscapeSpec::periodic(2 * p)?;
    let cfg = BfgsConfig::default();
    let mut stream = rng::stream(9);

    for run in 0..5 {
        let start = sample_uniform(&spec, &mut stream);
        let m = minimize(&mut objective, &start, &cfg)?;
        println!(
            "run {run}: ratio {:.4}  iterations {:3}  evaluations {:3}  |g| {:.1e}  converged {}",
            m.approx_ratio.unwrap_or(f64::NAN),
            m.iterations,
            m.evaluations,
            m.grad_norm,
            m.converged
        );
    }
    Ok(())
}
