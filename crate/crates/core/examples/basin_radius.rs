//! Bisects for the distance to a basin boundary along random orthonormal
//! directions, first on a cosine lattice whose answer is known, then around
//! a QAOA local minimum.
//!
//! cargo run --release --example basin_radius

use std::sync::Arc;

use qaoa_landscape::graphs::{gen_er, CostTable};
use qaoa_landscape::landscape::{basin_radius, estimate_basin, sample_uniform, LandscapeSpec, ProbeConfig};
use qaoa_landscape::optimizer::minimize;
use qaoa_landscape::rng;
use qaoa_landscape::simulator::QaoaObjective;
use qaoa_landscape::synthetic::CosineLattice;

fn main() -> qaoa_landscape::Result<()> {
    let cfg = ProbeConfig::default();

    // Minimum at (π, π); the basin boundary along an axis is π/2 away.
    let mut lattice = CosineLattice::new(2, 2);
    let min = minimize(&mut lattice, &[3.0, 3.2], &cfg.bfgs)?;
    let axis = basin_radius(&mut lattice, &min, &[1.0, 0.0], &cfg)?;
    println!("lattice: axis radius {:.4} (π/2 = {:.4}), {} descents", axis.radius, std::f64::consts::FRAC_PI_2, axis.descents);

    let p = 3;
    let mut objective = QaoaObjective::new(Arc::new(CostTable::build(&gen_er(8, 0.5, 4)?)?), p)?;
    let spec = LandscapeSpec::periodic(2 * p)?;
    let mut stream = rng::stream(21);
    let start = sample_uniform(&spec, &mut stream);
    let min = minimize(&mut objective, &start, &cfg.bfgs)?;
    let basin = estimate_basin(&mut objective, &spec, &min, &mut stream, &cfg)?;
    println!("qaoa minimum with ratio {:.4}", min.approx_ratio.unwrap_or(f64::NAN));
    for (v, r) in basin.radii.iter().enumerate() {
        println!("  direction {v}: radius {r:.4}");
    }
    println!("  geometric mean {:.4}, ball volume {:.4e}, {} probe descents", basin.mean_radius, basin.volume, basin.descents);
    Ok(())
}
