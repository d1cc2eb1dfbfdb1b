//! Estimates how many local minima a landscape has from basin volumes:
//! checked against cosine lattices with `k^d` minima, then applied to QAOA.
//!
//! cargo run --release --example count_minima

use std::sync::Arc;

use qaoa_landscape::graphs::{gen_er, CostTable};
use qaoa_landscape::landscape::{estimate_num_minima, LandscapeSpec, ProbeConfig};
use qaoa_landscape::simulator::QaoaObjective;
use qaoa_landscape::synthetic::{Bowl, CosineLattice};

fn main() -> qaoa_landscape::Result<()> {
    let cfg = ProbeConfig::default();
    for (d, k) in [(2, 2), (2, 3), (4, 2)] {
        let lattice = CosineLattice::new(d, k);
        let est = estimate_num_minima(&lattice, &LandscapeSpec::periodic(d)?, 30, 1, &cfg)?;
        println!("cosine d = {d}, k = {k}: estimate {:.2}, exact {}", est.num_minima, lattice.num_minima());
    }

    let bowl = Bowl::new(vec![3.0; 3]);
    let est = estimate_num_minima(&bowl, &LandscapeSpec::periodic(3)?, 5, 1, &cfg)?;
    println!("bowl: estimate {} (raw {:.3})", est.num_minima, est.raw_estimate);

    for p in [1, 2, 3] {
        let objective = QaoaObjective::new(Arc::new(CostTable::build(&gen_er(6, 0.5, 8)?)?), p)?;
        let est = estimate_num_minima(&objective, &LandscapeSpec::periodic(2 * p)?, 10, 3, &cfg)?;
        println!("qaoa n = 6, p = {p}: estimate {:.3e} from {} basins", est.num_minima, est.basins.len());
    }
    Ok(())
}
