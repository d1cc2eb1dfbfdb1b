//! Compares the adjoint gradient with central finite differences at random
//! parameters.
//!
//! cargo run --release --example gradient_check

use std::sync::Arc;

use rand::Rng;
use qaoa_landscape::graphs::{gen_er, CostTable};
use qaoa_landscape::rng;
use qaoa_landscape::simulator::QaoaContext;

fn main() -> qaoa_landscape::Result<()> {
    let mut stream = rng::stream(5);
    let h = 1e-5;
    for (n, p) in [(4, 1), (6, 3), (8, 6)] {
        let table = Arc::new(CostTable::build(&gen_er(n, 0.5, stream.random())?)?);
        let mut ctx = QaoaContext::new(table, p)?;
        let x: Vec<f64> = (0..2 * p).map(|_| stream.random_range(0.0..std::f64::consts::TAU)).collect();
        let mut grad = vec![0.0; 2 * p];
        ctx.expectation_and_gradient(&x, &mut grad);
        let mut worst: f64 = 0.0;
        for k in 0..2 * p {
            let mut up = x.clone();
            let mut down = x.clone();
            up[k] += h;
            down[k] -= h;
            let fd = (ctx.expectation(&up) - ctx.expectation(&down)) / (2.0 * h);
            worst = worst.max((fd - grad[k]).abs());
        }
        println!("n = {n}, p = {p}: max |adjoint - finite difference| = {worst:.2e}");
    }
    Ok(())
}
