//! Evolves a QAOA state for a small graph and reports the expected cut, the
//! approximation ratio and the most likely bitstrings.
//!
//! cargo run --release --example simulate_qaoa

use qaoa_landscape::graphs::{gen_er, CostTable};
use qaoa_landscape::simulator::{evolve, expectation, plus_state, ParamVector};

fn main() -> qaoa_landscape::Result<()> {
    let graph = gen_er(6, 0.5, 11)?;
    let table = CostTable::build(&graph)?;
    println!("{} edges, optimum {}", graph.num_edges(), table.optimum());

    let start = plus_state(graph.n())?;
    println!("p = 0: <C> = {:.6} (|E|/2 = {})", expectation(&start, &table)?, graph.num_edges() as f64 / 2.0);

    let params = ParamVector::new(&[0.35, 0.7], &[0.55, 0.25])?;
    let state = evolve(&table, &params)?;
    let c = expectation(&state, &table)?;
    println!("p = 2: <C> = {c:.6}, ratio {:.4}, norm {:.12}", c / table.optimum(), state.norm_sqr());

    let mut probs: Vec<(usize, f64)> = state.amplitudes().iter().map(|a| a.norm_sqr()).enumerate().collect();
    probs.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (x, prob) in probs.iter().take(4) {
        let bits: String = (0..graph.n()).map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect();
        println!("  {bits}  P = {prob:.4}  C = {}", table.values()[*x]);
    }
    Ok(())
}
