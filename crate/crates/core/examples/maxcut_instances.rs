//! Samples Erdős–Rényi graphs, prints their canonical JSON and the exact
//! MaxCut value found by enumerating every cut.
//!
//! cargo run --release --example maxcut_instances -- 10 3

use qaoa_landscape::graphs::{gen_er, parse_bits, CostTable, Graph};

fn main() -> qaoa_landscape::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(8, |s| s.parse().expect("n"));
    let count: u64 = args.next().map_or(3, |s| s.parse().expect("count"));

    for seed in 0..count {
        let graph = gen_er(n, 0.5, seed)?;
        let table = CostTable::build(&graph)?;
        let best = table.values().iter().position(|&v| v == table.optimum()).unwrap_or(0);
        let bits: String = (0..n).map(|i| if best >> i & 1 == 1 { '1' } else { '0' }).collect();
        println!("{}", graph.to_json()?);
        println!("  |E| = {}, MaxCut = {} at {bits}", graph.num_edges(), table.optimum());
    }

    let k4 = Graph::complete(4)?;
    println!("K4 cut of 0011: {}", k4.cut_value(&parse_bits("0011")?)?);
    Ok(())
}
