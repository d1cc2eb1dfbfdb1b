//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

use qaoa_landscape::graphs::Graph;
use qaoa_landscape::simulator::QaoaContext;

/// Cut values by direct enumeration, bit `i` of `x` being vertex `i`.
pub fn brute_force_cuts(graph: &Graph) -> Vec<f64> {
    (0..1u64 << graph.n())
        .map(|x| {
            graph
                .edges()
                .iter()
                .filter(|&&(i, j)| (x >> i & 1) != (x >> j & 1))
                .count() as f64
        })
        .collect()
}

pub fn brute_force_maxcut(graph: &Graph) -> f64 {
    brute_force_cuts(graph).into_iter().fold(0.0, f64::max)
}

/// `Σ_i X_i` as a dense `2^n × 2^n` matrix.
fn dense_mixer(n: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for x in 0..dim {
        for q in 0..n {
            m[(x ^ (1 << q), x)] += Complex64::new(1.0, 0.0);
        }
    }
    m
}

/// QAOA state from dense matrix exponentials of `−iγ H_C` and `−iβ H_M`.
pub fn dense_evolve(graph: &Graph, gammas: &[f64], betas: &[f64]) -> Vec<Complex64> {
    let n = graph.n();
    let dim = 1usize << n;
    let cuts = brute_force_cuts(graph);
    let h_c = DMatrix::<Complex64>::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        cuts.iter().map(|&c| Complex64::new(c, 0.0)),
    ));
    let h_m = dense_mixer(n);
    let minus_i = Complex64::new(0.0, -1.0);
    let mut psi = nalgebra::DVector::<Complex64>::from_element(dim, Complex64::new((dim as f64).sqrt().recip(), 0.0));
    for (&g, &b) in gammas.iter().zip(betas) {
        let u_c = (&h_c * (minus_i * g)).exp();
        let u_m = (&h_m * (minus_i * b)).exp();
        psi = u_m * (u_c * psi);
    }
    psi.iter().copied().collect()
}

pub fn dense_expectation(graph: &Graph, amps: &[Complex64]) -> f64 {
    brute_force_cuts(graph).iter().zip(amps).map(|(c, a)| c * a.norm_sqr()).sum()
}

/// Largest amplitude difference after removing the global phase that best
/// aligns `a` with `b`.
pub fn max_diff_up_to_phase(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    a.iter().zip(b).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
}

/// Central differences of `⟨H_C⟩` with step `h`.
pub fn fd_gradient(ctx: &mut QaoaContext, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|k| {
            let mut up = x.to_vec();
            let mut down = x.to_vec();
            up[k] += h;
            down[k] -= h;
            (ctx.expectation(&up) - ctx.expectation(&down)) / (2.0 * h)
        })
        .collect()
}

/// Central differences of any objective value.
pub fn fd_objective_gradient<O: qaoa_landscape::optimizer::Objective>(obj: &mut O, x: &[f64], h: f64) -> Vec<f64> {
    let mut scratch = vec![0.0; x.len()];
    (0..x.len())
        .map(|k| {
            let mut up = x.to_vec();
            let mut down = x.to_vec();
            up[k] += h;
            down[k] -= h;
            (obj.evaluate(&up, &mut scratch) - obj.evaluate(&down, &mut scratch)) / (2.0 * h)
        })
        .collect()
}
