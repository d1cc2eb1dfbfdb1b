//! Landscapes with known minima, used to validate the basin estimator.

use crate::optimizer::Objective;

/// `‖x − c‖²`: a single basin covering all of space.
#[derive(Clone, Debug)]
pub struct Bowl {
    center: Vec<f64>,
}

impl Bowl {
    pub fn new(center: Vec<f64>) -> Self {
        Self { center }
    }
}

impl Objective for Bowl {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn evaluate(&mut self, x: &[f64], grad: &mut [f64]) -> f64 {
        let mut f = 0.0;
        for ((g, xi), c) in grad.iter_mut().zip(x).zip(&self.center) {
            let r = xi - c;
            f += r * r;
            *g = 2.0 * r;
        }
        f
    }
}

/// `Σ_i (1 − cos(k x_i))`: minima on the lattice `(2π/k) Z^d`, so exactly
/// `k^d` of them in `[0, 2π)^d`, each with a cubic basin of side `2π/k`.
#[derive(Clone, Debug)]
pub struct CosineLattice {
    d: usize,
    k: f64,
}

impl CosineLattice {
    pub fn new(d: usize, k: u32) -> Self {
        Self { d, k: k as f64 }
    }

    /// `k^d`.
    pub fn num_minima(&self) -> f64 {
        self.k.powi(self.d as i32)
    }
}

impl Objective for CosineLattice {
    fn dim(&self) -> usize {
        self.d
    }

    fn evaluate(&mut self, x: &[f64], grad: &mut [f64]) -> f64 {
        let mut f = 0.0;
        for (g, xi) in grad.iter_mut().zip(x) {
            let (s, c) = (self.k * xi).sin_cos();
            f += 1.0 - c;
            *g = self.k * s;
        }
        f
    }
}
