//! Exact state-vector simulation of p-round QAOA for MaxCut.
//!
//! The circuit is
//!
//! ```text
//! |ψ(γ, β)⟩ = e^{-iβ_p H_M} e^{-iγ_p H_C} ⋯ e^{-iβ_1 H_M} e^{-iγ_1 H_C} |+⟩^n
//! ```
//!
//! with `H_C` the diagonal cut-value Hamiltonian held in a [`CostTable`] and
//! `H_M = Σ_i X_i` the transverse-field mixer. The mixer is never built as a
//! matrix: it is applied as `n` single-qubit rotations, each one pass over the
//! amplitudes.
//!
//! Gradients come from a single adjoint (reverse) sweep: the forward state and
//! the co-state `H_C|ψ⟩` are un-evolved gate by gate, and each angle's
//! derivative is read off as `2 Im⟨λ|G|φ⟩` where `G` is that gate's generator.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graphs::CostTable;
use crate::optimizer::Objective;

/// QAOA angles stored flat as `(γ_1..γ_p, β_1..β_p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamVector {
    p: usize,
    flat: Vec<f64>,
}

impl ParamVector {
    pub fn new(gammas: &[f64], betas: &[f64]) -> Result<Self> {
        if gammas.len() != betas.len() {
            return Err(Error::DimensionMismatch { expected: gammas.len(), got: betas.len() });
        }
        let flat: Vec<f64> = gammas.iter().chain(betas).copied().collect();
        Self::from_flat(flat)
    }

    /// Wraps a flat vector of even length `2p`, `p ≥ 1`.
    pub fn from_flat(flat: Vec<f64>) -> Result<Self> {
        if flat.is_empty() || !flat.len().is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "expected an even, non-zero number of angles, got {}",
                flat.len()
            )));
        }
        if let Some(bad) = flat.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidParams(format!("angle {bad} is not finite")));
        }
        Ok(Self { p: flat.len() / 2, flat })
    }

    pub fn zeros(p: usize) -> Result<Self> {
        Self::from_flat(vec![0.0; 2 * p])
    }

    /// Number of rounds.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Landscape dimension, `2p`.
    pub fn dim(&self) -> usize {
        self.flat.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.flat[..self.p]
    }

    pub fn betas(&self) -> &[f64] {
        &self.flat[self.p..]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.flat
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.flat
    }
}

/// `2^n` complex amplitudes; index `x` follows the crate bitstring convention.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|x⟩`.
    pub fn basis(n: usize, x: usize) -> Result<Self> {
        check_cap(n)?;
        if x >= 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, got: x });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[x] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: len.next_power_of_two(), got: len });
        }
        Ok(Self { n: len.trailing_zeros() as usize, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn reset_plus(&mut self) {
        let a = Complex64::new((self.amps.len() as f64).sqrt().recip(), 0.0);
        self.amps.fill(a);
    }
}

/// Largest qubit count a state vector is allocated for (16 GiB of amplitudes).
pub const STATE_CAP: usize = 30;

fn check_cap(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > STATE_CAP {
        return Err(Error::TooManyQubits { n, cap: STATE_CAP });
    }
    Ok(())
}

/// The uniform superposition `|+⟩^n`, the ground state of `-H_M`.
pub fn plus_state(n: usize) -> Result<StateVector> {
    check_cap(n)?;
    let mut s = StateVector { n, amps: vec![Complex64::new(0.0, 0.0); 1 << n] };
    s.reset_plus();
    Ok(s)
}

fn check_table(state: &StateVector, table: &CostTable) -> Result<()> {
    if state.n != table.n() {
        return Err(Error::DimensionMismatch { expected: table.n(), got: state.n });
    }
    Ok(())
}

/// Multiplies amplitude `x` by `e^{-iγ C(x)}`.
pub fn apply_phase(state: &mut StateVector, table: &CostTable, gamma: f64) -> Result<()> {
    check_table(state, table)?;
    let factors = phase_factors(table.max_level(), gamma);
    phase_kernel(&mut state.amps, table.values(), &factors);
    Ok(())
}

/// Applies `e^{-iβ Σ_i X_i}` as `n` single-qubit rotations
/// `[[cos β, -i sin β], [-i sin β, cos β]]`.
pub fn apply_mixer(state: &mut StateVector, beta: f64) {
    mixer_kernel(&mut state.amps, state.n, beta);
}

/// Runs the full circuit from `|+⟩^n`, `γ_1` first.
pub fn evolve(table: &CostTable, params: &ParamVector) -> Result<StateVector> {
    let mut state = plus_state(table.n())?;
    for (&g, &b) in params.gammas().iter().zip(params.betas()) {
        apply_phase(&mut state, table, g)?;
        apply_mixer(&mut state, b);
    }
    Ok(state)
}

/// `⟨ψ|H_C|ψ⟩ = Σ_x |ψ_x|² C(x)`.
pub fn expectation(state: &StateVector, table: &CostTable) -> Result<f64> {
    check_table(state, table)?;
    Ok(diag_expectation(&state.amps, table.values()))
}

/// Exact gradient of `⟨H_C⟩` with respect to `(γ_1..γ_p, β_1..β_p)`.
pub fn gradient(table: &CostTable, params: &ParamVector) -> Result<Vec<f64>> {
    let mut ctx = QaoaContext::new(table.clone().into(), params.p())?;
    let mut grad = vec![0.0; params.dim()];
    ctx.expectation_and_gradient(params.as_slice(), &mut grad);
    Ok(grad)
}

/// `⟨H_C⟩ / max_x C(x)`.
pub fn approx_ratio(table: &CostTable, params: &ParamVector) -> Result<f64> {
    if table.optimum() <= 0.0 {
        return Err(Error::ZeroOptimum);
    }
    let state = evolve(table, params)?;
    Ok(expectation(&state, table)? / table.optimum())
}

fn phase_factors(max_level: usize, gamma: f64) -> Vec<Complex64> {
    (0..=max_level)
        .map(|k| Complex64::from_polar(1.0, -gamma * k as f64))
        .collect()
}

#[inline]
fn phase_kernel(amps: &mut [Complex64], values: &[f64], factors: &[Complex64]) {
    for (a, &v) in amps.iter_mut().zip(values) {
        *a *= factors[v as usize];
    }
}

#[inline]
fn mixer_kernel(amps: &mut [Complex64], n: usize, beta: f64) {
    let (s, c) = beta.sin_cos();
    for q in 0..n {
        let stride = 1usize << q;
        for block in amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                // c·x - i s·y and -i s·x + c·y
                *a = Complex64::new(c * x.re + s * y.im, c * x.im - s * y.re);
                *b = Complex64::new(c * y.re + s * x.im, c * y.im - s * x.re);
            }
        }
    }
}

#[inline]
fn diag_expectation(amps: &[Complex64], values: &[f64]) -> f64 {
    amps.iter().zip(values).map(|(a, &v)| a.norm_sqr() * v).sum()
}

/// `Im⟨λ|H_C|φ⟩`.
#[inline]
fn im_diag_overlap(lambda: &[Complex64], phi: &[Complex64], values: &[f64]) -> f64 {
    lambda
        .iter()
        .zip(phi)
        .zip(values)
        .map(|((l, f), &v)| v * (l.re * f.im - l.im * f.re))
        .sum()
}

/// `Im⟨λ|Σ_i X_i|φ⟩`.
#[inline]
fn im_mixer_overlap(lambda: &[Complex64], phi: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for q in 0..n {
        let stride = 1usize << q;
        for (lb, fb) in lambda.chunks_exact(2 * stride).zip(phi.chunks_exact(2 * stride)) {
            let (l0, l1) = lb.split_at(stride);
            let (f0, f1) = fb.split_at(stride);
            for i in 0..stride {
                acc += l0[i].re * f1[i].im - l0[i].im * f1[i].re;
                acc += l1[i].re * f0[i].im - l1[i].im * f0[i].re;
            }
        }
    }
    acc
}

/// Reusable simulation workspace for one cost table and round count.
///
/// A context owns its buffers and is single-threaded; clone it (the table is
/// shared) to evaluate on several threads.
#[derive(Clone, Debug)]
pub struct QaoaContext {
    table: Arc<CostTable>,
    p: usize,
    phi: Vec<Complex64>,
    lambda: Vec<Complex64>,
}

impl QaoaContext {
    pub fn new(table: Arc<CostTable>, p: usize) -> Result<Self> {
        check_cap(table.n())?;
        if p == 0 {
            return Err(Error::InvalidParams("p must be at least 1".into()));
        }
        let len = table.len();
        Ok(Self {
            table,
            p,
            phi: vec![Complex64::new(0.0, 0.0); len],
            lambda: vec![Complex64::new(0.0, 0.0); len],
        })
    }

    pub fn table(&self) -> &CostTable {
        &self.table
    }

    pub fn p(&self) -> usize {
        self.p
    }

    fn forward(&mut self, flat: &[f64]) {
        let n = self.table.n();
        let level = self.table.max_level();
        let values = self.table.values();
        let a = Complex64::new((self.phi.len() as f64).sqrt().recip(), 0.0);
        self.phi.fill(a);
        let (gammas, betas) = flat.split_at(self.p);
        for (&g, &b) in gammas.iter().zip(betas) {
            phase_kernel(&mut self.phi, values, &phase_factors(level, g));
            mixer_kernel(&mut self.phi, n, b);
        }
    }

    /// `⟨H_C⟩` at `flat = (γ.., β..)`.
    pub fn expectation(&mut self, flat: &[f64]) -> f64 {
        debug_assert_eq!(flat.len(), 2 * self.p);
        self.forward(flat);
        diag_expectation(&self.phi, self.table.values())
    }

    /// `⟨H_C⟩` and its gradient, written into `grad`, via one adjoint sweep.
    pub fn expectation_and_gradient(&mut self, flat: &[f64], grad: &mut [f64]) -> f64 {
        debug_assert_eq!(flat.len(), 2 * self.p);
        debug_assert_eq!(grad.len(), 2 * self.p);
        self.forward(flat);
        let table = Arc::clone(&self.table);
        let values = table.values();
        let n = table.n();
        let level = table.max_level();
        let value = diag_expectation(&self.phi, values);

        for ((l, f), &v) in self.lambda.iter_mut().zip(&self.phi).zip(values) {
            *l = f * v;
        }
        let p = self.p;
        for layer in (0..p).rev() {
            let (gamma, beta) = (flat[layer], flat[p + layer]);
            grad[p + layer] = 2.0 * im_mixer_overlap(&self.lambda, &self.phi, n);
            mixer_kernel(&mut self.phi, n, -beta);
            mixer_kernel(&mut self.lambda, n, -beta);
            grad[layer] = 2.0 * im_diag_overlap(&self.lambda, &self.phi, values);
            if layer > 0 {
                let undo = phase_factors(level, -gamma);
                phase_kernel(&mut self.phi, values, &undo);
                phase_kernel(&mut self.lambda, values, &undo);
            }
        }
        value
    }

    /// Final state of the circuit at `params`.
    pub fn state(&mut self, params: &ParamVector) -> Result<StateVector> {
        if params.p() != self.p {
            return Err(Error::DimensionMismatch { expected: 2 * self.p, got: params.dim() });
        }
        self.forward(params.as_slice());
        StateVector::from_amplitudes(self.phi.clone())
    }
}

/// Descent objective: the negated QAOA expectation, so local minima of this
/// function are the maximisers of `⟨H_C⟩` that gradient descent lands on.
#[derive(Clone, Debug)]
pub struct QaoaObjective {
    ctx: QaoaContext,
}

impl QaoaObjective {
    pub fn new(table: Arc<CostTable>, p: usize) -> Result<Self> {
        if table.optimum() <= 0.0 {
            return Err(Error::ZeroOptimum);
        }
        Ok(Self { ctx: QaoaContext::new(table, p)? })
    }

    pub fn context(&mut self) -> &mut QaoaContext {
        &mut self.ctx
    }

    pub fn optimum(&self) -> f64 {
        self.ctx.table.optimum()
    }
}

impl Objective for QaoaObjective {
    fn dim(&self) -> usize {
        2 * self.ctx.p
    }

    fn evaluate(&mut self, x: &[f64], grad: &mut [f64]) -> f64 {
        let v = self.ctx.expectation_and_gradient(x, grad);
        grad.iter_mut().for_each(|g| *g = -*g);
        -v
    }

    fn approx_ratio(&self, value: f64) -> Option<f64> {
        Some(-value / self.ctx.table.optimum())
    }
}
