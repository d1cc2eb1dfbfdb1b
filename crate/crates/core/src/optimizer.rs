//! Deterministic full-memory BFGS with a strong Wolfe line search.
//!
//! The line search is the bracketing/zoom scheme of Nocedal & Wright
//! (Algorithms 3.5 and 3.6) with safeguarded cubic interpolation. All
//! arithmetic is sequential, so a given start always produces the same
//! endpoint bit for bit on a fixed platform.

use crate::error::{Error, Result};

/// A differentiable function on `R^d`.
///
/// `evaluate` writes the gradient into `grad` and returns the value. It takes
/// `&mut self` so implementations can keep scratch buffers.
pub trait Objective {
    fn dim(&self) -> usize;

    fn evaluate(&mut self, x: &[f64], grad: &mut [f64]) -> f64;

    /// Approximation ratio attained at an objective value, when the objective
    /// has one (QAOA does; synthetic landscapes do not).
    fn approx_ratio(&self, _value: f64) -> Option<f64> {
        None
    }
}

impl<O: Objective + ?Sized> Objective for &mut O {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn evaluate(&mut self, x: &[f64], grad: &mut [f64]) -> f64 {
        (**self).evaluate(x, grad)
    }

    fn approx_ratio(&self, value: f64) -> Option<f64> {
        (**self).approx_ratio(value)
    }
}

/// BFGS settings.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BfgsConfig {
    /// Converged once the gradient infinity-norm drops below this.
    pub grad_tol: f64,
    pub max_iterations: usize,
    /// Sufficient-decrease constant.
    pub c1: f64,
    /// Curvature constant.
    pub c2: f64,
    /// Trial evaluations allowed per line search.
    pub max_line_search: usize,
    /// Length of the first trial step while the inverse Hessian is still the
    /// unscaled identity.
    pub initial_step: f64,
    /// Relative rounding allowance on objective values. Sufficient decrease
    /// is tested as `f(α) ≤ f(0) + c1 α f'(0) + value_noise (1 + |f(0)|)`, so
    /// steps whose decrease is below floating-point resolution are judged by
    /// the curvature condition alone.
    pub value_noise: f64,
}

impl Default for BfgsConfig {
    fn default() -> Self {
        Self {
            grad_tol: 1e-8,
            max_iterations: 1000,
            c1: 1e-4,
            c2: 0.9,
            max_line_search: 60,
            initial_step: 0.1,
            value_noise: 1e-12,
        }
    }
}

/// Endpoint of one descent.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalMinimum {
    pub point: Vec<f64>,
    pub value: f64,
    /// `-value / optimum` for QAOA objectives.
    pub approx_ratio: Option<f64>,
    /// Infinity-norm of the gradient at `point`.
    pub grad_norm: f64,
    pub start: Vec<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Euclidean distance between two flat angle vectors, with no periodic wrap.
pub fn distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
}

/// `‖a − b‖ < eps`.
pub fn same_minimum(a: &[f64], b: &[f64], eps: f64) -> Result<bool> {
    Ok(distance(a, b)? < eps)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

struct Counted<'a, O: ?Sized> {
    objective: &'a mut O,
    evaluations: usize,
}

impl<O: Objective + ?Sized> Counted<'_, O> {
    fn eval(&mut self, x: &[f64], grad: &mut [f64]) -> Result<f64> {
        self.evaluations += 1;
        let f = self.objective.evaluate(x, grad);
        if !f.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFinite { point: x.to_vec() });
        }
        Ok(f)
    }
}

/// A trial point along the search line.
#[derive(Clone)]
struct Trial {
    alpha: f64,
    f: f64,
    slope: f64,
    x: Vec<f64>,
    g: Vec<f64>,
}

struct LineSearch<'a> {
    x0: &'a [f64],
    dir: &'a [f64],
    f0: f64,
    slope0: f64,
    c1: f64,
    c2: f64,
    noise: f64,
    budget: usize,
}

impl LineSearch<'_> {
    fn probe<O: Objective + ?Sized>(&mut self, obj: &mut Counted<'_, O>, alpha: f64) -> Result<Trial> {
        self.budget = self.budget.saturating_sub(1);
        let x: Vec<f64> = self.x0.iter().zip(self.dir).map(|(x, d)| x + alpha * d).collect();
        let mut g = vec![0.0; x.len()];
        let f = obj.eval(&x, &mut g)?;
        let slope = dot(&g, self.dir);
        Ok(Trial { alpha, f, slope, x, g })
    }

    fn armijo(&self, t: &Trial) -> bool {
        t.f <= self.f0 + self.c1 * t.alpha * self.slope0 + self.noise
    }

    fn curvature(&self, t: &Trial) -> bool {
        t.slope.abs() <= -self.c2 * self.slope0
    }

    /// Returns a strong Wolfe point, or failing that the best trial that
    /// still satisfies sufficient decrease, or `None`.
    fn run<O: Objective + ?Sized>(
        &mut self,
        obj: &mut Counted<'_, O>,
        alpha_init: f64,
    ) -> Result<Option<Trial>> {
        let mut prev = Trial {
            alpha: 0.0,
            f: self.f0,
            slope: self.slope0,
            x: self.x0.to_vec(),
            g: Vec::new(),
        };
        let mut alpha = alpha_init;
        let mut first = true;
        while self.budget > 0 {
            let t = self.probe(obj, alpha)?;
            if !self.armijo(&t) || (!first && t.f > prev.f + self.noise) {
                return self.zoom(obj, prev, t);
            }
            if self.curvature(&t) {
                return Ok(Some(t));
            }
            if t.slope >= 0.0 {
                return self.zoom(obj, t, prev);
            }
            first = false;
            alpha *= 2.0;
            prev = t;
        }
        Ok((prev.alpha > 0.0).then_some(prev))
    }

    fn zoom<O: Objective + ?Sized>(
        &mut self,
        obj: &mut Counted<'_, O>,
        mut lo: Trial,
        mut hi: Trial,
    ) -> Result<Option<Trial>> {
        while self.budget > 0 {
            let width = (hi.alpha - lo.alpha).abs();
            if width <= f64::EPSILON * lo.alpha.abs().max(hi.alpha.abs()).max(1e-300) {
                break;
            }
            let alpha = interpolate(&lo, &hi);
            let t = self.probe(obj, alpha)?;
            if !self.armijo(&t) || t.f > lo.f + self.noise {
                hi = t;
            } else {
                if self.curvature(&t) {
                    return Ok(Some(t));
                }
                if t.slope * (hi.alpha - lo.alpha) >= 0.0 {
                    hi = lo;
                }
                lo = t;
            }
        }
        Ok((lo.alpha > 0.0).then_some(lo))
    }
}

/// Minimiser of the cubic through both bracket ends, kept at least a tenth of
/// the bracket away from either end; bisection when the cubic degenerates.
fn interpolate(lo: &Trial, hi: &Trial) -> f64 {
    let (a, b) = (lo.alpha, hi.alpha);
    let (left, right) = (a.min(b), a.max(b));
    let margin = 0.1 * (right - left);
    let d1 = lo.slope + hi.slope - 3.0 * (lo.f - hi.f) / (a - b);
    let disc = d1 * d1 - lo.slope * hi.slope;
    let mid = 0.5 * (a + b);
    if !(disc >= 0.0) {
        return mid;
    }
    let d2 = (b - a).signum() * disc.sqrt();
    let denom = hi.slope - lo.slope + 2.0 * d2;
    if denom == 0.0 {
        return mid;
    }
    let c = b - (b - a) * (hi.slope + d2 - d1) / denom;
    if !c.is_finite() {
        return mid;
    }
    c.clamp(left + margin, right - margin)
}

/// Runs BFGS from `start`.
///
/// Stops when the gradient infinity-norm falls below `cfg.grad_tol`
/// (`converged = true`), when the iteration cap is hit, or when no step with
/// sufficient decrease exists even from a reset inverse Hessian
/// (`converged = false` in both of the latter cases). Non-finite values or
/// gradients abort with [`Error::NonFinite`].
pub fn minimize<O: Objective + ?Sized>(
    objective: &mut O,
    start: &[f64],
    cfg: &BfgsConfig,
) -> Result<LocalMinimum> {
    minimize_observed(objective, start, cfg, |_, _| {})
}

/// [`minimize`], calling `on_iterate(x, f)` for the start and for every
/// accepted iterate.
pub fn minimize_observed<O, F>(
    objective: &mut O,
    start: &[f64],
    cfg: &BfgsConfig,
    mut on_iterate: F,
) -> Result<LocalMinimum>
where
    O: Objective + ?Sized,
    F: FnMut(&[f64], f64),
{
    let d = objective.dim();
    if start.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: start.len() });
    }
    let mut obj = Counted { objective, evaluations: 0 };
    let mut x = start.to_vec();
    let mut g = vec![0.0; d];
    let mut f = obj.eval(&x, &mut g)?;
    on_iterate(&x, f);
    let mut h = identity(d);
    let mut h_is_identity = true;
    let mut iterations = 0;

    let converged = loop {
        if inf_norm(&g) < cfg.grad_tol {
            break true;
        }
        if iterations >= cfg.max_iterations {
            break false;
        }
        let mut dir = mat_vec(&h, &g);
        dir.iter_mut().for_each(|v| *v = -*v);
        let mut slope = dot(&g, &dir);
        if !(slope < 0.0) {
            // lost positive definiteness
            h = identity(d);
            h_is_identity = true;
            dir = g.iter().map(|v| -v).collect();
            slope = dot(&g, &dir);
        }
        let alpha_init = if h_is_identity {
            (cfg.initial_step / dot(&dir, &dir).sqrt()).min(1.0)
        } else {
            1.0
        };
        let mut ls = LineSearch {
            x0: &x,
            dir: &dir,
            f0: f,
            slope0: slope,
            c1: cfg.c1,
            c2: cfg.c2,
            noise: cfg.value_noise * (1.0 + f.abs()),
            budget: cfg.max_line_search,
        };
        let step = match ls.run(&mut obj, alpha_init)? {
            Some(t) => t,
            None if !h_is_identity => {
                h = identity(d);
                h_is_identity = true;
                continue;
            }
            None => break false,
        };
        iterations += 1;

        let s: Vec<f64> = step.x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = step.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        x = step.x;
        g = step.g;
        f = step.f;
        on_iterate(&x, f);
        if sy > 0.0 {
            if h_is_identity {
                let scale = sy / dot(&y, &y);
                h.iter_mut().for_each(|v| *v *= scale);
            }
            bfgs_update(&mut h, &s, &y, sy);
            h_is_identity = false;
        }
    };

    Ok(LocalMinimum {
        approx_ratio: obj.objective.approx_ratio(f),
        point: x,
        value: f,
        grad_norm: inf_norm(&g),
        start: start.to_vec(),
        iterations,
        evaluations: obj.evaluations,
        converged,
    })
}

/// Row-major `d × d` identity.
fn identity(d: usize) -> Vec<f64> {
    let mut m = vec![0.0; d * d];
    for i in 0..d {
        m[i * d + i] = 1.0;
    }
    m
}

fn mat_vec(m: &[f64], v: &[f64]) -> Vec<f64> {
    m.chunks_exact(v.len()).map(|row| dot(row, v)).collect()
}

/// `H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ`, `ρ = 1 / yᵀs`, expanded as
/// `H − ρ (s (Hy)ᵀ + (Hy) sᵀ) + (ρ² yᵀHy + ρ) s sᵀ` using the symmetry of `H`.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64) {
    let d = s.len();
    let rho = 1.0 / sy;
    let hy = mat_vec(h, y);
    let yhy = dot(y, &hy);
    let k = rho * rho * yhy + rho;
    for i in 0..d {
        for j in 0..d {
            h[i * d + j] += k * s[i] * s[j] - rho * (s[i] * hy[j] + hy[i] * s[j]);
        }
    }
}
