//! Quality and quantity of local minima on a box-shaped parameter landscape.
//!
//! *Quality*: descend from uniformly sampled starts and count how often the
//! endpoint clears an approximation-ratio cutoff.
//!
//! *Quantity*: for each descent endpoint, bisect along `d` random orthonormal
//! directions for the distance at which descent stops returning to that
//! endpoint. The geometric mean of those distances is taken as the radius of
//! a `d`-ball modelling the basin, and the number of minima is estimated as
//! the landscape volume over the mean ball volume.
//!
//! Everything here is generic over [`Objective`], so the same code runs on
//! QAOA landscapes and on synthetic landscapes with known minima counts.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optimizer::{minimize, same_minimum, BfgsConfig, LocalMinimum, Objective};
use crate::rng::{self, derive_seed};

/// Axis-aligned sampling box.
#[derive(Clone, Debug, PartialEq)]
pub struct LandscapeSpec {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl LandscapeSpec {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { expected: lower.len().max(1), got: upper.len() });
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(u > l) || !l.is_finite() || !u.is_finite()) {
            return Err(Error::Config("every range needs finite bounds with upper > lower".into()));
        }
        Ok(Self { lower, upper })
    }

    /// `[0, 2π)^d`, one full period per angle.
    pub fn periodic(d: usize) -> Result<Self> {
        Self::new(vec![0.0; d], vec![TAU; d])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Product of the range widths.
    pub fn total_volume(&self) -> f64 {
        self.log_volume().exp()
    }

    pub fn log_volume(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(l, u)| (u - l).ln()).sum()
    }
}

/// One independent uniform draw per coordinate.
pub fn sample_uniform<R: Rng + ?Sized>(spec: &LandscapeSpec, rng: &mut R) -> Vec<f64> {
    spec.lower
        .iter()
        .zip(&spec.upper)
        .map(|(&l, &u)| rng.random_range(l..u))
        .collect()
}

/// `d` orthonormal vectors from Gram–Schmidt on a standard-normal matrix.
pub fn random_orthonormal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Vec<f64>> {
    random_frame(d, d, rng)
}

/// `count ≤ d` orthonormal vectors in `R^d`.
pub fn random_frame<R: Rng + ?Sized>(d: usize, count: usize, rng: &mut R) -> Vec<Vec<f64>> {
    assert!(count <= d, "cannot fit {count} orthonormal vectors in dimension {d}");
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(count);
    while frame.len() < count {
        let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for u in &frame {
                let proj: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(u).for_each(|(x, a)| *x -= proj * a);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            // rank deficient draw; resample
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        frame.push(v);
    }
    frame
}

/// Volume of the unit ball in `d` dimensions, `π^{d/2} / Γ(d/2 + 1)`,
/// by the recurrence `V_d = 2π/d · V_{d−2}`.
pub fn unit_ball_volume(d: usize) -> f64 {
    log_unit_ball_volume(d).exp()
}

fn log_unit_ball_volume(d: usize) -> f64 {
    let (mut k, mut log_v) = if d.is_multiple_of(2) { (0, 0.0) } else { (1, 2f64.ln()) };
    while k < d {
        k += 2;
        log_v += (2.0 * PI / k as f64).ln();
    }
    log_v
}

/// Volume of a `d`-ball of radius `r`.
pub fn ball_volume(d: usize, r: f64) -> f64 {
    log_ball_volume(d, r).exp()
}

pub fn log_ball_volume(d: usize, r: f64) -> f64 {
    log_unit_ball_volume(d) + d as f64 * r.ln()
}

pub fn geometric_mean(values: &[f64]) -> f64 {
    (values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64).exp()
}

/// Knobs shared by every basin probe.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ProbeConfig {
    /// Bisection stops once the bracket is at most this wide (radians).
    pub precision: f64,
    /// Two endpoints are the same minimum when closer than this.
    pub eps: f64,
    /// Upper end of the bisection bracket.
    pub max_radius: f64,
    /// Probe directions per minimum; `None` means the full dimension `d`.
    pub num_vectors: Option<usize>,
    pub bfgs: BfgsConfig,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { precision: 1e-3, eps: 1e-3, max_radius: TAU, num_vectors: None, bfgs: BfgsConfig::default() }
    }
}

impl ProbeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.precision > 0.0) || !(self.eps > 0.0) || !(self.max_radius > 0.0) {
            return Err(Error::Config("precision, eps and max_radius must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of a quality run.
#[derive(Clone, Debug, PartialEq)]
pub struct QualityOutcome {
    pub fraction: f64,
    pub endpoints: Vec<LocalMinimum>,
    pub nonconverged: usize,
    /// Set when no descent converged, in which case `fraction` is 0.
    pub all_failed: bool,
}

/// Does `m` count as a success at `cutoff`? Non-converged runs never do.
pub fn meets_cutoff(m: &LocalMinimum, cutoff: f64) -> bool {
    m.converged && m.approx_ratio.is_some_and(|r| r >= cutoff)
}

/// Descends from `num_samples` uniform starts. Start `i` is drawn from the
/// stream `derive_seed(seed, [i])`, so the endpoints do not depend on how the
/// work is scheduled.
pub fn descend_from_samples<O>(
    objective: &O,
    spec: &LandscapeSpec,
    num_samples: usize,
    seed: u64,
    bfgs: &BfgsConfig,
) -> Result<Vec<LocalMinimum>>
where
    O: Objective + Clone + Send + Sync,
{
    check_dim(objective, spec)?;
    (0..num_samples)
        .into_par_iter()
        .map(|i| {
            let mut local = objective.clone();
            let mut stream = rng::stream(derive_seed(seed, &[i as u64]));
            let start = sample_uniform(spec, &mut stream);
            minimize(&mut local, &start, bfgs)
        })
        .collect()
}

/// Fraction of uniform starts whose converged endpoint reaches `cutoff`.
pub fn quality_fraction<O>(
    objective: &O,
    spec: &LandscapeSpec,
    num_samples: usize,
    cutoff: f64,
    seed: u64,
    bfgs: &BfgsConfig,
) -> Result<QualityOutcome>
where
    O: Objective + Clone + Send + Sync,
{
    if num_samples == 0 {
        return Err(Error::Config("num_samples must be at least 1".into()));
    }
    let endpoints = descend_from_samples(objective, spec, num_samples, seed, bfgs)?;
    Ok(summarize_quality(endpoints, cutoff))
}

pub fn summarize_quality(endpoints: Vec<LocalMinimum>, cutoff: f64) -> QualityOutcome {
    let hits = endpoints.iter().filter(|m| meets_cutoff(m, cutoff)).count();
    let nonconverged = endpoints.iter().filter(|m| !m.converged).count();
    let all_failed = nonconverged == endpoints.len();
    if all_failed {
        log::warn!("none of {} descents converged", endpoints.len());
    }
    QualityOutcome {
        fraction: hits as f64 / endpoints.len().max(1) as f64,
        endpoints,
        nonconverged,
        all_failed,
    }
}

/// Result of bisecting along one direction.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusProbe {
    pub radius: f64,
    /// Probe descents run.
    pub descents: usize,
    /// Probe descents that did not converge (counted as a different minimum).
    pub nonconverged: usize,
}

/// Distance along `direction` from `minimum` to its basin boundary.
///
/// Bisects `[0, max_radius]`: a descent from `minimum + radius · direction`
/// that lands within `eps` of the minimum raises the lower end, anything else
/// lowers the upper end. Returns the last midpoint once the bracket is no
/// wider than `precision`, or `max_radius` if every probe came back.
pub fn basin_radius<O: Objective + ?Sized>(
    objective: &mut O,
    minimum: &LocalMinimum,
    direction: &[f64],
    cfg: &ProbeConfig,
) -> Result<RadiusProbe> {
    cfg.validate()?;
    if !minimum.converged {
        return Err(Error::Config("basin probes need a converged minimum".into()));
    }
    if direction.len() != minimum.point.len() {
        return Err(Error::DimensionMismatch { expected: minimum.point.len(), got: direction.len() });
    }
    let (mut lo, mut hi) = (0.0, cfg.max_radius);
    let mut radius = cfg.max_radius;
    let mut descents = 0;
    let mut nonconverged = 0;
    let mut left_basin = false;
    let mut start = vec![0.0; direction.len()];
    while hi - lo > cfg.precision {
        radius = 0.5 * (lo + hi);
        for ((s, x), v) in start.iter_mut().zip(&minimum.point).zip(direction) {
            *s = x + radius * v;
        }
        let end = minimize(objective, &start, &cfg.bfgs)?;
        descents += 1;
        if !end.converged {
            nonconverged += 1;
        }
        if end.converged && same_minimum(&end.point, &minimum.point, cfg.eps)? {
            lo = radius;
        } else {
            hi = radius;
            left_basin = true;
        }
    }
    if !left_basin {
        radius = cfg.max_radius;
    }
    Ok(RadiusProbe { radius, descents, nonconverged })
}

/// A minimum's basin modelled as a ball.
#[derive(Clone, Debug, PartialEq)]
pub struct BasinEstimate {
    pub minimum: LocalMinimum,
    /// One radius per probe direction.
    pub radii: Vec<f64>,
    /// Geometric mean of `radii`.
    pub mean_radius: f64,
    /// `d`-ball volume at `mean_radius`.
    pub volume: f64,
    pub log_volume: f64,
    pub descents: usize,
    pub nonconverged_probes: usize,
}

impl BasinEstimate {
    /// Builds the ball model from already measured radii.
    pub fn from_radii(minimum: LocalMinimum, radii: Vec<f64>, d: usize) -> Result<Self> {
        if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::Config("radii must be positive and non-empty".into()));
        }
        let mean_radius = geometric_mean(&radii);
        let log_volume = log_ball_volume(d, mean_radius);
        Ok(Self {
            minimum,
            radii,
            mean_radius,
            volume: log_volume.exp(),
            log_volume,
            descents: 0,
            nonconverged_probes: 0,
        })
    }
}

/// Probes a fresh random orthonormal frame around `minimum`.
pub fn estimate_basin<O, R>(
    objective: &mut O,
    spec: &LandscapeSpec,
    minimum: &LocalMinimum,
    rng: &mut R,
    cfg: &ProbeConfig,
) -> Result<BasinEstimate>
where
    O: Objective + ?Sized,
    R: Rng + ?Sized,
{
    check_dim(&*objective, spec)?;
    let d = spec.dim();
    let count = cfg.num_vectors.unwrap_or(d);
    if count == 0 || count > d {
        return Err(Error::Config(format!("cannot probe {count} orthonormal directions in {d} dimensions")));
    }
    let frame = random_frame(d, count, rng);
    let mut radii = Vec::with_capacity(count);
    let (mut descents, mut nonconverged) = (0, 0);
    for v in &frame {
        let probe = basin_radius(objective, minimum, v, cfg)?;
        radii.push(probe.radius);
        descents += probe.descents;
        nonconverged += probe.nonconverged;
    }
    let mut est = BasinEstimate::from_radii(minimum.clone(), radii, d)?;
    est.descents = descents;
    est.nonconverged_probes = nonconverged;
    Ok(est)
}

/// `V / mean(volumes)` clamped below at 1, computed in log space.
pub fn aggregate_num_minima(spec: &LandscapeSpec, basins: &[BasinEstimate]) -> Result<f64> {
    Ok(raw_num_minima(spec, basins)?.max(1.0))
}

fn raw_num_minima(spec: &LandscapeSpec, basins: &[BasinEstimate]) -> Result<f64> {
    if basins.is_empty() {
        return Err(Error::NoBasins("no basin estimates to aggregate".into()));
    }
    let top = basins.iter().map(|b| b.log_volume).fold(f64::NEG_INFINITY, f64::max);
    let mean = basins.iter().map(|b| (b.log_volume - top).exp()).sum::<f64>() / basins.len() as f64;
    Ok((spec.log_volume() - top - mean.ln()).exp())
}

/// Everything produced by [`estimate_num_minima`].
#[derive(Clone, Debug, PartialEq)]
pub struct MinimaEstimate {
    /// Clamped estimate, at least 1.
    pub num_minima: f64,
    /// `V / mean(volumes)` before clamping.
    pub raw_estimate: f64,
    pub basins: Vec<BasinEstimate>,
    /// Sampled descents that did not converge and were not probed.
    pub skipped_nonconverged: usize,
}

/// Uniform start, descent and basin probe for each of `num_samples` samples,
/// then `V / mean(volumes)`. Sample `i` uses the streams
/// `derive_seed(seed, [i])` for its start and `derive_seed(seed, [i, 1])` for
/// its probe frame.
pub fn estimate_num_minima<O>(
    objective: &O,
    spec: &LandscapeSpec,
    num_samples: usize,
    seed: u64,
    cfg: &ProbeConfig,
) -> Result<MinimaEstimate>
where
    O: Objective + Clone + Send + Sync,
{
    if num_samples == 0 {
        return Err(Error::Config("num_samples must be at least 1".into()));
    }
    cfg.validate()?;
    let endpoints = descend_from_samples(objective, spec, num_samples, seed, &cfg.bfgs)?;
    let skipped = endpoints.iter().filter(|m| !m.converged).count();
    let basins: Vec<BasinEstimate> = endpoints
        .par_iter()
        .enumerate()
        .filter(|(_, m)| m.converged)
        .map(|(i, m)| {
            let mut local = objective.clone();
            let mut stream = rng::stream(derive_seed(seed, &[i as u64, 1]));
            estimate_basin(&mut local, spec, m, &mut stream, cfg)
        })
        .collect::<Result<_>>()?;
    if basins.is_empty() {
        return Err(Error::NoBasins(format!("all {num_samples} sampled descents failed to converge")));
    }
    let raw_estimate = raw_num_minima(spec, &basins)?;
    Ok(MinimaEstimate { num_minima: raw_estimate.max(1.0), raw_estimate, basins, skipped_nonconverged: skipped })
}

fn check_dim<O: Objective + ?Sized>(objective: &O, spec: &LandscapeSpec) -> Result<()> {
    if objective.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: objective.dim() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{Bowl, CosineLattice};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn periodic_box() {
        let spec = LandscapeSpec::periodic(4).unwrap();
        assert!((spec.total_volume() - TAU.powi(4)).abs() < 1e-9);
        assert!(LandscapeSpec::new(vec![0.0], vec![0.0]).is_err());
        assert!(LandscapeSpec::new(vec![], vec![]).is_err());
    }

    #[test]
    fn uniform_samples_stay_in_box_and_replay() {
        let spec = LandscapeSpec::periodic(6).unwrap();
        let mut s = rng::stream(5);
        let a = sample_uniform(&spec, &mut s);
        let b = sample_uniform(&spec, &mut s);
        assert_ne!(a, b);
        assert!(a.iter().chain(&b).all(|x| (0.0..TAU).contains(x)));
        let mut t = rng::stream(5);
        assert_eq!(sample_uniform(&spec, &mut t), a);
    }

    #[test]
    fn orthonormal_frames() {
        let mut s = rng::stream(1);
        let one = random_orthonormal(1, &mut s);
        assert!((one[0][0].abs() - 1.0).abs() < 1e-15);
        let frame = random_orthonormal(6, &mut s);
        for i in 0..6 {
            for j in 0..6 {
                let dot: f64 = frame[i].iter().zip(&frame[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 / 3.0 * PI).abs() < 1e-14);
        assert!((ball_volume(2, 2.0) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn geometric_mean_cases() {
        assert!((geometric_mean(&[0.7; 5]) - 0.7).abs() < 1e-15);
        assert!((geometric_mean(&[1.0, 4.0]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn from_radii_matches_hand_arithmetic() {
        let m = fake_minimum(2);
        let est = BasinEstimate::from_radii(m, vec![1.0, 4.0], 2).unwrap();
        assert!((est.mean_radius - 2.0).abs() < 1e-15);
        assert!((est.volume - 4.0 * PI).abs() < 1e-12);
    }

    fn fake_minimum(d: usize) -> LocalMinimum {
        LocalMinimum {
            point: vec![0.0; d],
            value: 0.0,
            approx_ratio: None,
            grad_norm: 0.0,
            start: vec![0.0; d],
            iterations: 0,
            evaluations: 1,
            converged: true,
        }
    }

    #[test]
    fn bowl_radius_is_full_bracket() {
        let mut bowl = Bowl::new(vec![1.0, 2.0]);
        let m = minimize(&mut bowl, &[1.0, 2.0], &BfgsConfig::default()).unwrap();
        let probe = basin_radius(&mut bowl, &m, &[0.6, 0.8], &ProbeConfig::default()).unwrap();
        assert_eq!(probe.radius, TAU);
        // ⌈log2(2π / 1e-3)⌉ bisection steps
        assert_eq!(probe.descents, 13);
    }

    #[test]
    fn cosine_axis_radius() {
        let mut f = CosineLattice::new(2, 2);
        let m = minimize(&mut f, &[PI + 0.1, PI - 0.2], &BfgsConfig::default()).unwrap();
        assert!((m.point[0] - PI).abs() < 1e-6 && (m.point[1] - PI).abs() < 1e-6);
        let cfg = ProbeConfig::default();
        for dir in [[1.0, 0.0], [0.0, -1.0]] {
            let probe = basin_radius(&mut f, &m, &dir, &cfg).unwrap();
            assert!((probe.radius - FRAC_PI_2).abs() <= cfg.precision, "{probe:?}");
        }
    }

    #[test]
    fn probe_requires_converged_minimum() {
        let mut bowl = Bowl::new(vec![0.0]);
        let mut m = fake_minimum(1);
        m.converged = false;
        assert!(basin_radius(&mut bowl, &m, &[1.0], &ProbeConfig::default()).is_err());
    }

    #[test]
    fn quality_with_zero_cutoff_counts_every_converged_run() {
        use crate::graphs::{CostTable, Graph};
        use crate::simulator::QaoaObjective;
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let obj = QaoaObjective::new(CostTable::build(&g).unwrap().into(), 2).unwrap();
        let spec = LandscapeSpec::periodic(4).unwrap();
        let q = quality_fraction(&obj, &spec, 8, 0.0, 3, &BfgsConfig::default()).unwrap();
        assert_eq!(q.nonconverged, 0);
        assert_eq!(q.fraction, 1.0);
        assert!(!q.all_failed);

        // no ratio, no success
        let bowl = Bowl::new(vec![0.5, 0.5]);
        let spec = LandscapeSpec::periodic(2).unwrap();
        let q = quality_fraction(&bowl, &spec, 4, 0.0, 3, &BfgsConfig::default()).unwrap();
        assert_eq!(q.fraction, 0.0);
    }

    #[test]
    fn single_basin_clamps_to_one() {
        let bowl = Bowl::new(vec![PI, PI]);
        let spec = LandscapeSpec::periodic(2).unwrap();
        let est = estimate_num_minima(&bowl, &spec, 4, 9, &ProbeConfig::default()).unwrap();
        assert!(est.raw_estimate < 1.0);
        assert_eq!(est.num_minima, 1.0);
    }

    #[test]
    fn aggregation_needs_basins() {
        let spec = LandscapeSpec::periodic(2).unwrap();
        assert!(matches!(aggregate_num_minima(&spec, &[]), Err(Error::NoBasins(_))));
    }
}
