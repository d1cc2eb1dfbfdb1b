//! Acceptance criteria, run in sequence with one PASS/FAIL line each.
//!
//! `cargo test --release --test acceptance` runs everything (tens of minutes
//! on one core). Set `ACCEPTANCE_ONLY=a,b` to run the criteria whose names contain `a` or `b`.

mod common;

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use qaoa_landscape::experiments::{run_sweep, run_sweep_to, Mode, OutputPaths, PRule, RunRecord, SweepConfig};
use qaoa_landscape::graphs::{gen_er, CostTable};
use qaoa_landscape::landscape::{estimate_num_minima, LandscapeSpec, ProbeConfig};
use qaoa_landscape::rng::{self, derive_seed};
use qaoa_landscape::simulator::{evolve, expectation, ParamVector, QaoaContext};
use qaoa_landscape::synthetic::{Bowl, CosineLattice};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

fn medians_by<K: PartialEq + Copy>(
    records: &[RunRecord],
    key: impl Fn(&RunRecord) -> K,
    value: impl Fn(&RunRecord) -> Option<f64>,
    keys: &[K],
) -> Vec<f64> {
    keys.iter()
        .map(|&k| {
            let mut vs: Vec<f64> = records.iter().filter(|r| key(r) == k).filter_map(&value).collect();
            if vs.is_empty() {
                f64::NAN
            } else {
                median(&mut vs)
            }
        })
        .collect()
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn non_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

fn non_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0])
}

fn fmt(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

fn simulator_oracle() -> Verdict {
    let clock = Instant::now();
    let mut stream = rng::stream(101);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = stream.random_range(1..=4);
        let p = stream.random_range(1..=3);
        let graph = gen_er(n, 0.5, stream.random()).unwrap();
        let table = CostTable::build(&graph).unwrap();
        let gammas: Vec<f64> = (0..p).map(|_| stream.random_range(0.0..TAU)).collect();
        let betas: Vec<f64> = (0..p).map(|_| stream.random_range(0.0..TAU)).collect();
        let state = evolve(&table, &ParamVector::new(&gammas, &betas).unwrap()).unwrap();
        let oracle = common::dense_evolve(&graph, &gammas, &betas);
        worst = worst.max(common::max_diff_up_to_phase(state.amplitudes(), &oracle));
    }
    let elapsed = clock.elapsed();
    verdict(
        worst < 1e-10 && elapsed < Duration::from_secs(10),
        format!("50 instances, max amplitude error {worst:.2e}, {:.2}s", elapsed.as_secs_f64()),
    )
}

fn gradient_check() -> Verdict {
    let clock = Instant::now();
    let mut stream = rng::stream(102);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = stream.random_range(1..=8);
        let p = stream.random_range(1..=6);
        let table = Arc::new(CostTable::build(&gen_er(n, 0.5, stream.random()).unwrap()).unwrap());
        let mut ctx = QaoaContext::new(table, p).unwrap();
        let x: Vec<f64> = (0..2 * p).map(|_| stream.random_range(0.0..TAU)).collect();
        let mut grad = vec![0.0; 2 * p];
        ctx.expectation_and_gradient(&x, &mut grad);
        let fd = common::fd_gradient(&mut ctx, &x, 1e-5);
        worst = grad.iter().zip(&fd).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    let elapsed = clock.elapsed();
    verdict(
        worst < 1e-6 && elapsed < Duration::from_secs(60),
        format!("100 instances, max |adjoint - fd| {worst:.2e}, {:.2}s", elapsed.as_secs_f64()),
    )
}

fn normalization_periodicity() -> Verdict {
    let mut stream = rng::stream(103);
    let (mut norm_err, mut period_err): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let n = stream.random_range(1..=10);
        let p = stream.random_range(1..=6);
        let table = Arc::new(CostTable::build(&gen_er(n, 0.5, stream.random()).unwrap()).unwrap());
        let x: Vec<f64> = (0..2 * p).map(|_| stream.random_range(-TAU..TAU)).collect();
        let state = evolve(&table, &ParamVector::from_flat(x.clone()).unwrap()).unwrap();
        norm_err = norm_err.max((state.norm_sqr() - 1.0).abs());
        let mut ctx = QaoaContext::new(table, p).unwrap();
        let base = ctx.expectation(&x);
        for k in 0..2 * p {
            for shift in [TAU, -TAU] {
                let mut y = x.clone();
                y[k] += shift;
                period_err = period_err.max((ctx.expectation(&y) - base).abs());
            }
        }
    }
    verdict(
        norm_err < 1e-10 && period_err < 1e-10,
        format!("100 instances, max norm error {norm_err:.2e}, max shift error {period_err:.2e}"),
    )
}

fn zero_parameters() -> Verdict {
    let mut worst: f64 = 0.0;
    for i in 0..20u64 {
        let n = 2 + (i as usize % 11);
        let graph = gen_er(n, 0.5, derive_seed(104, &[i])).unwrap();
        let table = CostTable::build(&graph).unwrap();
        let state = evolve(&table, &ParamVector::zeros(1 + i as usize % 3).unwrap()).unwrap();
        let e = expectation(&state, &table).unwrap();
        worst = worst.max((e - graph.num_edges() as f64 / 2.0).abs());
    }
    verdict(worst < 1e-12, format!("20 graphs with n <= 12, max |<C> - |E|/2| {worst:.2e}"))
}

fn algorithm_oracle() -> Verdict {
    let clock = Instant::now();
    let cfg = ProbeConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (d, k) in [(2, 2), (2, 3), (4, 2)] {
        let lattice = CosineLattice::new(d, k);
        let est = estimate_num_minima(&lattice, &LandscapeSpec::periodic(d).unwrap(), 30, 105, &cfg).unwrap();
        let exact = lattice.num_minima();
        let ok = est.num_minima > exact / 3.0 && est.num_minima < exact * 3.0;
        pass &= ok;
        parts.push(format!("(d={d},k={k}) {:.2} vs {exact}", est.num_minima));
    }
    let bowl = Bowl::new(vec![2.0, 4.0]);
    let est = estimate_num_minima(&bowl, &LandscapeSpec::periodic(2).unwrap(), 5, 105, &cfg).unwrap();
    pass &= est.num_minima == 1.0;
    parts.push(format!("bowl {}", est.num_minima));
    let elapsed = clock.elapsed();
    pass &= elapsed < Duration::from_secs(300);
    verdict(pass, format!("{}, {:.1}s", parts.join("; "), elapsed.as_secs_f64()))
}

fn fig2_validation() -> Verdict {
    let mut cfg = SweepConfig::desk(Mode::RadiusStats, vec![8]);
    cfg.p_rule = PRule::fixed(5);
    cfg.num_graphs = 5;
    cfg.num_inits = 50;
    cfg.master_seed = 202;
    let clock = Instant::now();
    let records = run_sweep(&cfg).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    let mut worst_single: f64 = 0.0;
    for r in &records {
        let cv_v = r.radius_cv_vectors.unwrap_or(f64::NAN);
        let cv_m = r.radius_cv_minima.unwrap_or(f64::NAN);
        pass &= r.probed.len() >= 50 && cv_v < 0.5 && cv_m < 0.5;
        for m in &r.probed {
            worst_single = worst_single.max(qaoa_landscape::experiments::coefficient_of_variation(&m.radii));
        }
        parts.push(format!("g{}: {} minima cv_vec {cv_v:.3} cv_min {cv_m:.3}", r.graph_index, r.probed.len()));
    }
    verdict(
        pass,
        format!(
            "{}; largest single-minimum cv {worst_single:.3}; {:.0}s",
            parts.join("; "),
            clock.elapsed().as_secs_f64()
        ),
    )
}

fn quality_vs_n() -> Verdict {
    let ns = [6, 8, 10, 12];
    let mut cfg = SweepConfig::desk(Mode::Quality, ns.to_vec());
    cfg.p_rule = PRule::fixed(5);
    cfg.num_graphs = 10;
    cfg.num_inits = 100;
    cfg.cutoff = 0.99;
    cfg.master_seed = 303;
    let records = run_sweep(&cfg).unwrap();
    let medians = medians_by(&records, |r| r.n, |r| Some(r.quality_fraction), &ns);
    let best: Vec<f64> = ns
        .iter()
        .map(|&n| {
            records
                .iter()
                .filter(|r| r.n == n)
                .flat_map(|r| r.endpoints.iter().filter_map(|e| e.approx_ratio))
                .fold(0.0, f64::max)
        })
        .collect();
    verdict(
        strictly_decreasing(&medians),
        format!("median fraction by n {ns:?}: {}; best ratio seen {}", fmt(&medians), fmt(&best)),
    )
}

fn quantity_and_radius_vs_p() -> (Verdict, Vec<RunRecord>) {
    let ps = [2, 3, 4, 5, 6, 7, 8];
    let mut cfg = SweepConfig::desk(Mode::Quantity, vec![8]);
    cfg.p_rule = PRule::Fixed { values: ps.to_vec() };
    cfg.num_graphs = 5;
    cfg.num_inits = 10;
    cfg.master_seed = 404;
    let records = run_sweep(&cfg).unwrap();
    let quantity_ps = [2, 4, 6, 8];
    let medians = medians_by(&records, |r| r.p, |r| r.num_minima_estimate, &quantity_ps);
    let v = verdict(
        non_decreasing(&medians),
        format!("median estimate by p {quantity_ps:?}: [{}]", medians.iter().map(|m| format!("{m:.3e}")).collect::<Vec<_>>().join(", ")),
    );
    (v, records)
}

fn radius_trends(p_records: &[RunRecord]) -> Verdict {
    let ns = [6, 8, 10, 12];
    let mut cfg = SweepConfig::desk(Mode::RadiusStats, ns.to_vec());
    cfg.p_rule = PRule::fixed(5);
    cfg.num_graphs = 10;
    cfg.num_inits = 10;
    cfg.master_seed = 505;
    let records = run_sweep(&cfg).unwrap();
    let by_n = medians_by(&records, |r| r.n, |r| r.mean_radius, &ns);
    let ps = [2, 4, 6, 8];
    let by_p = medians_by(p_records, |r| r.p, |r| r.mean_radius, &ps);
    verdict(
        strictly_decreasing(&by_n) && non_increasing(&by_p),
        format!("median mean radius by n {ns:?}: {}; by p {ps:?} at n=8: {}", fmt(&by_n), fmt(&by_p)),
    )
}

fn log_study() -> Verdict {
    let ns = [4, 8, 12];
    let mut cfg = SweepConfig::desk(Mode::Quality, ns.to_vec());
    cfg.p_rule = PRule::Log { coeff: 6.0, base: 2.0 };
    cfg.num_graphs = 5;
    cfg.num_inits = 200;
    cfg.cutoff = 0.95;
    cfg.master_seed = 606;
    let records = run_sweep(&cfg).unwrap();
    let medians = medians_by(&records, |r| r.n, |r| Some(r.quality_fraction), &ns);
    let ps: Vec<usize> = ns.iter().map(|&n| cfg.p_rule.rounds(n)[0]).collect();
    verdict(
        strictly_decreasing(&medians),
        format!("p by n {ps:?}; median fraction by n {ns:?}: {}", fmt(&medians)),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for mode in [Mode::Quality, Mode::Quantity, Mode::RadiusStats] {
        let mut cfg = SweepConfig::desk(mode, vec![5, 6]);
        cfg.p_rule = PRule::Fixed { values: vec![1, 3] };
        cfg.num_graphs = 2;
        cfg.num_inits = 8;
        cfg.probe_minima = Some(3);
        cfg.master_seed = 707;
        let mut files = Vec::new();
        for (run, threads) in [(0, 1), (1, 4), (2, 1)] {
            cfg.threads = Some(threads);
            let out = dir.path().join(format!("{}-{run}.csv", mode.as_str()));
            run_sweep_to(&cfg, &out, false).unwrap();
            let paths = OutputPaths::new(&out);
            files.push(
                [&paths.csv, &paths.endpoints, &paths.radii]
                    .map(|p| std::fs::read(p).unwrap()),
            );
        }
        let same = files.windows(2).all(|w| w[0] == w[1]);
        pass &= same;
        parts.push(format!("{} {}", mode.as_str(), if same { "identical" } else { "differs" }));
    }
    verdict(pass, format!("threads 1/4/1: {}", parts.join(", ")))
}

fn main() -> ExitCode {
    let only = std::env::var("ACCEPTANCE_ONLY").ok();
    let wanted = |name: &str| only.as_deref().is_none_or(|f| f.split(',').any(|part| name.contains(part)));
    let mut results: Vec<(&str, Verdict)> = Vec::new();
    let mut run = |name: &'static str, f: &mut dyn FnMut() -> Verdict| {
        if wanted(name) {
            let clock = Instant::now();
            let v = f();
            println!(
                "[{}] {name}: {} ({:.1}s)",
                if v.pass { "PASS" } else { "FAIL" },
                v.detail,
                clock.elapsed().as_secs_f64()
            );
            results.push((name, v));
        }
    };
    run("simulator-oracle", &mut simulator_oracle);
    run("gradient-check", &mut gradient_check);
    run("normalization-periodicity", &mut normalization_periodicity);
    run("zero-parameter-expectation", &mut zero_parameters);
    run("algorithm-oracle", &mut algorithm_oracle);
    run("fig2-validation", &mut fig2_validation);
    run("quality-vs-n", &mut quality_vs_n);
    let mut p_records = Vec::new();
    run("quantity-vs-p", &mut || {
        let (v, records) = quantity_and_radius_vs_p();
        p_records = records;
        v
    });
    if wanted("radius-trends") && p_records.is_empty() {
        p_records = quantity_and_radius_vs_p().1;
    }
    run("radius-trends", &mut || radius_trends(&p_records));
    run("log-p-study", &mut log_study);
    run("determinism", &mut determinism);

    let failed: Vec<&str> = results.iter().filter(|(_, v)| !v.pass).map(|(n, _)| *n).collect();
    println!("{} of {} criteria passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
