//! End-to-end acceptance checks.
//!
//! All criteria run sequentially inside one test so that wall-clock budgets
//! are measured without competing test threads. Each criterion prints one
//! `PASS`/`FAIL` line; the test fails if any criterion fails.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::Rng;

use seqnystrom::estimator::{fit_krr, fit_nystrom, read_model, write_model};
use seqnystrom::experiments::{
    noise_extraction, placement_study, ratio_sweep, relative_spread, scaling_sweep, spectrum_compare, Estimator,
    LambdaSelection, MechanismConfig, PointSource, Refit, Target, Threshold, TrialSettings, lambda_grid,
};
use seqnystrom::kernels::{gram_self, KernelKind};
use seqnystrom::linalg::{pinv_solve, sym_eig, SymMatrix};
use seqnystrom::rng::seeded;
use seqnystrom::sampling::{Placement, SubsampleMode, SubsampleSize, SubsampleSpec};
use seqnystrom::timeseries::{acf, embed, gen_m1, gen_m2, NoiseSpec};
use seqnystrom::{EmbeddedDataset, IndexSet, KernelSpec, Points};

// criterion 1
const EQUIV_REL_TOL: f64 = 1e-6;
const EQUIV_BUDGET: Duration = Duration::from_secs(10);
// criterion 2
const OBJECTIVE_TOL: f64 = 1e-8;
const GRADIENT_TOL: f64 = 1e-6;
const FD_STEP: f64 = 1e-6;
// criterion 3
const PLATEAU_TOL: f64 = 0.15;
const DEGRADATION_FACTOR: f64 = 1.5;
const PLATEAU_BUDGET: Duration = Duration::from_secs(120);
// criterion 4
const RANK_THRESHOLD: f64 = 1e-3;
const RANK_MIN_WINS: usize = 4;
const SPECTRUM_BUDGET: Duration = Duration::from_secs(60);
// criterion 5
const PLACEMENT_SPREAD: f64 = 0.20;
const PLACEMENT_BUDGET: Duration = Duration::from_secs(300);
// criterion 6
const SCALING_BUDGET: Duration = Duration::from_secs(900);
// criterion 7
const NOISE_MEAN_TOL: f64 = 0.01;
const NOISE_REL_TOL: f64 = 0.15;
const NOISE_BUDGET: Duration = Duration::from_secs(120);
// criterion 8
const PSD_REL_TOL: f64 = 1e-10;
const PINV_TOL: f64 = 1e-8;
const PROPERTY_BUDGET: Duration = Duration::from_secs(60);
// criterion 9
const SMOKE_N: usize = 500_000;
const SMOKE_M: usize = 500;
const SMOKE_BUDGET: Duration = Duration::from_secs(600);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if took > budget {
        o.pass = false;
    }
    o.detail = format!("{} [{:.1}s / {}s budget]", o.detail, took.as_secs_f64(), budget.as_secs());
    o
}

fn max_rel_gap(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
    a.iter().zip(b).fold(0.0f64, |s, (x, y)| s.max((x - y).abs())) / scale
}

fn criterion_1() -> Outcome {
    let kernels = [KernelSpec::wendland(), KernelSpec::gaussian(0.5).unwrap(), KernelSpec::min_plus_one()];
    let lambdas = [1e-3, 1e-1];
    let mut rng = seeded(1);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let k = kernels[i % 3];
        let lambda = lambdas[(i / 3) % 2];
        let n = rng.random_range(20..=200);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| 0.5 * v.sin() + rng.random_range(-0.3..0.3)).collect();
        let xt: Vec<f64> = (0..50).map(|_| rng.random_range(-1.0..1.0)).collect();
        let d = EmbeddedDataset::new(Points::from_scalars(&x), y).unwrap();
        let held = Points::from_scalars(&xt);
        let a = fit_krr(&d, &k, lambda).unwrap().predict_many(&held).unwrap();
        let b = fit_nystrom(&d, &k, lambda, &IndexSet::all(n), None).unwrap().predict_many(&held).unwrap();
        worst = worst.max(max_rel_gap(&a, &b));
    }
    outcome(worst <= EQUIV_REL_TOL, format!("worst relative gap {worst:.3e} (tol {EQUIV_REL_TOL:e})"))
}

fn objective(d: &EmbeddedDataset, k: &KernelSpec, centers: &Points, a: &[f64], lambda: f64) -> f64 {
    let n = d.len() as f64;
    let mut fit = 0.0;
    for (x, y) in d.inputs().iter().zip(d.targets()) {
        let f: f64 = centers.iter().zip(a).map(|(c, ai)| ai * k.eval(c, x).unwrap()).sum();
        fit += (f - y).powi(2);
    }
    let mut pen = 0.0;
    for (i, ci) in centers.iter().enumerate() {
        for (j, cj) in centers.iter().enumerate() {
            pen += a[i] * a[j] * k.eval(ci, cj).unwrap();
        }
    }
    fit / n + lambda * pen
}

/// QR least squares on `[K_nm / sqrt(n); sqrt(lambda) R] a = [y / sqrt(n); 0]`, `K_mm = R^T R`.
fn lsq_oracle(d: &EmbeddedDataset, k: &KernelSpec, centers: &Points, lambda: f64) -> Vec<f64> {
    let (n, m) = (d.len(), centers.len());
    let sn = (n as f64).sqrt();
    let knm = DMatrix::from_fn(n, m, |i, j| k.eval(d.inputs().row(i), centers.row(j)).unwrap() / sn);
    let kmm = DMatrix::from_fn(m, m, |i, j| k.eval(centers.row(i), centers.row(j)).unwrap());
    let r = kmm.cholesky().unwrap().l().transpose() * lambda.sqrt();
    let mut a = DMatrix::zeros(n + m, m);
    a.view_mut((0, 0), (n, m)).copy_from(&knm);
    a.view_mut((n, 0), (m, m)).copy_from(&r);
    let b = DVector::from_fn(n + m, |i, _| if i < n { d.targets()[i] / sn } else { 0.0 });
    let qr = a.qr();
    qr.r().solve_upper_triangular(&(qr.q().transpose() * b)).unwrap().as_slice().to_vec()
}

fn criterion_2() -> Outcome {
    let k = KernelSpec::wendland();
    let lambda = 0.05;
    let mut worst_obj = 0.0f64;
    let mut worst_grad = 0.0f64;
    for seed in 0..10u64 {
        let mut rng = seeded(100 + seed);
        let x: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| 0.5 * v.sin() + rng.random_range(-0.3..0.3)).collect();
        let d = EmbeddedDataset::new(Points::from_scalars(&x), y).unwrap();
        let start = rng.random_range(0..=25);
        let idx = IndexSet::new((start..start + 5).collect(), 30).unwrap();
        let model = fit_nystrom(&d, &k, lambda, &idx, None).unwrap();
        let oracle = lsq_oracle(&d, &k, model.centers(), lambda);
        let got = objective(&d, &k, model.centers(), model.alpha(), lambda);
        worst_obj = worst_obj.max((got - objective(&d, &k, model.centers(), &oracle, lambda)).abs());
        let mut g2 = 0.0;
        for i in 0..5 {
            let mut up = model.alpha().to_vec();
            let mut down = up.clone();
            up[i] += FD_STEP;
            down[i] -= FD_STEP;
            let gi = (objective(&d, &k, model.centers(), &up, lambda) - objective(&d, &k, model.centers(), &down, lambda))
                / (2.0 * FD_STEP);
            g2 += gi * gi;
        }
        let ynorm = d.targets().iter().map(|v| v * v).sum::<f64>().sqrt();
        worst_grad = worst_grad.max(g2.sqrt() / (1.0 + ynorm));
    }
    outcome(
        worst_obj <= OBJECTIVE_TOL && worst_grad <= GRADIENT_TOL,
        format!("objective gap {worst_obj:.3e}, scaled gradient {worst_grad:.3e}"),
    )
}

fn m1_sim() -> MechanismConfig {
    MechanismConfig::m1(NoiseSpec::uniform(-0.7, 0.7).unwrap())
}

fn criterion_3() -> Outcome {
    let settings = TrialSettings {
        kernel: KernelSpec::wendland(),
        n_test: 50,
        refit: Refit::Once,
        target: Target::Denoised,
        lambda: LambdaSelection::CrossValidate { grid: lambda_grid(5e-4, 5e-4, 0.01).unwrap(), holdout_fraction: 0.2 },
    };
    let ratios = [0.001, 0.005, 0.01, 0.05, 0.1, 0.5];
    let res = ratio_sweep(&m1_sim(), 2000, &ratios, SubsampleMode::RandomStart, &settings, 5, 3).unwrap();
    let mean = |r: f64| res.point(&format!("ratio={r}")).unwrap().rmse_mean;
    let (tiny, mid, big) = (mean(0.001), mean(0.05), mean(0.5));
    let plateau = (mid - big).abs() / big;
    outcome(
        plateau <= PLATEAU_TOL && tiny >= DEGRADATION_FACTOR * big,
        format!("rmse m=2 {tiny:.4}, ratio 0.05 {mid:.4}, ratio 0.5 {big:.4}; plateau gap {plateau:.3}, m=2 factor {:.2}", tiny / big),
    )
}

fn criterion_4() -> Outcome {
    let dep = PointSource::Dependent(MechanismConfig::m1(NoiseSpec::bernoulli(0.5).unwrap()));
    let iid = PointSource::Iid(NoiseSpec::uniform(-1.0, 1.0).unwrap());
    let seeds = [0, 1, 2, 3, 4];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, k) in [("wendland", KernelSpec::wendland()), ("gaussian", KernelSpec::gaussian(0.5).unwrap())] {
        let pairs = spectrum_compare(&k, 1000, 100, &dep, &iid, Threshold::RelativeToMax(RANK_THRESHOLD), &seeds).unwrap();
        let wins = pairs.iter().filter(|p| p.dependent_rank <= p.iid_rank).count();
        let ranks: Vec<String> = pairs.iter().map(|p| format!("{}<={}", p.dependent_rank, p.iid_rank)).collect();
        pass &= wins >= RANK_MIN_WINS;
        parts.push(format!("{name} {wins}/5 ({})", ranks.join(" ")));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_5() -> Outcome {
    let settings = TrialSettings {
        kernel: KernelSpec::wendland(),
        n_test: 50,
        refit: Refit::PerStep,
        target: Target::Denoised,
        lambda: LambdaSelection::CrossValidate { grid: lambda_grid(5e-5, 1e-4, 0.001).unwrap(), holdout_fraction: 0.2 },
    };
    let res = placement_study(
        &m1_sim(),
        10_000,
        100,
        &[Placement::First, Placement::Middle, Placement::Last],
        &[5, 20],
        &settings,
        5,
        5,
    )
    .unwrap();
    let means: Vec<f64> = res.points.iter().map(|p| p.rmse_mean).collect();
    let spread = relative_spread(&means);
    let shown: Vec<String> = res.points.iter().map(|p| format!("{} {:.4}", p.label, p.rmse_mean)).collect();
    outcome(spread <= PLACEMENT_SPREAD, format!("relative spread {spread:.3} ({})", shown.join(", ")))
}

fn criterion_6() -> Outcome {
    let settings = TrialSettings {
        kernel: KernelSpec::wendland(),
        n_test: 10,
        refit: Refit::PerStep,
        target: Target::Denoised,
        lambda: LambdaSelection::CrossValidate { grid: lambda_grid(2e-4, 2e-4, 0.004).unwrap(), holdout_fraction: 0.2 },
    };
    let ns = [2000, 5000, 10_000, 20_000];
    let res = scaling_sweep(&m1_sim(), &ns, 0.01, SubsampleMode::RandomStart, &settings, 5, 6).unwrap();
    let first = res.points[0].rmse_mean;
    let last = res.points[3].rmse_mean;
    let slope = res.slope.unwrap_or(f64::NAN);
    let shown: Vec<String> = res.points.iter().map(|p| format!("{:.4}", p.rmse_mean)).collect();
    outcome(last <= first && slope < 0.0, format!("mean rmse [{}], log-log slope {slope:.3}", shown.join(", ")))
}

fn criterion_7() -> Outcome {
    let est = Estimator::Nystrom(SubsampleSpec::new(SubsampleSize::Ratio(0.01), SubsampleMode::RandomStart));
    let k = KernelSpec::wendland();
    let uni = noise_extraction(&MechanismConfig::m1(NoiseSpec::uniform(-0.2, 0.2).unwrap()), 2000, 2000, &est, &k, &LambdaSelection::Fixed(0.005), 20, 7)
        .unwrap()
        .report;
    let target_var = 0.4f64.powi(2) / 12.0;
    let uni_ok = uni.mean.abs() <= NOISE_MEAN_TOL && (uni.variance - target_var).abs() <= NOISE_REL_TOL * target_var;
    let gau = noise_extraction(&MechanismConfig::m1(NoiseSpec::gaussian(0.0, 0.1).unwrap()), 2000, 2000, &est, &k, &LambdaSelection::Fixed(0.005), 20, 7)
        .unwrap()
        .report;
    let std = gau.variance.sqrt();
    let gau_ok = gau.mean.abs() <= NOISE_MEAN_TOL && (std - 0.1).abs() <= NOISE_REL_TOL * 0.1;
    outcome(
        uni_ok && gau_ok,
        format!(
            "uniform mean {:.4} var {:.5} (target {target_var:.5}); gaussian mean {:.4} std {std:.4} (target 0.1)",
            uni.mean, uni.variance, gau.mean
        ),
    )
}

fn record(name: &str, fails: &mut Vec<String>, r: Result<(), String>) {
    if let Err(e) = r {
        fails.push(format!("{name}: {e}"));
    }
}

fn criterion_8() -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 256, failure_persistence: None, ..Config::default() });
    let mut fails = Vec::new();
    let kernel = prop_oneof![
        Just(KernelSpec::wendland()),
        (0.1f64..2.0).prop_map(|s| KernelSpec::gaussian(s).unwrap()),
        Just(KernelSpec::min_plus_one()),
    ];

    let r = runner
        .run(&(kernel.clone(), -1.0f64..3.0, -1.0f64..3.0), |(k, a, b)| {
            let (x, y) = ([a], [b]);
            let kxy = k.eval(&x, &y).unwrap();
            prop_assert_eq!(kxy, k.eval(&y, &x).unwrap());
            if k.is_bounded_by_one() {
                prop_assert!((0.0..=1.0).contains(&kxy));
            }
            if k.kind() == KernelKind::Wendland && (a - b).abs() > 1.0 {
                prop_assert_eq!(kxy, 0.0);
            }
            Ok(())
        })
        .map_err(|e| e.to_string());
    record("kernel symmetry/support/bounds", &mut fails, r);

    let r = runner
        .run(&(kernel, prop::collection::vec(0.0f64..2.0, 1..40)), |(k, xs)| {
            let g = gram_self(&k, &Points::from_scalars(&xs)).unwrap();
            let ev = sym_eig(&SymMatrix::new(g).unwrap()).unwrap().spectrum;
            let top = ev.max();
            prop_assert!(ev.eigenvalues().iter().all(|&l| l >= -PSD_REL_TOL * top));
            Ok(())
        })
        .map_err(|e| e.to_string());
    record("gram psd", &mut fails, r);

    let r = runner
        .run(&(2usize..12, any::<u64>()), |(n, seed)| {
            let mut rng = seeded(seed);
            let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let spd = &a * a.transpose() + DMatrix::identity(n, n) * (n as f64);
            let b = DMatrix::from_fn(n, 2, |_, _| rng.random_range(-1.0..1.0));
            let got = pinv_solve(&SymMatrix::new(spd.clone()).unwrap(), &b, 1e-12 * n as f64).unwrap().x;
            let want = gauss_solve(&spd, &b);
            prop_assert!((got - &want).amax() <= PINV_TOL * (1.0 + want.amax()));
            Ok(())
        })
        .map_err(|e| e.to_string());
    record("pinv vs dense solve", &mut fails, r);

    let r = runner
        .run(&(prop::collection::vec(-5.0f64..5.0, 3..200), 0usize..20), |(v, lag)| {
            if v.iter().all(|&x| x == v[0]) {
                return Ok(());
            }
            let a = acf(&v, lag.min(v.len() - 1)).unwrap();
            prop_assert!((a[0] - 1.0).abs() <= 1e-12);
            prop_assert!(a.iter().all(|r| (-1.0..=1.0).contains(r)));
            Ok(())
        })
        .map_err(|e| e.to_string());
    record("acf bounds", &mut fails, r);

    let r = runner
        .run(&(1usize..500, 0.0f64..1.0, any::<u64>()), |(n, frac, seed)| {
            let m = ((n as f64 * frac) as usize).max(1);
            let idx = SubsampleSpec::new(SubsampleSize::Count(m), SubsampleMode::RandomStart)
                .resolve(n, &mut seeded(seed))
                .unwrap();
            prop_assert_eq!(idx.len(), m);
            prop_assert!(idx.is_contiguous());
            prop_assert!(idx.as_slice().windows(2).all(|w| w[1] == w[0] + 1));
            prop_assert!(idx.as_slice()[m - 1] < n);
            Ok(())
        })
        .map_err(|e| e.to_string());
    record("sequential contiguity", &mut fails, r);

    let mut det = TestRunner::new(Config { cases: 24, failure_persistence: None, ..Config::default() });
    let r = det
        .run(&any::<u64>(), |seed| {
            let a = pipeline_bits(seed);
            prop_assert_eq!(a, pipeline_bits(seed));
            Ok(())
        })
        .map_err(|e| e.to_string());
    record("seeded pipeline determinism", &mut fails, r);

    if fails.is_empty() {
        outcome(true, "6 property suites, 256 cases each (24 for the pipeline)".to_string())
    } else {
        outcome(false, fails.join(" | "))
    }
}

/// Bits of everything a seeded run produces: series, index set, model, sweep.
fn pipeline_bits(seed: u64) -> Vec<u64> {
    let g1 = gen_m1(300, &NoiseSpec::uniform(-0.7, 0.7).unwrap(), 0.3, seed).unwrap();
    let g2 = gen_m2(50, 0.5, seed).unwrap();
    let d = embed(&g1.series, 2).unwrap();
    let idx = SubsampleSpec::new(SubsampleSize::Ratio(0.1), SubsampleMode::RandomStart)
        .resolve(d.len(), &mut seeded(seed))
        .unwrap();
    let model = fit_nystrom(&d, &KernelSpec::wendland(), 1e-3, &idx, None).unwrap();
    let settings = TrialSettings {
        kernel: KernelSpec::wendland(),
        n_test: 3,
        refit: Refit::PerStep,
        target: Target::Denoised,
        lambda: LambdaSelection::CrossValidate { grid: vec![1e-3, 1e-2], holdout_fraction: 0.2 },
    };
    let sweep = ratio_sweep(&m1_sim(), 150, &[0.1, 0.3], SubsampleMode::RandomStart, &settings, 2, seed).unwrap();
    let mut out: Vec<u64> = g1.series.values().iter().chain(g2.series.values()).map(|v| v.to_bits()).collect();
    out.extend(idx.as_slice().iter().map(|&i| i as u64));
    out.extend(model.alpha().iter().map(|v| v.to_bits()));
    out.extend(sweep.trials.iter().map(|t| t.rmse.to_bits()));
    out
}

/// Gaussian elimination with partial pivoting.
fn gauss_solve(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut m = a.clone();
    let mut x = b.clone();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[(i, c)].abs().total_cmp(&m[(j, c)].abs())).unwrap();
        m.swap_rows(c, p);
        x.swap_rows(c, p);
        for r in c + 1..n {
            let f = m[(r, c)] / m[(c, c)];
            for k in c..n {
                m[(r, k)] -= f * m[(c, k)];
            }
            for k in 0..x.ncols() {
                x[(r, k)] -= f * x[(c, k)];
            }
        }
    }
    for c in (0..n).rev() {
        for k in 0..x.ncols() {
            let mut s = x[(c, k)];
            for j in c + 1..n {
                s -= m[(c, j)] * x[(j, k)];
            }
            x[(c, k)] = s / m[(c, c)];
        }
    }
    x
}

/// Peak resident set size in bytes, where the platform reports it.
fn peak_rss() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn criterion_9() -> Outcome {
    let g = gen_m1(SMOKE_N + 1, &NoiseSpec::uniform(-0.7, 0.7).unwrap(), 0.5, 9).unwrap();
    let d = embed(&g.series, 1).unwrap();
    let idx = SubsampleSpec::new(SubsampleSize::Ratio(0.001), SubsampleMode::RandomStart)
        .resolve(d.len(), &mut seeded(9))
        .unwrap();
    let model = fit_nystrom(&d, &KernelSpec::wendland(), 1.0 / SMOKE_N as f64, &idx, None).unwrap();
    let probe = d.inputs().slice(0, 100);
    let preds = model.predict_many(&probe).unwrap();
    let mut buf = Vec::new();
    write_model(&model, &mut buf).unwrap();
    let back = read_model(buf.as_slice()).unwrap();
    let well_formed = model.alpha().len() == SMOKE_M
        && model.alpha().iter().all(|a| a.is_finite())
        && preds.iter().all(|p| p.is_finite())
        && back == model;
    // a dense K_nm alone would take n * m * 8 bytes
    let dense = (SMOKE_N * SMOKE_M * 8) as u64;
    let (mem_ok, mem) = match peak_rss() {
        Some(b) => (b < dense / 4, format!("peak rss {} MiB vs dense K_nm {} MiB", b >> 20, dense >> 20)),
        None => (true, "peak rss unavailable".to_string()),
    };
    outcome(well_formed && mem_ok, format!("m = {}, rank {}, {mem}", model.alpha().len(), model.meta().rank))
}

#[test]
fn acceptance() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("1 nystrom/krr equivalence", EQUIV_BUDGET, criterion_1),
        ("2 restricted-objective optimality", Duration::from_secs(60), criterion_2),
        ("3 ratio plateau", PLATEAU_BUDGET, criterion_3),
        ("4 effective-rank ordering", SPECTRUM_BUDGET, criterion_4),
        ("5 placement invariance", PLACEMENT_BUDGET, criterion_5),
        ("6 rmse vs n", SCALING_BUDGET, criterion_6),
        ("7 noise extraction", NOISE_BUDGET, criterion_7),
        ("8 property suites", PROPERTY_BUDGET, criterion_8),
        ("9 scale smoke test", SMOKE_BUDGET, criterion_9),
    ];
    let only = std::env::var("ACCEPTANCE_ONLY").ok();
    let mut failed = Vec::new();
    for (name, budget, f) in criteria {
        if let Some(sel) = &only {
            if !sel.split(',').any(|s| name.starts_with(s.trim())) {
                continue;
            }
        }
        let o = timed(budget, f);
        // straight to the stderr handle so the line survives test output capture
        let line = format!("criterion {name}: {} {}\n", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        let _ = std::io::Write::write_all(&mut std::io::stderr().lock(), line.as_bytes());
        if !o.pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
