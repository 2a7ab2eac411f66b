//! Evaluation protocols and the simulation harnesses built on them.
//!
//! Every sweep splits into independent `(point, repetition)` tasks. Each task
//! derives its seeds from the master seed and its repetition index, so the
//! output does not depend on how many threads run the tasks.

use std::io::Write;
use std::ops::Range;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimator::{fit_krr, fit_nystrom, EmbeddedDataset, NystromModel, NystromSystem};
use crate::format::fmt_f64;
use crate::kernels::{gram_self, KernelSpec};
use crate::linalg::{effective_rank, sym_eigenvalues, Spectrum, SymMatrix};
use crate::points::Points;
use crate::rng::{derive_seed, derive_seed_index, seeded};
use crate::sampling::{Placement, SubsampleMode, SubsampleSize, SubsampleSpec};
use crate::timeseries::{embed_generated, gen_nar, GeneratedSeries, MapId, NarSpec, NoiseSpec};

pub fn rmse(pred: &[f64], truth: &[f64]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::invalid(format!(
            "rmse needs equal lengths, got {} and {}",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::invalid("rmse of an empty list"));
    }
    let sum: f64 = pred.iter().zip(truth).map(|(p, t)| (p - t).powi(2)).sum();
    Ok((sum / pred.len() as f64).sqrt())
}

/// `lo, lo + step, ..., hi` (inclusive, up to rounding).
pub fn lambda_grid(lo: f64, step: f64, hi: f64) -> Result<Vec<f64>> {
    if !(lo >= 0.0 && step > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::invalid(format!("bad lambda grid [{lo}:{step}:{hi}]")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refit {
    /// Refit before every test point on all data revealed so far.
    PerStep,
    Once,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Noisy,
    /// `y - innovation`, the noise-free part of the target.
    Denoised,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalProtocol {
    pub n_train: usize,
    pub n_test: usize,
    pub refit: Refit,
    pub target: Target,
}

impl EvalProtocol {
    pub fn new(n_train: usize, n_test: usize, refit: Refit, target: Target) -> Result<Self> {
        if n_train == 0 || n_test == 0 {
            return Err(Error::invalid("n_train and n_test must be at least 1"));
        }
        Ok(Self { n_train, n_test, refit, target })
    }
}

/// What gets fitted at each step.
#[derive(Debug, Clone, PartialEq)]
pub enum Estimator {
    Nystrom(SubsampleSpec),
    Krr,
}

impl Estimator {
    /// Resolves the index set with `seeded(seed)` and fits.
    pub fn fit(&self, data: &EmbeddedDataset, kernel: &KernelSpec, lambda: f64, seed: u64) -> Result<NystromModel> {
        match self {
            Estimator::Krr => fit_krr(data, kernel, lambda),
            Estimator::Nystrom(spec) => {
                let idx = spec.resolve(data.len(), &mut seeded(seed))?;
                Ok(fit_nystrom(data, kernel, lambda, &idx, None)?.with_seed(seed))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Estimator::Krr => "KRR".to_string(),
            Estimator::Nystrom(spec) => spec.label(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalOutcome {
    pub rmse: f64,
    pub predictions: Vec<f64>,
    pub truth: Vec<f64>,
    /// Number of centers of the first fit.
    pub m: usize,
}

/// One-step-ahead evaluation on the first `protocol.n_test` test points.
///
/// Step `k` uses the sub-sample seed `derive_seed_index(seed, k)`; a single
/// fit uses the step-0 seed.
#[allow(clippy::too_many_arguments)]
pub fn one_step_eval(
    train: &EmbeddedDataset,
    test: &EmbeddedDataset,
    test_innovations: Option<&[f64]>,
    kernel: &KernelSpec,
    lambda: f64,
    estimator: &Estimator,
    protocol: &EvalProtocol,
    seed: u64,
) -> Result<EvalOutcome> {
    let k = protocol.n_test;
    if train.len() != protocol.n_train {
        return Err(Error::invalid(format!(
            "protocol expects {} training pairs, got {}",
            protocol.n_train,
            train.len()
        )));
    }
    if test.len() < k {
        return Err(Error::invalid(format!("protocol needs {k} test pairs, got {}", test.len())));
    }
    let truth: Vec<f64> = match protocol.target {
        Target::Noisy => test.targets()[..k].to_vec(),
        Target::Denoised => {
            let innov = test_innovations
                .filter(|v| v.len() >= k)
                .ok_or_else(|| Error::invalid("denoised target needs the test innovations"))?;
            test.targets()[..k].iter().zip(innov).map(|(y, e)| y - e).collect()
        }
    };
    let (predictions, m) = match protocol.refit {
        Refit::Once => {
            let model = estimator.fit(train, kernel, lambda, derive_seed_index(seed, 0))?;
            let pred = model.predict_many(&test.inputs().slice(0, k))?;
            (pred, model.alpha().len())
        }
        Refit::PerStep => {
            let mut grown = train.clone();
            let mut pred = Vec::with_capacity(k);
            let mut m = 0;
            for step in 0..k {
                let model = estimator.fit(&grown, kernel, lambda, derive_seed_index(seed, step as u64))?;
                if step == 0 {
                    m = model.alpha().len();
                }
                let x = test.inputs().row(step);
                pred.push(model.predict(x)?);
                grown.push(x, test.targets()[step])?;
            }
            (pred, m)
        }
    };
    Ok(EvalOutcome { rmse: rmse(&predictions, &truth)?, predictions, truth, m })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    pub best_lambda: f64,
    /// `(lambda, validation rmse)` in grid order.
    pub scores: Vec<(f64, f64)>,
    pub fit_range: Range<usize>,
    pub validate_range: Range<usize>,
}

/// Forward-chaining holdout: fit on the head, score on the tail.
/// Ties go to the larger lambda.
pub fn cross_validate(
    train: &EmbeddedDataset,
    kernel: &KernelSpec,
    grid: &[f64],
    estimator: &Estimator,
    holdout_fraction: f64,
    seed: u64,
) -> Result<CvOutcome> {
    if grid.is_empty() {
        return Err(Error::invalid("lambda grid is empty"));
    }
    if !(holdout_fraction > 0.0 && holdout_fraction <= 0.5) {
        return Err(Error::invalid(format!("holdout fraction must lie in (0, 0.5], got {holdout_fraction}")));
    }
    let n = train.len();
    let tail = ((holdout_fraction * n as f64).floor() as usize).max(1);
    if tail >= n {
        return Err(Error::invalid(format!("{n} pairs are too few to cross-validate")));
    }
    let head = n - tail;
    let fit_data = train.slice(0, head)?;
    let val = train.slice(head, n)?;
    let system = match estimator {
        Estimator::Nystrom(spec) => {
            let idx = spec.resolve(head, &mut seeded(seed))?;
            Some(NystromSystem::prepare(&fit_data, kernel, &idx)?)
        }
        Estimator::Krr => None,
    };
    let mut scores = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let model = match &system {
            Some(s) => s.solve(lambda, None)?,
            None => fit_krr(&fit_data, kernel, lambda)?,
        };
        let pred = model.predict_many(val.inputs())?;
        scores.push((lambda, rmse(&pred, val.targets())?));
    }
    let mut best = scores[0];
    for &(l, s) in &scores[1..] {
        if s < best.1 || (s == best.1 && l > best.0) {
            best = (l, s);
        }
    }
    Ok(CvOutcome { best_lambda: best.0, scores, fit_range: 0..head, validate_range: head..n })
}

#[derive(Debug, Clone, PartialEq)]
pub enum LambdaSelection {
    Fixed(f64),
    CrossValidate { grid: Vec<f64>, holdout_fraction: f64 },
}

impl LambdaSelection {
    pub fn select(&self, train: &EmbeddedDataset, kernel: &KernelSpec, estimator: &Estimator, seed: u64) -> Result<f64> {
        match self {
            LambdaSelection::Fixed(l) => Ok(*l),
            LambdaSelection::CrossValidate { grid, holdout_fraction } => {
                Ok(cross_validate(train, kernel, grid, estimator, *holdout_fraction, seed)?.best_lambda)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mechanism {
    /// `x_t = 0.5 sin(x_{t-1}) + eps_t`
    M1 { noise: NoiseSpec },
    /// `x_t = (x_{t-1} + eps_t) / 2`, `eps_t ~ Bernoulli(1/2)`
    M2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitRule {
    /// `x0 ~ U(0, 1)` drawn from the `"x0"` sub-stream.
    Uniform,
    Fixed(f64),
}

impl InitRule {
    pub fn value(self, seed: u64) -> f64 {
        match self {
            InitRule::Fixed(v) => v,
            InitRule::Uniform => seeded(derive_seed(seed, "x0")).random::<f64>(),
        }
    }
}

/// A synthetic data source plus its delay embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct MechanismConfig {
    pub mechanism: Mechanism,
    pub x0: InitRule,
    pub burn_in: usize,
    pub embed_dim: usize,
}

impl MechanismConfig {
    pub fn m1(noise: NoiseSpec) -> Self {
        Self { mechanism: Mechanism::M1 { noise }, x0: InitRule::Uniform, burn_in: 0, embed_dim: 1 }
    }

    pub fn m2() -> Self {
        Self { mechanism: Mechanism::M2, x0: InitRule::Uniform, burn_in: 0, embed_dim: 1 }
    }

    pub fn nar_spec(&self, seed: u64) -> Result<NarSpec> {
        let x0 = self.x0.value(seed);
        let mut spec = match &self.mechanism {
            Mechanism::M1 { noise } => NarSpec::new(MapId::M1, noise.validated()?, vec![x0]),
            Mechanism::M2 => {
                if !(0.0..=1.0).contains(&x0) {
                    return Err(Error::invalid(format!("m2 needs x0 in [0, 1], got {x0}")));
                }
                NarSpec::new(MapId::M2, NoiseSpec::Bernoulli { p: 0.5 }, vec![x0])
            }
        };
        spec.burn_in = self.burn_in;
        Ok(spec)
    }

    pub fn generate(&self, len: usize, seed: u64) -> Result<GeneratedSeries> {
        gen_nar(&self.nar_spec(seed)?, len, seed)
    }

    /// `pairs` embedded pairs and their innovations.
    pub fn generate_dataset(&self, pairs: usize, seed: u64) -> Result<(EmbeddedDataset, Vec<f64>)> {
        embed_generated(&self.generate(pairs + self.embed_dim, seed)?, self.embed_dim)
    }
}

/// Everything a trial needs besides the data source, size and estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSettings {
    pub kernel: KernelSpec,
    pub n_test: usize,
    pub refit: Refit,
    pub target: Target,
    pub lambda: LambdaSelection,
}

/// One row of a sweep; `seed` re-runs it through [`run_trial`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub label: String,
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub seed: u64,
    pub rmse: f64,
    pub runtime_s: f64,
}

/// Training pairs, test pairs and the innovations of the test targets.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialData {
    pub train: EmbeddedDataset,
    pub test: EmbeddedDataset,
    pub innov: Vec<f64>,
}

/// The series a trial with `seed` runs on.
pub fn trial_data(config: &MechanismConfig, n: usize, n_test: usize, seed: u64) -> Result<TrialData> {
    let (data, innov) = config.generate_dataset(n + n_test, derive_seed(seed, "data"))?;
    Ok(TrialData { train: data.slice(0, n)?, test: data.slice(n, n + n_test)?, innov: innov[n..].to_vec() })
}

fn evaluate(
    data: &TrialData,
    label: String,
    estimator: &Estimator,
    settings: &TrialSettings,
    lambda: f64,
    seed: u64,
) -> Result<TrialRecord> {
    let protocol = EvalProtocol::new(data.train.len(), settings.n_test, settings.refit, settings.target)?;
    let start = Instant::now();
    let out = one_step_eval(
        &data.train,
        &data.test,
        Some(&data.innov),
        &settings.kernel,
        lambda,
        estimator,
        &protocol,
        derive_seed(seed, "subsample"),
    )?;
    Ok(TrialRecord {
        label,
        n: data.train.len(),
        m: out.m,
        lambda,
        seed,
        rmse: out.rmse,
        runtime_s: start.elapsed().as_secs_f64(),
    })
}

/// Generate, select lambda, evaluate. The same `seed` gives the same series
/// whatever the estimator.
pub fn run_trial(
    config: &MechanismConfig,
    n: usize,
    estimator: &Estimator,
    settings: &TrialSettings,
    seed: u64,
) -> Result<TrialRecord> {
    let data = trial_data(config, n, settings.n_test, seed)?;
    let lambda = settings.lambda.select(&data.train, &settings.kernel, estimator, derive_seed(seed, "cv"))?;
    evaluate(&data, estimator.label(), estimator, settings, lambda, seed)
}

/// Seed of repetition `rep`; shared by every point of a sweep.
pub fn rep_seed(seed: u64, rep: usize) -> u64 {
    derive_seed_index(derive_seed(seed, "rep"), rep as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub label: String,
    /// Swept value (ratio, n or gap); `None` for named strategies.
    pub axis: Option<f64>,
    pub n: usize,
    pub m: usize,
    pub rmse_mean: f64,
    pub rmse_std: f64,
    pub runtime_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// Point-major, repetition-minor.
    pub trials: Vec<TrialRecord>,
    /// Least-squares slope of `ln rmse_mean` against `ln n`, when defined.
    pub slope: Option<f64>,
}

pub const TRIALS_HEADER: &str = "label,n,m,lambda,seed,rmse,runtime_s";
pub const SUMMARY_HEADER: &str = "label,axis,n,m,rmse_mean,rmse_std,runtime_s";

impl SweepResult {
    fn from_trials(axes: Vec<(String, Option<f64>)>, trials: Vec<TrialRecord>, reps: usize) -> Self {
        let points = axes
            .into_iter()
            .zip(trials.chunks(reps))
            .map(|((label, axis), group)| {
                let r: Vec<f64> = group.iter().map(|t| t.rmse).collect();
                let (mean, std) = mean_std(&r);
                SweepPoint {
                    label,
                    axis,
                    n: group[0].n,
                    m: group[0].m,
                    rmse_mean: mean,
                    rmse_std: std,
                    runtime_s: group.iter().map(|t| t.runtime_s).sum::<f64>() / group.len() as f64,
                }
            })
            .collect();
        Self { points, trials, slope: None }
    }

    pub fn point(&self, label: &str) -> Option<&SweepPoint> {
        self.points.iter().find(|p| p.label == label)
    }

    pub fn write_trials_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{TRIALS_HEADER}")?;
        for t in &self.trials {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                t.label,
                t.n,
                t.m,
                fmt_f64(t.lambda),
                t.seed,
                fmt_f64(t.rmse),
                fmt_f64(t.runtime_s)
            )?;
        }
        Ok(())
    }

    pub fn write_summary_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{SUMMARY_HEADER}")?;
        for p in &self.points {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                p.label,
                p.axis.map(fmt_f64).unwrap_or_default(),
                p.n,
                p.m,
                fmt_f64(p.rmse_mean),
                fmt_f64(p.rmse_std),
                fmt_f64(p.runtime_s)
            )?;
        }
        Ok(())
    }
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn check_reps(reps: usize) -> Result<()> {
    if reps == 0 {
        return Err(Error::invalid("reps must be at least 1"));
    }
    Ok(())
}

fn generate_reps(config: &MechanismConfig, n: usize, n_test: usize, reps: usize, seed: u64) -> Result<Vec<TrialData>> {
    (0..reps).into_par_iter().map(|r| trial_data(config, n, n_test, rep_seed(seed, r))).collect()
}

/// RMSE against the sub-sampling ratio. Repetition `r` uses the same series
/// at every ratio.
pub fn ratio_sweep(
    config: &MechanismConfig,
    n: usize,
    ratios: &[f64],
    mode: SubsampleMode,
    settings: &TrialSettings,
    reps: usize,
    seed: u64,
) -> Result<SweepResult> {
    check_reps(reps)?;
    if ratios.is_empty() {
        return Err(Error::invalid("no ratios given"));
    }
    let estimators: Vec<Estimator> = ratios
        .iter()
        .map(|&r| {
            SubsampleSize::Ratio(r).resolve(n)?;
            Ok(Estimator::Nystrom(SubsampleSpec::new(SubsampleSize::Ratio(r), mode)))
        })
        .collect::<Result<_>>()?;
    let data = generate_reps(config, n, settings.n_test, reps, seed)?;
    let tasks: Vec<(usize, usize)> = (0..ratios.len()).flat_map(|p| (0..reps).map(move |r| (p, r))).collect();
    let trials = tasks
        .par_iter()
        .map(|&(p, r)| {
            let s = rep_seed(seed, r);
            let est = &estimators[p];
            let lambda = settings.lambda.select(&data[r].train, &settings.kernel, est, derive_seed(s, "cv"))?;
            evaluate(&data[r], format!("ratio={}", ratios[p]), est, settings, lambda, s)
        })
        .collect::<Result<Vec<_>>>()?;
    let axes = ratios.iter().map(|&r| (format!("ratio={r}"), Some(r))).collect();
    Ok(SweepResult::from_trials(axes, trials, reps))
}

/// Full KRR on the series of each repetition of a sweep with the same seed.
pub fn krr_reference(
    config: &MechanismConfig,
    n: usize,
    settings: &TrialSettings,
    reps: usize,
    seed: u64,
) -> Result<SweepResult> {
    check_reps(reps)?;
    let trials = (0..reps)
        .into_par_iter()
        .map(|r| run_trial(config, n, &Estimator::Krr, settings, rep_seed(seed, r)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult::from_trials(vec![("KRR".to_string(), None)], trials, reps))
}

/// RMSE against the training size at a fixed ratio.
pub fn scaling_sweep(
    config: &MechanismConfig,
    ns: &[usize],
    ratio: f64,
    mode: SubsampleMode,
    settings: &TrialSettings,
    reps: usize,
    seed: u64,
) -> Result<SweepResult> {
    check_reps(reps)?;
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("ns must be a nonempty increasing list"));
    }
    let est = Estimator::Nystrom(SubsampleSpec::new(SubsampleSize::Ratio(ratio), mode));
    let tasks: Vec<(usize, usize)> = (0..ns.len()).flat_map(|p| (0..reps).map(move |r| (p, r))).collect();
    let trials = tasks
        .par_iter()
        .map(|&(p, r)| {
            let mut t = run_trial(config, ns[p], &est, settings, rep_seed(seed, r))?;
            t.label = format!("n={}", ns[p]);
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    let axes = ns.iter().map(|&n| (format!("n={n}"), Some(n as f64))).collect();
    let mut res = SweepResult::from_trials(axes, trials, reps);
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = res.points.iter().map(|p| p.rmse_mean.ln()).collect();
    res.slope = ls_slope(&xs, &ys);
    Ok(res)
}

/// Least-squares slope; `None` with fewer than two distinct `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Some(sxy / sxx)
}

/// Fixed-`m` windows at named positions and strided index sets from 0.
///
/// Cross-validated lambda is picked once per repetition with the first
/// strategy and shared by all strategies of that repetition.
#[allow(clippy::too_many_arguments)]
pub fn placement_study(
    config: &MechanismConfig,
    n: usize,
    m: usize,
    positions: &[Placement],
    gaps: &[usize],
    settings: &TrialSettings,
    reps: usize,
    seed: u64,
) -> Result<SweepResult> {
    check_reps(reps)?;
    let mut specs: Vec<SubsampleSpec> = positions
        .iter()
        .map(|&p| SubsampleSpec::new(SubsampleSize::Count(m), SubsampleMode::Positional(p)))
        .collect();
    specs.extend(
        gaps.iter().map(|&gap| SubsampleSpec::new(SubsampleSize::Count(m), SubsampleMode::Strided { start: 0, gap })),
    );
    if specs.is_empty() {
        return Err(Error::invalid("no placement strategies given"));
    }
    for spec in &specs {
        spec.resolve(n, &mut seeded(0))
            .map_err(|e| {
                let why = match e {
                    Error::InvalidArgument(msg) => msg,
                    other => other.to_string(),
                };
                Error::invalid(format!("strategy {} is infeasible: {why}", spec.label()))
            })?;
    }
    let estimators: Vec<Estimator> = specs.into_iter().map(Estimator::Nystrom).collect();
    let data = generate_reps(config, n, settings.n_test, reps, seed)?;
    let lambdas = (0..reps)
        .into_par_iter()
        .map(|r| {
            let s = rep_seed(seed, r);
            settings.lambda.select(&data[r].train, &settings.kernel, &estimators[0], derive_seed(s, "cv"))
        })
        .collect::<Result<Vec<_>>>()?;
    let tasks: Vec<(usize, usize)> = (0..estimators.len()).flat_map(|p| (0..reps).map(move |r| (p, r))).collect();
    let trials = tasks
        .par_iter()
        .map(|&(p, r)| {
            let est = &estimators[p];
            evaluate(&data[r], est.label(), est, settings, lambdas[r], rep_seed(seed, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let axes = estimators
        .iter()
        .map(|e| {
            let axis = match e {
                Estimator::Nystrom(SubsampleSpec { mode: SubsampleMode::Strided { gap, .. }, .. }) => Some(*gap as f64),
                _ => None,
            };
            (e.label(), axis)
        })
        .collect();
    Ok(SweepResult::from_trials(axes, trials, reps))
}

/// `(max - min) / mean` of the given values.
pub fn relative_spread(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    (max - min) / mean
}

/// Where the Gram-matrix points come from.
#[derive(Debug, Clone, PartialEq)]
pub enum PointSource {
    /// Embedded inputs of a generated series.
    Dependent(MechanismConfig),
    /// Scalars drawn independently from a law.
    Iid(NoiseSpec),
}

impl PointSource {
    pub fn points(&self, n: usize, seed: u64) -> Result<Points> {
        match self {
            PointSource::Dependent(config) => Ok(config.generate_dataset(n, seed)?.0.inputs().clone()),
            PointSource::Iid(law) => Ok(Points::from_scalars(&law.sample(n, &mut seeded(seed))?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Absolute(f64),
    /// Fraction of the largest eigenvalue.
    RelativeToMax(f64),
}

impl Threshold {
    pub fn value(&self, s: &Spectrum) -> f64 {
        match *self {
            Threshold::Absolute(t) => t,
            Threshold::RelativeToMax(f) => f * s.max(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPair {
    pub seed: u64,
    /// Top eigenvalues of each arm.
    pub dependent: Spectrum,
    pub iid: Spectrum,
    pub dependent_rank: usize,
    pub iid_rank: usize,
}

/// Gram spectra of both sources per seed. Both arms draw their points with
/// the same derived seed.
pub fn spectrum_compare(
    kernel: &KernelSpec,
    n: usize,
    top_k: usize,
    dependent: &PointSource,
    iid: &PointSource,
    threshold: Threshold,
    seeds: &[u64],
) -> Result<Vec<SpectrumPair>> {
    if top_k == 0 || top_k > n {
        return Err(Error::invalid(format!("top_k must lie in 1..={n}, got {top_k}")));
    }
    let arm = |src: &PointSource, seed: u64| -> Result<(Spectrum, usize)> {
        let pts = src.points(n, derive_seed(seed, "points"))?;
        let s = sym_eigenvalues(&SymMatrix::new(gram_self(kernel, &pts)?)?)?;
        let rank = effective_rank(&s, threshold.value(&s));
        Ok((s.top(top_k), rank))
    };
    let tasks: Vec<(u64, bool)> = seeds.iter().flat_map(|&s| [(s, true), (s, false)]).collect();
    let mut spectra = tasks
        .par_iter()
        .map(|&(s, dep)| arm(if dep { dependent } else { iid }, s))
        .collect::<Result<Vec<_>>>()?
        .into_iter();
    let mut out = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let (dependent, dependent_rank) = spectra.next().expect("one result per task");
        let (iid, iid_rank) = spectra.next().expect("one result per task");
        out.push(SpectrumPair { seed, dependent, iid, dependent_rank, iid_rank });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// Equal-width bins over `[min, max]`; the last bin is closed.
    pub fn new(values: &[f64], bins: usize) -> Result<Self> {
        if bins < 2 {
            return Err(Error::invalid("bin count must be at least 2"));
        }
        if values.is_empty() {
            return Err(Error::invalid("histogram of an empty list"));
        }
        let mut lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let mut hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo == hi {
            lo -= 0.5;
            hi += 0.5;
        }
        let w = (hi - lo) / bins as f64;
        let mut edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * w).collect();
        edges[bins] = hi;
        let mut counts = vec![0; bins];
        for &v in values {
            let i = (((v - lo) / w).floor() as usize).min(bins - 1);
            counts[i] += 1;
        }
        Ok(Self { edges, counts })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceStats {
    pub mean: f64,
    pub variance: f64,
    /// Largest gap between the two empirical CDFs over the bin edges.
    pub cdf_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseReport {
    pub residuals: Vec<f64>,
    pub histogram: Histogram,
    pub mean: f64,
    /// Sample variance.
    pub variance: f64,
    pub reference: Option<ReferenceStats>,
}

fn mean_var(v: &[f64]) -> (f64, f64) {
    let (m, s) = mean_std(v);
    (m, s * s)
}

fn ecdf(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64
}

/// Residuals of `model` on `heldout` (noisy targets) with summary statistics.
pub fn noise_report(
    model: &NystromModel,
    heldout: &EmbeddedDataset,
    true_noise: Option<&[f64]>,
    bins: usize,
) -> Result<NoiseReport> {
    let residuals = model.residuals(heldout)?;
    let histogram = Histogram::new(&residuals, bins)?;
    let (mean, variance) = mean_var(&residuals);
    let reference = match true_noise {
        None => None,
        Some([]) => return Err(Error::invalid("true noise sample is empty")),
        Some(t) => {
            let mut a = residuals.clone();
            let mut b = t.to_vec();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            let cdf_gap = histogram.edges.iter().map(|&e| (ecdf(&a, e) - ecdf(&b, e)).abs()).fold(0.0, f64::max);
            let (mean, variance) = mean_var(t);
            Some(ReferenceStats { mean, variance, cdf_gap })
        }
    };
    Ok(NoiseReport { residuals, histogram, mean, variance, reference })
}

impl NoiseReport {
    pub fn write_histogram_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "bin_left,bin_right,count")?;
        for (i, c) in self.histogram.counts.iter().enumerate() {
            writeln!(w, "{},{},{c}", fmt_f64(self.histogram.edges[i]), fmt_f64(self.histogram.edges[i + 1]))?;
        }
        Ok(())
    }

    pub fn write_summary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "count = {}", self.residuals.len())?;
        writeln!(w, "mean = {}", fmt_f64(self.mean))?;
        writeln!(w, "variance = {}", fmt_f64(self.variance))?;
        writeln!(w, "std = {}", fmt_f64(self.variance.sqrt()))?;
        if let Some(r) = &self.reference {
            writeln!(w, "reference.mean = {}", fmt_f64(r.mean))?;
            writeln!(w, "reference.variance = {}", fmt_f64(r.variance))?;
            writeln!(w, "reference.std = {}", fmt_f64(r.variance.sqrt()))?;
            writeln!(w, "cdf_gap = {}", fmt_f64(r.cdf_gap))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseExtraction {
    pub model: NystromModel,
    pub report: NoiseReport,
    /// Training targets, in time order.
    pub train_targets: Vec<f64>,
    /// Innovations of the held-out pairs.
    pub true_noise: Vec<f64>,
}

/// Fit on the first `n` pairs of a generated series and report residuals on
/// the next `n_heldout`, with the true innovations as reference.
#[allow(clippy::too_many_arguments)]
pub fn noise_extraction(
    config: &MechanismConfig,
    n: usize,
    n_heldout: usize,
    estimator: &Estimator,
    kernel: &KernelSpec,
    lambda: &LambdaSelection,
    bins: usize,
    seed: u64,
) -> Result<NoiseExtraction> {
    let data = trial_data(config, n, n_heldout, seed)?;
    let lambda = lambda.select(&data.train, kernel, estimator, derive_seed(seed, "cv"))?;
    let model = estimator.fit(&data.train, kernel, lambda, derive_seed(seed, "subsample"))?;
    let report = noise_report(&model, &data.test, Some(&data.innov), bins)?;
    Ok(NoiseExtraction { model, report, train_targets: data.train.targets().to_vec(), true_noise: data.innov })
}
