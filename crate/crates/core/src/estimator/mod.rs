//! Full and Nyström-regularized kernel ridge regression.
//!
//! Both estimators minimise `(1/n) sum (f(x_t) - y_t)^2 + lambda ||f||_K^2`.
//! Full KRR searches the whole RKHS and solves `(K_nn + lambda n I) alpha = y`.
//! The Nyström estimator restricts `f` to the span of `K(x~_i, .)` over the
//! selected centers and takes
//! `alpha = (K_nm^T K_nm + lambda n K_mm)^+ K_nm^T y`.
//! `K_nm` is never materialised: row blocks are streamed into the `m x m`
//! normal matrix, so the working set is `O(block * m + m^2)`.

mod model_file;

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{gram, gram_self, KernelSpec};
use crate::linalg::{pinv_solve, SymMatrix};
use crate::points::Points;
use crate::sampling::IndexSet;

pub use model_file::{read_model, write_model};

const BLOCK_ROWS: usize = 2048;

/// Supervised pairs `(x_i, y_i)` produced by delay embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedDataset {
    inputs: Points,
    targets: Vec<f64>,
}

impl EmbeddedDataset {
    pub fn new(inputs: Points, targets: Vec<f64>) -> Result<Self> {
        if inputs.len() != targets.len() {
            return Err(Error::invalid(format!(
                "{} inputs but {} targets",
                inputs.len(),
                targets.len()
            )));
        }
        if targets.is_empty() {
            return Err(Error::invalid("dataset must hold at least one pair"));
        }
        if !inputs.is_finite() || targets.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("dataset values must be finite"));
        }
        Ok(Self { inputs, targets })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.inputs.dim()
    }

    pub fn inputs(&self) -> &Points {
        &self.inputs
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    /// Rows `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Result<Self> {
        if start >= end || end > self.len() {
            return Err(Error::invalid(format!(
                "row range {start}..{end} invalid for {} rows",
                self.len()
            )));
        }
        Ok(Self { inputs: self.inputs.slice(start, end), targets: self.targets[start..end].to_vec() })
    }

    pub fn push(&mut self, x: &[f64], y: f64) -> Result<()> {
        if !y.is_finite() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("dataset values must be finite"));
        }
        self.inputs.push(x)?;
        self.targets.push(y);
        Ok(())
    }

    /// Applies `v -> (v - offset) / scale` to inputs and targets.
    pub fn scaled(&self, s: &AffineScaling) -> Self {
        Self {
            inputs: self.inputs.map_values(|v| s.forward(v)),
            targets: self.targets.iter().map(|&v| s.forward(v)).collect(),
        }
    }
}

/// Affine map `v -> (v - offset) / scale` applied to inputs and targets
/// before fitting; predictions are mapped back to original units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineScaling {
    pub offset: f64,
    pub scale: f64,
}

impl AffineScaling {
    /// Min-max scaling of the given values onto `[0, 1]`.
    pub fn min_max(values: &[f64]) -> Result<Self> {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::DegenerateInput("min-max scaling needs at least two distinct finite values".into()));
        }
        Ok(Self { offset: lo, scale: hi - lo })
    }

    pub fn forward(&self, v: f64) -> f64 {
        (v - self.offset) / self.scale
    }

    pub fn inverse(&self, u: f64) -> f64 {
        u * self.scale + self.offset
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    Krr,
    Nystrom,
}

impl fmt::Display for FitMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitMethod::Krr => "krr",
            FitMethod::Nystrom => "nystrom",
        })
    }
}

/// Where a model came from.
#[derive(Debug, Clone, PartialEq)]
pub struct FitMeta {
    pub method: FitMethod,
    /// Training set size.
    pub n: usize,
    /// Rows of the training set used as centers.
    pub indices: IndexSet,
    pub seed: Option<u64>,
    /// Relative eigenvalue cutoff of the pseudo-inverse (Nyström only).
    pub cutoff: Option<f64>,
    /// Retained rank of the solved system.
    pub rank: usize,
}

/// `f(x) = sum_i alpha_i K(c_i, x)`; there is no intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct NystromModel {
    kernel: KernelSpec,
    centers: Points,
    alpha: Vec<f64>,
    lambda: f64,
    meta: FitMeta,
    scaling: Option<AffineScaling>,
}

impl NystromModel {
    pub fn new(
        kernel: KernelSpec,
        centers: Points,
        alpha: Vec<f64>,
        lambda: f64,
        meta: FitMeta,
    ) -> Result<Self> {
        if centers.len() != alpha.len() || alpha.is_empty() {
            return Err(Error::invalid(format!(
                "{} centers but {} coefficients",
                centers.len(),
                alpha.len()
            )));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::Numerical("fitted coefficients are not finite".into()));
        }
        kernel.check_dim(centers.dim())?;
        Ok(Self { kernel, centers, alpha, lambda, meta, scaling: None })
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn centers(&self) -> &Points {
        &self.centers
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn meta(&self) -> &FitMeta {
        &self.meta
    }

    pub fn scaling(&self) -> Option<&AffineScaling> {
        self.scaling.as_ref()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.meta.seed = Some(seed);
        self
    }

    /// Attaches the transform the training data went through; `predict`
    /// then takes and returns values in original units.
    pub fn with_scaling(mut self, scaling: AffineScaling) -> Self {
        self.scaling = Some(scaling);
        self
    }

    pub fn dim(&self) -> usize {
        self.centers.dim()
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::invalid(format!(
                "query has dimension {}, model expects {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(match self.scaling {
            None => self.raw_predict(x),
            Some(s) => {
                let u: Vec<f64> = x.iter().map(|&v| s.forward(v)).collect();
                s.inverse(self.raw_predict(&u))
            }
        })
    }

    fn raw_predict(&self, x: &[f64]) -> f64 {
        self.centers
            .iter()
            .zip(&self.alpha)
            .map(|(c, a)| a * self.kernel.eval_unchecked(c, x))
            .sum()
    }

    /// Predictions for every row, in order.
    pub fn predict_many(&self, xs: &Points) -> Result<Vec<f64>> {
        if xs.dim() != self.dim() {
            return Err(Error::invalid(format!(
                "queries have dimension {}, model expects {}",
                xs.dim(),
                self.dim()
            )));
        }
        let rows: Vec<&[f64]> = xs.iter().collect();
        rows.par_iter().map(|x| self.predict(x)).collect()
    }

    /// `y_i - f(x_i)` in dataset order.
    pub fn residuals(&self, data: &EmbeddedDataset) -> Result<Vec<f64>> {
        let pred = self.predict_many(data.inputs())?;
        Ok(data.targets().iter().zip(pred).map(|(y, p)| y - p).collect())
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::invalid(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    Ok(())
}

/// Full kernel ridge regression over all `n` training inputs.
///
/// `lambda = 0` is accepted only when `K_nn` is numerically nonsingular.
pub fn fit_krr(data: &EmbeddedDataset, kernel: &KernelSpec, lambda: f64) -> Result<NystromModel> {
    check_lambda(lambda)?;
    kernel.check_dim(data.dim())?;
    let n = data.len();
    let mut a = gram_self(kernel, data.inputs())?;
    for i in 0..n {
        a[(i, i)] += lambda * n as f64;
    }
    let y = DVector::from_column_slice(data.targets());
    let alpha = match a.clone().cholesky() {
        Some(ch) => ch.solve(&y),
        None if lambda == 0.0 => {
            return Err(Error::Numerical(
                "kernel matrix is singular at lambda = 0; use lambda > 0".into(),
            ))
        }
        // only reachable for kernels used outside their PSD domain
        None => a.lu().solve(&y).ok_or_else(|| {
            Error::Numerical("KRR system is singular; increase lambda".into())
        })?,
    };
    if alpha.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("KRR system is singular; use lambda > 0".into()));
    }
    let meta = FitMeta {
        method: FitMethod::Krr,
        n,
        indices: IndexSet::all(n),
        seed: None,
        cutoff: None,
        rank: n,
    };
    NystromModel::new(*kernel, data.inputs().clone(), alpha.as_slice().to_vec(), lambda, meta)
}

/// The `lambda`-independent pieces of the Nyström normal equations.
///
/// Preparing once and solving for many `lambda` values is how grid
/// selection avoids recomputing `K_nm^T K_nm`.
#[derive(Debug, Clone)]
pub struct NystromSystem {
    kernel: KernelSpec,
    indices: IndexSet,
    centers: Points,
    n: usize,
    ktk: DMatrix<f64>,
    kty: DMatrix<f64>,
    kmm: DMatrix<f64>,
}

impl NystromSystem {
    pub fn prepare(data: &EmbeddedDataset, kernel: &KernelSpec, idx: &IndexSet) -> Result<Self> {
        if idx.is_empty() {
            return Err(Error::invalid("index set is empty"));
        }
        let n = data.len();
        if let Some(&last) = idx.as_slice().last() {
            if last >= n {
                return Err(Error::invalid(format!(
                    "index {last} out of range for a dataset of {n} rows"
                )));
            }
        }
        kernel.check_dim(data.dim())?;
        let centers = data.inputs().select(idx.as_slice());
        let m = centers.len();
        let mut ktk = DMatrix::<f64>::zeros(m, m);
        let mut kty = DMatrix::<f64>::zeros(m, 1);
        let mut start = 0;
        while start < n {
            let end = (start + BLOCK_ROWS).min(n);
            let rows = data.inputs().slice(start, end);
            let kb = gram(kernel, &rows, &centers)?;
            let kbt = kb.transpose();
            let yb = DMatrix::from_column_slice(end - start, 1, &data.targets()[start..end]);
            ktk.gemm(1.0, &kbt, &kb, 1.0);
            kty.gemm(1.0, &kbt, &yb, 1.0);
            start = end;
        }
        let kmm = gram_self(kernel, &centers)?;
        Ok(Self { kernel: *kernel, indices: idx.clone(), centers, n, ktk, kty, kmm })
    }

    pub fn m(&self) -> usize {
        self.centers.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Solves for `alpha`; `cutoff` defaults to [`nystrom_default_cutoff`].
    pub fn solve(&self, lambda: f64, cutoff: Option<f64>) -> Result<NystromModel> {
        check_lambda(lambda)?;
        let cutoff = cutoff.unwrap_or_else(|| nystrom_default_cutoff(self.m()));
        let system = &self.ktk + &self.kmm * (lambda * self.n as f64);
        let sol = pinv_solve(&SymMatrix::new(system)?, &self.kty, cutoff)?;
        let meta = FitMeta {
            method: FitMethod::Nystrom,
            n: self.n,
            indices: self.indices.clone(),
            seed: None,
            cutoff: Some(cutoff),
            rank: sol.rank,
        };
        NystromModel::new(self.kernel, self.centers.clone(), sol.x.as_slice().to_vec(), lambda, meta)
    }
}

/// Default relative cutoff for the m x m Nyström system: `f64::EPSILON * m`.
pub fn nystrom_default_cutoff(m: usize) -> f64 {
    f64::EPSILON * m.max(1) as f64
}

/// Nyström-regularized KRR with centers `data.inputs()[idx]`.
pub fn fit_nystrom(
    data: &EmbeddedDataset,
    kernel: &KernelSpec,
    lambda: f64,
    idx: &IndexSet,
    cutoff: Option<f64>,
) -> Result<NystromModel> {
    check_lambda(lambda)?;
    NystromSystem::prepare(data, kernel, idx)?.solve(lambda, cutoff)
}
