//! Mercer kernels and Gram-matrix blocks.
//!
//! All kernels use the Euclidean distance. The Wendland kernel
//! `(1 - r)^4 (4r + 1)` has compact support on `r <= 1`; the Gaussian kernel
//! is `exp(-r^2 / (2 sigma^2))`. Both satisfy `K(x, x) <= 1`.
//! `1 + min(x, x')` is defined for scalar inputs only, is unbounded, and is
//! positive semi-definite only on `x >= -1`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::points::Points;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Wendland,
    Gaussian,
    MinPlusOne,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Wendland => "wendland",
            KernelKind::Gaussian => "gaussian",
            KernelKind::MinPlusOne => "minplusone",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "wendland" => Ok(KernelKind::Wendland),
            "gaussian" => Ok(KernelKind::Gaussian),
            "minplusone" => Ok(KernelKind::MinPlusOne),
            other => Err(Error::UnsupportedKernel(format!(
                "unknown kernel kind `{other}` (expected wendland, gaussian or minplusone)"
            ))),
        }
    }
}

/// A kernel together with its parameters.
///
/// `bandwidth` is the Gaussian `sigma`; it is carried but ignored by the
/// other kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    kind: KernelKind,
    bandwidth: f64,
}

impl KernelSpec {
    pub fn wendland() -> Self {
        Self { kind: KernelKind::Wendland, bandwidth: 1.0 }
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::invalid(format!("gaussian bandwidth must be positive, got {sigma}")));
        }
        Ok(Self { kind: KernelKind::Gaussian, bandwidth: sigma })
    }

    pub fn min_plus_one() -> Self {
        Self { kind: KernelKind::MinPlusOne, bandwidth: 1.0 }
    }

    /// Builds a spec from a kind and an optional bandwidth (required for Gaussian).
    pub fn from_parts(kind: KernelKind, sigma: Option<f64>) -> Result<Self> {
        match kind {
            KernelKind::Wendland => Ok(Self::wendland()),
            KernelKind::MinPlusOne => Ok(Self::min_plus_one()),
            KernelKind::Gaussian => Self::gaussian(sigma.ok_or_else(|| {
                Error::invalid("gaussian kernel requires a bandwidth (kernel.sigma)")
            })?),
        }
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    /// Gaussian `sigma`; `None` for the other kinds.
    pub fn bandwidth(&self) -> Option<f64> {
        (self.kind == KernelKind::Gaussian).then_some(self.bandwidth)
    }

    /// Whether `sup_x K(x, x) <= 1` holds for this kind.
    pub fn is_bounded_by_one(&self) -> bool {
        !matches!(self.kind, KernelKind::MinPlusOne)
    }

    /// Checks that inputs of dimension `dim` are acceptable for this kernel.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if dim == 0 {
            return Err(Error::invalid("point dimension must be at least 1"));
        }
        if self.kind == KernelKind::MinPlusOne && dim != 1 {
            return Err(Error::UnsupportedKernel(format!(
                "minplusone is defined for scalar inputs only, got dimension {dim}"
            )));
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::invalid(format!(
                "dimension mismatch: {} vs {}",
                x.len(),
                y.len()
            )));
        }
        self.check_dim(x.len())?;
        Ok(self.eval_unchecked(x, y))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match self.kind {
            KernelKind::Wendland => wendland(sq_dist(x, y).sqrt()),
            KernelKind::Gaussian => {
                (-sq_dist(x, y) / (2.0 * self.bandwidth * self.bandwidth)).exp()
            }
            KernelKind::MinPlusOne => 1.0 + x[0].min(y[0]),
        }
    }
}

#[inline]
fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

#[inline]
fn wendland(r: f64) -> f64 {
    if r > 1.0 {
        return 0.0;
    }
    let s = 1.0 - r;
    let s2 = s * s;
    s2 * s2 * (4.0 * r + 1.0)
}

fn check_pair(kernel: &KernelSpec, rows: &Points, cols: &Points) -> Result<()> {
    if rows.dim() != cols.dim() {
        return Err(Error::invalid(format!(
            "dimension mismatch: rows have dimension {}, columns {}",
            rows.dim(),
            cols.dim()
        )));
    }
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::invalid("gram blocks need at least one row and one column"));
    }
    kernel.check_dim(rows.dim())
}

/// `K[i, j] = k(rows[i], cols[j])`, an `n x m` block.
pub fn gram(kernel: &KernelSpec, rows: &Points, cols: &Points) -> Result<DMatrix<f64>> {
    check_pair(kernel, rows, cols)?;
    let n = rows.len();
    let mut out = DMatrix::<f64>::zeros(n, cols.len());
    // column-major storage: one column per center
    out.as_mut_slice()
        .par_chunks_mut(n)
        .zip(cols.as_slice().par_chunks(cols.dim()))
        .for_each(|(col, c)| {
            for (v, x) in col.iter_mut().zip(rows.iter()) {
                *v = kernel.eval_unchecked(x, c);
            }
        });
    Ok(out)
}

/// Square Gram matrix of a point set with itself, assembled so that it is
/// exactly symmetric.
pub fn gram_self(kernel: &KernelSpec, points: &Points) -> Result<DMatrix<f64>> {
    let mut k = gram(kernel, points, points)?;
    let n = points.len();
    for j in 0..n {
        for i in j + 1..n {
            k[(j, i)] = k[(i, j)];
        }
    }
    Ok(k)
}
