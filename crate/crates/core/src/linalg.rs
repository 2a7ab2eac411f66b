//! Dense symmetric eigendecomposition, eigen-cutoff pseudo-inverse solves and
//! spectrum summaries.

use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::format::fmt_f64;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 0; // nalgebra: 0 means iterate until convergence

/// A square matrix that is exactly symmetric. Construction symmetrizes
/// `(A + A^T) / 2` to absorb rounding asymmetry from assembly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    pub fn new(mut m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::invalid(format!(
                "symmetric matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(Error::invalid("symmetric matrix must have dimension >= 1"));
        }
        let n = m.nrows();
        for j in 0..n {
            for i in j + 1..n {
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }
}

/// Eigenvalues sorted in nonincreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts the given values descending.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("spectrum must hold at least one eigenvalue"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("spectrum values must be finite"));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { eigenvalues: values })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// The `k` largest eigenvalues (all of them when `k >= dim`).
    pub fn top(&self, k: usize) -> Spectrum {
        Spectrum { eigenvalues: self.eigenvalues[..k.min(self.dim())].to_vec() }
    }

    /// `index,eigenvalue` CSV, index from 0, descending eigenvalues.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,eigenvalue")?;
        for (i, v) in self.eigenvalues.iter().enumerate() {
            writeln!(w, "{i},{}", fmt_f64(*v))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SymEigen {
    pub spectrum: Spectrum,
    /// Orthonormal eigenvectors; column `i` pairs with `spectrum.eigenvalues()[i]`.
    pub vectors: DMatrix<f64>,
}

pub fn sym_eig(m: &SymMatrix) -> Result<SymEigen> {
    if m.0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let n = m.dim();
    let eig = SymmetricEigen::try_new(m.0.clone(), EIG_EPS, EIG_MAX_ITER).ok_or_else(|| {
        Error::Numerical(format!("symmetric eigensolver did not converge on a {n}x{n} matrix"))
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("non-finite eigenvalues on a {n}x{n} matrix")));
    }
    Ok(SymEigen { spectrum: Spectrum { eigenvalues: values }, vectors })
}

/// Eigenvalues only, sorted descending.
pub fn sym_eigenvalues(m: &SymMatrix) -> Result<Spectrum> {
    if m.0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let values = m.0.clone().symmetric_eigenvalues();
    Spectrum::from_values(values.as_slice().to_vec())
}

/// Default relative cutoff for [`pinv_solve`]: `1e-12 * dim`.
pub fn default_cutoff(dim: usize) -> f64 {
    1e-12 * dim as f64
}

#[derive(Debug, Clone)]
pub struct PinvSolution {
    pub x: DMatrix<f64>,
    /// Number of eigen-directions that were inverted.
    pub rank: usize,
}

/// `M^+ B`, inverting eigenvalues with `|l_i| > cutoff * max |l_j|` and
/// zeroing the rest.
pub fn pinv_solve(m: &SymMatrix, b: &DMatrix<f64>, cutoff: f64) -> Result<PinvSolution> {
    if b.nrows() != m.dim() {
        return Err(Error::invalid(format!(
            "right-hand side has {} rows, matrix dimension is {}",
            b.nrows(),
            m.dim()
        )));
    }
    if !(cutoff > 0.0 && cutoff < 1.0) {
        return Err(Error::invalid(format!("cutoff must lie in (0, 1), got {cutoff}")));
    }
    let eig = sym_eig(m)?;
    let ev = eig.spectrum.eigenvalues();
    let scale = ev.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let q = &eig.vectors;
    let mut coeffs = q.transpose() * b;
    let mut rank = 0;
    for (i, &l) in ev.iter().enumerate() {
        if scale > 0.0 && l.abs() > cutoff * scale {
            coeffs.row_mut(i).scale_mut(1.0 / l);
            rank += 1;
        } else {
            coeffs.row_mut(i).fill(0.0);
        }
    }
    Ok(PinvSolution { x: q * coeffs, rank })
}

/// Number of eigenvalues strictly greater than `threshold`.
pub fn effective_rank(s: &Spectrum, threshold: f64) -> usize {
    // sorted descending, so the count is a prefix length
    s.eigenvalues.partition_point(|&v| v > threshold)
}
