//! Index sets selecting which kernel-matrix columns are kept.
//!
//! Indices are 0-based everywhere: a window start `j` ranges over
//! `0..=n - m`, which corresponds to the 1-based `[1, n - m + 1]` range of
//! the sequential sub-sampling definition.

use std::fmt;

use rand::RngCore;

use crate::error::{Error, Result};

/// How many columns to keep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SubsampleSize {
    Count(usize),
    /// `max(1, floor(ratio * n))`.
    Ratio(f64),
}

impl SubsampleSize {
    pub fn resolve(&self, n: usize) -> Result<usize> {
        match *self {
            SubsampleSize::Count(m) => {
                if m == 0 {
                    return Err(Error::invalid("sub-sample size m must be at least 1"));
                }
                Ok(m)
            }
            SubsampleSize::Ratio(r) => {
                if !(r > 0.0 && r <= 1.0) {
                    return Err(Error::invalid(format!("sub-sampling ratio must lie in (0, 1], got {r}")));
                }
                // the epsilon absorbs products like 0.29 * 100 = 28.999999999999996
                let m = (r * n as f64 + 1e-9).floor() as usize;
                Ok(m.clamp(1, n.max(1)))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Placement {
    First,
    Middle,
    Last,
}

impl Placement {
    pub fn label(self) -> &'static str {
        match self {
            Placement::First => "First",
            Placement::Middle => "Middle",
            Placement::Last => "Last",
        }
    }

    pub fn start(self, n: usize, m: usize) -> usize {
        match self {
            Placement::First => 0,
            Placement::Middle => (n - m) / 2,
            Placement::Last => n - m,
        }
    }
}

impl std::str::FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "first" => Ok(Placement::First),
            "middle" => Ok(Placement::Middle),
            "last" => Ok(Placement::Last),
            other => Err(Error::invalid(format!("unknown placement `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SubsampleMode {
    /// Window `{start, ..., start + m - 1}`.
    SequentialAt { start: usize },
    /// Window with a start drawn uniformly from `0..=n - m`.
    RandomStart,
    Positional(Placement),
    /// `{start, start + (gap + 1), start + 2 (gap + 1), ...}`; `gap = 0` is sequential.
    Strided { start: usize, gap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsampleSpec {
    pub size: SubsampleSize,
    pub mode: SubsampleMode,
}

impl SubsampleSpec {
    pub fn new(size: SubsampleSize, mode: SubsampleMode) -> Self {
        Self { size, mode }
    }

    /// Every row of the dataset; Nyström with this set is full KRR.
    pub fn full() -> Self {
        Self::new(SubsampleSize::Ratio(1.0), SubsampleMode::SequentialAt { start: 0 })
    }

    /// Label used in sweep outputs (`First`, `Intv.5`, `Seq@3`, `Random`).
    pub fn label(&self) -> String {
        match self.mode {
            SubsampleMode::SequentialAt { start } => format!("Seq@{start}"),
            SubsampleMode::RandomStart => "Random".to_string(),
            SubsampleMode::Positional(p) => p.label().to_string(),
            SubsampleMode::Strided { gap, .. } => format!("Intv.{gap}"),
        }
    }

    /// Resolves the spec against a dataset of `n` rows.
    ///
    /// `RandomStart` consumes exactly one `u64` from `rng`; the other modes
    /// leave it untouched.
    pub fn resolve<R: RngCore + ?Sized>(&self, n: usize, rng: &mut R) -> Result<IndexSet> {
        if n == 0 {
            return Err(Error::invalid("cannot sub-sample an empty dataset"));
        }
        let m = self.size.resolve(n)?;
        if m > n {
            return Err(Error::invalid(format!(
                "sub-sample size m = {m} exceeds dataset size n = {n}; maximal feasible m is {n}"
            )));
        }
        let (start, step) = match self.mode {
            SubsampleMode::SequentialAt { start } => {
                if start + m > n {
                    return Err(Error::invalid(format!(
                        "window starting at {start} with m = {m} overruns n = {n}; maximal feasible m is {}",
                        n.saturating_sub(start)
                    )));
                }
                (start, 1)
            }
            SubsampleMode::RandomStart => (uniform_below(rng, (n - m + 1) as u64) as usize, 1),
            SubsampleMode::Positional(p) => (p.start(n, m), 1),
            SubsampleMode::Strided { start, gap } => {
                let step = gap + 1;
                let last = start.checked_add((m - 1).saturating_mul(step));
                if last.is_none_or(|l| l > n - 1) {
                    let max_m = if start < n { (n - 1 - start) / step + 1 } else { 0 };
                    return Err(Error::invalid(format!(
                        "strided sub-sample (start {start}, gap {gap}) with m = {m} overruns n = {n}; maximal feasible m is {max_m}"
                    )));
                }
                (start, step)
            }
        };
        Ok(IndexSet { indices: (0..m).map(|i| start + i * step).collect() })
    }
}

impl fmt::Display for SubsampleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Uniform integer in `0..span` from a single 64-bit draw (multiply-shift).
fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, span: u64) -> u64 {
    ((rng.next_u64() as u128 * span as u128) >> 64) as u64
}

/// Strictly increasing 0-based row indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::invalid("index set is empty"));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("index set must be strictly increasing"));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::invalid(format!("index {last} out of range for n = {n}")));
            }
        }
        Ok(Self { indices })
    }

    pub fn all(n: usize) -> Self {
        Self { indices: (0..n).collect() }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn start(&self) -> usize {
        self.indices[0]
    }

    pub fn is_contiguous(&self) -> bool {
        self.indices.last().is_none_or(|&l| l - self.indices[0] + 1 == self.indices.len())
    }

    /// Compact text form: `a..b` for contiguous sets, otherwise space-separated.
    pub fn to_compact_string(&self) -> String {
        if self.is_contiguous() {
            format!("{}..{}", self.indices[0], self.indices[self.indices.len() - 1] + 1)
        } else {
            self.indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
        }
    }

    pub fn parse_compact(s: &str, n: usize) -> Result<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| Error::invalid(format!("bad index range `{s}`")))?;
            let b: usize = b.trim().parse().map_err(|_| Error::invalid(format!("bad index range `{s}`")))?;
            return Self::new((a..b).collect(), n);
        }
        let idx = s
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::invalid(format!("bad index `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(idx, n)
    }
}
