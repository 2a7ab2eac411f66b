//! Synthetic mixing processes, delay embedding, noise laws and the ACF.

use std::fmt;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::estimator::EmbeddedDataset;
use crate::format::{fmt_f64, parse_f64};
use crate::points::Points;
use crate::rng::{derive_seed, seeded};

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesOrigin {
    Synthetic { mechanism: String, seed: u64 },
    File(PathBuf),
    Inline,
}

/// Real-valued observations on a uniform time index.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    values: Vec<f64>,
    origin: SeriesOrigin,
}

impl Series {
    pub fn new(values: Vec<f64>, origin: SeriesOrigin) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("series must hold at least one value"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("series value at t = {i} is not finite")));
        }
        Ok(Self { values, origin })
    }

    pub fn inline(values: Vec<f64>) -> Result<Self> {
        Self::new(values, SeriesOrigin::Inline)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn origin(&self) -> &SeriesOrigin {
        &self.origin
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Law of the i.i.d. innovations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    /// Noise-free diagnostics.
    Zero,
    /// Values in `{0, 1}` with `P(1) = p`.
    Bernoulli { p: f64 },
    Uniform { low: f64, high: f64 },
    Gaussian { mean: f64, std: f64 },
}

impl NoiseSpec {
    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::Bernoulli { p }.validated()
    }

    pub fn uniform(low: f64, high: f64) -> Result<Self> {
        Self::Uniform { low, high }.validated()
    }

    pub fn gaussian(mean: f64, std: f64) -> Result<Self> {
        Self::Gaussian { mean, std }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let ok = match self {
            NoiseSpec::Zero => true,
            NoiseSpec::Bernoulli { p } => (0.0..=1.0).contains(&p),
            NoiseSpec::Uniform { low, high } => low.is_finite() && high.is_finite() && low < high,
            NoiseSpec::Gaussian { mean, std } => mean.is_finite() && std.is_finite() && std > 0.0,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::invalid(format!("invalid noise parameters: {self}")))
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            NoiseSpec::Zero => 0.0,
            NoiseSpec::Bernoulli { p } => p,
            NoiseSpec::Uniform { low, high } => 0.5 * (low + high),
            NoiseSpec::Gaussian { mean, .. } => mean,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            NoiseSpec::Zero => 0.0,
            NoiseSpec::Bernoulli { p } => p * (1.0 - p),
            NoiseSpec::Uniform { low, high } => (high - low).powi(2) / 12.0,
            NoiseSpec::Gaussian { std, .. } => std * std,
        }
    }

    /// `n` i.i.d. draws from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        self.validated()?;
        Ok(match *self {
            NoiseSpec::Zero => vec![0.0; n],
            NoiseSpec::Bernoulli { p } => {
                (0..n).map(|_| if rng.random::<f64>() < p { 1.0 } else { 0.0 }).collect()
            }
            NoiseSpec::Uniform { low, high } => {
                (0..n).map(|_| low + (high - low) * rng.random::<f64>()).collect()
            }
            NoiseSpec::Gaussian { mean, std } => {
                let d = Normal::new(mean, std).map_err(|e| Error::invalid(e.to_string()))?;
                (0..n).map(|_| d.sample(rng)).collect()
            }
        })
    }
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseSpec::Zero => write!(f, "zero"),
            NoiseSpec::Bernoulli { p } => write!(f, "bernoulli(p={p})"),
            NoiseSpec::Uniform { low, high } => write!(f, "uniform({low},{high})"),
            NoiseSpec::Gaussian { mean, std } => write!(f, "gaussian(mean={mean},std={std})"),
        }
    }
}

pub fn sample_noise(spec: &NoiseSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    spec.sample(n, &mut seeded(seed))
}

/// Registered autoregressive maps `x_t = f0(x_{t-1}, ..., x_{t-d}[, xi_t]; eps_t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapId {
    /// `0.5 sin(x_{t-1}) + eps_t`
    M1,
    /// `(x_{t-1} + eps_t) / 2`; the noise enters inside the map.
    M2,
    /// `eps_t`
    Zero,
    /// `coef * x_{t-1} + eps_t`
    Linear { coef: f64 },
    /// `0.5 sin(x_{t-1}) + gain * xi_t + eps_t`, driven by an exogenous series.
    M1Exo { gain: f64 },
}

impl MapId {
    /// Lags the map reads.
    pub fn min_memory(&self) -> usize {
        match self {
            MapId::Zero => 0,
            _ => 1,
        }
    }

    pub fn needs_exo(&self) -> bool {
        matches!(self, MapId::M1Exo { .. })
    }

    /// `lags[0]` is `x_{t-1}`; `exo` is `xi_t` when the map reads it.
    pub fn step(&self, lags: &[f64], exo: f64, eps: f64) -> f64 {
        match *self {
            MapId::M1 => 0.5 * lags[0].sin() + eps,
            MapId::M2 => 0.5 * (lags[0] + eps),
            MapId::Zero => eps,
            MapId::Linear { coef } => coef * lags[0] + eps,
            MapId::M1Exo { gain } => 0.5 * lags[0].sin() + gain * exo + eps,
        }
    }

    /// The part of `x_t` contributed by `eps_t`.
    pub fn noise_contribution(&self, eps: f64) -> f64 {
        match self {
            MapId::M2 => 0.5 * eps,
            _ => eps,
        }
    }
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapId::M1 => write!(f, "m1"),
            MapId::M2 => write!(f, "m2"),
            MapId::Zero => write!(f, "zero"),
            MapId::Linear { coef } => write!(f, "linear:{coef}"),
            MapId::M1Exo { gain } => write!(f, "m1exo:{gain}"),
        }
    }
}

impl FromStr for MapId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s.as_str(), None),
        };
        let param = |what: &str| -> Result<f64> {
            arg.and_then(parse_f64)
                .ok_or_else(|| Error::invalid(format!("map `{name}` needs a numeric {what}, e.g. `{name}:0.9`")))
        };
        match name {
            "m1" => Ok(MapId::M1),
            "m2" => Ok(MapId::M2),
            "zero" => Ok(MapId::Zero),
            "linear" => Ok(MapId::Linear { coef: param("coefficient")? }),
            "m1exo" => Ok(MapId::M1Exo { gain: param("gain")? }),
            other => Err(Error::invalid(format!(
                "unknown map `{other}` (registered: m1, m2, zero, linear:<c>, m1exo:<g>)"
            ))),
        }
    }
}

/// A generated series together with the noise that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSeries {
    pub series: Series,
    /// Realised `eps_t`, aligned with `series`.
    pub noise: Vec<f64>,
    /// Additive contribution of `eps_t` to `x_t`; equals `noise` for maps
    /// with additive noise.
    pub innovation: Vec<f64>,
    pub mechanism: String,
}

/// Everything needed to run a registered map.
#[derive(Debug, Clone, PartialEq)]
pub struct NarSpec {
    pub map: MapId,
    /// Memory size `d`.
    pub memory: usize,
    pub noise: NoiseSpec,
    /// The `d` values before `t = 1`, oldest first.
    pub x_init: Vec<f64>,
    /// Exogenous series `xi_t`, needed by ARX maps.
    pub exo: Option<Vec<f64>>,
    /// Leading values generated and then discarded.
    pub burn_in: usize,
}

impl NarSpec {
    pub fn new(map: MapId, noise: NoiseSpec, x_init: Vec<f64>) -> Self {
        let memory = x_init.len();
        Self { map, memory, noise, x_init, exo: None, burn_in: 0 }
    }
}

/// Runs the recursion with a given noise sequence. Returns the series and
/// the additive innovations.
pub fn run_recursion(spec: &NarSpec, noise: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = spec.memory;
    if d < spec.map.min_memory() {
        return Err(Error::invalid(format!("map {} needs memory >= {}", spec.map, spec.map.min_memory())));
    }
    if spec.x_init.len() != d {
        return Err(Error::invalid(format!("x_init has {} values, memory is {d}", spec.x_init.len())));
    }
    if spec.x_init.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("x_init must be finite"));
    }
    let total = noise.len();
    let exo = match (&spec.exo, spec.map.needs_exo()) {
        (Some(e), true) if e.len() >= total => Some(e.as_slice()),
        (Some(e), true) => {
            return Err(Error::invalid(format!("exogenous series has {} values, need {total}", e.len())))
        }
        (None, true) => return Err(Error::invalid(format!("map {} needs an exogenous series", spec.map))),
        (_, false) => None,
    };
    // history holds the most recent value first
    let mut lags: Vec<f64> = spec.x_init.iter().rev().copied().collect();
    let mut out = Vec::with_capacity(total);
    let mut innov = Vec::with_capacity(total);
    for (t, &eps) in noise.iter().enumerate() {
        let xi = exo.map_or(0.0, |e| e[t]);
        let x = spec.map.step(&lags, xi, eps);
        if !x.is_finite() {
            return Err(Error::Numerical(format!("series diverged at t = {}", t + 1)));
        }
        if d > 0 {
            lags.rotate_right(1);
            lags[0] = x;
        }
        out.push(x);
        innov.push(spec.map.noise_contribution(eps));
    }
    Ok((out, innov))
}

/// Generates `n` values of a registered map.
pub fn gen_nar(spec: &NarSpec, n: usize, seed: u64) -> Result<GeneratedSeries> {
    if n == 0 {
        return Err(Error::invalid("series length must be at least 1"));
    }
    let noise = sample_noise(&spec.noise, n + spec.burn_in, derive_seed(seed, "noise"))?;
    let (values, innovation) = run_recursion(spec, &noise)?;
    let b = spec.burn_in;
    let mechanism = format!("{}[d={},noise={}]", spec.map, spec.memory, spec.noise);
    Ok(GeneratedSeries {
        series: Series::new(values[b..].to_vec(), SeriesOrigin::Synthetic { mechanism: mechanism.clone(), seed })?,
        noise: noise[b..].to_vec(),
        innovation: innovation[b..].to_vec(),
        mechanism,
    })
}

/// `x_t = 0.5 sin(x_{t-1}) + eps_t` from initial state `x0`.
pub fn gen_m1(n: usize, noise: &NoiseSpec, x0: f64, seed: u64) -> Result<GeneratedSeries> {
    gen_nar(&NarSpec::new(MapId::M1, noise.validated()?, vec![x0]), n, seed)
}

/// `x_t = (x_{t-1} + eps_t) / 2` with `eps_t ~ Bernoulli(1/2)`.
pub fn gen_m2(n: usize, x0: f64, seed: u64) -> Result<GeneratedSeries> {
    if !(0.0..=1.0).contains(&x0) {
        return Err(Error::invalid(format!("m2 needs x0 in [0, 1], got {x0}")));
    }
    gen_nar(&NarSpec::new(MapId::M2, NoiseSpec::Bernoulli { p: 0.5 }, vec![x0]), n, seed)
}

/// Delay embedding: for `t = d..len`, input `(x_{t-1}, ..., x_{t-d})` and
/// target `x_t`.
pub fn embed(series: &Series, d: usize) -> Result<EmbeddedDataset> {
    embed_values(series.values(), d)
}

pub fn embed_values(values: &[f64], d: usize) -> Result<EmbeddedDataset> {
    if d == 0 {
        return Err(Error::invalid("memory size d must be at least 1"));
    }
    if values.len() < d + 1 {
        return Err(Error::invalid(format!(
            "series of length {} is too short for memory size {d}",
            values.len()
        )));
    }
    let count = values.len() - d;
    let mut inputs = Vec::with_capacity(count * d);
    for t in d..values.len() {
        inputs.extend((1..=d).map(|lag| values[t - lag]));
    }
    EmbeddedDataset::new(Points::new(d, inputs)?, values[d..].to_vec())
}

/// Embeds a generated series and returns the innovations aligned with the
/// targets, so that `y_i - innovation_i` is the noise-free target.
pub fn embed_generated(g: &GeneratedSeries, d: usize) -> Result<(EmbeddedDataset, Vec<f64>)> {
    let data = embed(&g.series, d)?;
    Ok((data, g.innovation[d..].to_vec()))
}

/// ARX embedding: inputs `(x_{t-1}, ..., x_{t-d}, xi_t, ..., xi_{t-d_exo})`.
pub fn embed_exogenous(values: &[f64], exo: &[f64], d: usize, d_exo: usize) -> Result<EmbeddedDataset> {
    if d == 0 {
        return Err(Error::invalid("memory size d must be at least 1"));
    }
    if exo.len() < values.len() {
        return Err(Error::invalid("exogenous series is shorter than the series"));
    }
    let first = d.max(d_exo);
    if values.len() < first + 1 {
        return Err(Error::invalid("series too short for the requested memory"));
    }
    let dim = d + d_exo + 1;
    let mut inputs = Vec::with_capacity((values.len() - first) * dim);
    for t in first..values.len() {
        inputs.extend((1..=d).map(|lag| values[t - lag]));
        inputs.extend((0..=d_exo).map(|lag| exo[t - lag]));
    }
    EmbeddedDataset::new(Points::new(dim, inputs)?, values[first..].to_vec())
}

/// Sample autocorrelation with the full-series mean and the biased
/// (total variance) normalisation, so every value lies in `[-1, 1]`.
pub fn acf(values: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = values.len();
    if n <= max_lag {
        return Err(Error::invalid(format!("series of length {n} too short for max_lag {max_lag}")));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let centred: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let denom: f64 = centred.iter().map(|c| c * c).sum();
    if denom <= f64::EPSILON * f64::EPSILON * n as f64 * (mean * mean).max(1.0) {
        return Err(Error::DegenerateInput("series has zero variance".into()));
    }
    Ok((0..=max_lag)
        .map(|k| {
            if k == 0 {
                return 1.0;
            }
            let s: f64 = centred[..n - k].iter().zip(&centred[k..]).map(|(a, b)| a * b).sum();
            (s / denom).clamp(-1.0, 1.0)
        })
        .collect())
}

/// `t,value` CSV.
pub fn write_series_csv<W: Write>(series: &Series, mut w: W) -> std::io::Result<()> {
    writeln!(w, "t,value")?;
    for (t, v) in series.values().iter().enumerate() {
        writeln!(w, "{t},{}", fmt_f64(*v))?;
    }
    Ok(())
}

/// `t,value,noise` CSV.
pub fn write_generated_csv<W: Write>(g: &GeneratedSeries, mut w: W) -> std::io::Result<()> {
    writeln!(w, "t,value,noise")?;
    for (t, (v, e)) in g.series.values().iter().zip(&g.noise).enumerate() {
        writeln!(w, "{t},{},{}", fmt_f64(*v), fmt_f64(*e))?;
    }
    Ok(())
}

fn data_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Data { line, msg: msg.into() }
}

/// Reads the `value` column of a `t,value[,...]` CSV, checking that `t`
/// counts up from 0.
pub fn read_series_csv<R: BufRead>(r: R, origin: SeriesOrigin) -> Result<Series> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| data_err(1, "empty file"))??;
    let cols: Vec<String> = header.split(',').map(|c| c.trim().to_ascii_lowercase()).collect();
    let t_col = cols.iter().position(|c| c == "t").ok_or_else(|| data_err(1, "header lacks a `t` column"))?;
    let v_col =
        cols.iter().position(|c| c == "value").ok_or_else(|| data_err(1, "header lacks a `value` column"))?;
    let mut values = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(data_err(lineno, format!("expected {} fields, found {}", cols.len(), fields.len())));
        }
        let t: usize = fields[t_col].trim().parse().map_err(|_| data_err(lineno, format!("bad index `{}`", fields[t_col])))?;
        if t != values.len() {
            return Err(data_err(lineno, format!("expected t = {}, found {t}", values.len())));
        }
        let v = parse_f64(fields[v_col])
            .filter(|v| v.is_finite())
            .ok_or_else(|| data_err(lineno, format!("bad value `{}`", fields[v_col])))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(data_err(2, "no observations"));
    }
    Series::new(values, origin)
}

/// `x1,...,xd,y` CSV.
pub fn write_dataset_csv<W: Write>(data: &EmbeddedDataset, mut w: W) -> std::io::Result<()> {
    let header: Vec<String> = (1..=data.dim()).map(|i| format!("x{i}")).collect();
    writeln!(w, "{},y", header.join(","))?;
    for (x, y) in data.inputs().iter().zip(data.targets()) {
        let row: Vec<String> = x.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(w, "{},{}", row.join(","), fmt_f64(*y))?;
    }
    Ok(())
}

pub fn read_dataset_csv<R: BufRead>(r: R) -> Result<EmbeddedDataset> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| data_err(1, "empty file"))??;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let d = cols.len().saturating_sub(1);
    let expected: Vec<String> = (1..=d).map(|i| format!("x{i}")).chain(["y".to_string()]).collect();
    if d == 0 || cols != expected {
        return Err(data_err(1, "header must be `x1,...,xd,y`"));
    }
    let mut inputs = Vec::new();
    let mut targets = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != d + 1 {
            return Err(data_err(lineno, format!("expected {} fields, found {}", d + 1, fields.len())));
        }
        for (j, f) in fields.iter().enumerate() {
            let v = parse_f64(f).filter(|v| v.is_finite()).ok_or_else(|| data_err(lineno, format!("bad number `{f}`")))?;
            if j < d {
                inputs.push(v);
            } else {
                targets.push(v);
            }
        }
    }
    if targets.is_empty() {
        return Err(data_err(2, "no rows"));
    }
    EmbeddedDataset::new(Points::new(d, inputs)?, targets)
}

#[cfg(test)]
mod tests;
