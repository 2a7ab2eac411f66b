//! Layered run configuration: built-in defaults, then the `--config` file,
//! then `--section.key=value` flags.

use std::path::{Path, PathBuf};

use toml::{Table, Value};

use seqnystrom::experiments::{InitRule, LambdaSelection, Mechanism, MechanismConfig, Refit, Target};
use seqnystrom::experiments::lambda_grid;
use seqnystrom::kernels::KernelKind;
use seqnystrom::sampling::{Placement, SubsampleMode, SubsampleSize, SubsampleSpec};
use seqnystrom::timeseries::{MapId, NoiseSpec};
use seqnystrom::KernelSpec;

use crate::error::{CliError, CliResult};

pub const DEFAULTS: &str = r#"
[run]
seed = 0
out = "out"
rescale = false

[mechanism]
kind = "m1"
x0 = "uniform"
burn_in = 0
embed_dim = 1

[noise]
kind = "uniform"
low = -0.7
high = 0.7
mean = 0.0
std = 0.1
p = 0.5

[kernel]
kind = "wendland"
sigma = 0.5

[subsample]
mode = "random"
ratio = 0.01
count = 0
start = 0
gap = 0

[lambda]
select = "fixed"
value = 0.005
grid = [0.0005, 0.0005, 0.01]
holdout = 0.2

[simulate]
n = 2000

[data]
input = ""
embed_dim = 1

[fit]
method = "nystrom"
cutoff = 0.0

[predict]
model = ""
input = ""

[eval]
method = "nystrom"
n_train = 2000
n_test = 50
refit = "per-step"
target = "denoised"

[sweep]
kind = "ratio"
krr = false
reps = 5
n = 2000
ratios = [0.001, 0.005, 0.01, 0.05, 0.1, 0.5]
ns = [2000, 5000, 10000, 20000]
ratio = 0.01
m = 100
positions = ["first", "middle", "last"]
gaps = [5, 20]

[spectrum]
n = 1000
top_k = 100
threshold = 0.001
threshold_kind = "relative"
seeds = [0, 1, 2, 3, 4]

[spectrum.dependent]
source = "mechanism"
kind = "uniform"
low = -1.0
high = 1.0
mean = 0.0
std = 1.0
p = 0.5

[spectrum.iid]
source = "law"
kind = "uniform"
low = -1.0
high = 1.0
mean = 0.0
std = 1.0
p = 0.5

[extract]
n_train = 2000
n_heldout = 2000
bins = 20
acf_lags = 20
"#;

/// Sections echoed and read by each command.
pub fn sections(command: &str) -> &'static [&'static str] {
    match command {
        "simulate" => &["run", "mechanism", "noise", "simulate"],
        "fit" => &["run", "data", "kernel", "subsample", "lambda", "fit"],
        "predict" => &["run", "predict"],
        "eval" => &["run", "data", "mechanism", "noise", "kernel", "subsample", "lambda", "eval"],
        "sweep" => &["run", "mechanism", "noise", "kernel", "subsample", "lambda", "eval", "sweep"],
        "spectrum" => &["run", "mechanism", "noise", "kernel", "spectrum"],
        "noise" => &["run", "data", "mechanism", "noise", "kernel", "subsample", "lambda", "extract"],
        _ => &[],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    table: Table,
}

fn merge(base: &mut Table, over: Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn check_known(defaults: &Table, t: &Table, prefix: &str) -> CliResult<()> {
    for (k, v) in t {
        let path = if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match (defaults.get(k), v) {
            (None, _) => return Err(CliError::config(format!("unknown config key `{path}`"))),
            (Some(Value::Table(d)), Value::Table(sub)) => check_known(d, sub, &path)?,
            (Some(Value::Table(_)), _) => return Err(CliError::config(format!("config key `{path}` must be a section"))),
            (Some(_), Value::Table(_)) => return Err(CliError::config(format!("config key `{path}` is not a section"))),
            _ => {}
        }
    }
    Ok(())
}

/// Parses a flag value as a TOML value, falling back to a bare string.
pub fn parse_value(raw: &str) -> Value {
    match format!("v = {raw}").parse::<Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(raw.to_string())),
        Err(_) => Value::String(raw.to_string()),
    }
}

impl Config {
    /// Defaults, then `file`, then `overrides`, restricted to `command`'s
    /// sections. Keys absent from the defaults are rejected.
    pub fn load(command: &str, file: Option<&Path>, overrides: &[(String, String)]) -> CliResult<Self> {
        let defaults: Table = DEFAULTS.parse().expect("built-in defaults parse");
        let mut cfg = Self { table: defaults.clone() };
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let t: Table = text
                .parse()
                .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
            check_known(&defaults, &t, "").map_err(|e| CliError::config(format!("{}: {}", path.display(), e.message)))?;
            merge(&mut cfg.table, t);
        }
        let known = Self::from_table(defaults);
        for (key, raw) in overrides {
            match known.get(key) {
                Err(_) => return Err(CliError::config(format!("unknown config key `{key}`"))),
                Ok(Value::Table(_)) => return Err(CliError::config(format!("config key `{key}` is a section"))),
                Ok(_) => cfg.set(key, parse_value(raw))?,
            }
        }
        let keep = sections(command);
        cfg.table.retain(|k, _| keep.iter().any(|s| **s == *k));
        Ok(cfg)
    }

    pub fn from_table(table: Table) -> Self {
        Self { table }
    }

    pub fn set(&mut self, path: &str, value: Value) -> CliResult<()> {
        let parts: Vec<&str> = path.split('.').collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(CliError::config(format!("bad config key `{path}`")));
        }
        let mut t = &mut self.table;
        for p in &parts[..parts.len() - 1] {
            let entry = t.entry(p.to_string()).or_insert_with(|| Value::Table(Table::new()));
            t = entry
                .as_table_mut()
                .ok_or_else(|| CliError::config(format!("config key `{path}`: `{p}` is not a section")))?;
        }
        t.insert(parts[parts.len() - 1].to_string(), value);
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.table).expect("config tables serialise")
    }

    pub fn get(&self, path: &str) -> CliResult<&Value> {
        let missing = || CliError::config(format!("missing config key `{path}`"));
        let mut parts = path.split('.').peekable();
        let mut t = &self.table;
        loop {
            let v = t.get(parts.next().ok_or_else(missing)?).ok_or_else(missing)?;
            if parts.peek().is_none() {
                return Ok(v);
            }
            t = v.as_table().ok_or_else(missing)?;
        }
    }

    fn typed<T>(&self, path: &str, what: &str, f: impl FnOnce(&Value) -> Option<T>) -> CliResult<T> {
        let v = self.get(path)?;
        f(v).ok_or_else(|| CliError::config(format!("config key `{path}`: expected {what}, got `{v}`")))
    }

    pub fn f64(&self, path: &str) -> CliResult<f64> {
        self.typed(path, "a number", |v| v.as_float().or_else(|| v.as_integer().map(|i| i as f64)))
    }

    pub fn usize(&self, path: &str) -> CliResult<usize> {
        self.typed(path, "a nonnegative integer", |v| v.as_integer().and_then(|i| usize::try_from(i).ok()))
    }

    pub fn u64(&self, path: &str) -> CliResult<u64> {
        self.typed(path, "a nonnegative integer", |v| v.as_integer().and_then(|i| u64::try_from(i).ok()))
    }

    pub fn bool(&self, path: &str) -> CliResult<bool> {
        self.typed(path, "true or false", Value::as_bool)
    }

    pub fn str(&self, path: &str) -> CliResult<&str> {
        let v = self.get(path)?;
        v.as_str().ok_or_else(|| CliError::config(format!("config key `{path}`: expected a string, got `{v}`")))
    }

    pub fn f64_list(&self, path: &str) -> CliResult<Vec<f64>> {
        self.typed(path, "a list of numbers", |v| {
            v.as_array()?
                .iter()
                .map(|x| x.as_float().or_else(|| x.as_integer().map(|i| i as f64)))
                .collect()
        })
    }

    pub fn usize_list(&self, path: &str) -> CliResult<Vec<usize>> {
        self.typed(path, "a list of nonnegative integers", |v| {
            v.as_array()?.iter().map(|x| x.as_integer().and_then(|i| usize::try_from(i).ok())).collect()
        })
    }

    pub fn u64_list(&self, path: &str) -> CliResult<Vec<u64>> {
        self.typed(path, "a list of nonnegative integers", |v| {
            v.as_array()?.iter().map(|x| x.as_integer().and_then(|i| u64::try_from(i).ok())).collect()
        })
    }

    pub fn str_list(&self, path: &str) -> CliResult<Vec<String>> {
        self.typed(path, "a list of strings", |v| {
            v.as_array()?.iter().map(|x| x.as_str().map(str::to_string)).collect()
        })
    }

    /// Path value; empty string means "not given".
    pub fn path(&self, key: &str) -> CliResult<Option<PathBuf>> {
        let s = self.str(key)?;
        Ok((!s.is_empty()).then(|| PathBuf::from(s)))
    }

    pub fn seed(&self) -> CliResult<u64> {
        self.u64("run.seed")
    }

    pub fn out_dir(&self) -> CliResult<PathBuf> {
        Ok(PathBuf::from(self.str("run.out")?))
    }

    pub fn kernel(&self) -> CliResult<KernelSpec> {
        let kind: KernelKind = self.str("kernel.kind")?.parse().map_err(|e: seqnystrom::Error| CliError::config(format!("kernel.kind: {e}")))?;
        let sigma = match kind {
            KernelKind::Gaussian => Some(self.f64("kernel.sigma")?),
            _ => None,
        };
        KernelSpec::from_parts(kind, sigma).map_err(|e| CliError::config(format!("kernel: {e}")))
    }

    /// Noise law from `section.kind` and its parameters.
    pub fn noise_at(&self, section: &str) -> CliResult<NoiseSpec> {
        let key = |k: &str| format!("{section}.{k}");
        let spec = match self.str(&key("kind"))? {
            "zero" => NoiseSpec::Zero,
            "uniform" => NoiseSpec::Uniform { low: self.f64(&key("low"))?, high: self.f64(&key("high"))? },
            "gaussian" => NoiseSpec::Gaussian { mean: self.f64(&key("mean"))?, std: self.f64(&key("std"))? },
            "bernoulli" => NoiseSpec::Bernoulli { p: self.f64(&key("p"))? },
            other => {
                return Err(CliError::config(format!(
                    "{section}.kind: unknown noise `{other}` (zero, uniform, gaussian, bernoulli)"
                )))
            }
        };
        spec.validated().map_err(|e| CliError::config(format!("{section}: {e}")))
    }

    pub fn x0_rule(&self) -> CliResult<InitRule> {
        let v = self.get("mechanism.x0")?;
        match v {
            Value::String(s) if s == "uniform" => Ok(InitRule::Uniform),
            Value::Float(f) => Ok(InitRule::Fixed(*f)),
            Value::Integer(i) => Ok(InitRule::Fixed(*i as f64)),
            _ => Err(CliError::config(format!("config key `mechanism.x0`: expected \"uniform\" or a number, got `{v}`"))),
        }
    }

    pub fn map_id(&self) -> CliResult<MapId> {
        self.str("mechanism.kind")?
            .parse()
            .map_err(|e: seqnystrom::Error| CliError::config(format!("mechanism.kind: {e}")))
    }

    /// M1 or M2 mechanism for the experiment commands.
    pub fn mechanism(&self) -> CliResult<MechanismConfig> {
        let mechanism = match self.map_id()? {
            MapId::M1 => Mechanism::M1 { noise: self.noise_at("noise")? },
            MapId::M2 => Mechanism::M2,
            other => {
                return Err(CliError::config(format!(
                    "mechanism.kind: `{other}` is only supported by simulate; use m1 or m2"
                )))
            }
        };
        Ok(MechanismConfig {
            mechanism,
            x0: self.x0_rule()?,
            burn_in: self.usize("mechanism.burn_in")?,
            embed_dim: self.usize("mechanism.embed_dim")?,
        })
    }

    pub fn subsample_mode(&self) -> CliResult<SubsampleMode> {
        let mode = self.str("subsample.mode")?;
        Ok(match mode {
            "random" => SubsampleMode::RandomStart,
            "seq" => SubsampleMode::SequentialAt { start: self.usize("subsample.start")? },
            "strided" => SubsampleMode::Strided { start: self.usize("subsample.start")?, gap: self.usize("subsample.gap")? },
            other => SubsampleMode::Positional(other.parse::<Placement>().map_err(|_| {
                CliError::config(format!(
                    "subsample.mode: unknown mode `{other}` (random, seq, strided, first, middle, last)"
                ))
            })?),
        })
    }

    /// `subsample.count` when positive, otherwise `subsample.ratio`.
    pub fn subsample(&self) -> CliResult<SubsampleSpec> {
        let count = self.usize("subsample.count")?;
        let size = if count > 0 { SubsampleSize::Count(count) } else { SubsampleSize::Ratio(self.f64("subsample.ratio")?) };
        Ok(SubsampleSpec::new(size, self.subsample_mode()?))
    }

    pub fn lambda(&self) -> CliResult<LambdaSelection> {
        match self.str("lambda.select")? {
            "fixed" => Ok(LambdaSelection::Fixed(self.f64("lambda.value")?)),
            "cv" => {
                let g = self.f64_list("lambda.grid")?;
                if g.len() != 3 {
                    return Err(CliError::config("lambda.grid: expected [lower, step, upper]"));
                }
                let grid = lambda_grid(g[0], g[1], g[2]).map_err(|e| CliError::config(format!("lambda.grid: {e}")))?;
                Ok(LambdaSelection::CrossValidate { grid, holdout_fraction: self.f64("lambda.holdout")? })
            }
            other => Err(CliError::config(format!("lambda.select: expected fixed or cv, got `{other}`"))),
        }
    }

    pub fn refit(&self) -> CliResult<Refit> {
        match self.str("eval.refit")? {
            "per-step" => Ok(Refit::PerStep),
            "once" => Ok(Refit::Once),
            other => Err(CliError::config(format!("eval.refit: expected per-step or once, got `{other}`"))),
        }
    }

    pub fn target(&self) -> CliResult<Target> {
        match self.str("eval.target")? {
            "noisy" => Ok(Target::Noisy),
            "denoised" => Ok(Target::Denoised),
            other => Err(CliError::config(format!("eval.target: expected noisy or denoised, got `{other}`"))),
        }
    }
}
