//! Plain-text model files.
//!
//! ```text
//! # seqnystrom model
//! format = 1
//! kernel.kind = gaussian
//! kernel.sigma = 5.0000000000000000e-1
//! lambda = 1.0000000000000000e-3
//! dim = 1
//! m = 2
//! meta.method = nystrom
//! meta.n = 200
//! meta.indices = 10..12
//! meta.seed = 7
//! meta.cutoff = 2.0000000000000000e-12
//! meta.rank = 2
//! scaling.offset = ...        (optional pair)
//! scaling.scale = ...
//! [centers]
//! x1,alpha
//! 1.2000000000000000e-1,3.1000000000000000e0
//! ...
//! ```
//!
//! Numbers carry 17 significant digits, so loading reproduces predictions
//! bit for bit.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::{AffineScaling, FitMeta, FitMethod, NystromModel};
use crate::error::{Error, Result};
use crate::format::{fmt_f64, parse_f64};
use crate::kernels::{KernelKind, KernelSpec};
use crate::points::Points;
use crate::sampling::IndexSet;

pub fn write_model<W: Write>(model: &NystromModel, mut w: W) -> std::io::Result<()> {
    writeln!(w, "# seqnystrom model")?;
    writeln!(w, "format = 1")?;
    writeln!(w, "kernel.kind = {}", model.kernel.kind())?;
    if let Some(s) = model.kernel.bandwidth() {
        writeln!(w, "kernel.sigma = {}", fmt_f64(s))?;
    }
    writeln!(w, "lambda = {}", fmt_f64(model.lambda))?;
    writeln!(w, "dim = {}", model.dim())?;
    writeln!(w, "m = {}", model.alpha.len())?;
    let meta = &model.meta;
    writeln!(w, "meta.method = {}", meta.method)?;
    writeln!(w, "meta.n = {}", meta.n)?;
    writeln!(w, "meta.indices = {}", meta.indices.to_compact_string())?;
    match meta.seed {
        Some(s) => writeln!(w, "meta.seed = {s}")?,
        None => writeln!(w, "meta.seed = none")?,
    }
    match meta.cutoff {
        Some(c) => writeln!(w, "meta.cutoff = {}", fmt_f64(c))?,
        None => writeln!(w, "meta.cutoff = none")?,
    }
    writeln!(w, "meta.rank = {}", meta.rank)?;
    if let Some(s) = model.scaling {
        writeln!(w, "scaling.offset = {}", fmt_f64(s.offset))?;
        writeln!(w, "scaling.scale = {}", fmt_f64(s.scale))?;
    }
    writeln!(w, "[centers]")?;
    let header: Vec<String> = (1..=model.dim()).map(|i| format!("x{i}")).collect();
    writeln!(w, "{},alpha", header.join(","))?;
    for (c, a) in model.centers.iter().zip(&model.alpha) {
        let row: Vec<String> = c.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(w, "{},{}", row.join(","), fmt_f64(*a))?;
    }
    Ok(())
}

fn data_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Data { line, msg: msg.into() }
}

pub fn read_model<R: BufRead>(r: R) -> Result<NystromModel> {
    let mut keys: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut lines = r.lines().enumerate();
    let mut in_centers = false;
    for (i, line) in lines.by_ref() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if t == "[centers]" {
            in_centers = true;
            break;
        }
        let (k, v) = t.split_once('=').ok_or_else(|| data_err(i + 1, "expected `key = value`"))?;
        keys.insert(k.trim().to_string(), (i + 1, v.trim().to_string()));
    }
    if !in_centers {
        return Err(data_err(0, "missing [centers] block"));
    }
    let get = |k: &str| -> Result<&(usize, String)> {
        keys.get(k).ok_or_else(|| data_err(0, format!("missing key `{k}`")))
    };
    let num = |k: &str| -> Result<f64> {
        let (l, v) = get(k)?;
        parse_f64(v).ok_or_else(|| data_err(*l, format!("`{k}` is not a number: `{v}`")))
    };
    let int = |k: &str| -> Result<usize> {
        let (l, v) = get(k)?;
        v.parse().map_err(|_| data_err(*l, format!("`{k}` is not an integer: `{v}`")))
    };
    let (l, fmt) = get("format")?;
    if fmt != "1" {
        return Err(data_err(*l, format!("unsupported model format `{fmt}`")));
    }
    let kind: KernelKind = get("kernel.kind")?.1.parse()?;
    let sigma = if kind == KernelKind::Gaussian { Some(num("kernel.sigma")?) } else { None };
    let kernel = KernelSpec::from_parts(kind, sigma)?;
    let lambda = num("lambda")?;
    let dim = int("dim")?;
    let m = int("m")?;
    let n = int("meta.n")?;
    let method = match get("meta.method")?.1.as_str() {
        "krr" => FitMethod::Krr,
        "nystrom" => FitMethod::Nystrom,
        other => return Err(data_err(get("meta.method")?.0, format!("unknown method `{other}`"))),
    };
    let indices = IndexSet::parse_compact(&get("meta.indices")?.1, n)?;
    let seed = match get("meta.seed")?.1.as_str() {
        "none" => None,
        _ => Some(int("meta.seed")? as u64),
    };
    let cutoff = match get("meta.cutoff")?.1.as_str() {
        "none" => None,
        _ => Some(num("meta.cutoff")?),
    };
    let rank = int("meta.rank")?;
    let scaling = match (keys.contains_key("scaling.offset"), keys.contains_key("scaling.scale")) {
        (true, true) => Some(AffineScaling { offset: num("scaling.offset")?, scale: num("scaling.scale")? }),
        (false, false) => None,
        _ => return Err(data_err(0, "scaling.offset and scaling.scale must appear together")),
    };

    let mut header_seen = false;
    let mut centers = Vec::with_capacity(m * dim);
    let mut alpha = Vec::with_capacity(m);
    for (i, line) in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if !header_seen {
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = t.split(',').collect();
        if fields.len() != dim + 1 {
            return Err(data_err(i + 1, format!("expected {} fields, found {}", dim + 1, fields.len())));
        }
        for f in &fields[..dim] {
            centers.push(parse_f64(f).ok_or_else(|| data_err(i + 1, format!("bad number `{f}`")))?);
        }
        alpha.push(parse_f64(fields[dim]).ok_or_else(|| data_err(i + 1, format!("bad number `{}`", fields[dim])))?);
    }
    if alpha.len() != m {
        return Err(data_err(0, format!("header declares m = {m} but {} centers follow", alpha.len())));
    }
    let meta = FitMeta { method, n, indices, seed, cutoff, rank };
    let model = NystromModel::new(kernel, Points::new(dim, centers)?, alpha, lambda, meta)?;
    Ok(match scaling {
        Some(s) => model.with_scaling(s),
        None => model,
    })
}
