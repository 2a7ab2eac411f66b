//! One function per subcommand. Each writes into `run.out`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;

use seqnystrom::estimator::{fit_krr, fit_nystrom, read_model, write_model, AffineScaling};
use seqnystrom::experiments::{
    krr_reference, noise_extraction, noise_report, one_step_eval, placement_study, ratio_sweep, rmse, scaling_sweep,
    spectrum_compare, trial_data, Estimator, EvalProtocol, NoiseReport, PointSource, SweepResult, Threshold,
    TrialSettings,
};
use seqnystrom::format::fmt_f64;
use seqnystrom::linalg::Spectrum;
use seqnystrom::rng::{derive_seed, seeded};
use seqnystrom::sampling::Placement;
use seqnystrom::timeseries::{acf, embed, gen_nar, read_dataset_csv, read_series_csv, write_generated_csv, MapId, NarSpec, SeriesOrigin};
use seqnystrom::{EmbeddedDataset, NystromModel};

use crate::config::Config;
use crate::error::{CliError, CliResult};

pub const CONFIG_ECHO: &str = "config.resolved.toml";

pub fn dispatch(command: &str, cfg: &Config) -> CliResult<()> {
    let out = prepare_out(cfg)?;
    let start = Instant::now();
    match command {
        "simulate" => simulate(cfg, &out),
        "fit" => fit(cfg, &out),
        "predict" => predict(cfg, &out),
        "eval" => eval(cfg, &out),
        "sweep" => sweep(cfg, &out),
        "spectrum" => spectrum(cfg, &out),
        "noise" => noise(cfg, &out),
        other => Err(CliError::config(format!("unknown command `{other}`"))),
    }?;
    info!("{command} finished in {:.3} s", start.elapsed().as_secs_f64());
    Ok(())
}

fn prepare_out(cfg: &Config) -> CliResult<PathBuf> {
    let out = cfg.out_dir()?;
    std::fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
    write_file(&out.join(CONFIG_ECHO), |w| w.write_all(cfg.to_toml().as_bytes()))?;
    Ok(out)
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> CliResult<()> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(f);
    body(&mut w).and_then(|()| w.flush()).map_err(|e| CliError::io(path, e))?;
    info!("wrote {}", path.display());
    Ok(())
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    Ok(BufReader::new(File::open(path).map_err(|e| CliError::io(path, e))?))
}

fn required_path(cfg: &Config, key: &str) -> CliResult<PathBuf> {
    cfg.path(key)?.ok_or_else(|| CliError::config(format!("config key `{key}` must name an input file")))
}

fn with_path(path: &Path, e: seqnystrom::Error) -> CliError {
    let mut err = CliError::from(e);
    err.message = format!("{}: {}", path.display(), err.message);
    err
}

/// A `t,value` series is embedded with dimension `d`; an `x1..xd,y` file is read as is.
fn load_pairs(path: &Path, d: usize) -> CliResult<EmbeddedDataset> {
    let mut r = open(path)?;
    let mut header = String::new();
    r.read_line(&mut header).map_err(|e| CliError::io(path, e))?;
    let is_series = header.split(',').next().is_some_and(|c| c.trim().eq_ignore_ascii_case("t"));
    let r = open(path)?;
    if is_series {
        let series = read_series_csv(r, SeriesOrigin::File(path.to_path_buf())).map_err(|e| with_path(path, e))?;
        Ok(embed(&series, d)?)
    } else {
        read_dataset_csv(r).map_err(|e| with_path(path, e))
    }
}

fn input_pairs(cfg: &Config) -> CliResult<EmbeddedDataset> {
    load_pairs(&required_path(cfg, "data.input")?, cfg.usize("data.embed_dim")?)
}

fn simulate(cfg: &Config, out: &Path) -> CliResult<()> {
    let n = cfg.usize("simulate.n")?;
    let seed = cfg.seed()?;
    let map = cfg.map_id()?;
    let g = match map {
        MapId::M1 | MapId::M2 => cfg.mechanism()?.generate(n, seed)?,
        other if other.needs_exo() => {
            return Err(CliError::config(format!("mechanism.kind: `{other}` needs an exogenous series")))
        }
        other => {
            let x0 = cfg.x0_rule()?.value(seed);
            let memory = cfg.usize("mechanism.embed_dim")?.max(other.min_memory());
            let mut spec = NarSpec::new(other, cfg.noise_at("noise")?, vec![x0; memory]);
            spec.burn_in = cfg.usize("mechanism.burn_in")?;
            gen_nar(&spec, n, seed)?
        }
    };
    write_file(&out.join("series.csv"), |w| write_generated_csv(&g, w))
}

fn summary_line(w: &mut impl Write, key: &str, value: impl std::fmt::Display) -> std::io::Result<()> {
    writeln!(w, "{key} = {value}")
}

/// Min-max scaling over the inputs and targets of `data`, when `run.rescale` is set.
fn scaling_for(cfg: &Config, data: &EmbeddedDataset) -> CliResult<Option<AffineScaling>> {
    if !cfg.bool("run.rescale")? {
        return Ok(None);
    }
    let all: Vec<f64> = data.inputs().as_slice().iter().chain(data.targets()).copied().collect();
    Ok(Some(AffineScaling::min_max(&all)?))
}

fn fit(cfg: &Config, out: &Path) -> CliResult<()> {
    let seed = cfg.seed()?;
    let kernel = cfg.kernel()?;
    let estimator = estimator_at(cfg, "fit.method")?;
    let selection = cfg.lambda()?;
    let cutoff = cfg.f64("fit.cutoff")?;
    let cutoff = (cutoff > 0.0).then_some(cutoff);
    let raw = input_pairs(cfg)?;
    let scaling = scaling_for(cfg, &raw)?;
    let data = scaling.as_ref().map_or_else(|| raw.clone(), |s| raw.scaled(s));
    let lambda = selection.select(&data, &kernel, &estimator, derive_seed(seed, "cv"))?;
    let start = Instant::now();
    let mut model = match &estimator {
        Estimator::Krr => fit_krr(&data, &kernel, lambda)?,
        Estimator::Nystrom(spec) => {
            let sub_seed = derive_seed(seed, "subsample");
            let idx = spec.resolve(data.len(), &mut seeded(sub_seed))?;
            fit_nystrom(&data, &kernel, lambda, &idx, cutoff)?.with_seed(sub_seed)
        }
    };
    if let Some(s) = scaling {
        model = model.with_scaling(s);
    }
    info!("fit {} pairs with m = {} in {:.3} s", data.len(), model.alpha().len(), start.elapsed().as_secs_f64());
    let residuals = model.residuals(&raw)?;
    let train_rmse = rmse(&residuals, &vec![0.0; residuals.len()])?;
    write_file(&out.join("model.txt"), |w| write_model(&model, w))?;
    let meta = model.meta();
    write_file(&out.join("fit_summary.txt"), |w| {
        summary_line(w, "method", meta.method)?;
        summary_line(w, "kernel", model.kernel().kind())?;
        if let Some(sigma) = model.kernel().bandwidth() {
            summary_line(w, "sigma", fmt_f64(sigma))?;
        }
        summary_line(w, "n", meta.n)?;
        summary_line(w, "m", model.alpha().len())?;
        summary_line(w, "lambda", fmt_f64(lambda))?;
        summary_line(w, "rank", meta.rank)?;
        summary_line(w, "rescale", model.scaling().is_some())?;
        summary_line(w, "train_rmse", fmt_f64(train_rmse))?;
        summary_line(w, "indices", meta.indices.to_compact_string())
    })
}

fn predict(cfg: &Config, out: &Path) -> CliResult<()> {
    let path = required_path(cfg, "predict.model")?;
    let model: NystromModel = read_model(open(&path)?).map_err(|e| with_path(&path, e))?;
    let data = load_pairs(&required_path(cfg, "predict.input")?, model.dim())?;
    let pred = model.predict_many(data.inputs())?;
    write_file(&out.join("predictions.csv"), |w| {
        writeln!(w, "i,prediction,target")?;
        for (i, (p, y)) in pred.iter().zip(data.targets()).enumerate() {
            writeln!(w, "{i},{},{}", fmt_f64(*p), fmt_f64(*y))?;
        }
        Ok(())
    })
}

fn estimator_at(cfg: &Config, key: &str) -> CliResult<Estimator> {
    match cfg.str(key)? {
        "krr" => Ok(Estimator::Krr),
        "nystrom" => Ok(Estimator::Nystrom(cfg.subsample()?)),
        other => Err(CliError::config(format!("{key}: expected krr or nystrom, got `{other}`"))),
    }
}

fn eval(cfg: &Config, out: &Path) -> CliResult<()> {
    let seed = cfg.seed()?;
    let kernel = cfg.kernel()?;
    let estimator = estimator_at(cfg, "eval.method")?;
    let n_train = cfg.usize("eval.n_train")?;
    let n_test = cfg.usize("eval.n_test")?;
    let protocol = EvalProtocol::new(n_train, n_test, cfg.refit()?, cfg.target()?)?;
    // same seeds as a sweep trial with this master seed
    let (train, test, innov) = match cfg.path("data.input")? {
        Some(_) => {
            if protocol.target != seqnystrom::experiments::Target::Noisy {
                return Err(CliError::config("eval.target: file input has no innovations; use noisy"));
            }
            let data = input_pairs(cfg)?;
            if data.len() < n_train + n_test {
                return Err(CliError::data(format!(
                    "input has {} pairs, eval needs n_train + n_test = {}",
                    data.len(),
                    n_train + n_test
                )));
            }
            (data.slice(0, n_train)?, data.slice(n_train, n_train + n_test)?, None)
        }
        None => {
            let d = trial_data(&cfg.mechanism()?, n_train, n_test, seed)?;
            (d.train, d.test, Some(d.innov))
        }
    };
    // scaling is fitted on the training pairs only
    let scaling = scaling_for(cfg, &train)?;
    let (train, test, innov) = match &scaling {
        None => (train, test, innov),
        Some(s) => {
            let innov = innov.map(|v| v.iter().map(|e| e / s.scale).collect::<Vec<f64>>());
            (train.scaled(s), test.scaled(s), innov)
        }
    };
    let lambda = cfg.lambda()?.select(&train, &kernel, &estimator, derive_seed(seed, "cv"))?;
    let mut outcome = one_step_eval(
        &train,
        &test,
        innov.as_deref(),
        &kernel,
        lambda,
        &estimator,
        &protocol,
        derive_seed(seed, "subsample"),
    )?;
    if let Some(s) = &scaling {
        outcome.predictions.iter_mut().chain(outcome.truth.iter_mut()).for_each(|v| *v = s.inverse(*v));
        outcome.rmse = rmse(&outcome.predictions, &outcome.truth)?;
    }
    write_file(&out.join("eval_predictions.csv"), |w| {
        writeln!(w, "step,prediction,truth")?;
        for (k, (p, t)) in outcome.predictions.iter().zip(&outcome.truth).enumerate() {
            writeln!(w, "{k},{},{}", fmt_f64(*p), fmt_f64(*t))?;
        }
        Ok(())
    })?;
    write_file(&out.join("eval_summary.txt"), |w| {
        summary_line(w, "estimator", estimator.label())?;
        summary_line(w, "n_train", n_train)?;
        summary_line(w, "n_test", n_test)?;
        summary_line(w, "m", outcome.m)?;
        summary_line(w, "lambda", fmt_f64(lambda))?;
        summary_line(w, "rescale", scaling.is_some())?;
        summary_line(w, "rmse", fmt_f64(outcome.rmse))
    })
}

fn trial_settings(cfg: &Config) -> CliResult<TrialSettings> {
    Ok(TrialSettings {
        kernel: cfg.kernel()?,
        n_test: cfg.usize("eval.n_test")?,
        refit: cfg.refit()?,
        target: cfg.target()?,
        lambda: cfg.lambda()?,
    })
}

fn sweep(cfg: &Config, out: &Path) -> CliResult<()> {
    let seed = cfg.seed()?;
    let mech = cfg.mechanism()?;
    let settings = trial_settings(cfg)?;
    let reps = cfg.usize("sweep.reps")?;
    let mut result: SweepResult = match cfg.str("sweep.kind")? {
        "ratio" => {
            let ratios = cfg.f64_list("sweep.ratios")?;
            ratio_sweep(&mech, cfg.usize("sweep.n")?, &ratios, cfg.subsample_mode()?, &settings, reps, seed)?
        }
        "scaling" => {
            let ns = cfg.usize_list("sweep.ns")?;
            let ratio = cfg.f64("sweep.ratio")?;
            scaling_sweep(&mech, &ns, ratio, cfg.subsample_mode()?, &settings, reps, seed)?
        }
        "placement" => {
            let positions = cfg
                .str_list("sweep.positions")?
                .iter()
                .map(|p| {
                    p.parse::<Placement>()
                        .map_err(|_| CliError::config(format!("sweep.positions: unknown position `{p}` (first, middle, last)")))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let gaps = cfg.usize_list("sweep.gaps")?;
            placement_study(&mech, cfg.usize("sweep.n")?, cfg.usize("sweep.m")?, &positions, &gaps, &settings, reps, seed)?
        }
        other => {
            return Err(CliError::config(format!("sweep.kind: expected ratio, scaling or placement, got `{other}`")))
        }
    };
    if cfg.bool("sweep.krr")? {
        let n = match cfg.str("sweep.kind")? {
            "scaling" => *cfg.usize_list("sweep.ns")?.last().expect("scaling sweep checked ns"),
            _ => cfg.usize("sweep.n")?,
        };
        let krr = krr_reference(&mech, n, &settings, reps, seed)?;
        result.points.extend(krr.points);
        result.trials.extend(krr.trials);
    }
    for p in &result.points {
        info!("{}: m = {}, rmse {} +- {}", p.label, p.m, fmt_f64(p.rmse_mean), fmt_f64(p.rmse_std));
    }
    write_file(&out.join("sweep_trials.csv"), |w| result.write_trials_csv(w))?;
    write_file(&out.join("sweep_summary.csv"), |w| result.write_summary_csv(w))?;
    if let Some(slope) = result.slope {
        write_file(&out.join("sweep_slope.txt"), |w| summary_line(w, "loglog_slope", fmt_f64(slope)))?;
    }
    Ok(())
}

fn point_source(cfg: &Config, section: &str) -> CliResult<PointSource> {
    let key = format!("{section}.source");
    match cfg.str(&key)? {
        "mechanism" => Ok(PointSource::Dependent(cfg.mechanism()?)),
        "law" => Ok(PointSource::Iid(cfg.noise_at(section)?)),
        other => Err(CliError::config(format!("{key}: expected mechanism or law, got `{other}`"))),
    }
}

fn write_spectra(w: &mut impl Write, rows: &[(u64, &Spectrum)]) -> std::io::Result<()> {
    writeln!(w, "seed,index,eigenvalue")?;
    for (seed, s) in rows {
        for (i, v) in s.eigenvalues().iter().enumerate() {
            writeln!(w, "{seed},{i},{}", fmt_f64(*v))?;
        }
    }
    Ok(())
}

fn spectrum(cfg: &Config, out: &Path) -> CliResult<()> {
    let threshold = cfg.f64("spectrum.threshold")?;
    let threshold = match cfg.str("spectrum.threshold_kind")? {
        "relative" => Threshold::RelativeToMax(threshold),
        "absolute" => Threshold::Absolute(threshold),
        other => {
            return Err(CliError::config(format!(
                "spectrum.threshold_kind: expected relative or absolute, got `{other}`"
            )))
        }
    };
    // per-pair seeds are derived from the master seed
    let master = cfg.seed()?;
    let seeds: Vec<u64> = cfg.u64_list("spectrum.seeds")?.iter().map(|&s| master.wrapping_add(s)).collect();
    let pairs = spectrum_compare(
        &cfg.kernel()?,
        cfg.usize("spectrum.n")?,
        cfg.usize("spectrum.top_k")?,
        &point_source(cfg, "spectrum.dependent")?,
        &point_source(cfg, "spectrum.iid")?,
        threshold,
        &seeds,
    )?;
    let dep: Vec<(u64, &Spectrum)> = pairs.iter().map(|p| (p.seed, &p.dependent)).collect();
    let iid: Vec<(u64, &Spectrum)> = pairs.iter().map(|p| (p.seed, &p.iid)).collect();
    write_file(&out.join("spectrum_dependent.csv"), |w| write_spectra(w, &dep))?;
    write_file(&out.join("spectrum_iid.csv"), |w| write_spectra(w, &iid))?;
    write_file(&out.join("spectrum_ranks.csv"), |w| {
        writeln!(w, "seed,dependent_rank,iid_rank")?;
        for p in &pairs {
            writeln!(w, "{},{},{}", p.seed, p.dependent_rank, p.iid_rank)?;
        }
        Ok(())
    })
}

fn noise(cfg: &Config, out: &Path) -> CliResult<()> {
    let seed = cfg.seed()?;
    let kernel = cfg.kernel()?;
    let estimator = Estimator::Nystrom(cfg.subsample()?);
    let selection = cfg.lambda()?;
    let n = cfg.usize("extract.n_train")?;
    let bins = cfg.usize("extract.bins")?;
    let (model, report, series, true_noise): (NystromModel, NoiseReport, Vec<f64>, Option<Vec<f64>>) =
        match cfg.path("data.input")? {
            None => {
                if cfg.bool("run.rescale")? {
                    return Err(CliError::config("--rescale applies to file input only"));
                }
                let x = noise_extraction(
                    &cfg.mechanism()?,
                    n,
                    cfg.usize("extract.n_heldout")?,
                    &estimator,
                    &kernel,
                    &selection,
                    bins,
                    seed,
                )?;
                (x.model, x.report, x.train_targets, Some(x.true_noise))
            }
            Some(_) => {
                let data = input_pairs(cfg)?;
                if data.len() <= n {
                    return Err(CliError::data(format!(
                        "input has {} pairs, need more than extract.n_train = {n}",
                        data.len()
                    )));
                }
                let end = (n + cfg.usize("extract.n_heldout")?).min(data.len());
                let train = data.slice(0, n)?;
                let heldout = data.slice(n, end)?;
                let scaling = scaling_for(cfg, &train)?;
                let fit_on = scaling.as_ref().map_or_else(|| train.clone(), |s| train.scaled(s));
                let lambda = selection.select(&fit_on, &kernel, &estimator, derive_seed(seed, "cv"))?;
                let mut model = estimator.fit(&fit_on, &kernel, lambda, derive_seed(seed, "subsample"))?;
                if let Some(s) = scaling {
                    model = model.with_scaling(s);
                }
                let report = noise_report(&model, &heldout, None, bins)?;
                (model, report, train.targets().to_vec(), None)
            }
        };
    let lags = cfg.usize("extract.acf_lags")?;
    let acf_series = acf(&series, lags)?;
    let acf_resid = acf(&report.residuals, lags)?;
    write_file(&out.join("noise_hist.csv"), |w| report.write_histogram_csv(w))?;
    write_file(&out.join("noise_summary.txt"), |w| {
        summary_line(w, "lambda", fmt_f64(model.lambda()))?;
        summary_line(w, "m", model.alpha().len())?;
        summary_line(w, "rescale", model.scaling().is_some())?;
        report.write_summary(w)
    })?;
    write_file(&out.join("residuals.csv"), |w| {
        writeln!(w, "i,residual,true_noise")?;
        for (i, r) in report.residuals.iter().enumerate() {
            let t = true_noise.as_ref().map_or(String::new(), |t| fmt_f64(t[i]));
            writeln!(w, "{i},{},{t}", fmt_f64(*r))?;
        }
        Ok(())
    })?;
    write_file(&out.join("acf.csv"), |w| {
        writeln!(w, "lag,series,residual")?;
        for (k, (a, b)) in acf_series.iter().zip(&acf_resid).enumerate() {
            writeln!(w, "{k},{},{}", fmt_f64(*a), fmt_f64(*b))?;
        }
        Ok(())
    })
}
