use std::path::Path;

use super::config::RunConfig;
use super::manifest::{digest_file, timestamp, ArtifactKind, FileDigest, RunManifest, SweepInfo};
use super::tables::{
    histogram_rows, profiles_from_stats, write_profiles, write_rows, write_timeseries, SweepRow,
    Timeseries, HISTOGRAM_HEADER, SWEEP_HEADER,
};
use crate::ensemble::{run_ensemble, run_sweep, EnsembleOptions, SweepAxis, SweepFit, SweepPlan};
use crate::error::Result;
use crate::gpe::{KickKind, SimConfig};
use crate::observables::EnsembleStats;
use crate::precision::{Mp, Real};

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const PROFILES_FILE: &str = "profiles.csv";
pub const HISTOGRAMS_FILE: &str = "histograms.csv";
pub const SWEEP_FILE: &str = "sweep.csv";

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

/// Write the three tables for one ensemble under `dir/prefix`; returns digests
/// relative to `dir` and any refused histogram fits.
pub fn write_tables<R: Real>(
    dir: &Path,
    prefix: &str,
    stats: &EnsembleStats<R>,
    bins: usize,
) -> Result<(Vec<FileDigest>, Vec<String>)> {
    ensure_dir(&dir.join(prefix))?;
    let ctx = *stats.context();
    let name = |f: &str| {
        if prefix.is_empty() {
            f.to_string()
        } else {
            format!("{prefix}/{f}")
        }
    };
    write_timeseries(&dir.join(name(TIMESERIES_FILE)), &Timeseries::from_stats(stats), &ctx)?;
    write_profiles(&dir.join(name(PROFILES_FILE)), &profiles_from_stats(stats), &ctx)?;
    let (rows, refused) = histogram_rows(stats, bins);
    write_rows(&dir.join(name(HISTOGRAMS_FILE)), &rows, &HISTOGRAM_HEADER)?;
    let notes = refused
        .into_iter()
        .map(|(q, t, why)| format!("histogram q = {q}, t = {t} refused: {why}"))
        .collect();
    let files = [TIMESERIES_FILE, PROFILES_FILE, HISTOGRAMS_FILE]
        .iter()
        .map(|f| digest_file(dir, &name(f)))
        .collect::<Result<Vec<_>>>()?;
    Ok((files, notes))
}

/// `config` with defaulted physics spelled out.
fn resolved(config: &RunConfig, sim: &SimConfig) -> RunConfig {
    let mut echo = config.clone();
    if let KickKind::Finite { f } = sim.kick {
        echo.f = Some(f);
    }
    echo
}

fn run_generic<R: Real>(config: &RunConfig, dir: &Path, options: &EnsembleOptions) -> Result<RunManifest> {
    let sim = config.sim_config()?;
    let constraint = config.constraint()?;
    let probes = config.probes()?;
    ensure_dir(dir)?;
    let started = timestamp();
    let stats = run_ensemble::<R>(&sim, &constraint, &probes, options)?;
    let (files, notes) = write_tables(dir, "", &stats, config.histogram_bins)?;
    let manifest = RunManifest {
        kind: ArtifactKind::Run,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        config: resolved(config, &sim),
        sim: sim.clone(),
        seed: sim.seed,
        started,
        finished: timestamp(),
        workers: options.workers,
        completed: stats.completed(),
        aborted: stats.aborted(),
        notes,
        sweep: None,
        files,
    };
    manifest.write(dir)?;
    Ok(manifest)
}

/// Run one ensemble and write its artifacts and manifest to `dir`.
pub fn execute_run(config: &RunConfig, dir: &Path, options: &EnsembleOptions) -> Result<RunManifest> {
    match config.digits {
        None => run_generic::<f64>(config, dir, options),
        Some(_) => run_generic::<Mp>(config, dir, options),
    }
}

fn sweep_generic<R: Real>(
    base: &RunConfig,
    axis: SweepAxis,
    values: &[f64],
    fit: SweepFit,
    dir: &Path,
    options: &EnsembleOptions,
) -> Result<RunManifest> {
    let sim = base.sim_config()?;
    let mut plan = SweepPlan::over(&sim, axis, values, fit)?;
    plan.constraint = base.constraint()?;
    plan.probes = base.probes()?;
    ensure_dir(dir)?;
    let started = timestamp();
    let result = run_sweep::<R>(&plan, options)?;
    let mut files = Vec::new();
    let mut notes = Vec::new();
    let mut rows = Vec::new();
    let (mut completed, mut aborted) = (0, 0);
    for (k, p) in result.points.iter().enumerate() {
        if let Some(stats) = &p.stats {
            let (f, n) = write_tables(dir, &format!("point_{k:02}"), stats, base.histogram_bins)?;
            files.extend(f);
            notes.extend(n.into_iter().map(|s| format!("point {k}: {s}")));
            completed += stats.completed();
            aborted += stats.aborted();
        }
        if let Some(e) = &p.error {
            notes.push(format!("point {k} ({} = {}): {e}", axis.label(), p.value));
        }
        rows.push(SweepRow {
            value: p.value,
            fitted: p.fitted.as_ref().map(|f| f.0),
            fitted_sd: p.fitted.as_ref().map(|(v, fit)| match fit.model {
                crate::analytic::FitModel::Exponential => fit.value_sd * v * v,
                crate::analytic::FitModel::PowerLaw => fit.value_sd,
            }),
            completed: p.stats.as_ref().map(|s| s.completed()),
            aborted: p.stats.as_ref().map(|s| s.aborted()),
            error: p.error.clone(),
        });
    }
    write_rows(&dir.join(SWEEP_FILE), &rows, &SWEEP_HEADER)?;
    files.push(digest_file(dir, SWEEP_FILE)?);
    let manifest = RunManifest {
        kind: ArtifactKind::Sweep,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        config: resolved(base, &sim),
        sim: sim.clone(),
        seed: sim.seed,
        started,
        finished: timestamp(),
        workers: options.workers,
        completed,
        aborted,
        notes,
        sweep: Some(SweepInfo {
            axis,
            values: values.to_vec(),
            fit,
            scaling: result.scaling,
        }),
        files,
    };
    manifest.write(dir)?;
    Ok(manifest)
}

/// Run a one-axis sweep around `base`, writing per-point tables under
/// `point_NN/`, a `sweep.csv` summary and the manifest.
pub fn execute_sweep(
    base: &RunConfig,
    axis: SweepAxis,
    values: &[f64],
    fit: SweepFit,
    dir: &Path,
    options: &EnsembleOptions,
) -> Result<RunManifest> {
    if base.digits.is_none() && axis != SweepAxis::Digits {
        sweep_generic::<f64>(base, axis, values, fit, dir, options)
    } else {
        sweep_generic::<Mp>(base, axis, values, fit, dir, options)
    }
}
