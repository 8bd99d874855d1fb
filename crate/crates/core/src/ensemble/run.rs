use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gpe::{draw_phases, PhaseConstraint, SimConfig, TrajectoryRunner};
use crate::observables::{EnsembleStats, Probes, StatsLayout};
use crate::precision::Real;

/// Environment variable holding the worker-thread count.
pub const WORKERS_ENV: &str = "KGPE_WORKERS";

/// Largest tolerated fraction of aliasing aborts.
pub const MAX_ABORT_FRACTION: f64 = 0.01;

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnsembleOptions {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Realizations evolved between two in-order merges.
    pub batch: Option<usize>,
}

impl EnsembleOptions {
    pub fn from_env() -> Self {
        EnsembleOptions {
            workers: workers_from_env(),
            batch: None,
        }
    }

    pub fn with_workers(workers: usize) -> Self {
        EnsembleOptions {
            workers: Some(workers),
            batch: None,
        }
    }
}

fn evolve<R: Real>(
    config: &SimConfig,
    constraint: &PhaseConstraint,
    probes: &Probes,
    options: &EnsembleOptions,
) -> Result<EnsembleStats<R>> {
    let runner = TrajectoryRunner::<R>::new(config, probes)?;
    let layout = StatsLayout::new(config.horizon, config.grid_size, probes);
    let mut stats = EnsembleStats::empty(&config.precision, layout);
    let q_max = config.q_max();
    let batch = options
        .batch
        .unwrap_or_else(|| 4 * rayon::current_num_threads())
        .max(1);
    let total = config.realizations;
    let mut start = 0;
    while start < total {
        let end = (start + batch).min(total);
        let outcomes: Vec<_> = (start..end)
            .into_par_iter()
            .map(|r| {
                let phases = draw_phases(config.seed, r as u64, q_max, constraint)?;
                runner.run(&phases)
            })
            .collect();
        for (offset, outcome) in outcomes.into_iter().enumerate() {
            match outcome {
                Ok(record) => stats.push(&record)?,
                Err(Error::Aliasing { time, population }) => {
                    log::warn!(
                        "realization {} aborted at t = {time}: edge population {population:e}",
                        start + offset
                    );
                    stats.record_abort();
                }
                Err(e) => return Err(e),
            }
        }
        log::info!("{end}/{total} realizations ({} aborted)", stats.aborted());
        start = end;
    }
    Ok(stats)
}

/// All realizations of `config`, merged in index order, without the abort check.
pub fn run_ensemble_unchecked<R: Real>(
    config: &SimConfig,
    constraint: &PhaseConstraint,
    probes: &Probes,
    options: &EnsembleOptions,
) -> Result<EnsembleStats<R>> {
    config.validate()?;
    constraint.validate()?;
    if config.realizations == 0 {
        return Err(Error::InvalidParameter("realizations must be positive".into()));
    }
    match options.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(|| evolve(config, constraint, probes, options)),
        None => evolve(config, constraint, probes, options),
    }
}

/// Fails when more than 1% of the realizations were aborted.
pub fn check_aborts<R: Real>(stats: &EnsembleStats<R>) -> Result<()> {
    let total = stats.completed() + stats.aborted();
    if stats.aborted() as f64 > MAX_ABORT_FRACTION * total as f64 {
        return Err(Error::EnsembleInvalid {
            aborted: stats.aborted(),
            total,
        });
    }
    Ok(())
}

/// Run `config.realizations` independent realizations and accumulate their
/// observables. The result depends only on the inputs, not on the number of
/// workers.
pub fn run_ensemble<R: Real>(
    config: &SimConfig,
    constraint: &PhaseConstraint,
    probes: &Probes,
    options: &EnsembleOptions,
) -> Result<EnsembleStats<R>> {
    let stats = run_ensemble_unchecked(config, constraint, probes, options)?;
    check_aborts(&stats)?;
    Ok(stats)
}

/// `a` followed by `b`.
pub fn merge<R: Real>(a: &EnsembleStats<R>, b: &EnsembleStats<R>) -> Result<EnsembleStats<R>> {
    let mut out = a.clone();
    out.merge(b)?;
    Ok(out)
}
