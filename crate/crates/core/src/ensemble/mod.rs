//! Many-realization runs with deterministic in-order accumulation, and
//! parameter sweeps on top of them.

mod run;
mod sweep;

pub use crate::gpe::PhaseConstraint;
pub use run::{
    check_aborts, merge, run_ensemble, run_ensemble_unchecked, workers_from_env, EnsembleOptions,
    MAX_ABORT_FRACTION, WORKERS_ENV,
};
pub use sweep::{
    fit_decay_time, run_sweep, PointResult, SweepAxis, SweepFit, SweepPlan, SweepPoint, SweepResult,
};
