use super::config::SimConfig;
use super::phases::PhaseVector;
use super::propagator::Propagator;
use super::state::WaveState;
use crate::error::{Error, Result};
use crate::observables::{Probes, TrajectoryRecord};
use crate::precision::Real;

/// Outermost modes on each side watched by the aliasing guard.
pub const ALIAS_EDGE_WIDTH: usize = 4;
/// Edge population above which a realization is aborted.
pub const ALIAS_THRESHOLD: f64 = 1e-8;

/// Reusable driver for many realizations of one configuration.
#[derive(Debug)]
pub struct TrajectoryRunner<R> {
    config: SimConfig,
    propagator: Propagator<R>,
    initial: WaveState<R>,
    probes: Probes,
}

impl<R: Real> TrajectoryRunner<R> {
    pub fn new(config: &SimConfig, probes: &Probes) -> Result<Self> {
        config.validate()?;
        let propagator = Propagator::for_config(config)?;
        let initial = WaveState::gaussian(&config.precision, config.lambda, config.grid_size)?;
        Ok(TrajectoryRunner {
            config: config.clone(),
            propagator,
            initial,
            probes: probes.clipped(config.horizon),
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn probes(&self) -> &Probes {
        &self.probes
    }

    pub fn initial_state(&self) -> &WaveState<R> {
        &self.initial
    }

    fn guard(&self, state: &WaveState<R>) -> Result<()> {
        if !self.config.alias_guard {
            return Ok(());
        }
        let edge = state.edge_population(ALIAS_EDGE_WIDTH).to_f64();
        if !(edge <= ALIAS_THRESHOLD) {
            return Err(Error::Aliasing {
                time: state.time(),
                population: edge,
            });
        }
        Ok(())
    }

    /// Evolve one realization, returning its samples at `t = 0 ..= horizon`.
    pub fn run(&self, phases: &PhaseVector) -> Result<TrajectoryRecord<R>> {
        let factors = self.propagator.phase_factors(phases)?;
        let mut state = self.initial.clone();
        let mut record = TrajectoryRecord::with_capacity(self.config.horizon as usize + 1);
        self.guard(&state)?;
        record.sample(&state, &self.probes);
        for _ in 0..self.config.horizon {
            self.propagator.period(&mut state, &factors)?;
            self.guard(&state)?;
            record.sample(&state, &self.probes);
        }
        Ok(record)
    }

    /// Final state after `horizon` periods, without sampling.
    pub fn final_state(&self, phases: &PhaseVector) -> Result<WaveState<R>> {
        let factors = self.propagator.phase_factors(phases)?;
        let mut state = self.initial.clone();
        for _ in 0..self.config.horizon {
            self.propagator.period(&mut state, &factors)?;
            self.guard(&state)?;
        }
        Ok(state)
    }
}

/// Alternate free propagation and kicks for `horizon` periods, sampling
/// after every period.
pub fn run_trajectory<R: Real>(
    config: &SimConfig,
    phases: &PhaseVector,
    probes: &Probes,
) -> Result<TrajectoryRecord<R>> {
    TrajectoryRunner::new(config, probes)?.run(phases)
}
