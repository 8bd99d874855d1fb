//! Wave state, phases and the one-period evolution operator.

mod config;
mod params;
mod phases;
mod propagator;
mod state;
mod trajectory;

pub use config::{steps_per_kick, KickKind, SimConfig};
pub use params::{derive_dimensionless, Dimensionless, PhysicalParams};
pub use phases::{draw_phases, realization_rng, PhaseConstraint, PhaseVector};
pub use propagator::{free_propagate, kick_delta, kick_finite, Propagator, FREE_PHASE_SIGN};
pub use state::{q_to_slot, slot_to_q, WaveState};
pub use trajectory::{run_trajectory, TrajectoryRunner, ALIAS_EDGE_WIDTH, ALIAS_THRESHOLD};
