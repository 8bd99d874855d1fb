//! Measured quantities: widths, condensate fraction, participation ratio,
//! profiles, amplitude statistics and ensemble accumulators.

mod histogram;
mod profile;
mod record;
mod stats;
mod tail;

pub use histogram::{
    amplitude_histogram, ks_exponential, ks_test, ks_uniform, AmplitudeHistogram, ExponentialFit,
    Histogram, KsTest,
};
pub use profile::{condensate_fraction, ipr, ipr_moment, sigma2, MomentumProfile};
pub use record::{snapshot_times, Probes, TrajectoryRecord};
pub use stats::{sd_sigma, EnsembleStats, Moments, StatsLayout};
pub use tail::{tail_length, TailFit, TailWindow};
