use serde::{Deserialize, Serialize};

use super::profile::{condensate_fraction, ipr_moment, sigma2, MomentumProfile};
use crate::gpe::WaveState;
use crate::precision::Real;

/// Geometric snapshot schedule `1, 2, 5, 10, 20, 50, ...` up to `horizon`.
pub fn snapshot_times(horizon: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut decade = 1u64;
    'outer: loop {
        for m in [1, 2, 5] {
            let Some(t) = decade.checked_mul(m) else { break 'outer };
            if t > horizon {
                break 'outer;
            }
            out.push(t);
        }
        match decade.checked_mul(10) {
            Some(d) => decade = d,
            None => break,
        }
    }
    out
}

/// What to record besides the per-kick scalars.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probes {
    /// Times at which the full population profile is stored.
    pub profile_times: Vec<u64>,
    /// Modes whose populations are sampled for amplitude statistics.
    pub amplitude_modes: Vec<i64>,
    pub amplitude_times: Vec<u64>,
}

impl Probes {
    /// Profiles at the default snapshot schedule, no amplitude samples.
    pub fn snapshots(horizon: u64) -> Self {
        Probes {
            profile_times: snapshot_times(horizon),
            ..Probes::default()
        }
    }

    pub fn with_profiles(mut self, times: &[u64]) -> Self {
        self.profile_times = times.to_vec();
        self
    }

    pub fn with_amplitudes(mut self, modes: &[i64], times: &[u64]) -> Self {
        self.amplitude_modes = modes.to_vec();
        self.amplitude_times = times.to_vec();
        self
    }

    /// Sorted, deduplicated and restricted to `[0, horizon]`.
    pub fn clipped(&self, horizon: u64) -> Self {
        let clip = |v: &[u64]| {
            let mut v: Vec<u64> = v.iter().copied().filter(|&t| t <= horizon).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut modes = self.amplitude_modes.clone();
        modes.sort_unstable();
        modes.dedup();
        Probes {
            profile_times: clip(&self.profile_times),
            amplitude_modes: modes,
            amplitude_times: clip(&self.amplitude_times),
        }
    }

    /// `(q, t)` pairs in time-major order.
    pub fn amplitude_keys(&self) -> Vec<(i64, u64)> {
        self.amplitude_times
            .iter()
            .flat_map(|&t| self.amplitude_modes.iter().map(move |&q| (q, t)))
            .collect()
    }
}

/// Observable time series of one realization.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord<R> {
    pub times: Vec<u64>,
    pub sigma2: Vec<R>,
    pub condensate: Vec<R>,
    /// `sum_q |psi_q|^4`
    pub ipr_moment: Vec<R>,
    pub profiles: Vec<(u64, MomentumProfile<R>)>,
    /// `(q, t, |psi_q(t)|^2)`
    pub amplitudes: Vec<(i64, u64, f64)>,
}

impl<R: Real> TrajectoryRecord<R> {
    pub fn with_capacity(samples: usize) -> Self {
        TrajectoryRecord {
            times: Vec::with_capacity(samples),
            sigma2: Vec::with_capacity(samples),
            condensate: Vec::with_capacity(samples),
            ipr_moment: Vec::with_capacity(samples),
            profiles: Vec::new(),
            amplitudes: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Record the scalars of `state`, plus any probes due at its time.
    /// `probes` must already be clipped.
    pub fn sample(&mut self, state: &WaveState<R>, probes: &Probes) {
        let t = state.time();
        let profile = state.profile();
        self.times.push(t);
        self.sigma2.push(sigma2(&profile));
        self.condensate.push(condensate_fraction(&profile));
        self.ipr_moment.push(ipr_moment(&profile));
        if probes.amplitude_times.binary_search(&t).is_ok() {
            for &q in &probes.amplitude_modes {
                let p = profile.get(q).map(Real::to_f64).unwrap_or(0.0);
                self.amplitudes.push((q, t, p));
            }
        }
        if probes.profile_times.binary_search(&t).is_ok() {
            self.profiles.push((t, profile));
        }
    }
}
