use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpe::{KickKind, PhaseConstraint, SimConfig};
use crate::observables::Probes;
use crate::precision::ScalarContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KickName {
    Delta,
    Finite,
}

impl std::str::FromStr for KickName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta" => Ok(KickName::Delta),
            "finite" => Ok(KickName::Finite),
            other => Err(Error::Config(format!("kick must be delta or finite, got {other:?}"))),
        }
    }
}

/// Flat on-disk configuration of one run. Missing keys take the defaults of
/// [`SimConfig`]; unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub gamma_star: f64,
    pub kick: KickName,
    /// Kick amplitude, finite kicks only; defaults to [`DEFAULT_F`].
    pub f: Option<f64>,
    pub lambda: f64,
    #[serde(alias = "ns")]
    pub grid_size: usize,
    #[serde(alias = "ds")]
    pub delta_s: f64,
    pub horizon: u64,
    #[serde(alias = "nr")]
    pub realizations: usize,
    /// Decimal digits of arbitrary precision; absent means hardware doubles.
    #[serde(alias = "nd")]
    pub digits: Option<u32>,
    pub seed: u64,
    pub alias_guard: bool,
    /// Constrain `phi_1 .. phi_{q-1}` to the non-growing interval.
    pub constrain_q: Option<usize>,
    /// Profile snapshot times; absent means 1, 2, 5, 10, ...
    pub profile_times: Option<Vec<u64>>,
    pub amplitude_modes: Vec<i64>,
    pub amplitude_times: Vec<u64>,
    pub histogram_bins: usize,
}

pub const DEFAULT_F: f64 = 16.0;

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            f: None,
            ..RunConfig::from_sim(&SimConfig::default())
        }
    }
}

/// Command-line overrides, one per flat key.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub gamma_star: Option<f64>,
    pub f: Option<f64>,
    pub lambda: Option<f64>,
    pub grid_size: Option<usize>,
    pub delta_s: Option<f64>,
    pub horizon: Option<u64>,
    pub realizations: Option<usize>,
    pub digits: Option<u32>,
    pub seed: Option<u64>,
    pub kick: Option<KickName>,
}

impl RunConfig {
    pub fn from_sim(sim: &SimConfig) -> Self {
        let (kick, f) = match sim.kick {
            KickKind::Delta => (KickName::Delta, None),
            KickKind::Finite { f } => (KickName::Finite, Some(f)),
        };
        RunConfig {
            gamma_star: sim.gamma_star,
            kick,
            f,
            lambda: sim.lambda,
            grid_size: sim.grid_size,
            delta_s: sim.delta_s,
            horizon: sim.horizon,
            realizations: sim.realizations,
            digits: (!sim.precision.is_hardware()).then(|| sim.precision.digits()),
            seed: sim.seed,
            alias_guard: sim.alias_guard,
            constrain_q: None,
            profile_times: None,
            amplitude_modes: Vec::new(),
            amplitude_times: Vec::new(),
            histogram_bins: 40,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = o.$field.clone() {
                    self.$field = v;
                }
            )*};
        }
        set!(gamma_star, lambda, grid_size, delta_s, horizon, realizations, seed, kick);
        if o.kick == Some(KickName::Delta) {
            self.f = None;
        }
        if let Some(f) = o.f {
            self.f = Some(f);
        }
        if let Some(d) = o.digits {
            self.digits = Some(d);
        }
    }

    /// Validated simulation parameters.
    pub fn sim_config(&self) -> Result<SimConfig> {
        let kick = match (self.kick, self.f) {
            (KickName::Delta, None) => KickKind::Delta,
            (KickName::Delta, Some(_)) => {
                return Err(Error::Config("f is only meaningful for finite kicks".into()))
            }
            (KickName::Finite, Some(f)) => KickKind::Finite { f },
            (KickName::Finite, None) => KickKind::Finite { f: DEFAULT_F },
        };
        let precision = match self.digits {
            None => ScalarContext::hardware(),
            Some(d) => ScalarContext::arbitrary(d).map_err(|e| Error::Config(e.to_string()))?,
        };
        let sim = SimConfig {
            gamma_star: self.gamma_star,
            kick,
            lambda: self.lambda,
            grid_size: self.grid_size,
            delta_s: self.delta_s,
            horizon: self.horizon,
            realizations: self.realizations,
            precision,
            seed: self.seed,
            alias_guard: self.alias_guard,
        };
        sim.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(sim)
    }

    pub fn constraint(&self) -> Result<PhaseConstraint> {
        match self.constrain_q {
            None => Ok(PhaseConstraint::none()),
            Some(q) => PhaseConstraint::non_growing(q, self.gamma_star)
                .map_err(|e| Error::Config(e.to_string())),
        }
    }

    pub fn probes(&self) -> Result<Probes> {
        if self.histogram_bins < 2 {
            return Err(Error::Config("histogram_bins must be at least 2".into()));
        }
        let base = match &self.profile_times {
            None => Probes::snapshots(self.horizon),
            Some(times) => Probes::default().with_profiles(times),
        };
        let q_max = (self.grid_size / 2) as i64;
        if let Some(q) = self.amplitude_modes.iter().find(|q| q.abs() >= q_max) {
            return Err(Error::Config(format!("amplitude mode {q} is off the grid")));
        }
        Ok(base
            .with_amplitudes(&self.amplitude_modes, &self.amplitude_times)
            .clipped(self.horizon))
    }
}
