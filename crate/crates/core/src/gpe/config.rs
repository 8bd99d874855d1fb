use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::ScalarContext;

/// Shape of the interaction pulse.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KickKind {
    /// Infinitely short pulse at fixed `gamma_star`.
    Delta,
    /// Finite pulse; `f` is the dimensionless kinetic amplitude during the kick.
    Finite { f: f64 },
}

/// Physics and numerics of one ensemble run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub gamma_star: f64,
    pub kick: KickKind,
    /// Initial momentum width parameter: `psi_q(0) ~ exp(-lambda^2 q^2)`.
    pub lambda: f64,
    /// Number of grid points (power of two); momenta span `[-n/2, n/2)`.
    pub grid_size: usize,
    /// Inner split-step size, `1/delta_s` must be an integer.
    pub delta_s: f64,
    /// Number of kicks.
    pub horizon: u64,
    pub realizations: usize,
    pub precision: ScalarContext,
    pub seed: u64,
    /// Abort a realization when population reaches the grid edge.
    pub alias_guard: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            gamma_star: 4.0,
            kick: KickKind::Finite { f: 16.0 },
            lambda: 3.03,
            grid_size: 1024,
            delta_s: 1.0 / 500.0,
            horizon: 100,
            realizations: 100,
            precision: ScalarContext::hardware(),
            seed: 0,
            alias_guard: true,
        }
    }
}

/// Number of split steps per kick when `1/delta_s` is an integer.
pub fn steps_per_kick(delta_s: f64) -> Result<usize> {
    if !(delta_s > 0.0 && delta_s < 1.0 || delta_s == 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta_s must lie in (0, 1], got {delta_s}"
        )));
    }
    let inv = 1.0 / delta_s;
    let steps = inv.round();
    if (inv - steps).abs() > 1e-9 * inv {
        return Err(Error::InvalidParameter(format!(
            "1/delta_s must be an integer, got {inv}"
        )));
    }
    Ok(steps as usize)
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
            }
        };
        if !self.gamma_star.is_finite() || self.gamma_star < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma_star must be non-negative, got {}",
                self.gamma_star
            )));
        }
        positive("lambda", self.lambda)?;
        if let KickKind::Finite { f } = self.kick {
            positive("f", f)?;
            steps_per_kick(self.delta_s)?;
        }
        if self.grid_size < 16 || !self.grid_size.is_power_of_two() {
            return Err(Error::Sizing(self.grid_size));
        }
        if self.realizations == 0 {
            return Err(Error::InvalidParameter("realizations must be positive".into()));
        }
        Ok(())
    }

    /// Largest |q| present on the grid.
    pub fn q_max(&self) -> usize {
        self.grid_size / 2
    }
}
