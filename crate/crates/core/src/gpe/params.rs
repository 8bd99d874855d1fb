use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Laboratory parameters of the kicked ring.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub hbar: f64,
    pub mass: f64,
    /// Ring circumference.
    pub length: f64,
    /// Kick period.
    pub period: f64,
    /// Duration of each interaction pulse, `0 < kick_width <= period`.
    pub kick_width: f64,
    /// Interaction parameter `g` (per atom).
    pub g: f64,
    pub atoms: u64,
}

/// Dimensionless numbers controlling the kicked dynamics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dimensionless {
    pub hbar_eff: f64,
    pub gamma_star: f64,
    pub f: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("hbar", self.hbar),
            ("mass", self.mass),
            ("length", self.length),
            ("period", self.period),
            ("g", self.g),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.atoms == 0 {
            return Err(Error::InvalidParameter("atom number must be positive".into()));
        }
        if self.kick_width == 0.0 {
            return Err(Error::InvalidParameter(
                "zero kick width with finite g: request the delta-kick limit through gamma_star".into(),
            ));
        }
        if !(self.kick_width.is_finite() && self.kick_width > 0.0 && self.kick_width <= self.period)
        {
            return Err(Error::InvalidParameter(format!(
                "kick width must lie in (0, period], got {}",
                self.kick_width
            )));
        }
        Ok(())
    }
}

/// Effective Planck constant, effective interaction strength and kinetic
/// amplitude:
///
/// ```text
/// hbar_eff   = hbar T (2 pi / L)^2 / m
/// gamma_star = 2 pi g N dt / (L hbar)
/// f          = (L / 2 pi) sqrt(m / (dt hbar))
/// ```
pub fn derive_dimensionless(p: &PhysicalParams) -> Result<Dimensionless> {
    p.validate()?;
    let tau = std::f64::consts::TAU;
    let k = tau / p.length;
    Ok(Dimensionless {
        hbar_eff: p.hbar * p.period * k * k / p.mass,
        gamma_star: tau * p.g * p.atoms as f64 * p.kick_width / (p.length * p.hbar),
        f: (p.mass / (p.kick_width * p.hbar)).sqrt() / k,
    })
}
