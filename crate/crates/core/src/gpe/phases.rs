use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Restricts the phases of the lowest modes to a sub-interval of `[0, 2 pi)`.
///
/// With `count = q - 1` and the interval `[gamma_star / pi, pi]`, the first
/// `q - 1` modes are drawn from the set where their linearized transfer
/// matrix has a unimodular spectrum, so they do not grow exponentially.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseConstraint {
    /// Number of constrained modes `q = 1 ..= count`.
    pub count: usize,
    pub lower: f64,
    pub upper: f64,
}

impl PhaseConstraint {
    pub fn none() -> Self {
        PhaseConstraint {
            count: 0,
            lower: 0.0,
            upper: TAU,
        }
    }

    /// Constrain `phi_1 .. phi_{q-1}` to `[gamma_star / pi, pi]`.
    pub fn non_growing(q: usize, gamma_star: f64) -> Result<Self> {
        let c = PhaseConstraint {
            count: q.saturating_sub(1),
            lower: gamma_star / PI,
            upper: PI,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Ok(());
        }
        if !(self.lower >= 0.0 && self.lower < self.upper && self.upper <= TAU) {
            return Err(Error::EmptyInterval {
                lower: self.lower,
                upper: self.upper,
            });
        }
        Ok(())
    }

    pub fn contains(&self, phase: f64) -> bool {
        phase >= self.lower && phase <= self.upper
    }
}

impl Default for PhaseConstraint {
    fn default() -> Self {
        PhaseConstraint::none()
    }
}

/// Quenched free-evolution phases of one realization, indexed by `|q|`.
/// `phi_0 = 0` and `phi_{-q} = phi_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseVector {
    phases: Vec<f64>,
}

impl PhaseVector {
    pub fn from_phases(mut phases: Vec<f64>) -> Self {
        if phases.is_empty() {
            phases.push(0.0);
        }
        phases[0] = 0.0;
        PhaseVector { phases }
    }

    /// Largest `|q|` covered.
    pub fn q_max(&self) -> usize {
        self.phases.len() - 1
    }

    pub fn get(&self, q: i64) -> f64 {
        self.phases[q.unsigned_abs() as usize]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.phases
    }
}

/// Independent random stream for one realization. The stream is a pure
/// function of `(seed, realization)`, so realizations can be evaluated in
/// any order or on any thread.
pub fn realization_rng(seed: u64, realization: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(realization);
    rng
}

pub fn draw_phases(
    seed: u64,
    realization: u64,
    q_max: usize,
    constraint: &PhaseConstraint,
) -> Result<PhaseVector> {
    if q_max == 0 {
        return Err(Error::InvalidParameter("q_max must be at least 1".into()));
    }
    constraint.validate()?;
    let mut rng = realization_rng(seed, realization);
    let mut phases = Vec::with_capacity(q_max + 1);
    phases.push(0.0);
    for q in 1..=q_max {
        let phi = if q <= constraint.count {
            rng.random_range(constraint.lower..=constraint.upper)
        } else {
            rng.random_range(0.0..TAU)
        };
        phases.push(phi);
    }
    Ok(PhaseVector { phases })
}
