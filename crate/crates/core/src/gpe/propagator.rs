use std::sync::Arc;

use super::config::{steps_per_kick, KickKind, SimConfig};
use super::phases::PhaseVector;
use super::state::{slot_to_q, WaveState};
use crate::error::{Error, Result};
use crate::precision::{Complex, FftPlan, Real, ScalarContext};

/// Sign of the free-evolution phase: each mode is multiplied by
/// `exp(FREE_PHASE_SIGN * i * phi_q)`. It fixes the orientation of the
/// rotation in the linearized transfer matrix and therefore which phase
/// interval is non-growing; see `PhaseConstraint::non_growing`.
pub const FREE_PHASE_SIGN: f64 = 1.0;

/// One period of the kicked evolution on a fixed grid: free propagation with
/// quenched phases followed by an interaction kick.
///
/// All tables are immutable, so one propagator is shared by every
/// realization of an ensemble.
#[derive(Debug)]
pub struct Propagator<R> {
    ctx: ScalarContext,
    grid_size: usize,
    plan: Arc<FftPlan<R>>,
    kick: KickKind,
    gamma_star: f64,
    steps: usize,
    /// Nonlinear phase per unit `|u|^2`, where `u` is the unnormalized
    /// inverse transform of the spectral amplitudes.
    nonlinear_coeff: R,
    inv_len: R,
    kinetic_half: Vec<Complex<R>>,
    kinetic_full: Vec<Complex<R>>,
}

impl<R: Real> Propagator<R> {
    pub fn new(
        ctx: &ScalarContext,
        grid_size: usize,
        gamma_star: f64,
        kick: KickKind,
        delta_s: f64,
    ) -> Result<Self> {
        let plan = FftPlan::<R>::shared(ctx, grid_size)?;
        let steps = match kick {
            KickKind::Delta => 1,
            KickKind::Finite { f } => {
                if !(f.is_finite() && f > 0.0) {
                    return Err(Error::InvalidParameter(format!("f must be positive, got {f}")));
                }
                steps_per_kick(delta_s)?
            }
        };
        let two_pi = R::two_pi(ctx);
        let step = R::one(ctx) / &R::from_i64(ctx, steps as i64);
        // |psi(x)|^2 = |u|^2 / (2 pi) with u the unnormalized inverse transform.
        let nonlinear_coeff = R::from_f64(ctx, gamma_star) * &step / &two_pi;
        let (kinetic_half, kinetic_full) = match kick {
            KickKind::Delta => (Vec::new(), Vec::new()),
            KickKind::Finite { f } => {
                let f2 = R::from_f64(ctx, f).square();
                let table = |fraction: i64| -> Vec<Complex<R>> {
                    (0..grid_size)
                        .map(|slot| {
                            let q = slot_to_q(slot, grid_size);
                            // -q^2 ds / (2 f^2) * fraction / 2
                            let theta = -(R::from_i64(ctx, q * q) * &step * &R::from_i64(ctx, fraction)
                                / &(f2.clone() * &R::from_i64(ctx, 4)));
                            Complex::cis(&theta)
                        })
                        .collect()
                };
                (table(1), table(2))
            }
        };
        Ok(Propagator {
            ctx: *ctx,
            grid_size,
            plan,
            kick,
            gamma_star,
            steps,
            nonlinear_coeff,
            inv_len: R::one(ctx) / &R::from_i64(ctx, grid_size as i64),
            kinetic_half,
            kinetic_full,
        })
    }

    pub fn for_config(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        Self::new(&cfg.precision, cfg.grid_size, cfg.gamma_star, cfg.kick, cfg.delta_s)
    }

    /// Integrator for the time-reversed kick: opposite interaction sign and
    /// conjugated kinetic phases.
    pub fn reversed(&self) -> Self {
        Propagator {
            ctx: self.ctx,
            grid_size: self.grid_size,
            plan: self.plan.clone(),
            kick: self.kick,
            gamma_star: -self.gamma_star,
            steps: self.steps,
            nonlinear_coeff: -self.nonlinear_coeff.clone(),
            inv_len: self.inv_len.clone(),
            kinetic_half: self.kinetic_half.iter().map(Complex::conj).collect(),
            kinetic_full: self.kinetic_full.iter().map(Complex::conj).collect(),
        }
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn context(&self) -> &ScalarContext {
        &self.ctx
    }

    pub fn steps_per_kick(&self) -> usize {
        self.steps
    }

    fn check(&self, state: &WaveState<R>) -> Result<()> {
        if state.grid_size() != self.grid_size {
            return Err(Error::Sizing(state.grid_size()));
        }
        Ok(())
    }

    /// Per-slot free-evolution factors for one realization.
    pub fn phase_factors(&self, phases: &PhaseVector) -> Result<Vec<Complex<R>>> {
        let need = self.grid_size / 2;
        if phases.q_max() < need {
            return Err(Error::PhaseLength {
                have: phases.q_max(),
                need,
            });
        }
        Ok((0..self.grid_size)
            .map(|slot| {
                let phi = phases.get(slot_to_q(slot, self.grid_size));
                Complex::cis(&R::from_f64(&self.ctx, FREE_PHASE_SIGN * phi))
            })
            .collect())
    }

    /// Multiply every mode by its free-evolution phase. Populations are untouched.
    pub fn free_propagate(&self, state: &mut WaveState<R>, phases: &PhaseVector) -> Result<()> {
        self.check(state)?;
        let factors = self.phase_factors(phases)?;
        apply_diagonal(state.amplitudes_mut(), &factors);
        Ok(())
    }

    pub(crate) fn free_propagate_with(&self, state: &mut WaveState<R>, factors: &[Complex<R>]) {
        apply_diagonal(state.amplitudes_mut(), factors);
    }

    /// One interaction pulse; advances the kick counter.
    pub fn kick(&self, state: &mut WaveState<R>) -> Result<()> {
        self.check(state)?;
        let data = state.amplitudes_mut();
        match self.kick {
            KickKind::Delta => {
                self.nonlinear_step(data);
            }
            KickKind::Finite { .. } => {
                apply_diagonal(data, &self.kinetic_half);
                for step in 0..self.steps {
                    self.nonlinear_step(data);
                    let kinetic = if step + 1 == self.steps {
                        &self.kinetic_half
                    } else {
                        &self.kinetic_full
                    };
                    apply_diagonal(data, kinetic);
                }
            }
        }
        state.advance();
        Ok(())
    }

    /// Position-space phase `exp(-i gamma ds |psi(x)|^2)` via a transform round trip.
    fn nonlinear_step(&self, data: &mut [Complex<R>]) {
        self.plan.inverse_unscaled(data);
        for z in data.iter_mut() {
            let theta = -(z.norm_sqr() * &self.nonlinear_coeff);
            let mut w = Complex::cis(&theta);
            w.scale_in_place(&self.inv_len);
            z.mul_assign_ref(&w);
        }
        self.plan.forward_unscaled(data);
    }

    /// One full period: free propagation then kick.
    pub fn period(&self, state: &mut WaveState<R>, factors: &[Complex<R>]) -> Result<()> {
        self.check(state)?;
        self.free_propagate_with(state, factors);
        self.kick(state)
    }
}

#[inline]
fn apply_diagonal<R: Real>(data: &mut [Complex<R>], factors: &[Complex<R>]) {
    for (z, w) in data.iter_mut().zip(factors) {
        z.mul_assign_ref(w);
    }
}

/// Exact delta kick `psi(x) -> exp(-i gamma_star |psi(x)|^2) psi(x)`.
pub fn kick_delta<R: Real>(ctx: &ScalarContext, state: &mut WaveState<R>, gamma_star: f64) -> Result<()> {
    Propagator::new(ctx, state.grid_size(), gamma_star, KickKind::Delta, 1.0)?.kick(state)
}

/// Finite kick integrated by symmetric split-step with `1/delta_s` steps.
pub fn kick_finite<R: Real>(
    ctx: &ScalarContext,
    state: &mut WaveState<R>,
    gamma_star: f64,
    f: f64,
    delta_s: f64,
) -> Result<()> {
    Propagator::new(ctx, state.grid_size(), gamma_star, KickKind::Finite { f }, delta_s)?.kick(state)
}

/// Free propagation with a freshly built factor table.
pub fn free_propagate<R: Real>(
    ctx: &ScalarContext,
    state: &mut WaveState<R>,
    phases: &PhaseVector,
) -> Result<()> {
    Propagator::new(ctx, state.grid_size(), 0.0, KickKind::Delta, 1.0)?.free_propagate(state, phases)
}
