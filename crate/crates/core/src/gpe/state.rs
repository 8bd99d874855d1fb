use crate::error::{Error, Result};
use crate::observables::MomentumProfile;
use crate::precision::{Complex, Real, ScalarContext};

/// Spectral wave function on the momentum grid `q in [-n/2, n/2)`.
///
/// Amplitudes are stored in transform order: slot `k` holds `q = k` for
/// `k < n/2` and `q = k - n` otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveState<R> {
    amplitudes: Vec<Complex<R>>,
    time: u64,
}

#[inline]
pub fn slot_to_q(slot: usize, n: usize) -> i64 {
    if slot < n / 2 {
        slot as i64
    } else {
        slot as i64 - n as i64
    }
}

#[inline]
pub fn q_to_slot(q: i64, n: usize) -> usize {
    q.rem_euclid(n as i64) as usize
}

impl<R: Real> WaveState<R> {
    pub fn from_amplitudes(amplitudes: Vec<Complex<R>>, time: u64) -> Result<Self> {
        if amplitudes.len() < 2 || !amplitudes.len().is_power_of_two() {
            return Err(Error::Sizing(amplitudes.len()));
        }
        Ok(WaveState { amplitudes, time })
    }

    /// Gaussian condensate `psi_q = C exp(-lambda^2 q^2)` normalized to one.
    pub fn gaussian(ctx: &ScalarContext, lambda: f64, grid_size: usize) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
        }
        if grid_size < 2 || !grid_size.is_power_of_two() {
            return Err(Error::Sizing(grid_size));
        }
        let lam2 = R::from_f64(ctx, lambda).square();
        // The first excited amplitude seeds all dynamics; losing it to
        // underflow would freeze the state.
        let seed = (-lam2.clone()).exp();
        if seed.is_zero() {
            return Err(Error::Underflow(format!(
                "exp(-lambda^2) with lambda = {lambda} at {} digits",
                ctx.digits()
            )));
        }
        let mut amplitudes: Vec<Complex<R>> = (0..grid_size)
            .map(|slot| {
                let q = slot_to_q(slot, grid_size);
                let arg = -(lam2.clone() * &R::from_i64(ctx, q * q));
                Complex::new(arg.exp(), R::zero(ctx))
            })
            .collect();
        let mut norm = R::zero(ctx);
        for z in &amplitudes {
            norm += &z.norm_sqr();
        }
        let c = R::one(ctx) / &norm.sqrt();
        if !c.is_finite() || c.is_zero() {
            return Err(Error::Underflow(format!(
                "normalization constant with lambda = {lambda}"
            )));
        }
        for z in amplitudes.iter_mut() {
            z.scale_in_place(&c);
        }
        Ok(WaveState { amplitudes, time: 0 })
    }

    pub fn grid_size(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub(crate) fn advance(&mut self) {
        self.time += 1;
    }

    pub fn amplitudes(&self) -> &[Complex<R>] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex<R>] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, q: i64) -> &Complex<R> {
        &self.amplitudes[q_to_slot(q, self.grid_size())]
    }

    pub fn population(&self, q: i64) -> R {
        self.amplitude(q).norm_sqr()
    }

    pub fn norm_sqr(&self) -> R {
        let mut acc = self.amplitudes[0].norm_sqr();
        for z in &self.amplitudes[1..] {
            acc += &z.norm_sqr();
        }
        acc
    }

    /// Populations `|psi_q|^2` ordered by increasing `q`.
    pub fn profile(&self) -> MomentumProfile<R> {
        let n = self.grid_size();
        let half = n / 2;
        let values = (0..n)
            .map(|i| self.amplitudes[(i + half) % n].norm_sqr())
            .collect();
        MomentumProfile::new(-(half as i64), values)
    }

    /// Total population in the `width` outermost modes on each side of the grid.
    pub fn edge_population(&self, width: usize) -> R {
        let n = self.grid_size();
        let half = n / 2;
        let width = width.min(half);
        let mut acc = self.amplitudes[half].norm_sqr();
        for slot in (half + 1..half + width).chain(half - width..half) {
            acc += &self.amplitudes[slot].norm_sqr();
        }
        acc
    }
}
