use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{Complex, ComplexVector, Real, ScalarContext};
use crate::error::{Error, Result};

/// Radix-2 decimation-in-time transform of one length at one precision.
///
/// The forward transform is `X_k = n^{-1/2} sum_j x_j e^{-2 pi i jk/n}` and the
/// inverse uses the conjugate kernel, so both preserve the Euclidean norm.
#[derive(Debug)]
pub struct FftPlan<R> {
    len: usize,
    /// `e^{-2 pi i k / n}` for `k < n/2`.
    twiddles: Vec<Complex<R>>,
    bitrev: Vec<u32>,
    inv_sqrt_len: R,
}

type PlanKey = (TypeId, usize, u32);
type PlanCache = Mutex<HashMap<PlanKey, Arc<dyn Any + Send + Sync>>>;

fn plan_cache() -> &'static PlanCache {
    static CACHE: OnceLock<PlanCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl<R: Real> FftPlan<R> {
    pub fn new(ctx: &ScalarContext, len: usize) -> Result<Self> {
        if len == 0 || !len.is_power_of_two() || len > u32::MAX as usize {
            return Err(Error::Sizing(len));
        }
        let two_pi = R::two_pi(ctx);
        let n = R::from_i64(ctx, len as i64);
        let twiddles = (0..len / 2)
            .map(|k| {
                let theta = -(two_pi.clone() * &R::from_i64(ctx, k as i64) / &n);
                Complex::cis(&theta)
            })
            .collect();
        let bits = len.trailing_zeros();
        let bitrev = (0..len as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        Ok(FftPlan {
            len,
            twiddles,
            bitrev,
            inv_sqrt_len: R::one(ctx) / &n.sqrt(),
        })
    }

    /// Plan shared across the process, built once per (type, length, precision).
    pub fn shared(ctx: &ScalarContext, len: usize) -> Result<Arc<Self>> {
        let key = (TypeId::of::<R>(), len, ctx.mantissa_bits());
        if let Some(plan) = plan_cache().lock().unwrap().get(&key) {
            return Ok(plan.clone().downcast::<Self>().expect("plan cache type"));
        }
        // Built outside the lock; a racing thread may build the same plan twice.
        let plan = Arc::new(Self::new(ctx, len)?);
        let entry = plan_cache()
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| plan.clone() as Arc<dyn Any + Send + Sync>)
            .clone();
        Ok(entry.downcast::<Self>().expect("plan cache type"))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn check(&self, data: &[Complex<R>]) -> Result<()> {
        if data.len() != self.len {
            return Err(Error::Sizing(data.len()));
        }
        Ok(())
    }

    /// Unitary forward transform.
    pub fn forward(&self, data: &mut [Complex<R>]) -> Result<()> {
        self.check(data)?;
        self.transform(data, false);
        self.normalize(data);
        Ok(())
    }

    /// Unitary inverse transform.
    pub fn inverse(&self, data: &mut [Complex<R>]) -> Result<()> {
        self.check(data)?;
        self.transform(data, true);
        self.normalize(data);
        Ok(())
    }

    /// Forward transform without the `n^{-1/2}` factor. Callers fold the
    /// normalization into their own pointwise pass.
    pub(crate) fn forward_unscaled(&self, data: &mut [Complex<R>]) {
        debug_assert_eq!(data.len(), self.len);
        self.transform(data, false);
    }

    pub(crate) fn inverse_unscaled(&self, data: &mut [Complex<R>]) {
        debug_assert_eq!(data.len(), self.len);
        self.transform(data, true);
    }

    fn normalize(&self, data: &mut [Complex<R>]) {
        for z in data.iter_mut() {
            z.scale_in_place(&self.inv_sqrt_len);
        }
    }

    fn transform(&self, data: &mut [Complex<R>], inverse: bool) {
        let n = self.len;
        for i in 0..n {
            let j = self.bitrev[i] as usize;
            if i < j {
                data.swap(i, j);
            }
        }
        let mut span = 2;
        while span <= n {
            let half = span / 2;
            let stride = n / span;
            for block in data.chunks_exact_mut(span) {
                let (lo, hi) = block.split_at_mut(half);
                for ((a, b), w) in lo
                    .iter_mut()
                    .zip(hi.iter_mut())
                    .zip(self.twiddles.iter().step_by(stride))
                {
                    let t = if inverse {
                        w.conj_mul_ref(b)
                    } else {
                        w.mul_ref(b)
                    };
                    *b = a.clone();
                    *b -= &t;
                    *a += &t;
                }
            }
            span <<= 1;
        }
    }
}

/// Unitary DFT of `v` using the shared plan for its length and precision.
pub fn fft_forward<R: Real>(ctx: &ScalarContext, v: &ComplexVector<R>) -> Result<ComplexVector<R>> {
    let plan = FftPlan::<R>::shared(ctx, v.len())?;
    let mut out = v.clone();
    plan.forward(out.as_mut_slice())?;
    Ok(out)
}

/// Inverse of [`fft_forward`].
pub fn fft_inverse<R: Real>(ctx: &ScalarContext, v: &ComplexVector<R>) -> Result<ComplexVector<R>> {
    let plan = FftPlan::<R>::shared(ctx, v.len())?;
    let mut out = v.clone();
    plan.inverse(out.as_mut_slice())?;
    Ok(out)
}
