use std::f64::consts::TAU;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpe::realization_rng;

/// Noise-driven border mode:
/// `i d_s psi = q^2 psi / (2 f^2) + (gamma / 2 pi) f^2 rho^{3/2} eta(s)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LangevinSpec {
    pub gamma_star: f64,
    pub f: f64,
    pub rho: f64,
    pub q: i64,
    /// Integration length in units of `s`.
    pub horizon: u64,
    pub steps_per_unit: u32,
    pub realizations: usize,
    pub seed: u64,
}

impl LangevinSpec {
    pub fn new(gamma_star: f64, f: f64, rho: f64, horizon: u64, seed: u64) -> Self {
        LangevinSpec {
            gamma_star,
            f,
            rho,
            q: 8,
            horizon,
            steps_per_unit: 20,
            realizations: 10_000,
            seed,
        }
    }

    /// Noise amplitude `(gamma / 2 pi) f^2 rho^{3/2}`.
    pub fn amplitude(&self) -> f64 {
        self.gamma_star / TAU * self.f * self.f * self.rho.powf(1.5)
    }

    /// Exact slope of the mean `|psi_q|^2`: the squared amplitude.
    pub fn predicted_slope(&self) -> f64 {
        self.amplitude().powi(2)
    }
}

/// Ensemble mean of `|psi_q(s)|^2` at `s = 0, 1, ..., horizon`, starting from
/// `psi_q = 0`. Each step applies the exact kinetic rotation then a complex
/// Gaussian increment of variance `ds`.
pub fn langevin_oracle(spec: &LangevinSpec) -> Result<Vec<f64>> {
    if !(spec.rho > 0.0 && spec.rho <= 1.0) {
        return Err(Error::InvalidParameter(format!("rho must lie in (0, 1], got {}", spec.rho)));
    }
    if !(spec.f > 0.0) || spec.steps_per_unit == 0 || spec.realizations == 0 {
        return Err(Error::InvalidParameter("f, steps and realizations must be positive".into()));
    }
    let ds = 1.0 / spec.steps_per_unit as f64;
    let (rot_im, rot_re) = (-(spec.q * spec.q) as f64 * ds / (2.0 * spec.f * spec.f)).sin_cos();
    let kick = spec.amplitude() * (0.5 * ds).sqrt();
    let len = spec.horizon as usize + 1;
    let paths: Vec<Vec<f64>> = (0..spec.realizations)
        .into_par_iter()
        .map(|r| {
            let mut rng = realization_rng(spec.seed, r as u64);
            let mut out = Vec::with_capacity(len);
            let (mut re, mut im) = (0.0f64, 0.0f64);
            out.push(0.0);
            for _ in 0..spec.horizon {
                for _ in 0..spec.steps_per_unit {
                    let (a, b) = (re * rot_re - im * rot_im, re * rot_im + im * rot_re);
                    let n1: f64 = StandardNormal.sample(&mut rng);
                    let n2: f64 = StandardNormal.sample(&mut rng);
                    // -i * kick * (n1 + i n2)
                    re = a + kick * n2;
                    im = b - kick * n1;
                }
                out.push(re * re + im * im);
            }
            out
        })
        .collect();
    let mut mean = vec![0.0; len];
    for p in &paths {
        for (m, v) in mean.iter_mut().zip(p) {
            *m += v;
        }
    }
    let n = spec.realizations as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    Ok(mean)
}

/// Least-squares slope through the origin of `mean[s]` against `s`.
pub fn langevin_slope(mean: &[f64]) -> f64 {
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (s, &y) in mean.iter().enumerate() {
        sxy += s as f64 * y;
        sxx += (s * s) as f64;
    }
    sxy / sxx
}
