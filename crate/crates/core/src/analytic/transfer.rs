use std::f64::consts::{PI, TAU};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::gpe::realization_rng;

/// Linearized one-period map of `(Re psi_1, Im psi_1) / psi_0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransferMatrix2 {
    pub m: [[f64; 2]; 2],
}

impl TransferMatrix2 {
    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// `U^n v` by repeated application.
    pub fn iterate(&self, v: [f64; 2], n: u64) -> [f64; 2] {
        (0..n).fold(v, |acc, _| self.apply(acc))
    }
}

/// Kick shear `[[1, 0], [-gamma/pi, 1]]` times the free rotation by `phi1`.
pub fn transfer_matrix(phi1: f64, gamma_star: f64) -> TransferMatrix2 {
    let (s, c) = phi1.sin_cos();
    let g = gamma_star / PI;
    TransferMatrix2 {
        m: [[c, -s], [-g * c + s, c + g * s]],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    Unimodular,
    Growing,
}

/// Half trace `cos phi + (gamma / 2 pi) sin phi`.
pub fn mu(phi1: f64, gamma_star: f64) -> f64 {
    phi1.cos() + gamma_star / TAU * phi1.sin()
}

pub fn growth_classifier(phi1: f64, gamma_star: f64) -> Growth {
    let m = mu(phi1, gamma_star);
    if m * m > 1.0 {
        Growth::Growing
    } else {
        Growth::Unimodular
    }
}

/// Per-period growth exponent `acosh |mu|`, zero on the unimodular set.
pub fn growth_rate(phi1: f64, gamma_star: f64) -> f64 {
    let m = mu(phi1, gamma_star).abs();
    if m > 1.0 {
        m.acosh()
    } else {
        0.0
    }
}

/// Small-interaction probability that a uniform `phi1` grows: `gamma / pi^2`.
pub fn growth_probability(gamma_star: f64) -> f64 {
    gamma_star / (PI * PI)
}

/// `[gamma / pi, pi]`, inside the unimodular set.
pub fn non_growing_interval(gamma_star: f64) -> (f64, f64) {
    (gamma_star / PI, PI)
}

/// Monte-Carlo average over uniform `phi1` of `|U^n Gamma(0)|^2` with
/// `Gamma(0) = (exp(-lambda^2), 0)`.
pub fn psi1_monte_carlo(n: u64, gamma_star: f64, lambda: f64, samples: usize, seed: u64) -> f64 {
    let g0 = [(-lambda * lambda).exp(), 0.0];
    const CHUNK: usize = 1024;
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = realization_rng(seed, c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            (0..count)
                .map(|_| {
                    let phi = rng.random_range(0.0..TAU);
                    let v = transfer_matrix(phi, gamma_star).iterate(g0, n);
                    v[0] * v[0] + v[1] * v[1]
                })
                .sum()
        })
        .collect();
    partial.iter().sum::<f64>() / samples as f64
}
