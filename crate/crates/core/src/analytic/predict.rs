use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

/// `t_E = 2 pi lambda^2 / gamma`.
pub fn ehrenfest_time(gamma_star: f64, lambda: f64) -> Result<f64> {
    require_positive("gamma_star", gamma_star)?;
    require_positive("lambda", lambda)?;
    Ok(2.0 * PI * lambda * lambda / gamma_star)
}

/// `t_q = q t_E`, the depletion time when modes below `q` stay bounded.
pub fn generalized_ehrenfest_time(q: u32, gamma_star: f64, lambda: f64) -> Result<f64> {
    Ok(q as f64 * ehrenfest_time(gamma_star, lambda)?)
}

/// Condensate decay time `tau = 2 pi^3 lambda^2 / gamma^2`.
pub fn predict_tau(gamma_star: f64, lambda: f64) -> Result<f64> {
    require_positive("gamma_star", gamma_star)?;
    require_positive("lambda", lambda)?;
    Ok(2.0 * PI.powi(3) * lambda * lambda / (gamma_star * gamma_star))
}

/// Crossover to subdiffusion `t_f = tau ln f`.
pub fn predict_tf(gamma_star: f64, lambda: f64, f: f64) -> Result<f64> {
    if !(f >= 1.0) {
        return Err(Error::InvalidParameter(format!("t_f needs f >= 1, got {f}")));
    }
    Ok(predict_tau(gamma_star, lambda)? * f.ln())
}

/// `exp(-(t - t_E) / tau)` for `t >= t_E`, and 1 before.
pub fn predict_condensate_decay(t: f64, gamma_star: f64, lambda: f64) -> Result<f64> {
    let te = ehrenfest_time(gamma_star, lambda)?;
    let tau = predict_tau(gamma_star, lambda)?;
    Ok((-(t - te).max(0.0) / tau).exp())
}

/// Mean population of `q = 1` after `t` kicks at weak interaction:
/// `e^{-2 lambda^2} [1 + sqrt(gamma / 2t) e^{gamma t / pi} / 2 pi]`.
/// Falls back to the quadrature form at `t = 0`, where the closed form is singular.
pub fn predict_psi1(t: f64, gamma_star: f64, lambda: f64) -> Result<f64> {
    require_positive("gamma_star", gamma_star)?;
    require_positive("lambda", lambda)?;
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("t must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return predict_psi1_quadrature(t, gamma_star, lambda);
    }
    let base = (-2.0 * lambda * lambda).exp();
    Ok(base * (1.0 + (gamma_star / (2.0 * t)).sqrt() * (gamma_star * t / PI).exp() / (2.0 * PI)))
}

/// `sinh^2(t sqrt(phi (a - phi))) / phi`, finite at `phi -> 0`.
fn psi1_integrand(phi: f64, t: f64, a: f64) -> f64 {
    let x2 = phi * (a - phi);
    if x2 <= 0.0 {
        return if phi <= 0.0 { t * t * a } else { 0.0 };
    }
    let x = t * x2.sqrt();
    if x < 1e-4 {
        t * t * (a - phi) * (1.0 + x * x / 3.0)
    } else {
        x.sinh().powi(2) / phi
    }
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
        + adaptive(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature to relative tolerance `rel`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(&f, a, fa, b, fb);
    // coarse scan for the magnitude so the tolerance is relative
    let scale = (0..=64)
        .map(|k| f(a + (b - a) * k as f64 / 64.0).abs())
        .fold(0.0, f64::max)
        * (b - a);
    adaptive(&f, a, fa, b, fb, m, fm, whole, rel * scale.max(f64::MIN_POSITIVE), 48)
}

/// Leading-order population of `q = 1` from the integral over the growing
/// phases `[0, gamma / pi]`, evaluated numerically.
pub fn predict_psi1_quadrature(t: f64, gamma_star: f64, lambda: f64) -> Result<f64> {
    require_positive("gamma_star", gamma_star)?;
    require_positive("lambda", lambda)?;
    let a = gamma_star / PI;
    let base = (-2.0 * lambda * lambda).exp();
    let integral = integrate(|phi| psi1_integrand(phi, t, a), 0.0, a, 1e-10);
    Ok(base + gamma_star * base / (PI * PI) * integral)
}

/// Exponential growth law `prefactor * exp(rate * t)` valid on `validity`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthPrediction {
    pub rate: f64,
    pub prefactor: f64,
    pub validity: (f64, f64),
}

impl GrowthPrediction {
    pub fn eval(&self, t: f64) -> f64 {
        self.prefactor * (self.rate * t).exp()
    }

    /// Fix the prefactor so the law passes through `(t0, y0)`.
    pub fn anchored(mut self, t0: f64, y0: f64) -> Self {
        self.prefactor = y0 * (-self.rate * t0).exp();
        self
    }
}

/// Long-time delta-kick growth of `sigma^2` at rate `ln(1 + (gamma/pi)^2)`,
/// valid beyond `t_E`. The prefactor is 1 until anchored.
pub fn predict_sigma2_delta_longtime(gamma_star: f64, lambda: f64) -> Result<GrowthPrediction> {
    let te = ehrenfest_time(gamma_star, lambda)?;
    Ok(GrowthPrediction {
        rate: sigma2_delta_rate(gamma_star),
        prefactor: 1.0,
        validity: (te, f64::INFINITY),
    })
}

pub fn sigma2_delta_rate(gamma_star: f64) -> f64 {
    (gamma_star / PI).powi(2).ln_1p()
}

/// Subdiffusive law `sigma^2 = c f^2 gamma sqrt(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SubdiffusionLaw {
    pub c: f64,
}

impl SubdiffusionLaw {
    /// Geometric-mean calibration of `c` over the given samples.
    pub fn calibrate(t: &[f64], sigma2: &[f64], gamma_star: f64, f: f64) -> Result<Self> {
        if t.len() != sigma2.len() || t.is_empty() {
            return Err(Error::InsufficientData("no calibration samples".into()));
        }
        let mut acc = 0.0;
        for (&ti, &si) in t.iter().zip(sigma2) {
            if !(ti > 0.0 && si > 0.0) {
                return Err(Error::FitRefused(format!("nonpositive sample ({ti}, {si})")));
            }
            acc += (si / (f * f * gamma_star * ti.sqrt())).ln();
        }
        Ok(SubdiffusionLaw {
            c: (acc / t.len() as f64).exp(),
        })
    }

    pub fn predict(&self, t: f64, gamma_star: f64, f: f64) -> f64 {
        predict_subdiffusion(t, gamma_star, f, self.c)
    }
}

pub fn predict_subdiffusion(t: f64, gamma_star: f64, f: f64, c: f64) -> f64 {
    c * f * f * gamma_star * t.sqrt()
}

/// Normalized Gaussian `exp(-q^2 / 2 s) / sqrt(2 pi s)` with `s = sigma^2`.
pub fn gaussian_profile(q: f64, sigma2: f64) -> Result<f64> {
    require_positive("sigma2", sigma2)?;
    Ok((-q * q / (2.0 * sigma2)).exp() / (2.0 * PI * sigma2).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_times() {
        let te = ehrenfest_time(0.7, 3.03).unwrap();
        assert!((te - 82.4).abs() < 0.05, "{te}");
        assert_eq!(generalized_ehrenfest_time(2, 0.7, 3.03).unwrap(), 2.0 * te);
        let ratio = ehrenfest_time(0.7, 6.06).unwrap() / te;
        assert!((ratio - 4.0).abs() < 1e-12);
        let tau = predict_tau(1.0, 3.03).unwrap();
        assert!((tau - 569.3).abs() < 0.1, "{tau}");
        assert!((predict_tau(4.0, 3.03).unwrap() - 35.58).abs() < 0.01);
        assert_eq!(predict_tf(4.0, 3.03, 1.0).unwrap(), 0.0);
        assert!(predict_tf(4.0, 3.03, 0.5).is_err());
        assert!(ehrenfest_time(0.0, 1.0).is_err());
    }

    #[test]
    fn condensate_decay_law() {
        let (g, l) = (0.7, 3.03);
        let te = ehrenfest_time(g, l).unwrap();
        let tau = predict_tau(g, l).unwrap();
        assert_eq!(predict_condensate_decay(te, g, l).unwrap(), 1.0);
        let v = predict_condensate_decay(te + tau, g, l).unwrap();
        assert!((v - (-1f64).exp()).abs() < 1e-14);
        // (1 - P)^(q - 1) at t_q up to O(P^2)
        let p = g / (PI * PI);
        for q in 1..=10u32 {
            let tq = generalized_ehrenfest_time(q, g, l).unwrap();
            let law = predict_condensate_decay(tq, g, l).unwrap();
            let ladder = (1.0 - p).powi(q as i32 - 1);
            assert!((law / ladder - 1.0).abs() <= (q as f64 - 1.0) * p * p, "q {q}");
        }
    }

    #[test]
    fn psi1_closed_form_vs_quadrature() {
        let closed = predict_psi1(40.0, 0.7, 3.03).unwrap();
        let quad = predict_psi1_quadrature(40.0, 0.7, 3.03).unwrap();
        assert!((closed / quad - 1.0).abs() < 0.15, "{closed} {quad}");
        // leading-order value computed independently
        assert!((quad / 1.2857835e-6 - 1.0).abs() < 1e-6, "{quad}");
        let base = (-2.0 * 3.03f64 * 3.03).exp();
        assert_eq!(predict_psi1(0.0, 0.7, 3.03).unwrap(), base);
        let early = predict_psi1(1.0, 0.01, 3.03).unwrap();
        assert!(early / base - 1.0 < 0.02);
    }

    #[test]
    fn delta_rates() {
        let r = sigma2_delta_rate(0.7);
        assert!((r - 0.0484).abs() < 1e-4, "{r}");
        let g = 1e-3;
        assert!((sigma2_delta_rate(g) / (g / PI).powi(2) - 1.0).abs() < 1e-6);
        let law = predict_sigma2_delta_longtime(0.7, 3.03).unwrap().anchored(200.0, 0.5);
        assert!((law.eval(200.0) - 0.5).abs() < 1e-12);
        assert!((law.eval(300.0) / law.eval(200.0) - (100.0 * r).exp()).abs() < 1e-9);
    }

    #[test]
    fn subdiffusion_scaling() {
        let law = SubdiffusionLaw { c: 0.3 };
        assert!((law.predict(400.0, 4.0, 16.0) / law.predict(100.0, 4.0, 16.0) - 2.0).abs() < 1e-12);
        assert!((law.predict(100.0, 4.0, 32.0) / law.predict(100.0, 4.0, 16.0) - 4.0).abs() < 1e-12);
        let t = [100.0, 400.0, 900.0];
        let s: Vec<f64> = t.iter().map(|&t| law.predict(t, 4.0, 16.0)).collect();
        let fit = SubdiffusionLaw::calibrate(&t, &s, 4.0, 16.0).unwrap();
        assert!((fit.c - 0.3).abs() < 1e-12);
    }

    #[test]
    fn gaussian_normalization() {
        assert_eq!(gaussian_profile(0.0, 1.0).unwrap(), 1.0 / (2.0 * PI).sqrt());
        for s2 in [9.0, 25.0, 100.0] {
            let total: f64 = (-2000..=2000).map(|q| gaussian_profile(q as f64, s2).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-6, "{s2} {total}");
        }
        assert!(gaussian_profile(0.0, 0.0).is_err());
    }
}
