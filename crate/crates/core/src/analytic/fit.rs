use serde::Serialize;

use crate::error::{Error, Result};

/// Ordinary least squares `y = intercept + slope * x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_var: f64,
    pub intercept_var: f64,
    pub covariance: f64,
    /// Root-mean-square residual.
    pub rms: f64,
    pub points: usize,
}

pub fn linear_least_squares(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::Mismatch(format!("{} abscissae vs {} ordinates", n, y.len())));
    }
    if n < 2 {
        return Err(Error::InsufficientData(format!("{n} points, need at least 2")));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    if !(sxx > 0.0) {
        return Err(Error::InsufficientData("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| (yi - intercept - slope * xi).powi(2))
        .sum();
    let s2 = if n > 2 { sse / (nf - 2.0) } else { 0.0 };
    let slope_var = s2 / sxx;
    Ok(LinearFit {
        slope,
        intercept,
        slope_var,
        intercept_var: s2 * (1.0 / nf + mx * mx / sxx),
        covariance: -mx * slope_var,
        rms: (sse / nf).sqrt(),
        points: n,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `y = prefactor * t^value`
    PowerLaw,
    /// `y = prefactor * exp(value * t)`
    Exponential,
}

/// Result of a log-linear fit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub model: FitModel,
    /// Exponent (power law) or rate (exponential).
    pub value: f64,
    pub value_sd: f64,
    pub prefactor: f64,
    /// Standard deviation of `ln prefactor`.
    pub log_prefactor_sd: f64,
    /// Covariance of `(value, ln prefactor)`.
    pub covariance: f64,
    /// RMS residual of `ln y`.
    pub residual: f64,
    pub window: (f64, f64),
    pub points: usize,
}

impl FitResult {
    pub fn eval(&self, t: f64) -> f64 {
        match self.model {
            FitModel::PowerLaw => self.prefactor * t.powf(self.value),
            FitModel::Exponential => self.prefactor * (self.value * t).exp(),
        }
    }
}

pub const MIN_POWER_LAW_POINTS: usize = 8;
pub const MIN_POWER_LAW_DECADES: f64 = 0.5;
pub const MIN_EXPONENTIAL_POINTS: usize = 3;

fn select(t: &[f64], y: &[f64], window: (f64, f64)) -> Result<(Vec<f64>, Vec<f64>)> {
    if t.len() != y.len() {
        return Err(Error::Mismatch(format!("{} times vs {} values", t.len(), y.len())));
    }
    if !(window.0 <= window.1) {
        return Err(Error::FitRefused(format!("empty window [{}, {}]", window.0, window.1)));
    }
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for (&ti, &yi) in t.iter().zip(y) {
        if ti < window.0 || ti > window.1 {
            continue;
        }
        if !(yi > 0.0 && yi.is_finite()) {
            return Err(Error::FitRefused(format!("nonpositive value {yi} at t = {ti}")));
        }
        ts.push(ti);
        ys.push(yi);
    }
    Ok((ts, ys))
}

fn finish(model: FitModel, fit: LinearFit, window: (f64, f64)) -> FitResult {
    FitResult {
        model,
        value: fit.slope,
        value_sd: fit.slope_var.sqrt(),
        prefactor: fit.intercept.exp(),
        log_prefactor_sd: fit.intercept_var.sqrt(),
        covariance: fit.covariance,
        residual: fit.rms,
        window,
        points: fit.points,
    }
}

/// Least squares on `(ln t, ln y)` over `t` in `window`.
pub fn fit_power_law(t: &[f64], y: &[f64], window: (f64, f64)) -> Result<FitResult> {
    let (ts, ys) = select(t, y, window)?;
    if ts.len() < MIN_POWER_LAW_POINTS {
        return Err(Error::FitRefused(format!(
            "{} points in window, need {MIN_POWER_LAW_POINTS}",
            ts.len()
        )));
    }
    let lo = ts.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ts.iter().cloned().fold(0.0, f64::max);
    if !(lo > 0.0) {
        return Err(Error::FitRefused("power law needs t > 0".into()));
    }
    if (hi / lo).log10() < MIN_POWER_LAW_DECADES {
        return Err(Error::FitRefused(format!(
            "window spans {:.3} decades, need {MIN_POWER_LAW_DECADES}",
            (hi / lo).log10()
        )));
    }
    let lx: Vec<f64> = ts.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    Ok(finish(FitModel::PowerLaw, linear_least_squares(&lx, &ly)?, (lo, hi)))
}

/// Least squares on `(t, ln y)` over `t` in `window`.
pub fn fit_exponential(t: &[f64], y: &[f64], window: (f64, f64)) -> Result<FitResult> {
    let (ts, ys) = select(t, y, window)?;
    if ts.len() < MIN_EXPONENTIAL_POINTS {
        return Err(Error::FitRefused(format!(
            "{} points in window, need {MIN_EXPONENTIAL_POINTS}",
            ts.len()
        )));
    }
    let lo = ts[0];
    let hi = ts[ts.len() - 1];
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    Ok(finish(FitModel::Exponential, linear_least_squares(&ts, &ly)?, (lo, hi)))
}

/// Decay time of an exponential law: `-1 / rate`.
pub fn decay_time(fit: &FitResult) -> Result<f64> {
    if fit.model != FitModel::Exponential || !(fit.value < 0.0) {
        return Err(Error::FitRefused(format!("rate {} is not a decay", fit.value)));
    }
    Ok(-1.0 / fit.value)
}
