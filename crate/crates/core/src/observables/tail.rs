use serde::{Deserialize, Serialize};

use super::profile::MomentumProfile;
use crate::analytic::fit::linear_least_squares;
use crate::error::{Error, Result};

/// Wing selection for the exponential tail fit, relative to the profile peak.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailWindow {
    pub lower: f64,
    pub upper: f64,
    pub min_points: usize,
    /// RMS residual of `ln p` above which the fit is flagged poor.
    pub max_residual: f64,
}

impl Default for TailWindow {
    fn default() -> Self {
        TailWindow {
            lower: 1e-12,
            upper: 1e-4,
            min_points: 10,
            max_residual: 0.2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailFit {
    /// Mean of the two wing lengths.
    pub xi: f64,
    pub xi_left: f64,
    pub xi_right: f64,
    /// RMS residual of `ln p` over both wings.
    pub residual: f64,
    pub poor: bool,
    pub points: (usize, usize),
}

/// Run of `|q|` steps in the window, starting past the outermost population
/// above it (a noisy mean profile can pop back above the upper bound) and
/// ending at the first one below it.
fn wing(values: &[f64], peak: f64, w: &TailWindow) -> Result<(Vec<f64>, Vec<f64>)> {
    let hi = peak * w.upper;
    let lo = peak * w.lower;
    let start = values.iter().rposition(|&p| p > hi).map_or(0, |i| i + 1);
    if start >= values.len() {
        return Err(Error::FitRefused("wing never drops below the window".into()));
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (d, &p) in values.iter().enumerate().skip(start) {
        if p < lo {
            break;
        }
        x.push(d as f64);
        y.push(p.ln());
    }
    if x.len() < w.min_points {
        return Err(Error::FitRefused(format!(
            "{} points in wing window, need {}",
            x.len(),
            w.min_points
        )));
    }
    Ok((x, y))
}

/// Exponential wing length from `ln p ~ -|q| / xi`, averaged over both sides.
pub fn tail_length(profile: &MomentumProfile<f64>, window: &TailWindow) -> Result<TailFit> {
    let (ipeak, &peak) = profile
        .values()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty profile");
    if !(peak > 0.0) {
        return Err(Error::FitRefused("profile has no positive population".into()));
    }
    let v = profile.values();
    let right: Vec<f64> = v[ipeak..].to_vec();
    let left: Vec<f64> = v[..=ipeak].iter().rev().cloned().collect();
    let mut xi = [0.0; 2];
    let mut sse = 0.0;
    let mut counts = [0usize; 2];
    for (side, values) in [left, right].iter().enumerate() {
        let (x, y) = wing(values, peak, window)?;
        let fit = linear_least_squares(&x, &y)?;
        if !(fit.slope < 0.0) {
            return Err(Error::FitRefused(format!("wing slope {} is not decaying", fit.slope)));
        }
        xi[side] = -1.0 / fit.slope;
        sse += fit.rms * fit.rms * fit.points as f64;
        counts[side] = fit.points;
    }
    let residual = (sse / (counts[0] + counts[1]) as f64).sqrt();
    Ok(TailFit {
        xi: 0.5 * (xi[0] + xi[1]),
        xi_left: xi[0],
        xi_right: xi[1],
        residual,
        poor: residual > window.max_residual,
        points: (counts[0], counts[1]),
    })
}
