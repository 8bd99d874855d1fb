use std::path::Path;

use serde::{Deserialize, Serialize};

use super::artifacts::{SWEEP_FILE, TIMESERIES_FILE};
use super::manifest::{ArtifactKind, RunManifest};
use super::tables::{read_rows, read_timeseries, SweepRow, Timeseries};
use crate::analytic::{
    ehrenfest_time, fit_exponential, fit_power_law, linear_least_squares, predict_tau,
    sigma2_delta_rate,
};
use crate::ensemble::fit_decay_time;
use crate::error::{Error, Result};
use crate::precision::ScalarContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Power-law exponent of sigma^2 over `window`; default prediction 1/2.
    Sigma2Exponent,
    /// Power-law exponent of the condensate over `window`; default -1/4.
    CondensateExponent,
    /// Exponential rate of sigma^2 over `window`; default ln(1 + (gamma/pi)^2).
    Sigma2Rate,
    /// Condensate decay time from `start_te * t_E` down to `floor`; default tau.
    CondensateDecayTime,
    /// First time sigma^2 exceeds `threshold`; default t_E.
    Sigma2Crossing,
    /// First time the condensate drops below `threshold`; default t_E.
    CondensateCrossing,
    /// Log-log slope of a sweep's fitted values against the swept parameter.
    SweepExponent,
}

fn default_tolerance() -> f64 {
    0.1
}

/// What to measure from an artifact directory and how to judge it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonSpec {
    pub quantity: Quantity,
    #[serde(default)]
    pub window: Option<(f64, f64)>,
    #[serde(default)]
    pub start_te: Option<f64>,
    #[serde(default)]
    pub floor: Option<f64>,
    #[serde(default)]
    pub threshold: Option<f64>,
    /// Predicted value; derived from the run's parameters when absent.
    #[serde(default)]
    pub expected: Option<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Judge `|measured / expected - 1|` instead of `|measured - expected|`.
    #[serde(default)]
    pub relative: bool,
}

impl ComparisonSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub quantity: Quantity,
    pub measured: f64,
    pub measured_sd: f64,
    pub predicted: f64,
    pub relative_deviation: f64,
    pub tolerance: f64,
    pub relative: bool,
    pub pass: bool,
}

pub const COMPARISON_HEADER: &str =
    "quantity,measured,measured_sd,predicted,relative_deviation,tolerance,mode,verdict";

impl Comparison {
    pub fn csv_row(&self) -> String {
        let name = serde_json::to_value(self.quantity)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        format!(
            "{name},{:.6e},{:.3e},{:.6e},{:.4},{},{},{}",
            self.measured,
            self.measured_sd,
            self.predicted,
            self.relative_deviation,
            self.tolerance,
            if self.relative { "relative" } else { "absolute" },
            if self.pass { "pass" } else { "fail" }
        )
    }
}

fn window(spec: &ComparisonSpec) -> Result<(f64, f64)> {
    spec.window
        .ok_or_else(|| Error::Config(format!("{:?} needs a window", spec.quantity)))
}

fn first_crossing(t: &[f64], y: &[f64], above: bool, threshold: f64) -> Result<f64> {
    t.iter()
        .zip(y)
        .find(|(_, &v)| if above { v > threshold } else { v < threshold })
        .map(|(&t, _)| t)
        .ok_or_else(|| Error::FitRefused(format!("series never crosses {threshold}")))
}

fn need_expected(spec: &ComparisonSpec, derived: Option<Result<f64>>) -> Result<f64> {
    match (spec.expected, derived) {
        (Some(v), _) => Ok(v),
        (None, Some(v)) => v,
        (None, None) => Err(Error::Config(format!("{:?} needs an expected value", spec.quantity))),
    }
}

/// Measure `spec.quantity` on a run series with parameters `m`.
pub fn measure_run(ts: &Timeseries<f64>, m: &RunManifest, spec: &ComparisonSpec) -> Result<(f64, f64, f64)> {
    let t = ts.times_f64();
    let (g, l) = (m.sim.gamma_star, m.sim.lambda);
    let (measured, sd, derived) = match spec.quantity {
        Quantity::Sigma2Exponent => {
            let fit = fit_power_law(&t, &ts.sigma2, window(spec)?)?;
            (fit.value, fit.value_sd, Some(Ok(0.5)))
        }
        Quantity::CondensateExponent => {
            let fit = fit_power_law(&t, &ts.condensate, window(spec)?)?;
            (fit.value, fit.value_sd, Some(Ok(-0.25)))
        }
        Quantity::Sigma2Rate => {
            let fit = fit_exponential(&t, &ts.sigma2, window(spec)?)?;
            (fit.value, fit.value_sd, Some(Ok(sigma2_delta_rate(g))))
        }
        Quantity::CondensateDecayTime => {
            let te = ehrenfest_time(g, l)?;
            let start = spec.start_te.unwrap_or(1.0) * te;
            let (tau, fit) = fit_decay_time(&t, &ts.condensate, start, spec.floor.unwrap_or(1e-2))?;
            (tau, fit.value_sd * tau * tau, Some(predict_tau(g, l)))
        }
        Quantity::Sigma2Crossing => {
            let tc = first_crossing(&t, &ts.sigma2, true, spec.threshold.unwrap_or(0.25))?;
            (tc, 0.0, Some(ehrenfest_time(g, l)))
        }
        Quantity::CondensateCrossing => {
            let tc = first_crossing(&t, &ts.condensate, false, spec.threshold.unwrap_or(0.5))?;
            (tc, 0.0, Some(ehrenfest_time(g, l)))
        }
        Quantity::SweepExponent => {
            return Err(Error::Config("sweep_exponent needs sweep artifacts".into()))
        }
    };
    Ok((measured, sd, need_expected(spec, derived)?))
}

fn measure_sweep(rows: &[SweepRow], spec: &ComparisonSpec) -> Result<(f64, f64, f64)> {
    if spec.quantity != Quantity::SweepExponent {
        return Err(Error::Config(format!("{:?} needs run artifacts", spec.quantity)));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter_map(|r| r.fitted.map(|f| (r.value, f)))
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .unzip();
    let fit = linear_least_squares(&x, &y).map_err(|e| Error::FitRefused(e.to_string()))?;
    Ok((fit.slope, fit.slope_var.sqrt(), need_expected(spec, None)?))
}

pub fn judge(spec: &ComparisonSpec, measured: f64, measured_sd: f64, predicted: f64) -> Comparison {
    let relative_deviation = if predicted != 0.0 {
        (measured - predicted) / predicted.abs()
    } else {
        f64::INFINITY
    };
    let dev = if spec.relative {
        relative_deviation.abs()
    } else {
        (measured - predicted).abs()
    };
    Comparison {
        quantity: spec.quantity,
        measured,
        measured_sd,
        predicted,
        relative_deviation,
        tolerance: spec.tolerance,
        relative: spec.relative,
        pass: dev <= spec.tolerance,
    }
}

/// Verify the artifacts in `dir`, measure the requested quantity and judge it.
pub fn compare_artifacts(dir: &Path, spec: &ComparisonSpec) -> Result<Comparison> {
    let m = RunManifest::read(dir)?;
    m.verify(dir)?;
    let (measured, sd, predicted) = match m.kind {
        ArtifactKind::Run => {
            let ts = read_timeseries::<f64>(&dir.join(TIMESERIES_FILE), &ScalarContext::hardware())?;
            measure_run(&ts, &m, spec)?
        }
        ArtifactKind::Sweep => measure_sweep(&read_rows(&dir.join(SWEEP_FILE))?, spec)?,
    };
    Ok(judge(spec, measured, sd, predicted))
}
