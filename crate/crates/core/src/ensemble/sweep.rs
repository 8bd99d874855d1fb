use serde::{Deserialize, Serialize};

use super::run::{run_ensemble, EnsembleOptions};
use crate::analytic::{
    decay_time, ehrenfest_time, fit_exponential, fit_power_law, linear_least_squares, FitResult,
};
use crate::error::{Error, Result};
use crate::gpe::{KickKind, PhaseConstraint, SimConfig};
use crate::observables::{EnsembleStats, Probes};
use crate::precision::{Real, ScalarContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    GammaStar,
    F,
    Lambda,
    Digits,
}

impl SweepAxis {
    pub fn label(&self) -> &'static str {
        match self {
            SweepAxis::GammaStar => "gamma_star",
            SweepAxis::F => "f",
            SweepAxis::Lambda => "lambda",
            SweepAxis::Digits => "nd",
        }
    }

    /// `base` with this axis set to `value`.
    pub fn apply(&self, base: &SimConfig, value: f64) -> Result<SimConfig> {
        let mut c = base.clone();
        match self {
            SweepAxis::GammaStar => c.gamma_star = value,
            SweepAxis::Lambda => c.lambda = value,
            SweepAxis::F => c.kick = KickKind::Finite { f: value },
            SweepAxis::Digits => {
                if value.fract() != 0.0 || value < 1.0 {
                    return Err(Error::InvalidParameter(format!("digits must be a positive integer, got {value}")));
                }
                c.precision = ScalarContext::arbitrary(value as u32)?;
            }
        }
        Ok(c)
    }
}

/// Per-point reduction applied after each ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepFit {
    None,
    /// Exponential fit of the condensate from `start_te * t_E` until it first
    /// drops below `floor`; reports the decay time.
    CondensateDecay { start_te: f64, floor: f64 },
    /// Power-law exponent of `sigma^2` over `[t0, t1]`.
    Sigma2PowerLaw { t0: f64, t1: f64 },
    /// Power-law exponent of the condensate over `[t0, t1]`.
    CondensatePowerLaw { t0: f64, t1: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub config: SimConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
    pub fit: SweepFit,
    #[serde(default)]
    pub constraint: PhaseConstraint,
    #[serde(default)]
    pub probes: Probes,
}

impl SweepPlan {
    /// One point per value of `axis`, everything else from `base`.
    pub fn over(base: &SimConfig, axis: SweepAxis, values: &[f64], fit: SweepFit) -> Result<Self> {
        let points = values
            .iter()
            .map(|&v| {
                Ok(SweepPoint {
                    value: v,
                    config: axis.apply(base, v)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SweepPlan {
            axis,
            points,
            fit,
            constraint: PhaseConstraint::none(),
            probes: Probes::default(),
        })
    }

    /// Every point shares grid size and precision unless the axis is precision.
    pub fn validate(&self) -> Result<()> {
        let Some(first) = self.points.first() else {
            return Err(Error::InvalidParameter("sweep has no points".into()));
        };
        for p in &self.points {
            p.config.validate()?;
            if p.config.grid_size != first.config.grid_size {
                return Err(Error::InvalidParameter("sweep points differ in grid size".into()));
            }
            if self.axis != SweepAxis::Digits && p.config.precision != first.config.precision {
                return Err(Error::InvalidParameter("sweep points differ in precision".into()));
            }
        }
        Ok(())
    }
}

/// Decay time of a series from `start` until it first drops below `floor`.
pub fn fit_decay_time(t: &[f64], y: &[f64], start: f64, floor: f64) -> Result<(f64, FitResult)> {
    let end = t
        .iter()
        .zip(y)
        .find(|(&ti, &yi)| ti >= start && yi < floor)
        .map(|(&ti, _)| ti)
        .unwrap_or(f64::INFINITY);
    let fit = fit_exponential(t, y, (start, end))?;
    Ok((decay_time(&fit)?, fit))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointResult<R> {
    pub value: f64,
    pub stats: Option<EnsembleStats<R>>,
    /// Decay time or exponent, with the fit behind it.
    pub fitted: Option<(f64, FitResult)>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult<R> {
    pub axis: SweepAxis,
    pub points: Vec<PointResult<R>>,
    /// Log-log slope of the fitted quantity against the axis value.
    pub scaling: Option<(f64, f64)>,
}

fn reduce<R: Real>(fit: &SweepFit, config: &SimConfig, stats: &EnsembleStats<R>) -> Result<Option<(f64, FitResult)>> {
    let t: Vec<f64> = stats.times().iter().map(|&t| t as f64).collect();
    let to_f64 = |v: Vec<R>| v.iter().map(Real::to_f64).collect::<Vec<f64>>();
    match *fit {
        SweepFit::None => Ok(None),
        SweepFit::CondensateDecay { start_te, floor } => {
            let te = ehrenfest_time(config.gamma_star, config.lambda)?;
            fit_decay_time(&t, &to_f64(stats.mean_condensate()), start_te * te, floor).map(Some)
        }
        SweepFit::Sigma2PowerLaw { t0, t1 } => {
            let fit = fit_power_law(&t, &to_f64(stats.mean_sigma2()), (t0, t1))?;
            Ok(Some((fit.value, fit)))
        }
        SweepFit::CondensatePowerLaw { t0, t1 } => {
            let fit = fit_power_law(&t, &to_f64(stats.mean_condensate()), (t0, t1))?;
            Ok(Some((fit.value, fit)))
        }
    }
}

/// Run every point, apply the plan's fitter, then fit the scaling of the
/// fitted quantity with the axis. Failing points are recorded and skipped.
pub fn run_sweep<R: Real>(plan: &SweepPlan, options: &EnsembleOptions) -> Result<SweepResult<R>> {
    plan.validate()?;
    let mut points = Vec::with_capacity(plan.points.len());
    for p in &plan.points {
        log::info!("sweep {} = {}", plan.axis.label(), p.value);
        let outcome = run_ensemble::<R>(&p.config, &plan.constraint, &plan.probes, options)
            .and_then(|stats| {
                let fitted = reduce(&plan.fit, &p.config, &stats);
                Ok((stats, fitted))
            });
        points.push(match outcome {
            Ok((stats, Ok(fitted))) => PointResult {
                value: p.value,
                stats: Some(stats),
                fitted,
                error: None,
            },
            Ok((stats, Err(e))) => PointResult {
                value: p.value,
                stats: Some(stats),
                fitted: None,
                error: Some(e.to_string()),
            },
            Err(e) => PointResult {
                value: p.value,
                stats: None,
                fitted: None,
                error: Some(e.to_string()),
            },
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter_map(|p| p.fitted.as_ref().map(|(v, _)| (p.value, *v)))
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .unzip();
    let scaling = linear_least_squares(&xs, &ys)
        .ok()
        .map(|fit| (fit.slope, fit.slope_var.sqrt()));
    Ok(SweepResult {
        axis: plan.axis,
        points,
        scaling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decay_window_stops_at_floor() {
        let t: Vec<f64> = (0..400).map(|i| i as f64).collect();
        let y: Vec<f64> = t
            .iter()
            .map(|&t| if t < 50.0 { 1.0 } else { (-(t - 50.0) / 40.0).exp().max(1e-3) })
            .collect();
        let (tau, fit) = fit_decay_time(&t, &y, 50.0, 0.01).unwrap();
        assert!((tau - 40.0).abs() < 1e-6, "{tau}");
        assert!(fit.window.1 < 250.0);
    }

    #[test]
    fn axis_application() {
        let base = SimConfig::default();
        assert_eq!(SweepAxis::GammaStar.apply(&base, 0.5).unwrap().gamma_star, 0.5);
        assert_eq!(SweepAxis::F.apply(&base, 64.0).unwrap().kick, KickKind::Finite { f: 64.0 });
        let p = SweepAxis::Digits.apply(&base, 32.0).unwrap();
        assert_eq!(p.precision.digits(), 32);
        assert!(SweepAxis::Digits.apply(&base, 3.5).is_err());
        let plan = SweepPlan::over(&base, SweepAxis::Lambda, &[2.0, 3.0], SweepFit::None).unwrap();
        assert!(plan.validate().is_ok());
    }
}
