use serde::Serialize;

use crate::error::{Error, Result};

/// One-sample Kolmogorov-Smirnov outcome.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
    pub samples: usize,
}

/// Survival function of the Kolmogorov distribution.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=200 {
        let jf = j as f64;
        let term = sign * (-2.0 * jf * jf * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-16 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// KS test of `samples` against the continuous CDF `cdf`.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> KsTest {
    let n = samples.len();
    if n == 0 {
        return KsTest {
            statistic: 0.0,
            p_value: 1.0,
            samples: 0,
        };
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf);
    }
    let en = nf.sqrt();
    KsTest {
        statistic: d,
        p_value: kolmogorov_q((en + 0.12 + 0.11 / en) * d),
        samples: n,
    }
}

pub fn ks_uniform(samples: &[f64], lower: f64, upper: f64) -> KsTest {
    ks_test(samples, |x| ((x - lower) / (upper - lower)).clamp(0.0, 1.0))
}

/// KS test against the exponential law with mean `mean`.
pub fn ks_exponential(samples: &[f64], mean: f64) -> KsTest {
    ks_test(samples, |x| if x <= 0.0 { 0.0 } else { 1.0 - (-x / mean).exp() })
}

/// Normalized histogram on logarithmically spaced bins.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    /// `bins + 1` increasing edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Probability density per bin; integrates to the fraction of samples
    /// inside the edges.
    pub density: Vec<f64>,
    /// Samples outside the edges or nonpositive.
    pub outside: u64,
}

impl Histogram {
    pub fn log_binned(samples: &[f64], bins: usize, lower: f64, upper: f64) -> Result<Self> {
        if bins == 0 || !(lower > 0.0 && upper > lower) {
            return Err(Error::InvalidParameter(format!(
                "log bins need 0 < lower < upper and bins > 0, got [{lower}, {upper}] x {bins}"
            )));
        }
        let (la, lb) = (lower.ln(), upper.ln());
        let width = (lb - la) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|i| (la + width * i as f64).exp()).collect();
        let mut counts = vec![0u64; bins];
        let mut outside = 0;
        for &x in samples {
            if !(x >= lower && x <= upper) {
                outside += 1;
                continue;
            }
            let k = (((x.ln() - la) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
        let n = samples.len().max(1) as f64;
        let density = counts
            .iter()
            .enumerate()
            .map(|(k, &c)| c as f64 / (n * (edges[k + 1] - edges[k])))
            .collect();
        Ok(Histogram {
            edges,
            counts,
            density,
            outside,
        })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn nonempty_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect()
    }
}

/// Fit of `P(rho) = exp(-rho / rho_bar) / rho_bar`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentialFit {
    /// Maximum-likelihood scale: the sample mean.
    pub rho_bar: f64,
    pub ks: KsTest,
}

impl ExponentialFit {
    pub fn accepted(&self, significance: f64) -> bool {
        self.ks.p_value > significance
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmplitudeHistogram {
    pub histogram: Histogram,
    pub fit: ExponentialFit,
}

/// Log-binned histogram of `|psi_q|^2` samples plus an exponential-law fit.
/// Bins span the positive sample range.
pub fn amplitude_histogram(samples: &[f64], bins: usize) -> Result<AmplitudeHistogram> {
    let positive = samples.iter().filter(|&&x| x > 0.0 && x.is_finite());
    let lower = positive.clone().cloned().fold(f64::INFINITY, f64::min);
    let upper = positive.cloned().fold(0.0, f64::max);
    if !(lower.is_finite() && upper > lower) {
        return Err(Error::FitRefused("fewer than 2 distinct positive samples".into()));
    }
    let histogram = Histogram::log_binned(samples, bins, lower, upper)?;
    if histogram.nonempty_bins() < 2 {
        return Err(Error::FitRefused(format!(
            "{} nonempty bins, need 2",
            histogram.nonempty_bins()
        )));
    }
    let rho_bar = samples.iter().sum::<f64>() / samples.len() as f64;
    Ok(AmplitudeHistogram {
        histogram,
        fit: ExponentialFit {
            rho_bar,
            ks: ks_exponential(samples, rho_bar),
        },
    })
}
