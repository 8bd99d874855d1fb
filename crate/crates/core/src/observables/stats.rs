use serde::Serialize;

use super::profile::{ipr, MomentumProfile};
use super::record::{Probes, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::precision::{Real, ScalarContext};

/// Running count, mean and sum of squared deviations.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments<R> {
    count: u64,
    mean: R,
    m2: R,
}

impl<R: Real> Moments<R> {
    pub fn new(ctx: &ScalarContext) -> Self {
        Moments {
            count: 0,
            mean: R::zero(ctx),
            m2: R::zero(ctx),
        }
    }

    pub fn push(&mut self, x: &R) {
        self.count += 1;
        let delta = x.clone() - &self.mean;
        let step = delta.clone() / &x.like_i64(self.count as i64);
        self.mean += &step;
        let resid = x.clone() - &self.mean;
        self.m2 += &(delta * &resid);
    }

    /// Pooled combination; `self` plays the role of the lower-indexed part.
    pub fn merge(&mut self, other: &Moments<R>) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let n = self.count + other.count;
        let na = self.mean.like_i64(self.count as i64);
        let nb = self.mean.like_i64(other.count as i64);
        let nn = self.mean.like_i64(n as i64);
        let delta = other.mean.clone() - &self.mean;
        self.mean += &(delta.clone() * &nb / &nn);
        self.m2 += &other.m2;
        self.m2 += &(delta.square() * &na * &nb / &nn);
        self.count = n;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> &R {
        &self.mean
    }

    /// Population variance `m2 / n`.
    pub fn variance(&self) -> Result<R> {
        if self.count == 0 {
            return Err(Error::InsufficientData("no samples".into()));
        }
        Ok(self.m2.clone() / &self.m2.like_i64(self.count as i64))
    }
}

/// Population standard deviation of per-realization `sigma^2`.
pub fn sd_sigma<R: Real>(m: &Moments<R>) -> Result<R> {
    if m.count() < 2 {
        return Err(Error::InsufficientData(format!(
            "sd(sigma) needs 2 realizations, have {}",
            m.count()
        )));
    }
    let v = m.variance()?;
    // Round-off can leave a tiny negative m2 for identical inputs.
    if v < v.like_i64(0) {
        return Ok(v.like_i64(0));
    }
    Ok(v.sqrt())
}

/// Axes shared by every record of one ensemble.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StatsLayout {
    pub times: Vec<u64>,
    pub profile_times: Vec<u64>,
    pub q_min: i64,
    pub profile_len: usize,
    pub amplitude_keys: Vec<(i64, u64)>,
}

impl StatsLayout {
    pub fn new(horizon: u64, grid_size: usize, probes: &Probes) -> Self {
        let probes = probes.clipped(horizon);
        StatsLayout {
            times: (0..=horizon).collect(),
            profile_times: probes.profile_times.clone(),
            q_min: -(grid_size as i64 / 2),
            profile_len: grid_size,
            amplitude_keys: probes.amplitude_keys(),
        }
    }
}

/// Mergeable ensemble accumulator.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleStats<R> {
    ctx: ScalarContext,
    layout: StatsLayout,
    completed: usize,
    aborted: usize,
    sigma2: Vec<Moments<R>>,
    condensate: Vec<Moments<R>>,
    ipr_moment: Vec<Moments<R>>,
    profile_sums: Vec<Vec<R>>,
    amplitudes: Vec<Vec<f64>>,
}

impl<R: Real> EnsembleStats<R> {
    pub fn empty(ctx: &ScalarContext, layout: StatsLayout) -> Self {
        let n = layout.times.len();
        EnsembleStats {
            ctx: *ctx,
            sigma2: vec![Moments::new(ctx); n],
            condensate: vec![Moments::new(ctx); n],
            ipr_moment: vec![Moments::new(ctx); n],
            profile_sums: vec![vec![R::zero(ctx); layout.profile_len]; layout.profile_times.len()],
            amplitudes: vec![Vec::new(); layout.amplitude_keys.len()],
            completed: 0,
            aborted: 0,
            layout,
        }
    }

    pub fn context(&self) -> &ScalarContext {
        &self.ctx
    }

    pub fn layout(&self) -> &StatsLayout {
        &self.layout
    }

    pub fn times(&self) -> &[u64] {
        &self.layout.times
    }

    pub fn completed(&self) -> usize {
        self.completed
    }

    pub fn aborted(&self) -> usize {
        self.aborted
    }

    pub fn record_abort(&mut self) {
        self.aborted += 1;
    }

    pub fn push(&mut self, record: &TrajectoryRecord<R>) -> Result<()> {
        if record.times != self.layout.times {
            return Err(Error::Mismatch(format!(
                "record covers {} samples, ensemble expects {}",
                record.times.len(),
                self.layout.times.len()
            )));
        }
        let ptimes: Vec<u64> = record.profiles.iter().map(|(t, _)| *t).collect();
        if ptimes != self.layout.profile_times {
            return Err(Error::Mismatch("profile snapshot times differ".into()));
        }
        let keys: Vec<(i64, u64)> = record.amplitudes.iter().map(|&(q, t, _)| (q, t)).collect();
        if keys != self.layout.amplitude_keys {
            return Err(Error::Mismatch("amplitude probes differ".into()));
        }
        for (i, p) in record.profiles.iter().enumerate() {
            if p.1.q_min() != self.layout.q_min || p.1.len() != self.layout.profile_len {
                return Err(Error::Mismatch("profile grid differs".into()));
            }
            for (acc, v) in self.profile_sums[i].iter_mut().zip(p.1.values()) {
                *acc += v;
            }
        }
        for i in 0..record.times.len() {
            self.sigma2[i].push(&record.sigma2[i]);
            self.condensate[i].push(&record.condensate[i]);
            self.ipr_moment[i].push(&record.ipr_moment[i]);
        }
        for (acc, &(_, _, v)) in self.amplitudes.iter_mut().zip(&record.amplitudes) {
            acc.push(v);
        }
        self.completed += 1;
        Ok(())
    }

    /// Append `other`, which must cover the realizations following `self`.
    pub fn merge(&mut self, other: &EnsembleStats<R>) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::Mismatch("ensemble axes differ".into()));
        }
        if self.ctx != other.ctx {
            return Err(Error::Mismatch("ensemble precisions differ".into()));
        }
        for (a, b) in [
            (&mut self.sigma2, &other.sigma2),
            (&mut self.condensate, &other.condensate),
            (&mut self.ipr_moment, &other.ipr_moment),
        ] {
            for (x, y) in a.iter_mut().zip(b) {
                x.merge(y);
            }
        }
        for (a, b) in self.profile_sums.iter_mut().zip(&other.profile_sums) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            a.extend_from_slice(b);
        }
        self.completed += other.completed;
        self.aborted += other.aborted;
        Ok(())
    }

    pub fn sigma2(&self) -> &[Moments<R>] {
        &self.sigma2
    }

    pub fn condensate(&self) -> &[Moments<R>] {
        &self.condensate
    }

    pub fn ipr_moment(&self) -> &[Moments<R>] {
        &self.ipr_moment
    }

    pub fn mean_sigma2(&self) -> Vec<R> {
        self.sigma2.iter().map(|m| m.mean().clone()).collect()
    }

    pub fn mean_condensate(&self) -> Vec<R> {
        self.condensate.iter().map(|m| m.mean().clone()).collect()
    }

    /// IPR per time, inverting the averaged fourth moments.
    pub fn ipr(&self) -> Vec<R> {
        self.ipr_moment.iter().map(|m| ipr(m.mean())).collect()
    }

    pub fn sd_sigma(&self) -> Result<Vec<R>> {
        self.sigma2.iter().map(sd_sigma).collect()
    }

    /// Averaged population profile at snapshot `t`.
    pub fn mean_profile(&self, t: u64) -> Option<MomentumProfile<R>> {
        let i = self.layout.profile_times.iter().position(|&x| x == t)?;
        if self.completed == 0 {
            return None;
        }
        let n = R::from_i64(&self.ctx, self.completed as i64);
        let values = self.profile_sums[i].iter().map(|s| s.clone() / &n).collect();
        Some(MomentumProfile::new(self.layout.q_min, values))
    }

    pub fn profile_times(&self) -> &[u64] {
        &self.layout.profile_times
    }

    /// Samples of `|psi_q(t)|^2` in realization order.
    pub fn amplitude_samples(&self, q: i64, t: u64) -> Option<&[f64]> {
        let i = self.layout.amplitude_keys.iter().position(|&k| k == (q, t))?;
        Some(&self.amplitudes[i])
    }
}
