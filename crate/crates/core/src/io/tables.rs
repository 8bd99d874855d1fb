use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{amplitude_histogram, EnsembleStats, MomentumProfile};
use crate::precision::{Real, ScalarContext};

pub const TIMESERIES_HEADER: [&str; 5] = ["t", "sigma2", "sigma2_sd", "condensate", "ipr"];
pub const PROFILES_HEADER: [&str; 3] = ["t", "q", "mean_population"];

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Config(format!("csv: {other:?}")),
    }
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(csv_err)
}

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::Reader::from_path(path).map_err(csv_err)
}

fn check_header(rdr: &mut csv::Reader<std::fs::File>, want: &[&str]) -> Result<()> {
    let have = rdr.headers().map_err(csv_err)?;
    if have.iter().ne(want.iter().copied()) {
        return Err(Error::Mismatch(format!("csv header {have:?}, expected {want:?}")));
    }
    Ok(())
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse().map_err(|e| Error::Config(format!("bad integer {s:?}: {e}")))
}

/// Ensemble-mean time series, one row per kick.
#[derive(Clone, Debug, PartialEq)]
pub struct Timeseries<R> {
    pub t: Vec<u64>,
    pub sigma2: Vec<R>,
    /// Absent with fewer than two completed realizations.
    pub sigma2_sd: Vec<Option<R>>,
    pub condensate: Vec<R>,
    pub ipr: Vec<R>,
}

impl<R: Real> Timeseries<R> {
    pub fn from_stats(stats: &EnsembleStats<R>) -> Self {
        let sd = match stats.sd_sigma() {
            Ok(v) => v.into_iter().map(Some).collect(),
            Err(_) => vec![None; stats.times().len()],
        };
        Timeseries {
            t: stats.times().to_vec(),
            sigma2: stats.mean_sigma2(),
            sigma2_sd: sd,
            condensate: stats.mean_condensate(),
            ipr: stats.ipr(),
        }
    }

    pub fn times_f64(&self) -> Vec<f64> {
        self.t.iter().map(|&t| t as f64).collect()
    }

    pub fn column_f64(col: &[R]) -> Vec<f64> {
        col.iter().map(Real::to_f64).collect()
    }
}

pub fn write_timeseries<R: Real>(path: &Path, ts: &Timeseries<R>, ctx: &ScalarContext) -> Result<()> {
    let d = ctx.print_digits();
    let mut w = writer(path)?;
    w.write_record(TIMESERIES_HEADER).map_err(csv_err)?;
    for i in 0..ts.t.len() {
        let sd = ts.sigma2_sd[i].as_ref().map(|v| v.to_decimal(d)).unwrap_or_default();
        w.write_record([
            ts.t[i].to_string(),
            ts.sigma2[i].to_decimal(d),
            sd,
            ts.condensate[i].to_decimal(d),
            ts.ipr[i].to_decimal(d),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_timeseries<R: Real>(path: &Path, ctx: &ScalarContext) -> Result<Timeseries<R>> {
    let mut rdr = reader(path)?;
    check_header(&mut rdr, &TIMESERIES_HEADER)?;
    let mut ts = Timeseries {
        t: Vec::new(),
        sigma2: Vec::new(),
        sigma2_sd: Vec::new(),
        condensate: Vec::new(),
        ipr: Vec::new(),
    };
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        ts.t.push(parse_u64(&rec[0])?);
        ts.sigma2.push(R::parse_decimal(ctx, &rec[1])?);
        ts.sigma2_sd.push(match &rec[2] {
            "" => None,
            s => Some(R::parse_decimal(ctx, s)?),
        });
        ts.condensate.push(R::parse_decimal(ctx, &rec[3])?);
        ts.ipr.push(R::parse_decimal(ctx, &rec[4])?);
    }
    Ok(ts)
}

/// Mean momentum profiles at every snapshot time.
pub fn profiles_from_stats<R: Real>(stats: &EnsembleStats<R>) -> Vec<(u64, MomentumProfile<R>)> {
    stats
        .profile_times()
        .iter()
        .filter_map(|&t| stats.mean_profile(t).map(|p| (t, p)))
        .collect()
}

pub fn write_profiles<R: Real>(
    path: &Path,
    profiles: &[(u64, MomentumProfile<R>)],
    ctx: &ScalarContext,
) -> Result<()> {
    let d = ctx.print_digits();
    let mut w = writer(path)?;
    w.write_record(PROFILES_HEADER).map_err(csv_err)?;
    for (t, p) in profiles {
        for (q, v) in p.iter() {
            w.write_record([t.to_string(), q.to_string(), v.to_decimal(d)])
                .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_profiles<R: Real>(path: &Path, ctx: &ScalarContext) -> Result<Vec<(u64, MomentumProfile<R>)>> {
    let mut rdr = reader(path)?;
    check_header(&mut rdr, &PROFILES_HEADER)?;
    let mut out: Vec<(u64, i64, Vec<R>)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let t = parse_u64(&rec[0])?;
        let q: i64 = rec[1]
            .parse()
            .map_err(|e| Error::Config(format!("bad momentum {:?}: {e}", &rec[1])))?;
        let v = R::parse_decimal(ctx, &rec[2])?;
        match out.last_mut() {
            Some((lt, q0, vals)) if *lt == t => {
                if q != *q0 + vals.len() as i64 {
                    return Err(Error::Mismatch(format!("momenta not contiguous at t = {t}, q = {q}")));
                }
                vals.push(v);
            }
            _ => out.push((t, q, vec![v])),
        }
    }
    Ok(out
        .into_iter()
        .map(|(t, q0, v)| (t, MomentumProfile::new(q0, v)))
        .collect())
}

/// One bin of one amplitude histogram, with the exponential fit of its sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub q: i64,
    pub t: u64,
    pub bin_lower: f64,
    pub bin_upper: f64,
    pub count: u64,
    pub density: f64,
    pub rho_bar: f64,
    pub ks_statistic: f64,
    pub ks_p_value: f64,
    pub samples: usize,
}

/// Histogram rows for every recorded `(q, t)`; pairs whose fit is refused are
/// returned separately with the reason.
pub fn histogram_rows<R: Real>(stats: &EnsembleStats<R>, bins: usize) -> (Vec<HistogramRow>, Vec<(i64, u64, String)>) {
    let mut rows = Vec::new();
    let mut refused = Vec::new();
    for &(q, t) in &stats.layout().amplitude_keys {
        let samples = stats.amplitude_samples(q, t).unwrap_or(&[]);
        match amplitude_histogram(samples, bins) {
            Ok(h) => {
                for b in 0..h.histogram.bins() {
                    rows.push(HistogramRow {
                        q,
                        t,
                        bin_lower: h.histogram.edges[b],
                        bin_upper: h.histogram.edges[b + 1],
                        count: h.histogram.counts[b],
                        density: h.histogram.density[b],
                        rho_bar: h.fit.rho_bar,
                        ks_statistic: h.fit.ks.statistic,
                        ks_p_value: h.fit.ks.p_value,
                        samples: h.fit.ks.samples,
                    });
                }
            }
            Err(e) => refused.push((q, t, e.to_string())),
        }
    }
    (rows, refused)
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    reader(path)?
        .deserialize()
        .map(|r| r.map_err(csv_err))
        .collect()
}

pub const HISTOGRAM_HEADER: [&str; 10] = [
    "q",
    "t",
    "bin_lower",
    "bin_upper",
    "count",
    "density",
    "rho_bar",
    "ks_statistic",
    "ks_p_value",
    "samples",
];

/// One point of a sweep summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub fitted: Option<f64>,
    pub fitted_sd: Option<f64>,
    pub completed: Option<usize>,
    pub aborted: Option<usize>,
    pub error: Option<String>,
}

pub const SWEEP_HEADER: [&str; 6] = ["value", "fitted", "fitted_sd", "completed", "aborted", "error"];
