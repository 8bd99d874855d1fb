use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kicked_gpe::analytic::{
    ehrenfest_time, gaussian_profile, generalized_ehrenfest_time, predict_psi1,
    predict_sigma2_delta_longtime, predict_subdiffusion, predict_tau, predict_tf,
};
use kicked_gpe::ensemble::{EnsembleOptions, SweepAxis, SweepFit};
use kicked_gpe::io::{
    compare_artifacts, execute_run, execute_sweep, ComparisonSpec, KickName, Overrides, RunConfig,
    COMPARISON_HEADER,
};
use kicked_gpe::observables::snapshot_times;
use kicked_gpe::Error;

const EXIT_VERDICT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_FIT: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser)]
#[command(name = "kgpe", version, about = "Kicked-interaction 1D Bose gas: simulation and predictions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one ensemble and write timeseries, profiles, histograms and manifest.
    Run {
        #[command(flatten)]
        params: Params,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run one ensemble per value of a parameter and fit each point.
    Sweep {
        #[command(flatten)]
        params: Params,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, value_enum)]
        axis: Axis,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, value_enum, default_value = "none")]
        fit: FitKind,
        /// Decay fits start at this multiple of t_E.
        #[arg(long, default_value_t = 1.0)]
        start_te: f64,
        /// Decay fits stop where the condensate first drops below this.
        #[arg(long, default_value_t = 1e-2)]
        floor: f64,
        /// Power-law window `t0,t1`.
        #[arg(long, value_delimiter = ',')]
        window: Option<Vec<f64>>,
    },
    /// Print closed-form predictions as CSV.
    Predict {
        #[arg(value_enum)]
        quantity: PredictQuantity,
        #[command(flatten)]
        params: Params,
        /// Times for time-dependent quantities.
        #[arg(long, value_delimiter = ',')]
        t: Option<Vec<f64>>,
        /// Momenta for t_q and gaussian.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q: Option<Vec<i64>>,
        /// Width used by the gaussian profile.
        #[arg(long)]
        sigma2: Option<f64>,
        /// Prefactor of the subdiffusive law.
        #[arg(long)]
        c: Option<f64>,
        /// Point `t,sigma2` the delta-kick growth law passes through.
        #[arg(long, value_delimiter = ',')]
        anchor: Option<Vec<f64>>,
    },
    /// Fit run or sweep artifacts and judge them against a prediction.
    Compare {
        /// Artifact directory written by run or sweep.
        #[arg(long)]
        dir: PathBuf,
        /// JSON comparison spec.
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Args, Default)]
struct Params {
    /// JSON configuration with flat keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    gamma_star: Option<f64>,
    #[arg(long)]
    f: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    ns: Option<usize>,
    #[arg(long)]
    ds: Option<f64>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    nr: Option<usize>,
    #[arg(long)]
    nd: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    kick: Option<Kick>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kick {
    Delta,
    Finite,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    #[value(name = "gamma_star", alias = "gamma-star")]
    GammaStar,
    F,
    Lambda,
    Nd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitKind {
    None,
    #[value(name = "condensate_decay", alias = "condensate-decay")]
    CondensateDecay,
    #[value(name = "sigma2_power_law", alias = "sigma2-power-law")]
    Sigma2PowerLaw,
    #[value(name = "condensate_power_law", alias = "condensate-power-law")]
    CondensatePowerLaw,
}

#[derive(Clone, Copy, ValueEnum)]
#[allow(non_camel_case_types)]
enum PredictQuantity {
    #[value(name = "t_E")]
    t_E,
    #[value(name = "t_q")]
    t_q,
    #[value(name = "tau")]
    tau,
    #[value(name = "t_f")]
    t_f,
    #[value(name = "psi1")]
    psi1,
    #[value(name = "sigma2_delta")]
    sigma2_delta,
    #[value(name = "sigma2_subdiff")]
    sigma2_subdiff,
    #[value(name = "gaussian")]
    gaussian,
}

impl Params {
    fn load(&self) -> Result<RunConfig, Error> {
        let mut config = match &self.config {
            Some(p) => RunConfig::from_path(p)?,
            None => RunConfig::default(),
        };
        config.apply(&Overrides {
            gamma_star: self.gamma_star,
            f: self.f,
            lambda: self.lambda,
            grid_size: self.ns,
            delta_s: self.ds,
            horizon: self.horizon,
            realizations: self.nr,
            digits: self.nd,
            seed: self.seed,
            kick: self.kick.map(|k| match k {
                Kick::Delta => KickName::Delta,
                Kick::Finite => KickName::Finite,
            }),
        });
        Ok(config)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_)
        | Error::InvalidParameter(_)
        | Error::Sizing(_)
        | Error::EmptyInterval { .. }
        | Error::PhaseLength { .. }
        | Error::Json(_) => EXIT_CONFIG,
        Error::Aliasing { .. } | Error::EnsembleInvalid { .. } | Error::Underflow(_) => EXIT_NUMERIC,
        Error::FitRefused(_) | Error::InsufficientData(_) => EXIT_FIT,
        Error::Io(_) | Error::Mismatch(_) => EXIT_IO,
    }
}

fn pair(v: &[f64], flag: &str) -> Result<(f64, f64), Error> {
    match v {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::Config(format!("{flag} takes two comma-separated values"))),
    }
}

fn predict(
    quantity: PredictQuantity,
    config: &RunConfig,
    t: Option<Vec<f64>>,
    q: Option<Vec<i64>>,
    sigma2: Option<f64>,
    c: Option<f64>,
    anchor: Option<Vec<f64>>,
) -> Result<Vec<String>, Error> {
    let (g, l) = (config.gamma_star, config.lambda);
    let f = || match config.kick {
        KickName::Finite => Ok(config.f.unwrap_or(kicked_gpe::io::DEFAULT_F)),
        KickName::Delta => Err(Error::Config("this quantity needs a finite kick (--f)".into())),
    };
    let te = ehrenfest_time(g, l)?;
    let times = || t.clone().unwrap_or_else(|| snapshot_times(config.horizon).into_iter().map(|t| t as f64).collect());
    let row = |name: &str, t: Option<f64>, q: Option<i64>, v: f64| {
        format!(
            "{name},{},{},{v:.16e}",
            t.map(|t| t.to_string()).unwrap_or_default(),
            q.map(|q| q.to_string()).unwrap_or_default()
        )
    };
    let mut rows = Vec::new();
    match quantity {
        PredictQuantity::t_E => rows.push(row("t_E", None, None, te)),
        PredictQuantity::t_q => {
            for q in q.unwrap_or_else(|| vec![1, 2, 3, 4]) {
                let qq = u32::try_from(q).map_err(|_| Error::Config(format!("t_q needs q >= 0, got {q}")))?;
                rows.push(row("t_q", None, Some(q), generalized_ehrenfest_time(qq, g, l)?));
            }
        }
        PredictQuantity::tau => rows.push(row("tau", None, None, predict_tau(g, l)?)),
        PredictQuantity::t_f => rows.push(row("t_f", None, None, predict_tf(g, l, f()?)?)),
        PredictQuantity::psi1 => {
            let ts = t.clone().unwrap_or_else(|| {
                snapshot_times(te.floor() as u64).into_iter().map(|t| t as f64).collect()
            });
            for t in ts {
                rows.push(row("psi1", Some(t), None, predict_psi1(t, g, l)?));
            }
        }
        PredictQuantity::sigma2_delta => {
            let law = predict_sigma2_delta_longtime(g, l)?;
            rows.push(row("sigma2_delta_rate", None, None, law.rate));
            if let Some(a) = anchor {
                let a = pair(&a, "--anchor")?;
                let law = law.anchored(a.0, a.1);
                for t in times() {
                    rows.push(row("sigma2_delta", Some(t), None, law.eval(t)));
                }
            }
        }
        PredictQuantity::sigma2_subdiff => {
            let c = c.ok_or_else(|| Error::Config("sigma2_subdiff needs --c".into()))?;
            let f = f()?;
            for t in times() {
                rows.push(row("sigma2_subdiff", Some(t), None, predict_subdiffusion(t, g, f, c)));
            }
        }
        PredictQuantity::gaussian => {
            let s = sigma2.ok_or_else(|| Error::Config("gaussian needs --sigma2".into()))?;
            for q in q.unwrap_or_else(|| (-10..=10).collect()) {
                rows.push(row("gaussian", None, Some(q), gaussian_profile(q as f64, s)?));
            }
        }
    }
    Ok(rows)
}

fn dispatch(command: Command) -> Result<u8, Error> {
    match command {
        Command::Run { params, out } => {
            let config = params.load()?;
            let m = execute_run(&config, &out, &EnsembleOptions::from_env())?;
            eprintln!(
                "{} realizations completed, {} aborted; artifacts in {}",
                m.completed,
                m.aborted,
                out.display()
            );
        }
        Command::Sweep {
            params,
            out,
            axis,
            values,
            fit,
            start_te,
            floor,
            window,
        } => {
            let config = params.load()?;
            let axis = match axis {
                Axis::GammaStar => SweepAxis::GammaStar,
                Axis::F => SweepAxis::F,
                Axis::Lambda => SweepAxis::Lambda,
                Axis::Nd => SweepAxis::Digits,
            };
            let win = || {
                window
                    .as_ref()
                    .ok_or_else(|| Error::Config("power-law fits need --window".into()))
                    .and_then(|w| pair(w, "--window"))
            };
            let fit = match fit {
                FitKind::None => SweepFit::None,
                FitKind::CondensateDecay => SweepFit::CondensateDecay { start_te, floor },
                FitKind::Sigma2PowerLaw => {
                    let (t0, t1) = win()?;
                    SweepFit::Sigma2PowerLaw { t0, t1 }
                }
                FitKind::CondensatePowerLaw => {
                    let (t0, t1) = win()?;
                    SweepFit::CondensatePowerLaw { t0, t1 }
                }
            };
            let m = execute_sweep(&config, axis, &values, fit, &out, &EnsembleOptions::from_env())?;
            for note in &m.notes {
                eprintln!("{note}");
            }
            if let Some((slope, sd)) = m.sweep.as_ref().and_then(|s| s.scaling) {
                println!("scaling exponent vs {}: {slope:.4} +- {sd:.4}", axis.label());
            }
        }
        Command::Predict {
            quantity,
            params,
            t,
            q,
            sigma2,
            c,
            anchor,
        } => {
            let config = params.load()?;
            let rows = predict(quantity, &config, t, q, sigma2, c, anchor)?;
            println!("quantity,t,q,value");
            for r in rows {
                println!("{r}");
            }
        }
        Command::Compare { dir, spec } => {
            let spec = ComparisonSpec::from_path(&spec)?;
            let c = compare_artifacts(&dir, &spec)?;
            println!("{COMPARISON_HEADER}");
            println!("{}", c.csv_row());
            if !c.pass {
                return Ok(EXIT_VERDICT_FAIL);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
