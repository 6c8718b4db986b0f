//! Command-line grammar and the validated run configuration.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use koenigs::{Family, Model};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Classify,
    Geodesic,
    Flow,
    Actions,
    Spectrum,
    Verify,
    Figures,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Trig,
    H0,
    Hplus,
    Hminus,
    Affine,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Trig => Family::TrigI,
            FamilyArg::H0 => Family::Hyp0,
            FamilyArg::Hplus => Family::HypPlus,
            FamilyArg::Hminus => Family::HypMinusLocal,
            FamilyArg::Affine => Family::Affine,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Models,
    Invariants,
    Geodesics,
    Flow,
    Actions,
    Quantum,
    Specfun,
    Cli,
}

/// Superintegrable Koenigs metrics: geodesics, actions and spectra.
#[derive(Parser, Debug)]
#[command(name = "koenigs", version)]
pub struct Cli {
    pub command: Command,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    #[arg(long = "E", allow_hyphen_values = true)]
    pub e: Option<f64>,
    #[arg(long = "L", allow_hyphen_values = true)]
    pub l: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub n_max: usize,
    #[arg(long, default_value_t = 3)]
    pub m_max: usize,
    /// Integrator tolerance, or `default`.
    #[arg(long, default_value = "default")]
    pub tol: String,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (directory for `figures`); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sample count for curves and sweeps.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Flow duration.
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub model: Option<Model>,
    pub e: Option<f64>,
    pub l: Option<f64>,
    pub n_max: usize,
    pub m_max: usize,
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub points: usize,
    pub t_end: f64,
    pub suite: Suite,
}

impl RunConfig {
    pub fn model(&self) -> &Model {
        self.model.as_ref().expect("validated")
    }

    pub fn energy(&self) -> f64 {
        self.e.expect("validated")
    }

    pub fn ang(&self) -> f64 {
        self.l.expect("validated")
    }
}

/// Checks the target operation's preconditions; the message names the first
/// one that fails.
pub fn validate(cli: Cli) -> Result<RunConfig, String> {
    use Command::*;
    let tol = match cli.tol.as_str() {
        "default" => DEFAULT_TOL,
        s => match s.parse::<f64>() {
            Ok(t) if t > 0.0 && t < 1.0 => t,
            _ => return Err(format!("--tol must be `default` or a number in (0, 1), got `{s}`")),
        },
    };
    let needs_model = matches!(cli.command, Classify | Geodesic | Flow | Actions | Spectrum);
    let model = if needs_model {
        let family = cli.family.ok_or("--family is required")?;
        let rho = cli.rho.ok_or("--rho is required")?;
        let xi = cli.xi.ok_or("--xi is required")?;
        Some(Model::new(family.into(), rho, xi).map_err(|e| e.to_string())?)
    } else {
        None
    };
    if matches!(cli.command, Classify | Geodesic | Flow) {
        let e = cli.e.ok_or("--E is required")?;
        if !e.is_finite() {
            return Err("--E must be finite".into());
        }
    }
    if matches!(cli.command, Classify | Geodesic | Flow | Actions) {
        let l = cli.l.ok_or("--L is required")?;
        if !(l > 0.0 && l.is_finite()) {
            return Err(format!("--L must be positive, got {l}"));
        }
    }
    if let Some(m) = &model {
        if cli.command == Actions && !matches!(m.family(), Family::Hyp0 | Family::HypPlus) {
            return Err(format!("actions needs --family h0 or hplus, got {}", m.family()));
        }
        if cli.command == Spectrum {
            if !matches!(m.family(), Family::Hyp0 | Family::HypPlus) {
                return Err(format!("spectrum needs --family h0 or hplus, got {}", m.family()));
            }
            if !(m.xi() > 0.0) {
                return Err(format!("spectrum needs --xi > 0, got {}", m.xi()));
            }
        }
    }
    if cli.command == Flow && !(cli.t_end >= 0.0 && cli.t_end.is_finite()) {
        return Err(format!("--t-end must be finite and ≥ 0, got {}", cli.t_end));
    }
    if cli.points < 2 {
        return Err(format!("--points must be at least 2, got {}", cli.points));
    }
    let format = match (cli.command, cli.format) {
        (_, None) => match cli.command {
            Classify => Format::Json,
            Figures => Format::Svg,
            _ => Format::Csv,
        },
        (Classify, Some(Format::Json)) => Format::Json,
        (Geodesic, Some(f)) => f,
        (Flow | Actions | Spectrum, Some(f @ (Format::Csv | Format::Json))) => f,
        (Figures, Some(Format::Svg)) => Format::Svg,
        (Verify, Some(_)) => return Err("verify prints a report and takes no --format".into()),
        (c, Some(f)) => return Err(format!("--format {f:?} is not available for {c:?}").to_lowercase()),
    };
    Ok(RunConfig {
        command: cli.command,
        model,
        e: cli.e,
        l: cli.l,
        n_max: cli.n_max,
        m_max: cli.m_max,
        tol,
        seed: cli.seed,
        format,
        out: cli.out,
        points: cli.points,
        t_end: cli.t_end,
        suite: cli.suite,
    })
}
