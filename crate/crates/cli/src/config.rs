use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;

pub const RTOL_ENV: &str = "FLOQUET_SG_RTOL";
pub const DEFAULT_ODE_RTOL: f64 = 1e-10;
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
pub const DEFAULT_BOX: [f64; 4] = [-1.0, 1.0, -1.5, 1.5];
pub const DEFAULT_GRID: usize = 200;
pub const DEFAULT_HILL_POINTS: usize = 300;
pub const DEFAULT_IMAG_POINTS: usize = 400;
pub const DEFAULT_BETA_MAX: f64 = 4.0;

#[derive(Parser, Debug)]
#[command(
    name = "sgfloquet",
    version,
    about = "Floquet spectra and spectral stability of periodic sine-Gordon traveling waves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify the wave and decide its spectral stability.
    Classify(Args),
    /// Sample G_p on a grid and trace its zero-level set.
    Spectrum(Args),
    /// Band edges of Hill's equation with the Lamé oracle.
    Bands(Args),
    /// Table of the Hill discriminant over a range of mu.
    Hill(Args),
    /// Intervals of the imaginary axis in the spectrum.
    ImagSpectrum(Args),
    /// Instability certificate.
    Certify(Args),
    /// Run the identity suite and report every residual.
    Selfcheck(Args),
}

impl Command {
    pub fn split(self) -> (CommandKind, Args) {
        match self {
            Command::Classify(a) => (CommandKind::Classify, a),
            Command::Spectrum(a) => (CommandKind::Spectrum, a),
            Command::Bands(a) => (CommandKind::Bands, a),
            Command::Hill(a) => (CommandKind::Hill, a),
            Command::ImagSpectrum(a) => (CommandKind::ImagSpectrum, a),
            Command::Certify(a) => (CommandKind::Certify, a),
            Command::Selfcheck(a) => (CommandKind::Selfcheck, a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Classify,
    Spectrum,
    Bands,
    Hill,
    ImagSpectrum,
    Certify,
    Selfcheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Args {
    /// Wave speed.
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    /// Wave energy.
    #[arg(long = "E", allow_hyphen_values = true)]
    pub energy: f64,
    /// Spectrum window in the lambda plane.
    #[arg(
        long = "box",
        num_args = 4,
        value_names = ["RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"],
        allow_hyphen_values = true
    )]
    pub bbox: Option<Vec<f64>>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu_max: Option<f64>,
    /// Number of samples for `hill` and `imag-spectrum`.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub beta_max: Option<f64>,
    /// Relative tolerance of the ODE integrations (overrides FLOQUET_SG_RTOL).
    #[arg(long)]
    pub rtol: Option<f64>,
    /// Bisection stops once |G_p| is below this.
    #[arg(long)]
    pub root_tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved settings of one run, echoed into every JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub c: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    pub ode_rtol: f64,
    pub root_tol: f64,
    #[serde(rename = "box")]
    pub bbox: [f64; 4],
    pub nx: usize,
    pub ny: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub beta_max: f64,
    pub format: Format,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    /// Applies defaults. The ODE tolerance comes from `--rtol`, then
    /// `FLOQUET_SG_RTOL`, then the built-in default.
    pub fn resolve(
        command: CommandKind,
        args: Args,
        env_rtol: Option<String>,
    ) -> Result<Self, CliError> {
        let env_rtol =
            match env_rtol {
                Some(text) => Some(text.trim().parse::<f64>().map_err(|_| {
                    CliError::Usage(format!("{RTOL_ENV} is not a number: {text:?}"))
                })?),
                None => None,
            };
        let ode_rtol = args.rtol.or(env_rtol).unwrap_or(DEFAULT_ODE_RTOL);
        let root_tol = args.root_tol.unwrap_or(DEFAULT_ROOT_TOL);
        for (name, v) in [("rtol", ode_rtol), ("root-tol", root_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
            }
        }
        let bbox = match args.bbox {
            Some(v) => [v[0], v[1], v[2], v[3]],
            None => DEFAULT_BOX,
        };
        let default_format = match command {
            CommandKind::Spectrum | CommandKind::Hill => Format::Csv,
            _ => Format::Json,
        };
        let format = args.format.unwrap_or(default_format);
        let allowed = match command {
            CommandKind::Spectrum => true,
            CommandKind::Hill => format != Format::Svg,
            _ => format == Format::Json,
        };
        if !allowed {
            return Err(CliError::Usage(format!(
                "format {format:?} is not available for this command"
            )));
        }
        Ok(Self {
            command,
            c: args.c,
            energy: args.energy,
            ode_rtol,
            root_tol,
            bbox,
            nx: args.nx.unwrap_or(DEFAULT_GRID),
            ny: args.ny.unwrap_or(DEFAULT_GRID),
            mu_min: args.mu_min,
            mu_max: args.mu_max,
            n: args.n,
            beta_max: args.beta_max.unwrap_or(DEFAULT_BETA_MAX),
            format,
            output_path: args.out,
        })
    }
}
