//! Run configuration: a flat TOML file merged with command-line flags.
//!
//! Every key is optional in the file. A flag, when given, replaces the file
//! value; anything still missing falls back to the defaults below.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use qkramers_core::matsubara::{DEFAULT_TERMS, MIN_TERMS, THETA_CRITICAL_TOL};
use qkramers_core::{DampingModel, RateConfig};
use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_V_B: f64 = 10.0;
pub const DEFAULT_OMEGA_W: f64 = 1.0;
pub const DEFAULT_SERIES_TOL: f64 = 1e-8;
pub const DEFAULT_QUAD_TOL: f64 = 1e-9;
pub const DEFAULT_Q_GRID: [f64; 3] = [-20.0, 20.0, 0.1];
pub const DEFAULT_T_GRID: [f64; 3] = [0.5, 20.0, 0.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ohmic,
    Drude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A scalar or a list in the config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

/// Contents of the config file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<ModelKind>,
    pub gamma: Option<f64>,
    pub omega_d: Option<f64>,
    pub theta: Option<OneOrMany>,
    pub theta_range: Option<[f64; 3]>,
    pub epsilon: Option<f64>,
    pub v_b: Option<f64>,
    pub omega_w: Option<f64>,
    pub terms: Option<usize>,
    pub series_tol: Option<f64>,
    pub quad_tol: Option<f64>,
    pub root_tol: Option<f64>,
    pub delta: Option<f64>,
    pub matching_threshold: Option<f64>,
    pub plateau_c: Option<f64>,
    pub omega0: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub q_range: Option<[f64; 3]>,
    pub t_range: Option<[f64; 3]>,
    pub x: Option<f64>,
    pub r: Option<f64>,
    pub asymptotic: Option<bool>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

fn parse_range(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected START:STOP:STEP".into());
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.trim().parse().map_err(|e| format!("`{p}`: {e}"))?;
    }
    Ok(out)
}

/// Flags shared by all commands.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat TOML config file; flags override its values.
    #[arg(long, short = 'c')]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Damping strength gamma (units of omega_0).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Drude cutoff omega_D (units of omega_0).
    #[arg(long)]
    pub omega_d: Option<f64>,
    /// Scaled inverse temperature(s), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Vec<f64>,
    /// Inclusive theta range START:STOP:STEP.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub theta_range: Option<[f64; 3]>,
    /// Anharmonicity parameter epsilon.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Barrier height in units of hbar omega_0 / theta.
    #[arg(long)]
    pub v_b: Option<f64>,
    /// Well frequency in units of omega_0.
    #[arg(long)]
    pub omega_w: Option<f64>,
    /// Matsubara truncation N.
    #[arg(long)]
    pub terms: Option<usize>,
    /// Relative bound on the estimated truncation error of the series.
    #[arg(long)]
    pub series_tol: Option<f64>,
    /// Tolerance of the memory-kernel convolution quadrature.
    #[arg(long)]
    pub quad_tol: Option<f64>,
    /// Tolerance of the critical-temperature root search.
    #[arg(long)]
    pub root_tol: Option<f64>,
    /// Temperature guard margin: theta <= (1 - delta) theta_c.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub matching_threshold: Option<f64>,
    /// Plateau onset constant c in t_min = c / omega_R.
    #[arg(long)]
    pub plateau_c: Option<f64>,
    /// Dimensional omega_0; rates are also reported multiplied by it.
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output path; stdout when absent.
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
}

/// Extra flags of `flux-profile`.
#[derive(Debug, Clone, Default, Args)]
pub struct ProfileArgs {
    /// Inclusive q range START:STOP:STEP.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub q_range: Option<[f64; 3]>,
}

/// Extra flags of `timeseries`.
#[derive(Debug, Clone, Default, Args)]
pub struct SeriesArgs {
    /// Inclusive time range START:STOP:STEP (units of 1/omega_0).
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub t_range: Option<[f64; 3]>,
    /// Coordinate x (difference) of the form factor.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Coordinate r (sum) of the form factor.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    /// Use the large-time forms of A and S.
    #[arg(long)]
    pub asymptotic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub series: f64,
    pub quadrature: f64,
    pub root: f64,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: DampingModel,
    pub thetas: Vec<f64>,
    pub epsilon: f64,
    pub v_b: f64,
    pub omega_w: f64,
    pub terms: usize,
    pub tolerances: Tolerances,
    pub rate: RateConfig,
    pub omega0: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub q_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub x: f64,
    pub r: f64,
    pub asymptotic: bool,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("`{name}` must be finite and > 0, got {v}")))
    }
}

/// Expands an inclusive `(start, stop, step)` range.
pub fn expand_range(name: &str, [start, stop, step]: [f64; 3]) -> Result<Vec<f64>, CliError> {
    if !(start.is_finite() && stop.is_finite() && step > 0.0 && step.is_finite()) {
        return Err(usage(format!("`{name}` needs finite bounds and step > 0")));
    }
    if stop < start {
        return Err(usage(format!("`{name}` has stop {stop} < start {start}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(usage(format!("`{name}` expands to {count} points")));
    }
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

impl RunConfig {
    /// Merges `file` with the flags; flags win.
    pub fn resolve(
        file: FileConfig,
        flags: &CommonArgs,
        profile: &ProfileArgs,
        series: &SeriesArgs,
    ) -> Result<Self, CliError> {
        let kind = flags.model.or(file.model).unwrap_or(ModelKind::Ohmic);
        let gamma = flags
            .gamma
            .or(file.gamma)
            .ok_or_else(|| usage("`gamma` is required"))?;
        let model = match kind {
            ModelKind::Ohmic => {
                if flags.omega_d.is_some() || file.omega_d.is_some() {
                    return Err(usage("`omega_d` only applies to the drude model"));
                }
                DampingModel::ohmic(gamma)
            }
            ModelKind::Drude => {
                let w = flags
                    .omega_d
                    .or(file.omega_d)
                    .ok_or_else(|| usage("`omega_d` is required for the drude model"))?;
                DampingModel::drude(gamma, w)
            }
        }
        .map_err(|e| usage(e.to_string()))?;

        let thetas = if !flags.theta.is_empty() {
            flags.theta.clone()
        } else if let Some(range) = flags.theta_range {
            expand_range("theta_range", range)?
        } else {
            match (file.theta, file.theta_range) {
                (Some(_), Some(_)) => {
                    return Err(usage("give either `theta` or `theta_range`, not both"))
                }
                (Some(OneOrMany::One(t)), None) => vec![t],
                (Some(OneOrMany::Many(ts)), None) => ts,
                (None, Some(range)) => expand_range("theta_range", range)?,
                (None, None) => Vec::new(),
            }
        };
        for &t in &thetas {
            positive("theta", t)?;
        }

        let epsilon = flags.epsilon.or(file.epsilon).unwrap_or(DEFAULT_EPSILON);
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(usage(format!("`epsilon` must lie in (0, 1), got {epsilon}")));
        }
        let v_b = positive("v_b", flags.v_b.or(file.v_b).unwrap_or(DEFAULT_V_B))?;
        let omega_w = positive("omega_w", flags.omega_w.or(file.omega_w).unwrap_or(DEFAULT_OMEGA_W))?;
        let terms = flags.terms.or(file.terms).unwrap_or(DEFAULT_TERMS);
        if terms < MIN_TERMS {
            return Err(usage(format!("`terms` must be >= {MIN_TERMS}, got {terms}")));
        }
        let tolerances = Tolerances {
            series: positive("series_tol", flags.series_tol.or(file.series_tol).unwrap_or(DEFAULT_SERIES_TOL))?,
            quadrature: positive("quad_tol", flags.quad_tol.or(file.quad_tol).unwrap_or(DEFAULT_QUAD_TOL))?,
            root: positive("root_tol", flags.root_tol.or(file.root_tol).unwrap_or(THETA_CRITICAL_TOL))?,
        };
        let defaults = RateConfig::default();
        let delta = flags.delta.or(file.delta).unwrap_or(defaults.delta);
        if !(0.0..1.0).contains(&delta) {
            return Err(usage(format!("`delta` must lie in [0, 1), got {delta}")));
        }
        let rate = RateConfig {
            delta,
            matching_threshold: positive(
                "matching_threshold",
                flags
                    .matching_threshold
                    .or(file.matching_threshold)
                    .unwrap_or(defaults.matching_threshold),
            )?,
            plateau_c: positive(
                "plateau_c",
                flags.plateau_c.or(file.plateau_c).unwrap_or(defaults.plateau_c),
            )?,
            terms,
            theta_c: None,
        };
        let omega0 = flags
            .omega0
            .or(file.omega0)
            .map(|w| positive("omega0", w))
            .transpose()?;

        let q_grid = expand_range(
            "q_range",
            profile.q_range.or(file.q_range).unwrap_or(DEFAULT_Q_GRID),
        )?;
        let t_grid = expand_range(
            "t_range",
            series.t_range.or(file.t_range).unwrap_or(DEFAULT_T_GRID),
        )?;
        if t_grid[0] <= 0.0 {
            return Err(usage("`t_range` must start at t > 0"));
        }
        let x = series.x.or(file.x).unwrap_or(0.5);
        let r = series.r.or(file.r).unwrap_or(0.5);
        if !(x.is_finite() && r.is_finite()) {
            return Err(usage("`x` and `r` must be finite"));
        }

        Ok(Self {
            model,
            thetas,
            epsilon,
            v_b,
            omega_w,
            terms,
            tolerances,
            rate,
            omega0,
            format: flags.format.or(file.format),
            out: flags.out.clone().or(file.out),
            q_grid,
            t_grid,
            x,
            r,
            asymptotic: series.asymptotic || file.asymptotic.unwrap_or(false),
        })
    }

    /// Loads the file named by `--config`, if any, and merges.
    pub fn from_args(
        flags: &CommonArgs,
        profile: &ProfileArgs,
        series: &SeriesArgs,
    ) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Self::resolve(file, flags, profile, series)
    }

    pub fn require_thetas(&self) -> Result<&[f64], CliError> {
        if self.thetas.is_empty() {
            Err(usage("`theta` or `theta_range` is required"))
        } else {
            Ok(&self.thetas)
        }
    }
}
