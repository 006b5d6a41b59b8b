//! Command implementations. Each returns the rendered document.

use qkramers_core::dynamics::grote_hynes;
use qkramers_core::matsubara::theta_critical_tol;
use qkramers_core::rate::{self, Validity};
use qkramers_core::{
    BarrierDynamics, Error, FluxState, MatsubaraTable, Normalization, RateConfig, SeriesValue,
    SystemParams,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::output::{to_json, ModelJson, Provenance, Table, TableJson};

/// Evaluates `f` for every item in parallel; results and the reported error
/// follow input order.
fn sweep<T, R, F>(items: &[T], f: F) -> Result<Vec<R>, CliError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, CliError> + Sync + Send,
{
    let out: Vec<Result<R, CliError>> = items.par_iter().map(&f).collect();
    out.into_iter().collect()
}

fn check_series(theta: f64, s: &SeriesValue, tol: f64) -> Result<(), CliError> {
    let bound = tol * s.value.abs().max(1.0);
    if s.tail_error > bound {
        return Err(CliError::Series {
            theta,
            error: s.tail_error,
            tol: bound,
        });
    }
    Ok(())
}

/// Rate settings with `theta_c` resolved once for the model.
fn rate_config(cfg: &RunConfig) -> Result<RateConfig, CliError> {
    let theta_c =
        theta_critical_tol(&cfg.model, cfg.terms, cfg.tolerances.root).map_err(CliError::Model)?;
    Ok(RateConfig {
        theta_c: Some(theta_c),
        ..cfg.rate
    })
}

struct Point {
    table: MatsubaraTable,
    params: SystemParams,
}

/// Guard, parameters and Matsubara table at one temperature.
fn point(cfg: &RunConfig, rc: &RateConfig, theta: f64) -> Result<Point, CliError> {
    let at = CliError::at(theta);
    rate::temperature_guard(&cfg.model, theta, rc).map_err(CliError::at(theta))?;
    let params = SystemParams::new(theta, cfg.epsilon, cfg.v_b, cfg.omega_w)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let table = MatsubaraTable::build(cfg.model, theta, cfg.terms).map_err(at)?;
    check_series(theta, &table.lambda(), cfg.tolerances.series)?;
    match table.omega() {
        Ok(omega) => check_series(theta, &omega, cfg.tolerances.series)?,
        Err(Error::Divergent(_)) => {}
        Err(e) => return Err(CliError::at(theta)(e)),
    }
    Ok(Point { table, params })
}

fn format(cfg: &RunConfig, default: Format, csv_ok: bool, name: &str) -> Result<Format, CliError> {
    let f = cfg.format.unwrap_or(default);
    if f == Format::Csv && !csv_ok {
        return Err(CliError::Usage(format!("`{name}` emits JSON only")));
    }
    Ok(f)
}

#[derive(Debug, Clone, Serialize)]
struct MatchingJson {
    ratio: Option<f64>,
    ok: bool,
    impossible: bool,
    threshold: f64,
}

#[derive(Debug, Clone, Serialize)]
struct PlateauJson {
    t_min: f64,
    t_max: f64,
    ok: bool,
    c: f64,
}

#[derive(Debug, Clone, Serialize)]
struct ValidityJson {
    theta_ok: bool,
    theta_ratio: f64,
    matching: MatchingJson,
    plateau: PlateauJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    drude_min_gamma: Option<f64>,
}

impl ValidityJson {
    fn new(v: &Validity, rc: &RateConfig, drude_min_gamma: Option<f64>) -> Self {
        Self {
            theta_ok: v.theta_ok,
            theta_ratio: v.theta_ratio,
            matching: MatchingJson {
                ratio: v.matching.ratio,
                ok: v.matching.ok,
                impossible: v.matching.impossible(),
                threshold: rc.matching_threshold,
            },
            plateau: PlateauJson {
                t_min: v.plateau.t_min,
                t_max: v.plateau.t_max,
                ok: v.plateau.ok,
                c: rc.plateau_c,
            },
            drude_min_gamma,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct Decomposition {
    arrhenius: f64,
    prefactor_classical: f64,
    quantum_factor: f64,
}

#[derive(Debug, Clone, Serialize)]
struct RateJson {
    theta: f64,
    gamma_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma_rate_dimensional: Option<f64>,
    decomposition: Decomposition,
    omega_r: f64,
    theta_c: f64,
    lambda: f64,
    omega: Option<f64>,
    validity: ValidityJson,
}

#[derive(Debug, Clone, Serialize)]
struct Envelope<T> {
    command: &'static str,
    model: ModelJson,
    results: Vec<T>,
    provenance: Provenance,
}

fn envelope<T>(cfg: &RunConfig, command: &'static str, results: Vec<T>) -> Envelope<T> {
    Envelope {
        command,
        model: (&cfg.model).into(),
        results,
        provenance: cfg.into(),
    }
}

fn table_json(cfg: &RunConfig, command: &'static str, t: &Table) -> String {
    to_json(&TableJson {
        command,
        model: (&cfg.model).into(),
        columns: &t.header,
        rows: &t.rows,
        provenance: cfg.into(),
    })
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// `rate`: escape rate, its decomposition and validity per temperature.
pub fn cmd_rate(cfg: &RunConfig) -> Result<String, CliError> {
    let fmt = format(cfg, Format::Json, true, "rate")?;
    let thetas = cfg.require_thetas()?;
    let rc = rate_config(cfg)?;
    let results = sweep(thetas, |&theta| {
        let p = point(cfg, &rc, theta)?;
        let r = rate::decay_rate(&p.table, &p.params, &rc).map_err(CliError::at(theta))?;
        Ok(RateJson {
            theta,
            gamma_rate: r.gamma_rate,
            gamma_rate_dimensional: cfg.omega0.map(|w| w * r.gamma_rate),
            decomposition: Decomposition {
                arrhenius: r.arrhenius,
                prefactor_classical: r.prefactor_classical,
                quantum_factor: r.quantum_factor,
            },
            omega_r: r.omega_r,
            theta_c: r.theta_c,
            lambda: r.lambda,
            omega: r.omega,
            validity: ValidityJson::new(&r.validity, &rc, None),
        })
    })?;
    Ok(match fmt {
        Format::Json => to_json(&envelope(cfg, "rate", results)),
        Format::Csv => {
            let mut header = vec![
                "theta",
                "gamma_rate",
                "arrhenius",
                "prefactor_classical",
                "quantum_factor",
                "omega_r",
                "theta_c",
                "lambda",
                "matching_ratio",
                "matching_ok",
                "t_min",
                "t_max",
                "plateau_ok",
            ];
            if cfg.omega0.is_some() {
                header.push("gamma_rate_dimensional");
            }
            let rows = results
                .iter()
                .map(|r| {
                    let v = &r.validity;
                    let mut row = vec![
                        r.theta,
                        r.gamma_rate,
                        r.decomposition.arrhenius,
                        r.decomposition.prefactor_classical,
                        r.decomposition.quantum_factor,
                        r.omega_r,
                        r.theta_c,
                        r.lambda,
                        v.matching.ratio.unwrap_or(f64::NAN),
                        flag(v.matching.ok),
                        v.plateau.t_min,
                        v.plateau.t_max,
                        flag(v.plateau.ok),
                    ];
                    row.extend(r.gamma_rate_dimensional);
                    row
                })
                .collect();
            Table { header, rows }.to_csv()
        }
    })
}

/// `flux-profile`: diagonal form factor on the q grid per temperature.
pub fn cmd_flux_profile(cfg: &RunConfig) -> Result<String, CliError> {
    let fmt = format(cfg, Format::Csv, true, "flux-profile")?;
    let thetas = cfg.require_thetas()?;
    let rc = rate_config(cfg)?;
    let blocks = sweep(thetas, |&theta| {
        let p = point(cfg, &rc, theta)?;
        let state = FluxState::from_table(&p.table, Normalization::Relative)
            .map_err(CliError::at(theta))?;
        Ok(state
            .flux_profile(&cfg.q_grid)
            .into_iter()
            .map(|(q, g)| vec![q, theta, g])
            .collect::<Vec<_>>())
    })?;
    let table = Table {
        header: vec!["q", "theta", "g_diag"],
        rows: blocks.into_iter().flatten().collect(),
    };
    Ok(match fmt {
        Format::Csv => table.to_csv(),
        Format::Json => table_json(cfg, "flux-profile", &table),
    })
}

#[derive(Debug, Clone, Serialize)]
struct CriticalJson {
    command: &'static str,
    model: ModelJson,
    theta_c: f64,
    omega_r: f64,
    provenance: Provenance,
}

/// `critical-theta`: crossover temperature and barrier growth rate.
pub fn cmd_critical_theta(cfg: &RunConfig) -> Result<String, CliError> {
    format(cfg, Format::Json, false, "critical-theta")?;
    let theta_c =
        theta_critical_tol(&cfg.model, cfg.terms, cfg.tolerances.root).map_err(CliError::Model)?;
    let omega_r = grote_hynes(&cfg.model).map_err(CliError::Model)?;
    Ok(to_json(&CriticalJson {
        command: "critical-theta",
        model: (&cfg.model).into(),
        theta_c,
        omega_r,
        provenance: cfg.into(),
    }))
}

#[derive(Debug, Clone, Serialize)]
struct ValidityReport {
    theta: f64,
    theta_c: f64,
    lambda: f64,
    omega: Option<f64>,
    #[serde(flatten)]
    validity: ValidityJson,
}

/// `validity`: matching, plateau window, Drude damping bound and the
/// temperature ratio per temperature.
pub fn cmd_validity(cfg: &RunConfig) -> Result<String, CliError> {
    format(cfg, Format::Json, false, "validity")?;
    let thetas = cfg.require_thetas()?;
    let rc = rate_config(cfg)?;
    let results = sweep(thetas, |&theta| {
        let p = point(cfg, &rc, theta)?;
        let r = rate::decay_rate(&p.table, &p.params, &rc).map_err(CliError::at(theta))?;
        let min_gamma = if cfg.model.omega_d().is_none() {
            None
        } else {
            match rate::drude_min_gamma(&cfg.model, theta, cfg.v_b, cfg.terms) {
                Ok(g) => Some(g),
                Err(Error::Domain { .. }) => None,
                Err(e) => return Err(CliError::at(theta)(e)),
            }
        };
        Ok(ValidityReport {
            theta,
            theta_c: r.theta_c,
            lambda: r.lambda,
            omega: r.omega,
            validity: ValidityJson::new(&r.validity, &rc, min_gamma),
        })
    })?;
    Ok(to_json(&envelope(cfg, "validity", results)))
}

/// `timeseries`: A(t), S(t) and the finite-time form factor on the t grid.
pub fn cmd_timeseries(cfg: &RunConfig) -> Result<String, CliError> {
    let fmt = format(cfg, Format::Csv, true, "timeseries")?;
    let thetas = cfg.require_thetas()?;
    if cfg.model.is_strict_ohmic() && !cfg.asymptotic {
        return Err(CliError::Usage(
            "exact A(t), S(t) need a drude bath; pass --asymptotic for strict ohmic damping".into(),
        ));
    }
    let rc = rate_config(cfg)?;
    let blocks = sweep(thetas, |&theta| {
        let p = point(cfg, &rc, theta)?;
        let state = FluxState::from_table(&p.table, Normalization::Relative)
            .map_err(CliError::at(theta))?;
        let dynamics = BarrierDynamics::new(&p.table)
            .map_err(CliError::at(theta))?
            .with_tolerance(cfg.tolerances.quadrature);
        sweep(&cfg.t_grid, |&t| {
            let tf = if cfg.asymptotic {
                dynamics.time_functions_asymptotic(t)
            } else {
                dynamics.time_functions(t).map_err(CliError::at(theta))?
            };
            let g = match state.form_factor_t(&tf, cfg.x, cfg.r) {
                Ok(g) => g,
                Err(Error::Domain { .. }) => f64::NAN.into(),
                Err(e) => return Err(CliError::at(theta)(e)),
            };
            Ok(vec![theta, t, tf.a, tf.s, g.re, g.im])
        })
    })?;
    let table = Table {
        header: vec!["theta", "t", "a", "s", "form_factor_re", "form_factor_im"],
        rows: blocks.into_iter().flatten().collect(),
    };
    Ok(match fmt {
        Format::Csv => table.to_csv(),
        Format::Json => table_json(cfg, "timeseries", &table),
    })
}
