//! CSV and JSON rendering.

use std::fmt::Write as _;
use std::path::Path;

use qkramers_core::DampingModel;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

/// Shortest round-trip decimal, independent of locale.
pub fn fmt_f64(x: f64) -> String {
    let mut buf = ryu::Buffer::new();
    buf.format(x).to_owned()
}

/// Column-oriented result.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelJson {
    pub kind: &'static str,
    pub gamma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_d: Option<f64>,
}

impl From<&DampingModel> for ModelJson {
    fn from(m: &DampingModel) -> Self {
        match *m {
            DampingModel::Ohmic { gamma } => Self { kind: "ohmic", gamma, omega_d: None },
            DampingModel::Drude { gamma, omega_d } => Self {
                kind: "drude",
                gamma,
                omega_d: Some(omega_d),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TolerancesJson {
    pub series: f64,
    pub quadrature: f64,
    pub root: f64,
}

/// Settings needed to reproduce a report.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub version: &'static str,
    pub terms: usize,
    pub tolerances: TolerancesJson,
    pub delta: f64,
    pub matching_threshold: f64,
    pub plateau_c: f64,
    pub epsilon: f64,
    pub v_b: f64,
    pub omega_w: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
}

impl From<&RunConfig> for Provenance {
    fn from(c: &RunConfig) -> Self {
        Self {
            version: concat!("qkramers ", env!("CARGO_PKG_VERSION")),
            terms: c.terms,
            tolerances: TolerancesJson {
                series: c.tolerances.series,
                quadrature: c.tolerances.quadrature,
                root: c.tolerances.root,
            },
            delta: c.rate.delta,
            matching_threshold: c.rate.matching_threshold,
            plateau_c: c.rate.plateau_c,
            epsilon: c.epsilon,
            v_b: c.v_b,
            omega_w: c.omega_w,
            omega0: c.omega0,
        }
    }
}

/// Tabular data in a JSON envelope.
#[derive(Debug, Clone, Serialize)]
pub struct TableJson<'a> {
    pub command: &'static str,
    pub model: ModelJson,
    pub columns: &'a [&'static str],
    pub rows: &'a [Vec<f64>],
    pub provenance: Provenance,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or stdout when absent.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "stdout".into(),
                    source,
                })
        }
    }
}
