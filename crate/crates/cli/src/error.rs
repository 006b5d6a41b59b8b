use thiserror::Error;

/// Failure of a CLI run, carrying its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}", at_theta(*theta, source))]
    Core {
        theta: f64,
        #[source]
        source: qkramers_core::Error,
    },

    #[error("{0}")]
    Model(#[source] qkramers_core::Error),

    #[error("theta = {theta}: series truncation error {error:e} exceeds tolerance {tol:e} (raise `terms`)")]
    Series { theta: f64, error: f64, tol: f64 },

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn at_theta(theta: f64, e: &qkramers_core::Error) -> String {
    match e {
        qkramers_core::Error::TemperatureGuard { .. } => e.to_string(),
        _ => format!("theta = {theta}: {e}"),
    }
}

impl CliError {
    pub fn at(theta: f64) -> impl FnOnce(qkramers_core::Error) -> Self {
        move |source| CliError::Core { theta, source }
    }

    fn core_code(e: &qkramers_core::Error) -> u8 {
        if e.is_regime_violation() {
            2
        } else if e.is_numerical_failure() {
            3
        } else {
            1
        }
    }

    /// 0 ok, 1 usage, 2 regime violation, 3 numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Core { source, .. } | CliError::Model(source) => Self::core_code(source),
            CliError::Series { .. } => 3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qkramers_core::Error;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        let guard = Error::TemperatureGuard { theta: 6.0, theta_c: 5.0, delta: 0.05 };
        assert_eq!(CliError::at(6.0)(guard).exit_code(), 2);
        let pole = Error::PoleProximity { n: 1, denominator: 0.0 };
        assert_eq!(CliError::at(1.0)(pole).exit_code(), 3);
        assert_eq!(CliError::Series { theta: 1.0, error: 1.0, tol: 0.1 }.exit_code(), 3);
        assert_eq!(CliError::Model(Error::Unsupported("x")).exit_code(), 1);
    }

    #[test]
    fn guard_message_names_theta_c() {
        let guard = Error::TemperatureGuard { theta: 6.0, theta_c: 5.0788, delta: 0.05 };
        assert!(CliError::at(6.0)(guard).to_string().contains("theta_c = 5.0788"));
    }
}
