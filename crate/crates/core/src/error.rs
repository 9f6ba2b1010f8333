use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry in {0}")]
    NonFinite(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cross-check failed: {what} (residual {residual:.3e} > {tol:.1e})")]
    CrossCheck { what: String, residual: f64, tol: f64 },

    #[error("diagnostic failed: {what} (value {value:.3e}, tolerance {tol:.1e})")]
    Diagnostic { what: String, value: f64, tol: f64 },

    #[error("divergent Gaussian integral: real part of the pivot block has eigenvalue {min_eig:.3e}")]
    Divergent { min_eig: f64 },

    #[error("flow bound exceeded: |t|*|F| = {value:.3e} > {limit}")]
    FlowBound { value: f64, limit: f64 },

    #[error("subspace is not the graph of a weight: {0}")]
    NotWeightGraph(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("ODE integration failed at t = {t}: {reason}")]
    Ode { t: f64, reason: String },

    #[error("quadrature failed: {0}")]
    Quadrature(String),
}

impl Error {
    pub(crate) fn check(what: &str, residual: f64, tol: f64) -> std::result::Result<(), Error> {
        if residual.is_finite() && residual <= tol {
            Ok(())
        } else {
            Err(Error::CrossCheck { what: what.to_string(), residual, tol })
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
