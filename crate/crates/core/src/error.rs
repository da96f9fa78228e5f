use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// System size must be even and at least 4.
    #[error("invalid system size L = {0}: must be even and >= 4")]
    InvalidSize(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Both the kinetic and pairing components vanish, so the Bogoliubov
    /// angle (and the ground state) is undefined at this momentum.
    #[error("gap closed at k = {k}")]
    GapClosed { k: f64 },

    /// Adaptive quadrature exhausted its panel budget or hit the minimum
    /// panel width. Near a critical point this is expected; the partial
    /// value is still returned for inspection.
    #[error("quadrature did not converge: value {partial} +/- {error_estimate}")]
    NoConvergence { partial: f64, error_estimate: f64 },

    #[error("outside the domain of validity: {0}")]
    Domain(String),

    #[error("phase classification ambiguous: {0}")]
    BoundaryAmbiguous(String),

    #[error("path violates boundary conditions: {0}")]
    BoundaryViolation(String),
}
