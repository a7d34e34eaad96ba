use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument on the branch cut: {0}")]
    BranchCut(String),

    #[error("energy not in the resolvent set: {0}")]
    EnergyDomain(String),

    #[error("kernel evaluated on the diagonal (r = 0)")]
    Singularity,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("singular quadrature cell: {0}")]
    SingularCell(String),

    #[error("non-integrable singularity of order {0}")]
    NonIntegrable(u8),

    #[error("iteration diverged after {iterations} steps (residual {residual:.3e})")]
    Divergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    #[error("near-singular linear system (possible embedded eigenvalue or resonance): {0}")]
    NearSingular(String),

    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
