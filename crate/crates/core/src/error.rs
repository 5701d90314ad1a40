use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (max |A - A†| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),

    #[error("invalid Fock space: {0}")]
    InvalidSpace(String),

    #[error("invalid ordering parameter s = {s}: {reason}")]
    InvalidOrdering { s: num_complex::Complex64, reason: String },

    #[error("photon number {n} outside the truncated space of dimension {dim}")]
    Cutoff { n: usize, dim: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("state spec parse error: {0}")]
    Parse(String),

    #[error("tomogram grid does not match the quadrature frame: {0}")]
    GridMismatch(String),

    #[error("reconstruction diverged: trace defect {trace_defect:e}")]
    Divergent { trace_defect: f64 },

    #[error("partial sums over n did not settle: change {change:e} at n_max")]
    Unsettled { change: f64 },

    #[error("imaginary residue {residue:e} exceeds tolerance")]
    ImaginaryResidue { residue: f64 },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
