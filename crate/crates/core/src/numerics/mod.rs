//! Complex linear algebra on small dense matrices, special functions and
//! quadrature over the complex plane.

pub mod compensated;
mod matrix;
pub mod quadrature;
pub mod special;

pub use matrix::CMatrix;
pub use quadrature::{disk_quadrature, gauss_legendre, QuadNode, QuadratureScheme};
pub use special::{bessel_j0, bessel_j0_complex, laguerre_assoc, laguerre_assoc_complex, ln_factorial};

/// Tolerances shared across the crate.
pub mod tol {
    /// Max-entry anti-Hermitian part accepted by the eigenvalue solver.
    pub const EIGEN_HERMITICITY: f64 = 1e-9;
    /// Max-entry anti-Hermitian part of a valid density matrix.
    pub const STATE_HERMITICITY: f64 = 1e-10;
    /// Allowed deviation of a density matrix trace from one.
    pub const STATE_TRACE: f64 = 1e-9;
    /// Most negative eigenvalue admitted in a density matrix.
    pub const STATE_MIN_EIGENVALUE: f64 = -1e-9;
    /// Renormalisation above which a truncated state is flagged.
    pub const TRUNCATION_WARNING: f64 = 1e-6;
    /// Slack on stored tomogram probabilities.
    pub const TOMOGRAM_VALUE: f64 = 1e-9;
    /// Slack on the per-node sum of tomogram values.
    pub const TOMOGRAM_NODE_SUM: f64 = 1e-6;
    /// Trace defect beyond which reconstruction is declared divergent.
    pub const DIVERGENT_TRACE_DEFECT: f64 = 0.05;
    /// Change of a star-product partial sum allowed at the last photon number.
    pub const PARTIAL_SUM_SETTLE: f64 = 1e-4;
    /// Imaginary residue tolerated in tomographic fidelity.
    pub const FIDELITY_IMAGINARY: f64 = 1e-5;
    /// Eigenvalue threshold of the nonnegativity check.
    pub const QUANTUMNESS_MIN_EIGENVALUE: f64 = -5e-3;
    /// Slack on the `[0, 1]` bounds of fidelity and purity.
    pub const BOUNDS_SLACK: f64 = 5e-3;
    /// Relative tolerance for a kernel transcription to count as a match.
    pub const KERNEL_MATCH: f64 = 1e-6;
    /// Relative tolerance of oracle self-consistency checks.
    pub const ORACLE_CONSISTENCY: f64 = 1e-9;
}
