//! Photon-number tomography as a star-product quantization scheme.
//!
//! States live on a truncated Fock space `|0⟩ … |dim−1⟩`. The tomogram of a
//! state `ρ` is the photon statistics of the displaced state,
//! `w(n, α) = Tr[ρ Û(n, α)]` with the dequantizer `Û(n, α) = D(α)|n⟩⟨n|D†(α)`.
//! The quantizer `D̂(n, α)` inverts that map by integration over the complex
//! plane, and the pair induces an associative star product on tomograms.
//!
//! Module map:
//!
//! - [`numerics`]: complex matrices, special functions, disk quadrature.
//! - [`fock`]: ladder operators, displacement, ordering parameter.
//! - [`states`]: benchmark density matrices and analytic tomograms.
//! - [`tomography`]: quantizer/dequantizer, forward map, reconstruction, dual symbols.
//! - [`starprod`]: star-product kernels (trace oracles and closed forms),
//!   fidelity, purity, quantumness checks and kernel validation reports.

pub mod error;
pub mod fock;
pub mod io;
pub mod numerics;
pub mod starprod;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};
pub use fock::{FockSpace, OrderingParameter};
pub use numerics::{CMatrix, QuadratureScheme};
pub use states::{DensityMatrix, StateSpec};
pub use tomography::{Frame, PhasePoint, Reduction, TomogramGrid};

pub use num_complex::Complex64;
