//! Benchmark density matrices and their analytic photon-number tomograms.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::fock::FockSpace;
use crate::numerics::{laguerre_assoc, ln_factorial, tol, CMatrix};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatParity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateSpec {
    Ground,
    Fock(usize),
    Coherent(Complex64),
    Thermal(f64),
    Cat(CatParity, Complex64),
}

impl StateSpec {
    pub fn validate(&self, space: FockSpace) -> Result<()> {
        match *self {
            StateSpec::Ground => Ok(()),
            StateSpec::Fock(m) => space.check_level(m),
            StateSpec::Coherent(b) | StateSpec::Cat(_, b) if !(b.re.is_finite() && b.im.is_finite()) => {
                Err(Error::InvalidState(format!("non-finite amplitude {b}")))
            }
            StateSpec::Cat(CatParity::Odd, b) if b.norm() == 0.0 => {
                Err(Error::InvalidState("odd cat state needs a nonzero amplitude".into()))
            }
            StateSpec::Thermal(nbar) if !(nbar > 0.0 && nbar.is_finite()) => {
                Err(Error::InvalidState(format!("mean photon number must be positive, got {nbar}")))
            }
            _ => Ok(()),
        }
    }
}

fn parse_complex(s: &str) -> Result<Complex64> {
    Complex64::from_str(s.trim()).map_err(|_| Error::Parse(format!("not a complex number: {s:?}")))
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognised state {s:?} (expected ground, fock:M, coherent:B, thermal:NBAR or cat:even|odd:B)"));
        let mut parts = s.trim().splitn(3, ':');
        let head = parts.next().ok_or_else(bad)?;
        let a = parts.next();
        let b = parts.next();
        match (head, a, b) {
            ("ground", None, None) => Ok(StateSpec::Ground),
            ("fock", Some(m), None) => m.trim().parse().map(StateSpec::Fock).map_err(|_| bad()),
            ("coherent", Some(z), None) => parse_complex(z).map(StateSpec::Coherent),
            ("thermal", Some(n), None) => n.trim().parse().map(StateSpec::Thermal).map_err(|_| bad()),
            ("cat", Some(p), Some(z)) => {
                let parity = match p.trim() {
                    "even" => CatParity::Even,
                    "odd" => CatParity::Odd,
                    _ => return Err(bad()),
                };
                parse_complex(z).map(|z| StateSpec::Cat(parity, z))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Ground => write!(f, "ground"),
            StateSpec::Fock(m) => write!(f, "fock:{m}"),
            StateSpec::Coherent(b) => write!(f, "coherent:{b}"),
            StateSpec::Thermal(n) => write!(f, "thermal:{n}"),
            StateSpec::Cat(CatParity::Even, b) => write!(f, "cat:even:{b}"),
            StateSpec::Cat(CatParity::Odd, b) => write!(f, "cat:odd:{b}"),
        }
    }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    space: FockSpace,
    mat: CMatrix,
    leakage: f64,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        let space = FockSpace::new(mat.dim())?;
        let defect = mat.hermiticity_defect();
        if defect > tol::STATE_HERMITICITY {
            return Err(Error::NotHermitian { defect });
        }
        let trace = mat.trace();
        if (trace - 1.0).norm() > tol::STATE_TRACE {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        let min = mat.hermitian_part().hermitian_eigenvalues()?[0];
        if min < tol::STATE_MIN_EIGENVALUE {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { space, mat, leakage: 0.0 })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Probability mass discarded by truncating to the Fock cutoff before renormalizing.
    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    pub fn truncation_warning(&self) -> bool {
        self.leakage > tol::TRUNCATION_WARNING
    }

    /// `Tr[ρ A]`.
    pub fn expectation(&self, a: &CMatrix) -> Result<Complex64> {
        self.mat.trace_of_product(a)
    }

    /// `Tr[ρ₁ ρ₂]`.
    pub fn overlap(&self, other: &DensityMatrix) -> Result<f64> {
        Ok(self.mat.trace_of_product(&other.mat)?.re)
    }

    pub fn purity(&self) -> f64 {
        self.overlap(self).expect("same dimension")
    }

    /// Convex combination `p ρ₁ + (1 − p) ρ₂`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("mixing weight {p} outside [0, 1]")));
        }
        let mut mat = self.mat.scale(Complex64::new(p, 0.0));
        mat = mat.add(&other.mat.scale(Complex64::new(1.0 - p, 0.0)))?;
        Ok(DensityMatrix { space: self.space, mat, leakage: p * self.leakage + (1.0 - p) * other.leakage })
    }
}

fn coherent_amplitudes(dim: usize, beta: Complex64) -> Vec<Complex64> {
    let x = beta.norm_sqr();
    (0..dim)
        .map(|n| {
            if n == 0 {
                return Complex64::new((-0.5 * x).exp(), 0.0);
            }
            if x == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let ln_mag = -0.5 * x + n as f64 * beta.norm().ln() - 0.5 * ln_factorial(n);
            Complex64::from_polar(ln_mag.exp(), n as f64 * beta.arg())
        })
        .collect()
}

fn pure(space: FockSpace, psi: Vec<Complex64>, full_norm_sqr: f64) -> DensityMatrix {
    let norm_sqr: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
    let scale = 1.0 / norm_sqr.sqrt();
    let psi: Vec<Complex64> = psi.into_iter().map(|c| c * scale).collect();
    let mat = CMatrix::outer(&psi, &psi);
    DensityMatrix { space, mat, leakage: (1.0 - norm_sqr / full_norm_sqr).max(0.0) }
}

pub fn make_state(space: FockSpace, spec: StateSpec) -> Result<DensityMatrix> {
    spec.validate(space)?;
    let dim = space.dim();
    let state = match spec {
        StateSpec::Ground => pure(space, unit(dim, 0), 1.0),
        StateSpec::Fock(m) => pure(space, unit(dim, m), 1.0),
        StateSpec::Coherent(b) => pure(space, coherent_amplitudes(dim, b), 1.0),
        StateSpec::Thermal(nbar) => {
            let q = nbar / (1.0 + nbar);
            let p: Vec<f64> = (0..dim).map(|n| (1.0 - q) * q.powi(n as i32)).collect();
            let total: f64 = p.iter().sum();
            let diag: Vec<f64> = p.iter().map(|v| v / total).collect();
            DensityMatrix { space, mat: CMatrix::from_real_diag(&diag), leakage: 1.0 - total }
        }
        StateSpec::Cat(parity, b) => {
            let sign = if parity == CatParity::Even { 1.0 } else { -1.0 };
            let plus = coherent_amplitudes(dim, b);
            let minus = coherent_amplitudes(dim, -b);
            let psi: Vec<Complex64> = plus.iter().zip(&minus).map(|(p, m)| p + m * sign).collect();
            // ‖|β⟩ ± |−β⟩‖² = 2 (1 ± e^{−2|β|²})
            let full = 2.0 * (1.0 + sign * (-2.0 * b.norm_sqr()).exp());
            pure(space, psi, full)
        }
    };
    Ok(state)
}

fn unit(dim: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[k] = Complex64::new(1.0, 0.0);
    v
}

/// Ground-state tomogram `e^{−|α|²} |α|^{2n} / n!`, a Poisson law in `n`.
pub fn tomogram_ground(n: usize, alpha: Complex64) -> f64 {
    tomogram_fock(0, n, alpha)
}

/// Tomogram of the Fock state `|m⟩`:
/// `(n!/m!) |α|^{2(m−n)} e^{−|α|²} (L_n^{(m−n)}(|α|²))²` for `m ≥ n`, mirrored for `m < n`.
pub fn tomogram_fock(m: usize, n: usize, alpha: Complex64) -> f64 {
    let x = alpha.norm_sqr();
    let (lo, hi) = if m >= n { (n, m) } else { (m, n) };
    let d = hi - lo;
    if x == 0.0 {
        return if d == 0 { 1.0 } else { 0.0 };
    }
    let lag = laguerre_assoc(lo as i64, d as i64, x).expect("orders are nonnegative and x finite");
    let ln_pref = ln_factorial(lo) - ln_factorial(hi) + d as f64 * x.ln() - x;
    ln_pref.exp() * lag * lag
}
