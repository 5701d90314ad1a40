//! Truncated Fock-space operators.
//!
//! Every operator is a `dim × dim` matrix in the number basis. The
//! displacement operator and the displaced power `D(α) λ^N̂ D†(α)` are built
//! entry by entry from closed forms, so each stored entry equals the matrix
//! element of the untruncated operator. Products of truncated matrices are
//! only reliable on the block roughly `|α|² + 10` levels below the cutoff.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numerics::special::laguerre_sequence;
use crate::numerics::{ln_factorial, CMatrix};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockSpace {
    dim: usize,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidSpace(format!("cutoff must be at least 2, got {dim}")));
        }
        Ok(Self { dim })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn check_level(&self, n: usize) -> Result<()> {
        if n >= self.dim {
            return Err(Error::Cutoff { n, dim: self.dim });
        }
        Ok(())
    }
}

/// Ordering parameter `s` of the quantizer family together with `t`,
/// defined through `e^{it} = (s − 1)/(s + 1)` on the principal branch.
///
/// Only `Re s < 0` is accepted. This is where `|e^{it}| > 1`, i.e. where the
/// alternating photon-number sums behind reconstruction converge; the bound
/// is inferred from the trace-class behaviour of the quantizer and is not
/// stated alongside the quantizer formula itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderingParameter {
    s: Complex64,
    ratio: Complex64,
    t: Complex64,
}

impl OrderingParameter {
    pub fn new(s: Complex64) -> Result<Self> {
        let reject = |reason: &str| Err(Error::InvalidOrdering { s, reason: reason.into() });
        if !(s.re.is_finite() && s.im.is_finite()) {
            return reject("non-finite");
        }
        if (s.norm() - 1.0).abs() < 1e-12 {
            return reject("|s| = 1 makes the prefactor 4/(π(1−s²)) singular or the family degenerate");
        }
        if s.re >= 0.0 {
            return reject("reconstruction sums converge only for Re s < 0");
        }
        let ratio = (s - 1.0) / (s + 1.0);
        let t = -Complex64::i() * ratio.ln();
        Ok(Self { s, ratio, t })
    }

    pub fn real(s: f64) -> Result<Self> {
        Self::new(Complex64::new(s, 0.0))
    }

    #[inline]
    pub fn s(&self) -> Complex64 {
        self.s
    }

    #[inline]
    pub fn t(&self) -> Complex64 {
        self.t
    }

    /// `λ = e^{it} = (s − 1)/(s + 1)`.
    #[inline]
    pub fn ratio(&self) -> Complex64 {
        self.ratio
    }

    /// `4 / (π (1 − s²))`.
    pub fn prefactor(&self) -> Complex64 {
        4.0 / (PI * (1.0 - self.s * self.s))
    }

    /// `e^{i t k}` for integer `k`, evaluated as a power of `λ`.
    pub fn phase_power(&self, k: i64) -> Complex64 {
        self.ratio.powi(k as i32)
    }

    pub fn is_real(&self) -> bool {
        self.s.im == 0.0
    }
}

impl Default for OrderingParameter {
    fn default() -> Self {
        Self::real(-0.5).expect("s = -1/2 is a valid ordering parameter")
    }
}

/// `⟨m|a|n⟩ = √n δ_{m,n−1}`.
pub fn annihilation(space: FockSpace) -> CMatrix {
    let mut a = CMatrix::zeros(space.dim());
    for n in 1..space.dim() {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn creation(space: FockSpace) -> CMatrix {
    annihilation(space).adjoint()
}

pub fn number_op(space: FockSpace) -> CMatrix {
    let diag: Vec<f64> = (0..space.dim()).map(|k| k as f64).collect();
    CMatrix::from_real_diag(&diag)
}

/// `|n⟩⟨n|`.
pub fn fock_projector(space: FockSpace, n: usize) -> Result<CMatrix> {
    space.check_level(n)?;
    let mut p = CMatrix::zeros(space.dim());
    p[(n, n)] = Complex64::new(1.0, 0.0);
    Ok(p)
}

/// `diag(e^{it(k − shift)})`, `k = 0 … dim−1`.
pub fn lambda_power(space: FockSpace, t: Complex64, shift: Complex64) -> CMatrix {
    let i = Complex64::i();
    let diag: Vec<Complex64> = (0..space.dim()).map(|k| (i * t * (k as f64 - shift)).exp()).collect();
    CMatrix::from_diag(&diag)
}

/// `z^d` split into log-modulus and argument so that large and small factors
/// can be combined before exponentiation.
fn log_power(z: Complex64, d: usize) -> (f64, f64) {
    if d == 0 {
        return (0.0, 0.0);
    }
    (d as f64 * z.norm().ln(), d as f64 * z.arg())
}

/// Weyl displacement `D(α) = exp(α a† − α* a)`.
///
/// `⟨m|D(α)|n⟩ = √(n!/m!) α^{m−n} e^{−|α|²/2} L_n^{(m−n)}(|α|²)` for `m ≥ n`
/// and `√(m!/n!) (−α*)^{n−m} e^{−|α|²/2} L_m^{(n−m)}(|α|²)` for `m < n`.
pub fn displacement(space: FockSpace, alpha: Complex64) -> CMatrix {
    let dim = space.dim();
    if alpha == Complex64::new(0.0, 0.0) {
        return CMatrix::identity(dim);
    }
    let x = alpha.norm_sqr();
    let below = alpha;
    let above = -alpha.conj();
    let mut m = CMatrix::zeros(dim);
    for d in 0..dim {
        let lag = laguerre_sequence(dim - d, d as f64, Complex64::new(x, 0.0));
        let (lb, pb) = log_power(below, d);
        let (la, pa) = log_power(above, d);
        for (k, l) in lag.iter().enumerate() {
            let base = 0.5 * (ln_factorial(k) - ln_factorial(k + d)) - 0.5 * x;
            m[(k + d, k)] = Complex64::from_polar((base + lb).exp(), pb) * l;
            if d > 0 {
                m[(k, k + d)] = Complex64::from_polar((base + la).exp(), pa) * l;
            }
        }
    }
    m
}

/// Column `D(α)|n⟩` of the displacement matrix.
pub fn displaced_fock_vector(space: FockSpace, alpha: Complex64, n: usize) -> Result<Vec<Complex64>> {
    space.check_level(n)?;
    Ok(displacement(space, alpha).column(n))
}

/// `D(α) λ^N̂ D†(α)` restricted to the truncated basis.
///
/// With `u = (1−λ)α`, `v = (1−λ)α*` and `y = −(1−λ)²|α|²/λ`, the entries are
/// `e^{(λ−1)|α|²} √(k!/j!) λ^k u^{j−k} L_k^{(j−k)}(y)` for `j ≥ k`, and the
/// same with `u → v` and the roles of `j, k` exchanged above the diagonal.
/// Computing entries directly avoids the products of truncated matrices,
/// which lose all accuracy once `|λ|^dim` dominates.
pub fn displaced_power(space: FockSpace, ratio: Complex64, alpha: Complex64) -> CMatrix {
    let dim = space.dim();
    if alpha == Complex64::new(0.0, 0.0) {
        let diag: Vec<Complex64> = (0..dim).map(|k| ratio.powi(k as i32)).collect();
        return CMatrix::from_diag(&diag);
    }
    let x = alpha.norm_sqr();
    let one_minus = Complex64::new(1.0, 0.0) - ratio;
    let u = one_minus * alpha;
    let v = one_minus * alpha.conj();
    let y = -(one_minus * one_minus) * x / ratio;
    let gauss = (ratio - 1.0) * x;
    // real λ: the matrix is Hermitian, so carry the sign of λ^k exactly and mirror
    let real = ratio.im == 0.0;
    let mut m = CMatrix::zeros(dim);
    for d in 0..dim {
        let lag = laguerre_sequence(dim - d, d as f64, y);
        let (lu, pu) = log_power(u, d);
        let (lv, pv) = log_power(v, d);
        for (k, l) in lag.iter().enumerate() {
            let (lr, pr) = log_power(ratio, k);
            let base = gauss.re + 0.5 * (ln_factorial(k) - ln_factorial(k + d)) + lr;
            if real {
                let sign = if ratio.re < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
                let lower = Complex64::from_polar((base + lu).exp(), pu) * (l * sign);
                m[(k + d, k)] = lower;
                m[(k, k + d)] = lower.conj();
                continue;
            }
            let phase = gauss.im + pr;
            m[(k + d, k)] = Complex64::from_polar((base + lu).exp(), phase + pu) * l;
            if d > 0 {
                m[(k, k + d)] = Complex64::from_polar((base + lv).exp(), phase + pv) * l;
            }
        }
    }
    m
}

/// `max |D D† − I|` over entries; a truncation diagnostic for displacement matrices.
pub fn unitarity_defect(d: &CMatrix) -> f64 {
    (d * &d.adjoint())
        .max_abs_diff(&CMatrix::identity(d.dim()))
        .expect("same dimension")
}
