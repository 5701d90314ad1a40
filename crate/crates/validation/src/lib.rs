//! Reference oracles used by the acceptance gate. Each one is computed by a
//! route independent of the library code it checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use pntomo::numerics::{laguerre_assoc, ln_factorial};
use pntomo::CMatrix;

/// Taylor series with scaling and squaring.
pub fn expm(a: &CMatrix) -> CMatrix {
    let norm = a.max_abs() * a.dim() as f64;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a.scale(Complex64::new(0.5f64.powi(squarings), 0.0));
    let mut result = CMatrix::identity(a.dim());
    let mut term = CMatrix::identity(a.dim());
    for k in 1..40 {
        term = (&term * &scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        result = result.add(&term).expect("same dimension");
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `J₀(x) = Σ (−1)^k (x/2)^{2k} / (k!)²`, Kahan-summed.
pub fn bessel_j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let (mut sum, mut comp, mut term) = (1.0f64, 0.0f64, 1.0f64);
    for k in 1..80 {
        term *= q / (k * k) as f64;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Photon statistics of the displaced Fock state `D(−α)|m⟩`:
/// `e^{−x} xⁿ/n!` for `m = 0`, otherwise
/// `(min!/max!) e^{−x} x^{|n−m|} [L_min^{|n−m|}(x)]²` with `x = |α|²`.
pub fn fock_tomogram(m: usize, n: usize, alpha: Complex64) -> f64 {
    let x = alpha.norm_sqr();
    if m == 0 {
        if x == 0.0 {
            return if n == 0 { 1.0 } else { 0.0 };
        }
        return (-x + n as f64 * x.ln() - ln_factorial(n)).exp();
    }
    let (lo, hi) = (m.min(n), m.max(n));
    let l = laguerre_assoc(lo as i64, (hi - lo) as i64, x).expect("valid indices");
    (ln_factorial(lo) - ln_factorial(hi) - x).exp() * x.powi((hi - lo) as i32) * l * l
}

/// `∫_{|α|≤R} |α|^{2k} e^{−|α|²} d²α = π γ(k+1, R²) = π k! (1 − e^{−R²} Σ_{j≤k} R^{2j}/j!)`.
pub fn gaussian_moment(k: usize, radius: f64) -> f64 {
    let r2 = radius * radius;
    let tail: f64 = (0..=k).map(|j| (j as f64 * r2.ln() - ln_factorial(j) - r2).exp()).sum();
    PI * ln_factorial(k).exp() * (1.0 - tail)
}

/// `∫_{|α|≤R} α^p (α*)^q d²α`: zero unless `p = q`, then `π R^{2p+2}/(p+1)`.
pub fn monomial_integral(p: u32, q: u32, radius: f64) -> f64 {
    if p == q {
        PI * radius.powi(2 * p as i32 + 2) / (p + 1) as f64
    } else {
        0.0
    }
}

/// Rank-one projector on `coeffs`, normalized and zero-padded to `dim`.
pub fn projector(coeffs: &[Complex64], dim: usize) -> CMatrix {
    let mut v = coeffs.to_vec();
    v.resize(dim, Complex64::new(0.0, 0.0));
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
    CMatrix::outer(&v, &v)
}
