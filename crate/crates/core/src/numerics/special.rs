//! Associated Laguerre polynomials, Bessel J₀ and log-factorials.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::{Error, Result};

const LN_FACTORIAL_TABLE: usize = 1024;

/// `ln(n!)`, tabulated up to 1023 and Stirling-series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE);
        let mut acc = 0.0;
        t.push(0.0);
        for k in 1..LN_FACTORIAL_TABLE {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    });
    if n < LN_FACTORIAL_TABLE {
        return table[n];
    }
    let x = n as f64 + 1.0;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
}

/// Associated Laguerre polynomial `L_n^{(m)}(x)` by upward recurrence in `n`.
///
/// `m` may be negative as long as `n + m ≥ 0`.
pub fn laguerre_assoc(n: i64, m: i64, x: f64) -> Result<f64> {
    if n < 0 || n + m < 0 {
        return Err(Error::Domain(format!("L_n^m requires n >= 0 and n + m >= 0 (n = {n}, m = {m})")));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {x}")));
    }
    Ok(laguerre_assoc_complex(n as usize, m as f64, Complex64::new(x, 0.0)).re)
}

/// `L_n^{(m)}(z)` for complex argument and real order.
pub fn laguerre_assoc_complex(n: usize, m: f64, z: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = Complex64::new(1.0 + m, 0.0) - z;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + m + 1.0 - z) * cur - (kf + m) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `[L_0^{(m)}(z), …, L_{len−1}^{(m)}(z)]` from one recurrence sweep.
pub fn laguerre_sequence(len: usize, m: f64, z: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    out.push(Complex64::new(1.0, 0.0));
    if len == 1 {
        return out;
    }
    out.push(Complex64::new(1.0 + m, 0.0) - z);
    for k in 1..len - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + m + 1.0 - z) * out[k] - (kf + m) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    bessel_j0_complex(Complex64::new(x, 0.0)).re
}

/// `J₀(z)`: power series for `|z| ≤ 8`, Miller backward recurrence beyond.
pub fn bessel_j0_complex(z: Complex64) -> Complex64 {
    if z.norm() <= 8.0 {
        j0_series(z)
    } else {
        j0_miller(z)
    }
}

fn j0_series(z: Complex64) -> Complex64 {
    let q = -0.25 * z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.norm() <= 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum
}

// Normalised with J₀ + 2 Σ_{k≥1} J_{2k} = 1.
fn j0_miller(z: Complex64) -> Complex64 {
    let start = {
        let n = z.norm().ceil() as usize + 60;
        n + n % 2
    };
    let two_over_z = 2.0 / z;
    let mut above = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1e-30, 0.0);
    let mut norm = Complex64::new(0.0, 0.0);
    for k in (1..=start).rev() {
        let below = two_over_z * (k as f64) * cur - above;
        above = cur;
        cur = below;
        // cur now holds J_{k-1}
        let order = k - 1;
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.norm() > 1e200 {
            cur *= 1e-200;
            above *= 1e-200;
            norm *= 1e-200;
        }
    }
    cur / (cur + norm)
}
