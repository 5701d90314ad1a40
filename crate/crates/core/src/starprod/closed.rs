//! Printed closed forms of the star-product kernels, transcribed term by term.
//!
//! Nothing here is trusted: every expression is compared against a trace
//! oracle in a [`KernelReport`](super::KernelReport). Exponentials of `t` are
//! evaluated from `t` itself (`e^{it*}` as `exp(i·conj(t))`) rather than
//! simplified through `λ`, so the code mirrors the printed expressions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::fock::OrderingParameter;
use crate::numerics::{bessel_j0_complex, laguerre_assoc_complex, ln_factorial};
use crate::tomography::PhasePoint;

/// The exponentials of `t` that occur in the printed kernels.
struct Phases {
    /// `e^{−it}`
    e1: Complex64,
    /// `e^{−2it}`
    e2: Complex64,
    /// `e^{it*}`
    es: Complex64,
    /// `e^{2it*}`
    es2: Complex64,
    /// `e^{−2it*}`
    ems2: Complex64,
    /// `e^{−it+2it*}`
    e1_es2: Complex64,
    /// `e^{it*−2it}`
    es_e2: Complex64,
}

impl Phases {
    fn new(ord: OrderingParameter) -> Self {
        let i = Complex64::i();
        let t = ord.t();
        let tc = t.conj();
        Self {
            e1: (-i * t).exp(),
            e2: (-2.0 * i * t).exp(),
            es: (i * tc).exp(),
            es2: (2.0 * i * tc).exp(),
            ems2: (-2.0 * i * tc).exp(),
            e1_es2: (-i * t + 2.0 * i * tc).exp(),
            es_e2: (i * tc - 2.0 * i * t).exp(),
        }
    }
}

fn eit(ord: OrderingParameter, k: i64) -> Complex64 {
    (Complex64::i() * ord.t() * k as f64).exp()
}

/// Main-scheme kernel in closed form.
pub fn kernel_closed_form(x1: PhasePoint, x2: PhasePoint, x3: PhasePoint, ord: OrderingParameter) -> Complex64 {
    let p = Phases::new(ord);
    let (a1, a2, a3) = (x1.alpha, x2.alpha, x3.alpha);
    let (c1, c2, c3) = (a1.conj(), a2.conj(), a3.conj());
    let (m1, m2, m3) = (a1.norm_sqr(), a2.norm_sqr(), a3.norm_sqr());
    let b = -a3 + a1 - a1 * p.e1 + a2 * p.e1 - a2 * p.e2 + a3 * p.e2;
    let bb = b.norm_sqr();
    let s = -a3 * c1 + c3 * a1 - a1 * c2 + c1 * a2 - a2 * c3 + c2 * a3
        + a3 * c1 * p.es
        - m1 * p.es
        - a3 * c2 * p.es
        + a1 * c2 * p.es
        - c3 * a1 * p.e1
        + m1 * p.e1
        + c3 * a2 * p.e1
        - c1 * a2 * p.e1
        + a3 * c2 * p.es2
        - a1 * c2 * p.es2
        + a1 * c2 * p.e1_es2
        - m2 * p.e1_es2
        - m3 * p.es2
        + a1 * c3 * p.es2
        - a1 * c3 * p.e1_es2
        + a2 * c3 * p.e1_es2
        - c3 * a2 * p.e2
        + c1 * a2 * p.e2
        - c1 * a2 * p.es_e2
        - m2 * p.es_e2
        + m3 * p.e2
        - c1 * a3 * p.e2
        + c1 * a3 * p.es_e2
        - c2 * a3 * p.es_e2;
    let pref = ord.prefactor() * ord.prefactor();
    let phase = eit(ord, x1.n as i64 + x2.n as i64 - 2 * x3.n as i64);
    pref * phase * (-bb + 0.5 * s).exp() * laguerre_assoc_complex(x3.n, 0.0, Complex64::new(bb, 0.0))
}

/// Reading of the second branch of the printed dual kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualVariant {
    /// Both branches exactly as printed, including the power `n₁ − n₂` in the
    /// second branch (negative there); the garbled branch condition is read as `n₂ > n₁`.
    Verbatim,
    /// Second branch with the power `n₂ − n₁`.
    Amended,
}

/// Dual-scheme kernel in closed form.
pub fn kernel_dual_closed_form(x1: PhasePoint, x2: PhasePoint, x3: PhasePoint, ord: OrderingParameter, variant: DualVariant) -> Complex64 {
    if x1.n >= x2.n {
        dual_branch(x1, x2, x3, ord, x2.n, x1.n - x2.n, x1.n as i64 - x2.n as i64)
    } else {
        let power = match variant {
            DualVariant::Verbatim => x1.n as i64 - x2.n as i64,
            DualVariant::Amended => x2.n as i64 - x1.n as i64,
        };
        dual_branch(x1, x2, x3, ord, x1.n, x2.n - x1.n, power)
    }
}

/// Shared body of both branches: the Laguerre polynomials are `L_low^{(order)}`,
/// the prefactor is `4 low! / (π(1 − s²) high!)` and the bracket is raised to `power`.
fn dual_branch(x1: PhasePoint, x2: PhasePoint, x3: PhasePoint, ord: OrderingParameter, low: usize, order: usize, power: i64) -> Complex64 {
    let p = Phases::new(ord);
    let (a1, a2, a3) = (x1.alpha, x2.alpha, x3.alpha);
    let (c1, c2, c3) = (a1.conj(), a2.conj(), a3.conj());
    let m3 = a3.norm_sqr();
    let d21 = (a2 - a1).norm_sqr();
    let cc = (a3 - a1 - a3 * p.e1 + a1 * p.e1).norm_sqr();
    let e = -a1 * c2 + c1 * a2 - a2 * c3 + c2 * a3 - a3 * c1 + c3 * a1 + a2 * c3 * p.es - m3 * p.es - a2 * c1 * p.es
        + a3 * c1 * p.es
        - a3 * c2 * p.e1
        + m3 * p.e1
        + a1 * c2 * p.e1
        - a1 * c3 * p.e1
        - d21
        - cc;
    let bracket = (a2 - a1) * (-c3 + c1 + c3 * p.es - c1 * p.es);
    let high = low + order;
    let pref = 4.0 * (ln_factorial(low) - ln_factorial(high)).exp() / (PI * (1.0 - ord.s() * ord.s()));
    let l1 = laguerre_assoc_complex(low, order as f64, Complex64::new(d21, 0.0));
    let l2 = laguerre_assoc_complex(low, order as f64, Complex64::new(cc, 0.0));
    pref * eit(ord, x3.n as i64 - x1.n as i64) * (0.5 * e).exp() * bracket.powi(power as i32) * l1 * l2
}

/// Fidelity kernel in closed form, with the value of its Bessel factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityKernelValue {
    pub value: Complex64,
    /// `𝒥₀(2 e^{−it} |α₁ − α₁e^{−it} + α₂e^{−it} − α₂e^{−2it}|)`
    pub bessel_j0: Complex64,
}

pub fn fidelity_kernel_closed_form(n1: usize, n2: usize, a1: Complex64, a2: Complex64, ord: OrderingParameter) -> FidelityKernelValue {
    let base = fidelity_kernel_base(a1, a2, ord);
    FidelityKernelValue { value: base.value * eit(ord, n1 as i64 + n2 as i64), bessel_j0: base.bessel_j0 }
}

/// The closed form at `n₁ = n₂ = 0`; the photon numbers enter only through `e^{it(n₁+n₂)}`.
pub(crate) fn fidelity_kernel_base(a1: Complex64, a2: Complex64, ord: OrderingParameter) -> FidelityKernelValue {
    let p = Phases::new(ord);
    let (c1, c2) = (a1.conj(), a2.conj());
    let m1 = a1.norm_sqr();
    let g = a1 - a1 * p.e1 + a2 * p.e1 - a2 * p.e2;
    let inner = -m1 * p.es + m1 * p.e1 + a1 * c2 * (1.0 - p.e1) * (p.es - p.ems2) - c1 * a2 * (1.0 - p.es) * (p.e1 - p.e2);
    let exponent = 0.5 * inner - g.norm_sqr() - p.e2;
    let bessel_j0 = bessel_j0_complex(2.0 * p.e1 * g.norm());
    FidelityKernelValue { value: exponent.exp() * bessel_j0, bessel_j0 }
}
