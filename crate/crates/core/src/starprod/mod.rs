//! Star products of tomographic symbols, their kernels, and the fidelity,
//! purity and nonnegativity tests built on them.
//!
//! The kernel of the standard scheme is `K(x₁, x₂, x₃) = Tr[D̂(x₁) D̂(x₂) Û(x₃)]`;
//! the dual scheme swaps quantizer and dequantizer. Every physical result
//! here goes through these trace oracles. Integrals over the kernel are
//! hoisted by linearity: `Σ∫∫ f(x″) g(x′) K(x″, x′, x) = Tr[F G Û(x)]` with
//! `F = Σ∫ f D̂`, so a star product costs two syntheses instead of a double
//! quadrature. Closed-form kernels live in [`closed`] and are opt-in.

pub mod closed;
mod report;

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::fock::{FockSpace, OrderingParameter};
use crate::numerics::compensated::trace_of_chain;
use crate::numerics::{tol, CMatrix};
use crate::tomography::{dequantizer, quantizer, sum_scalars, Frame, PhasePoint, TomogramGrid};
use crate::{Error, Result};

pub use closed::{fidelity_kernel_closed_form, kernel_closed_form, kernel_dual_closed_form, DualVariant, FidelityKernelValue};
pub use report::{build_report, ConsistencyCheck, KernelKind, KernelReport, PointRecord, ReportHeader, ReportOptions, VariantRecord};

/// Which member of the pair plays the quantizer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scheme {
    /// Quantizer `D̂`, dequantizer `Û`.
    #[default]
    Standard,
    /// Quantizer `Û`, dequantizer `D̂`.
    Dual,
}

impl Scheme {
    pub fn quantizer(self, space: FockSpace, x: PhasePoint, ord: OrderingParameter) -> Result<CMatrix> {
        match self {
            Scheme::Standard => quantizer(space, x, ord),
            Scheme::Dual => dequantizer(space, x),
        }
    }

    pub fn dequantizer(self, space: FockSpace, x: PhasePoint, ord: OrderingParameter) -> Result<CMatrix> {
        match self {
            Scheme::Standard => dequantizer(space, x),
            Scheme::Dual => quantizer(space, x, ord),
        }
    }

    /// `Tr[Q(x₁) Q(x₂) U(x₃)]` for this scheme's quantizer `Q` and dequantizer `U`.
    pub fn kernel(self, x1: PhasePoint, x2: PhasePoint, x3: PhasePoint, ord: OrderingParameter, space: FockSpace) -> Result<Complex64> {
        let q1 = self.quantizer(space, x1, ord)?;
        let q2 = self.quantizer(space, x2, ord)?;
        let u3 = self.dequantizer(space, x3, ord)?;
        Ok(trace_of_chain(&[&q1, &q2, &u3]))
    }

    /// Symbols `Tr[A U(n, α_j)]` on the frame's grid.
    pub fn analyse(self, frame: &Frame, a: &CMatrix) -> Result<Vec<Complex64>> {
        match self {
            Scheme::Standard => frame.symbols(a),
            Scheme::Dual => frame.dual_symbols(a),
        }
    }

    /// `Σ_j w_j Σ_n f(n, α_j) Q(n, α_j)`.
    pub fn synthesize(self, frame: &Frame, values: &[Complex64]) -> Result<CMatrix> {
        match self {
            Scheme::Standard => frame.synthesize(values),
            Scheme::Dual => frame.synthesize_dequantizers(values),
        }
    }

    fn symbol_at(self, a: &CMatrix, x: PhasePoint, frame: &Frame) -> Result<Complex64> {
        let u = self.dequantizer(frame.space(), x, frame.ordering())?;
        a.trace_of_product(&u)
    }
}

/// `K(x₁, x₂, x₃) = Tr[D̂(x₁) D̂(x₂) Û(x₃)]`, products in double-double.
pub fn kernel_oracle(x1: PhasePoint, x2: PhasePoint, x3: PhasePoint, ord: OrderingParameter, space: FockSpace) -> Result<Complex64> {
    let q1 = quantizer(space, x1, ord)?;
    let q2 = quantizer(space, x2, ord)?;
    let u3 = dequantizer(space, x3)?;
    Ok(trace_of_chain(&[&q1, &q2, &u3]))
}

/// `K⁽ᵈ⁾(x₁, x₂, x₃) = Tr[Û(x₁) Û(x₂) D̂(x₃)]`.
pub fn kernel_dual_oracle(x1: PhasePoint, x2: PhasePoint, x3: PhasePoint, ord: OrderingParameter, space: FockSpace) -> Result<Complex64> {
    let u1 = dequantizer(space, x1)?;
    let u2 = dequantizer(space, x2)?;
    let q3 = quantizer(space, x3, ord)?;
    Ok(trace_of_chain(&[&u1, &u2, &q3]))
}

/// `𝒦(x₁, x₂) = Tr[D̂(x₁) D̂(x₂)]`, the kernel of `Tr ρ₁ρ₂` in terms of tomograms.
///
/// Grows without bound with the cutoff (`Σ_k λ^{2k}`); only its integrals
/// against tomograms converge.
pub fn fidelity_kernel_oracle(n1: usize, n2: usize, a1: Complex64, a2: Complex64, ord: OrderingParameter, space: FockSpace) -> Result<Complex64> {
    let q1 = quantizer(space, PhasePoint::new(n1, a1), ord)?;
    let q2 = quantizer(space, PhasePoint::new(n2, a2), ord)?;
    Ok(trace_of_chain(&[&q1, &q2]))
}

#[derive(Clone)]
enum Rule {
    /// Node-major values on a frame grid.
    Sampled(Arc<Vec<Complex64>>),
    /// Symbol of a fixed operator.
    Operator(Arc<CMatrix>),
    Analytic(Arc<dyn Fn(PhasePoint) -> Complex64 + Send + Sync>),
}

/// A function on tomographic phase space together with the scheme it is a symbol in.
#[derive(Clone)]
pub struct SymbolFn {
    scheme: Scheme,
    rule: Rule,
}

impl std::fmt::Debug for SymbolFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.rule {
            Rule::Sampled(v) => format!("sampled({} values)", v.len()),
            Rule::Operator(a) => format!("operator({}×{})", a.dim(), a.dim()),
            Rule::Analytic(_) => "analytic".to_string(),
        };
        f.debug_struct("SymbolFn").field("scheme", &self.scheme).field("rule", &kind).finish()
    }
}

impl SymbolFn {
    pub fn sampled(values: Vec<Complex64>, scheme: Scheme) -> Self {
        Self { scheme, rule: Rule::Sampled(Arc::new(values)) }
    }

    pub fn of_operator(a: CMatrix, scheme: Scheme) -> Self {
        Self { scheme, rule: Rule::Operator(Arc::new(a)) }
    }

    pub fn analytic(f: impl Fn(PhasePoint) -> Complex64 + Send + Sync + 'static, scheme: Scheme) -> Self {
        Self { scheme, rule: Rule::Analytic(Arc::new(f)) }
    }

    /// A measured tomogram, as a symbol of the standard scheme.
    pub fn from_tomogram(grid: &TomogramGrid) -> Self {
        Self::sampled(grid.values().iter().map(|&w| Complex64::new(w, 0.0)).collect(), Scheme::Standard)
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Values at every `(node, n)` of the frame, node-major.
    pub fn sample(&self, frame: &Frame) -> Result<Vec<Complex64>> {
        let per = frame.levels();
        match &self.rule {
            Rule::Sampled(v) => {
                if v.len() != frame.scheme().len() * per {
                    return Err(Error::GridMismatch(format!("sampled symbol has {} values, frame needs {}", v.len(), frame.scheme().len() * per)));
                }
                Ok(v.as_ref().clone())
            }
            Rule::Operator(a) => self.scheme.analyse(frame, a),
            Rule::Analytic(f) => Ok(frame
                .scheme()
                .nodes()
                .par_iter()
                .flat_map_iter(|q| (0..per).map(move |n| f(PhasePoint::new(n, q.alpha))))
                .collect()),
        }
    }
}

/// Star product `(f ⋆ g)(x)` on a fixed frame, computed with the trace-oracle kernel.
pub struct StarProduct<'a> {
    frame: &'a Frame,
    scheme: Scheme,
}

/// Operator synthesized from a symbol, and the same with the top photon number dropped.
struct Synthesis {
    full: CMatrix,
    truncated: CMatrix,
}

impl<'a> StarProduct<'a> {
    pub fn new(frame: &'a Frame, scheme: Scheme) -> Self {
        Self { frame, scheme }
    }

    fn check(&self, f: &SymbolFn) -> Result<()> {
        if f.scheme != self.scheme {
            return Err(Error::Domain(format!("symbol of the {:?} scheme used in a {:?} star product", f.scheme, self.scheme)));
        }
        Ok(())
    }

    fn synthesis(&self, f: &SymbolFn) -> Result<Synthesis> {
        self.check(f)?;
        let mut values = f.sample(self.frame)?;
        let full = self.scheme.synthesize(self.frame, &values)?;
        let per = self.frame.levels();
        for node in values.chunks_mut(per) {
            node[per - 1] = Complex64::new(0.0, 0.0);
        }
        let truncated = self.scheme.synthesize(self.frame, &values)?;
        Ok(Synthesis { full, truncated })
    }

    /// `F = Σ∫ f Q`, the operator whose symbol `f` is.
    pub fn operator(&self, f: &SymbolFn) -> Result<CMatrix> {
        self.check(f)?;
        self.scheme.synthesize(self.frame, &f.sample(self.frame)?)
    }

    /// `(f ⋆ g)(x)` at each point. Fails with [`Error::Unsettled`] when
    /// dropping the top photon number changes a value by more than `1e−4`.
    pub fn evaluate(&self, f: &SymbolFn, g: &SymbolFn, points: &[PhasePoint]) -> Result<Vec<Complex64>> {
        let sf = self.synthesis(f)?;
        let sg = self.synthesis(g)?;
        let full = &sf.full * &sg.full;
        let partial = &sf.truncated * &sg.truncated;
        points
            .iter()
            .map(|&x| {
                let value = self.scheme.symbol_at(&full, x, self.frame)?;
                let previous = self.scheme.symbol_at(&partial, x, self.frame)?;
                let change = (value - previous).norm();
                if !(change <= tol::PARTIAL_SUM_SETTLE) {
                    return Err(Error::Unsettled { change });
                }
                Ok(value)
            })
            .collect()
    }

    pub fn at(&self, f: &SymbolFn, g: &SymbolFn, x: PhasePoint) -> Result<Complex64> {
        Ok(self.evaluate(f, g, &[x])?[0])
    }

    /// `f ⋆ g` sampled on the frame grid, usable as input to further products.
    pub fn product_symbol(&self, f: &SymbolFn, g: &SymbolFn) -> Result<SymbolFn> {
        let fg = &self.operator(f)? * &self.operator(g)?;
        Ok(SymbolFn::sampled(self.scheme.analyse(self.frame, &fg)?, self.scheme))
    }
}

/// `max |((f ⋆ g) ⋆ h)(x) − (f ⋆ (g ⋆ h))(x)|` over the sample points.
pub fn associativity_residual(f: &SymbolFn, g: &SymbolFn, h: &SymbolFn, points: &[PhasePoint], frame: &Frame) -> Result<f64> {
    let star = StarProduct::new(frame, f.scheme);
    let fg = star.product_symbol(f, g)?;
    let gh = star.product_symbol(g, h)?;
    let left = &(&star.operator(&fg)? * &star.operator(h)?);
    let right = &(&star.operator(f)? * &star.operator(&gh)?);
    let mut worst = 0.0f64;
    for &x in points {
        let l = f.scheme.symbol_at(left, x, frame)?;
        let r = f.scheme.symbol_at(right, x, frame)?;
        worst = worst.max((l - r).norm());
    }
    Ok(worst)
}

/// Residual of the kernel's own associativity equation,
/// `|∫K(x₁,x₂,y)K(y,x₃,x₄)dy − ∫K(x₁,y,x₄)K(x₂,x₃,y)dy|`, with the `y`
/// integral on the frame grid. By linearity the first integral is
/// `Tr[R(D̂₁D̂₂) D̂₃ Û₄]` where `R` samples an operator's symbol and synthesizes it back.
pub fn kernel_associativity_residual(x: [PhasePoint; 4], frame: &Frame) -> Result<f64> {
    let (space, ord) = (frame.space(), frame.ordering());
    let q1 = quantizer(space, x[0], ord)?;
    let q2 = quantizer(space, x[1], ord)?;
    let q3 = quantizer(space, x[2], ord)?;
    let u4 = dequantizer(space, x[3])?;
    let resynth = |a: &CMatrix| -> Result<CMatrix> { frame.synthesize(&frame.symbols(a)?) };
    let q12 = resynth(&(&q1 * &q2))?;
    let q23 = resynth(&(&q2 * &q3))?;
    let left = trace_of_chain(&[&q12, &q3, &u4]);
    let right = trace_of_chain(&[&q1, &q23, &u4]);
    Ok((left - right).norm())
}

/// Kernel used to integrate `w₁ w₂` into `Tr ρ₁ρ₂`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FidelityKernel {
    /// `Tr[D̂(x₁) D̂(x₂)]`, hoisted to `Tr[R₁ R₂]` with `R = Σ∫ w D̂`.
    #[default]
    Oracle,
    /// The printed closed form, summed over all node pairs.
    ClosedForm,
}

/// `ℱ = Σ_{n₁,n₂} ∫∫ w₁ w₂ 𝒦 d²α₁ d²α₂`; fails when the imaginary part exceeds `1e−5`.
pub fn fidelity_via_tomograms(t1: &TomogramGrid, t2: &TomogramGrid, frame: &Frame, kernel: FidelityKernel) -> Result<f64> {
    let value = fidelity_complex(t1, t2, frame, kernel)?;
    if value.im.abs() > tol::FIDELITY_IMAGINARY {
        return Err(Error::ImaginaryResidue { residue: value.im.abs() });
    }
    Ok(value.re)
}

fn fidelity_complex(t1: &TomogramGrid, t2: &TomogramGrid, frame: &Frame, kernel: FidelityKernel) -> Result<Complex64> {
    t1.check_compatible(t2)?;
    if t1.n_max() != frame.n_max() || !t1.scheme().same_nodes(frame.scheme()) {
        return Err(Error::GridMismatch("tomogram grid differs from the frame".into()));
    }
    match kernel {
        FidelityKernel::Oracle => {
            let r1 = raw_synthesis(frame, t1)?;
            if std::ptr::eq(t1, t2) {
                r1.trace_of_product(&r1)
            } else {
                r1.trace_of_product(&raw_synthesis(frame, t2)?)
            }
        }
        FidelityKernel::ClosedForm => fidelity_closed_double_sum(t1, t2, frame),
    }
}

fn raw_synthesis(frame: &Frame, t: &TomogramGrid) -> Result<CMatrix> {
    let values: Vec<Complex64> = t.values().iter().map(|&w| Complex64::new(w, 0.0)).collect();
    frame.synthesize(&values)
}

fn fidelity_closed_double_sum(t1: &TomogramGrid, t2: &TomogramGrid, frame: &Frame) -> Result<Complex64> {
    let ord = frame.ordering();
    let lambda = ord.ratio();
    let nodes = t1.scheme().nodes();
    // the closed form depends on n₁, n₂ only through e^{it(n₁+n₂)}
    let moment = |t: &TomogramGrid, j: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for &w in t.node_values(j) {
            acc += w * p;
            p *= lambda;
        }
        acc * t.scheme().nodes()[j].weight
    };
    let m1: Vec<Complex64> = (0..nodes.len()).map(|j| moment(t1, j)).collect();
    let m2: Vec<Complex64> = (0..nodes.len()).map(|j| moment(t2, j)).collect();
    Ok(sum_scalars(nodes.len(), frame.reduction(), |i| {
        let mut row = Complex64::new(0.0, 0.0);
        for (j, q) in nodes.iter().enumerate() {
            row += m2[j] * closed::fidelity_kernel_base(nodes[i].alpha, q.alpha, ord).value;
        }
        m1[i] * row
    }))
}

/// `𝒫 = Tr ρ²` from a single tomogram.
pub fn purity_via_tomograms(t: &TomogramGrid, frame: &Frame, kernel: FidelityKernel) -> Result<f64> {
    fidelity_via_tomograms(t, t, frame, kernel)
}

/// Outcome of the nonnegativity and `[0, 1]`-bound tests on a tomogram.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumnessReport {
    pub min_eigenvalue: f64,
    /// Reconstructed operator has no eigenvalue below `−5e−3`.
    pub passes: bool,
    pub purity: f64,
    pub purity_imaginary: f64,
    /// Purity within `[−5e−3, 1 + 5e−3]`.
    pub bounds_ok: bool,
    pub trace_defect: f64,
}

impl QuantumnessReport {
    pub fn is_quantum(&self) -> bool {
        self.passes && self.bounds_ok
    }
}

pub fn quantumness_check(tomo: &TomogramGrid, frame: &Frame) -> Result<QuantumnessReport> {
    let rec = frame.reconstruct_unchecked(tomo)?;
    let purity = fidelity_complex(tomo, tomo, frame, FidelityKernel::Oracle)?;
    let slack = tol::BOUNDS_SLACK;
    Ok(QuantumnessReport {
        min_eigenvalue: rec.min_eigenvalue,
        passes: rec.min_eigenvalue >= tol::QUANTUMNESS_MIN_EIGENVALUE,
        purity: purity.re,
        purity_imaginary: purity.im,
        bounds_ok: (-slack..=1.0 + slack).contains(&purity.re) && purity.im.abs() <= tol::FIDELITY_IMAGINARY,
        trace_defect: rec.trace_defect,
    })
}

/// Scales `w(0, α)` by `factor` and rescales the other photon numbers so that
/// every node keeps its original total mass.
pub fn corrupt_vacuum_weight(tomo: &TomogramGrid, factor: f64) -> Result<TomogramGrid> {
    let per = tomo.n_max() + 1;
    let mut values = tomo.values().to_vec();
    for node in values.chunks_mut(per) {
        let total: f64 = node.iter().sum();
        let boosted = (node[0] * factor).min(total);
        let rest: f64 = node[1..].iter().sum();
        let scale = if rest > 0.0 { (total - boosted) / rest } else { 0.0 };
        node[0] = boosted;
        for v in &mut node[1..] {
            *v *= scale;
        }
    }
    TomogramGrid::new(tomo.scheme().clone(), tomo.n_max(), values)
}

#[cfg(test)]
mod tests;
