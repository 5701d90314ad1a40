//! Quantizer–dequantizer pair of photon-number tomography.
//!
//! The dequantizer `Û(n, α) = D(α)|n⟩⟨n|D†(α)` turns a state into its
//! tomogram `w(n, α) = Tr[ρ Û(n, α)]`, the photon statistics of the state
//! displaced by `−α`. The quantizer
//! `D̂(n, α) = 4/(π(1 − s²)) · λ^{−n} · D(α) λ^{N̂} D†(α)`, `λ = (s−1)/(s+1)`,
//! inverts the map: `ρ = Σ_n ∫ d²α w(n, α) D̂(n, α)`.
//!
//! Reconstruction sums `n` first at each node, then nodes in a fixed order,
//! so ordered-mode results do not depend on the thread count.

mod grid;
mod reduce;

pub use grid::TomogramGrid;
pub use reduce::{sum_matrices, sum_scalars, Reduction};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::fock::{displaced_power, displacement, FockSpace, OrderingParameter};
use crate::numerics::{tol, CMatrix, QuadratureScheme};
use crate::states::DensityMatrix;
use crate::{Error, Result};

/// A point `x = (n, α)` of the tomographic phase space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint {
    pub n: usize,
    pub alpha: Complex64,
}

impl PhasePoint {
    pub fn new(n: usize, alpha: Complex64) -> Self {
        Self { n, alpha }
    }
}

/// `Û(n, α) = D(α)|n⟩⟨n|D†(α)`, a rank-one projector.
pub fn dequantizer(space: FockSpace, x: PhasePoint) -> Result<CMatrix> {
    space.check_level(x.n)?;
    let col = displacement(space, x.alpha).column(x.n);
    Ok(CMatrix::outer(&col, &col))
}

/// `D̂(n, α) = 4/(π(1 − s²)) · λ^{−n} · D(α) λ^{N̂} D†(α)`.
///
/// The conjugated power is evaluated entry by entry from its closed form;
/// see [`displaced_power`].
pub fn quantizer(space: FockSpace, x: PhasePoint, ord: OrderingParameter) -> Result<CMatrix> {
    space.check_level(x.n)?;
    let scale = ord.prefactor() * ord.phase_power(-(x.n as i64));
    Ok(displaced_power(space, ord.ratio(), x.alpha).scale(scale))
}

/// `Tr[A Û(x)]`: the tomographic symbol of `A` at one point.
pub fn symbol_at(a: &CMatrix, x: PhasePoint) -> Result<Complex64> {
    let space = FockSpace::new(a.dim())?;
    space.check_level(x.n)?;
    let col = displacement(space, x.alpha).column(x.n);
    Ok(a.sandwich(&col, &col))
}

/// Dual symbol `Tr[A D̂(x)]`.
pub fn dual_symbol(a: &CMatrix, x: PhasePoint, ord: OrderingParameter) -> Result<Complex64> {
    let space = FockSpace::new(a.dim())?;
    a.trace_of_product(&quantizer(space, x, ord)?)
}

/// Truncated space, ordering, quadrature and photon-number range shared by
/// the forward and inverse maps.
#[derive(Clone, Debug)]
pub struct Frame {
    space: FockSpace,
    ordering: OrderingParameter,
    scheme: QuadratureScheme,
    n_max: usize,
    reduction: Reduction,
}

impl Frame {
    pub fn new(space: FockSpace, ordering: OrderingParameter, scheme: QuadratureScheme, n_max: usize) -> Result<Self> {
        space.check_level(n_max)?;
        Ok(Self { space, ordering, scheme, n_max, reduction: Reduction::Ordered })
    }

    pub fn with_reduction(mut self, reduction: Reduction) -> Self {
        self.reduction = reduction;
        self
    }

    pub fn with_ordering(mut self, ordering: OrderingParameter) -> Self {
        self.ordering = ordering;
        self
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn ordering(&self) -> OrderingParameter {
        self.ordering
    }

    pub fn scheme(&self) -> &QuadratureScheme {
        &self.scheme
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn reduction(&self) -> Reduction {
        self.reduction
    }

    /// Values per node, `n_max + 1`.
    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    /// `R² + n_max < dim`: displaced Fock states up to `n_max` stay inside the
    /// cutoff at every node. Frames violating this still work, since each
    /// operator entry is exact, but products of operators degrade near the cutoff.
    pub fn fits_cutoff(&self) -> bool {
        self.scheme.radius().powi(2) + (self.n_max as f64) < self.space.dim() as f64
    }

    /// `Tr[A Û(n, α_j)]` for every node and `n ≤ n_max`, node-major.
    pub fn symbols(&self, a: &CMatrix) -> Result<Vec<Complex64>> {
        self.check_dim(a)?;
        let per = self.levels();
        let nodes = self.scheme.nodes();
        let rows: Vec<Vec<Complex64>> = nodes
            .par_iter()
            .map(|q| {
                let d = displacement(self.space, q.alpha);
                (0..per)
                    .map(|n| {
                        let col = d.column(n);
                        a.sandwich(&col, &col)
                    })
                    .collect()
            })
            .collect();
        Ok(rows.into_iter().flatten().collect())
    }

    /// `Tr[A D̂(n, α_j)]` for every node and `n ≤ n_max`, node-major.
    pub fn dual_symbols(&self, a: &CMatrix) -> Result<Vec<Complex64>> {
        self.check_dim(a)?;
        let per = self.levels();
        let (c, lambda) = (self.ordering.prefactor(), self.ordering.ratio());
        let rows: Vec<Vec<Complex64>> = self
            .scheme
            .nodes()
            .par_iter()
            .map(|q| {
                let base = c * a.trace_of_product(&displaced_power(self.space, lambda, q.alpha)).expect("dimension checked");
                (0..per).map(|n| base * lambda.powi(-(n as i32))).collect()
            })
            .collect();
        Ok(rows.into_iter().flatten().collect())
    }

    /// `Σ_j weight_j Σ_n f(n, α_j) D̂(n, α_j)` for node-major values `f`.
    ///
    /// Uses `D̂(n, α) = c λ^{−n} T(α)`, so each node costs one matrix
    /// `T(α) = D(α) λ^{N̂} D†(α)` regardless of `n_max`.
    pub fn synthesize(&self, values: &[Complex64]) -> Result<CMatrix> {
        let per = self.levels();
        if values.len() != self.scheme.len() * per {
            return Err(Error::GridMismatch(format!("{} values for {} nodes × {per}", values.len(), self.scheme.len())));
        }
        let (c, lambda) = (self.ordering.prefactor(), self.ordering.ratio());
        let inv = lambda.inv();
        let nodes = self.scheme.nodes();
        Ok(sum_matrices(nodes.len(), self.space.dim(), self.reduction, |j, acc| {
            let mut coef = Complex64::new(0.0, 0.0);
            let mut p = Complex64::new(1.0, 0.0);
            for v in &values[j * per..(j + 1) * per] {
                coef += v * p;
                p *= inv;
            }
            if coef == Complex64::new(0.0, 0.0) {
                return;
            }
            acc.add_scaled(coef * c * nodes[j].weight, &displaced_power(self.space, lambda, nodes[j].alpha));
        }))
    }

    /// `Σ_j weight_j Σ_n f(n, α_j) Û(n, α_j)`, the synthesis map of the dual scheme.
    pub fn synthesize_dequantizers(&self, values: &[Complex64]) -> Result<CMatrix> {
        let per = self.levels();
        if values.len() != self.scheme.len() * per {
            return Err(Error::GridMismatch(format!("{} values for {} nodes × {per}", values.len(), self.scheme.len())));
        }
        let dim = self.space.dim();
        let nodes = self.scheme.nodes();
        Ok(sum_matrices(nodes.len(), dim, self.reduction, |j, acc| {
            let f = &values[j * per..(j + 1) * per];
            if f.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
                return;
            }
            // D diag(f) D† restricted to the first n_max + 1 columns of D
            let d = displacement(self.space, nodes[j].alpha);
            let term = CMatrix::from_fn(dim, |r, c| (0..per).map(|n| d[(r, n)] * f[n] * d[(c, n)].conj()).sum());
            acc.add_scaled(Complex64::new(nodes[j].weight, 0.0), &term);
        }))
    }

    /// Forward map `w(n, α_j) = Tr[ρ Û(n, α_j)]`.
    pub fn forward(&self, rho: &DensityMatrix) -> Result<TomogramGrid> {
        let symbols = self.symbols(rho.matrix())?;
        let mut values = Vec::with_capacity(symbols.len());
        for (k, w) in symbols.iter().enumerate() {
            if w.im.abs() > 1e-12 {
                return Err(Error::InvalidState(format!(
                    "tomogram value {w} at node {}, n = {} is not real",
                    k / self.levels(),
                    k % self.levels()
                )));
            }
            values.push(w.re);
        }
        TomogramGrid::new(self.scheme.clone(), self.n_max, values)
    }

    /// Inverse map, with diagnostics; fails when the trace defect exceeds 0.05.
    pub fn reconstruct(&self, tomo: &TomogramGrid) -> Result<Reconstruction> {
        let rec = self.reconstruct_unchecked(tomo)?;
        if !(rec.trace_defect <= tol::DIVERGENT_TRACE_DEFECT) {
            return Err(Error::Divergent { trace_defect: rec.trace_defect });
        }
        Ok(rec)
    }

    /// Inverse map without the divergence check.
    pub fn reconstruct_unchecked(&self, tomo: &TomogramGrid) -> Result<Reconstruction> {
        self.check_grid(tomo)?;
        let values: Vec<Complex64> = tomo.values().iter().map(|&w| Complex64::new(w, 0.0)).collect();
        let raw = self.synthesize(&values)?;
        Ok(Reconstruction::from_raw(raw))
    }

    /// `⟨A⟩ = Σ_n ∫ d²α w(n, α) Tr[A D̂(n, α)]`.
    pub fn expectation_via_dual(&self, tomo: &TomogramGrid, a: &CMatrix) -> Result<Complex64> {
        self.check_grid(tomo)?;
        self.check_dim(a)?;
        let (c, lambda) = (self.ordering.prefactor(), self.ordering.ratio());
        let inv = lambda.inv();
        let nodes = self.scheme.nodes();
        Ok(sum_scalars(nodes.len(), self.reduction, |j| {
            let mut coef = Complex64::new(0.0, 0.0);
            let mut p = Complex64::new(1.0, 0.0);
            for &w in tomo.node_values(j) {
                coef += w * p;
                p *= inv;
            }
            let t = displaced_power(self.space, lambda, nodes[j].alpha);
            coef * c * nodes[j].weight * a.trace_of_product(&t).expect("dimension checked")
        }))
    }

    fn check_dim(&self, a: &CMatrix) -> Result<()> {
        if a.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch { left: a.dim(), right: self.space.dim() });
        }
        Ok(())
    }

    fn check_grid(&self, tomo: &TomogramGrid) -> Result<()> {
        if tomo.n_max() != self.n_max || !tomo.scheme().same_nodes(&self.scheme) {
            return Err(Error::GridMismatch("tomogram grid differs from the frame".into()));
        }
        Ok(())
    }
}

/// Reconstructed operator `(M + M†)/2` with diagnostics of the raw sum `M`.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub matrix: CMatrix,
    pub trace_defect: f64,
    pub hermiticity_defect: f64,
    /// Smallest eigenvalue of the Hermitized matrix; `NaN` when the sum is not finite.
    pub min_eigenvalue: f64,
}

impl Reconstruction {
    fn from_raw(raw: CMatrix) -> Self {
        let hermiticity_defect = raw.hermiticity_defect();
        let matrix = raw.hermitian_part();
        let trace_defect = (matrix.trace() - 1.0).norm();
        let min_eigenvalue = if matrix.is_finite() {
            matrix.hermitian_eigenvalues().map(|e| e[0]).unwrap_or(f64::NAN)
        } else {
            f64::NAN
        };
        Self { matrix, trace_defect, hermiticity_defect, min_eigenvalue }
    }

    pub fn distance(&self, rho: &DensityMatrix) -> Result<f64> {
        self.matrix.frobenius_distance(rho.matrix())
    }
}

/// Forward map on a fresh frame with the default ordering.
pub fn forward_tomogram(rho: &DensityMatrix, scheme: &QuadratureScheme, n_max: usize) -> Result<TomogramGrid> {
    Frame::new(rho.space(), OrderingParameter::default(), scheme.clone(), n_max)?.forward(rho)
}

/// Inverse map over the tomogram's own grid.
pub fn reconstruct(tomo: &TomogramGrid, ord: OrderingParameter, space: FockSpace) -> Result<Reconstruction> {
    Frame::new(space, ord, tomo.scheme().clone(), tomo.n_max())?.reconstruct(tomo)
}

/// Mean value of `A` from the tomogram and the dual symbol of `A`.
pub fn expectation_via_dual(tomo: &TomogramGrid, a: &CMatrix, ord: OrderingParameter) -> Result<Complex64> {
    let space = FockSpace::new(a.dim())?;
    Frame::new(space, ord, tomo.scheme().clone(), tomo.n_max())?.expectation_via_dual(tomo, a)
}

#[cfg(test)]
mod tests;
