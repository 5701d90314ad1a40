//! Parallel sums over quadrature nodes.

use rayon::prelude::*;

use crate::numerics::compensated::MatrixAccumulator;
use crate::numerics::CMatrix;

/// Nodes per sequential chunk in ordered mode.
const CHUNK: usize = 64;

/// How per-node contributions are combined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Reduction {
    /// Fixed chunks summed in index order: bitwise reproducible for any thread count.
    #[default]
    Ordered,
    /// Work-stealing tree reduction. Matrix sums are compensated, so results
    /// agree with `Ordered` to rounding of the final value.
    Unordered,
}

/// `Σ_i f(i)` for `i in 0..len`, where `f` adds its terms into a
/// double-double accumulator of `dim × dim` matrices.
pub fn sum_matrices<F>(len: usize, dim: usize, reduction: Reduction, f: F) -> CMatrix
where
    F: Fn(usize, &mut MatrixAccumulator) + Sync,
{
    match reduction {
        Reduction::Ordered => {
            let partials: Vec<MatrixAccumulator> = (0..len.div_ceil(CHUNK))
                .into_par_iter()
                .map(|chunk| {
                    let mut acc = MatrixAccumulator::new(dim);
                    for i in chunk * CHUNK..((chunk + 1) * CHUNK).min(len) {
                        f(i, &mut acc);
                    }
                    acc
                })
                .collect();
            let mut total = MatrixAccumulator::new(dim);
            for p in &partials {
                total.merge(p);
            }
            total.to_matrix()
        }
        Reduction::Unordered => (0..len)
            .into_par_iter()
            .fold(
                || MatrixAccumulator::new(dim),
                |mut acc, i| {
                    f(i, &mut acc);
                    acc
                },
            )
            .reduce(
                || MatrixAccumulator::new(dim),
                |mut a, b| {
                    a.merge(&b);
                    a
                },
            )
            .to_matrix(),
    }
}

/// Scalar counterpart of [`sum_matrices`].
pub fn sum_scalars<T, F>(len: usize, reduction: Reduction, f: F) -> T
where
    T: Copy + Send + Sync + Default + std::ops::Add<Output = T> + std::iter::Sum<T>,
    F: Fn(usize) -> T + Sync,
{
    match reduction {
        Reduction::Ordered => {
            let partials: Vec<T> = (0..len.div_ceil(CHUNK))
                .into_par_iter()
                .map(|chunk| {
                    let mut acc = T::default();
                    for i in chunk * CHUNK..((chunk + 1) * CHUNK).min(len) {
                        acc = acc + f(i);
                    }
                    acc
                })
                .collect();
            partials.into_iter().fold(T::default(), |a, b| a + b)
        }
        Reduction::Unordered => (0..len).into_par_iter().map(&f).sum(),
    }
}
