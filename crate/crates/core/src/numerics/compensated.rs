//! Double-double accumulation for sums and traces of matrix products.
//!
//! Quantizer matrices carry entries of order `|λ|^dim`, so their sums and the
//! traces of their products cancel over many orders of magnitude. Partial
//! results are carried in double-double precision and rounded once at the end.

use num_complex::Complex64;

use super::CMatrix;

#[derive(Clone, Copy, Debug, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    #[inline]
    fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct DdComplex {
    re: Dd,
    im: Dd,
}

impl DdComplex {
    #[inline]
    fn mul_add_c64(self, a: DdComplex, b: Complex64) -> DdComplex {
        // self + a·b
        let re = a.re.mul_f64(b.re).add(a.im.mul_f64(b.im).neg());
        let im = a.re.mul_f64(b.im).add(a.im.mul_f64(b.re));
        DdComplex {
            re: self.re.add(re),
            im: self.im.add(im),
        }
    }

    fn from_c64(z: Complex64) -> Self {
        DdComplex {
            re: Dd { hi: z.re, lo: 0.0 },
            im: Dd { hi: z.im, lo: 0.0 },
        }
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.hi + self.re.lo, self.im.hi + self.im.lo)
    }
}

/// Running sum of matrices with double-double entries.
///
/// Each added term is rounded to `f64` once; the sum itself is exact to
/// about 32 digits, so the result does not depend on the order of additions
/// unless the cancellation exceeds that.
#[derive(Clone, Debug)]
pub struct MatrixAccumulator {
    dim: usize,
    data: Vec<DdComplex>,
}

impl MatrixAccumulator {
    pub fn new(dim: usize) -> Self {
        Self { dim, data: vec![DdComplex::default(); dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `self += c · m`.
    pub fn add_scaled(&mut self, c: Complex64, m: &CMatrix) {
        assert_eq!(self.dim, m.dim(), "accumulator dimension mismatch");
        for (acc, z) in self.data.iter_mut().zip(m.as_slice()) {
            let t = c * z;
            acc.re = acc.re.add(Dd { hi: t.re, lo: 0.0 });
            acc.im = acc.im.add(Dd { hi: t.im, lo: 0.0 });
        }
    }

    pub fn merge(&mut self, other: &MatrixAccumulator) {
        assert_eq!(self.dim, other.dim, "accumulator dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            a.re = a.re.add(b.re);
            a.im = a.im.add(b.im);
        }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = self.dim;
        CMatrix::from_fn(n, |i, j| self.data[i * n + j].to_c64())
    }
}

/// `Tr[A₁ A₂ ⋯ A_k]` with every intermediate product kept in double-double.
pub fn trace_of_chain(factors: &[&CMatrix]) -> Complex64 {
    assert!(!factors.is_empty(), "empty product");
    let n = factors[0].dim();
    assert!(factors.iter().all(|f| f.dim() == n), "dimension mismatch in product chain");
    let mut acc: Vec<DdComplex> = factors[0].as_slice().iter().copied().map(DdComplex::from_c64).collect();
    let last = factors.len() - 1;
    for (idx, f) in factors.iter().enumerate().skip(1) {
        if idx == last {
            // only the diagonal of the final product is needed
            let mut tr = DdComplex::default();
            for i in 0..n {
                for k in 0..n {
                    tr = tr.mul_add_c64(acc[i * n + k], f[(k, i)]);
                }
            }
            return tr.to_c64();
        }
        let mut next = vec![DdComplex::default(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = acc[i * n + k];
                let row = f.row(k);
                for j in 0..n {
                    next[i * n + j] = next[i * n + j].mul_add_c64(a, row[j]);
                }
            }
        }
        acc = next;
    }
    let mut tr = DdComplex::default();
    for i in 0..n {
        tr.re = tr.re.add(acc[i * n + i].re);
        tr.im = tr.im.add(acc[i * n + i].im);
    }
    tr.to_c64()
}
