//! Density-matrix interchange: `{"dim": N, "re": [[...]], "im": [[...]]}`, row-major.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::CMatrix;
use crate::states::DensityMatrix;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

pub fn matrix_to_json(m: &CMatrix) -> Result<String> {
    let dim = m.dim();
    let part = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> { (0..dim).map(|i| m.row(i).iter().map(f).collect()).collect() };
    let doc = MatrixJson { dim, re: part(|z| z.re), im: part(|z| z.im) };
    Ok(serde_json::to_string(&doc)?)
}

pub fn matrix_from_json(text: &str) -> Result<CMatrix> {
    let doc: MatrixJson = serde_json::from_str(text)?;
    let shape_ok = |rows: &[Vec<f64>]| rows.len() == doc.dim && rows.iter().all(|r| r.len() == doc.dim);
    if !shape_ok(&doc.re) || !shape_ok(&doc.im) {
        return Err(Error::Format(format!("matrix rows do not match dim {}", doc.dim)));
    }
    if doc.re.iter().chain(&doc.im).flatten().any(|v| !v.is_finite()) {
        return Err(Error::Format("non-finite matrix entry".into()));
    }
    let rows = doc
        .re
        .iter()
        .zip(&doc.im)
        .map(|(r, i)| r.iter().zip(i).map(|(&a, &b)| Complex64::new(a, b)).collect())
        .collect();
    CMatrix::from_rows(rows)
}

pub fn write_matrix(path: &Path, m: &CMatrix) -> Result<()> {
    fs::write(path, matrix_to_json(m)?)?;
    Ok(())
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    matrix_from_json(&fs::read_to_string(path)?)
}

/// Reads a matrix and validates it as a density matrix.
pub fn read_density_matrix(path: &Path) -> Result<DensityMatrix> {
    DensityMatrix::new(read_matrix(path)?)
}
