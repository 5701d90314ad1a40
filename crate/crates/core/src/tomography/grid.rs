//! Sampled tomograms and their CSV interchange format.

use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::numerics::{tol, QuadNode, QuadratureScheme};
use crate::{Error, Result};

/// `w(n, α_j)` for `n = 0 … n_max` on every node `α_j` of a quadrature scheme.
///
/// Values are stored node-major: `values[j * (n_max + 1) + n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TomogramGrid {
    scheme: QuadratureScheme,
    n_max: usize,
    values: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    n: usize,
    re_alpha: f64,
    im_alpha: f64,
    weight: f64,
    value: f64,
}

impl TomogramGrid {
    /// Checks that every value is a probability up to `1e−9` and that no
    /// node carries more than unit mass.
    pub fn new(scheme: QuadratureScheme, n_max: usize, values: Vec<f64>) -> Result<Self> {
        let per = n_max + 1;
        if values.len() != scheme.len() * per {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes × {per} photon numbers",
                values.len(),
                scheme.len()
            )));
        }
        let eps = tol::TOMOGRAM_VALUE;
        for (j, node) in values.chunks(per).enumerate() {
            if let Some((n, v)) = node.iter().enumerate().find(|(_, v)| !(-eps..=1.0 + eps).contains(*v)) {
                return Err(Error::GridMismatch(format!("w({n}, node {j}) = {v} is not a probability")));
            }
            let sum: f64 = node.iter().sum();
            if sum > 1.0 + tol::TOMOGRAM_NODE_SUM {
                return Err(Error::GridMismatch(format!("node {j} carries mass {sum} > 1")));
            }
        }
        Ok(Self { scheme, n_max, values })
    }

    pub fn scheme(&self) -> &QuadratureScheme {
        &self.scheme
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The `n_max + 1` values at node `j`.
    pub fn node_values(&self, j: usize) -> &[f64] {
        let per = self.n_max + 1;
        &self.values[j * per..(j + 1) * per]
    }

    pub fn value(&self, j: usize, n: usize) -> f64 {
        self.values[j * (self.n_max + 1) + n]
    }

    /// `Σ_{n ≤ n_max} w(n, α_j)` per node.
    pub fn node_sums(&self) -> Vec<f64> {
        self.values.chunks(self.n_max + 1).map(|c| c.iter().sum()).collect()
    }

    pub fn max_abs_diff(&self, other: &TomogramGrid) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// `p w₁ + (1 − p) w₂` on a shared grid.
    pub fn mix(&self, other: &TomogramGrid, p: f64) -> Result<TomogramGrid> {
        self.check_compatible(other)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("mixing weight {p} outside [0, 1]")));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| p * a + (1.0 - p) * b).collect();
        TomogramGrid::new(self.scheme.clone(), self.n_max, values)
    }

    pub fn check_compatible(&self, other: &TomogramGrid) -> Result<()> {
        if self.n_max != other.n_max || !self.scheme.same_nodes(&other.scheme) {
            return Err(Error::GridMismatch("tomograms sampled on different grids".into()));
        }
        Ok(())
    }

    /// Nodes with `|α| > R − 1`, where displaced states start to leak past modest cutoffs.
    pub fn edge_nodes(&self) -> usize {
        let limit = self.scheme.radius() - 1.0;
        self.scheme.nodes().iter().filter(|q| q.alpha.norm() > limit).count()
    }

    /// Writes one row per `(n, node)` with header `n,re_alpha,im_alpha,weight,value`.
    /// Floats use the shortest representation that parses back to the same bits.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for (j, node) in self.scheme.nodes().iter().enumerate() {
            for n in 0..=self.n_max {
                w.serialize(Row {
                    n,
                    re_alpha: node.alpha.re,
                    im_alpha: node.alpha.im,
                    weight: node.weight,
                    value: self.value(j, n),
                })
                .map_err(csv_error)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Inverse of [`write_csv`](Self::write_csv). Rows may come in any order;
    /// nodes keep the order of their first appearance, which must be ring by ring.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers().map_err(csv_error)?.clone();
        if headers.iter().collect::<Vec<_>>() != ["n", "re_alpha", "im_alpha", "weight", "value"] {
            let mut seen: String = headers.iter().collect::<Vec<_>>().join(",");
            if seen.len() > 60 {
                seen = format!("{}…", seen.chars().take(60).collect::<String>());
            }
            return Err(Error::Format(format!("expected header n,re_alpha,im_alpha,weight,value, got {seen:?}")));
        }
        let mut nodes: Vec<QuadNode> = Vec::new();
        let mut index: HashMap<[u64; 3], usize> = HashMap::new();
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (line, record) in r.deserialize::<Row>().enumerate() {
            let row = record.map_err(|e| Error::Format(format!("row {}: {e}", line + 2)))?;
            if ![row.re_alpha, row.im_alpha, row.weight, row.value].iter().all(|v| v.is_finite()) {
                return Err(Error::Format(format!("row {}: non-finite field", line + 2)));
            }
            let key = [row.re_alpha.to_bits(), row.im_alpha.to_bits(), row.weight.to_bits()];
            let j = *index.entry(key).or_insert_with(|| {
                nodes.push(QuadNode { alpha: num_complex::Complex64::new(row.re_alpha, row.im_alpha), weight: row.weight });
                nodes.len() - 1
            });
            entries.push((j, row.n, row.value));
        }
        if nodes.is_empty() {
            return Err(Error::Format("tomogram file has no rows".into()));
        }
        let n_max = entries.iter().map(|e| e.1).max().unwrap_or(0);
        let per = n_max + 1;
        let mut values = vec![f64::NAN; nodes.len() * per];
        for (j, n, v) in entries {
            let slot = &mut values[j * per + n];
            if !slot.is_nan() {
                return Err(Error::Format(format!("duplicate row for n = {n} at node {j}")));
            }
            *slot = v;
        }
        if let Some(pos) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::Format(format!("missing row for n = {} at node {}", pos % per, pos / per)));
        }
        let scheme = QuadratureScheme::from_nodes(nodes)?;
        TomogramGrid::new(scheme, n_max, values)
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}
