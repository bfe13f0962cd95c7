//! Propagation operators on the self-loop augmented graph.
//!
//! With `Ã = A + I` and `D̃ = diag(d_i + 1)`, the two operators are
//!
//! - `S = D̃⁻¹ Ã` — row-stochastic, each row of node `i` uniform with value
//!   `1/(d_i + 1)` on its augmented neighborhood,
//! - `T = D̃^{-1/2} Ã D̃^{-1/2}` — symmetric, entry `(i, j)` equal to
//!   `ã_ij / sqrt((d_i+1)(d_j+1))`.
//!
//! They are similar: `Tᴸ = D̃^{1/2} Sᴸ D̃^{-1/2}` for every power `L`.
//!
//! Hollow variants (diagonal removed, rows renormalized) are used when a
//! node's own observation must not enter its prediction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    /// Row-stochastic `D̃⁻¹Ã` (the GraphSAGE-style mean aggregator).
    S,
    /// Symmetric `D̃^{-1/2}ÃD̃^{-1/2}` (the standard GCN aggregator).
    T,
}

impl OperatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OperatorKind::S => "S",
            OperatorKind::T => "T",
        }
    }
}

impl std::fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Compressed sparse rows with per-row sorted column indices.
#[derive(Debug, Clone)]
struct Csr {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<f64>,
}

impl Csr {
    fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for row in rows {
            debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
            for (j, v) in row {
                indices.push(j);
                data.push(v);
            }
            indptr.push(indices.len());
        }
        Self { n, indptr, indices, data }
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        let lo = self.indptr[i];
        let hi = self.indptr[i + 1];
        match self.indices[lo..hi].binary_search(&j) {
            Ok(k) => self.data[lo + k],
            Err(_) => 0.0,
        }
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            let mut acc = 0.0;
            for k in self.indptr[i]..self.indptr[i + 1] {
                acc += self.data[k] * v[self.indices[k]];
            }
            out[i] = acc;
        }
    }

    fn transpose(&self) -> Csr {
        let n = self.n;
        let nnz = self.indices.len();
        let mut counts = vec![0usize; n + 1];
        for &j in &self.indices {
            counts[j + 1] += 1;
        }
        for j in 0..n {
            counts[j + 1] += counts[j];
        }
        let indptr = counts.clone();
        let mut indices = vec![0usize; nnz];
        let mut data = vec![0.0; nnz];
        let mut cursor = counts;
        for i in 0..n {
            for k in self.indptr[i]..self.indptr[i + 1] {
                let j = self.indices[k];
                let slot = cursor[j];
                indices[slot] = i;
                data[slot] = self.data[k];
                cursor[j] += 1;
            }
        }
        Csr { n, indptr, indices, data }
    }
}

/// A sparse propagation operator bound to the graph it was built from.
#[derive(Debug, Clone)]
pub struct PropagationOperator {
    kind: OperatorKind,
    hollow: bool,
    matrix: Csr,
    aug_degrees: Vec<usize>,
}

impl PropagationOperator {
    /// Build `S` or `T` on the self-loop augmented graph.
    pub fn build(g: &Graph, kind: OperatorKind) -> Self {
        let n = g.node_count();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let di = g.aug_degree(i) as f64;
            let mut row = Vec::with_capacity(g.degree(i) + 1);
            let mut push = |j: usize| {
                let value = match kind {
                    OperatorKind::S => 1.0 / di,
                    OperatorKind::T => 1.0 / (di * g.aug_degree(j) as f64).sqrt(),
                };
                row.push((j, value));
            };
            let mut placed_diag = false;
            for &j in g.neighbors(i) {
                if j > i && !placed_diag {
                    push(i);
                    placed_diag = true;
                }
                push(j);
            }
            if !placed_diag {
                push(i);
            }
            rows.push(row);
        }
        Self {
            kind,
            hollow: false,
            matrix: Csr::from_rows(rows),
            aug_degrees: (0..n).map(|i| g.aug_degree(i)).collect(),
        }
    }

    /// Build the hollow variant: diagonal dropped, rows renormalized to sum
    /// one. An isolated node gets an all-zero row.
    pub fn build_hollow(g: &Graph, kind: OperatorKind) -> Self {
        let n = g.node_count();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let neighbors = g.neighbors(i);
            let mut row: Vec<(usize, f64)> = match kind {
                OperatorKind::S => {
                    let w = 1.0 / neighbors.len().max(1) as f64;
                    neighbors.iter().map(|&j| (j, w)).collect()
                }
                OperatorKind::T => {
                    let raw: Vec<f64> = neighbors
                        .iter()
                        .map(|&j| 1.0 / (g.aug_degree(j) as f64).sqrt())
                        .collect();
                    let total: f64 = raw.iter().sum();
                    neighbors.iter().zip(raw).map(|(&j, w)| (j, w / total)).collect()
                }
            };
            if neighbors.is_empty() {
                row.clear();
            }
            rows.push(row);
        }
        Self {
            kind,
            hollow: true,
            matrix: Csr::from_rows(rows),
            aug_degrees: (0..n).map(|i| g.aug_degree(i)).collect(),
        }
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn is_hollow(&self) -> bool {
        self.hollow
    }

    pub fn node_count(&self) -> usize {
        self.matrix.n
    }

    /// Augmented degrees `d_i + 1` of the underlying graph.
    pub fn aug_degrees(&self) -> &[usize] {
        &self.aug_degrees
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix.entry(i, j)
    }

    /// One application `P v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.node_count());
        let mut out = vec![0.0; self.node_count()];
        self.matrix.apply(v, &mut out);
        out
    }

    /// `Pᴸ v` by `depth` repeated sparse applications; `depth = 0` returns `v`.
    pub fn apply_power(&self, depth: usize, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.node_count() {
            return Err(Error::DimensionMismatch { expected: self.node_count(), got: v.len() });
        }
        let mut cur = v.to_vec();
        let mut next = vec![0.0; v.len()];
        for _ in 0..depth {
            self.matrix.apply(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(cur)
    }

    fn transpose_csr(&self) -> Csr {
        // T without hollowing is symmetric; everything else needs a real transpose.
        if self.kind == OperatorKind::T && !self.hollow {
            self.matrix.clone()
        } else {
            self.matrix.transpose()
        }
    }

    /// Squared row norms `‖eᵢᵀ Pˡ‖²` for `l = 1..=max_depth`.
    ///
    /// This is the variance trajectory `E[(Pˡ ε)ᵢ²]` of node `i` under
    /// centered, uncorrelated, unit-variance noise.
    pub fn row_power_norms(&self, i: usize, max_depth: usize) -> Vec<f64> {
        let transpose = self.transpose_csr();
        let mut row = vec![0.0; self.node_count()];
        row[i] = 1.0;
        let mut next = vec![0.0; self.node_count()];
        let mut norms = Vec::with_capacity(max_depth);
        for _ in 0..max_depth {
            transpose.apply(&row, &mut next);
            std::mem::swap(&mut row, &mut next);
            norms.push(row.iter().map(|x| x * x).sum());
        }
        norms
    }

    /// `E[(Pᴸ ε)ᵢ²]` for a single node, via matrix powers.
    pub fn row_variance(&self, i: usize, depth: usize) -> f64 {
        if depth == 0 {
            return 1.0;
        }
        *self.row_power_norms(i, depth).last().unwrap()
    }

    /// Per-node noise variances after `depth` applications, and their sum
    /// `‖Pᴸ‖_F²`.
    ///
    /// The power is materialized row by row (each row of `Pᴸ` is `(Pᵀ)ᴸ eᵢ`),
    /// never as a dense n×n product.
    pub fn variance_profile(&self, depth: usize) -> VarianceProfile {
        let n = self.node_count();
        let transpose = self.transpose_csr();
        let mut per_node = vec![0.0; n];
        let mut row = vec![0.0; n];
        let mut next = vec![0.0; n];
        for i in 0..n {
            row.iter_mut().for_each(|x| *x = 0.0);
            row[i] = 1.0;
            for _ in 0..depth {
                transpose.apply(&row, &mut next);
                std::mem::swap(&mut row, &mut next);
            }
            per_node[i] = row.iter().map(|x| x * x).sum();
        }
        let total = per_node.iter().sum();
        VarianceProfile { per_node, total }
    }
}

/// Per-node contributions `E[(Pᴸ ε)ᵢ²]` to the variance term, summing to
/// `‖Pᴸ‖_F²`.
#[derive(Debug, Clone)]
pub struct VarianceProfile {
    pub per_node: Vec<f64>,
    pub total: f64,
}
