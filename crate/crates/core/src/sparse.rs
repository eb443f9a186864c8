//! Compressed sparse row storage for symmetric matrices.
//!
//! Both triangles are stored and every row slice is complete. Matrices are
//! built from triplets, with duplicates summed in input order.

use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

/// A single `(row, col, value)` entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

impl CsrMatrix {
    /// Builds an `n x n` matrix. Duplicate positions are summed in the order
    /// they appear, so identical input yields bitwise-identical output.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; n];
        for &(r, _, _) in triplets {
            counts[r] += 1;
        }
        let mut rows: Vec<Vec<(usize, f64)>> =
            counts.iter().map(|&c| Vec::with_capacity(c)).collect();
        for &(r, c, v) in triplets {
            assert!(r < n && c < n, "triplet ({r}, {c}) outside {n}x{n}");
            rows[r].push((c, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            // stable: duplicates keep input order
            row.sort_by_key(|&(c, _)| c);
            for (c, v) in row {
                if col_idx.len() > *row_ptr.last().unwrap() && *col_idx.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let triplets: Vec<_> = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .filter(|&(i, j)| m[(i, j)] != 0.0)
            .map(|(i, j)| (i, j, m[(i, j)]))
            .collect();
        Self::from_triplets(m.nrows(), &triplets)
    }

    pub fn nrows(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(0.0, |k| vals[k])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    /// Largest absolute row sum; equals the 1-norm for symmetric input.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).1.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            *yi = cols.iter().zip(vals).map(|(&c, v)| v * x[c]).sum();
        }
    }

    pub fn mul_dvector(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(self.mul_vec(x.as_slice()))
    }

    /// `self * x` for a dense block of columns.
    pub fn mul_dense(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, x.ncols());
        for c in 0..x.ncols() {
            let y = self.mul_vec(x.column(c).as_slice());
            out.column_mut(c).copy_from_slice(&y);
        }
        out
    }

    /// `x^T A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let ay = self.mul_vec(y);
        x.iter().zip(&ay).map(|(a, b)| a * b).sum()
    }

    pub fn quadratic(&self, x: &[f64]) -> f64 {
        self.bilinear(x, x)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                m[(i, c)] = v;
            }
        }
        m
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    /// `self + factor * other`, on the union of both patterns.
    pub fn add_scaled(&self, factor: f64, other: &CsrMatrix) -> Self {
        assert_eq!(self.n, other.n);
        let triplets: Vec<_> = self
            .triplets()
            .chain(other.triplets().map(|t| Triplet {
                value: factor * t.value,
                ..t
            }))
            .map(|t| (t.row, t.col, t.value))
            .collect();
        Self::from_triplets(self.n, &triplets)
    }

    /// `P^T A P` for a permutation given as `perm[old] = new`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let triplets: Vec<_> = self
            .triplets()
            .map(|t| (perm[t.row], perm[t.col], t.value))
            .collect();
        Self::from_triplets(self.n, &triplets)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.triplets()
            .all(|t| (t.value - self.get(t.col, t.row)).abs() <= tol)
    }

    /// Stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = Triplet> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&col, &value)| Triplet {
                row: i,
                col,
                value,
            })
        })
    }

    /// Writes the lower triangle in Matrix Market `coordinate real symmetric`
    /// format, with 1-based indices.
    pub fn write_matrix_market<W: Write>(&self, mut out: W) -> io::Result<()> {
        let lower: Vec<Triplet> = self.triplets().filter(|t| t.col <= t.row).collect();
        writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
        writeln!(out, "{} {} {}", self.n, self.n, lower.len())?;
        for t in lower {
            writeln!(out, "{} {} {:e}", t.row + 1, t.col + 1, t.value)?;
        }
        Ok(())
    }

    /// Parses the output of [`CsrMatrix::write_matrix_market`] (also accepts
    /// `general` storage).
    pub fn read_matrix_market(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty input")?;
        let lowered = header.to_ascii_lowercase();
        if !lowered.starts_with("%%matrixmarket matrix coordinate real") {
            return Err(format!("unsupported header: {header}"));
        }
        let symmetric = lowered.ends_with("symmetric");
        let mut lines = lines.filter(|l| !l.starts_with('%') && !l.trim().is_empty());
        let size = lines.next().ok_or("missing size line")?;
        let dims: Vec<usize> = size
            .split_whitespace()
            .map(|s| s.parse().map_err(|e| format!("{e}")))
            .collect::<Result<_, _>>()?;
        if dims.len() != 3 || dims[0] != dims[1] {
            return Err(format!("bad size line: {size}"));
        }
        let mut triplets = Vec::with_capacity(2 * dims[2]);
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(format!("bad entry line: {line}"));
            }
            let r: usize = parts[0].parse().map_err(|e| format!("{e}"))?;
            let c: usize = parts[1].parse().map_err(|e| format!("{e}"))?;
            let v: f64 = parts[2].parse().map_err(|e| format!("{e}"))?;
            triplets.push((r - 1, c - 1, v));
            if symmetric && r != c {
                triplets.push((c - 1, r - 1, v));
            }
        }
        Ok(Self::from_triplets(dims[0], &triplets))
    }
}
