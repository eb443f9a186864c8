//! Envelope (skyline) Cholesky factorization after reverse Cuthill–McKee
//! reordering. Mesh matrices have small bandwidth once reordered, which keeps
//! the profile of the factor close to `N · bandwidth`.

use std::collections::VecDeque;

use crate::sparse::CsrMatrix;

#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    /// `perm[old] = new`
    perm: Vec<usize>,
    /// first stored column of each (permuted) row
    first: Vec<usize>,
    row_start: Vec<usize>,
    data: Vec<f64>,
}

/// Reverse Cuthill–McKee ordering of the sparsity graph, `perm[old] = new`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.nrows();
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).0.len()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n)
            .filter(|&i| !visited[i])
            .min_by_key(|&i| degree[i])
            .unwrap();
        let start = pseudo_peripheral(a, seed, &degree);
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut next: Vec<usize> = a.row(u).0.iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (degree[w], w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    let mut perm = vec![0; n];
    for (new, &old) in order.iter().rev().enumerate() {
        perm[old] = new;
    }
    perm
}

fn bfs_levels(a: &CsrMatrix, start: usize) -> Vec<Option<usize>> {
    let mut level = vec![None; a.nrows()];
    level[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let lu = level[u].unwrap();
        for &w in a.row(u).0 {
            if level[w].is_none() {
                level[w] = Some(lu + 1);
                queue.push_back(w);
            }
        }
    }
    level
}

fn pseudo_peripheral(a: &CsrMatrix, seed: usize, degree: &[usize]) -> usize {
    let mut current = seed;
    let mut eccentricity = 0;
    loop {
        let levels = bfs_levels(a, current);
        let depth = levels.iter().flatten().copied().max().unwrap_or(0);
        if depth <= eccentricity && current != seed {
            return current;
        }
        eccentricity = depth;
        let candidate = levels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == Some(depth))
            .map(|(i, _)| i)
            .min_by_key(|&i| degree[i])
            .unwrap();
        if candidate == current {
            return current;
        }
        current = candidate;
    }
}

impl EnvelopeCholesky {
    /// Factors a symmetric matrix; `None` if a pivot is not positive.
    pub fn factor(a: &CsrMatrix) -> Option<Self> {
        let n = a.nrows();
        let perm = reverse_cuthill_mckee(a);
        let pa = a.permuted(&perm);

        let first: Vec<usize> = (0..n)
            .map(|i| pa.row(i).0.first().copied().unwrap_or(i).min(i))
            .collect();
        let mut row_start = Vec::with_capacity(n + 1);
        row_start.push(0);
        for i in 0..n {
            row_start.push(row_start[i] + (i - first[i] + 1));
        }
        let mut data = vec![0.0; row_start[n]];
        for i in 0..n {
            let (cols, vals) = pa.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                if c <= i {
                    data[row_start[i] + c - first[i]] = v;
                }
            }
        }

        for i in 0..n {
            let fi = first[i];
            let ri = row_start[i];
            for j in fi..i {
                let fj = first[j];
                let rj = row_start[j];
                let lo = fi.max(fj);
                let mut s = data[ri + j - fi];
                for k in lo..j {
                    s -= data[ri + k - fi] * data[rj + k - fj];
                }
                data[ri + j - fi] = s / data[rj + j - fj];
            }
            let mut d = data[ri + i - fi];
            for k in fi..i {
                d -= data[ri + k - fi].powi(2);
            }
            if !(d > 0.0) {
                return None;
            }
            data[ri + i - fi] = d.sqrt();
        }
        Some(Self {
            perm,
            first,
            row_start,
            data,
        })
    }

    /// Number of stored entries of the factor.
    pub fn profile(&self) -> usize {
        self.data.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut z = vec![0.0; n];
        for (old, &new) in self.perm.iter().enumerate() {
            z[new] = b[old];
        }
        for i in 0..n {
            let fi = self.first[i];
            let ri = self.row_start[i];
            let mut s = z[i];
            for j in fi..i {
                s -= self.data[ri + j - fi] * z[j];
            }
            z[i] = s / self.data[ri + i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let ri = self.row_start[i];
            z[i] /= self.data[ri + i - fi];
            let xi = z[i];
            for j in fi..i {
                z[j] -= self.data[ri + j - fi] * xi;
            }
        }
        self.perm.iter().map(|&new| z[new]).collect()
    }
}
