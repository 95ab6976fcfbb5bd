use crate::assembly::SparseSymmetricMatrix;

use super::EigenError;

/// LDLᵀ factorisation without pivoting in envelope (profile) storage.
///
/// The count of negative pivots is the number of negative eigenvalues
/// (Sylvester's law of inertia), which is what spectrum slicing needs.
#[derive(Debug, Clone)]
pub struct EnvelopeLdl {
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    vals: Vec<f64>,
    negatives: usize,
    min_pivot_ratio: f64,
}

impl EnvelopeLdl {
    /// Factorises `a` in the ordering `perm` (`perm[new] = old`).
    pub fn factor(a: &SparseSymmetricMatrix, perm: &[usize]) -> Result<Self, EigenError> {
        let n = a.dim();
        let mut iperm = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            iperm[old] = new;
        }
        // rows of the permuted lower triangle
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for i in 0..n {
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let (pi, pj) = (iperm[i], iperm[j]);
                let (r, c) = if pi >= pj { (pi, pj) } else { (pj, pi) };
                rows[r].push((c, v));
            }
        }
        let mut first = vec![0; n];
        let mut start = vec![0; n + 1];
        for i in 0..n {
            first[i] = rows[i].iter().map(|e| e.0).min().unwrap_or(i).min(i);
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut vals = vec![0.0; start[n]];
        let mut diag_scale = vec![0.0; n];
        for i in 0..n {
            for &(c, v) in &rows[i] {
                vals[start[i] + c - first[i]] += v;
            }
            diag_scale[i] = vals[start[i + 1] - 1].abs();
        }
        drop(rows);

        let mut negatives = 0;
        let mut min_ratio = f64::INFINITY;
        for i in 0..n {
            let fi = first[i];
            let (done, row_i) = vals.split_at_mut(start[i]);
            let row_i = &mut row_i[..i - fi + 1];
            // row_i[j - fi] holds w_ij = l_ij d_j until converted
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let row_j = &done[start[j]..start[j + 1]];
                let s = dot(&row_i[k0 - fi..j - fi], &row_j[k0 - fj..j - fj]);
                row_i[j - fi] -= s;
            }
            let mut d = row_i[i - fi];
            for j in fi..i {
                let dj = done[start[j + 1] - 1];
                let w = row_i[j - fi];
                let l = w / dj;
                d -= w * l;
                row_i[j - fi] = l;
            }
            if !(d.abs() > 0.0) || !d.is_finite() {
                return Err(EigenError::Breakdown { pivot: i });
            }
            if diag_scale[i] > 0.0 {
                min_ratio = min_ratio.min(d.abs() / diag_scale[i]);
            }
            if d < 0.0 {
                negatives += 1;
            }
            row_i[i - fi] = d;
        }
        Ok(Self { perm: perm.to_vec(), first, start, vals, negatives, min_pivot_ratio: min_ratio })
    }

    /// Number of negative eigenvalues of the factorised matrix.
    pub fn negatives(&self) -> usize {
        self.negatives
    }

    /// Smallest |d_i| / |a_ii|; tiny values signal a nearly singular matrix.
    pub fn min_pivot_ratio(&self) -> f64 {
        self.min_pivot_ratio
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Stored entries of the factor.
    pub fn profile(&self) -> usize {
        self.vals.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&o| b[o]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.vals[self.start[i]..self.start[i + 1] - 1];
            let mut s = 0.0;
            for (k, l) in row.iter().enumerate() {
                s += l * y[fi + k];
            }
            y[i] -= s;
        }
        for i in 0..n {
            y[i] /= self.vals[self.start[i + 1] - 1];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let yi = y[i];
            let row = &self.vals[self.start[i]..self.start[i + 1] - 1];
            for (k, l) in row.iter().enumerate() {
                y[fi + k] -= l * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    // four accumulators let the compiler vectorise
    let mut acc = [0.0; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::ordering::reverse_cuthill_mckee;

    fn laplacian(n: usize, shift: f64) -> SparseSymmetricMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 - shift));
            if i > 0 {
                t.push((i, i - 1, -1.0));
            }
        }
        SparseSymmetricMatrix::from_triplets(n, &t)
    }

    #[test]
    fn solves_and_counts() {
        let n = 50;
        // eigenvalues 2 - 2cos(k pi/(n+1)) - shift
        let a = laplacian(n, 0.9);
        let perm = reverse_cuthill_mckee(&a.adjacency());
        let f = EnvelopeLdl::factor(&a, &perm).unwrap();
        let below = (1..=n).filter(|&k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n + 1) as f64).cos() < 0.9).count();
        assert_eq!(f.negatives(), below);
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = f.solve(&b);
        let r = a.apply(&x);
        assert!(r.iter().zip(&b).all(|(u, v)| (u - v).abs() < 1e-10));
    }
}
