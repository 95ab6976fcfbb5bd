use std::io::Write;

use nalgebra::DMatrix;

/// Symmetric matrix stored as its lower triangle (diagonal included) in
/// compressed rows with sorted column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetricMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseSymmetricMatrix {
    /// Builds from (i, j, value) triplets; entries above the diagonal are
    /// mirrored into the lower triangle and duplicates are summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; n + 1];
        for &(i, j, _) in triplets {
            counts[i.max(j) + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut cols = vec![0; triplets.len()];
        let mut vals = vec![0.0; triplets.len()];
        for &(i, j, v) in triplets {
            let (r, c) = if i >= j { (i, j) } else { (j, i) };
            cols[fill[r]] = c;
            vals[fill[r]] = v;
            fill[r] += 1;
        }
        // sort each row and merge duplicates
        let mut row_ptr = vec![0; n + 1];
        let mut out_cols = Vec::with_capacity(triplets.len() / 2);
        let mut out_vals = Vec::with_capacity(triplets.len() / 2);
        let mut order: Vec<usize> = Vec::new();
        for r in 0..n {
            let (a, b) = (counts[r], counts[r + 1]);
            order.clear();
            order.extend(a..b);
            order.sort_by_key(|&k| cols[k]);
            let mut last = usize::MAX;
            for &k in &order {
                if cols[k] == last {
                    *out_vals.last_mut().unwrap() += vals[k];
                } else {
                    out_cols.push(cols[k]);
                    out_vals.push(vals[k]);
                    last = cols[k];
                }
            }
            row_ptr[r + 1] = out_cols.len();
        }
        Self { n, row_ptr, cols: out_cols, vals: out_vals }
    }

    pub fn from_dense(a: &DMatrix<f64>) -> Self {
        let n = a.nrows();
        let mut t = Vec::new();
        for i in 0..n {
            for j in 0..=i {
                if a[(i, j)] != 0.0 || i == j {
                    t.push((i, j, a[(i, j)]));
                }
            }
        }
        Self::from_triplets(n, &t)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Stored (lower-triangle) entries.
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.cols[a..b], &self.vals[a..b])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            let mut s = 0.0;
            let xi = x[i];
            for (&j, &v) in cols.iter().zip(vals) {
                s += v * x[j];
                if j != i {
                    y[j] += v * xi;
                }
            }
            y[i] += s;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    /// x^T A y.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        self.apply(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// a A + b B.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!(self.n, other.n, "dimensions differ");
        if self.row_ptr == other.row_ptr && self.cols == other.cols {
            return Self {
                n: self.n,
                row_ptr: self.row_ptr.clone(),
                cols: self.cols.clone(),
                vals: self.vals.iter().zip(&other.vals).map(|(x, y)| a * x + b * y).collect(),
            };
        }
        let mut row_ptr = vec![0; self.n + 1];
        let mut cols = Vec::with_capacity(self.nnz().max(other.nnz()));
        let mut vals = Vec::with_capacity(cols.capacity());
        for i in 0..self.n {
            let (c1, v1) = self.row(i);
            let (c2, v2) = other.row(i);
            let (mut p, mut q) = (0, 0);
            while p < c1.len() || q < c2.len() {
                let j1 = c1.get(p).copied().unwrap_or(usize::MAX);
                let j2 = c2.get(q).copied().unwrap_or(usize::MAX);
                if j1 == j2 {
                    cols.push(j1);
                    vals.push(a * v1[p] + b * v2[q]);
                    p += 1;
                    q += 1;
                } else if j1 < j2 {
                    cols.push(j1);
                    vals.push(a * v1[p]);
                    p += 1;
                } else {
                    cols.push(j2);
                    vals.push(b * v2[q]);
                    q += 1;
                }
            }
            row_ptr[i + 1] = cols.len();
        }
        Self { n: self.n, row_ptr, cols, vals }
    }

    /// Principal submatrix on the given (increasing) indices.
    pub fn submatrix(&self, keep: &[usize]) -> Self {
        let mut map = vec![usize::MAX; self.n];
        for (k, &i) in keep.iter().enumerate() {
            map[i] = k;
        }
        let mut row_ptr = vec![0; keep.len() + 1];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for (k, &i) in keep.iter().enumerate() {
            let (c, v) = self.row(i);
            for (&j, &x) in c.iter().zip(v) {
                if map[j] != usize::MAX {
                    cols.push(map[j]);
                    vals.push(x);
                }
            }
            row_ptr[k + 1] = cols.len();
        }
        Self { n: keep.len(), row_ptr, cols, vals }
    }

    /// Neighbour lists of the symmetric pattern, diagonal excluded.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for i in 0..self.n {
            let (cols, _) = self.row(i);
            for &j in cols {
                if j != i {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        adj
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        a
    }

    /// Writes the lower triangle as `i j value` lines.
    pub fn dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut s = String::new();
        use std::fmt::Write as _;
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                writeln!(s, "{i} {j} {v:.17e}").unwrap();
            }
        }
        out.write_all(s.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_mirror() {
        let a = SparseSymmetricMatrix::from_triplets(3, &[(0, 0, 1.0), (1, 0, 2.0), (0, 1, 1.0), (2, 2, 4.0), (1, 1, 3.0)]);
        assert_eq!(a.get(0, 1), 3.0);
        assert_eq!(a.nnz(), 4);
        let y = a.apply(&[1.0, 1.0, 1.0]);
        assert_eq!(y, vec![4.0, 6.0, 4.0]);
        let s = a.submatrix(&[1, 2]);
        assert_eq!(s.to_dense(), DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 4.0]));
    }
}
