//! Dense linear algebra over a prime field F_p.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Reduced row echelon data: the reduced matrix and its pivot columns.
pub struct Echelon {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(p: u64, rows: usize, cols: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    pub fn from_rows(p: u64, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let p = self.p;
        (0..self.rows)
            .map(|i| {
                let r = self.row(i);
                let mut acc: u128 = 0;
                for j in 0..self.cols {
                    acc += r[j] as u128 * v[j] as u128;
                }
                (acc % p as u128) as u64
            })
            .collect()
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for j in 0..other.cols {
            let c = self.mul_vec(&other.column(j));
            for i in 0..self.rows {
                out.set(i, j, c[i]);
            }
        }
        out
    }

    pub fn rref(&self) -> Echelon {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = crate::arith::invmod(m.get(r, c), p).expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j);
                m.set(r, j, crate::arith::mulmod(v, inv, p));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = (m.get(i, j) + p - crate::arith::mulmod(f, m.get(r, j), p)) % p;
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of { v : M v = 0 }, one vector per free column, in increasing free-column order.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let e = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (r, &pc) in e.pivots.iter().enumerate() {
                    v[pc] = (p - e.matrix.get(r, f)) % p;
                }
                v
            })
            .collect()
    }

    /// Basis of { w : w^T M = 0 }.
    pub fn left_nullspace(&self) -> Vec<Vec<u64>> {
        self.transpose().nullspace()
    }

    /// Solves `M x = b`, returning one solution if any exists.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let p = self.p;
        let mut aug = Self::zeros(p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i] % p);
        }
        let e = aug.rref();
        if e.pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (r, &pc) in e.pivots.iter().enumerate() {
            x[pc] = e.matrix.get(r, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let e = aug.rref();
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, e.matrix.get(i, n + j));
            }
        }
        Some(inv)
    }
}

/// Incrementally maintained row-reduced span of vectors, used for independence tests.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    p: u64,
    dim: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl SpanBuilder {
    pub fn new(p: u64, dim: usize) -> Self {
        SpanBuilder { p, dim, rows: Vec::new() }
    }

    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut w: Vec<u64> = v.iter().map(|x| x % p).collect();
        for (piv, r) in &self.rows {
            let f = w[*piv];
            if f != 0 {
                for j in 0..self.dim {
                    w[j] = (w[j] + p - crate::arith::mulmod(f, r[j], p)) % p;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut w = self.reduce(v);
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = crate::arith::invmod(w[piv], p).unwrap();
        for x in w.iter_mut() {
            *x = crate::arith::mulmod(*x, inv, p);
        }
        for (_, r) in self.rows.iter_mut() {
            let f = r[piv];
            if f != 0 {
                for j in 0..self.dim {
                    r[j] = (r[j] + p - crate::arith::mulmod(f, w[j], p)) % p;
                }
            }
        }
        self.rows.push((piv, w));
        true
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_and_solve() {
        let m = FpMatrix::from_rows(5, 3, &[vec![1, 2, 3], vec![0, 1, 4]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|&x| x == 0));
        let x = m.solve(&[1, 0]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![1, 0]);
        let sq = FpMatrix::from_rows(7, 2, &[vec![1, 2], vec![3, 4]]);
        let inv = sq.inverse().unwrap();
        assert_eq!(sq.mul(&inv), FpMatrix::identity(7, 2));
    }

    #[test]
    fn span_builder() {
        let mut s = SpanBuilder::new(3, 3);
        assert!(s.insert(&[1, 1, 0]));
        assert!(s.insert(&[0, 1, 1]));
        assert!(!s.insert(&[1, 2, 1]));
        assert!(s.contains(&[2, 2, 0]));
        assert_eq!(s.len(), 2);
    }
}
