//! Small dense integer matrices acting on character lattices.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn from_columns(columns: &[Vec<i64>]) -> Self {
        Self::from_rows(columns).transpose()
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = m.get(i, j) + a * other.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "vector length");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == i64::from(i == j)))
    }

    /// Direct sum `diag(self, other)`.
    pub fn block_diagonal(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        m
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_primitive(v: &[i64]) -> bool {
    v.iter().fold(0, |g, &x| gcd(g, x)) == 1
}

/// For a primitive vector `v`, a unimodular `P` whose first column is `v`,
/// together with `P⁻¹`. Returns `None` when `v` is not primitive.
pub fn unimodular_completion(v: &[i64]) -> Option<(IntMatrix, IntMatrix)> {
    if !is_primitive(v) {
        return None;
    }
    let n = v.len();
    let mut v = v.to_vec();
    // Row operations A with A·v = e_1; `inv` tracks A⁻¹.
    let mut a = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| v[i] != 0).collect();
        let p = *nonzero.iter().min_by_key(|&&i| (v[i].abs(), i)).expect("nonzero vector");
        if nonzero.len() == 1 {
            if p != 0 {
                v.swap(0, p);
                swap_rows(&mut a, 0, p);
                swap_cols(&mut inv, 0, p);
            }
            if v[0] < 0 {
                v[0] = -v[0];
                for j in 0..n {
                    a.set(0, j, -a.get(0, j));
                    inv.set(j, 0, -inv.get(j, 0));
                }
            }
            break;
        }
        for &j in &nonzero {
            if j == p {
                continue;
            }
            let q = v[j].div_euclid(v[p]);
            if q == 0 {
                continue;
            }
            // row_j -= q row_p; inverse: col_p += q col_j
            v[j] -= q * v[p];
            for c in 0..n {
                a.set(j, c, a.get(j, c) - q * a.get(p, c));
                inv.set(c, p, inv.get(c, p) + q * inv.get(c, j));
            }
        }
    }
    debug_assert!(a.mul(&inv).is_identity());
    Some((inv, a))
}

fn swap_rows(m: &mut IntMatrix, i: usize, j: usize) {
    for c in 0..m.n_cols() {
        let t = m.get(i, c);
        m.set(i, c, m.get(j, c));
        m.set(j, c, t);
    }
}

fn swap_cols(m: &mut IntMatrix, i: usize, j: usize) {
    for r in 0..m.n_rows() {
        let t = m.get(r, i);
        m.set(r, i, m.get(r, j));
        m.set(r, j, t);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn completion_example() {
        let (p, pinv) = unimodular_completion(&[3, -5, 2]).unwrap();
        assert_eq!(p.column(0), [3, -5, 2]);
        assert!(p.mul(&pinv).is_identity());
        assert!(unimodular_completion(&[2, 4]).is_none());
    }

    proptest! {
        #[test]
        fn completion_is_unimodular(v in proptest::collection::vec(-20i64..20, 1..5)) {
            match unimodular_completion(&v) {
                Some((p, pinv)) => {
                    prop_assert_eq!(p.column(0), v.clone());
                    prop_assert!(p.mul(&pinv).is_identity());
                    prop_assert!(pinv.mul(&p).is_identity());
                }
                None => prop_assert!(!is_primitive(&v)),
            }
        }
    }
}
