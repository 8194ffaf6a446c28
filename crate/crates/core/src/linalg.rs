//! Exact linear algebra over Z, Z[1/t] and Q on dense rows of scalars.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{common_denominator, denominator_allowed, Scalar};

/// Coefficient ring for spans and kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffMode {
    Integer,
    /// `Z[1/t]`.
    Localized(u64),
    Rational,
}

impl CoeffMode {
    /// Whether `c` lies in the coefficient ring.
    pub fn admits(&self, c: &Scalar) -> bool {
        match self {
            CoeffMode::Integer => c.is_integer(),
            CoeffMode::Localized(t) => denominator_allowed(&c.denom(), *t),
            CoeffMode::Rational => true,
        }
    }
}

impl fmt::Display for CoeffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffMode::Integer => write!(f, "Z"),
            CoeffMode::Localized(t) => write!(f, "Z[1/{}]", t),
            CoeffMode::Rational => write!(f, "Q"),
        }
    }
}

/// Reduced row echelon form over Q: nonzero rows only, with pivot columns.
pub fn rref(rows: &[Vec<Scalar>]) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut m: Vec<Vec<Scalar>> = rows.iter().filter(|r| r.iter().any(|c| !c.is_zero())).cloned().collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    if !m[r][j].is_zero() {
                        let d = &f * &m[r][j];
                        m[i][j] -= &d;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    rref(rows).1.len()
}

/// A basis of `{x : A x = 0}` over Q, one vector per free column, with that
/// free coordinate equal to 1.
pub fn rational_kernel(a: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let (e, pivots) = rref(a);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = alloc::vec![Scalar::ZERO; ncols];
        v[free] = Scalar::ONE;
        for (row, &p) in e.iter().zip(&pivots) {
            v[p] = -&row[free];
        }
        out.push(v);
    }
    out
}

fn to_int_row(row: &[Scalar]) -> Vec<BigInt> {
    let d = common_denominator(row.iter());
    row.iter().map(|c| (c.to_ratio() * d.clone()).to_integer()).collect()
}

/// Row-style Hermite normal form over Z: nonzero rows, strictly increasing
/// pivots, positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).expect("nonempty");
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let (head, tail) = m.split_at_mut(i);
                for j in c..ncols {
                    let d = &q * &head[r][j];
                    tail[0][j] -= d;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = m[i][c].div_floor(&m[r][c]);
                if q.is_zero() {
                    continue;
                }
                let (head, tail) = m.split_at_mut(r);
                for j in c..ncols {
                    let d = &q * &tail[0][j];
                    head[i][j] -= d;
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

/// A Z-basis, in Hermite normal form, of the integer solutions of `A x = 0`.
pub fn integer_kernel(a: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    // Any Q-basis of the row space has the same integer kernel.
    let (e, _) = rref(a);
    let m = e.len();
    let mut aug: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| {
            let mut row = alloc::vec![BigInt::zero(); m + ncols];
            row[m + i] = BigInt::one();
            row
        })
        .collect();
    for (k, row) in e.iter().enumerate() {
        let ints = to_int_row(row);
        for (i, v) in ints.into_iter().enumerate() {
            aug[i][k] = v;
        }
    }
    let h = hnf(aug);
    let kernel: Vec<Vec<BigInt>> = h
        .into_iter()
        .filter(|row| row[..m].iter().all(|c| c.is_zero()))
        .map(|row| row[m..].to_vec())
        .collect();
    hnf(kernel).into_iter().map(|r| r.into_iter().map(Scalar::from_bigint).collect()).collect()
}

/// Kernel over the given coefficient ring: a Z-basis of the integer kernel for
/// `Z` and `Z[1/t]`, the reduced echelon basis for `Q`.
pub fn kernel(a: &[Vec<Scalar>], ncols: usize, mode: CoeffMode) -> Vec<Vec<Scalar>> {
    match mode {
        CoeffMode::Rational => {
            let k = rational_kernel(a, ncols);
            rref(&k).0
        }
        _ => integer_kernel(a, ncols),
    }
}

/// A submodule of `R^n` given by an echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    mode: CoeffMode,
    dim: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(vectors: &[Vec<Scalar>], dim: usize, mode: CoeffMode) -> Self {
        assert!(vectors.iter().all(|v| v.len() == dim), "vector length");
        let basis = match mode {
            CoeffMode::Rational => rref(vectors).0,
            _ => {
                let d = vectors.iter().fold(BigInt::one(), |acc, v| acc.lcm(&common_denominator(v.iter())));
                let ints: Vec<Vec<BigInt>> = vectors
                    .iter()
                    .map(|v| v.iter().map(|c| (c.to_ratio() * d.clone()).to_integer()).collect())
                    .collect();
                let scale = Scalar::from_bigint(d);
                hnf(ints)
                    .into_iter()
                    .map(|r| r.into_iter().map(|c| &Scalar::from_bigint(c) / &scale).collect())
                    .collect()
            }
        };
        let pivots = basis
            .iter()
            .map(|r: &Vec<Scalar>| r.iter().position(|c| !c.is_zero()).expect("nonzero row"))
            .collect();
        Span { mode, dim, basis, pivots }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> CoeffMode {
        self.mode
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// Whether `v` is a combination of the basis with coefficients in the ring.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = &v[p] / &row[p];
            if !self.mode.admits(&c) {
                return false;
            }
            for j in p..self.dim {
                if !row[j].is_zero() {
                    let d = &c * &row[j];
                    v[j] -= &d;
                }
            }
        }
        v.iter().all(|c| c.is_zero())
    }

    pub fn contains_span(&self, other: &Span) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, other: &Span) -> bool {
        self.dim == other.dim && self.contains_span(other) && other.contains_span(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from(x)).collect()
    }

    fn apply(a: &[Vec<Scalar>], x: &[Scalar]) -> Vec<Scalar> {
        a.iter()
            .map(|r| r.iter().zip(x).fold(Scalar::ZERO, |acc, (p, q)| &acc + &(p * q)))
            .collect()
    }

    #[test]
    fn kernel_of_divisibility_condition() {
        // x - y ≡ 0 mod 2 has integer kernel basis of index 2.
        let a = [row(&[1, -1, 2])];
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(apply(&a, v).iter().all(|c| c.is_zero()));
        }
        let span = Span::new(&k, 3, CoeffMode::Integer);
        assert!(span.contains(&row(&[1, 1, 0])));
        assert!(span.contains(&row(&[2, 0, -1])));
        assert!(!span.contains(&row(&[1, 0, 0])));
    }

    #[test]
    fn localized_containment() {
        let span = Span::new(&[row(&[2, 0]), row(&[0, 3])], 2, CoeffMode::Localized(2));
        assert!(span.contains(&row(&[1, 0])));
        assert!(!span.contains(&row(&[0, 1])));
        let q = Span::new(&[row(&[2, 0]), row(&[0, 3])], 2, CoeffMode::Rational);
        assert!(q.contains(&row(&[0, 1])));
        assert!(!Span::new(&[row(&[2, 0]), row(&[0, 3])], 2, CoeffMode::Integer).contains(&row(&[1, 0])));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[row(&[1, 2]), row(&[2, 4])]), 1);
        assert_eq!(rank(&[row(&[0, 0])]), 0);
        assert_eq!(hnf(alloc::vec![alloc::vec![BigInt::from(4), BigInt::from(6)], alloc::vec![BigInt::from(6), BigInt::from(9)]]).len(), 1);
    }

    proptest! {
        #[test]
        fn integer_kernel_is_saturated(entries in proptest::collection::vec(-5i64..6, 8)) {
            let a = [row(&entries[..4]), row(&entries[4..])];
            let k = integer_kernel(&a, 4);
            prop_assert_eq!(k.len(), 4 - rank(&a));
            for v in &k {
                prop_assert!(apply(&a, v).iter().all(|c| c.is_zero()));
            }
            // Every rational kernel vector scaled to be integral lies in the Z-span.
            let span = Span::new(&k, 4, CoeffMode::Integer);
            for v in rational_kernel(&a, 4) {
                let d = Scalar::from_bigint(common_denominator(v.iter()));
                let w: Vec<Scalar> = v.iter().map(|c| c * &d).collect();
                prop_assert!(span.contains(&w));
            }
        }

        #[test]
        fn hnf_preserves_lattice(entries in proptest::collection::vec(-9i64..10, 9)) {
            let rows: Vec<Vec<Scalar>> = entries.chunks(3).map(row).collect();
            let span = Span::new(&rows, 3, CoeffMode::Integer);
            for r in &rows {
                prop_assert!(span.contains(r));
            }
            prop_assert_eq!(span.rank(), rank(&rows));
        }
    }
}
