//! Elements of the Lazard ring, represented through the b-embedding
//! `L ⊂ Z[b_1, b_2, ...]`.

use alloc::collections::BTreeMap;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::mono::Mono;
use crate::scalar::Scalar;

/// A polynomial in the generators `b_i`; `b_i` has cohomological degree `-i`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LazardElement {
    terms: BTreeMap<Mono, Scalar>,
}

impl LazardElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(Mono::ONE, c);
        e
    }

    pub fn one() -> Self {
        Self::constant(Scalar::ONE)
    }

    /// The generator `b_i` (1-based).
    pub fn generator(i: usize) -> Self {
        let mut e = Self::zero();
        e.add_term(Mono::generator(i), Scalar::ONE);
        e
    }

    /// Adds `c · m`; the t-part of `m` is ignored.
    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let m = m.b_part();
        let slot = self.terms.entry(m).or_insert(Scalar::ZERO);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the b-free monomial.
    pub fn constant_term(&self) -> Scalar {
        self.terms.get(&Mono::ONE).cloned().unwrap_or(Scalar::ZERO)
    }

    /// `Some(d)` when every term has cohomological degree `d`.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Image under `b_i ↦ 0`.
    pub fn specialize_b_zero(&self) -> Self {
        Self::constant(self.constant_term())
    }
}

impl Add for &LazardElement {
    type Output = LazardElement;
    fn add(self, rhs: &LazardElement) -> LazardElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &LazardElement {
    type Output = LazardElement;
    fn sub(self, rhs: &LazardElement) -> LazardElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Neg for &LazardElement {
    type Output = LazardElement;
    fn neg(self) -> LazardElement {
        let mut out = LazardElement::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &LazardElement {
    type Output = LazardElement;
    fn mul(self, rhs: &LazardElement) -> LazardElement {
        let mut out = LazardElement::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(*mb);
                assert!(m.fits(), "Lazard exponent capacity exceeded");
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for LazardElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *m == Mono::ONE {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", c, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LazardElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
