//! Packed monomials `b^e · t^m`.
//!
//! A monomial is stored in a single `u128` as 21 six-bit slots. Slot 0 holds
//! the total t-degree, slots 1..=8 the exponents of `t_1..t_8`, slots 9..=20
//! the exponents of the Lazard generators `b_1..b_12`. Slot 0 is the most
//! significant, so the integer order on the packed word is exactly the
//! canonical monomial order: degree-lexicographic on t, then lexicographic
//! on b.
//!
//! Every stored exponent is at most [`MAX_EXP`]; bit 5 of each slot is a
//! guard bit, which keeps slot-wise addition and comparison carry free.

use alloc::vec::Vec;
use core::fmt;

pub const MAX_T_VARS: usize = 8;
pub const MAX_B_GENS: usize = 12;
pub const MAX_EXP: u32 = 31;

const SLOTS: usize = 21;
const WIDTH: u32 = 6;
const SLOT_MASK: u128 = 0x3f;

const fn shift(slot: usize) -> u32 {
    (SLOTS - 1 - slot) as u32 * WIDTH
}

const fn guard_mask() -> u128 {
    let mut m = 0u128;
    let mut s = 0;
    while s < SLOTS {
        m |= 1u128 << (shift(s) + 5);
        s += 1;
    }
    m
}

const fn range_mask(from: usize, to: usize) -> u128 {
    let mut m = 0u128;
    let mut s = from;
    while s <= to {
        m |= SLOT_MASK << shift(s);
        s += 1;
    }
    m
}

const GUARD: u128 = guard_mask();
const T_PART: u128 = range_mask(0, MAX_T_VARS);
const B_PART: u128 = range_mask(MAX_T_VARS + 1, SLOTS - 1);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono(u128);

impl Mono {
    pub const ONE: Mono = Mono(0);

    /// Builds `b^b_exps · t^t_exps`. `b_exps[k]` is the exponent of `b_{k+1}`.
    /// Returns `None` when a slice is too long or an exponent is too large.
    pub fn new(b_exps: &[u32], t_exps: &[u32]) -> Option<Mono> {
        if b_exps.len() > MAX_B_GENS || t_exps.len() > MAX_T_VARS {
            return None;
        }
        let tdeg: u32 = t_exps.iter().sum();
        if tdeg > MAX_EXP || b_exps.iter().any(|&e| e > MAX_EXP) {
            return None;
        }
        let mut raw = (tdeg as u128) << shift(0);
        for (i, &e) in t_exps.iter().enumerate() {
            raw |= (e as u128) << shift(1 + i);
        }
        for (k, &e) in b_exps.iter().enumerate() {
            raw |= (e as u128) << shift(1 + MAX_T_VARS + k);
        }
        Some(Mono(raw))
    }

    pub fn from_t(t_exps: &[u32]) -> Option<Mono> {
        Mono::new(&[], t_exps)
    }

    /// The single variable `t_i` (0-based).
    pub fn var(i: usize) -> Mono {
        let mut t = [0u32; MAX_T_VARS];
        t[i] = 1;
        Mono::from_t(&t).expect("variable index in range")
    }

    /// The Lazard generator `b_i` (1-based).
    pub fn generator(i: usize) -> Mono {
        assert!((1..=MAX_B_GENS).contains(&i), "generator index out of range");
        Mono(1u128 << shift(MAX_T_VARS + i))
    }

    #[inline]
    fn slot(self, s: usize) -> u32 {
        ((self.0 >> shift(s)) & SLOT_MASK) as u32
    }

    #[inline]
    pub fn tdeg(self) -> usize {
        self.slot(0) as usize
    }

    /// Exponent of `t_i` (0-based).
    #[inline]
    pub fn t_exp(self, i: usize) -> u32 {
        self.slot(1 + i)
    }

    /// Exponent of `b_i` (1-based).
    #[inline]
    pub fn b_exp(self, i: usize) -> u32 {
        self.slot(MAX_T_VARS + i)
    }

    /// `Σ i·e_i`; a monomial in the b's has cohomological degree `-b_weight`.
    pub fn b_weight(self) -> usize {
        (1..=MAX_B_GENS).map(|i| i * self.b_exp(i) as usize).sum()
    }

    /// Cohomological degree `tdeg - b_weight`.
    pub fn degree(self) -> i64 {
        self.tdeg() as i64 - self.b_weight() as i64
    }

    pub fn t_exps(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.t_exp(i)).collect()
    }

    /// b-exponents with trailing zeros removed.
    pub fn b_exps(self) -> Vec<u32> {
        let mut v: Vec<u32> = (1..=MAX_B_GENS).map(|i| self.b_exp(i)).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// Largest `i` with `t_i` present, plus one.
    pub fn t_support(self) -> usize {
        (0..MAX_T_VARS).rev().find(|&i| self.t_exp(i) > 0).map_or(0, |i| i + 1)
    }

    #[inline]
    pub fn t_part(self) -> Mono {
        Mono(self.0 & T_PART)
    }

    #[inline]
    pub fn b_part(self) -> Mono {
        Mono(self.0 & B_PART)
    }

    pub fn is_b_free(self) -> bool {
        self.0 & B_PART == 0
    }

    /// Product without range checks; see [`Mono::fits`].
    #[inline]
    pub fn mul(self, other: Mono) -> Mono {
        Mono(self.0 + other.0)
    }

    /// `true` when every slot is within [`MAX_EXP`].
    #[inline]
    pub fn fits(self) -> bool {
        self.0 & GUARD == 0
    }

    #[inline]
    pub fn divides(self, other: Mono) -> bool {
        ((other.0 | GUARD) - self.0) & GUARD == GUARD
    }

    /// `self / other`; caller guarantees `other.divides(self)`.
    #[inline]
    pub fn div(self, other: Mono) -> Mono {
        debug_assert!(other.divides(self));
        Mono(self.0 - other.0)
    }

    /// Replaces the t-part by the given exponents, keeping the b-part.
    pub fn with_t(self, t_exps: &[u32]) -> Option<Mono> {
        let t = Mono::from_t(t_exps)?;
        Some(Mono(t.0 | (self.0 & B_PART)))
    }

    pub fn raw(self) -> u128 {
        self.0
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mono(b={:?}, t={:?})", self.b_exps(), self.t_exps(self.t_support()))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut put = |f: &mut fmt::Formatter<'_>, name: &str, i: usize, e: u32| -> fmt::Result {
            if e == 0 {
                return Ok(());
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}{}", name, i)
            } else {
                write!(f, "{}{}^{}", name, i, e)
            }
        };
        for i in 1..=MAX_B_GENS {
            put(f, "b", i, self.b_exp(i))?;
        }
        for i in 0..MAX_T_VARS {
            put(f, "t", i + 1, self.t_exp(i))?;
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}
