//! Exact rational scalars with an `i64` fast path.
//!
//! Almost every coefficient that shows up in formal group law computations
//! is a small integer, so the common case never touches the allocator.
//! Values that do not fit are promoted to a reduced `BigRational`.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact rational number.
///
/// The representation is canonical: integers that fit into an `i64` are
/// always stored as `Small`, so the derived equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Small(i64),
    Big(BigRational),
}

impl Scalar {
    pub const ZERO: Scalar = Scalar::Small(0);
    pub const ONE: Scalar = Scalar::Small(1);

    pub fn from_ratio(r: BigRational) -> Scalar {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i64() {
                return Scalar::Small(v);
            }
        }
        Scalar::Big(r)
    }

    pub fn from_bigint(v: BigInt) -> Scalar {
        match v.to_i64() {
            Some(s) => Scalar::Small(s),
            None => Scalar::Big(BigRational::from_integer(v)),
        }
    }

    /// `num / den`, reduced. Panics if `den` is zero.
    pub fn fraction(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar::from_ratio(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn to_ratio(&self) -> BigRational {
        match self {
            Scalar::Small(v) => BigRational::from_integer(BigInt::from(*v)),
            Scalar::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Small(1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Small(_) => true,
            Scalar::Big(r) => r.is_integer(),
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Scalar::Small(v) => Some(*v),
            Scalar::Big(_) => None,
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Scalar::Small(v) => BigInt::from(*v),
            Scalar::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Scalar::Small(_) => BigInt::one(),
            Scalar::Big(r) => r.denom().clone(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Small(v) => v.signum() as i32,
            Scalar::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Small(1) => Some(Scalar::Small(1)),
            Scalar::Small(-1) => Some(Scalar::Small(-1)),
            _ => Some(Scalar::from_ratio(self.to_ratio().recip())),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::ZERO
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Small(v)
    }
}

impl From<i32> for Scalar {
    fn from(v: i32) -> Self {
        Scalar::Small(v as i64)
    }
}

impl From<BigInt> for Scalar {
    fn from(v: BigInt) -> Self {
        Scalar::from_bigint(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::from_ratio(v)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_add(*b) {
                return Scalar::Small(s);
            }
        }
        Scalar::from_ratio(self.to_ratio() + rhs.to_ratio())
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_sub(*b) {
                return Scalar::Small(s);
            }
        }
        Scalar::from_ratio(self.to_ratio() - rhs.to_ratio())
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_mul(*b) {
                return Scalar::Small(s);
            }
        }
        Scalar::from_ratio(self.to_ratio() * rhs.to_ratio())
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero.
    fn div(self, rhs: &Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "scalar division by zero");
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, rhs) {
            if a.checked_rem(*b) == Some(0) {
                if let Some(q) = a.checked_div(*b) {
                    return Scalar::Small(q);
                }
            }
        }
        Scalar::from_ratio(self.to_ratio() / rhs.to_ratio())
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Small(v) => match v.checked_neg() {
                Some(n) => Scalar::Small(n),
                None => Scalar::from_ratio(-self.to_ratio()),
            },
            Scalar::Big(r) => Scalar::from_ratio(-r.clone()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: &Scalar) -> Scalar {
                (&self).$f(rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Small(a), Scalar::Small(b)) => a.cmp(b),
            _ => self.to_ratio().cmp(&other.to_ratio()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Small(v) => write!(f, "{}", v),
            Scalar::Big(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scalar literal {0:?}")]
pub struct ParseScalarError(pub String);

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Accepts `"-12"` or `"3/4"`. The denominator must be positive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        match s.split_once('/') {
            None => {
                let v: BigInt = s.parse().map_err(|_| err())?;
                Ok(Scalar::from_bigint(v))
            }
            Some((n, d)) => {
                let n: BigInt = n.parse().map_err(|_| err())?;
                let d: BigInt = d.parse().map_err(|_| err())?;
                if !d.is_positive() {
                    return Err(err());
                }
                Ok(Scalar::from_ratio(BigRational::new(n, d)))
            }
        }
    }
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Scalar>>(values: I) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(&v.denom()))
}

/// `true` when every prime factor of `d` divides `t`.
pub fn denominator_allowed(d: &BigInt, t: u64) -> bool {
    let mut d = d.abs();
    if t == 0 {
        return d.is_one();
    }
    let t = BigInt::from(t);
    loop {
        if d.is_one() {
            return true;
        }
        let g = d.gcd(&t);
        if g.is_one() {
            return false;
        }
        while (&d % &g).is_zero() {
            d /= &g;
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::ZERO
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::ONE
    }
}
