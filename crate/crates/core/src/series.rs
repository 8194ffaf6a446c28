//! Truncated graded power series over the Lazard ring.
//!
//! A [`GradedSeries`] is a finite sum of terms `c · b^e · t^m` together with a
//! precision `d`: every coefficient of t-degree at most `d` is exact, nothing
//! is known above it. Results of ring operations carry the minimum precision
//! of their inputs, and comparing two series at different precisions is an
//! error rather than a silent truncation.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::lazard::LazardElement;
use crate::mono::{Mono, MAX_EXP, MAX_T_VARS};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series have {left} and {right} variables")]
    NvarsMismatch { left: usize, right: usize },
    #[error("comparison at mismatched precision {left} vs {right}; truncate first")]
    PrecisionMismatch { left: usize, right: usize },
    #[error("expected {expected} substitution images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("substitution image {index} has a constant term")]
    ImageHasConstantTerm { index: usize },
    #[error("not divisible: nonzero remainder at t-degree {degree}")]
    NotDivisible { degree: usize },
    #[error("division by the zero series")]
    DivisionByZero,
    #[error("precision {precision} is below the divisor order {order}")]
    PrecisionExhausted { precision: usize, order: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("term outside the supported monomial capacity")]
    Capacity,
}

type Terms = BTreeMap<Mono, Scalar>;

fn add_term(map: &mut Terms, m: Mono, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        alloc::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        alloc::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += &c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Accumulates `sign · a · b` into `acc`, dropping products above `max_tdeg`.
fn mul_into(acc: &mut Terms, a: &Terms, b: &Terms, max_tdeg: usize, negate: bool) {
    for (ma, ca) in a {
        let da = ma.tdeg();
        if da > max_tdeg {
            break;
        }
        for (mb, cb) in b {
            if da + mb.tdeg() > max_tdeg {
                break;
            }
            let m = ma.mul(*mb);
            assert!(m.fits(), "monomial exponent capacity exceeded");
            let c = ca * cb;
            add_term(acc, m, if negate { -c } else { c });
        }
    }
}

/// Single-divisor polynomial division with respect to the packed monomial
/// order. Because `{lead}` is a Gröbner basis of the ideal it generates, the
/// remainder vanishes exactly when `lead` divides `r`.
fn poly_divide(mut r: Terms, lead: &Terms) -> (Terms, Terms) {
    let (&lm, lc) = lead.iter().next_back().expect("nonzero divisor");
    let mut q = Terms::new();
    let mut rem = Terms::new();
    while let Some((m, c)) = r.pop_last() {
        if lm.divides(m) {
            let fm = m.div(lm);
            let fc = &c / lc;
            for (gm, gc) in lead {
                if *gm != lm {
                    add_term(&mut r, gm.mul(fm), -(gc * &fc));
                }
            }
            add_term(&mut q, fm, fc);
        } else {
            rem.insert(m, c);
        }
    }
    (q, rem)
}

fn slices(terms: &Terms, upto: usize) -> Vec<Terms> {
    let mut out = vec![Terms::new(); upto + 1];
    for (m, c) in terms {
        let d = m.tdeg();
        if d <= upto {
            out[d].insert(*m, c.clone());
        }
    }
    out
}

/// A truncated element of `L[[t_1, ..., t_n]]`.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedSeries {
    nvars: usize,
    precision: usize,
    terms: Terms,
}

impl GradedSeries {
    pub fn zero(nvars: usize, precision: usize) -> Self {
        assert!(nvars <= MAX_T_VARS, "at most {} variables are supported", MAX_T_VARS);
        assert!(precision <= MAX_EXP as usize, "precision above {} is not supported", MAX_EXP);
        GradedSeries { nvars, precision, terms: Terms::new() }
    }

    pub fn constant(nvars: usize, precision: usize, c: Scalar) -> Self {
        let mut s = Self::zero(nvars, precision);
        add_term(&mut s.terms, Mono::ONE, c);
        s
    }

    pub fn one(nvars: usize, precision: usize) -> Self {
        Self::constant(nvars, precision, Scalar::ONE)
    }

    /// The variable `t_{i+1}` (0-based index `i`).
    pub fn var(nvars: usize, i: usize, precision: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Self::monomial(nvars, precision, Mono::var(i), Scalar::ONE)
    }

    pub fn monomial(nvars: usize, precision: usize, m: Mono, c: Scalar) -> Self {
        let mut s = Self::zero(nvars, precision);
        if m.tdeg() <= precision {
            assert!(m.t_support() <= nvars, "monomial uses too many variables");
            add_term(&mut s.terms, m, c);
        }
        s
    }

    /// A constant from the Lazard ring.
    pub fn from_lazard(nvars: usize, precision: usize, c: &LazardElement) -> Self {
        let mut s = Self::zero(nvars, precision);
        for (m, v) in c.terms() {
            add_term(&mut s.terms, *m, v.clone());
        }
        s
    }

    /// Builds a series from terms; terms above the precision are dropped and
    /// repeated monomials are summed.
    pub fn from_terms<I>(nvars: usize, precision: usize, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (Mono, Scalar)>,
    {
        if nvars > MAX_T_VARS || precision > MAX_EXP as usize {
            return Err(SeriesError::Capacity);
        }
        let mut s = Self::zero(nvars, precision);
        for (m, c) in terms {
            if m.t_support() > nvars {
                return Err(SeriesError::Capacity);
            }
            if m.tdeg() <= precision {
                add_term(&mut s.terms, m, c);
            }
        }
        Ok(s)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> Scalar {
        self.terms.get(&m).cloned().unwrap_or(Scalar::ZERO)
    }

    /// Lowest t-degree of a nonzero term.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().next().map(|m| m.tdeg())
    }

    /// The coefficient of `t^t_exps`, as an element of the Lazard ring.
    pub fn coefficient(&self, t_exps: &[u32]) -> LazardElement {
        let mut out = LazardElement::zero();
        if let Some(t) = Mono::from_t(t_exps) {
            for (m, c) in &self.terms {
                if m.t_part() == t {
                    out.add_term(m.b_part(), c.clone());
                }
            }
        }
        out
    }

    /// The part of t-degree exactly `d`.
    pub fn slice(&self, d: usize) -> Self {
        let mut s = Self::zero(self.nvars, self.precision);
        s.terms = self.terms.iter().filter(|(m, _)| m.tdeg() == d).map(|(m, c)| (*m, c.clone())).collect();
        s
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let p = precision.min(self.precision);
        let mut s = Self::zero(self.nvars, p);
        s.terms = self.terms.iter().filter(|(m, _)| m.tdeg() <= p).map(|(m, c)| (*m, c.clone())).collect();
        s
    }

    /// Lowers the recorded precision without touching terms below it.
    pub fn with_precision(mut self, precision: usize) -> Self {
        if precision < self.precision {
            self = self.truncate(precision);
        }
        self
    }

    /// Equality on the common precision; refuses mismatched precisions.
    pub fn agrees_with(&self, other: &Self) -> Result<bool, SeriesError> {
        if self.nvars != other.nvars {
            return Err(SeriesError::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        if self.precision != other.precision {
            return Err(SeriesError::PrecisionMismatch { left: self.precision, right: other.precision });
        }
        Ok(self.terms == other.terms)
    }

    /// `Some(m)` when every term has cohomological degree `m`.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// The zero series counts as homogeneous of every degree.
    pub fn is_homogeneous(&self, degree: i64) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    /// Image under the specialization `b_i ↦ 0`, i.e. the additive law.
    pub fn specialize_b_zero(&self) -> Self {
        let mut s = Self::zero(self.nvars, self.precision);
        s.terms = self.terms.iter().filter(|(m, _)| m.is_b_free()).map(|(m, c)| (*m, c.clone())).collect();
        s
    }

    pub fn is_b_free(&self) -> bool {
        self.terms.keys().all(|m| m.is_b_free())
    }

    /// Re-indexes variables: `t_i ↦ t_{map[i]}` in a ring with `nvars` variables.
    pub fn rename(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars, "rename map length");
        assert!(map.iter().all(|&j| j < nvars), "rename target out of range");
        let mut s = Self::zero(nvars, self.precision);
        let mut t = [0u32; MAX_T_VARS];
        for (m, c) in &self.terms {
            t.iter_mut().for_each(|e| *e = 0);
            for (i, &j) in map.iter().enumerate() {
                t[j] += m.t_exp(i);
            }
            let nm = m.with_t(&t[..nvars]).expect("rename keeps degrees");
            add_term(&mut s.terms, nm, c.clone());
        }
        s
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut s = Self::zero(self.nvars, self.precision);
        if !c.is_zero() {
            s.terms = self.terms.iter().map(|(m, v)| (*m, v * c)).collect();
        }
        s
    }

    /// Multiplication by a Lazard-ring constant.
    pub fn mul_lazard(&self, c: &LazardElement) -> Self {
        let mut s = Self::zero(self.nvars, self.precision);
        for (mb, cb) in c.terms() {
            for (m, v) in &self.terms {
                let nm = m.mul(*mb);
                assert!(nm.fits(), "monomial exponent capacity exceeded");
                add_term(&mut s.terms, nm, v * cb);
            }
        }
        s
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_ring(other)?;
        let p = self.precision.min(other.precision);
        let mut s = self.truncate(p);
        for (m, c) in other.terms.range(..) {
            if m.tdeg() > p {
                break;
            }
            add_term(&mut s.terms, *m, c.clone());
        }
        Ok(s)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_ring(other)?;
        let p = self.precision.min(other.precision);
        let mut s = self.truncate(p);
        for (m, c) in other.terms.range(..) {
            if m.tdeg() > p {
                break;
            }
            add_term(&mut s.terms, *m, -c);
        }
        Ok(s)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_ring(other)?;
        let p = self.precision.min(other.precision);
        let mut s = Self::zero(self.nvars, p);
        mul_into(&mut s.terms, &self.terms, &other.terms, p, false);
        Ok(s)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars, self.precision);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn same_ring(&self, other: &Self) -> Result<(), SeriesError> {
        if self.nvars != other.nvars {
            Err(SeriesError::NvarsMismatch { left: self.nvars, right: other.nvars })
        } else {
            Ok(())
        }
    }

    /// `f(images)`: substitutes `t_i ↦ images[i]`. Every image must have
    /// positive order, and the output precision is the minimum over inputs.
    pub fn substitute(&self, images: &[GradedSeries]) -> Result<Self, SeriesError> {
        if images.len() != self.nvars {
            return Err(SeriesError::ImageCount { expected: self.nvars, got: images.len() });
        }
        if images.is_empty() {
            return Ok(self.clone());
        }
        Substitution::new(images)?.apply(self)
    }

    /// Exact division `f / g`. The quotient has precision
    /// `min(prec f, prec g) - order g`; a nonzero remainder is reported at
    /// its lowest t-degree.
    pub fn divide_exact(&self, g: &Self) -> Result<Self, SeriesError> {
        self.divide_impl(g, true).map(|(q, _)| q)
    }

    /// Division with remainder. The remainder is linear in `self` and
    /// vanishes exactly when `g` divides `self` up to the working precision.
    pub fn divide_with_remainder(&self, g: &Self) -> Result<(Self, Self), SeriesError> {
        self.divide_impl(g, false)
    }

    fn divide_impl(&self, g: &Self, exact: bool) -> Result<(Self, Self), SeriesError> {
        self.same_ring(g)?;
        let order = g.order().ok_or(SeriesError::DivisionByZero)?;
        let prec = self.precision.min(g.precision);
        if prec < order {
            return Err(SeriesError::PrecisionExhausted { precision: prec, order });
        }
        let top = prec - order;
        let fs = slices(&self.terms, prec);
        let gs = slices(&g.terms, prec);
        let mut rem = Self::zero(self.nvars, prec);
        for s in fs.iter().take(order) {
            for (m, c) in s {
                if exact {
                    return Err(SeriesError::NotDivisible { degree: m.tdeg() });
                }
                rem.terms.insert(*m, c.clone());
            }
        }
        let lead = &gs[order];
        let mut qs: Vec<Terms> = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let mut r = fs[order + k].clone();
            for j in 1..=k {
                mul_into(&mut r, &gs[order + j], &qs[k - j], prec, true);
            }
            let (qk, rk) = poly_divide(r, lead);
            if !rk.is_empty() {
                if exact {
                    return Err(SeriesError::NotDivisible { degree: order + k });
                }
                rem.terms.extend(rk);
            }
            qs.push(qk);
        }
        let mut q = Self::zero(self.nvars, top);
        for s in qs {
            q.terms.extend(s);
        }
        Ok((q, rem))
    }

    /// Exact division by `t_i^k`, lowering precision by `k`.
    pub fn divide_by_var_power(&self, i: usize, k: u32) -> Result<Self, SeriesError> {
        if (self.precision as u32) < k {
            return Err(SeriesError::PrecisionExhausted { precision: self.precision, order: k as usize });
        }
        let mut m0 = [0u32; MAX_T_VARS];
        m0[i] = k;
        let d = Mono::from_t(&m0[..self.nvars.max(i + 1)]).ok_or(SeriesError::Capacity)?;
        let mut q = Self::zero(self.nvars, self.precision - k as usize);
        for (m, c) in &self.terms {
            if !d.divides(*m) {
                return Err(SeriesError::NotDivisible { degree: m.tdeg() });
            }
            q.terms.insert(m.div(d), c.clone());
        }
        Ok(q)
    }
}

/// Cached powers of substitution images.
pub struct Substitution<'a> {
    images: &'a [GradedSeries],
    nvars: usize,
    precision: usize,
    powers: Vec<Vec<GradedSeries>>,
}

impl<'a> Substitution<'a> {
    pub fn new(images: &'a [GradedSeries]) -> Result<Self, SeriesError> {
        let first = images.first().ok_or(SeriesError::ImageCount { expected: 1, got: 0 })?;
        let nvars = first.nvars;
        let mut precision = first.precision;
        for (index, img) in images.iter().enumerate() {
            first.same_ring(img)?;
            if img.terms.contains_key(&Mono::ONE) {
                return Err(SeriesError::ImageHasConstantTerm { index });
            }
            precision = precision.min(img.precision);
        }
        let powers = images
            .iter()
            .map(|img| vec![GradedSeries::one(nvars, precision), img.truncate(precision)])
            .collect();
        Ok(Substitution { images, nvars, precision, powers })
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    fn power(&mut self, i: usize, k: usize) -> &GradedSeries {
        while self.powers[i].len() <= k {
            let next = &self.powers[i][self.powers[i].len() - 1] * &self.powers[i][1];
            self.powers[i].push(next);
        }
        &self.powers[i][k]
    }

    /// The image of the b-free monomial `t^m`.
    pub fn monomial(&mut self, m: Mono) -> GradedSeries {
        let mut acc: Option<GradedSeries> = None;
        for i in 0..self.images.len() {
            let e = m.t_exp(i) as usize;
            if e == 0 {
                continue;
            }
            let p = self.power(i, e).clone();
            acc = Some(match acc {
                None => p,
                Some(a) => &a * &p,
            });
        }
        acc.unwrap_or_else(|| GradedSeries::one(self.nvars, self.precision))
    }

    pub fn apply(&mut self, f: &GradedSeries) -> Result<GradedSeries, SeriesError> {
        if f.nvars != self.images.len() {
            return Err(SeriesError::ImageCount { expected: f.nvars, got: self.images.len() });
        }
        let precision = self.precision.min(f.precision);
        let mut out = GradedSeries::zero(self.nvars, precision);
        let mut iter = f.terms.iter().peekable();
        while let Some((m, c)) = iter.next() {
            let t = m.t_part();
            let mut group: Vec<(Mono, Scalar)> = vec![(m.b_part(), c.clone())];
            while let Some((m2, c2)) = iter.peek() {
                if m2.t_part() != t {
                    break;
                }
                group.push((m2.b_part(), (*c2).clone()));
                iter.next();
            }
            if t.tdeg() > precision {
                break;
            }
            let image = self.monomial(t);
            for (b, cb) in &group {
                for (mi, ci) in &image.terms {
                    if mi.tdeg() > precision {
                        break;
                    }
                    let nm = mi.mul(*b);
                    assert!(nm.fits(), "monomial exponent capacity exceeded");
                    add_term(&mut out.terms, nm, ci * cb);
                }
            }
        }
        Ok(out)
    }
}

macro_rules! series_binop {
    ($tr:ident, $f:ident, $checked:ident) => {
        impl<'a> $tr<&'a GradedSeries> for &'a GradedSeries {
            type Output = GradedSeries;
            /// Panics when the variable counts differ.
            fn $f(self, rhs: &GradedSeries) -> GradedSeries {
                self.$checked(rhs).expect("series in different rings")
            }
        }
        impl $tr<GradedSeries> for GradedSeries {
            type Output = GradedSeries;
            fn $f(self, rhs: GradedSeries) -> GradedSeries {
                (&self).$f(&rhs)
            }
        }
    };
}
series_binop!(Add, add, checked_add);
series_binop!(Sub, sub, checked_sub);
series_binop!(Mul, mul, checked_mul);

impl Neg for &GradedSeries {
    type Output = GradedSeries;
    fn neg(self) -> GradedSeries {
        self.scale(&Scalar::from(-1))
    }
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.signum() < 0;
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            if *m == Mono::ONE {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", a, m)?;
            }
        }
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        write!(f, " + O({})", self.precision + 1)
    }
}

impl fmt::Debug for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_vars(nvars: usize, vars: &[usize]) -> Result<(), SeriesError> {
    match vars.iter().find(|&&v| v >= nvars) {
        Some(&v) => Err(SeriesError::IndexOutOfRange { index: v + 1, max: nvars }),
        None => Ok(()),
    }
}

/// `e_i` in the variables `vars` (0-based indices into a ring of `nvars` variables).
pub fn elementary_symmetric(
    i: usize,
    nvars: usize,
    vars: &[usize],
    precision: usize,
) -> Result<GradedSeries, SeriesError> {
    check_vars(nvars, vars)?;
    if i < 1 || i > vars.len() {
        return Err(SeriesError::IndexOutOfRange { index: i, max: vars.len() });
    }
    let mut out = GradedSeries::zero(nvars, precision);
    if i > precision {
        return Ok(out);
    }
    // Walk the i-subsets of vars in lexicographic order.
    let mut idx: Vec<usize> = (0..i).collect();
    loop {
        let mut t = [0u32; MAX_T_VARS];
        for &k in &idx {
            t[vars[k]] += 1;
        }
        let m = Mono::from_t(&t[..nvars]).ok_or(SeriesError::Capacity)?;
        add_term(&mut out.terms, m, Scalar::ONE);
        let mut p = i;
        while p > 0 && idx[p - 1] == vars.len() - i + p - 1 {
            p -= 1;
        }
        if p == 0 {
            break;
        }
        idx[p - 1] += 1;
        for q in p..i {
            idx[q] = idx[q - 1] + 1;
        }
    }
    Ok(out)
}

/// `h_k`: the sum of all monomials of degree `k` in the variables `vars`.
pub fn complete_homogeneous(
    k: usize,
    nvars: usize,
    vars: &[usize],
    precision: usize,
) -> Result<GradedSeries, SeriesError> {
    check_vars(nvars, vars)?;
    let mut out = GradedSeries::zero(nvars, precision);
    if k > precision {
        return Ok(out);
    }
    for exps in compositions(k, vars.len()) {
        let mut t = [0u32; MAX_T_VARS];
        for (pos, e) in exps.iter().enumerate() {
            t[vars[pos]] += *e;
        }
        let m = Mono::from_t(&t[..nvars]).ok_or(SeriesError::Capacity)?;
        add_term(&mut out.terms, m, Scalar::ONE);
    }
    Ok(out)
}

/// All exponent vectors of length `parts` summing to `total`.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0u32; parts];
    fn rec(total: usize, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = total as u32;
            out.push(cur.clone());
            return;
        }
        for e in (0..=total).rev() {
            cur[pos] = e as u32;
            rec(total - e, pos + 1, cur, out);
        }
    }
    rec(total, 0, &mut cur, &mut out);
    out
}

/// The b-free monomials of t-degree exactly `d` in `nvars` variables, in
/// canonical order.
pub fn t_monomials(nvars: usize, d: usize) -> Vec<Mono> {
    let mut v: Vec<Mono> = compositions(d, nvars)
        .into_iter()
        .filter_map(|e| Mono::from_t(&e))
        .collect();
    v.sort();
    v
}

/// b-monomials of weight exactly `w` using generators `b_1..b_ngens`.
pub fn b_monomials(ngens: usize, w: usize) -> Vec<Mono> {
    fn rec(w: usize, max_part: usize, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if w == 0 {
            if let Some(m) = Mono::new(cur, &[]) {
                out.push(m);
            }
            return;
        }
        for part in (1..=max_part.min(w)).rev() {
            cur[part - 1] += 1;
            rec(w - part, part, cur, out);
            cur[part - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    if ngens == 0 {
        if w == 0 {
            out.push(Mono::ONE);
        }
        return out;
    }
    let mut cur = vec![0u32; ngens];
    rec(w, ngens, &mut cur, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(nvars: usize, i: usize, p: usize) -> GradedSeries {
        GradedSeries::var(nvars, i, p)
    }

    #[test]
    fn ring_examples() {
        let t1 = t(2, 0, 4);
        let t2 = t(2, 1, 4);
        assert!((&t1 + &(-&t1)).is_zero());
        let p = &t1 * &t2;
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(Mono::from_t(&[1, 1]).unwrap()), Scalar::ONE);
    }

    #[test]
    fn precision_is_minimum() {
        let a = t(1, 0, 5);
        let b = t(1, 0, 3);
        assert_eq!((&a + &b).precision(), 3);
        assert_eq!((&a * &b).precision(), 3);
        assert_eq!(a.pow(4).precision(), 5);
        assert!(a.pow(4).truncate(3).is_zero());
        assert_eq!(
            a.agrees_with(&b),
            Err(SeriesError::PrecisionMismatch { left: 5, right: 3 })
        );
        assert_eq!(a.truncate(3).agrees_with(&b), Ok(true));
    }

    #[test]
    fn substitution_examples() {
        let f = &t(2, 0, 4) + &t(2, 1, 4);
        let swapped = f.substitute(&[t(2, 1, 4), t(2, 0, 4)]).unwrap();
        assert_eq!(swapped, f);
        let g = t(2, 0, 4);
        let img = &t(2, 0, 4) - &t(2, 1, 4);
        assert_eq!(g.substitute(&[img.clone(), t(2, 1, 4)]).unwrap(), img);
        let bad = GradedSeries::one(2, 4);
        assert_eq!(
            g.substitute(&[bad, t(2, 1, 4)]),
            Err(SeriesError::ImageHasConstantTerm { index: 0 })
        );
    }

    #[test]
    fn division_examples() {
        let t1 = t(2, 0, 5);
        let t2 = t(2, 1, 5);
        let f = &(&t1 * &t1) - &(&t2 * &t2);
        let g = &t1 - &t2;
        let q = f.divide_exact(&g).unwrap();
        assert_eq!(q, (&t1 + &t2).truncate(4));
        assert_eq!(t1.divide_exact(&t2), Err(SeriesError::NotDivisible { degree: 1 }));
        let (q, r) = t1.divide_with_remainder(&t2).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, t1);
    }

    #[test]
    fn division_by_non_monic_lead() {
        // (1 + t)·(3t1 + 2t2) / (3t1 + 2t2)
        let t1 = t(2, 0, 4);
        let t2 = t(2, 1, 4);
        let g = &t1.scale(&Scalar::from(3)) + &t2.scale(&Scalar::from(2));
        let u = &GradedSeries::one(2, 4) + &t1;
        let f = &u * &g;
        assert_eq!(f.divide_exact(&g).unwrap(), u.truncate(3));
    }

    #[test]
    fn symmetric_functions() {
        let e2 = elementary_symmetric(2, 2, &[0, 1], 5).unwrap();
        assert_eq!(e2, &t(2, 0, 5) * &t(2, 1, 5));
        let h2 = complete_homogeneous(2, 2, &[0, 1], 5).unwrap();
        assert_eq!(h2.len(), 3);
        let h4 = complete_homogeneous(4, 1, &[0], 5).unwrap();
        assert_eq!(h4, t(1, 0, 5).pow(4));
        assert!(elementary_symmetric(3, 2, &[0, 1], 5).is_err());
        assert!(elementary_symmetric(0, 2, &[0, 1], 5).is_err());
        assert_eq!(elementary_symmetric(3, 4, &[0, 1, 2, 3], 5).unwrap().len(), 4);
        assert_eq!(complete_homogeneous(0, 2, &[0, 1], 5).unwrap(), GradedSeries::one(2, 5));
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(t_monomials(3, 2).len(), 6);
        assert_eq!(b_monomials(4, 4).len(), 5);
        assert_eq!(b_monomials(2, 4).len(), 3);
        assert_eq!(b_monomials(0, 0), [Mono::ONE]);
        assert!(b_monomials(0, 1).is_empty());
    }

    #[test]
    fn rename_embeds_variables() {
        let u = &t(1, 0, 3) + &t(1, 0, 3).pow(2);
        let e = u.rename(3, &[2]);
        assert_eq!(e, &t(3, 2, 3) + &t(3, 2, 3).pow(2));
    }
}
