//! Demazure operators `∂_α f = (1 + s_α)(f / x_{-α})` and Bott-Samelson
//! classes on flag moment graphs.
//!
//! Neither summand of `(1 + s_α)(f / x_{-α})` lies in the power series ring,
//! so the operator is evaluated as `κ(x_α)·f - (f - s_α f) / x_α`, using
//! `1/x_{-α} = κ(x_α) - 1/x_α`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::fgl::FglContext;
use crate::gkm::{GkmClass, GkmError, GkmGraph};
use crate::lattice::IntMatrix;
use crate::roots::{Root, RootDatum, RootError};
use crate::series::{GradedSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchubertError {
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("precision {available} is too small; need at least {needed}")]
    PrecisionExhausted { needed: usize, available: usize },
    #[error("graph is not a flag moment graph")]
    NotFlagGraph,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Gkm(#[from] GkmError),
}

/// The reflection `s_β` together with `x_β` and `κ(x_β)`.
#[derive(Debug, Clone)]
pub struct DemazureOp {
    root: Vec<i64>,
    reflection: IntMatrix,
    images: Vec<GradedSeries>,
    x_root: GradedSeries,
    kappa: GradedSeries,
}

impl DemazureOp {
    /// The operator of the `i`-th simple root (0-based).
    pub fn simple(datum: &RootDatum, ctx: &FglContext, i: usize) -> Result<Self, SchubertError> {
        let root = datum
            .simple_roots()
            .get(i)
            .ok_or_else(|| SchubertError::InvalidWord(format!("no simple root {}", i + 1)))?;
        Ok(Self::for_root(datum, ctx, root))
    }

    pub fn for_root(datum: &RootDatum, ctx: &FglContext, root: &Root) -> Self {
        let reflection = datum.reflection(root);
        let images = datum.weyl_images(&reflection, ctx);
        let x_root = ctx.character(&root.vector);
        let kappa = ctx.kappa_at(&x_root).expect("positive-order argument");
        DemazureOp { root: root.vector.clone(), reflection, images, x_root, kappa }
    }

    pub fn root(&self) -> &[i64] {
        &self.root
    }

    pub fn reflection(&self) -> &IntMatrix {
        &self.reflection
    }

    pub fn x_root(&self) -> &GradedSeries {
        &self.x_root
    }

    /// `s_β(f)`.
    pub fn reflect(&self, f: &GradedSeries) -> Result<GradedSeries, SeriesError> {
        f.substitute(&self.images)
    }

    /// `(f - s_β f) / x_β`; failure would contradict the divisibility lemma.
    pub fn divided_difference(&self, f: &GradedSeries) -> Result<GradedSeries, SeriesError> {
        let diff = f.checked_sub(&self.reflect(f)?)?;
        diff.divide_exact(&self.x_root)
    }

    /// `∂_β f`, with precision `prec f - 1`.
    pub fn apply(&self, f: &GradedSeries) -> Result<GradedSeries, SchubertError> {
        if f.precision() < 1 {
            return Err(SchubertError::PrecisionExhausted { needed: 1, available: 0 });
        }
        if f.nvars() != self.images.len() {
            return Err(RootError::RankMismatch { expected: self.images.len(), got: f.nvars() }.into());
        }
        let q = self.divided_difference(f)?;
        let out = self.kappa.checked_mul(f)?.checked_sub(&q)?;
        Ok(out.truncate(f.precision() - 1))
    }

    /// Whether `∂(g f) = g ∂(f)` on the common precision; `g` should be
    /// `s_β`-invariant.
    pub fn sw_linearity_check(&self, f: &GradedSeries, g: &GradedSeries) -> Result<bool, SchubertError> {
        let lhs = self.apply(&g.checked_mul(f)?)?;
        let rhs = g.checked_mul(&self.apply(f)?)?;
        let p = lhs.precision().min(rhs.precision());
        Ok(lhs.truncate(p) == rhs.truncate(p))
    }
}

/// `∂_α f` for the `i`-th simple root.
pub fn demazure(f: &GradedSeries, i: usize, datum: &RootDatum, ctx: &FglContext) -> Result<GradedSeries, SchubertError> {
    DemazureOp::simple(datum, ctx, i)?.apply(f)
}

/// A word of simple reflections, stored 0-based and written 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BsWord(pub Vec<usize>);

impl BsWord {
    pub fn validate(&self, datum: &RootDatum) -> Result<(), SchubertError> {
        let r = datum.simple_roots().len();
        match self.0.iter().find(|&&i| i >= r) {
            Some(i) => Err(SchubertError::InvalidWord(format!("simple root {} out of range 1..={}", i + 1, r))),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for BsWord {
    type Err = SchubertError;

    fn from_str(s: &str) -> Result<Self, SchubertError> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(BsWord(Vec::new()));
        }
        s.split(',')
            .map(|p| match p.trim().parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i - 1),
                _ => Err(SchubertError::InvalidWord(s.to_string())),
            })
            .collect::<Result<_, _>>()
            .map(BsWord)
    }
}

impl fmt::Display for BsWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        Ok(())
    }
}

/// `(∂^T_α c)_w = κ(x_{wα}) c_w - (c_w - c_{w s_α}) / x_{wα}`.
pub fn demazure_gkm(c: &GkmClass, i: usize, graph: &GkmGraph) -> Result<GkmClass, SchubertError> {
    let datum = graph.datum().ok_or(SchubertError::NotFlagGraph)?;
    let ctx = graph.ctx();
    let alpha = datum
        .simple_roots()
        .get(i)
        .ok_or_else(|| SchubertError::InvalidWord(format!("no simple root {}", i + 1)))?;
    let s = datum.simple_reflection(i);
    let p = c.precision();
    if p < 1 {
        return Err(SchubertError::PrecisionExhausted { needed: 1, available: 0 });
    }
    let mut values = Vec::with_capacity(c.values.len());
    for (wi, w) in datum.weyl().iter().enumerate() {
        let ws = datum.weyl_lookup(&w.matrix.mul(&s)).expect("closed group");
        let x = ctx.character(&w.act(&alpha.vector));
        let kappa = ctx.kappa_at(&x)?;
        let q = c.values[wi].checked_sub(&c.values[ws])?.divide_exact(&x)?;
        values.push(kappa.checked_mul(&c.values[wi])?.checked_sub(&q)?.truncate(p - 1));
    }
    Ok(GkmClass::new(values))
}

/// The class supported at the base vertex with value `∏_{α>0} x_{-α}`.
pub fn point_class(graph: &GkmGraph) -> Result<GkmClass, SchubertError> {
    let datum = graph.datum().ok_or(SchubertError::NotFlagGraph)?;
    let ctx = graph.ctx();
    let n = datum.rank();
    let p = graph.precision();
    let mut euler = GradedSeries::one(n, p);
    for a in datum.positive_roots() {
        let neg: Vec<i64> = a.vector.iter().map(|c| -c).collect();
        euler = euler.checked_mul(&ctx.character(&neg))?;
    }
    let mut values = alloc::vec![GradedSeries::zero(n, p); graph.vertex_count()];
    values[graph.base()] = euler;
    Ok(GkmClass::new(values))
}

/// `∂^T_{α_l} ... ∂^T_{α_1} [pt]`.
pub fn bott_samelson(word: &BsWord, graph: &GkmGraph) -> Result<GkmClass, SchubertError> {
    let datum = graph.datum().ok_or(SchubertError::NotFlagGraph)?;
    word.validate(datum)?;
    let needed = word.len() + datum.positive_roots().len();
    if graph.precision() < needed {
        return Err(SchubertError::PrecisionExhausted { needed, available: graph.precision() });
    }
    let mut c = point_class(graph)?;
    for &i in &word.0 {
        c = demazure_gkm(&c, i, graph)?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::LawSpec;
    use crate::gkm::flag_gkm;
    use crate::mono::Mono;
    use crate::roots::RootType;
    use crate::scalar::Scalar;

    fn gl(n: usize) -> RootDatum {
        RootDatum::build(&RootType::Gl(n)).unwrap()
    }

    #[test]
    fn additive_examples() {
        let ctx = FglContext::build(LawSpec::Additive, 4).unwrap();
        let d = gl(2);
        let t1 = GradedSeries::var(2, 0, 4);
        assert_eq!(demazure(&t1, 0, &d, &ctx).unwrap(), GradedSeries::constant(2, 3, Scalar::from(-1)));
        let xa = ctx.character(&[1, -1]);
        assert_eq!(demazure(&xa, 0, &d, &ctx).unwrap(), GradedSeries::constant(2, 3, Scalar::from(-2)));
    }

    #[test]
    fn demazure_of_one_is_kappa() {
        for law in [LawSpec::Multiplicative { beta: 2 }, LawSpec::Universal { generators: 4 }] {
            let ctx = FglContext::build(law, 5).unwrap();
            let d = gl(3);
            let op = DemazureOp::simple(&d, &ctx, 1).unwrap();
            let one = GradedSeries::one(3, 5);
            let k = ctx.kappa_at(op.x_root()).unwrap().truncate(4);
            assert_eq!(op.apply(&one).unwrap(), k);
        }
    }

    #[test]
    fn linearity_and_invariance() {
        let ctx = FglContext::build(LawSpec::Universal { generators: 4 }, 5).unwrap();
        let d = gl(2);
        let op = DemazureOp::simple(&d, &ctx, 0).unwrap();
        let t1 = GradedSeries::var(2, 0, 5);
        let t2 = GradedSeries::var(2, 1, 5);
        let f = &(&t1 * &t1) + &(&t1 * &GradedSeries::monomial(2, 5, Mono::generator(1), Scalar::ONE));
        let g = &t1 * &t2;
        assert!(op.sw_linearity_check(&f, &g).unwrap());
        assert!(op.sw_linearity_check(&f, &(&t1 + &t2)).unwrap());
        let h = op.apply(&f).unwrap();
        assert_eq!(op.reflect(&h).unwrap(), h);
    }

    #[test]
    fn rank_one_bott_samelson() {
        for law in [LawSpec::Additive, LawSpec::Multiplicative { beta: 1 }, LawSpec::Universal { generators: 4 }] {
            let ctx = FglContext::build(law, 5).unwrap();
            let g = flag_gkm(&gl(2), &ctx).unwrap();
            let c = bott_samelson(&"1".parse().unwrap(), &g).unwrap();
            assert_eq!(c, g.constant_class(&GradedSeries::one(2, 4)), "{}", law);
            let pt = bott_samelson(&BsWord::default(), &g).unwrap();
            assert_eq!(pt, point_class(&g).unwrap());
            assert_eq!(pt.values[0], ctx.character(&[-1, 1]));
        }
    }

    #[test]
    fn words_are_checked() {
        let ctx = FglContext::build(LawSpec::Additive, 5).unwrap();
        let g = flag_gkm(&gl(3), &ctx).unwrap();
        assert!(matches!(bott_samelson(&"3".parse().unwrap(), &g), Err(SchubertError::InvalidWord(_))));
        assert!(matches!(
            bott_samelson(&"1,2,1".parse().unwrap(), &g),
            Err(SchubertError::PrecisionExhausted { needed: 6, available: 5 })
        ));
        assert!("0".parse::<BsWord>().is_err());
        assert_eq!("1,2".parse::<BsWord>().unwrap().to_string(), "1,2");
    }
}
