//! Moment-graph models: tuples of series indexed by fixed points, subject to
//! divisibility along edges.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::fgl::{FglContext, FglError};
use crate::lattice::IntMatrix;
use crate::linalg::{kernel, rref, CoeffMode, Span};
use crate::mono::Mono;
use crate::roots::{RootDatum, RootError};
use crate::scalar::Scalar;
use crate::series::{b_monomials, complete_homogeneous, elementary_symmetric, t_monomials, GradedSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GkmError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("operation needs vertex Weyl representatives")]
    NoVertexAction,
    #[error("degree {degree} exceeds precision {precision}")]
    DegreeExceedsPrecision { degree: usize, precision: usize },
    #[error("class has {got} values but the graph has {expected} vertices")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("coefficient mode must be rational")]
    CoefficientModeNotRational,
    #[error("invalid approximation ring: need N > n, got N = {big_n}, n = {n}")]
    InvalidApproximation { big_n: usize, n: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Fgl(#[from] FglError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmEdge {
    pub v: usize,
    pub w: usize,
    pub chi: Vec<i64>,
}

/// A vertex-indexed tuple of series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmClass {
    pub values: Vec<GradedSeries>,
}

impl GkmClass {
    pub fn new(values: Vec<GradedSeries>) -> Self {
        GkmClass { values }
    }

    pub fn constant(n: usize, f: &GradedSeries) -> Self {
        GkmClass { values: vec![f.clone(); n] }
    }

    pub fn precision(&self) -> usize {
        self.values.iter().map(GradedSeries::precision).min().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(GradedSeries::is_zero)
    }

    pub fn truncate(&self, p: usize) -> Self {
        GkmClass { values: self.values.iter().map(|v| v.truncate(p)).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(&GradedSeries, &GradedSeries) -> GradedSeries) -> Self {
        assert_eq!(self.values.len(), other.values.len(), "class shapes");
        GkmClass { values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    pub fn specialize_b_zero(&self) -> Self {
        GkmClass { values: self.values.iter().map(GradedSeries::specialize_b_zero).collect() }
    }

    /// Equality after truncating both sides to the common precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let p = self.precision().min(other.precision());
        self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a.truncate(p) == b.truncate(p))
    }
}

/// Result of checking edge congruences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub ok: bool,
    /// First failing edge index and the lowest t-degree of the remainder.
    pub witness: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
struct FlagData {
    datum: RootDatum,
}

#[derive(Debug, Clone)]
pub struct GkmGraph {
    labels: Vec<String>,
    base: usize,
    rank: usize,
    edges: Vec<GkmEdge>,
    ctx: FglContext,
    edge_series: Vec<GradedSeries>,
    /// For each vertex, a lattice automorphism `w` whose twist gives restrictions.
    vertex_weyl: Option<Vec<IntMatrix>>,
    vertex_images: Option<Vec<Vec<GradedSeries>>>,
    flag: Option<FlagData>,
}

fn word_label(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter().map(|i| format!("s{}", i + 1)).collect()
}

impl GkmGraph {
    /// Checks indices, nonzero labels and connectivity, and drops duplicate
    /// edges (same endpoints, labels equal up to sign).
    pub fn new(
        labels: Vec<String>,
        base: usize,
        rank: usize,
        edges: Vec<GkmEdge>,
        ctx: &FglContext,
    ) -> Result<Self, GkmError> {
        let n = labels.len();
        if n == 0 || base >= n {
            return Err(GkmError::InvalidGraph("base vertex out of range".to_string()));
        }
        if labels.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(GkmError::InvalidGraph("duplicate vertex labels".to_string()));
        }
        let mut seen: BTreeSet<(usize, usize, Vec<i64>)> = BTreeSet::new();
        let mut kept = Vec::new();
        for e in edges {
            if e.v >= n || e.w >= n || e.v == e.w {
                return Err(GkmError::InvalidGraph(format!("bad edge endpoints {} {}", e.v, e.w)));
            }
            if e.chi.len() != rank || e.chi.iter().all(|&c| c == 0) {
                return Err(GkmError::InvalidGraph(format!("bad edge character {:?}", e.chi)));
            }
            let (a, b) = (e.v.min(e.w), e.v.max(e.w));
            let neg: Vec<i64> = e.chi.iter().map(|c| -c).collect();
            let key = (a, b, e.chi.clone().max(neg));
            if seen.insert(key) {
                kept.push(e);
            }
        }
        let mut reached = vec![false; n];
        let mut stack = vec![base];
        reached[base] = true;
        while let Some(v) = stack.pop() {
            for e in &kept {
                for (x, y) in [(e.v, e.w), (e.w, e.v)] {
                    if x == v && !reached[y] {
                        reached[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(GkmError::InvalidGraph("graph is not connected".to_string()));
        }
        let edge_series = kept.iter().map(|e| ctx.character(&e.chi)).collect();
        Ok(GkmGraph {
            labels,
            base,
            rank,
            edges: kept,
            ctx: ctx.clone(),
            edge_series,
            vertex_weyl: None,
            vertex_images: None,
            flag: None,
        })
    }

    /// Attaches a lattice automorphism to each vertex, used for restrictions
    /// of line bundles and for the tensor model.
    pub fn with_vertex_action(mut self, ws: Vec<IntMatrix>) -> Result<Self, GkmError> {
        if ws.len() != self.labels.len() {
            return Err(GkmError::ShapeMismatch { expected: self.labels.len(), got: ws.len() });
        }
        let images = ws
            .iter()
            .map(|w| (0..self.rank).map(|i| self.ctx.character(&w.column(i))).collect())
            .collect();
        self.vertex_weyl = Some(ws);
        self.vertex_images = Some(images);
        Ok(self)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn edges(&self) -> &[GkmEdge] {
        &self.edges
    }

    pub fn edge_series(&self, i: usize) -> &GradedSeries {
        &self.edge_series[i]
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn ctx(&self) -> &FglContext {
        &self.ctx
    }

    pub fn precision(&self) -> usize {
        self.ctx.precision()
    }

    pub fn datum(&self) -> Option<&RootDatum> {
        self.flag.as_ref().map(|f| &f.datum)
    }

    pub fn vertex_action(&self) -> Option<&[IntMatrix]> {
        self.vertex_weyl.as_deref()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `w(f)` for the Weyl representative of vertex `v`.
    pub fn twist(&self, v: usize, f: &GradedSeries) -> Result<GradedSeries, GkmError> {
        let images = self.vertex_images.as_ref().ok_or(GkmError::NoVertexAction)?;
        if f.nvars() != self.rank {
            return Err(SeriesError::NvarsMismatch { left: f.nvars(), right: self.rank }.into());
        }
        if self.rank == 0 {
            return Ok(f.clone());
        }
        Ok(f.substitute(&images[v])?)
    }

    pub fn membership(&self, c: &GkmClass) -> Result<Membership, GkmError> {
        self.check_shape(c)?;
        for (i, e) in self.edges.iter().enumerate() {
            let diff = c.values[e.v].checked_sub(&c.values[e.w])?;
            match diff.divide_exact(&self.edge_series[i]) {
                Ok(_) => {}
                Err(SeriesError::NotDivisible { degree }) => {
                    return Ok(Membership { ok: false, witness: Some((i, degree)) });
                }
                Err(SeriesError::PrecisionExhausted { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
        Ok(Membership { ok: true, witness: None })
    }

    fn check_shape(&self, c: &GkmClass) -> Result<(), GkmError> {
        if c.values.len() != self.labels.len() {
            return Err(GkmError::ShapeMismatch { expected: self.labels.len(), got: c.values.len() });
        }
        Ok(())
    }

    /// `(x_{wχ})_w`.
    pub fn line_bundle_class(&self, chi: &[i64]) -> Result<GkmClass, GkmError> {
        let ws = self.vertex_weyl.as_ref().ok_or(GkmError::NoVertexAction)?;
        if chi.len() != self.rank {
            return Err(RootError::RankMismatch { expected: self.rank, got: chi.len() }.into());
        }
        Ok(GkmClass { values: ws.iter().map(|w| self.ctx.character(&w.apply(chi))).collect() })
    }

    pub fn constant_class(&self, f: &GradedSeries) -> GkmClass {
        GkmClass::constant(self.labels.len(), f)
    }

    /// Value `Σ w(a)·b` at each vertex `w`.
    pub fn tensor_to_gkm(&self, tc: &TensorClass) -> Result<GkmClass, GkmError> {
        let p = self.precision();
        let mut values = vec![GradedSeries::zero(self.rank, p); self.labels.len()];
        for (a, b) in &tc.terms {
            for (v, out) in values.iter_mut().enumerate() {
                let twisted = self.twist(v, a)?;
                *out = out.checked_add(&twisted.checked_mul(b)?)?;
            }
        }
        Ok(GkmClass { values })
    }

    /// Degree-`d` tuples of b-free homogeneous polynomials satisfying every
    /// edge congruence; a basis over the coefficient ring, in echelon form.
    pub fn subring_basis(&self, d: usize, mode: CoeffMode) -> Result<Vec<GkmClass>, GkmError> {
        let p = self.precision();
        if d > p {
            return Err(GkmError::DegreeExceedsPrecision { degree: d, precision: p });
        }
        let monos = t_monomials(self.rank, d);
        let nv = self.labels.len();
        let ncols = nv * monos.len();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let mut by_rem: BTreeMap<Mono, Vec<Scalar>> = BTreeMap::new();
            for (k, m) in monos.iter().enumerate() {
                let f = GradedSeries::monomial(self.rank, p, *m, Scalar::ONE);
                let (_, rem) = f.divide_with_remainder(&self.edge_series[i])?;
                for (rm, rc) in rem.terms() {
                    let row = by_rem.entry(*rm).or_insert_with(|| vec![Scalar::ZERO; ncols]);
                    row[e.v * monos.len() + k] += rc;
                    row[e.w * monos.len() + k] -= rc;
                }
            }
            rows.extend(by_rem.into_values());
        }
        let basis = kernel(&rows, ncols, mode);
        Ok(basis.iter().map(|v| self.vector_to_class(v, &monos)).collect())
    }

    fn vector_to_class(&self, v: &[Scalar], monos: &[Mono]) -> GkmClass {
        let p = self.precision();
        let values = (0..self.labels.len())
            .map(|vi| {
                let terms = monos.iter().enumerate().map(|(k, m)| (*m, v[vi * monos.len() + k].clone()));
                GradedSeries::from_terms(self.rank, p, terms).expect("monomials in range")
            })
            .collect();
        GkmClass { values }
    }

    /// Coordinates of a b-free degree-`d` tuple in the vertex × monomial basis.
    fn class_to_vector(&self, c: &GkmClass, d: usize, monos: &[Mono]) -> Result<Vec<Scalar>, GkmError> {
        let index: BTreeMap<Mono, usize> = monos.iter().enumerate().map(|(k, m)| (*m, k)).collect();
        let mut out = vec![Scalar::ZERO; self.labels.len() * monos.len()];
        for (vi, val) in c.values.iter().enumerate() {
            for (m, coeff) in val.terms() {
                let k = index.get(m).ok_or_else(|| {
                    GkmError::Unsupported(format!("tuple entry {} is not a b-free form of degree {}", m, d))
                })?;
                out[vi * monos.len() + k] = coeff.clone();
            }
        }
        Ok(out)
    }

    /// Compares, in degree `d`, the span of images of monomial tensors
    /// `a ⊗ b` with the congruence subring.
    pub fn surjectivity_probe(&self, d: usize, mode: CoeffMode) -> Result<ProbeReport, GkmError> {
        let p = self.precision();
        if d > p {
            return Err(GkmError::DegreeExceedsPrecision { degree: d, precision: p });
        }
        let monos = t_monomials(self.rank, d);
        let ncols = self.labels.len() * monos.len();
        let mut images = Vec::new();
        for i in 0..=d {
            for a in t_monomials(self.rank, i) {
                for b in t_monomials(self.rank, d - i) {
                    let tc = TensorClass::new(vec![(
                        GradedSeries::monomial(self.rank, p, a, Scalar::ONE),
                        GradedSeries::monomial(self.rank, p, b, Scalar::ONE),
                    )]);
                    let c = self.tensor_to_gkm(&tc)?;
                    images.push(self.class_to_vector(&c, d, &monos)?);
                }
            }
        }
        let basis: Vec<Vec<Scalar>> = self
            .subring_basis(d, mode)?
            .iter()
            .map(|c| self.class_to_vector(c, d, &monos))
            .collect::<Result<_, _>>()?;
        let image_span = Span::new(&images, ncols, mode);
        let subring_span = Span::new(&basis, ncols, mode);
        Ok(ProbeReport {
            degree: d,
            image_rank: image_span.rank(),
            subring_rank: subring_span.rank(),
            images_in_subring: subring_span.contains_span(&image_span),
            subring_in_images: image_span.contains_span(&subring_span),
        })
    }

    /// Checks `s_i(x) - s_i(t) ↦ 0` for `x_i ↦ line_bundle_class(χ_i)`, plus
    /// the non-relation `x_1 - t_1`.
    pub fn gln_relations(&self) -> Result<GlnReport, GkmError> {
        let n = self.rank;
        let p = self.precision();
        let xs: Vec<GkmClass> = (0..n)
            .map(|i| self.line_bundle_class(&(0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>()))
            .collect::<Result<_, _>>()?;
        let vars: Vec<usize> = (0..n).collect();
        let mut relations = Vec::new();
        for i in 1..=n {
            let e = elementary_symmetric(i, n, &vars, p)?;
            let mut failing = None;
            for v in 0..self.labels.len() {
                let images: Vec<GradedSeries> = xs.iter().map(|x| x.values[v].clone()).collect();
                let lhs = e.substitute(&images)?;
                if !(&lhs - &e).is_zero() && failing.is_none() {
                    failing = Some(v);
                }
            }
            relations.push(RelationStatus { name: format!("s{}(x)-s{}(t)", i, i), vanishes: failing.is_none(), failing_vertex: failing });
        }
        let t1 = GradedSeries::var(n, 0, p);
        let first_nonzero = (0..self.labels.len()).find(|&v| !(&xs[0].values[v] - &t1).is_zero());
        Ok(GlnReport {
            relations,
            non_relation: RelationStatus { name: "x1-t1".to_string(), vanishes: first_nonzero.is_none(), failing_vertex: first_nonzero },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationStatus {
    pub name: String,
    pub vanishes: bool,
    /// First vertex with a nonzero value.
    pub failing_vertex: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlnReport {
    pub relations: Vec<RelationStatus>,
    pub non_relation: RelationStatus,
}

impl GlnReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.vanishes) && !self.non_relation.vanishes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub degree: usize,
    pub image_rank: usize,
    pub subring_rank: usize,
    pub images_in_subring: bool,
    pub subring_in_images: bool,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.images_in_subring && self.subring_in_images
    }
}

/// A finite sum `Σ a ⊗ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorClass {
    pub terms: Vec<(GradedSeries, GradedSeries)>,
}

impl TensorClass {
    pub fn new(terms: Vec<(GradedSeries, GradedSeries)>) -> Self {
        TensorClass { terms }
    }

    pub fn left(a: GradedSeries) -> Self {
        let one = GradedSeries::one(a.nvars(), a.precision());
        TensorClass { terms: vec![(a, one)] }
    }

    pub fn right(b: GradedSeries) -> Self {
        let one = GradedSeries::one(b.nvars(), b.precision());
        TensorClass { terms: vec![(one, b)] }
    }

    pub fn add(&self, other: &Self) -> Self {
        TensorClass { terms: self.terms.iter().chain(&other.terms).cloned().collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TensorClass { terms: self.terms.iter().map(|(a, b)| (a.scale(c), b.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for (a, b) in &self.terms {
            for (c, d) in &other.terms {
                terms.push((a * c, b * d));
            }
        }
        TensorClass { terms }
    }
}

/// The flag moment graph: vertices `W`, edges `{w, w s_β}` labelled `wβ`.
pub fn flag_gkm(datum: &RootDatum, ctx: &FglContext) -> Result<GkmGraph, GkmError> {
    let weyl = datum.weyl();
    let labels: Vec<String> = weyl.iter().map(|w| word_label(&w.word)).collect();
    let mut edges = Vec::new();
    for (i, w) in weyl.iter().enumerate() {
        for beta in datum.positive_roots() {
            let ws = w.matrix.mul(&datum.reflection(beta));
            let j = datum.weyl_lookup(&ws).expect("closed group");
            if i < j {
                edges.push(GkmEdge { v: i, w: j, chi: w.act(&beta.vector) });
            }
        }
    }
    let g = GkmGraph::new(labels, 0, datum.rank(), edges, ctx)?;
    let mut g = g.with_vertex_action(weyl.iter().map(|w| w.matrix.clone()).collect())?;
    g.flag = Some(FlagData { datum: datum.clone() });
    Ok(g)
}

/// Generators of the degree-`d` invariants `S^W`: kernel rows of the
/// invariance equations whose pivot is a b-free monomial. Invariance is
/// tested under every simple reflection up to the context precision.
pub fn invariants_basis(datum: &RootDatum, ctx: &FglContext, d: usize, mode: CoeffMode) -> Result<Vec<GradedSeries>, GkmError> {
    let p = ctx.precision();
    if d > p {
        return Err(GkmError::DegreeExceedsPrecision { degree: d, precision: p });
    }
    let n = datum.rank();
    let ngens = match ctx.law() {
        crate::fgl::LawSpec::Universal { generators } => generators,
        _ => 0,
    };
    // b-free columns first. Ungraded laws use the filtration by t-degree.
    let graded = ctx.law().is_graded();
    let mut cols: Vec<Mono> = Vec::new();
    for tdeg in d..=p {
        let bs = if graded { b_monomials(ngens, tdeg - d) } else { alloc::vec![Mono::ONE] };
        for b in bs {
            for t in t_monomials(n, tdeg) {
                cols.push(t.mul(b));
            }
        }
    }
    cols.sort_by_key(|m| (!m.is_b_free(), *m));
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..datum.simple_roots().len() {
        let images = datum.weyl_images(&datum.simple_reflection(i), ctx);
        let mut by_mono: BTreeMap<Mono, Vec<Scalar>> = BTreeMap::new();
        for (k, m) in cols.iter().enumerate() {
            let f = GradedSeries::monomial(n, p, *m, Scalar::ONE);
            let diff = &f.substitute(&images)? - &f;
            for (dm, dc) in diff.terms() {
                by_mono.entry(*dm).or_insert_with(|| vec![Scalar::ZERO; cols.len()])[k] += dc;
            }
        }
        rows.extend(by_mono.into_values());
    }
    let basis = kernel(&rows, cols.len(), mode);
    let echelon = match mode {
        CoeffMode::Rational => rref(&basis).0,
        _ => basis,
    };
    let mut out = Vec::new();
    for v in echelon {
        let pivot = v.iter().position(|c| !c.is_zero()).expect("nonzero row");
        if !cols[pivot].is_b_free() {
            continue;
        }
        let terms = cols.iter().zip(v).map(|(m, c)| (*m, c));
        out.push(GradedSeries::from_terms(n, p, terms)?);
    }
    Ok(out)
}

/// `L[t_1..t_n] / (h_{N-n+i}(t_i, ..., t_n))_i`, with normal forms for the
/// lexicographic order `t_1 > ... > t_n`, in which the generators form a
/// Gröbner basis with leading terms `t_i^{N-n+i}`.
#[derive(Debug, Clone)]
pub struct ApproxFlagRing {
    big_n: usize,
    n: usize,
    precision: usize,
    generators: Vec<GradedSeries>,
}

impl ApproxFlagRing {
    pub fn new(big_n: usize, n: usize, precision: usize) -> Result<Self, GkmError> {
        if big_n <= n || n == 0 {
            return Err(GkmError::InvalidApproximation { big_n, n });
        }
        let mut generators = Vec::new();
        for i in 0..n {
            let vars: Vec<usize> = (i..n).collect();
            generators.push(complete_homogeneous(big_n - n + i + 1, n, &vars, precision)?);
        }
        Ok(ApproxFlagRing { big_n, n, precision, generators })
    }

    pub fn generators(&self) -> &[GradedSeries] {
        &self.generators
    }

    /// Exponent bound `N - n + i` on `t_i` (1-based `i`) in normal forms.
    pub fn bound(&self, i: usize) -> u32 {
        (self.big_n - self.n + i) as u32
    }

    pub fn reduce(&self, f: &GradedSeries) -> GradedSeries {
        assert_eq!(f.nvars(), self.n, "variable count");
        let mut terms: BTreeMap<(Vec<u32>, Mono), (Mono, Scalar)> = BTreeMap::new();
        let key = |m: &Mono| (m.t_exps(self.n), m.b_part());
        for (m, c) in f.terms() {
            terms.insert(key(m), (*m, c.clone()));
        }
        let mut out: Vec<(Mono, Scalar)> = Vec::new();
        // Reduce the lexicographically largest term first.
        while let Some((_, (m, c))) = terms.pop_last() {
            let hit = (0..self.n).find(|&i| m.t_exp(i) >= self.bound(i + 1));
            let Some(i) = hit else {
                out.push((m, c));
                continue;
            };
            let g = &self.generators[i];
            let mut lead_exps = vec![0u32; self.n];
            lead_exps[i] = self.bound(i + 1);
            let lead = Mono::from_t(&lead_exps).expect("degree in range");
            let factor = m.div(lead);
            for (gm, gc) in g.terms() {
                if *gm == lead {
                    continue;
                }
                let nm = gm.mul(factor);
                let delta = -(gc * &c);
                let k = key(&nm);
                match terms.get_mut(&k) {
                    Some(slot) => {
                        slot.1 += &delta;
                        if slot.1.is_zero() {
                            terms.remove(&k);
                        }
                    }
                    None => {
                        terms.insert(k, (nm, delta));
                    }
                }
            }
        }
        GradedSeries::from_terms(self.n, self.precision.max(f.precision()), out)
            .expect("terms in range")
            .truncate(f.precision())
    }

    /// Monomials of degree `d` in normal form.
    pub fn normal_monomials(&self, d: usize) -> Vec<Mono> {
        t_monomials(self.n, d)
            .into_iter()
            .filter(|m| (0..self.n).all(|i| m.t_exp(i) < self.bound(i + 1)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::LawSpec;
    use crate::roots::RootType;

    fn setup(t: &str, law: LawSpec, d: usize) -> (RootDatum, FglContext, GkmGraph) {
        let datum = RootDatum::build(&t.parse::<RootType>().unwrap()).unwrap();
        let ctx = FglContext::build(law, d).unwrap();
        let g = flag_gkm(&datum, &ctx).unwrap();
        (datum, ctx, g)
    }

    #[test]
    fn flag_graph_counts() {
        let (_, _, g) = setup("gl2", LawSpec::Additive, 3);
        assert_eq!((g.vertex_count(), g.edges().len()), (2, 1));
        assert_eq!(g.edges()[0].chi, [1, -1]);
        let (_, _, g) = setup("a2", LawSpec::Additive, 3);
        assert_eq!((g.vertex_count(), g.edges().len()), (6, 9));
        let (_, _, g) = setup("b2", LawSpec::Additive, 3);
        assert_eq!((g.vertex_count(), g.edges().len()), (8, 16));
    }

    #[test]
    fn membership_examples() {
        let (_, ctx, g) = setup("gl2", LawSpec::Universal { generators: 3 }, 4);
        let xa = ctx.character(&[1, -1]);
        let zero = GradedSeries::zero(2, 4);
        assert!(g.membership(&GkmClass::new(vec![xa, zero.clone()])).unwrap().ok);
        let t1 = GradedSeries::var(2, 0, 4);
        let m = g.membership(&GkmClass::new(vec![t1.clone(), zero])).unwrap();
        assert_eq!(m, Membership { ok: false, witness: Some((0, 1)) });
        assert!(g.membership(&g.constant_class(&t1)).unwrap().ok);
    }

    #[test]
    fn line_bundles_are_members() {
        for t in ["gl3", "a2", "b2"] {
            let (datum, _, g) = setup(t, LawSpec::Universal { generators: 3 }, 4);
            for k in 0..datum.rank() {
                let chi: Vec<i64> = (0..datum.rank()).map(|j| i64::from(j == k)).collect();
                let c = g.line_bundle_class(&chi).unwrap();
                assert!(g.membership(&c).unwrap().ok, "{} {}", t, k);
            }
        }
    }

    #[test]
    fn gln_relations_hold() {
        for t in ["gl2", "gl3"] {
            let (_, _, g) = setup(t, LawSpec::Universal { generators: 4 }, 5);
            let r = g.gln_relations().unwrap();
            assert!(r.passed(), "{:?}", r);
            assert_eq!(r.non_relation.failing_vertex, Some(1));
        }
    }

    #[test]
    fn subring_ranks_gl2() {
        let (_, _, g) = setup("gl2", LawSpec::Additive, 4);
        assert_eq!(g.subring_basis(0, CoeffMode::Integer).unwrap().len(), 1);
        assert_eq!(g.subring_basis(1, CoeffMode::Integer).unwrap().len(), 3);
        assert!(g.subring_basis(5, CoeffMode::Integer).is_err());
        for d in 0..=3 {
            let r = g.surjectivity_probe(d, CoeffMode::Integer).unwrap();
            assert!(r.passed(), "{:?}", r);
        }
    }

    #[test]
    fn tensor_model_examples() {
        let (_, ctx, g) = setup("gl2", LawSpec::Universal { generators: 3 }, 4);
        let xa = ctx.character(&[1, -1]);
        let c = g.tensor_to_gkm(&TensorClass::left(xa.clone())).unwrap();
        assert_eq!(c, g.line_bundle_class(&[1, -1]).unwrap());
        let diff = TensorClass::left(xa.clone()).add(&TensorClass::right(xa.clone()).scale(&Scalar::from(-1)));
        let c = g.tensor_to_gkm(&diff).unwrap();
        assert!(c.values[0].is_zero());
        assert_eq!(c.values[1], &ctx.character(&[-1, 1]) - &xa);
        assert!(g.membership(&c).unwrap().ok);
    }

    #[test]
    fn invariants_examples() {
        let gl3 = RootDatum::build(&RootType::Gl(3)).unwrap();
        let add = FglContext::build(LawSpec::Additive, 3).unwrap();
        let inv = invariants_basis(&gl3, &add, 1, CoeffMode::Integer).unwrap();
        let s1 = elementary_symmetric(1, 3, &[0, 1, 2], 3).unwrap();
        assert_eq!(inv, [s1]);
        assert_eq!(invariants_basis(&gl3, &add, 2, CoeffMode::Integer).unwrap().len(), 2);
        let uni = FglContext::build(LawSpec::Universal { generators: 2 }, 3).unwrap();
        let gl2 = RootDatum::build(&RootType::Gl(2)).unwrap();
        let inv = invariants_basis(&gl2, &uni, 1, CoeffMode::Integer).unwrap();
        assert_eq!(inv, [elementary_symmetric(1, 2, &[0, 1], 3).unwrap()]);
        let a1 = RootDatum::build(&RootType::A(1)).unwrap();
        assert!(invariants_basis(&a1, &add, 1, CoeffMode::Rational).unwrap().is_empty());

        // Ungraded: x·ι(x) and its square span the filtration piece of order 2.
        let mult = FglContext::build(LawSpec::Multiplicative { beta: 2 }, 5).unwrap();
        let inv = invariants_basis(&a1, &mult, 2, CoeffMode::Rational).unwrap();
        assert_eq!(inv.len(), 2);
        let s = a1.simple_reflection(0);
        for f in &inv {
            assert_eq!(&a1.weyl_act(&s, f, &mult).unwrap(), f);
        }
        assert_eq!(invariants_basis(&a1, &mult, 3, CoeffMode::Rational).unwrap().len(), 1);
    }

    #[test]
    fn approximation_ring() {
        let r = ApproxFlagRing::new(4, 1, 8).unwrap();
        assert!(r.reduce(&GradedSeries::var(1, 0, 8).pow(4)).is_zero());
        let r = ApproxFlagRing::new(3, 2, 8).unwrap();
        assert!(r.reduce(&GradedSeries::var(2, 1, 8).pow(3)).is_zero());
        for g in r.generators() {
            assert!(r.reduce(g).is_zero());
        }
        // Below degree N - n + 1 nothing reduces.
        let r = ApproxFlagRing::new(6, 3, 8).unwrap();
        for d in 0..4 {
            assert_eq!(r.normal_monomials(d).len(), t_monomials(3, d).len());
        }
        assert!(r.normal_monomials(4).len() < t_monomials(3, 4).len());
        assert!(ApproxFlagRing::new(2, 2, 5).is_err());
    }
}
