//! Wonderful compactifications of symmetric spaces of minimal rank: the
//! involution data, the moment graphs of `X` and of the toric subvariety `Y`,
//! and the invariant subrings of `S` that both describe.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::fgl::{FglContext, LawSpec};
use crate::gkm::{GkmClass, GkmEdge, GkmError, GkmGraph};
use crate::lattice::IntMatrix;
use crate::linalg::{rank, rational_kernel, CoeffMode, Span};
use crate::mono::Mono;
use crate::roots::{RootDatum, RootError};
use crate::scalar::Scalar;
use crate::series::{b_monomials, t_monomials, GradedSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymmetricError {
    #[error("involution is invalid: {0}")]
    InvolutionInvalid(String),
    #[error("symmetric space is not of minimal rank: {0}")]
    NotMinimalRank(String),
    #[error("weights must be pairwise distinct; weight {0:?} repeats")]
    RepeatedWeight(Vec<i64>),
    #[error("coefficient mode must be rational")]
    CoefficientModeNotRational,
    #[error("degree {degree} exceeds precision {precision}")]
    DegreeExceedsPrecision { degree: usize, precision: usize },
    #[error("Weyl group does not permute the weights")]
    WeightsNotPermuted,
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Gkm(#[from] GkmError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A restricted simple root `γ = α - θ(α)` with the representative
/// `s_α s_{θ(α)}` of its reflection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedRoot {
    pub simple_index: usize,
    pub gamma: Vec<i64>,
    pub representative: usize,
}

#[derive(Debug, Clone)]
pub struct SymmetricDatum {
    ambient: RootDatum,
    theta: IntMatrix,
    sigma_l: Vec<usize>,
    delta_l: Vec<usize>,
    w_l: Vec<usize>,
    w_theta: Vec<usize>,
    restricted: Vec<RestrictedRoot>,
    w_gk_order: usize,
    split_rank: usize,
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<Scalar>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(Scalar::from).collect()).collect()
}

/// Closure of a set of generators inside the Weyl group, as sorted indices.
fn generated_subgroup(datum: &RootDatum, gens: &[usize]) -> Vec<usize> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    seen.insert(0);
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = datum.weyl_mul(x, g);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

impl SymmetricDatum {
    /// `G = 𝐆 × 𝐆` with `θ` exchanging the factors. The positive system is
    /// `(α, 0)` and `(0, -α)` for `α > 0`, so that `θ` maps it to negative roots.
    pub fn group_case(factor: &RootDatum) -> Result<Self, SymmetricError> {
        let r = factor.rank();
        let pad = |v: &[i64], second: bool, sign: i64| {
            let mut out = vec![0; 2 * r];
            let off = if second { r } else { 0 };
            for (i, x) in v.iter().enumerate() {
                out[off + i] = sign * x;
            }
            out
        };
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        for s in factor.simple_roots() {
            roots.push(pad(&s.vector, false, 1));
            coroots.push(pad(&s.coroot, false, 1));
        }
        for s in factor.simple_roots() {
            roots.push(pad(&s.vector, true, -1));
            coroots.push(pad(&s.coroot, true, -1));
        }
        let name = format!("{}x{}", factor.name(), factor.name());
        let ambient = RootDatum::from_simple(&name, 2 * r, roots, coroots, factor.is_adjoint())?;
        let mut theta = IntMatrix::zeros(2 * r, 2 * r);
        for i in 0..r {
            theta.set(i, r + i, 1);
            theta.set(r + i, i, 1);
        }
        Self::custom(ambient, theta)
    }

    pub fn custom(ambient: RootDatum, theta: IntMatrix) -> Result<Self, SymmetricError> {
        let n = ambient.rank();
        if theta.n_rows() != n || theta.n_cols() != n {
            return Err(SymmetricError::InvolutionInvalid("matrix shape does not match the lattice".to_string()));
        }
        if !theta.mul(&theta).is_identity() {
            return Err(SymmetricError::InvolutionInvalid("θ² is not the identity".to_string()));
        }
        for a in ambient.positive_roots() {
            if ambient.root_index(&theta.apply(&a.vector)).is_none() {
                return Err(SymmetricError::InvolutionInvalid(format!("θ does not map the root {:?} to a root", a.vector)));
            }
        }
        if !ambient.is_adjoint() {
            return Err(SymmetricError::NotMinimalRank("the ambient datum must be adjoint".to_string()));
        }
        let mut plus = theta.clone();
        let mut minus = theta.clone();
        for i in 0..n {
            plus.set(i, i, plus.get(i, i) + 1);
            minus.set(i, i, minus.get(i, i) - 1);
        }
        // dim ker(θ + 1) is the rank of the split torus.
        let split_rank = n - rank(&to_rows(&plus));
        if split_rank == 0 {
            return Err(SymmetricError::NotMinimalRank("θ has no -1 eigenvectors".to_string()));
        }

        let sigma_l: Vec<usize> = ambient
            .positive_roots()
            .iter()
            .enumerate()
            .filter(|(_, a)| theta.apply(&a.vector) == a.vector)
            .map(|(i, _)| i)
            .collect();
        let delta_l: Vec<usize> = (0..ambient.simple_roots().len()).filter(|i| sigma_l.contains(i)).collect();
        for (i, a) in ambient.positive_roots().iter().enumerate() {
            if !sigma_l.contains(&i) && ambient.is_positive_root(&theta.apply(&a.vector)) {
                return Err(SymmetricError::NotMinimalRank(format!("θ keeps the root {:?} positive", a.vector)));
            }
        }

        let simple_reflections: Vec<usize> = (0..ambient.simple_roots().len())
            .map(|i| ambient.weyl_lookup(&ambient.simple_reflection(i)).expect("reflection in W"))
            .collect();
        let w_l = generated_subgroup(&ambient, &delta_l.iter().map(|&i| simple_reflections[i]).collect::<Vec<_>>());
        let w_theta: Vec<usize> = (0..ambient.weyl_order())
            .filter(|&i| {
                let w = &ambient.weyl()[i].matrix;
                w.mul(&theta) == theta.mul(w)
            })
            .collect();

        let mut restricted: Vec<RestrictedRoot> = Vec::new();
        for (i, a) in ambient.simple_roots().iter().enumerate() {
            if delta_l.contains(&i) {
                continue;
            }
            let ta = theta.apply(&a.vector);
            let gamma: Vec<i64> = a.vector.iter().zip(&ta).map(|(x, y)| x - y).collect();
            if restricted.iter().any(|r| r.gamma == gamma) {
                continue;
            }
            let (ti, _) = ambient.root_index(&ta).expect("θ preserves roots");
            let st = ambient.reflection(&ambient.positive_roots()[ti]);
            let rep = ambient.simple_reflection(i).mul(&st);
            let representative = ambient.weyl_lookup(&rep).expect("product of reflections in W");
            if !w_theta.contains(&representative) {
                return Err(SymmetricError::NotMinimalRank(format!("s_α s_θ(α) for α = {:?} does not commute with θ", a.vector)));
            }
            restricted.push(RestrictedRoot { simple_index: i, gamma, representative });
        }
        let gamma_rows: Vec<Vec<Scalar>> =
            restricted.iter().map(|r| r.gamma.iter().map(|&x| Scalar::from(x)).collect()).collect();
        if restricted.len() != split_rank || rank(&gamma_rows) != split_rank {
            return Err(SymmetricError::NotMinimalRank(format!(
                "{} restricted simple roots for a split rank of {}",
                restricted.len(),
                split_rank
            )));
        }

        // W_{G/K}: the action of the representatives on the image of χ ↦ χ - θχ.
        let restrict = |w: usize| ambient.weyl()[w].matrix.mul(&minus);
        let reps: Vec<usize> = restricted.iter().map(|r| r.representative).collect();
        let w_gk: BTreeSet<IntMatrix> = generated_subgroup(&ambient, &reps).into_iter().map(restrict).collect();
        let image_of_w_theta: BTreeSet<IntMatrix> = w_theta.iter().map(|&w| restrict(w)).collect();
        if image_of_w_theta.len() != w_gk.len() || w_theta.len() != w_l.len() * w_gk.len() {
            return Err(SymmetricError::NotMinimalRank(format!(
                "|W^θ| = {} does not factor as |W_L| = {} times |W_G/K| = {}",
                w_theta.len(),
                w_l.len(),
                w_gk.len()
            )));
        }
        Ok(SymmetricDatum {
            ambient,
            theta,
            sigma_l,
            delta_l,
            w_l,
            w_theta,
            restricted,
            w_gk_order: w_gk.len(),
            split_rank,
        })
    }

    pub fn ambient(&self) -> &RootDatum {
        &self.ambient
    }

    pub fn theta(&self) -> &IntMatrix {
        &self.theta
    }

    /// Positive roots fixed by θ, as indices into the positive roots.
    pub fn sigma_l(&self) -> &[usize] {
        &self.sigma_l
    }

    pub fn delta_l(&self) -> &[usize] {
        &self.delta_l
    }

    pub fn w_l(&self) -> &[usize] {
        &self.w_l
    }

    pub fn w_theta(&self) -> &[usize] {
        &self.w_theta
    }

    pub fn restricted_roots(&self) -> &[RestrictedRoot] {
        &self.restricted
    }

    pub fn w_gk_order(&self) -> usize {
        self.w_gk_order
    }

    pub fn split_rank(&self) -> usize {
        self.split_rank
    }

    /// Smallest Weyl index in the coset `w W_L`.
    pub fn coset_rep(&self, w: usize) -> usize {
        self.w_l.iter().map(|&u| self.ambient.weyl_mul(w, u)).min().expect("W_L contains the identity")
    }
}

fn weyl_label(datum: &RootDatum, w: usize) -> String {
    let word = &datum.weyl()[w].word;
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter().map(|i| format!("s{}", i + 1)).collect()
}

/// The condition `u(f) ≡ v(f) mod x_χ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub chi: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct WonderfulGraph {
    sd: SymmetricDatum,
    x: GkmGraph,
    y: GkmGraph,
    x_reps: Vec<usize>,
    y_reps: Vec<usize>,
    root_edge_count: usize,
    restricted_edge_count: usize,
}

impl WonderfulGraph {
    pub fn build(sd: &SymmetricDatum, ctx: &FglContext) -> Result<Self, SymmetricError> {
        let datum = &sd.ambient;
        let x_reps: Vec<usize> = (0..datum.weyl_order()).filter(|&w| sd.coset_rep(w) == w).collect();
        let x_index: BTreeMap<usize, usize> = x_reps.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let vertex = |w: usize| x_index[&sd.coset_rep(w)];
        let mut root_edges = Vec::new();
        let mut restricted_edges = Vec::new();
        for w in 0..datum.weyl_order() {
            let wm = &datum.weyl()[w].matrix;
            for (i, a) in datum.positive_roots().iter().enumerate() {
                if sd.sigma_l.contains(&i) {
                    continue;
                }
                let ws = datum.weyl_lookup(&wm.mul(&datum.reflection(a))).expect("closed group");
                root_edges.push(GkmEdge { v: vertex(w), w: vertex(ws), chi: wm.apply(&a.vector) });
            }
            for r in &sd.restricted {
                let ws = datum.weyl_mul(w, r.representative);
                restricted_edges.push(GkmEdge { v: vertex(w), w: vertex(ws), chi: wm.apply(&r.gamma) });
            }
        }
        let labels: Vec<String> = x_reps.iter().map(|&w| weyl_label(datum, w)).collect();
        let count = |edges: &[GkmEdge]| {
            let set: BTreeSet<(usize, usize, Vec<i64>)> = edges
                .iter()
                .map(|e| {
                    let neg: Vec<i64> = e.chi.iter().map(|c| -c).collect();
                    (e.v.min(e.w), e.v.max(e.w), e.chi.clone().max(neg))
                })
                .collect();
            set.len()
        };
        let root_edge_count = count(&root_edges);
        let restricted_edge_count = count(&restricted_edges);
        let mut all = root_edges;
        all.extend(restricted_edges);
        let base = x_index[&sd.coset_rep(0)];
        let x = GkmGraph::new(labels, base, datum.rank(), all, ctx)?
            .with_vertex_action(x_reps.iter().map(|&w| datum.weyl()[w].matrix.clone()).collect())?;

        let mut y_reps: Vec<usize> = sd.w_theta.iter().map(|&w| sd.coset_rep(w)).collect();
        y_reps.sort_unstable();
        y_reps.dedup();
        let y_index: BTreeMap<usize, usize> = y_reps.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let mut y_edges = Vec::new();
        for &u in &sd.w_theta {
            let um = &datum.weyl()[u].matrix;
            for r in &sd.restricted {
                let us = datum.weyl_mul(u, r.representative);
                y_edges.push(GkmEdge {
                    v: y_index[&sd.coset_rep(u)],
                    w: y_index[&sd.coset_rep(us)],
                    chi: um.apply(&r.gamma),
                });
            }
        }
        let y_labels = y_reps.iter().map(|&w| weyl_label(datum, w)).collect();
        let y = GkmGraph::new(y_labels, y_index[&sd.coset_rep(0)], datum.rank(), y_edges, ctx)?
            .with_vertex_action(y_reps.iter().map(|&w| datum.weyl()[w].matrix.clone()).collect())?;
        Ok(WonderfulGraph { sd: sd.clone(), x, y, x_reps, y_reps, root_edge_count, restricted_edge_count })
    }

    pub fn datum(&self) -> &SymmetricDatum {
        &self.sd
    }

    pub fn x_graph(&self) -> &GkmGraph {
        &self.x
    }

    pub fn y_graph(&self) -> &GkmGraph {
        &self.y
    }

    pub fn root_edge_count(&self) -> usize {
        self.root_edge_count
    }

    pub fn restricted_edge_count(&self) -> usize {
        self.restricted_edge_count
    }

    fn invariance(&self) -> Vec<IntMatrix> {
        self.sd.delta_l.iter().map(|&i| self.sd.ambient.simple_reflection(i)).collect()
    }

    fn graph_congruences(&self, g: &GkmGraph, reps: &[usize]) -> Vec<Congruence> {
        let weyl = self.sd.ambient.weyl();
        g.edges()
            .iter()
            .map(|e| Congruence {
                u: weyl[reps[e.v]].matrix.clone(),
                v: weyl[reps[e.w]].matrix.clone(),
                chi: e.chi.clone(),
            })
            .collect()
    }

    /// Congruences at `z` only: `f ≡ s_α s_θ(α) f mod x_γ`.
    pub fn restricted_congruences(&self) -> Vec<Congruence> {
        let weyl = self.sd.ambient.weyl();
        let n = self.sd.ambient.rank();
        self.sd
            .restricted
            .iter()
            .map(|r| Congruence { u: IntMatrix::identity(n), v: weyl[r.representative].matrix.clone(), chi: r.gamma.clone() })
            .collect()
    }

    /// Congruences at `z` along root curves: `f ≡ s_α f mod x_α`.
    pub fn root_congruences(&self) -> Vec<Congruence> {
        let datum = &self.sd.ambient;
        datum
            .positive_roots()
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.sd.sigma_l.contains(i))
            .map(|(_, a)| Congruence { u: IntMatrix::identity(datum.rank()), v: datum.reflection(a), chi: a.vector.clone() })
            .collect()
    }

    fn solve(&self, ctx: &FglContext, k: usize, congruences: &[Congruence], mode: CoeffMode) -> Result<InvariantSpace, SymmetricError> {
        if mode != CoeffMode::Rational {
            return Err(SymmetricError::CoefficientModeNotRational);
        }
        solve_invariants(ctx, self.sd.ambient.rank(), k, &self.invariance(), congruences)
    }

    /// `f ∈ S^{W_L}` of degree `k` with `f ≡ s_α s_θ(α) f mod x_γ` for every
    /// restricted simple root; root-curve congruences are not imposed.
    pub fn invariant_subring_x(&self, ctx: &FglContext, k: usize, mode: CoeffMode) -> Result<InvariantSpace, SymmetricError> {
        self.solve(ctx, k, &self.restricted_congruences(), mode)
    }

    /// Restrictions to `z` of `W`-invariant tuples on the whole graph of `X`,
    /// both edge species and all translates.
    pub fn invariant_subring_x_full(&self, ctx: &FglContext, k: usize, mode: CoeffMode) -> Result<InvariantSpace, SymmetricError> {
        self.solve(ctx, k, &self.graph_congruences(&self.x, &self.x_reps), mode)
    }

    /// The restricted-root conditions together with the root-curve ones at `z`.
    pub fn invariant_subring_x_with_roots(&self, ctx: &FglContext, k: usize, mode: CoeffMode) -> Result<InvariantSpace, SymmetricError> {
        let mut c = self.restricted_congruences();
        c.extend(self.root_congruences());
        self.solve(ctx, k, &c, mode)
    }

    /// Restrictions to `z` of `W_K`-invariant tuples on the graph of `Y`.
    pub fn invariant_subring_y(&self, ctx: &FglContext, k: usize, mode: CoeffMode) -> Result<InvariantSpace, SymmetricError> {
        self.solve(ctx, k, &self.graph_congruences(&self.y, &self.y_reps), mode)
    }
}

/// A subspace of the degree-`k` part of `S`, spanned by `basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSpace {
    pub degree: usize,
    pub columns: Vec<Mono>,
    pub span: Span,
    pub basis: Vec<GradedSeries>,
}

impl InvariantSpace {
    pub fn rank(&self) -> usize {
        self.span.rank()
    }

    pub fn same_as(&self, other: &InvariantSpace) -> bool {
        self.columns == other.columns && self.span.same_as(&other.span)
    }

    pub fn specialize_b_zero(&self) -> Vec<GradedSeries> {
        self.basis.iter().map(GradedSeries::specialize_b_zero).filter(|s| !s.is_zero()).collect()
    }
}

fn generator_count(ctx: &FglContext) -> usize {
    match ctx.law() {
        LawSpec::Universal { generators } => generators,
        _ => 0,
    }
}

/// Monomials `b^e t^m` of degree `k` (`|m| - wt(e) = k`) with `|m| ≤ precision`.
pub fn degree_columns(nvars: usize, ngens: usize, k: usize, precision: usize) -> Vec<Mono> {
    let mut cols = Vec::new();
    for tdeg in k..=precision {
        for b in b_monomials(ngens, tdeg - k) {
            for t in t_monomials(nvars, tdeg) {
                cols.push(t.mul(b));
            }
        }
    }
    cols.sort();
    cols
}

/// Degree-`k` elements `f` of `S` (for ungraded laws, elements of order at
/// least `k`) fixed by `invariance` and satisfying every
/// congruence `u(f) ≡ v(f) mod x_χ` up to the context precision, over `Q`.
pub fn solve_invariants(
    ctx: &FglContext,
    nvars: usize,
    k: usize,
    invariance: &[IntMatrix],
    congruences: &[Congruence],
) -> Result<InvariantSpace, SymmetricError> {
    let p = ctx.precision();
    if k > p {
        return Err(SymmetricError::DegreeExceedsPrecision { degree: k, precision: p });
    }
    let cols = if ctx.law().is_graded() {
        degree_columns(nvars, generator_count(ctx), k, p)
    } else {
        let mut c: Vec<Mono> = (k..=p).flat_map(|d| t_monomials(nvars, d)).collect();
        c.sort();
        c
    };
    let mut images: BTreeMap<IntMatrix, Vec<GradedSeries>> = BTreeMap::new();
    let mut image = |w: &IntMatrix, m: Mono| -> Result<GradedSeries, SeriesError> {
        let f = GradedSeries::monomial(nvars, p, m, Scalar::ONE);
        if w.is_identity() {
            return Ok(f);
        }
        let imgs = images
            .entry(w.clone())
            .or_insert_with(|| (0..nvars).map(|i| ctx.character(&w.column(i))).collect());
        f.substitute(imgs)
    };
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let push = |rows: &mut Vec<Vec<Scalar>>, per_col: Vec<GradedSeries>| {
        let mut by: BTreeMap<Mono, Vec<Scalar>> = BTreeMap::new();
        for (c, s) in per_col.iter().enumerate() {
            for (m, v) in s.terms() {
                by.entry(*m).or_insert_with(|| vec![Scalar::ZERO; cols.len()])[c] += v;
            }
        }
        rows.extend(by.into_values());
    };
    for w in invariance {
        let mut per_col = Vec::with_capacity(cols.len());
        for &m in &cols {
            per_col.push(image(w, m)?.checked_sub(&GradedSeries::monomial(nvars, p, m, Scalar::ONE))?);
        }
        push(&mut rows, per_col);
    }
    for c in congruences {
        let x = ctx.character(&c.chi);
        let mut per_col = Vec::with_capacity(cols.len());
        for &m in &cols {
            let diff = image(&c.u, m)?.checked_sub(&image(&c.v, m)?)?;
            per_col.push(diff.divide_with_remainder(&x)?.1);
        }
        push(&mut rows, per_col);
    }
    let kernel = rational_kernel(&rows, cols.len());
    let span = Span::new(&kernel, cols.len(), CoeffMode::Rational);
    let basis = span
        .basis()
        .iter()
        .map(|v| GradedSeries::from_terms(nvars, p, cols.iter().zip(v).map(|(m, c)| (*m, c.clone()))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InvariantSpace { degree: k, columns: cols, span, basis })
}

/// The moment graph of `P(⊕ k_{χ_i})`: fixed points are the weights, and
/// each pair of fixed points spans a curve with character `χ_i - χ_j`.
#[derive(Debug, Clone)]
pub struct ProjectiveModel {
    weights: Vec<Vec<i64>>,
    graph: GkmGraph,
}

impl ProjectiveModel {
    pub fn build(weights: &[Vec<i64>], ctx: &FglContext) -> Result<Self, SymmetricError> {
        let mut seen = BTreeSet::new();
        for w in weights {
            if !seen.insert(w.clone()) {
                return Err(SymmetricError::RepeatedWeight(w.clone()));
            }
        }
        let rank = weights.first().map_or(0, |w| w.len());
        let labels = weights
            .iter()
            .map(|w| format!("p({})", w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        let mut edges = Vec::new();
        for i in 0..weights.len() {
            for j in i + 1..weights.len() {
                let chi = weights[i].iter().zip(&weights[j]).map(|(a, b)| a - b).collect();
                edges.push(GkmEdge { v: i, w: j, chi });
            }
        }
        let graph = GkmGraph::new(labels, 0, rank, edges, ctx)?;
        Ok(ProjectiveModel { weights: weights.to_vec(), graph })
    }

    pub fn graph(&self) -> &GkmGraph {
        &self.graph
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    /// The class of `O(-1)`: `x_{χ_j}` at the fixed point `χ_j`.
    pub fn zeta(&self) -> GkmClass {
        let ctx = self.graph.ctx();
        GkmClass::new(self.weights.iter().map(|w| ctx.character(w)).collect())
    }

    /// `∏_i (ζ +_F x_{-χ_i})`, evaluated on the tuple.
    pub fn relation(&self) -> Result<GkmClass, SymmetricError> {
        let ctx = self.graph.ctx();
        let zeta = self.zeta();
        let p = ctx.precision();
        let rank = self.graph.rank();
        let mut values = Vec::new();
        for z in &zeta.values {
            let mut prod = GradedSeries::one(rank, p);
            for w in &self.weights {
                let neg: Vec<i64> = w.iter().map(|x| -x).collect();
                prod = prod.checked_mul(&ctx.sum(z, &ctx.character(&neg))?)?;
            }
            values.push(prod);
        }
        Ok(GkmClass::new(values))
    }

    /// For each Weyl element, the permutation it induces on the weights up
    /// to a common shift.
    pub fn weyl_permutations(&self, datum: &RootDatum) -> Result<Vec<Vec<usize>>, SymmetricError> {
        let index: BTreeMap<&Vec<i64>, usize> = self.weights.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut out = Vec::new();
        for w in datum.weyl() {
            let moved: Vec<Vec<i64>> = self.weights.iter().map(|x| w.act(x)).collect();
            let found = self.weights.iter().find_map(|target| {
                let shift: Vec<i64> = moved[0].iter().zip(target).map(|(a, b)| a - b).collect();
                moved
                    .iter()
                    .map(|m| {
                        let v: Vec<i64> = m.iter().zip(&shift).map(|(a, b)| a - b).collect();
                        index.get(&v).copied()
                    })
                    .collect::<Option<Vec<usize>>>()
            });
            out.push(found.ok_or(SymmetricError::WeightsNotPermuted)?);
        }
        Ok(out)
    }

    /// Restrictions to the fixed point `base` of `W`-invariant tuples, in degree `k`, over `Q`.
    pub fn invariant_subring(
        &self,
        datum: &RootDatum,
        base: usize,
        k: usize,
        mode: CoeffMode,
    ) -> Result<InvariantSpace, SymmetricError> {
        if mode != CoeffMode::Rational {
            return Err(SymmetricError::CoefficientModeNotRational);
        }
        let perms = self.weyl_permutations(datum)?;
        let weyl = datum.weyl();
        let mut rep: BTreeMap<usize, usize> = BTreeMap::new();
        let mut stabilizer = Vec::new();
        for (w, perm) in perms.iter().enumerate() {
            rep.entry(perm[base]).or_insert(w);
            if perm[base] == base && w != 0 {
                stabilizer.push(weyl[w].matrix.clone());
            }
        }
        let mut congruences = Vec::new();
        for e in self.graph.edges() {
            if let (Some(&u), Some(&v)) = (rep.get(&e.v), rep.get(&e.w)) {
                congruences.push(Congruence { u: weyl[u].matrix.clone(), v: weyl[v].matrix.clone(), chi: e.chi.clone() });
            }
        }
        solve_invariants(self.graph.ctx(), datum.rank(), k, &stabilizer, &congruences)
    }
}

/// Weights of `End(k²)` for `PSL₂ × PSL₂` acting by left and right
/// multiplication, in the basis `(α, 0), (0, α)`, shifted to be integral.
/// The first weight is the fixed point `z`.
pub fn psl2_endomorphism_weights() -> Vec<Vec<i64>> {
    vec![vec![1, 0], vec![1, 1], vec![0, 0], vec![0, 1]]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EsphDegree {
    pub degree: usize,
    pub rank_x: usize,
    pub rank_x_full: usize,
    pub rank_x_with_roots: usize,
    pub rank_y: usize,
    pub rank_projective: Option<usize>,
    /// X-side and Y-side spans coincide.
    pub equal: bool,
    /// Adding root-curve congruences changes nothing.
    pub root_congruences_automatic: bool,
    pub projective_agrees: Option<bool>,
}

impl EsphDegree {
    pub fn passed(&self) -> bool {
        self.equal && self.root_congruences_automatic && self.projective_agrees.unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EsphReport {
    pub degrees: Vec<EsphDegree>,
    pub projective_relation_vanishes: Option<bool>,
}

impl EsphReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(EsphDegree::passed) && self.projective_relation_vanishes.unwrap_or(true)
    }
}

/// Compares the X-side and Y-side subrings in every degree up to `d`, and
/// optionally the projective-space route with base fixed point `base`.
pub fn verify_esph(
    g: &WonderfulGraph,
    ctx: &FglContext,
    d: usize,
    mode: CoeffMode,
    projective: Option<(&ProjectiveModel, usize)>,
) -> Result<EsphReport, SymmetricError> {
    let mut degrees = Vec::new();
    for k in 0..=d {
        let x = g.invariant_subring_x(ctx, k, mode)?;
        let x_full = g.invariant_subring_x_full(ctx, k, mode)?;
        let x_roots = g.invariant_subring_x_with_roots(ctx, k, mode)?;
        let y = g.invariant_subring_y(ctx, k, mode)?;
        let proj = match projective {
            Some((pm, base)) => Some(pm.invariant_subring(g.datum().ambient(), base, k, mode)?),
            None => None,
        };
        degrees.push(EsphDegree {
            degree: k,
            rank_x: x.rank(),
            rank_x_full: x_full.rank(),
            rank_x_with_roots: x_roots.rank(),
            rank_y: y.rank(),
            rank_projective: proj.as_ref().map(InvariantSpace::rank),
            equal: x_full.same_as(&y) && x.same_as(&y),
            root_congruences_automatic: x.same_as(&x_roots) && x.same_as(&x_full),
            projective_agrees: proj.as_ref().map(|p| p.same_as(&x_full)),
        });
    }
    let projective_relation_vanishes = match projective {
        Some((pm, _)) => Some(pm.relation()?.is_zero()),
        None => None,
    };
    Ok(EsphReport { degrees, projective_relation_vanishes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::RootType;

    fn psl2() -> SymmetricDatum {
        SymmetricDatum::group_case(&RootDatum::build(&RootType::A(1)).unwrap()).unwrap()
    }

    #[test]
    fn group_case_data() {
        let sd = psl2();
        assert_eq!(sd.ambient().weyl_order(), 4);
        assert!(sd.sigma_l().is_empty());
        assert_eq!(sd.w_l(), [0]);
        assert_eq!(sd.w_gk_order(), 2);
        assert_eq!(sd.w_theta().len(), 2);
        assert_eq!(sd.restricted_roots().len(), 1);
        assert_eq!(sd.restricted_roots()[0].gamma, [1, -1]);
        let a2 = SymmetricDatum::group_case(&RootDatum::build(&RootType::A(2)).unwrap()).unwrap();
        assert_eq!(a2.w_gk_order(), 6);
        assert_eq!(a2.restricted_roots().len(), 2);
    }

    #[test]
    fn identity_involution_is_rejected() {
        let d = RootDatum::build(&RootType::A(1)).unwrap();
        assert!(matches!(
            SymmetricDatum::custom(d.clone(), IntMatrix::identity(1)),
            Err(SymmetricError::NotMinimalRank(_))
        ));
        let bad = IntMatrix::from_rows(&[vec![2]]);
        assert!(matches!(SymmetricDatum::custom(d, bad), Err(SymmetricError::InvolutionInvalid(_))));
    }

    #[test]
    fn wonderful_counts() {
        let ctx = FglContext::build(LawSpec::Additive, 3).unwrap();
        let g = WonderfulGraph::build(&psl2(), &ctx).unwrap();
        assert_eq!(g.x_graph().vertex_count(), 4);
        assert_eq!(g.x_graph().edges().len(), 6);
        assert_eq!((g.root_edge_count(), g.restricted_edge_count()), (4, 2));
        assert_eq!(g.y_graph().vertex_count(), 2);
        assert_eq!(g.y_graph().edges().len(), 1);
        assert_eq!(g.y_graph().edges()[0].chi, [1, -1]);
    }

    #[test]
    fn projective_model() {
        let ctx = FglContext::build(LawSpec::Universal { generators: 3 }, 3).unwrap();
        let pm = ProjectiveModel::build(&psl2_endomorphism_weights(), &ctx).unwrap();
        assert_eq!((pm.graph().vertex_count(), pm.graph().edges().len()), (4, 6));
        assert!(pm.relation().unwrap().is_zero());
        assert!(pm.graph().membership(&pm.zeta()).unwrap().ok);
        let p1 = ProjectiveModel::build(&[vec![1, 0], vec![0, 0]], &ctx).unwrap();
        assert_eq!(p1.graph().edges().len(), 1);
        assert!(matches!(
            ProjectiveModel::build(&[vec![1, 0], vec![1, 0]], &ctx),
            Err(SymmetricError::RepeatedWeight(_))
        ));
    }

    #[test]
    fn esph_additive() {
        let ctx = FglContext::build(LawSpec::Additive, 3).unwrap();
        let g = WonderfulGraph::build(&psl2(), &ctx).unwrap();
        let pm = ProjectiveModel::build(&psl2_endomorphism_weights(), &ctx).unwrap();
        let r = verify_esph(&g, &ctx, 3, CoeffMode::Rational, Some((&pm, 0))).unwrap();
        assert!(r.passed(), "{:?}", r);
        assert_eq!(r.degrees[0].rank_x, 1);
        assert!(matches!(g.invariant_subring_x(&ctx, 1, CoeffMode::Integer), Err(SymmetricError::CoefficientModeNotRational)));
    }

    #[test]
    fn esph_other_laws() {
        for law in [LawSpec::Multiplicative { beta: 1 }, LawSpec::Universal { generators: 3 }] {
            let ctx = FglContext::build(law, 3).unwrap();
            let g = WonderfulGraph::build(&psl2(), &ctx).unwrap();
            let pm = ProjectiveModel::build(&psl2_endomorphism_weights(), &ctx).unwrap();
            let r = verify_esph(&g, &ctx, 3, CoeffMode::Rational, Some((&pm, 0))).unwrap();
            assert!(r.passed(), "{:?}", r);
        }
    }

    #[test]
    fn additive_degree_one_is_the_restricted_root() {
        let ctx = FglContext::build(LawSpec::Additive, 3).unwrap();
        let g = WonderfulGraph::build(&psl2(), &ctx).unwrap();
        let x = g.invariant_subring_x(&ctx, 1, CoeffMode::Rational).unwrap();
        assert_eq!(x.basis.len(), 1);
        let t1 = GradedSeries::var(2, 0, 3);
        let t2 = GradedSeries::var(2, 1, 3);
        let expected = &t1 - &t2;
        let b = &x.basis[0];
        let c = b.coeff(Mono::var(0)).clone();
        assert_eq!(b.scale(&c.recip().unwrap()), expected);
    }
}
