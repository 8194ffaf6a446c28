//! Verification suites and computations behind the command-line interface.
//! Every report is a deterministic function of the configuration.

use eqcob_core::gkm::{invariants_basis, GkmGraph, TensorClass};
use eqcob_core::schubert::{bott_samelson, demazure, demazure_gkm, point_class, BsWord, DemazureOp};
use eqcob_core::series::elementary_symmetric;
use eqcob_core::symmetric::{psl2_endomorphism_weights, verify_esph, ProjectiveModel, SymmetricDatum, WonderfulGraph};
use eqcob_core::{flag_gkm, CoeffMode, FglContext, GradedSeries, RootDatum, RootType};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::random::{homogeneous, rng};
use crate::wire::{class_to_wire, ClassWire, GraphWire, RootDatumWire, SeriesWire};

/// Witnesses kept per report.
const MAX_WITNESSES: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub passed: bool,
    pub summary: String,
    pub details: Value,
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn fgl_check(ctx: &FglContext) -> Result<Report, CliError> {
    let report = ctx.check_axioms()?;
    let axioms: serde_json::Map<String, Value> = report.entries().iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let failed: Vec<&str> = report.entries().iter().filter(|(_, v)| !v).map(|(k, _)| *k).collect();
    Ok(Report {
        passed: report.all(),
        summary: format!("FGL axioms for {} at D = {}: {}", ctx.law(), ctx.precision(), verdict(report.all())),
        details: json!({ "axioms": axioms, "failed": failed }),
    })
}

fn sample_degree<R: Rng>(r: &mut R, ctx: &FglContext) -> usize {
    r.random_range(0..=ctx.precision().min(5))
}

fn sample_inputs(cfg: &RunConfig, ctx: &FglContext, nvars: usize, stream: u64, count: usize) -> Vec<GradedSeries> {
    let mut r = rng(cfg.seed, stream);
    (0..count)
        .map(|_| {
            let k = sample_degree(&mut r, ctx);
            let with_b = cfg.law.is_universal() && r.random_bool(0.5);
            homogeneous(&mut r, nvars, &cfg.law, k, ctx.precision(), with_b, 6)
        })
        .collect()
}

/// `x_α` divides `f - s_α f` for random homogeneous `f` and every positive root.
pub fn lemma_div(cfg: &RunConfig, ctx: &FglContext, datum: &RootDatum) -> Result<Report, CliError> {
    let ops: Vec<DemazureOp> = datum.positive_roots().iter().map(|r| DemazureOp::for_root(datum, ctx, r)).collect();
    let inputs = sample_inputs(cfg, ctx, datum.rank(), 1, cfg.samples);
    let failures: Vec<Value> = inputs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(s, f)| {
            ops.iter().filter_map(move |op| match op.divided_difference(f) {
                Ok(_) => None,
                Err(e) => Some(json!({ "sample": s, "root": op.root(), "error": e.to_string() })),
            })
        })
        .collect();
    let checks = inputs.len() * ops.len();
    Ok(Report {
        passed: failures.is_empty(),
        summary: format!("divisibility on {}: {checks} checks, {} failures", datum.name(), failures.len()),
        details: json!({
            "samples": inputs.len(),
            "roots": datum.positive_roots().iter().map(|r| r.vector.clone()).collect::<Vec<_>>(),
            "checks": checks,
            "failure_count": failures.len(),
            "failures": failures.into_iter().take(MAX_WITNESSES).collect::<Vec<_>>(),
        }),
    })
}

fn invariant_pool(datum: &RootDatum, ctx: &FglContext) -> Result<Vec<GradedSeries>, CliError> {
    let n = datum.rank();
    let p = ctx.precision();
    let all: Vec<usize> = (0..n).collect();
    let mut pool = Vec::new();
    match datum.name().parse::<RootType>() {
        Ok(RootType::Gl(_)) => {
            for e in 1..=n.min(p) {
                pool.push(elementary_symmetric(e, n, &all, p)?);
            }
        }
        _ => {
            for d in 1..=p.min(3) {
                pool.extend(invariants_basis(datum, ctx, d, CoeffMode::Rational)?);
            }
        }
    }
    Ok(pool)
}

/// Invariance, degree and normalization of `∂_α`, and linearity over invariants.
pub fn demazure_suite(cfg: &RunConfig, ctx: &FglContext, datum: &RootDatum) -> Result<Report, CliError> {
    let p = ctx.precision();
    let ops = (0..datum.simple_roots().len())
        .map(|i| DemazureOp::simple(datum, ctx, i))
        .collect::<Result<Vec<_>, _>>()?;
    let inputs = sample_inputs(cfg, ctx, datum.rank(), 2, cfg.samples);
    let graded = cfg.law.is_graded();
    let results: Vec<Result<Option<Value>, CliError>> = inputs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(s, f)| {
            ops.iter().enumerate().map(move |(i, op)| {
                let out = op.apply(f)?;
                let invariant = op.reflect(&out)? == out;
                let lowers = !graded || out.is_zero() || f.homogeneous_degree().is_none_or(|d| out.is_homogeneous(d - 1));
                Ok((!(invariant && lowers)).then(|| json!({ "sample": s, "simple": i + 1, "invariant": invariant, "lowers_degree": lowers })))
            })
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        if let Some(w) = r? {
            failures.push(w);
        }
    }

    let mut kappa_ok = Vec::new();
    for op in &ops {
        let one = GradedSeries::one(datum.rank(), p);
        kappa_ok.push(op.apply(&one)? == ctx.kappa_at(op.x_root())?.truncate(p - 1));
    }

    let pool = invariant_pool(datum, ctx)?;
    let pairs = (cfg.samples / 4).max(1);
    let mut r = rng(cfg.seed, 3);
    let linear_inputs: Vec<(usize, GradedSeries, usize)> = (0..pairs)
        .map(|_| {
            let i = r.random_range(0..ops.len());
            let k = sample_degree(&mut r, ctx);
            let with_b = cfg.law.is_universal() && r.random_bool(0.5);
            let f = homogeneous(&mut r, datum.rank(), &cfg.law, k, p, with_b, 4);
            (i, f, r.random_range(0..pool.len().max(1)))
        })
        .collect();
    let linear: Vec<bool> = linear_inputs
        .par_iter()
        .map(|(i, f, g)| match pool.get(*g) {
            Some(g) => ops[*i].sw_linearity_check(f, g).map_err(CliError::from),
            None => Ok(true),
        })
        .collect::<Result<_, _>>()?;
    let linear_failures: Vec<usize> = linear.iter().enumerate().filter(|(_, ok)| !**ok).map(|(s, _)| s).collect();
    let passed = failures.is_empty() && kappa_ok.iter().all(|&b| b) && linear_failures.is_empty() && !pool.is_empty();
    Ok(Report {
        passed,
        summary: format!(
            "Demazure operators on {}: {} applications, {} failures; ∂(1) = κ: {}; linearity over {} invariants: {} pairs, {} failures",
            datum.name(),
            inputs.len() * ops.len(),
            failures.len(),
            verdict(kappa_ok.iter().all(|&b| b)),
            pool.len(),
            linear.len(),
            linear_failures.len()
        ),
        details: json!({
            "applications": inputs.len() * ops.len(),
            "failure_count": failures.len(),
            "failures": failures.into_iter().take(MAX_WITNESSES).collect::<Vec<_>>(),
            "unit_is_kappa": kappa_ok,
            "invariants": pool.len(),
            "linearity_pairs": linear.len(),
            "linearity_failures": linear_failures,
        }),
    })
}

fn gl_rank(datum: &RootDatum) -> Result<usize, CliError> {
    match datum.name().parse::<RootType>() {
        Ok(RootType::Gl(n)) => Ok(n),
        _ => Err(CliError::Unsupported(format!("{} is not of type gl_n", datum.name()))),
    }
}

/// The defining relations vanish on the graph and the image of the
/// characteristic map fills the subring degree by degree.
pub fn gln_suite(cfg: &RunConfig, graph: &GkmGraph) -> Result<Report, CliError> {
    let datum = graph.datum().ok_or_else(|| CliError::Unsupported("not a flag graph".to_string()))?;
    let n = gl_rank(datum)?;
    let relations = graph.gln_relations()?;
    let max_degree = if n <= 2 { 3 } else { 2 }.min(graph.precision());
    let probes = (0..=max_degree)
        .into_par_iter()
        .map(|d| graph.surjectivity_probe(d, cfg.mode))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = relations.passed() && probes.iter().all(|p| p.passed());
    Ok(Report {
        passed,
        summary: format!(
            "gl_{n} relations: {}; surjectivity in degrees ≤ {max_degree} over {}: {}",
            verdict(relations.passed()),
            cfg.mode,
            verdict(probes.iter().all(|p| p.passed()))
        ),
        details: json!({
            "relations": relations.relations.iter().map(|r| json!({
                "name": r.name, "vanishes": r.vanishes, "failing_vertex": r.failing_vertex,
            })).collect::<Vec<_>>(),
            "control": { "name": relations.non_relation.name, "vanishes": relations.non_relation.vanishes },
            "probes": probes.iter().map(|p| json!({
                "degree": p.degree,
                "image_rank": p.image_rank,
                "subring_rank": p.subring_rank,
                "images_in_subring": p.images_in_subring,
                "subring_in_images": p.subring_in_images,
                "passed": p.passed(),
            })).collect::<Vec<_>>(),
        }),
    })
}

/// The map `S ⊗ S → GKM` is multiplicative, lands in the GKM ring, and
/// intertwines `∂_α ⊗ 1` with the equivariant operators.
pub fn tensor_iso_suite(cfg: &RunConfig, graph: &GkmGraph) -> Result<Report, CliError> {
    let datum = graph.datum().ok_or_else(|| CliError::Unsupported("not a flag graph".to_string()))?;
    let ctx = graph.ctx();
    let n = datum.rank();
    let p = ctx.precision();
    let count = (cfg.samples / 8).max(1);
    let mut r = rng(cfg.seed, 4);
    let inputs: Vec<(GradedSeries, GradedSeries, GradedSeries)> = (0..count)
        .map(|_| {
            let ka = r.random_range(0..=p.min(3));
            let a = homogeneous(&mut r, n, &cfg.law, ka, p, false, 4);
            let b = homogeneous(&mut r, n, &cfg.law, 1, p, false, 3);
            let with_b = cfg.law.is_universal();
            let c = homogeneous(&mut r, n, &cfg.law, 1, p, with_b, 3);
            (a, b, c)
        })
        .collect();
    let rows = inputs
        .par_iter()
        .enumerate()
        .map(|(s, (a, b, c))| -> Result<Value, CliError> {
            let x = TensorClass::new(vec![(a.clone(), b.clone())]);
            let y = TensorClass::left(c.clone()).add(&TensorClass::right(a.clone()));
            let px = graph.tensor_to_gkm(&x)?;
            let multiplicative = graph.tensor_to_gkm(&x.mul(&y))? == px.mul(&graph.tensor_to_gkm(&y)?);
            let member = graph.membership(&px)?.ok;
            let left = graph.tensor_to_gkm(&TensorClass::left(a.clone()))?;
            let mut intertwines = true;
            for i in 0..datum.simple_roots().len() {
                let lhs = demazure_gkm(&left, i, graph)?;
                let rhs = graph.tensor_to_gkm(&TensorClass::left(demazure(a, i, datum, ctx)?))?;
                intertwines &= lhs.agrees_with(&rhs);
            }
            Ok(json!({ "sample": s, "multiplicative": multiplicative, "in_gkm_ring": member, "intertwines": intertwines }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let bad: Vec<Value> = rows
        .into_iter()
        .filter(|v| !(v["multiplicative"] == true && v["in_gkm_ring"] == true && v["intertwines"] == true))
        .collect();
    Ok(Report {
        passed: bad.is_empty(),
        summary: format!("tensor map on {}: {count} samples, {} failures", datum.name(), bad.len()),
        details: json!({ "samples": count, "failure_count": bad.len(), "failures": bad.into_iter().take(MAX_WITNESSES).collect::<Vec<_>>() }),
    })
}

pub fn words(n_simple: usize, max_len: usize) -> Vec<BsWord> {
    let mut out = vec![BsWord(vec![])];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let next: Vec<Vec<usize>> = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..n_simple).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
        out.extend(next.iter().cloned().map(BsWord));
        layer = next;
    }
    out
}

/// Bott-Samelson classes for all words up to the length the precision
/// allows (at most 3) lie in the GKM ring; on `gl_2` the one-letter class is 1.
pub fn bott_samelson_suite(graph: &GkmGraph) -> Result<Report, CliError> {
    let datum = graph.datum().ok_or_else(|| CliError::Unsupported("not a flag graph".to_string()))?;
    let roots = datum.positive_roots().len();
    let p = graph.precision();
    if p < roots {
        return Err(CliError::Unsupported(format!("D = {p} is below the {roots} positive roots")));
    }
    let max_len = (p - roots).min(3);
    let rank_one = matches!(datum.name().parse::<RootType>(), Ok(RootType::Gl(2)));
    let pt = point_class(graph)?;
    let rows = words(datum.simple_roots().len(), max_len)
        .par_iter()
        .map(|w| -> Result<Value, CliError> {
            let c = bott_samelson(w, graph)?;
            let member = graph.membership(&c)?.ok;
            let mut row = json!({ "word": w.to_string(), "in_gkm_ring": member });
            if w.is_empty() {
                row["is_point_class"] = json!(c == pt);
            }
            if rank_one && w.len() == 1 {
                row["is_one"] = json!(c.values.iter().all(|v| *v == GradedSeries::one(datum.rank(), v.precision())));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let passed = rows.iter().all(|r| {
        r["in_gkm_ring"] == true && r.get("is_point_class").is_none_or(|v| *v == true) && r.get("is_one").is_none_or(|v| *v == true)
    });
    Ok(Report {
        passed,
        summary: format!("Bott-Samelson classes on {}: {} words up to length {max_len}: {}", datum.name(), rows.len(), verdict(passed)),
        details: json!({ "max_length": max_len, "words": rows }),
    })
}

/// `group:<type>` for the group case of an adjoint type; `psl2` and `psl3`
/// name `a1` and `a2`.
pub fn parse_case(case: &str) -> Result<RootType, CliError> {
    let tag = case
        .strip_prefix("group:")
        .ok_or_else(|| CliError::Config(format!("unknown case {case:?}; expected group:<type>")))?;
    let t = match tag.to_ascii_lowercase().as_str() {
        "psl2" => RootType::A(1),
        "psl3" => RootType::A(2),
        other => other.parse()?,
    };
    Ok(t)
}

pub fn esph_suite(case: &str, ctx: &FglContext) -> Result<Report, CliError> {
    let factor_type = parse_case(case)?;
    let factor = RootDatum::build(&factor_type)?;
    let sd = SymmetricDatum::group_case(&factor)?;
    let g = WonderfulGraph::build(&sd, ctx)?;
    let pm = match factor_type {
        RootType::A(1) => Some(ProjectiveModel::build(&psl2_endomorphism_weights(), ctx)?),
        _ => None,
    };
    let report = verify_esph(&g, ctx, ctx.precision(), CoeffMode::Rational, pm.as_ref().map(|p| (p, 0)))?;
    let degrees: Vec<Value> = report
        .degrees
        .iter()
        .map(|d| {
            json!({
                "degree": d.degree,
                "rank_x": d.rank_x,
                "rank_x_full": d.rank_x_full,
                "rank_x_with_root_congruences": d.rank_x_with_roots,
                "rank_y": d.rank_y,
                "rank_projective": d.rank_projective,
                "equal": d.equal,
                "root_congruences_automatic": d.root_congruences_automatic,
                "projective_agrees": d.projective_agrees,
                "passed": d.passed(),
            })
        })
        .collect();
    Ok(Report {
        passed: report.passed(),
        summary: format!(
            "symmetric variety {case} with {} over Q, degrees ≤ {}: {}",
            ctx.law(),
            ctx.precision(),
            verdict(report.passed())
        ),
        details: json!({
            "case": case,
            "datum": RootDatumWire::new(sd.ambient(), Some(sd.theta())),
            "restricted_roots": sd.restricted_roots().iter().map(|r| r.gamma.clone()).collect::<Vec<_>>(),
            "x_graph": { "vertices": g.x_graph().vertex_count(), "edges": g.x_graph().edges().len(),
                         "root_edges": g.root_edge_count(), "restricted_edges": g.restricted_edge_count() },
            "y_graph": { "vertices": g.y_graph().vertex_count(), "edges": g.y_graph().edges().len() },
            "degrees": degrees,
            "projective_relation_vanishes": report.projective_relation_vanishes,
        }),
    })
}

/// Structural checks on a flag graph: sizes, and membership of point,
/// line bundle and constant classes.
pub fn gkm_verify(graph: &GkmGraph) -> Result<Report, CliError> {
    let datum = graph.datum().ok_or_else(|| CliError::Unsupported("not a flag graph".to_string()))?;
    let expected_edges = datum.weyl_order() * datum.positive_roots().len() / 2;
    let mut checks = serde_json::Map::new();
    checks.insert("vertices".to_string(), json!(graph.vertex_count() == datum.weyl_order()));
    checks.insert("edges".to_string(), json!(graph.edges().len() == expected_edges));
    checks.insert("point_class".to_string(), json!(graph.membership(&point_class(graph)?)?.ok));
    let mut lines = true;
    for i in 0..datum.rank() {
        let mut chi = vec![0; datum.rank()];
        chi[i] = 1;
        lines &= graph.membership(&graph.line_bundle_class(&chi)?)?.ok;
    }
    checks.insert("line_bundles".to_string(), json!(lines));
    let unit = GradedSeries::one(datum.rank(), graph.precision());
    checks.insert("constants".to_string(), json!(graph.membership(&graph.constant_class(&unit))?.ok));
    let passed = checks.values().all(|v| *v == true);
    Ok(Report {
        passed,
        summary: format!(
            "flag graph of {}: {} vertices, {} edges: {}",
            datum.name(),
            graph.vertex_count(),
            graph.edges().len(),
            verdict(passed)
        ),
        details: json!({ "graph": GraphWire::from(graph), "checks": checks }),
    })
}

pub fn compute_bott_samelson(graph: &GkmGraph, word: &BsWord) -> Result<ClassWire, CliError> {
    Ok(class_to_wire(graph, &bott_samelson(word, graph)?))
}

pub fn compute_subring_basis(graph: &GkmGraph, d: usize, mode: CoeffMode) -> Result<Vec<ClassWire>, CliError> {
    Ok(graph.subring_basis(d, mode)?.iter().map(|c| class_to_wire(graph, c)).collect())
}

pub fn compute_invariants(datum: &RootDatum, ctx: &FglContext, d: usize, mode: CoeffMode) -> Result<Vec<SeriesWire>, CliError> {
    Ok(invariants_basis(datum, ctx, d, mode)?.iter().map(SeriesWire::from).collect())
}

pub fn flag_graph(datum: &RootDatum, ctx: &FglContext) -> Result<GkmGraph, CliError> {
    Ok(flag_gkm(datum, ctx)?)
}
