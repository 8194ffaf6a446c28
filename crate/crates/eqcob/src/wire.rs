//! JSON wire formats for series, GKM graphs and classes, and root data.

use std::collections::BTreeMap;

use eqcob_core::mono::MAX_B_GENS;
use eqcob_core::{GkmClass, GkmGraph, GradedSeries, IntMatrix, Mono, RootDatum, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermWire {
    /// Exponents of `b_1, b_2, ...`, without trailing zeros.
    pub b: Vec<u32>,
    pub t: Vec<u32>,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesWire {
    pub nvars: usize,
    pub precision: usize,
    pub terms: Vec<TermWire>,
}

fn trimmed_b(m: Mono) -> Vec<u32> {
    let mut b = m.b_exps();
    while b.last() == Some(&0) {
        b.pop();
    }
    b
}

/// Degree-lexicographic on `t`, then lexicographic on `b`.
fn canonical_key(t: &[u32], b: &[u32]) -> (u32, Vec<u32>, Vec<u32>) {
    (t.iter().sum(), t.to_vec(), b.to_vec())
}

impl From<&GradedSeries> for SeriesWire {
    fn from(f: &GradedSeries) -> Self {
        let mut terms: Vec<TermWire> = f
            .terms()
            .map(|(m, c)| TermWire { b: trimmed_b(*m), t: m.t_exps(f.nvars()), c: c.to_string() })
            .collect();
        terms.sort_by_cached_key(|t| canonical_key(&t.t, &t.b));
        SeriesWire { nvars: f.nvars(), precision: f.precision(), terms }
    }
}

impl TryFrom<&SeriesWire> for GradedSeries {
    type Error = CliError;

    fn try_from(w: &SeriesWire) -> Result<Self, CliError> {
        let mut seen = std::collections::BTreeSet::new();
        let mut terms = Vec::with_capacity(w.terms.len());
        for term in &w.terms {
            if term.t.len() != w.nvars {
                return Err(CliError::Wire(format!("term has {} t-exponents for {} variables", term.t.len(), w.nvars)));
            }
            if term.b.len() > MAX_B_GENS {
                return Err(CliError::Wire(format!("term has {} b-exponents", term.b.len())));
            }
            let m = Mono::new(&term.b, &term.t).ok_or_else(|| CliError::Wire(format!("exponent out of range in {:?}", term)))?;
            if m.tdeg() > w.precision {
                return Err(CliError::Wire(format!("term {:?} exceeds precision {}", term.t, w.precision)));
            }
            if !seen.insert(m) {
                return Err(CliError::Wire(format!("repeated monomial {:?} {:?}", term.b, term.t)));
            }
            let c: Scalar = term.c.parse().map_err(|_| CliError::Wire(format!("bad coefficient {:?}", term.c)))?;
            if c.is_zero() {
                return Err(CliError::Wire("zero coefficient".to_string()));
            }
            terms.push((m, c));
        }
        Ok(GradedSeries::from_terms(w.nvars, w.precision, terms)?)
    }
}

pub fn series_to_json(f: &GradedSeries) -> String {
    serde_json::to_string(&SeriesWire::from(f)).expect("serializable")
}

pub fn series_from_json(s: &str) -> Result<GradedSeries, CliError> {
    let w: SeriesWire = serde_json::from_str(s)?;
    GradedSeries::try_from(&w)
}

/// A GKM class keyed by vertex label.
pub type ClassWire = BTreeMap<String, SeriesWire>;

pub fn class_to_wire(graph: &GkmGraph, c: &GkmClass) -> ClassWire {
    graph.labels().iter().cloned().zip(c.values.iter().map(SeriesWire::from)).collect()
}

pub fn class_from_wire(graph: &GkmGraph, w: &ClassWire) -> Result<GkmClass, CliError> {
    if w.len() != graph.vertex_count() {
        return Err(CliError::Wire(format!("{} values for {} vertices", w.len(), graph.vertex_count())));
    }
    let values = graph
        .labels()
        .iter()
        .map(|l| {
            let s = w.get(l).ok_or_else(|| CliError::Wire(format!("missing vertex {l}")))?;
            GradedSeries::try_from(s)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GkmClass::new(values))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeWire {
    pub v: usize,
    pub w: usize,
    pub chi: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphWire {
    pub vertices: Vec<String>,
    pub base: usize,
    pub rank: usize,
    pub edges: Vec<EdgeWire>,
}

impl From<&GkmGraph> for GraphWire {
    fn from(g: &GkmGraph) -> Self {
        GraphWire {
            vertices: g.labels().to_vec(),
            base: g.base(),
            rank: g.rank(),
            edges: g.edges().iter().map(|e| EdgeWire { v: e.v, w: e.w, chi: e.chi.clone() }).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatumWire {
    pub name: String,
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    pub adjoint: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<Vec<i64>>>,
}

impl RootDatumWire {
    pub fn new(d: &RootDatum, theta: Option<&IntMatrix>) -> Self {
        RootDatumWire {
            name: d.name().to_string(),
            rank: d.rank(),
            simple_roots: d.simple_root_matrix(),
            simple_coroots: d.simple_coroot_matrix(),
            adjoint: d.is_adjoint(),
            theta: theta.map(IntMatrix::to_rows),
        }
    }

    pub fn datum(&self) -> Result<RootDatum, CliError> {
        Ok(RootDatum::from_simple(
            &self.name,
            self.rank,
            self.simple_roots.clone(),
            self.simple_coroots.clone(),
            self.adjoint,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use eqcob_core::{FglContext, LawSpec};

    #[test]
    fn canonical_order_and_round_trip() {
        let ctx = FglContext::build(LawSpec::Universal { generators: 3 }, 4).unwrap();
        let f = ctx.sum_series();
        let text = series_to_json(f);
        let back = series_from_json(&text).unwrap();
        assert_eq!(&back, f);
        assert_eq!(series_to_json(&back), text);
        let w = SeriesWire::from(f);
        let keys: Vec<_> = w.terms.iter().map(|t| canonical_key(&t.t, &t.b)).collect();
        assert!(keys.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(w.terms[0].t, [0, 1]);
        assert_eq!(w.terms[1].t, [1, 0]);
    }

    #[test]
    fn rejects_malformed_terms() {
        let bad = [
            r#"{"nvars":1,"precision":2,"terms":[{"b":[],"t":[3],"c":"1"}]}"#,
            r#"{"nvars":1,"precision":2,"terms":[{"b":[],"t":[1,0],"c":"1"}]}"#,
            r#"{"nvars":1,"precision":2,"terms":[{"b":[],"t":[1],"c":"x"}]}"#,
            r#"{"nvars":1,"precision":2,"terms":[{"b":[],"t":[1],"c":"0"}]}"#,
            r#"{"nvars":1,"precision":2,"terms":[{"b":[],"t":[1],"c":"1"},{"b":[0],"t":[1],"c":"2"}]}"#,
        ];
        for s in bad {
            assert!(series_from_json(s).is_err(), "{s}");
        }
        let ok = series_from_json(r#"{"nvars":1,"precision":2,"terms":[{"b":[1],"t":[2],"c":"-3/4"}]}"#).unwrap();
        assert_eq!(ok.len(), 1);
    }
}
