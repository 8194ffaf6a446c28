use std::collections::BTreeMap;

use eqcob_core::schubert::{bott_samelson, demazure, BsWord};
use eqcob_core::series::t_monomials;
use eqcob_core::{flag_gkm, FglContext, GradedSeries, LawSpec, Mono, RootDatum, RootType, Scalar};

fn universal(n: usize) -> LawSpec {
    LawSpec::Universal { generators: n }
}

fn shift_down(f: &GradedSeries) -> GradedSeries {
    let terms = f.terms().map(|(m, c)| {
        let e = m.t_exp(0);
        assert!(e >= 1, "term without a factor of t");
        (m.with_t(&[e - 1]).unwrap(), c.clone())
    });
    GradedSeries::from_terms(1, f.precision() - 1, terms).unwrap()
}

/// `1/u` for `u(0) = 1`, as the truncated geometric series.
fn geometric_inverse(u: &GradedSeries) -> GradedSeries {
    let one = GradedSeries::one(1, u.precision());
    let q = &one - u;
    let mut acc = one.clone();
    let mut pow = one;
    for _ in 0..u.precision() {
        pow = &pow * &q;
        acc = &acc + &pow;
    }
    acc
}

/// `B⁻¹` from Lagrange inversion: `[x^n] B⁻¹ = (1/n) [u^{n-1}] (B(u)/u)^{-n}`.
fn lagrange_logarithm(n_gens: usize, d: usize) -> GradedSeries {
    let h = GradedSeries::from_terms(
        1,
        d,
        std::iter::once((Mono::ONE, Scalar::ONE))
            .chain((1..=n_gens).map(|i| (Mono::generator(i).mul(Mono::from_t(&[i as u32]).unwrap()), Scalar::ONE))),
    )
    .unwrap();
    let inv = geometric_inverse(&h);
    let mut terms = Vec::new();
    for n in 1..=d {
        let p = inv.pow(n as u32);
        for (m, c) in p.terms() {
            if m.t_exp(0) as usize == n - 1 {
                terms.push((m.mul(Mono::var(0)), c * &Scalar::fraction(1, n as i64)));
            }
        }
    }
    GradedSeries::from_terms(1, d, terms).unwrap()
}

#[test]
fn lagrange_inverse_is_a_logarithm() {
    for (n, d) in [(2, 3), (4, 5)] {
        let ctx = FglContext::build(universal(n), d).unwrap();
        let log = lagrange_logarithm(n, d);
        let x = GradedSeries::var(2, 0, d);
        let y = GradedSeries::var(2, 1, d);
        let lhs = log.substitute(&[ctx.sum_series().clone()]).unwrap();
        let rhs = &log.substitute(&[x]).unwrap() + &log.substitute(&[y]).unwrap();
        assert_eq!(lhs, rhs, "universal({n}) at D = {d}");
    }
}

#[test]
fn kappa_matches_laurent_expansion() {
    for (law, d) in [(universal(4), 5), (universal(2), 3), (LawSpec::Multiplicative { beta: 3 }, 5), (LawSpec::Additive, 5)] {
        let ctx = FglContext::build(law.clone(), d).unwrap();
        // ι(x) = x·v(x) with v(0) = -1, so 1/x + 1/ι(x) = (1 + 1/v)/x.
        let v = shift_down(ctx.inverse_series());
        let w = geometric_inverse(&-&v).scale(&Scalar::from(-1));
        let numerator = &GradedSeries::one(1, w.precision()) + &w;
        let kappa = shift_down(&numerator);
        assert_eq!(ctx.kappa_series().truncate(kappa.precision()), kappa, "{law}");
    }
}

/// Polynomials in `t_1, ..., t_n` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct Poly(BTreeMap<Vec<u32>, i64>);

impl Poly {
    fn add_term(&mut self, e: Vec<u32>, c: i64) {
        let v = self.0.entry(e.clone()).or_insert(0);
        *v += c;
        if *v == 0 {
            self.0.remove(&e);
        }
    }

    fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.0 {
            out.add_term(e.clone(), -c);
        }
        out
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::default();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                out.add_term(a.iter().zip(b).map(|(p, q)| p + q).collect(), x * y);
            }
        }
        out
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(e, c)| (e.clone(), -c)).collect())
    }

    fn linear(n: usize, a: usize, b: usize) -> Poly {
        let mut p = Poly::default();
        let mut ea = vec![0; n];
        ea[a] = 1;
        let mut eb = vec![0; n];
        eb[b] = 1;
        p.add_term(ea, 1);
        p.add_term(eb, -1);
        p
    }

    /// `t_k ↦ t_{perm[k]}`.
    fn permute(&self, perm: &[usize]) -> Poly {
        let mut out = Poly::default();
        for (e, c) in &self.0 {
            let mut f = vec![0; e.len()];
            for (k, x) in e.iter().enumerate() {
                f[perm[k]] = *x;
            }
            out.add_term(f, *c);
        }
        out
    }

    /// Exact quotient by `t_a - t_b`, by long division in `t_a`.
    fn div_linear(&self, a: usize, b: usize) -> Poly {
        let mut rest = self.clone();
        let mut q = Poly::default();
        let n = self.0.keys().next().map_or(0, Vec::len);
        while let Some((e, c)) = rest.0.iter().max_by_key(|(e, _)| e[a]).map(|(e, c)| (e.clone(), *c)) {
            assert!(e[a] > 0, "not divisible by t_{a} - t_{b}");
            let mut qe = e.clone();
            qe[a] -= 1;
            let mut term = Poly::default();
            term.add_term(qe.clone(), c);
            q.add_term(qe, c);
            rest = rest.sub(&term.mul(&Poly::linear(n, a, b)));
        }
        q
    }

    fn from_series(f: &GradedSeries) -> Poly {
        let mut p = Poly::default();
        for (m, c) in f.terms() {
            assert!(m.is_b_free());
            p.add_term(m.t_exps(f.nvars()), c.as_i64().expect("integer coefficient"));
        }
        p
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&k| a[k]).collect()
}

fn transposition(n: usize, i: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(i, i + 1);
    p
}

fn perm_of_label(n: usize, label: &str) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    if label != "e" {
        for s in label.split('s').filter(|s| !s.is_empty()) {
            let i: usize = s.parse().unwrap();
            p = compose(&p, &transposition(n, i - 1));
        }
    }
    p
}

/// Classical divided difference `(f - s_i f)/(t_i - t_{i+1})`.
fn classical_dd(f: &Poly, i: usize, n: usize) -> Poly {
    f.sub(&f.permute(&transposition(n, i))).div_linear(i, i + 1)
}

#[test]
fn additive_demazure_is_minus_classical_divided_difference() {
    let n = 3;
    let d = 6;
    let datum = RootDatum::build(&RootType::Gl(n)).unwrap();
    let ctx = FglContext::build(LawSpec::Additive, d).unwrap();
    for deg in 0..=5 {
        for m in t_monomials(n, deg) {
            let f = GradedSeries::monomial(n, d, m, Scalar::ONE);
            for i in 0..n - 1 {
                let got = Poly::from_series(&demazure(&f, i, &datum, &ctx).unwrap());
                assert_eq!(got, classical_dd(&Poly::from_series(&f), i, n).neg(), "{m:?} i={i}");
            }
        }
    }
}

/// Equivariant Bott-Samelson classes from plain polynomial arithmetic:
/// `[pt]_e = ∏_{i<j} (t_j - t_i)` and
/// `(∂c)_w = (c_w - c_{w s_i}) / w(t_{i+1} - t_i)`.
fn classical_bott_samelson(n: usize, word: &[usize]) -> BTreeMap<Vec<usize>, Poly> {
    let mut perms = vec![(0..n).collect::<Vec<usize>>()];
    let mut k = 0;
    while k < perms.len() {
        for i in 0..n - 1 {
            let p = compose(&perms[k], &transposition(n, i));
            if !perms.contains(&p) {
                perms.push(p);
            }
        }
        k += 1;
    }
    let mut pt = Poly::default();
    pt.add_term(vec![0; n], 1);
    for i in 0..n {
        for j in i + 1..n {
            pt = pt.mul(&Poly::linear(n, j, i));
        }
    }
    let mut c: BTreeMap<Vec<usize>, Poly> = perms.iter().map(|p| (p.clone(), Poly::default())).collect();
    c.insert((0..n).collect(), pt);
    for &i in word {
        let mut next = BTreeMap::new();
        for w in &perms {
            let ws = compose(w, &transposition(n, i));
            let diff = c[w].sub(&c[&ws]);
            next.insert(w.clone(), diff.div_linear(w[i + 1], w[i]));
        }
        c = next;
    }
    c
}

fn words(n_simple: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..n_simple {
                let mut v: Vec<usize> = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[test]
fn bott_samelson_matches_classical_oracle_on_gl3() {
    let n = 3;
    let datum = RootDatum::build(&RootType::Gl(n)).unwrap();
    let ctx = FglContext::build(LawSpec::Additive, 6).unwrap();
    let graph = flag_gkm(&datum, &ctx).unwrap();
    for word in words(n - 1, 3) {
        let got = bott_samelson(&BsWord(word.clone()), &graph).unwrap();
        let expected = classical_bott_samelson(n, &word);
        for (v, label) in graph.labels().iter().enumerate() {
            let p = perm_of_label(n, label);
            assert_eq!(Poly::from_series(&got.values[v]), expected[&p], "word {word:?} vertex {label}");
        }
    }
}

#[test]
fn rank_one_bott_samelson_is_one_for_every_law() {
    let datum = RootDatum::build(&RootType::Gl(2)).unwrap();
    for law in [LawSpec::Additive, LawSpec::Multiplicative { beta: 1 }, LawSpec::Multiplicative { beta: -2 }, universal(4)] {
        let ctx = FglContext::build(law.clone(), 5).unwrap();
        let graph = flag_gkm(&datum, &ctx).unwrap();
        let bs = bott_samelson(&BsWord(vec![0]), &graph).unwrap();
        for v in &bs.values {
            assert_eq!(*v, GradedSeries::one(2, v.precision()), "{law}");
        }
        // κ(x)ι(x) - ι(x)/x = 1 in one variable.
        let x = GradedSeries::var(1, 0, 5);
        let iota = ctx.inverse_series().clone();
        let lhs = &(&ctx.kappa_series().clone() * &iota) - &iota.divide_exact(&x).unwrap();
        assert_eq!(lhs.truncate(4), GradedSeries::one(1, 4), "{law}");
    }
}
