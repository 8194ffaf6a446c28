//! Plain integer-polynomial oracles for the additive law on `gl_n`, written
//! without the series or GKM machinery.
#![allow(dead_code)]

use std::collections::BTreeMap;

use eqcob_core::GradedSeries;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(pub BTreeMap<Vec<u32>, i64>);

impl Poly {
    pub fn constant(n: usize, c: i64) -> Poly {
        let mut p = Poly::default();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: i64) {
        let v = self.0.entry(e.clone()).or_insert(0);
        *v += c;
        if *v == 0 {
            self.0.remove(&e);
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.0 {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::default();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                out.add_term(a.iter().zip(b).map(|(p, q)| p + q).collect(), x * y);
            }
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(e, c)| (e.clone(), -c)).collect())
    }

    /// `t_a - t_b`.
    pub fn linear(n: usize, a: usize, b: usize) -> Poly {
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
    pub fn permute(&self, perm: &[usize]) -> Poly {
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

    /// Exact quotient by `t_a - t_b`; panics if there is a remainder.
    pub fn div_linear(&self, a: usize, b: usize) -> Poly {
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

    pub fn from_series(f: &GradedSeries) -> Poly {
        let mut p = Poly::default();
        for (m, c) in f.terms() {
            assert!(m.is_b_free(), "series has Lazard coefficients");
            p.add_term(m.t_exps(f.nvars()), c.as_i64().expect("integer coefficient"));
        }
        p
    }
}

pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&k| a[k]).collect()
}

pub fn transposition(n: usize, i: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(i, i + 1);
    p
}

/// The permutation of a vertex label such as `"s1s2"` (`"e"` is the identity).
pub fn perm_of_label(n: usize, label: &str) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    if label != "e" {
        for s in label.split('s').filter(|s| !s.is_empty()) {
            let i: usize = s.parse().expect("label index");
            p = compose(&p, &transposition(n, i - 1));
        }
    }
    p
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut perms = vec![(0..n).collect::<Vec<usize>>()];
    let mut k = 0;
    while k < perms.len() {
        for i in 0..n.saturating_sub(1) {
            let p = compose(&perms[k], &transposition(n, i));
            if !perms.contains(&p) {
                perms.push(p);
            }
        }
        k += 1;
    }
    perms
}

/// BGG divided difference `(f - s_i f) / (t_i - t_{i+1})`.
pub fn classical_dd(f: &Poly, i: usize, n: usize) -> Poly {
    f.sub(&f.permute(&transposition(n, i))).div_linear(i, i + 1)
}

/// Equivariant classes by localization: `[pt]_e = ∏_{i<j} (t_j - t_i)`,
/// `(∂c)_w = (c_w - c_{w s_i}) / w(t_{i+1} - t_i)`.
pub fn classical_bott_samelson(n: usize, word: &[usize]) -> BTreeMap<Vec<usize>, Poly> {
    let perms = permutations(n);
    let mut pt = Poly::constant(n, 1);
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
            next.insert(w.clone(), c[w].sub(&c[&ws]).div_linear(w[i + 1], w[i]));
        }
        c = next;
    }
    c
}
