//! Root data, positive roots and Weyl group enumeration.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::fgl::FglContext;
use crate::lattice::IntMatrix;
use crate::series::{GradedSeries, SeriesError};

/// Enumeration stops with an error beyond this many Weyl group elements.
pub const MAX_WEYL_ORDER: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("unsupported root datum type {0:?}")]
    UnsupportedType(String),
    #[error("expected rank {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("Weyl group is infinite or larger than {MAX_WEYL_ORDER}")]
    NotFinite,
    #[error("invalid root datum: {0}")]
    Invalid(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RootType {
    /// Adjoint `A_n`; the lattice basis is the simple roots.
    A(usize),
    /// `gl_n` on `Z^n` with roots `χ_i - χ_j`.
    Gl(usize),
    B2,
    G2,
    Product(Vec<RootType>),
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootType::A(n) => write!(f, "a{}", n),
            RootType::Gl(n) => write!(f, "gl{}", n),
            RootType::B2 => write!(f, "b2"),
            RootType::G2 => write!(f, "g2"),
            RootType::Product(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "x")?;
                    }
                    write!(f, "{}", p)?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for RootType {
    type Err = RootError;

    fn from_str(s: &str) -> Result<Self, RootError> {
        let s = s.trim().to_ascii_lowercase();
        if s.contains('x') {
            let parts = s.split('x').map(str::parse).collect::<Result<Vec<RootType>, _>>()?;
            return Ok(RootType::Product(parts));
        }
        let bad = || RootError::UnsupportedType(s.clone());
        let num = |rest: &str| rest.parse::<usize>().ok().filter(|&n| n >= 1);
        match s.as_str() {
            "b2" => Ok(RootType::B2),
            "g2" => Ok(RootType::G2),
            _ if s.starts_with("gl") => num(&s[2..]).map(RootType::Gl).ok_or_else(bad),
            _ if s.starts_with('a') => num(&s[1..]).map(RootType::A).ok_or_else(bad),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    /// Coordinates in the character lattice basis.
    pub vector: Vec<i64>,
    /// The coroot as a linear functional on the character lattice.
    pub coroot: Vec<i64>,
    /// Coordinates in the basis of simple roots.
    pub simple_coords: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.simple_coords.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    /// Column `i` is the image of the basis character `χ_i`.
    pub matrix: IntMatrix,
    /// A reduced word; entries are 0-based simple reflection indices.
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn act(&self, chi: &[i64]) -> Vec<i64> {
        self.matrix.apply(chi)
    }
}

#[derive(Debug, Clone)]
pub struct RootDatum {
    name: String,
    rank: usize,
    adjoint: bool,
    simple: Vec<Root>,
    positive: Vec<Root>,
    positive_index: BTreeMap<Vec<i64>, usize>,
    weyl: Vec<WeylElement>,
    weyl_index: BTreeMap<IntMatrix, usize>,
}

fn pairing(chi: &[i64], coroot: &[i64]) -> i64 {
    chi.iter().zip(coroot).map(|(a, b)| a * b).sum()
}

/// Matrix of `χ ↦ χ - ⟨χ, α^∨⟩ α`.
pub fn reflection_matrix(alpha: &[i64], coroot: &[i64]) -> IntMatrix {
    let n = alpha.len();
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, m.get(i, j) - alpha[i] * coroot[j]);
        }
    }
    m
}

fn cartan_of(t: &RootType) -> Option<Vec<Vec<i64>>> {
    match t {
        RootType::A(n) => {
            let n = *n;
            Some(
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| match (i as i64 - j as i64).abs() {
                                0 => 2,
                                1 => -1,
                                _ => 0,
                            })
                            .collect()
                    })
                    .collect(),
            )
        }
        RootType::B2 => Some(vec![vec![2, -2], vec![-1, 2]]),
        RootType::G2 => Some(vec![vec![2, -1], vec![-3, 2]]),
        _ => None,
    }
}

impl RootDatum {
    pub fn build(t: &RootType) -> Result<Self, RootError> {
        let (rank, simple, coroots, adjoint) = Self::simple_data(t)?;
        Self::from_simple(&t.to_string(), rank, simple, coroots, adjoint)
    }

    fn simple_data(t: &RootType) -> Result<(usize, Vec<Vec<i64>>, Vec<Vec<i64>>, bool), RootError> {
        if let Some(cartan) = cartan_of(t) {
            let n = cartan.len();
            let simple = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
            return Ok((n, simple, cartan, true));
        }
        match t {
            RootType::Gl(n) => {
                let n = *n;
                let roots: Vec<Vec<i64>> = (0..n.saturating_sub(1))
                    .map(|i| (0..n).map(|j| i64::from(j == i) - i64::from(j == i + 1)).collect())
                    .collect();
                Ok((n, roots.clone(), roots, false))
            }
            RootType::Product(parts) => {
                if parts.is_empty() {
                    return Err(RootError::UnsupportedType("empty product".to_string()));
                }
                let (mut rank, mut simple, mut coroots, mut adjoint) = (0, Vec::new(), Vec::new(), true);
                let mut blocks = Vec::new();
                for p in parts {
                    blocks.push(Self::simple_data(p)?);
                }
                let total: usize = blocks.iter().map(|b| b.0).sum();
                for (r, s, c, a) in blocks {
                    let pad = |v: &Vec<i64>| {
                        let mut out = vec![0; total];
                        out[rank..rank + r].copy_from_slice(v);
                        out
                    };
                    simple.extend(s.iter().map(pad));
                    coroots.extend(c.iter().map(pad));
                    adjoint &= a;
                    rank += r;
                }
                Ok((rank, simple, coroots, adjoint))
            }
            _ => unreachable!(),
        }
    }

    /// A datum from simple roots and coroots given in lattice coordinates.
    pub fn from_simple(
        name: &str,
        rank: usize,
        simple_roots: Vec<Vec<i64>>,
        simple_coroots: Vec<Vec<i64>>,
        adjoint: bool,
    ) -> Result<Self, RootError> {
        let r = simple_roots.len();
        if simple_coroots.len() != r {
            return Err(RootError::Invalid("roots and coroots differ in number".to_string()));
        }
        for v in simple_roots.iter().chain(&simple_coroots) {
            if v.len() != rank {
                return Err(RootError::RankMismatch { expected: rank, got: v.len() });
            }
        }
        for i in 0..r {
            if pairing(&simple_roots[i], &simple_coroots[i]) != 2 {
                return Err(RootError::Invalid(format!("simple root {} pairs to {} with its coroot", i + 1, pairing(&simple_roots[i], &simple_coroots[i]))));
            }
        }
        let simple: Vec<Root> = (0..r)
            .map(|i| Root {
                vector: simple_roots[i].clone(),
                coroot: simple_coroots[i].clone(),
                simple_coords: (0..r).map(|j| i64::from(i == j)).collect(),
            })
            .collect();

        let mut positive = simple.clone();
        let mut positive_index: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        for (i, s) in simple.iter().enumerate() {
            positive_index.insert(s.vector.clone(), i);
        }
        let mut queue: VecDeque<usize> = (0..r).collect();
        while let Some(k) = queue.pop_front() {
            for i in 0..r {
                let beta = positive[k].clone();
                let c = pairing(&beta.vector, &simple[i].coroot);
                if c >= 0 {
                    continue;
                }
                let vector: Vec<i64> = beta.vector.iter().zip(&simple[i].vector).map(|(b, a)| b - c * a).collect();
                if positive_index.contains_key(&vector) {
                    continue;
                }
                let d = pairing(&simple[i].vector, &beta.coroot);
                let coroot = beta.coroot.iter().zip(&simple[i].coroot).map(|(b, a)| b - d * a).collect();
                let mut simple_coords = beta.simple_coords.clone();
                simple_coords[i] -= c;
                if positive.len() >= MAX_WEYL_ORDER {
                    return Err(RootError::NotFinite);
                }
                positive_index.insert(vector.clone(), positive.len());
                positive.push(Root { vector, coroot, simple_coords });
                queue.push_back(positive.len() - 1);
            }
        }
        // Order by height, then by simple coordinates descending so that
        // simple roots keep their indices.
        let mut order: Vec<usize> = (0..positive.len()).collect();
        order.sort_by(|&a, &b| {
            positive[a]
                .height()
                .cmp(&positive[b].height())
                .then_with(|| positive[b].simple_coords.cmp(&positive[a].simple_coords))
        });
        let positive: Vec<Root> = order.into_iter().map(|i| positive[i].clone()).collect();
        let positive_index = positive.iter().enumerate().map(|(i, p)| (p.vector.clone(), i)).collect();

        let mut datum = RootDatum {
            name: name.to_string(),
            rank,
            adjoint,
            simple,
            positive,
            positive_index,
            weyl: Vec::new(),
            weyl_index: BTreeMap::new(),
        };
        datum.enumerate_weyl()?;
        Ok(datum)
    }

    fn enumerate_weyl(&mut self) -> Result<(), RootError> {
        let gens: Vec<IntMatrix> = (0..self.simple.len()).map(|i| self.simple_reflection(i)).collect();
        let id = WeylElement { matrix: IntMatrix::identity(self.rank), word: Vec::new() };
        self.weyl_index.insert(id.matrix.clone(), 0);
        self.weyl.push(id);
        let mut k = 0;
        while k < self.weyl.len() {
            for (i, g) in gens.iter().enumerate() {
                let m = self.weyl[k].matrix.mul(g);
                if self.weyl_index.contains_key(&m) {
                    continue;
                }
                if self.weyl.len() >= MAX_WEYL_ORDER {
                    return Err(RootError::NotFinite);
                }
                let mut word = self.weyl[k].word.clone();
                word.push(i);
                self.weyl_index.insert(m.clone(), self.weyl.len());
                self.weyl.push(WeylElement { matrix: m, word });
            }
            k += 1;
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Rank of the character lattice.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_adjoint(&self) -> bool {
        self.adjoint
    }

    pub fn simple_roots(&self) -> &[Root] {
        &self.simple
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// Index of `v` among the positive roots, with the sign `-1` when `-v` is positive.
    pub fn root_index(&self, v: &[i64]) -> Option<(usize, i64)> {
        if let Some(&i) = self.positive_index.get(v) {
            return Some((i, 1));
        }
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        self.positive_index.get(&neg).map(|&i| (i, -1))
    }

    pub fn is_positive_root(&self, v: &[i64]) -> bool {
        self.positive_index.contains_key(v)
    }

    pub fn pairing(&self, chi: &[i64], root: &Root) -> i64 {
        pairing(chi, &root.coroot)
    }

    pub fn simple_reflection(&self, i: usize) -> IntMatrix {
        reflection_matrix(&self.simple[i].vector, &self.simple[i].coroot)
    }

    pub fn reflection(&self, root: &Root) -> IntMatrix {
        reflection_matrix(&root.vector, &root.coroot)
    }

    pub fn weyl(&self) -> &[WeylElement] {
        &self.weyl
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    pub fn weyl_lookup(&self, m: &IntMatrix) -> Option<usize> {
        self.weyl_index.get(m).copied()
    }

    /// Index of `weyl[a] · weyl[b]`.
    pub fn weyl_mul(&self, a: usize, b: usize) -> usize {
        self.weyl_lookup(&self.weyl[a].matrix.mul(&self.weyl[b].matrix)).expect("closed group")
    }

    pub fn weyl_inverse(&self, a: usize) -> usize {
        let mut m = IntMatrix::identity(self.rank);
        for &i in self.weyl[a].word.iter().rev() {
            m = m.mul(&self.simple_reflection(i));
        }
        self.weyl_lookup(&m).expect("closed group")
    }

    /// `#{α > 0 : wα < 0}`.
    pub fn length(&self, w: &IntMatrix) -> usize {
        self.positive.iter().filter(|a| !self.is_positive_root(&w.apply(&a.vector))).count()
    }

    /// Longest element.
    pub fn longest(&self) -> usize {
        (0..self.weyl.len()).max_by_key(|&i| (self.weyl[i].length(), core::cmp::Reverse(i))).unwrap_or(0)
    }

    /// The images `x_{wχ_i}` of the variables under `w`.
    pub fn weyl_images(&self, w: &IntMatrix, ctx: &FglContext) -> Vec<GradedSeries> {
        (0..self.rank).map(|i| ctx.character(&w.column(i))).collect()
    }

    /// `w(f)`: substitutes `t_i ↦ x_{wχ_i}`.
    pub fn weyl_act(&self, w: &IntMatrix, f: &GradedSeries, ctx: &FglContext) -> Result<GradedSeries, RootError> {
        if f.nvars() != self.rank {
            return Err(RootError::RankMismatch { expected: self.rank, got: f.nvars() });
        }
        if self.rank == 0 {
            return Ok(f.clone());
        }
        Ok(f.substitute(&self.weyl_images(w, ctx))?)
    }

    pub fn simple_root_matrix(&self) -> Vec<Vec<i64>> {
        self.simple.iter().map(|r| r.vector.clone()).collect()
    }

    pub fn simple_coroot_matrix(&self) -> Vec<Vec<i64>> {
        self.simple.iter().map(|r| r.coroot.clone()).collect()
    }
}
