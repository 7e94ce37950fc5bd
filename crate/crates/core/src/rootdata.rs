//! Root systems, weights and Weyl group combinatorics.
//!
//! Roots and weights are coordinate vectors in the label basis
//! `e1..em, d1..dn`, on which the invariant form is diagonal.

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Q;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

pub type Weight = Vec<Q>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Gl,
    Sl,
    Sp,
    GlSuper,
    Osp24,
    Osp32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisChoice {
    Distinguished,
    AntiDistinguished,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subgroup {
    Even,
    Nonisotropic,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    pub coeffs: Vec<i64>,
    pub parity: Parity,
    pub isotropic: bool,
}

impl Root {
    pub fn weight(&self) -> Weight {
        self.coeffs.iter().map(|&c| Q::int(c)).collect()
    }
}

/// A positive-root multiplicity map, indexed like `RootSystem::positive`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    pub mult: Vec<u32>,
}

impl Partition {
    pub fn empty(n: usize) -> Partition {
        Partition { mult: vec![0; n] }
    }

    pub fn degree(&self) -> u32 {
        self.mult.iter().sum()
    }

    /// Clifford degree: even roots count twice, odd roots once.
    pub fn clifford_degree(&self, rs: &RootSystem) -> u32 {
        self.mult
            .iter()
            .zip(&rs.positive)
            .map(|(&k, a)| k * if a.parity.is_odd() { 1 } else { 2 })
            .sum()
    }

    /// Number of odd roots counted with multiplicity.
    pub fn odd_count(&self, rs: &RootSystem) -> u32 {
        self.mult
            .iter()
            .zip(&rs.positive)
            .filter(|(_, a)| a.parity.is_odd())
            .map(|(&k, _)| k)
            .sum()
    }

    pub fn weight(&self, rs: &RootSystem) -> Vec<i64> {
        let mut w = vec![0; rs.rank()];
        for (k, a) in self.mult.iter().zip(&rs.positive) {
            for (x, c) in w.iter_mut().zip(&a.coeffs) {
                *x += *k as i64 * c;
            }
        }
        w
    }
}

/// `w = s_{letters[0]} s_{letters[1]} ... s_{letters[k-1]}`, letters being
/// positions in `RootSystem::simple`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylWord {
    pub letters: Vec<usize>,
    pub reduced: bool,
}

impl WeylWord {
    pub fn identity() -> WeylWord {
        WeylWord { letters: vec![], reduced: true }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct BorelChain {
    /// Label sequences, starting with the distinguished one.
    pub borels: Vec<Vec<usize>>,
    /// Indices into the positive roots of the starting Borel.
    pub odd_roots: Vec<usize>,
    /// Positions `i` (0-based) with `(γ, α_i) = 0`.
    pub f_set: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub family: Family,
    pub m: usize,
    pub n: usize,
    pub basis: BasisChoice,
    pub labels: Vec<String>,
    pub form: Vec<i64>,
    pub positive: Vec<Root>,
    /// Indices into `positive`.
    pub simple: Vec<usize>,
    /// Coefficients of each positive root in the simple roots.
    pub simple_coeffs: Vec<Vec<i64>>,
    pub rho0: Weight,
    pub rho1: Weight,
    pub rho: Weight,
    /// For gl(m|n): the label order defining the Borel.
    pub borel: Vec<usize>,
    index: HashMap<Vec<i64>, usize>,
}

fn label_vec(m: usize, n: usize, e: &str, d: &str) -> Vec<String> {
    (1..=m).map(|i| format!("{e}{i}")).chain((1..=n).map(|i| format!("{d}{i}"))).collect()
}

impl RootSystem {
    /// Builds one of the supported root systems.
    pub fn build(family: Family, m: usize, n: usize, basis: BasisChoice) -> Result<RootSystem> {
        match family {
            Family::Gl | Family::Sl => {
                if m < 1 || n != 0 {
                    return Err(Error::Config(format!("gl/sl needs m >= 1 and n = 0, got ({m}, {n})")));
                }
                Self::build_gl(family, m, 0, (0..m).collect(), basis)
            }
            Family::GlSuper => {
                if m < 1 || n < 1 {
                    return Err(Error::Config("gl(m|n) needs m, n >= 1".into()));
                }
                let seq = match basis {
                    BasisChoice::Distinguished => (0..m + n).collect(),
                    BasisChoice::AntiDistinguished => (m..m + n).chain(0..m).collect(),
                };
                Self::build_gl(family, m, n, seq, basis)
            }
            Family::Sp => {
                if m < 1 || n != 0 {
                    return Err(Error::Config("sp(2n) needs n >= 1".into()));
                }
                let k = m;
                let mut all = Vec::new();
                for i in 0..k {
                    all.push(unit_comb(k, &[(i, 2)]));
                    all.push(unit_comb(k, &[(i, -2)]));
                    for j in i + 1..k {
                        for (a, b) in [(1, -1), (1, 1), (-1, 1), (-1, -1)] {
                            all.push(unit_comb(k, &[(i, a), (j, b)]));
                        }
                    }
                }
                let mut simple: Vec<Vec<i64>> =
                    (0..k - 1).map(|i| unit_comb(k, &[(i, 1), (i + 1, -1)])).collect();
                simple.push(unit_comb(k, &[(k - 1, 2)]));
                let labels = label_vec(0, k, "e", "d");
                Self::assemble(family, m, 0, basis, labels, vec![-1; k], all, simple, vec![], true)
            }
            Family::Osp24 => {
                if basis == BasisChoice::AntiDistinguished {
                    return Err(Error::Config(
                        "osp(2,4) anti-distinguished basis is not supported".into(),
                    ));
                }
                // labels e1, d1, d2
                let mut all = Vec::new();
                for s in [1, -1] {
                    all.push(vec![0, 2 * s, 0]);
                    all.push(vec![0, 0, 2 * s]);
                    for t in [1, -1] {
                        all.push(vec![0, s, t]);
                        all.push(vec![s, t, 0]);
                        all.push(vec![s, 0, t]);
                    }
                }
                let simple = vec![vec![1, -1, 0], vec![0, 1, -1], vec![0, 0, 2]];
                let labels = vec!["e1".to_string(), "d1".into(), "d2".into()];
                Self::assemble(family, 1, 2, basis, labels, vec![1, -1, -1], all, simple, vec![], false)
            }
            Family::Osp32 => {
                let mut all = Vec::new();
                for s in [1, -1] {
                    all.push(vec![s, 0]);
                    all.push(vec![0, 2 * s]);
                    all.push(vec![0, s]);
                    for t in [1, -1] {
                        all.push(vec![s, t]);
                    }
                }
                let simple = match basis {
                    BasisChoice::Distinguished => vec![vec![-1, 1], vec![1, 0]],
                    BasisChoice::AntiDistinguished => vec![vec![1, -1], vec![0, 1]],
                };
                let labels = vec!["e1".to_string(), "d1".into()];
                Self::assemble(family, 1, 1, basis, labels, vec![1, -1], all, simple, vec![], false)
            }
        }
    }

    /// gl(m|n) with the Borel given by an arbitrary ordering of the labels.
    pub fn gl_super_with_borel(m: usize, n: usize, seq: Vec<usize>) -> Result<RootSystem> {
        let mut sorted = seq.clone();
        sorted.sort_unstable();
        if sorted != (0..m + n).collect::<Vec<_>>() {
            return Err(Error::Config("Borel sequence must be a permutation of the labels".into()));
        }
        for w in [(0..m).collect::<Vec<_>>(), (m..m + n).collect()] {
            let pos: Vec<usize> = w.iter().map(|l| seq.iter().position(|x| x == l).unwrap()).collect();
            if pos.windows(2).any(|p| p[0] > p[1]) {
                return Err(Error::Config("Borel sequence must keep the even part fixed".into()));
            }
        }
        Self::build_gl(Family::GlSuper, m, n, seq, BasisChoice::Distinguished)
    }

    fn build_gl(family: Family, m: usize, n: usize, seq: Vec<usize>, basis: BasisChoice) -> Result<RootSystem> {
        let k = m + n;
        let mut all = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    all.push(unit_comb(k, &[(i, 1), (j, -1)]));
                }
            }
        }
        let simple: Vec<Vec<i64>> =
            seq.windows(2).map(|w| unit_comb(k, &[(w[0], 1), (w[1], -1)])).collect();
        let labels = label_vec(m, n, "e", "d");
        let form = (0..k).map(|i| if i < m { 1 } else { -1 }).collect();
        Self::assemble(family, m, n, basis, labels, form, all, simple, seq, false)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        family: Family,
        m: usize,
        n: usize,
        basis: BasisChoice,
        labels: Vec<String>,
        form: Vec<i64>,
        all: Vec<Vec<i64>>,
        simple: Vec<Vec<i64>>,
        borel: Vec<usize>,
        all_even: bool,
    ) -> Result<RootSystem> {
        let dim = labels.len();
        let delta_labels: Vec<bool> = labels.iter().map(|l| l.starts_with('d')).collect();
        let make_root = |c: &Vec<i64>| {
            let odd = !all_even && c.iter().zip(&delta_labels).filter(|(_, d)| **d).map(|(x, _)| *x).sum::<i64>() % 2 != 0;
            let norm: i64 = c.iter().zip(&form).map(|(x, f)| x * x * f).sum();
            Root {
                coeffs: c.clone(),
                parity: if odd { Parity::Odd } else { Parity::Even },
                isotropic: norm == 0,
            }
        };
        // Coefficients in the simple roots by exact solve.
        let mat: Vec<Vec<Q>> = (0..dim)
            .map(|r| simple.iter().map(|s| Q::int(s[r])).collect())
            .collect();
        let mut positive = Vec::new();
        let mut simple_coeffs = Vec::new();
        for c in &all {
            let rhs: Vec<Q> = c.iter().map(|&x| Q::int(x)).collect();
            let sol = linalg::solve(&mat, &rhs)
                .ok_or_else(|| Error::Config("root outside the span of the simple roots".into()))?;
            if sol.iter().all(|x| !x.is_negative()) {
                let ints: Vec<i64> = sol
                    .iter()
                    .map(|x| x.to_i64().expect("integral simple coefficients"))
                    .collect();
                positive.push(make_root(c));
                simple_coeffs.push(ints);
            } else if !sol.iter().all(|x| !x.is_positive()) {
                return Err(Error::Config("simple roots do not form a base".into()));
            }
        }
        // Deterministic enumeration order: height, then coefficients descending.
        let mut idx: Vec<usize> = (0..positive.len()).collect();
        idx.sort_by(|&a, &b| {
            let ha: i64 = simple_coeffs[a].iter().sum();
            let hb: i64 = simple_coeffs[b].iter().sum();
            ha.cmp(&hb).then(simple_coeffs[b].cmp(&simple_coeffs[a]))
        });
        let positive: Vec<Root> = idx.iter().map(|&i| positive[i].clone()).collect();
        let simple_coeffs: Vec<Vec<i64>> = idx.iter().map(|&i| simple_coeffs[i].clone()).collect();
        let index: HashMap<Vec<i64>, usize> =
            positive.iter().enumerate().map(|(i, r)| (r.coeffs.clone(), i)).collect();
        let simple_idx: Vec<usize> = simple.iter().map(|s| index[s]).collect();
        let half = Q::new(1, 2);
        let mut rho0 = vec![Q::zero(); dim];
        let mut rho1 = vec![Q::zero(); dim];
        for r in &positive {
            let tgt = if r.parity.is_odd() { &mut rho1 } else { &mut rho0 };
            for (x, c) in tgt.iter_mut().zip(&r.coeffs) {
                *x += &(&half * &Q::int(*c));
            }
        }
        let rho = rho0.iter().zip(&rho1).map(|(a, b)| a - b).collect();
        Ok(RootSystem {
            family,
            m,
            n,
            basis,
            labels,
            form,
            positive,
            simple: simple_idx,
            simple_coeffs,
            rho0,
            rho1,
            rho,
            borel,
            index,
        })
    }

    /// Parses names such as `gl(2|1)`, `sl(3)`, `sp(6)`, `osp(2,4)`.
    pub fn from_name(name: &str, basis: BasisChoice) -> Result<RootSystem> {
        let s: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Config(format!("unsupported algebra `{name}`"));
        let inner = |p: &str| -> Option<String> {
            s.strip_prefix(p)?.strip_prefix('(')?.strip_suffix(')').map(str::to_string)
        };
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        if let Some(a) = inner("gl") {
            if let Some((x, y)) = a.split_once('|') {
                return Self::build(Family::GlSuper, num(x)?, num(y)?, basis);
            }
            return Self::build(Family::Gl, num(&a)?, 0, basis);
        }
        if let Some(a) = inner("sl") {
            return Self::build(Family::Sl, num(&a)?, 0, basis);
        }
        if let Some(a) = inner("sp") {
            let k = num(&a)?;
            if k % 2 != 0 || k == 0 {
                return Err(bad());
            }
            return Self::build(Family::Sp, k / 2, 0, basis);
        }
        if let Some(a) = inner("osp") {
            return match a.as_str() {
                "2,4" => Self::build(Family::Osp24, 1, 2, basis),
                "3,2" => Self::build(Family::Osp32, 1, 1, basis),
                _ => Err(bad()),
            };
        }
        Err(bad())
    }

    pub fn name(&self) -> String {
        match self.family {
            Family::Gl => format!("gl({})", self.m),
            Family::Sl => format!("sl({})", self.m),
            Family::Sp => format!("sp({})", 2 * self.m),
            Family::GlSuper => format!("gl({}|{})", self.m, self.n),
            Family::Osp24 => "osp(2,4)".into(),
            Family::Osp32 => "osp(3,2)".into(),
        }
    }

    /// Number of coordinates of a weight.
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn root_index(&self, coeffs: &[i64]) -> Option<usize> {
        self.index.get(coeffs).copied()
    }

    pub fn height(&self, i: usize) -> i64 {
        self.simple_coeffs[i].iter().sum()
    }

    pub fn simple_position(&self, root: usize) -> Option<usize> {
        self.simple.iter().position(|&s| s == root)
    }

    pub fn pair(&self, a: &[Q], b: &[Q]) -> Q {
        let mut acc = Q::zero();
        for ((x, y), f) in a.iter().zip(b).zip(&self.form) {
            if !x.is_zero() && !y.is_zero() {
                acc += &(&(x * y) * &Q::int(*f));
            }
        }
        acc
    }

    pub fn pair_int(&self, a: &[i64], b: &[i64]) -> i64 {
        a.iter().zip(b).zip(&self.form).map(|((x, y), f)| x * y * f).sum()
    }

    pub fn pair_root(&self, lam: &[Q], alpha: &Root) -> Q {
        self.pair(lam, &alpha.weight())
    }

    /// `(λ, α^∨)`; errors on isotropic `α`.
    pub fn copair(&self, lam: &[Q], alpha: &Root) -> Result<Q> {
        if alpha.isotropic {
            return Err(Error::Domain("coroot of an isotropic root".into()));
        }
        let aa = self.pair_int(&alpha.coeffs, &alpha.coeffs);
        Ok(&(&Q::int(2) * &self.pair_root(lam, alpha)) / &Q::int(aa))
    }

    /// Linear coefficients `c` with `(λ, α^∨) = Σ c_k λ_k`.
    pub fn coroot_functional(&self, alpha: &Root) -> Result<Vec<Q>> {
        let basis: Vec<Weight> = (0..self.rank()).map(|k| unit_weight(self.rank(), k)).collect();
        basis.iter().map(|e| self.copair(e, alpha)).collect()
    }

    /// Linear coefficients `c` with `(λ, α) = Σ c_k λ_k`.
    pub fn root_functional(&self, alpha: &[i64]) -> Vec<Q> {
        alpha.iter().zip(&self.form).map(|(a, f)| Q::int(a * f)).collect()
    }

    pub fn reflect(&self, alpha: &Root, mu: &[Q]) -> Result<Weight> {
        let c = self.copair(mu, alpha)?;
        Ok(mu.iter().zip(&alpha.coeffs).map(|(x, a)| x - &(&c * &Q::int(*a))).collect())
    }

    pub fn reflect_root(&self, alpha: &Root, gamma: &[i64]) -> Vec<i64> {
        let aa = self.pair_int(&alpha.coeffs, &alpha.coeffs);
        let c = 2 * self.pair_int(gamma, &alpha.coeffs);
        assert!(aa != 0 && c % aa == 0, "reflection of a root must be integral");
        let c = c / aa;
        gamma.iter().zip(&alpha.coeffs).map(|(g, a)| g - c * a).collect()
    }

    /// `s_α·λ = s_α(λ+ρ) - ρ`.
    pub fn dot_reflect(&self, alpha: &Root, lam: &[Q]) -> Result<Weight> {
        let shifted = add(lam, &self.rho);
        Ok(sub(&self.reflect(alpha, &shifted)?, &self.rho))
    }

    /// `w(μ)` for a word acting on the left.
    pub fn apply_word(&self, w: &WeylWord, mu: &[Q]) -> Result<Weight> {
        let mut v = mu.to_vec();
        for &l in w.letters.iter().rev() {
            v = self.reflect(&self.positive[self.simple[l]], &v)?;
        }
        Ok(v)
    }

    pub fn dot_word(&self, w: &WeylWord, lam: &[Q]) -> Result<Weight> {
        Ok(sub(&self.apply_word(w, &add(lam, &self.rho))?, &self.rho))
    }

    pub fn apply_word_root(&self, w: &WeylWord, gamma: &[i64]) -> Vec<i64> {
        let mut v = gamma.to_vec();
        for &l in w.letters.iter().rev() {
            v = self.reflect_root(&self.positive[self.simple[l]], &v);
        }
        v
    }

    pub fn apply_inverse_root(&self, w: &WeylWord, gamma: &[i64]) -> Vec<i64> {
        let mut v = gamma.to_vec();
        for &l in &w.letters {
            v = self.reflect_root(&self.positive[self.simple[l]], &v);
        }
        v
    }

    /// Even positive root whose half is not a root.
    pub fn in_bar0(&self, i: usize) -> bool {
        let r = &self.positive[i];
        if r.parity.is_odd() {
            return false;
        }
        if r.coeffs.iter().any(|c| c % 2 != 0) {
            return true;
        }
        let half: Vec<i64> = r.coeffs.iter().map(|c| c / 2).collect();
        self.root_index(&half).is_none()
    }

    /// Odd positive root whose double is not a root.
    pub fn in_bar1(&self, i: usize) -> bool {
        let r = &self.positive[i];
        if !r.parity.is_odd() {
            return false;
        }
        let dbl: Vec<i64> = r.coeffs.iter().map(|c| 2 * c).collect();
        self.root_index(&dbl).is_none()
    }

    /// Whether the positive root may occur in a partition.
    pub fn is_generator(&self, i: usize) -> bool {
        let r = &self.positive[i];
        if r.parity.is_odd() || r.coeffs.iter().any(|c| c % 2 != 0) {
            return true;
        }
        let half: Vec<i64> = r.coeffs.iter().map(|c| c / 2).collect();
        self.root_index(&half).is_none()
    }

    fn is_positive_root_vec(&self, v: &[i64]) -> Option<usize> {
        self.root_index(v)
    }

    /// `N(w⁻¹) = {α ∈ Δ⁺₀ : w⁻¹α < 0}`, computed directly.
    pub fn n_set(&self, w: &WeylWord) -> Vec<usize> {
        (0..self.positive.len())
            .filter(|&i| !self.positive[i].parity.is_odd())
            .filter(|&i| {
                let img = self.apply_inverse_root(w, &self.positive[i].coeffs);
                self.is_positive_root_vec(&img).is_none()
            })
            .collect()
    }

    /// `q(w, α) = (wβ, α^∨)` for `α ∈ N(w⁻¹)`.
    pub fn q_factor(&self, w: &WeylWord, beta: usize, alpha: usize) -> Result<i64> {
        if !self.n_set(w).contains(&alpha) {
            return Err(Error::Domain("root is not in N(w^-1)".into()));
        }
        let gamma = self.apply_word_root(w, &self.positive[beta].coeffs);
        let g: Weight = gamma.iter().map(|&c| Q::int(c)).collect();
        let q = self.copair(&g, &self.positive[alpha])?;
        q.to_i64().ok_or_else(|| Error::Internal("non-integral q(w, α)".into()))
    }

    fn allowed_letters(&self, sub: Subgroup) -> Vec<usize> {
        (0..self.simple.len())
            .filter(|&l| {
                let r = &self.positive[self.simple[l]];
                match sub {
                    Subgroup::Even => !r.parity.is_odd(),
                    Subgroup::Nonisotropic => !r.isotropic,
                }
            })
            .collect()
    }

    /// Distance of each positive root from the simple roots under
    /// height-increasing simple reflections in the given subgroup.
    fn ascent_distances(&self, sub: Subgroup) -> Vec<Option<usize>> {
        let letters = self.allowed_letters(sub);
        let mut dist = vec![None; self.positive.len()];
        let mut queue = VecDeque::new();
        for &s in &self.simple {
            dist[s] = Some(0);
            queue.push_back(s);
        }
        while let Some(i) = queue.pop_front() {
            for &l in &letters {
                let a = &self.positive[self.simple[l]];
                let img = self.reflect_root(a, &self.positive[i].coeffs);
                if let Some(j) = self.root_index(&img) {
                    if self.height(j) > self.height(i) && dist[j].is_none() {
                        dist[j] = Some(dist[i].unwrap() + 1);
                        queue.push_back(j);
                    }
                }
            }
        }
        dist
    }

    /// All pairs `(β, w)` with `γ = wβ`, `β` simple, `w` of minimal length in
    /// the subgroup and every intermediate root positive.
    pub fn all_minimal_words(&self, gamma: usize, sub: Subgroup) -> Result<Vec<(usize, WeylWord)>> {
        let dist = self.ascent_distances(sub);
        let Some(d) = dist[gamma] else {
            return Err(Error::NotRepresentable(format!(
                "{} is not in the orbit of a simple root",
                self.root_str(gamma)
            )));
        };
        let letters = self.allowed_letters(sub);
        let mut out = Vec::new();
        // Descend from γ: γ = s_l γ' with γ' one step closer.
        fn rec(
            rs: &RootSystem,
            cur: usize,
            d: usize,
            dist: &[Option<usize>],
            letters: &[usize],
            acc: &mut Vec<usize>,
            out: &mut Vec<(usize, WeylWord)>,
        ) {
            if d == 0 {
                if rs.simple.contains(&cur) {
                    out.push((cur, WeylWord { letters: acc.clone(), reduced: true }));
                }
                return;
            }
            for &l in letters {
                let a = &rs.positive[rs.simple[l]];
                let img = rs.reflect_root(a, &rs.positive[cur].coeffs);
                if let Some(j) = rs.root_index(&img) {
                    if rs.height(j) < rs.height(cur) && dist[j] == Some(d - 1) {
                        acc.push(l);
                        rec(rs, j, d - 1, dist, letters, acc, out);
                        acc.pop();
                    }
                }
            }
        }
        rec(self, gamma, d, &dist, &letters, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| (self.simple_position(a.0), &a.1.letters).cmp(&(self.simple_position(b.0), &b.1.letters)));
        out.dedup();
        Ok(out)
    }

    /// The deterministic minimal word: least simple root, then least word.
    pub fn minimal_word(&self, gamma: usize, sub: Subgroup) -> Result<(usize, WeylWord)> {
        Ok(self.all_minimal_words(gamma, sub)?.remove(0))
    }

    /// Minimal word in the even subgroup if possible, otherwise in the
    /// subgroup generated by all non-isotropic simple reflections.
    pub fn preferred_word(&self, gamma: usize) -> Result<(usize, WeylWord, Subgroup)> {
        match self.minimal_word(gamma, Subgroup::Even) {
            Ok((b, w)) => Ok((b, w, Subgroup::Even)),
            Err(_) => {
                let (b, w) = self.minimal_word(gamma, Subgroup::Nonisotropic)?;
                Ok((b, w, Subgroup::Nonisotropic))
            }
        }
    }

    /// The simple-root coefficients of a weight vector, if it is in the root
    /// lattice.
    pub fn simple_coords(&self, eta: &[i64]) -> Option<Vec<i64>> {
        let dim = self.rank();
        let mat: Vec<Vec<Q>> = (0..dim)
            .map(|r| self.simple.iter().map(|&s| Q::int(self.positive[s].coeffs[r])).collect())
            .collect();
        let rhs: Vec<Q> = eta.iter().map(|&x| Q::int(x)).collect();
        let sol = linalg::solve(&mat, &rhs)?;
        sol.iter().map(|x| x.to_i64()).collect()
    }

    /// All partitions of `η`, sorted by degree descending then by
    /// multiplicity vector.
    pub fn enumerate_partitions(&self, eta: &[i64]) -> Vec<Partition> {
        let Some(target) = self.simple_coords(eta) else {
            return vec![];
        };
        if target.iter().any(|&x| x < 0) {
            return vec![];
        }
        let gens: Vec<usize> = (0..self.positive.len()).filter(|&i| self.is_generator(i)).collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.positive.len()];
        self.part_rec(&gens, 0, target, &mut cur, &mut out);
        out.sort_by(|a: &Partition, b: &Partition| b.degree().cmp(&a.degree()).then(b.mult.cmp(&a.mult)));
        out
    }

    fn part_rec(&self, gens: &[usize], k: usize, rem: Vec<i64>, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem.iter().all(|&x| x == 0) {
            out.push(Partition { mult: cur.clone() });
            return;
        }
        if k == gens.len() {
            return;
        }
        let g = gens[k];
        let sc = &self.simple_coeffs[g];
        let cap = if self.positive[g].isotropic { 1 } else { u32::MAX };
        let mut rem = rem;
        let mut t = 0u32;
        loop {
            self.part_rec(gens, k + 1, rem.clone(), cur, out);
            if t == cap {
                break;
            }
            let next: Vec<i64> = rem.iter().zip(sc).map(|(a, b)| a - b).collect();
            if next.iter().any(|&x| x < 0) {
                break;
            }
            rem = next;
            t += 1;
            cur[g] = t;
        }
        cur[g] = 0;
    }

    /// Hyperplane `H_{γ,m}` as `(c, d)` with `H = {λ : Σ c_k λ_k = d}`.
    pub fn hyperplane(&self, gamma: &[i64], m: i64) -> (Vec<Q>, Q) {
        let c = self.root_functional(gamma);
        let gg = self.pair_int(gamma, gamma);
        let g: Weight = gamma.iter().map(|&x| Q::int(x)).collect();
        let d = &Q::new((m * gg) as i128, 2) - &self.pair(&self.rho, &g);
        (c, d)
    }

    pub fn on_hyperplane(&self, gamma: &[i64], m: i64, lam: &[Q]) -> bool {
        let (c, d) = self.hyperplane(gamma, m);
        let v = c.iter().zip(lam).fold(Q::zero(), |acc, (a, x)| acc + a * x);
        v == d
    }

    /// Random points of `w·Λ ⊆ H_{γ,m}` where `Λ` consists of weights `ν`
    /// with `(ν+ρ, β^∨) = m` (or `(ν+ρ, β) = 0` for isotropic `β`) and the
    /// remaining simple pairings positive integers in `1..=offset`, odd for
    /// odd non-isotropic roots.
    pub fn hyperplane_sample(&self, gamma: usize, m: i64, count: usize, offset: i64, seed: u64) -> Result<Vec<Weight>> {
        let (beta, w, _) = self.preferred_word(gamma)?;
        self.hyperplane_sample_word(gamma, beta, &w, m, count, offset, seed)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn hyperplane_sample_word(
        &self,
        gamma: usize,
        beta: usize,
        w: &WeylWord,
        m: i64,
        count: usize,
        offset: i64,
        seed: u64,
    ) -> Result<Vec<Weight>> {
        if count == 0 || offset < 1 {
            return Err(Error::Sampling("count and offset must be positive".into()));
        }
        let dim = self.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Rows: simple roots, then coordinate vectors completing a basis.
        let mut rows: Vec<(Vec<Q>, Option<usize>)> = Vec::new();
        for (pos, &s) in self.simple.iter().enumerate() {
            let r = &self.positive[s];
            let f = if r.isotropic { self.root_functional(&r.coeffs) } else { self.coroot_functional(r)? };
            rows.push((f, Some(pos)));
        }
        for k in 0..dim {
            let mut cand: Vec<Vec<Q>> = rows.iter().map(|r| r.0.clone()).collect();
            cand.push(unit_weight(dim, k));
            if linalg::rank(&cand) == cand.len() {
                rows.push((unit_weight(dim, k), None));
            }
        }
        if rows.len() != dim {
            return Err(Error::Sampling("could not complete the simple roots to a basis".into()));
        }
        let mat: Vec<Vec<Q>> = rows.iter().map(|r| r.0.clone()).collect();
        let beta_pos = self.simple_position(beta).expect("base root is simple");
        let br = &self.positive[beta];
        if br.parity.is_odd() && !br.isotropic && m % 2 == 0 {
            return Err(Error::Sampling("m must be odd for an odd non-isotropic root".into()));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut attempts = 0;
        while out.len() < count && attempts < 50 * count + 50 {
            attempts += 1;
            let rhs: Vec<Q> = rows
                .iter()
                .map(|(_, pos)| match pos {
                    Some(p) if *p == beta_pos => {
                        if br.isotropic {
                            Q::zero()
                        } else {
                            Q::int(m)
                        }
                    }
                    Some(p) => {
                        let r = &self.positive[self.simple[*p]];
                        let mut v = rng.gen_range(1..=offset);
                        if r.parity.is_odd() && !r.isotropic && v % 2 == 0 {
                            v = if v > 1 { v - 1 } else { 1 };
                        }
                        Q::int(v)
                    }
                    None => Q::int(rng.gen_range(-offset..=offset)),
                })
                .collect();
            let x = linalg::solve(&mat, &rhs).ok_or_else(|| Error::Sampling("singular sampling system".into()))?;
            let lam = sub(&self.apply_word(w, &x)?, &self.rho);
            if !self.on_hyperplane(&self.positive[gamma].coeffs, m, &lam) {
                return Err(Error::Internal("sampled weight off the hyperplane".into()));
            }
            let key = format!("{lam:?}");
            if seen.insert(key) {
                out.push(lam);
            }
        }
        Ok(out)
    }

    /// Chain of odd reflections from the distinguished Borel of gl(m|n) to
    /// one in which `γ = ε_r - δ_s` is simple.
    pub fn borel_chain(&self, gamma: usize) -> Result<BorelChain> {
        if self.family != Family::GlSuper {
            return Err(Error::Domain("Borel chains are implemented for gl(m|n) only".into()));
        }
        let g = &self.positive[gamma].coeffs;
        let (m, n) = (self.m, self.n);
        let r = (0..m).find(|&i| g[i] == 1);
        let s = (m..m + n).find(|&i| g[i] == -1);
        let ok = g.iter().filter(|&&x| x != 0).count() == 2;
        let (Some(r), Some(s)) = (r, s) else {
            return Err(Error::Domain("γ must have the form e_r - d_s".into()));
        };
        if !ok {
            return Err(Error::Domain("γ must have the form e_r - d_s".into()));
        }
        let needed = |a: usize, b: usize| (b < s && a >= r) || (b == s && a > r);
        let mut seq: Vec<usize> = (0..m + n).collect();
        let mut borels = vec![seq.clone()];
        let mut odd_roots = Vec::new();
        loop {
            let pos = (0..seq.len() - 1).find(|&i| seq[i] < m && seq[i + 1] >= m && needed(seq[i], seq[i + 1]));
            let Some(i) = pos else { break };
            let alpha = unit_comb(m + n, &[(seq[i], 1), (seq[i + 1], -1)]);
            odd_roots.push(self.root_index(&alpha).expect("positive in the distinguished Borel"));
            seq.swap(i, i + 1);
            borels.push(seq.clone());
        }
        let f_set = odd_roots
            .iter()
            .enumerate()
            .filter(|(_, &a)| self.pair_int(g, &self.positive[a].coeffs) == 0)
            .map(|(i, _)| i)
            .collect();
        Ok(BorelChain { borels, odd_roots, f_set })
    }

    /// Parses `e1-d2`, `2d2`, `e1+e2-d1`, or simple-root forms `a1`,
    /// `a1+2a2`, or (for osp(2,4) and sp(6)) `b+2a1+a2`.
    pub fn parse_root(&self, s: &str) -> Result<Vec<i64>> {
        let bad = || Error::Config(format!("cannot parse root `{s}`"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in t.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() {
                terms.push(cur.clone());
                cur.clear();
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut v = vec![0i64; self.rank()];
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(b) => (-1, b.to_string()),
                None => (1, term.trim_start_matches('+').to_string()),
            };
            let split = body.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(bad)?;
            let (num, sym) = body.split_at(split);
            let k: i64 = if num.is_empty() { 1 } else { num.parse().map_err(|_| bad())? };
            let contrib = self.symbol_vector(sym).ok_or_else(bad)?;
            for (x, c) in v.iter_mut().zip(contrib) {
                *x += sign * k * c;
            }
        }
        Ok(v)
    }

    fn symbol_vector(&self, sym: &str) -> Option<Vec<i64>> {
        if let Some(k) = self.labels.iter().position(|l| l == sym) {
            return Some(unit_comb(self.rank(), &[(k, 1)]));
        }
        let simple_vec = |p: usize| self.simple.get(p).map(|&i| self.positive[i].coeffs.clone());
        if matches!(self.family, Family::Osp24 | Family::Sp) && self.simple.len() >= 3 {
            let l = self.simple.len();
            match sym {
                "b" => return simple_vec(l - 3),
                "a1" => return simple_vec(l - 2),
                "a2" => return simple_vec(l - 1),
                _ => {}
            }
        }
        let idx: usize = sym.strip_prefix('a')?.parse().ok()?;
        if idx == 0 {
            return None;
        }
        simple_vec(idx - 1)
    }

    pub fn root_from_str(&self, s: &str) -> Result<usize> {
        let v = self.parse_root(s)?;
        self.root_index(&v).ok_or_else(|| Error::Domain(format!("`{s}` is not a positive root")))
    }

    pub fn vec_str(&self, v: &[i64]) -> String {
        let mut out = String::new();
        for (k, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(&self.labels[k]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn root_str(&self, i: usize) -> String {
        self.vec_str(&self.positive[i].coeffs)
    }

    pub fn weight_str(&self, w: &[Q]) -> String {
        let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

pub fn unit_comb(dim: usize, entries: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; dim];
    for &(k, c) in entries {
        v[k] += c;
    }
    v
}

pub fn unit_weight(dim: usize, k: usize) -> Weight {
    let mut v = vec![Q::zero(); dim];
    v[k] = Q::one();
    v
}

pub fn add(a: &[Q], b: &[Q]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn int_weight(v: &[i64]) -> Weight {
    v.iter().map(|&x| Q::int(x)).collect()
}

pub fn scale_int(v: &[i64], k: i64) -> Vec<i64> {
    v.iter().map(|x| x * k).collect()
}
