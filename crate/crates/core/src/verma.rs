//! Verma modules: the action of `g` on `U(n⁻)v_λ`, highest-weight tests,
//! singular-vector solves, and the isotropic-root sets attached to `λ`.
//!
//! The action is computed once per PBW monomial with `λ` kept symbolic,
//! so one cache serves every evaluation point.

use crate::error::{Error, Result};
use crate::hpoly::HPoly;
use crate::liealg::{Lin, StructureTable};
use crate::linalg;
use crate::rational::Q;
use crate::rootdata::{add, int_weight, Family, RootSystem, Weight};
use crate::uea::{Elem, Mono, Pbw, RootOrder};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

type ActionRef = Rc<Elem<HPoly>>;

pub struct Verma<'t> {
    pub pbw: Pbw<'t>,
    cache: RefCell<HashMap<(usize, Mono), ActionRef>>,
}

impl<'t> Verma<'t> {
    pub fn new(t: &'t StructureTable, order: &RootOrder) -> Result<Verma<'t>> {
        Ok(Verma { pbw: Pbw::new(t, order)?, cache: RefCell::new(HashMap::new()) })
    }

    pub fn t(&self) -> &StructureTable {
        self.pbw.t
    }

    /// `x_a · e_{-M} v_λ` with `λ` symbolic.
    pub fn act_basis(&self, a: usize, m: &Mono) -> Rc<Elem<HPoly>> {
        let key = (a, m.clone());
        if let Some(v) = self.cache.borrow().get(&key) {
            return v.clone();
        }
        let v = Rc::new(self.act_uncached(a, m));
        self.cache.borrow_mut().insert(key, v.clone());
        v
    }

    fn act_uncached(&self, a: usize, m: &Mono) -> Elem<HPoly> {
        let t = self.t();
        let pbw = &self.pbw;
        if t.is_neg(a) {
            let f = pbw.root_elem::<HPoly>(a);
            return pbw.mul(&f, &Elem::mono(m.clone(), HPoly::one()));
        }
        if t.is_cartan(a) {
            let k = a - t.cartan_idx(0);
            let eta = pbw.mono_weight(m);
            let c = HPoly::var(k).sub(&HPoly::constant(Q::int(eta[k])));
            return Elem::mono(m.clone(), c);
        }
        let Some(f) = m.iter().position(|&e| e > 0) else {
            return Elem::zero();
        };
        let mut rest = m.clone();
        rest[f] -= 1;
        let froot = pbw.gens[f];
        let mut out = Elem::zero();
        for (y, c) in t.bracket_basis(a, t.neg_idx(froot)) {
            out.add_scaled_q(&self.act_basis(*y, &rest), c);
        }
        let inner = self.act_basis(a, &rest);
        let sign = if t.is_odd(a) && pbw.gen_is_odd(f) { -Q::one() } else { Q::one() };
        out.add_scaled_q(&pbw.lmul_gen(f, &inner), &sign);
        out
    }

    /// `x_a · u v_λ`, symbolic in `λ`.
    pub fn act(&self, a: usize, u: &Elem<HPoly>) -> Elem<HPoly> {
        let mut out = Elem::zero();
        for (m, c) in &u.terms {
            out.add_scaled(&self.act_basis(a, m), c);
        }
        out
    }

    /// `x_a · u v_λ` at a fixed `λ`.
    pub fn act_at(&self, a: usize, u: &Elem<Q>, lam: &[Q]) -> Elem<Q> {
        let mut out = Elem::zero();
        for (m, c) in &u.terms {
            for (m2, p) in &self.act_basis(a, m).terms {
                out.add_term(m2.clone(), &p.eval(lam) * c);
            }
        }
        out
    }

    /// Action of a linear combination of basis elements at `λ`.
    pub fn act_lin_at(&self, x: &Lin, u: &Elem<Q>, lam: &[Q]) -> Elem<Q> {
        let mut out = Elem::zero();
        for (a, c) in x {
            out.add_scaled_q(&self.act_at(*a, u, lam), c);
        }
        out
    }

    /// `e_α · u v_λ` for a positive root `α`.
    pub fn act_raising(&self, alpha: usize, u: &Elem<Q>, lam: &[Q]) -> Elem<Q> {
        self.act_at(self.t().pos_idx(alpha), u, lam)
    }

    pub fn is_highest_weight(&self, u: &Elem<Q>, lam: &[Q]) -> bool {
        let rs = &self.t().rs;
        rs.simple.iter().all(|&s| self.act_raising(s, u, lam).is_zero())
    }

    /// Basis of the singular vectors of weight `λ - η`.
    pub fn singular_space(&self, eta: &[i64], lam: &[Q]) -> Result<(Vec<Mono>, Vec<Vec<Q>>)> {
        let rs = &self.t().rs;
        let parts = rs.enumerate_partitions(eta);
        let monos: Vec<Mono> = parts.iter().map(|p| self.pbw.partition_to_mono(p)).collect::<Result<_>>()?;
        let mut row_index: HashMap<(usize, Mono), usize> = HashMap::new();
        let mut cols: Vec<Vec<(usize, Q)>> = Vec::new();
        for m in &monos {
            let mut col = Vec::new();
            for (si, &s) in rs.simple.iter().enumerate() {
                let img = self.act_raising(s, &Elem::mono(m.clone(), Q::one()), lam);
                for (m2, c) in img.terms {
                    let n = row_index.len();
                    let r = *row_index.entry((si, m2)).or_insert(n);
                    col.push((r, c));
                }
            }
            cols.push(col);
        }
        let mut a = vec![vec![Q::zero(); monos.len()]; row_index.len()];
        for (j, col) in cols.into_iter().enumerate() {
            for (r, c) in col {
                a[r][j] = c;
            }
        }
        let ns = linalg::nullspace(&a, monos.len());
        Ok((monos, ns))
    }

    /// The unique singular vector of weight `λ - η` with coefficient 1 on
    /// `norm`, if the singular space is one-dimensional.
    pub fn singular_vector(&self, eta: &[i64], lam: &[Q], norm: &Mono) -> Result<Option<Elem<Q>>> {
        let (monos, ns) = self.singular_space(eta, lam)?;
        if ns.len() != 1 {
            return Ok(None);
        }
        let j = monos.iter().position(|m| m == norm).ok_or_else(|| Error::Domain("normalizing monomial has the wrong weight".into()))?;
        if ns[0][j].is_zero() {
            return Ok(None);
        }
        let s = ns[0][j].recip();
        let mut u = Elem::zero();
        for (m, c) in monos.iter().zip(&ns[0]) {
            u.add_term(m.clone(), c * &s);
        }
        Ok(Some(u))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaSets {
    pub a0: Vec<usize>,
    pub a1: Vec<usize>,
    pub b: Vec<usize>,
}

fn is_positive_int(q: &Q) -> bool {
    q.is_integer() && q.is_positive()
}

pub fn lambda_sets(rs: &RootSystem, lam: &[Q]) -> LambdaSets {
    let lr = add(lam, &rs.rho);
    let mut s = LambdaSets::default();
    for (i, r) in rs.positive.iter().enumerate() {
        if rs.in_bar0(i) {
            if is_positive_int(&rs.copair(&lr, r).unwrap()) {
                s.a0.push(i);
            }
        } else if r.parity.is_odd() && !r.isotropic && !rs.in_bar1(i) {
            let v = rs.copair(&lr, r).unwrap();
            if is_positive_int(&v) && v.to_i64().map(|x| x % 2 == 1).unwrap_or(false) {
                s.a1.push(i);
            }
        } else if r.isotropic && rs.pair_root(&lr, r).is_zero() {
            s.b.push(i);
        }
    }
    s
}

/// Whether `v` is a nonnegative integer combination of even positive roots.
pub fn in_even_cone(rs: &RootSystem, v: &[i64]) -> bool {
    let Some(sc) = rs.simple_coords(v) else { return false };
    if sc.iter().any(|&x| x < 0) {
        return false;
    }
    if sc.iter().all(|&x| x == 0) {
        return true;
    }
    let evens: Vec<usize> = (0..rs.num_positive()).filter(|&i| !rs.positive[i].parity.is_odd()).collect();
    fn rec(rs: &RootSystem, evens: &[usize], k: usize, rem: Vec<i64>) -> bool {
        if rem.iter().all(|&x| x == 0) {
            return true;
        }
        if k == evens.len() {
            return false;
        }
        let sc = &rs.simple_coeffs[evens[k]];
        let mut cur = rem;
        loop {
            if rec(rs, evens, k + 1, cur.clone()) {
                return true;
            }
            let next: Vec<i64> = cur.iter().zip(sc).map(|(a, b)| a - b).collect();
            if next.iter().any(|&x| x < 0) {
                return false;
            }
            cur = next;
        }
    }
    rec(rs, &evens, 0, sc)
}

/// `γ' ↓ γ`: `γ - γ'` is a nonzero sum of even positive roots and
/// `(γ, γ') ≠ 0`.
pub fn covers(rs: &RootSystem, lower: usize, upper: usize) -> bool {
    if lower == upper {
        return false;
    }
    let a = &rs.positive[lower].coeffs;
    let b = &rs.positive[upper].coeffs;
    let diff: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    in_even_cone(rs, &diff) && rs.pair_int(a, b) != 0
}

/// Whether no other root of `B(λ)` lies below `γ` in the order generated
/// by `↓`.
pub fn lambda_minimal(rs: &RootSystem, lam: &[Q], gamma: usize) -> Result<bool> {
    let sets = lambda_sets(rs, lam);
    if !sets.b.contains(&gamma) {
        return Err(Error::Domain("γ is not in B(λ)".into()));
    }
    let mut below = vec![gamma];
    let mut k = 0;
    while k < below.len() {
        let cur = below[k];
        for &g in &sets.b {
            if !below.contains(&g) && covers(rs, g, cur) {
                below.push(g);
            }
        }
        k += 1;
    }
    Ok(below.len() == 1)
}

/// Decides whether `θ_γ(λ)v_λ` lies outside `Σ U(n⁻) θ_{γ'}(λ) v_λ` over the
/// other roots `γ'` of `B(λ)`, by exact linear algebra in the weight space.
pub fn independent(t: &StructureTable, lam: &[Q], gamma: usize) -> Result<bool> {
    let rs = &t.rs;
    if rs.family != Family::GlSuper {
        return Err(Error::Domain("independence test is implemented for gl(m|n)".into()));
    }
    let sets = lambda_sets(rs, lam);
    if !sets.b.contains(&gamma) {
        return Err(Error::Domain("γ is not in B(λ)".into()));
    }
    let order = RootOrder::standard(rs);
    let pbw = Pbw::new(t, &order)?;
    let theta = |g: usize| -> Result<Elem<Q>> {
        let s = crate::shap::construct(t, g, 1, &order)?;
        Ok(s.elem.specialize(lam))
    };
    let target = theta(gamma)?;
    let gw = &rs.positive[gamma].coeffs;
    let mut spanning: Vec<Elem<Q>> = Vec::new();
    for &g in &sets.b {
        if g == gamma {
            continue;
        }
        let diff: Vec<i64> = gw.iter().zip(&rs.positive[g].coeffs).map(|(a, b)| a - b).collect();
        let parts = rs.enumerate_partitions(&diff);
        if parts.is_empty() {
            continue;
        }
        let th = theta(g)?;
        for p in parts {
            let m = pbw.partition_to_mono(&p)?;
            spanning.push(pbw.lmul_mono(&m, &th));
        }
    }
    Ok(!in_span(&spanning, &target))
}

/// Whether `v` lies in the span of `vs`.
pub fn in_span(vs: &[Elem<Q>], v: &Elem<Q>) -> bool {
    if v.is_zero() {
        return true;
    }
    let mut keys: Vec<&Mono> = v.terms.keys().collect();
    for u in vs {
        keys.extend(u.terms.keys());
    }
    keys.sort();
    keys.dedup();
    let col = |u: &Elem<Q>| -> Vec<Q> { keys.iter().map(|k| u.coeff(k).cloned().unwrap_or_else(Q::zero)).collect() };
    let mut rows: Vec<Vec<Q>> = vs.iter().map(col).collect();
    let r0 = linalg::rank(&rows);
    rows.push(col(v));
    linalg::rank(&rows) == r0
}

/// `c` with `a = c·b`, for nonzero `b`.
pub fn ratio(a: &Elem<Q>, b: &Elem<Q>) -> Option<Q> {
    let (m, c0) = b.terms.iter().next()?;
    let c = a.coeff(m).cloned().unwrap_or_else(Q::zero) / c0.clone();
    (b.scale(&c) == *a).then_some(c)
}

#[derive(Clone, Debug)]
pub struct KacSurvival {
    pub coefficient: Q,
    pub expected: Q,
    pub sign_matches: bool,
    pub nonzero: bool,
}

/// Extracts the coefficient of the lone odd vector `e_{-γ}` in `θ_γ(λ)`
/// written with odd vectors leftmost, and compares it with
/// `∏_k (1 - (λ+ρ, σ^∨_{r,r+k})) ∏_k (1 - (λ+ρ, τ^∨_{k,s}))`.
pub fn kac_survival(t: &StructureTable, lam: &[Q], gamma: usize) -> Result<KacSurvival> {
    let rs = &t.rs;
    if rs.family != Family::GlSuper || rs.borel != (0..rs.m + rs.n).collect::<Vec<_>>() {
        return Err(Error::Domain("Kac modules need gl(m|n) with the distinguished Borel".into()));
    }
    let g = &rs.positive[gamma].coeffs;
    let (m, n) = (rs.m, rs.n);
    let r = (0..m).find(|&i| g[i] == 1).ok_or_else(|| Error::Domain("γ must be e_r - d_s".into()))?;
    let s = (m..m + n).find(|&i| g[i] == -1).ok_or_else(|| Error::Domain("γ must be e_r - d_s".into()))? - m;
    let lr = add(lam, &rs.rho);
    if !rs.pair(&lr, &int_weight(g)).is_zero() {
        return Err(Error::Domain("(λ+ρ, γ) must vanish".into()));
    }
    let dominant = |mu: &[Q]| {
        rs.simple.iter().filter(|&&i| !rs.positive[i].parity.is_odd()).all(|&i| {
            let v = rs.copair(mu, &rs.positive[i]).unwrap();
            v.is_integer() && !v.is_negative()
        })
    };
    let shifted: Weight = lam.iter().zip(g).map(|(x, c)| x - &Q::int(*c)).collect();
    if !dominant(lam) || !dominant(&shifted) {
        return Err(Error::Domain("λ and λ - γ must be dominant integral".into()));
    }
    let order = RootOrder::odd_first(rs);
    let s_el = crate::shap::construct(t, gamma, 1, &order)?;
    let pbw = Pbw::new(t, &order)?;
    let mut mono = vec![0u16; pbw.ngens()];
    mono[pbw.gen_pos(gamma).unwrap()] = 1;
    let coefficient = s_el.elem.coeff(&mono).map(|c| c.eval(lam)).unwrap_or_else(Q::zero);
    let mut expected = Q::one();
    let unit = |i: usize, j: usize| {
        let mut v = vec![0i64; m + n];
        v[i] = 1;
        v[j] = -1;
        v
    };
    for k in 1..m - r {
        let sig = unit(r, r + k);
        let c = rs.copair(&lr, &rs.positive[rs.root_index(&sig).unwrap()])?;
        expected = &expected * &(&Q::one() - &c);
    }
    for k in 0..s {
        let tau = unit(m + k, m + s);
        let c = rs.copair(&lr, &rs.positive[rs.root_index(&tau).unwrap()])?;
        expected = &expected * &(&Q::one() - &c);
    }
    let sign_matches = coefficient == expected || coefficient == -expected.clone();
    Ok(KacSurvival { nonzero: !coefficient.is_zero(), coefficient, expected, sign_matches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::BasisChoice;

    fn table(name: &str) -> StructureTable {
        StructureTable::realize(&RootSystem::from_name(name, BasisChoice::Distinguished).unwrap()).unwrap()
    }

    fn q(v: &[i64]) -> Weight {
        int_weight(v)
    }

    #[test]
    fn sl2_raising_formula() {
        let t = table("sl(2)");
        let v = Verma::new(&t, &RootOrder::standard(&t.rs)).unwrap();
        let lam = vec![Q::new(7, 3), Q::new(-1, 2)];
        let a = &t.rs.positive[0];
        let la = t.rs.copair(&lam, a).unwrap();
        for k in 1..5u16 {
            let u = Elem::mono(vec![k], Q::one());
            let got = v.act_raising(0, &u, &lam);
            let kq = Q::int(k as i64);
            // k((λ,α^∨) - k + 1)(α,α)/2
            let c = &(&kq * &(&(&la - &kq) + &Q::one())) * &Q::one();
            assert_eq!(got, Elem::mono(vec![k - 1], c));
        }
    }

    #[test]
    fn highest_weight_basics() {
        let t = table("sl(2)");
        let v = Verma::new(&t, &RootOrder::standard(&t.rs)).unwrap();
        let lam = q(&[1, 0]);
        assert!(v.is_highest_weight(&Elem::one(1), &lam));
        assert!(!v.is_highest_weight(&Elem::mono(vec![1], Q::one()), &lam));
        // (λ+ρ, α^∨) = 2 gives a singular vector e_{-α}^2 v_λ.
        assert!(v.is_highest_weight(&Elem::mono(vec![2], Q::one()), &lam));
    }

    #[test]
    fn gl21_singular_vector() {
        let t = table("gl(2|1)");
        let rs = &t.rs;
        let o = RootOrder::parse(rs, "e1-e2,e1-d1,e2-d1").unwrap();
        let v = Verma::new(&t, &o).unwrap();
        let g = rs.root_from_str("e1-d1").unwrap();
        // (λ+ρ, e1-d1) = 0 with λ+ρ = (a, b, c): a + c = 0.
        let lr = vec![Q::int(5), Q::int(2), Q::int(-5)];
        let lam = crate::rootdata::sub(&lr, &rs.rho);
        let u = v.singular_vector(&rs.positive[g].coeffs, &lam, &vec![1, 0, 1]).unwrap().unwrap();
        // a1 = (λ+ρ, e1-e2) = 3
        let mut expect = Elem::zero();
        expect.add_term(vec![1, 0, 1], Q::one());
        expect.add_term(vec![0, 1, 0], Q::int(3));
        assert_eq!(u, expect);
    }

    #[test]
    fn lambda_sets_examples() {
        let t = table("gl(2|1)");
        let rs = &t.rs;
        let minus_rho: Weight = rs.rho.iter().map(|x| -x.clone()).collect();
        let s = lambda_sets(rs, &minus_rho);
        assert_eq!(s.b.len(), 2);
        let generic = vec![Q::new(1, 3), Q::new(1, 7), Q::new(2, 11)];
        assert_eq!(lambda_sets(rs, &generic), LambdaSets::default());
        let sl2 = RootSystem::from_name("sl(2)", BasisChoice::Distinguished).unwrap();
        assert_eq!(lambda_sets(&sl2, &q(&[0, 0])).a0, vec![0]);
    }

    #[test]
    fn bracket_compatibility_spot_check() {
        let t = table("gl(2|2)");
        let v = Verma::new(&t, &RootOrder::standard(&t.rs)).unwrap();
        let lam = vec![Q::new(3, 2), Q::int(-2), Q::new(1, 5), Q::int(4)];
        let mut u = Elem::zero();
        u.add_term(vec![1, 0, 1, 0, 0, 0], Q::one());
        u.add_term(vec![0, 1, 0, 1, 0, 0], Q::int(3));
        for a in 0..t.dim() {
            for b in 0..t.dim() {
                let ab = v.act_at(a, &v.act_at(b, &u, &lam), &lam);
                let ba = v.act_at(b, &v.act_at(a, &u, &lam), &lam);
                let s = if t.is_odd(a) && t.is_odd(b) { Q::one() } else { -Q::one() };
                let mut lhs = ab;
                lhs.add_scaled_q(&ba, &s);
                let rhs = v.act_lin_at(t.bracket_basis(a, b), &u, &lam);
                assert_eq!(lhs, rhs, "{a} {b}");
            }
        }
    }
}
