//! PBW arithmetic in `U(n⁻)` and `U(b⁻)`.
//!
//! A monomial is an exponent vector over the generators of `n⁻` in a fixed
//! root order: `e_{-π} = Π e_{-α}^{π(α)}`, the product taken in that order.
//! The generators are the negative root vectors, except that `e_{-2α}` for
//! an odd root `α` is replaced by the square of `e_{-α}`. Coefficients sit to
//! the right of the root vectors and commute with them, so an `Elem<HPoly>`
//! is a family of elements of `U(n⁻)` parametrized by a weight.

use crate::error::{Error, Result};
use crate::hpoly::{mono_from_exps, Coeff, HPoly};
use crate::liealg::StructureTable;
use crate::rational::{bigint_to_json, Q};
use crate::rootdata::{Partition, RootSystem};
use serde_json::{json, Value};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

pub type Mono = Vec<u16>;

#[derive(Clone, Debug, PartialEq)]
pub struct Elem<C> {
    pub terms: BTreeMap<Mono, C>,
}

impl<C: Coeff> Default for Elem<C> {
    fn default() -> Self {
        Elem { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> Elem<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn mono(m: Mono, c: C) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn one(ngens: usize) -> Self {
        Self::mono(vec![0; ngens], C::from_q(Q::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                e.add_assign(&c);
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, o: &Self, s: &C) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.mul(s));
        }
    }

    pub fn add_scaled_q(&mut self, o: &Self, s: &Q) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.scale(s));
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled_q(o, &-Q::one());
        r
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut r = Self::zero();
        r.add_scaled_q(self, s);
        r
    }

    pub fn mul_coeff(&self, s: &C) -> Self {
        let mut r = Self::zero();
        r.add_scaled(self, s);
        r
    }
}

impl Elem<Q> {
    pub fn to_poly(&self) -> Elem<HPoly> {
        Elem {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), HPoly::constant(c.clone()))).collect(),
        }
    }
}

impl Elem<HPoly> {
    /// Evaluates every coefficient at `λ`.
    pub fn specialize(&self, lam: &[Q]) -> Elem<Q> {
        let mut r = Elem::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.eval(lam));
        }
        r
    }

    pub fn map_coeffs(&self, f: impl Fn(&HPoly) -> HPoly) -> Elem<HPoly> {
        let mut r = Elem::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), f(c));
        }
        r
    }
}

/// A permutation of the positive roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootOrder(pub Vec<usize>);

impl RootOrder {
    /// The enumeration order of `RootSystem::positive`.
    pub fn standard(rs: &RootSystem) -> RootOrder {
        RootOrder((0..rs.num_positive()).collect())
    }

    pub fn from_roots(rs: &RootSystem, roots: &[usize]) -> Result<RootOrder> {
        let mut seen = vec![false; rs.num_positive()];
        for &r in roots {
            if r >= seen.len() || seen[r] {
                return Err(Error::Config("order must list each positive root once".into()));
            }
            seen[r] = true;
        }
        let mut v = roots.to_vec();
        // Missing roots are appended in enumeration order.
        v.extend((0..rs.num_positive()).filter(|&i| !seen[i]));
        Ok(RootOrder(v))
    }

    /// Parses a comma-separated list of roots; unlisted roots follow.
    pub fn parse(rs: &RootSystem, s: &str) -> Result<RootOrder> {
        let roots: Result<Vec<usize>> =
            s.split(',').filter(|t| !t.trim().is_empty()).map(|t| rs.root_from_str(t.trim())).collect();
        Self::from_roots(rs, &roots?)
    }

    pub fn move_last(&self, root: usize) -> RootOrder {
        let mut v: Vec<usize> = self.0.iter().copied().filter(|&r| r != root).collect();
        v.push(root);
        RootOrder(v)
    }

    pub fn reversed(&self) -> RootOrder {
        RootOrder(self.0.iter().rev().copied().collect())
    }

    /// Odd roots first, then even roots; enumeration order within each.
    pub fn odd_first(rs: &RootSystem) -> RootOrder {
        let odd = (0..rs.num_positive()).filter(|&i| rs.positive[i].parity.is_odd());
        let even = (0..rs.num_positive()).filter(|&i| !rs.positive[i].parity.is_odd());
        RootOrder(odd.chain(even).collect())
    }

    pub fn names(&self, rs: &RootSystem) -> Vec<String> {
        self.0.iter().map(|&i| rs.root_str(i)).collect()
    }
}

/// PBW engine for one root order, with memoized straightening.
pub struct Pbw<'t> {
    pub t: &'t StructureTable,
    pub order: RootOrder,
    /// Root index of each generator, in order.
    pub gens: Vec<usize>,
    pos: Vec<Option<usize>>,
    odd: Vec<bool>,
    isotropic: Vec<bool>,
    neg_exp: Vec<Elem<Q>>,
    cache: RefCell<HashMap<(usize, Mono), ProductRef>>,
}

impl<'t> Pbw<'t> {
    pub fn new(t: &'t StructureTable, order: &RootOrder) -> Result<Pbw<'t>> {
        let rs = &t.rs;
        if order.0.len() != rs.num_positive() {
            return Err(Error::Domain("order does not match the algebra".into()));
        }
        let gens: Vec<usize> = order.0.iter().copied().filter(|&r| rs.is_generator(r)).collect();
        let mut pos = vec![None; rs.num_positive()];
        for (p, &r) in gens.iter().enumerate() {
            pos[r] = Some(p);
        }
        let odd = gens.iter().map(|&r| rs.positive[r].parity.is_odd()).collect();
        let isotropic = gens.iter().map(|&r| rs.positive[r].isotropic).collect();
        let n = gens.len();
        let mut neg_exp = Vec::new();
        for r in 0..rs.num_positive() {
            if let Some(p) = pos[r] {
                let mut m = vec![0; n];
                m[p] = 1;
                neg_exp.push(Elem::mono(m, Q::one()));
            } else {
                // e_{-2α} = (2/c) x², where [x, x] = c e_{-2α}.
                let half: Vec<i64> = rs.positive[r].coeffs.iter().map(|c| c / 2).collect();
                let a = rs.root_index(&half).expect("half of a non-generator root");
                let br = t.bracket_basis(t.neg_idx(a), t.neg_idx(a));
                let c = br
                    .iter()
                    .find(|(i, _)| *i == t.neg_idx(r))
                    .map(|(_, c)| c.clone())
                    .ok_or_else(|| Error::Internal("odd square does not span e_{-2α}".into()))?;
                let mut m = vec![0; n];
                m[pos[a].expect("odd root is a generator")] = 2;
                neg_exp.push(Elem::mono(m, &Q::int(2) / &c));
            }
        }
        Ok(Pbw { t, order: order.clone(), gens, pos, odd, isotropic, neg_exp, cache: RefCell::new(HashMap::new()) })
    }

    pub fn rs(&self) -> &RootSystem {
        &self.t.rs
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_pos(&self, root: usize) -> Option<usize> {
        self.pos[root]
    }

    pub fn gen_is_odd(&self, p: usize) -> bool {
        self.odd[p]
    }

    /// `e_{-α}` as an element (a square for non-generators).
    pub fn neg_vector(&self, root: usize) -> &Elem<Q> {
        &self.neg_exp[root]
    }

    pub fn mono_parity(&self, m: &Mono) -> bool {
        m.iter().zip(&self.odd).filter(|(_, o)| **o).map(|(e, _)| *e as u32).sum::<u32>() % 2 == 1
    }

    /// Positive weight `η` with `e_{-π}` of weight `-η`.
    pub fn mono_weight(&self, m: &Mono) -> Vec<i64> {
        let rs = self.rs();
        let mut w = vec![0; rs.rank()];
        for (p, &e) in m.iter().enumerate() {
            if e > 0 {
                for (x, c) in w.iter_mut().zip(&rs.positive[self.gens[p]].coeffs) {
                    *x += e as i64 * c;
                }
            }
        }
        w
    }

    pub fn mono_degree(&self, m: &Mono) -> u32 {
        m.iter().map(|&e| e as u32).sum()
    }

    pub fn mono_to_partition(&self, m: &Mono) -> Partition {
        let mut p = Partition::empty(self.rs().num_positive());
        for (i, &e) in m.iter().enumerate() {
            p.mult[self.gens[i]] = e as u32;
        }
        p
    }

    pub fn partition_to_mono(&self, p: &Partition) -> Result<Mono> {
        let mut m = vec![0; self.ngens()];
        for (r, &k) in p.mult.iter().enumerate() {
            if k > 0 {
                let i = self.pos[r].ok_or_else(|| Error::Domain("partition uses a non-generator".into()))?;
                m[i] = k as u16;
            }
        }
        Ok(m)
    }

    /// Generators of a monomial as a word, left to right.
    pub fn mono_word(&self, m: &Mono) -> Vec<usize> {
        let mut w = Vec::new();
        for (p, &e) in m.iter().enumerate() {
            for _ in 0..e {
                w.push(p);
            }
        }
        w
    }

    /// `e_g · e_{-M}` in PBW form.
    pub fn mul_gen_left(&self, g: usize, m: &Mono) -> Rc<Elem<Q>> {
        let key = (g, m.clone());
        if let Some(v) = self.cache.borrow().get(&key) {
            return v.clone();
        }
        let res = Rc::new(self.mul_gen_left_uncached(g, m));
        self.cache.borrow_mut().insert(key, res.clone());
        res
    }

    fn mul_gen_left_uncached(&self, g: usize, m: &Mono) -> Elem<Q> {
        let first = m.iter().position(|&e| e > 0);
        match first {
            Some(f) if g > f => {
                let mut rest = m.clone();
                rest[f] -= 1;
                let g_rest = self.mul_gen_left(g, &rest);
                let sign = if self.odd[g] && self.odd[f] { -Q::one() } else { Q::one() };
                let mut out = self.lmul_gen(f, &g_rest).scale(&sign);
                let br = self.t.bracket_basis(self.t.neg_idx(self.gens[g]), self.t.neg_idx(self.gens[f]));
                for (b, c) in br {
                    let v = self.mul_mono_elem_q(&self.neg_exp[*b], &rest);
                    out.add_scaled_q(&v, c);
                }
                out
            }
            Some(f) if g == f && self.isotropic[g] => Elem::zero(),
            _ => {
                let mut r = m.clone();
                r[g] = r[g].checked_add(1).expect("exponent overflow");
                Elem::mono(r, Q::one())
            }
        }
    }

    fn mul_mono_elem_q(&self, a: &Elem<Q>, rest: &Mono) -> Elem<Q> {
        let mut out = Elem::zero();
        for (ma, ca) in &a.terms {
            let mut cur = Elem::mono(rest.clone(), Q::one());
            for &g in self.mono_word(ma).iter().rev() {
                cur = self.lmul_gen(g, &cur);
            }
            out.add_scaled_q(&cur, ca);
        }
        out
    }

    /// `e_g · u`.
    pub fn lmul_gen<C: Coeff>(&self, g: usize, u: &Elem<C>) -> Elem<C> {
        let mut out = Elem::zero();
        for (m, c) in &u.terms {
            let v = self.mul_gen_left(g, m);
            for (m2, c2) in &v.terms {
                out.add_term(m2.clone(), c.scale(c2));
            }
        }
        out
    }

    /// `e_{-π} · u`.
    pub fn lmul_mono<C: Coeff>(&self, m: &Mono, u: &Elem<C>) -> Elem<C> {
        let mut cur = u.clone();
        for &g in self.mono_word(m).iter().rev() {
            cur = self.lmul_gen(g, &cur);
        }
        cur
    }

    /// `u · v` with central coefficients.
    pub fn mul<C: Coeff>(&self, u: &Elem<C>, v: &Elem<C>) -> Elem<C> {
        let mut out = Elem::zero();
        for (m, c) in &u.terms {
            let p = self.lmul_mono(m, v);
            out.add_scaled(&p, c);
        }
        out
    }

    /// Right multiplication by `e_{-α}^k`.
    pub fn rmul_root_pow<C: Coeff>(&self, u: &Elem<C>, root: usize, k: u32) -> Elem<C> {
        let mut x = Elem::<C>::one(self.ngens());
        for _ in 0..k {
            x = self.mul(&x, &self.neg_exp[root].to_poly_like::<C>());
        }
        self.mul(u, &x)
    }

    /// `e_{-α}` as an element with coefficients in `C`.
    pub fn root_elem<C: Coeff>(&self, root: usize) -> Elem<C> {
        self.neg_exp[root].to_poly_like()
    }

    /// Straightens a word of basis elements of `b⁻`; Cartan elements are
    /// moved to the right and become polynomial coefficients.
    pub fn straighten(&self, word: &[usize]) -> Result<Elem<HPoly>> {
        let t = self.t;
        let mut cur = Elem::<HPoly>::one(self.ngens());
        for &a in word.iter().rev() {
            if t.is_neg(a) {
                cur = self.mul(&self.root_elem(a), &cur);
            } else if t.is_cartan(a) {
                let k = a - t.cartan_idx(0);
                let mut next = Elem::zero();
                for (m, c) in &cur.terms {
                    let eta = self.mono_weight(m);
                    let f = HPoly::var(k).sub(&HPoly::constant(Q::int(eta[k])));
                    next.add_term(m.clone(), f.mul(c));
                }
                cur = next;
            } else {
                return Err(Error::Domain("generator outside b⁻".into()));
            }
        }
        Ok(cur)
    }

    /// Product in `U(b⁻)` where coefficients are elements of `U(h)`:
    /// `(e_π H)(e_σ K) = e_π e_σ H(λ - η_σ) K(λ)`.
    pub fn mul_ub(&self, u: &Elem<HPoly>, v: &Elem<HPoly>) -> Elem<HPoly> {
        let mut out = Elem::zero();
        for (mv, kv) in &v.terms {
            let eta = self.mono_weight(mv);
            let shift: Vec<HPoly> = eta
                .iter()
                .enumerate()
                .map(|(k, e)| HPoly::var(k).sub(&HPoly::constant(Q::int(*e))))
                .collect();
            for (mu, hu) in &u.terms {
                let prod = self.lmul_mono(mu, &Elem::mono(mv.clone(), Q::one()));
                let coeff = hu.subst(&shift).mul(kv);
                for (m, c) in &prod.terms {
                    out.add_term(m.clone(), coeff.scale(c));
                }
            }
        }
        out
    }

    /// `(ad e_{-α}) u` for weight-homogeneous `u`.
    pub fn ad<C: Coeff>(&self, root: usize, u: &Elem<C>) -> Elem<C> {
        let x = self.root_elem::<C>(root);
        let left = self.mul(&x, u);
        let right = self.mul(u, &x);
        let parity_u = u.terms.keys().next().map(|m| self.mono_parity(m)).unwrap_or(false);
        let sign = if parity_u && self.rs().positive[root].parity.is_odd() { Q::one() } else { -Q::one() };
        let mut out = left;
        out.add_scaled_q(&right, &sign);
        out
    }

    pub fn ad_pow<C: Coeff>(&self, root: usize, j: u32, u: &Elem<C>) -> Elem<C> {
        let mut cur = u.clone();
        for _ in 0..j {
            if cur.is_zero() {
                break;
            }
            cur = self.ad(root, &cur);
        }
        cur
    }

    /// `e_{-α}^r a = Σ_i C(r,i) ((ad e_{-α})^i a) e_{-α}^{r-i}` for even `α`.
    pub fn power_commute<C: Coeff>(&self, root: usize, r: u32, a: &Elem<C>) -> Elem<C> {
        let mut out = Elem::zero();
        let mut z = a.clone();
        for i in 0..=r {
            if z.is_zero() {
                break;
            }
            let term = self.rmul_root_pow(&z, root, r - i);
            out.add_scaled_q(&term, &Q::binomial(&Q::int(r as i64), i));
            z = self.ad(root, &z);
        }
        out
    }

    /// `x^{2ℓ+1} z` for odd non-isotropic `x = e_{-α}`, via the expansion
    /// `Σ_j C(ℓ, ⌊j/2⌋) s_j ((ad x)^j z) x^{2ℓ+1-j}` with `s_j = (-1)^{|z|}`
    /// for even `j` and `1` for odd `j`.
    pub fn odd_power_commute<C: Coeff>(&self, root: usize, l: u32, z: &Elem<C>) -> Elem<C> {
        let mut out = Elem::zero();
        let zpar = z.terms.keys().next().map(|m| self.mono_parity(m)).unwrap_or(false);
        let mut cur = z.clone();
        let n = 2 * l + 1;
        for j in 0..=n {
            if cur.is_zero() {
                break;
            }
            let mut c = Q::binomial(&Q::int(l as i64), j / 2);
            if j % 2 == 0 && zpar {
                c = -c;
            }
            out.add_scaled_q(&self.rmul_root_pow(&cur, root, n - j), &c);
            cur = self.ad(root, &cur);
        }
        out
    }

    /// `θ` with `u = θ e_{-α}^p`, for `α` last in the order.
    pub fn divide_right_power<C: Coeff>(&self, u: &Elem<C>, root: usize, p: u32) -> Result<Elem<C>> {
        let last = self.ngens() - 1;
        if self.pos[root] != Some(last) {
            return Err(Error::Domain("division needs the root last in the order".into()));
        }
        let mut out = Elem::zero();
        for (m, c) in &u.terms {
            if (m[last] as u32) < p {
                return Err(Error::NotDivisible(format!(
                    "monomial with exponent {} < {p}",
                    m[last]
                )));
            }
            let mut m2 = m.clone();
            m2[last] -= p as u16;
            out.add_term(m2, c.clone());
        }
        Ok(out)
    }

    /// Rewrites `u`, given in the order of `from`, in this engine's order.
    pub fn reorder_from<C: Coeff>(&self, from: &Pbw, u: &Elem<C>) -> Elem<C> {
        let mut out = Elem::zero();
        for (m, c) in &u.terms {
            let mut cur = Elem::<C>::one(self.ngens());
            for &g in from.mono_word(m).iter().rev() {
                let p = self.pos[from.gens[g]].expect("same generators");
                cur = self.lmul_gen(p, &cur);
            }
            out.add_scaled(&cur, c);
        }
        out
    }

    /// Renders an element as `coeff·e[..]e[..] + ...`.
    pub fn render<C: Coeff + RenderCoeff>(&self, u: &Elem<C>) -> String {
        if u.is_zero() {
            return "0".into();
        }
        let rs = self.rs();
        let mut parts = Vec::new();
        for (m, c) in u.terms.iter().rev() {
            let mut word = String::new();
            for (p, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                word.push_str(&format!("f[{}]", rs.root_str(self.gens[p])));
                if e > 1 {
                    word.push_str(&format!("^{e}"));
                }
            }
            if word.is_empty() {
                word.push('1');
            }
            parts.push(format!("({})*{}", c.render_coeff(&rs.labels), word));
        }
        parts.join(" + ")
    }

    pub fn to_json(&self, u: &Elem<HPoly>) -> Value {
        let rs = self.rs();
        let terms: Vec<Value> = u
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mut pi = serde_json::Map::new();
                for (p, &e) in m.iter().enumerate() {
                    if e > 0 {
                        pi.insert(rs.root_str(self.gens[p]), json!(e));
                    }
                }
                json!({"pi": pi, "coeff": hpoly_json(c, &rs.labels)})
            })
            .collect();
        json!({"order": self.order.names(rs), "terms": terms})
    }

    /// Parses the JSON produced by `to_json`, in this engine's order.
    pub fn from_json(&self, v: &Value) -> Result<Elem<HPoly>> {
        let rs = self.rs();
        let bad = || Error::Config("malformed element JSON".into());
        let order = v.get("order").and_then(Value::as_array).ok_or_else(bad)?;
        let roots: Result<Vec<usize>> =
            order.iter().map(|r| r.as_str().ok_or_else(bad).and_then(|s| rs.root_from_str(s))).collect();
        let src = Pbw::new(self.t, &RootOrder::from_roots(rs, &roots?)?)?;
        let mut u = Elem::zero();
        for term in v.get("terms").and_then(Value::as_array).ok_or_else(bad)? {
            let mut m = vec![0u16; src.ngens()];
            for (root, e) in term.get("pi").and_then(Value::as_object).ok_or_else(bad)? {
                let r = rs.root_from_str(root)?;
                let p = src.pos[r].ok_or_else(bad)?;
                m[p] = e.as_u64().ok_or_else(bad)? as u16;
            }
            let c = hpoly_from_json(term.get("coeff").ok_or_else(bad)?, &rs.labels)?;
            u.add_term(m, c);
        }
        Ok(self.reorder_from(&src, &u))
    }
}

type ProductRef = Rc<Elem<Q>>;

trait ToPolyLike {
    fn to_poly_like<C: Coeff>(&self) -> Elem<C>;
}

impl ToPolyLike for Elem<Q> {
    fn to_poly_like<C: Coeff>(&self) -> Elem<C> {
        let mut r = Elem::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), C::from_q(c.clone()));
        }
        r
    }
}

pub trait RenderCoeff {
    fn render_coeff(&self, labels: &[String]) -> String;
}

impl RenderCoeff for Q {
    fn render_coeff(&self, _: &[String]) -> String {
        self.to_string()
    }
}

impl RenderCoeff for HPoly {
    fn render_coeff(&self, labels: &[String]) -> String {
        self.render(labels)
    }
}

pub fn hpoly_json(c: &HPoly, labels: &[String]) -> Value {
    let monos: Vec<Value> = c
        .terms()
        .map(|(m, q)| {
            let mut exps = serde_json::Map::new();
            for (k, l) in labels.iter().enumerate() {
                let e = crate::hpoly::mono_exp(*m, k);
                if e > 0 {
                    exps.insert(l.clone(), json!(e));
                }
            }
            json!({"exps": exps, "num": bigint_to_json(&q.numer()), "den": bigint_to_json(&q.denom())})
        })
        .collect();
    json!({ "monomials": monos })
}

pub fn hpoly_from_json(v: &Value, labels: &[String]) -> Result<HPoly> {
    let bad = || Error::Config("malformed coefficient JSON".into());
    let mut p = HPoly::zero();
    for mono in v.get("monomials").and_then(Value::as_array).ok_or_else(bad)? {
        let mut exps = vec![0u32; labels.len()];
        for (l, e) in mono.get("exps").and_then(Value::as_object).ok_or_else(bad)? {
            let k = labels.iter().position(|x| x == l).ok_or_else(bad)?;
            exps[k] = e.as_u64().ok_or_else(bad)? as u32;
        }
        let num = crate::rational::bigint_from_json(mono.get("num").ok_or_else(bad)?).ok_or_else(bad)?;
        let den = crate::rational::bigint_from_json(mono.get("den").ok_or_else(bad)?).ok_or_else(bad)?;
        let q = Q::from_big(num_rational::BigRational::new(num, den));
        p.add_term(mono_from_exps(&exps), q);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::StructureTable;
    use crate::rootdata::{BasisChoice, RootSystem};

    fn table(name: &str) -> StructureTable {
        StructureTable::realize(&RootSystem::from_name(name, BasisChoice::Distinguished).unwrap()).unwrap()
    }

    fn order(t: &StructureTable, roots: &[&str]) -> RootOrder {
        let rs = &t.rs;
        RootOrder::from_roots(rs, &roots.iter().map(|r| rs.root_from_str(r).unwrap()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn gl21_straighten() {
        let t = table("gl(2|1)");
        let o = order(&t, &["e1-e2", "e1-d1", "e2-d1"]);
        let e = Pbw::new(&t, &o).unwrap();
        let f = |s: &str| t.rs.root_from_str(s).unwrap();
        let u = e.straighten(&[f("e2-d1"), f("e1-e2")]).unwrap();
        let mut expect = Elem::zero();
        expect.add_term(vec![1, 0, 1], HPoly::one());
        expect.add_term(vec![0, 1, 0], HPoly::one());
        assert_eq!(u, expect);
        assert!(e.straighten(&[f("e2-d1"), f("e2-d1")]).unwrap().is_zero());
        assert!(e.straighten(&[t.pos_idx(0)]).is_err());
    }

    #[test]
    fn cartan_moves_right() {
        let t = table("gl(2|1)");
        let e = Pbw::new(&t, &RootOrder::standard(&t.rs)).unwrap();
        let a = t.rs.root_from_str("e1-e2").unwrap();
        let u = e.straighten(&[t.cartan_idx(0), a]).unwrap();
        let (m, c) = u.terms.iter().next().unwrap();
        assert_eq!(e.mono_weight(m), vec![1, -1, 0]);
        assert_eq!(*c, HPoly::var(0).sub(&HPoly::one()));
    }

    #[test]
    fn ad_sign_gl21() {
        let t = table("gl(2|1)");
        let o = order(&t, &["e1-e2", "e1-d1", "e2-d1"]);
        let e = Pbw::new(&t, &o).unwrap();
        let a = t.rs.root_from_str("e1-e2").unwrap();
        let b = t.rs.root_from_str("e2-d1").unwrap();
        let z: Elem<Q> = e.root_elem(b);
        assert_eq!(e.ad(a, &z), Elem::mono(vec![0, 1, 0], -Q::one()));
        assert!(e.ad_pow(a, 2, &z).is_zero());
    }

    #[test]
    fn reorder_round_trip_and_divide() {
        let t = table("osp(2,4)");
        let rs = &t.rs;
        let e1 = Pbw::new(&t, &RootOrder::standard(rs)).unwrap();
        let e2 = Pbw::new(&t, &RootOrder::standard(rs).reversed()).unwrap();
        let gens: Vec<usize> = (0..rs.num_positive()).collect();
        let mut u: Elem<Q> = Elem::one(e1.ngens());
        for &g in gens.iter().rev().take(4) {
            u = e1.mul(&e1.root_elem(g), &u);
        }
        let v = e2.reorder_from(&e1, &u);
        assert_eq!(e1.reorder_from(&e2, &v), u);
        let a = rs.root_from_str("d1-d2").unwrap();
        let o3 = RootOrder::standard(rs).move_last(a);
        let e3 = Pbw::new(&t, &o3).unwrap();
        let w = e3.rmul_root_pow(&e3.reorder_from(&e1, &u), a, 2);
        assert_eq!(e3.divide_right_power(&w, a, 2).unwrap(), e3.reorder_from(&e1, &u));
        let b = rs.root_from_str("e1-d1").unwrap();
        let single: Elem<Q> = e3.rmul_root_pow(&e3.root_elem(b), a, 1);
        assert!(matches!(e3.divide_right_power(&single, a, 2), Err(Error::NotDivisible(_))));
    }

    #[test]
    fn power_commute_matches_multiplication() {
        let t = table("gl(2|2)");
        let rs = &t.rs;
        let a = rs.root_from_str("e1-e2").unwrap();
        let e = Pbw::new(&t, &RootOrder::standard(rs).move_last(a)).unwrap();
        let z: Elem<Q> = e.mul(&e.root_elem(rs.root_from_str("e2-d1").unwrap()), &e.root_elem(rs.root_from_str("d1-d2").unwrap()));
        for r in 0..=4 {
            let direct = e.mul(&e.rmul_root_pow(&Elem::one(e.ngens()), a, r), &z);
            assert_eq!(e.power_commute(a, r, &z), direct, "r = {r}");
        }
    }

    #[test]
    fn odd_power_commute_matches_multiplication() {
        let rs = RootSystem::from_name("osp(3,2)", BasisChoice::AntiDistinguished).unwrap();
        let t = StructureTable::realize(&rs).unwrap();
        let x = rs.root_from_str("d1").unwrap();
        let e = Pbw::new(&t, &RootOrder::standard(&rs).move_last(x)).unwrap();
        for zr in ["e1-d1", "e1"] {
            let z: Elem<Q> = e.root_elem(rs.root_from_str(zr).unwrap());
            for l in 0..=2 {
                let direct = e.mul(&e.rmul_root_pow(&Elem::one(e.ngens()), x, 2 * l + 1), &z);
                assert_eq!(e.odd_power_commute(x, l, &z), direct, "{zr} l = {l}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let t = table("gl(2|1)");
        let e = Pbw::new(&t, &RootOrder::standard(&t.rs)).unwrap();
        let mut u = Elem::zero();
        u.add_term(vec![1, 0, 1], HPoly::var(0).scale(&Q::new(3, 2)));
        u.add_term(vec![0, 1, 0], HPoly::one());
        let v = e.to_json(&u);
        assert_eq!(e.from_json(&v).unwrap(), u);
        let e2 = Pbw::new(&t, &RootOrder::standard(&t.rs).reversed()).unwrap();
        assert_eq!(e2.from_json(&v).unwrap(), e2.reorder_from(&e, &u));
    }
}
