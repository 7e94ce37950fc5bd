//! Exact polynomials on the dual of the Cartan subalgebra.
//!
//! A polynomial is a sparse map from packed exponent vectors to rationals.
//! Variable `k` is the `k`-th coordinate of a weight in the label basis, so a
//! polynomial is evaluated by substituting the coordinates of a weight.

use crate::rational::Q;
use std::collections::BTreeMap;
use std::fmt;

/// Maximum number of variables supported by the packed monomial encoding.
pub const MAX_VARS: usize = 8;
const BITS: u32 = 8;
const MASK: u64 = (1 << BITS) - 1;

/// Packed exponent vector: byte `k` holds the exponent of variable `k`.
pub type PackedMono = u64;

pub fn mono_exp(m: PackedMono, k: usize) -> u32 {
    ((m >> (BITS * k as u32)) & MASK) as u32
}

pub fn mono_degree(m: PackedMono) -> u32 {
    (0..MAX_VARS).map(|k| mono_exp(m, k)).sum()
}

pub fn mono_from_exps(exps: &[u32]) -> PackedMono {
    let mut m = 0u64;
    for (k, &e) in exps.iter().enumerate() {
        assert!(k < MAX_VARS && e as u64 <= MASK, "monomial out of range");
        m |= (e as u64) << (BITS * k as u32);
    }
    m
}

fn mono_mul(a: PackedMono, b: PackedMono) -> PackedMono {
    for k in 0..MAX_VARS {
        assert!(mono_exp(a, k) + mono_exp(b, k) <= MASK as u32, "exponent overflow");
    }
    a + b
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HPoly {
    terms: BTreeMap<PackedMono, Q>,
}

impl HPoly {
    pub fn zero() -> HPoly {
        HPoly::default()
    }

    pub fn constant(c: Q) -> HPoly {
        let mut p = HPoly::zero();
        if !c.is_zero() {
            p.terms.insert(0, c);
        }
        p
    }

    pub fn one() -> HPoly {
        HPoly::constant(Q::one())
    }

    pub fn var(k: usize) -> HPoly {
        let mut exps = vec![0; k + 1];
        exps[k] = 1;
        HPoly::monomial(mono_from_exps(&exps), Q::one())
    }

    pub fn monomial(m: PackedMono, c: Q) -> HPoly {
        let mut p = HPoly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The affine function `x ↦ Σ lin[k] x_k + c`.
    pub fn affine(lin: &[Q], c: &Q) -> HPoly {
        let mut p = HPoly::constant(c.clone());
        for (k, a) in lin.iter().enumerate() {
            if !a.is_zero() {
                p.add_term(mono_from_exps(&unit(k)), a.clone());
            }
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PackedMono, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has degree at most zero.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: PackedMono, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Q::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign(&mut self, o: &HPoly) {
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn add_scaled(&mut self, o: &HPoly, s: &Q) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &o.terms {
            self.add_term(*m, c * s);
        }
    }

    pub fn add(&self, o: &HPoly) -> HPoly {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &HPoly) -> HPoly {
        let mut r = self.clone();
        r.add_scaled(o, &Q::int(-1));
        r
    }

    pub fn neg(&self) -> HPoly {
        self.scale(&Q::int(-1))
    }

    pub fn scale(&self, s: &Q) -> HPoly {
        if s.is_zero() {
            return HPoly::zero();
        }
        HPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &HPoly) -> HPoly {
        let mut r = HPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                r.add_term(mono_mul(*a, *b), x * y);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> HPoly {
        let mut acc = HPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| mono_degree(*m)).max()
    }

    /// The homogeneous component of top degree.
    pub fn top_component(&self) -> HPoly {
        match self.degree() {
            None => HPoly::zero(),
            Some(d) => HPoly {
                terms: self
                    .terms
                    .iter()
                    .filter(|(m, _)| mono_degree(**m) == d)
                    .map(|(m, c)| (*m, c.clone()))
                    .collect(),
            },
        }
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, xk) in x.iter().enumerate().take(MAX_VARS) {
                let e = mono_exp(*m, k);
                if e > 0 {
                    t = &t * &xk.pow(e);
                }
            }
            debug_assert!((x.len()..MAX_VARS).all(|k| mono_exp(*m, k) == 0));
            acc += &t;
        }
        acc
    }

    /// Substitutes polynomial `subs[k]` for variable `k`; variables beyond
    /// `subs.len()` are left in place.
    pub fn subst(&self, subs: &[HPoly]) -> HPoly {
        let mut powers: Vec<Vec<HPoly>> = subs.iter().map(|s| vec![HPoly::one(), s.clone()]).collect();
        let mut r = HPoly::zero();
        for (m, c) in &self.terms {
            let mut t = HPoly::constant(c.clone());
            let mut rest = vec![0u32; MAX_VARS];
            for k in 0..MAX_VARS {
                let e = mono_exp(*m, k) as usize;
                if e == 0 {
                    continue;
                }
                if k < subs.len() {
                    while powers[k].len() <= e {
                        let next = powers[k].last().unwrap().mul(&subs[k]);
                        powers[k].push(next);
                    }
                    t = t.mul(&powers[k][e]);
                } else {
                    rest[k] = e as u32;
                }
            }
            if rest.iter().any(|&e| e > 0) {
                t = t.mul(&HPoly::monomial(mono_from_exps(&rest), Q::one()));
            }
            r.add_assign(&t);
        }
        r
    }

    /// `C(self, i) = self (self-1) ... (self-i+1) / i!`.
    pub fn binomial(&self, i: u32) -> HPoly {
        let mut acc = HPoly::one();
        for k in 0..i {
            acc = acc.mul(&self.sub(&HPoly::constant(Q::int(k as i64))));
            acc = acc.scale(&Q::new(1, k as i128 + 1));
        }
        acc
    }

    /// Returns `c` with `self = c * other` when both are nonzero and
    /// proportional.
    pub fn ratio_to(&self, other: &HPoly) -> Option<Q> {
        if self.is_zero() || other.is_zero() || self.terms.len() != other.terms.len() {
            return None;
        }
        let (m0, c0) = other.terms.iter().next().unwrap();
        let r = self.terms.get(m0)? / c0;
        if other.scale(&r) == *self {
            Some(r)
        } else {
            None
        }
    }

    /// Renders the polynomial using `labels` for the variables.
    pub fn render(&self, labels: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut vars = Vec::new();
            for k in 0..MAX_VARS {
                let e = mono_exp(*m, k);
                if e == 1 {
                    vars.push(labels.get(k).cloned().unwrap_or(format!("x{k}")));
                } else if e > 1 {
                    vars.push(format!("{}^{e}", labels.get(k).cloned().unwrap_or(format!("x{k}"))));
                }
            }
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if vars.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

fn unit(k: usize) -> Vec<u32> {
    let mut v = vec![0; k + 1];
    v[k] = 1;
    v
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

/// The coefficient ring of PBW expansions: exact rationals for elements of
/// `U(n⁻)` and polynomials on the weight space for families of them.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn from_q(q: Q) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, o: &Self);
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, q: &Q) -> Self;
}

impl Coeff for Q {
    fn zero() -> Self {
        Q::zero()
    }
    fn from_q(q: Q) -> Self {
        q
    }
    fn is_zero(&self) -> bool {
        Q::is_zero(self)
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, q: &Q) -> Self {
        self * q
    }
}

impl Coeff for HPoly {
    fn zero() -> Self {
        HPoly::zero()
    }
    fn from_q(q: Q) -> Self {
        HPoly::constant(q)
    }
    fn is_zero(&self) -> bool {
        HPoly::is_zero(self)
    }
    fn add_assign(&mut self, o: &Self) {
        HPoly::add_assign(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        HPoly::mul(self, o)
    }
    fn scale(&self, q: &Q) -> Self {
        HPoly::scale(self, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(k: usize) -> HPoly {
        HPoly::var(k)
    }

    #[test]
    fn ring_laws_on_samples() {
        let a = x(0).add(&HPoly::constant(Q::int(2)));
        let b = x(1).mul(&x(0)).sub(&x(2));
        let c = x(1).pow(2).scale(&Q::new(1, 3));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn eval_and_subst() {
        let p = x(0).mul(&x(1)).add(&HPoly::constant(Q::int(3)));
        let pt = [Q::int(2), Q::int(5)];
        assert_eq!(p.eval(&pt), Q::int(13));
        // x0 -> x1 + 1
        let s = p.subst(&[x(1).add(&HPoly::one()), x(1)]);
        assert_eq!(s.eval(&pt), Q::int(6 * 5 + 3));
    }

    #[test]
    fn binomial_matches_integer_binomial() {
        let p = x(0);
        for n in -3..7 {
            for i in 0..4 {
                assert_eq!(p.binomial(i).eval(&[Q::int(n)]), Q::binomial(&Q::int(n), i));
            }
        }
    }

    #[test]
    fn degree_and_top() {
        let p = x(0).pow(3).add(&x(1)).add(&HPoly::one());
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.top_component(), x(0).pow(3));
        assert_eq!(HPoly::zero().degree(), None);
    }

    #[test]
    fn ratio() {
        let p = x(0).add(&x(1));
        assert_eq!(p.scale(&Q::int(-2)).ratio_to(&p), Some(Q::int(-2)));
        assert_eq!(p.ratio_to(&x(0)), None);
    }
}
