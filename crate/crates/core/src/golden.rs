//! Closed forms for the rank-three elements of osp(2,4) and sp(6).
//!
//! Simple roots are written `b, a1, a2`. The weight functions are
//! `p = -(λ+ρ, (a1+a2)^∨)`, `q = -(λ+ρ, (2a1+a2)^∨)`, `r = -(λ+ρ, a1^∨)`
//! for `b+2a1+a2`; `p = -(λ+ρ, (a1+a2)^∨)`, `q = -(λ+ρ, a2^∨)` for
//! `b+a1+a2`; and `p = -(λ+ρ, a1^∨)` for `b+a1`.

use crate::error::{Error, Result};
use crate::hpoly::HPoly;
use crate::liealg::StructureTable;
use crate::linalg;
use crate::rational::Q;
use crate::rootdata::{Family, RootSystem, Weight};
use crate::shap::construct;
use crate::uea::{Elem, Pbw, RootOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Root with coefficients `(b, a1, a2)` on the last three simple roots.
pub fn root(rs: &RootSystem, b: i64, a1: i64, a2: i64) -> Result<usize> {
    if !matches!(rs.family, Family::Osp24 | Family::Sp) || rs.simple.len() < 3 {
        return Err(Error::Domain("needs osp(2,4) or sp(2n) with n >= 3".into()));
    }
    let l = rs.simple.len();
    let mut v = vec![0i64; rs.rank()];
    for (c, s) in [(b, l - 3), (a1, l - 2), (a2, l - 1)] {
        for (x, y) in v.iter_mut().zip(&rs.positive[rs.simple[s]].coeffs) {
            *x += c * y;
        }
    }
    rs.root_index(&v).ok_or_else(|| Error::Domain("not a positive root".into()))
}

fn split(rs: &RootSystem, tail: &[(i64, i64, i64)]) -> Result<(Vec<usize>, Vec<usize>)> {
    root(rs, 1, 0, 0)?;
    let l = rs.simple.len();
    let b_coeff = |i: usize| rs.simple_coeffs[i][l - 3];
    let mut odd: Vec<usize> = (0..rs.num_positive()).filter(|&i| b_coeff(i) % 2 == 1).collect();
    odd.sort_by_key(|&i| rs.height(i));
    let tail: Vec<usize> = tail.iter().map(|&(b, a1, a2)| root(rs, b, a1, a2)).collect::<Result<_>>()?;
    let mut even: Vec<usize> =
        (0..rs.num_positive()).filter(|&i| b_coeff(i) % 2 == 0 && !tail.contains(&i)).collect();
    even.sort_by_key(|&i| -rs.height(i));
    even.extend(tail);
    Ok((odd, even))
}

/// Roots with odd `b`-coefficient by ascending height, then the rest by
/// descending height ending `2a1+a2, a1+a2, a2, a1`.
pub fn cosp(rs: &RootSystem) -> Result<RootOrder> {
    let (odd, even) = split(rs, &[(0, 2, 1), (0, 1, 1), (0, 0, 1), (0, 1, 0)])?;
    RootOrder::from_roots(rs, &[odd, even].concat())
}

pub fn cosp_opposite(rs: &RootSystem) -> Result<RootOrder> {
    Ok(cosp(rs)?.reversed())
}

/// As `cosp` but ending `2a1+a2, a1+a2, a1, a2`.
pub fn cosp_a2_last(rs: &RootSystem) -> Result<RootOrder> {
    let (odd, even) = split(rs, &[(0, 2, 1), (0, 1, 1), (0, 1, 0), (0, 0, 1)])?;
    RootOrder::from_roots(rs, &[odd, even].concat())
}

fn neg_shifted(rs: &RootSystem, r: usize) -> Result<HPoly> {
    let a = &rs.positive[r];
    Ok(HPoly::affine(&rs.coroot_functional(a)?, &rs.copair(&rs.rho, a)?).neg())
}

/// The weight functions `(p, q, r)` attached to `b+2a1+a2`.
pub fn pqr(rs: &RootSystem) -> Result<(HPoly, HPoly, HPoly)> {
    Ok((
        neg_shifted(rs, root(rs, 0, 1, 1)?)?,
        neg_shifted(rs, root(rs, 0, 2, 1)?)?,
        neg_shifted(rs, root(rs, 0, 1, 0)?)?,
    ))
}

/// The weight functions `(p, q)` attached to `b+a1+a2`.
pub fn pq2(rs: &RootSystem) -> Result<(HPoly, HPoly)> {
    Ok((neg_shifted(rs, root(rs, 0, 1, 1)?)?, neg_shifted(rs, root(rs, 0, 0, 1)?)?))
}

type Term = (HPoly, Vec<(i64, i64, i64)>);

fn build(pbw: &Pbw, terms: &[Term]) -> Result<Elem<HPoly>> {
    let rs = pbw.rs();
    let mut out = Elem::zero();
    for (c, word) in terms {
        let mut u = Elem::<HPoly>::one(pbw.ngens());
        for &(b, a1, a2) in word.iter().rev() {
            u = pbw.mul(&pbw.root_elem(root(rs, b, a1, a2)?), &u);
        }
        out.add_scaled(&u, c);
    }
    Ok(out)
}

fn k(c: i64) -> HPoly {
    HPoly::constant(Q::int(c))
}

const B: (i64, i64, i64) = (1, 0, 0);
const A1: (i64, i64, i64) = (0, 1, 0);
const A2: (i64, i64, i64) = (0, 0, 1);
const BA1: (i64, i64, i64) = (1, 1, 0);
const A1A2: (i64, i64, i64) = (0, 1, 1);
const A1A1A2: (i64, i64, i64) = (0, 2, 1);
const BA1A2: (i64, i64, i64) = (1, 1, 1);
const TOP: (i64, i64, i64) = (1, 2, 1);

/// `θ_{b+a1}` in `cosp` (first) and `cosp-opposite` (second) order.
pub fn theta1(pbw: &Pbw, opposite: bool) -> Result<Elem<HPoly>> {
    let p = neg_shifted(pbw.rs(), root(pbw.rs(), 0, 1, 0)?)?;
    if opposite {
        build(pbw, &[(p, vec![BA1]), (k(1), vec![A1, B])])
    } else {
        build(pbw, &[(p.add(&k(1)), vec![BA1]), (k(1), vec![B, A1])])
    }
}

/// `θ_{b+a1+a2}` in `cosp_a2_last` order, or its reverse.
pub fn theta2(pbw: &Pbw, opposite: bool) -> Result<Elem<HPoly>> {
    let (p, q) = pq2(pbw.rs())?;
    if opposite {
        build(
            pbw,
            &[
                (p.mul(&q), vec![BA1A2]),
                (p, vec![A2, BA1]),
                (k(1), vec![A2, A1, B]),
                (q.neg(), vec![A1A2, B]),
            ],
        )
    } else {
        let p1 = p.add(&k(1));
        let q1 = q.add(&k(1));
        build(
            pbw,
            &[
                (p1.mul(&q1), vec![BA1A2]),
                (p1, vec![BA1, A2]),
                (k(1), vec![B, A1, A2]),
                (q1.neg(), vec![B, A1A2]),
            ],
        )
    }
}

/// `θ_{b+2a1+a2}` in `cosp` order, or `cosp-opposite` order.
pub fn theta3(pbw: &Pbw, opposite: bool) -> Result<Elem<HPoly>> {
    let (p, q, r) = pqr(pbw.rs())?;
    let half = Q::new(1, 2);
    if opposite {
        build(
            pbw,
            &[
                (p.mul(&q).mul(&r), vec![TOP]),
                (p.mul(&q), vec![A1, BA1A2]),
                (q.mul(&r), vec![A1A2, BA1]),
                (r.mul(&p.add(&k(1))).scale(&-half), vec![A1A1A2, B]),
                (q.scale(&Q::int(2)), vec![A1, A2, BA1]),
                (r.sub(&q).sub(&k(1)), vec![A1, A1A2, B]),
                (k(1), vec![A1, A1, A2, B]),
            ],
        )
    } else {
        let (p1, q1, r1) = (p.add(&k(1)), q.add(&k(1)), r.add(&k(1)));
        build(
            pbw,
            &[
                (p1.mul(&q1).mul(&r1), vec![TOP]),
                (p1.mul(&q1), vec![BA1A2, A1]),
                (q1.mul(&r1), vec![BA1, A1A2]),
                (p.mul(&r1).scale(&-half), vec![B, A1A1A2]),
                (q1.scale(&Q::int(2)), vec![BA1, A2, A1]),
                (r.sub(&q).add(&k(1)), vec![B, A1A2, A1]),
                (k(1), vec![B, A2, A1, A1]),
            ],
        )
    }
}

#[derive(Clone, Debug)]
pub struct FixtureResult {
    pub name: String,
    pub passed: bool,
}

/// Compares the constructed elements with the closed forms as polynomial
/// families on the whole weight space.
pub fn check_closed_forms(t: &StructureTable) -> Result<Vec<FixtureResult>> {
    let rs = &t.rs;
    let mut out = Vec::new();
    type Case<'a> = (&'a str, (i64, i64, i64), RootOrder, bool, u8);
    let cases: [Case; 6] = [
        ("b+a1, cosp", BA1, cosp(rs)?, false, 1),
        ("b+a1, cosp-opposite", BA1, cosp_opposite(rs)?, true, 1),
        ("b+a1+a2, a2 last", BA1A2, cosp_a2_last(rs)?, false, 2),
        ("b+a1+a2, reversed", BA1A2, cosp_a2_last(rs)?.reversed(), true, 2),
        ("b+2a1+a2, cosp", TOP, cosp(rs)?, false, 3),
        ("b+2a1+a2, cosp-opposite", TOP, cosp_opposite(rs)?, true, 3),
    ];
    for (name, g, order, opp, which) in cases {
        let gamma = root(rs, g.0, g.1, g.2)?;
        let pbw = Pbw::new(t, &order)?;
        let expected = match which {
            1 => theta1(&pbw, opp)?,
            2 => theta2(&pbw, opp)?,
            _ => theta3(&pbw, opp)?,
        };
        let got = construct(t, gamma, 1, &order)?;
        let passed = got.elem == expected;
        out.push(FixtureResult { name: format!("{} {name}", rs.name()), passed });
    }
    Ok(out)
}

/// Random points with `Σ c_k λ_k = d` for each given equation.
pub fn sample_affine(dim: usize, eqs: &[(Vec<Q>, Q)], count: usize, seed: u64) -> Result<Vec<Weight>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..count {
        let mut rows: Vec<Vec<Q>> = eqs.iter().map(|e| e.0.clone()).collect();
        let mut rhs: Vec<Q> = eqs.iter().map(|e| e.1.clone()).collect();
        for j in 0..dim {
            let mut cand = rows.clone();
            let mut e = vec![Q::zero(); dim];
            e[j] = Q::one();
            cand.push(e);
            if linalg::rank(&cand) > linalg::rank(&rows) {
                rows = cand;
                rhs.push(Q::new(rng.gen_range(-40..=40), rng.gen_range(1..=3)));
            }
        }
        let x = linalg::solve(&rows, &rhs).ok_or_else(|| Error::Sampling("inconsistent constraints".into()))?;
        out.push(x);
    }
    Ok(out)
}

/// Checks `θ_γ(λ) = θ_a(λ - b) θ_b(λ)` on `H_γ` where one weight function
/// takes a given value.
#[allow(clippy::too_many_arguments)]
fn factor_case(
    t: &StructureTable,
    order: &RootOrder,
    gamma: usize,
    func: &HPoly,
    value: i64,
    a: usize,
    b: usize,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let rs = &t.rs;
    let pbw = Pbw::new(t, order)?;
    let big = construct(t, gamma, 1, order)?;
    let ta = construct(t, a, 1, order)?;
    let tb = construct(t, b, 1, order)?;
    let (hc, hd) = rs.hyperplane(&rs.positive[gamma].coeffs, 1);
    let lin: Vec<Q> = (0..rs.rank())
        .map(|k| {
            let mut e = vec![0u32; rs.rank()];
            e[k] = 1;
            func.terms()
                .find(|(m, _)| **m == crate::hpoly::mono_from_exps(&e))
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Q::zero)
        })
        .collect();
    let cst = func.terms().find(|(m, _)| **m == 0).map(|(_, c)| c.clone()).unwrap_or_else(Q::zero);
    let pts = sample_affine(rs.rank(), &[(hc, hd), (lin, &Q::int(value) - &cst)], samples, seed)?;
    let bw = rs.positive[b].weight();
    for lam in pts {
        let shifted: Weight = lam.iter().zip(&bw).map(|(x, y)| x - y).collect();
        let prod = pbw.mul(&ta.elem.specialize(&shifted), &tb.elem.specialize(&lam));
        if prod != big.elem.specialize(&lam) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The factorizations of the rank-three elements at `p, q, r ∈ {0, -1}`.
pub fn check_factorizations(t: &StructureTable, samples: usize, seed: u64) -> Result<Vec<FixtureResult>> {
    let rs = &t.rs;
    let r = |c: (i64, i64, i64)| root(rs, c.0, c.1, c.2);
    let (p3, q3, r3) = pqr(rs)?;
    let (_, q2) = pq2(rs)?;
    let o3 = cosp(rs)?;
    let o2 = cosp_a2_last(rs)?;
    let cases: Vec<(&str, &RootOrder, usize, &HPoly, i64, usize, usize)> = vec![
        ("θ3 at p=0", &o3, r(TOP)?, &p3, 0, r(A1A2)?, r(BA1)?),
        ("θ3 at q=0", &o3, r(TOP)?, &q3, 0, r(A1A1A2)?, r(B)?),
        ("θ3 at r=0", &o3, r(TOP)?, &r3, 0, r(A1)?, r(BA1A2)?),
        ("θ3 at p=-1", &o3, r(TOP)?, &p3, -1, r(BA1)?, r(A1A2)?),
        ("θ3 at q=-1", &o3, r(TOP)?, &q3, -1, r(B)?, r(A1A1A2)?),
        ("θ3 at r=-1", &o3, r(TOP)?, &r3, -1, r(BA1A2)?, r(A1)?),
        ("θ2 at q=0", &o2, r(BA1A2)?, &q2, 0, r(A2)?, r(BA1)?),
        ("θ2 at q=-1", &o2, r(BA1A2)?, &q2, -1, r(BA1)?, r(A2)?),
    ];
    let mut out = Vec::new();
    for (i, (name, order, g, f, v, a, b)) in cases.into_iter().enumerate() {
        let passed = factor_case(t, order, g, f, v, a, b, samples, seed + i as u64)?;
        out.push(FixtureResult { name: format!("{} {name}", rs.name()), passed });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::BasisChoice;

    fn table(name: &str) -> StructureTable {
        StructureTable::realize(&RootSystem::from_name(name, BasisChoice::Distinguished).unwrap()).unwrap()
    }

    #[test]
    fn r_is_two_q_minus_p() {
        let rs = RootSystem::from_name("osp(2,4)", BasisChoice::Distinguished).unwrap();
        let (p, q, r) = pqr(&rs).unwrap();
        assert_eq!(r, q.scale(&Q::int(2)).sub(&p));
    }

    #[test]
    fn orders() {
        let rs = RootSystem::from_name("osp(2,4)", BasisChoice::Distinguished).unwrap();
        let names = cosp(&rs).unwrap().names(&rs);
        let expect: Vec<String> = [(1, 0, 0), (1, 1, 0), (1, 1, 1), (1, 2, 1), (0, 2, 1), (0, 1, 1), (0, 0, 1), (0, 1, 0)]
            .iter()
            .map(|&(b, a1, a2)| rs.root_str(root(&rs, b, a1, a2).unwrap()))
            .collect();
        assert_eq!(names, expect);
    }

    #[test]
    fn closed_forms_osp24_and_sp6() {
        for name in ["osp(2,4)", "sp(6)"] {
            let t = table(name);
            for r in check_closed_forms(&t).unwrap() {
                assert!(r.passed, "{}", r.name);
            }
        }
    }

    #[test]
    fn factorizations_osp24() {
        let t = table("osp(2,4)");
        for r in check_factorizations(&t, 3, 1).unwrap() {
            assert!(r.passed, "{}", r.name);
        }
    }
    #[test]
    fn factor_check_rejects_wrong_weight() {
        let t = table("osp(2,4)");
        let rs = &t.rs;
        let (p, _, _) = pqr(rs).unwrap();
        let r = |c: (i64, i64, i64)| root(rs, c.0, c.1, c.2).unwrap();
        let ok = factor_case(&t, &cosp(rs).unwrap(), r(TOP), &p, 3, r(A1A2), r(BA1), 3, 5).unwrap();
        assert!(!ok);
    }
}
