//! Construction of Šapovalov elements `θ_{γ,m}` and checks of their
//! properties.
//!
//! For `γ = wβ` with `β` simple and `w = s_{a_1}…s_{a_k}` of minimal length,
//! the element is built one simple reflection at a time. A step from `γ'`
//! to `γ = s_α γ' = γ' + qα` uses the identity
//!
//! `e_{-α}^{P+mq} θ_{γ',m}(s_α·λ) = θ_{γ,m}(λ) e_{-α}^P`, `P = -(λ+ρ, α^∨)`,
//!
//! in a PBW order with `α` last. The left side is expanded with
//! `(ad e_{-α})^j` and binomials in `P`, so coefficients stay polynomial in
//! `λ`. Terms whose `α`-exponent would drop below `P` must cancel.

use crate::error::{Error, Result};
use crate::hpoly::HPoly;
use crate::liealg::StructureTable;
use crate::linalg;
use crate::rational::Q;
use crate::rootdata::{int_weight, sub, Family, RootSystem, Subgroup, Weight, WeylWord};
use crate::uea::{Elem, Mono, Pbw, RootOrder};
use crate::verma::{ratio, Verma};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Symbolic,
    Evaluated,
    Determinant,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Symbolic => "symbolic",
            Route::Evaluated => "evaluated",
            Route::Determinant => "determinant",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ShapElement {
    pub gamma: usize,
    pub m: u32,
    pub beta: usize,
    pub word: WeylWord,
    pub subgroup: Subgroup,
    pub order: RootOrder,
    pub route: Route,
    /// Coefficients are polynomials on the whole weight space for the
    /// symbolic route, and reduced modulo `H_{γ,m}` for the evaluated route.
    pub elem: Elem<HPoly>,
}

/// Checks the admissibility of `(γ, m)`.
pub fn check_pair(rs: &RootSystem, gamma: usize, m: u32) -> Result<()> {
    let r = &rs.positive[gamma];
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    if r.isotropic && m != 1 {
        return Err(Error::Domain("an isotropic root needs m = 1".into()));
    }
    if r.parity.is_odd() && !r.isotropic && m.is_multiple_of(2) {
        return Err(Error::Domain("an odd non-isotropic root needs odd m".into()));
    }
    if !rs.is_generator(gamma) {
        return Err(Error::Domain("γ must not be twice an odd root".into()));
    }
    Ok(())
}

/// The partition `π⁰` of `mγ` into simple roots, as a monomial.
pub fn pi_zero(pbw: &Pbw, gamma: usize, m: u32) -> Mono {
    let rs = pbw.rs();
    let mut mono = vec![0u16; pbw.ngens()];
    for (pos, &s) in rs.simple.iter().enumerate() {
        let k = rs.simple_coeffs[gamma][pos] * m as i64;
        if k > 0 {
            mono[pbw.gen_pos(s).expect("simple roots are generators")] = k as u16;
        }
    }
    mono
}

/// `θ_{γ,m}` by the symbolic route with the preferred minimal word.
pub fn construct(t: &StructureTable, gamma: usize, m: u32, order: &RootOrder) -> Result<ShapElement> {
    let (beta, word, sub) = t.rs.preferred_word(gamma)?;
    construct_with_word(t, gamma, m, beta, &word, sub, order)
}

/// Affine functional `λ ↦ (λ+ρ, α^∨)`.
fn shifted_copair(rs: &RootSystem, alpha: usize) -> Result<HPoly> {
    let r = &rs.positive[alpha];
    Ok(HPoly::affine(&rs.coroot_functional(r)?, &rs.copair(&rs.rho, r)?))
}

pub fn construct_with_word(
    t: &StructureTable,
    gamma: usize,
    m: u32,
    beta: usize,
    word: &WeylWord,
    subgroup: Subgroup,
    order: &RootOrder,
) -> Result<ShapElement> {
    let rs = &t.rs;
    check_pair(rs, gamma, m)?;
    let chain = root_chain(rs, beta, word)?;
    if chain[0] != rs.positive[gamma].coeffs {
        return Err(Error::Domain("word does not carry β to γ".into()));
    }
    let mut pbw = Pbw::new(t, order)?;
    let mut mono = vec![0u16; pbw.ngens()];
    mono[pbw.gen_pos(beta).ok_or_else(|| Error::Domain("β must be a generator".into()))?] = m as u16;
    let mut theta = Elem::mono(mono, HPoly::one());
    for i in (0..word.len()).rev() {
        let alpha = rs.simple[word.letters[i]];
        let (next_pbw, next) = symbolic_step(t, &pbw, &theta, alpha, &chain[i + 1], &chain[i], m, order)?;
        pbw = next_pbw;
        theta = next;
    }
    let fin = Pbw::new(t, order)?;
    let elem = fin.reorder_from(&pbw, &theta);
    // Odd steps past an odd root contribute a sign to the π⁰ coefficient.
    let p0 = pi_zero(&fin, gamma, m);
    let lead = elem
        .coeff(&p0)
        .and_then(HPoly::as_constant)
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::Internal("coefficient of the simple-root partition is not constant".into()))?;
    let elem = elem.scale(&lead.recip());
    Ok(ShapElement { gamma, m, beta, word: word.clone(), subgroup, order: order.clone(), route: Route::Symbolic, elem })
}

/// `chain[i] = s_{a_{i+1}} … s_{a_k} β`, so `chain[0] = γ` and `chain[k] = β`.
fn root_chain(rs: &RootSystem, beta: usize, word: &WeylWord) -> Result<Vec<Vec<i64>>> {
    let k = word.len();
    let mut chain = vec![Vec::new(); k + 1];
    chain[k] = rs.positive[beta].coeffs.clone();
    for i in (0..k).rev() {
        let a = &rs.positive[rs.simple[word.letters[i]]];
        if a.isotropic {
            return Err(Error::Domain("words may only use non-isotropic reflections".into()));
        }
        chain[i] = rs.reflect_root(a, &chain[i + 1]);
        if rs.root_index(&chain[i]).is_none() {
            return Err(Error::Domain("intermediate root is not positive".into()));
        }
    }
    Ok(chain)
}

#[allow(clippy::too_many_arguments)]
fn symbolic_step<'t>(
    t: &'t StructureTable,
    prev: &Pbw<'t>,
    theta_prev: &Elem<HPoly>,
    alpha: usize,
    gamma_prev: &[i64],
    gamma: &[i64],
    m: u32,
    order: &RootOrder,
) -> Result<(Pbw<'t>, Elem<HPoly>)> {
    let rs = &t.rs;
    let ar = &rs.positive[alpha];
    let odd = ar.parity.is_odd();
    if odd && m != 1 {
        return Err(Error::Domain("odd reflections need m = 1".into()));
    }
    let q = rs.copair(&int_weight(gamma), ar)?.to_i64().ok_or_else(|| Error::Internal("non-integral q".into()))?;
    if q <= 0 || (odd && q != 2) {
        return Err(Error::Internal(format!("unexpected q = {q}")));
    }
    let mq = m as i64 * q;
    let pbw = Pbw::new(t, &order.move_last(alpha))?;
    let last = pbw.ngens() - 1;
    let th = pbw.reorder_from(prev, theta_prev);
    // μ = s_α·λ = λ - (λ+ρ, α^∨) α
    let c = shifted_copair(rs, alpha)?;
    let subs: Vec<HPoly> =
        (0..rs.rank()).map(|k| HPoly::var(k).sub(&c.scale(&Q::int(ar.coeffs[k])))).collect();
    let p = c.neg();
    let top = if odd {
        // ℓ = (P + 1)/2
        p.add(&HPoly::one()).scale(&Q::new(1, 2))
    } else {
        p.add(&HPoly::constant(Q::int(mq)))
    };
    let gp_odd = rs.positive[rs.root_index(gamma_prev).unwrap()].parity.is_odd();
    let mut binoms: Vec<HPoly> = Vec::new();
    let mut coeff_j = |j: u32| -> HPoly {
        let k = if odd { j / 2 } else { j } as usize;
        while binoms.len() <= k {
            let next = top.binomial(binoms.len() as u32);
            binoms.push(next);
        }
        let b = binoms[k].clone();
        if odd && j.is_multiple_of(2) && gp_odd {
            b.neg()
        } else {
            b
        }
    };
    let mut groups: BTreeMap<(Mono, i64), HPoly> = BTreeMap::new();
    for (mono, a) in &th.terms {
        let a2 = a.subst(&subs);
        let mut z: Elem<Q> = Elem::mono(mono.clone(), Q::one());
        let mut j = 0u32;
        while !z.is_zero() {
            let cj = coeff_j(j).mul(&a2);
            for (zm, b) in &z.terms {
                let mut key = zm.clone();
                let e = key[last] as i64 + mq - j as i64;
                key[last] = 0;
                groups.entry((key, e)).or_default().add_assign(&cj.scale(b));
            }
            z = pbw.ad(alpha, &z);
            j += 1;
        }
    }
    let mut out = Elem::zero();
    for ((mut key, e), c) in groups {
        if c.is_zero() {
            continue;
        }
        if e < 0 {
            // Cancelation may hold only on the hyperplane of the new root.
            let red = reduce_mod_hyperplane(rs, gamma, m as i64, &c);
            if !red.is_zero() {
                return Err(Error::Internal(format!(
                    "no cancelation for a term with exponent {e} in the step along {}",
                    rs.root_str(alpha)
                )));
            }
            continue;
        }
        key[last] = e as u16;
        out.add_term(key, c);
    }
    Ok((pbw, out))
}

/// The label coordinate eliminated when reducing modulo `H_{γ,m}`.
pub fn pivot(rs: &RootSystem, gamma: &[i64]) -> usize {
    (0..rs.rank()).find(|&k| gamma[k] * rs.form[k] != 0).expect("nonzero root")
}

/// Substitution eliminating the pivot coordinate on `H_{γ,m}`.
pub fn hyperplane_subs(rs: &RootSystem, gamma: &[i64], m: i64) -> Vec<HPoly> {
    let (c, d) = rs.hyperplane(gamma, m);
    let k = pivot(rs, gamma);
    let inv = c[k].recip();
    (0..rs.rank())
        .map(|j| {
            if j != k {
                return HPoly::var(j);
            }
            let lin: Vec<Q> = c.iter().enumerate().map(|(i, ci)| if i == k { Q::zero() } else { -(ci * &inv) }).collect();
            HPoly::affine(&lin, &(&d * &inv))
        })
        .collect()
}

/// Canonical representative of a polynomial modulo the ideal of `H_{γ,m}`.
pub fn reduce_mod_hyperplane(rs: &RootSystem, gamma: &[i64], m: i64, p: &HPoly) -> HPoly {
    p.subst(&hyperplane_subs(rs, gamma, m))
}

pub fn reduce_elem(rs: &RootSystem, gamma: &[i64], m: i64, u: &Elem<HPoly>) -> Elem<HPoly> {
    let subs = hyperplane_subs(rs, gamma, m);
    u.map_coeffs(|c| c.subst(&subs))
}

/// The sequence `λ_0 = λ, λ_i = s_{a_i}·λ_{i-1}`.
fn dot_chain(rs: &RootSystem, word: &WeylWord, lam: &[Q]) -> Result<Vec<Weight>> {
    let mut out = vec![lam.to_vec()];
    for &l in &word.letters {
        let a = &rs.positive[rs.simple[l]];
        let next = rs.dot_reflect(a, out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

/// `θ_{γ,m}(λ)` computed directly at one weight: each step multiplies by
/// `e_{-α}^{P+mq}` and divides on the right by `e_{-α}^P`.
pub fn construct_at(t: &StructureTable, gamma: usize, m: u32, lam: &[Q], order: &RootOrder) -> Result<Elem<Q>> {
    let (beta, word, _) = t.rs.preferred_word(gamma)?;
    construct_at_word(t, gamma, m, beta, &word, lam, order)
}

#[allow(clippy::too_many_arguments)]
pub fn construct_at_word(
    t: &StructureTable,
    gamma: usize,
    m: u32,
    beta: usize,
    word: &WeylWord,
    lam: &[Q],
    order: &RootOrder,
) -> Result<Elem<Q>> {
    let rs = &t.rs;
    check_pair(rs, gamma, m)?;
    let chain = root_chain(rs, beta, word)?;
    if chain[0] != rs.positive[gamma].coeffs {
        return Err(Error::Domain("word does not carry β to γ".into()));
    }
    let lams = dot_chain(rs, word, lam)?;
    let mut pbw = Pbw::new(t, order)?;
    let mut mono = vec![0u16; pbw.ngens()];
    mono[pbw.gen_pos(beta).ok_or_else(|| Error::Domain("β must be a generator".into()))?] = m as u16;
    let mut theta: Elem<Q> = Elem::mono(mono, Q::one());
    for i in (0..word.len()).rev() {
        let alpha = rs.simple[word.letters[i]];
        let ar = &rs.positive[alpha];
        let mu = &lams[i + 1];
        let pq = rs.copair(&crate::rootdata::add(mu, &rs.rho), ar)?;
        let p = pq
            .to_i64()
            .filter(|&p| p >= 0 && (!ar.parity.is_odd() || p % 2 == 1))
            .ok_or_else(|| Error::Domain(format!("step along {} needs P in the sampling lattice, got {pq}", rs.root_str(alpha))))?;
        let q = rs.copair(&int_weight(&chain[i]), ar)?.to_i64().unwrap();
        let next = Pbw::new(t, &order.move_last(alpha))?;
        let mut cur = next.reorder_from(&pbw, &theta);
        let g = next.ngens() - 1;
        for _ in 0..(p + m as i64 * q) {
            cur = next.lmul_gen(g, &cur);
        }
        theta = next
            .divide_right_power(&cur, alpha, p as u32)
            .map_err(|e| Error::Internal(format!("right division failed: {e}")))?;
        pbw = next;
    }
    let fin = Pbw::new(t, order)?;
    let elem = fin.reorder_from(&pbw, &theta);
    let lead = elem
        .coeff(&pi_zero(&fin, gamma, m))
        .cloned()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::Internal("simple-root partition is missing".into()))?;
    Ok(elem.scale(&lead.recip()))
}

/// Monomials in the given variables of total degree at most `d`.
fn monomials_upto(vars: &[usize], d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(vars: &[usize], k: usize, d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == vars.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=d {
            cur.push(e);
            rec(vars, k + 1, d - e, cur, out);
            cur.pop();
        }
    }
    rec(vars, 0, d, &mut Vec::new(), &mut out);
    out
}

/// `θ_{γ,m}` by interpolating per-weight constructions over the free
/// coordinates of `H_{γ,m}`, with degree bound `m·ht γ - |π|`. Points
/// beyond those needed to determine the interpolant serve as held-out
/// checks.
pub fn construct_evaluated(t: &StructureTable, gamma: usize, m: u32, order: &RootOrder, seed: u64) -> Result<ShapElement> {
    let rs = &t.rs;
    check_pair(rs, gamma, m)?;
    let (beta, word, subgroup) = rs.preferred_word(gamma)?;
    let g = &rs.positive[gamma].coeffs;
    let piv = pivot(rs, g);
    let free: Vec<usize> = (0..rs.rank()).filter(|&k| k != piv).collect();
    let height = rs.height(gamma) * m as i64;
    let pbw = Pbw::new(t, order)?;
    let eta: Vec<i64> = g.iter().map(|c| c * m as i64).collect();
    let parts = rs.enumerate_partitions(&eta);
    let dmax = (height - parts.iter().map(|p| p.degree() as i64).min().unwrap_or(0)).max(0) as u32;
    let nmono = monomials_upto(&free, dmax).len();
    let extra = 6;
    let pts = rs.hyperplane_sample_word(gamma, beta, &word, m as i64, nmono + extra, 4 * (dmax as i64 + 2), seed)?;
    if pts.len() < nmono + 1 {
        return Err(Error::Sampling("too few distinct sample points".into()));
    }
    let vals: Vec<Elem<Q>> =
        pts.iter().map(|p| construct_at_word(t, gamma, m, beta, &word, p, order)).collect::<Result<_>>()?;
    let mut elem = Elem::zero();
    for part in &parts {
        let mono = pbw.partition_to_mono(part)?;
        let d = height - part.degree() as i64;
        let ys: Vec<Q> = vals.iter().map(|v| v.coeff(&mono).cloned().unwrap_or_else(Q::zero)).collect();
        if d < 0 {
            if ys.iter().any(|y| !y.is_zero()) {
                return Err(Error::Verification("coefficient beyond the degree bound".into()));
            }
            continue;
        }
        let basis = monomials_upto(&free, d as u32);
        let rows: Vec<Vec<Q>> = pts
            .iter()
            .map(|p| basis.iter().map(|e| free.iter().zip(e).fold(Q::one(), |acc, (&k, &x)| &acc * &p[k].pow(x))).collect())
            .collect();
        if linalg::rank(&rows) < basis.len() {
            return Err(Error::Sampling("sample points do not determine the interpolant".into()));
        }
        let sol = linalg::solve(&rows, &ys).ok_or_else(|| Error::Verification("held-out point disagrees with the interpolant".into()))?;
        let mut poly = HPoly::zero();
        for (e, c) in basis.iter().zip(sol) {
            let mut exps = vec![0u32; rs.rank()];
            for (&k, &x) in free.iter().zip(e) {
                exps[k] = x;
            }
            poly.add_term(crate::hpoly::mono_from_exps(&exps), c);
        }
        elem.add_term(mono, poly);
    }
    Ok(ShapElement { gamma, m, beta, word, subgroup, order: order.clone(), route: Route::Evaluated, elem })
}

#[derive(Clone, Debug, Default)]
pub struct BoundsReport {
    /// Partitions violating `|π| + deg H_π ≤ m·ht γ`.
    pub x1_violations: Vec<String>,
    /// Whether every term attains the bound.
    pub x1_all_equal: bool,
    pub leading_ok: bool,
    pub leading_constant: Option<Q>,
    pub top_unique: bool,
    /// Violations of `2 deg H_π ≤ 2ℓ(w) + 1 - cg(π)`, when checked.
    pub x2_violations: Vec<String>,
    pub x2_checked: bool,
}

impl BoundsReport {
    pub fn ok(&self) -> bool {
        self.x1_violations.is_empty() && self.leading_ok && self.top_unique && self.x2_violations.is_empty()
    }
}

/// Degree bounds and leading terms of the reduced coefficients.
pub fn verify_bounds(t: &StructureTable, s: &ShapElement) -> Result<BoundsReport> {
    let rs = &t.rs;
    let g = &rs.positive[s.gamma].coeffs;
    let m = s.m as i64;
    let pbw = Pbw::new(t, &s.order)?;
    let red = reduce_elem(rs, g, m, &s.elem);
    let ht = rs.height(s.gamma);
    let mut rep = BoundsReport { x1_all_equal: true, ..Default::default() };
    let mut top_deg = -1i64;
    let mut top_count = 0;
    for (mono, c) in &red.terms {
        let d = c.degree().map(|x| x as i64).unwrap_or(-1);
        let len = pbw.mono_degree(mono) as i64;
        if len + d > m * ht {
            rep.x1_violations.push(format!("{} (|π| = {len}, deg = {d})", pbw.render(&Elem::mono(mono.clone(), c.clone()))));
        }
        if len + d != m * ht {
            rep.x1_all_equal = false;
        }
        match d.cmp(&top_deg) {
            std::cmp::Ordering::Greater => {
                top_deg = d;
                top_count = 1;
            }
            std::cmp::Ordering::Equal => top_count += 1,
            _ => {}
        }
    }
    let mut pg = vec![0u16; pbw.ngens()];
    pg[pbw.gen_pos(s.gamma).unwrap()] = s.m as u16;
    let h_top = red.coeff(&pg).cloned().unwrap_or_default();
    rep.top_unique = top_count == 1 && h_top.degree().map(|d| d as i64) == Some(top_deg);
    if s.subgroup == Subgroup::Even {
        let mut prod = HPoly::one();
        for a in rs.n_set(&s.word) {
            let q = rs.q_factor(&s.word, s.beta, a)?;
            let h = HPoly::affine(&rs.root_functional(&rs.positive[a].coeffs), &Q::zero());
            prod = prod.mul(&h.pow((m * q) as u32));
        }
        let expected = reduce_mod_hyperplane(rs, g, m, &prod).top_component();
        let got = h_top.top_component();
        rep.leading_constant = got.ratio_to(&expected);
        rep.leading_ok = rep.leading_constant.is_some() && got.degree() == Some((m * (ht - 1)) as u32);
    } else {
        rep.leading_ok = true;
    }
    if s.subgroup == Subgroup::Nonisotropic && s.m == 1 {
        rep.x2_checked = true;
        let l = s.word.len() as i64;
        for (mono, c) in &red.terms {
            let d = c.degree().map(|x| x as i64).unwrap_or(-1);
            let cg = pbw.mono_to_partition(mono).clifford_degree(rs) as i64;
            if 2 * d > 2 * l + 1 - cg {
                rep.x2_violations.push(format!("{} (deg = {d}, cg = {cg})", pbw.render(&Elem::mono(mono.clone(), c.clone()))));
            }
        }
    }
    Ok(rep)
}

/// `θ_γ(λ-γ) θ_γ(λ) = 0` for isotropic `γ`, with `λ ∈ H_γ`.
pub fn theta_square_check(t: &StructureTable, s: &ShapElement, lam: &[Q]) -> Result<bool> {
    let rs = &t.rs;
    let r = &rs.positive[s.gamma];
    if !r.isotropic || !rs.on_hyperplane(&r.coeffs, 1, lam) {
        return Err(Error::Domain("needs isotropic γ and λ on its hyperplane".into()));
    }
    let pbw = Pbw::new(t, &s.order)?;
    let a = s.elem.specialize(&sub(lam, &r.weight()));
    let b = s.elem.specialize(lam);
    Ok(pbw.mul(&a, &b).is_zero())
}

/// `θ_{γ,m}(λ) = θ_{γ,1}(λ-(m-1)γ) ⋯ θ_{γ,1}(λ)` with both sides built from
/// the same word.
pub fn theta_power_check(t: &StructureTable, power: &ShapElement, single: &ShapElement, lam: &[Q]) -> Result<bool> {
    let rs = &t.rs;
    if single.m != 1 || single.gamma != power.gamma || single.word != power.word || single.order != power.order {
        return Err(Error::Domain("mismatched elements".into()));
    }
    let pbw = Pbw::new(t, &power.order)?;
    let g = rs.positive[power.gamma].weight();
    let mut prod: Elem<Q> = Elem::one(pbw.ngens());
    for j in 0..power.m {
        let shift: Weight = lam.iter().zip(&g).map(|(x, c)| x - &(c * &Q::int(j as i64))).collect();
        prod = pbw.mul(&single.elem.specialize(&shift), &prod);
    }
    Ok(prod == power.elem.specialize(lam))
}

#[derive(Clone, Debug)]
pub struct BorelChainSample {
    pub lambda: Weight,
    /// Ratio of the sandwich to `∏_{i∈F}(λ+ρ,α_i) θ_γ(λ) v_λ`.
    pub c: Q,
    /// `(g_i h_i, (λ+ρ,α_i)(λ+ρ-γ,α_i))` per link.
    pub links: Vec<(Q, Q)>,
}

/// Compares the odd-reflection sandwich `e_{α_1}…e_{α_r} e_{-γ} e_{-α_r}…e_{-α_1} v_λ`
/// with `θ_γ(λ)v_λ`, and checks the link constants `g_i h_i`.
pub fn borel_chain_check(t: &StructureTable, gamma: usize, lam: &[Q]) -> Result<BorelChainSample> {
    let rs = &t.rs;
    if rs.family != Family::GlSuper || rs.borel != (0..rs.m + rs.n).collect::<Vec<_>>() {
        return Err(Error::Domain("Borel chains start from the distinguished gl(m|n) Borel".into()));
    }
    let chain = rs.borel_chain(gamma)?;
    let g = &rs.positive[gamma].coeffs;
    let lr = crate::rootdata::add(lam, &rs.rho);
    let gw = int_weight(g);
    let lrg = sub(&lr, &gw);
    for &a in &chain.odd_roots {
        let aw = rs.positive[a].weight();
        if rs.pair(&lr, &aw).is_zero() || rs.pair(&lrg, &aw).is_zero() {
            return Err(Error::Sampling("atypical link".into()));
        }
    }
    let order = RootOrder::standard(rs);
    let verma = Verma::new(t, &order)?;
    let pbw = &verma.pbw;
    // Sandwich.
    let mut v: Elem<Q> = Elem::one(pbw.ngens());
    for &a in &chain.odd_roots {
        v = verma.act_at(t.neg_idx(a), &v, lam);
    }
    v = verma.act_at(t.neg_idx(gamma), &v, lam);
    for &a in chain.odd_roots.iter().rev() {
        v = verma.act_at(t.pos_idx(a), &v, lam);
    }
    let theta = construct(t, gamma, 1, &order)?.elem.specialize(lam);
    let mut f = Q::one();
    for &i in &chain.f_set {
        f = &f * &rs.pair(&lr, &rs.positive[chain.odd_roots[i]].weight());
    }
    let c = ratio(&v, &theta.scale(&f)).ok_or_else(|| Error::Verification("sandwich is not proportional to θ_γ(λ)v_λ".into()))?;
    // Link constants: θ^{(i)} is the singular vector for the i-th Borel.
    let mut thetas: Vec<Elem<Q>> = Vec::new();
    let mut vecs: Vec<Elem<Q>> = vec![Elem::one(pbw.ngens())];
    for (i, seq) in chain.borels.iter().enumerate() {
        if i > 0 {
            let a = chain.odd_roots[i - 1];
            let prev = vecs.last().unwrap().clone();
            vecs.push(verma.act_at(t.neg_idx(a), &prev, lam));
        }
        let inst_rs = RootSystem::gl_super_with_borel(rs.m, rs.n, seq.clone())?;
        let inst_t = StructureTable::realize(&inst_rs)?;
        let inst_order = RootOrder::standard(&inst_rs);
        let inst = Verma::new(&inst_t, &inst_order)?;
        let mut lam_i = lam.to_vec();
        for &a in &chain.odd_roots[..i] {
            lam_i = sub(&lam_i, &rs.positive[a].weight());
        }
        let ig = inst_rs.root_index(g).ok_or_else(|| Error::Internal("γ not positive in the chain".into()))?;
        let norm = pi_zero(&inst.pbw, ig, 1);
        let th = inst
            .singular_vector(g, &lam_i, &norm)?
            .ok_or_else(|| Error::Sampling("singular space is not one-dimensional".into()))?;
        // Apply θ^{(i)} to v_i inside M(λ).
        let mut w = vecs[i].clone();
        let mut total = Elem::zero();
        for (mono, c) in &th.terms {
            w.clone_from(&vecs[i]);
            for &gp in inst.pbw.mono_word(mono).iter().rev() {
                let mat = inst_t.neg[inst.pbw.gens[gp]].clone();
                let lin = t.decompose(&mat).ok_or_else(|| Error::Internal("root vector outside the algebra".into()))?;
                w = verma.act_lin_at(&lin, &w, lam);
            }
            total.add_scaled_q(&w, c);
        }
        thetas.push(total);
    }
    let mut links = Vec::new();
    for (i, &a) in chain.odd_roots.iter().enumerate() {
        // e_{-α}θ^{(i)} e_{α} v_{i+1} = g θ^{(i+1)} v_{i+1}
        let ev = verma.act_at(t.pos_idx(a), &vecs[i + 1], lam);
        let s = ratio(&ev, &vecs[i]).ok_or_else(|| Error::Internal("e_α v_{i+1} not proportional to v_i".into()))?;
        let lhs = verma.act_at(t.neg_idx(a), &thetas[i], lam).scale(&s);
        let gi = ratio(&lhs, &thetas[i + 1]).ok_or_else(|| Error::Verification("link g is not a scalar".into()))?;
        // e_α θ^{(i+1)} e_{-α} v_i = h θ^{(i)} v_i, where θ^{(i+1)} e_{-α} v_i = θ^{(i+1)} v_{i+1}.
        let rhs = verma.act_at(t.pos_idx(a), &thetas[i + 1], lam);
        let hi = ratio(&rhs, &thetas[i]).ok_or_else(|| Error::Verification("link h is not a scalar".into()))?;
        let aw = rs.positive[a].weight();
        let expect = &rs.pair(&lr, &aw) * &rs.pair(&lrg, &aw);
        links.push((&gi * &hi, expect));
    }
    Ok(BorelChainSample { lambda: lam.to_vec(), c, links })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::BasisChoice;

    fn table(name: &str) -> StructureTable {
        StructureTable::realize(&RootSystem::from_name(name, BasisChoice::Distinguished).unwrap()).unwrap()
    }

    #[test]
    fn simple_root_is_a_power() {
        let t = table("sl(2)");
        let o = RootOrder::standard(&t.rs);
        let s = construct(&t, 0, 3, &o).unwrap();
        assert_eq!(s.elem, Elem::mono(vec![3], HPoly::one()));
    }

    #[test]
    fn gl21_two_term_element() {
        let t = table("gl(2|1)");
        let rs = &t.rs;
        let o = RootOrder::parse(rs, "e1-e2,e1-d1,e2-d1").unwrap();
        let g = rs.root_from_str("e1-d1").unwrap();
        let s = construct(&t, g, 1, &o).unwrap();
        let a1 = shifted_copair(rs, rs.root_from_str("e1-e2").unwrap()).unwrap();
        let mut expect = Elem::zero();
        expect.add_term(vec![1, 0, 1], HPoly::one());
        expect.add_term(vec![0, 1, 0], a1);
        assert_eq!(s.elem, expect);
    }

    #[test]
    fn sl3_against_singular_solve() {
        let t = table("sl(3)");
        let rs = &t.rs;
        let o = RootOrder::standard(rs);
        let g = rs.root_from_str("e1-e3").unwrap();
        let s = construct(&t, g, 1, &o).unwrap();
        let v = Verma::new(&t, &o).unwrap();
        for lam in rs.hyperplane_sample(g, 1, 5, 6, 3).unwrap() {
            let at = s.elem.specialize(&lam);
            let norm = pi_zero(&v.pbw, g, 1);
            let sol = v.singular_vector(&rs.positive[g].coeffs, &lam, &norm).unwrap().unwrap();
            assert_eq!(at, sol);
            assert_eq!(construct_at(&t, g, 1, &lam, &o).unwrap(), at);
        }
    }

    #[test]
    fn evaluated_route_matches_symbolic() {
        for (name, gs, m) in [("gl(2|1)", "e1-d1", 1), ("sl(3)", "e1-e3", 2), ("gl(2|2)", "e1-d2", 1)] {
            let t = table(name);
            let rs = &t.rs;
            let o = RootOrder::standard(rs);
            let g = rs.root_from_str(gs).unwrap();
            let s = construct(&t, g, m, &o).unwrap();
            let e = construct_evaluated(&t, g, m, &o, 11).unwrap();
            assert_eq!(reduce_elem(rs, &rs.positive[g].coeffs, m as i64, &s.elem), e.elem, "{name}");
        }
    }

    #[test]
    fn odd_step_on_osp32() {
        let rs = RootSystem::from_name("osp(3,2)", BasisChoice::AntiDistinguished).unwrap();
        let t = StructureTable::realize(&rs).unwrap();
        let o = RootOrder::standard(&rs);
        let g = rs.root_from_str("e1+d1").unwrap();
        let s = construct(&t, g, 1, &o).unwrap();
        assert_eq!(s.subgroup, Subgroup::Nonisotropic);
        let v = Verma::new(&t, &o).unwrap();
        for lam in rs.hyperplane_sample(g, 1, 10, 7, 5).unwrap() {
            let at = s.elem.specialize(&lam);
            assert_eq!(construct_at(&t, g, 1, &lam, &o).unwrap(), at);
            assert!(v.is_highest_weight(&at, &lam));
        }
        let rep = verify_bounds(&t, &s).unwrap();
        assert!(rep.x2_checked && rep.ok(), "{rep:?}");
    }

    #[test]
    fn isotropic_square_vanishes() {
        let t = table("gl(2|2)");
        let rs = &t.rs;
        let g = rs.root_from_str("e1-d2").unwrap();
        let s = construct(&t, g, 1, &RootOrder::standard(rs)).unwrap();
        for lam in rs.hyperplane_sample(g, 1, 4, 6, 9).unwrap() {
            assert!(theta_square_check(&t, &s, &lam).unwrap());
        }
    }

    #[test]
    fn powers_on_sl3() {
        let t = table("sl(3)");
        let rs = &t.rs;
        let o = RootOrder::standard(rs);
        let g = rs.root_from_str("e1-e3").unwrap();
        let one = construct(&t, g, 1, &o).unwrap();
        for m in [2, 3] {
            let s = construct(&t, g, m, &o).unwrap();
            for lam in rs.hyperplane_sample(g, m as i64, 4, 6, 2).unwrap() {
                assert!(theta_power_check(&t, &s, &one, &lam).unwrap());
            }
            assert!(verify_bounds(&t, &s).unwrap().ok());
        }
    }

    #[test]
    fn borel_chain_gl21() {
        let t = table("gl(2|1)");
        let rs = &t.rs;
        let g = rs.root_from_str("e1-d1").unwrap();
        let mut cs = Vec::new();
        for lam in rs.hyperplane_sample(g, 1, 6, 9, 4).unwrap() {
            let Ok(s) = borel_chain_check(&t, g, &lam) else { continue };
            for (a, b) in &s.links {
                assert_eq!(a, b);
            }
            cs.push(s.c);
        }
        assert!(cs.len() >= 3);
        assert!(cs.iter().all(|c| *c == cs[0] && !c.is_zero()));
    }
}
