//! Determinantal formulas for gl(m|n) and gl(m).
//!
//! Matrix entries are `e_{i,j}` (1-based, `i > j`), the matrix unit of
//! `gl(m|n)` spanning a negative root space, or constants polynomial in `λ`.
//! Indices `m+1..m+n` are the `δ` coordinates.

use crate::error::{Error, Result};
use crate::hpoly::HPoly;
use crate::liealg::{elementary, StructureTable};
use crate::rational::Q;
use crate::rootdata::{Family, RootSystem, Weight};
use crate::uea::{Elem, Pbw};

#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Zero,
    Unit(usize, usize),
    Const(HPoly),
}

#[derive(Clone, Debug, PartialEq)]
pub struct NcMatrix {
    pub rows: Vec<Vec<Entry>>,
    pub ncols: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

impl NcMatrix {
    pub fn new(nrows: usize, ncols: usize) -> NcMatrix {
        NcMatrix { rows: vec![vec![Entry::Zero; ncols]; nrows], ncols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Deletes one row (0-based).
    pub fn without_row(&self, i: usize) -> NcMatrix {
        let rows = self.rows.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, r)| r.clone()).collect();
        NcMatrix { rows, ncols: self.ncols }
    }

    pub fn with_column(&self, col: Vec<Entry>) -> Result<NcMatrix> {
        if col.len() != self.nrows() {
            return Err(Error::Domain("column length mismatch".into()));
        }
        let rows = self.rows.iter().zip(col).map(|(r, e)| r.iter().cloned().chain([e]).collect()).collect();
        Ok(NcMatrix { rows, ncols: self.ncols + 1 })
    }

    /// Replaces every constant `c` by `c + d`.
    pub fn shift_constants(&self, d: &Q) -> NcMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| match e {
                        Entry::Const(c) => Entry::Const(c.add(&HPoly::constant(d.clone()))),
                        other => other.clone(),
                    })
                    .collect()
            })
            .collect();
        NcMatrix { rows, ncols: self.ncols }
    }

    pub fn render(&self, labels: &[String]) -> String {
        self.rows
            .iter()
            .map(|r| {
                let cells: Vec<String> = r
                    .iter()
                    .map(|e| match e {
                        Entry::Zero => "0".into(),
                        Entry::Unit(i, j) => format!("e_{{{i},{j}}}"),
                        Entry::Const(c) => c.render(labels),
                    })
                    .collect();
                format!("[{}]", cells.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// All permutations of `0..k` with their signs.
pub fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    if k == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(k - 1) {
        // Inserting k-1 at position i adds k-1-i inversions.
        for i in 0..k {
            let mut q = p.clone();
            q.insert(i, k - 1);
            let sign = if (k - 1 - i).is_multiple_of(2) { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// Converts an entry to an element of `U(n⁻)` with polynomial coefficients.
pub fn entry_elem(pbw: &Pbw, e: &Entry) -> Result<Elem<HPoly>> {
    match e {
        Entry::Zero => Ok(Elem::zero()),
        Entry::Const(c) => Ok(Elem::<HPoly>::one(pbw.ngens()).mul_coeff(c)),
        Entry::Unit(i, j) => {
            let t = pbw.t;
            let n = t.v_weights.len();
            if *i < 1 || *j < 1 || *i > n || *j > n || i <= j {
                return Err(Error::Domain(format!("e_{{{i},{j}}} is not a negative root vector")));
            }
            let lin = t
                .decompose(&elementary(n, i - 1, j - 1))
                .ok_or_else(|| Error::Internal("matrix unit outside the algebra".into()))?;
            let mut out = Elem::zero();
            for (a, c) in lin {
                if !t.is_neg(a) {
                    return Err(Error::Internal("matrix unit outside n⁻".into()));
                }
                out.add_scaled_q(&pbw.root_elem(a), &c);
            }
            Ok(out)
        }
    }
}

/// `Σ_w sign(w) b_{w(1),1} ⋯ b_{w(k),k}` or the product in reverse.
pub fn ncdet(pbw: &Pbw, mx: &NcMatrix, dir: Direction) -> Result<Elem<HPoly>> {
    let k = mx.nrows();
    if k != mx.ncols {
        return Err(Error::Domain(format!("{}x{} matrix is not square", k, mx.ncols)));
    }
    let mut cache: Vec<Vec<Option<Elem<HPoly>>>> = vec![vec![None; k]; k];
    for (i, row) in mx.rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if *e != Entry::Zero {
                cache[i][j] = Some(entry_elem(pbw, e)?);
            }
        }
    }
    let mut out = Elem::zero();
    'perm: for (w, sign) in permutations(k) {
        let mut factors = Vec::with_capacity(k);
        for (col, &row) in w.iter().enumerate() {
            match &cache[row][col] {
                Some(x) => factors.push(x),
                None => continue 'perm,
            }
        }
        if dir == Direction::RightToLeft {
            factors.reverse();
        }
        let mut prod = Elem::<HPoly>::one(pbw.ngens());
        for f in factors {
            prod = pbw.mul(&prod, f);
        }
        out.add_scaled_q(&prod, &Q::int(sign));
    }
    Ok(out)
}

fn shifted_coroot(rs: &RootSystem, i: usize, j: usize) -> Result<HPoly> {
    let mut v = vec![0i64; rs.rank()];
    v[i - 1] = 1;
    v[j - 1] = -1;
    let idx = rs.root_index(&v).ok_or_else(|| Error::Domain(format!("no positive root for ({i},{j})")))?;
    let a = &rs.positive[idx];
    Ok(HPoly::affine(&rs.coroot_functional(a)?, &rs.copair(&rs.rho, a)?))
}

fn require_super(rs: &RootSystem, r: usize, s: usize) -> Result<()> {
    if rs.family != Family::GlSuper || rs.borel != (0..rs.m + rs.n).collect::<Vec<_>>() {
        return Err(Error::Domain("needs gl(m|n) with the distinguished Borel".into()));
    }
    if r < 1 || r > rs.m || s < 1 || s > rs.n {
        return Err(Error::Domain(format!("indices r = {r}, s = {s} out of range")));
    }
    Ok(())
}

/// `(λ+ρ, σ_{r,r+j}^∨)` for `j = 1..m-r`.
pub fn a_coeffs(rs: &RootSystem, r: usize) -> Result<Vec<HPoly>> {
    (1..=rs.m - r).map(|j| shifted_coroot(rs, r, r + j)).collect()
}

/// `(λ+ρ, τ_{i,s}^∨)` for `i = 1..s-1`.
pub fn b_coeffs(rs: &RootSystem, s: usize) -> Result<Vec<HPoly>> {
    (1..s).map(|i| shifted_coroot(rs, rs.m + i, rs.m + s)).collect()
}

/// The `(m-r+1) × (m-r)` matrix with first row `e_{r+1,r} … e_{m,r}`.
pub fn a_plus(rs: &RootSystem, r: usize) -> Result<NcMatrix> {
    let m = rs.m;
    let a = a_coeffs(rs, r)?;
    let mut mx = NcMatrix::new(m - r + 1, m - r);
    for j in 0..m - r {
        mx.rows[0][j] = Entry::Unit(r + 1 + j, r);
    }
    for i in 1..=m - r {
        mx.rows[i][i - 1] = Entry::Const(a[i - 1].neg());
        for j in i..m - r {
            mx.rows[i][j] = Entry::Unit(r + 1 + j, r + i);
        }
    }
    Ok(mx)
}

/// The `s × (s-1)` matrix with diagonal `b_1 … b_{s-1}`.
pub fn a_minus(rs: &RootSystem, s: usize) -> Result<NcMatrix> {
    let m = rs.m;
    let b = b_coeffs(rs, s)?;
    let mut mx = NcMatrix::new(s, s - 1);
    for i in 0..s {
        for j in 0..i.min(s - 1) {
            mx.rows[i][j] = Entry::Unit(m + 1 + i, m + 1 + j);
        }
        if i < s - 1 {
            mx.rows[i][i] = Entry::Const(b[i].clone());
        }
    }
    Ok(mx)
}

/// `A⁺` with each `a_i` replaced by `a_i - 1`.
pub fn b_plus(rs: &RootSystem, r: usize) -> Result<NcMatrix> {
    Ok(a_plus(rs, r)?.shift_constants(&Q::one()))
}

/// `A⁻` with each `b_i` replaced by `b_i - 1`.
pub fn b_minus(rs: &RootSystem, s: usize) -> Result<NcMatrix> {
    Ok(a_minus(rs, s)?.shift_constants(&-Q::one()))
}

/// `A⁺` with the column `(e_{m+i,r}, …, e_{m+i,m})ᵀ` adjoined, `i` 1-based.
pub fn c_super(rs: &RootSystem, r: usize, i: usize) -> Result<NcMatrix> {
    let col = (r..=rs.m).map(|k| Entry::Unit(rs.m + i, k)).collect();
    a_plus(rs, r)?.with_column(col)
}

/// The `(t-r) × (t-r)` matrix for `ε_r - ε_t` in gl(m).
pub fn c_gl(rs: &RootSystem, r: usize, t: usize) -> Result<NcMatrix> {
    if !matches!(rs.family, Family::Gl | Family::Sl) || r < 1 || r >= t || t > rs.m {
        return Err(Error::Domain(format!("needs gl(m) and 1 <= r < t <= m, got r = {r}, t = {t}")));
    }
    let k = t - r;
    let mut mx = NcMatrix::new(k, k);
    for j in 0..k {
        mx.rows[0][j] = Entry::Unit(r + 1 + j, r);
    }
    for i in 1..k {
        mx.rows[i][i - 1] = Entry::Const(shifted_coroot(rs, r, r + i)?.neg());
        for j in i..k {
            mx.rows[i][j] = Entry::Unit(r + 1 + j, r + i);
        }
    }
    Ok(mx)
}

/// Where the odd root vectors sit in the determinantal expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Odd root vector rightmost, `A`-matrices.
    OddRight,
    /// Odd root vector leftmost, `B`-matrices.
    OddLeft,
    /// Odd root vectors as an extra column of `A⁺`.
    OddColumn,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::OddRight => "odd-right",
            Variant::OddLeft => "odd-left",
            Variant::OddColumn => "odd-column",
        }
    }

    pub const ALL: [Variant; 3] = [Variant::OddRight, Variant::OddLeft, Variant::OddColumn];
}

fn sign(k: usize) -> Q {
    if k.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

/// `(r, s)` with `γ = ε_r - δ_s`, both 1-based.
pub fn odd_indices(rs: &RootSystem, gamma: usize) -> Result<(usize, usize)> {
    let c = &rs.positive[gamma].coeffs;
    let r = (0..rs.m).find(|&k| c[k] == 1);
    let s = (rs.m..rs.m + rs.n).find(|&k| c[k] == -1);
    match (r, s, c.iter().filter(|&&x| x != 0).count()) {
        (Some(r), Some(s), 2) => Ok((r + 1, s - rs.m + 1)),
        _ => Err(Error::Domain(format!("{} is not of the form e_r - d_s", rs.root_str(gamma)))),
    }
}

/// The determinantal expression as a polynomial family; it equals `θ_γ(λ)`
/// for `λ ∈ H_γ`.
pub fn theta_det_symbolic(pbw: &Pbw, gamma: usize, variant: Variant) -> Result<Elem<HPoly>> {
    let rs = pbw.rs();
    let (r, s) = odd_indices(rs, gamma)?;
    require_super(rs, r, s)?;
    let m = rs.m;
    let mut out = Elem::zero();
    match variant {
        Variant::OddRight | Variant::OddLeft => {
            let (plus, minus) = if variant == Variant::OddRight {
                (a_plus(rs, r)?, a_minus(rs, s)?)
            } else {
                (b_plus(rs, r)?, b_minus(rs, s)?)
            };
            for j in 1..=m - r + 1 {
                let dp = if variant == Variant::OddRight {
                    ncdet(pbw, &plus.without_row(j - 1), Direction::LeftToRight)?
                } else {
                    ncdet(pbw, &plus.without_row(j - 1), Direction::RightToLeft)?
                };
                for i in 1..=s {
                    let dm = if variant == Variant::OddRight {
                        ncdet(pbw, &minus.without_row(i - 1), Direction::RightToLeft)?
                    } else {
                        ncdet(pbw, &minus.without_row(i - 1), Direction::LeftToRight)?
                    };
                    let odd = entry_elem(pbw, &Entry::Unit(m + i, j + r - 1))?;
                    let term = if variant == Variant::OddRight {
                        pbw.mul(&pbw.mul(&dp, &dm), &odd)
                    } else {
                        pbw.mul(&odd, &pbw.mul(&dp, &dm))
                    };
                    out.add_scaled_q(&term, &sign(i + j + r + m));
                }
            }
        }
        Variant::OddColumn => {
            let minus = a_minus(rs, s)?;
            for i in 1..=s {
                let dm = ncdet(pbw, &minus.without_row(i - 1), Direction::RightToLeft)?;
                let dc = ncdet(pbw, &c_super(rs, r, i)?, Direction::LeftToRight)?;
                out.add_scaled_q(&pbw.mul(&dm, &dc), &sign(i + 1));
            }
        }
    }
    Ok(out)
}

/// `θ_γ(λ)` for `γ = ε_r - δ_s` and `λ ∈ H_γ`.
pub fn theta_det(pbw: &Pbw, lam: &[Q], gamma: usize, variant: Variant) -> Result<Elem<Q>> {
    let rs = pbw.rs();
    if !rs.on_hyperplane(&rs.positive[gamma].coeffs, 1, lam) {
        return Err(Error::Domain("λ is not on the hyperplane of γ".into()));
    }
    Ok(theta_det_symbolic(pbw, gamma, variant)?.specialize(lam))
}

/// `(r, t)` with `α = ε_r - ε_t`, both 1-based.
pub fn even_indices(rs: &RootSystem, alpha: usize) -> Result<(usize, usize)> {
    let c = &rs.positive[alpha].coeffs;
    let r = c.iter().position(|&x| x == 1);
    let t = c.iter().position(|&x| x == -1);
    match (r, t) {
        (Some(r), Some(t)) if matches!(rs.family, Family::Gl | Family::Sl) => Ok((r + 1, t + 1)),
        _ => Err(Error::Domain("needs a root ε_r - ε_t of gl(m)".into())),
    }
}

/// `det→(C_λ)` as a polynomial family.
pub fn theta_det_gl_symbolic(pbw: &Pbw, alpha: usize) -> Result<Elem<HPoly>> {
    let (r, t) = even_indices(pbw.rs(), alpha)?;
    ncdet(pbw, &c_gl(pbw.rs(), r, t)?, Direction::LeftToRight)
}

/// `θ_{α,1}(λ)` for `(λ+ρ, α^∨) = 1`.
pub fn theta_det_gl(pbw: &Pbw, lam: &[Q], alpha: usize) -> Result<Elem<Q>> {
    let rs = pbw.rs();
    if !rs.on_hyperplane(&rs.positive[alpha].coeffs, 1, lam) {
        return Err(Error::Domain("(λ+ρ, α^∨) must be 1".into()));
    }
    Ok(theta_det_gl_symbolic(pbw, alpha)?.specialize(lam))
}

/// `C_{λ-(p-1)α} ⋯ C_{λ-α} C_λ` with each factor `det→(C_μ)`.
pub fn c_product(pbw: &Pbw, lam: &[Q], alpha: usize, p: u32) -> Result<Elem<Q>> {
    let single = theta_det_gl_symbolic(pbw, alpha)?;
    let g = pbw.rs().positive[alpha].weight();
    let mut prod = Elem::<Q>::one(pbw.ngens());
    for k in 0..p {
        let mu: Weight = lam.iter().zip(&g).map(|(x, c)| x - &(c * &Q::int(k as i64))).collect();
        prod = pbw.mul(&single.specialize(&mu), &prod);
    }
    Ok(prod)
}

/// For `(λ+ρ, σ_{r,t}^∨) = 1` and `(λ+ρ, σ_{r,u}^∨) = 0` with `r < u < t`,
/// compares `θ_{σ_{r,t}}(λ)` with `θ_{σ_{r,u}}(λ - σ_{u,t}) θ_{σ_{u,t}}(λ)`.
pub fn block_factor_check(pbw: &Pbw, lam: &[Q], r: usize, u: usize, t: usize) -> Result<bool> {
    let rs = pbw.rs();
    if !(r < u && u < t) {
        return Err(Error::Domain("needs r < u < t".into()));
    }
    let idx = |i: usize, j: usize| -> Result<usize> {
        let mut v = vec![0i64; rs.rank()];
        v[i - 1] = 1;
        v[j - 1] = -1;
        rs.root_index(&v).ok_or_else(|| Error::Domain("not a positive root".into()))
    };
    let lam_q: Vec<Q> = lam.to_vec();
    if shifted_coroot(rs, r, u)?.eval(&lam_q) != Q::zero() {
        return Err(Error::Domain("(λ+ρ, σ_{r,u}^∨) must vanish".into()));
    }
    let whole = theta_det_gl(pbw, lam, idx(r, t)?)?;
    let right = theta_det_gl(pbw, lam, idx(u, t)?)?;
    let w = rs.positive[idx(u, t)?].weight();
    let shifted: Weight = lam.iter().zip(&w).map(|(x, y)| x - y).collect();
    let left = theta_det_gl(pbw, &shifted, idx(r, u)?)?;
    Ok(pbw.mul(&left, &right) == whole)
}

/// Runs `f` with a fresh engine in the standard order.
pub fn with_engine<T>(t: &StructureTable, f: impl FnOnce(&Pbw) -> Result<T>) -> Result<T> {
    let pbw = Pbw::new(t, &crate::uea::RootOrder::standard(&t.rs))?;
    f(&pbw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::BasisChoice;
    use crate::shap::{construct_at, reduce_mod_hyperplane};
    use crate::uea::RootOrder;

    fn table(name: &str) -> StructureTable {
        StructureTable::realize(&RootSystem::from_name(name, BasisChoice::Distinguished).unwrap()).unwrap()
    }

    fn gen(pbw: &Pbw, i: usize, j: usize) -> Elem<Q> {
        entry_elem(pbw, &Entry::Unit(i, j)).unwrap().specialize(&[])
    }

    #[test]
    fn permutation_signs() {
        let ps = permutations(3);
        assert_eq!(ps.len(), 6);
        for (p, s) in ps {
            let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(s, if inv % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn small_determinants() {
        let t = table("gl(2|1)");
        with_engine(&t, |pbw| {
            assert_eq!(ncdet(pbw, &NcMatrix::new(0, 0), Direction::LeftToRight)?, Elem::one(pbw.ngens()));
            let mut one = NcMatrix::new(1, 1);
            one.rows[0][0] = Entry::Unit(3, 1);
            assert_eq!(ncdet(pbw, &one, Direction::RightToLeft)?, entry_elem(pbw, &Entry::Unit(3, 1))?);
            assert!(ncdet(pbw, &NcMatrix::new(2, 1), Direction::LeftToRight).is_err());
            // Commuting entries give the classical determinant.
            let mut mx = NcMatrix::new(2, 2);
            mx.rows[0][0] = Entry::Const(HPoly::constant(Q::int(3)));
            mx.rows[0][1] = Entry::Unit(2, 1);
            mx.rows[1][0] = Entry::Const(HPoly::constant(Q::int(5)));
            mx.rows[1][1] = Entry::Unit(3, 1);
            let d = ncdet(pbw, &mx, Direction::LeftToRight)?.specialize(&[]);
            let mut expect = gen(pbw, 3, 1).scale(&Q::int(3));
            expect.add_scaled_q(&gen(pbw, 2, 1), &Q::int(-5));
            assert_eq!(d, expect);
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn matrix_shapes() {
        let rs = RootSystem::from_name("gl(3|2)", BasisChoice::Distinguished).unwrap();
        let ap = a_plus(&rs, 1).unwrap();
        assert_eq!((ap.nrows(), ap.ncols), (3, 2));
        assert_eq!(ap.rows[2][0], Entry::Zero);
        assert_eq!(ap.rows[1][1], Entry::Unit(3, 2));
        let am = a_minus(&rs, 2).unwrap();
        assert_eq!((am.nrows(), am.ncols), (2, 1));
        assert_eq!(am.rows[1][0], Entry::Unit(5, 4));
        let deg = a_plus(&rs, 3).unwrap();
        assert_eq!((deg.nrows(), deg.ncols), (1, 0));
        assert_eq!(c_super(&rs, 2, 1).unwrap().rows[1][1], Entry::Unit(4, 3));
        let g = RootSystem::from_name("gl(3)", BasisChoice::Distinguished).unwrap();
        let c = c_gl(&g, 1, 3).unwrap();
        assert_eq!(c.rows[1][0], Entry::Const(shifted_coroot(&g, 1, 2).unwrap().neg()));
    }

    #[test]
    fn gl21_two_term_element() {
        let t = table("gl(2|1)");
        let rs = &t.rs;
        let gamma = rs.root_from_str("e1-d1").unwrap();
        with_engine(&t, |pbw| {
            for v in Variant::ALL {
                let got = theta_det_symbolic(pbw, gamma, v)?;
                let a1 = shifted_coroot(rs, 1, 2)?;
                let mut expect = entry_elem(pbw, &Entry::Unit(3, 1))?.mul_coeff(&a1);
                expect.add_assign(&pbw.mul(&entry_elem(pbw, &Entry::Unit(2, 1))?, &entry_elem(pbw, &Entry::Unit(3, 2))?));
                let pts = rs.hyperplane_sample(gamma, 1, 5, 6, 3)?;
                for lam in pts {
                    assert_eq!(got.specialize(&lam), expect.specialize(&lam), "{}", v.name());
                }
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn simple_isotropic_root() {
        let t = table("gl(2|2)");
        let gamma = t.rs.root_from_str("e2-d1").unwrap();
        with_engine(&t, |pbw| {
            for v in Variant::ALL {
                assert_eq!(theta_det_symbolic(pbw, gamma, v)?, entry_elem(pbw, &Entry::Unit(3, 2))?);
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn variants_agree_with_construction_gl32() {
        let t = table("gl(3|2)");
        let rs = &t.rs;
        let order = RootOrder::standard(rs);
        for g in ["e2-d1", "e1-d2", "e3-d2"] {
            let gamma = rs.root_from_str(g).unwrap();
            let pts = rs.hyperplane_sample(gamma, 1, 4, 7, 11).unwrap();
            with_engine(&t, |pbw| {
                for lam in &pts {
                    let reference = construct_at(&t, gamma, 1, lam, &order)?;
                    for v in Variant::ALL {
                        assert_eq!(theta_det(pbw, lam, gamma, v)?, reference, "{g} {}", v.name());
                    }
                }
                Ok(())
            })
            .unwrap();
        }
    }

    #[test]
    fn leading_coefficient_is_diagonal_product() {
        let t = table("gl(3|2)");
        let rs = &t.rs;
        let gamma = rs.root_from_str("e1-d2").unwrap();
        let evens = (0..rs.num_positive()).filter(|&i| !rs.positive[i].parity.is_odd());
        let odds = (0..rs.num_positive()).filter(|&i| rs.positive[i].parity.is_odd());
        let order = RootOrder::from_roots(rs, &evens.chain(odds).collect::<Vec<_>>()).unwrap();
        let pbw = Pbw::new(&t, &order).unwrap();
        let th = theta_det_symbolic(&pbw, gamma, Variant::OddRight).unwrap();
        let eg = entry_elem(&pbw, &Entry::Unit(5, 1)).unwrap();
        let mono = eg.terms.keys().next().unwrap();
        let mut expect = HPoly::constant(Q::int(-1));
        for a in a_coeffs(rs, 1).unwrap().iter().chain(&b_coeffs(rs, 2).unwrap()) {
            expect = expect.mul(a);
        }
        let g = &rs.positive[gamma].coeffs;
        let got = reduce_mod_hyperplane(rs, g, 1, th.coeff(mono).unwrap());
        assert_eq!(got, reduce_mod_hyperplane(rs, g, 1, &expect));
    }

    #[test]
    fn gl3_determinant_matches_construction() {
        let t = table("gl(3)");
        let rs = &t.rs;
        let order = RootOrder::standard(rs);
        let alpha = rs.root_from_str("e1-e3").unwrap();
        let pts = rs.hyperplane_sample(alpha, 1, 5, 6, 2).unwrap();
        with_engine(&t, |pbw| {
            for lam in &pts {
                assert_eq!(theta_det_gl(pbw, lam, alpha)?, construct_at(&t, alpha, 1, lam, &order)?);
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn gl3_block_factorization() {
        let t = table("gl(3)");
        let rs = &t.rs;
        let eq = |c: [i64; 3], v: i64| {
            let a = &rs.positive[rs.root_index(&c).unwrap()];
            (rs.coroot_functional(a).unwrap(), &Q::int(v) - &rs.copair(&rs.rho, a).unwrap())
        };
        let e12 = eq([1, -1, 0], 0);
        let e13 = eq([1, 0, -1], 1);
        let pts = crate::golden::sample_affine(3, &[e12, e13], 4, 9).unwrap();
        with_engine(&t, |pbw| {
            for lam in &pts {
                assert!(block_factor_check(pbw, lam, 1, 2, 3)?);
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn powers_as_products() {
        let t = table("gl(3)");
        let rs = &t.rs;
        let order = RootOrder::standard(rs);
        for (g, p) in [("e1-e2", 2u32), ("e1-e3", 2), ("e1-e3", 3)] {
            let alpha = rs.root_from_str(g).unwrap();
            let pts = rs.hyperplane_sample(alpha, p as i64, 3, 6, 5).unwrap();
            with_engine(&t, |pbw| {
                for lam in &pts {
                    assert_eq!(c_product(pbw, lam, alpha, p)?, construct_at(&t, alpha, p, lam, &order)?, "{g} p={p}");
                }
                Ok(())
            })
            .unwrap();
        }
    }
    #[test]
    fn the_two_determinants_commute() {
        let t = table("gl(3|3)");
        with_engine(&t, |pbw| {
            let rs = pbw.rs();
            for (r, s) in [(1, 3), (2, 2), (1, 2)] {
                let plus = a_plus(rs, r)?;
                let minus = a_minus(rs, s)?;
                for j in 0..plus.nrows() {
                    let dp = ncdet(pbw, &plus.without_row(j), Direction::LeftToRight)?;
                    for i in 0..minus.nrows() {
                        let dm = ncdet(pbw, &minus.without_row(i), Direction::RightToLeft)?;
                        assert_eq!(pbw.mul(&dp, &dm), pbw.mul(&dm, &dp));
                    }
                }
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn lone_odd_coefficient_detects_minimality() {
        let t = table("gl(2|2)");
        let rs = &t.rs;
        let evens = (0..rs.num_positive()).filter(|&i| !rs.positive[i].parity.is_odd());
        let odds = (0..rs.num_positive()).filter(|&i| rs.positive[i].parity.is_odd());
        let order = RootOrder::from_roots(rs, &evens.chain(odds).collect::<Vec<_>>()).unwrap();
        let pbw = Pbw::new(&t, &order).unwrap();
        let (mut yes, mut no) = (0, 0);
        for g in (0..rs.num_positive()).filter(|&g| rs.positive[g].isotropic) {
            let th = theta_det_symbolic(&pbw, g, Variant::OddRight).unwrap();
            let mono = pbw.root_elem::<Q>(g).terms.into_keys().next().unwrap();
            let grid = (0..4usize.pow(4)).map(|k| -> Vec<Q> { (0..4).map(|d| Q::int((k / 4usize.pow(d) % 4) as i64 - 2)).collect() });
            for lam in grid.filter(|l| rs.on_hyperplane(&rs.positive[g].coeffs, 1, l)) {
                let c = th.coeff(&mono).map(|c| c.eval(&lam)).unwrap_or_else(Q::zero);
                let minimal = crate::verma::lambda_minimal(rs, &lam, g).unwrap();
                assert_eq!(!c.is_zero(), minimal, "{} at {lam:?}", rs.root_str(g));
                if minimal {
                    yes += 1;
                } else {
                    no += 1;
                }
            }
        }
        assert!(yes > 0 && no > 0, "{yes} minimal, {no} not");
    }
}
