//! Matrix realizations and structure constants.
//!
//! Every supported algebra is realized by supermatrices acting on
//! `V = V0 ⊕ V1`. The basis of `g` is ordered as negative root vectors
//! (indexed like `RootSystem::positive`), then the Cartan elements `H_k`,
//! then positive root vectors. `H_k` acts on a weight vector by its `k`-th
//! coordinate, and `e_{-α}` is the canonical matrix of its root space
//! whose first nonzero entry is `+1`.

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Q;
use crate::rootdata::{Family, RootSystem};
use serde_json::json;

pub type Mat = Vec<Vec<Q>>;

/// Sparse linear combination of basis elements of `g`.
pub type Lin = Vec<(usize, Q)>;

#[derive(Clone, Debug)]
pub struct StructureTable {
    pub rs: RootSystem,
    /// Weight (in label coordinates) and parity of each basis vector of `V`.
    pub v_weights: Vec<Vec<i64>>,
    pub v_odd: Vec<bool>,
    pub neg: Vec<Mat>,
    pub pos: Vec<Mat>,
    pub cartan: Vec<Mat>,
    /// `table[a][b] = [x_a, x_b]`.
    table: Vec<Vec<Lin>>,
    odd: Vec<bool>,
    weight: Vec<Vec<i64>>,
}

pub fn zeros(n: usize) -> Mat {
    vec![vec![Q::zero(); n]; n]
}

pub fn elementary(n: usize, i: usize, j: usize) -> Mat {
    let mut m = zeros(n);
    m[i][j] = Q::one();
    m
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    c[i][j] += &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    c
}

pub fn mat_lin(a: &Mat, s: &Q, b: &Mat, t: &Q) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| &(x * s) + &(y * t)).collect())
        .collect()
}

pub fn mat_scale(a: &Mat, s: &Q) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

fn is_zero_mat(a: &Mat) -> bool {
    a.iter().all(|r| r.iter().all(Q::is_zero))
}

/// Parity of a homogeneous supermatrix, `None` for zero.
pub fn mat_parity(a: &Mat, v_odd: &[bool]) -> Option<bool> {
    for (i, r) in a.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            if !x.is_zero() {
                return Some(v_odd[i] ^ v_odd[j]);
            }
        }
    }
    None
}

/// `[x, y] = xy - (-1)^{|x||y|} yx` for homogeneous supermatrices.
pub fn supercommutator(x: &Mat, y: &Mat, v_odd: &[bool]) -> Mat {
    let (Some(px), Some(py)) = (mat_parity(x, v_odd), mat_parity(y, v_odd)) else {
        return zeros(x.len());
    };
    let sign = if px && py { Q::one() } else { -Q::one() };
    mat_lin(&matmul(x, y), &Q::one(), &matmul(y, x), &sign)
}

fn canonical(m: &[Q]) -> Vec<Q> {
    let lead = m.iter().find(|x| !x.is_zero()).cloned().expect("nonzero vector");
    let inv = lead.recip();
    m.iter().map(|x| x * &inv).collect()
}

struct Model {
    v_weights: Vec<Vec<i64>>,
    v_odd: Vec<bool>,
    gram: Option<Mat>,
}

fn model(rs: &RootSystem) -> Model {
    let rank = rs.rank();
    let unit = |k: usize, s: i64| {
        let mut v = vec![0; rank];
        v[k] = s;
        v
    };
    match rs.family {
        Family::Gl | Family::Sl | Family::GlSuper => Model {
            v_weights: (0..rank).map(|k| unit(k, 1)).collect(),
            v_odd: (0..rank).map(|k| k >= rs.m).collect(),
            gram: None,
        },
        Family::Sp => {
            // A skew form on a purely odd space: the even part of osp(0|2n).
            let n = rank;
            let mut g = zeros(2 * n);
            for k in 0..n {
                g[k][n + k] = Q::one();
                g[n + k][k] = -Q::one();
            }
            Model {
                v_weights: (0..n).map(|k| unit(k, 1)).chain((0..n).map(|k| unit(k, -1))).collect(),
                v_odd: vec![true; 2 * n],
                gram: Some(g),
            }
        }
        Family::Osp24 => {
            let mut g = zeros(6);
            g[0][1] = Q::one();
            g[1][0] = Q::one();
            for k in 0..2 {
                g[2 + k][4 + k] = Q::one();
                g[4 + k][2 + k] = -Q::one();
            }
            Model {
                v_weights: vec![unit(0, 1), unit(0, -1), unit(1, 1), unit(2, 1), unit(1, -1), unit(2, -1)],
                v_odd: vec![false, false, true, true, true, true],
                gram: Some(g),
            }
        }
        Family::Osp32 => {
            let mut g = zeros(5);
            g[0][2] = Q::one();
            g[1][1] = Q::one();
            g[2][0] = Q::one();
            g[3][4] = Q::one();
            g[4][3] = -Q::one();
            Model {
                v_weights: vec![unit(0, 1), vec![0; rank], unit(0, -1), unit(1, 1), unit(1, -1)],
                v_odd: vec![false, false, false, true, true],
                gram: Some(g),
            }
        }
    }
}

/// The root space of weight `alpha` inside the algebra preserving the form.
fn root_space(md: &Model, alpha: &[i64]) -> Vec<Mat> {
    let n = md.v_weights.len();
    let diff = |i: usize, j: usize| -> Vec<i64> {
        md.v_weights[i].iter().zip(&md.v_weights[j]).map(|(a, b)| a - b).collect()
    };
    let cells: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| diff(i, j) == alpha).collect();
    let to_mat = |c: &[Q]| {
        let mut m = zeros(n);
        for (&(i, j), x) in cells.iter().zip(c) {
            m[i][j] = x.clone();
        }
        m
    };
    let Some(g) = &md.gram else {
        return cells.iter().map(|&(i, j)| elementary(n, i, j)).collect();
    };
    let x_odd = md.v_odd[cells[0].0] ^ md.v_odd[cells[0].1];
    // B(X e_a, e_b) + (-1)^{|X||a|} B(e_a, X e_b) = 0.
    let mut rows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let sign = if x_odd && md.v_odd[a] { -Q::one() } else { Q::one() };
            let row: Vec<Q> = cells
                .iter()
                .map(|&(i, j)| {
                    let mut v = Q::zero();
                    if j == a {
                        v += &g[i][b];
                    }
                    if j == b {
                        v += &(&sign * &g[a][i]);
                    }
                    v
                })
                .collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    linalg::nullspace(&rows, cells.len()).iter().map(|c| to_mat(&canonical(c))).collect()
}

impl StructureTable {
    pub fn realize(rs: &RootSystem) -> Result<StructureTable> {
        let md = model(rs);
        let n = md.v_weights.len();
        let rank = rs.rank();
        let cartan: Vec<Mat> = (0..rank)
            .map(|k| {
                let mut m = zeros(n);
                for i in 0..n {
                    m[i][i] = Q::int(md.v_weights[i][k]);
                }
                m
            })
            .collect();
        let mut neg = Vec::new();
        let mut pos_raw = Vec::new();
        for r in &rs.positive {
            let minus: Vec<i64> = r.coeffs.iter().map(|c| -c).collect();
            let sn = root_space(&md, &minus);
            let sp = root_space(&md, &r.coeffs);
            if sn.len() != 1 || sp.len() != 1 {
                return Err(Error::Internal(format!(
                    "root space of {} has dimension {}",
                    rs.vec_str(&r.coeffs),
                    sn.len()
                )));
            }
            neg.push(sn.into_iter().next().unwrap());
            pos_raw.push(sp.into_iter().next().unwrap());
        }
        if matches!(rs.family, Family::Osp24) || (rs.family == Family::Sp && rs.m == 3) {
            apply_nested_bracket_vectors(rs, &md, &mut neg)?;
        }
        let h_of = |coeffs: &[i64]| -> Mat {
            let mut m = zeros(n);
            for (k, (a, f)) in coeffs.iter().zip(&rs.form).enumerate() {
                if a * f != 0 {
                    m = mat_lin(&m, &Q::one(), &cartan[k], &Q::int(a * f));
                }
            }
            m
        };
        let mut pos = Vec::new();
        for (i, r) in rs.positive.iter().enumerate() {
            let br = supercommutator(&pos_raw[i], &neg[i], &md.v_odd);
            let h = h_of(&r.coeffs);
            let c = proportion(&br, &h).ok_or_else(|| {
                Error::Internal(format!("[e, f] not proportional to h for {}", rs.root_str(i)))
            })?;
            pos.push(mat_scale(&pos_raw[i], &c.recip()));
        }
        let np = rs.positive.len();
        let mut weight = Vec::new();
        let mut odd = Vec::new();
        for r in &rs.positive {
            weight.push(r.coeffs.iter().map(|c| -c).collect());
            odd.push(r.parity.is_odd());
        }
        for _ in 0..rank {
            weight.push(vec![0; rank]);
            odd.push(false);
        }
        for r in &rs.positive {
            weight.push(r.coeffs.clone());
            odd.push(r.parity.is_odd());
        }
        let mut t = StructureTable {
            rs: rs.clone(),
            v_weights: md.v_weights,
            v_odd: md.v_odd,
            neg,
            pos,
            cartan,
            table: vec![],
            odd,
            weight,
        };
        let dim = 2 * np + rank;
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let br = supercommutator(&t.matrix(a), &t.matrix(b), &t.v_odd);
                table[a][b] = t
                    .decompose(&br)
                    .ok_or_else(|| Error::Internal("bracket leaves the chosen basis".into()))?;
            }
        }
        t.table = table;
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.odd.len()
    }

    pub fn num_positive(&self) -> usize {
        self.rs.positive.len()
    }

    pub fn neg_idx(&self, i: usize) -> usize {
        i
    }

    pub fn cartan_idx(&self, k: usize) -> usize {
        self.num_positive() + k
    }

    pub fn pos_idx(&self, i: usize) -> usize {
        self.num_positive() + self.rs.rank() + i
    }

    pub fn is_neg(&self, a: usize) -> bool {
        a < self.num_positive()
    }

    pub fn is_cartan(&self, a: usize) -> bool {
        a >= self.num_positive() && a < self.num_positive() + self.rs.rank()
    }

    pub fn is_pos(&self, a: usize) -> bool {
        a >= self.num_positive() + self.rs.rank()
    }

    pub fn is_odd(&self, a: usize) -> bool {
        self.odd[a]
    }

    pub fn weight(&self, a: usize) -> &[i64] {
        &self.weight[a]
    }

    pub fn matrix(&self, a: usize) -> Mat {
        let np = self.num_positive();
        let r = self.rs.rank();
        if a < np {
            self.neg[a].clone()
        } else if a < np + r {
            self.cartan[a - np].clone()
        } else {
            self.pos[a - np - r].clone()
        }
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &Lin {
        &self.table[a][b]
    }

    /// Bilinear extension of the table; inputs must be homogeneous.
    pub fn bracket(&self, x: &Lin, y: &Lin) -> Lin {
        let mut acc = vec![Q::zero(); self.dim()];
        for (a, s) in x {
            for (b, t) in y {
                let st = s * t;
                for (c, v) in &self.table[*a][*b] {
                    acc[*c] += &(v * &st);
                }
            }
        }
        acc.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn lin_matrix(&self, x: &Lin) -> Mat {
        let n = self.v_weights.len();
        let mut m = zeros(n);
        for (a, s) in x {
            m = mat_lin(&m, &Q::one(), &self.matrix(*a), s);
        }
        m
    }

    /// Expresses a matrix in the chosen basis, if it lies in the algebra.
    pub fn decompose(&self, m: &Mat) -> Option<Lin> {
        let n = m.len();
        let rank = self.rs.rank();
        let mut out: Lin = Vec::new();
        let mut groups: Vec<Vec<i64>> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !m[i][j].is_zero() {
                    let w: Vec<i64> =
                        self.v_weights[i].iter().zip(&self.v_weights[j]).map(|(a, b)| a - b).collect();
                    if !groups.contains(&w) {
                        groups.push(w);
                    }
                }
            }
        }
        let mut rest = m.clone();
        for w in groups {
            if w.iter().all(|&x| x == 0) {
                // Cartan part: match the diagonal.
                let rows: Vec<Vec<Q>> = (0..n).map(|i| (0..rank).map(|k| Q::int(self.v_weights[i][k])).collect()).collect();
                let rhs: Vec<Q> = (0..n).map(|i| m[i][i].clone()).collect();
                let c = linalg::solve(&rows, &rhs)?;
                for (k, ck) in c.into_iter().enumerate() {
                    if !ck.is_zero() {
                        rest = mat_lin(&rest, &Q::one(), &self.cartan[k], &-ck.clone());
                        out.push((self.cartan_idx(k), ck));
                    }
                }
                continue;
            }
            let (idx, basis) = if let Some(i) = self.rs.root_index(&w) {
                (self.pos_idx(i), &self.pos[i])
            } else {
                let minus: Vec<i64> = w.iter().map(|x| -x).collect();
                let i = self.rs.root_index(&minus)?;
                (self.neg_idx(i), &self.neg[i])
            };
            let (bi, bj) = first_nonzero(basis)?;
            let c = &m[bi][bj] / &basis[bi][bj];
            rest = mat_lin(&rest, &Q::one(), basis, &-c.clone());
            out.push((idx, c));
        }
        if !is_zero_mat(&rest) {
            return None;
        }
        out.sort_by_key(|x| x.0);
        Some(out)
    }

    /// Coefficients of `h_α` on the Cartan basis: `μ(h_α) = (μ, α)`.
    pub fn h_alpha(&self, coeffs: &[i64]) -> Lin {
        coeffs
            .iter()
            .zip(&self.rs.form)
            .enumerate()
            .filter(|(_, (a, f))| **a * **f != 0)
            .map(|(k, (a, f))| (self.cartan_idx(k), Q::int(a * f)))
            .collect()
    }

    pub fn basis_name(&self, a: usize) -> String {
        let np = self.num_positive();
        let r = self.rs.rank();
        if a < np {
            format!("f[{}]", self.rs.root_str(a))
        } else if a < np + r {
            format!("h[{}]", self.rs.labels[a - np])
        } else {
            format!("e[{}]", self.rs.root_str(a - np - r))
        }
    }

    /// The bracket table as JSON, for debugging.
    pub fn to_json(&self) -> serde_json::Value {
        let basis: Vec<String> = (0..self.dim()).map(|a| self.basis_name(a)).collect();
        let mut brackets = Vec::new();
        for a in 0..self.dim() {
            for b in a..self.dim() {
                if self.table[a][b].is_empty() {
                    continue;
                }
                let terms: Vec<serde_json::Value> = self.table[a][b]
                    .iter()
                    .map(|(c, v)| json!({"basis": basis[*c], "coeff": v.to_string()}))
                    .collect();
                brackets.push(json!({"x": basis[a], "y": basis[b], "value": terms}));
            }
        }
        json!({"algebra": self.rs.name(), "basis": basis, "brackets": brackets})
    }
}

fn first_nonzero(m: &Mat) -> Option<(usize, usize)> {
    for (i, r) in m.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            if !x.is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// `c` with `a = c·b`, if any.
fn proportion(a: &Mat, b: &Mat) -> Option<Q> {
    let (i, j) = first_nonzero(b)?;
    let c = &a[i][j] / &b[i][j];
    if c.is_zero() {
        return None;
    }
    let ok = a.iter().zip(b).all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| *x == &c * y));
    ok.then_some(c)
}

/// Fixes the non-simple negative root vectors spanned by `β, α1, α2` (the
/// last three simple roots) as nested brackets of simple ones.
fn apply_nested_bracket_vectors(rs: &RootSystem, md: &Model, neg: &mut [Mat]) -> Result<()> {
    let l = rs.simple.len();
    let sc = |b: i64, a1: i64, a2: i64| -> Option<usize> {
        let mut v = vec![0i64; rs.rank()];
        for (coef, s) in [(b, l - 3), (a1, l - 2), (a2, l - 1)] {
            for (x, c) in v.iter_mut().zip(&rs.positive[rs.simple[s]].coeffs) {
                *x += coef * c;
            }
        }
        rs.root_index(&v)
    };
    type Coords = (i64, i64, i64);
    let recipe: [(Coords, Coords, Coords); 5] = [
        ((0, 1, 1), (0, 1, 0), (0, 0, 1)),
        ((0, 2, 1), (0, 1, 0), (0, 1, 1)),
        ((1, 1, 0), (0, 1, 0), (1, 0, 0)),
        ((1, 1, 1), (0, 0, 1), (1, 1, 0)),
        ((1, 2, 1), (0, 1, 0), (1, 1, 1)),
    ];
    for (tgt, x, y) in recipe {
        let idx = |t: (i64, i64, i64)| sc(t.0, t.1, t.2).ok_or_else(|| Error::Internal("missing root".into()));
        let (t, a, b) = (idx(tgt)?, idx(x)?, idx(y)?);
        let v = supercommutator(&neg[a], &neg[b], &md.v_odd);
        if proportion(&v, &neg[t]).is_none() {
            return Err(Error::Internal("nested bracket leaves its root space".into()));
        }
        neg[t] = v;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::BasisChoice;

    fn table(name: &str) -> StructureTable {
        StructureTable::realize(&RootSystem::from_name(name, BasisChoice::Distinguished).unwrap()).unwrap()
    }

    fn root(t: &StructureTable, s: &str) -> usize {
        t.rs.root_from_str(s).unwrap()
    }

    #[test]
    fn gl21_negative_vectors_are_elementary() {
        let t = table("gl(2|1)");
        let f = t.neg[root(&t, "e1-d1")].clone();
        assert_eq!(f, elementary(3, 2, 0));
        let hb = t.bracket_basis(t.pos_idx(root(&t, "e2-d1")), t.neg_idx(root(&t, "e2-d1")));
        // h_{e2-d1} = E22 + E33
        assert_eq!(t.lin_matrix(hb), mat_lin(&elementary(3, 1, 1), &Q::one(), &elementary(3, 2, 2), &Q::one()));
    }

    #[test]
    fn gl21_bracket_oracle() {
        let t = table("gl(2|1)");
        let e21 = t.neg_idx(root(&t, "e1-e2"));
        let e31 = t.neg_idx(root(&t, "e1-d1"));
        let e32 = t.neg_idx(root(&t, "e2-d1"));
        assert_eq!(t.bracket_basis(e32, e21), &vec![(e31, Q::one())]);
        assert_eq!(t.bracket_basis(e21, e32), &vec![(e31, -Q::one())]);
        assert!(t.bracket_basis(e32, e32).is_empty());
    }

    #[test]
    fn normalization_and_weights_all_families() {
        for name in ["gl(2|1)", "gl(2|2)", "sl(3)", "sp(6)", "osp(2,4)", "osp(3,2)", "gl(3|3)"] {
            let t = table(name);
            for (i, r) in t.rs.positive.iter().enumerate() {
                let br = t.bracket_basis(t.pos_idx(i), t.neg_idx(i));
                assert_eq!(br, &t.h_alpha(&r.coeffs), "{name} {}", t.rs.root_str(i));
                // [h_k, f_α] = -α_k f_α
                for k in 0..t.rs.rank() {
                    let v = t.bracket_basis(t.cartan_idx(k), t.neg_idx(i));
                    if r.coeffs[k] == 0 {
                        assert!(v.is_empty());
                    } else {
                        assert_eq!(v, &vec![(t.neg_idx(i), Q::int(-r.coeffs[k]))]);
                    }
                }
            }
        }
    }

    #[test]
    fn nested_bracket_fixture() {
        for name in ["osp(2,4)", "sp(6)"] {
            let t = table(name);
            let f = |s: &str| t.neg_idx(root(&t, s));
            let one = |a: usize| vec![(a, Q::one())];
            assert_eq!(t.bracket_basis(f("b"), f("a1+a2")), &one(f("b+a1+a2")));
            assert_eq!(t.bracket_basis(f("a1+a2"), f("b+a1")), &one(f("b+2a1+a2")));
            assert_eq!(t.bracket_basis(f("b"), f("2a1+a2")), &vec![(f("b+2a1+a2"), Q::int(2))]);
            assert_eq!(t.bracket_basis(f("a1"), f("b")), &one(f("b+a1")));
        }
    }

    #[test]
    fn super_jacobi_on_all_triples() {
        for name in ["gl(2|1)", "osp(3,2)", "osp(2,4)"] {
            let t = table(name);
            let d = t.dim();
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]]
                        let one = |x: usize| vec![(x, Q::one())];
                        let lhs = t.bracket(&one(a), t.bracket_basis(b, c));
                        let r1 = t.bracket(t.bracket_basis(a, b), &one(c));
                        let r2 = t.bracket(&one(b), t.bracket_basis(a, c));
                        let s = if t.is_odd(a) && t.is_odd(b) { -Q::one() } else { Q::one() };
                        let mut acc = vec![Q::zero(); d];
                        for (i, v) in r1 {
                            acc[i] += &v;
                        }
                        for (i, v) in r2 {
                            acc[i] += &(&v * &s);
                        }
                        for (i, v) in lhs {
                            acc[i] -= &v;
                        }
                        assert!(acc.iter().all(Q::is_zero), "{name}: {a} {b} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(table("osp(3,2)").dim(), 12);
        assert_eq!(table("osp(2,4)").dim(), 19);
        assert_eq!(table("sp(6)").dim(), 21);
    }
}
