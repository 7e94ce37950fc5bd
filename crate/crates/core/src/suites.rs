//! Verification suites, one per acceptance criterion.
//!
//! Cells run in parallel on a rayon pool sized by `SHAPKIT_THREADS`; each
//! worker builds its own PBW engines. Reports list cells in input order.

use crate::error::{Error, Result};
use crate::golden;
use crate::hpoly::HPoly;
use crate::liealg::StructureTable;
use crate::rational::Q;
use crate::rootdata::{BasisChoice, RootSystem, Subgroup, Weight};
use crate::shap::{self, construct, construct_at, construct_with_word, ShapElement};
use crate::typea::{self, Variant};
use crate::uea::{Elem, Pbw, RootOrder};
use crate::verma::{self, Verma};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Overrides the per-criterion sample counts when set.
    pub samples: Option<usize>,
    pub seed: u64,
    /// Restricts algebra-parametrized suites to one algebra.
    pub algebra: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { samples: None, seed: 7, algebra: None }
    }
}

impl SuiteConfig {
    fn samples(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn algebras<'a>(&'a self, default: &[&'a str]) -> Vec<String> {
        match &self.algebra {
            Some(a) => vec![a.clone()],
            None => default.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<16} {} ({} checks, {:.2}s){}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.checks,
            self.seconds,
            self.failures.first().map(|f| format!(": {f}")).unwrap_or_default()
        )
    }
}

/// Outcome of one cell: number of checks and failure messages.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, r: Result<Tally>, label: &str) {
        match r {
            Ok(t) => {
                self.checks += t.checks;
                self.failures.extend(t.failures);
                self.notes.extend(t.notes);
            }
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{label}: {e}"));
            }
        }
    }
}

pub const NAMES: [(u8, &str); 12] = [
    (1, "golden"),
    (2, "routes"),
    (3, "highest-weight"),
    (4, "bounds"),
    (5, "clifford"),
    (6, "squares"),
    (7, "powers"),
    (8, "factorizations"),
    (9, "survival"),
    (10, "borel"),
    (11, "uniqueness"),
    (12, "kernel"),
];

pub fn criterion_id(name: &str) -> Option<u8> {
    NAMES.iter().find(|(_, n)| *n == name).map(|(i, _)| *i)
}

/// The algebras a criterion can be restricted to, as a predicate on the
/// algebra name and a description for error messages.
pub fn scope(id: u8) -> (fn(&str) -> bool, &'static str) {
    fn any(_: &str) -> bool {
        true
    }
    fn gl_super(a: &str) -> bool {
        a.starts_with("gl(") && a.contains('|')
    }
    fn golden_pair(a: &str) -> bool {
        a == "osp(2,4)" || a == "sp(6)"
    }
    fn superalgebra(a: &str) -> bool {
        gl_super(a) || a.starts_with("osp(")
    }
    match id {
        1 | 8 => (golden_pair, "osp(2,4) and sp(6)"),
        2 | 10 => (gl_super, "gl(m|n)"),
        5 => (|a| a == "osp(3,2)", "osp(3,2)"),
        6 => (superalgebra, "gl(m|n) and osp"),
        9 | 11 => (|a| a == "gl(2|2)", "gl(2|2)"),
        _ => (any, "every supported algebra"),
    }
}

/// Whether criterion `id` can run when restricted to `algebra`.
pub fn applies_to(id: u8, algebra: &str) -> bool {
    (scope(id).0)(&algebra.replace(' ', ""))
}

fn threads() -> Option<usize> {
    std::env::var("SHAPKIT_THREADS").ok().and_then(|v| v.parse().ok()).filter(|&n| n > 0)
}

/// Maps `f` over `cells` in parallel, preserving order.
fn par_cells<T: Sync, R: Send>(cells: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    let run = || cells.par_iter().map(&f).collect();
    match threads() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => cells.iter().map(&f).collect(),
        },
        None => run(),
    }
}

fn table(name: &str, basis: BasisChoice) -> Result<StructureTable> {
    StructureTable::realize(&RootSystem::from_name(name, basis)?)
}

fn dist(name: &str) -> Result<StructureTable> {
    table(name, BasisChoice::Distinguished)
}

/// Runs one criterion.
pub fn run(id: u8, cfg: &SuiteConfig) -> CriterionReport {
    let name = NAMES.iter().find(|(i, _)| *i == id).map(|(_, n)| *n).unwrap_or("unknown");
    let start = Instant::now();
    let result = match id {
        _ if cfg.algebra.as_deref().is_some_and(|a| !applies_to(id, a)) => {
            Err(Error::Config(format!("{name} covers {}, not {}", scope(id).1, cfg.algebra.as_deref().unwrap_or(""))))
        }
        1 => golden_suite(cfg),
        2 => routes(cfg),
        3 => highest_weight(cfg),
        4 => bounds(cfg),
        5 => clifford(cfg),
        6 => squares(cfg),
        7 => powers(cfg),
        8 => factorizations(cfg),
        9 => survival(cfg),
        10 => borel(cfg),
        11 => uniqueness(cfg),
        12 => kernel(cfg),
        _ => Err(Error::Config(format!("no criterion {id}"))),
    };
    let mut tally = Tally::default();
    tally.absorb(result, name);
    let vacuous = tally.checks == 0 && cfg.algebra.is_some();
    if vacuous {
        tally.notes.push(format!("nothing to check in {}", cfg.algebra.as_deref().unwrap_or("")));
    }
    CriterionReport {
        id,
        name,
        passed: tally.failures.is_empty() && (tally.checks > 0 || vacuous),
        checks: tally.checks,
        failures: tally.failures,
        notes: tally.notes,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionReport> {
    NAMES.iter().map(|(i, _)| run(*i, cfg)).collect()
}

fn collect(cells: Vec<(String, Result<Tally>)>) -> Tally {
    let mut t = Tally::default();
    for (label, r) in cells {
        t.absorb(r, &label);
    }
    t
}

fn golden_suite(cfg: &SuiteConfig) -> Result<Tally> {
    let mut tally = Tally::default();
    for name in cfg.algebras(&["osp(2,4)", "sp(6)"]) {
        let t = dist(&name)?;
        for r in golden::check_closed_forms(&t)? {
            tally.check(r.passed, || format!("{} differs from its closed form", r.name));
        }
    }
    Ok(tally)
}

/// Isotropic roots `ε_r - δ_s` of gl(m|n), all `m, n ≤ 3`.
fn super_cells(cfg: &SuiteConfig, all: &[&str]) -> Result<Vec<(String, usize)>> {
    let mut cells = Vec::new();
    for name in cfg.algebras(all) {
        let rs = RootSystem::from_name(&name, BasisChoice::Distinguished)?;
        for g in 0..rs.num_positive() {
            if rs.positive[g].isotropic {
                cells.push((name.clone(), g));
            }
        }
    }
    Ok(cells)
}

const GL_SUPER: [&str; 9] =
    ["gl(1|1)", "gl(1|2)", "gl(1|3)", "gl(2|1)", "gl(2|2)", "gl(2|3)", "gl(3|1)", "gl(3|2)", "gl(3|3)"];

fn routes(cfg: &SuiteConfig) -> Result<Tally> {
    let cells = super_cells(cfg, &GL_SUPER)?;
    let samples = cfg.samples(20);
    let out = par_cells(&cells, |(name, g)| {
        let run = || -> Result<Tally> {
            let t = dist(name)?;
            let rs = &t.rs;
            let std_order = RootOrder::standard(rs);
            let odd_order = RootOrder::odd_first(rs);
            let sym = construct(&t, *g, 1, &std_order)?;
            let base = Pbw::new(&t, &std_order)?;
            let other = Pbw::new(&t, &odd_order)?;
            let dets: Vec<(Variant, Elem<HPoly>)> = Variant::ALL
                .iter()
                .map(|&v| Ok((v, base.reorder_from(&other, &typea::theta_det_symbolic(&other, *g, v)?))))
                .collect::<Result<_>>()?;
            let pts = rs.hyperplane_sample(*g, 1, samples, samples as i64 + 4, cfg.seed ^ (*g as u64))?;
            let mut tally = Tally::default();
            if pts.len() < samples {
                tally.check(false, || format!("{name} {}: only {} samples", rs.root_str(*g), pts.len()));
            }
            for lam in &pts {
                let at = construct_at(&t, *g, 1, lam, &std_order)?;
                let s = sym.elem.specialize(lam);
                tally.check(s == at, || format!("{name} {}: symbolic vs evaluated at {lam:?}", rs.root_str(*g)));
                for (v, d) in &dets {
                    tally.check(d.specialize(lam) == at, || {
                        format!("{name} {}: {} determinant at {lam:?}", rs.root_str(*g), v.name())
                    });
                }
            }
            Ok(tally)
        };
        (format!("{name} {g}"), run())
    });
    Ok(collect(out))
}

/// Pairs `(γ, m)` admissible for the given Lie algebra, `m ≤ 3`, with `γ`
/// in the orbit of a simple root.
fn even_cells(names: &[String], ms: &[u32]) -> Result<Vec<(String, usize, u32)>> {
    let mut cells = Vec::new();
    for name in names {
        let rs = RootSystem::from_name(name, BasisChoice::Distinguished)?;
        for g in 0..rs.num_positive() {
            for &m in ms {
                if shap::check_pair(&rs, g, m).is_ok() && rs.preferred_word(g).is_ok() {
                    cells.push((name.clone(), g, m));
                }
            }
        }
    }
    Ok(cells)
}

fn highest_weight(cfg: &SuiteConfig) -> Result<Tally> {
    let samples = cfg.samples(20);
    let mut all = Vec::new();
    if cfg.algebra.as_deref().map(|a| a.starts_with("gl(") && a.contains('|')).unwrap_or(true) {
        for (name, g) in super_cells(cfg, &GL_SUPER)? {
            all.push((name, g, 1u32));
        }
    }
    let lie = match &cfg.algebra {
        Some(a) if a.contains('|') => Vec::new(),
        Some(a) => vec![a.clone()],
        None => vec!["sl(4)".to_string(), "sp(6)".to_string()],
    };
    all.extend(even_cells(&lie, &[1, 2, 3])?);
    let out = par_cells(&all, |(name, g, m)| {
        let run = || -> Result<Tally> {
            let t = dist(name)?;
            let rs = &t.rs;
            let order = RootOrder::standard(rs);
            let verma = Verma::new(&t, &order)?;
            let n = if rs.positive[*g].isotropic { samples } else { samples.min(5) };
            let pts = rs.hyperplane_sample(*g, *m as i64, n, n as i64 + 4, cfg.seed ^ (*g as u64) ^ ((*m as u64) << 8))?;
            let sym = construct(&t, *g, *m, &order)?;
            let mut tally = Tally::default();
            for lam in &pts {
                let u = sym.elem.specialize(lam);
                tally.check(verma.is_highest_weight(&u, lam), || {
                    format!("{name} {} m={m}: not highest weight at {lam:?}", rs.root_str(*g))
                });
            }
            Ok(tally)
        };
        (format!("{name} {g} m={m}"), run())
    });
    Ok(collect(out))
}

fn bounds(cfg: &SuiteConfig) -> Result<Tally> {
    let mut cells: Vec<(String, usize, u32)> = Vec::new();
    let is_super = cfg.algebra.as_deref().map(|a| a.contains('|')).unwrap_or(true);
    if is_super {
        cells.extend(super_cells(cfg, &GL_SUPER)?.into_iter().map(|(n, g)| (n, g, 1)));
    }
    let lie = match &cfg.algebra {
        Some(a) if a.contains('|') => Vec::new(),
        Some(a) => vec![a.clone()],
        None => vec!["sl(4)".to_string(), "sp(6)".to_string()],
    };
    cells.extend(even_cells(&lie, &[1, 2, 3])?);
    let out = par_cells(&cells, |(name, g, m)| {
        let run = || -> Result<Tally> {
            let t = dist(name)?;
            let s = construct(&t, *g, *m, &RootOrder::standard(&t.rs))?;
            let rep = shap::verify_bounds(&t, &s)?;
            let mut tally = Tally::default();
            let what = format!("{name} {} m={m}", t.rs.root_str(*g));
            tally.check(rep.x1_violations.is_empty(), || format!("{what}: degree bound {:?}", rep.x1_violations));
            tally.check(rep.leading_ok, || format!("{what}: leading form not proportional"));
            tally.check(rep.top_unique, || format!("{what}: top-degree coefficient not unique"));
            Ok(tally)
        };
        (format!("{name} {g} m={m}"), run())
    });
    let mut tally = collect(out);
    if cfg.algebra.is_none() {
        for name in ["osp(2,4)", "sp(6)"] {
            let t = dist(name)?;
            let order = golden::cosp(&t.rs)?;
            for (b, a1, a2) in [(1, 1, 0), (1, 1, 1), (1, 2, 1)] {
                let g = golden::root(&t.rs, b, a1, a2)?;
                let s = construct(&t, g, 1, &order)?;
                let rep = shap::verify_bounds(&t, &s)?;
                tally.check(rep.x1_violations.is_empty() && rep.x1_all_equal, || {
                    format!("{name} {}: degree bound not attained by every term", t.rs.root_str(g))
                });
            }
        }
    }
    Ok(tally)
}

fn clifford(cfg: &SuiteConfig) -> Result<Tally> {
    let name = cfg.algebra.clone().unwrap_or_else(|| "osp(3,2)".into());
    let t = table(&name, BasisChoice::AntiDistinguished)?;
    let rs = &t.rs;
    let order = RootOrder::standard(rs);
    let mut tally = Tally::default();
    let mut constructed = 0;
    for g in 0..rs.num_positive() {
        if shap::check_pair(rs, g, 1).is_err() {
            continue;
        }
        let Ok(words) = rs.all_minimal_words(g, Subgroup::Nonisotropic) else { continue };
        let (beta, w) = words[0].clone();
        let s = construct_with_word(&t, g, 1, beta, &w, Subgroup::Nonisotropic, &order)?;
        let rep = shap::verify_bounds(&t, &s)?;
        constructed += 1;
        let what = format!("{name} {}", rs.root_str(g));
        tally.check(rep.x2_checked && rep.x2_violations.is_empty(), || format!("{what}: {:?}", rep.x2_violations));
        tally.check(rep.top_unique, || format!("{what}: top-degree coefficient not unique"));
        tally.check(rep.x1_violations.is_empty(), || format!("{what}: {:?}", rep.x1_violations));
    }
    tally.notes.push(format!("{constructed} roots constructed on {name} (anti-distinguished)"));
    Ok(tally)
}

fn squares(cfg: &SuiteConfig) -> Result<Tally> {
    let cells = super_cells(cfg, &["gl(2|1)", "gl(2|2)", "gl(3|2)"])?;
    let samples = cfg.samples(10);
    let out = par_cells(&cells, |(name, g)| {
        let run = || -> Result<Tally> {
            let t = dist(name)?;
            let s = construct(&t, *g, 1, &RootOrder::standard(&t.rs))?;
            let mut tally = Tally::default();
            for lam in t.rs.hyperplane_sample(*g, 1, samples, samples as i64 + 4, cfg.seed ^ *g as u64)? {
                tally.check(shap::theta_square_check(&t, &s, &lam)?, || {
                    format!("{name} {}: nonzero square at {lam:?}", t.rs.root_str(*g))
                });
            }
            Ok(tally)
        };
        (format!("{name} {g}"), run())
    });
    Ok(collect(out))
}

fn powers(cfg: &SuiteConfig) -> Result<Tally> {
    let samples = cfg.samples(4);
    let names = cfg.algebras(&["sl(3)", "sl(4)", "sp(6)"]);
    let cells = even_cells(&names, &[2, 3])?;
    let out = par_cells(&cells, |(name, g, m)| {
        let run = || -> Result<Tally> {
            let t = dist(name)?;
            let rs = &t.rs;
            let order = RootOrder::standard(rs);
            let power = construct(&t, *g, *m, &order)?;
            let single = construct(&t, *g, 1, &order)?;
            let mut tally = Tally::default();
            for lam in rs.hyperplane_sample(*g, *m as i64, samples, samples as i64 + 4, cfg.seed ^ *g as u64)? {
                tally.check(shap::theta_power_check(&t, &power, &single, &lam)?, || {
                    format!("{name} {} m={m}: power differs from product at {lam:?}", rs.root_str(*g))
                });
            }
            Ok(tally)
        };
        (format!("{name} {g} m={m}"), run())
    });
    let mut tally = collect(out);
    let gl_names: Vec<String> = match &cfg.algebra {
        Some(a) if a.starts_with("gl(") && !a.contains('|') => vec![a.clone()],
        Some(_) => Vec::new(),
        None => vec!["gl(3)".into(), "gl(4)".into()],
    };
    let gl_cells = even_cells(&gl_names, &[1, 2, 3])?;
    let out = par_cells(&gl_cells, |(name, g, p)| {
        let run = || -> Result<Tally> {
            let t = dist(name)?;
            let rs = &t.rs;
            let order = RootOrder::standard(rs);
            let pbw = Pbw::new(&t, &order)?;
            let mut tally = Tally::default();
            for lam in rs.hyperplane_sample(*g, *p as i64, samples, samples as i64 + 4, cfg.seed ^ *g as u64)? {
                let prod = typea::c_product(&pbw, &lam, *g, *p)?;
                tally.check(prod == construct_at(&t, *g, *p, &lam, &order)?, || {
                    format!("{name} {} p={p}: matrix product differs at {lam:?}", rs.root_str(*g))
                });
            }
            Ok(tally)
        };
        (format!("{name} {g} p={p}"), run())
    });
    let gl_tally = collect(out);
    tally.checks += gl_tally.checks;
    tally.failures.extend(gl_tally.failures);
    Ok(tally)
}

fn factorizations(cfg: &SuiteConfig) -> Result<Tally> {
    let mut tally = Tally::default();
    for name in cfg.algebras(&["osp(2,4)", "sp(6)"]) {
        let t = dist(&name)?;
        for r in golden::check_factorizations(&t, cfg.samples(3), cfg.seed)? {
            tally.check(r.passed, || format!("{} fails", r.name));
        }
    }
    Ok(tally)
}

fn survival(cfg: &SuiteConfig) -> Result<Tally> {
    let mut tally = Tally::default();
    // Independence against λ-minimality on an integral grid.
    let t = dist("gl(2|2)")?;
    let rs = &t.rs;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut grid = Vec::new();
    for _ in 0..400 {
        let lam: Weight = (0..rs.rank()).map(|_| Q::int(rng.gen_range(-3..=3))).collect();
        let b = verma::lambda_sets(rs, &lam).b;
        if (1..=2).contains(&b.len()) && !grid.iter().any(|(l, _): &(Weight, _)| *l == lam) {
            grid.push((lam, b));
        }
        if grid.len() >= cfg.samples(40) {
            break;
        }
    }
    let (mut minimal, mut non_minimal) = (0, 0);
    let out = par_cells(&grid, |(lam, b)| {
        let run = || -> Result<Vec<(usize, bool, bool)>> {
            let t = dist("gl(2|2)")?;
            b.iter()
                .map(|&g| Ok((g, verma::independent(&t, lam, g)?, verma::lambda_minimal(&t.rs, lam, g)?)))
                .collect()
        };
        (lam.clone(), run())
    });
    for (lam, r) in out {
        match r {
            Ok(v) => {
                for (g, ind, min) in v {
                    if min {
                        minimal += 1;
                    } else {
                        non_minimal += 1;
                    }
                    tally.check(ind == min, || {
                        format!("gl(2|2) {} at {lam:?}: independent = {ind}, minimal = {min}", rs.root_str(g))
                    });
                }
            }
            Err(e) => tally.check(false, || format!("{lam:?}: {e}")),
        }
    }
    tally.check(minimal > 0 && non_minimal > 0, || "grid lacks minimal or non-minimal cases".into());
    tally.notes.push(format!("{} grid weights, {minimal} minimal and {non_minimal} non-minimal roots", grid.len()));
    // Survival coefficient on dominant integral weights.
    for name in ["gl(2|1)", "gl(2|2)"] {
        let t = dist(name)?;
        let rs = &t.rs;
        let mut found = 0;
        for g in (0..rs.num_positive()).filter(|&g| rs.positive[g].isotropic) {
            for lam in rs.hyperplane_sample(g, 1, 60, 6, cfg.seed ^ g as u64)? {
                match verma::kac_survival(&t, &lam, g) {
                    Ok(k) => {
                        found += 1;
                        tally.check(k.sign_matches && k.nonzero, || {
                            format!("{name} {} at {lam:?}: coefficient {} vs {}", rs.root_str(g), k.coefficient, k.expected)
                        });
                    }
                    Err(Error::Domain(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
        tally.check(found > 0, || format!("{name}: no dominant samples"));
    }
    Ok(tally)
}

fn borel(cfg: &SuiteConfig) -> Result<Tally> {
    let name = cfg.algebra.clone().unwrap_or_else(|| "gl(2|2)".into());
    let t = dist(&name)?;
    let rs = &t.rs;
    let samples = cfg.samples(10);
    let mut tally = Tally::default();
    for g in (0..rs.num_positive()).filter(|&g| rs.positive[g].isotropic) {
        let mut constant: Option<Q> = None;
        let mut got = 0;
        for lam in rs.hyperplane_sample(g, 1, 8 * samples, 9, cfg.seed ^ g as u64)? {
            if got == samples {
                break;
            }
            let s = match shap::borel_chain_check(&t, g, &lam) {
                Ok(s) => s,
                Err(Error::Sampling(_)) => continue,
                Err(e) => return Err(e),
            };
            got += 1;
            let what = format!("{name} {} at {lam:?}", rs.root_str(g));
            tally.check(!s.c.is_zero(), || format!("{what}: zero constant"));
            match &constant {
                None => constant = Some(s.c.clone()),
                Some(c) => tally.check(*c == s.c, || format!("{what}: constant {} differs from {c}", s.c)),
            }
            for (gh, expected) in &s.links {
                tally.check(gh == expected, || format!("{what}: link {gh} vs {expected}"));
            }
        }
        tally.check(got == samples, || format!("{name} {}: {got} typical samples", rs.root_str(g)));
        if let Some(c) = constant {
            tally.notes.push(format!("{name} {}: c = {c}", rs.root_str(g)));
        }
    }
    Ok(tally)
}

fn uniqueness(cfg: &SuiteConfig) -> Result<Tally> {
    let mut tally = Tally::default();
    let t = dist("gl(2|2)")?;
    let rs = &t.rs;
    let order = RootOrder::standard(rs);
    let g = rs.root_from_str("e1-d2")?;
    let words = rs.all_minimal_words(g, Subgroup::Even)?;
    tally.check(words.len() >= 2, || format!("only {} minimal words for e1-d2", words.len()));
    let elems: Vec<ShapElement> = words
        .iter()
        .map(|(b, w)| construct_with_word(&t, g, 1, *b, w, Subgroup::Even, &order))
        .collect::<Result<_>>()?;
    let n = cfg.samples(10);
    for lam in rs.hyperplane_sample(g, 1, n, n as i64 + 4, cfg.seed)? {
        let first = elems[0].elem.specialize(&lam);
        for e in &elems[1..] {
            tally.check(e.elem.specialize(&lam) == first, || format!("gl(2|2) words disagree at {lam:?}"));
        }
    }
    // Off the hyperplane the two sl(3) constructions of α+β may differ.
    let t = dist("sl(3)")?;
    let rs = &t.rs;
    let order = RootOrder::standard(rs);
    let g = rs.root_from_str("e1-e3")?;
    let words = rs.all_minimal_words(g, Subgroup::Even)?;
    tally.check(words.len() == 2, || format!("sl(3): {} minimal words", words.len()));
    let elems: Vec<ShapElement> = words
        .iter()
        .map(|(b, w)| construct_with_word(&t, g, 1, *b, w, Subgroup::Even, &order))
        .collect::<Result<_>>()?;
    for lam in rs.hyperplane_sample(g, 1, n, n as i64 + 4, cfg.seed)? {
        tally.check(elems[0].elem.specialize(&lam) == elems[1].elem.specialize(&lam), || {
            format!("sl(3) words disagree on the hyperplane at {lam:?}")
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let differs = (0..50).any(|_| {
        let lam: Weight = (0..rs.rank()).map(|_| Q::int(rng.gen_range(-9..=9))).collect();
        !rs.on_hyperplane(&rs.positive[g].coeffs, 1, &lam)
            && elems[0].elem.specialize(&lam) != elems[1].elem.specialize(&lam)
    });
    tally.check(differs, || "sl(3) words agree everywhere sampled off the hyperplane".into());
    Ok(tally)
}

fn kernel(cfg: &SuiteConfig) -> Result<Tally> {
    let names = cfg.algebras(&["gl(2|1)", "gl(2|2)", "sl(3)", "osp(3,2)", "osp(2,4)", "sp(6)"]);
    let out = par_cells(&names, |name| {
        let run = || -> Result<Tally> {
            let mut tally = Tally::default();
            for basis in [BasisChoice::Distinguished, BasisChoice::AntiDistinguished] {
                let Ok(t) = table(name, basis) else { continue };
                kernel_table(&t, cfg.seed, &mut tally)?;
            }
            Ok(tally)
        };
        (name.clone(), run())
    });
    Ok(collect(out))
}

fn kernel_table(t: &StructureTable, seed: u64, tally: &mut Tally) -> Result<()> {
    let d = t.dim();
    let name = t.rs.name();
    let one = |x: usize| vec![(x, Q::one())];
    for a in 0..d {
        for b in 0..d {
            // Grading: weights add and parities add.
            let w: Vec<i64> = t.weight(a).iter().zip(t.weight(b)).map(|(x, y)| x + y).collect();
            let p = t.is_odd(a) ^ t.is_odd(b);
            let ok = t.bracket_basis(a, b).iter().all(|(c, _)| t.weight(*c) == w.as_slice() && t.is_odd(*c) == p);
            tally.check(ok, || format!("{name}: grading of [{a}, {b}]"));
            for c in 0..d {
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
                tally.check(acc.iter().all(Q::is_zero), || format!("{name}: Jacobi fails on ({a}, {b}, {c})"));
            }
        }
    }
    let rs = &t.rs;
    let order = RootOrder::standard(rs);
    let rev = order.reversed();
    let pbw = Pbw::new(t, &order)?;
    let pbw_rev = Pbw::new(t, &rev)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let np = rs.num_positive();
    let random_elem = |rng: &mut ChaCha8Rng| -> Elem<Q> {
        let mut u = Elem::<Q>::one(pbw.ngens());
        for _ in 0..rng.gen_range(1..=3) {
            u = pbw.mul(&pbw.root_elem(rng.gen_range(0..np)), &u);
        }
        u.scale(&Q::int(rng.gen_range(1..=5)))
    };
    for _ in 0..20 {
        let (x, y, z) = (random_elem(&mut rng), random_elem(&mut rng), random_elem(&mut rng));
        let l = pbw.mul(&pbw.mul(&x, &y), &z);
        let r = pbw.mul(&x, &pbw.mul(&y, &z));
        tally.check(l == r, || format!("{name}: PBW multiplication not associative"));
        let back = pbw.reorder_from(&pbw_rev, &pbw_rev.reorder_from(&pbw, &l));
        tally.check(back == l, || format!("{name}: reorder round trip"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for (i, n) in NAMES {
            assert_eq!(criterion_id(n), Some(i));
        }
        assert_eq!(criterion_id("nope"), None);
    }

    #[test]
    fn scopes() {
        assert!(applies_to(1, "osp(2,4)") && applies_to(1, "sp(6)") && !applies_to(1, "sl(3)"));
        assert!(applies_to(2, "gl(2|1)") && !applies_to(2, "gl(3)"));
        assert!(applies_to(5, "osp(3,2)") && !applies_to(5, "gl(2|1)"));
        assert!(applies_to(12, "sl(4)"));
        let cfg = SuiteConfig { algebra: Some("sl(3)".into()), ..SuiteConfig::default() };
        let r = run(1, &cfg);
        assert!(!r.passed && r.failures[0].contains("covers osp(2,4) and sp(6)"));
    }

    #[test]
    fn empty_restriction_is_vacuous() {
        let cfg = SuiteConfig { algebra: Some("gl(1|1)".into()), ..SuiteConfig::default() };
        let r = run(7, &cfg);
        assert!(r.passed && r.checks == 0 && r.notes[0].contains("gl(1|1)"));
    }

    #[test]
    fn failed_cells_are_reported() {
        let mut t = Tally::default();
        t.absorb(Err(Error::Domain("x".into())), "cell");
        assert_eq!(t.failures, vec!["cell: domain error: x".to_string()]);
    }

    #[test]
    fn small_suites_pass() {
        let cfg = SuiteConfig { samples: Some(2), seed: 3, algebra: Some("gl(2|1)".into()) };
        for id in [2, 6] {
            let r = run(id, &cfg);
            assert!(r.passed, "{}", r.line());
        }
    }
}
