//! Command-line driver.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! domain errors.

use crate::error::{Error, Result};
use crate::golden;
use crate::hpoly::HPoly;
use crate::liealg::StructureTable;
use crate::rational::Q;
use crate::rootdata::{BasisChoice, RootSystem, Weight};
use crate::shap::{self, Route};
use crate::suites::{self, SuiteConfig, NAMES};
use crate::typea::{self, Variant};
use crate::uea::{Elem, Pbw, RootOrder};
use crate::verma::Verma;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;

#[derive(Parser, Debug)]
#[command(name = "shapkit", version, about = "Exact Shapovalov elements for Lie (super)algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct θ_{γ,m}, symbolically or at a weight.
    Construct(ConstructArgs),
    /// Run verification suites and report pass/fail per criterion.
    Verify(VerifyArgs),
    /// Print a worked example.
    Example(ExampleArgs),
    /// Evaluate a type A determinantal formula.
    TypeaDet(TypeaArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Distinguished,
    Anti,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Symbolic,
    Evaluated,
    Determinant,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Algebra, e.g. `gl(2|1)`, `sl(3)`, `sp(6)`, `osp(2,4)`, `osp(3,2)`.
    #[arg(long)]
    pub algebra: String,
    #[arg(long, value_enum, default_value_t = Basis::Distinguished)]
    pub basis: Basis,
    /// Root as a combination of labels, e.g. `e1-d1` or `b+2a1+a2`.
    #[arg(long)]
    pub gamma: String,
    /// PBW order: `distinguished`, `cosp`, `cosp-opposite`, `odd-first`,
    /// `odd-last`, or a comma-separated list of roots.
    #[arg(long, default_value = "distinguished")]
    pub order: String,
    /// Comma-separated weight coordinates; omit for the symbolic element.
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, value_enum, default_value_t = RouteArg::Symbolic)]
    pub route: RouteArg,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long)]
    pub algebra: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    Osp24,
    Osp24Opposite,
    Gl21,
}

#[derive(Args, Debug, Clone)]
pub struct ExampleArgs {
    #[arg(value_enum)]
    pub name: ExampleName,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    OddRight,
    OddLeft,
    OddColumn,
    Glm,
}

#[derive(Args, Debug, Clone)]
pub struct TypeaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = VariantArg::OddRight)]
    pub variant: VariantArg,
}

/// Resolves a named preset or an explicit root list.
pub fn parse_order(rs: &RootSystem, spec: &str) -> Result<RootOrder> {
    match spec {
        "distinguished" | "standard" => Ok(RootOrder::standard(rs)),
        "cosp" => golden::cosp(rs),
        "cosp-opposite" => golden::cosp_opposite(rs),
        "odd-first" => Ok(RootOrder::odd_first(rs)),
        "odd-last" => {
            let evens = (0..rs.num_positive()).filter(|&i| !rs.positive[i].parity.is_odd());
            let odds = (0..rs.num_positive()).filter(|&i| rs.positive[i].parity.is_odd());
            RootOrder::from_roots(rs, &evens.chain(odds).collect::<Vec<_>>())
        }
        list => RootOrder::parse(rs, list),
    }
}

pub fn parse_weight(rs: &RootSystem, s: &str) -> Result<Weight> {
    let w: Vec<Q> = s.split(',').map(|t| parse_q(t.trim())).collect::<Result<_>>()?;
    if w.len() != rs.rank() {
        return Err(Error::Config(format!("weight needs {} coordinates, got {}", rs.rank(), w.len())));
    }
    Ok(w)
}

fn parse_q(t: &str) -> Result<Q> {
    let bad = || Error::Config(format!("`{t}` is not a rational number"));
    match t.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i128, i128) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if b == 0 {
                return Err(bad());
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::new(t.parse().map_err(|_| bad())?, 1)),
    }
}

fn basis(b: Basis) -> BasisChoice {
    match b {
        Basis::Distinguished => BasisChoice::Distinguished,
        Basis::Anti => BasisChoice::AntiDistinguished,
    }
}

struct Setup {
    t: StructureTable,
    gamma: usize,
    order: RootOrder,
    lambda: Option<Weight>,
}

fn setup(c: &Common) -> Result<Setup> {
    let rs = RootSystem::from_name(&c.algebra, basis(c.basis))?;
    let t = StructureTable::realize(&rs)?;
    let gamma = t.rs.root_from_str(&c.gamma)?;
    let order = parse_order(&t.rs, &c.order)?;
    let lambda = c.lambda.as_deref().map(|s| parse_weight(&t.rs, s)).transpose()?;
    Ok(Setup { t, gamma, order, lambda })
}

fn emit(out: &mut dyn Write, fmt: Format, text: &str, value: Value) -> Result<()> {
    let s = match fmt {
        Format::Text => text.to_string(),
        Format::Json => serde_json::to_string_pretty(&value).map_err(|e| Error::Internal(e.to_string()))?,
    };
    writeln!(out, "{s}").map_err(|e| Error::Internal(e.to_string()))
}

fn element_output(pbw: &Pbw, u: &Elem<HPoly>, header: &str, meta: Value) -> (String, Value) {
    let text = format!("{header}\n{}", pbw.render(u));
    let mut v = meta;
    v["element"] = pbw.to_json(u);
    (text, v)
}

fn cmd_construct(a: &ConstructArgs, out: &mut dyn Write) -> Result<i32> {
    let s = setup(&a.common)?;
    let t = &s.t;
    let rs = &t.rs;
    let pbw = Pbw::new(t, &s.order)?;
    let elem: Elem<HPoly> = match (a.route, &s.lambda) {
        (RouteArg::Symbolic, None) => shap::construct(t, s.gamma, a.m, &s.order)?.elem,
        (RouteArg::Symbolic, Some(l)) => shap::construct(t, s.gamma, a.m, &s.order)?.elem.specialize(l).to_poly(),
        (RouteArg::Evaluated, None) => shap::construct_evaluated(t, s.gamma, a.m, &s.order, a.seed)?.elem,
        (RouteArg::Evaluated, Some(l)) => shap::construct_at(t, s.gamma, a.m, l, &s.order)?.to_poly(),
        (RouteArg::Determinant, l) => {
            if a.m != 1 {
                return Err(Error::Domain("the determinant route gives m = 1 only".into()));
            }
            let sym = if rs.n > 0 {
                typea::theta_det_symbolic(&pbw, s.gamma, Variant::OddRight)?
            } else {
                typea::theta_det_gl_symbolic(&pbw, s.gamma)?
            };
            match l {
                Some(l) => {
                    if !rs.on_hyperplane(&rs.positive[s.gamma].coeffs, 1, l) {
                        return Err(Error::Domain("λ is not on the hyperplane".into()));
                    }
                    sym.specialize(l).to_poly()
                }
                None => sym,
            }
        }
    };
    let header = format!(
        "θ for {} with m = {} in {} ({} route){}",
        rs.root_str(s.gamma),
        a.m,
        rs.name(),
        route_of(a.route).name(),
        s.lambda.as_ref().map(|l| format!(" at λ = {}", rs.weight_str(l))).unwrap_or_default()
    );
    let meta = json!({
        "algebra": rs.name(),
        "gamma": rs.root_str(s.gamma),
        "m": a.m,
        "route": route_of(a.route).name(),
        "lambda": s.lambda.as_ref().map(|l| l.iter().map(|q| q.to_string()).collect::<Vec<_>>()),
    });
    let (text, v) = element_output(&pbw, &elem, &header, meta);
    emit(out, a.common.format, &text, v)?;
    Ok(0)
}

fn route_of(r: RouteArg) -> Route {
    match r {
        RouteArg::Symbolic => Route::Symbolic,
        RouteArg::Evaluated => Route::Evaluated,
        RouteArg::Determinant => Route::Determinant,
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let ids: Vec<u8> = match a.suite.as_str() {
        "all" => NAMES.iter().map(|(i, _)| *i).collect(),
        s => vec![suites::criterion_id(s).ok_or_else(|| {
            let names: Vec<&str> = NAMES.iter().map(|(_, n)| *n).collect();
            Error::Config(format!("unknown suite `{s}`; expected one of {} or all", names.join(", ")))
        })?],
    };
    let ids: Vec<u8> = match &a.algebra {
        Some(alg) => {
            RootSystem::from_name(alg, BasisChoice::Distinguished)
                .or_else(|_| RootSystem::from_name(alg, BasisChoice::AntiDistinguished))?;
            let keep: Vec<u8> = ids.iter().copied().filter(|&i| suites::applies_to(i, alg)).collect();
            if keep.is_empty() {
                let (_, covers) = suites::scope(ids[0]);
                return Err(Error::Config(format!("suite `{}` covers {covers}, not {alg}", a.suite)));
            }
            keep
        }
        None => ids,
    };
    let cfg = SuiteConfig { samples: a.samples, seed: a.seed, algebra: a.algebra.clone() };
    let reports: Vec<_> = ids.iter().map(|&i| suites::run(i, &cfg)).collect();
    let text = reports.iter().map(|r| r.line()).collect::<Vec<_>>().join("\n");
    let v = json!({ "criteria": reports, "passed": reports.iter().all(|r| r.passed) });
    emit(out, a.format, &text, v)?;
    Ok(if reports.iter().all(|r| r.passed) { 0 } else { 1 })
}

fn cmd_example(a: &ExampleArgs, out: &mut dyn Write) -> Result<i32> {
    let mut text = String::new();
    let mut items = Vec::new();
    let mut ok = true;
    match a.name {
        ExampleName::Osp24 | ExampleName::Osp24Opposite => {
            let opp = a.name == ExampleName::Osp24Opposite;
            let t = StructureTable::realize(&RootSystem::from_name("osp(2,4)", BasisChoice::Distinguished)?)?;
            let rs = &t.rs;
            let steps: [(&str, (i64, i64, i64), RootOrder); 3] = [
                ("θ1", (1, 1, 0), if opp { golden::cosp_opposite(rs)? } else { golden::cosp(rs)? }),
                (
                    "θ2",
                    (1, 1, 1),
                    if opp { golden::cosp_a2_last(rs)?.reversed() } else { golden::cosp_a2_last(rs)? },
                ),
                ("θ3", (1, 2, 1), if opp { golden::cosp_opposite(rs)? } else { golden::cosp(rs)? }),
            ];
            text.push_str(&format!(
                "osp(2,4), simple roots b (isotropic), a1, a2; {} orders.\n",
                if opp { "opposite" } else { "odd-first" }
            ));
            text.push_str("p, q, r are minus shifted coroot pairings: see the closed forms in the README.\n");
            for (label, (b, a1, a2), order) in steps {
                let g = golden::root(rs, b, a1, a2)?;
                let pbw = Pbw::new(&t, &order)?;
                let s = shap::construct(&t, g, 1, &order)?;
                let closed = match label {
                    "θ1" => golden::theta1(&pbw, opp)?,
                    "θ2" => golden::theta2(&pbw, opp)?,
                    _ => golden::theta3(&pbw, opp)?,
                };
                let matches = s.elem == closed;
                ok &= matches;
                text.push_str(&format!(
                    "\n{label} = θ for {} (order {})\n  constructed: {}\n  closed form: {}\n  agree: {}\n",
                    rs.root_str(g),
                    order.names(rs).join(", "),
                    pbw.render(&s.elem),
                    pbw.render(&closed),
                    matches
                ));
                items.push(json!({
                    "name": label,
                    "gamma": rs.root_str(g),
                    "element": pbw.to_json(&s.elem),
                    "closed_form": pbw.to_json(&closed),
                    "agree": matches,
                }));
            }
        }
        ExampleName::Gl21 => {
            let t = StructureTable::realize(&RootSystem::from_name("gl(2|1)", BasisChoice::Distinguished)?)?;
            let rs = &t.rs;
            let order = RootOrder::standard(rs);
            let pbw = Pbw::new(&t, &order)?;
            let verma = Verma::new(&t, &order)?;
            let g = rs.root_from_str("e1-d1")?;
            let s = shap::construct(&t, g, 1, &order)?;
            let det = typea::theta_det_symbolic(&pbw, g, Variant::OddRight)?;
            text.push_str(&format!("gl(2|1), γ = e1-d1\n  symbolic: {}\n  determinant: {}\n", pbw.render(&s.elem), pbw.render(&det)));
            for lam in rs.hyperplane_sample(g, 1, 3, 5, 1)? {
                let u = s.elem.specialize(&lam);
                let hw = verma.is_highest_weight(&u, &lam);
                let same = det.specialize(&lam) == u;
                ok &= hw && same;
                text.push_str(&format!(
                    "  λ = {}: θ(λ) = {}; highest weight: {hw}; determinant agrees: {same}\n",
                    rs.weight_str(&lam),
                    pbw.render(&u)
                ));
                items.push(json!({
                    "lambda": lam.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                    "element": pbw.to_json(&u.to_poly()),
                    "highest_weight": hw,
                    "determinant_agrees": same,
                }));
            }
        }
    }
    emit(out, a.format, text.trim_end(), json!({ "steps": items, "passed": ok }))?;
    Ok(if ok { 0 } else { 1 })
}

fn cmd_typea(a: &TypeaArgs, out: &mut dyn Write) -> Result<i32> {
    let s = setup(&a.common)?;
    let t = &s.t;
    let rs = &t.rs;
    let pbw = Pbw::new(t, &s.order)?;
    let (sym, name) = match a.variant {
        VariantArg::Glm => (typea::theta_det_gl_symbolic(&pbw, s.gamma)?, "gl(m)"),
        v => {
            let v = match v {
                VariantArg::OddRight => Variant::OddRight,
                VariantArg::OddLeft => Variant::OddLeft,
                _ => Variant::OddColumn,
            };
            (typea::theta_det_symbolic(&pbw, s.gamma, v)?, v.name())
        }
    };
    let elem = match &s.lambda {
        Some(l) => {
            if !rs.on_hyperplane(&rs.positive[s.gamma].coeffs, 1, l) {
                return Err(Error::Domain("λ is not on the hyperplane".into()));
            }
            sym.specialize(l).to_poly()
        }
        None => sym,
    };
    let header = format!("{name} determinant for {} in {}", rs.root_str(s.gamma), rs.name());
    let meta = json!({ "algebra": rs.name(), "gamma": rs.root_str(s.gamma), "variant": name });
    let (text, v) = element_output(&pbw, &elem, &header, meta);
    emit(out, a.common.format, &text, v)?;
    Ok(0)
}

/// Runs a parsed command, writing to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Construct(a) => cmd_construct(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Example(a) => cmd_example(a, out),
        Command::TypeaDet(a) => cmd_typea(a, out),
    }
}

/// Entry point for the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Verification(_) => 1,
                _ => 2,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let cli = Cli::try_parse_from(std::iter::once("shapkit").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let code = run(&cli, &mut buf).unwrap_or(2);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn construct_gl21_text() {
        let (code, out) = run_args(&["construct", "--algebra", "gl(2|1)", "--gamma", "e1-d1", "--m", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 2);
    }

    #[test]
    fn construct_sl2_cube() {
        let (code, out) = run_args(&["construct", "--algebra", "sl(2)", "--gamma", "e1-e2", "--m", "3", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let terms = v["element"]["terms"].as_array().unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0]["pi"]["e1-e2"], json!(3));
    }

    #[test]
    fn json_round_trip() {
        let (_, out) = run_args(&["construct", "--algebra", "gl(2|2)", "--gamma", "e1-d2", "--format", "json"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        let t = StructureTable::realize(&RootSystem::from_name("gl(2|2)", BasisChoice::Distinguished).unwrap()).unwrap();
        let order = RootOrder::standard(&t.rs);
        let pbw = Pbw::new(&t, &order).unwrap();
        let g = t.rs.root_from_str("e1-d2").unwrap();
        assert_eq!(pbw.from_json(&v["element"]).unwrap(), shap::construct(&t, g, 1, &order).unwrap().elem);
    }

    #[test]
    fn deterministic_output() {
        let args = ["construct", "--algebra", "gl(2|1)", "--gamma", "e1-d1", "--route", "evaluated", "--seed", "4"];
        assert_eq!(run_args(&args), run_args(&args));
    }

    #[test]
    fn suite_scope_is_enforced() {
        let (code, _) = run_args(&["verify", "--suite", "golden", "--algebra", "sl(3)"]);
        assert_eq!(code, 2);
        let (code, out) = run_args(&["verify", "--suite", "all", "--algebra", "osp(3,2)"]);
        assert_eq!(code, 0);
        assert!(out.contains("clifford") && !out.contains("golden"));
    }

    #[test]
    fn domain_errors_exit_two() {
        assert_eq!(run_args(&["construct", "--algebra", "gl(2|1)", "--gamma", "e1-d1", "--m", "2"]).0, 2);
        assert_eq!(run_args(&["construct", "--algebra", "gl(9|", "--gamma", "e1"]).0, 2);
        assert_eq!(run_args(&["verify", "--suite", "nope"]).0, 2);
        assert_eq!(main_with_args(["shapkit", "frobnicate"]), 2);
    }

    #[test]
    fn lambda_off_hyperplane_is_rejected() {
        let args = ["typea-det", "--algebra", "gl(2|1)", "--gamma", "e1-d1", "--lambda", "0,0,0"];
        assert_eq!(run_args(&args).0, 2);
    }

    #[test]
    fn examples_pass() {
        for name in ["osp24", "osp24-opposite", "gl21"] {
            let (code, out) = run_args(&["example", name]);
            assert_eq!(code, 0, "{out}");
        }
    }

    #[test]
    fn order_presets() {
        let rs = RootSystem::from_name("gl(2|1)", BasisChoice::Distinguished).unwrap();
        let last = parse_order(&rs, "odd-last").unwrap();
        assert!(rs.positive[*last.0.last().unwrap()].parity.is_odd());
        assert!(parse_order(&rs, "cosp").is_err());
        assert_eq!(parse_order(&rs, "e1-d1").unwrap().0[0], rs.root_from_str("e1-d1").unwrap());
    }

    #[test]
    fn rational_weights() {
        let rs = RootSystem::from_name("gl(2|1)", BasisChoice::Distinguished).unwrap();
        assert_eq!(parse_weight(&rs, "1/2, -3, 0").unwrap(), vec![Q::new(1, 2), Q::int(-3), Q::zero()]);
        assert!(parse_weight(&rs, "1,2").is_err());
        assert!(parse_weight(&rs, "1/0,2,3").is_err());
    }
}
