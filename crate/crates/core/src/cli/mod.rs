//! The `qwalg` command line: `verify`, `sigma` and `bracket`.
//!
//! Exit codes are 0 when everything passes, 1 when an identity fails and 2
//! for usage errors (bad flags, unknown identities, unsupported types).

pub mod json;
pub mod latex;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::cartan::CartanType;
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::modespace::{modespace_ids, verify_modespace_with, Window};
use crate::qdiff::{qdiff_ids, verify_qdiff};
use crate::report::{Report, Unit};
use crate::rmatrix::{rmatrix_ids, verify_rmatrix};
use crate::scalar::{Field, QRat, Ring};
use crate::series::{y_name, BracketResult};
use crate::walg::{build_preset, normalize_id, registry_ids, sigma_bracket, verify_with, SigmaLabel, VerifyOptions, WPreset};

use json::{expression_json, BracketJson, TermJson};

pub const JSON_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

#[derive(Debug, Parser)]
#[command(name = "qwalg", version, about = "Exact brackets and identity checks for q-deformed W-algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Overall bracket prefactor: `2h` or `qdiff` for (q - q^-1).
    #[arg(long, default_value = "2h", value_parser = parse_unit, global = true)]
    pub unit: Unit,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for `verify`.
    #[arg(long, env = "QWALG_JOBS", global = true)]
    pub jobs: Option<usize>,
}

fn parse_unit(s: &str) -> std::result::Result<Unit, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run named identities, or all of them.
    Verify(VerifyArgs),
    /// Print sigma_i(z) as a sum of Y-monomials.
    Sigma(SigmaArgs),
    /// Print {sigma_i(z), sigma_j(w)}.
    Bracket(BracketArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct VerifyArgs {
    pub ids: Vec<String>,
    #[arg(long)]
    pub all: bool,
    /// List identity names and exit.
    #[arg(long)]
    pub list: bool,
    #[arg(long, default_value_t = 6)]
    pub max_mode: i64,
    #[arg(long, default_value_t = 3)]
    pub max_degree: usize,
    #[arg(long, default_value_t = 2)]
    pub n_out: i64,
    #[arg(long, default_value_t = 6)]
    pub h_order: usize,
    #[arg(long, default_value_t = 8)]
    pub x_order: usize,
    /// Order in each spectral variable for R-YBE.
    #[arg(long, default_value_t = 4)]
    pub ybe_order: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct TypeArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub kind: CartanType,
    #[arg(long)]
    pub rank: usize,
}

fn parse_type(s: &str) -> std::result::Result<CartanType, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_label(s: &str) -> std::result::Result<SigmaLabel, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SigmaArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    /// `1..rank`, `spinor`, `spinor+` or `spinor-`.
    #[arg(long, value_parser = parse_label)]
    pub i: SigmaLabel,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct BracketArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    #[arg(long, value_parser = parse_label)]
    pub i: SigmaLabel,
    #[arg(long, value_parser = parse_label)]
    pub j: SigmaLabel,
}

/// Every identity the `verify` command knows, in run order.
pub fn all_ids() -> Vec<&'static str> {
    let mut out = registry_ids();
    out.extend(qdiff_ids());
    out.extend(modespace_ids());
    out.extend(rmatrix_ids());
    out
}

fn canonical_id(id: &str) -> Result<&'static str> {
    let n = normalize_id(id);
    all_ids().into_iter().find(|k| *k == n).ok_or(Error::UnknownIdentity(n))
}

/// Run one identity under the `verify` settings.
pub fn run_identity(id: &str, v: &VerifyArgs, unit: Unit) -> Result<Report> {
    let id = canonical_id(id)?;
    if registry_ids().contains(&id) {
        return verify_with(id, VerifyOptions { unit });
    }
    if qdiff_ids().contains(&id) {
        return verify_qdiff(id);
    }
    if modespace_ids().contains(&id) {
        return verify_modespace_with(id, &Window::new(v.max_mode, v.max_degree, v.n_out), v.h_order);
    }
    let order = if id == "R-YBE" { v.ybe_order } else { v.x_order };
    verify_rmatrix(id, order)
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    version: u32,
    command: &'a str,
    config: C,
    results: Vec<R>,
}

#[derive(Serialize)]
struct Config<'a, A: Serialize> {
    #[serde(flatten)]
    common: &'a Common,
    #[serde(flatten)]
    args: &'a A,
}

fn envelope<A: Serialize, R: Serialize>(command: &str, common: &Common, args: &A, results: Vec<R>) -> String {
    let e = Envelope { version: JSON_VERSION, command, config: Config { common, args }, results };
    let mut s = serde_json::to_string_pretty(&e).expect("JSON output is always serializable");
    s.push('\n');
    s
}

struct Outcome {
    text: String,
    code: i32,
}

fn usage(e: impl std::fmt::Display) -> Outcome {
    Outcome { text: format!("error: {e}\n"), code: 2 }
}

fn cmd_verify(common: &Common, v: &VerifyArgs) -> Outcome {
    if v.list {
        return Outcome { text: all_ids().iter().map(|id| format!("{id}\n")).collect(), code: 0 };
    }
    let ids: Vec<&'static str> = if v.all || v.ids.is_empty() {
        all_ids()
    } else {
        match v.ids.iter().map(|id| canonical_id(id)).collect::<Result<_>>() {
            Ok(ids) => ids,
            Err(e) => return usage(e),
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = common.jobs {
        pool = pool.num_threads(j);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return usage(e),
    };
    let results: Vec<Result<Report>> = pool.install(|| ids.par_iter().map(|id| run_identity(id, v, common.unit)).collect());
    let mut reports = Vec::new();
    for (id, r) in ids.iter().zip(results) {
        match r {
            Ok(r) => reports.push(r),
            Err(e @ (Error::UnknownIdentity(_) | Error::UnsupportedType(_))) => return usage(e),
            Err(e) => {
                let mut r = Report::new(id, "");
                r.fail_with("run", e);
                reports.push(r);
            }
        }
    }
    let code = if reports.iter().all(Report::passed) { 0 } else { 1 };
    let text = match common.format {
        Format::Json => envelope("verify", common, v, reports),
        Format::Latex => latex::reports(&reports),
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let _ = writeln!(s, "{}", r.summary_line());
                if !r.passed() {
                    for c in r.cases.iter().filter(|c| c.diff.is_some()) {
                        let _ = writeln!(s, "  {}: lhs = {}", c.label, c.lhs);
                        let _ = writeln!(s, "  {}: rhs = {}", c.label, c.rhs);
                    }
                }
            }
            let passed = reports.iter().filter(|r| r.passed()).count();
            let _ = writeln!(s, "{passed}/{} identities passed", reports.len());
            s
        }
    };
    Outcome { text, code }
}

fn preset(t: &TypeArgs) -> Result<WPreset> {
    build_preset(t.kind, t.rank)
}

#[derive(Serialize)]
struct SigmaJson {
    label: String,
    summands: usize,
    text: String,
    terms: Vec<TermJson>,
}

fn sigma_name(l: SigmaLabel) -> String {
    match l {
        SigmaLabel::Index(i) => format!("\\sigma_{{{i}}}"),
        SigmaLabel::Spinor => "\\sigma_{s}".into(),
        SigmaLabel::SpinorPlus => "\\sigma_{s+}".into(),
        SigmaLabel::SpinorMinus => "\\sigma_{s-}".into(),
    }
}

fn cmd_sigma(common: &Common, a: &SigmaArgs) -> Outcome {
    let p = match preset(&a.ty) {
        Ok(p) => p,
        Err(e) => return usage(e),
    };
    let e = match p.sigma(a.i) {
        Ok(e) => e,
        Err(e) => return usage(e),
    };
    let summands = p.summand_counts.get(&a.i).copied().unwrap_or(e.len());
    let text = match common.format {
        Format::Text => format!("sigma_{}(z) = {e}\n", a.i),
        Format::Latex => format!("{}(z) = {}\n", sigma_name(a.i), latex::expression(e, "z")),
        Format::Json => envelope(
            "sigma",
            common,
            a,
            vec![SigmaJson { label: a.i.to_string(), summands, text: e.to_string(), terms: expression_json(e) }],
        ),
    };
    Outcome { text, code: 0 }
}

/// A smooth kernel recognized as `c C_ab(x q^{t/2})`, that is
/// `c u^t C_ab(u)` in the mode variable. With `balanced`, the
/// match holds after both sides drop their delta parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMatch {
    pub c: QRat,
    pub a: usize,
    pub b: usize,
    pub t: i64,
    pub balanced: bool,
}

/// Both kernels are reduced with monic denominators, so a constant ratio
/// shows up as equal denominators and proportional numerators.
fn constant_ratio(k: &Kernel, c: &Kernel) -> Option<QRat> {
    if k.denom() != c.denom() || k.numer().degree() != c.numer().degree() {
        return None;
    }
    let (a, b) = (k.numer().lead()?, c.numer().lead()?);
    let r = a.divided(b);
    (c.numer().scale(&r) == *k.numer()).then_some(r)
}

/// Best-effort match of `k` against the Y-basis kernels of `p`, first
/// exactly and then modulo delta terms. Smaller shifts win.
pub fn match_c_pattern(k: &Kernel, p: &WPreset) -> Option<CMatch> {
    if k.is_zero() {
        return None;
    }
    let n = p.basis.size();
    let span = 4 * (n as i64 + 2);
    for balanced in [false, true] {
        for t in (0..=span).flat_map(|t| [t, -t]).skip(1) {
            for a in 0..n {
                for b in 0..n {
                    let c = p.basis.kernel(a, b);
                    if c.is_zero() {
                        continue;
                    }
                    let mut cand = c.mul_u_pow(t);
                    if balanced {
                        cand = cand.balanced_split().1;
                        if cand.is_zero() {
                            continue;
                        }
                    }
                    if let Some(c) = constant_ratio(k, &cand) {
                        return Some(CMatch { c, a, b, t, balanced });
                    }
                }
            }
        }
    }
    None
}

fn pattern_text(m: &CMatch) -> String {
    let CMatch { c, a, b, t, balanced } = m;
    let tail = if *balanced { " mod delta" } else { "" };
    let arg = match t {
        0 => "x".to_string(),
        2 => "xq".to_string(),
        t if t % 2 == 0 => format!("xq^{}", t / 2),
        t => format!("xq^({t}/2)"),
    };
    let head = format!("C_{}{}({arg}){tail}", a + 1, b + 1);
    if c.is_one() {
        head
    } else if c.negated().is_one() {
        format!("-{head}")
    } else {
        format!("({c})*{head}")
    }
}

fn pattern_latex(m: &CMatch) -> String {
    let CMatch { c, a, b, t, balanced } = m;
    let tail = if *balanced { "\\big|_{\\mathrm{smooth}}" } else { "" };
    let arg = match t {
        0 => "w/z".to_string(),
        2 => "wq/z".to_string(),
        t if t % 2 == 0 => format!("wq^{{{}}}/z", t / 2),
        t => format!("wq^{{{t}/2}}/z"),
    };
    let head = format!("C_{{{}{}}}({arg}){tail}", a + 1, b + 1);
    if c.is_one() {
        head
    } else if c.negated().is_one() {
        format!("-{head}")
    } else {
        format!("\\left({}\\right) {head}", latex::qrat(c))
    }
}

fn bracket_text(b: &BracketResult, unit: Unit, p: &WPreset) -> String {
    let mut s = format!("{} * {{\n", unit.symbol());
    for (key, k) in &b.smooth {
        let _ = write!(s, "  [{k}] * {}*{}", key.z.render(&y_name, "z"), key.w.render(&y_name, "w"));
        if let Some(m) = match_c_pattern(k, p) {
            let _ = write!(s, "    ~ {}", pattern_text(&m));
        }
        s.push('\n');
    }
    for ((sh, n), c) in &b.deltas {
        let d = crate::kernel::DeltaTerm { shift: *sh, coeff: c.clone() };
        let _ = writeln!(s, "  {d} * {}", n.render(&y_name, "z"));
    }
    if b.smooth.is_empty() && b.deltas.is_empty() {
        s.push_str("  0\n");
    }
    s.push_str("}\n");
    s
}

#[derive(Serialize)]
struct BracketOut {
    i: String,
    j: String,
    unit: Unit,
    bracket: BracketJson,
}

fn cmd_bracket(common: &Common, a: &BracketArgs) -> Outcome {
    let p = match preset(&a.ty) {
        Ok(p) => p,
        Err(e) => return usage(e),
    };
    let b = match sigma_bracket(&p, a.i, a.j) {
        Ok(b) => b,
        Err(e) => return usage(e),
    };
    let text = match common.format {
        Format::Text => format!("{{sigma_{}(z), sigma_{}(w)}} = {}", a.i, a.j, bracket_text(&b, common.unit, &p)),
        Format::Latex => {
            let lhs = format!("\\{{{}(z), {}(w)\\}}", sigma_name(a.i), sigma_name(a.j));
            latex::bracket(&lhs, &b, common.unit, &|k| match_c_pattern(k, &p).map(|m| pattern_latex(&m)))
        }
        Format::Json => {
            let bj = BracketJson::new(&b, &|k| match_c_pattern(k, &p).map(|m| pattern_text(&m)));
            envelope("bracket", common, a, vec![BracketOut { i: a.i.to_string(), j: a.j.to_string(), unit: common.unit, bracket: bj }])
        }
    };
    Outcome { text, code: 0 }
}

/// Parse `args` (program name first), run, and write output. Returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out = execute(&cli);
    if out.code == 2 {
        eprint!("{}", out.text);
        return 2;
    }
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out.text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            let _ = std::io::stdout().write_all(out.text.as_bytes());
        }
    }
    out.code
}

/// Run a parsed command and return `(output, exit code)` without printing.
pub fn execute_to_string(cli: &Cli) -> (String, i32) {
    let o = execute(cli);
    (o.text, o.code)
}

fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Verify(v) => cmd_verify(&cli.common, v),
        Command::Sigma(a) => cmd_sigma(&cli.common, a),
        Command::Bracket(a) => cmd_bracket(&cli.common, a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> (String, i32) {
        let cli = Cli::try_parse_from(std::iter::once("qwalg").chain(args.iter().copied())).unwrap();
        execute_to_string(&cli)
    }

    #[test]
    fn sigma_sl2() {
        let (s, code) = exec(&["sigma", "--type", "A", "--rank", "1", "--i", "1"]);
        assert_eq!(code, 0);
        assert!(s.contains("Y1(z)") && s.contains("^-1"), "{s}");
    }

    #[test]
    fn spinor_counts() {
        for (t, r, l, n) in [("B", "2", "spinor", 4), ("D", "4", "spinor+", 8)] {
            let (s, code) = exec(&["sigma", "--type", t, "--rank", r, "--i", l, "--format", "json"]);
            assert_eq!(code, 0);
            let v: serde_json::Value = serde_json::from_str(&s).unwrap();
            assert_eq!(v["results"][0]["summands"], n);
        }
    }

    #[test]
    fn usage_errors() {
        assert_eq!(exec(&["verify", "NOPE"]).1, 2);
        assert_eq!(exec(&["sigma", "--type", "A", "--rank", "2", "--i", "spinor"]).1, 2);
        assert!(Cli::try_parse_from(["qwalg", "sigma", "--type", "E", "--rank", "6", "--i", "1"]).is_err());
        assert!(Cli::try_parse_from(["qwalg", "frobnicate"]).is_err());
    }

    #[test]
    fn verify_json_shape() {
        let (s, code) = exec(&["verify", "finalpb", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["command"], "verify");
        let r = &v["results"][0];
        for f in ["identity", "status", "lhs", "rhs", "anchors"] {
            assert!(r.get(f).is_some(), "missing {f}");
        }
        assert_eq!(r["status"], "pass");
    }

    #[test]
    fn unit_does_not_change_verdict() {
        let (a, ca) = exec(&["verify", "SL3-12", "--unit", "2h"]);
        let (b, cb) = exec(&["verify", "SL3-12", "--unit", "qdiff"]);
        assert_eq!((ca, cb), (0, 0));
        assert_eq!(a, b);
    }

    #[test]
    fn bracket_json_round_trips_and_matches_c() {
        let (s, code) = exec(&["bracket", "--type", "A", "--rank", "2", "--i", "1", "--j", "2", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        let bj: BracketJson = serde_json::from_value(v["results"][0]["bracket"].clone()).unwrap();
        let p = build_preset(CartanType::A, 2).unwrap();
        assert_eq!(bj.to_bracket().unwrap(), sigma_bracket(&p, SigmaLabel::Index(1), SigmaLabel::Index(2)).unwrap());
        assert!(bj.smooth.iter().all(|x| x.pattern.is_some()), "{s}");
        assert_eq!(s, exec(&["bracket", "--type", "A", "--rank", "2", "--i", "1", "--j", "2", "--format", "json"]).0);
    }

    #[test]
    fn c_pattern_finds_shift() {
        let p = build_preset(CartanType::A, 2).unwrap();
        let k = p.basis.kernel(0, 1).mul_u_pow(2).scale(&QRat::q_pow(1));
        let m = match_c_pattern(&k, &p).unwrap();
        assert!(!m.balanced);
        assert_eq!(p.basis.kernel(m.a, m.b).mul_u_pow(m.t).scale(&m.c), k);
    }
}
