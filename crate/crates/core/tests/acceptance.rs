//! One pass/fail line per acceptance criterion, each with its time budget.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::time::{Duration, Instant};

use qwalg::modespace::{verify_modespace_with, Window};
use qwalg::qdiff::verify_qdiff;
use qwalg::report::Report;
use qwalg::rmatrix::verify_rmatrix;
use qwalg::walg::verify;

struct Outcome {
    ok: bool,
    detail: String,
}

fn reports(rs: Vec<qwalg::Result<Report>>) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in rs {
        match r {
            Ok(r) => {
                ok &= r.passed();
                parts.push(r.summary_line());
            }
            Err(e) => {
                ok = false;
                parts.push(format!("error: {e}"));
            }
        }
    }
    Outcome { ok, detail: parts.join("; ") }
}

fn properties() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, r) in [("antisymmetry", common::kernel_antisymmetry(256)), ("Jacobi", common::mode_jacobi(256))] {
        match r {
            Ok(()) => parts.push(format!("{name} 256/256")),
            Err(e) => {
                ok = false;
                parts.push(format!("{name} failed: {e}"));
            }
        }
    }
    let (mut tried, mut missed) = (0, Vec::new());
    for (name, t, m) in common::mutation_suite() {
        tried += t;
        missed.extend(m.into_iter().map(|x| format!("{name}: {x}")));
    }
    ok &= missed.is_empty() && tried > 0;
    parts.push(format!("mutations detected {}/{tried}", tried - missed.len()));
    if !missed.is_empty() {
        parts.push(format!("undetected {missed:?}"));
    }
    Outcome { ok, detail: parts.join(", ") }
}

type Check = Box<dyn Fn() -> Outcome>;

fn criteria() -> Vec<(u32, &'static str, u64, Check)> {
    let w = Window::default();
    vec![
        (1, "q-Virasoro bracket", 5, Box::new(|| reports(vec![verify("FINALPB")]))),
        (2, "sl3 brackets", 10, Box::new(|| reports(["SL3-11", "SL3-12", "SL3-22"].map(verify).into()))),
        (3, "A-type general, N = 2, 3, 4", 60, Box::new(|| reports(vec![verify("A-GENERAL-N≤4")]))),
        (4, "Cartan inverse and closed form", 30, Box::new(|| reports(vec![verify("CARTAN-INVERSE"), verify("CIJM-CLOSED-FORM")]))),
        (5, "sigma_N = 1, N <= 5", 5, Box::new(|| reports(vec![verify("SIGMA-N-IS-1")]))),
        (6, "fusion, n = 1..5", 10, Box::new(|| reports(vec![verify("FUSION-N≤5")]))),
        (7, "Miura factorization and Baxter", 30, Box::new(|| reports(vec![verify_qdiff("MIURA"), verify_qdiff("BAXTER")]))),
        (
            8,
            "classical limits",
            120,
            Box::new(move || reports(["CLASSICAL-LIMIT", "MIURA-LIMIT", "DUAL-LIMIT"].map(|id| verify_modespace_with(id, &w, 6)).into())),
        ),
        (
            9,
            "mode-space oracle at M=6 D=3 N_out=2",
            300,
            Box::new(move || {
                reports(["ORACLE-FINALPB", "ORACLE-SL3", "ORACLE-A-GENERAL", "ORACLE-SIGMA-N"].map(|id| verify_modespace_with(id, &w, 6)).into())
            }),
        ),
        (
            10,
            "scalar layer: f to x^10, crossing to x^6, YBE to 4",
            60,
            Box::new(|| reports(vec![verify_rmatrix("F-QDIFF", 10), verify_rmatrix("R-CROSSING", 6), verify_rmatrix("R-YBE", 4)])),
        ),
        (11, "property suites and mutations", u64::MAX, Box::new(properties)),
    ]
}

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for (n, name, budget, check) in criteria() {
        let t = Instant::now();
        let out = check();
        let dt = t.elapsed();
        let in_time = budget == u64::MAX || dt <= Duration::from_secs(budget);
        let ok = out.ok && in_time;
        let limit = if budget == u64::MAX { String::new() } else { format!(" / {budget}s") };
        println!("criterion {n:>2} {} {name} ({:.2}s{limit}): {}", if ok { "PASS" } else { "FAIL" }, dt.as_secs_f64(), out.detail);
        if !ok {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria {failed:?}");
}
