//! Shared property and mutation suites, run by `properties.rs` and by the
//! acceptance summary.

#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use qwalg::cartan::{c_matrix, cartan_data, inverse_defect, CartanType};
use qwalg::genalg::GeneratorBasis;
use qwalg::kernel::Kernel;
use qwalg::modespace::{mode_bracket, oracle_check_bracket, ModeMonomial, ModePoly, Window};
use qwalg::qdiff::baxter_residual_with;
use qwalg::rmatrix::{check_crossing_of, check_f_equation_of, check_yang_baxter_of, r_matrix};
use qwalg::scalar::{f_series, HalfInt, Poly, QRat, Ring, XSeries};
use qwalg::series::{poisson_bracket, BracketResult, Expression, FactorSet, ShiftedFactor};
use qwalg::walg::{build_preset, finalpb_reference, reference_bracket_a, sigma_bracket, sl2_sigma, sl3_reference, SigmaLabel, WPreset};

fn presets() -> &'static [WPreset] {
    static P: OnceLock<Vec<WPreset>> = OnceLock::new();
    P.get_or_init(|| {
        [(CartanType::A, 1), (CartanType::A, 2), (CartanType::A, 3), (CartanType::B, 2), (CartanType::C, 2), (CartanType::D, 3)]
            .into_iter()
            .map(|(k, r)| build_preset(k, r).unwrap())
            .collect()
    })
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// (q-power, integer, factors as (family, twice shift, exponent)).
type RawTerm = (i64, i64, Vec<(usize, i32, i32)>);

fn raw_expression() -> impl Strategy<Value = Vec<RawTerm>> {
    let factor = (0usize..4, -3i32..=3, prop_oneof![Just(-2), Just(-1), Just(1), Just(2)]);
    let term = (-2i64..=2, prop_oneof![Just(-2i64), Just(-1), Just(1), Just(3)], prop::collection::vec(factor, 0..=3));
    prop::collection::vec(term, 1..=3)
}

fn build_expression(raw: &[RawTerm], basis: &GeneratorBasis) -> Expression {
    let mut e = Expression::zero();
    for (qp, n, fs) in raw {
        let factors = fs
            .iter()
            .map(|&(f, s, x)| ShiftedFactor { family: f % basis.size(), shift: HalfInt::int(s), exponent: x })
            .collect();
        let c = QRat::q_pow(*qp).times(&QRat::from_int(*n));
        e = e.plus(&Expression::monomial(c, FactorSet::new(factors)));
    }
    e
}

/// `{F(z), G(w)} = -{G(w), F(z)}` for random Y-monomial sums over small
/// Cartan types, plus `K_ji(1/u) = -K_ij(u)` for every generator basis.
pub fn kernel_antisymmetry(cases: u32) -> Result<(), String> {
    for p in presets() {
        if !p.basis.is_antisymmetric() {
            return Err(format!("{}{} basis kernels are not antisymmetric", p.kind(), p.rank()));
        }
    }
    let strat = (0usize..6, raw_expression(), raw_expression());
    runner(cases)
        .run(&strat, |(pi, a, b)| {
            let p = &presets()[pi];
            let (f, g) = (build_expression(&a, &p.basis), build_expression(&b, &p.basis));
            let fg = poisson_bracket(&f, &g, &p.basis).unwrap();
            let gf = poisson_bracket(&g, &f, &p.basis).unwrap();
            prop_assert_eq!(fg, gf.swap_variables().negated());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

type RawModeTerm = (i64, i64, Vec<(usize, i64)>);

fn raw_mode_poly() -> impl Strategy<Value = Vec<RawModeTerm>> {
    let term = (-1i64..=1, -3i64..=3, prop::collection::vec((0usize..4, -4i64..=4), 1..=2));
    prop::collection::vec(term, 1..=3)
}

fn build_mode_poly(raw: &[RawModeTerm], size: usize) -> ModePoly<QRat> {
    let mut p = ModePoly::zero();
    for (qp, n, gens) in raw {
        let m = ModeMonomial::new(gens.iter().map(|&(f, k)| (f % size, k)).collect());
        p.add_term(m, QRat::q_pow(*qp).times(&QRat::from_int(*n)));
    }
    p
}

/// Jacobi and antisymmetry of the mode bracket on random polynomials of
/// degree at most 2 with `|mode| <= 4`.
pub fn mode_jacobi(cases: u32) -> Result<(), String> {
    let strat = (0usize..6, raw_mode_poly(), raw_mode_poly(), raw_mode_poly());
    runner(cases)
        .run(&strat, |(pi, a, b, c)| {
            let basis = &presets()[pi].basis;
            let n = basis.size();
            let (a, b, c) = (build_mode_poly(&a, n), build_mode_poly(&b, n), build_mode_poly(&c, n));
            let br = |x: &ModePoly<QRat>, y: &ModePoly<QRat>| mode_bracket(x, y, basis).unwrap();
            prop_assert_eq!(br(&a, &b), br(&b, &a).negated());
            let jac = br(&a, &br(&b, &c)).plus(&br(&b, &br(&c, &a))).plus(&br(&c, &br(&a, &b)));
            prop_assert!(jac.is_zero(), "Jacobi defect {:?}", jac);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn bump(k: &Kernel) -> Kernel {
    let low = k.numer().coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
    Kernel::from_parts(k.numer().plus(&Poly::monomial(QRat::one(), low)), k.denom().clone())
}

/// Every single-coefficient mutation of `br`: one smooth kernel or one delta
/// coefficient changed.
fn bracket_mutations(br: &BracketResult) -> Vec<(String, BracketResult)> {
    let mut out = Vec::new();
    for (key, k) in &br.smooth {
        let mut m = br.clone();
        m.smooth.insert(key.clone(), bump(k));
        out.push((format!("smooth {}*{}", key.z, key.w), m));
    }
    for (key, c) in &br.deltas {
        let mut m = br.clone();
        m.deltas.insert(key.clone(), c.plus(&QRat::one()));
        out.push((format!("delta {} {}", key.0, key.1), m));
    }
    out
}

/// One line per mutation target: `(name, mutations tried, undetected)`.
pub fn mutation_suite() -> Vec<(String, usize, Vec<String>)> {
    let mut out = Vec::new();
    let mut record = |name: &str, tried: usize, missed: Vec<String>| out.push((name.to_string(), tried, missed));

    // brackets: exact comparison with the engine and the mode oracle
    let sl2 = build_preset(CartanType::A, 1).unwrap();
    let s = sl2_sigma(&sl2).unwrap();
    let sl3 = build_preset(CartanType::A, 2).unwrap();
    let (s1, s2) = (sl3.sigma(SigmaLabel::Index(1)).unwrap().clone(), sl3.sigma(SigmaLabel::Index(2)).unwrap().clone());
    let targets: Vec<(&str, &WPreset, &Expression, &Expression, BracketResult, Window)> = vec![
        ("FINALPB", &sl2, &s, &s, finalpb_reference(&sl2).unwrap(), Window::new(4, 2, 1)),
        ("SL3-12", &sl3, &s1, &s2, sl3_reference(&sl3, 1, 2).unwrap(), Window::new(4, 2, 1)),
    ];
    for (name, p, e1, e2, reference, w) in targets {
        let engine = poisson_bracket(e1, e2, &p.basis).unwrap();
        let muts = bracket_mutations(&reference);
        let mut missed = Vec::new();
        for (label, m) in &muts {
            let oracle = oracle_check_bracket(e1, e2, m, &p.basis, &w).unwrap();
            if m == &engine || oracle.passed() {
                missed.push(label.clone());
            }
        }
        record(&format!("{name} reference (exact + oracle)"), muts.len(), missed);
    }
    {
        let p = build_preset(CartanType::A, 3).unwrap();
        let engine = sigma_bracket(&p, SigmaLabel::Index(1), SigmaLabel::Index(3)).unwrap();
        let muts = bracket_mutations(&reference_bracket_a(4, 1, 3).unwrap());
        let missed = muts.iter().filter(|(_, m)| *m == engine).map(|(l, _)| l.clone()).collect();
        record("A3 (1,3) reference (exact)", muts.len(), missed);
    }

    // Cartan inverse
    for (kind, rank) in [(CartanType::A, 3), (CartanType::B, 2), (CartanType::C, 3), (CartanType::D, 4)] {
        let cd = cartan_data(kind, rank).unwrap();
        let c = c_matrix(&cd).unwrap();
        let mut tried = 0;
        let mut missed = Vec::new();
        for i in 0..rank {
            for j in 0..rank {
                let mut m = c.clone();
                m[i][j] = bump(&m[i][j]);
                tried += 1;
                if inverse_defect(&cd, &m).iter().flatten().all(Kernel::is_zero) {
                    missed.push(format!("({i},{j})"));
                }
            }
        }
        record(&format!("C-matrix {kind}{rank}"), tried, missed);
    }

    // sl2 sigma against the Baxter relation
    {
        let mut missed = Vec::new();
        let terms: Vec<FactorSet> = s.terms().map(|(f, _)| f.clone()).collect();
        for f in &terms {
            let mut m = s.clone();
            m.add_term(f.clone(), QRat::one());
            if baxter_residual_with(&sl2, &m).unwrap().is_zero() {
                missed.push(f.to_string());
            }
        }
        record("sl2 sigma (Baxter)", terms.len(), missed);
    }

    // f(x) and the R-matrix
    {
        let f = f_series(6);
        let mut missed = Vec::new();
        for k in 0..=6 {
            let mut c = f.coeffs().to_vec();
            c[k] = c[k].plus(&QRat::one());
            if check_f_equation_of(&XSeries::new(c, 6)).passed() {
                missed.push(format!("x^{k}"));
            }
        }
        record("f(x) coefficients (q-difference equation)", 7, missed);
    }
    {
        let r = r_matrix(2);
        let mut tried = 0;
        let mut missed = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if r.entry(i, j).is_zero() {
                    continue;
                }
                for k in 0..=2 {
                    let mut c = r.entry(i, j).coeffs().to_vec();
                    c[k] = c[k].plus(&QRat::one());
                    let mut m = r.clone();
                    m.set_entry(i, j, XSeries::new(c, 2));
                    tried += 1;
                    let crossing = check_crossing_of(&m).map(|rep| rep.passed()).unwrap_or(false);
                    if crossing && check_yang_baxter_of(&m).passed() {
                        missed.push(format!("({},{}) x^{k}", i + 1, j + 1));
                    }
                }
            }
        }
        record("R-matrix entries (crossing + YBE)", tried, missed);
    }
    out
}
