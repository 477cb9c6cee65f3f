//! The `h -> 0` limits of the sl2 bracket and the mode form of `{sigma_n, sigma_m}`.

use crate::cartan::CartanType;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::{fmt_rat, hseries_of, q_minus_qinv, rat, rat_int, Field, HSeries, QRat, Rat, Ring};
use crate::series::{poisson_bracket, Expression, FactorSet, JointKey};
use crate::walg::{build_preset, sl2_sigma, WPreset};

use super::{enumerate_monomials, reliable_monomials, ModeMonomial, OracleContext, SeriesExpansion, Window};

fn sl2() -> Result<(WPreset, Expression)> {
    let p = build_preset(CartanType::A, 1)?;
    let s = sl2_sigma(&p)?;
    Ok((p, s))
}

fn coeff(s: &HSeries, k: usize) -> Result<Rat> {
    s.coeff(k).ok_or_else(|| Error::WindowExceeded(format!("h^{k} beyond the tracked order {}", s.order())))
}

/// `h^d c(q)` expanded to `order`.
fn with_h(c: &QRat, d: usize, order: usize) -> Result<HSeries> {
    Ok(hseries_of(c, order)?.times(&HSeries::h(order).pow(d as u32)))
}

/// `(q^l - q^-l) / (q^l + q^-l)`.
fn comp_weight(l: i64) -> QRat {
    let (a, b) = (QRat::q_pow(l), QRat::q_pow(-l));
    a.minus(&b).divided(&a.plus(&b))
}

fn delta(b: bool) -> i64 {
    i64::from(b)
}

/// `{sigma_n, sigma_m}` against
/// `sum_l (q^l - q^-l)/(q^l + q^-l) sigma_{n-l} sigma_{m+l} - (q^2n - q^-2n) delta_{n,-m}`
/// in normalized units. Only `l` with both factors inside the window occur.
pub fn comp_report(w: &Window) -> Result<Report> {
    let (p, s) = sl2()?;
    let mut report = Report::new(
        "COMP",
        "{sigma_n,sigma_m} = 2h sum_l (q^l-q^-l)/(q^l+q^-l) sigma_(n-l) sigma_(m+l) - 2h (q^2n-q^-2n) delta_(n,-m)",
    );
    let mut oracle = OracleContext::new(&s, &s, &p.basis)?;
    let mut x = SeriesExpansion::new(&s);
    for n in -w.n_out..=w.n_out {
        for m in -w.n_out..=w.n_out {
            let mut bad: Option<(ModeMonomial, QRat, QRat)> = None;
            let rs = reliable_monomials(&[0], n, m, w)?;
            for r in &rs {
                let lhs = oracle.coefficient(n, m, r, w)?;
                let mut rhs = QRat::zero();
                for (r1, r2) in r.splits() {
                    let l = n - r1.total_mode();
                    let c = x.coefficient(&r1).times(&x.coefficient(&r2));
                    rhs = rhs.plus(&comp_weight(l).times(&c));
                }
                if n == -m && r.is_one() {
                    rhs = rhs.minus(&QRat::q_pow(2 * n).minus(&QRat::q_pow(-2 * n)));
                }
                if lhs != rhs {
                    bad = Some((r.clone(), lhs, rhs));
                    break;
                }
            }
            let label = format!("n={n} m={m}");
            match bad {
                None => report.check(label, true, format!("{} coefficients", rs.len()), format!("{} coefficients", rs.len())),
                Some((r, l, rr)) => report.check(label, false, format!("{r}: {l}"), format!("{r}: {rr}")),
            }
        }
    }
    Ok(report)
}

/// `S^(0)_k` at `r`: the `h^2` part of `sigma_k` over 4, less `delta_{k,0} / 4`.
fn s0(x: &mut SeriesExpansion, k: i64, r: &ModeMonomial, order: usize) -> Result<Rat> {
    let v = coeff(&with_h(&x.coefficient(r), r.degree(), order)?, 2)?;
    let shift = if k == 0 && r.is_one() { rat(1, 4) } else { Rat::zero() };
    Ok(v * rat(1, 4) - shift)
}

/// Classical limit with `lambda = h chi`:
/// `sigma_n = 2 delta_{n,0} + O(h^2)`; `{sigma_n, sigma_m}` starts at `h^4`
/// with coefficient `16 [(n-m) S_{n+m} - (n^3-n)/2 delta_{n,-m}]`; and the
/// `h^2` part of `sigma(z)` is `(z chi(z) + 1)^2 - 2 z d/dz (z chi(z))`.
pub fn classical_limit_report(order: usize, mode_bound: i64) -> Result<Report> {
    if order < 5 {
        return Err(Error::IndexError(format!("h-order {order} < 5 cannot see h^4")));
    }
    let (p, s) = sl2()?;
    let w = Window::new(Window::default().max_mode.max(2 * mode_bound), 3, mode_bound);
    let mut report = Report::new(
        "CLASSICAL-LIMIT",
        "sigma(z) = 2 + 4h^2 (z^2 S(z) + 1/4) + ...; {sigma_n,sigma_m} = 16h^4 ((n-m) S_(n+m) - (n^3-n)/2 delta_(n,-m)) + ...",
    );
    let mut x = SeriesExpansion::new(&s);

    for k in -2 * mode_bound..=2 * mode_bound {
        let mut bad = None;
        for t in enumerate_monomials(&[0], w.max_mode, w.max_degree, w.max_mode * 3, k) {
            let mut v = with_h(&x.coefficient(&t), t.degree(), order)?;
            if k == 0 && t.is_one() {
                v = v.minus(&HSeries::constant(rat_int(2)));
            }
            if !coeff(&v, 0)?.is_zero() || !coeff(&v, 1)?.is_zero() {
                bad = Some(format!("{t}: {v}"));
                break;
            }
        }
        let ok = bad.is_none();
        report.check(format!("sigma_{k} - 2 delta = O(h^2)"), ok, bad.unwrap_or_else(|| "O(h^2)".into()), "O(h^2)");
    }

    let mut oracle = OracleContext::new(&s, &s, &p.basis)?;
    for n in -mode_bound..=mode_bound {
        for m in -mode_bound..=mode_bound {
            let mut bad = None;
            let rs = reliable_monomials(&[0], n, m, &w)?;
            for r in &rs {
                let c = oracle.coefficient(n, m, r, &w)?;
                let v = with_h(&c, r.degree() + 1, order)?.times(&HSeries::constant(rat_int(2)));
                for k in 0..4 {
                    if !coeff(&v, k)?.is_zero() {
                        bad = Some((format!("{r}: h^{k} coefficient {}", fmt_rat(&coeff(&v, k)?)), "0".to_string()));
                    }
                }
                let mut target = rat_int(n - m) * s0(&mut x, n + m, r, order)?;
                if n == -m && r.is_one() {
                    target -= rat(n * n * n - n, 2);
                }
                target *= rat_int(16);
                let got = coeff(&v, 4)?;
                if bad.is_none() && got != target {
                    bad = Some((format!("{r}: {}", fmt_rat(&got)), format!("{r}: {}", fmt_rat(&target))));
                }
                if bad.is_some() {
                    break;
                }
            }
            let label = format!("h^4 n={n} m={m}");
            match bad {
                None => report.check(label, true, format!("{} coefficients", rs.len()), format!("{} coefficients", rs.len())),
                Some((l, r)) => report.check(label, false, l, r),
            }
        }
    }

    for n in 1..=mode_bound {
        // at the empty monomial only l = n contributes: 2h weight(n) (q + q^-1)^2
        let sig0 = x.coefficient(&ModeMonomial::one());
        let first = with_h(&comp_weight(n).times(&sig0).times(&sig0), 1, order)?.times(&HSeries::constant(rat_int(2)));
        let second = with_h(&QRat::q_pow(2 * n).minus(&QRat::q_pow(-2 * n)), 1, order)?.times(&HSeries::constant(rat_int(-2)));
        let nn = rat_int(n);
        let cube = rat_int(n * n * n);
        let expect = [
            ("first term h^2", coeff(&first, 2)?, rat_int(8) * &nn),
            ("first term h^4", coeff(&first, 4)?, rat_int(8) * &nn - rat(8, 3) * &cube),
            ("second term h^2", coeff(&second, 2)?, rat_int(-8) * &nn),
            ("second term h^4", coeff(&second, 4)?, rat(-16, 3) * &cube),
        ];
        for (what, got, want) in expect {
            report.check(format!("{what} n={n} m={}", -n), got == want, fmt_rat(&got), fmt_rat(&want));
        }
    }

    miura_into(&mut report, &mut x, order, mode_bound, &w)?;
    Ok(report)
}

/// `h^2` coefficient of `sigma_n` against the modes of
/// `(X + 1)^2 - 2 z d/dz X` with `X(z) = z chi(z) = sum chi_m z^{-m}`.
pub fn miura_limit_report(mode_bound: i64) -> Result<Report> {
    let (_, s) = sl2()?;
    let mut report = Report::new("MIURA-LIMIT", "2 + 4h^2 z^2 S(z) + h^2 = 2 + h^2 (z chi(z) + 1)^2 - 2h^2 z d/dz (z chi(z))");
    let w = Window::new(Window::default().max_mode.max(2 * mode_bound), 3, mode_bound);
    miura_into(&mut report, &mut SeriesExpansion::new(&s), 5, mode_bound, &w)?;
    Ok(report)
}

fn miura_into(report: &mut Report, x: &mut SeriesExpansion, order: usize, mode_bound: i64, w: &Window) -> Result<()> {
    for n in -mode_bound..=mode_bound {
        let mut bad = None;
        let ts = enumerate_monomials(&[0], w.max_mode, w.max_degree, w.max_mode * 3, n);
        for t in &ts {
            let got = coeff(&with_h(&x.coefficient(t), t.degree(), order)?, 2)?;
            let want = match t.gens() {
                [] => rat_int(delta(n == 0)),
                [_] => rat_int(2 + 2 * n),
                [a, b] => rat_int(if a == b { 1 } else { 2 }),
                _ => Rat::zero(),
            };
            if got != want {
                bad = Some((format!("{t}: {}", fmt_rat(&got)), format!("{t}: {}", fmt_rat(&want))));
                break;
            }
        }
        let label = format!("Miura h^2 n={n}");
        match bad {
            None => report.check(label, true, format!("{} coefficients", ts.len()), format!("{} coefficients", ts.len())),
            Some((l, r)) => report.check(label, false, l, r),
        }
    }
    Ok(())
}

/// Divide the sl2 bracket by `(q - q^-1)` and set `h = 0` mode by mode: the
/// smooth kernel gives `m/2` and the delta pair gives `-2m`.
pub fn dual_limit_report(mode_bound: i64) -> Result<Report> {
    let (p, s) = sl2()?;
    let br = poisson_bracket(&s, &s, &p.basis)?;
    let mut report = Report::new("DUAL-LIMIT", "{sigma(z),sigma(w)} -> (1/2) delta'(w/z) sigma(z) sigma(w) - 2 delta'(w/z)");
    let terms: Vec<(&FactorSet, &QRat)> = s.terms().collect();
    let (f0, c0) = terms[0];
    let key = JointKey { z: f0.clone(), w: f0.clone() };
    let rho = br.smooth.get(&key).ok_or_else(|| Error::DimensionMismatch("no sigma sigma kernel".into()))?.scale(&c0.times(c0).inverse());
    for (fa, ca) in &terms {
        for (fb, cb) in &terms {
            let key = JointKey { z: (*fa).clone(), w: (*fb).clone() };
            let k = br.smooth.get(&key).cloned().unwrap_or_else(crate::kernel::Kernel::zero);
            let ok = k == rho.scale(&ca.times(cb));
            report.check(format!("smooth kernel on {fa} {fb}"), ok, k.to_string(), rho.scale(&ca.times(cb)).to_string());
        }
    }
    let bare = br.delta_terms().iter().all(|(_, f)| f.is_one());
    report.check("deltas carry no monomials", bare, format!("{} deltas", br.deltas.len()), "bare deltas");
    let qd = q_minus_qinv();
    for m in -mode_bound..=mode_bound {
        let smooth = hseries_of(&rho.eval(m)?.divided(&qd), 1)?;
        let mut dsum = QRat::zero();
        for (d, _) in br.delta_terms() {
            dsum = dsum.plus(&d.kernel().eval(m)?);
        }
        let dl = hseries_of(&dsum.divided(&qd), 1)?;
        let (a, b) = (coeff(&smooth, 0)?, coeff(&dl, 0)?);
        report.check(format!("smooth m={m}"), a == rat(m, 2), fmt_rat(&a), fmt_rat(&rat(m, 2)));
        report.check(format!("delta m={m}"), b == rat_int(-2 * m), fmt_rat(&b), fmt_rat(&rat_int(-2 * m)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comp_small_window() {
        let r = comp_report(&Window::new(4, 2, 1)).unwrap();
        assert!(r.passed(), "{:#?}", r.cases.iter().filter(|c| !c.diff.is_none()).collect::<Vec<_>>());
    }

    #[test]
    fn dual_limit_values() {
        let r = dual_limit_report(3).unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn miura_limit_small() {
        let r = miura_limit_report(2).unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn classical_needs_order_five() {
        assert!(classical_limit_report(4, 1).is_err());
        let r = classical_limit_report(5, 1).unwrap();
        assert!(r.passed(), "{:#?}", r.cases.iter().filter(|c| c.diff.is_some()).collect::<Vec<_>>());
    }
}
