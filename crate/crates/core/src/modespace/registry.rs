//! Identities checked on individual modes.

use crate::cartan::{cartan_data, CartanType};
use crate::error::{Error, Result};
use crate::genalg::{lambda_basis, y_basis};
use crate::report::Report;
use crate::scalar::{HalfInt, QRat, Ring};
use crate::series::{poisson_bracket, Expression};
use crate::walg::{WPreset, build_preset, finalpb_reference, normalize_id, reference_bracket_a_in, sigma_bracket, sl2_sigma, sl3_reference, SigmaLabel};

use super::oracle::oracle_check_into;
use super::{classical_limit_report, comp_report, dual_limit_report, enumerate_monomials, miura_limit_report, ModePoly, SeriesExpansion, Window};

const IDS: &[(&str, &str)] = &[
    ("ORACLE-FINALPB", "sl2 {sigma(z),sigma(w)} coefficient by coefficient"),
    ("ORACLE-SL3", "the three sl3 relations coefficient by coefficient"),
    ("ORACLE-A-GENERAL", "{sigma_i(z),sigma_j(w)} for N <= 4 coefficient by coefficient"),
    ("ORACLE-SIGMA-N", "sigma_N(z) = 1 mode by mode, N <= 5"),
    ("ORACLE-PBG", "{Lambda_i(z),Lambda_j(w)} in the lambda basis, N <= 5"),
    ("ORACLE-YI", "{Y_i(z),Y_j(w)} = (q-q^-1) C_ij(w/z) Y_i(z) Y_j(w), types A-D rank <= 3"),
    ("ORACLE-BCD", "{sigma_i(z),sigma_j(w)} for B2, B3, C2, C3, D3"),
    ("COMP", "{sigma_n,sigma_m} = 2h sum_l (q^l-q^-l)/(q^l+q^-l) sigma_(n-l) sigma_(m+l) - 2h (q^2n-q^-2n) delta_(n,-m)"),
    ("CLASSICAL-LIMIT", "{sigma_n,sigma_m} = 16h^4 ((n-m) S_(n+m) - (n^3-n)/2 delta_(n,-m)) + O(h^5)"),
    ("MIURA-LIMIT", "2 + 4h^2 z^2 S(z) + h^2 = 2 + h^2 (z chi(z) + 1)^2 - 2h^2 z d/dz (z chi(z))"),
    ("DUAL-LIMIT", "{sigma(z),sigma(w)} / 2h(q-q^-1) -> (1/2) delta'(w/z) sigma sigma - 2 delta'(w/z)"),
];

pub fn modespace_ids() -> Vec<&'static str> {
    IDS.iter().map(|(id, _)| *id).collect()
}

/// Run one mode-space identity. The window applies to the oracle checks;
/// the limits use their own fixed ranges.
pub fn verify_modespace(id: &str, w: &Window) -> Result<Report> {
    verify_modespace_with(id, w, 6)
}

/// As [`verify_modespace`], with the h-order of the classical limit.
pub fn verify_modespace_with(id: &str, w: &Window, h_order: usize) -> Result<Report> {
    let id = normalize_id(id);
    let (key, anchor) = IDS.iter().find(|(k, _)| *k == id).ok_or_else(|| Error::UnknownIdentity(id.clone()))?;
    let mut r = match *key {
        "COMP" => comp_report(w)?,
        "CLASSICAL-LIMIT" => classical_limit_report(h_order, 3)?,
        "MIURA-LIMIT" => miura_limit_report(4)?,
        "DUAL-LIMIT" => dual_limit_report(6)?,
        _ => oracle_identity(key, w)?,
    };
    r.identity = key.to_string();
    r.anchors = anchor.to_string();
    Ok(r)
}

fn oracle_identity(key: &str, w: &Window) -> Result<Report> {
    let mut r = Report::new(key, "");
    match key {
        "ORACLE-FINALPB" => {
            let p = build_preset(CartanType::A, 1)?;
            let s = sl2_sigma(&p)?;
            oracle_check_into(&mut r, "", &s, &s, &finalpb_reference(&p)?, &p.basis, w)?;
        }
        "ORACLE-SL3" => {
            let p = build_preset(CartanType::A, 2)?;
            for (i, j) in [(1, 1), (1, 2), (2, 2)] {
                let br = sl3_reference(&p, i, j)?;
                oracle_check_into(&mut r, &format!("({i},{j}) "), &p.sigma_a(i)?, &p.sigma_a(j)?, &br, &p.basis, w)?;
            }
        }
        "ORACLE-A-GENERAL" => {
            for n in 2..=4usize {
                let p = build_preset(CartanType::A, n - 1)?;
                for i in 1..n {
                    for j in i..n {
                        let br = reference_bracket_a_in(&p, i, j)?;
                        let label = format!("N={n} ({i},{j}) ");
                        oracle_check_into(&mut r, &label, &p.sigma_a(i)?, &p.sigma_a(j)?, &br, &p.basis, w)?;
                    }
                }
            }
        }
        "ORACLE-SIGMA-N" => {
            for n in 2..=5usize {
                let p = build_preset(CartanType::A, n - 1)?;
                let modes = top_product_modes(&p, w)?;
                let span = w.max_mode * w.max_degree as i64;
                for k in -w.n_out..=w.n_out {
                    let c = &modes[(k + span) as usize];
                    let want = if k == 0 { ModePoly::constant(QRat::one()) } else { ModePoly::zero() };
                    r.check(format!("N={n} mode {k}"), *c == want, c.to_string(), want.to_string());
                }
            }
        }
        "ORACLE-PBG" => {
            for n in 2..=5usize {
                let l = lambda_basis(n)?;
                for i in 0..n {
                    for j in i..n {
                        let li = Expression::exponential(&l, i, HalfInt::ZERO, 1);
                        let lj = Expression::exponential(&l, j, HalfInt::ZERO, 1);
                        let br = poisson_bracket(&li, &lj, &l)?;
                        oracle_check_into(&mut r, &format!("N={n} ({},{}) ", i + 1, j + 1), &li, &lj, &br, &l, w)?;
                    }
                }
            }
        }
        "ORACLE-YI" => {
            for kind in [CartanType::A, CartanType::B, CartanType::C, CartanType::D] {
                let lo = if kind == CartanType::D { 3 } else { 1 };
                for rank in lo..=3 {
                    let y = y_basis(&cartan_data(kind, rank)?)?;
                    for i in 0..rank {
                        for j in 0..rank {
                            let yi = Expression::exponential(&y, i, HalfInt::ZERO, 1);
                            let yj = Expression::exponential(&y, j, HalfInt::ZERO, 1);
                            let br = poisson_bracket(&yi, &yj, &y)?;
                            oracle_check_into(&mut r, &format!("{kind}{rank} ({},{}) ", i + 1, j + 1), &yi, &yj, &br, &y, w)?;
                        }
                    }
                }
            }
        }
        "ORACLE-BCD" => {
            let cases = [(CartanType::B, 2), (CartanType::B, 3), (CartanType::C, 2), (CartanType::C, 3), (CartanType::D, 3)];
            for (kind, rank) in cases {
                let p = build_preset(kind, rank)?;
                let labels: Vec<SigmaLabel> = p.labels();
                for (a, &i) in labels.iter().enumerate() {
                    for &j in &labels[a..] {
                        let br = sigma_bracket(&p, i, j)?;
                        oracle_check_into(&mut r, &format!("{kind}{rank} ({i},{j}) "), p.sigma(i)?, p.sigma(j)?, &br, &p.basis, w)?;
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(r)
}

/// Modes of `Lambda_1(z) Lambda_2(zq^2) ... Lambda_N(zq^{2N-2})` built as a
/// Cauchy product of the modes of each factor, indexed from `-M D`.
fn top_product_modes(p: &WPreset, w: &Window) -> Result<Vec<ModePoly<QRat>>> {
    let span = w.max_mode * w.max_degree as i64;
    let factor_modes = |e: &Expression| -> Vec<ModePoly<QRat>> {
        let mut x = SeriesExpansion::new(e);
        let fams = x.families().to_vec();
        (-span..=span)
            .map(|a| {
                let mut out = ModePoly::zero();
                for t in enumerate_monomials(&fams, w.max_mode, w.max_degree, span, a) {
                    let c = x.coefficient(&t);
                    out.add_term(t, c);
                }
                out
            })
            .collect()
    };
    let mut acc: Vec<ModePoly<QRat>> = (-span..=span).map(|a| if a == 0 { ModePoly::constant(QRat::one()) } else { ModePoly::zero() }).collect();
    for (k, l) in p.lambda_list.iter().enumerate() {
        let f = factor_modes(&l.shifted(HalfInt::from_twice(4 * k as i32)));
        let mut next = vec![ModePoly::zero(); acc.len()];
        for (i, x) in acc.iter().enumerate() {
            for (j, y) in f.iter().enumerate() {
                let a = i as i64 + j as i64 - 2 * span;
                if (-span..=span).contains(&a) {
                    truncated_product_into(&mut next[(a + span) as usize], x, y, w.max_degree);
                }
            }
        }
        acc = next;
    }
    Ok(acc)
}

fn truncated_product_into(out: &mut ModePoly<QRat>, x: &ModePoly<QRat>, y: &ModePoly<QRat>, max_degree: usize) {
    for (tx, cx) in x.terms() {
        for (ty, cy) in y.terms() {
            if tx.degree() + ty.degree() <= max_degree {
                out.add_term(tx.times(ty), cx.times(cy));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_window_identities() {
        let w = Window::new(3, 2, 1);
        for id in ["ORACLE-FINALPB", "ORACLE-SL3", "ORACLE-SIGMA-N", "ORACLE-PBG"] {
            let r = verify_modespace(id, &w).unwrap();
            assert!(r.passed(), "{id}: {:?}", r.cases.iter().find(|c| c.diff.is_some()));
        }
        assert!(matches!(verify_modespace("nope", &w), Err(Error::UnknownIdentity(_))));
    }

    #[test]
    fn misplaced_lambda_shift_breaks_top_product() {
        let w = Window::new(3, 2, 1);
        let mut p = build_preset(CartanType::A, 2).unwrap();
        let ok = top_product_modes(&p, &w).unwrap();
        assert_eq!(ok[6], ModePoly::constant(QRat::one()));
        p.lambda_list[1] = p.lambda_list[1].shifted(HalfInt::from_twice(2));
        let bad = top_product_modes(&p, &w).unwrap();
        assert_ne!(bad[6], ModePoly::constant(QRat::one()));
    }
}
