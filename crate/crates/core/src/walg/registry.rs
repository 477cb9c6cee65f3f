//! Named identities checked by the kernel engine.

use crate::cartan::{c_matrix, c_matrix_closed_form_a, cartan_data, cartan_data_with, inverse_defect, CartanType, Normalization};
use crate::error::{Error, Result};
use crate::genalg::{a_basis, duality_kernels, lambda_basis, transform_brackets, y_basis, y_from_a, BasisTag};
use crate::kernel::{kernel_from_qratio, qint_kernel, Kernel, QRatio};
use crate::report::{Report, Unit};
use crate::scalar::{q_minus_qinv, HalfInt, QRat, Ring};
use crate::series::{monomial_pair_kernel, poisson_bracket, BracketBuilder, Expression};

use super::reference::{add_smooth, finalpb_reference, reference_bracket_a_in, sl3_reference};
use super::{build_preset, fusion_defect, sigma_bracket, sl2_sigma, SigmaLabel};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub unit: Unit,
}

const IDS: &[(&str, &str)] = &[
    ("FINALPB", "{sigma(z),sigma(w)} = (q-q^-1) sum (w/z)^m [m]^2/[2m] sigma(z)sigma(w) + delta(w/zq^2) - delta(wq^2/z)"),
    ("SL3-11", "{sigma_1(z),sigma_1(w)} for sl3"),
    ("SL3-12", "{sigma_1(z),sigma_2(w)} for sl3"),
    ("SL3-22", "{sigma_2(z),sigma_2(w)} for sl3"),
    ("A-GENERAL-N≤4", "{sigma_i(z),sigma_j(w)} = (q-q^-1) C_ij(wq^(j-i)/z) sigma_i sigma_j + delta sums, N <= 4"),
    ("SIGMA-N-IS-1", "Lambda_1(z) Lambda_2(zq^2) ... Lambda_N(zq^(2N-2)) = 1, N <= 5"),
    ("PBG1-FROM-PBA", "{Lambda_i(z),Lambda_i(w)} = (q-q^-1) sum (w/z)^m [(N-1)m][m]/[Nm] Lambda_i Lambda_i"),
    ("PBG2-FROM-PBA", "{Lambda_i(z),Lambda_j(w)} = -(q-q^-1) sum (w/zq^N)^m [m]^2/[Nm] Lambda_i Lambda_j, i < j"),
    ("CARTAN-INVERSE", "B^(m) C^(m) = [m]^2 I, types A-D, rank <= 5"),
    ("CIJM-CLOSED-FORM", "C_ij^(m) = [(N-max)m][min m]/[Nm], N <= 6"),
    ("Y-DUALITY", "{y_i[n], a_j[m]} = [n] delta_ij delta_(n,-m)"),
    ("FUSION-N≤5", "l1(zq^2n) l(n)(z) = l(n+1)(z) + l(n-1)(z), n <= 5"),
    ("YI-BRACKET", "{Y_i(z),Y_j(w)} = (q-q^-1) C_ij(w/z) Y_i(z) Y_j(w)"),
    ("LAMBDA-TWO-PATHS", "Lambda_i as Y-monomials vs lambda-basis exponentials"),
    ("BCD-ANTISYM", "{sigma_i(z),sigma_j(w)} = -{sigma_j(w),sigma_i(z)}, types B, C, D rank <= 3"),
];

pub fn registry_ids() -> Vec<&'static str> {
    IDS.iter().map(|(id, _)| *id).collect()
}

/// Accepts `<=` for `≤` and any letter case.
pub fn normalize_id(id: &str) -> String {
    id.trim().to_ascii_uppercase().replace("<=", "≤")
}

pub fn verify(id: &str) -> Result<Report> {
    verify_with(id, VerifyOptions::default())
}

pub fn verify_with(id: &str, opts: VerifyOptions) -> Result<Report> {
    let id = normalize_id(id);
    let (key, anchor) = IDS.iter().find(|(k, _)| *k == id).ok_or_else(|| Error::UnknownIdentity(id.clone()))?;
    let mut r = Report::new(key, anchor);
    let unit = opts.unit;
    match *key {
        "FINALPB" => {
            let p = build_preset(CartanType::A, 1)?;
            let s = sl2_sigma(&p)?;
            r.check_brackets("sl2", &poisson_bracket(&s, &s, &p.basis)?, &finalpb_reference(&p)?, unit);
        }
        "SL3-11" | "SL3-12" | "SL3-22" => {
            let p = build_preset(CartanType::A, 2)?;
            let (i, j) = match *key {
                "SL3-11" => (1, 1),
                "SL3-12" => (1, 2),
                _ => (2, 2),
            };
            let lhs = sigma_bracket(&p, SigmaLabel::Index(i), SigmaLabel::Index(j))?;
            r.check_brackets(format!("({i},{j})"), &lhs, &sl3_reference(&p, i, j)?, unit);
        }
        "A-GENERAL-N≤4" => {
            for n in 2..=4 {
                let p = build_preset(CartanType::A, n - 1)?;
                for i in 1..n {
                    for j in i..n {
                        let lhs = sigma_bracket(&p, SigmaLabel::Index(i), SigmaLabel::Index(j))?;
                        let branch = if i + j <= n { "i+j<=N" } else { "i+j>N" };
                        r.check_brackets(format!("N={n} i={i} j={j} {branch}"), &lhs, &reference_bracket_a_in(&p, i, j)?, unit);
                    }
                }
            }
        }
        "SIGMA-N-IS-1" => {
            for n in 2..=5 {
                let p = build_preset(CartanType::A, n - 1)?;
                let top = p.sigma_top_product();
                r.check(format!("N={n}"), top.is_one(), top.to_string(), "1");
            }
        }
        "PBG1-FROM-PBA" | "PBG2-FROM-PBA" => {
            let diag = *key == "PBG1-FROM-PBA";
            for n in 2..=5usize {
                let l = lambda_basis(n)?;
                let ni = n as i32;
                let k = if diag {
                    kernel_from_qratio(
                        &QRatio::new().qint(HalfInt::int(ni - 1), 1).qint(HalfInt::int(1), 1).qint(HalfInt::int(ni), -1).constant(q_minus_qinv()),
                    )
                } else {
                    kernel_from_qratio(
                        &QRatio::new()
                            .qint(HalfInt::int(1), 2)
                            .qint(HalfInt::int(ni), -1)
                            .q_power(HalfInt::int(-ni))
                            .constant(q_minus_qinv().negated()),
                    )
                };
                for i in 0..n {
                    let js: Vec<usize> = if diag { vec![i] } else { (i + 1..n).collect() };
                    for j in js {
                        let li = Expression::exponential(&l, i, HalfInt::ZERO, 1);
                        let lj = Expression::exponential(&l, j, HalfInt::ZERO, 1);
                        let lhs = poisson_bracket(&li, &lj, &l)?;
                        let mut b = BracketBuilder::new();
                        add_smooth(&mut b, &k, &li, &lj);
                        r.check_brackets(format!("N={n} i={} j={}", i + 1, j + 1), &lhs, &b.finish(), unit);
                    }
                }
            }
        }
        "CARTAN-INVERSE" => {
            for norm in [Normalization::LongRootsTwo, Normalization::ShortRootsTwo] {
                for kind in [CartanType::A, CartanType::B, CartanType::C, CartanType::D] {
                    let lo = if kind == CartanType::D { 3 } else { 1 };
                    for rank in lo..=5 {
                        let cd = cartan_data_with(kind, rank, norm)?;
                        let defect = inverse_defect(&cd, &c_matrix(&cd)?);
                        let ok = defect.iter().flatten().all(Kernel::is_zero);
                        r.check(format!("{kind}{rank} {norm:?}"), ok, if ok { "0" } else { "nonzero" }, "0");
                    }
                }
            }
        }
        "CIJM-CLOSED-FORM" => {
            for n in 2..=6 {
                let inv = c_matrix(&cartan_data(CartanType::A, n - 1)?)?;
                let closed = c_matrix_closed_form_a(n);
                let ok = inv == closed;
                r.check(format!("N={n}"), ok, format!("{}", inv[0][0]), format!("{}", closed[0][0]));
            }
        }
        "Y-DUALITY" => {
            for kind in [CartanType::A, CartanType::B, CartanType::C, CartanType::D] {
                let lo = if kind == CartanType::D { 3 } else { 1 };
                for rank in lo..=5 {
                    let d = duality_kernels(&cartan_data(kind, rank)?)?;
                    let ok = (0..rank).all(|i| {
                        (0..rank).all(|j| d[i][j] == if i == j { qint_kernel(HalfInt::int(1)) } else { Kernel::zero() })
                    });
                    r.check(format!("{kind}{rank}"), ok, format!("{}", d[0][0]), "[n]_q");
                }
            }
        }
        "FUSION-N≤5" => {
            let p = build_preset(CartanType::A, 1)?;
            for n in 1..=5 {
                let d = fusion_defect(&p, n);
                r.check(format!("n={n}"), d.is_zero(), d.to_string(), "0");
            }
        }
        "YI-BRACKET" => {
            for kind in [CartanType::A, CartanType::B, CartanType::C, CartanType::D] {
                let lo = if kind == CartanType::D { 3 } else { 1 };
                for rank in lo..=3 {
                    let cd = cartan_data(kind, rank)?;
                    let y = y_basis(&cd)?;
                    let derived = transform_brackets(&a_basis(&cd), &y_from_a(&cd)?, BasisTag::Y, y.prefactor_b.clone())?;
                    for i in 0..rank {
                        for j in 0..rank {
                            let yi = Expression::exponential(&derived, i, HalfInt::ZERO, 1);
                            let yj = Expression::exponential(&derived, j, HalfInt::ZERO, 1);
                            let lhs = poisson_bracket(&yi, &yj, &derived)?;
                            let mut b = BracketBuilder::new();
                            add_smooth(&mut b, &y.kernels[i][j], &yi, &yj);
                            r.check_brackets(format!("{kind}{rank} ({},{})", i + 1, j + 1), &lhs, &b.finish(), unit);
                        }
                    }
                }
            }
        }
        "LAMBDA-TWO-PATHS" => {
            for n in 2..=4usize {
                let p = build_preset(CartanType::A, n - 1)?;
                let l = lambda_basis(n)?;
                for a in 0..n {
                    let (fa, ca) = single(&p.lambda_list[a])?;
                    let pre = QRat::b_pow(l.prefactor_b[a]);
                    r.check(format!("N={n} prefactor {}", a + 1), ca == pre, ca.to_string(), pre.to_string());
                    for b in 0..n {
                        let (fb, cb) = single(&p.lambda_list[b])?;
                        let ky = monomial_pair_kernel(&fa, &fb, &p.basis).scale(&ca.times(&cb));
                        let kl = l.kernels[a][b].scale(&QRat::b_pow(l.prefactor_b[a] + l.prefactor_b[b]));
                        r.check(format!("N={n} ({},{})", a + 1, b + 1), ky == kl, ky.to_string(), kl.to_string());
                    }
                }
            }
        }
        "BCD-ANTISYM" => {
            let cases = [(CartanType::B, 2), (CartanType::B, 3), (CartanType::C, 2), (CartanType::C, 3), (CartanType::D, 3)];
            for (kind, rank) in cases {
                let p = build_preset(kind, rank)?;
                let labels = p.labels();
                for &i in &labels {
                    for &j in &labels {
                        if j < i {
                            continue;
                        }
                        let ij = sigma_bracket(&p, i, j)?;
                        let ji = sigma_bracket(&p, j, i)?.swap_variables().negated();
                        r.check_brackets(format!("{kind}{rank} ({i},{j})"), &ij, &ji, unit);
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(r)
}

fn single(e: &Expression) -> Result<(crate::series::FactorSet, QRat)> {
    let mut it = e.terms();
    match (it.next(), it.next()) {
        (Some((f, c)), None) => Ok((f.clone(), c.clone())),
        _ => Err(Error::DimensionMismatch("Lambda is not a single monomial".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_identities_pass() {
        for id in ["FINALPB", "SL3-12", "SIGMA-N-IS-1", "FUSION-N<=5", "CIJM-CLOSED-FORM", "LAMBDA-TWO-PATHS"] {
            let r = verify(id).unwrap();
            assert!(r.passed(), "{id}: {:?}", r.diff);
        }
    }

    #[test]
    fn unknown_identity() {
        assert!(matches!(verify("NOPE"), Err(Error::UnknownIdentity(_))));
        assert_eq!(normalize_id("a-general-n<=4"), "A-GENERAL-N≤4");
    }
}
