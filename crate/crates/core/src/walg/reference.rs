//! Closed-form right-hand sides of the bracket identities, assembled term by term.

use crate::cartan::{c_matrix_closed_form_a, CartanType};
use crate::error::{Error, Result};
use crate::kernel::{kernel_from_qratio, Kernel, QRatio};
use crate::scalar::{q_minus_qinv, HalfInt, QRat, Ring};
use crate::series::{BracketBuilder, BracketResult, Expression, JointKey};

use super::{build_preset, sl2_sigma, WPreset};

/// `K(w/z) Z(z) W(w)`.
pub(crate) fn add_smooth(b: &mut BracketBuilder, k: &Kernel, z: &Expression, w: &Expression) {
    for (fz, cz) in z.terms() {
        for (fw, cw) in w.terms() {
            b.add_kernel(JointKey { z: fz.clone(), w: fw.clone() }, k.scale(&cz.times(cw)));
        }
    }
}

/// `c delta(w/(z q^s)) Z(z) W(w)`.
pub(crate) fn add_delta(b: &mut BracketBuilder, s: HalfInt, c: &QRat, z: &Expression, w: &Expression) {
    for (fz, cz) in z.terms() {
        for (fw, cw) in w.terms() {
            b.add_delta(s, fz.times(&fw.shifted(s)), c.times(&cz.times(cw)));
        }
    }
}

fn qratio_kernel(r: QRatio) -> Kernel {
    kernel_from_qratio(&r.constant(q_minus_qinv()))
}

/// `(q - q^-1) sum_m x^m [m]^2/[2m] sigma(z) sigma(w) + delta(w/(zq^2)) - delta(wq^2/z)`.
pub fn finalpb_reference(p: &WPreset) -> Result<BracketResult> {
    let s = sl2_sigma(p)?;
    let mut b = BracketBuilder::new();
    let k = qratio_kernel(QRatio::new().qint(HalfInt::int(1), 2).qint(HalfInt::int(2), -1));
    add_smooth(&mut b, &k, &s, &s);
    let one = Expression::one();
    add_delta(&mut b, HalfInt::int(2), &QRat::one(), &one, &one);
    add_delta(&mut b, HalfInt::int(-2), &QRat::one().negated(), &one, &one);
    Ok(b.finish())
}

/// The three displayed sl3 relations, `(i, j)` in `{(1,1), (1,2), (2,2)}`.
pub fn sl3_reference(p: &WPreset, i: usize, j: usize) -> Result<BracketResult> {
    if p.kind() != CartanType::A || p.rank() != 2 {
        return Err(Error::UnsupportedType("sl3 relations need the A2 preset".into()));
    }
    let s1 = p.sigma_a(1)?;
    let s2 = p.sigma_a(2)?;
    let one = Expression::one();
    let (plus, minus) = (QRat::one(), QRat::one().negated());
    let mut b = BracketBuilder::new();
    let k_2_1 = qratio_kernel(QRatio::new().qint(HalfInt::int(2), 1).qint(HalfInt::int(1), 1).qint(HalfInt::int(3), -1));
    match (i, j) {
        (1, 1) => {
            add_smooth(&mut b, &k_2_1, &s1, &s1);
            add_delta(&mut b, HalfInt::int(2), &plus, &s2, &one);
            add_delta(&mut b, HalfInt::int(-2), &minus, &one, &s2);
        }
        (1, 2) => {
            // sum_m (wq/z)^m [m]^2/[3m]
            let k = qratio_kernel(QRatio::new().qint(HalfInt::int(1), 2).qint(HalfInt::int(3), -1).q_power(HalfInt::int(1)));
            add_smooth(&mut b, &k, &s1, &s2);
            add_delta(&mut b, HalfInt::int(2), &plus, &one, &one);
            add_delta(&mut b, HalfInt::int(-4), &minus, &one, &one);
        }
        (2, 2) => {
            add_smooth(&mut b, &k_2_1, &s2, &s2);
            add_delta(&mut b, HalfInt::int(2), &plus, &one, &s1);
            add_delta(&mut b, HalfInt::int(-2), &minus, &s1, &one);
        }
        _ => return Err(Error::IndexError(format!("no displayed sl3 relation for ({i}, {j})"))),
    }
    Ok(b.finish())
}

/// The type-A bracket `{sigma_i(z), sigma_j(w)}` for `i <= j`, built from
/// the closed-form `C_ij` and the two delta sums.
pub fn reference_bracket_a(n: usize, i: usize, j: usize) -> Result<BracketResult> {
    if n < 2 {
        return Err(Error::IndexError(format!("N = {n}")));
    }
    let p = build_preset(CartanType::A, n - 1)?;
    reference_bracket_a_in(&p, i, j)
}

pub fn reference_bracket_a_in(p: &WPreset, i: usize, j: usize) -> Result<BracketResult> {
    let n = p.rank() + 1;
    if p.kind() != CartanType::A || !(1 <= i && i <= j && j < n) {
        return Err(Error::IndexError(format!("need 1 <= i <= j <= N-1, got i={i}, j={j}, N={n}")));
    }
    let c = c_matrix_closed_form_a(n);
    let k = c[i - 1][j - 1].scale(&q_minus_qinv()).mul_u_pow(2 * (j as i64 - i as i64));
    let mut b = BracketBuilder::new();
    add_smooth(&mut b, &k, &p.sigma_a(i)?, &p.sigma_a(j)?);
    let top = if i + j <= n { i } else { n - j };
    for q in 1..=top {
        add_delta(&mut b, HalfInt::int(2 * q as i32), &QRat::one(), &p.sigma_a(j + q)?, &p.sigma_a(i - q)?);
        let s = HalfInt::int(-2 * (j as i32 - i as i32 + q as i32));
        add_delta(&mut b, s, &QRat::one().negated(), &p.sigma_a(i - q)?, &p.sigma_a(j + q)?);
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{poisson_bracket, FactorSet};
    use crate::walg::{sigma_bracket, SigmaLabel};

    #[test]
    fn finalpb_shape() {
        let p = build_preset(CartanType::A, 1).unwrap();
        let r = finalpb_reference(&p).unwrap();
        let d = r.delta_terms();
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|(_, m)| *m == FactorSet::one()));
        assert_eq!(r.smooth.len(), 4);
        let s = sl2_sigma(&p).unwrap();
        assert_eq!(poisson_bracket(&s, &s, &p.basis).unwrap(), r);
    }

    #[test]
    fn sl3_second_relation_has_bare_deltas() {
        let p = build_preset(CartanType::A, 2).unwrap();
        // sigma_0 sigma_3 = 1
        assert!(p.sigma_a(0).unwrap().times(&p.sigma_a(3).unwrap()).is_one());
        let r = reference_bracket_a_in(&p, 1, 2).unwrap();
        assert_eq!(r, sl3_reference(&p, 1, 2).unwrap());
        assert_eq!(r, sigma_bracket(&p, SigmaLabel::Index(1), SigmaLabel::Index(2)).unwrap());
    }

    #[test]
    fn second_branch_is_used() {
        let p = build_preset(CartanType::A, 3).unwrap();
        let r = reference_bracket_a_in(&p, 2, 3).unwrap();
        assert_eq!(r, sigma_bracket(&p, SigmaLabel::Index(2), SigmaLabel::Index(3)).unwrap());
        assert!(reference_bracket_a_in(&p, 3, 2).is_err());
    }
}
