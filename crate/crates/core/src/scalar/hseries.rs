//! Truncated power series in `h`, with `q = e^h`.

use std::fmt;

use super::poly::Poly;
use super::qrat::QRat;
use super::ring::{fmt_rat, is_negative, rat_int, Field, Rat, Ring};
use crate::error::{Error, Result};

const EXACT: usize = usize::MAX;

/// `sum_{k < order} c_k h^k`; coefficients at or beyond `order` are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct HSeries {
    coeffs: Vec<Rat>,
    order: usize,
}

impl HSeries {
    pub fn new(mut coeffs: Vec<Rat>, order: usize) -> Self {
        coeffs.truncate(order);
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        HSeries { coeffs, order }
    }

    /// An exact constant (known to every order).
    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c], EXACT)
    }

    /// The series `h` to the given order.
    pub fn h(order: usize) -> Self {
        Self::new(vec![Rat::zero(), Rat::one()], order)
    }

    /// `e^{c h}` to the given order.
    pub fn exp(c: &Rat, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order);
        let mut term = Rat::one();
        for k in 0..order {
            coeffs.push(term.clone());
            term = term * c / rat_int(k as i64 + 1);
        }
        Self::new(coeffs, order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order == EXACT
    }

    /// Coefficient of `h^k`, or None at or beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Option<Rat> {
        if k >= self.order {
            None
        } else {
            Some(self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero))
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order.min(self.order))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect(), self.order)
    }

    /// Divide by `h^k`; the caller asserts the low coefficients vanish.
    /// The order drops by k.
    pub fn div_h_pow(&self, k: usize) -> Result<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return Err(Error::PoleAtH0);
        }
        let order = if self.is_exact() { EXACT } else { self.order.saturating_sub(k) };
        Ok(Self::new(self.coeffs.iter().skip(k).cloned().collect(), order))
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(0).unwrap_or_else(Rat::zero);
        if c0.is_zero() {
            return Err(Error::PoleAtH0);
        }
        if self.coeffs.len() <= 1 {
            return Ok(Self::new(vec![c0.inverse()], self.order));
        }
        let order = self.order;
        let inv0 = c0.inverse();
        let mut out = vec![inv0.clone()];
        for k in 1..order {
            let mut s = Rat::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                s += &self.coeffs[j] * &out[k - j];
            }
            out.push(-s * &inv0);
        }
        Ok(Self::new(out, order))
    }
}

impl Ring for HSeries {
    fn zero() -> Self {
        Self::new(Vec::new(), EXACT)
    }
    fn one() -> Self {
        Self::constant(Rat::one())
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(rat_int(n))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(c, self.order.min(other.order))
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
    fn times(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(Vec::new(), order);
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(order);
        let mut c = vec![Rat::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                c[i + j] += a * b;
            }
        }
        Self::new(c, order)
    }
    fn negated(&self) -> Self {
        Self::new(self.coeffs.iter().map(|a| -a).collect(), self.order)
    }
}

/// Expand `p(e^{h/2})` where p is a polynomial in B.
fn expand_b_poly(p: &Poly<Rat>, order: usize) -> HSeries {
    let mut coeffs = vec![Rat::zero(); order];
    let mut fact = Rat::one();
    for (j, slot) in coeffs.iter_mut().enumerate() {
        if j > 0 {
            fact *= rat_int(j as i64);
        }
        let mut s = Rat::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() || (k == 0 && j > 0) {
                continue;
            }
            let half = Rat::new((k as i64).into(), 2.into());
            s += c * Ring::pow(&half, j as u32);
        }
        *slot = s / &fact;
    }
    HSeries::new(coeffs, order)
}

/// Expansion of a rational function of `q^(1/2)` at `q = e^h`.
pub fn hseries_of(v: &QRat, order: usize) -> Result<HSeries> {
    let num = expand_b_poly(v.numer(), order);
    let den = expand_b_poly(v.denom(), order);
    if den.coeff(0).is_none_or(|c| c.is_zero()) {
        if order == 0 && v.at_one().is_some() {
            return Ok(HSeries::new(Vec::new(), 0));
        }
        return Err(Error::PoleAtH0);
    }
    Ok(num.times(&den.inverse()?))
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => "h".into(),
                k => format!("h^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&fmt_rat(&abs));
            } else if abs == Rat::one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", fmt_rat(&abs), mono));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        if !self.is_exact() {
            out.push_str(&format!(" + O(h^{})", self.order));
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_minus_qinv, qint, rat};

    #[test]
    fn q_minus_qinv_expansion() {
        let s = hseries_of(&q_minus_qinv(), 4).unwrap();
        assert_eq!(s, HSeries::new(vec![rat(0, 1), rat(2, 1), rat(0, 1), rat(1, 3)], 4));
    }

    #[test]
    fn qint_two_expansion() {
        // e^h + e^-h = 2 + h^2 + h^4/12 + ...
        let s = hseries_of(&qint(2), 3).unwrap();
        assert_eq!(s, HSeries::new(vec![rat(2, 1), rat(0, 1), rat(1, 1)], 3));
    }

    #[test]
    fn constant_expansion() {
        let s = hseries_of(&QRat::one(), 5).unwrap();
        assert_eq!(s.coeff(0), Some(Rat::one()));
        assert_eq!(s.coeff(4), Some(Rat::zero()));
        assert_eq!(s.coeff(5), None);
    }

    #[test]
    fn pole_detected() {
        assert_eq!(hseries_of(&q_minus_qinv().inverse(), 4), Err(Error::PoleAtH0));
    }

    #[test]
    fn removable_singularity() {
        // (q^2 - q^-2)/(q - q^-1) reduces to q + q^-1
        let v = QRat::q_pow(2).minus(&QRat::q_pow(-2)).divided(&q_minus_qinv());
        assert_eq!(hseries_of(&v, 3).unwrap().coeff(0), Some(rat(2, 1)));
    }

    #[test]
    fn exp_matches_substitution() {
        let e = HSeries::exp(&rat(3, 2), 6);
        assert_eq!(e, hseries_of(&QRat::b_pow(3), 6).unwrap());
    }
}
