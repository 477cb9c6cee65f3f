//! Rational functions in the base variable `B`, where `B^2 = q`.

use std::fmt;

use super::poly::Poly;
use super::ring::{fmt_rat, is_negative, rat_int, Field, Rat, Ring};

/// Reduced fraction `num / den` of polynomials in `B` with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QRat {
    num: Poly<Rat>,
    den: Poly<Rat>,
}

impl Eq for Poly<Rat> {}

impl std::hash::Hash for Poly<Rat> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for c in self.coeffs() {
            c.hash(state);
        }
    }
}

impl QRat {
    /// Build and reduce `num / den`.
    pub fn new(num: Poly<Rat>, den: Poly<Rat>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_unit_monomial() {
            return Self::from_laurent(num, den.degree().unwrap());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        let lead = den.lead().unwrap().clone();
        if lead.is_one() {
            QRat { num, den }
        } else {
            let inv = lead.inverse();
            QRat { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    /// `num / B^k`, reduced by stripping common powers of `B`.
    fn from_laurent(num: Poly<Rat>, k: usize) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let v = num.valuation().unwrap().min(k);
        QRat { num: num.shift_down(v), den: Poly::monomial(Rat::one(), k - v) }
    }

    pub fn from_rat(r: Rat) -> Self {
        QRat { num: Poly::constant(r), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    /// `B^k` for any integer k.
    pub fn b_pow(k: i64) -> Self {
        if k >= 0 {
            QRat { num: Poly::monomial(Rat::one(), k as usize), den: Poly::one() }
        } else {
            QRat { num: Poly::one(), den: Poly::monomial(Rat::one(), (-k) as usize) }
        }
    }

    /// `q^k = B^(2k)`.
    pub fn q_pow(k: i64) -> Self {
        Self::b_pow(2 * k)
    }

    /// Laurent polynomial `sum c_k B^k` from (exponent, coefficient) pairs.
    pub fn laurent(terms: &[(i64, Rat)]) -> Self {
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(0).min(0);
        let hi = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut c = vec![Rat::zero(); (hi - lo + 1) as usize];
        for (e, r) in terms {
            let i = (e - lo) as usize;
            c[i] = &c[i] + r;
        }
        Self::from_laurent(Poly::from_coeffs(c), (-lo) as usize)
    }

    pub fn numer(&self) -> &Poly<Rat> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<Rat> {
        &self.den
    }

    /// Lowest power of B that may appear when written as a Laurent polynomial.
    fn den_power(&self) -> Option<usize> {
        if self.den.is_unit_monomial() {
            self.den.degree()
        } else {
            None
        }
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_unit_monomial()
    }

    /// Laurent terms `(exponent, coefficient)` if the denominator is a power of B.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, Rat)>> {
        let k = self.den_power()? as i64;
        Some(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64 - k, c.clone()))
                .collect(),
        )
    }

    /// The constant rational if this is one.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.den.is_one() && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Substitute `B -> B^k` (k may be negative).
    pub fn subs_b_pow(&self, k: i64) -> Self {
        let sub = |p: &Poly<Rat>| -> QRat {
            let mut acc = QRat::zero();
            for (i, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.plus(&QRat::b_pow(k * i as i64).times(&QRat::from_rat(c.clone())));
                }
            }
            acc
        };
        sub(&self.num).divided(&sub(&self.den))
    }

    /// Value at `B = 1`, or None if the denominator vanishes there.
    pub fn at_one(&self) -> Option<Rat> {
        let one = Rat::one();
        let d = self.den.eval(&one);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(&one) / d)
        }
    }
}

impl Ring for QRat {
    fn zero() -> Self {
        QRat { num: Poly::zero(), den: Poly::one() }
    }
    fn one() -> Self {
        QRat { num: Poly::one(), den: Poly::one() }
    }
    fn from_i64(n: i64) -> Self {
        Self::from_int(n)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn plus(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.den_power(), other.den_power()) {
            let k = a.max(b);
            let n = self.num.shift_up(k - a).plus(&other.num.shift_up(k - b));
            return Self::from_laurent(n, k);
        }
        if self.den == other.den {
            return Self::new(self.num.plus(&other.num), self.den.clone());
        }
        Self::new(
            self.num.times(&other.den).plus(&other.num.times(&self.den)),
            self.den.times(&other.den),
        )
    }

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    fn times(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let (Some(a), Some(b)) = (self.den_power(), other.den_power()) {
            return Self::from_laurent(self.num.times(&other.num), a + b);
        }
        if let Some(r) = other.as_rat() {
            return QRat { num: self.num.scale(&r), den: self.den.clone() };
        }
        if let Some(r) = self.as_rat() {
            return QRat { num: other.num.scale(&r), den: other.den.clone() };
        }
        // Cross-cancel before multiplying to keep degrees small.
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let (n1, d2) = (self.num.exact_div(&g1), other.den.exact_div(&g1));
        let (n2, d1) = (other.num.exact_div(&g2), self.den.exact_div(&g2));
        let num = n1.times(&n2);
        let den = d1.times(&d2);
        let lead = den.lead().unwrap().clone();
        if lead.is_one() {
            QRat { num, den }
        } else {
            let inv = lead.inverse();
            QRat { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    fn negated(&self) -> Self {
        QRat { num: self.num.negated(), den: self.den.clone() }
    }
}

impl Field for QRat {
    fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(self.den.clone(), self.num.clone())
    }
}

/// Write a polynomial in `B` as a Laurent expression in `q`, offset by `B^shift`.
fn fmt_b_poly(p: &Poly<Rat>, shift: i64) -> String {
    let mut out = String::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let e = i as i64 + shift;
        let neg = is_negative(c);
        let abs = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = fmt_q_power(e);
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
    out
}

/// `B^e` written as a power of q; empty for e = 0.
pub fn fmt_q_power(e: i64) -> String {
    match e {
        0 => String::new(),
        2 => "q".to_string(),
        e if e % 2 == 0 => format!("q^{}", e / 2),
        e => format!("q^({}/2)", e),
    }
}

fn term_count(p: &Poly<Rat>) -> usize {
    p.coeffs().iter().filter(|c| !c.is_zero()).count()
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.den_power() {
            return f.write_str(&fmt_b_poly(&self.num, -(k as i64)));
        }
        let n = fmt_b_poly(&self.num, 0);
        let d = fmt_b_poly(&self.den, 0);
        let n = if term_count(&self.num) > 1 { format!("({n})") } else { n };
        write!(f, "{n}/({d})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qint;

    #[test]
    fn laurent_fast_path_reduces() {
        let a = QRat::b_pow(-3).times(&QRat::b_pow(5));
        assert_eq!(a, QRat::b_pow(2));
        assert_eq!(QRat::q_pow(1).plus(&QRat::q_pow(-1)).to_string(), "q + q^-1");
    }

    #[test]
    fn field_inverse() {
        let x = qint(3).plus(&QRat::from_int(2));
        assert!(x.times(&x.inverse()).is_one());
        let y = x.divided(&qint(2));
        assert_eq!(y.times(&qint(2)), x);
    }

    #[test]
    fn general_fraction_reduces() {
        // (q^2 - q^-2)/(q - q^-1) = q + q^-1
        let n = QRat::q_pow(2).minus(&QRat::q_pow(-2));
        let d = QRat::q_pow(1).minus(&QRat::q_pow(-1));
        assert_eq!(n.divided(&d), qint(2));
        assert!(n.divided(&d).is_laurent());
    }

    #[test]
    fn half_powers_display() {
        assert_eq!(QRat::b_pow(3).to_string(), "q^(3/2)");
        assert_eq!(QRat::b_pow(-1).to_string(), "q^(-1/2)");
    }
}
