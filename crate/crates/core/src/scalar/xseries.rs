//! Truncated power series in `x` with coefficients in Q(q^(1/2)).

use std::fmt;

use super::qrat::QRat;
use super::ring::{Field, Ring};
use super::HalfInt;
use crate::error::{Error, Result};

/// `sum_{k <= order} c_k x^k`; higher coefficients are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct XSeries {
    coeffs: Vec<QRat>,
    order: usize,
}

impl XSeries {
    pub fn new(mut coeffs: Vec<QRat>, order: usize) -> Self {
        coeffs.resize(order + 1, QRat::zero());
        XSeries { coeffs, order }
    }

    pub fn constant(c: QRat, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(QRat::one(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    /// `a + b x`
    pub fn linear(a: QRat, b: QRat, order: usize) -> Self {
        Self::new(vec![a, b], order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: usize) -> &QRat {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[QRat] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order)].to_vec(), order.min(self.order))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn plus(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        Self::new((0..=order).map(|k| self.coeffs[k].plus(&o.coeffs[k])).collect(), order)
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }

    pub fn negated(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.negated()).collect(), self.order)
    }

    pub fn scale(&self, c: &QRat) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.times(c)).collect(), self.order)
    }

    pub fn times(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut c = vec![QRat::zero(); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if !o.coeffs[j].is_zero() {
                    c[i + j] = c[i + j].plus(&self.coeffs[i].times(&o.coeffs[j]));
                }
            }
        }
        Self::new(c, order)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::NonInvertibleConstantTerm);
        }
        let inv0 = self.coeffs[0].inverse();
        let mut out = vec![inv0.clone()];
        for k in 1..=self.order {
            let mut s = QRat::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s = s.plus(&self.coeffs[j].times(&out[k - j]));
                }
            }
            out.push(s.negated().times(&inv0));
        }
        Ok(Self::new(out, self.order))
    }

    /// Substitute `x -> x * q^c`.
    pub fn rescale_x(&self, c: HalfInt) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a.times(&QRat::b_pow(c.twice() as i64 * k as i64)))
            .collect();
        Self::new(coeffs, self.order)
    }
}

impl fmt::Display for XSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = match k {
                0 => String::new(),
                1 => "*x".into(),
                k => format!("*x^{k}"),
            };
            parts.push(format!("({c}){x}"));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(x^{})", parts.join(" + "), self.order + 1)
    }
}

/// The infinite product `prod_{n >= 0} (1 - x q^{a + n b})` to x-order `order`.
///
/// Each x-coefficient is summed in closed form:
/// `[x^k] = (-1)^k q^{k a + b k(k-1)/2} / prod_{i=1..k} (1 - q^{b i})`.
pub fn pochhammer(a: HalfInt, b: HalfInt, order: usize) -> Result<XSeries> {
    if b.twice() <= 0 {
        return Err(Error::InvalidBase(b.to_string()));
    }
    let (a2, b2) = (a.twice() as i64, b.twice() as i64);
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut den = QRat::one();
    for k in 0..=order as i64 {
        if k > 0 {
            den = den.times(&QRat::one().minus(&QRat::b_pow(b2 * k)));
        }
        let sign = if k % 2 == 0 { QRat::one() } else { QRat::from_int(-1) };
        let num = sign.times(&QRat::b_pow(k * a2 + b2 * k * (k - 1) / 2));
        coeffs.push(num.divided(&den));
    }
    Ok(XSeries::new(coeffs, order))
}

/// Numerators `N_k` with `[x^k] = N_k / (t;t)_k`, `t = B^b2`, for
/// `(x B^a2; t)_inf` or, with `inverse`, its reciprocal `sum (x B^a2)^k / (t;t)_k`.
fn euler_numerators(a2: i64, b2: i64, order: usize, inverse: bool) -> Vec<QRat> {
    (0..=order as i64)
        .map(|k| {
            if inverse {
                QRat::b_pow(k * a2)
            } else {
                let sign = if k % 2 == 0 { QRat::one() } else { QRat::from_int(-1) };
                sign.times(&QRat::b_pow(k * a2 + b2 * k * (k - 1) / 2))
            }
        })
        .collect()
}

/// Product of two series in the same `(t;t)_k`-normalized form: the
/// denominators combine through Gaussian binomials in `t`.
fn euler_product(x: &[QRat], y: &[QRat], binom: &[Vec<QRat>]) -> Vec<QRat> {
    (0..x.len())
        .map(|k| {
            let mut acc = QRat::zero();
            for i in 0..=k {
                acc = acc.plus(&x[i].times(&y[k - i]).times(&binom[k][i]));
            }
            acc
        })
        .collect()
}

/// `f(x) = (x;q^4)(xq^4;q^4) / (xq^2;q^4)^2`
pub fn f_series(order: usize) -> XSeries {
    let b2 = 8;
    let mut binom: Vec<Vec<QRat>> = vec![vec![QRat::one()]];
    for k in 1..=order {
        let prev = &binom[k - 1];
        let row = (0..=k)
            .map(|i| {
                let left = if i > 0 { prev[i - 1].clone() } else { QRat::zero() };
                let right = if i < k { QRat::b_pow(b2 * i as i64).times(&prev[i]) } else { QRat::zero() };
                left.plus(&right)
            })
            .collect();
        binom.push(row);
    }
    let num = euler_product(&euler_numerators(0, b2, order, false), &euler_numerators(8, b2, order, false), &binom);
    let inv = euler_numerators(4, b2, order, true);
    let num = euler_product(&euler_product(&num, &inv, &binom), &inv, &binom);
    let mut den = QRat::one();
    let coeffs = num
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if k > 0 {
                den = den.times(&QRat::one().minus(&QRat::b_pow(b2 * k as i64)));
            }
            c.divided(&den)
        })
        .collect();
    XSeries::new(coeffs, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_minus_q(k: i64) -> QRat {
        QRat::one().minus(&QRat::q_pow(k))
    }

    #[test]
    fn pochhammer_first_coefficients() {
        let p = pochhammer(HalfInt::ZERO, HalfInt::int(4), 1).unwrap();
        assert!(p.coeff(0).is_one());
        assert_eq!(*p.coeff(1), QRat::from_int(-1).divided(&one_minus_q(4)));
        let p = pochhammer(HalfInt::int(4), HalfInt::int(4), 1).unwrap();
        assert_eq!(*p.coeff(1), QRat::q_pow(4).negated().divided(&one_minus_q(4)));
        assert_eq!(pochhammer(HalfInt::ZERO, HalfInt::int(4), 0).unwrap(), XSeries::one(0));
    }

    #[test]
    fn pochhammer_rejects_bad_base() {
        assert!(matches!(
            pochhammer(HalfInt::ZERO, HalfInt::ZERO, 2),
            Err(Error::InvalidBase(_))
        ));
    }

    #[test]
    fn f_low_coefficients() {
        let f = f_series(3);
        assert!(f.coeff(0).is_one());
        assert_eq!(*f.coeff(1), one_minus_q(2).negated().divided(&QRat::one().plus(&QRat::q_pow(2))));
    }

    #[test]
    fn f_matches_product_of_pochhammers() {
        let p = |a: i32| pochhammer(HalfInt::int(a), HalfInt::int(4), 5).unwrap();
        let direct = p(0).times(&p(4)).times(&p(2).times(&p(2)).inverse().unwrap());
        assert_eq!(f_series(5), direct);
    }

    #[test]
    fn inverse_roundtrip() {
        let s = XSeries::linear(QRat::one(), QRat::q_pow(1), 6);
        assert_eq!(s.times(&s.inverse().unwrap()), XSeries::one(6));
    }
}
