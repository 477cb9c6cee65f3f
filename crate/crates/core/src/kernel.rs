//! Bilateral distributions `sum_m rho(q^{m/2}) x^m` encoded by a rational
//! function `rho(u)`.
//!
//! The constant kernel `1` is `delta(x)`, and `u^{2c}` is `delta(x q^c)`.
//! A bracket `{A(z), B(w)} = K(w/z) A(z) B(w)` stores `K` as a kernel.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{q_minus_qinv, Field, HalfInt, Poly, QRat, Ring};

/// Reduced `num(u) / den(u)` with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Kernel {
    num: Poly<QRat>,
    den: Poly<QRat>,
}

impl Eq for Poly<QRat> {}

impl std::hash::Hash for Poly<QRat> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for c in self.coeffs() {
            c.hash(state);
        }
    }
}

/// `coeff * delta(w / (z q^shift))`, whose kernel is `coeff * u^{-2 shift}`.
///
/// On its support `w = z q^shift`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaTerm {
    pub shift: HalfInt,
    pub coeff: QRat,
}

impl DeltaTerm {
    pub fn kernel(&self) -> Kernel {
        Kernel::u_pow(-(self.shift.twice() as i64)).scale(&self.coeff)
    }
}

impl Kernel {
    pub fn zero() -> Self {
        Kernel { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(QRat::one())
    }

    pub fn constant(c: QRat) -> Self {
        Kernel { num: Poly::constant(c), den: Poly::one() }
    }

    /// `u^k` for any integer k.
    pub fn u_pow(k: i64) -> Self {
        if k >= 0 {
            Kernel { num: Poly::monomial(QRat::one(), k as usize), den: Poly::one() }
        } else {
            Kernel { num: Poly::one(), den: Poly::monomial(QRat::one(), (-k) as usize) }
        }
    }

    /// `sum c_k u^k` from (exponent, coefficient) pairs.
    pub fn laurent(terms: &[(i64, QRat)]) -> Self {
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(0).min(0);
        let hi = terms.iter().map(|t| t.0).max().unwrap_or(0).max(0);
        let mut c = vec![QRat::zero(); (hi - lo + 1) as usize];
        for (e, v) in terms {
            let i = (e - lo) as usize;
            c[i] = c[i].plus(v);
        }
        Self::from_laurent(Poly::from_coeffs(c), (-lo) as usize)
    }

    fn from_laurent(num: Poly<QRat>, k: usize) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let v = num.valuation().unwrap().min(k);
        Kernel { num: num.shift_down(v), den: Poly::monomial(QRat::one(), k - v) }
    }

    /// Build and reduce `num / den`.
    pub fn from_parts(num: Poly<QRat>, den: Poly<QRat>) -> Self {
        assert!(!den.is_zero(), "zero kernel denominator");
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
            Kernel { num, den }
        } else {
            let inv = lead.inverse();
            Kernel { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &Poly<QRat> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<QRat> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn den_power(&self) -> Option<usize> {
        if self.den.is_unit_monomial() {
            self.den.degree()
        } else {
            None
        }
    }

    /// Terms `(exponent, coefficient)` if this is a Laurent polynomial in u.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, QRat)>> {
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

    pub fn plus(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.den_power(), other.den_power()) {
            let k = a.max(b);
            return Self::from_laurent(self.num.shift_up(k - a).plus(&other.num.shift_up(k - b)), k);
        }
        if self.den == other.den {
            return Self::from_parts(self.num.plus(&other.num), self.den.clone());
        }
        // Split off powers of u so the generic path only sees the rest.
        let (va, vb) = (self.den.valuation().unwrap(), other.den.valuation().unwrap());
        let (da, db) = (self.den.shift_down(va), other.den.shift_down(vb));
        let g = da.gcd(&db);
        let (ca, cb) = (db.exact_div(&g), da.exact_div(&g));
        let v = va.max(vb);
        let num = self.num.times(&ca).shift_up(v - va).plus(&other.num.times(&cb).shift_up(v - vb));
        let den = da.times(&ca).shift_up(v);
        Self::from_parts(num, den)
    }

    pub fn negated(&self) -> Self {
        Kernel { num: self.num.negated(), den: self.den.clone() }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    pub fn times(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let (Some(a), Some(b)) = (self.den_power(), other.den_power()) {
            return Self::from_laurent(self.num.times(&other.num), a + b);
        }
        Self::from_parts(self.num.times(&other.num), self.den.times(&other.den))
    }

    pub fn scale(&self, c: &QRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Kernel { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Multiply by `u^k`.
    pub fn mul_u_pow(&self, k: i64) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        if k > 0 {
            let k = k as usize;
            let v = self.den.valuation().unwrap().min(k);
            Kernel { num: self.num.shift_up(k - v), den: self.den.shift_down(v) }
        } else {
            let k = (-k) as usize;
            let v = self.num.valuation().unwrap().min(k);
            Kernel { num: self.num.shift_down(v), den: self.den.shift_up(k - v) }
        }
    }

    pub fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero kernel");
        Self::from_parts(self.den.clone(), self.num.clone())
    }

    /// The kernel `K(1/u)`.
    pub fn invert_var(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (dn, dd) = (self.num.degree().unwrap() as i64, self.den.degree().unwrap() as i64);
        let (nv, dv) = (self.num.valuation().unwrap(), self.den.valuation().unwrap());
        let num = self.num.shift_down(nv).reversed();
        let den = self.den.shift_down(dv).reversed();
        Self::from_parts(num, den).mul_u_pow(dd - dn)
    }

    /// Coefficient of `x^m`, i.e. the value at `u = B^m`.
    pub fn eval(&self, m: i64) -> Result<QRat> {
        let u = QRat::b_pow(m);
        let d = self.den.eval(&u);
        if d.is_zero() {
            return Err(Error::KernelPole(m));
        }
        Ok(self.num.eval(&u).divided(&d))
    }

    /// Split `K = sum deltas + remainder` with the remainder vanishing at
    /// `u -> infinity`.
    pub fn delta_extract(&self) -> (Vec<DeltaTerm>, Kernel) {
        if self.is_zero() {
            return (Vec::new(), Kernel::zero());
        }
        let v = self.den.valuation().unwrap();
        let d0 = self.den.shift_down(v);
        let (quot, rem) = self.num.divrem(&d0);
        let mut terms: Vec<(i64, QRat)> = quot
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 - v as i64, c.clone()))
            .collect();
        // Principal part at u = 0 of rem / (u^v d0).
        if v > 0 && !rem.is_zero() {
            let inv0 = d0.coeff(0).inverse();
            let mut s: Vec<QRat> = Vec::with_capacity(v);
            for k in 0..v {
                let mut acc = rem.coeff(k);
                for j in 1..=k {
                    let dj = d0.coeff(j);
                    if !dj.is_zero() {
                        acc = acc.minus(&dj.times(&s[k - j]));
                    }
                }
                s.push(acc.times(&inv0));
            }
            for (k, c) in s.into_iter().enumerate() {
                if !c.is_zero() {
                    terms.push((k as i64 - v as i64, c));
                }
            }
        }
        let laurent = Kernel::laurent(&terms);
        let remainder = self.minus(&laurent);
        let mut deltas: Vec<DeltaTerm> = laurent
            .laurent_terms()
            .unwrap_or_default()
            .into_iter()
            .map(|(k, c)| DeltaTerm { shift: HalfInt::from_twice(-(k as i32)), coeff: c })
            .collect();
        deltas.sort_by_key(|d| d.shift);
        (deltas, remainder)
    }

    /// Split `K = sum deltas + remainder` with the remainder bounded at both
    /// `u = 0` and `u = infinity` and `R(0) + R(infinity) = 0`.
    ///
    /// Kernels odd under `u -> 1/u`, such as `(u^4 - 1)/(u^4 + 1)`, are their
    /// own remainder.
    pub fn balanced_split(&self) -> (Vec<DeltaTerm>, Kernel) {
        let (mut deltas, rem) = self.delta_extract();
        if rem.is_zero() {
            return (deltas, rem);
        }
        let at0 = rem.num.coeff(0).divided(&rem.den.coeff(0));
        let half = at0.times(&QRat::from_rat(crate::scalar::rat(1, 2)));
        if half.is_zero() {
            return (deltas, rem);
        }
        let rem = rem.minus(&Kernel::constant(half.clone()));
        match deltas.iter_mut().find(|d| d.shift == HalfInt::ZERO) {
            Some(d) => d.coeff = d.coeff.plus(&half),
            None => deltas.push(DeltaTerm { shift: HalfInt::ZERO, coeff: half }),
        }
        deltas.retain(|d| !d.coeff.is_zero());
        deltas.sort_by_key(|d| d.shift);
        (deltas, rem)
    }

    /// The value at `u -> infinity`, if finite.
    pub fn value_at_infinity(&self) -> Option<QRat> {
        let (dn, dd) = (self.num.degree()?, self.den.degree().unwrap());
        match dn.cmp(&dd) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Less => Some(QRat::zero()),
            std::cmp::Ordering::Equal => Some(self.num.lead().unwrap().clone()),
        }
    }
}

/// Structural equality of reduced forms.
pub fn kernel_equal(a: &Kernel, b: &Kernel) -> bool {
    a == b
}

/// A product of q-integers `[k m]_q^p`, powers `q^{c m}` and a constant,
/// viewed as a function of the mode `m`.
#[derive(Clone, Debug)]
pub struct QRatio {
    constant: QRat,
    q_power: HalfInt,
    qints: Vec<(HalfInt, i32)>,
}

impl Default for QRatio {
    fn default() -> Self {
        QRatio { constant: QRat::one(), q_power: HalfInt::ZERO, qints: Vec::new() }
    }
}

impl QRatio {
    pub fn new() -> Self {
        Self::default()
    }

    /// Multiply by `[k m]_q^power`.
    pub fn qint(mut self, k: HalfInt, power: i32) -> Self {
        self.qints.push((k, power));
        self
    }

    /// Multiply by `q^{c m}`.
    pub fn q_power(mut self, c: HalfInt) -> Self {
        self.q_power = self.q_power + c;
        self
    }

    pub fn constant(mut self, c: QRat) -> Self {
        self.constant = self.constant.times(&c);
        self
    }

    /// Direct evaluation at a given mode, for cross-checks.
    pub fn eval(&self, m: i64) -> QRat {
        let mut v = self.constant.times(&QRat::b_pow(self.q_power.twice() as i64 * m));
        for &(k, p) in &self.qints {
            let e = k.twice() as i64 * m;
            let qi = QRat::b_pow(e).minus(&QRat::b_pow(-e)).divided(&q_minus_qinv());
            for _ in 0..p.unsigned_abs() {
                v = if p > 0 { v.times(&qi) } else { v.divided(&qi) };
            }
        }
        v
    }
}

/// `[k m]_q` as a kernel: `(u^{2k} - u^{-2k}) / (q - q^-1)`.
pub fn qint_kernel(k: HalfInt) -> Kernel {
    let e = k.twice() as i64;
    Kernel::laurent(&[(e, QRat::one()), (-e, QRat::from_int(-1))]).scale(&q_minus_qinv().inverse())
}

pub fn kernel_from_qratio(r: &QRatio) -> Kernel {
    let mut num = Kernel::constant(r.constant.clone()).mul_u_pow(r.q_power.twice() as i64);
    let mut den = Kernel::one();
    for &(k, p) in &r.qints {
        let f = qint_kernel(k);
        for _ in 0..p.unsigned_abs() {
            if p > 0 {
                num = num.times(&f);
            } else {
                den = den.times(&f);
            }
        }
    }
    if den.is_zero() {
        panic!("q-ratio divides by [0]");
    }
    num.times(&den.inverse())
}

fn fmt_u_poly(p: &Poly<QRat>) -> String {
    let mut parts = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "u".into(),
            i => format!("u^{i}"),
        };
        let cs = c.to_string();
        let simple = !cs.contains(' ') && !cs.contains('/');
        let part = if mono.is_empty() {
            if simple { cs } else { format!("({cs})") }
        } else if c.is_one() {
            mono
        } else if cs == "-1" {
            format!("-{mono}")
        } else if simple {
            format!("{cs}*{mono}")
        } else {
            format!("({cs})*{mono}")
        };
        parts.push(part);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(terms) = self.laurent_terms() {
            if terms.len() == 1 {
                let (e, c) = &terms[0];
                let u = match e {
                    0 => String::new(),
                    1 => "u".into(),
                    e => format!("u^{e}"),
                };
                return match (u.is_empty(), c.is_one()) {
                    (true, _) => write!(f, "{c}"),
                    (false, true) => f.write_str(&u),
                    (false, false) => write!(f, "({c})*{u}"),
                };
            }
        }
        let n = fmt_u_poly(&self.num);
        if self.den.is_one() {
            return f.write_str(&n);
        }
        write!(f, "({n})/({})", fmt_u_poly(&self.den))
    }
}

impl fmt::Display for DeltaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arg = match self.shift.twice() {
            0 => "w/z".to_string(),
            2 => "w/(zq)".to_string(),
            -2 => "wq/z".to_string(),
            t if t > 0 => format!("w/(zq^{})", self.shift),
            _ => format!("wq^{}/z", -self.shift),
        };
        write!(f, "({})*delta({arg})", self.coeff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qint;

    fn m2_over_2m() -> QRatio {
        QRatio::new().qint(HalfInt::int(1), 2).qint(HalfInt::int(2), -1)
    }

    #[test]
    fn eval_monomial() {
        assert_eq!(Kernel::u_pow(4).eval(3).unwrap(), QRat::q_pow(6));
        assert!(Kernel::one().eval(-7).unwrap().is_one());
    }

    #[test]
    fn removable_point_at_zero_mode() {
        let k = kernel_from_qratio(&m2_over_2m());
        assert!(k.eval(0).unwrap().is_zero());
    }

    #[test]
    fn qratio_matches_direct_evaluation() {
        let r = m2_over_2m();
        let k = kernel_from_qratio(&r);
        for m in 1..=5 {
            assert_eq!(k.eval(m).unwrap(), r.eval(m));
        }
        let k = kernel_from_qratio(&r.clone().constant(q_minus_qinv()));
        assert_eq!(k.eval(1).unwrap(), q_minus_qinv().divided(&qint(2)));
        assert_eq!(kernel_from_qratio(&QRatio::new().q_power(HalfInt::int(2))), Kernel::u_pow(4));
    }

    #[test]
    fn y_kernel_sl2_reduces() {
        let k = kernel_from_qratio(&m2_over_2m().constant(q_minus_qinv()));
        let expect = Kernel::from_parts(
            Poly::from_coeffs(vec![QRat::from_int(-1), QRat::zero(), QRat::zero(), QRat::zero(), QRat::one()]),
            Poly::from_coeffs(vec![QRat::one(), QRat::zero(), QRat::zero(), QRat::zero(), QRat::one()]),
        );
        assert_eq!(k, expect);
    }

    #[test]
    fn delta_extract_pure_laurent() {
        let k = Kernel::u_pow(-4).scale(&QRat::from_int(2));
        let (d, r) = k.delta_extract();
        assert_eq!(d, vec![DeltaTerm { shift: HalfInt::int(2), coeff: QRat::from_int(2) }]);
        assert!(r.is_zero());
        let (d, r) = Kernel::zero().delta_extract();
        assert!(d.is_empty() && r.is_zero());
    }

    #[test]
    fn delta_extract_roundtrip() {
        let rho = kernel_from_qratio(&m2_over_2m().constant(q_minus_qinv()));
        let k = rho.mul_u_pow(-6).plus(&Kernel::u_pow(3));
        let (d, r) = k.delta_extract();
        let mut sum = r.clone();
        for t in &d {
            sum = sum.plus(&t.kernel());
        }
        assert_eq!(sum, k);
        assert_eq!(r.value_at_infinity(), Some(QRat::zero()));
        let (d2, r2) = r.delta_extract();
        assert!(d2.is_empty());
        assert_eq!(r2, r);
    }

    #[test]
    fn equality_after_reduction() {
        let a = Kernel::from_parts(
            Poly::from_coeffs(vec![QRat::from_int(-1), QRat::zero(), QRat::zero(), QRat::zero(), QRat::one()]),
            Poly::from_coeffs(vec![QRat::from_int(-1), QRat::zero(), QRat::one()]),
        );
        assert_eq!(a, Kernel::laurent(&[(2, QRat::one()), (0, QRat::one())]));
        assert!(!kernel_equal(&Kernel::u_pow(2), &Kernel::u_pow(-2)));
    }

    #[test]
    fn invert_var_involution() {
        let rho = kernel_from_qratio(&m2_over_2m()).mul_u_pow(3);
        assert_eq!(rho.invert_var().invert_var(), rho);
        assert_eq!(Kernel::u_pow(5).invert_var(), Kernel::u_pow(-5));
    }
}
