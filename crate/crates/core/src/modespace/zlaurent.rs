//! Laurent polynomials in `B` with `i128` coefficients, for the inner loops
//! of the oracle. Every operation is overflow-checked.

use num::{BigInt, Integer, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::{Poly, QRat, Rat};

fn overflow() -> Error {
    Error::WindowExceeded("integer coefficient overflow".into())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct ZLaurent {
    lo: i64,
    c: Vec<i128>,
}

impl ZLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(v: i128) -> Self {
        Self::monomial(0, v)
    }

    pub fn monomial(e: i64, v: i128) -> Self {
        if v == 0 {
            return Self::zero();
        }
        ZLaurent { lo: e, c: vec![v] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn trim(mut self) -> Self {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|x| **x == 0).count();
        if lead == self.c.len() {
            return Self::zero();
        }
        if lead > 0 {
            self.c.drain(..lead);
            self.lo += lead as i64;
        }
        self
    }

    pub fn from_terms(terms: &[(i64, i128)]) -> Result<Self> {
        let mut out = Self::zero();
        for &(e, v) in terms {
            out.add_assign(&Self::monomial(e, v))?;
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, o: &Self) -> Result<()> {
        if o.is_zero() {
            return Ok(());
        }
        if self.is_zero() {
            *self = o.clone();
            return Ok(());
        }
        let lo = self.lo.min(o.lo);
        let hi = (self.lo + self.c.len() as i64).max(o.lo + o.c.len() as i64);
        if lo < self.lo {
            let pad = (self.lo - lo) as usize;
            self.c.splice(0..0, std::iter::repeat_n(0, pad));
            self.lo = lo;
        }
        self.c.resize((hi - lo) as usize, 0);
        let off = (o.lo - self.lo) as usize;
        for (i, v) in o.c.iter().enumerate() {
            self.c[off + i] = self.c[off + i].checked_add(*v).ok_or_else(overflow)?;
        }
        *self = std::mem::take(self).trim();
        Ok(())
    }

    pub fn times(&self, o: &Self) -> Result<Self> {
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero());
        }
        let mut c = vec![0i128; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if *b == 0 {
                    continue;
                }
                let p = a.checked_mul(*b).ok_or_else(overflow)?;
                c[i + j] = c[i + j].checked_add(p).ok_or_else(overflow)?;
            }
        }
        Ok(ZLaurent { lo: self.lo + o.lo, c }.trim())
    }

    pub fn scale(&self, k: i128) -> Result<Self> {
        let c = self.c.iter().map(|v| v.checked_mul(k).ok_or_else(overflow)).collect::<Result<Vec<_>>>()?;
        Ok(ZLaurent { lo: self.lo, c }.trim())
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::constant(1);
        for _ in 0..e {
            acc = acc.times(self)?;
        }
        Ok(acc)
    }

    /// Divide every coefficient by `k`, which must divide them all.
    pub fn div_exact(&self, k: i128) -> Self {
        debug_assert!(self.c.iter().all(|v| v % k == 0));
        ZLaurent { lo: self.lo, c: self.c.iter().map(|v| v / k).collect() }
    }

    /// `(p, d)` with `poly = p / d`.
    pub fn from_poly(poly: &Poly<Rat>) -> Option<(Self, i128)> {
        let terms: Vec<(i64, Rat)> = poly.coeffs().iter().enumerate().map(|(i, c)| (i as i64, c.clone())).collect();
        Self::from_rat_terms(&terms)
    }

    /// `(p, d)` with `q = p / d`, if `q` is a Laurent polynomial whose
    /// coefficients fit.
    pub fn from_qrat(q: &QRat) -> Option<(Self, i128)> {
        Self::from_rat_terms(&q.laurent_terms()?)
    }

    fn from_rat_terms(terms: &[(i64, Rat)]) -> Option<(Self, i128)> {
        let mut den = BigInt::from(1);
        for (_, r) in terms {
            den = den.lcm(r.denom());
        }
        let d = den.to_i128()?;
        let mut out = Self::zero();
        for (e, r) in terms {
            let v = (r.numer() * (&den / r.denom())).to_i128()?;
            out.add_assign(&Self::monomial(*e, v)).ok()?;
        }
        Some((out, d))
    }

    /// `self / d` as an exact rational function.
    pub fn to_qrat(&self, d: i128) -> QRat {
        let terms: Vec<(i64, Rat)> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(i, v)| (self.lo + i as i64, Rat::new(BigInt::from(*v), BigInt::from(d))))
            .collect();
        QRat::laurent(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Ring};

    #[test]
    fn round_trip_and_products() {
        let q = QRat::laurent(&[(-2, rat(1, 2)), (3, rat(-5, 3))]);
        let (z, d) = ZLaurent::from_qrat(&q).unwrap();
        assert_eq!(d, 6);
        assert_eq!(z.to_qrat(d), q);
        let sq = z.times(&z).unwrap();
        assert_eq!(sq.to_qrat(d * d), q.times(&q));
        let mut s = z.clone();
        s.add_assign(&z.scale(-1).unwrap()).unwrap();
        assert!(s.is_zero());
        assert!(ZLaurent::constant(i128::MAX).times(&ZLaurent::constant(2)).is_err());
    }
}
