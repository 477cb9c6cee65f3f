//! Exact scalars: rationals, rational functions of `q^(1/2)`, truncated
//! power series in `h` and in `x`, q-integers and q-Pochhammer symbols.

mod hseries;
mod poly;
mod qrat;
mod ring;
mod xseries;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use hseries::{hseries_of, HSeries};
pub use poly::Poly;
pub use qrat::{fmt_q_power, QRat};
pub use ring::{fmt_rat, parse_rat, rat, rat_int, Field, Rat, Ring};
pub use xseries::{f_series, pochhammer, XSeries};

/// A number on the lattice `Z/2`, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub const fn from_twice(t: i32) -> Self {
        HalfInt(t)
    }

    pub const fn int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 - o.0)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// The q-integer `[n]_q = (q^n - q^-n)/(q - q^-1)`.
pub fn qint(n: i64) -> QRat {
    if n == 0 {
        return QRat::zero();
    }
    let (sign, n) = if n < 0 { (-1, -n) } else { (1, n) };
    let terms: Vec<(i64, Rat)> =
        (0..n).map(|k| (2 * (n - 1 - 2 * k), rat_int(sign))).collect();
    QRat::laurent(&terms)
}

/// `q - q^-1`
pub fn q_minus_qinv() -> QRat {
    QRat::q_pow(1).minus(&QRat::q_pow(-1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qint_examples() {
        assert!(qint(0).is_zero());
        assert_eq!(qint(2), QRat::q_pow(1).plus(&QRat::q_pow(-1)));
        assert_eq!(qint(-3), qint(3).negated());
        assert_eq!(qint(1), QRat::one());
    }

    #[test]
    fn qint_matches_definition() {
        for n in -6..=6 {
            let def = QRat::q_pow(n).minus(&QRat::q_pow(-n)).divided(&q_minus_qinv());
            assert_eq!(qint(n), def, "n = {n}");
        }
    }

    #[test]
    fn halfint_display() {
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInt::int(-2).to_string(), "-2");
    }
}
