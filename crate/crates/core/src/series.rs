//! Products of shifted exponential series and their Poisson brackets.
//!
//! A factor `F_i(z q^c)^e` stands for `exp(-e sum_m g_i[m] (z q^c)^{-m})`;
//! the constant prefactor of each family lives in the monomial scalar.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genalg::GeneratorBasis;
use crate::kernel::{DeltaTerm, Kernel};
use crate::scalar::{HalfInt, QRat, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ShiftedFactor {
    pub family: usize,
    pub shift: HalfInt,
    pub exponent: i32,
}

/// A canonical product of shifted factors: sorted by (family, shift), one
/// entry per (family, shift), no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FactorSet(Vec<ShiftedFactor>);

impl FactorSet {
    pub fn one() -> Self {
        FactorSet(Vec::new())
    }

    pub fn new(mut factors: Vec<ShiftedFactor>) -> Self {
        factors.sort_by_key(|f| (f.family, f.shift));
        let mut out: Vec<ShiftedFactor> = Vec::with_capacity(factors.len());
        for f in factors {
            match out.last_mut() {
                Some(last) if last.family == f.family && last.shift == f.shift => last.exponent += f.exponent,
                _ => out.push(f),
            }
        }
        out.retain(|f| f.exponent != 0);
        FactorSet(out)
    }

    pub fn single(family: usize, shift: HalfInt, exponent: i32) -> Self {
        Self::new(vec![ShiftedFactor { family, shift, exponent }])
    }

    pub fn factors(&self) -> &[ShiftedFactor] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn times(&self, other: &Self) -> Self {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self::new(v)
    }

    pub fn inverse(&self) -> Self {
        FactorSet(self.0.iter().map(|f| ShiftedFactor { exponent: -f.exponent, ..*f }).collect())
    }

    /// Replace the argument `z` by `z q^c`.
    pub fn shifted(&self, c: HalfInt) -> Self {
        FactorSet(self.0.iter().map(|f| ShiftedFactor { shift: f.shift + c, ..*f }).collect())
    }

    /// Total exponent-weighted prefactor power of B.
    pub fn prefactor_b(&self, basis: &GeneratorBasis) -> i64 {
        self.0.iter().map(|f| basis.prefactor_b[f.family] * f.exponent as i64).sum()
    }

    pub fn max_family(&self) -> Option<usize> {
        self.0.iter().map(|f| f.family).max()
    }

    /// Render with a family naming function and a variable name.
    pub fn render(&self, name: &dyn Fn(usize) -> String, var: &str) -> String {
        if self.is_one() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|f| {
                let arg = match f.shift.twice() {
                    0 => var.to_string(),
                    2 => format!("{var}q"),
                    _ => format!("{var}q^{}", fmt_shift(f.shift)),
                };
                let e = if f.exponent == 1 { String::new() } else { format!("^{}", f.exponent) };
                format!("{}({arg}){e}", name(f.family))
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn fmt_shift(c: HalfInt) -> String {
    if c.is_integer() {
        c.to_string()
    } else {
        format!("({c})")
    }
}

pub fn y_name(i: usize) -> String {
    format!("Y{}", i + 1)
}

impl fmt::Display for FactorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&y_name, "z"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub scalar: QRat,
    pub factors: FactorSet,
}

/// A finite sum of monomials in one variable, merged by factor set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expression {
    terms: BTreeMap<FactorSet, QRat>,
}

impl Expression {
    pub fn zero() -> Self {
        Expression { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(QRat::one())
    }

    pub fn constant(c: QRat) -> Self {
        Self::monomial(c, FactorSet::one())
    }

    pub fn monomial(c: QRat, f: FactorSet) -> Self {
        let mut e = Self::zero();
        e.add_term(f, c);
        e
    }

    /// `F_i(z q^shift)^exponent` including its prefactor.
    pub fn exponential(basis: &GeneratorBasis, family: usize, shift: HalfInt, exponent: i32) -> Self {
        let pre = QRat::b_pow(basis.prefactor_b[family] * exponent as i64);
        Self::monomial(pre, FactorSet::single(family, shift, exponent))
    }

    pub fn add_term(&mut self, f: FactorSet, c: QRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&f) {
            Some(v) => {
                *v = v.plus(&c);
                if v.is_zero() {
                    self.terms.remove(&f);
                }
            }
            None => {
                self.terms.insert(f, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FactorSet, &QRat)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms.iter().map(|(f, c)| Monomial { scalar: c.clone(), factors: f.clone() }).collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&FactorSet::one()).is_some_and(|c| c.is_one())
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        out
    }

    pub fn negated(&self) -> Self {
        Expression { terms: self.terms.iter().map(|(f, c)| (f.clone(), c.negated())).collect() }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    pub fn scale(&self, c: &QRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Expression { terms: self.terms.iter().map(|(f, v)| (f.clone(), v.times(c))).collect() }
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (f1, c1) in &self.terms {
            for (f2, c2) in &other.terms {
                out.add_term(f1.times(f2), c1.times(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.times(self))
    }

    /// Replace `z` by `z q^c`.
    pub fn shifted(&self, c: HalfInt) -> Self {
        if c == HalfInt::ZERO {
            return self.clone();
        }
        Expression { terms: self.terms.iter().map(|(f, v)| (f.shifted(c), v.clone())).collect() }
    }

    /// Inverse of a single monomial.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (f, c) = self.terms.iter().next().unwrap();
        Some(Self::monomial(crate::scalar::Field::inverse(c), f.inverse()))
    }

    pub fn check_basis(&self, basis: &GeneratorBasis) -> Result<()> {
        for f in self.terms.keys() {
            if let Some(m) = f.max_family() {
                if m >= basis.size() {
                    return Err(Error::BasisMismatch { family: m, size: basis.size() });
                }
            }
        }
        Ok(())
    }

    pub fn render(&self, name: &dyn Fn(usize) -> String, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (f, c) in &self.terms {
            let cs = c.to_string();
            let part = if f.is_one() {
                cs
            } else if c.is_one() {
                f.render(name, var)
            } else if cs.contains(' ') {
                format!("({cs})*{}", f.render(name, var))
            } else {
                format!("{cs}*{}", f.render(name, var))
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&y_name, "z"))
    }
}

/// Kernel of `{F1(z), F2(w)} = K(w/z) F1(z) F2(w)` for single factors:
/// `e1 e2 K_ij(u) u^{2(c2 - c1)}`.
pub fn exponential_pair_kernel(f1: &ShiftedFactor, f2: &ShiftedFactor, basis: &GeneratorBasis) -> Result<Kernel> {
    for f in [f1, f2] {
        if f.family >= basis.size() {
            return Err(Error::BasisMismatch { family: f.family, size: basis.size() });
        }
    }
    let k = basis.kernel(f1.family, f2.family);
    let e = (f1.exponent * f2.exponent) as i64;
    Ok(k.mul_u_pow((f2.shift - f1.shift).twice() as i64).scale(&QRat::from_int(e)))
}

/// Total kernel of a pair of factor sets.
pub fn monomial_pair_kernel(m1: &FactorSet, m2: &FactorSet, basis: &GeneratorBasis) -> Kernel {
    // Group by family pair so each basis kernel is multiplied once.
    let mut groups: BTreeMap<(usize, usize), Vec<(i64, QRat)>> = BTreeMap::new();
    for f1 in m1.factors() {
        for f2 in m2.factors() {
            if basis.kernel(f1.family, f2.family).is_zero() {
                continue;
            }
            let e = (f1.exponent * f2.exponent) as i64;
            groups
                .entry((f1.family, f2.family))
                .or_default()
                .push(((f2.shift - f1.shift).twice() as i64, QRat::from_int(e)));
        }
    }
    let mut total = Kernel::zero();
    for ((i, j), terms) in groups {
        let l = Kernel::laurent(&terms);
        if !l.is_zero() {
            total = total.plus(&basis.kernel(i, j).times(&l));
        }
    }
    total
}

/// A monomial in two variables, `Z(z) W(w)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct JointKey {
    pub z: FactorSet,
    pub w: FactorSet,
}

/// On the support `w = z q^s` of `delta(w/(z q^s))`, rewrite `Z(z) W(w)` as a
/// product in `z` alone.
pub fn restrict_to_support(key: &JointKey, s: HalfInt) -> FactorSet {
    key.z.times(&key.w.shifted(s))
}

/// Canonical bracket: smooth kernels `R` with `R(0) + R(infinity) = 0`, attached
/// to two-variable monomials, plus delta terms with restricted monomials.
/// Monomial scalars are folded into the kernels and delta coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BracketResult {
    pub smooth: BTreeMap<JointKey, Kernel>,
    pub deltas: BTreeMap<(HalfInt, FactorSet), QRat>,
}

/// Accumulates total kernels and raw delta terms, then canonicalizes.
#[derive(Default)]
pub struct BracketBuilder {
    kernels: BTreeMap<JointKey, Kernel>,
    deltas: BTreeMap<(HalfInt, FactorSet), QRat>,
}

impl BracketBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_kernel(&mut self, key: JointKey, k: Kernel) {
        if k.is_zero() {
            return;
        }
        match self.kernels.get_mut(&key) {
            Some(v) => *v = v.plus(&k),
            None => {
                self.kernels.insert(key, k);
            }
        }
    }

    /// Add `c * delta(w/(z q^s)) * N(z)` with N already restricted.
    pub fn add_delta(&mut self, s: HalfInt, n: FactorSet, c: QRat) {
        add_delta_to(&mut self.deltas, s, n, c);
    }

    pub fn finish(self) -> BracketResult {
        let split: Vec<(JointKey, Vec<DeltaTerm>, Kernel)> = self
            .kernels
            .into_par_iter()
            .filter(|(_, k)| !k.is_zero())
            .map(|(key, k)| {
                let (d, r) = k.balanced_split();
                (key, d, r)
            })
            .collect();
        let mut out = BracketResult { smooth: BTreeMap::new(), deltas: self.deltas };
        for (key, ds, rem) in split {
            for d in ds {
                let n = restrict_to_support(&key, d.shift);
                add_delta_to(&mut out.deltas, d.shift, n, d.coeff);
            }
            if !rem.is_zero() {
                out.smooth.insert(key, rem);
            }
        }
        out.deltas.retain(|_, c| !c.is_zero());
        out
    }
}

fn add_delta_to(map: &mut BTreeMap<(HalfInt, FactorSet), QRat>, s: HalfInt, n: FactorSet, c: QRat) {
    if c.is_zero() {
        return;
    }
    let key = (s, n);
    match map.get_mut(&key) {
        Some(v) => {
            *v = v.plus(&c);
            if v.is_zero() {
                map.remove(&key);
            }
        }
        None => {
            map.insert(key, c);
        }
    }
}

impl BracketResult {
    pub fn is_zero(&self) -> bool {
        self.smooth.is_empty() && self.deltas.is_empty()
    }

    pub fn smooth_terms(&self) -> impl Iterator<Item = (&JointKey, &Kernel)> {
        self.smooth.iter()
    }

    pub fn delta_terms(&self) -> Vec<(DeltaTerm, FactorSet)> {
        self.deltas
            .iter()
            .map(|((s, n), c)| (DeltaTerm { shift: *s, coeff: c.clone() }, n.clone()))
            .collect()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.smooth {
            match out.smooth.get_mut(k) {
                Some(x) => {
                    *x = x.plus(v);
                    if x.is_zero() {
                        out.smooth.remove(k);
                    }
                }
                None => {
                    out.smooth.insert(k.clone(), v.clone());
                }
            }
        }
        for ((s, n), c) in &other.deltas {
            add_delta_to(&mut out.deltas, *s, n.clone(), c.clone());
        }
        out
    }

    pub fn negated(&self) -> Self {
        BracketResult {
            smooth: self.smooth.iter().map(|(k, v)| (k.clone(), v.negated())).collect(),
            deltas: self.deltas.iter().map(|(k, c)| (k.clone(), c.negated())).collect(),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    /// Multiply by an expression in `z`.
    pub fn times_z(&self, e: &Expression) -> Self {
        let mut b = BracketBuilder::new();
        for (key, k) in &self.smooth {
            for (f, c) in e.terms() {
                b.add_kernel(JointKey { z: key.z.times(f), w: key.w.clone() }, k.scale(c));
            }
        }
        for ((s, n), c0) in &self.deltas {
            for (f, c) in e.terms() {
                b.add_delta(*s, n.times(f), c0.times(c));
            }
        }
        b.finish()
    }

    /// Multiply by an expression in `w`.
    pub fn times_w(&self, e: &Expression) -> Self {
        let mut b = BracketBuilder::new();
        for (key, k) in &self.smooth {
            for (f, c) in e.terms() {
                b.add_kernel(JointKey { z: key.z.clone(), w: key.w.times(f) }, k.scale(c));
            }
        }
        for ((s, n), c0) in &self.deltas {
            for (f, c) in e.terms() {
                b.add_delta(*s, n.times(&f.shifted(*s)), c0.times(c));
            }
        }
        b.finish()
    }

    /// Exchange `z` and `w`: `K(u) -> K(1/u)` on smooth parts and
    /// `delta(w/(zq^s)) N(z) -> delta(w/(zq^{-s})) N(zq^{-s})`.
    pub fn swap_variables(&self) -> Self {
        let mut b = BracketBuilder::new();
        for (key, k) in &self.smooth {
            b.add_kernel(JointKey { z: key.w.clone(), w: key.z.clone() }, k.invert_var());
        }
        for ((s, n), c) in &self.deltas {
            b.add_delta(-*s, n.shifted(-*s), c.clone());
        }
        b.finish()
    }

    pub fn render(&self, name: &dyn Fn(usize) -> String) -> String {
        let mut lines = Vec::new();
        for (key, k) in &self.smooth {
            lines.push(format!("[{}] * {}*{}", k, key.z.render(name, "z"), key.w.render(name, "w")));
        }
        for ((s, n), c) in &self.deltas {
            let d = DeltaTerm { shift: *s, coeff: c.clone() };
            lines.push(format!("{} * {}", d, n.render(name, "z")));
        }
        if lines.is_empty() {
            lines.push("0".into());
        }
        lines.join("\n")
    }
}

impl fmt::Display for BracketResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&y_name))
    }
}

/// `{E1(z), E2(w)}` by the Leibniz rule over factor pairs, then split into
/// smooth and delta parts.
pub fn poisson_bracket(e1: &Expression, e2: &Expression, basis: &GeneratorBasis) -> Result<BracketResult> {
    Ok(raw_bracket(e1, e2, basis)?.finish())
}

/// Total kernels per monomial pair, before the delta split and restriction.
pub fn raw_bracket(e1: &Expression, e2: &Expression, basis: &GeneratorBasis) -> Result<BracketBuilder> {
    e1.check_basis(basis)?;
    e2.check_basis(basis)?;
    let pairs: Vec<(&FactorSet, &QRat, &FactorSet, &QRat)> = e1
        .terms()
        .flat_map(|(f1, c1)| e2.terms().map(move |(f2, c2)| (f1, c1, f2, c2)))
        .collect();
    let kernels: Vec<(JointKey, Kernel)> = pairs
        .par_iter()
        .map(|(f1, c1, f2, c2)| {
            let k = monomial_pair_kernel(f1, f2, basis).scale(&c1.times(c2));
            (JointKey { z: (*f1).clone(), w: (*f2).clone() }, k)
        })
        .collect();
    let mut b = BracketBuilder::new();
    for (key, k) in kernels {
        b.add_kernel(key, k);
    }
    Ok(b)
}

/// Distributive product of two expressions.
pub fn multiply(e1: &Expression, e2: &Expression) -> Expression {
    e1.times(e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{cartan_data, CartanType};
    use crate::genalg::y_basis;
    use crate::kernel::{kernel_from_qratio, QRatio};
    use crate::scalar::q_minus_qinv;

    fn sl2() -> GeneratorBasis {
        y_basis(&cartan_data(CartanType::A, 1).unwrap()).unwrap()
    }

    fn lam(b: &GeneratorBasis, shift: i32, e: i32) -> Expression {
        Expression::exponential(b, 0, HalfInt::int(shift), e)
    }

    fn rho() -> Kernel {
        kernel_from_qratio(
            &QRatio::new().qint(HalfInt::int(1), 2).qint(HalfInt::int(2), -1).constant(q_minus_qinv()),
        )
    }

    #[test]
    fn factor_canonical_form() {
        let a = FactorSet::new(vec![
            ShiftedFactor { family: 1, shift: HalfInt::int(1), exponent: 1 },
            ShiftedFactor { family: 0, shift: HalfInt::int(2), exponent: 1 },
            ShiftedFactor { family: 1, shift: HalfInt::int(1), exponent: -1 },
        ]);
        assert_eq!(a, FactorSet::single(0, HalfInt::int(2), 1));
    }

    #[test]
    fn pair_kernel_sl2() {
        let b = sl2();
        let f = |s, e| ShiftedFactor { family: 0, shift: HalfInt::int(s), exponent: e };
        assert_eq!(exponential_pair_kernel(&f(0, 1), &f(0, 1), &b).unwrap(), rho());
        assert_eq!(exponential_pair_kernel(&f(1, 1), &f(-1, -1), &b).unwrap(), rho().mul_u_pow(-4).negated());
        let bad = ShiftedFactor { family: 3, shift: HalfInt::ZERO, exponent: 1 };
        assert!(matches!(exponential_pair_kernel(&bad, &f(0, 1), &b), Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn cancellation_in_products() {
        let b = sl2();
        let p = lam(&b, 1, 1).times(&lam(&b, 1, -1));
        assert!(p.is_one());
        assert_eq!(lam(&b, 0, 1).times(&Expression::one()), lam(&b, 0, 1));
    }

    #[test]
    fn lambda_lambda_single_smooth_term() {
        let b = sl2();
        let r = poisson_bracket(&lam(&b, 0, 1), &lam(&b, 0, 1), &b).unwrap();
        assert!(r.deltas.is_empty());
        assert_eq!(r.smooth.len(), 1);
        assert_eq!(*r.smooth.values().next().unwrap(), rho().scale(&QRat::q_pow(-2)));
    }

    #[test]
    fn restriction_examples() {
        let key = JointKey { z: FactorSet::single(0, HalfInt::int(1), 1), w: FactorSet::single(0, HalfInt::int(-1), -1) };
        assert!(restrict_to_support(&key, HalfInt::int(2)).is_one());
        let key = JointKey { z: FactorSet::single(0, HalfInt::ZERO, 1), w: FactorSet::single(1, HalfInt::int(2), 1) };
        assert_eq!(
            restrict_to_support(&key, HalfInt::int(2)),
            FactorSet::new(vec![
                ShiftedFactor { family: 0, shift: HalfInt::ZERO, exponent: 1 },
                ShiftedFactor { family: 1, shift: HalfInt::int(4), exponent: 1 }
            ])
        );
        let key = JointKey { z: FactorSet::single(0, HalfInt::int(3), 1), w: FactorSet::one() };
        assert_eq!(restrict_to_support(&key, HalfInt::int(5)), key.z);
    }

    #[test]
    fn bracket_with_constant_is_empty() {
        let b = sl2();
        assert!(poisson_bracket(&lam(&b, 0, 1), &Expression::constant(QRat::from_int(3)), &b).unwrap().is_zero());
    }

    #[test]
    fn antisymmetry_small() {
        let b = sl2();
        let e1 = lam(&b, 1, 1).plus(&lam(&b, -1, -1));
        let e2 = lam(&b, 0, 2).plus(&lam(&b, 3, 1).scale(&QRat::from_int(5)));
        let r12 = poisson_bracket(&e1, &e2, &b).unwrap();
        let r21 = poisson_bracket(&e2, &e1, &b).unwrap();
        assert_eq!(r12, r21.swap_variables().negated());
    }

    #[test]
    fn leibniz_small() {
        let b = sl2();
        let e1 = lam(&b, 1, 1).plus(&Expression::one());
        let e2 = lam(&b, -1, -1);
        let e3 = lam(&b, 0, 1).plus(&lam(&b, 2, -1));
        let lhs = poisson_bracket(&e1.times(&e2), &e3, &b).unwrap();
        let rhs = poisson_bracket(&e2, &e3, &b)
            .unwrap()
            .times_z(&e1)
            .plus(&poisson_bracket(&e1, &e3, &b).unwrap().times_z(&e2));
        assert_eq!(lhs, rhs);
    }
}
