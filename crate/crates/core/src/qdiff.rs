//! q-difference operators `sum_k c_k(z) D^k` with `[D f](z) = f(zq^2)`,
//! the factorization of the `sl_N` operator into first-order pieces, and
//! Baxter's relation.

use std::collections::BTreeMap;
use std::fmt;

use crate::cartan::CartanType;
use crate::error::{Error, Result};
use crate::scalar::{HalfInt, QRat, Ring};
use crate::series::Expression;
use crate::report::Report;
use crate::walg::{build_preset, normalize_id, sl2_sigma, WPreset};

/// `D^k c(z) = c(zq^{2k}) D^k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QDiffOp {
    coeffs: BTreeMap<i32, Expression>,
}

impl QDiffOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(Expression::one(), 0)
    }

    /// `D^k`
    pub fn d_pow(k: i32) -> Self {
        Self::term(Expression::one(), k)
    }

    /// `c(z) D^k`
    pub fn term(c: Expression, k: i32) -> Self {
        let mut op = Self::zero();
        op.add_term(c, k);
        op
    }

    /// `c(z)` as a multiplication operator.
    pub fn mult(c: Expression) -> Self {
        Self::term(c, 0)
    }

    fn add_term(&mut self, c: Expression, k: i32) {
        if c.is_zero() {
            return;
        }
        let v = self.coeffs.entry(k).or_insert_with(Expression::zero);
        *v = v.plus(&c);
        if v.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: i32) -> Expression {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &BTreeMap<i32, Expression> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(c.clone(), *k);
        }
        out
    }

    pub fn negated(&self) -> Self {
        QDiffOp { coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.negated())).collect() }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    pub fn times(&self, other: &Self) -> Self {
        op_multiply(self, other)
    }

    /// Apply to a function `f` with `D f = g f`; the result is `r(z) f(z)`.
    pub fn apply(&self, f: &QSymbol) -> Result<Expression> {
        let mut out = Expression::zero();
        for (k, c) in &self.coeffs {
            out = out.plus(&c.times(&f.ratio(*k)?));
        }
        Ok(out)
    }
}

impl fmt::Display for QDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .map(|(k, c)| {
                let d = match k {
                    0 => String::new(),
                    1 => "D".into(),
                    k => format!("D^{k}"),
                };
                match (c.is_one(), d.is_empty()) {
                    (true, false) => d,
                    (_, true) => format!("({c})"),
                    _ => format!("({c})*{d}"),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Twisted product: `(a D^i)(b D^j) = a(z) b(zq^{2i}) D^{i+j}`.
pub fn op_multiply(p1: &QDiffOp, p2: &QDiffOp) -> QDiffOp {
    let mut out = QDiffOp::zero();
    for (i, a) in &p1.coeffs {
        for (j, b) in &p2.coeffs {
            out.add_term(a.times(&b.shifted(HalfInt::int(2 * i))), i + j);
        }
    }
    out
}

/// A formal solution `f` of `f(zq^2) = g(z) f(z)` with `g` a monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSymbol {
    pub name: String,
    pub step: Expression,
}

impl QSymbol {
    pub fn new(name: &str, step: Expression) -> Self {
        QSymbol { name: name.into(), step }
    }

    /// `f(zq^{2k}) / f(z)` after rewriting with the defining equation.
    pub fn ratio(&self, k: i32) -> Result<Expression> {
        let mut out = Expression::one();
        if k >= 0 {
            for l in 0..k {
                out = out.times(&self.step.shifted(HalfInt::int(2 * l)));
            }
        } else {
            for l in k..0 {
                let g = self.step.shifted(HalfInt::int(2 * l));
                out = out.times(&g.monomial_inverse().ok_or(Error::NonInvertibleConstantTerm)?);
            }
        }
        Ok(out)
    }
}

/// How the first-order factors are written.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorForm {
    /// `Lambda(z) D - 1`
    CoefficientFirst,
    /// `D - Lambda(z)`
    Monic,
}

#[derive(Clone, Debug)]
pub struct MiuraFactorization {
    pub form: FactorForm,
    /// Lambda index (1-based) of each factor, left to right.
    pub order: Vec<usize>,
    /// Argument shift of each factor, as a power of q.
    pub shifts: Vec<i32>,
    /// `s` with coefficient of `D^k` equal to `(-1)^{N-k} sigma_k(zq^s)`.
    pub common_shift: i32,
    pub operator: QDiffOp,
}

impl MiuraFactorization {
    pub fn describe(&self) -> String {
        let factors: Vec<String> = self
            .order
            .iter()
            .zip(&self.shifts)
            .map(|(j, s)| {
                let arg = if *s == 0 { "z".to_string() } else { format!("zq^{s}") };
                match self.form {
                    FactorForm::CoefficientFirst => format!("(Lambda{j}({arg}) D - 1)"),
                    FactorForm::Monic => format!("(D - Lambda{j}({arg}))"),
                }
            })
            .collect();
        format!("{} = sum_k (-1)^(N-k) sigma_k(zq^{}) D^k", factors.join(""), self.common_shift)
    }
}

/// `sum_k (-1)^{N-k} sigma_k(zq^s) D^k`.
pub fn w_operator(preset: &WPreset, s: i32) -> Result<QDiffOp> {
    let n = preset.rank() + 1;
    let mut op = QDiffOp::zero();
    for k in 0..=n {
        let sign = if (n - k).is_multiple_of(2) { QRat::one() } else { QRat::one().negated() };
        op = op.plus(&QDiffOp::term(preset.sigma_a(k)?.shifted(HalfInt::int(s)).scale(&sign), k as i32));
    }
    Ok(op)
}

fn first_order(form: FactorForm, lam: &Expression) -> QDiffOp {
    match form {
        FactorForm::CoefficientFirst => QDiffOp::term(lam.clone(), 1).minus(&QDiffOp::one()),
        FactorForm::Monic => QDiffOp::d_pow(1).minus(&QDiffOp::mult(lam.clone())),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Search factor forms, orderings and arithmetic shift progressions for a
/// product of first-order operators equal to the `sl_N` operator built from
/// the sigma series.
pub fn miura_factorization(preset: &WPreset) -> Result<MiuraFactorization> {
    if preset.kind() != CartanType::A {
        return Err(Error::UnsupportedType(format!("{} has no Miura operator here", preset.kind())));
    }
    let n = preset.rank() + 1;
    let targets: Vec<(i32, QDiffOp)> = (-4..=4).map(|s| Ok((s, w_operator(preset, s)?))).collect::<Result<_>>()?;
    for form in [FactorForm::CoefficientFirst, FactorForm::Monic] {
        for order in permutations(n) {
            for start in [0, -1, 1, -2, 2] {
                for step in [0, 2, -2] {
                    let shifts: Vec<i32> = (0..n as i32).map(|k| start + step * k).collect();
                    let op = order.iter().zip(&shifts).fold(QDiffOp::one(), |acc, (&j, &s)| {
                        acc.times(&first_order(form, &preset.lambda_list[j - 1].shifted(HalfInt::int(s))))
                    });
                    if let Some((s, _)) = targets.iter().find(|(_, t)| *t == op) {
                        return Ok(MiuraFactorization { form, order, shifts, common_shift: *s, operator: op });
                    }
                }
            }
        }
    }
    Err(Error::FactorizationMismatch)
}

/// `(D + D^-1 - sigma(z)) Q(z)` divided by `Q(z)`, with `Q(zq^2) = Lambda(zq) Q(z)`.
pub fn baxter_residual(preset: &WPreset) -> Result<Expression> {
    let sigma = sl2_sigma(preset)?;
    baxter_residual_with(preset, &sigma)
}

pub fn baxter_residual_with(preset: &WPreset, sigma: &Expression) -> Result<Expression> {
    let q = QSymbol::new("Q", preset.lambda_list[0].shifted(HalfInt::int(1)));
    let op = QDiffOp::d_pow(1).plus(&QDiffOp::d_pow(-1)).minus(&QDiffOp::mult(sigma.clone()));
    op.apply(&q)
}

/// The `sl_N` operator applied to `f(z) = Q_{N-1}(zq^-2)`, where
/// `Q_{N-1}(zq^-2) = Lambda_N(z) Q_{N-1}(z)` gives `D f = Lambda_N^{-1} f`.
pub fn chain_residual(preset: &WPreset) -> Result<Expression> {
    if preset.kind() != CartanType::A {
        return Err(Error::UnsupportedType(preset.kind().to_string()));
    }
    let last = preset.lambda_list.last().expect("nonempty");
    let f = QSymbol::new("Q_{N-1}(zq^-2)", last.monomial_inverse().ok_or(Error::NonInvertibleConstantTerm)?);
    w_operator(preset, 0)?.apply(&f)
}

const IDS: &[(&str, &str)] = &[
    ("MIURA", "product of first-order factors = D^N - sigma_(N-1) D^(N-1) + ... + (-1)^N, N = 2, 3, 4"),
    ("BAXTER", "(D + D^-1 - sigma(z)) Q(z) = 0, and the sl_N operator kills Q_(N-1)(zq^-2), N = 2, 3, 4"),
];

pub fn qdiff_ids() -> Vec<&'static str> {
    IDS.iter().map(|(id, _)| *id).collect()
}

pub fn verify_qdiff(id: &str) -> Result<Report> {
    let id = normalize_id(id);
    let (key, anchor) = IDS.iter().find(|(k, _)| *k == id).ok_or_else(|| Error::UnknownIdentity(id.clone()))?;
    let mut r = Report::new(key, anchor);
    for rank in 1..=3 {
        let p = build_preset(CartanType::A, rank)?;
        let n = rank + 1;
        if *key == "MIURA" {
            match miura_factorization(&p) {
                Ok(m) => r.check(
                    format!("N={n}"),
                    true,
                    format!("{:?} factors, order {:?}, shifts {:?}", m.form, m.order, m.shifts),
                    format!("sigma series shifted by q^{}", m.common_shift),
                ),
                Err(e) => r.fail_with(format!("N={n}"), e),
            }
        } else {
            if rank == 1 {
                let res = baxter_residual(&p)?;
                r.check("sl2 TQ", res.is_zero(), res.to_string(), "0");
            }
            let res = chain_residual(&p)?;
            r.check(format!("N={n} chain"), res.is_zero(), res.to_string(), "0");
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(rank: usize) -> WPreset {
        build_preset(CartanType::A, rank).unwrap()
    }

    #[test]
    fn twist_rule() {
        let p = a(1);
        let lam = p.lambda_list[0].clone();
        let lhs = QDiffOp::d_pow(1).times(&QDiffOp::mult(lam.clone()));
        assert_eq!(lhs, QDiffOp::term(lam.shifted(HalfInt::int(2)), 1));
        let op = QDiffOp::term(lam, 2);
        assert_eq!(op.times(&QDiffOp::one()), op);
    }

    #[test]
    fn second_order_product() {
        let p = a(1);
        let (l1, l2) = (p.lambda_list[0].clone(), p.lambda_list[1].clone());
        let f = |l: &Expression| QDiffOp::d_pow(1).minus(&QDiffOp::mult(l.clone()));
        let prod = f(&l2).times(&f(&l1));
        let two = HalfInt::int(2);
        let expect = QDiffOp::d_pow(2)
            .minus(&QDiffOp::term(l1.shifted(two).plus(&l2), 1))
            .plus(&QDiffOp::mult(l2.times(&l1)));
        assert_eq!(prod, expect);
    }

    #[test]
    fn associativity() {
        let p = a(2);
        let l = &p.lambda_list;
        let x = QDiffOp::term(l[0].clone(), 1).minus(&QDiffOp::one());
        let y = QDiffOp::d_pow(2).plus(&QDiffOp::term(l[1].clone(), -1));
        let z = QDiffOp::mult(l[2].clone()).plus(&QDiffOp::d_pow(1));
        assert_eq!(x.times(&y).times(&z), x.times(&y.times(&z)));
    }

    #[test]
    fn factorization_found() {
        for rank in 1..=3 {
            let p = a(rank);
            let m = miura_factorization(&p).unwrap();
            assert_eq!(m.form, FactorForm::CoefficientFirst);
            assert_eq!(m.order, (1..=rank + 1).collect::<Vec<_>>());
            assert_eq!(m.common_shift, 0);
            assert!(m.operator.coeff(rank as i32 + 1).is_one());
            let c0 = m.operator.coeff(0);
            let sign = if (rank + 1) % 2 == 0 { QRat::one() } else { QRat::one().negated() };
            assert_eq!(c0, Expression::constant(sign));
        }
    }

    #[test]
    fn baxter() {
        let p = a(1);
        assert!(baxter_residual(&p).unwrap().is_zero());
        let bad = sl2_sigma(&p).unwrap().plus(&p.lambda_list[0].shifted(HalfInt::int(3)));
        assert!(!baxter_residual_with(&p, &bad).unwrap().is_zero());
        for rank in 1..=3 {
            assert!(chain_residual(&a(rank)).unwrap().is_zero());
        }
    }

    #[test]
    fn registry() {
        for id in qdiff_ids() {
            assert!(verify_qdiff(id).unwrap().passed(), "{id}");
        }
        assert!(matches!(verify_qdiff("nope"), Err(Error::UnknownIdentity(_))));
    }

    #[test]
    fn linear_coefficient_ignores_order() {
        for rank in 1..=2 {
            let p = a(rank);
            let n = rank + 1;
            let sign = if (n - 1) % 2 == 0 { QRat::one() } else { QRat::one().negated() };
            let expect = p.sigma_a(1).unwrap().scale(&sign);
            for order in permutations(n) {
                let op = order.iter().fold(QDiffOp::one(), |acc, &j| {
                    acc.times(&first_order(FactorForm::CoefficientFirst, &p.lambda_list[j - 1]))
                });
                assert_eq!(op.coeff(1), expect, "{order:?}");
                let c0 = if n % 2 == 0 { QRat::one() } else { QRat::one().negated() };
                assert_eq!(op.coeff(0), Expression::constant(c0));
            }
        }
    }
}
