//! The q-deformed W-algebra series `sigma_i(z)` for types A, B, C, D.
//!
//! Every `Lambda_j(z)` is a Y-monomial, and `sigma_i(z)` sums shifted
//! products of them over an admissible index set. Spinor series are built
//! from the recursive `b_s(z|k)` products.

mod reference;
mod registry;

pub use reference::{finalpb_reference, reference_bracket_a, reference_bracket_a_in, sl3_reference};
pub use registry::{normalize_id, registry_ids, verify, verify_with, VerifyOptions};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cartan::{cartan_data, CartanData, CartanType};
use crate::error::{Error, Result};
use crate::genalg::{y_basis, GeneratorBasis};
use crate::series::{poisson_bracket, BracketResult, Expression};
use crate::scalar::HalfInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SigmaLabel {
    Index(usize),
    Spinor,
    SpinorPlus,
    SpinorMinus,
}

impl fmt::Display for SigmaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaLabel::Index(i) => write!(f, "{i}"),
            SigmaLabel::Spinor => f.write_str("spinor"),
            SigmaLabel::SpinorPlus => f.write_str("spinor+"),
            SigmaLabel::SpinorMinus => f.write_str("spinor-"),
        }
    }
}

impl FromStr for SigmaLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "spinor" => Ok(SigmaLabel::Spinor),
            "spinor+" => Ok(SigmaLabel::SpinorPlus),
            "spinor-" | "spinor\u{2212}" => Ok(SigmaLabel::SpinorMinus),
            t => t.parse().map(SigmaLabel::Index).map_err(|_| Error::IndexError(format!("bad sigma label {t:?}"))),
        }
    }
}

/// Adjacent-index rule for D-type tuples.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DPairRule {
    /// `j_a < j_{a+1}`, or `(j_a, j_{a+1}) = (n+1, n)`.
    #[default]
    AllowDescendingMiddle,
    StrictlyIncreasing,
}

/// Superscript of the k-th factor of a D spinor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SuperscriptRule {
    /// `eps * s_1 ... s_{k-1}`.
    #[default]
    Prefix,
    /// `eps * s_1 ... s_k` for the last factor.
    IncludeOwn,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DConvention {
    pub pair_rule: DPairRule,
    pub superscript: SuperscriptRule,
}

#[derive(Clone, Debug)]
pub struct WPreset {
    pub cartan: CartanData,
    pub basis: GeneratorBasis,
    /// `Lambda_1, ..., Lambda_K` as Y-monomials.
    pub lambda_list: Vec<Expression>,
    pub sigma: BTreeMap<SigmaLabel, Expression>,
    /// Number of summands before like terms merge.
    pub summand_counts: BTreeMap<SigmaLabel, usize>,
}

impl WPreset {
    pub fn kind(&self) -> CartanType {
        self.cartan.kind
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank
    }

    pub fn sigma(&self, label: SigmaLabel) -> Result<&Expression> {
        self.sigma
            .get(&label)
            .ok_or_else(|| Error::IndexError(format!("no sigma {label} for {}{}", self.kind(), self.rank())))
    }

    pub fn labels(&self) -> Vec<SigmaLabel> {
        self.sigma.keys().copied().collect()
    }

    /// `sigma_i` for `0 <= i <= N` in type A, with `sigma_0 = sigma_N = 1`.
    pub fn sigma_a(&self, i: usize) -> Result<Expression> {
        let n = self.rank() + 1;
        if self.kind() != CartanType::A || i > n {
            return Err(Error::IndexError(format!("sigma_{i} in {}{}", self.kind(), self.rank())));
        }
        if i == 0 || i == n {
            return Ok(Expression::one());
        }
        Ok(self.sigma(SigmaLabel::Index(i))?.clone())
    }

    /// The full product `Lambda_1(z) Lambda_2(zq^2) ... Lambda_N(zq^{2N-2})`
    /// for type A.
    pub fn sigma_top_product(&self) -> Expression {
        let step = self.step();
        self.lambda_list
            .iter()
            .enumerate()
            .fold(Expression::one(), |acc, (k, l)| acc.times(&l.shifted(HalfInt::from_twice(step * k as i32))))
    }

    /// Shift between consecutive factors of `sigma_i`, as twice its value.
    fn step(&self) -> i32 {
        if self.kind() == CartanType::C {
            2
        } else {
            4
        }
    }
}

pub fn build_preset(kind: CartanType, rank: usize) -> Result<WPreset> {
    build_preset_with(kind, rank, DConvention::default())
}

pub fn build_preset_with(kind: CartanType, rank: usize, conv: DConvention) -> Result<WPreset> {
    let min = match kind {
        CartanType::A => 1,
        CartanType::B | CartanType::C => 2,
        CartanType::D => 3,
    };
    if rank < min {
        return Err(Error::RankTooSmall { kind: kind.to_string(), rank });
    }
    let cartan = cartan_data(kind, rank)?;
    let basis = y_basis(&cartan)?;
    let ys = YBuilder { basis: &basis, kind, rank };
    let lambda_list = match kind {
        CartanType::A => lambdas_a(&ys),
        CartanType::B => lambdas_b(&ys),
        CartanType::C => lambdas_c(&ys),
        CartanType::D => lambdas_d(&ys),
    };
    let (step, top) = match kind {
        CartanType::A => (4, rank),
        CartanType::B => (4, rank - 1),
        CartanType::C => (2, rank),
        CartanType::D => (4, rank - 2),
    };
    let mut sigma = BTreeMap::new();
    let mut summand_counts = BTreeMap::new();
    for i in 1..=top {
        let tuples = admissible_tuples(kind, rank, i, conv.pair_rule);
        summand_counts.insert(SigmaLabel::Index(i), tuples.len());
        let mut e = Expression::zero();
        for t in &tuples {
            let term = t.iter().enumerate().fold(Expression::one(), |acc, (k, &j)| {
                acc.times(&lambda_list[j - 1].shifted(HalfInt::from_twice(step * k as i32)))
            });
            e = e.plus(&term);
        }
        sigma.insert(SigmaLabel::Index(i), e);
    }
    match kind {
        CartanType::B => {
            let (e, c) = spinor_b(&ys);
            sigma.insert(SigmaLabel::Spinor, e);
            summand_counts.insert(SigmaLabel::Spinor, c);
        }
        CartanType::D => {
            for (label, eps) in [(SigmaLabel::SpinorPlus, 1), (SigmaLabel::SpinorMinus, -1)] {
                let (e, c) = spinor_d(&ys, eps, conv.superscript);
                sigma.insert(label, e);
                summand_counts.insert(label, c);
            }
        }
        _ => {}
    }
    Ok(WPreset { cartan, basis, lambda_list, sigma, summand_counts })
}

struct YBuilder<'a> {
    basis: &'a GeneratorBasis,
    kind: CartanType,
    rank: usize,
}

impl YBuilder<'_> {
    /// `Y_i(z q^{t/2})^e`, with `Y_0 = 1` (and `Y_{n+1} = 1` in type A).
    fn y(&self, i: usize, twice_shift: i32, e: i32) -> Expression {
        if i == 0 || (self.kind == CartanType::A && i == self.rank + 1) {
            return Expression::one();
        }
        Expression::exponential(self.basis, i - 1, HalfInt::from_twice(twice_shift), e)
    }

    fn prod(&self, parts: &[(usize, i32, i32)]) -> Expression {
        parts.iter().fold(Expression::one(), |acc, &(i, t, e)| acc.times(&self.y(i, t, e)))
    }
}

fn lambdas_a(ys: &YBuilder) -> Vec<Expression> {
    let n = ys.rank as i32 + 1;
    (1..=n).map(|i| ys.prod(&[(i as usize, 2 * (1 - i), 1), (i as usize - 1, -2 * i, -1)])).collect()
}

fn lambdas_b(ys: &YBuilder) -> Vec<Expression> {
    let n = ys.rank as i32;
    let nu = ys.rank;
    let mut out: Vec<Expression> = (1..n).map(|i| ys.prod(&[(i as usize, 2 * (1 - i), 1), (i as usize - 1, -2 * i, -1)])).collect();
    out.push(ys.prod(&[(nu, -2 * n + 3, 1), (nu, -2 * n + 1, 1), (nu - 1, -2 * n, -1)]));
    out.push(ys.prod(&[(nu, -2 * n + 3, 1), (nu, -2 * n - 1, -1)]));
    out.push(ys.prod(&[(nu - 1, -2 * n + 2, 1), (nu, -2 * n + 1, -1), (nu, -2 * n - 1, -1)]));
    // Lambda_{2n-i+2} for i = n-1 down to 1.
    for i in (1..n).rev() {
        out.push(ys.prod(&[(i as usize - 1, 2 * (-2 * n + i + 1), 1), (i as usize, 2 * (-2 * n + i), -1)]));
    }
    out
}

fn lambdas_c(ys: &YBuilder) -> Vec<Expression> {
    let n = ys.rank as i32;
    let nu = ys.rank;
    let mut out: Vec<Expression> = (1..n).map(|i| ys.prod(&[(i as usize, -(i - 1), 1), (i as usize - 1, -i, -1)])).collect();
    out.push(ys.prod(&[(nu, -(n - 1), 1), (nu - 1, -n, -1)]));
    out.push(ys.prod(&[(nu - 1, -(n + 2), 1), (nu, -(n + 3), -1)]));
    for i in (1..n).rev() {
        out.push(ys.prod(&[(i as usize - 1, -(2 * n - i + 2), 1), (i as usize, -(2 * n - i + 3), -1)]));
    }
    out
}

fn lambdas_d(ys: &YBuilder) -> Vec<Expression> {
    let n = ys.rank as i32;
    let nu = ys.rank;
    let mut out: Vec<Expression> =
        (1..n - 1).map(|i| ys.prod(&[(i as usize, 2 * (1 - i), 1), (i as usize - 1, -2 * i, -1)])).collect();
    out.push(ys.prod(&[(nu, 2 * (2 - n), 1), (nu - 1, 2 * (2 - n), 1), (nu - 2, 2 * (1 - n), -1)]));
    out.push(ys.prod(&[(nu - 1, 2 * (2 - n), 1), (nu, -2 * n, -1)]));
    out.push(ys.prod(&[(nu, 2 * (2 - n), 1), (nu - 1, -2 * n, -1)]));
    out.push(ys.prod(&[(nu - 2, 2 * (1 - n), 1), (nu - 1, -2 * n, -1), (nu, -2 * n, -1)]));
    for i in (1..n - 1).rev() {
        out.push(ys.prod(&[(i as usize - 1, 2 * (-2 * n + i + 2), 1), (i as usize, 2 * (-2 * n + i + 1), -1)]));
    }
    out
}

/// Index tuples `(j_1, ..., j_i)` of the sum defining `sigma_i`.
pub fn admissible_tuples(kind: CartanType, rank: usize, i: usize, d_rule: DPairRule) -> Vec<Vec<usize>> {
    let n = rank;
    let count = match kind {
        CartanType::A => n + 1,
        CartanType::B => 2 * n + 1,
        CartanType::C | CartanType::D => 2 * n,
    };
    let step_ok = |a: usize, b: usize| -> bool {
        match kind {
            CartanType::A | CartanType::C => a < b,
            CartanType::B => a < b || (a == n + 1 && b == n + 1),
            CartanType::D => a < b || (d_rule == DPairRule::AllowDescendingMiddle && a == n + 1 && b == n),
        }
    };
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(i);
    extend_tuples(&mut cur, i, count, &step_ok, &mut out);
    if kind == CartanType::C {
        out.retain(|t| c_condition(t, n));
    }
    out
}

fn extend_tuples(cur: &mut Vec<usize>, len: usize, count: usize, ok: &dyn Fn(usize, usize) -> bool, out: &mut Vec<Vec<usize>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    for j in 1..=count {
        if cur.last().is_none_or(|&p| ok(p, j)) {
            cur.push(j);
            extend_tuples(cur, len, count, ok, out);
            cur.pop();
        }
    }
}

/// If `j_a = l` and `j_b = 2n+1-l` then `l <= n + a - b`.
fn c_condition(t: &[usize], n: usize) -> bool {
    for (a, &ja) in t.iter().enumerate() {
        for (b, &jb) in t.iter().enumerate() {
            if ja <= n && jb == 2 * n + 1 - ja && (ja as i64) > n as i64 + a as i64 - b as i64 {
                return false;
            }
        }
    }
    true
}

/// Sign sequences `s_1..s_len` with the accumulated shift
/// `(k-1) - s_1 - ... - s_{k-1}` of factor k.
fn sign_sequences(len: usize) -> Vec<Vec<i32>> {
    (0..1u32 << len).map(|m| (0..len).map(|k| if m >> (len - 1 - k) & 1 == 0 { 1 } else { -1 }).collect()).collect()
}

fn spinor_b(ys: &YBuilder) -> (Expression, usize) {
    let n = ys.rank;
    let ni = n as i32;
    let b = |s: i32, k: usize| -> Expression {
        match (s, k) {
            (1, 1) => ys.y(n, -2 * ni - 1, -1),
            (1, _) => Expression::one(),
            (_, 1) => ys.prod(&[(n - 1, -2 * ni, -1), (n, -2 * ni + 1, 1)]),
            (_, k) => {
                let k = k as i32;
                ys.prod(&[((ni - k) as usize, 2 * (-ni + k - 1), -1), ((ni + 1 - k) as usize, 2 * (-ni + k), 1)])
            }
        }
    };
    let seqs = sign_sequences(n);
    let mut total = Expression::zero();
    for s in &seqs {
        let mut term = Expression::one();
        let mut shift = 0;
        for (k, &sk) in s.iter().enumerate() {
            term = term.times(&b(sk, n - k).shifted(HalfInt::int(shift)));
            shift += 1 - sk;
        }
        total = total.plus(&term);
    }
    (total, seqs.len())
}

fn spinor_d(ys: &YBuilder, eps: i32, rule: SuperscriptRule) -> (Expression, usize) {
    let n = ys.rank;
    let ni = n as i32;
    let y_eps = |e: i32| if e > 0 { n } else { n - 1 };
    let b = |s: i32, e: i32, k: usize| -> Expression {
        match (s, k) {
            (1, 2) => ys.y(y_eps(e), -2 * ni, -1),
            (1, _) => Expression::one(),
            (_, 2) => ys.prod(&[(n - 2, 2 * (1 - ni), -1), (y_eps(e), 2 * (2 - ni), 1)]),
            (_, k) => {
                let k = k as i32;
                ys.prod(&[((ni - k) as usize, 2 * (-ni + k - 1), -1), ((ni + 1 - k) as usize, 2 * (-ni + k), 1)])
            }
        }
    };
    let seqs = sign_sequences(n - 1);
    let mut total = Expression::zero();
    for s in &seqs {
        let mut term = Expression::one();
        let mut shift = 0;
        let mut sup = eps;
        for (k, &sk) in s.iter().enumerate() {
            let last = k + 1 == s.len();
            let e = if last && rule == SuperscriptRule::IncludeOwn { sup * sk } else { sup };
            term = term.times(&b(sk, e, n - k).shifted(HalfInt::int(shift)));
            shift += 1 - sk;
            sup *= sk;
        }
        total = total.plus(&term);
    }
    (total, seqs.len())
}

/// `{sigma_i(z), sigma_j(w)}` over the y-basis.
pub fn sigma_bracket(preset: &WPreset, i: SigmaLabel, j: SigmaLabel) -> Result<BracketResult> {
    poisson_bracket(preset.sigma(i)?, preset.sigma(j)?, &preset.basis)
}

/// The sl2 series `sigma(z) = Lambda(zq) + Lambda(zq^-1)^-1`, equal to
/// `sigma_1(zq)` of the A1 preset.
pub fn sl2_sigma(preset: &WPreset) -> Result<Expression> {
    if preset.kind() != CartanType::A || preset.rank() != 1 {
        return Err(Error::UnsupportedType(format!("{}{} is not sl2", preset.kind(), preset.rank())));
    }
    let lam = &preset.lambda_list[0];
    let inv = lam.shifted(HalfInt::int(-1)).monomial_inverse().expect("Lambda is a monomial");
    Ok(lam.shifted(HalfInt::int(1)).plus(&inv))
}

/// `l^{(n)}(z) = sum_{k=0}^n prod_{j<k} Lambda(zq^{2j-1})^-1 prod_{j=k}^{n-1} Lambda(zq^{2j+1})`
/// for sl2.
pub fn fusion_ell(n: usize) -> Expression {
    let preset = build_preset(CartanType::A, 1).expect("A1 preset");
    fusion_ell_in(&preset, n)
}

pub fn fusion_ell_in(preset: &WPreset, n: usize) -> Expression {
    let lam = &preset.lambda_list[0];
    let lam_at = |t: i32| lam.shifted(HalfInt::int(t));
    let mut total = Expression::zero();
    for k in 0..=n {
        let mut term = Expression::one();
        for j in 0..k {
            term = term.times(&lam_at(2 * j as i32 - 1).monomial_inverse().expect("monomial"));
        }
        for j in k..n {
            term = term.times(&lam_at(2 * j as i32 + 1));
        }
        total = total.plus(&term);
    }
    total
}

/// `l^{(1)}(zq^{2n}) l^{(n)}(z) - l^{(n+1)}(z) - l^{(n-1)}(z)`.
pub fn fusion_defect(preset: &WPreset, n: usize) -> Expression {
    assert!(n >= 1);
    let l1 = fusion_ell_in(preset, 1).shifted(HalfInt::int(2 * n as i32));
    l1.times(&fusion_ell_in(preset, n))
        .minus(&fusion_ell_in(preset, n + 1))
        .minus(&fusion_ell_in(preset, n - 1))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Expected summand count of `sigma_i` in type A.
pub fn expected_count_a(n: usize, i: usize) -> usize {
    binomial(n, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::FactorSet;

    fn a(rank: usize) -> WPreset {
        build_preset(CartanType::A, rank).unwrap()
    }

    #[test]
    fn sl2_lambdas_and_sigma() {
        let p = a(1);
        let y = |t, e| Expression::exponential(&p.basis, 0, HalfInt::int(t), e);
        assert_eq!(p.lambda_list, vec![y(0, 1), y(-2, -1)]);
        assert_eq!(p.sigma_a(1).unwrap(), y(0, 1).plus(&y(-2, -1)));
        assert_eq!(sl2_sigma(&p).unwrap().shifted(HalfInt::int(-1)), p.sigma_a(1).unwrap());
    }

    #[test]
    fn a_type_counts_and_top() {
        for rank in 1..=4 {
            let p = a(rank);
            let n = rank + 1;
            for i in 1..=rank {
                assert_eq!(p.summand_counts[&SigmaLabel::Index(i)], binomial(n, i));
                assert_eq!(p.sigma_a(i).unwrap().len(), binomial(n, i));
            }
            assert!(p.sigma_top_product().is_one());
        }
        assert_eq!(a(3).sigma_a(2).unwrap().len(), 6);
    }

    #[test]
    fn bcd_counts() {
        for n in 2..=4 {
            let b = build_preset(CartanType::B, n).unwrap();
            assert_eq!(b.lambda_list.len(), 2 * n + 1);
            assert_eq!(b.summand_counts[&SigmaLabel::Index(1)], 2 * n + 1);
            assert_eq!(b.summand_counts[&SigmaLabel::Spinor], 1 << n);
            assert_eq!(b.sigma(SigmaLabel::Spinor).unwrap().len(), 1 << n);
            let c = build_preset(CartanType::C, n).unwrap();
            assert_eq!(c.lambda_list.len(), 2 * n);
            assert_eq!(c.summand_counts[&SigmaLabel::Index(1)], 2 * n);
        }
        for n in 3..=5 {
            let d = build_preset(CartanType::D, n).unwrap();
            assert_eq!(d.lambda_list.len(), 2 * n);
            assert_eq!(d.summand_counts[&SigmaLabel::SpinorPlus], 1 << (n - 1));
            assert_eq!(d.summand_counts[&SigmaLabel::SpinorMinus], 1 << (n - 1));
        }
    }

    #[test]
    fn d4_second_sigma_count() {
        // 28 increasing pairs plus the descending middle pair (5, 4).
        assert_eq!(admissible_tuples(CartanType::D, 4, 2, DPairRule::AllowDescendingMiddle).len(), 29);
        assert_eq!(admissible_tuples(CartanType::D, 4, 2, DPairRule::StrictlyIncreasing).len(), 28);
    }

    #[test]
    fn c2_tuples() {
        // Pairs (l, 5 - l) need l <= 2 + 1 - 2 = 1: (1,4) allowed, (2,3) excluded.
        let t = admissible_tuples(CartanType::C, 2, 2, DPairRule::default());
        assert!(t.contains(&vec![1, 4]));
        assert!(!t.contains(&vec![2, 3]));
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn shift_lattices() {
        let half = |p: &WPreset| {
            p.lambda_list.iter().flat_map(|e| e.terms().flat_map(|(f, _)| f.factors().to_vec()).collect::<Vec<_>>())
                .any(|f| !f.shift.is_integer())
        };
        assert!(!half(&a(3)));
        assert!(half(&build_preset(CartanType::B, 3).unwrap()));
        assert!(half(&build_preset(CartanType::C, 3).unwrap()));
        assert!(!half(&build_preset(CartanType::D, 4).unwrap()));
    }

    #[test]
    fn rank_checks() {
        assert!(matches!(build_preset(CartanType::B, 1), Err(Error::RankTooSmall { .. })));
        assert!(matches!(build_preset(CartanType::D, 2), Err(Error::RankTooSmall { .. })));
        assert!("E".parse::<CartanType>().is_err());
    }

    #[test]
    fn labels_parse() {
        assert_eq!("spinor+".parse::<SigmaLabel>().unwrap(), SigmaLabel::SpinorPlus);
        assert_eq!("3".parse::<SigmaLabel>().unwrap(), SigmaLabel::Index(3));
        assert!("x".parse::<SigmaLabel>().is_err());
    }

    #[test]
    fn fusion() {
        let p = a(1);
        assert!(fusion_ell_in(&p, 0).is_one());
        assert_eq!(fusion_ell_in(&p, 1), sl2_sigma(&p).unwrap());
        for n in 1..=5 {
            assert!(fusion_defect(&p, n).is_zero(), "n = {n}");
        }
    }

    /// Relabel the Y-families of an expression and shift it.
    fn relabel(e: &Expression, map: &[usize], shift: HalfInt) -> Vec<FactorSet> {
        let mut v: Vec<FactorSet> = e
            .terms()
            .map(|(f, _)| {
                FactorSet::new(
                    f.factors()
                        .iter()
                        .map(|x| crate::series::ShiftedFactor { family: map[x.family], shift: x.shift + shift, ..*x })
                        .collect(),
                )
            })
            .collect();
        v.sort();
        v
    }

    fn monomials(e: &Expression) -> Vec<FactorSet> {
        let mut v: Vec<FactorSet> = e.terms().map(|(f, _)| f.clone()).collect();
        v.sort();
        v
    }

    #[test]
    fn d3_spinors_are_a3_end_nodes() {
        let d3 = build_preset(CartanType::D, 3).unwrap();
        let a3 = a(3);
        // D3 nodes (1, 2, 3) sit on A3 nodes (2, 1, 3) and (2, 3, 1).
        let matches = |label, conv_map: &[usize]| {
            let e = d3.sigma(label).unwrap();
            (-8..=8).any(|t| {
                let r = relabel(e, conv_map, HalfInt::from_twice(t));
                r == monomials(&a3.sigma_a(1).unwrap()) || r == monomials(&a3.sigma_a(3).unwrap())
            })
        };
        for label in [SigmaLabel::SpinorPlus, SigmaLabel::SpinorMinus] {
            assert!(matches(label, &[1, 0, 2]) || matches(label, &[1, 2, 0]), "{label}");
        }
        let include_own = build_preset_with(
            CartanType::D,
            3,
            DConvention { superscript: SuperscriptRule::IncludeOwn, ..Default::default() },
        )
        .unwrap();
        let e = include_own.sigma(SigmaLabel::SpinorPlus).unwrap();
        let hit = (-8..=8).any(|t| {
            [[1, 0, 2], [1, 2, 0]].iter().any(|m| {
                let r = relabel(e, m, HalfInt::from_twice(t));
                r == monomials(&a3.sigma_a(1).unwrap()) || r == monomials(&a3.sigma_a(3).unwrap())
            })
        });
        assert!(!hit);
    }

    #[test]
    fn d3_vector_is_a3_middle() {
        let d3 = build_preset(CartanType::D, 3).unwrap();
        let a3 = a(3);
        let e = d3.sigma(SigmaLabel::Index(1)).unwrap();
        let hit = (-8..=8).any(|t| {
            [[1, 0, 2], [1, 2, 0]]
                .iter()
                .any(|m| relabel(e, m, HalfInt::from_twice(t)) == monomials(&a3.sigma_a(2).unwrap()))
        });
        assert!(hit);
    }
}
