//! Poisson algebra on individual generator modes.
//!
//! Generating series are expanded coefficient by coefficient inside a
//! [`Window`], and brackets are computed by contracting pairs of modes. This
//! is an independent second path to the results of [`crate::series`]; it
//! also carries the `h -> 0` limits.

mod limits;
mod oracle;
mod registry;
mod zlaurent;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::genalg::GeneratorBasis;
use crate::scalar::{hseries_of, rat_int, HSeries, QRat, Rat, Ring};
use crate::series::{Expression, FactorSet, ShiftedFactor};

pub use limits::{classical_limit_report, comp_report, dual_limit_report, miura_limit_report};
pub use oracle::{engine_coefficient, oracle_check_bracket, reliable_monomials, EngineExpansion, OracleContext};
pub use registry::{modespace_ids, verify_modespace, verify_modespace_with};

/// A generator mode `g_family[mode]`.
pub type Gen = (usize, i64);

/// A multiset of generator modes, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeMonomial(Vec<Gen>);

impl ModeMonomial {
    pub fn one() -> Self {
        ModeMonomial(Vec::new())
    }

    pub fn new(mut gens: Vec<Gen>) -> Self {
        gens.sort_unstable();
        ModeMonomial(gens)
    }

    pub fn gens(&self) -> &[Gen] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_mode(&self) -> i64 {
        self.0.iter().map(|g| g.1).sum()
    }

    pub fn l1(&self) -> i64 {
        self.0.iter().map(|g| g.1.abs()).sum()
    }

    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|g| g.1.abs()).max().unwrap_or(0)
    }

    pub fn count(&self, g: Gen) -> usize {
        self.0.iter().filter(|x| **x == g).count()
    }

    pub fn with(&self, g: Gen) -> Self {
        let pos = self.0.partition_point(|x| *x < g);
        let mut v = self.0.clone();
        v.insert(pos, g);
        ModeMonomial(v)
    }

    pub fn without(&self, g: Gen) -> Option<Self> {
        let pos = self.0.iter().position(|x| *x == g)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(ModeMonomial(v))
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Self::new(v)
    }

    /// Distinct generators with multiplicities.
    pub fn grouped(&self) -> Vec<(Gen, usize)> {
        let mut out: Vec<(Gen, usize)> = Vec::new();
        for g in &self.0 {
            match out.last_mut() {
                Some((h, k)) if h == g => *k += 1,
                _ => out.push((*g, 1)),
            }
        }
        out
    }

    /// Every way of writing the monomial as a product of two, each distinct
    /// pair listed once.
    pub fn splits(&self) -> Vec<(ModeMonomial, ModeMonomial)> {
        let groups = self.grouped();
        let mut out = vec![(Vec::new(), Vec::new())];
        for (g, k) in groups {
            let mut next = Vec::with_capacity(out.len() * (k + 1));
            for (a, b) in &out {
                for take in 0..=k {
                    let mut a: Vec<Gen> = a.clone();
                    let mut b: Vec<Gen> = b.clone();
                    a.extend(std::iter::repeat_n(g, take));
                    b.extend(std::iter::repeat_n(g, k - take));
                    next.push((a, b));
                }
            }
            out = next;
        }
        out.into_iter().map(|(a, b)| (ModeMonomial(a), ModeMonomial(b))).collect()
    }

    pub fn render(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.grouped()
            .iter()
            .map(|((i, m), k)| if *k == 1 { format!("{}[{m}]", name(*i)) } else { format!("{}[{m}]^{k}", name(*i)) })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for ModeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|i| format!("g{}", i + 1)))
    }
}

/// A polynomial in generator modes with coefficients in `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModePoly<S: Ring> {
    terms: BTreeMap<ModeMonomial, S>,
}

impl<S: Ring> Default for ModePoly<S> {
    fn default() -> Self {
        ModePoly { terms: BTreeMap::new() }
    }
}

impl<S: Ring> ModePoly<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(ModeMonomial::one(), c);
        p
    }

    pub fn generator(family: usize, mode: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(ModeMonomial(vec![(family, mode)]), S::one());
        p
    }

    pub fn add_term(&mut self, m: ModeMonomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = old.plus(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ModeMonomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &ModeMonomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
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

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn negated(&self) -> Self {
        ModePoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.negated())).collect() }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.times(s));
        }
        out
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(m2), c1.times(c2));
            }
        }
        out
    }

    /// Keep the terms whose monomial satisfies `keep`.
    pub fn filtered(&self, keep: impl Fn(&ModeMonomial) -> bool) -> Self {
        ModePoly { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn try_map<T: Ring>(&self, f: impl Fn(&ModeMonomial, &S) -> Result<T>) -> Result<ModePoly<T>> {
        let mut out = ModePoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(m, c)?);
        }
        Ok(out)
    }
}

impl<S: Ring + fmt::Display> fmt::Display for ModePoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}) {m}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl ModePoly<QRat> {
    /// Rescale `g = h chi` and expand in `h`: the coefficient of a degree-d
    /// monomial picks up `h^d`.
    pub fn to_chi_series(&self, order: usize) -> Result<ModePoly<HSeries>> {
        self.try_map(|m, c| Ok(hseries_of(c, order)?.times(&HSeries::h(order).pow(m.degree() as u32))))
    }
}

/// Leibniz bracket with `{g_i[a], g_j[b]} = structure(i, j, a)` when
/// `a + b = 0` and zero otherwise.
pub fn mode_bracket_with<S: Ring>(
    p1: &ModePoly<S>,
    p2: &ModePoly<S>,
    structure: &mut dyn FnMut(usize, usize, i64) -> Result<S>,
) -> Result<ModePoly<S>> {
    let mut out = ModePoly::zero();
    for (t1, c1) in p1.terms() {
        for ((i, a), k1) in t1.grouped() {
            let rest1 = t1.without((i, a)).unwrap();
            for (t2, c2) in p2.terms() {
                for ((j, b), k2) in t2.grouped() {
                    if a + b != 0 {
                        continue;
                    }
                    let s = structure(i, j, a)?;
                    if s.is_zero() {
                        continue;
                    }
                    let rest2 = t2.without((j, b)).unwrap();
                    let c = c1.times(c2).times(&s).times(&S::from_i64((k1 * k2) as i64));
                    out.add_term(rest1.times(&rest2), c);
                }
            }
        }
    }
    Ok(out)
}

fn check_families<S: Ring>(p: &ModePoly<S>, basis: &GeneratorBasis) -> Result<()> {
    for (m, _) in p.terms() {
        for g in m.gens() {
            if g.0 >= basis.size() {
                return Err(Error::BasisMismatch { family: g.0, size: basis.size() });
            }
        }
    }
    Ok(())
}

/// Bracket in normalized units: `{g_i[n], g_j[-n]} = K_ij(q^{n/2})`.
pub fn mode_bracket(p1: &ModePoly<QRat>, p2: &ModePoly<QRat>, basis: &GeneratorBasis) -> Result<ModePoly<QRat>> {
    check_families(p1, basis)?;
    check_families(p2, basis)?;
    let mut cache: HashMap<(usize, usize, i64), QRat> = HashMap::new();
    mode_bracket_with(p1, p2, &mut |i, j, n| {
        if let Some(v) = cache.get(&(i, j, n)) {
            return Ok(v.clone());
        }
        let v = basis.kernel(i, j).eval(n)?;
        cache.insert((i, j, n), v.clone());
        Ok(v)
    })
}

/// Bracket of the rescaled modes `chi = g / h` with the `2h` restored:
/// `{chi_i[n], chi_j[-n]} = 2 K_ij(q^{n/2}) / h`, expanded to `order`.
pub fn chi_bracket(
    p1: &ModePoly<HSeries>,
    p2: &ModePoly<HSeries>,
    basis: &GeneratorBasis,
    order: usize,
) -> Result<ModePoly<HSeries>> {
    check_families(p1, basis)?;
    check_families(p2, basis)?;
    mode_bracket_with(p1, p2, &mut |i, j, n| {
        let k = hseries_of(&basis.kernel(i, j).eval(n)?, order + 1)?;
        Ok(k.div_h_pow(1)?.scale(&rat_int(2)))
    })
}

/// Truncation window for mode expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub max_mode: i64,
    pub max_degree: usize,
    pub n_out: i64,
}

impl Default for Window {
    fn default() -> Self {
        Window { max_mode: 6, max_degree: 3, n_out: 2 }
    }
}

impl Window {
    pub fn new(max_mode: i64, max_degree: usize, n_out: i64) -> Self {
        Window { max_mode, max_degree, n_out }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M={} D={} N_out={}", self.max_mode, self.max_degree, self.n_out)
    }
}

/// All monomials in the given families with modes in `[-max_mode, max_mode]`,
/// degree at most `max_degree`, l1 norm at most `max_l1` and total mode
/// `total`.
pub fn enumerate_monomials(families: &[usize], max_mode: i64, max_degree: usize, max_l1: i64, total: i64) -> Vec<ModeMonomial> {
    let gens: Vec<Gen> = families.iter().flat_map(|&i| (-max_mode..=max_mode).map(move |m| (i, m))).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        gens: &[Gen],
        start: usize,
        left: usize,
        l1_left: i64,
        sum: i64,
        total: i64,
        cur: &mut Vec<Gen>,
        out: &mut Vec<ModeMonomial>,
    ) {
        if (total - sum).abs() > l1_left {
            return;
        }
        if sum == total {
            out.push(ModeMonomial::new(cur.clone()));
        }
        if left == 0 {
            return;
        }
        for k in start..gens.len() {
            let g = gens[k];
            if g.1.abs() > l1_left {
                continue;
            }
            cur.push(g);
            rec(gens, k, left - 1, l1_left - g.1.abs(), sum + g.1, total, cur, out);
            cur.pop();
        }
    }
    rec(&gens, 0, max_degree, max_l1, 0, total, &mut cur, &mut out);
    out.sort();
    out
}

/// Coefficient of a single mode monomial `T` in the `z^{-|T|}` coefficient
/// of a product of exponential factors: `prod (-alpha)^k / k!` with
/// `alpha_i(m) = sum_f e_f q^{-c_f m}` over the factors of family i.
pub fn factor_set_coefficient(fs: &FactorSet, t: &ModeMonomial) -> QRat {
    factors_coefficient(fs.factors(), t)
}

fn factors_coefficient(fs: &[ShiftedFactor], t: &ModeMonomial) -> QRat {
    let mut val = QRat::one();
    for ((i, m), k) in t.grouped() {
        let terms: Vec<(i64, Rat)> = fs
            .iter()
            .filter(|f| f.family == i)
            .map(|f| (-(f.shift.twice() as i64) * m, -rat_int(f.exponent as i64)))
            .collect();
        let alpha = QRat::laurent(&terms);
        if alpha.is_zero() {
            return QRat::zero();
        }
        let fact: i64 = (1..=k as i64).product();
        val = val.times(&alpha.pow(k as u32)).times(&QRat::from_rat(Rat::new(1.into(), fact.into())));
    }
    val
}

/// Caching coefficient extractor for an expression.
pub struct SeriesExpansion {
    terms: Vec<(QRat, FactorSet)>,
    families: Vec<usize>,
    cache: HashMap<ModeMonomial, QRat>,
}

impl SeriesExpansion {
    pub fn new(e: &Expression) -> Self {
        let terms: Vec<(QRat, FactorSet)> = e.terms().map(|(f, c)| (c.clone(), f.clone())).collect();
        let mut families: Vec<usize> = terms.iter().flat_map(|(_, f)| f.factors().iter().map(|x| x.family)).collect();
        families.sort_unstable();
        families.dedup();
        SeriesExpansion { terms, families, cache: HashMap::new() }
    }

    pub fn families(&self) -> &[usize] {
        &self.families
    }

    /// Coefficient of `t` in the `z^{-|t|}` coefficient of the expression.
    pub fn coefficient(&mut self, t: &ModeMonomial) -> QRat {
        if let Some(v) = self.cache.get(t) {
            return v.clone();
        }
        let mut acc = QRat::zero();
        for (c, fs) in &self.terms {
            let v = factor_set_coefficient(fs, t);
            if !v.is_zero() {
                acc = acc.plus(&c.times(&v));
            }
        }
        self.cache.insert(t.clone(), acc.clone());
        acc
    }
}

/// The `z^{-n}` coefficient of `e`, truncated to the window.
pub fn series_coefficient(e: &Expression, n: i64, w: &Window) -> Result<ModePoly<QRat>> {
    if n.abs() > w.max_mode {
        return Err(Error::WindowExceeded(format!("mode {n} outside |mode| <= {}", w.max_mode)));
    }
    let mut x = SeriesExpansion::new(e);
    let fams = x.families().to_vec();
    let mut out = ModePoly::zero();
    let budget = w.max_mode * w.max_degree as i64;
    for t in enumerate_monomials(&fams, w.max_mode, w.max_degree, budget, n) {
        let c = x.coefficient(&t);
        out.add_term(t, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanType;
    use crate::scalar::qint;
    use crate::walg::{build_preset, sl2_sigma};

    fn sl2() -> (crate::walg::WPreset, Expression) {
        let p = build_preset(CartanType::A, 1).unwrap();
        let s = sl2_sigma(&p).unwrap();
        (p, s)
    }

    #[test]
    fn lambda_modes_bracket() {
        let (p, _) = sl2();
        for n in 1..=5i64 {
            let b = mode_bracket(&ModePoly::generator(0, n), &ModePoly::generator(0, -n), &p.basis).unwrap();
            let want = crate::scalar::q_minus_qinv().times(&qint(n).pow(2)).divided(&qint(2 * n));
            assert_eq!(b, ModePoly::constant(want));
            let z = mode_bracket(&ModePoly::generator(0, n), &ModePoly::generator(0, 1 - n), &p.basis).unwrap();
            assert!(z.is_zero());
        }
    }

    use crate::scalar::Field;

    #[test]
    fn sigma_first_order_part() {
        let (_, s) = sl2();
        let w = Window::new(4, 2, 2);
        for n in -3..=3i64 {
            let c = series_coefficient(&s, n, &w).unwrap();
            let lin = c.coeff(&ModeMonomial::new(vec![(0, n)]));
            assert_eq!(lin, QRat::q_pow(n + 1).minus(&QRat::q_pow(-n - 1)), "n={n}");
        }
        let c0 = series_coefficient(&s, 0, &w).unwrap();
        assert_eq!(c0.coeff(&ModeMonomial::one()), QRat::q_pow(1).plus(&QRat::q_pow(-1)));
    }

    #[test]
    fn sigma_top_is_one_in_window() {
        for rank in 1..=3 {
            let p = build_preset(CartanType::A, rank).unwrap();
            let top = p.sigma_a(rank + 1).unwrap();
            let w = Window::new(3, 3, 2);
            for n in -2..=2 {
                let c = series_coefficient(&top, n, &w).unwrap();
                let want = if n == 0 { ModePoly::constant(QRat::one()) } else { ModePoly::zero() };
                assert_eq!(c, want);
            }
            // the product of the Lambda's is one even though each factor is not
            let sig = p.sigma_a(1).unwrap();
            assert!(!series_coefficient(&sig, 1, &w).unwrap().is_zero());
        }
    }

    #[test]
    fn splits_and_enumeration() {
        let m = ModeMonomial::new(vec![(0, 1), (0, 1), (1, -2)]);
        assert_eq!(m.splits().len(), 6);
        let all = enumerate_monomials(&[0], 2, 2, 4, 0);
        // 1, g[0], g[0]^2, g[-1]g[1], g[-2]g[2]
        assert_eq!(all.len(), 5);
        assert!(series_coefficient(&Expression::one(), 7, &Window::default()).is_err());
    }

    #[test]
    fn chi_rescaling_matches_pb() {
        let (p, _) = sl2();
        for n in 1..=4i64 {
            let a = ModePoly::<HSeries>::generator(0, n);
            let b = ModePoly::<HSeries>::generator(0, -n);
            let r = chi_bracket(&a, &b, &p.basis, 4).unwrap();
            let c = r.coeff(&ModeMonomial::one());
            assert_eq!(c.coeff(0), Some(rat_int(2 * n)));
        }
    }
}
