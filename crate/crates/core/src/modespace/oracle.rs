//! Coefficient-wise comparison of engine brackets with mode contractions.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num::Integer;

use crate::error::{Error, Result};
use crate::genalg::GeneratorBasis;
use crate::kernel::Kernel;
use crate::report::Report;
use crate::scalar::{HalfInt, Poly, QRat, Rat, Ring};
use crate::series::{BracketResult, Expression, FactorSet};

use super::zlaurent::ZLaurent;
use super::{enumerate_monomials, Gen, ModeMonomial, Window};

/// Output monomials of the `(n, m)` coefficient of a bracket that the window
/// determines exactly.
///
/// A spectator monomial `R = R1 R2` fixes the contracted mode
/// `a = n - |R1| = -(m - |R2|)`, so `|a| <= min(|n|, |m|) + l1(R)`. Keeping
/// `l1(R) <= M - min(|n|, |m|)` keeps every contributing input mode inside
/// `[-M, M]`, and output degree `D` needs inputs of degree `D + 1` at most.
pub fn reliable_monomials(families: &[usize], n: i64, m: i64, w: &Window) -> Result<Vec<ModeMonomial>> {
    if n.abs() > w.max_mode || m.abs() > w.max_mode {
        return Err(Error::WindowExceeded(format!("output modes ({n}, {m}) need |mode| <= {}", w.max_mode)));
    }
    let budget = w.max_mode - n.abs().min(m.abs());
    Ok(enumerate_monomials(families, w.max_mode, w.max_degree, budget, n + m))
}

/// Largest monomial degree the integer coefficient paths accept; every
/// coefficient is carried times `MAX_DEGREE!`.
const MAX_DEGREE: usize = 6;
const FACT: i128 = 720;

fn too_wide(what: &str) -> Error {
    Error::WindowExceeded(format!("{what} does not fit the integer coefficient path"))
}

/// `num / (d * den)` with the denominator interned.
#[derive(Clone)]
struct ZVal {
    den: usize,
    num: ZLaurent,
    d: i128,
}

#[derive(Default)]
struct Denoms {
    ids: HashMap<Poly<Rat>, usize>,
    polys: Vec<Poly<Rat>>,
}

impl Denoms {
    fn id(&mut self, p: &Poly<Rat>) -> usize {
        if let Some(i) = self.ids.get(p) {
            return *i;
        }
        self.polys.push(p.clone());
        self.ids.insert(p.clone(), self.polys.len() - 1);
        self.polys.len() - 1
    }

    fn split(&mut self, v: &QRat) -> Result<ZVal> {
        if let Some((num, d)) = ZLaurent::from_qrat(v) {
            return Ok(ZVal { den: self.id(&Poly::one()), num, d });
        }
        let (num, d) = ZLaurent::from_poly(v.numer()).ok_or_else(|| too_wide("kernel value"))?;
        Ok(ZVal { den: self.id(v.denom()), num, d })
    }
}

/// Unreduced sum of `num / (d * den)` terms with integer numerators,
/// grouped by `(den, d)`.
#[derive(Default)]
struct ZSum {
    buckets: HashMap<(usize, i128), ZLaurent>,
}

impl ZSum {
    fn add(&mut self, v: &ZVal, mult: &ZLaurent, scale: i128) -> Result<()> {
        if mult.is_zero() || v.num.is_zero() {
            return Ok(());
        }
        let d = v.d.checked_mul(scale).ok_or_else(|| too_wide("scale"))?;
        let p = v.num.times(mult)?;
        self.buckets.entry((v.den, d)).or_default().add_assign(&p)
    }

    /// Exact numerators keyed by denominator.
    fn parts(self, denoms: &Denoms) -> HashMap<Poly<Rat>, QRat> {
        let mut out: HashMap<Poly<Rat>, QRat> = HashMap::new();
        for ((den, d), num) in self.buckets {
            if num.is_zero() {
                continue;
            }
            let slot = out.entry(denoms.polys[den].clone()).or_insert_with(QRat::zero);
            *slot = slot.plus(&num.to_qrat(d));
        }
        out
    }
}

/// Fold the groups into one fraction over the lcm of their denominators and
/// test the numerator.
fn parts_vanish(parts: HashMap<Poly<Rat>, QRat>) -> bool {
    let mut parts: Vec<(Poly<Rat>, QRat)> = parts.into_iter().filter(|(_, n)| !n.is_zero()).collect();
    match parts.len() {
        0 => return true,
        1 => return false,
        _ => {}
    }
    parts.sort_by(|x, y| x.0.degree().cmp(&y.0.degree()).then_with(|| x.0.coeffs().len().cmp(&y.0.coeffs().len())));
    let mut it = parts.into_iter();
    let (mut den, mut num) = it.next().unwrap();
    for (d, n) in it {
        let g = den.gcd(&d);
        let (a, b) = (den.exact_div(&g), d.exact_div(&g));
        num = num.times(&QRat::new(b.clone(), Poly::one())).plus(&n.times(&QRat::new(a, Poly::one())));
        den = den.times(&b);
    }
    num.is_zero()
}

fn parts_total(parts: HashMap<Poly<Rat>, QRat>) -> QRat {
    let mut acc = QRat::zero();
    for (den, num) in parts {
        acc = acc.plus(&num.times(&QRat::new(Poly::one(), den)));
    }
    acc
}

fn difference_vanishes(lhs: HashMap<Poly<Rat>, QRat>, rhs: HashMap<Poly<Rat>, QRat>) -> bool {
    let mut diff = lhs;
    for (den, num) in rhs {
        let slot = diff.entry(den).or_insert_with(QRat::zero);
        *slot = slot.minus(&num);
    }
    parts_vanish(diff)
}

/// Shared denominator for comparing sums from two contexts: the lcm of every
/// denominator seen so far and the integer cofactor of each.
struct CommonDen {
    polys: Vec<Poly<Rat>>,
    lcm: Poly<Rat>,
    cofactors: Vec<Option<(ZLaurent, i128)>>,
    local: [Vec<Option<usize>>; 2],
}

impl CommonDen {
    fn new() -> Self {
        CommonDen { polys: Vec::new(), lcm: Poly::one(), cofactors: Vec::new(), local: [Vec::new(), Vec::new()] }
    }

    fn global(&mut self, side: usize, id: usize, denoms: &Denoms) -> usize {
        if let Some(Some(g)) = self.local[side].get(id) {
            return *g;
        }
        let p = &denoms.polys[id];
        let g = match self.polys.iter().position(|x| x == p) {
            Some(g) => g,
            None => {
                self.polys.push(p.clone());
                let g = self.lcm.gcd(p);
                self.lcm = self.lcm.times(&p.exact_div(&g));
                self.cofactors = self.polys.iter().map(|x| ZLaurent::from_poly(&self.lcm.exact_div(x))).collect();
                self.polys.len() - 1
            }
        };
        let map = &mut self.local[side];
        if map.len() <= id {
            map.resize(id + 1, None);
        }
        map[id] = Some(g);
        g
    }

    /// Whether `lhs - rhs` vanishes, or `None` if the integer path overflows.
    fn difference_vanishes(&mut self, lhs: &ZSum, ld: &Denoms, rhs: &ZSum, rd: &Denoms) -> Option<bool> {
        let mut terms: Vec<(&ZLaurent, usize, i128, bool)> = Vec::new();
        for (side, sum, denoms) in [(0, lhs, ld), (1, rhs, rd)] {
            for ((den, d), num) in &sum.buckets {
                if !num.is_zero() {
                    terms.push((num, self.global(side, *den, denoms), *d, side == 1));
                }
            }
        }
        let mut scales = Vec::with_capacity(terms.len());
        let mut common = 1i128;
        for (_, g, d, _) in &terms {
            let s = d.checked_mul(self.cofactors[*g].as_ref()?.1)?;
            common = common.checked_mul(s / common.gcd(&s))?;
            scales.push(s);
        }
        let mut total = ZLaurent::zero();
        for ((num, g, _, neg), s) in terms.iter().zip(&scales) {
            let k = if *neg { -(common / s) } else { common / s };
            let cof = &self.cofactors[*g].as_ref()?.0;
            total.add_assign(&num.times(cof).ok()?.scale(k).ok()?).ok()?;
        }
        Some(total.is_zero())
    }
}

fn alpha_z(fs: &FactorSet, i: usize, m: i64) -> Result<ZLaurent> {
    let terms: Vec<(i64, i128)> =
        fs.factors().iter().filter(|f| f.family == i).map(|f| (-(f.shift.twice() as i64) * m, -(f.exponent as i128))).collect();
    ZLaurent::from_terms(&terms)
}

/// `FACT * prod alpha^k / k!` over the groups of a monomial.
fn product_z(groups: &[(Gen, usize)], mut alpha: impl FnMut(usize, i64) -> Result<ZLaurent>) -> Result<ZLaurent> {
    if groups.iter().map(|g| g.1).sum::<usize>() > MAX_DEGREE {
        return Err(too_wide("monomial degree"));
    }
    let mut val = ZLaurent::constant(FACT);
    let mut div = 1i128;
    for &((i, m), k) in groups {
        let a = alpha(i, m)?;
        if a.is_zero() {
            return Ok(ZLaurent::zero());
        }
        val = val.times(&a.pow(k as u32)?)?;
        div *= (1..=k as i128).product::<i128>();
    }
    Ok(val.div_exact(div))
}

/// Coefficient of `t` in a factor set, times `FACT`, with integer coefficients.
fn set_coefficient_z(fs: &FactorSet, t: &ModeMonomial) -> Result<ZLaurent> {
    product_z(&t.grouped(), |i, m| alpha_z(fs, i, m))
}

/// Coefficients of an expression times `scale * FACT`.
struct ZExpansion {
    terms: Vec<(ZLaurent, FactorSet)>,
    scale: i128,
    families: Vec<usize>,
    cache: HashMap<ModeMonomial, ZLaurent>,
}

impl ZExpansion {
    fn new(e: &Expression) -> Result<Self> {
        let mut raw = Vec::new();
        let mut scale = 1i128;
        for (f, c) in e.terms() {
            let (z, d) = ZLaurent::from_qrat(c).ok_or_else(|| Error::UnsupportedType(format!("scalar {c} is not a Laurent polynomial")))?;
            scale = scale.lcm(&d);
            raw.push((z, d, f.clone()));
        }
        let terms = raw.into_iter().map(|(z, d, f)| Ok((z.scale(scale / d)?, f))).collect::<Result<Vec<_>>>()?;
        let mut families: Vec<usize> = e.terms().flat_map(|(f, _)| f.factors().iter().map(|x| x.family)).collect();
        families.sort_unstable();
        families.dedup();
        Ok(ZExpansion { terms, scale, families, cache: HashMap::new() })
    }

    fn coefficient(&mut self, t: &ModeMonomial) -> Result<ZLaurent> {
        if let Some(v) = self.cache.get(t) {
            return Ok(v.clone());
        }
        let mut acc = ZLaurent::zero();
        for (c, fs) in &self.terms {
            let v = set_coefficient_z(fs, t)?;
            if !v.is_zero() {
                acc.add_assign(&c.times(&v)?)?;
            }
        }
        self.cache.insert(t.clone(), acc.clone());
        Ok(acc)
    }
}

/// Mode-contraction side: `{E1_n, E2_m}` one output monomial at a time.
pub struct OracleContext<'a> {
    basis: &'a GeneratorBasis,
    e1: ZExpansion,
    e2: ZExpansion,
    kernels: HashMap<(usize, usize, i64), ZVal>,
    denoms: Denoms,
}

impl<'a> OracleContext<'a> {
    pub fn new(e1: &Expression, e2: &Expression, basis: &'a GeneratorBasis) -> Result<Self> {
        e1.check_basis(basis)?;
        e2.check_basis(basis)?;
        Ok(OracleContext {
            basis,
            e1: ZExpansion::new(e1)?,
            e2: ZExpansion::new(e2)?,
            kernels: HashMap::new(),
            denoms: Denoms::default(),
        })
    }

    pub fn families(&self) -> Vec<usize> {
        let mut f: Vec<usize> = self.e1.families.iter().chain(&self.e2.families).copied().collect();
        f.sort_unstable();
        f.dedup();
        f
    }

    fn kernel(&mut self, i: usize, j: usize, a: i64) -> Result<ZVal> {
        if let Some(v) = self.kernels.get(&(i, j, a)) {
            return Ok(v.clone());
        }
        let v = self.denoms.split(&self.basis.kernel(i, j).eval(a)?)?;
        self.kernels.insert((i, j, a), v.clone());
        Ok(v)
    }

    /// Coefficient of `r` in `{E1_n, E2_m}`, normalized units.
    pub fn coefficient(&mut self, n: i64, m: i64, r: &ModeMonomial, w: &Window) -> Result<QRat> {
        Ok(parts_total(self.coefficient_sum(n, m, r, w)?.parts(&self.denoms)))
    }

    fn coefficient_sum(&mut self, n: i64, m: i64, r: &ModeMonomial, w: &Window) -> Result<ZSum> {
        let mut acc = ZSum::default();
        if r.total_mode() != n + m {
            return Ok(acc);
        }
        let scale = self.e1.scale.checked_mul(self.e2.scale).and_then(|s| s.checked_mul(FACT * FACT)).ok_or_else(|| too_wide("scale"))?;
        let f1 = self.e1.families.clone();
        let f2 = self.e2.families.clone();
        for (r1, r2) in r.splits() {
            let a = n - r1.total_mode();
            if a.abs() > w.max_mode {
                return Err(Error::WindowExceeded(format!("contraction mode {a} for output {r}")));
            }
            for &i in &f1 {
                let c1 = self.e1.coefficient(&r1.with((i, a)))?;
                if c1.is_zero() {
                    continue;
                }
                let c1 = c1.scale(r1.count((i, a)) as i128 + 1)?;
                for &j in &f2 {
                    let c2 = self.e2.coefficient(&r2.with((j, -a)))?;
                    if c2.is_zero() {
                        continue;
                    }
                    let c2 = c2.scale(r2.count((j, -a)) as i128 + 1)?;
                    let k = self.kernel(i, j, a)?;
                    acc.add(&k, &c1.times(&c2)?, scale)?;
                }
            }
        }
        Ok(acc)
    }
}

/// Kernel-engine side: coefficients of `z^{-n} w^{-m}` of a bracket result.
pub struct EngineExpansion {
    sets: Vec<FactorSet>,
    smooth: Vec<(usize, usize, Kernel)>,
    deltas: Vec<(FactorSet, Vec<(HalfInt, QRat)>)>,
    coeffs: HashMap<ModeMonomial, Rc<Vec<ZLaurent>>>,
    values: HashMap<(usize, i64), ZVal>,
    delta_values: HashMap<(usize, i64), ZVal>,
    delta_alphas: HashMap<(usize, usize, i64), ZLaurent>,
    denoms: Denoms,
}

impl EngineExpansion {
    pub fn new(br: &BracketResult) -> Self {
        let mut sets: Vec<FactorSet> = Vec::new();
        let mut index = |f: &FactorSet| -> usize {
            match sets.iter().position(|g| g == f) {
                Some(i) => i,
                None => {
                    sets.push(f.clone());
                    sets.len() - 1
                }
            }
        };
        let smooth: Vec<(usize, usize, Kernel)> = br.smooth_terms().map(|(k, v)| (index(&k.z), index(&k.w), v.clone())).collect();
        let mut grouped: BTreeMap<&FactorSet, Vec<(HalfInt, QRat)>> = BTreeMap::new();
        for ((s, f), c) in &br.deltas {
            grouped.entry(f).or_default().push((*s, c.clone()));
        }
        EngineExpansion {
            sets,
            smooth,
            deltas: grouped.into_iter().map(|(f, v)| (f.clone(), v)).collect(),
            coeffs: HashMap::new(),
            values: HashMap::new(),
            delta_values: HashMap::new(),
            delta_alphas: HashMap::new(),
            denoms: Denoms::default(),
        }
    }

    /// Coefficient of `t` in every factor set.
    fn row(&mut self, t: &ModeMonomial) -> Result<Rc<Vec<ZLaurent>>> {
        if let Some(row) = self.coeffs.get(t) {
            return Ok(row.clone());
        }
        let row = Rc::new(self.sets.iter().map(|f| set_coefficient_z(f, t)).collect::<Result<Vec<_>>>()?);
        self.coeffs.insert(t.clone(), row.clone());
        Ok(row)
    }

    fn value(&mut self, term: usize, k: i64) -> Result<ZVal> {
        if let Some(v) = self.values.get(&(term, k)) {
            return Ok(v.clone());
        }
        let v = self.denoms.split(&self.smooth[term].2.eval(k)?)?;
        self.values.insert((term, k), v.clone());
        Ok(v)
    }

    /// `sum_s c_s q^{s m}` over the deltas sharing one factor set.
    fn delta_value(&mut self, group: usize, m: i64) -> Result<ZVal> {
        if let Some(v) = self.delta_values.get(&(group, m)) {
            return Ok(v.clone());
        }
        let mut c = QRat::zero();
        for (s, x) in &self.deltas[group].1 {
            c = c.plus(&x.times(&QRat::b_pow(s.twice() as i64 * m)));
        }
        let v = self.denoms.split(&c)?;
        self.delta_values.insert((group, m), v.clone());
        Ok(v)
    }

    /// Smooth part: `sum_k K(B^k) [Z]_a [W]_b` with `k = n - a`; a delta
    /// `c delta(w/(z q^s)) N(z)` contributes `c q^{s m} [N]_{n+m}`.
    pub fn coefficient(&mut self, n: i64, m: i64, r: &ModeMonomial) -> Result<QRat> {
        Ok(parts_total(self.coefficient_sum(n, m, r)?.parts(&self.denoms)))
    }

    fn coefficient_sum(&mut self, n: i64, m: i64, r: &ModeMonomial) -> Result<ZSum> {
        let mut acc = ZSum::default();
        if r.total_mode() != n + m {
            return Ok(acc);
        }
        for (r1, r2) in r.splits() {
            let (row1, row2) = (self.row(&r1)?, self.row(&r2)?);
            let k = n - r1.total_mode();
            for term in 0..self.smooth.len() {
                let (cz, cw) = (&row1[self.smooth[term].0], &row2[self.smooth[term].1]);
                if cz.is_zero() || cw.is_zero() {
                    continue;
                }
                let v = self.value(term, k)?;
                acc.add(&v, &cz.times(cw)?, FACT * FACT)?;
            }
        }
        let groups = r.grouped();
        for g in 0..self.deltas.len() {
            let (deltas, alphas) = (&self.deltas, &mut self.delta_alphas);
            let cn = product_z(&groups, |i, m| match alphas.get(&(g, i, m)) {
                Some(a) => Ok(a.clone()),
                None => {
                    let a = alpha_z(&deltas[g].0, i, m)?;
                    alphas.insert((g, i, m), a.clone());
                    Ok(a)
                }
            })?;
            if cn.is_zero() {
                continue;
            }
            let v = self.delta_value(g, m)?;
            acc.add(&v, &cn, FACT)?;
        }
        Ok(acc)
    }
}

/// Convenience wrapper around [`EngineExpansion::coefficient`].
pub fn engine_coefficient(br: &BracketResult, n: i64, m: i64, r: &ModeMonomial) -> Result<QRat> {
    EngineExpansion::new(br).coefficient(n, m, r)
}

/// Compare every `(n, m)` coefficient of `br` with the mode-space bracket of
/// the corresponding coefficients of `e1` and `e2`, for `|n|, |m| <= N_out`.
pub fn oracle_check_bracket(
    e1: &Expression,
    e2: &Expression,
    br: &BracketResult,
    basis: &GeneratorBasis,
    w: &Window,
) -> Result<Report> {
    let mut report = Report::new("ORACLE", "");
    oracle_check_into(&mut report, "", e1, e2, br, basis, w)?;
    Ok(report)
}

pub(crate) fn oracle_check_into(
    report: &mut Report,
    prefix: &str,
    e1: &Expression,
    e2: &Expression,
    br: &BracketResult,
    basis: &GeneratorBasis,
    w: &Window,
) -> Result<()> {
    let mut oracle = OracleContext::new(e1, e2, basis)?;
    let mut engine = EngineExpansion::new(br);
    let fams = oracle.families();
    let mut common = CommonDen::new();
    let mut checked = 0usize;
    let mut first: Option<(i64, i64, ModeMonomial, QRat, QRat)> = None;
    'outer: for n in -w.n_out..=w.n_out {
        for m in -w.n_out..=w.n_out {
            for r in reliable_monomials(&fams, n, m, w)? {
                let lhs = engine.coefficient_sum(n, m, &r)?;
                let rhs = oracle.coefficient_sum(n, m, &r, w)?;
                checked += 1;
                let same = match common.difference_vanishes(&lhs, &engine.denoms, &rhs, &oracle.denoms) {
                    Some(v) => v,
                    None => difference_vanishes(lhs.parts(&engine.denoms), rhs.parts(&oracle.denoms)),
                };
                if !same {
                    let (lhs, rhs) = (engine.coefficient(n, m, &r)?, oracle.coefficient(n, m, &r, w)?);
                    first = Some((n, m, r, lhs, rhs));
                    break 'outer;
                }
            }
        }
    }
    let label = format!("{prefix}{w}").trim().to_string();
    match first {
        None => report.check(label, true, format!("{checked} coefficients"), format!("{checked} coefficients")),
        Some((n, m, r, lhs, rhs)) => report.check(
            label,
            false,
            format!("engine ({n},{m}) {r}: {lhs}"),
            format!("oracle ({n},{m}) {r}: {rhs}"),
        ),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanType;
    use crate::series::poisson_bracket;
    use crate::walg::{build_preset, finalpb_reference, sl2_sigma};

    #[test]
    fn finalpb_agrees_with_modes() {
        let p = build_preset(CartanType::A, 1).unwrap();
        let s = sl2_sigma(&p).unwrap();
        let br = finalpb_reference(&p).unwrap();
        let r = oracle_check_bracket(&s, &s, &br, &p.basis, &Window::default()).unwrap();
        assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn mutated_delta_is_caught() {
        let p = build_preset(CartanType::A, 1).unwrap();
        let s = sl2_sigma(&p).unwrap();
        let mut br = poisson_bracket(&s, &s, &p.basis).unwrap();
        let key = br.deltas.keys().next().unwrap().clone();
        let c = br.deltas[&key].plus(&QRat::one());
        br.deltas.insert(key, c);
        let r = oracle_check_bracket(&s, &s, &br, &p.basis, &Window::new(4, 2, 1)).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn window_is_enforced() {
        let w = Window::new(2, 2, 3);
        assert!(matches!(reliable_monomials(&[0], 3, 0, &w), Err(Error::WindowExceeded(_))));
        let all = reliable_monomials(&[0], 1, -1, &Window::new(3, 2, 1)).unwrap();
        assert!(all.iter().all(|r| r.total_mode() == 0 && r.l1() <= 2));
    }
}
