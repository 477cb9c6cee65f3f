//! JSON shapes for brackets and series. Scalars are Laurent or rational
//! functions in `B = q^(1/2)`, written as `[exponent, "rational"]` pairs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::scalar::{fmt_rat, parse_rat, HalfInt, Poly, QRat, Rat, Ring};
use crate::series::{BracketResult, Expression, FactorSet, JointKey, ShiftedFactor};

fn bad(what: &str) -> Error {
    Error::IndexError(format!("malformed JSON {what}"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QRatJson {
    pub num: Vec<(i64, String)>,
    pub den: Vec<(i64, String)>,
}

fn poly_terms(p: &Poly<Rat>) -> Vec<(i64, String)> {
    p.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as i64, fmt_rat(c))).collect()
}

fn poly_from_terms(terms: &[(i64, String)]) -> Result<Poly<Rat>> {
    let mut out = Poly::zero();
    for (e, r) in terms {
        let e = usize::try_from(*e).map_err(|_| bad("exponent"))?;
        out = out.plus(&Poly::monomial(parse_rat(r).ok_or_else(|| bad("rational"))?, e));
    }
    Ok(out)
}

impl From<&QRat> for QRatJson {
    fn from(q: &QRat) -> Self {
        QRatJson { num: poly_terms(q.numer()), den: poly_terms(q.denom()) }
    }
}

impl QRatJson {
    pub fn to_qrat(&self) -> Result<QRat> {
        let den = poly_from_terms(&self.den)?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(QRat::new(poly_from_terms(&self.num)?, den))
    }
}

/// `num_coeffs[k]` and `den_coeffs[k]` multiply `u^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelJson {
    pub num_coeffs: Vec<QRatJson>,
    pub den_coeffs: Vec<QRatJson>,
}

impl From<&Kernel> for KernelJson {
    fn from(k: &Kernel) -> Self {
        KernelJson {
            num_coeffs: k.numer().coeffs().iter().map(QRatJson::from).collect(),
            den_coeffs: k.denom().coeffs().iter().map(QRatJson::from).collect(),
        }
    }
}

impl KernelJson {
    pub fn to_kernel(&self) -> Result<Kernel> {
        let conv = |v: &[QRatJson]| -> Result<Poly<QRat>> { Ok(Poly::from_coeffs(v.iter().map(|c| c.to_qrat()).collect::<Result<_>>()?)) };
        let den = conv(&self.den_coeffs)?;
        if den.is_zero() {
            return Err(bad("zero kernel denominator"));
        }
        Ok(Kernel::from_parts(conv(&self.num_coeffs)?, den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub family: usize,
    pub shift_twice: i32,
    pub exponent: i32,
}

fn factors_json(f: &FactorSet) -> Vec<FactorJson> {
    f.factors().iter().map(|x| FactorJson { family: x.family, shift_twice: x.shift.twice(), exponent: x.exponent }).collect()
}

fn factors_from(v: &[FactorJson]) -> FactorSet {
    FactorSet::new(v.iter().map(|x| ShiftedFactor { family: x.family, shift: HalfInt::from_twice(x.shift_twice), exponent: x.exponent }).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothJson {
    pub z: Vec<FactorJson>,
    pub w: Vec<FactorJson>,
    pub kernel: KernelJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaJson {
    pub shift_twice: i32,
    pub factors: Vec<FactorJson>,
    pub coeff: QRatJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketJson {
    pub smooth: Vec<SmoothJson>,
    pub deltas: Vec<DeltaJson>,
}

impl BracketJson {
    pub fn new(b: &BracketResult, pattern: &dyn Fn(&Kernel) -> Option<String>) -> Self {
        BracketJson {
            smooth: b
                .smooth
                .iter()
                .map(|(key, k)| SmoothJson { z: factors_json(&key.z), w: factors_json(&key.w), kernel: k.into(), pattern: pattern(k) })
                .collect(),
            deltas: b
                .deltas
                .iter()
                .map(|((s, f), c)| DeltaJson { shift_twice: s.twice(), factors: factors_json(f), coeff: c.into() })
                .collect(),
        }
    }

    pub fn to_bracket(&self) -> Result<BracketResult> {
        let mut smooth = BTreeMap::new();
        for s in &self.smooth {
            smooth.insert(JointKey { z: factors_from(&s.z), w: factors_from(&s.w) }, s.kernel.to_kernel()?);
        }
        let mut deltas = BTreeMap::new();
        for d in &self.deltas {
            deltas.insert((HalfInt::from_twice(d.shift_twice), factors_from(&d.factors)), d.coeff.to_qrat()?);
        }
        Ok(BracketResult { smooth, deltas })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: QRatJson,
    pub factors: Vec<FactorJson>,
}

pub fn expression_json(e: &Expression) -> Vec<TermJson> {
    e.terms().map(|(f, c)| TermJson { coeff: c.into(), factors: factors_json(f) }).collect()
}
