//! The R-matrix of `U_q(sl2^)` on two evaluation modules, as truncated
//! series in the spectral parameter.
//!
//! `R(x) = f(x) R0(x)` where `R0` has the rational six-vertex entries. The
//! scalar `f(x)` is what makes the crossing relation hold; other common
//! normalizations drop it.

use std::fmt;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::{f_series, Field, HalfInt, QRat, Ring, XSeries};

/// Square matrix of x-series, all truncated at the same order. The 4x4 case
/// uses the basis `e1e1, e1e2, e2e1, e2e2`.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrixSeries {
    size: usize,
    order: usize,
    entries: Vec<XSeries>,
}

impl RMatrixSeries {
    pub fn from_fn(size: usize, order: usize, mut f: impl FnMut(usize, usize) -> XSeries) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(f(i, j).truncate(order));
            }
        }
        RMatrixSeries { size, order, entries }
    }

    pub fn identity(size: usize, order: usize) -> Self {
        Self::from_fn(size, order, |i, j| if i == j { XSeries::one(order) } else { XSeries::zero(order) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Zero-based entry.
    pub fn entry(&self, i: usize, j: usize) -> &XSeries {
        &self.entries[i * self.size + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: XSeries) {
        self.entries[i * self.size + j] = v.truncate(self.order);
    }

    pub fn times(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        Self::from_fn(self.size, order, |i, j| {
            let mut acc = XSeries::zero(order);
            for k in 0..self.size {
                let (a, b) = (self.entry(i, k), o.entry(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.plus(&a.times(b));
                }
            }
            acc
        })
    }

    /// Coefficient matrix of `x^k`.
    fn layer(&self, k: usize) -> Vec<Vec<QRat>> {
        (0..self.size).map(|i| (0..self.size).map(|j| self.entry(i, j).coeff(k).clone()).collect()).collect()
    }

    /// Order-by-order inverse: `N_0 = M_0^-1`, `N_k = -N_0 sum_{j>=1} M_j N_{k-j}`.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.size;
        let n0 = invert(self.layer(0)).ok_or(Error::NonInvertibleConstantTerm)?;
        let layers: Vec<Vec<Vec<QRat>>> = (0..=self.order).map(|k| self.layer(k)).collect();
        let mut out: Vec<Vec<Vec<QRat>>> = vec![n0.clone()];
        for k in 1..=self.order {
            let mut s = vec![vec![QRat::zero(); n]; n];
            for j in 1..=k {
                add_product(&mut s, &layers[j], &out[k - j]);
            }
            let mut nk = vec![vec![QRat::zero(); n]; n];
            add_product(&mut nk, &n0, &s);
            out.push(nk.into_iter().map(|row| row.into_iter().map(|c| c.negated()).collect()).collect());
        }
        Ok(Self::from_fn(n, self.order, |i, j| XSeries::new(out.iter().map(|l| l[i][j].clone()).collect(), self.order)))
    }

    /// Transpose in the first tensor factor of `C^2 (x) C^2`.
    pub fn transpose_first(&self) -> Self {
        assert_eq!(self.size, 4, "partial transpose needs a 4x4 matrix");
        Self::from_fn(4, self.order, |i, j| {
            let (i1, i2, j1, j2) = (i / 2, i % 2, j / 2, j % 2);
            self.entry(2 * j1 + i2, 2 * i1 + j2).clone()
        })
    }

    /// Substitute `x -> x q^c` in every entry.
    pub fn rescale_x(&self, c: HalfInt) -> Self {
        Self::from_fn(self.size, self.order, |i, j| self.entry(i, j).rescale_x(c))
    }

    /// `diag(d) M diag(e)`.
    pub fn conjugated(&self, d: &[QRat], e: &[QRat]) -> Self {
        Self::from_fn(self.size, self.order, |i, j| self.entry(i, j).scale(&d[i].times(&e[j])))
    }

    pub fn scaled(&self, s: &XSeries) -> Self {
        Self::from_fn(self.size, self.order, |i, j| self.entry(i, j).times(s))
    }

    /// First mismatching entry against `o`, one-based.
    pub fn first_difference(&self, o: &Self) -> Option<(usize, usize)> {
        for i in 0..self.size {
            for j in 0..self.size {
                if self.entry(i, j).truncate(o.order) != o.entry(i, j).truncate(self.order) {
                    return Some((i + 1, j + 1));
                }
            }
        }
        None
    }
}

impl fmt::Display for RMatrixSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            for j in 0..self.size {
                let e = self.entry(i, j);
                if !e.is_zero() {
                    writeln!(f, "({},{}) {e}", i + 1, j + 1)?;
                }
            }
        }
        Ok(())
    }
}

fn add_product(acc: &mut [Vec<QRat>], a: &[Vec<QRat>], b: &[Vec<QRat>]) {
    let n = a.len();
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    acc[i][j] = acc[i][j].plus(&a[i][k].times(&b[k][j]));
                }
            }
        }
    }
}

/// Gauss-Jordan over `Q(B)`.
fn invert(mut m: Vec<Vec<QRat>>) -> Option<Vec<Vec<QRat>>> {
    let n = m.len();
    let mut inv: Vec<Vec<QRat>> = (0..n).map(|i| (0..n).map(|j| if i == j { QRat::one() } else { QRat::zero() }).collect()).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        inv.swap(col, p);
        let piv = m[col][col].inverse();
        for j in 0..n {
            m[col][j] = m[col][j].times(&piv);
            inv[col][j] = inv[col][j].times(&piv);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let c = m[r][col].clone();
            for j in 0..n {
                m[r][j] = m[r][j].minus(&c.times(&m[col][j]));
                inv[r][j] = inv[r][j].minus(&c.times(&inv[col][j]));
            }
        }
    }
    Some(inv)
}

/// The six-vertex part of `R(x)`, without `f`.
pub fn r_matrix_rational(order: usize) -> RMatrixSeries {
    let q = QRat::q_pow(1);
    let qd = q.minus(&QRat::q_pow(-1));
    let den = XSeries::linear(q.clone(), QRat::q_pow(-1).negated(), order).inverse().expect("q is invertible");
    let a = XSeries::linear(QRat::one(), QRat::from_int(-1), order).times(&den);
    let b = XSeries::linear(QRat::zero(), qd.clone(), order).times(&den);
    let c = den.scale(&qd);
    RMatrixSeries::from_fn(4, order, |i, j| match (i, j) {
        (0, 0) | (3, 3) => XSeries::one(order),
        (1, 1) | (2, 2) => a.clone(),
        (1, 2) => b.clone(),
        (2, 1) => c.clone(),
        _ => XSeries::zero(order),
    })
}

/// `R(x)` to x-order `order`.
pub fn r_matrix(order: usize) -> RMatrixSeries {
    r_matrix_rational(order).scaled(&f_series(order))
}

/// `((((R^-1)^t1)^-1)^t1)` against `(diag(q^-1,q) (x) I) R(xq^4) (diag(q,q^-1) (x) I)`.
pub fn crossing_sides(r: &RMatrixSeries) -> Result<(RMatrixSeries, RMatrixSeries)> {
    let lhs = r.inverse()?.transpose_first().inverse()?.transpose_first();
    let (qm, qp) = (QRat::q_pow(-1), QRat::q_pow(1));
    let left = [qm.clone(), qm.clone(), qp.clone(), qp.clone()];
    let right = [qp.clone(), qp, qm.clone(), qm];
    let rhs = r.rescale_x(HalfInt::int(4)).conjugated(&left, &right);
    Ok((lhs, rhs))
}

pub fn check_crossing(order: usize) -> Result<Report> {
    check_crossing_of(&r_matrix(order))
}

/// Crossing relation for an arbitrary 4x4 series matrix.
pub fn check_crossing_of(r: &RMatrixSeries) -> Result<Report> {
    let mut rep = Report::new("R-CROSSING", "((R(x)^-1)^t1)^-1)^t1 = (diag(q^-1,q) x I) R(xq^4) (diag(q,q^-1) x I)");
    let (lhs, rhs) = crossing_sides(r)?;
    for i in 0..4 {
        for j in 0..4 {
            let (a, b) = (lhs.entry(i, j), rhs.entry(i, j));
            rep.check(format!("entry ({},{}) to x^{}", i + 1, j + 1, r.order()), a == b, a.to_string(), b.to_string());
        }
    }
    Ok(rep)
}

/// `f(xq^4) (1-x)(1-xq^4) = (1-xq^2)^2 f(x)`, cross-multiplied.
pub fn check_f_equation(order: usize) -> Report {
    check_f_equation_of(&f_series(order))
}

pub fn check_f_equation_of(f: &XSeries) -> Report {
    let order = f.order();
    let lin = |c: i64| XSeries::linear(QRat::one(), QRat::q_pow(c).negated(), order);
    let lhs = f.rescale_x(HalfInt::int(4)).times(&lin(0)).times(&lin(4));
    let rhs = lin(2).times(&lin(2)).times(f);
    let mut rep = Report::new("F-QDIFF", "f(xq^4) = (1-xq^2)^2 / ((1-x)(1-xq^4)) f(x)");
    for k in 0..=order {
        let (a, b) = (lhs.coeff(k), rhs.coeff(k));
        rep.check(format!("x^{k}"), a == b, a.to_string(), b.to_string());
    }
    rep
}

/// Truncated series in `x` and `y`, each to the same order.
#[derive(Clone, Debug, PartialEq)]
struct XYSeries {
    order: usize,
    c: Vec<QRat>,
}

impl XYSeries {
    fn zero(order: usize) -> Self {
        XYSeries { order, c: vec![QRat::zero(); (order + 1) * (order + 1)] }
    }

    fn at(&self, i: usize, j: usize) -> &QRat {
        &self.c[i * (self.order + 1) + j]
    }

    /// `s(x^a y^b)` for a one-variable series `s`.
    fn substituted(s: &XSeries, a: usize, b: usize, order: usize) -> Self {
        let mut out = Self::zero(order);
        for k in 0..=s.order() {
            let (i, j) = (a * k, b * k);
            if i <= order && j <= order {
                out.c[i * (order + 1) + j] = s.coeff(k).clone();
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        let n = self.order + 1;
        for (ia, va) in a.c.iter().enumerate() {
            if va.is_zero() {
                continue;
            }
            let (i1, j1) = (ia / n, ia % n);
            for i2 in 0..n - i1 {
                for j2 in 0..n - j1 {
                    let vb = b.at(i2, j2);
                    if !vb.is_zero() {
                        let k = (i1 + i2) * n + j1 + j2;
                        self.c[k] = self.c[k].plus(&va.times(vb));
                    }
                }
            }
        }
    }
}

type Mat8 = Vec<Vec<XYSeries>>;

/// Embed a 4x4 matrix into `End(C^2 (x) C^2 (x) C^2)` on factors `(p, r)`.
fn embed(m: &[Vec<XYSeries>], p: usize, r: usize, order: usize) -> Mat8 {
    let bit = |v: usize, k: usize| (v >> (2 - k)) & 1;
    let other = 3 - p - r;
    (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    if bit(a, other) != bit(b, other) {
                        XYSeries::zero(order)
                    } else {
                        m[2 * bit(a, p) + bit(a, r)][2 * bit(b, p) + bit(b, r)].clone()
                    }
                })
                .collect()
        })
        .collect()
}

fn mat8_times(a: &Mat8, b: &Mat8, order: usize) -> Mat8 {
    (0..8)
        .map(|i| {
            (0..8)
                .map(|j| {
                    let mut acc = XYSeries::zero(order);
                    for k in 0..8 {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc.add_product(&a[i][k], &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `R12(x) R13(xy) R23(y) = R23(y) R13(xy) R12(x)` in each variable to
/// `order`.
pub fn check_yang_baxter(order: usize) -> Report {
    check_yang_baxter_of(&r_matrix(order))
}

pub fn check_yang_baxter_of(r: &RMatrixSeries) -> Report {
    let order = r.order();
    let sub = |a: usize, b: usize| -> Vec<Vec<XYSeries>> {
        (0..4).map(|i| (0..4).map(|j| XYSeries::substituted(r.entry(i, j), a, b, order)).collect()).collect()
    };
    let r12 = embed(&sub(1, 0), 0, 1, order);
    let r13 = embed(&sub(1, 1), 0, 2, order);
    let r23 = embed(&sub(0, 1), 1, 2, order);
    let lhs = mat8_times(&mat8_times(&r12, &r13, order), &r23, order);
    let rhs = mat8_times(&mat8_times(&r23, &r13, order), &r12, order);
    let mut rep = Report::new("R-YBE", "R12(x) R13(xy) R23(y) = R23(y) R13(xy) R12(x)");
    let mut bad = Vec::new();
    for i in 0..8 {
        for j in 0..8 {
            if lhs[i][j] != rhs[i][j] {
                bad.push(format!("({},{})", i + 1, j + 1));
            }
        }
    }
    let label = format!("64 entries to x^{order} y^{order}");
    if bad.is_empty() {
        rep.check(label, true, "equal", "equal");
    } else {
        rep.check(label, false, format!("differ at {}", bad.join(" ")), "equal");
    }
    rep
}

const IDS: &[&str] = &["F-QDIFF", "R-CROSSING", "R-YBE"];

pub fn rmatrix_ids() -> Vec<&'static str> {
    IDS.to_vec()
}

/// Run one scalar-layer identity; `order` is the x-order.
pub fn verify_rmatrix(id: &str, order: usize) -> Result<Report> {
    match crate::walg::normalize_id(id).as_str() {
        "F-QDIFF" => Ok(check_f_equation(order)),
        "R-CROSSING" => check_crossing(order),
        "R-YBE" => Ok(check_yang_baxter(order)),
        other => Err(Error::UnknownIdentity(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_terms() {
        let r = r_matrix(3);
        assert!(r.entry(1, 2).coeff(0).is_zero());
        assert_eq!(*r.entry(1, 1).coeff(0), QRat::q_pow(-1));
        let diag: Vec<QRat> = (0..4).map(|i| r.entry(i, i).coeff(0).clone()).collect();
        assert_eq!(diag, vec![QRat::one(), QRat::q_pow(-1), QRat::q_pow(-1), QRat::one()]);
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(r.entry(i, j).coeff(0).is_zero());
            }
        }
        assert_eq!(*r.entry(0, 0), f_series(3));
        assert_eq!(*r.entry(3, 3), f_series(3));
    }

    #[test]
    fn inverse_round_trip() {
        let r = r_matrix(4);
        let inv = r.inverse().unwrap();
        assert_eq!(r.times(&inv), RMatrixSeries::identity(4, 4));
        let singular = RMatrixSeries::from_fn(4, 2, |i, _| if i == 0 { XSeries::zero(2) } else { XSeries::one(2) });
        assert!(matches!(singular.inverse(), Err(Error::NonInvertibleConstantTerm)));
    }

    #[test]
    fn crossing_needs_f() {
        assert!(check_crossing(0).unwrap().passed());
        assert!(check_crossing(6).unwrap().passed());
        assert!(!check_crossing_of(&r_matrix_rational(6)).unwrap().passed());
    }

    #[test]
    fn f_equation() {
        assert!(check_f_equation(10).passed());
        assert!(check_f_equation(0).passed());
        let f1 = f_series(1).coeff(1).clone();
        let want = QRat::one().minus(&QRat::q_pow(2)).negated().divided(&QRat::one().plus(&QRat::q_pow(2)));
        assert_eq!(f1, want);
        let mut bad = f_series(3).coeffs().to_vec();
        bad[2] = bad[2].plus(&QRat::one());
        assert!(!check_f_equation_of(&XSeries::new(bad, 3)).passed());
    }

    #[test]
    fn yang_baxter() {
        assert!(check_yang_baxter(0).passed());
        assert!(check_yang_baxter(3).passed());
        let mut r = r_matrix(2);
        r.set_entry(1, 2, r.entry(1, 2).scale(&QRat::from_int(2)));
        assert!(!check_yang_baxter_of(&r).passed());
    }
}
