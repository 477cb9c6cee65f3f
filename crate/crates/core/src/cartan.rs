//! Cartan data for the classical types and the q-deformed Cartan matrices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{kernel_from_qratio, qint_kernel, Kernel, QRatio};
use crate::scalar::{q_minus_qinv, rat, rat_int, Field, HalfInt, Poly, QRat, Rat, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(CartanType::A),
            "B" => Ok(CartanType::B),
            "C" => Ok(CartanType::C),
            "D" => Ok(CartanType::D),
            other => Err(Error::UnsupportedType(other.to_string())),
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A => "A",
            CartanType::B => "B",
            CartanType::C => "C",
            CartanType::D => "D",
        };
        f.write_str(s)
    }
}

/// Which roots get squared length 2 in the non-simply-laced types.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Normalization {
    /// Long roots have `(a,a) = 2`, short ones `(a,a) = 1`; `d_i in {1/2, 1}`.
    /// This is the lattice on which the B and C Lambda-series live.
    #[default]
    LongRootsTwo,
    /// Short roots have `(a,a) = 2`, long ones `(a,a) = 4`; `d_i in {1, 2}`.
    ShortRootsTwo,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CartanData {
    pub kind: CartanType,
    pub rank: usize,
    pub normalization: Normalization,
    /// Symmetrized Cartan matrix `B_ij = (a_i, a_j)`.
    pub b_matrix: Vec<Vec<Rat>>,
    /// `d_i = (a_i, a_i) / 2`
    pub d: Vec<Rat>,
    /// `(rho, omega_i)`
    pub rho_pairings: Vec<Rat>,
}

pub fn cartan_data(kind: CartanType, rank: usize) -> Result<CartanData> {
    cartan_data_with(kind, rank, Normalization::default())
}

pub fn cartan_data_with(kind: CartanType, rank: usize, norm: Normalization) -> Result<CartanData> {
    let min = if kind == CartanType::D { 2 } else { 1 };
    if rank < min {
        return Err(Error::RankTooSmall { kind: kind.to_string(), rank });
    }
    let n = rank;
    let mut b = vec![vec![Rat::zero(); n]; n];
    let link = |b: &mut Vec<Vec<Rat>>, i: usize, j: usize, v: Rat| {
        b[i][j] = v.clone();
        b[j][i] = v;
    };
    match kind {
        CartanType::A => {
            for i in 0..n {
                b[i][i] = rat_int(2);
                if i + 1 < n {
                    link(&mut b, i, i + 1, rat_int(-1));
                }
            }
        }
        CartanType::B => {
            for i in 0..n {
                b[i][i] = rat_int(2);
                if i + 1 < n {
                    link(&mut b, i, i + 1, rat_int(-1));
                }
            }
            b[n - 1][n - 1] = rat_int(1);
        }
        CartanType::C => {
            for i in 0..n {
                b[i][i] = rat_int(1);
                if i + 1 < n {
                    link(&mut b, i, i + 1, rat(-1, 2));
                }
            }
            b[n - 1][n - 1] = rat_int(2);
            if n >= 2 {
                link(&mut b, n - 2, n - 1, rat_int(-1));
            }
        }
        CartanType::D => {
            for i in 0..n {
                b[i][i] = rat_int(2);
            }
            for i in 0..n.saturating_sub(3) {
                link(&mut b, i, i + 1, rat_int(-1));
            }
            if n >= 3 {
                link(&mut b, n - 3, n - 2, rat_int(-1));
                link(&mut b, n - 3, n - 1, rat_int(-1));
            }
        }
    }
    if norm == Normalization::ShortRootsTwo && matches!(kind, CartanType::B | CartanType::C) {
        for row in b.iter_mut() {
            for x in row.iter_mut() {
                *x = &*x * rat_int(2);
            }
        }
    }
    let d: Vec<Rat> = (0..n).map(|i| &b[i][i] / rat_int(2)).collect();
    let inv = rat_matrix_inverse(&b)?;
    let rho_pairings = (0..n)
        .map(|i| {
            let s = (0..n).fold(Rat::zero(), |acc, j| acc + &d[j] * &inv[j][i]);
            &d[i] * s
        })
        .collect();
    Ok(CartanData { kind, rank, normalization: norm, b_matrix: b, d, rho_pairings })
}

fn rat_matrix_inverse(m: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::SingularMatrix)?;
        a.swap(k, p);
        let inv = a[k][k].inverse();
        for x in a[k].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in 0..2 * n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn half(r: &Rat) -> HalfInt {
    let t = r * rat_int(2);
    assert!(t.is_integer(), "entry {r} is not on the half-integer lattice");
    HalfInt::from_twice(t.to_integer().try_into().expect("small entry"))
}

/// `B^{(m)}_ij = [B_ij m]_q` as kernels.
pub fn q_cartan_kernel_matrix(cd: &CartanData) -> Vec<Vec<Kernel>> {
    cd.b_matrix.iter().map(|row| row.iter().map(|b| qint_kernel(half(b))).collect()).collect()
}

/// `C^{(m)} = [m]_q^2 (B^{(m)})^{-1}`.
///
/// The matrix `u^E (q - q^-1) B^{(m)}` has integer polynomial entries, which
/// are inverted by fraction-free Gauss-Jordan elimination.
pub fn c_matrix(cd: &CartanData) -> Result<Vec<Vec<Kernel>>> {
    let n = cd.rank;
    let tw: Vec<Vec<i64>> =
        cd.b_matrix.iter().map(|r| r.iter().map(|b| half(b).twice() as i64).collect()).collect();
    let e = tw.iter().flatten().map(|t| t.abs()).max().unwrap_or(0);
    let entry = |t: i64| -> Poly<Rat> {
        if t == 0 {
            return Poly::zero();
        }
        Poly::monomial(Rat::one(), (e + t) as usize).minus(&Poly::monomial(Rat::one(), (e - t) as usize))
    };
    let mut a: Vec<Vec<Poly<Rat>>> = (0..n)
        .map(|i| {
            let mut row: Vec<Poly<Rat>> = (0..n).map(|j| entry(tw[i][j])).collect();
            row.extend((0..n).map(|j| if i == j { Poly::one() } else { Poly::zero() }));
            row
        })
        .collect();
    let mut prev = Poly::<Rat>::one();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::SingularMatrix)?;
        a.swap(k, p);
        for i in 0..n {
            if i == k {
                continue;
            }
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let v = a[k][k].times(&a[i][j]).minus(&a[i][k].times(&a[k][j]));
                a[i][j] = v.exact_div(&prev);
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    // The left block is now diagonal, so row i of P^{-1} is row i of the
    // right block divided by a[i][i].
    let lift = |p: &Poly<Rat>| p.map(|c| QRat::from_rat(c.clone()));
    let u4m1 = Poly::<Rat>::monomial(Rat::one(), 4).minus(&Poly::one());
    let pre = u4m1.times(&u4m1);
    let scale = q_minus_qinv().inverse();
    let mut out = vec![vec![Kernel::zero(); n]; n];
    for i in 0..n {
        if a[i][i].is_zero() {
            return Err(Error::SingularMatrix);
        }
        let den = lift(&a[i][i].shift_up(4));
        for j in 0..n {
            let num = pre.times(&a[i][n + j]).shift_up(e as usize);
            out[i][j] = Kernel::from_parts(lift(&num), den.clone()).scale(&scale);
        }
    }
    Ok(out)
}

/// Closed form `C_ij = [(N - max(i,j)) m] [min(i,j) m] / [N m]` for type A_{N-1}
/// (indices are 1-based).
pub fn c_matrix_closed_form_a(n: usize) -> Vec<Vec<Kernel>> {
    let r = n - 1;
    (1..=r)
        .map(|i| {
            (1..=r)
                .map(|j| {
                    let ratio = QRatio::new()
                        .qint(HalfInt::int((n - i.max(j)) as i32), 1)
                        .qint(HalfInt::int(i.min(j) as i32), 1)
                        .qint(HalfInt::int(n as i32), -1);
                    kernel_from_qratio(&ratio)
                })
                .collect()
        })
        .collect()
}

/// `B^{(m)} C^{(m)} - [m]^2 I`, entrywise.
pub fn inverse_defect(cd: &CartanData, c: &[Vec<Kernel>]) -> Vec<Vec<Kernel>> {
    let bm = q_cartan_kernel_matrix(cd);
    let m2 = qint_kernel(HalfInt::int(1)).times(&qint_kernel(HalfInt::int(1)));
    let n = cd.rank;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = Kernel::zero();
                    for (k, ck) in c.iter().enumerate() {
                        if !bm[i][k].is_zero() {
                            s = s.plus(&bm[i][k].times(&ck[j]));
                        }
                    }
                    if i == j {
                        s.minus(&m2)
                    } else {
                        s
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QRat;

    #[test]
    fn sl2_data() {
        let cd = cartan_data(CartanType::A, 1).unwrap();
        assert_eq!(cd.b_matrix, vec![vec![rat_int(2)]]);
        assert_eq!(cd.rho_pairings, vec![rat(1, 2)]);
    }

    #[test]
    fn type_a_rho_pairings() {
        for n in 2..=6usize {
            let cd = cartan_data(CartanType::A, n - 1).unwrap();
            for i in 1..n {
                assert_eq!(&cd.rho_pairings[i - 1] * rat_int(2), rat_int((i * (n - i)) as i64));
            }
        }
    }

    #[test]
    fn b2_short_roots_two() {
        let cd = cartan_data_with(CartanType::B, 2, Normalization::ShortRootsTwo).unwrap();
        assert_eq!(cd.b_matrix, vec![vec![rat_int(4), rat_int(-2)], vec![rat_int(-2), rat_int(2)]]);
        assert_eq!(cd.d, vec![rat_int(2), rat_int(1)]);
    }

    #[test]
    fn exceptional_rejected() {
        assert!(matches!("E".parse::<CartanType>(), Err(Error::UnsupportedType(_))));
    }

    #[test]
    fn q_cartan_entries() {
        let cd = cartan_data(CartanType::A, 2).unwrap();
        let m = q_cartan_kernel_matrix(&cd);
        assert_eq!(m[0][0], qint_kernel(HalfInt::int(2)));
        assert_eq!(m[0][1], qint_kernel(HalfInt::int(-1)));
        assert_eq!(m[0][1].eval(1).unwrap(), QRat::from_int(-1));
    }

    #[test]
    fn sl2_c_matrix() {
        let cd = cartan_data(CartanType::A, 1).unwrap();
        let c = c_matrix(&cd).unwrap();
        let expect = kernel_from_qratio(&QRatio::new().qint(HalfInt::int(1), 2).qint(HalfInt::int(2), -1));
        assert_eq!(c[0][0], expect);
    }

    #[test]
    fn closed_form_matches_inversion() {
        for n in 2..=6 {
            let cd = cartan_data(CartanType::A, n - 1).unwrap();
            assert_eq!(c_matrix(&cd).unwrap(), c_matrix_closed_form_a(n), "N = {n}");
        }
    }

    #[test]
    fn inverse_all_types() {
        for kind in [CartanType::A, CartanType::B, CartanType::C, CartanType::D] {
            for norm in [Normalization::LongRootsTwo, Normalization::ShortRootsTwo] {
                for rank in 2..=4 {
                    let cd = cartan_data_with(kind, rank, norm).unwrap();
                    let c = c_matrix(&cd).unwrap();
                    for row in inverse_defect(&cd, &c) {
                        assert!(row.iter().all(|k| k.is_zero()), "{kind}{rank} {norm:?}");
                    }
                    for i in 0..rank {
                        for j in 0..rank {
                            assert_eq!(c[i][j], c[j][i]);
                            assert!(c[i][j].eval(0).unwrap().is_zero());
                        }
                    }
                }
            }
        }
    }
}
