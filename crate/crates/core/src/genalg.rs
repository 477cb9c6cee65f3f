//! Generator bases of the Heisenberg-Poisson algebra and changes of basis.
//!
//! All brackets are normalized by the unit `2h`: a basis stores kernels
//! `K_ij` with `{g_i[n], g_j[-n]} = K_ij(q^{n/2})`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::{c_matrix, cartan_data, CartanData, CartanType};
use crate::error::{Error, Result};
use crate::kernel::{qint_kernel, Kernel};
use crate::scalar::{q_minus_qinv, rat_int, Field, HalfInt, QRat, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisTag {
    A,
    Y,
    Lambda,
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisTag::A => "a",
            BasisTag::Y => "y",
            BasisTag::Lambda => "lambda",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorBasis {
    pub tag: BasisTag,
    pub kernels: Vec<Vec<Kernel>>,
    /// Exponent of `B` in the prefactor of the exponential series of each
    /// family, e.g. `Y_i(z) = q^{-2(rho, omega_i)} exp(...)`.
    pub prefactor_b: Vec<i64>,
}

impl GeneratorBasis {
    pub fn size(&self) -> usize {
        self.kernels.len()
    }

    pub fn kernel(&self, i: usize, j: usize) -> &Kernel {
        &self.kernels[i][j]
    }

    /// `K_ji(1/u) = -K_ij(u)` for all pairs.
    pub fn is_antisymmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.kernels[j][i].invert_var() == self.kernels[i][j].negated()))
    }

    /// All kernels vanish at mode 0.
    pub fn vanishes_at_zero_mode(&self) -> bool {
        self.kernels.iter().flatten().all(|k| k.eval(0).map(|v| v.is_zero()).unwrap_or(false))
    }
}

/// `target_i[n] = sum_j T_ij(q^{n/2}) source_j[n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisMap {
    pub matrix: Vec<Vec<Kernel>>,
}

impl BasisMap {
    pub fn identity(n: usize) -> Self {
        BasisMap {
            matrix: (0..n)
                .map(|i| (0..n).map(|j| if i == j { Kernel::one() } else { Kernel::zero() }).collect())
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.first().map_or(0, |r| r.len())
    }

    /// Inverse of a square map by Gauss-Jordan over the kernel field.
    pub fn inverse(&self) -> Result<BasisMap> {
        let n = self.rows();
        if self.cols() != n {
            return Err(Error::DimensionMismatch(format!("{}x{} map is not square", n, self.cols())));
        }
        let mut a: Vec<Vec<Kernel>> = self.matrix.clone();
        let mut inv = BasisMap::identity(n).matrix;
        for k in 0..n {
            let p = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap(k, p);
            inv.swap(k, p);
            let piv = a[k][k].inverse();
            for j in 0..n {
                a[k][j] = a[k][j].times(&piv);
                inv[k][j] = inv[k][j].times(&piv);
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..n {
                    a[i][j] = a[i][j].minus(&f.times(&a[k][j]));
                    inv[i][j] = inv[i][j].minus(&f.times(&inv[k][j]));
                }
            }
        }
        Ok(BasisMap { matrix: inv })
    }

    /// Evaluate at mode n.
    pub fn eval(&self, n: i64) -> Result<Vec<Vec<QRat>>> {
        self.matrix.iter().map(|r| r.iter().map(|k| k.eval(n)).collect()).collect()
    }
}

fn scaled(m: Vec<Vec<Kernel>>, c: &QRat) -> Vec<Vec<Kernel>> {
    m.into_iter().map(|r| r.into_iter().map(|k| k.scale(c)).collect()).collect()
}

fn y_prefactors(cd: &CartanData) -> Vec<i64> {
    cd.rho_pairings
        .iter()
        .map(|r| {
            let t = r * rat_int(-4);
            assert!(t.is_integer(), "prefactor q^(-2(rho,omega)) off the B lattice");
            t.to_integer().try_into().unwrap()
        })
        .collect()
}

/// `{a_i[n], a_j[-n]} = [B_ij n]_q / (q - q^-1)`.
pub fn a_basis(cd: &CartanData) -> GeneratorBasis {
    let k = scaled(crate::cartan::q_cartan_kernel_matrix(cd), &q_minus_qinv().inverse());
    GeneratorBasis { tag: BasisTag::A, kernels: k, prefactor_b: vec![0; cd.rank] }
}

/// `{y_i[n], y_j[-n]} = (q - q^-1) C_ij^{(n)}`.
pub fn y_basis(cd: &CartanData) -> Result<GeneratorBasis> {
    let k = scaled(c_matrix(cd)?, &q_minus_qinv());
    Ok(GeneratorBasis { tag: BasisTag::Y, kernels: k, prefactor_b: y_prefactors(cd) })
}

/// The map `y = T a` with `{y_i[n], a_j[-n]} = [n]_q delta_ij`, namely
/// `T = (q - q^-1) C^{(n)} / [n]_q`.
pub fn y_from_a(cd: &CartanData) -> Result<BasisMap> {
    let inv_n = qint_kernel(HalfInt::int(1)).inverse().scale(&q_minus_qinv());
    let c = c_matrix(cd)?;
    Ok(BasisMap { matrix: c.into_iter().map(|r| r.into_iter().map(|k| k.times(&inv_n)).collect()).collect() })
}

/// `lambda_i[n]` in terms of `a_j[n]` for `sl_N`:
/// `(q - q^-1)/[Nn] * ( sum_{j >= i} [(N-j)n] a_j - q^{Nn} sum_{j < i} [jn] a_j )`.
pub fn lambda_from_a(n: usize) -> Result<BasisMap> {
    if n < 2 {
        return Err(Error::RankTooSmall { kind: "A".into(), rank: n.saturating_sub(1) });
    }
    let inv_nn = qint_kernel(HalfInt::int(n as i32)).inverse().scale(&q_minus_qinv());
    let matrix = (1..=n)
        .map(|i| {
            (1..n)
                .map(|j| {
                    if j >= i {
                        qint_kernel(HalfInt::int((n - j) as i32)).times(&inv_nn)
                    } else {
                        qint_kernel(HalfInt::int(j as i32)).times(&inv_nn).mul_u_pow(2 * n as i64).negated()
                    }
                })
                .collect()
        })
        .collect();
    Ok(BasisMap { matrix })
}

/// `G'(u) = T(u) G(u) T(1/u)^T`.
pub fn transform_brackets(src: &GeneratorBasis, map: &BasisMap, tag: BasisTag, prefactor_b: Vec<i64>) -> Result<GeneratorBasis> {
    if map.cols() != src.size() {
        return Err(Error::DimensionMismatch(format!(
            "map has {} columns, basis has {} families",
            map.cols(),
            src.size()
        )));
    }
    if prefactor_b.len() != map.rows() {
        return Err(Error::DimensionMismatch("prefactor count".into()));
    }
    let t = &map.matrix;
    let t_inv: Vec<Vec<Kernel>> = t.iter().map(|r| r.iter().map(|k| k.invert_var()).collect()).collect();
    let n = src.size();
    // TG first, then contract with T(1/u).
    let tg: Vec<Vec<Kernel>> = t
        .iter()
        .map(|row| {
            (0..n)
                .map(|l| {
                    let mut s = Kernel::zero();
                    for (j, tj) in row.iter().enumerate() {
                        if !tj.is_zero() && !src.kernels[j][l].is_zero() {
                            s = s.plus(&tj.times(&src.kernels[j][l]));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    let kernels = tg
        .iter()
        .map(|row| {
            t_inv
                .iter()
                .map(|trow| {
                    let mut s = Kernel::zero();
                    for (l, tl) in trow.iter().enumerate() {
                        if !tl.is_zero() && !row[l].is_zero() {
                            s = s.plus(&row[l].times(tl));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    Ok(GeneratorBasis { tag, kernels, prefactor_b })
}

/// The lambda-basis of `sl_N` induced from the a-basis, with prefactors
/// `q^{-N+2i-1}`.
pub fn lambda_basis(n: usize) -> Result<GeneratorBasis> {
    let cd = cartan_data(CartanType::A, n - 1)?;
    let pre = (1..=n as i64).map(|i| 2 * (2 * i - 1 - n as i64)).collect();
    transform_brackets(&a_basis(&cd), &lambda_from_a(n)?, BasisTag::Lambda, pre)
}

/// `{y_i[n], a_j[-n]}` computed through the map, expected `[n] delta_ij`.
pub fn duality_kernels(cd: &CartanData) -> Result<Vec<Vec<Kernel>>> {
    let t = y_from_a(cd)?;
    let a = a_basis(cd);
    let n = cd.rank;
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = Kernel::zero();
                    for k in 0..n {
                        s = s.plus(&t.matrix[i][k].times(&a.kernels[k][j]));
                    }
                    s
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{kernel_from_qratio, QRatio};

    fn sl(n: usize) -> CartanData {
        cartan_data(CartanType::A, n - 1).unwrap()
    }

    #[test]
    fn a_basis_sl2() {
        let a = a_basis(&sl(2));
        let expect = qint_kernel(HalfInt::int(2)).scale(&q_minus_qinv().inverse());
        assert_eq!(a.kernels[0][0], expect);
        assert!(a.is_antisymmetric());
        assert!(a.vanishes_at_zero_mode());
    }

    #[test]
    fn a_basis_zero_entries() {
        let a = a_basis(&sl(4));
        assert!(a.kernels[0][2].is_zero());
    }

    #[test]
    fn y_basis_sl2() {
        let y = y_basis(&sl(2)).unwrap();
        let r = QRatio::new().qint(HalfInt::int(1), 2).qint(HalfInt::int(2), -1).constant(q_minus_qinv());
        for m in 1..=5 {
            assert_eq!(y.kernels[0][0].eval(m).unwrap(), r.eval(m));
        }
        assert_eq!(y.kernels[0][0].to_string(), "(u^4 - 1)/(u^4 + 1)");
        assert_eq!(y.prefactor_b, vec![-2]);
    }

    #[test]
    fn y_from_a_sl2_scalar() {
        let t = y_from_a(&sl(2)).unwrap();
        let r = QRatio::new().qint(HalfInt::int(1), 1).qint(HalfInt::int(2), -1).constant(q_minus_qinv());
        assert_eq!(t.matrix[0][0], kernel_from_qratio(&r));
    }

    #[test]
    fn duality_and_induced_y_brackets() {
        for kind in [CartanType::A, CartanType::B, CartanType::C, CartanType::D] {
            for rank in 2..=4 {
                let cd = cartan_data(kind, rank).unwrap();
                let d = duality_kernels(&cd).unwrap();
                for i in 0..rank {
                    for j in 0..rank {
                        let e = if i == j { qint_kernel(HalfInt::int(1)) } else { Kernel::zero() };
                        assert_eq!(d[i][j], e);
                    }
                }
                let y = y_basis(&cd).unwrap();
                let t = transform_brackets(&a_basis(&cd), &y_from_a(&cd).unwrap(), BasisTag::Y, y.prefactor_b.clone())
                    .unwrap();
                assert_eq!(t, y);
                assert!(y.is_antisymmetric() && y.vanishes_at_zero_mode());
            }
        }
    }

    #[test]
    fn lambda_relations() {
        for n in 2..=5usize {
            let t = lambda_from_a(n).unwrap();
            // lambda_i - lambda_{i+1} = q^{ni} (q - q^-1) a_i
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    let d = t.matrix[i][j].minus(&t.matrix[i + 1][j]);
                    let e = if i == j {
                        Kernel::u_pow(2 * (i as i64 + 1)).scale(&q_minus_qinv())
                    } else {
                        Kernel::zero()
                    };
                    assert_eq!(d, e);
                }
            }
            // sum_i q^{2(1-i)n} lambda_i = 0
            for j in 0..n - 1 {
                let mut s = Kernel::zero();
                for i in 0..n {
                    s = s.plus(&t.matrix[i][j].mul_u_pow(-4 * i as i64));
                }
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn lambda_brackets_match_closed_forms() {
        for n in 2..=4usize {
            let l = lambda_basis(n).unwrap();
            let diag = kernel_from_qratio(
                &QRatio::new()
                    .qint(HalfInt::int(n as i32 - 1), 1)
                    .qint(HalfInt::int(1), 1)
                    .qint(HalfInt::int(n as i32), -1)
                    .constant(q_minus_qinv()),
            );
            let off = kernel_from_qratio(
                &QRatio::new()
                    .qint(HalfInt::int(1), 2)
                    .qint(HalfInt::int(n as i32), -1)
                    .q_power(HalfInt::int(-(n as i32)))
                    .constant(q_minus_qinv().negated()),
            );
            for i in 0..n {
                assert_eq!(l.kernels[i][i], diag);
                for j in i + 1..n {
                    assert_eq!(l.kernels[i][j], off);
                }
            }
            assert!(l.is_antisymmetric());
        }
    }

    #[test]
    fn inverse_map_roundtrip() {
        let cd = sl(3);
        let t = y_from_a(&cd).unwrap();
        let a = a_basis(&cd);
        let y = transform_brackets(&a, &t, BasisTag::Y, vec![0, 0]).unwrap();
        let back = transform_brackets(&y, &t.inverse().unwrap(), BasisTag::A, vec![0, 0]).unwrap();
        assert_eq!(back.kernels, a.kernels);
        let same = transform_brackets(&a, &BasisMap::identity(2), BasisTag::A, vec![0, 0]).unwrap();
        assert_eq!(same, a);
    }
}
