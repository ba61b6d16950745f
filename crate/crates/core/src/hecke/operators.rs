use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{factor, gcd};
use crate::atkinlehner::QuotientSpace;
use crate::error::{Error, Result};
use crate::exactlin::RatMatrix;
use crate::qseries::sturm_bound;
use crate::rational::{q_int, Q};
use crate::report::matrix_strings;
use crate::spaces::SpaceBasis;

/// Matrix of `T_m` on the echelon basis of a space (row convention:
/// row `i` holds the coordinates of `T_m b_i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeMatrix {
    pub m: u64,
    pub weight: u32,
    pub level: u64,
    pub matrix: RatMatrix,
}

#[derive(Serialize)]
pub struct HeckeMatrixJson {
    pub m: u64,
    pub k: u32,
    #[serde(rename = "N")]
    pub level: u64,
    pub dim: usize,
    pub matrix: Vec<Vec<String>>,
    pub charpoly: Vec<String>,
}

impl HeckeMatrix {
    pub fn to_json(&self) -> HeckeMatrixJson {
        HeckeMatrixJson {
            m: self.m,
            k: self.weight,
            level: self.level,
            dim: self.matrix.rows(),
            matrix: matrix_strings(&self.matrix),
            charpoly: crate::exactlin::charpoly(&self.matrix).descending_strings(),
        }
    }
}

fn power(k: u32, p: u64) -> BigInt {
    BigInt::from(p).pow(k - 1)
}

/// Smallest precision at which `T_p` can be applied to a space.
pub fn hecke_prec(k: u32, n: u64, p: u64) -> Result<usize> {
    Ok(p as usize * sturm_bound(k, n)?)
}

fn prime_matrix(space: &SpaceBasis, p: u64) -> Result<RatMatrix> {
    let k = space.weight();
    let n = space.level();
    let needed = hecke_prec(k, n, p)?;
    if space.prec() < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            have: space.prec(),
        });
    }
    let d = space.dim();
    let window = space.prec() / p as usize;
    let pk = Q::from_integer(power(k, p));
    let pivots = space.subspace().pivots().to_vec();
    let mut rows = Vec::with_capacity(d);
    for i in 0..d {
        let f = space.basis().row(i);
        let image: Vec<Q> = (0..=window)
            .map(|m| {
                let mut c = f[m * p as usize].clone();
                if m % p as usize == 0 && !f[m / p as usize].is_zero() {
                    c += &pk * &f[m / p as usize];
                }
                c
            })
            .collect();
        let coords: Vec<Q> = pivots.iter().map(|&j| image[j].clone()).collect();
        let recon: Vec<Q> = (0..=window)
            .map(|m| {
                coords
                    .iter()
                    .enumerate()
                    .fold(Q::zero(), |acc, (r, c)| acc + c * space.basis().get(r, m))
            })
            .collect();
        if recon != image {
            let bad = (0..=window).find(|&m| recon[m] != image[m]).unwrap_or(0);
            return Err(Error::NotInSpace {
                m: p,
                detail: format!(
                    "T_{p} of basis row {i} leaves the span at q^{bad} (k={k}, N={n}, prec={})",
                    space.prec()
                ),
            });
        }
        rows.push(coords);
    }
    Ok(RatMatrix::from_rows(d, rows))
}

/// `T_m` for `gcd(m, N) = 1`; prime powers follow
/// `T_{p^{r+1}} = T_p T_{p^r} - p^{k-1} T_{p^{r-1}}`, coprime indices multiply.
pub fn hecke_matrix(space: &SpaceBasis, m: u64) -> Result<HeckeMatrix> {
    let n = space.level();
    if m == 0 || gcd(m, n) != 1 {
        return Err(Error::Divisibility(format!("T_{m} needs gcd(m, {n}) = 1")));
    }
    let d = space.dim();
    let mut acc = RatMatrix::identity(d);
    for (p, e) in factor(m) {
        let tp = prime_matrix(space, p)?;
        let pk = Q::from_integer(power(space.weight(), p));
        let mut prev = RatMatrix::identity(d);
        let mut cur = tp.clone();
        for _ in 1..e {
            let next = tp.mul(&cur)?.sub(&prev.scale(&pk))?;
            prev = cur;
            cur = next;
        }
        acc = acc.mul(&cur)?;
    }
    Ok(HeckeMatrix {
        m,
        weight: space.weight(),
        level: n,
        matrix: acc,
    })
}

/// Scalar `λ_m` from prime eigenvalues `λ_p` by the same recurrences.
pub fn eigenvalue_of(k: u32, m: u64, lambda: impl Fn(u64) -> Option<Q>) -> Option<Q> {
    let mut acc = q_int(1);
    for (p, e) in factor(m) {
        let lp = lambda(p)?;
        let pk = Q::from_integer(power(k, p));
        let mut prev = q_int(1);
        let mut cur = lp.clone();
        for _ in 1..e {
            let next = &lp * &cur - &pk * &prev;
            prev = cur;
            cur = next;
        }
        acc *= cur;
    }
    Some(acc)
}

/// Action of `T_m` on S_k(Γ0(N))/K_0(N) in section coordinates.
pub fn quotient_hecke(t: &HeckeMatrix, quotient: &QuotientSpace) -> Result<RatMatrix> {
    let amb = quotient.ambient();
    if amb.level() != t.level || amb.weight() != t.weight || amb.dim() != t.matrix.rows() {
        return Err(Error::TagMismatch(format!(
            "T_{} on (k={}, N={}) used with a quotient of (k={}, N={})",
            t.m,
            t.weight,
            t.level,
            amb.weight(),
            amb.level()
        )));
    }
    quotient.induced(&t.matrix, t.m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::build_sk_basis;

    #[test]
    fn delta_eigenvalues() {
        let s = build_sk_basis(12, 1, 20).unwrap();
        assert_eq!(hecke_matrix(&s, 2).unwrap().matrix, RatMatrix::from_i64(&[&[-24]]));
        assert_eq!(hecke_matrix(&s, 3).unwrap().matrix, RatMatrix::from_i64(&[&[252]]));
        assert_eq!(hecke_matrix(&s, 4).unwrap().matrix, RatMatrix::from_i64(&[&[-1472]]));
        assert_eq!(hecke_matrix(&s, 6).unwrap().matrix, RatMatrix::from_i64(&[&[-6048]]));
        assert!(hecke_matrix(&s, 11).is_err());
    }

    #[test]
    fn multiplicativity_as_matrices() {
        let s = build_sk_basis(4, 10, 60).unwrap();
        let t3 = hecke_matrix(&s, 3).unwrap().matrix;
        let t7 = hecke_matrix(&s, 7).unwrap().matrix;
        let t9 = hecke_matrix(&s, 9).unwrap().matrix;
        assert_eq!(t3.mul(&t7).unwrap(), t7.mul(&t3).unwrap());
        let pk = q_int(27);
        assert_eq!(t9, t3.mul(&t3).unwrap().sub(&RatMatrix::identity(3).scale(&pk)).unwrap());
        assert_eq!(eigenvalue_of(12, 4, |_| Some(q_int(-24))), Some(q_int(-1472)));
    }

    #[test]
    fn coprimality_required() {
        let s = build_sk_basis(4, 10, 60).unwrap();
        assert!(matches!(hecke_matrix(&s, 2), Err(Error::Divisibility(_))));
        assert!(matches!(hecke_matrix(&s, 13), Err(Error::InsufficientPrecision { .. })));
    }
}
