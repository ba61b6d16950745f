//! Truncated q-expansions with exact rational coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{q_int, Q};
use crate::spaces::gamma0_index;

/// `Σ_{n=0}^{prec} c_n q^n`, tagged with a weight and a level.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QExpansion {
    weight: u32,
    level: u64,
    coeffs: Vec<Q>,
}

impl QExpansion {
    pub fn new(weight: u32, level: u64, coeffs: Vec<Q>) -> Result<Self> {
        if weight % 2 != 0 {
            return Err(Error::InvalidWeight(weight as i64));
        }
        if level == 0 {
            return Err(Error::InvalidLevel(0));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a q-expansion needs at least c_0".into()));
        }
        Ok(QExpansion { weight, level, coeffs })
    }

    pub fn from_i64(weight: u32, level: u64, coeffs: &[i64]) -> Result<Self> {
        Self::new(weight, level, coeffs.iter().map(|&c| q_int(c)).collect())
    }

    pub fn zero(weight: u32, level: u64, prec: usize) -> Self {
        QExpansion {
            weight,
            level,
            coeffs: vec![Q::zero(); prec + 1],
        }
    }

    /// The constant 1 (weight 0).
    pub fn one(level: u64, prec: usize) -> Self {
        let mut f = Self::zero(0, level, prec);
        f.coeffs[0] = Q::one();
        f
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Q> {
        self.coeffs
    }

    /// `c_n`; panics past the precision.
    pub fn coeff(&self, n: usize) -> &Q {
        &self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, prec: usize) -> Result<Self> {
        if prec > self.prec() {
            return Err(Error::InsufficientPrecision {
                needed: prec,
                have: self.prec(),
            });
        }
        Ok(QExpansion {
            coeffs: self.coeffs[..=prec].to_vec(),
            ..self.clone()
        })
    }

    /// Reinterprets a form of level `N` as a form of level `M` for `N | M`.
    pub fn with_level(&self, level: u64) -> Result<Self> {
        if level == 0 || level % self.level != 0 {
            return Err(Error::Divisibility(format!(
                "level {} does not divide {level}",
                self.level
            )));
        }
        Ok(QExpansion {
            level,
            ..self.clone()
        })
    }

    fn check_tags(&self, other: &QExpansion) -> Result<()> {
        if self.weight != other.weight || self.level != other.level {
            return Err(Error::TagMismatch(format!(
                "(k={}, N={}) vs (k={}, N={})",
                self.weight, self.level, other.weight, other.level
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &QExpansion) -> Result<Self> {
        self.check_tags(other)?;
        let prec = self.prec().min(other.prec());
        let coeffs = (0..=prec).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Ok(QExpansion { coeffs, ..self.clone() })
    }

    pub fn sub(&self, other: &QExpansion) -> Result<Self> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        QExpansion {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    /// Cauchy product truncated at the smaller precision; weights add.
    pub fn mul(&self, other: &QExpansion) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::TagMismatch(format!(
                "levels {} and {}",
                self.level, other.level
            )));
        }
        let prec = self.prec().min(other.prec());
        let mut coeffs = vec![Q::zero(); prec + 1];
        for (i, a) in self.coeffs[..=prec].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=prec - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Ok(QExpansion {
            weight: self.weight + other.weight,
            level: self.level,
            coeffs,
        })
    }
}

/// `q ↦ q^d`: the coefficient at `m` becomes `c_{m/d}` when `d | m`, else 0.
/// Precision is kept; the level tag is multiplied by `d`.
pub fn v_operator(f: &QExpansion, d: u64) -> Result<QExpansion> {
    if d == 0 {
        return Err(Error::InvalidArgument("v_operator needs d >= 1".into()));
    }
    let d = d as usize;
    let prec = f.prec();
    let coeffs = (0..=prec)
        .map(|m| {
            if m % d == 0 {
                f.coeffs[m / d].clone()
            } else {
                Q::zero()
            }
        })
        .collect();
    Ok(QExpansion {
        weight: f.weight,
        level: f.level * d as u64,
        coeffs,
    })
}

/// Bernoulli number `B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Q {
    let mut b: Vec<Q> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Q::one());
            continue;
        }
        let mut binom = BigInt::one();
        let mut acc = Q::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Q::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / q_int(m as i64 + 1));
    }
    b.pop().unwrap()
}

/// `σ_e(n)` for `0 <= n <= prec` (index 0 holds 0).
pub fn sigma_table(e: u32, prec: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); prec + 1];
    for d in 1..=prec {
        let p = BigInt::from(d).pow(e);
        for m in (d..=prec).step_by(d) {
            out[m] += &p;
        }
    }
    out
}

/// The constant `-2k/B_k` in `E_k = 1 - (2k/B_k) Σ σ_{k-1}(n) q^n`.
pub fn eisenstein_constant(k: u32) -> Q {
    -q_int(2 * k as i64) / bernoulli(k as usize)
}

fn eisenstein_any(k: u32, prec: usize) -> QExpansion {
    let c = eisenstein_constant(k);
    let sig = sigma_table(k - 1, prec);
    let mut coeffs: Vec<Q> = sig.into_iter().map(|s| &c * Q::from_integer(s)).collect();
    coeffs[0] = Q::one();
    QExpansion {
        weight: k,
        level: 1,
        coeffs,
    }
}

/// Level-one Eisenstein series `E_k` for even `k >= 4`.
pub fn eisenstein(k: u32, prec: usize) -> Result<QExpansion> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k as i64));
    }
    Ok(eisenstein_any(k, prec))
}

/// The quasi-modular `E_2 = 1 - 24 Σ σ_1(n) q^n`.
pub fn e2_quasimodular(prec: usize) -> QExpansion {
    eisenstein_any(2, prec)
}

/// `E_2(q) - d·E_2(q^d)`, a weight-2 form on Γ0(d).
pub fn phi2(d: u64, prec: usize) -> Result<QExpansion> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("phi2 needs d >= 2, got {d}")));
    }
    let e2 = e2_quasimodular(prec);
    let lifted = v_operator(&e2, d)?;
    let f = e2.with_level(d)?.sub(&lifted.scale(&q_int(d as i64)))?;
    Ok(f)
}

/// `⌊k μ / 12⌋ + 1` with `μ = [SL2(Z) : Γ0(N)]`.
pub fn sturm_bound(k: u32, n: u64) -> Result<usize> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k as i64));
    }
    if n == 0 {
        return Err(Error::InvalidLevel(0));
    }
    Ok((k as u64 * gamma0_index(n) / 12) as usize + 1)
}

/// Coefficient window needed to apply Hecke operators up to a given prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub sturm: usize,
    /// Largest prime `p` whose `T_p` will be applied (1 when none).
    pub hecke_margin: u64,
    pub working: usize,
}

impl PrecisionPolicy {
    pub fn new(k: u32, n: u64, hecke_primes: &[u64]) -> Result<Self> {
        let sturm = sturm_bound(k, n)?;
        let hecke_margin = hecke_primes.iter().copied().max().unwrap_or(1);
        Ok(PrecisionPolicy {
            sturm,
            hecke_margin,
            working: sturm.max(hecke_margin as usize * sturm),
        })
    }
}

/// Least common multiple of the coefficient denominators.
pub fn denominator(f: &QExpansion) -> BigInt {
    f.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    fn ints(f: &QExpansion) -> Vec<i64> {
        f.coeffs()
            .iter()
            .map(|c| i64::try_from(c.to_integer()).unwrap())
            .collect()
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(1), q_frac(-1, 2));
        assert_eq!(bernoulli(2), q_frac(1, 6));
        assert_eq!(bernoulli(4), q_frac(-1, 30));
        assert_eq!(bernoulli(12), q_frac(-691, 2730));
        assert_eq!(bernoulli(7), Q::zero());
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(ints(&eisenstein(4, 2).unwrap()), vec![1, 240, 2160]);
        assert_eq!(ints(&eisenstein(6, 2).unwrap()), vec![1, -504, -16632]);
        assert!(eisenstein(5, 3).is_err());
        assert!(eisenstein(2, 3).is_err());
    }

    #[test]
    fn phi2_examples() {
        let f = phi2(2, 2).unwrap();
        assert_eq!(ints(&f), vec![-1, -24, -24]);
        assert_eq!(f.level(), 2);
        assert_eq!(*phi2(7, 1).unwrap().coeff(0), q_int(-6));
        assert!(phi2(1, 3).is_err());
    }

    #[test]
    fn v_operator_examples() {
        let f = QExpansion::from_i64(2, 1, &[1, 1, 1, 0, 0]).unwrap();
        assert_eq!(v_operator(&f, 1).unwrap(), f);
        let g = v_operator(&f, 2).unwrap();
        assert_eq!(ints(&g), vec![1, 0, 1, 0, 1]);
        assert_eq!(g.level(), 2);
        let h = QExpansion::from_i64(2, 1, &(0..13).collect::<Vec<_>>()).unwrap();
        assert_eq!(
            v_operator(&v_operator(&h, 2).unwrap(), 3).unwrap(),
            v_operator(&h, 6).unwrap()
        );
    }

    #[test]
    fn arithmetic_examples() {
        let f = QExpansion::from_i64(0, 1, &[1, 1]).unwrap();
        let g = QExpansion::from_i64(0, 1, &[1, -1]).unwrap();
        assert_eq!(ints(&f.add(&g).unwrap()), vec![2, 0]);
        assert!(f.sub(&f).unwrap().is_zero());
        assert_eq!(ints(&f.mul(&f).unwrap()), vec![1, 2]);
        let f3 = QExpansion::from_i64(0, 1, &[1, 1, 0]).unwrap();
        assert_eq!(ints(&f3.mul(&f3).unwrap()), vec![1, 2, 1]);
        let other = QExpansion::from_i64(2, 1, &[1]).unwrap();
        assert!(f.add(&other).is_err());
    }

    #[test]
    fn e8_from_e4_squared() {
        let e4 = eisenstein(4, 2).unwrap();
        let sq = e4.mul(&e4).unwrap();
        assert_eq!(ints(&sq), vec![1, 480, 61920]);
        assert_eq!(sq, eisenstein(8, 2).unwrap());
        assert_eq!(sq.weight(), 8);
    }

    #[test]
    fn sturm_examples() {
        assert_eq!(sturm_bound(12, 1).unwrap(), 2);
        assert_eq!(sturm_bound(2, 11).unwrap(), 3);
        assert_eq!(sturm_bound(2, 33).unwrap(), 9);
        assert!(sturm_bound(3, 1).is_err());
        let p = PrecisionPolicy::new(2, 11, &[2, 3]).unwrap();
        assert_eq!((p.sturm, p.working), (3, 9));
    }
}
