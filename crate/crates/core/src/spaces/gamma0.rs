use serde::Serialize;

use crate::arith::{divisors, euler_phi, gcd, kronecker, prime_divisors};
use crate::error::{Error, Result};

/// `[SL2(Z) : Γ0(N)] = N ∏_{p|N} (1 + 1/p)`.
pub fn gamma0_index(n: u64) -> u64 {
    prime_divisors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Gamma0Invariants {
    #[serde(rename = "N")]
    pub level: u64,
    #[serde(rename = "mu")]
    pub index: u64,
    pub nu2: u64,
    pub nu3: u64,
    pub nu_inf: u64,
    pub genus: u64,
}

pub fn gamma0_invariants(n: u64) -> Result<Gamma0Invariants> {
    if n == 0 {
        return Err(Error::InvalidLevel(0));
    }
    let ps = prime_divisors(n);
    let index = gamma0_index(n);
    let nu2 = if n % 4 == 0 {
        0
    } else {
        ps.iter().map(|&p| (1 + kronecker(-4, p)) as u64).product()
    };
    let nu3 = if n % 9 == 0 {
        0
    } else {
        ps.iter().map(|&p| (1 + kronecker(-3, p)) as u64).product()
    };
    let nu_inf: u64 = divisors(n).iter().map(|&d| euler_phi(gcd(d, n / d))).sum();
    let twelve_g = 12 + index as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * nu_inf as i64;
    debug_assert!(twelve_g >= 0 && twelve_g % 12 == 0);
    Ok(Gamma0Invariants {
        level: n,
        index,
        nu2,
        nu3,
        nu_inf,
        genus: (twelve_g / 12) as u64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceDims {
    pub dim_m: usize,
    pub dim_s: usize,
    pub dim_eis: usize,
}

pub fn check_weight(k: u32) -> Result<()> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k as i64));
    }
    Ok(())
}

pub fn dim_spaces(k: u32, n: u64) -> Result<SpaceDims> {
    check_weight(k)?;
    let inv = gamma0_invariants(n)?;
    let (g, c, e2, e3) = (
        inv.genus as i64,
        inv.nu_inf as i64,
        inv.nu2 as i64,
        inv.nu3 as i64,
    );
    let k = k as i64;
    let (dim_s, dim_m) = if k == 2 {
        (g, g + c - 1)
    } else {
        let s = (k - 1) * (g - 1) + (k / 2 - 1) * c + (k / 4) * e2 + (k / 3) * e3;
        (s, s + c)
    };
    Ok(SpaceDims {
        dim_m: dim_m as usize,
        dim_s: dim_s as usize,
        dim_eis: (dim_m - dim_s) as usize,
    })
}

/// A cusp `a/c` of Γ0(N) with `c | N`; `c = N` is the cusp at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cusp {
    pub denominator: u64,
    pub numerator: u64,
    pub width: u64,
}

impl Cusp {
    pub fn is_infinity(&self, n: u64) -> bool {
        self.denominator == n
    }
}

/// One representative per Γ0(N)-orbit of cusps, ordered by denominator.
pub fn enumerate_cusps(n: u64) -> Result<Vec<Cusp>> {
    if n == 0 {
        return Err(Error::InvalidLevel(0));
    }
    let mut out = Vec::new();
    for c in divisors(n) {
        let g = gcd(c, n / c);
        let width = n / gcd(c * c, n);
        for a in (1..=g).filter(|&a| gcd(a, g) == 1) {
            let numerator = (0..)
                .map(|t| a + t * g)
                .find(|&x| gcd(x, c) == 1)
                .expect("a unit lifts to a residue coprime to c");
            out.push(Cusp {
                denominator: c,
                numerator,
                width,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_examples() {
        let one = gamma0_invariants(1).unwrap();
        assert_eq!((one.index, one.nu2, one.nu3, one.nu_inf, one.genus), (1, 1, 1, 1, 0));
        let i11 = gamma0_invariants(11).unwrap();
        assert_eq!((i11.index, i11.nu2, i11.nu3, i11.nu_inf, i11.genus), (12, 0, 0, 2, 1));
        assert_eq!(gamma0_invariants(6).unwrap().index, 12);
        assert_eq!(gamma0_invariants(22).unwrap().genus, 2);
        assert_eq!(gamma0_invariants(33).unwrap().genus, 3);
        assert!(gamma0_invariants(0).is_err());
    }

    #[test]
    fn dims_examples() {
        assert_eq!(dim_spaces(2, 11).unwrap().dim_s, 1);
        let d = dim_spaces(12, 1).unwrap();
        assert_eq!((d.dim_s, d.dim_m), (1, 2));
        assert_eq!(dim_spaces(2, 22).unwrap().dim_s, 2);
        assert_eq!(dim_spaces(2, 1).unwrap().dim_m, 0);
        assert_eq!(dim_spaces(4, 1).unwrap().dim_m, 1);
        assert!(dim_spaces(3, 5).is_err());
    }

    #[test]
    fn cusps_examples() {
        assert_eq!(enumerate_cusps(1).unwrap().len(), 1);
        let c4 = enumerate_cusps(4).unwrap();
        assert_eq!(c4.iter().map(|c| c.denominator).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(enumerate_cusps(11).unwrap().len(), 2);
        for n in 1..=60 {
            let cs = enumerate_cusps(n).unwrap();
            let inv = gamma0_invariants(n).unwrap();
            assert_eq!(cs.len() as u64, inv.nu_inf);
            assert_eq!(cs.iter().map(|c| c.width).sum::<u64>(), inv.index);
        }
    }
}
