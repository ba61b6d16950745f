//! Candidate generators for M_k(Γ0(N)): level-raised Eisenstein series,
//! the weight-2 forms `E_2(q) - d E_2(q^d)`, and their pairwise products.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::gamma0::Cusp;
use crate::arith::{divisors, gcd};
use crate::qseries::{eisenstein_constant, sigma_table};
use crate::rational::{q_frac, q_int, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Factor {
    /// `E_k(q^d)` for even `k >= 4`.
    Eisenstein { k: u32, d: u64 },
    /// `E_2(q) - d E_2(q^d)` for `d >= 2`.
    Phi2 { d: u64 },
}

impl Factor {
    pub fn weight(&self) -> u32 {
        match *self {
            Factor::Eisenstein { k, .. } => k,
            Factor::Phi2 { .. } => 2,
        }
    }

    /// Constant term at a cusp with denominator `c`, normalized so that the
    /// value at infinity is the `q^0` coefficient.
    pub fn constant_term(&self, c: u64) -> Q {
        match *self {
            Factor::Eisenstein { k, d } => {
                let r = q_frac(gcd(c, d) as i64, d as i64);
                num_traits::pow(r, k as usize)
            }
            Factor::Phi2 { d } => {
                let g = gcd(c, d) as i64;
                q_int(1) - q_frac(g * g, d as i64)
            }
        }
    }

    /// Integer multiple `s·F` of the factor series and the scale `s`.
    fn integer_series(&self, prec: usize, sigma: &mut SigmaCache) -> (Vec<BigInt>, BigInt) {
        let (k, d) = match *self {
            Factor::Eisenstein { k, d } => (k, d),
            Factor::Phi2 { d } => (2, d),
        };
        let c = eisenstein_constant(k);
        let (num, den) = (c.numer().clone(), c.denom().clone());
        let sig = sigma.get(k - 1, prec);
        let d = d as usize;
        let mut out = vec![BigInt::zero(); prec + 1];
        match self {
            Factor::Eisenstein { .. } => {
                out[0] = den.clone();
                for m in (d..=prec).step_by(d) {
                    out[m] = &num * &sig[m / d];
                }
            }
            Factor::Phi2 { .. } => {
                // E_2 has integer coefficients (den = 1)
                debug_assert!(den.is_one());
                out[0] = BigInt::from(1 - d as i64);
                for m in 1..=prec {
                    out[m] = &num * &sig[m];
                }
                for m in (d..=prec).step_by(d) {
                    out[m] -= &num * &sig[m / d] * BigInt::from(d);
                }
            }
        }
        (out, den)
    }
}

#[derive(Default)]
struct SigmaCache(HashMap<u32, Vec<BigInt>>);

impl SigmaCache {
    fn get(&mut self, e: u32, prec: usize) -> &[BigInt] {
        let entry = self.0.entry(e).or_default();
        if entry.len() < prec + 1 {
            *entry = sigma_table(e, prec);
        }
        &entry[..=prec]
    }
}

/// A product of one or two factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Generator {
    pub factors: Vec<Factor>,
}

impl Generator {
    pub fn weight(&self) -> u32 {
        self.factors.iter().map(Factor::weight).sum()
    }

    /// Constant term at each cusp (same order as `cusps`).
    pub fn cusp_constant_terms(&self, cusps: &[Cusp]) -> Vec<Q> {
        cusps
            .iter()
            .map(|cusp| {
                self.factors
                    .iter()
                    .fold(q_int(1), |acc, f| acc * f.constant_term(cusp.denominator))
            })
            .collect()
    }
}

fn factors_of_weight(w: u32, n: u64) -> Vec<Factor> {
    let ds = divisors(n);
    if w == 2 {
        ds.into_iter().filter(|&d| d >= 2).map(|d| Factor::Phi2 { d }).collect()
    } else {
        ds.into_iter().map(|d| Factor::Eisenstein { k: w, d }).collect()
    }
}

/// All single factors of weight `k` and all unordered pairs of factors whose
/// weights add to `k`, in a fixed order.
pub fn list_generators(k: u32, n: u64) -> Vec<Generator> {
    let mut out: Vec<Generator> = factors_of_weight(k, n)
        .into_iter()
        .map(|f| Generator { factors: vec![f] })
        .collect();
    for a in (2..=k / 2).step_by(2) {
        let b = k - a;
        let fa = factors_of_weight(a, n);
        let fb = factors_of_weight(b, n);
        for (i, x) in fa.iter().enumerate() {
            let start = if a == b { i } else { 0 };
            for y in &fb[start..] {
                out.push(Generator {
                    factors: vec![*x, *y],
                });
            }
        }
    }
    out
}

/// Evaluates generators as integer series `s_j · g_j` through `q^prec`;
/// returns the series and the scales `s_j`.
pub fn integer_series(gens: &[Generator], prec: usize) -> Vec<(Vec<BigInt>, BigInt)> {
    let mut sigma = SigmaCache::default();
    let mut factor_cache: HashMap<Factor, (Vec<BigInt>, BigInt)> = HashMap::new();
    gens.iter()
        .map(|g| {
            let parts: Vec<(Vec<BigInt>, BigInt)> = g
                .factors
                .iter()
                .map(|f| {
                    factor_cache
                        .entry(*f)
                        .or_insert_with(|| f.integer_series(prec, &mut sigma))
                        .clone()
                })
                .collect();
            parts
                .into_iter()
                .reduce(|(a, sa), (b, sb)| (convolve(&a, &b, prec), sa * sb))
                .expect("generator has a factor")
        })
        .collect()
}

fn convolve(a: &[BigInt], b: &[BigInt], prec: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); prec + 1];
    let nz_b: Vec<(usize, &BigInt)> = b.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for &(j, y) in &nz_b {
            if i + j > prec {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}
