use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::operators::HeckeMatrix;
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::exactlin::{
    charpoly, invariant_block_decomposition, random_combination, QPoly, RatMatrix, Subspace,
    MAX_DRAWS,
};
use crate::report::Verdict;

/// A rationally irreducible 𝕋^N-invariant subspace (a Galois orbit of
/// eigenforms, possibly with its oldform copies).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitComponent {
    pub weight: u32,
    pub level: u64,
    /// Subspace in echelon coordinates of the ambient space.
    pub subspace: Subspace,
    /// Characteristic polynomial of `T_p` restricted to the subspace.
    pub charpolys: BTreeMap<u64, QPoly>,
    /// The irreducible whose power is the restricted characteristic polynomial.
    pub irreducibles: BTreeMap<u64, QPoly>,
    pub minimal_level: Option<u64>,
    pub is_new: Option<bool>,
}

impl OrbitComponent {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    /// Builds a component from an invariant subspace and the operators it
    /// is invariant under.
    pub fn from_subspace(
        weight: u32,
        level: u64,
        subspace: Subspace,
        ops: &[HeckeMatrix],
    ) -> Result<Self> {
        let mut charpolys = BTreeMap::new();
        let mut irreducibles = BTreeMap::new();
        for t in ops {
            let local = subspace.restrict(&t.matrix)?;
            let cp = charpoly(&local);
            let base = cp.irreducible_base().ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "T_{} on a component of dim {} has charpoly {cp}, not a power of one irreducible",
                    t.m,
                    subspace.dim()
                ))
            })?;
            charpolys.insert(t.m, cp);
            irreducibles.insert(t.m, base);
        }
        Ok(OrbitComponent {
            weight,
            level,
            subspace,
            charpolys,
            irreducibles,
            minimal_level: None,
            is_new: None,
        })
    }

    fn sort_key(&self) -> (usize, Vec<&QPoly>, &[usize]) {
        (self.dim(), self.charpolys.values().collect(), self.subspace.pivots())
    }
}

/// Splits the space acted on by `ops` into orbit components, ordered by
/// dimension, then characteristic polynomials.
pub fn isotypic_decompose(ops: &[HeckeMatrix], seed: u64) -> Result<Vec<OrbitComponent>> {
    let first = ops.first().ok_or(Error::EmptyPrimeList)?;
    for t in ops {
        if t.level != first.level || t.weight != first.weight {
            return Err(Error::TagMismatch("Hecke matrices from different spaces".into()));
        }
        if gcd(t.m, t.level) != 1 {
            return Err(Error::Divisibility(format!("T_{} at level {}", t.m, t.level)));
        }
    }
    let mats: Vec<RatMatrix> = ops.iter().map(|t| t.matrix.clone()).collect();
    let blocks = invariant_block_decomposition(&mats, seed)?;
    let mut comps = blocks
        .into_iter()
        .map(|b| OrbitComponent::from_subspace(first.weight, first.level, b, ops))
        .collect::<Result<Vec<_>>>()?;
    comps.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(comps)
}

/// Whether some seeded random combination of `mats` has a squarefree
/// characteristic polynomial of full degree, i.e. the module is simple.
/// Returns the number of draws used on success.
pub fn simple_by_combination(mats: &[RatMatrix], rng: &mut ChaCha8Rng) -> Result<Option<usize>> {
    let n = match mats.first() {
        Some(m) => m.rows(),
        None => return Err(Error::EmptyPrimeList),
    };
    if n <= 1 {
        return Ok(Some(0));
    }
    for draw in 1..=MAX_DRAWS {
        let c = random_combination(mats, rng)?;
        let cp = charpoly(&c);
        if cp.degree() == n && cp.is_irreducible() {
            return Ok(Some(draw));
        }
    }
    Ok(None)
}

/// Level-independent fingerprint of an eigensystem: the irreducible factor
/// of the `T_p` characteristic polynomial at each compared prime.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EigenSystemKey {
    pub entries: Vec<(u64, QPoly)>,
}

impl Serialize for EigenSystemKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<u64, Vec<String>> = self
            .entries
            .iter()
            .map(|(p, f)| (*p, f.descending_strings()))
            .collect();
        map.serialize(s)
    }
}

/// Key over the primes of `primes` that are prime to `N·D`.
pub fn eigensystem_key(c: &OrbitComponent, exclude: u64, primes: &[u64]) -> Result<EigenSystemKey> {
    if primes.is_empty() {
        return Err(Error::EmptyPrimeList);
    }
    let mut ps: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| gcd(p, c.level * exclude.max(1)) == 1)
        .collect();
    ps.sort_unstable();
    ps.dedup();
    if ps.is_empty() {
        return Err(Error::EmptyPrimeList);
    }
    let entries = ps
        .into_iter()
        .map(|p| {
            c.irreducibles
                .get(&p)
                .map(|f| (p, f.clone()))
                .ok_or(Error::MissingCharpoly(p))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenSystemKey { entries })
}

#[derive(Clone, Debug, Serialize)]
pub struct AlmostAllReport {
    #[serde(rename = "N")]
    pub level: u64,
    #[serde(rename = "D")]
    pub modulus: u64,
    pub dims: (usize, usize),
    pub keys_agree: bool,
    /// Primes `p | D`, `p ∤ N` at which agreement was additionally checked.
    pub checked_primes: Vec<u64>,
    pub verdict: Verdict,
}

/// If two components at the same level agree at every compared prime away
/// from `D`, they must also agree at the compared primes dividing `D`.
pub fn almost_all_check(
    a: &OrbitComponent,
    b: &OrbitComponent,
    modulus: u64,
    primes: &[u64],
) -> Result<AlmostAllReport> {
    if a.level != b.level {
        return Err(Error::TagMismatch(format!(
            "components at levels {} and {}",
            a.level, b.level
        )));
    }
    let keys_agree = eigensystem_key(a, modulus, primes)? == eigensystem_key(b, modulus, primes)?;
    let mut checked_primes = Vec::new();
    let mut ok = true;
    if keys_agree {
        for &p in primes {
            if modulus % p == 0 && gcd(p, a.level) == 1 {
                let fa = a.irreducibles.get(&p).ok_or(Error::MissingCharpoly(p))?;
                let fb = b.irreducibles.get(&p).ok_or(Error::MissingCharpoly(p))?;
                ok &= fa == fb;
                checked_primes.push(p);
            }
        }
    }
    Ok(AlmostAllReport {
        level: a.level,
        modulus,
        dims: (a.dim(), b.dim()),
        keys_agree,
        checked_primes,
        verdict: Verdict::from_bool(ok),
    })
}

/// Seeded generator used for simplicity checks.
pub fn check_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
