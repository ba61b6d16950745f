use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::operators::{eigenvalue_of, hecke_matrix, hecke_prec, quotient_hecke, HeckeMatrix};
use super::orbits::{
    almost_all_check, check_rng, eigensystem_key, isotypic_decompose, simple_by_combination,
    AlmostAllReport, EigenSystemKey, OrbitComponent,
};
use crate::arith::{divisors, factor, gcd, num_divisors, primes_up_to};
use crate::atkinlehner::{degeneracy_i, DegeneracySpec, QuotientSpace};
use crate::error::{Error, Result};
use crate::exactlin::{invariant_block_decomposition, RatMatrix, Subspace};
use crate::qseries::{sturm_bound, QExpansion};
use crate::rational::Q;
use crate::report::Verdict;
use crate::spaces::{SpaceBasis, SpaceStore};

#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub dim: usize,
    pub simple: bool,
    pub draws: Option<usize>,
    pub c1_nonzero: bool,
    /// Indices `m` at which `c_m = λ_m c_1` was checked (rational blocks only).
    pub checked_m: Vec<u64>,
    pub coefficients_match: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultOneReport {
    pub k: u32,
    #[serde(rename = "N")]
    pub level: u64,
    pub primes: Vec<u64>,
    pub dim_space: usize,
    pub dim_quotient: usize,
    pub blocks: Vec<BlockReport>,
    pub verdict: Verdict,
}

/// Indices `m <= bound` prime to `N` whose prime factors all lie in `primes`.
fn closure_indices(bound: usize, n: u64, primes: &[u64]) -> Vec<u64> {
    (1..=bound as u64)
        .filter(|&m| gcd(m, n) == 1 && factor(m).iter().all(|(p, _)| primes.contains(p)))
        .collect()
}

/// Multiplicity one on S_k(Γ0(N))/K_0(N): every rational block of the
/// quotient is a simple module, and rational eigenforms satisfy
/// `c_m = λ_m c_1`.
pub fn mult_one_check(
    quotient: &QuotientSpace,
    ops: &[HeckeMatrix],
    seed: u64,
) -> Result<MultOneReport> {
    let amb = quotient.ambient();
    let (k, n) = (amb.weight(), amb.level());
    let primes: Vec<u64> = ops.iter().map(|t| t.m).collect();
    let mut report = MultOneReport {
        k,
        level: n,
        primes: primes.clone(),
        dim_space: amb.dim(),
        dim_quotient: quotient.dim(),
        blocks: Vec::new(),
        verdict: Verdict::Pass,
    };
    if ops.is_empty() {
        return Err(Error::EmptyPrimeList);
    }
    let qmats = ops
        .iter()
        .map(|t| quotient_hecke(t, quotient))
        .collect::<Result<Vec<_>>>()?;
    if quotient.dim() == 0 {
        return Ok(report);
    }
    let blocks = invariant_block_decomposition(&qmats, seed)?;
    let mut rng = check_rng(seed);
    let bound = sturm_bound(k, n)?.min(amb.prec());
    for block in blocks {
        let local = qmats
            .iter()
            .map(|m| block.restrict(m))
            .collect::<Result<Vec<RatMatrix>>>()?;
        let draws = simple_by_combination(&local, &mut rng)?;
        let c1s = (0..block.dim())
            .map(|i| quotient.coefficient(block.basis().row(i), 1))
            .collect::<Result<Vec<Q>>>()?;
        let c1_nonzero = c1s.iter().any(|c| !num_traits::Zero::is_zero(c));
        let mut checked_m = Vec::new();
        let mut coefficients_match = true;
        if block.dim() == 1 && c1_nonzero {
            let v = block.basis().row(0);
            let c1 = &c1s[0];
            let lambdas: BTreeMap<u64, Q> = primes
                .iter()
                .zip(&local)
                .map(|(&p, m)| (p, m.get(0, 0).clone()))
                .collect();
            for m in closure_indices(bound, n, &primes) {
                let lm = eigenvalue_of(k, m, |p| lambdas.get(&p).cloned())
                    .expect("closure indices only use supplied primes");
                coefficients_match &= quotient.coefficient(v, m as usize)? == lm * c1;
                checked_m.push(m);
            }
        }
        report.blocks.push(BlockReport {
            dim: block.dim(),
            simple: draws.is_some(),
            draws,
            c1_nonzero,
            checked_m,
            coefficients_match,
        });
    }
    report.verdict = Verdict::all(
        report
            .blocks
            .iter()
            .map(|b| Verdict::from_bool(b.simple && b.c1_nonzero && b.coefficients_match)),
    );
    Ok(report)
}

/// A cusp space with its Hecke matrices and orbit components.
#[derive(Clone, Debug)]
pub struct LevelDecomposition {
    pub weight: u32,
    pub level: u64,
    pub primes: Vec<u64>,
    pub space: Arc<SpaceBasis>,
    pub hecke: Vec<HeckeMatrix>,
    pub components: Vec<OrbitComponent>,
}

/// Decomposes S_k(Γ0(N)) under `T_p` for the given primes (all prime to N).
pub fn decompose_level(
    store: &SpaceStore,
    k: u32,
    n: u64,
    primes: &[u64],
    seed: u64,
) -> Result<LevelDecomposition> {
    if primes.is_empty() {
        return Err(Error::EmptyPrimeList);
    }
    let mut prec = sturm_bound(k, n)?;
    for &p in primes {
        prec = prec.max(hecke_prec(k, n, p)?);
    }
    let space = store.cusp_space(k, n, prec)?;
    let hecke = primes
        .iter()
        .map(|&p| hecke_matrix(&space, p))
        .collect::<Result<Vec<_>>>()?;
    let components = if space.dim() == 0 {
        Vec::new()
    } else {
        isotypic_decompose(&hecke, seed)?
    };
    Ok(LevelDecomposition {
        weight: k,
        level: n,
        primes: primes.to_vec(),
        space,
        hecke,
        components,
    })
}

/// Default primes for comparing eigensystems up to level `m`:
/// `p <= sturm_bound(k, M)` with `p ∤ M`.
pub fn matching_primes(k: u32, m: u64) -> Result<Vec<u64>> {
    let bound = sturm_bound(k, m)? as u64;
    Ok(primes_up_to(bound).into_iter().filter(|&p| m % p != 0).collect())
}

/// Decompositions at every divisor of `M` with a common prime set.
pub fn divisor_levels(
    store: &SpaceStore,
    k: u32,
    m: u64,
    primes: &[u64],
    seed: u64,
) -> Result<BTreeMap<u64, LevelDecomposition>> {
    divisors(m)
        .into_iter()
        .map(|d| Ok((d, decompose_level(store, k, d, primes, seed)?)))
        .collect()
}

/// Smallest level dividing `M` at which the eigensystem of `c` occurs,
/// with the index of the matching orbit there.
pub fn minimal_level(
    c: &OrbitComponent,
    levels: &BTreeMap<u64, LevelDecomposition>,
) -> Result<(u64, usize)> {
    let m = c.level;
    let primes = &levels
        .get(&m)
        .ok_or_else(|| Error::MissingData {
            k: c.weight,
            n: m,
            what: "decomposition at the top level".into(),
        })?
        .primes;
    let key = eigensystem_key(c, m, primes)?;
    let mut matches: Vec<(u64, usize)> = Vec::new();
    for d in divisors(m) {
        let lvl = levels.get(&d).ok_or_else(|| Error::MissingData {
            k: c.weight,
            n: d,
            what: "decomposition at a divisor level".into(),
        })?;
        let found: Vec<usize> = lvl
            .components
            .iter()
            .enumerate()
            .filter(|(_, o)| eigensystem_key(o, m, primes).map(|k| k == key).unwrap_or(false))
            .map(|(i, _)| i)
            .collect();
        if found.len() > 1 {
            return Err(Error::UniquenessViolation(format!(
                "{} orbits at level {d} share the eigensystem of a level-{m} component",
                found.len()
            )));
        }
        if let Some(&i) = found.first() {
            matches.push((d, i));
        }
    }
    let minimal: Vec<(u64, usize)> = matches
        .iter()
        .copied()
        .filter(|&(d, _)| !matches.iter().any(|&(e, _)| e != d && d % e == 0))
        .collect();
    match minimal.as_slice() {
        [one] => Ok(*one),
        [] => Err(Error::UniquenessViolation(format!(
            "no level dividing {m} carries the eigensystem"
        ))),
        many => Err(Error::UniquenessViolation(format!(
            "incomparable minimal levels {:?}",
            many.iter().map(|x| x.0).collect::<Vec<_>>()
        ))),
    }
}

/// `Σ_{d | M/N} i_d(W)` for an orbit `W` at level `N`, in echelon
/// coordinates of S_k(Γ0(M)); also returns the rank of the concatenated
/// images before echelonization.
pub fn transport(
    src: &LevelDecomposition,
    orbit: &Subspace,
    target: &LevelDecomposition,
) -> Result<(Subspace, usize)> {
    let (n, m) = (src.level, target.level);
    if m % n != 0 {
        return Err(Error::Divisibility(format!("{n} does not divide {m}")));
    }
    let ds = divisors(m / n);
    let src_prec = src.space.prec();
    let window = ds
        .iter()
        .map(|&d| d as usize * (src_prec + 1) - 1)
        .min()
        .unwrap_or(src_prec)
        .min(target.space.prec());
    let sturm = sturm_bound(target.weight, m)?;
    if window < sturm {
        return Err(Error::InsufficientPrecision {
            needed: sturm,
            have: window,
        });
    }
    let tgt = target.space.truncate(window)?;
    let forms = if orbit.is_zero() {
        RatMatrix::zeros(0, src_prec + 1)
    } else {
        orbit.basis().mul(src.space.basis())?
    };
    let mut coords = Vec::new();
    for &d in &ds {
        let spec = DegeneracySpec::new(n, m, d)?;
        for i in 0..forms.rows() {
            let f = QExpansion::new(src.weight, n, forms.row(i).to_vec())?;
            let g = degeneracy_i(&f, spec, window)?;
            let c = tgt.subspace().coordinates(g.coeffs()).ok_or_else(|| {
                Error::Theorem2Violation(format!(
                    "i_{d} of an orbit at level {n} is not in S_k(Γ0({m})) at prec {window}"
                ))
            })?;
            coords.push(c);
        }
    }
    let mat = RatMatrix::from_rows(target.space.dim(), coords);
    let rank = mat.rank();
    Ok((Subspace::row_space(&mat), rank))
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitT2 {
    pub dim: usize,
    pub minimal_level: u64,
    pub new_dim: usize,
    pub new_simple: bool,
    pub multiplicity: u64,
    pub direct: bool,
    pub equal: bool,
    pub key: EigenSystemKey,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem2Report {
    pub k: u32,
    #[serde(rename = "M")]
    pub level: u64,
    pub primes: Vec<u64>,
    pub dim_space: usize,
    pub orbits: Vec<OrbitT2>,
    pub exhaustive: bool,
    pub verdict: Verdict,
}

/// Theorem 2 at level `M`: each orbit component equals
/// `⊕_{d | M/N0} i_d(W)` for the new orbit `W` at its minimal level `N0`.
pub fn verify_theorem2(
    store: &SpaceStore,
    k: u32,
    m: u64,
    primes: Option<&[u64]>,
    seed: u64,
) -> Result<Theorem2Report> {
    let primes = match primes {
        Some(p) => p.to_vec(),
        None => matching_primes(k, m)?,
    };
    let levels = divisor_levels(store, k, m, &primes, seed)?;
    theorem2_from_levels(&levels, m, seed)
}

pub fn theorem2_from_levels(
    levels: &BTreeMap<u64, LevelDecomposition>,
    m: u64,
    seed: u64,
) -> Result<Theorem2Report> {
    let top = &levels[&m];
    let mut rng = check_rng(seed);
    let mut orbits = Vec::new();
    for c in &top.components {
        let (n0, j) = minimal_level(c, levels)?;
        let src = &levels[&n0];
        let w = &src.components[j];
        let local = src
            .hecke
            .iter()
            .map(|t| w.subspace.restrict(&t.matrix))
            .collect::<Result<Vec<_>>>()?;
        let new_simple = simple_by_combination(&local, &mut rng)?.is_some();
        let multiplicity = num_divisors(m / n0);
        let (sum, rank) = transport(src, &w.subspace, top)?;
        let direct = rank as u64 == multiplicity * w.dim() as u64;
        let equal = sum == c.subspace;
        orbits.push(OrbitT2 {
            dim: c.dim(),
            minimal_level: n0,
            new_dim: w.dim(),
            new_simple,
            multiplicity,
            direct,
            equal,
            key: eigensystem_key(c, m, &top.primes)?,
            verdict: Verdict::from_bool(new_simple && direct && equal),
        });
    }
    let exhaustive = orbits.iter().map(|o| o.dim).sum::<usize>() == top.space.dim();
    let verdict = Verdict::from_bool(exhaustive && orbits.iter().all(|o| o.verdict.is_pass()));
    Ok(Theorem2Report {
        k: top.weight,
        level: m,
        primes: top.primes.clone(),
        dim_space: top.space.dim(),
        orbits,
        exhaustive,
        verdict,
    })
}

/// Almost-all checks between every component at level `M` and every orbit
/// at a divisor level transported up to `M`, for each modulus `D`.
/// Moduli that leave no compared prime prime to `M·D` are returned
/// separately and not checked.
pub fn almost_all_pairs(
    levels: &BTreeMap<u64, LevelDecomposition>,
    m: u64,
    moduli: &[u64],
) -> Result<(Vec<AlmostAllReport>, Vec<u64>)> {
    let top = &levels[&m];
    let (usable, skipped): (Vec<u64>, Vec<u64>) = moduli
        .iter()
        .partition(|&&d| top.primes.iter().any(|&p| gcd(p, m * d) == 1));
    let mut transported = Vec::new();
    for (_, lvl) in levels.iter() {
        for o in &lvl.components {
            let (sum, _) = transport(lvl, &o.subspace, top)?;
            transported.push(OrbitComponent::from_subspace(top.weight, m, sum, &top.hecke)?);
        }
    }
    let mut out = Vec::new();
    for c in &top.components {
        for t in &transported {
            for &d in &usable {
                out.push(almost_all_check(c, t, d, &top.primes)?);
            }
        }
    }
    Ok((out, skipped))
}

#[derive(Clone, Debug, Serialize)]
pub struct NewformOrbit {
    pub dim: usize,
    pub minimal_level: u64,
    pub is_new: bool,
    pub charpolys: BTreeMap<u64, Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NewformsReport {
    pub k: u32,
    #[serde(rename = "N")]
    pub level: u64,
    pub primes: Vec<u64>,
    pub dim_space: usize,
    pub orbits: Vec<NewformOrbit>,
}

/// Orbit inventory of S_k(Γ0(N)) with minimal levels.
pub fn newform_inventory(
    store: &SpaceStore,
    k: u32,
    n: u64,
    primes: Option<&[u64]>,
    seed: u64,
) -> Result<NewformsReport> {
    let primes = match primes {
        Some(p) => p.to_vec(),
        None => matching_primes(k, n)?,
    };
    if let Some(&p) = primes.iter().find(|&&p| gcd(p, n) != 1) {
        return Err(Error::Divisibility(format!("T_{p} at level {n}")));
    }
    let levels = divisor_levels(store, k, n, &primes, seed)?;
    let top = &levels[&n];
    let mut orbits = Vec::new();
    for c in &top.components {
        let (n0, _) = minimal_level(c, &levels)?;
        orbits.push(NewformOrbit {
            dim: c.dim(),
            minimal_level: n0,
            is_new: n0 == n,
            charpolys: c
                .charpolys
                .iter()
                .map(|(p, f)| (*p, f.descending_strings()))
                .collect(),
        });
    }
    Ok(NewformsReport {
        k,
        level: n,
        primes,
        dim_space: top.space.dim(),
        orbits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_examples() {
        assert_eq!(closure_indices(10, 22, &[3, 5, 7]), vec![1, 3, 5, 7, 9]);
        assert_eq!(closure_indices(5, 1, &[2]), vec![1, 2, 4]);
    }

    #[test]
    fn level_one_weight_twelve() {
        let store = SpaceStore::new("/nonexistent");
        let r = verify_theorem2(&store, 12, 1, None, 1).unwrap();
        assert!(r.verdict.is_pass());
        assert_eq!(r.orbits.len(), 1);
        assert_eq!(r.orbits[0].minimal_level, 1);
    }

    #[test]
    fn weight_four_level_ten() {
        let store = SpaceStore::new("/nonexistent");
        let r = verify_theorem2(&store, 4, 10, None, 1).unwrap();
        assert!(r.verdict.is_pass(), "{r:?}");
        let inv = newform_inventory(&store, 4, 10, None, 1).unwrap();
        let mut lv: Vec<u64> = inv.orbits.iter().map(|o| o.minimal_level).collect();
        lv.sort_unstable();
        assert_eq!(lv, vec![5, 10]);
        let s = store.cusp_space(4, 10, 7 * 7).unwrap();
        let q = QuotientSpace::new(s.clone());
        let ops = vec![hecke_matrix(&s, 3).unwrap(), hecke_matrix(&s, 7).unwrap()];
        let mo = mult_one_check(&q, &ops, 5).unwrap();
        assert!(mo.verdict.is_pass(), "{mo:?}");
        assert_eq!(mo.dim_quotient, 2);
    }
}
