//! Desk-scale grids and parallel runners with deterministic `(k, N)` ordering.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::primes_coprime_to;
use crate::atkinlehner::{verify_theorem1, QuotientSpace, Theorem1Report};
use crate::error::{Error, Result};
use crate::hecke::{
    almost_all_pairs, divisor_levels, hecke_matrix, matching_primes, mult_one_check,
    theorem2_from_levels, AlmostAllReport, LevelDecomposition, MultOneReport, Theorem2Report,
};
use crate::qseries::sturm_bound;
use crate::report::Verdict;
use crate::spaces::{dim_spaces, parse_basis, render_basis, SpaceStore, Source};

pub const GRID_WEIGHTS: [u32; 5] = [2, 4, 6, 8, 12];
pub const GRID_MAX_LEVEL: u64 = 40;
/// Weight-2 levels beyond the square grid used by the Theorem 1 and 2 checks.
pub const EXTRA_LEVELS: [(u32, u64); 2] = [(2, 44), (2, 55)];
pub const THEOREM2_LEVELS: [(u32, u64); 5] = [(2, 22), (2, 33), (2, 44), (2, 55), (12, 1)];
pub const ALMOST_ALL_MODULI: [u64; 2] = [2, 3];
/// Default seed for every randomized step.
pub const DEFAULT_SEED: u64 = 20240607;

pub fn grid_points() -> Vec<(u32, u64)> {
    GRID_WEIGHTS
        .iter()
        .flat_map(|&k| (1..=GRID_MAX_LEVEL).map(move |n| (k, n)))
        .collect()
}

/// The square grid plus the extra weight-2 levels.
pub fn extended_grid_points() -> Vec<(u32, u64)> {
    let mut pts = grid_points();
    pts.extend(EXTRA_LEVELS);
    pts
}

/// The two smallest primes not dividing `N`.
pub fn grid_primes(n: u64) -> Vec<u64> {
    primes_coprime_to(n, 2)
}

/// Precision at which both grid Hecke operators act: `p_2 · sturm(k, N)`.
pub fn working_prec(k: u32, n: u64) -> Result<usize> {
    Ok(grid_primes(n)[1] as usize * sturm_bound(k, n)?)
}

/// Precision used for shipped fixtures. Weight-2 cusp spaces carry
/// `17 · sturm` coefficients, enough for T_p with p ≤ 17.
pub fn fixture_prec(k: u32, n: u64, cuspidal: bool) -> Result<usize> {
    let sturm = sturm_bound(k, n)?;
    Ok(match (cuspidal, k) {
        (false, _) => 2 * sturm,
        (true, 2) => 17 * sturm,
        (true, _) => working_prec(k, n)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub code: &'static str,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        ErrorInfo {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

pub trait HasVerdict {
    fn verdict(&self) -> Verdict;
}

impl HasVerdict for Theorem1Report {
    fn verdict(&self) -> Verdict {
        self.verdict
    }
}

impl HasVerdict for MultOneReport {
    fn verdict(&self) -> Verdict {
        self.verdict
    }
}

impl HasVerdict for Theorem2Report {
    fn verdict(&self) -> Verdict {
        self.verdict
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridEntry<T> {
    pub k: u32,
    #[serde(rename = "N")]
    pub level: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridReport<T> {
    pub name: &'static str,
    pub total: usize,
    pub passed: usize,
    pub entries: Vec<GridEntry<T>>,
    pub verdict: Verdict,
}

impl<T> GridReport<T> {
    pub fn failures(&self) -> impl Iterator<Item = &GridEntry<T>> {
        self.entries.iter().filter(|e| !e.verdict.is_pass())
    }
}

fn run_grid<T, F>(name: &'static str, points: &[(u32, u64)], f: F) -> GridReport<T>
where
    T: HasVerdict + Send,
    F: Fn(u32, u64) -> Result<T> + Sync,
{
    let entries: Vec<GridEntry<T>> = points
        .par_iter()
        .map(|&(k, n)| match f(k, n) {
            Ok(r) => GridEntry {
                k,
                level: n,
                verdict: r.verdict(),
                report: Some(r),
                error: None,
            },
            Err(e) => GridEntry {
                k,
                level: n,
                report: None,
                error: Some(ErrorInfo::from(&e)),
                verdict: Verdict::Fail,
            },
        })
        .collect();
    let passed = entries.iter().filter(|e| e.verdict.is_pass()).count();
    GridReport {
        name,
        total: entries.len(),
        passed,
        verdict: Verdict::from_bool(passed == entries.len()),
        entries,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceEntry {
    pub source: Source,
    pub generation_failed: bool,
    pub prec: usize,
    pub rank: usize,
    pub expected: usize,
    pub round_trip: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionReport {
    pub full: SpaceEntry,
    pub cusp: SpaceEntry,
    pub verdict: Verdict,
}

impl HasVerdict for ConstructionReport {
    fn verdict(&self) -> Verdict {
        self.verdict
    }
}

fn space_entry(store: &SpaceStore, k: u32, n: u64, cuspidal: bool, prec: usize) -> Result<SpaceEntry> {
    let dims = dim_spaces(k, n)?;
    let b = store.space(k, n, cuspidal, prec)?;
    let text = render_basis(&b);
    let back = parse_basis(&text)?;
    Ok(SpaceEntry {
        source: b.source(),
        generation_failed: store.generation_failed(k, n, cuspidal),
        prec: b.prec(),
        rank: b.basis().rank(),
        expected: if cuspidal { dims.dim_s } else { dims.dim_m },
        round_trip: back.basis() == b.basis() && render_basis(&back) == text,
    })
}

/// Builds (or loads) M_k and S_k at every grid point, checking ranks and
/// export/ingest round trips.
pub fn construction_grid(store: &SpaceStore, points: &[(u32, u64)]) -> GridReport<ConstructionReport> {
    run_grid("spaces", points, |k, n| {
        let full = space_entry(store, k, n, false, 2 * sturm_bound(k, n)?)?;
        let cusp = space_entry(store, k, n, true, working_prec(k, n)?)?;
        let ok = |e: &SpaceEntry| e.rank == e.expected && e.round_trip;
        Ok(ConstructionReport {
            verdict: Verdict::from_bool(ok(&full) && ok(&cusp)),
            full,
            cusp,
        })
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutationReport {
    pub primes: Vec<u64>,
    pub dim: usize,
    pub commute: bool,
    pub verdict: Verdict,
}

impl HasVerdict for CommutationReport {
    fn verdict(&self) -> Verdict {
        self.verdict
    }
}

/// `T_p T_q = T_q T_p` for the two grid primes on every cusp space.
pub fn commutation_grid(store: &SpaceStore, points: &[(u32, u64)]) -> GridReport<CommutationReport> {
    run_grid("hecke-commutation", points, |k, n| {
        let primes = grid_primes(n);
        let s = store.cusp_space(k, n, working_prec(k, n)?)?;
        let a = hecke_matrix(&s, primes[0])?.matrix;
        let b = hecke_matrix(&s, primes[1])?.matrix;
        let commute = a.commutes_with(&b)?;
        Ok(CommutationReport {
            primes,
            dim: s.dim(),
            commute,
            verdict: Verdict::from_bool(commute),
        })
    })
}

/// Theorem 1 over `points` for cusp forms (`cuspidal`) or the full space.
pub fn theorem1_grid(
    store: &SpaceStore,
    points: &[(u32, u64)],
    cuspidal: bool,
) -> GridReport<Theorem1Report> {
    let name = if cuspidal { "theorem1-cusp" } else { "theorem1-full" };
    run_grid(name, points, |k, n| {
        let prec = if cuspidal {
            working_prec(k, n)?
        } else {
            2 * sturm_bound(k, n)?
        };
        verify_theorem1(store, k, n, cuspidal, prec, false)
    })
}

/// Multiplicity one on every grid quotient with the two grid primes.
pub fn mult_one_grid(
    store: &SpaceStore,
    points: &[(u32, u64)],
    seed: u64,
) -> GridReport<MultOneReport> {
    run_grid("mult-one", points, |k, n| {
        let s = store.cusp_space(k, n, working_prec(k, n)?)?;
        let ops = grid_primes(n)
            .into_iter()
            .map(|p| hecke_matrix(&s, p))
            .collect::<Result<Vec<_>>>()?;
        mult_one_check(&QuotientSpace::new(s), &ops, seed)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelChecks {
    pub theorem2: Theorem2Report,
    pub almost_all: Vec<AlmostAllReport>,
    /// Moduli with no compared prime prime to `M·D`.
    pub almost_all_skipped: Vec<u64>,
    pub verdict: Verdict,
}

impl HasVerdict for LevelChecks {
    fn verdict(&self) -> Verdict {
        self.verdict
    }
}

/// Theorem 2 and the almost-all checks at one level.
pub fn level_checks(store: &SpaceStore, k: u32, m: u64, seed: u64) -> Result<LevelChecks> {
    let primes = matching_primes(k, m)?;
    let levels = divisor_levels(store, k, m, &primes, seed)?;
    checks_from_levels(&levels, m, seed)
}

/// Theorem 2 and the almost-all checks from decomposed divisor levels.
pub fn checks_from_levels(
    levels: &BTreeMap<u64, LevelDecomposition>,
    m: u64,
    seed: u64,
) -> Result<LevelChecks> {
    let theorem2 = theorem2_from_levels(levels, m, seed)?;
    let (almost_all, almost_all_skipped) = almost_all_pairs(levels, m, &ALMOST_ALL_MODULI)?;
    let verdict = Verdict::from_bool(
        theorem2.verdict.is_pass() && almost_all.iter().all(|r| r.verdict.is_pass()),
    );
    Ok(LevelChecks {
        theorem2,
        almost_all,
        almost_all_skipped,
        verdict,
    })
}

pub fn theorem2_grid(store: &SpaceStore, points: &[(u32, u64)], seed: u64) -> GridReport<LevelChecks> {
    run_grid("theorem2", points, |k, m| level_checks(store, k, m, seed))
}
