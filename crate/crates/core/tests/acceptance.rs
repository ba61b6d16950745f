mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::p1_size;
use mfcore::exactlin::RatMatrix;
use mfcore::grid::{
    commutation_grid, construction_grid, extended_grid_points, grid_points, level_checks,
    fixture_prec, mult_one_grid, theorem1_grid, theorem2_grid, DEFAULT_SEED, THEOREM2_LEVELS,
};
use mfcore::hecke::hecke_matrix;
use mfcore::rational::q_int;
use mfcore::spaces::{
    enumerate_cusps, export_basis, fixture_name, gamma0_invariants, ingest_basis, parse_basis,
    render_basis, SpaceStore, Source,
};
use mfcore::tensor::{fuzz_lemma_ker, fuzz_lemma_main, FuzzShape};

struct Line {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn lemma_fuzz() -> Line {
    let ((ker, main), t) = timed(|| {
        (
            fuzz_lemma_ker(500, DEFAULT_SEED, FuzzShape::default()),
            fuzz_lemma_main(500, DEFAULT_SEED, FuzzShape::default()),
        )
    });
    Line {
        id: 1,
        name: "tensor lemma fuzz",
        pass: ker.pass() && main.pass() && ker.iters == 500 && main.iters == 500 && t.as_secs() < 60,
        detail: format!(
            "la-ker {}/{}, la-main {}/{}, {:.1}s",
            ker.passed, ker.iters, main.passed, main.iters,
            t.as_secs_f64()
        ),
    }
}

fn gamma0() -> Line {
    let mut bad = Vec::new();
    for n in 1..=100u64 {
        let inv = gamma0_invariants(n).unwrap();
        let widths: u64 = enumerate_cusps(n).unwrap().iter().map(|c| c.width).sum();
        if inv.index != p1_size(n) || widths != inv.index {
            bad.push(n);
        }
    }
    let genus: Vec<u64> = [11, 22, 33].iter().map(|&n| gamma0_invariants(n).unwrap().genus).collect();
    Line {
        id: 2,
        name: "Gamma0(N) invariants",
        pass: bad.is_empty() && genus == [1, 2, 3],
        detail: format!("index/width mismatches {bad:?}, genus(11,22,33) = {genus:?}"),
    }
}

fn fixture_round_trip() -> (usize, Vec<String>) {
    let mut bad = Vec::new();
    let mut count = 0;
    for entry in std::fs::read_dir(data_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        count += 1;
        let text = std::fs::read_to_string(&path).unwrap();
        let ok = parse_basis(&text).map(|b| render_basis(&b) == text).unwrap_or(false);
        if !ok {
            bad.push(path.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    (count, bad)
}

fn export_ingest_round_trip(store: &SpaceStore) -> bool {
    let dir = std::env::temp_dir().join(format!("mfcheck-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut ok = true;
    for (k, n) in [(2u32, 1u64), (2, 37), (4, 10), (12, 1), (6, 40)] {
        for cuspidal in [true, false] {
            let b = store.space(k, n, cuspidal, fixture_prec(k, n, cuspidal).unwrap()).unwrap();
            let path = dir.join(fixture_name(k, n, cuspidal));
            export_basis(&b, &path).unwrap();
            let first = std::fs::read(&path).unwrap();
            let back = ingest_basis(&path).unwrap();
            export_basis(&back, &path).unwrap();
            let second = std::fs::read(&path).unwrap();
            ok &= first == second && back.basis() == b.basis() && back.source() == Source::Fixture;
        }
    }
    std::fs::remove_dir_all(&dir).ok();
    ok
}

fn construction() -> Line {
    let store = SpaceStore::new(data_dir());
    let listed: BTreeSet<(u32, u64)> = include_str!("../../../tools/fixture_levels.txt")
        .lines()
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            Some((it.next()?.parse().ok()?, it.next()?.parse().ok()?))
        })
        .collect();
    let report = construction_grid(&store, &grid_points());
    let mut unflagged = Vec::new();
    let mut from_fixture = 0;
    for e in &report.entries {
        let Some(r) = &e.report else { continue };
        for s in [&r.full, &r.cusp] {
            let flagged = s.generation_failed == (s.source == Source::Fixture);
            let covered = !s.generation_failed || listed.contains(&(e.k, e.level));
            if !flagged || !covered {
                unflagged.push((e.k, e.level));
            }
        }
        if r.full.source == Source::Fixture {
            from_fixture += 1;
        }
    }
    let (files, bad_files) = fixture_round_trip();
    let exported = export_ingest_round_trip(&store);
    Line {
        id: 3,
        name: "space construction",
        pass: report.verdict.is_pass() && unflagged.is_empty() && bad_files.is_empty() && exported,
        detail: format!(
            "{}/{} grid points rank-exact, {} from fixtures, unflagged {:?}, {} fixture files ({} not byte-exact), export/ingest {}",
            report.passed,
            report.total,
            from_fixture,
            unflagged,
            files,
            bad_files.len(),
            if exported { "byte-exact" } else { "differs" }
        ),
    }
}

fn scalar(m: &RatMatrix) -> Option<String> {
    (m.rows() == 1 && m.cols() == 1).then(|| m.get(0, 0).to_string())
}

fn hecke_sanity() -> Line {
    let store = SpaceStore::new(data_dir());
    let s12 = store.cusp_space(12, 1, 12).unwrap();
    let t = |m: u64| hecke_matrix(&s12, m).unwrap().matrix;
    let (t2, t3, t4, t6) = (t(2), t(3), t(4), t(6));
    let level1 = t2.get(0, 0) == &q_int(-24)
        && t3.get(0, 0) == &q_int(252)
        && t6 == t2.mul(&t3).unwrap()
        && t4 == t2.mul(&t2).unwrap().sub(&RatMatrix::identity(1).scale(&q_int(2048))).unwrap();
    let s11 = store.cusp_space(2, 11, fixture_prec(2, 11, true).unwrap()).unwrap();
    let a2 = hecke_matrix(&s11, 2).unwrap().matrix;
    let a3 = hecke_matrix(&s11, 3).unwrap().matrix;
    let level11 = a2.get(0, 0) == &q_int(-2) && a3.get(0, 0) == &q_int(-1);
    let comm = commutation_grid(&store, &extended_grid_points());
    Line {
        id: 4,
        name: "Hecke sanity",
        pass: level1 && level11 && comm.verdict.is_pass(),
        detail: format!(
            "S_12(1) T2={:?} T3={:?}, S_2(11) a2={:?} a3={:?}, commuting on {}/{}",
            scalar(&t2),
            scalar(&t3),
            scalar(&a2),
            scalar(&a3),
            comm.passed,
            comm.total
        ),
    }
}

fn theorem1() -> Line {
    let store = SpaceStore::new(data_dir());
    let points = extended_grid_points();
    let ((cusp, full), t) = timed(|| {
        (
            theorem1_grid(&store, &points, true),
            theorem1_grid(&store, &points, false),
        )
    });
    let must = [(2u32, 22u64), (2, 33), (2, 44)];
    let covered = must
        .iter()
        .all(|p| cusp.entries.iter().any(|e| (e.k, e.level) == *p && e.verdict.is_pass()));
    let failures: Vec<(u32, u64)> = cusp.failures().chain(full.failures()).map(|e| (e.k, e.level)).collect();
    Line {
        id: 5,
        name: "Theorem 1 grid",
        pass: cusp.verdict.is_pass() && full.verdict.is_pass() && covered && t.as_secs() < 300,
        detail: format!(
            "cusp {}/{}, full {}/{}, failures {:?}, {:.1}s",
            cusp.passed,
            cusp.total,
            full.passed,
            full.total,
            failures,
            t.as_secs_f64()
        ),
    }
}

fn propositions(t2: &mfcore::grid::GridReport<mfcore::grid::LevelChecks>) -> Line {
    let store = SpaceStore::new(data_dir());
    let report = mult_one_grid(&store, &extended_grid_points(), DEFAULT_SEED);
    let descend: Vec<(u32, u64)> = report
        .entries
        .iter()
        .filter(|e| e.error.as_ref().is_some_and(|x| x.code == "does-not-descend"))
        .map(|e| (e.k, e.level))
        .collect();
    let pairs: Vec<_> = t2
        .entries
        .iter()
        .filter_map(|e| e.report.as_ref())
        .flat_map(|r| r.almost_all.iter())
        .collect();
    let moduli: BTreeSet<u64> = pairs.iter().map(|r| r.modulus).collect();
    let aa_pass = pairs.iter().filter(|r| r.verdict.is_pass()).count();
    let complete = t2.entries.iter().all(|e| e.report.is_some());
    Line {
        id: 6,
        name: "propositions",
        pass: report.verdict.is_pass()
            && descend.is_empty()
            && complete
            && !pairs.is_empty()
            && aa_pass == pairs.len()
            && moduli == BTreeSet::from([2, 3]),
        detail: format!(
            "mult_one {}/{}, does-not-descend {:?}, almost_all {}/{} pairs with D in {:?}",
            report.passed,
            report.total,
            descend,
            aa_pass,
            pairs.len(),
            moduli
        ),
    }
}

fn theorem2_line(report: &mfcore::grid::GridReport<mfcore::grid::LevelChecks>, t: Duration) -> Line {
    let t2_pass = report
        .entries
        .iter()
        .all(|e| e.report.as_ref().is_some_and(|r| r.theorem2.verdict.is_pass()));
    let orbits: usize = report
        .entries
        .iter()
        .filter_map(|e| e.report.as_ref())
        .map(|r| r.theorem2.orbits.len())
        .sum();
    Line {
        id: 7,
        name: "Theorem 2",
        pass: t2_pass && report.total == THEOREM2_LEVELS.len() && t.as_secs() < 300,
        detail: format!(
            "{} levels {:?}, {} orbits, {:.1}s",
            report.total,
            THEOREM2_LEVELS,
            orbits,
            t.as_secs_f64()
        ),
    }
}

fn determinism() -> Line {
    let run = || {
        let store = SpaceStore::new(data_dir());
        let checks = level_checks(&store, 2, 33, DEFAULT_SEED).unwrap();
        let fuzz = fuzz_lemma_main(50, DEFAULT_SEED, FuzzShape::default());
        let mult = mult_one_grid(&store, &[(4, 10), (2, 22)], DEFAULT_SEED);
        serde_json::to_string_pretty(&(checks, fuzz, mult)).unwrap()
    };
    let (a, b) = (run(), run());
    Line {
        id: 8,
        name: "determinism",
        pass: a == b,
        detail: format!("{} bytes, identical = {}", a.len(), a == b),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut lines = Vec::new();
    for run in [lemma_fuzz, gamma0, construction, hecke_sanity, theorem1] {
        lines.push(timed(run));
    }
    let (t2, t) = timed(|| theorem2_grid(&SpaceStore::new(data_dir()), &THEOREM2_LEVELS, DEFAULT_SEED));
    lines.push(timed(|| propositions(&t2)));
    lines.push((theorem2_line(&t2, t), t));
    lines.push(timed(determinism));
    let mut all = true;
    for (l, t) in &lines {
        all &= l.pass;
        println!(
            "criterion {} {:<22} {}  {} [{:.1}s]",
            l.id,
            l.name,
            if l.pass { "PASS" } else { "FAIL" },
            l.detail,
            t.as_secs_f64()
        );
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
