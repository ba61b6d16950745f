use std::path::Path;

use mfcore::arith::gcd;
use mfcore::atkinlehner::{verify_theorem1, QuotientSpace, Theorem1Report};
use mfcore::exactlin::charpoly;
use mfcore::grid::{
    commutation_grid, construction_grid, extended_grid_points, fixture_prec, grid_primes,
    mult_one_grid, theorem1_grid, theorem2_grid, working_prec, GridReport, LevelChecks,
    THEOREM2_LEVELS,
};
use mfcore::hecke::{
    hecke_matrix, hecke_prec, mult_one_check, newform_inventory, HeckeMatrixJson,
    MultOneReport,
};
use mfcore::qseries::sturm_bound;
use mfcore::report::{matrix_strings, Verdict};
use mfcore::spaces::{
    default_data_dir, dim_spaces, enumerate_cusps, export_basis, gamma0_invariants, ingest_basis,
    SpaceBasis, SpaceStore, Source,
};
use mfcore::tensor::{fuzz_lemma_ker, fuzz_lemma_main, FuzzShape};
use mfcore::{arith::factor, Error, Result};
use serde::Serialize;

use crate::output::{emit, emit_error, table, Outcome};
use crate::{Cli, Command, SpaceArgs};

pub fn run(cli: &Cli) -> u8 {
    let store = SpaceStore::new(cli.data_dir.clone().unwrap_or_else(default_data_dir));
    match dispatch(cli, &store) {
        Ok(outcome) => emit(cli.format, &outcome),
        Err(e) => emit_error(cli.format, &e),
    }
}

fn required<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required unless --grid is given")))
}

fn dispatch(cli: &Cli, store: &SpaceStore) -> Result<Outcome> {
    match &cli.command {
        Command::Dims { k, n } => dims(*k, *n),
        Command::Cusps { n } => cusps(*n),
        Command::Basis(args) => basis(store, args),
        Command::Hecke { space, primes, grid } => {
            if *grid {
                let r = commutation_grid(store, &extended_grid_points());
                Ok(grid_outcome(&r, |e| {
                    e.report.as_ref().map(|c| format!("dim {} primes {:?}", c.dim, c.primes))
                }))
            } else {
                hecke(store, space, primes)
            }
        }
        Command::Newforms { k, n, primes } => {
            let ps = (!primes.is_empty()).then_some(primes.as_slice());
            let r = newform_inventory(store, *k, *n, ps, cli.seed)?;
            let rows = r
                .orbits
                .iter()
                .map(|o| {
                    vec![
                        o.dim.to_string(),
                        o.minimal_level.to_string(),
                        o.is_new.to_string(),
                        o.charpolys
                            .iter()
                            .map(|(p, c)| format!("T_{p}: [{}]", c.join(", ")))
                            .collect::<Vec<_>>()
                            .join("; "),
                    ]
                })
                .collect::<Vec<_>>();
            let head = format!("S_{}(Γ0({})): dim {}, primes {:?}\n", r.k, r.level, r.dim_space, r.primes);
            let t = head + &table(&["dim", "minimal_level", "is_new", "charpolys"], &rows);
            Ok(Outcome::new(&r, t, true))
        }
        Command::VerifyT1 { k, n, prec, full, bases, grid } => {
            if *grid {
                verify_t1_grid(store)
            } else {
                let (k, n) = (required(*k, "k")?, required(*n, "N")?);
                let prec = match prec {
                    Some(p) => *p,
                    None if *full => 2 * sturm_bound(k, n)?,
                    None => working_prec(k, n)?,
                };
                let r = verify_theorem1(store, k, n, !*full, prec, *bases)?;
                let t = table(&T1_HEADERS, &[t1_row(&r)]);
                Ok(Outcome::new(&r, t, r.verdict.is_pass()))
            }
        }
        Command::VerifyT2 { k, m, primes, grid } => {
            if *grid {
                let r = theorem2_grid(store, &THEOREM2_LEVELS, cli.seed);
                Ok(grid_outcome(&r, |e| e.report.as_ref().map(t2_summary)))
            } else {
                let (k, m) = (required(*k, "k")?, required(*m, "M")?);
                let r = if primes.is_empty() {
                    mfcore::grid::level_checks(store, k, m, cli.seed)?
                } else {
                    let levels = mfcore::hecke::divisor_levels(store, k, m, primes, cli.seed)?;
                    mfcore::grid::checks_from_levels(&levels, m, cli.seed)?
                };
                let rows: Vec<Vec<String>> = r
                    .theorem2
                    .orbits
                    .iter()
                    .map(|o| {
                        vec![
                            o.dim.to_string(),
                            o.minimal_level.to_string(),
                            o.new_dim.to_string(),
                            o.multiplicity.to_string(),
                            o.direct.to_string(),
                            o.equal.to_string(),
                            verdict_str(o.verdict),
                        ]
                    })
                    .collect();
                let t = format!("{}\n", t2_summary(&r))
                    + &table(&["dim", "N0", "new_dim", "sigma0", "direct", "equal", "verdict"], &rows);
                Ok(Outcome::new(&r, t, r.verdict.is_pass()))
            }
        }
        Command::MultOne { k, n, primes, grid } => {
            if *grid {
                let r = mult_one_grid(store, &extended_grid_points(), cli.seed);
                Ok(grid_outcome(&r, |e| e.report.as_ref().map(mult_one_summary)))
            } else {
                let (k, n) = (required(*k, "k")?, required(*n, "N")?);
                let primes = if primes.is_empty() { grid_primes(n) } else { primes.clone() };
                let prec = needed_prec(k, n, &primes)?;
                let s = store.cusp_space(k, n, prec)?;
                let ops = primes
                    .iter()
                    .map(|&p| hecke_matrix(&s, p))
                    .collect::<Result<Vec<_>>>()?;
                let r = mult_one_check(&QuotientSpace::new(s), &ops, cli.seed)?;
                let t = mult_one_summary(&r) + "\n";
                Ok(Outcome::new(&r, t, r.verdict.is_pass()))
            }
        }
        Command::LemmasFuzz { iters } => {
            let shape = FuzzShape::default();
            let ker = fuzz_lemma_ker(*iters, cli.seed, shape);
            let main = fuzz_lemma_main(*iters, cli.seed, shape);
            let pass = ker.pass() && main.pass();
            #[derive(Serialize)]
            struct Fuzz<'a> {
                reports: [&'a mfcore::tensor::LemmaFuzzReport; 2],
                verdict: Verdict,
            }
            let doc = Fuzz {
                reports: [&ker, &main],
                verdict: Verdict::from_bool(pass),
            };
            let rows = [&ker, &main]
                .iter()
                .map(|r| {
                    vec![
                        r.lemma.clone(),
                        format!("{}/{}", r.passed, r.iters),
                        r.seed.to_string(),
                        r.verdict.clone(),
                    ]
                })
                .collect::<Vec<_>>();
            Ok(Outcome::new(&doc, table(&["lemma", "passed", "seed", "verdict"], &rows), pass))
        }
        Command::Ingest { path } => {
            let b = ingest_basis(path)?;
            Ok(basis_summary_outcome(&b, Some(path)))
        }
        Command::Export { space, path } => {
            let b = fetch(store, space, |k, n, cusp| fixture_prec(k, n, cusp))?;
            export_basis(&b, path)?;
            Ok(basis_summary_outcome(&b, Some(path)))
        }
        Command::Spaces => {
            let r = construction_grid(store, &extended_grid_points());
            Ok(grid_outcome(&r, |e| {
                e.report.as_ref().map(|c| {
                    format!(
                        "M: {} rank {}/{}  S: {} rank {}/{}",
                        source_str(c.full.source),
                        c.full.rank,
                        c.full.expected,
                        source_str(c.cusp.source),
                        c.cusp.rank,
                        c.cusp.expected
                    )
                })
            }))
        }
    }
}

fn verdict_str(v: Verdict) -> String {
    match v {
        Verdict::Pass => "pass".into(),
        Verdict::Fail => "fail".into(),
    }
}

fn source_str(s: Source) -> &'static str {
    match s {
        Source::Generated => "generated",
        Source::Fixture => "fixture",
    }
}

fn grid_outcome<T: Serialize>(
    r: &GridReport<T>,
    summary: impl Fn(&mfcore::grid::GridEntry<T>) -> Option<String>,
) -> Outcome {
    let rows: Vec<Vec<String>> = r
        .entries
        .iter()
        .map(|e| {
            let detail = match &e.error {
                Some(err) => format!("error[{}]: {}", err.code, err.message),
                None => summary(e).unwrap_or_default(),
            };
            vec![e.k.to_string(), e.level.to_string(), verdict_str(e.verdict), detail]
        })
        .collect();
    let t = table(&["k", "N", "verdict", "detail"], &rows)
        + &format!("{}: {}/{} pass\n", r.name, r.passed, r.total);
    Outcome::new(r, t, r.verdict.is_pass())
}

const T1_HEADERS: [&str; 9] = [
    "k", "N", "variant", "prec", "source", "dim", "dim_K0", "dim_oldsum", "verdict",
];

fn t1_row(r: &Theorem1Report) -> Vec<String> {
    vec![
        r.k.to_string(),
        r.level.to_string(),
        r.variant.to_string(),
        r.prec.to_string(),
        source_str(r.source).to_string(),
        r.dim_space.to_string(),
        r.dim_k0.to_string(),
        r.dim_oldsum.to_string(),
        verdict_str(r.verdict),
    ]
}

fn verify_t1_grid(store: &SpaceStore) -> Result<Outcome> {
    let pts = extended_grid_points();
    let cusp = theorem1_grid(store, &pts, true);
    let full = theorem1_grid(store, &pts, false);
    let verdict = Verdict::from_bool(cusp.verdict.is_pass() && full.verdict.is_pass());
    let mut t = String::new();
    for r in [&cusp, &full] {
        let rows: Vec<Vec<String>> = r
            .entries
            .iter()
            .map(|e| match (&e.report, &e.error) {
                (Some(rep), _) => t1_row(rep),
                (None, Some(err)) => {
                    let mut row = vec![e.k.to_string(), e.level.to_string()];
                    row.push(format!("error[{}]", err.code));
                    row.extend(std::iter::repeat(String::new()).take(5));
                    row.push("fail".into());
                    row
                }
                (None, None) => unreachable!("grid entries carry a report or an error"),
            })
            .collect();
        t += &table(&T1_HEADERS, &rows);
        t += &format!("{}: {}/{} pass\n\n", r.name, r.passed, r.total);
    }
    #[derive(Serialize)]
    struct T1Grid {
        cusp: GridReport<Theorem1Report>,
        full: GridReport<Theorem1Report>,
        verdict: Verdict,
    }
    let doc = T1Grid { cusp, full, verdict };
    Ok(Outcome::new(&doc, t, verdict.is_pass()))
}

fn t2_summary(r: &LevelChecks) -> String {
    let t = &r.theorem2;
    let levels: Vec<String> = t
        .orbits
        .iter()
        .map(|o| format!("{}x{}@{}", o.dim, o.new_dim, o.minimal_level))
        .collect();
    format!(
        "S_{}(Γ0({})) dim {}: orbits [{}], almost-all {}/{} pass",
        t.k,
        t.level,
        t.dim_space,
        levels.join(", "),
        r.almost_all.iter().filter(|a| a.verdict.is_pass()).count(),
        r.almost_all.len()
    )
}

fn mult_one_summary(r: &MultOneReport) -> String {
    let dims: Vec<String> = r.blocks.iter().map(|b| b.dim.to_string()).collect();
    format!(
        "k={} N={} dim S={} dim quotient={} blocks [{}] primes {:?}: {}",
        r.k,
        r.level,
        r.dim_space,
        r.dim_quotient,
        dims.join(", "),
        r.primes,
        verdict_str(r.verdict)
    )
}

#[derive(Serialize)]
struct DimsReport {
    k: u32,
    #[serde(rename = "N")]
    n: u64,
    #[serde(rename = "dim_M")]
    dim_m: usize,
    #[serde(rename = "dim_S")]
    dim_s: usize,
    #[serde(rename = "dim_Eis")]
    dim_eis: usize,
    mu: u64,
    nu2: u64,
    nu3: u64,
    nu_inf: u64,
    genus: u64,
    sturm: usize,
}

fn dims(k: u32, n: u64) -> Result<Outcome> {
    let d = dim_spaces(k, n)?;
    let inv = gamma0_invariants(n)?;
    let r = DimsReport {
        k,
        n,
        dim_m: d.dim_m,
        dim_s: d.dim_s,
        dim_eis: d.dim_eis,
        mu: inv.index,
        nu2: inv.nu2,
        nu3: inv.nu3,
        nu_inf: inv.nu_inf,
        genus: inv.genus,
        sturm: sturm_bound(k, n)?,
    };
    let t = table(
        &["k", "N", "dim_M", "dim_S", "dim_Eis", "mu", "nu2", "nu3", "nu_inf", "genus", "sturm"],
        &[vec![
            k.to_string(),
            n.to_string(),
            r.dim_m.to_string(),
            r.dim_s.to_string(),
            r.dim_eis.to_string(),
            r.mu.to_string(),
            r.nu2.to_string(),
            r.nu3.to_string(),
            r.nu_inf.to_string(),
            r.genus.to_string(),
            r.sturm.to_string(),
        ]],
    );
    Ok(Outcome::new(&r, t, true))
}

fn cusps(n: u64) -> Result<Outcome> {
    let cs = enumerate_cusps(n)?;
    #[derive(Serialize)]
    struct Cusps {
        #[serde(rename = "N")]
        n: u64,
        count: usize,
        cusps: Vec<mfcore::spaces::Cusp>,
    }
    let rows: Vec<Vec<String>> = cs
        .iter()
        .map(|c| {
            vec![
                format!("{}/{}", c.numerator, c.denominator),
                c.denominator.to_string(),
                c.width.to_string(),
            ]
        })
        .collect();
    let t = table(&["cusp", "denominator", "width"], &rows);
    let r = Cusps { n, count: cs.len(), cusps: cs };
    Ok(Outcome::new(&r, t, true))
}

fn fetch(
    store: &SpaceStore,
    a: &SpaceArgs,
    default: impl Fn(u32, u64, bool) -> Result<usize>,
) -> Result<std::sync::Arc<SpaceBasis>> {
    let cusp = !a.full;
    let prec = match a.prec {
        Some(p) => p,
        None => default(a.k, a.n, cusp)?,
    };
    store.space(a.k, a.n, cusp, prec)
}

#[derive(Serialize)]
struct BasisReport {
    weight: u32,
    level: u64,
    prec: usize,
    cuspidal: bool,
    source: Source,
    dim: usize,
    basis: Vec<Vec<String>>,
}

fn basis(store: &SpaceStore, a: &SpaceArgs) -> Result<Outcome> {
    let b = fetch(store, a, |k, n, _| sturm_bound(k, n))?;
    let r = BasisReport {
        weight: b.weight(),
        level: b.level(),
        prec: b.prec(),
        cuspidal: b.is_cuspidal(),
        source: b.source(),
        dim: b.dim(),
        basis: matrix_strings(b.basis()),
    };
    let mut t = format!(
        "{}_{}(Γ0({})): dim {}, prec {}, {}\n",
        if r.cuspidal { "S" } else { "M" },
        r.weight,
        r.level,
        r.dim,
        r.prec,
        source_str(r.source)
    );
    for row in &r.basis {
        t += &format!("[{}]\n", row.join(", "));
    }
    Ok(Outcome::new(&r, t, true))
}

fn basis_summary_outcome(b: &SpaceBasis, path: Option<&Path>) -> Outcome {
    #[derive(Serialize)]
    struct Summary {
        path: Option<String>,
        weight: u32,
        level: u64,
        prec: usize,
        cuspidal: bool,
        dim: usize,
    }
    let s = Summary {
        path: path.map(|p| p.display().to_string()),
        weight: b.weight(),
        level: b.level(),
        prec: b.prec(),
        cuspidal: b.is_cuspidal(),
        dim: b.dim(),
    };
    let t = format!(
        "{}: {}_{}(Γ0({})) dim {} prec {}\n",
        s.path.clone().unwrap_or_default(),
        if s.cuspidal { "S" } else { "M" },
        s.weight,
        s.level,
        s.dim,
        s.prec
    );
    Outcome::new(&s, t, true)
}

fn needed_prec(k: u32, n: u64, ms: &[u64]) -> Result<usize> {
    let mut prec = sturm_bound(k, n)?;
    for &m in ms {
        if m == 0 || gcd(m, n) != 1 {
            return Err(Error::Divisibility(format!("T_{m} needs gcd(m, {n}) = 1")));
        }
        for (p, _) in factor(m) {
            prec = prec.max(hecke_prec(k, n, p)?);
        }
    }
    Ok(prec)
}

fn hecke(store: &SpaceStore, a: &SpaceArgs, ms: &[u64]) -> Result<Outcome> {
    let ms = if ms.is_empty() { grid_primes(a.n) } else { ms.to_vec() };
    let prec = match a.prec {
        Some(p) => p,
        None => needed_prec(a.k, a.n, &ms)?,
    };
    let b = store.space(a.k, a.n, !a.full, prec)?;
    let mats = ms
        .iter()
        .map(|&m| hecke_matrix(&b, m))
        .collect::<Result<Vec<_>>>()?;
    let mut commute = true;
    for (i, x) in mats.iter().enumerate() {
        for y in &mats[i + 1..] {
            commute &= x.matrix.commutes_with(&y.matrix)?;
        }
    }
    #[derive(Serialize)]
    struct HeckeReport {
        k: u32,
        #[serde(rename = "N")]
        n: u64,
        cuspidal: bool,
        prec: usize,
        source: Source,
        dim: usize,
        operators: Vec<HeckeMatrixJson>,
        commute: bool,
        verdict: Verdict,
    }
    let r = HeckeReport {
        k: a.k,
        n: a.n,
        cuspidal: !a.full,
        prec: b.prec(),
        source: b.source(),
        dim: b.dim(),
        operators: mats.iter().map(|m| m.to_json()).collect(),
        commute,
        verdict: Verdict::from_bool(commute),
    };
    let mut t = format!(
        "{}_{}(Γ0({})): dim {}, prec {}\n",
        if a.full { "M" } else { "S" },
        a.k,
        a.n,
        b.dim(),
        b.prec()
    );
    for m in &mats {
        t += &format!("T_{}:\n", m.m);
        for row in matrix_strings(&m.matrix) {
            t += &format!("  [{}]\n", row.join(", "));
        }
        t += &format!("  charpoly: {}\n", charpoly(&m.matrix));
    }
    t += &format!("commute: {commute}\n");
    Ok(Outcome::new(&r, t, commute))
}
