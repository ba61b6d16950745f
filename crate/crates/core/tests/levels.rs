use mfcore::atkinlehner::{
    degeneracy_i, k0_subspace, pi_filter, verify_theorem1, DegeneracySpec, QuotientSpace,
};
use mfcore::exactlin::{charpoly, RatMatrix};
use mfcore::grid::{grid_primes, working_prec, DEFAULT_SEED};
use mfcore::hecke::{
    hecke_matrix, mult_one_check, newform_inventory, quotient_hecke, verify_theorem2,
};
use mfcore::qseries::QExpansion;
use mfcore::rational::{q_int, Q};
use mfcore::spaces::{SpaceBasis, SpaceStore};

fn store() -> SpaceStore {
    SpaceStore::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data"))
}

fn coords(space: &SpaceBasis, f: &QExpansion) -> Vec<Q> {
    let v = &f.coeffs()[..=space.prec()];
    space.subspace().coordinates(v).expect("form lies in the space")
}

fn combine(space: &SpaceBasis, v: &[Q]) -> QExpansion {
    let coeffs = (0..=space.prec())
        .map(|c| v.iter().enumerate().fold(q_int(0), |a, (r, x)| a + x * space.basis().get(r, c)))
        .collect();
    QExpansion::new(space.weight(), space.level(), coeffs).unwrap()
}

fn row_times(v: &[Q], m: &RatMatrix) -> Vec<Q> {
    (0..m.cols())
        .map(|j| v.iter().enumerate().fold(q_int(0), |a, (i, x)| a + x * m.get(i, j)))
        .collect()
}

#[test]
fn level_22_old_space_and_quotient() {
    let store = store();
    let r = verify_theorem1(&store, 2, 22, true, working_prec(2, 22).unwrap(), false).unwrap();
    assert_eq!((r.dim_space, r.dim_k0, r.dim_oldsum), (2, 1, 1));
    assert!(r.verdict.is_pass());
    let s = store.cusp_space(2, 22, working_prec(2, 22).unwrap()).unwrap();
    let q = QuotientSpace::new(s.clone());
    assert_eq!(q.dim(), 1);
    let t3 = quotient_hecke(&hecke_matrix(&s, 3).unwrap(), &q).unwrap();
    assert_eq!(t3, RatMatrix::from_i64(&[&[-1]]));
}

#[test]
fn level_33_quotient_splits_into_two_eigenforms() {
    let store = store();
    let s = store.cusp_space(2, 33, working_prec(2, 33).unwrap()).unwrap();
    assert_eq!(s.dim(), 3);
    assert_eq!(k0_subspace(&s).unwrap().dim(), 1);
    let ops: Vec<_> = grid_primes(33).iter().map(|&p| hecke_matrix(&s, p).unwrap()).collect();
    let report = mult_one_check(&QuotientSpace::new(s), &ops, DEFAULT_SEED).unwrap();
    assert_eq!(report.dim_quotient, 2);
    let mut dims: Vec<usize> = report.blocks.iter().map(|b| b.dim).collect();
    dims.sort();
    assert_eq!(dims, [1, 1]);
    assert!(report.verdict.is_pass());
}

#[test]
fn level_33_orbits_have_minimal_levels_11_and_33() {
    let report = newform_inventory(&store(), 2, 33, None, DEFAULT_SEED).unwrap();
    let mut found: Vec<(usize, u64, bool)> = report
        .orbits
        .iter()
        .map(|o| (o.dim, o.minimal_level, o.is_new))
        .collect();
    found.sort();
    assert_eq!(found, [(1, 33, true), (2, 11, false)]);
}

#[test]
fn theorem2_at_44_and_55() {
    let store = store();
    for m in [44, 55] {
        let r = verify_theorem2(&store, 2, m, None, DEFAULT_SEED).unwrap();
        assert!(r.verdict.is_pass(), "M = {m}");
        assert!(r.exhaustive, "M = {m}");
    }
}

#[test]
fn degeneracy_maps_commute_with_hecke() {
    let store = store();
    for (k, n, d, m) in [(2u32, 11u64, 3u64, 33u64), (2, 11, 2, 22), (4, 5, 2, 10), (6, 4, 2, 8)] {
        let big = store.cusp_space(k, m, working_prec(k, m).unwrap()).unwrap();
        let need = working_prec(k, n).unwrap().max(big.prec() / d as usize);
        let small = store.cusp_space(k, n, need).unwrap();
        let p = grid_primes(m)[0];
        let t_small = hecke_matrix(&small, p).unwrap().matrix;
        let t_big = hecke_matrix(&big, p).unwrap().matrix;
        let spec = DegeneracySpec::new(n, m, d).unwrap();
        let prec = big.prec();
        for i in 0..small.dim() {
            let f = small.form(i);
            let tf = combine(&small, t_small.row(i));
            let lhs = row_times(&coords(&big, &degeneracy_i(&f, spec, prec).unwrap()), &t_big);
            let rhs = coords(&big, &degeneracy_i(&tf, spec, prec).unwrap());
            assert_eq!(lhs, rhs, "k={k} {n}->{m} d={d}");
        }
    }
}

#[test]
fn filters_commute_with_hecke_on_the_space() {
    let store = store();
    for (k, n) in [(2u32, 22u64), (4, 10), (2, 33)] {
        let s = store.cusp_space(k, n, working_prec(k, n).unwrap()).unwrap();
        let p = grid_primes(n)[0];
        let t = hecke_matrix(&s, p).unwrap().matrix;
        let window = s.prec() / p as usize;
        for d in (2..=n).filter(|d| n % d == 0) {
            for i in 0..s.dim() {
                let f = s.form(i);
                let tf = combine(&s, t.row(i));
                let pk = q_int(p.pow(k - 1) as i64);
                let filtered = pi_filter(&f, d).unwrap();
                let t_filtered: Vec<Q> = (0..=window)
                    .map(|m| {
                        let mut c = filtered.coeff(m * p as usize).clone();
                        if m % p as usize == 0 {
                            c += &pk * filtered.coeff(m / p as usize);
                        }
                        c
                    })
                    .collect();
                let filtered_t = pi_filter(&tf, d).unwrap();
                assert_eq!(t_filtered, filtered_t.coeffs()[..=window].to_vec(), "k={k} N={n} d={d}");
            }
        }
    }
}

#[test]
fn hecke_charpolys_at_level_1() {
    let s = mfcore::spaces::build_sk_basis(24, 1, 60).unwrap();
    assert_eq!(s.dim(), 2);
    let cp = charpoly(&hecke_matrix(&s, 2).unwrap().matrix);
    assert_eq!(cp.descending_strings(), ["1", "-1080", "-20468736"]);
}
