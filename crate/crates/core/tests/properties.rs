use mfcore::atkinlehner::{degeneracy_i, pi_filter, pi_projector, DegeneracySpec};
use mfcore::exactlin::{charpoly, QPoly, RatMatrix, Subspace};
use mfcore::qseries::{v_operator, QExpansion};
use mfcore::rational::{format_q, parse_q, q_frac, q_int, Q};
use proptest::prelude::*;

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-4i64..=4, rows * cols).prop_map(move |v| {
        let rows_q = v
            .chunks(cols)
            .map(|r| r.iter().map(|&x| q_int(x)).collect())
            .collect();
        RatMatrix::from_rows(cols, rows_q)
    })
}

fn series(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..=20, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent_and_preserves_rank(m in small_matrix(4, 5)) {
        let (r, piv) = m.rref();
        let (r2, piv2) = r.rref();
        prop_assert_eq!(&r, &r2);
        prop_assert_eq!(piv, piv2);
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_is_annihilated(m in small_matrix(3, 5)) {
        let k = m.kernel();
        prop_assert_eq!(k.dim() + m.rank(), 5);
        for i in 0..k.dim() {
            let v = k.basis().row(i);
            for r in 0..m.rows() {
                let dot = m.row(r).iter().zip(v).fold(q_int(0), |a: Q, (x, y)| a + x * y);
                prop_assert_eq!(dot, q_int(0));
            }
        }
    }

    #[test]
    fn sum_and_intersection_dimensions(a in small_matrix(2, 4), b in small_matrix(3, 4)) {
        let u = Subspace::row_space(&a);
        let w = Subspace::row_space(&b);
        let s = u.sum(&w).unwrap();
        let i = u.intersect(&w).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        prop_assert!(s.contains(&u).unwrap() && s.contains(&w).unwrap());
        prop_assert!(u.contains(&i).unwrap() && w.contains(&i).unwrap());
    }

    #[test]
    fn charpoly_cayley_hamilton(m in small_matrix(3, 3)) {
        let cp = charpoly(&m);
        prop_assert_eq!(cp.degree(), 3);
        prop_assert!(m.eval_poly(cp.coeffs()).unwrap().is_zero());
    }

    #[test]
    fn factorization_multiplies_back(c in prop::collection::vec(-6i64..=6, 2..6), d in prop::collection::vec(-6i64..=6, 2..5)) {
        let f = QPoly::from_i64(&c).mul(&QPoly::from_i64(&d));
        prop_assume!(!f.is_zero());
        let prod = f
            .factor()
            .iter()
            .fold(QPoly::one(), |acc, (g, e)| acc.mul(&g.pow(*e)));
        prop_assert_eq!(prod, f.monic());
    }

    #[test]
    fn series_mul_commutes_and_distributes(a in series(8), b in series(8), c in series(8)) {
        let f = QExpansion::from_i64(2, 6, &a).unwrap();
        let g = QExpansion::from_i64(2, 6, &b).unwrap();
        let h = QExpansion::from_i64(2, 6, &c).unwrap();
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(f.mul(&g.add(&h).unwrap()).unwrap(), f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
    }

    #[test]
    fn v_operator_is_multiplicative(a in series(10), b in series(10), d in 1u64..4) {
        let f = QExpansion::from_i64(2, 1, &a).unwrap();
        let g = QExpansion::from_i64(2, 1, &b).unwrap();
        let lhs = v_operator(&f.mul(&g).unwrap(), d).unwrap();
        let rhs = v_operator(&f, d).unwrap().mul(&v_operator(&g, d).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degeneracy_matches_v_operator_and_composes(a in series(12)) {
        let f = QExpansion::from_i64(2, 5, &a).unwrap();
        let i2 = degeneracy_i(&f, DegeneracySpec::new(5, 30, 2).unwrap(), 11).unwrap();
        let v2 = v_operator(&f, 2).unwrap();
        prop_assert_eq!(i2.coeffs(), v2.coeffs());
        let i3 = degeneracy_i(&f, DegeneracySpec::new(5, 15, 3).unwrap(), 30).unwrap();
        let i23 = degeneracy_i(&i3, DegeneracySpec::new(15, 30, 2).unwrap(), 60).unwrap();
        let i6 = degeneracy_i(&f, DegeneracySpec::new(5, 30, 6).unwrap(), 60).unwrap();
        prop_assert_eq!(i23, i6);
    }

    #[test]
    fn filters_compose_and_projector_is_idempotent(a in series(30)) {
        let f = QExpansion::from_i64(2, 12, &a).unwrap();
        let p23 = pi_filter(&pi_filter(&f, 2).unwrap(), 3).unwrap();
        prop_assert_eq!(p23, pi_filter(&f, 6).unwrap());
        let zero = q_int(0);
        let p = pi_projector(&f).unwrap();
        prop_assert_eq!(pi_projector(&p).unwrap(), p.clone());
        for (m, c) in p.coeffs().iter().enumerate() {
            let keep = m % 2 != 0 && m % 3 != 0;
            prop_assert_eq!(c, if keep { f.coeff(m) } else { &zero });
        }
    }

    #[test]
    fn rational_text_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let x = q_frac(n, d);
        prop_assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
    }
}
