mod common;

use common::*;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use twistcalc_core::cobordism::{self, PatternMode};
use twistcalc_core::layers::{self, LayerDecomposition};
use twistcalc_core::linalg;
use twistcalc_core::mcg::{self, TwistFactor, TwistWord};
use twistcalc_core::par::{self, Parallelism};
use twistcalc_core::seifert;
use twistcalc_core::{parse_word, IntMatrix};

fn positive_word() -> impl Strategy<Value = TwistWord> {
    proptest::collection::vec((any::<bool>(), 1i64..=4), 1..=8).prop_map(|v| {
        TwistWord::new(v.into_iter().map(|(is_a, e)| {
            TwistFactor::new(if is_a { twistcalc_core::Slope::zero() } else { twistcalc_core::Slope::infinity() }, e)
        }))
    })
}

proptest! {
    #[test]
    fn snf_is_a_valid_factorization(m in small_matrix(5, 9)) {
        check_snf(&m)?;
    }

    #[test]
    fn slides_preserve_inertia(m in symmetric_matrix(6, 5), i in 0usize..6, j in 0usize..6, c in -3i64..=3) {
        check_slide_inertia(&m, i, j, c)?;
    }

    #[test]
    fn det_sign_follows_negative_index(m in symmetric_matrix(6, 4)) {
        let det = linalg::det_exact(&m).unwrap();
        let i = linalg::inertia(&m).unwrap();
        prop_assert_eq!(i.dimension(), m.rows());
        prop_assert_eq!(i.n_zero == 0, !det.is_zero());
        if i.n_zero == 0 {
            prop_assert_eq!(det.is_negative(), i.n_minus % 2 == 1);
        }
    }

    #[test]
    fn cokernel_matches_det(m in symmetric_matrix(6, 6)) {
        let det = linalg::det_exact(&m).unwrap();
        let g = linalg::cokernel_invariants(&m).unwrap();
        prop_assert_eq!(g.free_rank == 0, !det.is_zero());
        if !det.is_zero() {
            prop_assert_eq!(g.torsion_order(), det.abs());
        }
    }

    #[test]
    fn cokernel_ignores_unimodular_row_operations(m in symmetric_matrix(5, 8), w in generator_word(6)) {
        // a row operation on the first two rows, when there are two
        if m.rows() >= 2 {
            let s = mcg::eval_word(&w);
            let [a, b, c, d] = s.entries();
            let n = m.rows();
            let mut rows = vec![vec![BigInt::zero(); n]; n];
            rows[0][0] = a.clone();
            rows[0][1] = b.clone();
            rows[1][0] = c.clone();
            rows[1][1] = d.clone();
            for (k, row) in rows.iter_mut().enumerate().skip(2) {
                row[k] = BigInt::from(1);
            }
            let u = IntMatrix::from_rows(&rows).unwrap();
            prop_assert_eq!(
                linalg::cokernel_invariants(&u.mul(&m).unwrap()).unwrap(),
                linalg::cokernel_invariants(&m).unwrap()
            );
        }
    }

    #[test]
    fn twist_conjugation_law(m in sl2(), c in slope()) {
        check_twist_conjugation(&m, &c)?;
    }

    #[test]
    fn action_is_a_group_action(m in sl2(), n in sl2(), s in slope()) {
        let lhs = mcg::act_on_slope(&m, &mcg::act_on_slope(&n, &s));
        prop_assert_eq!(lhs, mcg::act_on_slope(&m.mul(&n), &s));
        prop_assert_eq!(mcg::act_on_slope(&m.inverse(), &mcg::act_on_slope(&m, &s)), s);
    }

    #[test]
    fn words_evaluate_homomorphically(u in generator_word(6), v in generator_word(6)) {
        prop_assert_eq!(mcg::eval_word(&u.then(&v)), mcg::eval_word(&u).mul(&mcg::eval_word(&v)));
        prop_assert!(mcg::is_identity_word(&u.then(&u.inverse())));
    }

    #[test]
    fn conjugate_word_evaluates_to_conjugate(w in generator_word(5), g in generator_word(4)) {
        let m = mcg::eval_word(&g);
        let want = m.mul(&mcg::eval_word(&w)).mul(&m.inverse());
        prop_assert_eq!(mcg::eval_word(&mcg::conjugate_word(&w, &g)), want);
    }

    #[test]
    fn parse_round_trip(w in generator_word(8)) {
        prop_assert_eq!(parse_word(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn h_telescopes((d, p) in seifert_and_params(), s in -40i64..40) {
        check_h_telescoping(&d, &p, s)?;
    }

    #[test]
    fn delta_grows_with_xi0((d, p) in seifert_and_params(), s in -40i64..40, bump in 1i64..10) {
        let mut q = p.clone();
        q.xi0 += bump;
        prop_assert_eq!(seifert::delta_t(&d, &q, s), seifert::delta_t(&d, &p, s) + bump as i128);
    }

    #[test]
    fn delta_matches_plain_evaluation((d, p) in seifert_and_params(), s in -200i64..200) {
        prop_assert_eq!(seifert::delta_t(&d, &p, s), oracle_delta(&d, p.t, p.xi0, &p.xi, s) as i128);
    }

    #[test]
    fn normalize_is_idempotent(d in decomposition()) {
        check_normalize(&d)?;
    }

    #[test]
    fn splitting_keeps_the_left_outer_slope(d in decomposition(), k in 1u32..4) {
        let at = 0;
        if d.gluings().is_empty() {
            return Ok(());
        }
        let c = d.layers()[at].right.clone();
        // the right neighbour must already start at the image of c
        let t = layers::split_and_twist(&d, at, &c, k).unwrap();
        let (l0, _) = layers::outer_slopes(&d);
        prop_assert_eq!(layers::outer_slopes(&t).0, l0);
        // twisting along c fixes c, so the interface stays consistent
        prop_assert!(LayerDecomposition::new(t.layers().to_vec(), t.gluings().to_vec()).is_ok());
    }

    #[test]
    fn config_round_trip(w in positive_word()) {
        let cfg = cobordism::config_from_word(&w, None).unwrap();
        prop_assert_eq!(cfg.to_word(), w.clone());
        prop_assert_eq!(cobordism::regluing_matrix(&cfg), mcg::eval_word(&w));
        let lk = cobordism::linking_matrix(&cfg);
        let total: u64 = cfg.counts_top_down().iter().sum();
        prop_assert_eq!(lk.rows() as u64, total);
        prop_assert!(lk.is_symmetric());
    }

    #[test]
    fn negative_exponents_are_not_realizable(w in positive_word()) {
        prop_assert!(cobordism::config_from_word(&w.inverse(), None).is_err());
    }

    #[test]
    fn pattern_search_is_mode_independent(w in positive_word()) {
        for mode in [PatternMode::Strict, PatternMode::Relaxed] {
            let s = cobordism::gamma_pattern(&w, mode, Parallelism::Sequential).unwrap();
            let p = cobordism::gamma_pattern(&w, mode, Parallelism::Parallel).unwrap();
            prop_assert_eq!(s, p);
        }
    }

    #[test]
    fn ordered_map_matches_sequential(v in proptest::collection::vec(-1000i64..1000, 0..50)) {
        let f = |x: i64| x * x - 3 * x;
        let seq = par::map_ordered(v.clone(), Parallelism::Sequential, f);
        let parl = par::map_ordered(v.clone(), Parallelism::Parallel, f);
        prop_assert_eq!(&seq, &parl);
        let first_s = par::find_first(v.clone(), Parallelism::Sequential, |x| (x % 7 == 0).then_some(x));
        let first_p = par::find_first(v, Parallelism::Parallel, |x| (x % 7 == 0).then_some(x));
        prop_assert_eq!(first_s, first_p);
    }
}
