mod common;

use bass_serre::exactmath::{int, rat, IMatrix, Int, RMatrix, Rat};
use bass_serre::families::{
    analyze, bs_verdict, gbs_verdict, gbsn_power_criterion, loop_matrix, modular_delta,
    outbs_verdict, Outcome, TheoremAOptions,
};
use bass_serre::graph::gbs_loop;
use bass_serre::words::multiply;
use common::{closed_walk, gbs_pair};
use num_traits::{One, Signed};
use proptest::prelude::*;

#[test]
fn bs_zero_parameter_is_an_input_error() {
    assert!(bs_verdict(0, 3).is_err());
    assert!(outbs_verdict(2, 0).is_err());
}

#[test]
fn verdict_json_has_fixed_schema() {
    let j = bs_verdict(2, 3).unwrap().to_json();
    assert_eq!(j["schema"], 1);
    assert_eq!(j["outcome"], "Simple");
    for key in ["reason", "certificate", "assumed_flags", "notes"] {
        assert!(j.get(key).is_some(), "missing {key}");
    }
    let n = bs_verdict(3, -3).unwrap().to_json();
    assert_eq!(n["outcome"], "NotSimple");
}

#[test]
fn gbs_verdict_on_gbs_pair() {
    let v = gbs_verdict(&gbs_pair()).unwrap();
    assert!(v.is_simple(), "{v}");
    assert!(v.reverify());
}

proptest! {
    #[test]
    fn bs_verdict_is_symmetric(p in -12i64..=12, q in -12i64..=12) {
        prop_assume!(p != 0 && q != 0);
        let v = bs_verdict(p, q).unwrap();
        prop_assert_eq!(bs_verdict(q, p).unwrap().outcome, v.outcome);
        prop_assert_eq!(bs_verdict(-p, -q).unwrap().outcome, v.outcome);
        prop_assert!(v.reverify());
        if v.is_simple() {
            prop_assert!(v.certificate.as_ref().and_then(|c| c.conjugator.as_ref()).is_some());
        }
    }

    #[test]
    fn loop_verdict_matches_bs_verdict(p in -8i64..=8, q in -8i64..=8) {
        prop_assume!(p != 0 && q != 0);
        let a = gbs_verdict(&gbs_loop(q, p).unwrap()).unwrap();
        let b = bs_verdict(p, q).unwrap();
        prop_assert_eq!(a.outcome, b.outcome);
        let c = analyze(&gbs_loop(q, p).unwrap(), &TheoremAOptions::default()).unwrap();
        prop_assert_eq!(c.outcome, b.outcome);
    }

    #[test]
    fn modular_delta_is_multiplicative_on_normal_forms(
        a in prop::collection::vec((0usize..6, -5i64..=5), 0..5),
        b in prop::collection::vec((0usize..6, -5i64..=5), 0..5),
    ) {
        let g = gbs_pair();
        let (a, b) = (closed_walk(&g, 0, &a, 1), closed_walk(&g, 0, &b, -1));
        let ab = multiply(&g, &a, &b).unwrap();
        let d = |w| modular_delta(&g, w).unwrap();
        prop_assert_eq!(d(&ab), d(&a) * d(&b));
    }

    #[test]
    fn outbs_is_symmetric_in_order(p in 1i64..=10, q in 1i64..=10) {
        prop_assert_eq!(outbs_verdict(p, q).unwrap().outcome, outbs_verdict(q, p).unwrap().outcome);
    }

    #[test]
    fn power_criterion_is_minimal(k in 2i64..=6, l in 1i64..=6, x in -4i64..=4, y in -4i64..=4) {
        prop_assume!(k != l && (x, y) != (0, 0));
        let a_e = IMatrix::from_rows(&[vec![k, 0], vec![0, k]]);
        let a_ebar = IMatrix::from_rows(&[vec![l, 0], vec![0, l]]);
        let f: Vec<Vec<Int>> = vec![vec![int(x), int(y)]];
        let m = loop_matrix(&a_e, &a_ebar).unwrap();
        if let Some(n) = gbsn_power_criterion(&a_e, &a_ebar, &f, 32).unwrap() {
            prop_assert!(n >= 1);
            let mut p = RMatrix::identity(2);
            for _ in 0..n - 1 {
                p = p.mul(&m).unwrap();
            }
            if n > 1 {
                let v = p.mul_vec(&[rat(x, 1), rat(y, 1)]).unwrap();
                prop_assert!(v.iter().all(|r| r.is_integer()));
            }
        }
    }
}

#[test]
fn unimodular_loop_has_trivial_modulus() {
    let g = gbs_loop(4, -4).unwrap();
    let v = gbs_verdict(&g).unwrap();
    assert_eq!(v.outcome, Outcome::NotSimple);
    let w = closed_walk(&g, 0, &[(0, 1), (1, 2)], 0);
    assert!(modular_delta(&g, &w).unwrap().abs() == Rat::one());
}
