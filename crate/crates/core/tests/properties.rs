use std::collections::BTreeMap;

use kappa_weyl::spectrum::{spectrum_report, EnergyQuadratic};
use kappa_weyl::verify::check_catalogue;
use kappa_weyl::{degeneracy, AlgebraParams, FockBasis, OperatorSet, UnitarityPolicy};
use proptest::prelude::*;

proptest! {
    #[test]
    fn basis_size_is_sum_of_degeneracies(d in 1usize..=5, n_max in 0usize..=7) {
        let basis = FockBasis::enumerate(d, n_max).unwrap();
        let total: u128 = (0..=n_max).map(|n| degeneracy(d, n).unwrap()).sum();
        prop_assert_eq!(basis.len() as u128, total);
    }

    #[test]
    fn rank_inverts_unrank(d in 1usize..=4, n_max in 0usize..=6) {
        let basis = FockBasis::enumerate(d, n_max).unwrap();
        for k in 0..basis.len() {
            let m = basis.unrank(k).unwrap().clone();
            prop_assert_eq!(basis.rank(&m).unwrap(), k);
        }
        prop_assert!(basis.unrank(basis.len()).is_err());
    }

    #[test]
    fn grades_are_contiguous_and_sorted(d in 1usize..=4, n_max in 0usize..=6) {
        let basis = FockBasis::enumerate(d, n_max).unwrap();
        let states = basis.states();
        for w in states.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            prop_assert!((a.total(), a.occupations()) < (b.total(), b.occupations()));
        }
    }

    #[test]
    fn ladder_operators_shift_one_quantum(kappa in 0.8f64..6.0, d in 1usize..=3) {
        let params = AlgebraParams::new(kappa, d).unwrap();
        let basis = FockBasis::enumerate(d, 4).unwrap();
        let ops = OperatorSet::build(&params, &basis, UnitarityPolicy::Strict).unwrap();
        for i in 0..d {
            prop_assert!(ops.lower[i].respects_shift(&basis));
            prop_assert!(ops.raise[i].respects_shift(&basis));
            prop_assert!(ops.raise[i].max_abs() > 0.0);
        }
    }

    #[test]
    fn relations_hold_for_random_unitary_kappa(kappa in 0.76f64..8.0, d in 2usize..=3) {
        let params = AlgebraParams::new(kappa, d).unwrap();
        let basis = FockBasis::enumerate(d, 5).unwrap();
        for r in check_catalogue(&params, &basis, 1e-10, &BTreeMap::new()).unwrap() {
            prop_assert!(r.pass, "{} at kappa={}: {:e}", r.relation, kappa, r.max_rel_residual);
            prop_assert!(r.unitary);
        }
    }

    #[test]
    fn spectrum_follows_shift_corrected_quadratic(kappa in 0.8f64..5.0, d in 1usize..=3) {
        let params = AlgebraParams::new(kappa, d).unwrap();
        let basis = FockBasis::enumerate(d, 5).unwrap();
        let q = EnergyQuadratic::shift_corrected(&params);
        for level in spectrum_report(&params, &basis, 1e-10).unwrap().levels {
            let want = q.eval(level.grade as f64);
            prop_assert!((level.energy_matrix - want).abs() <= 1e-10 * want.abs());
        }
    }
}

#[test]
fn capacity_is_enforced() {
    assert!(FockBasis::enumerate_capped(4, 8, 494).is_err());
    assert_eq!(FockBasis::enumerate_capped(4, 8, 495).unwrap().len(), 495);
}
