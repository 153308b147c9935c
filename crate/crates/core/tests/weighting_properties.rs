mod common;

use common::*;
use pcm_core::axioms::Checker;
use pcm_core::{aggregate, em_weights, llsm_weights, EmConfig, Method, Pcm, Ranking, WeightVector};
use proptest::prelude::*;

fn consistent(v: &[f64]) -> Pcm {
    let rows: Vec<Vec<f64>> = v
        .iter()
        .map(|a| v.iter().map(|b| a / b).collect())
        .collect();
    Pcm::new(&rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn em_is_invariant_to_row_multiplication(
        (a, i) in (3usize..=7).prop_flat_map(|n| (saaty_pcm(n), 0..n)),
        alpha in saaty_value(),
    ) {
        let cfg = EmConfig::default();
        let w = em_weights(&a, &cfg).unwrap();
        let w_hat = em_weights(&a.row_multiply(i, alpha).unwrap(), &cfg).unwrap();
        for j in (0..a.n()).filter(|&j| j != i) {
            let expected = alpha * w.weights.ratio(i, j);
            prop_assert!(rel_err(w_hat.weights.ratio(i, j), expected) <= 1e-8);
        }
        prop_assert!(rel_err(w_hat.lambda_max, w.lambda_max) <= 1e-8);
    }

    #[test]
    fn em_is_anonymous(
        (a, sigma) in (3usize..=7).prop_flat_map(|n| (saaty_pcm(n), permutation(n))),
    ) {
        let cfg = EmConfig::default();
        let w = em_weights(&a, &cfg).unwrap().weights;
        let w_p = em_weights(&a.permute(&sigma).unwrap(), &cfg).unwrap().weights;
        for k in 0..a.n() {
            prop_assert!((w_p[k] - w[sigma.apply(k)]).abs() <= 1e-10);
        }
    }

    #[test]
    fn em_equals_llsm_for_three_alternatives(a in saaty_pcm(3)) {
        let em = em_weights(&a, &EmConfig::default()).unwrap().weights;
        prop_assert!(em.max_abs_difference(&llsm_weights(&a)) <= 1e-9);
    }

    #[test]
    fn em_equals_llsm_for_continuous_three_by_three(a in continuous_pcm(3)) {
        let em = em_weights(&a, &EmConfig::default()).unwrap().weights;
        prop_assert!(em.max_abs_difference(&llsm_weights(&a)) <= 1e-9);
    }

    #[test]
    fn perron_pair_bounds(a in saaty_pcm_sized(3..=8)) {
        let cfg = EmConfig::default();
        let r = em_weights(&a, &cfg).unwrap();
        let w = r.weights.as_slice();
        for i in 0..a.n() {
            let aw: f64 = a.row(i).iter().zip(w).map(|(x, y)| x * y).sum();
            prop_assert!((aw - r.lambda_max * w[i]).abs() <= cfg.tol * r.lambda_max * (1.0 + 1e-6));
        }
        let n = a.n() as f64;
        prop_assert!(r.lambda_max >= n - 1e-9);
        prop_assert_eq!(a.is_consistent(1e-9), (r.lambda_max - n).abs() <= 1e-9);
        let ri = cfg.random_index.get(a.n()).unwrap();
        prop_assert!((r.cr.unwrap() - ((r.lambda_max - n) / ((n - 1.0) * ri)).max(0.0)).abs() <= 1e-15);
    }

    #[test]
    fn consistent_matrices_have_eigenvalue_n(v in proptest::collection::vec(0.05f64..20.0, 3..=8)) {
        let a = consistent(&v);
        let r = em_weights(&a, &EmConfig::default()).unwrap();
        prop_assert!((r.lambda_max - v.len() as f64).abs() <= 1e-9);
        prop_assert!(r.cr.unwrap() <= 1e-9);
        let normalized = WeightVector::normalize(v.clone()).unwrap();
        prop_assert!(r.weights.max_abs_difference(&normalized) <= 1e-9);
        prop_assert!(llsm_weights(&a).max_abs_difference(&normalized) <= 1e-12);
    }

    #[test]
    fn llsm_aggregates_geometrically(
        mats in (3usize..=7).prop_flat_map(|n| proptest::collection::vec(saaty_pcm(n), 1..5)),
    ) {
        let group = llsm_weights(&aggregate(&mats).unwrap());
        let k = mats.len() as f64;
        let individual: Vec<WeightVector> = mats.iter().map(llsm_weights).collect();
        let raw: Vec<f64> = (0..group.len())
            .map(|c| individual.iter().map(|w| w[c].ln()).sum::<f64>() / k)
            .map(f64::exp)
            .collect();
        let expected = WeightVector::normalize(raw).unwrap();
        prop_assert!(group.max_abs_difference(&expected) <= 1e-12);
        let report = Checker::new(Method::Llsm).check_ai(&mats).unwrap();
        prop_assert!(!report.is_violated(), "{}", report.notes);
    }

    #[test]
    fn llsm_ranking_inverts(a in saaty_pcm_sized(3..=8)) {
        let r = Ranking::from_weights(&llsm_weights(&a), 1e-9);
        let r_opp = Ranking::from_weights(&llsm_weights(&a.opposite()), 1e-9);
        prop_assert_eq!(r_opp, r.reversed());
    }
}
