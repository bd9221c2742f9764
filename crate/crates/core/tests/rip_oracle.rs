mod common;

use olslab::linalg::norm_sq;
use olslab::random::{random_sparse_signal, random_support, stream_rng};
use olslab::rip::{exact_rip_constant_capped, modified_rip_check, witness_vector};
use olslab::{
    counterexample, exact_rip_constant, monotonicity_audit, rip_definition_spot_check, tightness_example, Error, MatrixF64,
    SensingMatrixF64, SignalModel, SparseSignalF64, SupportSet,
};
use proptest::prelude::*;

use common::gaussian;

fn id(n: usize) -> SensingMatrixF64 {
    SensingMatrixF64::new(MatrixF64::identity(n)).unwrap()
}

#[test]
fn identity_has_zero_constant_at_every_order() {
    for k in 1..=5 {
        let e = exact_rip_constant(&id(5), k).unwrap();
        assert!(e.delta.abs() < 1e-15);
        assert!(!e.rip_violated);
    }
}

#[test]
fn case_two_counterexample_eigenvalues() {
    let d = 2.0 / 3.0;
    let (a, _) = counterexample::<f64>(2, d).unwrap();
    let e = exact_rip_constant(&a, 3).unwrap();
    assert!((e.delta - d).abs() < 1e-12);
    assert!((e.lambda_max - (1.0 + d / 2.0)).abs() < 1e-12);
    assert!((e.lambda_min - (1.0 - d)).abs() < 1e-12);
    assert_eq!(e.subsets_enumerated, 1);
}

#[test]
fn tightness_constant_for_four() {
    let (a, _) = tightness_example::<f64>(4).unwrap();
    assert!((exact_rip_constant(&a, 5).unwrap().delta - 0.5).abs() < 1e-12);
}

#[test]
fn order_one_of_unit_columns_is_zero() {
    let a = gaussian(3, 0, 7, 11);
    assert!(exact_rip_constant(&a, 1).unwrap().delta < 1e-14);
}

#[test]
fn constants_at_or_above_one_are_flagged_not_clamped() {
    let a = gaussian(3, 1, 3, 8);
    let e = exact_rip_constant(&a, 4).unwrap();
    assert!(e.delta >= 1.0 - 1e-12);
    assert!(e.rip_violated);
}

#[test]
fn cap_is_enforced() {
    let a = gaussian(3, 2, 10, 30);
    assert!(matches!(exact_rip_constant_capped(&a, 5, 1000), Err(Error::EnumerationCap { .. })));
    assert!(exact_rip_constant(&a, 31).is_err());
    assert!(exact_rip_constant(&a, 0).is_err());
}

#[test]
fn spot_checks_respect_the_certificate() {
    let e = exact_rip_constant(&id(6), 3).unwrap();
    assert!(rip_definition_spot_check(&id(6), &e, 200, 1).unwrap() <= 1e-15);

    let (a, _) = counterexample::<f64>(2, 2.0 / 3.0).unwrap();
    let e = exact_rip_constant(&a, 3).unwrap();
    assert!(rip_definition_spot_check(&a, &e, 10_000, 2).unwrap() <= 1e-9);
}

#[test]
fn witness_vector_attains_the_constant() {
    for seed in 0..5 {
        let a = gaussian(seed, 3, 6, 9);
        let e = exact_rip_constant(&a, 3).unwrap();
        let w = witness_vector(&a, &e).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-12);
        let energy = norm_sq(&a.apply(&w).unwrap());
        assert!(((energy - 1.0).abs() - e.delta).abs() < 1e-9);
    }
}

#[test]
fn sandwich_edge_cases() {
    let a = gaussian(9, 0, 40, 10);
    let x = random_sparse_signal::<f64, _>(&mut stream_rng(9, 1), 10, 3, SignalModel::Gaussian).unwrap();
    let slack = modified_rip_check(&a, &x, &SupportSet::empty()).unwrap();
    assert!(slack.lower >= -1e-12 && slack.upper >= -1e-12);
    assert!((slack.remaining_energy - norm_sq(x.values())).abs() < 1e-12);

    let superset = x.support().union(&SupportSet::new(vec![1]).unwrap());
    let slack = modified_rip_check(&a, &x, &superset).unwrap();
    assert!(slack.projected_energy.abs() < 1e-20);
    assert_eq!(slack.remaining_energy, 0.0);
    assert!(slack.lower.abs() < 1e-20 && slack.upper.abs() < 1e-20);
}

#[test]
fn sandwich_needs_a_valid_constant() {
    let a = gaussian(4, 0, 3, 8);
    let x = SparseSignalF64::from_values(vec![1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let j = SupportSet::new(vec![4]).unwrap();
    assert!(matches!(modified_rip_check(&a, &x, &j), Err(Error::RipViolated { order: 4, .. })));
}

#[test]
fn monotonicity_examples() {
    let audit = monotonicity_audit(&id(6), 4).unwrap();
    assert!(audit.deltas.iter().all(|d| d.abs() < 1e-15));

    let (a, _) = tightness_example::<f64>(4).unwrap();
    let audit = monotonicity_audit(&a, 5).unwrap();
    assert!(audit.is_monotone());
    assert!((audit.deltas[4] - 0.5).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constant_is_invariant_under_column_permutation(seed in any::<u64>(), m in 3usize..8, n in 4usize..9, order in 1usize..4) {
        let a = gaussian(seed, 0, m, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left((seed % n as u64) as usize);
        perm.swap(0, n - 1);
        let b = SensingMatrixF64::new(a.matrix().select_columns(&perm)).unwrap();
        let (da, db) = (exact_rip_constant(&a, order).unwrap().delta, exact_rip_constant(&b, order).unwrap().delta);
        prop_assert!((da - db).abs() <= 1e-12);
    }

    #[test]
    fn sandwich_holds_on_random_instances(seed in any::<u64>(), s_len in 1usize..=3, j_len in 0usize..=3) {
        let a = gaussian(seed, 0, 10, 12);
        let mut rng = stream_rng(seed, 1);
        let x: SparseSignalF64 = random_sparse_signal(&mut rng, 12, s_len, SignalModel::Gaussian).unwrap();
        let j = random_support(&mut rng, 12, j_len);
        match modified_rip_check(&a, &x, &j) {
            Ok(s) => prop_assert!(s.holds()),
            Err(Error::RipViolated { .. }) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}
