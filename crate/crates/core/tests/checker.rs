mod common;

use olslab::checker::{proper_subsets, GuaranteeChecker, Suite};
use olslab::random::{random_sparse_signal, stream_id, stream_rng};
use olslab::{counterexample, tightness_example, Error, MatrixF64, SelectionRule, SensingMatrixF64, SignalModel, SparseSignalF64, SupportSet};

use common::{certified_matrices, gaussian};

fn id(n: usize) -> SensingMatrixF64 {
    SensingMatrixF64::new(MatrixF64::identity(n)).unwrap()
}

fn set(v: &[usize]) -> SupportSet {
    SupportSet::new(v.to_vec()).unwrap()
}

fn signal(v: &[f64]) -> SparseSignalF64 {
    SparseSignalF64::from_values(v.to_vec()).unwrap()
}

#[test]
fn margin_on_identity() {
    let a = id(4);
    let m = GuaranteeChecker::new(&a).selection_margin(&signal(&[0.0, 1.0, 1.0, 0.0]), &SupportSet::empty()).unwrap();
    assert!((m.lhs - 1.0).abs() < 1e-15);
    assert_eq!(m.rhs, 0.0);
    assert!(m.correct && !m.tie);
    assert_eq!(m.chosen, 2);
}

#[test]
fn margin_ties_at_the_threshold_and_fails() {
    let (a, x) = counterexample::<f64>(2, 2.0 / 3.0).unwrap();
    let m = GuaranteeChecker::new(&a).selection_margin(&x, &SupportSet::empty()).unwrap();
    assert!((m.lhs - 2.0 / 3.0).abs() < 1e-12);
    assert!((m.rhs - 2.0 / 3.0).abs() < 1e-12);
    assert!(m.tie);
    assert_eq!(m.chosen, 1);
    assert!(!m.correct);
}

#[test]
fn partial_support_must_lie_in_the_support() {
    let a = id(4);
    let checker = GuaranteeChecker::new(&a);
    let x = signal(&[0.0, 1.0, 1.0, 0.0]);
    assert!(checker.selection_margin(&x, &set(&[1])).is_err());
    assert!(checker.lemma4_bound(&x, &set(&[2, 3])).is_err());
}

#[test]
fn margin_is_correct_whenever_certified() {
    for k in 1..=3usize {
        for (i, a) in certified_matrices(k, 6, 31).iter().enumerate() {
            let checker = GuaranteeChecker::new(a);
            for t in 0..5u64 {
                let mut rng = stream_rng(31, stream_id(i as u64, t));
                let x: SparseSignalF64 = random_sparse_signal(&mut rng, a.cols(), k, SignalModel::Gaussian).unwrap();
                for s_k in proper_subsets(x.support()) {
                    assert!(checker.selection_margin(&x, &s_k).unwrap().correct, "K={k} S_k={s_k}");
                }
                for rule in [SelectionRule::Projection, SelectionRule::Ratio] {
                    assert!(checker.selection_path_audit(&x, rule).unwrap().consistent());
                }
            }
        }
    }
}

#[test]
fn off_support_bound_is_tight_on_the_tightness_instance() {
    let (a, x) = tightness_example::<f64>(4).unwrap();
    let b = GuaranteeChecker::new(&a).lemma4_bound(&x, &SupportSet::empty()).unwrap();
    assert!((b.measured - 1.0).abs() < 1e-12);
    assert!((b.bound - 1.0).abs() < 1e-12);
    assert!(b.in_hypothesis && b.holds);
}

#[test]
fn off_support_bound_on_identity() {
    let a = id(5);
    let b = GuaranteeChecker::new(&a).lemma4_bound(&signal(&[2.0, 0.0, -1.0, 0.0, 0.0]), &SupportSet::empty()).unwrap();
    assert_eq!(b.measured, 0.0);
    assert!(b.holds);
}

#[test]
fn off_support_bound_is_flagged_out_of_hypothesis() {
    let (a, x) = tightness_example::<f64>(3).unwrap();
    let b = GuaranteeChecker::new(&a).lemma4_bound(&x, &SupportSet::empty()).unwrap();
    assert!(!b.in_hypothesis);
    assert!(b.holds);
}

#[test]
fn off_support_bound_sweep() {
    let mut checked = 0;
    for i in 0..60u64 {
        let a = gaussian(41, i, 64, 12);
        let checker = GuaranteeChecker::new(&a);
        let k = 1 + (i % 2) as usize;
        let x: SparseSignalF64 = random_sparse_signal(&mut stream_rng(41, 1000 + i), 12, k, SignalModel::Gaussian).unwrap();
        for s_k in proper_subsets(x.support()) {
            let b = checker.lemma4_bound(&x, &s_k).unwrap();
            if b.in_hypothesis {
                checked += 1;
                assert!(b.measured <= b.bound + 1e-9, "{b:?}");
            }
        }
    }
    assert!(checked > 30);
}

#[test]
fn support_side_examples() {
    let a = id(3);
    let b = GuaranteeChecker::new(&a).support_side_lower_bound(&signal(&[1.0, 1.0, 1.0]), &SupportSet::empty()).unwrap();
    assert!((b.measured - 1.0).abs() < 1e-15 && (b.bound - 1.0).abs() < 1e-15);
    assert!(b.holds);

    let (a, x) = counterexample::<f64>(2, 0.5).unwrap();
    let b = GuaranteeChecker::new(&a).support_side_lower_bound(&x, &SupportSet::empty()).unwrap();
    assert!((b.measured - 0.75).abs() < 1e-12);
    assert!(b.holds);

    let (a, x) = tightness_example::<f64>(2).unwrap();
    assert!(GuaranteeChecker::new(&a).support_side_lower_bound(&x, &set(&[2])).unwrap().holds);
}

#[test]
fn improvement_factor_and_chain() {
    let a = id(6);
    let r = GuaranteeChecker::new(&a).remark2_comparisons(&signal(&[0.0, 3.0, 0.0, -1.0, 0.0, 0.0]), &SupportSet::empty()).unwrap();
    assert_eq!(r.measured, 0.0);
    assert!(r.new_bound > 0.0 && r.old_bound > 0.0);
    assert!((r.new_bound - 3f64.sqrt() / 2.0 * r.old_bound).abs() < 1e-12);
    assert!(r.chain_holds && r.in_hypothesis);

    let mut evaluated = 0;
    for i in 0..40u64 {
        let a = gaussian(43, i, 64, 12);
        let checker = GuaranteeChecker::new(&a);
        let x: SparseSignalF64 = random_sparse_signal(&mut stream_rng(43, 500 + i), 12, 2, SignalModel::Rademacher).unwrap();
        for s_k in proper_subsets(x.support()) {
            let r = checker.remark2_comparisons(&x, &s_k).unwrap();
            if r.in_hypothesis {
                evaluated += 1;
                assert!(r.chain_holds, "{r:?}");
                assert!((r.factor - 2.0 / 3f64.sqrt()).abs() < 1e-12);
                assert!(!r.weak_condition_in_scope);
            }
        }
    }
    assert!(evaluated > 20);
}

#[test]
fn recovery_on_identity() {
    let a = id(8);
    let report = GuaranteeChecker::new(&a).theorem1_verify(100, 3, 5).unwrap();
    assert!(report.passed());
    assert_eq!(report.runs, 2 * 104);
}

#[test]
fn exhaustive_recovery_below_threshold() {
    let (a, _) = counterexample::<f64>(2, 0.6).unwrap();
    let report = GuaranteeChecker::new(&a).exhaustive_recovery(2).unwrap();
    assert!((report.delta - 0.6).abs() < 1e-12);
    assert!(report.passed(), "{:?}", report.failures);
    assert_eq!(report.runs, 3 * 4 * 2);
}

#[test]
fn recovery_on_a_certified_random_matrix() {
    let a = &certified_matrices(2, 1, 47)[0];
    let report = GuaranteeChecker::new(a).theorem1_verify(200, 2, 47).unwrap();
    assert!(report.passed());
}

#[test]
fn recovery_refuses_out_of_hypothesis() {
    let (a, _) = counterexample::<f64>(2, 0.7).unwrap();
    match GuaranteeChecker::new(&a).theorem1_verify(10, 2, 0) {
        Err(Error::HypothesisNotMet { order, delta, threshold }) => {
            assert_eq!(order, 3);
            assert!((delta - 0.7).abs() < 1e-12);
            assert!((threshold - 2.0 / 3.0).abs() < 1e-15);
        }
        other => panic!("expected HypothesisNotMet, got {other:?}"),
    }
}

#[test]
fn coherence_is_bounded_by_order_two_constant() {
    for i in 0..5 {
        let a = gaussian(53, i, 6, 9);
        assert!(GuaranteeChecker::new(&a).coherence_check().unwrap().holds);
    }
}

#[test]
fn suites_report_hypothesis_status() {
    let (a, _) = tightness_example::<f64>(3).unwrap();
    let report = GuaranteeChecker::new(&a).run_suites(Suite::All, 3, 4, 1).unwrap();
    assert_eq!(report.suites.len(), 4);
    assert!(report.pass());
    assert!(report.suites.iter().all(|s| !s.in_hypothesis));

    let a = &certified_matrices(1, 1, 3)[0];
    let report = GuaranteeChecker::new(a).run_suites(Suite::Eq7, 1, 10, 1).unwrap();
    assert_eq!(report.suites.len(), 1);
    assert!(report.suites[0].in_hypothesis && report.suites[0].pass);
    assert_eq!(report.suites[0].checks, 10);
}

#[test]
fn suite_names_and_aliases() {
    for (a, b) in [("lemma4", "off-support"), ("eq7", "selection"), ("remark2", "comparison"), ("theorem1", "recovery")] {
        assert_eq!(a.parse::<Suite>().unwrap(), b.parse::<Suite>().unwrap());
    }
    assert!("bogus".parse::<Suite>().is_err());
}
