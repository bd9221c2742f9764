use olslab::constructions::{counterexample_gram, prior_threshold};
use olslab::{compute_ck, counterexample, exact_rip_constant, gram_to_matrix, tightness_example, Error, GramSpecF64, MatrixF64};

fn gram_of(a: &olslab::SensingMatrixF64) -> MatrixF64 {
    a.matrix().gram()
}

#[test]
fn thresholds() {
    assert_eq!(compute_ck::<f64>(1).unwrap(), 1.0);
    assert!((compute_ck::<f64>(2).unwrap() - 2.0 / 3.0).abs() < 1e-16);
    assert!((compute_ck::<f64>(3).unwrap() - 4.0 / 7.0).abs() < 1e-16);
    assert_eq!(compute_ck::<f64>(4).unwrap(), 0.5);
    assert!((compute_ck::<f64>(9).unwrap() - 1.0 / 3.0).abs() < 1e-16);
    assert!(compute_ck::<f64>(0).is_err());
    for k in 1..20 {
        assert!(compute_ck::<f64>(k).unwrap() > prior_threshold::<f64>(k));
    }
}

#[test]
fn identity_gram_factors_to_orthonormal_columns() {
    let g = GramSpecF64::new(MatrixF64::identity(3)).unwrap();
    let a = gram_to_matrix(&g).unwrap();
    assert!(gram_of(&a).max_abs_diff(&MatrixF64::identity(3)) < 1e-14);
}

#[test]
fn factor_reproduces_counterexample_grams() {
    for (k, d) in [(2usize, 2.0 / 3.0), (3, 0.6), (4, 0.6), (6, 0.45)] {
        let g = counterexample_gram::<f64>(k, d).unwrap();
        let a = gram_to_matrix(&g).unwrap();
        assert!(gram_of(&a).max_abs_diff(g.entries()) < 1e-13, "K={k}");
        assert!((exact_rip_constant(&a, k + 1).unwrap().delta - d).abs() < 1e-12, "K={k}");
    }
}

#[test]
fn singular_gram_drops_null_directions() {
    let g = MatrixF64::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
    let a = gram_to_matrix(&GramSpecF64::new(g).unwrap()).unwrap();
    assert_eq!(a.rows(), 1);
}

#[test]
fn invalid_grams() {
    let not_unit = MatrixF64::from_rows(&[[2.0, 0.0], [0.0, 1.0]]).unwrap();
    assert!(matches!(GramSpecF64::new(not_unit), Err(Error::InvalidGram(_))));
    let asym = MatrixF64::from_rows(&[[1.0, 0.2], [0.1, 1.0]]).unwrap();
    assert!(matches!(GramSpecF64::new(asym), Err(Error::InvalidGram(_))));
    let indefinite = MatrixF64::from_rows(&[[1.0, 0.9, 0.9], [0.9, 1.0, -0.9], [0.9, -0.9, 1.0]]).unwrap();
    assert!(matches!(GramSpecF64::new(indefinite), Err(Error::NotPositiveSemidefinite { .. })));
}

#[test]
fn counterexample_parameters() {
    assert!(counterexample::<f64>(1, 0.5).is_err());
    assert!(counterexample::<f64>(2, 0.0).is_err());
    assert!(counterexample::<f64>(2, 1.0).is_err());
    let (a, x) = counterexample::<f64>(3, 0.7).unwrap();
    assert_eq!(a.cols(), 4);
    assert_eq!(x.values(), &[0.0, 1.0, 1.0, 1.0]);
    assert!(a.validate().is_valid());
}

#[test]
fn counterexample_correlations_tie_at_threshold() {
    for k in [2usize, 3, 4, 5, 8] {
        let d: f64 = compute_ck(k).unwrap();
        let (a, x) = counterexample::<f64>(k, d).unwrap();
        let y = a.apply(&x).unwrap();
        let c = a.matrix().tr_mul_vec(&y).unwrap();
        let best_on_support = c[1..].iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!((c[0].abs() - best_on_support).abs() < 1e-12, "K={k}");
    }
}

#[test]
fn tightness_instance_shape() {
    assert!(tightness_example::<f64>(0).is_err());
    for k in 2..=6usize {
        let (a, x) = tightness_example::<f64>(k).unwrap();
        assert_eq!((a.rows(), a.cols()), (k + 1, k + 1));
        assert!(a.validate().is_valid());
        assert_eq!(x.support().indices(), (2..=k + 1).collect::<Vec<_>>().as_slice());
        let y = a.apply(&x).unwrap();
        let c = a.matrix().tr_mul_vec(&y).unwrap();
        assert!(c.iter().all(|v| (v.abs() - 1.0).abs() < 1e-12));
    }
}
