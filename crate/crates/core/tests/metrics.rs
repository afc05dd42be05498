mod common;

use fwsindy::metrics::{coeff_error, evaluate, tpr, trajectory_error};
use fwsindy::ode::{make_system, Benchmark};
use fwsindy::{CoefficientMatrix, DictionarySpec};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::seq::SliceRandom;

#[test]
fn truth_scores_perfectly_everywhere() {
    for bench in Benchmark::ALL {
        let sys = make_system(bench.name(), &[]).unwrap();
        for degree in 2..=4 {
            let spec = DictionarySpec::new(sys.dim(), degree).unwrap();
            let w = sys.true_coeffs(&spec).unwrap();
            assert_eq!(tpr(&w, &w).unwrap(), 1.0);
            assert_eq!(coeff_error(&w, &w).unwrap(), 0.0);
        }
    }
}

#[test]
fn spurious_terms_count_against_support() {
    let spec = common::lorenz_spec();
    let w = make_system("lorenz", &[]).unwrap().true_coeffs(&spec).unwrap();
    assert_eq!(w.nnz(), 7);
    let mut est = w.clone();
    est.values[(0, 0)] = 0.1;
    est.values[(9, 1)] = -2.0;
    est.values[(4, 2)] = 0.7;
    assert!((tpr(&est, &w).unwrap() - 0.7).abs() < 1e-15);
    assert_eq!(tpr(&CoefficientMatrix::zeros(&spec), &w).unwrap(), 0.0);
}

#[test]
fn true_model_reproduces_trajectory() {
    let sys = make_system("lorenz", &[]).unwrap();
    let w = sys.true_coeffs(&common::lorenz_spec()).unwrap();
    let (err, stable) = trajectory_error(&w, &sys, &[20.0, 12.0, -30.0], 10.0, 1000.0).unwrap();
    assert!(stable);
    assert!(err < 1e-6, "{err}");
    let rec = evaluate(&w, &w, Some(common::lorenz_clean())).unwrap();
    assert!(rec.traj_err < 1e-6 && rec.stable);
}

#[test]
fn zero_model_error_is_finite() {
    let sys = make_system("lotka_volterra", &[]).unwrap();
    let spec = DictionarySpec::new(2, 2).unwrap();
    let (err, stable) = trajectory_error(&CoefficientMatrix::zeros(&spec), &sys, &[1.0, 1.0], 5.0, 500.0).unwrap();
    assert!(stable && err.is_finite() && err > 0.0);
}

fn permuted(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(rows[r], cols[c])])
}

fn sparse_matrix(seed: u64, density: f64) -> DMatrix<f64> {
    use rand::Rng;
    let mut rng = common::rng(seed);
    DMatrix::from_fn(10, 3, |_, _| if rng.random_bool(density) { rng.random_range(-5.0..5.0) } else { 0.0 })
}

proptest! {
    #[test]
    fn metrics_are_permutation_invariant(seed in any::<u64>(), d1 in 0.0f64..1.0, d2 in 0.0f64..1.0) {
        let spec = common::lorenz_spec();
        let (a, b) = (sparse_matrix(seed, d1), sparse_matrix(seed ^ 0x5555, d2));
        let mut rng = common::rng(seed);
        let mut rows: Vec<usize> = (0..10).collect();
        let mut cols: Vec<usize> = (0..3).collect();
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        let est = CoefficientMatrix::from_values(&spec, a.clone()).unwrap();
        let truth = CoefficientMatrix::from_values(&spec, b.clone()).unwrap();
        let est_p = CoefficientMatrix::from_values(&spec, permuted(&a, &rows, &cols)).unwrap();
        let truth_p = CoefficientMatrix::from_values(&spec, permuted(&b, &rows, &cols)).unwrap();
        let t = tpr(&est, &truth).unwrap();
        prop_assert!((0.0..=1.0).contains(&t));
        prop_assert_eq!(t, tpr(&est_p, &truth_p).unwrap());
        if b.norm() > 0.0 {
            let e = coeff_error(&est, &truth).unwrap();
            prop_assert!((e - coeff_error(&est_p, &truth_p).unwrap()).abs() <= 1e-12 * e.max(1.0));
        } else {
            prop_assert!(coeff_error(&est, &truth).is_err());
        }
    }

    #[test]
    fn coeff_error_scales_linearly(seed in any::<u64>(), scale in 0.0f64..100.0) {
        let spec = common::lorenz_spec();
        let w = make_system("lorenz", &[]).unwrap().true_coeffs(&spec).unwrap();
        let d = sparse_matrix(seed, 0.5);
        let one = CoefficientMatrix::from_values(&spec, &w.values + &d).unwrap();
        let many = CoefficientMatrix::from_values(&spec, &w.values + scale * &d).unwrap();
        let (e1, es) = (coeff_error(&one, &w).unwrap(), coeff_error(&many, &w).unwrap());
        prop_assert!((es - scale * e1).abs() <= 1e-12 * (scale * e1).max(1e-300));
    }
}
