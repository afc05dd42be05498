//! Coefficient error, support recovery and trajectory error of learned
//! models.

use serde::{Deserialize, Serialize};

use crate::dictionary::CoefficientMatrix;
use crate::error::{Error, Result};
use crate::ode::{integrate_rk4, OdeSystem, Trajectory, RK4_SUBSTEPS};

/// Evaluation of one learned model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub e2: f64,
    pub tpr: f64,
    /// `+∞` when the learned model diverged.
    pub traj_err: f64,
    pub stable: bool,
}

fn check_specs(est: &CoefficientMatrix, truth: &CoefficientMatrix) -> Result<()> {
    if est.spec != truth.spec {
        return Err(Error::SpecMismatch);
    }
    Ok(())
}

/// `‖Ŵ − W‖_F / ‖W‖_F`.
pub fn coeff_error(est: &CoefficientMatrix, truth: &CoefficientMatrix) -> Result<f64> {
    check_specs(est, truth)?;
    let norm = truth.values.norm();
    if norm == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((&est.values - &truth.values).norm() / norm)
}

/// `TP / (TP + FP + FN)` over exactly-nonzero entries; 1 when both
/// matrices are identically zero.
pub fn tpr(est: &CoefficientMatrix, truth: &CoefficientMatrix) -> Result<f64> {
    check_specs(est, truth)?;
    let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
    for (e, t) in est.values.iter().zip(truth.values.iter()) {
        match (*e != 0.0, *t != 0.0) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fneg += 1,
            (false, false) => {}
        }
    }
    let total = tp + fp + fneg;
    Ok(if total == 0 { 1.0 } else { tp as f64 / total as f64 })
}

/// Relative trajectory error of the learned model against `reference`,
/// simulated from the reference's first state on the same grid. Returns
/// `(+∞, false)` when the learned model diverges.
pub fn trajectory_error_against(est: &CoefficientMatrix, reference: &Trajectory) -> Result<(f64, bool)> {
    if est.spec.dim() != reference.dim() {
        return Err(Error::DimensionMismatch { expected: reference.dim(), got: est.spec.dim() });
    }
    let x0: Vec<f64> = reference.states().row(0).iter().copied().collect();
    let mut theta = vec![0.0; est.spec.len()];
    let simulated = integrate_rk4(
        |x, out| est.apply(x, &mut theta, out),
        &x0,
        reference.len(),
        reference.dt(),
        RK4_SUBSTEPS,
    );
    match simulated {
        Ok(states) => {
            let norm = reference.states().norm();
            if norm == 0.0 {
                return Err(Error::ZeroReference);
            }
            Ok(((&states - reference.states()).norm() / norm, true))
        }
        Err(Error::Diverged { .. }) => Ok((f64::INFINITY, false)),
        Err(e) => Err(e),
    }
}

/// Simulates both the true system and the learned model from `x0` over
/// `duration` seconds at `fs` Hz and compares them.
pub fn trajectory_error(
    est: &CoefficientMatrix,
    sys: &OdeSystem,
    x0: &[f64],
    duration: f64,
    fs: f64,
) -> Result<(f64, bool)> {
    let reference = sys.simulate(x0, duration, fs)?;
    trajectory_error_against(est, &reference)
}

/// E₂, TPR and, when `reference` is given, the trajectory error.
pub fn evaluate(
    est: &CoefficientMatrix,
    truth: &CoefficientMatrix,
    reference: Option<&Trajectory>,
) -> Result<MetricsRecord> {
    let e2 = coeff_error(est, truth)?;
    let tpr = tpr(est, truth)?;
    let (traj_err, stable) = match reference {
        Some(r) => trajectory_error_against(est, r)?,
        None => (f64::NAN, true),
    };
    Ok(MetricsRecord { e2, tpr, traj_err, stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::DictionarySpec;
    use crate::ode::make_system;

    fn lorenz_w() -> CoefficientMatrix {
        let spec = DictionarySpec::new(3, 2).unwrap();
        make_system("lorenz", &[]).unwrap().true_coeffs(&spec).unwrap()
    }

    #[test]
    fn coeff_error_basics() {
        let w = lorenz_w();
        assert_eq!(coeff_error(&w, &w).unwrap(), 0.0);
        assert!((coeff_error(&CoefficientMatrix::zeros(&w.spec), &w).unwrap() - 1.0).abs() < 1e-15);
        let doubled = CoefficientMatrix::from_values(&w.spec, &w.values * 2.0).unwrap();
        assert!((coeff_error(&doubled, &w).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(coeff_error(&w, &CoefficientMatrix::zeros(&w.spec)), Err(Error::ZeroReference)));
    }

    #[test]
    fn tpr_counts() {
        let w = lorenz_w();
        assert_eq!(w.nnz(), 7);
        assert_eq!(tpr(&w, &w).unwrap(), 1.0);
        assert_eq!(tpr(&CoefficientMatrix::zeros(&w.spec), &w).unwrap(), 0.0);
        let mut extra = w.clone();
        extra.values[(0, 0)] = 1.0;
        extra.values[(9, 1)] = -2.0;
        extra.values[(4, 2)] = 0.5;
        assert!((tpr(&extra, &w).unwrap() - 0.7).abs() < 1e-15);
        let z = CoefficientMatrix::zeros(&w.spec);
        assert_eq!(tpr(&z, &z).unwrap(), 1.0);
    }

    #[test]
    fn spec_mismatch() {
        let w = lorenz_w();
        let other = CoefficientMatrix::zeros(&DictionarySpec::new(3, 3).unwrap());
        assert!(matches!(tpr(&other, &w), Err(Error::SpecMismatch)));
        assert!(matches!(coeff_error(&other, &w), Err(Error::SpecMismatch)));
    }

    #[test]
    fn exact_model_reproduces_trajectory() {
        let sys = make_system("lorenz", &[]).unwrap();
        let w = lorenz_w();
        let (err, stable) = trajectory_error(&w, &sys, &[20.0, 12.0, -30.0], 10.0, 1000.0).unwrap();
        assert!(stable);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn zero_model_stays_at_initial_state() {
        let sys = make_system("lorenz", &[]).unwrap();
        let w = CoefficientMatrix::zeros(&lorenz_w().spec);
        let (err, stable) = trajectory_error(&w, &sys, &[20.0, 12.0, -30.0], 1.0, 1000.0).unwrap();
        assert!(stable && err.is_finite() && err > 0.0);
    }

    #[test]
    fn flipped_beta_diverges() {
        let sys = make_system("lorenz", &[]).unwrap();
        let mut w = lorenz_w();
        let row = w.spec.index_of(&[0, 0, 1]).unwrap();
        w.values[(row, 2)] = 8.0 / 3.0;
        let (err, stable) = trajectory_error(&w, &sys, &[20.0, 12.0, -30.0], 10.0, 1000.0).unwrap();
        assert!(!stable);
        assert_eq!(err, f64::INFINITY);
    }
}
