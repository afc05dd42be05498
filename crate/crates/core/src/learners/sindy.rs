use nalgebra::DMatrix;

use super::{LearnerResult, Method};
use crate::dictionary::{CoefficientMatrix, DictionarySpec};
use crate::error::{Error, Result};
use crate::ode::Trajectory;
use crate::regression::{st_ridge_multi, SolverConfig};

/// Second-order finite differences: centered in the interior, one-sided
/// three-point stencils at both ends.
pub fn finite_difference(states: &DMatrix<f64>, dt: f64) -> Result<DMatrix<f64>> {
    let (k, n) = states.shape();
    if k < 5 {
        return Err(Error::TooShort { min: 5, got: k });
    }
    let h = 0.5 / dt;
    let mut d = DMatrix::zeros(k, n);
    for j in 0..n {
        let x = states.column(j);
        d[(0, j)] = (-3.0 * x[0] + 4.0 * x[1] - x[2]) * h;
        for i in 1..k - 1 {
            d[(i, j)] = (x[i + 1] - x[i - 1]) * h;
        }
        d[(k - 1, j)] = (3.0 * x[k - 1] - 4.0 * x[k - 2] + x[k - 3]) * h;
    }
    Ok(d)
}

/// Classic SINDy: regress finite-difference derivatives on `Θ(Y)`.
pub fn sindy_classic(data: &Trajectory, spec: &DictionarySpec, cfg: &SolverConfig) -> Result<LearnerResult> {
    if data.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: data.dim() });
    }
    let xdot = finite_difference(data.states(), data.dt())?;
    let theta = spec.evaluate(data)?;
    let fit = st_ridge_multi(&theta.values, &xdot, cfg)?;
    Ok(LearnerResult {
        method: Method::Sindy,
        coeffs: CoefficientMatrix::from_values(spec, fit.coeffs)?,
        selected: Vec::new(),
        iterations: fit.iterations,
        residual_norms: fit.residual_norms,
    })
}
