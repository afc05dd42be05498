//! Sequentially thresholded ridge regression (STRidge).
//!
//! Each target column is fitted by alternating a ridge solve restricted to
//! the active columns with hard thresholding of small coefficients, until
//! the active set stops changing. Ridge solves go through the augmented
//! system `[A_S; √λ I] w = [y; 0]` and an SVD, which also gives the
//! minimum-norm solution when `λ = 0` and `A_S` is rank deficient.
//!
//! Tall problems are first compressed by one Householder QR `A = QR`:
//! `‖A_S w − y‖² = ‖R_S w − Qᵀy‖² + const`, so every later solve works on
//! `m` rows.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Coefficients with magnitude below this are set to zero.
    pub threshold: f64,
    pub ridge: f64,
    pub max_iters: usize,
    /// Threshold coefficients of unit-norm columns, then rescale back.
    pub normalize_columns: bool,
    /// Finish with an unregularized refit on the selected support.
    pub debias: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { threshold: 0.5, ridge: 0.001, max_iters: 20, normalize_columns: false, debias: false }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(Error::Config(format!("threshold must be positive, got {}", self.threshold)));
        }
        if !(self.ridge >= 0.0 && self.ridge.is_finite()) {
            return Err(Error::Config(format!("ridge must be non-negative, got {}", self.ridge)));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// One fitted target column.
#[derive(Debug, Clone, PartialEq)]
pub struct StRidgeFit {
    pub coeffs: DVector<f64>,
    /// Number of restricted solves performed.
    pub iterations: usize,
    /// `‖A w − y‖₂` of the returned coefficients.
    pub residual_norm: f64,
    /// Whether the active set stabilized before `max_iters`.
    pub converged: bool,
    /// Size of the active set entering each solve.
    pub active_sizes: Vec<usize>,
}

/// Column-wise fits of a multi-target problem.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiFit {
    /// `m × n` coefficients, one column per target.
    pub coeffs: DMatrix<f64>,
    pub iterations: Vec<usize>,
    pub residual_norms: Vec<f64>,
}

fn check_inputs(a: &DMatrix<f64>, y: &DMatrix<f64>, cfg: &SolverConfig) -> Result<()> {
    cfg.validate()?;
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::InvalidArgument("design matrix must be non-empty".into()));
    }
    if y.nrows() != a.nrows() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), got: y.nrows() });
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("design matrix"));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("regression target"));
    }
    Ok(())
}

/// Sparse fit of a single target `y ≈ A w`.
pub fn st_ridge(a: &DMatrix<f64>, y: &DVector<f64>, cfg: &SolverConfig) -> Result<StRidgeFit> {
    let y = DMatrix::from_column_slice(y.len(), 1, y.as_slice());
    check_inputs(a, &y, cfg)?;
    let reduced = Reduced::new(a, &y);
    let fit = reduced.solve_column(0, cfg);
    Ok(fit)
}

/// Independent sparse fits of every column of `Y ≈ A W`. Columns are solved
/// in parallel; results do not depend on scheduling.
pub fn st_ridge_multi(a: &DMatrix<f64>, y: &DMatrix<f64>, cfg: &SolverConfig) -> Result<MultiFit> {
    check_inputs(a, y, cfg)?;
    let reduced = Reduced::new(a, y);
    let fits: Vec<StRidgeFit> = (0..y.ncols()).into_par_iter().map(|i| reduced.solve_column(i, cfg)).collect();
    let mut coeffs = DMatrix::zeros(a.ncols(), y.ncols());
    for (i, f) in fits.iter().enumerate() {
        coeffs.set_column(i, &f.coeffs);
    }
    Ok(MultiFit {
        coeffs,
        iterations: fits.iter().map(|f| f.iterations).collect(),
        residual_norms: fits.iter().map(|f| f.residual_norm).collect(),
    })
}

/// Least-squares problem after orthogonal compression. `rows` holds either
/// the original `[A | Y]` or `[R | Qᵀ Y]` from the thin QR of `A`; `offset`
/// is the squared residual outside the range of `Q`, per target.
struct Reduced {
    m: usize,
    rows: DMatrix<f64>,
    offset: Vec<f64>,
    col_norms: Vec<f64>,
}

impl Reduced {
    fn new(a: &DMatrix<f64>, y: &DMatrix<f64>) -> Self {
        let (p, m) = a.shape();
        let n = y.ncols();
        // Columns at rounding level relative to the largest one carry no
        // signal (the constant term's sine coefficients, for instance) and are
        // treated as zero so normalization cannot blow them up.
        let mut col_norms: Vec<f64> = a.column_iter().map(|c| c.norm()).collect();
        let floor = col_norms.iter().copied().fold(0.0, f64::max) * p as f64 * f64::EPSILON;
        col_norms.iter_mut().filter(|c| **c <= floor).for_each(|c| *c = 0.0);
        // The choice depends on A alone so that a column's result does not
        // change with the number of targets solved alongside it.
        if p <= m {
            let mut rows = DMatrix::zeros(p, m + n);
            rows.columns_mut(0, m).copy_from(a);
            rows.columns_mut(m, n).copy_from(y);
            return Self { m, rows, offset: vec![0.0; n], col_norms };
        }
        let qr = a.clone().qr();
        let q = qr.q();
        let mut qty = DMatrix::zeros(m, n);
        for i in 0..n {
            qty.set_column(i, &q.tr_mul(&y.column(i)));
        }
        let mut rows = DMatrix::zeros(m, m + n);
        rows.columns_mut(0, m).copy_from(&qr.r());
        rows.columns_mut(m, n).copy_from(&qty);
        let offset = (0..n).map(|i| (y.column(i).norm_squared() - qty.column(i).norm_squared()).max(0.0)).collect();
        Self { m, rows, offset, col_norms }
    }

    fn residual(&self, target: usize, w: &DVector<f64>) -> f64 {
        let a = self.rows.columns(0, self.m);
        let r = a * w - self.rows.column(self.m + target);
        (r.norm_squared() + self.offset[target]).sqrt()
    }

    /// Ridge solve restricted to `active`, in the (optionally) scaled space.
    fn ridge_solve(&self, target: usize, active: &[usize], scale: &[f64], ridge: f64) -> Vec<f64> {
        let rows = self.rows.nrows();
        let s = active.len();
        let aug = if ridge > 0.0 { rows + s } else { rows };
        let mut lhs = DMatrix::zeros(aug, s);
        let mut rhs = DVector::zeros(aug);
        for (c, &j) in active.iter().enumerate() {
            for r in 0..rows {
                lhs[(r, c)] = self.rows[(r, j)] * scale[j];
            }
            if ridge > 0.0 {
                lhs[(rows + c, c)] = ridge.sqrt();
            }
        }
        rhs.rows_mut(0, rows).copy_from(&self.rows.column(self.m + target));
        let svd = lhs.svd(true, true);
        let smax = svd.singular_values.max();
        let eps = smax * aug.max(s) as f64 * f64::EPSILON;
        let w = svd.solve(&rhs, eps).expect("SVD factors were requested");
        w.iter().copied().collect()
    }

    fn solve_column(&self, target: usize, cfg: &SolverConfig) -> StRidgeFit {
        let m = self.m;
        let scale: Vec<f64> = if cfg.normalize_columns {
            self.col_norms.iter().map(|&c| if c > 0.0 { 1.0 / c } else { 0.0 }).collect()
        } else {
            vec![1.0; m]
        };
        let mut active: Vec<usize> = (0..m).filter(|&j| self.col_norms[j] > 0.0).collect();
        let mut w = vec![0.0; m];
        let mut active_sizes = Vec::new();
        let mut converged = false;

        let mut run = |active: &mut Vec<usize>, w: &mut Vec<f64>, ridge: f64, budget: usize| -> bool {
            for _ in 0..budget {
                if active.is_empty() {
                    w.iter_mut().for_each(|v| *v = 0.0);
                    return true;
                }
                active_sizes.push(active.len());
                let sol = self.ridge_solve(target, active, &scale, ridge);
                w.iter_mut().for_each(|v| *v = 0.0);
                for (&j, v) in active.iter().zip(&sol) {
                    w[j] = *v;
                }
                let kept: Vec<usize> = active.iter().copied().filter(|&j| w[j].abs() >= cfg.threshold).collect();
                if kept.len() == active.len() {
                    return true;
                }
                *active = kept;
            }
            // Out of budget: enforce the threshold on the last solve.
            for v in w.iter_mut() {
                if v.abs() < cfg.threshold {
                    *v = 0.0;
                }
            }
            false
        };

        converged |= run(&mut active, &mut w, cfg.ridge, cfg.max_iters);
        if cfg.debias && cfg.ridge > 0.0 && !active.is_empty() {
            converged = run(&mut active, &mut w, 0.0, cfg.max_iters);
        }

        let coeffs = DVector::from_iterator(m, w.iter().zip(&scale).map(|(v, s)| v * s));
        let residual_norm = self.residual(target, &coeffs);
        StRidgeFit { coeffs, iterations: active_sizes.len(), residual_norm, converged, active_sizes }
    }
}
