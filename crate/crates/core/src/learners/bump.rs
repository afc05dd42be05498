use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{LearnerResult, Method};
use crate::dictionary::{CoefficientMatrix, DictionarySpec};
use crate::error::{Error, Result};
use crate::ode::Trajectory;
use crate::regression::{st_ridge_multi, SolverConfig};

/// Fewest samples a subdomain may hold.
pub const MIN_SUBDOMAIN_SAMPLES: usize = 5;

/// `p` equal, non-overlapping subdomains tiling the sampled interval, each
/// carrying the test function `(1 - t̄²)^q` with `t̄ = (t - t_j) / H_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BumpTestFunctionSpec {
    pub subdomains: usize,
    pub q: u32,
}

impl Default for BumpTestFunctionSpec {
    fn default() -> Self {
        Self { subdomains: 1000, q: 4 }
    }
}

impl BumpTestFunctionSpec {
    pub fn phi(&self, tbar: f64) -> f64 {
        if tbar.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - tbar * tbar).powi(self.q as i32)
        }
    }

    /// `dφ/dt` for half-width `h`.
    pub fn dphi(&self, tbar: f64, h: f64) -> f64 {
        if tbar.abs() >= 1.0 {
            0.0
        } else {
            -2.0 * self.q as f64 * tbar * (1.0 - tbar * tbar).powi(self.q as i32 - 1) / h
        }
    }

    /// Test-function values `Φ` and derivatives `Φ'` on the sample grid,
    /// one row per subdomain, stored over each row's support only.
    pub fn rows(&self, k: usize, dt: f64) -> Result<Vec<BumpRow>> {
        if self.subdomains == 0 || self.q == 0 {
            return Err(Error::InvalidArgument("bump test functions need p >= 1 and q >= 1".into()));
        }
        let span = k.saturating_sub(1) as f64 * dt;
        let width = span / self.subdomains as f64;
        let h = 0.5 * width;
        if width / dt + 1.0 < MIN_SUBDOMAIN_SAMPLES as f64 {
            return Err(Error::InvalidArgument(format!(
                "{} subdomains over {k} samples leave fewer than {MIN_SUBDOMAIN_SAMPLES} samples each",
                self.subdomains
            )));
        }
        Ok((0..self.subdomains)
            .map(|j| {
                let center = (j as f64 + 0.5) * width;
                let lo = ((center - h) / dt).floor().max(0.0) as usize;
                let hi = (((center + h) / dt).ceil() as usize).min(k - 1);
                let tbar: Vec<f64> = (lo..=hi).map(|i| (i as f64 * dt - center) / h).collect();
                BumpRow {
                    start: lo,
                    phi: tbar.iter().map(|&t| self.phi(t)).collect(),
                    dphi: tbar.iter().map(|&t| self.dphi(t, h)).collect(),
                }
            })
            .collect())
    }
}

/// One test function sampled over `start..start + phi.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpRow {
    pub start: usize,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
}

/// Weak SINDy with bump test functions: solves
/// `Δt Φ Θ(Y) W ≈ -Δt Φ' Y` column by column.
///
/// Every test function vanishes at both ends of its subdomain, so the
/// trapezoid rule over the global grid reduces to `Δt Σ_i`.
pub fn wsindy_bump(
    data: &Trajectory,
    spec: &DictionarySpec,
    tf: &BumpTestFunctionSpec,
    cfg: &SolverConfig,
) -> Result<LearnerResult> {
    if data.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: data.dim() });
    }
    let dt = data.dt();
    let rows = tf.rows(data.len(), dt)?;
    let theta = spec.evaluate(data)?;
    let states = data.states();
    let (m, n) = (spec.len(), spec.dim());
    let mut g = DMatrix::zeros(rows.len(), m);
    let mut b = DMatrix::zeros(rows.len(), n);
    for (r, row) in rows.iter().enumerate() {
        for (off, (p, dp)) in row.phi.iter().zip(&row.dphi).enumerate() {
            let i = row.start + off;
            for j in 0..m {
                g[(r, j)] += dt * p * theta.values[(i, j)];
            }
            for c in 0..n {
                b[(r, c)] -= dt * dp * states[(i, c)];
            }
        }
    }
    let fit = st_ridge_multi(&g, &b, cfg)?;
    Ok(LearnerResult {
        method: Method::WsindyBump { subdomains: tf.subdomains, q: tf.q },
        coeffs: CoefficientMatrix::from_values(spec, fit.coeffs)?,
        selected: Vec::new(),
        iterations: fit.iterations,
        residual_norms: fit.residual_norms,
    })
}
