//! Equation learners sharing one dictionary and one sparse solver.

mod bump;
mod fourier;
mod sindy;

pub use bump::{wsindy_bump, BumpRow, BumpTestFunctionSpec, MIN_SUBDOMAIN_SAMPLES};
pub use fourier::{
    analysis_len, resolve_frequencies, wsindy_fourier, wsindy_fourier_with, FrequencyStrategy, WeakFourierData,
};
pub use sindy::{finite_difference, sindy_classic};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::dictionary::{CoefficientMatrix, DictionarySpec};
use crate::error::{Error, Result};
use crate::ode::Trajectory;
use crate::regression::SolverConfig;
use crate::spectral::{slepian_tapers, Quadrature, TaperSet};

/// A learner and its method-specific settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    Sindy,
    WsindyBump { subdomains: usize, q: u32 },
    WsindyFourierSweep { l_max: usize },
    /// `k` dominant frequencies of a multitaper spectrum with time-bandwidth
    /// product `nw` over the analysis window.
    WsindyFourierSde { k: usize, nw: f64 },
    WsindyFourierOracle { k: usize },
    WsindyFourierFixed { indices: Vec<usize> },
}

impl Method {
    /// Short label used in result tables and plots.
    pub fn label(&self) -> String {
        match self {
            Method::Sindy => "sindy".into(),
            Method::WsindyBump { subdomains, q } => format!("wsindy_bump(p={subdomains},q={q})"),
            Method::WsindyFourierSweep { l_max } => format!("fourier_sweep({l_max})"),
            Method::WsindyFourierSde { k, nw } => format!("fourier_sde(K={k},nw={nw})"),
            Method::WsindyFourierOracle { k } => format!("fourier_oracle(K={k})"),
            Method::WsindyFourierFixed { indices } => format!("fourier_fixed({})", indices.len()),
        }
    }
}

/// Learned model plus diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerResult {
    pub method: Method,
    pub coeffs: CoefficientMatrix,
    /// Selected Fourier indices per state component; empty for the other
    /// learners.
    pub selected: Vec<Vec<usize>>,
    /// Solver iterations per state component.
    pub iterations: Vec<usize>,
    pub residual_norms: Vec<f64>,
}

impl LearnerResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "method": self.method,
            "terms": self.coeffs.spec.term_names(),
            "coefficients": self.coeffs.to_rows(),
            "equations": self.coeffs.equations(),
            "selected_frequencies": self.selected,
            "iterations": self.iterations,
            "residual_norms": self.residual_norms,
        })
    }

    /// Total number of selected frequencies over all components.
    pub fn selected_count(&self) -> usize {
        self.selected.iter().map(Vec::len).sum()
    }
}

/// Optional inputs some methods need.
#[derive(Debug, Clone, Copy, Default)]
pub struct LearnContext<'a> {
    /// Clean trajectory for oracle frequency selection.
    pub clean: Option<&'a Trajectory>,
    /// Precomputed tapers for SDE selection; rebuilt when absent or when
    /// they do not fit the data.
    pub tapers: Option<&'a TaperSet>,
}

/// Runs `method` on `data`.
pub fn learn(
    method: &Method,
    data: &Trajectory,
    spec: &DictionarySpec,
    cfg: &SolverConfig,
    ctx: LearnContext<'_>,
) -> Result<LearnerResult> {
    match method {
        Method::Sindy => sindy_classic(data, spec, cfg),
        Method::WsindyBump { subdomains, q } => {
            wsindy_bump(data, spec, &BumpTestFunctionSpec { subdomains: *subdomains, q: *q }, cfg)
        }
        Method::WsindyFourierSweep { l_max } => wsindy_fourier(data, spec, &FrequencyStrategy::Sweep { l_max: *l_max }, cfg),
        Method::WsindyFourierSde { k, nw } => {
            let n = analysis_len(data.len(), Quadrature::default());
            let owned;
            let tapers = match ctx.tapers {
                Some(t) if t.n == n && t.nw == *nw => t,
                _ => {
                    owned = slepian_tapers(n, *nw)?;
                    &owned
                }
            };
            wsindy_fourier(data, spec, &FrequencyStrategy::Sde { count: *k, tapers }, cfg)
        }
        Method::WsindyFourierOracle { k } => {
            let clean = ctx
                .clean
                .ok_or_else(|| Error::InvalidArgument("oracle selection needs the clean trajectory".into()))?;
            wsindy_fourier(data, spec, &FrequencyStrategy::Oracle { count: *k, clean }, cfg)
        }
        Method::WsindyFourierFixed { indices } => {
            wsindy_fourier(data, spec, &FrequencyStrategy::Fixed { indices }, cfg)
        }
    }
}
