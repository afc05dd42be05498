use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::Method;
use crate::ode::Benchmark;
use crate::regression::SolverConfig;

/// Noise levels of the default sweep, from 1e-4 % to 100 %.
pub const DEFAULT_NOISE_LEVELS: [f64; 7] = [1e-6, 1e-4, 1e-2, 0.05, 0.25, 0.5, 1.0];

/// Time-bandwidth product of the default SDE method: 8 Hz over 10 s.
pub const DEFAULT_SDE_NW: f64 = 80.0;

pub const PRESETS: [&str; 7] =
    ["lorenz", "lotka_volterra", "hyper_lorenz", "hyper_jha", "lorenz-vary-k", "lorenz-vary-bw", "all"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajErrorConfig {
    pub enabled: bool,
    /// Simulation horizon in seconds; the training duration when absent.
    pub horizon: Option<f64>,
}

impl Default for TrajErrorConfig {
    fn default() -> Self {
        Self { enabled: true, horizon: None }
    }
}

/// One noise sweep on one system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: String,
    /// Parameter overrides by name.
    pub params: BTreeMap<String, f64>,
    /// Initial condition; the system default when absent.
    pub x0: Option<Vec<f64>>,
    pub duration: f64,
    pub fs: f64,
    pub degree: u32,
    pub noise_levels: Vec<f64>,
    pub instances_per_level: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub solver: SolverConfig,
    pub traj_error: TrajErrorConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::standard("lorenz")
    }
}

impl ExperimentConfig {
    /// The four-method noise sweep on `system`.
    pub fn standard(system: &str) -> Self {
        Self {
            system: system.to_string(),
            params: BTreeMap::new(),
            x0: None,
            duration: 10.0,
            fs: 1000.0,
            degree: 2,
            noise_levels: DEFAULT_NOISE_LEVELS.to_vec(),
            instances_per_level: 20,
            seed: 1,
            methods: vec![
                Method::Sindy,
                Method::WsindyBump { subdomains: 1000, q: 4 },
                Method::WsindyFourierSweep { l_max: 500 },
                Method::WsindyFourierSde { k: 100, nw: DEFAULT_SDE_NW },
            ],
            solver: SolverConfig::default(),
            traj_error: TrajErrorConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        Benchmark::from_name(&self.system)?;
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::Config(format!("duration must be positive, got {}", self.duration)));
        }
        if !(self.fs > 0.0 && self.fs.is_finite()) {
            return Err(Error::Config(format!("fs must be positive, got {}", self.fs)));
        }
        if self.noise_levels.is_empty() {
            return Err(Error::Config("noise_levels must not be empty".into()));
        }
        if let Some(bad) = self.noise_levels.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::Config(format!("noise levels must be finite and >= 0, got {bad}")));
        }
        if self.instances_per_level == 0 {
            return Err(Error::Config("instances_per_level must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("methods must not be empty".into()));
        }
        if let Some(h) = self.traj_error.horizon {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::Config(format!("trajectory-error horizon must be positive, got {h}")));
            }
        }
        self.solver.validate()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Named configurations. `all` expands to the four systems.
pub fn preset(name: &str) -> Result<Vec<ExperimentConfig>> {
    let configs = match name {
        "lorenz" | "lotka_volterra" | "hyper_lorenz" | "hyper_jha" => vec![ExperimentConfig::standard(name)],
        "all" => Benchmark::ALL.iter().map(|b| ExperimentConfig::standard(b.name())).collect(),
        "lorenz-vary-k" => vec![ExperimentConfig {
            noise_levels: vec![1e-4, 1e-2, 0.1, 0.5, 1.0],
            methods: [10, 30, 50, 100, 200, 500].into_iter().map(|k| Method::WsindyFourierOracle { k }).collect(),
            ..ExperimentConfig::standard("lorenz")
        }],
        "lorenz-vary-bw" => {
            let base = ExperimentConfig::standard("lorenz");
            let duration = base.duration;
            vec![ExperimentConfig {
                noise_levels: vec![1e-4, 1e-2, 0.1, 0.5, 1.0],
                methods: [0.4, 1.0, 2.0, 4.0, 8.0, 16.0]
                    .into_iter()
                    .map(|bw_hz| Method::WsindyFourierSde { k: 100, nw: bw_hz * duration })
                    .collect(),
                ..base
            }]
        }
        _ => {
            return Err(Error::Config(format!("unknown preset `{name}`; expected one of {}", PRESETS.join(", "))));
        }
    };
    Ok(configs)
}
