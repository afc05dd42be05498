use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::table::{ResultRow, ResultTable};
use crate::dictionary::{CoefficientMatrix, DictionarySpec};
use crate::error::{Error, Result};
use crate::learners::{analysis_len, learn, LearnContext, Method};
use crate::metrics;
use crate::ode::{add_noise, make_system, NoiseSpec, Trajectory};
use crate::spectral::{slepian_tapers, Quadrature, TaperSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Worker threads; the rayon default when `None`.
    pub jobs: Option<usize>,
    /// Record zero wall time so repeated runs are byte-identical.
    pub deterministic: bool,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Noise seed of one (level, instance) cell. Depends only on its arguments,
/// so adding levels or instances leaves existing cells unchanged.
pub fn cell_seed(seed: u64, level_index: usize, instance: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ level_index as u64) ^ instance as u64)
}

/// Everything shared by the cells of one sweep.
struct Shared {
    clean: Trajectory,
    truth: CoefficientMatrix,
    spec: DictionarySpec,
    reference: Option<Trajectory>,
    tapers: BTreeMap<u64, TaperSet>,
}

fn prepare(cfg: &ExperimentConfig) -> Result<Shared> {
    let overrides: Vec<(String, f64)> = cfg.params.iter().map(|(k, v)| (k.clone(), *v)).collect();
    let sys = make_system(&cfg.system, &overrides)?;
    let x0 = cfg.x0.clone().unwrap_or_else(|| sys.default_x0().to_vec());
    let clean = sys.simulate(&x0, cfg.duration, cfg.fs)?;
    let spec = DictionarySpec::new(sys.dim(), cfg.degree)?;
    let truth = sys.true_coeffs(&spec)?;
    let reference = if cfg.traj_error.enabled {
        match cfg.traj_error.horizon {
            Some(h) if h != cfg.duration => Some(sys.simulate(&x0, h, cfg.fs)?),
            _ => Some(clean.clone()),
        }
    } else {
        None
    };
    let n = analysis_len(clean.len(), Quadrature::default());
    let mut tapers = BTreeMap::new();
    for m in &cfg.methods {
        if let Method::WsindyFourierSde { nw, .. } = m {
            if let Entry::Vacant(slot) = tapers.entry(nw.to_bits()) {
                slot.insert(slepian_tapers(n, *nw)?);
            }
        }
    }
    Ok(Shared { clean, truth, spec, reference, tapers })
}

fn run_cell(
    cfg: &ExperimentConfig,
    shared: &Shared,
    level_index: usize,
    instance: usize,
    opts: &RunOptions,
) -> Vec<ResultRow> {
    let level = cfg.noise_levels[level_index];
    let noisy = add_noise(&shared.clean, &NoiseSpec { noise_ratio: level, seed: cell_seed(cfg.seed, level_index, instance) });
    cfg.methods
        .iter()
        .map(|method| {
            let start = Instant::now();
            let tapers = match method {
                Method::WsindyFourierSde { nw, .. } => shared.tapers.get(&nw.to_bits()),
                _ => None,
            };
            let ctx = LearnContext { clean: Some(&shared.clean), tapers };
            let outcome = learn(method, &noisy, &shared.spec, &cfg.solver, ctx).and_then(|res| {
                let rec = metrics::evaluate(&res.coeffs, &shared.truth, shared.reference.as_ref())?;
                Ok((res, rec))
            });
            let wall = if opts.deterministic { 0.0 } else { start.elapsed().as_secs_f64() * 1e3 };
            match outcome {
                Ok((res, rec)) => ResultRow {
                    system: cfg.system.clone(),
                    method: method.label(),
                    noise_ratio: level,
                    instance,
                    e2: rec.e2,
                    tpr: rec.tpr,
                    traj_err: rec.traj_err,
                    stable: rec.stable,
                    wall_time_ms: wall,
                    selected_frequency_count: res.selected_count(),
                    status: "ok".into(),
                },
                Err(e) => {
                    let mut row = ResultRow::failed(&cfg.system, method.label(), level, instance, &e.to_string());
                    row.wall_time_ms = wall;
                    row
                }
            }
        })
        .collect()
}

/// Runs the full sweep. Every method sees the same noisy realization per
/// (level, instance); failures become rows with an error status.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<ResultTable> {
    cfg.validate()?;
    let cells: Vec<(usize, usize)> = (0..cfg.noise_levels.len())
        .flat_map(|l| (0..cfg.instances_per_level).map(move |i| (l, i)))
        .collect();

    let shared = match prepare(cfg) {
        Ok(s) => s,
        Err(e) => {
            let reason = e.to_string();
            let reason = reason.as_str();
            let rows = cells
                .iter()
                .flat_map(|&(l, i)| {
                    cfg.methods.iter().map(move |m| {
                        ResultRow::failed(&cfg.system, m.label(), cfg.noise_levels[l], i, reason)
                    })
                })
                .collect();
            return Ok(ResultTable { rows });
        }
    };

    let work = || -> Vec<ResultRow> {
        cells.par_iter().flat_map_iter(|&(l, i)| run_cell(cfg, &shared, l, i, opts)).collect()
    };
    let rows = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?
            .install(work),
        None => work(),
    };
    Ok(ResultTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_distinct_and_stable() {
        let a = cell_seed(7, 0, 0);
        assert_eq!(a, cell_seed(7, 0, 0));
        assert_ne!(a, cell_seed(7, 0, 1));
        assert_ne!(a, cell_seed(7, 1, 0));
        assert_ne!(a, cell_seed(8, 0, 0));
        assert_ne!(cell_seed(7, 1, 2), cell_seed(7, 2, 1));
    }

    #[test]
    fn failed_setup_fills_rows() {
        let cfg = ExperimentConfig {
            params: [("rho".to_string(), 1e9)].into_iter().collect(),
            noise_levels: vec![0.0, 0.1],
            instances_per_level: 2,
            methods: vec![Method::Sindy],
            ..ExperimentConfig::default()
        };
        let table = run_experiment(&cfg, &RunOptions::default()).unwrap();
        assert_eq!(table.len(), 4);
        assert!(table.rows.iter().all(|r| !r.is_ok()));
    }
}
