//! Noise-sweep benchmark: simulate, add noise, learn with every configured
//! method, score against the true coefficients, then summarize and plot.

mod config;
mod plot;
mod run;
mod summary;
mod table;

pub use config::{preset, ExperimentConfig, TrajErrorConfig, DEFAULT_NOISE_LEVELS, DEFAULT_SDE_NW, PRESETS};
pub use plot::{plot, plot_metric, PlotMetric};
pub use run::{cell_seed, run_experiment, RunOptions};
pub use summary::{percentile, summarize, Quartiles, Summary, SummaryRow};
pub use table::{ResultRow, ResultTable, HEADER};
