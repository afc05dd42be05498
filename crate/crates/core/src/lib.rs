//! Sparse identification of nonlinear ODEs from noisy, uniformly sampled data.
//!
//! Three learners share one polynomial dictionary and one sequentially
//! thresholded ridge solver:
//!
//! * [`learners::sindy_classic`] regresses finite-difference derivatives.
//! * [`learners::wsindy_bump`] uses compactly supported polynomial bump test
//!   functions.
//! * [`learners::wsindy_fourier`] uses sinusoidal test functions, which turns
//!   the weak form into a regression over Fourier series coefficients. The
//!   frequencies entering the regression are picked from a multitaper power
//!   spectral density estimate of the data.
//!
//! The [`harness`] module drives the full noise-sweep benchmark over the four
//! built-in systems in [`ode`].

pub mod dictionary;
pub mod error;
pub mod format;
pub mod harness;
pub mod learners;
pub mod metrics;
pub mod ode;
pub mod regression;
pub mod spectral;

pub use dictionary::{CoefficientMatrix, DictionaryMatrix, DictionarySpec};
pub use error::{Error, Result};
pub use learners::{LearnerResult, Method};
pub use ode::{NoiseSpec, OdeSystem, Trajectory};
pub use regression::SolverConfig;
