//! Fourier coefficients, Slepian tapers, multitaper spectral density
//! estimation and dominant-frequency selection.
//!
//! All transforms use `F[ℓ] = Σ_n y_n e^{-i 2π ℓ n / N}`.

pub mod fourier;
pub mod multitaper;
pub mod selection;
pub mod slepian;
pub mod tridiag;

pub use fourier::{
    fourier_coeffs, fourier_coeffs_endpoint, max_fourier_index, FourierAnalyzer, FourierCoeffs, Quadrature,
};
pub use multitaper::{multitaper_psd, multitaper_psd_with, periodogram, PsdEstimate};
pub use selection::{select_frequencies, sweep_selection, FrequencySelection, SelectionMethod};
pub use slepian::{sinc_kernel, slepian_tapers, TaperSet};
