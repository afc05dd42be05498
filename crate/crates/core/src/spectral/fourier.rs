//! Fourier series coefficients of sampled signals.
//!
//! With `F[ℓ] = Σ_n y_n e^{-i 2π ℓ n / N}` the coefficients are
//! `a_ℓ = (2/N) Re F[ℓ]`, `b_ℓ = -(2/N) Im F[ℓ]` and `a_0 = F[0] / N`, so
//! that `y(t) ≈ a_0 + Σ a_ℓ cos(2πℓt/T) + b_ℓ sin(2πℓt/T)`.
//!
//! Two quadratures are provided. [`Quadrature::Periodic`] treats the `k`
//! samples as one period (`T = k·dt`, `N = k`), which is exact for
//! band-limited periodic signals. [`Quadrature::Endpoint`] integrates over
//! the sampled span `T = (k-1)·dt` with the trapezoid rule, so the first and
//! last samples sit exactly where the sinusoidal test functions vanish; this
//! is the form the weak-form regression needs on non-periodic trajectories.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    /// `T = k·dt`; rectangle rule over one assumed period.
    Periodic,
    /// `T = (k-1)·dt`; trapezoid rule over the sampled interval.
    #[default]
    Endpoint,
}

impl Quadrature {
    /// FFT length used for a signal of `k` samples.
    pub fn fft_len(self, k: usize) -> usize {
        match self {
            Quadrature::Periodic => k,
            Quadrature::Endpoint => k.saturating_sub(1),
        }
    }

    /// Integration period for `k` samples at spacing `dt`.
    pub fn period(self, k: usize, dt: f64) -> f64 {
        self.fft_len(k) as f64 * dt
    }
}

/// Cosine and sine coefficients for `ℓ = 0..=L`; `b[0]` is always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs {
    pub period: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub quadrature: Quadrature,
}

impl FourierCoeffs {
    /// Highest index `L`, one below the Nyquist bin.
    pub fn max_index(&self) -> usize {
        self.a.len() - 1
    }

    /// Evaluates the truncated series at time `t`.
    pub fn reconstruct(&self, t: f64) -> f64 {
        let w = 2.0 * PI * t / self.period;
        self.a[0]
            + (1..self.a.len())
                .map(|l| {
                    let (s, c) = (w * l as f64).sin_cos();
                    self.a[l] * c + self.b[l] * s
                })
                .sum::<f64>()
    }
}

/// Highest usable Fourier index for an FFT of length `n`.
pub fn max_fourier_index(n: usize) -> usize {
    (n / 2).saturating_sub(1)
}

/// Reusable FFT plan for many signals of the same length.
#[derive(Clone)]
pub struct FourierAnalyzer {
    k: usize,
    dt: f64,
    quadrature: Quadrature,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FourierAnalyzer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierAnalyzer")
            .field("k", &self.k)
            .field("dt", &self.dt)
            .field("quadrature", &self.quadrature)
            .finish()
    }
}

impl FourierAnalyzer {
    pub fn new(k: usize, dt: f64, quadrature: Quadrature) -> Result<Self> {
        let n = quadrature.fft_len(k);
        if n < 4 {
            return Err(Error::TooShort { min: k + 4 - n, got: k });
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("sampling interval must be positive, got {dt}")));
        }
        let fft = FftPlanner::new().plan_fft_forward(n);
        Ok(Self { k, dt, quadrature, fft })
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn period(&self) -> f64 {
        self.quadrature.period(self.k, self.dt)
    }

    pub fn max_index(&self) -> usize {
        max_fourier_index(self.quadrature.fft_len(self.k))
    }

    pub fn coeffs(&self, signal: &[f64]) -> Result<FourierCoeffs> {
        if signal.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: signal.len() });
        }
        if signal.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("signal"));
        }
        let n = self.quadrature.fft_len(self.k);
        let mut buf: Vec<Complex<f64>> = signal[..n].iter().map(|&v| Complex::new(v, 0.0)).collect();
        self.fft.process(&mut buf);

        let l_max = max_fourier_index(n);
        let nf = n as f64;
        // Trapezoid correction: the closing sample enters with half weight and
        // the opening one loses half of its weight; at integer frequencies both
        // carry phase 1.
        let jump = match self.quadrature {
            Quadrature::Periodic => 0.0,
            Quadrature::Endpoint => 0.5 * (signal[n] - signal[0]),
        };
        let mut a = Vec::with_capacity(l_max + 1);
        let mut b = Vec::with_capacity(l_max + 1);
        a.push((buf[0].re + jump) / nf);
        b.push(0.0);
        for z in &buf[1..=l_max] {
            a.push(2.0 * (z.re + jump) / nf);
            b.push(-2.0 * z.im / nf);
        }
        Ok(FourierCoeffs { period: self.period(), a, b, quadrature: self.quadrature })
    }
}

/// Periodic-convention coefficients, `T = k·dt`.
pub fn fourier_coeffs(signal: &[f64], dt: f64) -> Result<FourierCoeffs> {
    FourierAnalyzer::new(signal.len(), dt, Quadrature::Periodic)?.coeffs(signal)
}

/// Trapezoid coefficients over the sampled span, `T = (k-1)·dt`.
pub fn fourier_coeffs_endpoint(signal: &[f64], dt: f64) -> Result<FourierCoeffs> {
    FourierAnalyzer::new(signal.len(), dt, Quadrature::Endpoint)?.coeffs(signal)
}
