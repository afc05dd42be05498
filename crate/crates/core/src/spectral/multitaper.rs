use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::slepian::{slepian_tapers, TaperSet};
use crate::error::{Error, Result};

/// Power spectral density on the FFT grid `ℓ / (k·dt)`, `ℓ = 0..=k/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdEstimate {
    pub freqs: Vec<f64>,
    pub power: Vec<f64>,
    /// Length `k` of the analysed signal.
    pub n_samples: usize,
}

impl PsdEstimate {
    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }
}

fn check_signal(signal: &[f64], dt: f64) -> Result<()> {
    if signal.len() < 8 {
        return Err(Error::TooShort { min: 8, got: signal.len() });
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("sampling interval must be positive, got {dt}")));
    }
    if signal.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("signal"));
    }
    Ok(())
}

fn demeaned(signal: &[f64]) -> Vec<f64> {
    let mean = signal.iter().sum::<f64>() / signal.len() as f64;
    signal.iter().map(|v| v - mean).collect()
}

fn grid(k: usize, dt: f64) -> Vec<f64> {
    let t = k as f64 * dt;
    (0..=k / 2).map(|l| l as f64 / t).collect()
}

/// Multitaper estimate with freshly computed tapers.
pub fn multitaper_psd(signal: &[f64], dt: f64, nw: f64) -> Result<PsdEstimate> {
    check_signal(signal, dt)?;
    let tapers = slepian_tapers(signal.len(), nw)?;
    multitaper_psd_with(signal, dt, &tapers)
}

/// Average of the tapered periodograms `(1/k)|FFT(g_j ⊙ y)|²` after removing
/// the sample mean.
pub fn multitaper_psd_with(signal: &[f64], dt: f64, tapers: &TaperSet) -> Result<PsdEstimate> {
    check_signal(signal, dt)?;
    let k = signal.len();
    if tapers.n != k {
        return Err(Error::DimensionMismatch { expected: tapers.n, got: k });
    }
    let y = demeaned(signal);
    let fft = FftPlanner::new().plan_fft_forward(k);
    let bins = k / 2 + 1;
    let mut power = vec![0.0; bins];
    let mut buf = vec![Complex::new(0.0, 0.0); k];
    for g in &tapers.tapers {
        for ((b, yv), gv) in buf.iter_mut().zip(&y).zip(g) {
            *b = Complex::new(yv * gv, 0.0);
        }
        fft.process(&mut buf);
        for (p, z) in power.iter_mut().zip(&buf) {
            *p += z.norm_sqr();
        }
    }
    let scale = 1.0 / (tapers.count() as f64 * k as f64);
    power.iter_mut().for_each(|p| *p *= scale);
    Ok(PsdEstimate { freqs: grid(k, dt), power, n_samples: k })
}

/// Plain periodogram `(1/k)|FFT(y)|²` of the mean-removed signal.
pub fn periodogram(signal: &[f64], dt: f64) -> Result<PsdEstimate> {
    check_signal(signal, dt)?;
    let k = signal.len();
    let mut buf: Vec<Complex<f64>> = demeaned(signal).into_iter().map(|v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(k).process(&mut buf);
    let power = buf[..k / 2 + 1].iter().map(|z| z.norm_sqr() / k as f64).collect();
    Ok(PsdEstimate { freqs: grid(k, dt), power, n_samples: k })
}
