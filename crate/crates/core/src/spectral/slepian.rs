//! Discrete prolate spheroidal (Slepian) tapers.
//!
//! The tapers are the leading eigenvectors of the tridiagonal matrix that
//! commutes with the `N × N` sinc kernel `sin(2πW(n-m)) / (π(n-m))`, with
//! `W = NW / N`. Their concentration ratios are then the Rayleigh quotients
//! of the sinc kernel, applied by FFT convolution.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::tridiag::SymTridiagonal;
use crate::error::{Error, Result};

/// `M = floor(2·NW)` unit-norm Slepian tapers of length `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaperSet {
    pub n: usize,
    pub nw: f64,
    /// One taper per entry, each of length `n`.
    pub tapers: Vec<Vec<f64>>,
    /// Energy concentration in `[-W, W]`, descending.
    pub eigenvalues: Vec<f64>,
}

impl TaperSet {
    pub fn count(&self) -> usize {
        self.tapers.len()
    }

    /// Normalized half-bandwidth `W` in cycles per sample.
    pub fn bandwidth(&self) -> f64 {
        self.nw / self.n as f64
    }
}

/// Computes the `floor(2·nw)` most concentrated Slepian sequences of length `n`.
pub fn slepian_tapers(n: usize, nw: f64) -> Result<TaperSet> {
    if n < 8 {
        return Err(Error::TooShort { min: 8, got: n });
    }
    if !(nw >= 1.0 && nw <= n as f64 / 4.0) {
        return Err(Error::InvalidArgument(format!(
            "time-bandwidth product must lie in [1, N/4] = [1, {}], got {nw}",
            n as f64 / 4.0
        )));
    }
    let m = (2.0 * nw).floor() as usize;
    let w = nw / n as f64;

    let cos_w = (2.0 * PI * w).cos();
    let d: Vec<f64> = (0..n)
        .map(|i| {
            let c = (n as f64 - 1.0 - 2.0 * i as f64) / 2.0;
            c * c * cos_w
        })
        .collect();
    let e: Vec<f64> = (1..n).map(|i| i as f64 * (n - i) as f64 / 2.0).collect();
    let (_, mut tapers) = SymTridiagonal::new(d, e).largest(m);

    for g in &mut tapers {
        let peak = g.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if let Some(first) = g.iter().find(|v| v.abs() > 1e-10 * peak) {
            if *first < 0.0 {
                g.iter_mut().for_each(|v| *v = -*v);
            }
        }
    }
    let eigenvalues = concentration(&tapers, w);
    Ok(TaperSet { n, nw, tapers, eigenvalues })
}

/// Sinc kernel value `sin(2πW j) / (π j)`, with `2W` at `j = 0`.
pub fn sinc_kernel(w: f64, j: i64) -> f64 {
    if j == 0 {
        2.0 * w
    } else {
        let j = j as f64;
        (2.0 * PI * w * j).sin() / (PI * j)
    }
}

/// Rayleigh quotients `gᵀ S g` of each unit-norm taper against the sinc kernel.
fn concentration(tapers: &[Vec<f64>], w: f64) -> Vec<f64> {
    let Some(first) = tapers.first() else { return Vec::new() };
    let n = first.len();
    let len = (2 * n - 1).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);

    let mut kernel = vec![Complex::new(0.0, 0.0); len];
    for j in 0..n {
        let v = sinc_kernel(w, j as i64);
        kernel[j] = Complex::new(v, 0.0);
        if j > 0 {
            kernel[len - j] = Complex::new(v, 0.0);
        }
    }
    fwd.process(&mut kernel);

    tapers
        .iter()
        .map(|g| {
            let mut buf = vec![Complex::new(0.0, 0.0); len];
            for (b, v) in buf.iter_mut().zip(g) {
                b.re = *v;
            }
            fwd.process(&mut buf);
            for (b, k) in buf.iter_mut().zip(&kernel) {
                *b *= *k;
            }
            inv.process(&mut buf);
            let scale = 1.0 / len as f64;
            let q: f64 = g.iter().zip(&buf).map(|(v, s)| v * s.re * scale).sum();
            q.clamp(0.0, 1.0)
        })
        .collect()
}
