use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{LearnerResult, Method};
use crate::dictionary::{CoefficientMatrix, DictionarySpec};
use crate::error::{Error, Result};
use crate::ode::Trajectory;
use crate::regression::{st_ridge, SolverConfig};
use crate::spectral::selection::top_bins;
use crate::spectral::{
    max_fourier_index, multitaper_psd_with, periodogram, FourierAnalyzer, FourierCoeffs, Quadrature, TaperSet,
};

/// Where the test-function frequencies come from.
#[derive(Debug, Clone, Copy)]
pub enum FrequencyStrategy<'a> {
    /// `ℓ = 1..=l_max` for every component.
    Sweep { l_max: usize },
    /// Top `count` bins of each component's multitaper spectrum. The tapers
    /// must match the analysis window length, see [`analysis_len`].
    Sde { count: usize, tapers: &'a TaperSet },
    /// Top `count` bins of each component's periodogram on clean data.
    Oracle { count: usize, clean: &'a Trajectory },
    /// The same explicit indices for every component, in the given order.
    Fixed { indices: &'a [usize] },
}

/// Number of samples that enter the FFTs for a trajectory of `k` samples.
pub fn analysis_len(k: usize, quadrature: Quadrature) -> usize {
    quadrature.fft_len(k)
}

/// Fourier coefficients of the state components and of every dictionary
/// column, computed once and shared by all components' regressions.
#[derive(Debug, Clone)]
pub struct WeakFourierData {
    pub period: f64,
    pub states: Vec<FourierCoeffs>,
    pub terms: Vec<FourierCoeffs>,
}

impl WeakFourierData {
    pub fn new(data: &Trajectory, spec: &DictionarySpec, quadrature: Quadrature) -> Result<Self> {
        if data.dim() != spec.dim() {
            return Err(Error::DimensionMismatch { expected: spec.dim(), got: data.dim() });
        }
        let analyzer = FourierAnalyzer::new(data.len(), data.dt(), quadrature)?;
        let theta = spec.evaluate(data)?;
        let states = (0..data.dim()).map(|i| analyzer.coeffs(data.component(i))).collect::<Result<Vec<_>>>()?;
        let terms = (0..spec.len())
            .into_par_iter()
            .map(|j| analyzer.coeffs(theta.values.column(j).as_slice()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { period: analyzer.period(), states, terms })
    }

    pub fn max_index(&self) -> usize {
        self.states[0].max_index()
    }

    /// `(B, a)` for one component: row `r` of `B` is `[b_ℓ^{θ_1} … b_ℓ^{θ_m}]`
    /// and `a_r = -(2πℓ/T) a_ℓ^{y_i}`, with `ℓ = indices[r]`.
    pub fn system(&self, component: usize, indices: &[usize]) -> Result<(DMatrix<f64>, DVector<f64>)> {
        let l_max = self.max_index();
        if let Some(&bad) = indices.iter().find(|&&l| l == 0 || l > l_max) {
            return Err(Error::InvalidArgument(format!("frequency index {bad} outside 1..={l_max}")));
        }
        let y = &self.states[component];
        let b = DMatrix::from_fn(indices.len(), self.terms.len(), |r, j| self.terms[j].b[indices[r]]);
        let a = DVector::from_iterator(
            indices.len(),
            indices.iter().map(|&l| -(2.0 * PI * l as f64 / self.period) * y.a[l]),
        );
        Ok((b, a))
    }
}

fn check_distinct(indices: &[usize]) -> Result<()> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if sorted.is_empty() || sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("frequency indices must be distinct and non-empty".into()));
    }
    Ok(())
}

/// Per-component frequency indices for `data` under `strategy`.
pub fn resolve_frequencies(
    data: &Trajectory,
    strategy: &FrequencyStrategy<'_>,
    quadrature: Quadrature,
) -> Result<Vec<Vec<usize>>> {
    let n = analysis_len(data.len(), quadrature);
    let l_max = max_fourier_index(n);
    let window = |traj: &Trajectory, i: usize| traj.component(i)[..n].to_vec();
    match *strategy {
        FrequencyStrategy::Sweep { l_max: want } => {
            if want == 0 || want > l_max {
                return Err(Error::InvalidArgument(format!("sweep length must lie in 1..={l_max}, got {want}")));
            }
            Ok(vec![(1..=want).collect(); data.dim()])
        }
        FrequencyStrategy::Fixed { indices } => {
            check_distinct(indices)?;
            Ok(vec![indices.to_vec(); data.dim()])
        }
        FrequencyStrategy::Sde { count, tapers } => {
            if tapers.n != n {
                return Err(Error::DimensionMismatch { expected: n, got: tapers.n });
            }
            (0..data.dim())
                .into_par_iter()
                .map(|i| top_bins(&multitaper_psd_with(&window(data, i), data.dt(), tapers)?, count))
                .collect()
        }
        FrequencyStrategy::Oracle { count, clean } => {
            if clean.len() != data.len() || clean.dim() != data.dim() {
                return Err(Error::DimensionMismatch { expected: data.len(), got: clean.len() });
            }
            (0..data.dim()).map(|i| top_bins(&periodogram(&window(clean, i), clean.dt())?, count)).collect()
        }
    }
}

/// Fourier weak SINDy with the default trapezoid quadrature over the
/// sampled interval.
pub fn wsindy_fourier(
    data: &Trajectory,
    spec: &DictionarySpec,
    strategy: &FrequencyStrategy<'_>,
    cfg: &SolverConfig,
) -> Result<LearnerResult> {
    wsindy_fourier_with(data, spec, strategy, cfg, Quadrature::default())
}

/// Fourier weak SINDy: for every component, regress `-(2πℓ/T) a_ℓ^{y_i}` on
/// the sine coefficients of the dictionary columns at the selected `ℓ`.
pub fn wsindy_fourier_with(
    data: &Trajectory,
    spec: &DictionarySpec,
    strategy: &FrequencyStrategy<'_>,
    cfg: &SolverConfig,
    quadrature: Quadrature,
) -> Result<LearnerResult> {
    cfg.validate()?;
    let weak = WeakFourierData::new(data, spec, quadrature)?;
    let selected = resolve_frequencies(data, strategy, quadrature)?;
    let fits = selected
        .par_iter()
        .enumerate()
        .map(|(i, idx)| {
            let (b, a) = weak.system(i, idx)?;
            st_ridge(&b, &a, cfg)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut values = DMatrix::zeros(spec.len(), spec.dim());
    for (i, f) in fits.iter().enumerate() {
        values.set_column(i, &f.coeffs);
    }
    let method = match *strategy {
        FrequencyStrategy::Sweep { l_max } => Method::WsindyFourierSweep { l_max },
        FrequencyStrategy::Sde { count, tapers } => Method::WsindyFourierSde { k: count, nw: tapers.nw },
        FrequencyStrategy::Oracle { count, .. } => Method::WsindyFourierOracle { k: count },
        FrequencyStrategy::Fixed { indices } => Method::WsindyFourierFixed { indices: indices.to_vec() },
    };
    Ok(LearnerResult {
        method,
        coeffs: CoefficientMatrix::from_values(spec, values)?,
        selected,
        iterations: fits.iter().map(|f| f.iterations).collect(),
        residual_norms: fits.iter().map(|f| f.residual_norm).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cosine_data(k: usize, l0: usize) -> Trajectory {
        let n = (k - 1) as f64;
        let states = DMatrix::from_fn(k, 1, |i, _| (2.0 * PI * l0 as f64 * i as f64 / n).cos());
        Trajectory::new(0.0, 1e-3, states).unwrap()
    }

    #[test]
    fn single_cosine_row() {
        // For y = cos(2πℓ₀t/T) the target at ℓ₀ is -(2πℓ₀/T) and the
        // constant column has no sine content.
        let k = 1025;
        let data = cosine_data(k, 4);
        let spec = DictionarySpec::new(1, 1).unwrap();
        let weak = WeakFourierData::new(&data, &spec, Quadrature::Endpoint).unwrap();
        let (b, a) = weak.system(0, &[4]).unwrap();
        let t = 1.024;
        assert!((a[0] + 2.0 * PI * 4.0 / t).abs() < 1e-9);
        assert!(b[(0, 0)].abs() < 1e-12);
        assert!(b[(0, 1)].abs() < 1e-9);
    }

    #[test]
    fn rejects_out_of_range_indices() {
        let data = cosine_data(65, 1);
        let spec = DictionarySpec::new(1, 2).unwrap();
        let cfg = SolverConfig::default();
        assert!(wsindy_fourier(&data, &spec, &FrequencyStrategy::Fixed { indices: &[0, 1] }, &cfg).is_err());
        assert!(wsindy_fourier(&data, &spec, &FrequencyStrategy::Fixed { indices: &[2, 2] }, &cfg).is_err());
        assert!(wsindy_fourier(&data, &spec, &FrequencyStrategy::Fixed { indices: &[32] }, &cfg).is_err());
        assert!(wsindy_fourier(&data, &spec, &FrequencyStrategy::Sweep { l_max: 31 }, &cfg).is_ok());
        assert!(wsindy_fourier(&data, &spec, &FrequencyStrategy::Sweep { l_max: 32 }, &cfg).is_err());
    }

    #[test]
    fn sde_taper_length_must_match_window() {
        let data = cosine_data(65, 3);
        let spec = DictionarySpec::new(1, 1).unwrap();
        let tapers = crate::spectral::slepian_tapers(65, 2.0).unwrap();
        let strat = FrequencyStrategy::Sde { count: 5, tapers: &tapers };
        assert!(wsindy_fourier(&data, &spec, &strat, &SolverConfig::default()).is_err());
        let tapers = crate::spectral::slepian_tapers(64, 2.0).unwrap();
        let strat = FrequencyStrategy::Sde { count: 5, tapers: &tapers };
        let res = wsindy_fourier(&data, &spec, &strat, &SolverConfig::default()).unwrap();
        assert_eq!(res.selected[0].len(), 5);
        assert!(res.selected[0].contains(&3));
    }
}
