use serde::{Deserialize, Serialize};

use super::fourier::max_fourier_index;
use super::multitaper::PsdEstimate;
use crate::error::{Error, Result};

/// How a set of test-function frequencies was chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SelectionMethod {
    Sweep { l_max: usize },
    Sde { k: usize, nw: f64 },
    Oracle { k: usize },
    Fixed,
}

/// Distinct Fourier indices `ℓ >= 1`, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencySelection {
    pub indices: Vec<usize>,
    pub method: SelectionMethod,
}

impl FrequencySelection {
    /// Checks the indices against a signal whose FFT has length `fft_len`.
    pub fn validate(&self, fft_len: usize) -> Result<()> {
        let l_max = max_fourier_index(fft_len);
        if self.indices.is_empty() {
            return Err(Error::InvalidArgument("empty frequency selection".into()));
        }
        for w in self.indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidArgument("frequency indices must be strictly increasing".into()));
            }
        }
        if self.indices[0] == 0 || *self.indices.last().unwrap() > l_max {
            return Err(Error::InvalidArgument(format!(
                "frequency indices must lie in 1..={l_max} for {fft_len} samples"
            )));
        }
        Ok(())
    }
}

/// The `count` highest-power bins among `ℓ = 1..=L` (DC and Nyquist
/// excluded), returned ascending. Equal powers prefer the smaller index.
pub fn select_frequencies(psd: &PsdEstimate, count: usize) -> Result<FrequencySelection> {
    Ok(FrequencySelection { indices: top_bins(psd, count)?, method: SelectionMethod::Fixed })
}

pub(crate) fn top_bins(psd: &PsdEstimate, count: usize) -> Result<Vec<usize>> {
    let l_max = max_fourier_index(psd.n_samples).min(psd.len().saturating_sub(1));
    if count == 0 || count > l_max {
        return Err(Error::InvalidArgument(format!("frequency count must lie in 1..={l_max}, got {count}")));
    }
    let mut order: Vec<usize> = (1..=l_max).collect();
    order.sort_by(|&a, &b| psd.power[b].total_cmp(&psd.power[a]).then(a.cmp(&b)));
    order.truncate(count);
    order.sort_unstable();
    Ok(order)
}

/// `[1, 2, ..., l_max]`.
pub fn sweep_selection(l_max: usize) -> Result<FrequencySelection> {
    if l_max == 0 {
        return Err(Error::InvalidArgument("sweep needs at least one frequency".into()));
    }
    Ok(FrequencySelection { indices: (1..=l_max).collect(), method: SelectionMethod::Sweep { l_max } })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psd(power: Vec<f64>) -> PsdEstimate {
        let n = 2 * (power.len() - 1);
        PsdEstimate { freqs: (0..power.len()).map(|l| l as f64).collect(), power, n_samples: n }
    }

    #[test]
    fn dominant_bin() {
        let mut p = vec![1.0; 33];
        p[5] = 100.0;
        assert_eq!(select_frequencies(&psd(p), 1).unwrap().indices, [5]);
    }

    #[test]
    fn dc_is_never_selected() {
        let mut p = vec![1.0; 33];
        p[0] = 1e9;
        p[9] = 2.0;
        assert_eq!(select_frequencies(&psd(p), 1).unwrap().indices, [9]);
    }

    #[test]
    fn all_bins_sorted() {
        let p: Vec<f64> = (0..33).map(|i| ((i * 7) % 5) as f64).collect();
        let sel = select_frequencies(&psd(p), 31).unwrap();
        assert_eq!(sel.indices, (1..=31).collect::<Vec<_>>());
    }

    #[test]
    fn ties_prefer_smaller_index() {
        let p = vec![0.0, 1.0, 3.0, 1.0, 3.0, 3.0, 0.0, 0.0, 0.0];
        assert_eq!(select_frequencies(&psd(p.clone()), 2).unwrap().indices, [2, 4]);
        assert_eq!(select_frequencies(&psd(p), 4).unwrap().indices, [1, 2, 4, 5]);
    }

    #[test]
    fn count_out_of_range() {
        assert!(select_frequencies(&psd(vec![1.0; 33]), 0).is_err());
        assert!(select_frequencies(&psd(vec![1.0; 33]), 32).is_err());
    }

    #[test]
    fn sweep() {
        assert_eq!(sweep_selection(1).unwrap().indices, [1]);
        assert_eq!(sweep_selection(3).unwrap().indices, [1, 2, 3]);
        assert!(sweep_selection(0).is_err());
        // 500 bins at 1000 Hz over 10 s reach 50 Hz
        let sel = sweep_selection(500).unwrap();
        assert!((*sel.indices.last().unwrap() as f64 / 10.0 - 50.0).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        let sel = FrequencySelection { indices: vec![1, 3, 7], method: SelectionMethod::Fixed };
        assert!(sel.validate(16).is_ok());
        assert!(sel.validate(14).is_err());
        let dup = FrequencySelection { indices: vec![2, 2], method: SelectionMethod::Fixed };
        assert!(dup.validate(64).is_err());
        let dc = FrequencySelection { indices: vec![0, 2], method: SelectionMethod::Fixed };
        assert!(dc.validate(64).is_err());
    }
}
