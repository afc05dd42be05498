use std::io::Write;

use super::table::ResultTable;
use crate::error::{Error, Result};
use crate::format::fmt17;

/// Percentile `p ∈ [0, 1]` with linear interpolation between order
/// statistics. `values` must be non-empty.
pub fn percentile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = p.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi || frac == 0.0 {
        v[lo]
    } else {
        v[lo] + frac * (v[hi] - v[lo])
    }
}

/// Median and quartiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quartiles {
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
}

impl Quartiles {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        Some(Self { q25: percentile(values, 0.25), median: percentile(values, 0.5), q75: percentile(values, 0.75) })
    }
}

/// Statistics of one (system, method, noise level) group.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub system: String,
    pub method: String,
    pub noise_ratio: f64,
    pub count: usize,
    pub failures: usize,
    /// Successful runs whose learned model simulated without diverging.
    pub stable: usize,
    pub e2: Option<Quartiles>,
    pub tpr: Option<Quartiles>,
    pub traj_err: Option<Quartiles>,
}

/// Groups in order of first appearance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
}

impl Summary {
    /// Methods in order of first appearance.
    pub fn methods(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.method) {
                out.push(r.method.clone());
            }
        }
        out
    }

    pub fn get(&self, method: &str, noise_ratio: f64) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.method == method && r.noise_ratio == noise_ratio)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
        w.write_record([
            "system", "method", "noise_ratio", "count", "failures", "stable", "e2_q25", "e2_median", "e2_q75",
            "tpr_q25", "tpr_median", "tpr_q75", "traj_err_q25", "traj_err_median", "traj_err_q75",
        ])?;
        let q = |x: Option<Quartiles>| -> [String; 3] {
            match x {
                Some(q) => [fmt17(q.q25), fmt17(q.median), fmt17(q.q75)],
                None => ["NaN".into(), "NaN".into(), "NaN".into()],
            }
        };
        for r in &self.rows {
            let mut rec = vec![
                r.system.clone(),
                r.method.clone(),
                fmt17(r.noise_ratio),
                r.count.to_string(),
                r.failures.to_string(),
                r.stable.to_string(),
            ];
            rec.extend(q(r.e2));
            rec.extend(q(r.tpr));
            rec.extend(q(r.traj_err));
            w.write_record(rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Median and quartiles of E₂, TPR and trajectory error per
/// (system, method, noise level); failed rows only count as failures.
pub fn summarize(table: &ResultTable) -> Result<Summary> {
    if table.is_empty() {
        return Err(Error::InvalidArgument("cannot summarize an empty result table".into()));
    }
    let mut keys: Vec<(String, String, u64)> = Vec::new();
    for r in &table.rows {
        let key = (r.system.clone(), r.method.clone(), r.noise_ratio.to_bits());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    let rows = keys
        .into_iter()
        .map(|(system, method, bits)| {
            let group: Vec<_> = table
                .rows
                .iter()
                .filter(|r| r.system == system && r.method == method && r.noise_ratio.to_bits() == bits)
                .collect();
            let ok: Vec<_> = group.iter().filter(|r| r.is_ok()).collect();
            let collect = |f: fn(&super::table::ResultRow) -> f64| ok.iter().map(|r| f(r)).collect::<Vec<f64>>();
            let traj: Vec<f64> = ok.iter().map(|r| r.traj_err).filter(|v| !v.is_nan()).collect();
            SummaryRow {
                system,
                method,
                noise_ratio: f64::from_bits(bits),
                count: group.len(),
                failures: group.len() - ok.len(),
                stable: ok.iter().filter(|r| r.stable).count(),
                e2: Quartiles::of(&collect(|r| r.e2)),
                tpr: Quartiles::of(&collect(|r| r.tpr)),
                traj_err: Quartiles::of(&traj),
            }
        })
        .collect();
    Ok(Summary { rows })
}
