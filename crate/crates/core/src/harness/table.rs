use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::fmt17;

pub const HEADER: [&str; 11] = [
    "system",
    "method",
    "noise_ratio",
    "instance",
    "e2",
    "tpr",
    "traj_err",
    "stable",
    "wall_time_ms",
    "selected_frequency_count",
    "status",
];

/// One (method, noise level, instance) cell of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub system: String,
    pub method: String,
    pub noise_ratio: f64,
    pub instance: usize,
    pub e2: f64,
    pub tpr: f64,
    pub traj_err: f64,
    pub stable: bool,
    pub wall_time_ms: f64,
    pub selected_frequency_count: usize,
    /// `ok`, or the failure reason.
    pub status: String,
}

impl ResultRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    pub(crate) fn failed(system: &str, method: String, noise_ratio: f64, instance: usize, reason: &str) -> Self {
        Self {
            system: system.to_string(),
            method,
            noise_ratio,
            instance,
            e2: f64::NAN,
            tpr: f64::NAN,
            traj_err: f64::NAN,
            stable: false,
            wall_time_ms: 0.0,
            selected_frequency_count: 0,
            status: format!("error: {reason}"),
        }
    }
}

/// Rows in a fixed order: noise level, then instance, then method.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
        w.write_record(HEADER)?;
        for r in &self.rows {
            w.write_record([
                r.system.clone(),
                r.method.clone(),
                fmt17(r.noise_ratio),
                r.instance.to_string(),
                fmt17(r.e2),
                fmt17(r.tpr),
                fmt17(r.traj_err),
                r.stable.to_string(),
                fmt17(r.wall_time_ms),
                r.selected_frequency_count.to_string(),
                r.status.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if header != HEADER {
            return Err(Error::Config(format!("unexpected result header {header:?}")));
        }
        let num = |s: &str, what: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Config(format!("bad {what} value `{s}`")))
        };
        let int = |s: &str, what: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Config(format!("bad {what} value `{s}`")))
        };
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            rows.push(ResultRow {
                system: rec[0].to_string(),
                method: rec[1].to_string(),
                noise_ratio: num(&rec[2], "noise_ratio")?,
                instance: int(&rec[3], "instance")?,
                e2: num(&rec[4], "e2")?,
                tpr: num(&rec[5], "tpr")?,
                traj_err: num(&rec[6], "traj_err")?,
                stable: rec[7].parse().map_err(|_| Error::Config(format!("bad stable value `{}`", &rec[7])))?,
                wall_time_ms: num(&rec[8], "wall_time_ms")?,
                selected_frequency_count: int(&rec[9], "selected_frequency_count")?,
                status: rec[10].to_string(),
            });
        }
        Ok(Self { rows })
    }
}
