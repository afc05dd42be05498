use std::fmt::Write as _;

use super::summary::{Quartiles, Summary, SummaryRow};
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Which summary column a panel shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMetric {
    E2,
    Tpr,
}

impl PlotMetric {
    pub fn name(self) -> &'static str {
        match self {
            PlotMetric::E2 => "e2",
            PlotMetric::Tpr => "tpr",
        }
    }

    fn pick(self, row: &SummaryRow) -> Option<Quartiles> {
        match self {
            PlotMetric::E2 => row.e2,
            PlotMetric::Tpr => row.tpr,
        }
    }

    fn log_y(self) -> bool {
        matches!(self, PlotMetric::E2)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn new(values: &[f64], log: bool) -> Self {
        let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite() && (!log || *v > 0.0)).collect();
        let (mut lo, mut hi) = finite.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
        if !lo.is_finite() {
            (lo, hi) = if log { (0.1, 10.0) } else { (0.0, 1.0) };
        }
        if log {
            lo = 10f64.powf(lo.log10().floor());
            hi = 10f64.powf(hi.log10().ceil());
            if lo == hi {
                lo /= 10.0;
                hi *= 10.0;
            }
        } else if lo == hi {
            lo -= 0.5;
            hi += 0.5;
        }
        Self { lo, hi, log }
    }

    /// Position in `[0, 1]`; values outside a log axis are clamped.
    fn frac(&self, v: f64) -> f64 {
        let f = if self.log {
            let v = v.clamp(self.lo, self.hi);
            (v.log10() - self.lo.log10()) / (self.hi.log10() - self.lo.log10())
        } else {
            (v - self.lo) / (self.hi - self.lo)
        };
        f.clamp(0.0, 1.0)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.log10().round() as i32, self.hi.log10().round() as i32);
            let step = ((b - a) as f64 / 8.0).ceil().max(1.0) as i32;
            (a..=b).step_by(step as usize).map(|e| 10f64.powi(e)).collect()
        } else {
            (0..=4).map(|i| self.lo + (self.hi - self.lo) * i as f64 / 4.0).collect()
        }
    }
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        format!("1e{}", v.log10().round() as i32)
    } else {
        format!("{v:.2}")
    }
}

/// One SVG panel: log-x noise level, per-method median line and quartile band.
pub fn plot_metric(summary: &Summary, metric: PlotMetric) -> Result<String> {
    let methods = summary.methods();
    if methods.is_empty() {
        return Err(Error::InvalidArgument("nothing to plot: summary has no methods".into()));
    }
    // A zero noise level has no place on a log axis; it is drawn one decade
    // below the smallest positive level.
    let positive: Vec<f64> = summary.rows.iter().map(|r| r.noise_ratio).filter(|v| *v > 0.0).collect();
    let floor = positive.iter().copied().fold(f64::INFINITY, f64::min);
    let floor = if floor.is_finite() { floor / 10.0 } else { 1e-6 };
    let xpos = |v: f64| if v > 0.0 { v } else { floor };

    let xs: Vec<f64> = summary.rows.iter().map(|r| xpos(r.noise_ratio)).collect();
    let ys: Vec<f64> = summary
        .rows
        .iter()
        .filter_map(|r| metric.pick(r))
        .flat_map(|q| [q.q25, q.median, q.q75])
        .collect();
    let xa = Axis::new(&xs, true);
    let ya = if metric == PlotMetric::Tpr { Axis { lo: 0.0, hi: 1.0, log: false } } else { Axis::new(&ys, metric.log_y()) };
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |v: f64| LEFT + xa.frac(xpos(v)) * pw;
    let py = |v: f64| TOP + (1.0 - ya.frac(v)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for t in xa.ticks() {
        let x = LEFT + xa.frac(t) * pw;
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 20.0,
            tick_label(t, true)
        );
    }
    for t in ya.ticks() {
        let y = TOP + (1.0 - ya.frac(t)) * ph;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            tick_label(t, ya.log)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">noise ratio</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        metric.name()
    );

    for (mi, method) in methods.iter().enumerate() {
        let color = COLORS[mi % COLORS.len()];
        let mut pts: Vec<(f64, Quartiles)> = summary
            .rows
            .iter()
            .filter(|r| &r.method == method)
            .filter_map(|r| metric.pick(r).map(|q| (r.noise_ratio, q)))
            .collect();
        pts.sort_by(|a, b| xpos(a.0).total_cmp(&xpos(b.0)));
        let _ = writeln!(s, r#"<g class="method" data-method="{}">"#, escape(method));
        if !pts.is_empty() {
            let mut band = String::new();
            for (x, q) in &pts {
                let _ = write!(band, "{:.2},{:.2} ", px(*x), py(q.q75));
            }
            for (x, q) in pts.iter().rev() {
                let _ = write!(band, "{:.2},{:.2} ", px(*x), py(q.q25));
            }
            let _ = writeln!(s, r#"<polygon points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#, band.trim_end());
        }
        let mut d = String::new();
        for (i, (x, q)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, px(*x), py(q.median));
        }
        if d.is_empty() {
            d = format!("M{LEFT:.2},{:.2}", TOP + ph);
        }
        let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="2"/>"#);
        for (x, q) in &pts {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, px(*x), py(q.median));
        }
        let ly = TOP + 10.0 + 18.0 * mi as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 20.0,
            lx + 25.0,
            ly + 4.0,
            escape(method)
        );
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// E₂ and TPR panels, named by metric.
pub fn plot(summary: &Summary) -> Result<Vec<(&'static str, String)>> {
    [PlotMetric::E2, PlotMetric::Tpr].into_iter().map(|m| Ok((m.name(), plot_metric(summary, m)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: f64) -> Option<Quartiles> {
        Some(Quartiles { q25: v * 0.5, median: v, q75: v * 2.0 })
    }

    fn row(method: &str, level: f64, e2: f64) -> SummaryRow {
        SummaryRow {
            system: "lorenz".into(),
            method: method.into(),
            noise_ratio: level,
            count: 1,
            failures: 0,
            stable: 1,
            e2: q(e2),
            tpr: q(0.4),
            traj_err: None,
        }
    }

    #[test]
    fn empty_summary_is_an_error() {
        assert!(plot(&Summary::default()).is_err());
    }

    #[test]
    fn one_path_per_method() {
        let s = Summary { rows: vec![row("a", 0.0, 1e-3), row("a", 0.5, 0.1), row("b<&>", 0.5, 2.0)] };
        for (_, svg) in plot(&s).unwrap() {
            assert_eq!(svg.matches("<path").count(), 2);
            assert!(svg.contains("b&lt;&amp;&gt;"));
        }
    }

    #[test]
    fn deterministic() {
        let s = Summary { rows: vec![row("a", 0.25, 0.3)] };
        assert_eq!(plot(&s).unwrap(), plot(&s).unwrap());
    }
}
