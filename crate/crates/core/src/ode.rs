//! Benchmark dynamical systems, fixed-step integration and measurement noise.

use std::io::{Read, Write};

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dictionary::{CoefficientMatrix, DictionarySpec};
use crate::error::{Error, Result};
use crate::format::fmt17;

/// RK4 substeps taken between consecutive output samples.
pub const RK4_SUBSTEPS: usize = 10;

/// Any state component exceeding this magnitude aborts integration.
pub const DIVERGENCE_LIMIT: f64 = 1e8;

/// The four built-in benchmark systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Benchmark {
    Lorenz,
    LotkaVolterra,
    HyperLorenz,
    HyperJha,
}

impl Benchmark {
    pub const ALL: [Benchmark; 4] =
        [Benchmark::Lorenz, Benchmark::LotkaVolterra, Benchmark::HyperLorenz, Benchmark::HyperJha];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Lorenz => "lorenz",
            Benchmark::LotkaVolterra => "lotka_volterra",
            Benchmark::HyperLorenz => "hyper_lorenz",
            Benchmark::HyperJha => "hyper_jha",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| Error::UnknownSystem(name.to_string()))
    }

    pub fn dim(self) -> usize {
        match self {
            Benchmark::Lorenz => 3,
            Benchmark::LotkaVolterra => 2,
            Benchmark::HyperLorenz | Benchmark::HyperJha => 4,
        }
    }

    fn default_params(self) -> Vec<(&'static str, f64)> {
        match self {
            Benchmark::Lorenz => vec![("sigma", 10.0), ("rho", 28.0), ("beta", 8.0 / 3.0)],
            Benchmark::LotkaVolterra => vec![("alpha", 3.0), ("beta", 1.0), ("gamma", 6.0)],
            Benchmark::HyperLorenz => vec![("a", 10.0), ("b", 2.667), ("c", 28.0), ("d", 1.1)],
            Benchmark::HyperJha => vec![("a", 10.0), ("b", 28.0), ("c", 8.0 / 3.0), ("d", 1.3)],
        }
    }

    pub fn default_x0(self) -> Vec<f64> {
        match self {
            Benchmark::Lorenz => vec![20.0, 12.0, -30.0],
            Benchmark::LotkaVolterra => vec![1.0, 1.0],
            Benchmark::HyperLorenz => vec![5.0, 8.0, 12.0, 21.0],
            Benchmark::HyperJha => vec![0.1; 4],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum VectorField {
    Builtin(Benchmark),
    Polynomial(CoefficientMatrix),
}

/// An autonomous ODE `ẋ = f(x)` with polynomial right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSystem {
    name: String,
    field: VectorField,
    params: Vec<(String, f64)>,
    x0: Vec<f64>,
}

/// Builds a benchmark system with its default parameters, applying any
/// overrides by name.
pub fn make_system(name: &str, overrides: &[(String, f64)]) -> Result<OdeSystem> {
    let bench = Benchmark::from_name(name)?;
    let mut params: Vec<(String, f64)> =
        bench.default_params().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    for (key, value) in overrides {
        if !value.is_finite() {
            return Err(Error::NonFiniteParameter { name: key.clone(), value: *value });
        }
        let slot = params.iter_mut().find(|(k, _)| k == key).ok_or_else(|| Error::UnknownParameter {
            system: name.to_string(),
            param: key.clone(),
        })?;
        slot.1 = *value;
    }
    Ok(OdeSystem { name: bench.name().to_string(), field: VectorField::Builtin(bench), params, x0: bench.default_x0() })
}

impl OdeSystem {
    /// A user-supplied polynomial system `ẋ = Θ(x) W`.
    pub fn polynomial(name: impl Into<String>, coeffs: CoefficientMatrix, x0: Vec<f64>) -> Result<Self> {
        if x0.len() != coeffs.spec.dim() {
            return Err(Error::DimensionMismatch { expected: coeffs.spec.dim(), got: x0.len() });
        }
        if coeffs.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("polynomial coefficients"));
        }
        Ok(Self { name: name.into(), field: VectorField::Polynomial(coeffs), params: Vec::new(), x0 })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        match &self.field {
            VectorField::Builtin(b) => b.dim(),
            VectorField::Polynomial(w) => w.spec.dim(),
        }
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    /// Benchmark initial condition (or the one given at construction).
    pub fn default_x0(&self) -> &[f64] {
        &self.x0
    }

    /// Writes `f(x)` into `out`.
    pub fn rhs(&self, x: &[f64], out: &mut [f64]) {
        match &self.field {
            VectorField::Builtin(b) => {
                let p = |i: usize| self.params[i].1;
                match b {
                    Benchmark::Lorenz => {
                        let (sigma, rho, beta) = (p(0), p(1), p(2));
                        out[0] = sigma * (x[1] - x[0]);
                        out[1] = x[0] * (rho - x[2]) - x[1];
                        out[2] = x[0] * x[1] - beta * x[2];
                    }
                    Benchmark::LotkaVolterra => {
                        let (alpha, beta, gamma) = (p(0), p(1), p(2));
                        out[0] = alpha * x[0] - beta * x[0] * x[1];
                        out[1] = -gamma * x[1] + beta * x[0] * x[1];
                    }
                    Benchmark::HyperLorenz => {
                        let (a, b, c, d) = (p(0), p(1), p(2), p(3));
                        out[0] = a * (x[1] - x[0]) + x[3];
                        out[1] = -x[0] * x[2] + c * x[0] - x[1];
                        out[2] = -b * x[2] + x[0] * x[1];
                        out[3] = d * x[3] - x[0] * x[2];
                    }
                    Benchmark::HyperJha => {
                        let (a, b, c, d) = (p(0), p(1), p(2), p(3));
                        out[0] = a * (x[1] - x[0]) + x[3];
                        out[1] = -x[0] * x[2] + b * x[0] - x[1];
                        out[2] = x[0] * x[1] - c * x[2];
                        out[3] = -x[0] * x[2] + d * x[3];
                    }
                }
            }
            VectorField::Polynomial(w) => {
                let mut theta = vec![0.0; w.spec.len()];
                w.apply(x, &mut theta, out);
            }
        }
    }

    /// Nonzero terms as `(equation, exponents, coefficient)`.
    fn sparse_terms(&self) -> Vec<(usize, Vec<u32>, f64)> {
        let p = |i: usize| self.params[i].1;
        match &self.field {
            VectorField::Builtin(Benchmark::Lorenz) => {
                let (sigma, rho, beta) = (p(0), p(1), p(2));
                vec![
                    (0, vec![1, 0, 0], -sigma),
                    (0, vec![0, 1, 0], sigma),
                    (1, vec![1, 0, 0], rho),
                    (1, vec![0, 1, 0], -1.0),
                    (1, vec![1, 0, 1], -1.0),
                    (2, vec![0, 0, 1], -beta),
                    (2, vec![1, 1, 0], 1.0),
                ]
            }
            VectorField::Builtin(Benchmark::LotkaVolterra) => {
                let (alpha, beta, gamma) = (p(0), p(1), p(2));
                vec![
                    (0, vec![1, 0], alpha),
                    (0, vec![1, 1], -beta),
                    (1, vec![0, 1], -gamma),
                    (1, vec![1, 1], beta),
                ]
            }
            VectorField::Builtin(Benchmark::HyperLorenz) => {
                let (a, b, c, d) = (p(0), p(1), p(2), p(3));
                vec![
                    (0, vec![1, 0, 0, 0], -a),
                    (0, vec![0, 1, 0, 0], a),
                    (0, vec![0, 0, 0, 1], 1.0),
                    (1, vec![1, 0, 1, 0], -1.0),
                    (1, vec![1, 0, 0, 0], c),
                    (1, vec![0, 1, 0, 0], -1.0),
                    (2, vec![0, 0, 1, 0], -b),
                    (2, vec![1, 1, 0, 0], 1.0),
                    (3, vec![0, 0, 0, 1], d),
                    (3, vec![1, 0, 1, 0], -1.0),
                ]
            }
            VectorField::Builtin(Benchmark::HyperJha) => {
                let (a, b, c, d) = (p(0), p(1), p(2), p(3));
                vec![
                    (0, vec![1, 0, 0, 0], -a),
                    (0, vec![0, 1, 0, 0], a),
                    (0, vec![0, 0, 0, 1], 1.0),
                    (1, vec![1, 0, 1, 0], -1.0),
                    (1, vec![1, 0, 0, 0], b),
                    (1, vec![0, 1, 0, 0], -1.0),
                    (2, vec![1, 1, 0, 0], 1.0),
                    (2, vec![0, 0, 1, 0], -c),
                    (3, vec![1, 0, 1, 0], -1.0),
                    (3, vec![0, 0, 0, 1], d),
                ]
            }
            VectorField::Polynomial(w) => {
                let mut out = Vec::new();
                for (r, t) in w.spec.terms().iter().enumerate() {
                    for c in 0..w.spec.dim() {
                        let v = w.values[(r, c)];
                        if v != 0.0 {
                            out.push((c, t.clone(), v));
                        }
                    }
                }
                out
            }
        }
    }

    /// True coefficient matrix of this system in `spec`.
    ///
    /// Fails when `spec` lacks a term the system uses (for the benchmarks,
    /// any polynomial dictionary of degree >= 2 works).
    pub fn true_coeffs(&self, spec: &DictionarySpec) -> Result<CoefficientMatrix> {
        if spec.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: spec.dim() });
        }
        let mut w = CoefficientMatrix::zeros(spec);
        for (eq, exps, value) in self.sparse_terms() {
            w.set(&exps, eq, value)?;
        }
        Ok(w)
    }

    /// Integrates from `x0` and samples `round(duration · fs)` snapshots at
    /// `dt = 1/fs`, starting at `t = 0`.
    pub fn simulate(&self, x0: &[f64], duration: f64, fs: f64) -> Result<Trajectory> {
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::InvalidArgument(format!("duration must be positive, got {duration}")));
        }
        if !(fs > 0.0 && fs.is_finite()) {
            return Err(Error::InvalidArgument(format!("sampling rate must be positive, got {fs}")));
        }
        if x0.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x0.len() });
        }
        if x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("initial condition"));
        }
        let k = (duration * fs).round() as usize;
        if k < 2 {
            return Err(Error::TooShort { min: 2, got: k });
        }
        let dt = 1.0 / fs;
        let states = integrate_rk4(|x, out| self.rhs(x, out), x0, k, dt, RK4_SUBSTEPS)?;
        Trajectory::new(0.0, dt, states)
    }
}

/// Classical RK4 with `substeps` equal steps per output interval. Returns a
/// `k × n` matrix whose first row is `x0`.
pub fn integrate_rk4<F>(mut f: F, x0: &[f64], k: usize, dt: f64, substeps: usize) -> Result<DMatrix<f64>>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = x0.len();
    let h = dt / substeps as f64;
    let mut states = DMatrix::zeros(k, n);
    let mut x = x0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for (c, v) in x.iter().enumerate() {
        states[(0, c)] = *v;
    }
    for row in 1..k {
        for sub in 0..substeps {
            f(&x, &mut k1);
            for i in 0..n {
                tmp[i] = x[i] + 0.5 * h * k1[i];
            }
            f(&tmp, &mut k2);
            for i in 0..n {
                tmp[i] = x[i] + 0.5 * h * k2[i];
            }
            f(&tmp, &mut k3);
            for i in 0..n {
                tmp[i] = x[i] + h * k3[i];
            }
            f(&tmp, &mut k4);
            for i in 0..n {
                x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            if x.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_LIMIT) {
                let time = (row - 1) as f64 * dt + (sub + 1) as f64 * h;
                return Err(Error::Diverged { time });
            }
        }
        for (c, v) in x.iter().enumerate() {
            states[(row, c)] = *v;
        }
    }
    Ok(states)
}

/// Uniformly sampled multivariate time series, one row per snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    t0: f64,
    dt: f64,
    states: DMatrix<f64>,
}

impl Trajectory {
    pub fn new(t0: f64, dt: f64, states: DMatrix<f64>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) || !t0.is_finite() {
            return Err(Error::InvalidArgument(format!("invalid time grid t0={t0}, dt={dt}")));
        }
        if states.nrows() < 2 {
            return Err(Error::TooShort { min: 2, got: states.nrows() });
        }
        if states.ncols() == 0 {
            return Err(Error::InvalidArgument("trajectory has no state components".into()));
        }
        if states.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("trajectory states"));
        }
        Ok(Self { t0, dt, states })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of snapshots `k`.
    pub fn len(&self) -> usize {
        self.states.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.states.nrows() == 0
    }

    /// Number of state components `n`.
    pub fn dim(&self) -> usize {
        self.states.ncols()
    }

    /// `(k - 1) · dt`.
    pub fn duration(&self) -> f64 {
        (self.len() - 1) as f64 * self.dt
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn states(&self) -> &DMatrix<f64> {
        &self.states
    }

    /// Samples of one state component.
    pub fn component(&self, i: usize) -> &[f64] {
        let k = self.states.nrows();
        &self.states.as_slice()[i * k..(i + 1) * k]
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
        let mut header = vec!["t".to_string()];
        header.extend((1..=self.dim()).map(|i| format!("x{i}")));
        w.write_record(&header)?;
        for i in 0..self.len() {
            let mut rec = vec![fmt17(self.time(i))];
            rec.extend(self.states.row(i).iter().map(|v| fmt17(*v)));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Parses the `t,x1,...,xn` format written by [`write_csv`](Self::write_csv).
    /// The sampling interval is taken from the first two time stamps and must
    /// be uniform across the file.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let n = r.headers()?.len().checked_sub(1).filter(|n| *n > 0).ok_or_else(|| {
            Error::InvalidArgument("trajectory CSV needs a time column and at least one state".into())
        })?;
        let mut times = Vec::new();
        let mut values = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != n + 1 {
                return Err(Error::DimensionMismatch { expected: n + 1, got: rec.len() });
            }
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|e| Error::InvalidArgument(format!("bad number `{s}`: {e}")))
            };
            times.push(parse(&rec[0])?);
            for field in rec.iter().skip(1) {
                values.push(parse(field)?);
            }
        }
        if times.len() < 2 {
            return Err(Error::TooShort { min: 2, got: times.len() });
        }
        let dt = times[1] - times[0];
        let tol = 1e-9 * dt.abs().max(1e-300) * times.len() as f64;
        for (i, t) in times.iter().enumerate() {
            if (t - (times[0] + i as f64 * dt)).abs() > tol.max(1e-12) {
                return Err(Error::InvalidArgument(format!("non-uniform sampling at row {}", i + 1)));
            }
        }
        let states = DMatrix::from_row_slice(times.len(), n, &values);
        Self::new(times[0], dt, states)
    }
}

/// Measurement-noise level and PRNG seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub noise_ratio: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(noise_ratio: f64, seed: u64) -> Result<Self> {
        if !(noise_ratio >= 0.0 && noise_ratio.is_finite()) {
            return Err(Error::InvalidArgument(format!("noise ratio must be >= 0, got {noise_ratio}")));
        }
        Ok(Self { noise_ratio, seed })
    }
}

/// Noise standard deviation `σ_NR · ‖X‖_F / sqrt(k n)` for a clean trajectory.
pub fn noise_sigma(traj: &Trajectory, noise_ratio: f64) -> f64 {
    let count = (traj.len() * traj.dim()) as f64;
    noise_ratio * traj.states().norm() / count.sqrt()
}

/// Adds i.i.d. `N(0, σ²)` noise to every entry, with `σ` from [`noise_sigma`].
///
/// Draws come from ChaCha8 seeded with `spec.seed`, mapped to normals with
/// the ziggurat method, and are consumed snapshot by snapshot (row-major).
pub fn add_noise(traj: &Trajectory, spec: &NoiseSpec) -> Trajectory {
    let sigma = noise_sigma(traj, spec.noise_ratio);
    if sigma == 0.0 {
        return traj.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut states = traj.states.clone();
    for i in 0..states.nrows() {
        for j in 0..states.ncols() {
            let z: f64 = StandardNormal.sample(&mut rng);
            states[(i, j)] += sigma * z;
        }
    }
    Trajectory { t0: traj.t0, dt: traj.dt, states }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorenz_defaults() {
        let sys = make_system("lorenz", &[]).unwrap();
        assert_eq!(sys.param("sigma"), Some(10.0));
        assert_eq!(sys.param("rho"), Some(28.0));
        assert_eq!(sys.param("beta"), Some(8.0 / 3.0));
        assert_eq!(sys.default_x0(), [20.0, 12.0, -30.0]);
    }

    #[test]
    fn lotka_volterra_defaults() {
        let sys = make_system("lotka_volterra", &[]).unwrap();
        assert_eq!(sys.default_x0(), [1.0, 1.0]);
        let mut out = [0.0; 2];
        sys.rhs(&[2.0, 5.0], &mut out);
        assert_eq!(out, [3.0 * 2.0 - 10.0, -30.0 + 10.0]);
    }

    #[test]
    fn hyper_jha_defaults() {
        let sys = make_system("hyper_jha", &[]).unwrap();
        assert_eq!(sys.param("a"), Some(10.0));
        assert_eq!(sys.param("b"), Some(28.0));
        assert_eq!(sys.param("c"), Some(8.0 / 3.0));
        assert_eq!(sys.param("d"), Some(1.3));
        assert_eq!(sys.default_x0(), [0.1; 4]);
    }

    #[test]
    fn hyper_lorenz_defaults() {
        let sys = make_system("hyper_lorenz", &[]).unwrap();
        assert_eq!(sys.param("b"), Some(2.667));
        assert_eq!(sys.param("d"), Some(1.1));
        assert_eq!(sys.default_x0(), [5.0, 8.0, 12.0, 21.0]);
    }

    #[test]
    fn overrides_and_errors() {
        let sys = make_system("lorenz", &[("rho".into(), 14.0)]).unwrap();
        assert_eq!(sys.param("rho"), Some(14.0));
        assert!(matches!(make_system("duffing", &[]), Err(Error::UnknownSystem(_))));
        assert!(matches!(
            make_system("lorenz", &[("rho".into(), f64::NAN)]),
            Err(Error::NonFiniteParameter { .. })
        ));
        assert!(matches!(make_system("lorenz", &[("q".into(), 1.0)]), Err(Error::UnknownParameter { .. })));
    }

    #[test]
    fn true_coeffs_needs_degree_two() {
        let sys = make_system("lorenz", &[]).unwrap();
        assert!(sys.true_coeffs(&DictionarySpec::new(3, 1).unwrap()).is_err());
        assert_eq!(sys.true_coeffs(&DictionarySpec::new(3, 2).unwrap()).unwrap().nnz(), 7);
        assert_eq!(sys.true_coeffs(&DictionarySpec::new(3, 5).unwrap()).unwrap().nnz(), 7);
    }

    #[test]
    fn zero_field_is_constant() {
        let spec = DictionarySpec::new(2, 2).unwrap();
        let sys = OdeSystem::polynomial("zero", CoefficientMatrix::zeros(&spec), vec![1.5, -2.0]).unwrap();
        let traj = sys.simulate(&[1.5, -2.0], 0.5, 100.0).unwrap();
        assert_eq!(traj.len(), 50);
        assert!(traj.states().row_iter().all(|r| r[0] == 1.5 && r[1] == -2.0));
    }

    #[test]
    fn exponential_decay() {
        let spec = DictionarySpec::new(1, 1).unwrap();
        let mut w = CoefficientMatrix::zeros(&spec);
        w.set(&[1], 0, -1.0).unwrap();
        let sys = OdeSystem::polynomial("decay", w, vec![1.0]).unwrap();
        let traj = sys.simulate(&[1.0], 1.0, 1000.0).unwrap();
        assert_eq!(traj.len(), 1000);
        // last sample sits at (k - 1) dt
        let t_end = traj.time(traj.len() - 1);
        assert!((traj.states()[(999, 0)] - (-t_end).exp()).abs() < 1e-8);
    }

    #[test]
    fn divergence_reports_time() {
        let spec = DictionarySpec::new(1, 2).unwrap();
        let mut w = CoefficientMatrix::zeros(&spec);
        w.set(&[2], 0, 1.0).unwrap();
        // x' = x^2 from x0 = 1 blows up at t = 1
        let sys = OdeSystem::polynomial("blowup", w, vec![1.0]).unwrap();
        match sys.simulate(&[1.0], 2.0, 100.0) {
            Err(Error::Diverged { time }) => assert!((time - 1.0).abs() < 0.02, "time {time}"),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn simulate_rejects_bad_inputs() {
        let sys = make_system("lorenz", &[]).unwrap();
        assert!(sys.simulate(&[1.0, 2.0], 1.0, 10.0).is_err());
        assert!(sys.simulate(&[1.0, 2.0, f64::NAN], 1.0, 10.0).is_err());
        assert!(sys.simulate(&[1.0, 2.0, 3.0], 0.0, 10.0).is_err());
        assert!(sys.simulate(&[1.0, 2.0, 3.0], 1.0, -1.0).is_err());
    }

    #[test]
    fn sigma_formula() {
        // ‖X‖_F = 100 with k = 100, n = 4
        let states = DMatrix::from_element(100, 4, 100.0 / 20.0);
        let traj = Trajectory::new(0.0, 0.1, states).unwrap();
        assert!((traj.states().norm() - 100.0).abs() < 1e-12);
        assert!((noise_sigma(&traj, 0.1) - 0.5).abs() < 1e-12);
        assert_eq!(noise_sigma(&traj, 0.0), 0.0);
    }

    #[test]
    fn zero_noise_is_identity_and_seed_is_deterministic() {
        let sys = make_system("lotka_volterra", &[]).unwrap();
        let traj = sys.simulate(sys.default_x0(), 1.0, 100.0).unwrap();
        assert_eq!(add_noise(&traj, &NoiseSpec::new(0.0, 3).unwrap()), traj);
        let spec = NoiseSpec::new(0.3, 42).unwrap();
        let a = add_noise(&traj, &spec);
        let b = add_noise(&traj, &spec);
        assert_eq!(a.states().as_slice(), b.states().as_slice());
        let c = add_noise(&traj, &NoiseSpec::new(0.3, 43).unwrap());
        assert_ne!(a.states().as_slice(), c.states().as_slice());
    }

    #[test]
    fn negative_noise_ratio_rejected() {
        assert!(NoiseSpec::new(-0.1, 0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let sys = make_system("lorenz", &[]).unwrap();
        let traj = sys.simulate(sys.default_x0(), 0.05, 1000.0).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,x1,x2,x3\n"));
        let back = Trajectory::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.states(), traj.states());
        assert!((back.dt() - traj.dt()).abs() < 1e-15);
    }
}
