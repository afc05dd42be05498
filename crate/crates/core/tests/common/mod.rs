#![allow(dead_code)]

use std::sync::OnceLock;

use fwsindy::ode::make_system;
use fwsindy::{DictionarySpec, Trajectory};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Clean Lorenz trajectory, 10 s at 1000 Hz from the default initial state.
pub fn lorenz_clean() -> &'static Trajectory {
    static CLEAN: OnceLock<Trajectory> = OnceLock::new();
    CLEAN.get_or_init(|| make_system("lorenz", &[]).unwrap().simulate(&[20.0, 12.0, -30.0], 10.0, 1000.0).unwrap())
}

pub fn lorenz_spec() -> DictionarySpec {
    DictionarySpec::new(3, 2).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(lo..hi))
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Gaussian `rows × cols` design with a planted sparse coefficient vector of
/// magnitudes in `[1, 3]` and random signs.
pub fn planted_instance(seed: u64, rows: usize, cols: usize, sparsity: usize) -> (DMatrix<f64>, DVector<f64>) {
    use rand::seq::index::sample;
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = rng(seed);
    let a = DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng));
    let mut w = DVector::zeros(cols);
    for j in sample(&mut rng, cols, sparsity) {
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        w[j] = sign * rng.random_range(1.0..3.0);
    }
    (a, w)
}

/// Least squares on the columns `support` through the normal equations.
pub fn restricted_lstsq(a: &DMatrix<f64>, y: &DVector<f64>, support: &[usize]) -> (DVector<f64>, f64) {
    let sub = a.select_columns(support);
    let gram = sub.transpose() * &sub;
    let rhs = sub.transpose() * y;
    let coef = gram.cholesky().expect("full-rank support").solve(&rhs);
    let res = (&sub * &coef - y).norm();
    let mut full = DVector::zeros(a.ncols());
    for (i, &j) in support.iter().enumerate() {
        full[j] = coef[i];
    }
    (full, res)
}

/// Best-residual support of the given size by exhaustive enumeration.
pub fn exhaustive_support(a: &DMatrix<f64>, y: &DVector<f64>, size: usize) -> (Vec<usize>, DVector<f64>) {
    fn combos(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            combos(n, k, j + 1, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    combos(a.ncols(), size, 0, &mut Vec::new(), &mut all);
    let mut best: Option<(Vec<usize>, DVector<f64>, f64)> = None;
    for s in all {
        let (w, res) = restricted_lstsq(a, y, &s);
        if best.as_ref().is_none_or(|b| res < b.2) {
            best = Some((s, w, res));
        }
    }
    let (s, w, _) = best.unwrap();
    (s, w)
}

pub fn support(w: &DVector<f64>) -> Vec<usize> {
    (0..w.len()).filter(|&j| w[j] != 0.0).collect()
}
