//! Polynomial candidate-function dictionary.
//!
//! Terms are multi-indices over the state variables, ordered by total degree
//! and then lexicographically with `x1` varying slowest, so for two variables
//! and degree two the basis reads `1, x1, x2, x1^2, x1 x2, x2^2`. Every
//! coefficient matrix in the crate uses this ordering.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::ode::Trajectory;

/// Ordered monomial basis of total degree at most `degree` in `dim` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictionarySpec {
    dim: usize,
    degree: u32,
    terms: Vec<Vec<u32>>,
}

impl DictionarySpec {
    pub fn new(dim: usize, degree: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dictionary dimension must be >= 1".into()));
        }
        let mut terms = Vec::with_capacity(binomial(dim + degree as usize, degree as usize));
        for total in 0..=degree {
            // Non-decreasing variable index sequences of length `total`, in
            // lexicographic order, map one-to-one onto the required ordering.
            let mut combo = vec![0usize; total as usize];
            loop {
                let mut exps = vec![0u32; dim];
                for &v in &combo {
                    exps[v] += 1;
                }
                terms.push(exps);
                if !next_multiset(&mut combo, dim) {
                    break;
                }
            }
        }
        Ok(Self { dim, degree, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of terms, `C(dim + degree, degree)`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Vec<u32>] {
        &self.terms
    }

    /// Position of the term with the given exponents, if present.
    pub fn index_of(&self, exponents: &[u32]) -> Option<usize> {
        self.terms.iter().position(|t| t == exponents)
    }

    /// Human-readable name of each term: `1`, `x1`, `x1 x2`, `x2^2`.
    pub fn term_names(&self) -> Vec<String> {
        self.terms.iter().map(|t| term_name(t)).collect()
    }

    /// Evaluates every term at one state.
    pub fn eval_row(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(out.len(), self.terms.len());
        for (o, t) in out.iter_mut().zip(&self.terms) {
            *o = monomial(t, x);
        }
    }

    /// Builds `Θ(Y)`, one row per snapshot.
    pub fn evaluate(&self, data: &Trajectory) -> Result<DictionaryMatrix> {
        self.evaluate_states(data.states())
    }

    /// Same as [`evaluate`](Self::evaluate) on a raw `k × n` state matrix.
    pub fn evaluate_states(&self, states: &DMatrix<f64>) -> Result<DictionaryMatrix> {
        if states.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: states.ncols() });
        }
        let k = states.nrows();
        let mut values = DMatrix::zeros(k, self.len());
        let mut x = vec![0.0; self.dim];
        for i in 0..k {
            for (c, xc) in x.iter_mut().enumerate() {
                *xc = states[(i, c)];
            }
            for (j, t) in self.terms.iter().enumerate() {
                values[(i, j)] = monomial(t, &x);
            }
        }
        Ok(DictionaryMatrix { values, spec: self.clone() })
    }
}

fn next_multiset(combo: &mut [usize], dim: usize) -> bool {
    let len = combo.len();
    for pos in (0..len).rev() {
        if combo[pos] + 1 < dim {
            let v = combo[pos] + 1;
            for c in &mut combo[pos..] {
                *c = v;
            }
            return true;
        }
    }
    false
}

#[inline]
fn monomial(exps: &[u32], x: &[f64]) -> f64 {
    let mut p = 1.0;
    for (&e, &xi) in exps.iter().zip(x) {
        if e > 0 {
            p *= xi.powi(e as i32);
        }
    }
    p
}

fn term_name(exps: &[u32]) -> String {
    let mut s = String::new();
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push(' ');
        }
        let _ = write!(s, "x{}", i + 1);
        if e > 1 {
            let _ = write!(s, "^{e}");
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `Θ(Y)`: dictionary terms evaluated on a set of snapshots.
#[derive(Debug, Clone)]
pub struct DictionaryMatrix {
    pub values: DMatrix<f64>,
    pub spec: DictionarySpec,
}

/// `m × n` coefficients mapping dictionary terms (rows) to state derivatives
/// (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    pub values: DMatrix<f64>,
    pub spec: DictionarySpec,
}

impl CoefficientMatrix {
    pub fn zeros(spec: &DictionarySpec) -> Self {
        Self { values: DMatrix::zeros(spec.len(), spec.dim()), spec: spec.clone() }
    }

    pub fn from_values(spec: &DictionarySpec, values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() != spec.len() {
            return Err(Error::DimensionMismatch { expected: spec.len(), got: values.nrows() });
        }
        if values.ncols() != spec.dim() {
            return Err(Error::DimensionMismatch { expected: spec.dim(), got: values.ncols() });
        }
        Ok(Self { values, spec: spec.clone() })
    }

    /// Sets the coefficient of the monomial `exponents` in equation `state`.
    pub fn set(&mut self, exponents: &[u32], state: usize, value: f64) -> Result<()> {
        let row = self.spec.index_of(exponents).ok_or_else(|| {
            Error::InvalidArgument(format!("term {exponents:?} is not in the dictionary"))
        })?;
        self.values[(row, state)] = value;
        Ok(())
    }

    /// Evaluates the polynomial vector field `Θ(x) W` at one state.
    pub fn apply(&self, x: &[f64], theta_buf: &mut [f64], out: &mut [f64]) {
        self.spec.eval_row(x, theta_buf);
        for (i, o) in out.iter_mut().enumerate() {
            *o = theta_buf.iter().zip(self.values.column(i).iter()).map(|(t, w)| t * w).sum();
        }
    }

    /// Number of exactly nonzero entries.
    pub fn nnz(&self) -> usize {
        self.values.iter().filter(|v| **v != 0.0).count()
    }

    /// Coefficients as `m` rows of `n` values, for serialization.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.values.nrows()).map(|r| self.values.row(r).iter().copied().collect()).collect()
    }

    /// Renders each equation as `x1' = -10 x1 + 10 x2`.
    pub fn equations(&self) -> Vec<String> {
        let names = self.spec.term_names();
        (0..self.values.ncols())
            .map(|c| {
                let mut s = format!("x{}' =", c + 1);
                let mut any = false;
                for (r, name) in names.iter().enumerate() {
                    let w = self.values[(r, c)];
                    if w == 0.0 {
                        continue;
                    }
                    let sign = if w < 0.0 { '-' } else { '+' };
                    if any || w < 0.0 {
                        let _ = write!(s, " {sign}");
                    }
                    let _ = write!(s, " {:.6}", w.abs());
                    if name != "1" {
                        let _ = write!(s, " {name}");
                    }
                    any = true;
                }
                if !any {
                    s.push_str(" 0");
                }
                s
            })
            .collect()
    }
}
