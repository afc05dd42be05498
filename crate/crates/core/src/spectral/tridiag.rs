//! Selected eigenpairs of a real symmetric tridiagonal matrix by Sturm
//! bisection and inverse iteration.

/// Symmetric tridiagonal matrix with diagonal `d` (length `n`) and
/// off-diagonal `e` (length `n - 1`).
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(d: Vec<f64>, e: Vec<f64>) -> Self {
        assert!(!d.is_empty() && e.len() + 1 == d.len(), "off-diagonal must have length n - 1");
        Self { d, e }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.e[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.e[i].abs() } else { 0.0 };
            lo = lo.min(self.d[i] - r);
            hi = hi.max(self.d[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.d[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            if q == 0.0 {
                q = tiny;
            }
            q = self.d[i] - x - self.e[i - 1] * self.e[i - 1] / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based) to full precision.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        assert!(index < self.len());
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * scale {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves `(T - shift I) x = rhs` in place by LU with partial pivoting.
    fn shifted_solve(&self, shift: f64, rhs: &mut [f64]) {
        let n = self.len();
        if n == 1 {
            let p = self.d[0] - shift;
            rhs[0] /= if p == 0.0 { f64::EPSILON } else { p };
            return;
        }
        let norm = self.d.iter().chain(&self.e).fold(0.0f64, |m, v| m.max(v.abs()));
        let tiny = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
        // U has diagonal u0 and superdiagonals u1, u2; L multipliers in `mult`.
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut mult = vec![0.0; n];
        let mut swapped = vec![false; n];

        let mut diag = self.d[0] - shift;
        let mut sup = self.e[0];
        for i in 0..n - 1 {
            let sub = self.e[i];
            let next_diag = self.d[i + 1] - shift;
            let next_sup = if i + 2 < n { self.e[i + 1] } else { 0.0 };
            if diag.abs() >= sub.abs() {
                let piv = if diag == 0.0 { tiny } else { diag };
                let m = sub / piv;
                u0[i] = piv;
                u1[i] = sup;
                u2[i] = 0.0;
                mult[i] = m;
                diag = next_diag - m * sup;
                sup = next_sup;
            } else {
                let m = diag / sub;
                u0[i] = sub;
                u1[i] = next_diag;
                u2[i] = next_sup;
                mult[i] = m;
                swapped[i] = true;
                diag = sup - m * next_diag;
                sup = -m * next_sup;
            }
        }
        u0[n - 1] = if diag == 0.0 { tiny } else { diag };

        for i in 0..n - 1 {
            if swapped[i] {
                rhs.swap(i, i + 1);
            }
            rhs[i + 1] -= mult[i] * rhs[i];
        }
        for i in (0..n).rev() {
            let mut v = rhs[i];
            if i + 1 < n {
                v -= u1[i] * rhs[i + 1];
            }
            if i + 2 < n {
                v -= u2[i] * rhs[i + 2];
            }
            rhs[i] = v / u0[i];
        }
    }

    /// The `count` largest eigenpairs, eigenvalues descending. Eigenvectors
    /// are unit length and orthogonalized against each other.
    pub fn largest(&self, count: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
        let n = self.len();
        assert!(count <= n);
        let mut values = Vec::with_capacity(count);
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(count);
        for j in 0..count {
            let lambda = self.eigenvalue(n - 1 - j);
            // Deterministic start vector with components along every mode.
            let mut x: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7 + j * 13) % 17) as f64 / 17.0).collect();
            for _ in 0..4 {
                self.shifted_solve(lambda, &mut x);
                for prev in &vectors {
                    let dot: f64 = prev.iter().zip(&x).map(|(p, v)| p * v).sum();
                    for (v, p) in x.iter_mut().zip(prev) {
                        *v -= dot * p;
                    }
                }
                let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                x.iter_mut().for_each(|v| *v /= norm);
            }
            values.push(lambda);
            vectors.push(x);
        }
        (values, vectors)
    }
}
