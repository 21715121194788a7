//! Eigenpairs of real symmetric tridiagonal matrices.
//!
//! Eigenvalues come from Sturm-sequence bisection, eigenvectors from inverse
//! iteration with reorthogonalization inside clusters. Both are O(n) per
//! eigenpair, so the collective-rotation generator of a 1000-qubit register
//! decomposes in O(n²) without ever storing the eigenvector matrix.

/// Real symmetric tridiagonal matrix: `diag[i]` on the diagonal and `off[i]`
/// at positions `(i, i+1)` and `(i+1, i)`.
#[derive(Debug, Clone)]
pub(crate) struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub(crate) fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty(), "empty tridiagonal matrix");
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length");
        Self { diag, off }
    }

    pub(crate) fn len(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin enclosure of the spectrum.
    fn bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn scale(&self) -> f64 {
        let (lo, hi) = self.bounds();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64, pivmin: f64) -> usize {
        let mut count = 0;
        let mut d = self.diag[0] - x;
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            d = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / d;
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// All eigenvalues, ascending.
    pub(crate) fn eigenvalues(&self) -> Vec<f64> {
        let n = self.len();
        let (lo, hi) = self.bounds();
        let scale = self.scale();
        let pivmin = f64::MIN_POSITIVE * scale.max(1.0);
        let tol = 4.0 * f64::EPSILON * scale;
        let mut out = Vec::with_capacity(n);
        let mut left = lo - tol;
        for k in 0..n {
            // k-th eigenvalue lies in [left, hi]; eigenvalues are sorted so
            // the previous one is a valid lower end
            let (mut a, mut b) = (left, hi + tol);
            while b - a > tol.max(2.0 * f64::EPSILON * a.abs().max(b.abs())) {
                let mid = 0.5 * (a + b);
                if mid == a || mid == b {
                    break;
                }
                if self.count_below(mid, pivmin) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            let value = 0.5 * (a + b);
            out.push(value);
            left = a;
        }
        out
    }

    /// Solve `(T - shift) x = rhs` in place by Gaussian elimination with
    /// partial pivoting; tiny pivots are replaced by `pivmin`.
    fn shifted_solve(&self, shift: f64, rhs: &mut [f64], pivmin: f64) {
        let n = self.len();
        if n == 1 {
            let mut d = self.diag[0] - shift;
            if d.abs() < pivmin {
                d = pivmin;
            }
            rhs[0] /= d;
            return;
        }
        // U has up to two superdiagonals after pivoting
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut d = self.diag[0] - shift;
        let mut e = self.off[0];
        for i in 0..n - 1 {
            let sub = self.off[i];
            let next_d = self.diag[i + 1] - shift;
            let next_e = if i + 2 < n { self.off[i + 1] } else { 0.0 };
            if d.abs() >= sub.abs() {
                let p = if d.abs() < pivmin { pivmin.copysign(if d == 0.0 { 1.0 } else { d }) } else { d };
                let l = sub / p;
                u0[i] = p;
                u1[i] = e;
                u2[i] = 0.0;
                rhs[i + 1] -= l * rhs[i];
                d = next_d - l * e;
                e = next_e;
            } else {
                // swap rows i and i+1
                let l = d / sub;
                u0[i] = sub;
                u1[i] = next_d;
                u2[i] = next_e;
                rhs.swap(i, i + 1);
                rhs[i + 1] -= l * rhs[i];
                d = e - l * next_d;
                e = -l * next_e;
            }
        }
        u0[n - 1] = if d.abs() < pivmin { pivmin } else { d };
        // back substitution
        rhs[n - 1] /= u0[n - 1];
        if n >= 2 {
            rhs[n - 2] = (rhs[n - 2] - u1[n - 2] * rhs[n - 1]) / u0[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            rhs[i] = (rhs[i] - u1[i] * rhs[i + 1] - u2[i] * rhs[i + 2]) / u0[i];
        }
    }

    /// Stream every eigenpair `(λ, v)` in ascending order to `visit`.
    pub(crate) fn for_each_eigenpair(&self, mut visit: impl FnMut(f64, &[f64])) {
        let n = self.len();
        let values = self.eigenvalues();
        let scale = self.scale();
        let pivmin = f64::EPSILON * scale;
        let cluster_gap = 1e-3 * scale;
        let mut cluster: Vec<(f64, Vec<f64>)> = Vec::new();
        for (k, &lambda) in values.iter().enumerate() {
            cluster.retain(|(mu, _)| lambda - mu <= cluster_gap);
            // deterministic, generic start vector
            let mut v: Vec<f64> = (0..n)
                .map(|i| 1.0 + 0.5 * (((i * 7919 + k * 104729) % 1013) as f64 / 1013.0))
                .collect();
            for _ in 0..3 {
                self.shifted_solve(lambda, &mut v, pivmin);
                for (_, w) in &cluster {
                    let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(w).for_each(|(a, b)| *a -= dot * b);
                }
                let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                v.iter_mut().for_each(|a| *a /= norm);
            }
            visit(lambda, &v);
            if values.get(k + 1).is_some_and(|next| next - lambda <= cluster_gap) {
                cluster.push((lambda, v));
            } else {
                cluster.clear();
            }
        }
    }
}
