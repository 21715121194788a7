//! Box-constrained Nelder–Mead.

/// Outcome of one simplex descent.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Settings for [`Simplex::minimize`].
#[derive(Debug, Clone)]
pub struct Simplex<'a> {
    pub lower: &'a [f64],
    pub upper: &'a [f64],
    /// Edge lengths of the initial simplex, one per coordinate.
    pub steps: &'a [f64],
    /// Stop once `max f - min f` over the simplex is at most this.
    pub tolerance: f64,
    pub max_evals: usize,
}

fn clamp(x: &mut [f64], lo: &[f64], hi: &[f64]) {
    for ((v, l), h) in x.iter_mut().zip(lo).zip(hi) {
        *v = v.clamp(*l, *h);
    }
}

impl Simplex<'_> {
    /// Minimize `f` from `x0`. Points are projected onto the box before every
    /// evaluation. After the spread criterion is met the simplex is rebuilt
    /// around the best vertex; the search ends when a rebuilt simplex makes
    /// no progress beyond `tolerance`.
    pub fn minimize(&self, mut f: impl FnMut(&[f64]) -> f64, x0: &[f64]) -> SimplexOutcome {
        let mut x = x0.to_vec();
        clamp(&mut x, self.lower, self.upper);
        let mut evals = 1;
        let mut fx = f(&x);
        loop {
            let budget = self.max_evals.saturating_sub(evals);
            let (xn, fn_, used, met) = self.descend(&mut f, &x, fx, budget);
            evals += used;
            let progress = fx - fn_;
            if fn_ <= fx {
                x = xn;
                fx = fn_;
            }
            if !met {
                return SimplexOutcome { x, f: fx, evaluations: evals, converged: false };
            }
            if progress <= self.tolerance {
                return SimplexOutcome { x, f: fx, evaluations: evals, converged: true };
            }
        }
    }

    fn descend(&self, f: &mut impl FnMut(&[f64]) -> f64, x0: &[f64], f0: f64, budget: usize) -> (Vec<f64>, f64, usize, bool) {
        let n = x0.len();
        let mut evals = 0;
        let mut pts: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        pts.push((x0.to_vec(), f0));
        for i in 0..n {
            let mut p = x0.to_vec();
            p[i] += self.steps[i];
            if p[i] > self.upper[i] {
                p[i] = x0[i] - self.steps[i];
            }
            clamp(&mut p, self.lower, self.upper);
            let fp = f(&p);
            evals += 1;
            pts.push((p, fp));
        }
        let mut eval = |p: &mut Vec<f64>, evals: &mut usize| {
            clamp(p, self.lower, self.upper);
            *evals += 1;
            f(p)
        };
        loop {
            pts.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = pts[n].1 - pts[0].1;
            if spread <= self.tolerance {
                let (x, fx) = pts.swap_remove(0);
                return (x, fx, evals, true);
            }
            if evals >= budget {
                let (x, fx) = pts.swap_remove(0);
                return (x, fx, evals, false);
            }
            let centroid: Vec<f64> = (0..n).map(|i| pts[..n].iter().map(|p| p.0[i]).sum::<f64>() / n as f64).collect();
            let worst = pts[n].0.clone();
            let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst).map(|(c, w)| c + t * (c - w)).collect() };

            let mut xr = along(1.0);
            let fr = eval(&mut xr, &mut evals);
            if fr < pts[0].1 {
                let mut xe = along(2.0);
                let fe = eval(&mut xe, &mut evals);
                pts[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < pts[n - 1].1 {
                pts[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < pts[n].1 {
                let mut xc = along(0.5);
                let fc = eval(&mut xc, &mut evals);
                (xc, fc)
            } else {
                let mut xc = along(-0.5);
                let fc = eval(&mut xc, &mut evals);
                (xc, fc)
            };
            if fc < fr.min(pts[n].1) {
                pts[n] = (xc, fc);
                continue;
            }
            // shrink towards the best vertex
            let best = pts[0].0.clone();
            for p in pts.iter_mut().skip(1) {
                let mut q: Vec<f64> = best.iter().zip(&p.0).map(|(b, v)| b + 0.5 * (v - b)).collect();
                let fq = eval(&mut q, &mut evals);
                *p = (q, fq);
            }
        }
    }
}
