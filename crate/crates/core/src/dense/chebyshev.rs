//! Matrix-free propagation `e^{-iHt}ψ` by Chebyshev expansion.
//!
//! Used for registers too large to diagonalize explicitly. With `H = a·H̃ + b`
//! and the spectrum of `H̃` inside `[-1, 1]`,
//!
//! ```text
//! e^{-iHt} = e^{-ibt} Σ_k (2 - δ_k0) (-i)^k J_k(a t) T_k(H̃)
//! ```
//!
//! and the series is truncated once `|J_k(at)|` drops below 1e-18.

use crate::error::{Error, Result};
use crate::C64;

/// `J_0(x) … J_kmax(x)` for `x ≥ 0` by Miller's backward recurrence,
/// normalized with `J_0 + 2 Σ J_2k = 1`.
pub fn bessel_j_sequence(x: f64, kmax: usize) -> Vec<f64> {
    assert!(x >= 0.0 && x.is_finite(), "bessel_j_sequence needs finite x >= 0");
    if x == 0.0 {
        let mut v = vec![0.0; kmax + 1];
        v[0] = 1.0;
        return v;
    }
    let start = {
        let m = kmax.max(x.ceil() as usize) + 30 + (40.0 * (kmax as f64 + x).sqrt()) as usize;
        m + (m % 2)
    };
    let mut j = vec![0.0; start + 2];
    j[start] = 1e-300;
    for k in (1..=start).rev() {
        j[k - 1] = 2.0 * k as f64 / x * j[k] - j[k + 1];
        if j[k - 1].abs() > 1e250 {
            for v in j[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let mut sum = j[0];
    for k in (2..=start).step_by(2) {
        sum += 2.0 * j[k];
    }
    j.truncate(kmax + 1);
    j.iter_mut().for_each(|v| *v /= sum);
    j
}

/// Apply `e^{-iHt}` to `psi`, where `apply_h(v, out)` writes `H v` into `out`
/// and `spectrum = (lo, hi)` encloses every eigenvalue of `H`.
pub fn chebyshev_propagate<F>(apply_h: F, spectrum: (f64, f64), psi: &[C64], t: f64) -> Result<Vec<C64>>
where
    F: Fn(&[C64], &mut [C64]),
{
    let (lo, hi) = spectrum;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::Numerical(format!("invalid spectral bounds [{lo}, {hi}]")));
    }
    let n = psi.len();
    // small margin keeps the scaled spectrum strictly inside [-1, 1]
    let half = 0.5 * (hi - lo) * (1.0 + 1e-9) + 1e-12;
    let mid = 0.5 * (hi + lo);
    let x = half * t.abs();
    let kmax = (x + 12.0 * x.cbrt() + 40.0).ceil() as usize;
    let bessel = bessel_j_sequence(x, kmax);
    let last = bessel.iter().rposition(|b| b.abs() > 1e-18).unwrap_or(0);

    // (-i sgn t)^k
    let step = if t >= 0.0 { C64::new(0.0, -1.0) } else { C64::new(0.0, 1.0) };
    let scaled = |v: &[C64], out: &mut [C64]| {
        apply_h(v, out);
        for (o, vi) in out.iter_mut().zip(v) {
            *o = (*o - vi * mid) / half;
        }
    };

    let mut out: Vec<C64> = psi.iter().map(|p| p * bessel[0]).collect();
    if last >= 1 {
        let mut prev = psi.to_vec();
        let mut cur = vec![C64::new(0.0, 0.0); n];
        scaled(&prev, &mut cur);
        let mut phase = step;
        let c1 = phase * 2.0 * bessel[1];
        for (o, c) in out.iter_mut().zip(&cur) {
            *o += c * c1;
        }
        let mut next = vec![C64::new(0.0, 0.0); n];
        for b in bessel.iter().take(last + 1).skip(2) {
            scaled(&cur, &mut next);
            for (nx, pv) in next.iter_mut().zip(&prev) {
                *nx = *nx * 2.0 - pv;
            }
            phase *= step;
            let c = phase * 2.0 * *b;
            for (o, v) in out.iter_mut().zip(&next) {
                *o += v * c;
            }
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
        }
    }
    let global = C64::from_polar(1.0, -mid * t);
    out.iter_mut().for_each(|o| *o *= global);
    if out.iter().any(|o| !o.re.is_finite() || !o.im.is_finite()) {
        return Err(Error::Numerical("Chebyshev propagation produced non-finite amplitudes".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_values_match_reference() {
        // reference values from an independent library implementation
        let cases = [
            (0, 1.0, 0.7651976865579666),
            (1, 10.0, 0.0434727461688616),
            (5, 100.0, -0.07419573696451393),
            (80, 100.0, 0.01310896819977761),
            (120, 100.0, 1.1476221795665094e-05),
            (3, 0.5, 0.002563729994587244),
            (0, 250.0, -0.026053373425204234),
            (200, 250.0, -0.005902167915235028),
        ];
        for (k, x, expect) in cases {
            let j = bessel_j_sequence(x, k + 5);
            assert!((j[k] - expect).abs() < 1e-13, "J_{k}({x}) = {} vs {expect}", j[k]);
        }
    }

    #[test]
    fn bessel_sum_of_squares() {
        for x in [0.3, 7.0, 60.0, 400.0] {
            let j = bessel_j_sequence(x, (x + 80.0) as usize);
            let s = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
            assert!((s - 1.0).abs() < 1e-13, "x = {x}: {s}");
        }
    }

    #[test]
    fn diagonal_operator_phases() {
        let diag = [-3.0, 0.5, 2.0, 7.5];
        let apply = |v: &[C64], out: &mut [C64]| {
            for i in 0..v.len() {
                out[i] = v[i] * diag[i];
            }
        };
        let psi = vec![C64::new(0.5, 0.0); 4];
        for t in [0.0, 0.8, -2.3, 11.0] {
            let out = chebyshev_propagate(apply, (-3.0, 7.5), &psi, t).unwrap();
            for i in 0..4 {
                let exact = psi[i] * C64::from_polar(1.0, -diag[i] * t);
                assert!((out[i] - exact).norm() < 1e-13, "t = {t}");
            }
        }
    }
}
