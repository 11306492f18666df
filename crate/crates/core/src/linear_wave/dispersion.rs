//! Complex wavenumbers of the lossy wave equation and the smallness regime.
//!
//! With `p ∝ e^{i(kx - ωt)}` the per-mode equation gives
//! `k² - ω²/c0² - 2iα0 ω c0^{y-1} k^y = 0`; the forward root has `Re k > 0`
//! and `Im k ≥ 0`, and for small `α0|ω|^{y-1}c0` it approaches
//! `ω/c0 + iα0|ω|^y`.

use num_complex::Complex64;

use super::medium::Medium;
use crate::error::{Error, Result};

const MAX_NEWTON_ITERATIONS: usize = 100;

/// One root of the dispersion relation, `k = β + iα`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionPoint {
    pub omega: f64,
    pub k: Complex64,
    /// `Im k`, Np per unit length.
    pub alpha: f64,
    /// `Re k`.
    pub beta: f64,
    /// `ω / Re k`.
    pub phase_speed: f64,
}

fn residual(k: Complex64, omega: f64, m: &Medium) -> (Complex64, Complex64) {
    let c0 = m.c0();
    let y = m.y();
    let a = Complex64::new(0.0, 2.0 * m.alpha0() * omega * c0.powf(y - 1.0));
    let ky = if y == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        k.powf(y)
    };
    let dky = if y == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        y * k.powf(y - 1.0)
    };
    let f = k * k - (omega / c0).powi(2) - a * ky;
    let df = 2.0 * k - a * dky;
    (f, df)
}

/// Forward root for `ω > 0`; negative `ω` returns the conjugate root.
pub fn dispersion_roots(omega: f64, m: &Medium) -> Result<DispersionPoint> {
    if !(omega.is_finite() && omega != 0.0) {
        return Err(Error::InvalidArgument(format!(
            "dispersion root needs a finite non-zero omega, got {omega}"
        )));
    }
    let w = omega.abs();
    let k0 = w / m.c0();
    let tol = 1e-12 * k0 * k0;
    let mut k = Complex64::new(k0, 0.0);
    let (mut f, mut df) = residual(k, w, m);
    let mut iterations = 0;
    while f.norm() > tol {
        if iterations == MAX_NEWTON_ITERATIONS {
            return Err(Error::NoConvergence {
                omega,
                iterations,
                last: k,
                residual: f.norm(),
            });
        }
        iterations += 1;
        let step = f / df;
        let mut lambda = 1.0;
        loop {
            let trial = k - lambda * step;
            let (ft, dft) = residual(trial, w, m);
            if ft.norm() < f.norm() || lambda < 1e-6 {
                k = trial;
                f = ft;
                df = dft;
                break;
            }
            lambda *= 0.5;
        }
    }
    if omega < 0.0 {
        k = k.conj();
    }
    Ok(DispersionPoint {
        omega,
        k,
        alpha: k.im,
        beta: k.re,
        phase_speed: omega / k.re,
    })
}

/// `α0 |ω|^{y-1} c0`, the ratio `α/β` under the power-law approximation.
pub fn smallness_ratio(omega: f64, m: &Medium) -> f64 {
    if m.alpha0() == 0.0 {
        return 0.0;
    }
    m.alpha0() * omega.abs().powf(m.y() - 1.0) * m.c0()
}

/// Frequency at which the smallness ratio reaches `threshold`, found by
/// bisection in `ln ω`. `None` when the ratio does not depend on `ω`
/// (`y = 1` or `α0 = 0`).
pub fn smallness_limit_frequency(m: &Medium, threshold: f64) -> Option<f64> {
    if m.alpha0() == 0.0 || m.y() == 1.0 || !(threshold > 0.0) {
        return None;
    }
    let g = |lw: f64| smallness_ratio(lw.exp(), m).ln() - threshold.ln();
    let (mut lo, mut hi) = (-700.0_f64, 700.0_f64);
    let glo = g(lo);
    if glo.signum() == g(hi).signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    Some((0.5 * (lo + hi)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lossless_root_is_exact() {
        let m = Medium::new(1500.0, 0.0, 1.3).unwrap();
        let d = dispersion_roots(2.0e6, &m).unwrap();
        assert_eq!(d.k, Complex64::new(2.0e6 / 1500.0, 0.0));
        assert_eq!(d.phase_speed, 1500.0);
    }

    #[test]
    fn small_loss_matches_power_law() {
        // Smallness ratio 0.05 at y = 1.5.
        let (c0, w) = (1.0_f64, 4.0_f64);
        let a0 = 0.05 / (w.powf(0.5) * c0);
        let m = Medium::new(c0, a0, 1.5).unwrap();
        assert!((smallness_ratio(w, &m) - 0.05).abs() < 1e-15);
        let d = dispersion_roots(w, &m).unwrap();
        let alpha_pl = a0 * w.powf(1.5);
        assert!((d.alpha - alpha_pl).abs() <= 0.01 * alpha_pl);
        assert!((d.beta - w / c0).abs() <= 0.003 * w / c0);
        assert!(d.alpha > 0.0 && d.beta > 0.0);
    }

    #[test]
    fn square_law_low_frequency_limit() {
        let (c0, mu) = (2.0, 0.3);
        let m = Medium::thermoviscous(c0, mu).unwrap();
        let w = 1e-3;
        let d = dispersion_roots(w, &m).unwrap();
        let lim = mu / (2.0 * c0.powi(3));
        assert!((d.alpha / (w * w) - lim).abs() < 1e-6 * lim);
    }

    #[test]
    fn negative_frequency_gives_conjugate() {
        let m = Medium::new(1.0, 0.02, 0.7).unwrap();
        let a = dispersion_roots(3.0, &m).unwrap();
        let b = dispersion_roots(-3.0, &m).unwrap();
        assert_eq!(a.k.conj(), b.k);
    }

    #[test]
    fn root_satisfies_equation() {
        for y in [0.0, 0.3, 1.0, 1.7, 2.0] {
            let m = Medium::new(1.3, 0.04, y).unwrap();
            let w = 2.5;
            let d = dispersion_roots(w, &m).unwrap();
            let (f, _) = residual(d.k, w, &m);
            assert!(f.norm() <= 1e-12 * (w / 1.3_f64).powi(2));
        }
    }

    #[test]
    fn limit_frequency_matches_inversion() {
        for y in [0.5, 1.5, 2.0] {
            let m = Medium::new(1.2, 0.01, y).unwrap();
            let got = smallness_limit_frequency(&m, 0.1).unwrap();
            let exact = (0.1 / (m.alpha0() * m.c0())).powf(1.0 / (y - 1.0));
            assert!((got - exact).abs() <= 1e-10 * exact, "y={y}");
        }
        let m = Medium::new(1.0, 0.01, 1.0).unwrap();
        assert!(smallness_limit_frequency(&m, 0.1).is_none());
        assert_eq!(smallness_ratio(7.0, &m), 0.01);
        assert_eq!(smallness_ratio(7.0, &Medium::new(1.0, 0.0, 1.5).unwrap()), 0.0);
    }

    #[test]
    fn zero_frequency_rejected() {
        let m = Medium::new(1.0, 0.1, 1.0).unwrap();
        assert!(dispersion_roots(0.0, &m).is_err());
    }
}
