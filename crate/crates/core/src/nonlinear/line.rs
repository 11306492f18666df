//! Pseudo-spectral helpers on a periodic line, shared by the Burgers and
//! beam solvers. Coefficients are unnormalised FFT outputs.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::grid::fft_in_place;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone)]
pub(crate) struct PeriodicLine {
    n: usize,
    wavenumbers: Vec<f64>,
    /// Modes kept by the two-thirds rule, `|j| <= n/3`.
    keep: Vec<bool>,
}

impl PeriodicLine {
    pub fn new(n: usize, length: f64) -> Self {
        let ni = n as i64;
        let modes: Vec<i64> = (0..ni).map(|j| if j < ni / 2 { j } else { j - ni }).collect();
        Self {
            n,
            wavenumbers: modes.iter().map(|&j| 2.0 * PI * j as f64 / length).collect(),
            keep: modes.iter().map(|&j| 3 * j.abs() <= ni).collect(),
        }
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Largest wavenumber kept by the dealiasing rule.
    pub fn cutoff(&self) -> f64 {
        self.wavenumbers
            .iter()
            .zip(&self.keep)
            .filter(|(_, k)| **k)
            .fold(0.0, |m, (w, _)| m.max(w.abs()))
    }

    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft_in_place(1, self.n, &mut buf, true);
        buf
    }

    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let mut buf = coeffs.to_vec();
        fft_in_place(1, self.n, &mut buf, false);
        let s = 1.0 / self.n as f64;
        buf.iter().map(|c| c.re * s).collect()
    }

    /// Coefficients of `coef · ∂(p²/2)/∂x`, with the product dealiased.
    pub fn flux_derivative(&self, coeffs: &[Complex64], coef: f64) -> Vec<Complex64> {
        let p = self.inverse(coeffs);
        let sq: Vec<f64> = p.iter().map(|v| 0.5 * v * v).collect();
        let mut out = self.forward(&sq);
        for ((c, &k), &keep) in out.iter_mut().zip(&self.wavenumbers).zip(&self.keep) {
            *c = if keep {
                *c * Complex64::new(0.0, coef * k)
            } else {
                ZERO
            };
        }
        out
    }

    /// One classical RK4 step of `P' = coef · ∂(p²/2)/∂x`.
    pub fn rk4_flux(&self, coeffs: &mut [Complex64], coef: f64, h: f64) {
        let stage = |base: &[Complex64], k: &[Complex64], a: f64| -> Vec<Complex64> {
            base.iter().zip(k).map(|(b, d)| b + d * a).collect()
        };
        let k1 = self.flux_derivative(coeffs, coef);
        let k2 = self.flux_derivative(&stage(coeffs, &k1, 0.5 * h), coef);
        let k3 = self.flux_derivative(&stage(coeffs, &k2, 0.5 * h), coef);
        let k4 = self.flux_derivative(&stage(coeffs, &k3, h), coef);
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
        }
    }

    /// Peak `|P|` over modes with `|j| > n/4`, relative to the overall peak.
    pub fn tail_ratio(&self, coeffs: &[Complex64]) -> f64 {
        let ni = self.n as i64;
        let (mut tail, mut peak) = (0.0_f64, 0.0_f64);
        for (j, c) in coeffs.iter().enumerate() {
            let m = if (j as i64) < ni / 2 {
                j as i64
            } else {
                j as i64 - ni
            };
            let a = c.norm();
            peak = peak.max(a);
            if 4 * m.abs() > ni {
                tail = tail.max(a);
            }
        }
        if peak == 0.0 {
            0.0
        } else {
            tail / peak
        }
    }
}
