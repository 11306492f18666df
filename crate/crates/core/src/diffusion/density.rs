//! Symmetric stable densities by inverting the characteristic function.
//!
//! `g(x) = (1/π) ∫_0^∞ e^{-Dk^y} cos(kx) dk` is evaluated with the
//! trapezoid rule in `k`. By Poisson summation the trapezoid sum with step
//! `Δk` equals `Σ_m g(x + mP)`, `P = 2π/Δk`, exactly; the images `m ≠ 0`
//! are removed using the two-term large-`|x|` expansion of `g`, summed
//! with Hurwitz zeta functions.

use std::f64::consts::PI;

use super::laws::StableLaw;
use crate::error::{Error, Result};

/// `e^{-D k_max^y}` at the truncation wavenumber.
const CF_CUTOFF: f64 = 1e-14;
const MAX_TERMS: usize = 50_000_000;
const RESEED: usize = 256;

/// Resolution settings of the inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionWindow {
    /// Largest `|x|` that may be requested.
    pub half_width: f64,
    /// Image period as a multiple of `half_width`.
    pub period_factor: f64,
}

impl InversionWindow {
    /// `100 D^{1/y}` wide, images at `100×` that distance.
    pub fn default_for(law: &StableLaw) -> Self {
        Self {
            half_width: 100.0 * law.scale().powf(1.0 / law.index()),
            period_factor: 100.0,
        }
    }
}

/// Density of `law` at each `x`, with the default window.
pub fn stable_pdf(law: &StableLaw, xs: &[f64]) -> Result<Vec<f64>> {
    stable_pdf_in(law, xs, InversionWindow::default_for(law))
}

pub fn stable_pdf_in(law: &StableLaw, xs: &[f64], window: InversionWindow) -> Result<Vec<f64>> {
    let w = window.half_width;
    if !(w > 0.0 && window.period_factor >= 10.0) {
        return Err(Error::InvalidArgument(format!(
            "inversion window half-width {w}, period factor {}",
            window.period_factor
        )));
    }
    if let Some(&x) = xs.iter().find(|x| !(x.abs() <= w)) {
        return Err(Error::OutsideWindow { x, window: w });
    }
    let (y, d) = (law.index(), law.scale());
    let period = window.period_factor * w;
    let dk = 2.0 * PI / period;
    let k_max = (-CF_CUTOFF.ln() / d).powf(1.0 / y);
    let terms = (k_max / dk).ceil() as usize;
    if terms > MAX_TERMS {
        return Err(Error::InvalidArgument(format!(
            "inversion needs {terms} wavenumbers; reduce the window"
        )));
    }
    let weights: Vec<f64> = (0..=terms)
        .map(|j| {
            let c = law.characteristic_function(j as f64 * dk);
            if j == 0 {
                0.5 * c
            } else {
                c
            }
        })
        .collect();
    let tails = law.tail_coefficients();
    Ok(xs
        .iter()
        .map(|&x| {
            let periodized = cosine_sum(&weights, dk * x) * dk / PI;
            periodized - image_tails(x, period, y, tails)
        })
        .collect())
}

/// `Σ_j w_j cos(jθ)` by rotation, re-seeded every `RESEED` terms.
fn cosine_sum(w: &[f64], theta: f64) -> f64 {
    let (s1, c1) = theta.sin_cos();
    let mut acc = 0.0;
    for (block, chunk) in w.chunks(RESEED).enumerate() {
        let (mut s, mut c) = ((block * RESEED) as f64 * theta).sin_cos();
        for wj in chunk {
            acc += wj * c;
            let cn = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = cn;
        }
    }
    acc
}

/// `Σ_{m≠0} Σ_n a_n |x + mP|^{-(ny+1)}`.
fn image_tails(x: f64, period: f64, y: f64, a: [f64; 2]) -> f64 {
    a.iter()
        .enumerate()
        .map(|(i, an)| {
            if *an == 0.0 {
                return 0.0;
            }
            let s = (i + 1) as f64 * y + 1.0;
            let u = x / period;
            an * period.powf(-s) * (hurwitz_zeta(s, 1.0 + u) + hurwitz_zeta(s, 1.0 - u))
        })
        .sum()
}

/// `ζ(s, a) = Σ_{j≥0} (j + a)^{-s}` for `s > 1`, `a > 0`, by Euler–Maclaurin.
pub(crate) fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    const N: usize = 24;
    let head: f64 = (0..N).map(|j| (j as f64 + a).powf(-s)).sum();
    let b = N as f64 + a;
    // Bernoulli numbers B2, B4, B6, B8 over (2k)!.
    let coeffs = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30_240.0, -1.0 / 1_209_600.0];
    let mut tail = b.powf(1.0 - s) / (s - 1.0) + 0.5 * b.powf(-s);
    // Rising factorial s(s+1)…(s+2k-2) times b^{-s-2k+1}.
    let mut rising = s;
    let mut power = b.powf(-s - 1.0);
    for (k, c) in coeffs.iter().enumerate() {
        tail += c * rising * power;
        let m = 2 * k + 1;
        rising *= (s + m as f64) * (s + m as f64 + 1.0);
        power /= b * b;
    }
    head + tail
}
