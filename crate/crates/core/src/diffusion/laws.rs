use std::f64::consts::PI;

use crate::error::{check_range, Error, Result};
use crate::grid::Field;
use crate::special::gamma;

/// Symmetric stable law with characteristic function `e^{-D|k|^y}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableLaw {
    index: f64,
    scale: f64,
}

impl StableLaw {
    /// `0 < y <= 2`, `D > 0`.
    pub fn new(index: f64, scale: f64) -> Result<Self> {
        check_range("y", index, "0 < y <= 2", index > 0.0 && index <= 2.0)?;
        check_range("D", scale, "D > 0", scale > 0.0)?;
        Ok(Self { index, scale })
    }

    /// Law of the lossy-wave diffusion after time `t`: `D = 2 α0 c0^{1+y} t`.
    pub fn from_wave_loss(alpha0: f64, c0: f64, y: f64, t: f64) -> Result<Self> {
        Self::new(y, 2.0 * alpha0 * c0.powf(1.0 + y) * t)
    }

    /// Heat kernel after time `t`: `y = 2`, `D = κ t` (variance `2κt`).
    pub fn from_diffusivity(kappa: f64, t: f64) -> Result<Self> {
        Self::new(2.0, kappa * t)
    }

    /// Fractional diffusion with coefficient `ζ` after time `t`: `D = ζ t`.
    pub fn from_fractional_diffusivity(zeta: f64, y: f64, t: f64) -> Result<Self> {
        Self::new(y, zeta * t)
    }

    pub fn index(&self) -> f64 {
        self.index
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn characteristic_function(&self, k: f64) -> f64 {
        (-self.scale * k.abs().powf(self.index)).exp()
    }

    /// Density at the origin, `Γ(1 + 1/y) / (π D^{1/y})`.
    pub fn peak_density(&self) -> f64 {
        gamma(1.0 + 1.0 / self.index) / (PI * self.scale.powf(1.0 / self.index))
    }

    /// Coefficients `a_n` of the large-`|x|` expansion
    /// `g(x) ~ Σ a_n |x|^{-(n y + 1)}`, for `n = 1, 2`.
    pub(crate) fn tail_coefficients(&self) -> [f64; 2] {
        let (y, d) = (self.index, self.scale);
        let a1 = d * gamma(1.0 + y) * (0.5 * PI * y).sin() / PI;
        let a2 = -d * d * gamma(1.0 + 2.0 * y) * (PI * y).sin() / (2.0 * PI);
        [a1, a2]
    }
}

/// Which diffusion equation a problem evolves under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiffusionLaw {
    /// `∂t p = κ Δp`.
    Classical { kappa: f64 },
    /// `∂t p = -ζ (-Δ)^{y/2} p`.
    Fractional { zeta: f64, y: f64 },
    /// `∂t p = -2 α0 c0^{1+y} (-Δ)^{y/2} p`.
    WaveLoss { alpha0: f64, c0: f64, y: f64 },
}

impl DiffusionLaw {
    /// `(y, rate)` with modal decay `e^{-rate t |k|^y}`.
    pub fn exponent_and_rate(&self) -> (f64, f64) {
        match *self {
            DiffusionLaw::Classical { kappa } => (2.0, kappa),
            DiffusionLaw::Fractional { zeta, y } => (y, zeta),
            DiffusionLaw::WaveLoss { alpha0, c0, y } => (y, 2.0 * alpha0 * c0.powf(1.0 + y)),
        }
    }

    fn validate(&self) -> Result<()> {
        let (y, rate) = self.exponent_and_rate();
        check_range("y", y, "0 < y <= 2", y > 0.0 && y <= 2.0)?;
        check_range("rate", rate, "rate > 0", rate > 0.0)
    }

    /// Stable law of the Green function at time `t > 0`.
    pub fn law_at(&self, t: f64) -> Result<StableLaw> {
        let (y, rate) = self.exponent_and_rate();
        StableLaw::new(y, rate * t)
    }
}

/// Initial condition plus the equation that evolves it.
#[derive(Debug, Clone)]
pub struct DiffusionProblem {
    pub initial: Field,
    pub law: DiffusionLaw,
}

impl DiffusionProblem {
    pub fn new(initial: Field, law: DiffusionLaw) -> Result<Self> {
        law.validate()?;
        Ok(Self { initial, law })
    }
}

/// Free-space heat kernel `e^{-x²/4κt} / √(4πκt)`.
pub fn gaussian_green(x: f64, t: f64, kappa: f64) -> Result<f64> {
    check_range("t", t, "t > 0", t > 0.0)?;
    check_range("kappa", kappa, "kappa > 0", kappa > 0.0)?;
    let s = 4.0 * kappa * t;
    Ok((-x * x / s).exp() / (PI * s).sqrt())
}

/// Cauchy density `(1/π) γ / (x² + γ²)`.
pub fn cauchy_pdf(x: f64, gamma_scale: f64) -> Result<f64> {
    if !(gamma_scale > 0.0) {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: gamma_scale,
            range: "gamma > 0",
        });
    }
    Ok(gamma_scale / (PI * (x * x + gamma_scale * gamma_scale)))
}
