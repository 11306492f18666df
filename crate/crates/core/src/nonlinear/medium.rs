use crate::error::{check_range, Result};
use crate::linear_wave::Medium;

/// Lossy medium plus the nonlinearity constants of the Burgers, beam and
/// full-wave models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearMedium {
    base: Medium,
    beta_nl: f64,
    rho0: f64,
    b_coef: f64,
    delta: f64,
}

impl NonlinearMedium {
    /// `beta_nl` drives the Burgers model, `b_coef` the beam and
    /// full-wave models; the two are independent inputs.
    pub fn new(base: Medium, beta_nl: f64, rho0: f64, b_coef: f64, delta: f64) -> Result<Self> {
        check_range("beta_nl", beta_nl, "finite", true)?;
        check_range("rho0", rho0, "rho0 > 0", rho0 > 0.0)?;
        check_range("B", b_coef, "finite", true)?;
        check_range("delta", delta, "delta >= 0", delta >= 0.0)?;
        Ok(Self {
            base,
            beta_nl,
            rho0,
            b_coef,
            delta,
        })
    }

    /// Linear medium with every nonlinearity switched off.
    pub fn linear(base: Medium) -> Self {
        Self {
            base,
            beta_nl: 0.0,
            rho0: 1.0,
            b_coef: 0.0,
            delta: 0.0,
        }
    }

    pub fn base(&self) -> &Medium {
        &self.base
    }

    pub fn beta_nl(&self) -> f64 {
        self.beta_nl
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn b_coef(&self) -> f64 {
        self.b_coef
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `B / (ρ0 c0³)`, the beam-equation nonlinearity.
    pub fn beam_coefficient(&self) -> f64 {
        self.b_coef / (self.rho0 * self.base.c0().powi(3))
    }

    /// `B / (ρ0 c0²)`: the full-wave source is this times `∂²(p²)/∂t²`
    /// once the equation is scaled to unit `∂²p/∂t²`.
    pub fn westervelt_coefficient(&self) -> f64 {
        self.b_coef / (self.rho0 * self.base.c0().powi(2))
    }

    /// Acoustic Mach number `p / (ρ0 c0²)` of a pressure amplitude.
    pub fn mach(&self, pressure: f64) -> f64 {
        pressure.abs() / (self.rho0 * self.base.c0().powi(2))
    }

    /// Square-law medium carrying the classical sound-diffusivity loss
    /// `δ/(2c0³) ω²`.
    pub fn classical_reference(&self) -> Result<Medium> {
        let c0 = self.base.c0();
        Medium::new(c0, self.delta / (2.0 * c0.powi(3)), 2.0)
    }

    pub fn with_base(mut self, base: Medium) -> Self {
        self.base = base;
        self
    }
}
