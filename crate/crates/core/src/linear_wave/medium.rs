use crate::error::{check_range, Result};

/// Constituents of the collective thermoviscous loss coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoviscousConstituents {
    pub shear_viscosity: f64,
    pub thermal_conductivity: f64,
    pub heat_capacity_ratio: f64,
    pub specific_heat: f64,
    pub density: f64,
}

impl ThermoviscousConstituents {
    /// `μ = [4η/3 + κ(γ-1)/c_p] / ρ0`.
    pub fn mu(&self) -> f64 {
        (4.0 * self.shear_viscosity / 3.0
            + self.thermal_conductivity * (self.heat_capacity_ratio - 1.0) / self.specific_heat)
            / self.density
    }
}

/// Lossy acoustic medium with power-law attenuation `α0 |ω|^y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium {
    c0: f64,
    alpha0: f64,
    y: f64,
    mu: Option<f64>,
}

impl Medium {
    /// `c0 > 0`, `α0 >= 0`, `0 <= y <= 2`; `y = 0` is the damped wave equation.
    pub fn new(c0: f64, alpha0: f64, y: f64) -> Result<Self> {
        check_range("c0", c0, "c0 > 0", c0 > 0.0)?;
        check_range("alpha0", alpha0, "alpha0 >= 0", alpha0 >= 0.0)?;
        check_range("y", y, "0 <= y <= 2", (0.0..=2.0).contains(&y))?;
        Ok(Self {
            c0,
            alpha0,
            y,
            mu: None,
        })
    }

    /// Square-law medium whose loss matches a thermoviscous fluid:
    /// `α0 = μ / (2 c0^3)`, `y = 2`.
    pub fn thermoviscous(c0: f64, mu: f64) -> Result<Self> {
        check_range("mu", mu, "mu >= 0", mu >= 0.0)?;
        let mut m = Self::new(c0, mu / (2.0 * c0.powi(3)), 2.0)?;
        m.mu = Some(mu);
        Ok(m)
    }

    pub fn from_constituents(c0: f64, t: &ThermoviscousConstituents) -> Result<Self> {
        Self::thermoviscous(c0, t.mu())
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Thermoviscous coefficient, when the medium was built from one.
    pub fn mu(&self) -> Option<f64> {
        self.mu
    }

    /// Whether the loss exponent is a valid Lévy stability index (`y > 0`).
    pub fn is_levy(&self) -> bool {
        self.y > 0.0
    }

    /// Modal damping rate `γ(k) = α0 c0^{1+y} |k|^y`; `y = 0` gives `α0 c0`
    /// for every mode, DC included.
    pub fn damping_rate(&self, k: f64) -> f64 {
        if self.y == 0.0 {
            return self.alpha0 * self.c0;
        }
        if k == 0.0 {
            return 0.0;
        }
        self.alpha0 * self.c0.powf(1.0 + self.y) * k.abs().powf(self.y)
    }

    /// Power-law attenuation `α0 |ω|^y`.
    pub fn power_law_attenuation(&self, omega: f64) -> f64 {
        self.alpha0 * omega.abs().powf(self.y)
    }
}
