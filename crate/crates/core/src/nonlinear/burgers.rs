//! Fractional Burgers equation
//! `∂t p + β p ∂x p + 2 α0 c0^{1+y} (-∂xx)^{y/2} p = 0` on a periodic line.
//!
//! Strang splitting: exact spectral loss over `dt/2`, one RK4 step of the
//! conservative flux `-∂x(β p²/2)` over `dt`, loss over `dt/2`.

use num_complex::Complex64;

use super::line::PeriodicLine;
use super::medium::NonlinearMedium;
use crate::error::{check_range, Error, Result};
use crate::fraclap::symbol;
use crate::grid::{Field, UniformGrid, Units};
use crate::special::erf;

/// Time-stepper for the fractional Burgers equation.
#[derive(Debug, Clone)]
pub struct BurgersSolver {
    grid: UniformGrid,
    medium: NonlinearMedium,
    line: PeriodicLine,
    coeffs: Vec<Complex64>,
    values: Vec<f64>,
    half_loss: Option<(f64, Vec<f64>)>,
    steps: usize,
    time: f64,
}

impl BurgersSolver {
    pub fn new(p: &Field, medium: NonlinearMedium) -> Result<Self> {
        let grid = *p.grid();
        if grid.dim() != 1 {
            return Err(Error::InvalidGrid("the Burgers solver is 1D".into()));
        }
        if let Some(index) = p.values().iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let line = PeriodicLine::new(grid.n(), grid.length());
        Ok(Self {
            grid,
            medium,
            coeffs: line.forward(p.values()),
            line,
            values: p.values().to_vec(),
            half_loss: None,
            steps: 0,
            time: 0.0,
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn pressure(&self) -> Field {
        Field::new(self.grid, self.values.clone())
            .expect("state is finite")
            .with_units(Units::Pressure)
    }

    /// `2 / (|β| max|p| k_c)` with `k_c` the dealiasing cutoff; unbounded
    /// without nonlinearity.
    pub fn max_stable_dt(&self) -> f64 {
        let speed = self.medium.beta_nl().abs() * self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if speed == 0.0 {
            f64::INFINITY
        } else {
            2.0 / (speed * self.line.cutoff())
        }
    }

    fn loss_factors(&mut self, dt: f64) -> &[f64] {
        if self.half_loss.as_ref().map(|(h, _)| *h) != Some(dt) {
            let m = self.medium.base();
            let rate = 2.0 * m.alpha0() * m.c0().powf(1.0 + m.y());
            let y = m.y();
            let f = self
                .line
                .wavenumbers()
                .iter()
                .map(|&k| (-0.5 * rate * dt * symbol([k, 0.0], y)).exp())
                .collect();
            self.half_loss = Some((dt, f));
        }
        &self.half_loss.as_ref().expect("filled").1
    }

    pub fn step(&mut self, dt: f64) -> Result<()> {
        let bound = self.max_stable_dt();
        if !(dt > 0.0) || dt > bound {
            return Err(Error::UnstableStep { dt, bound });
        }
        let half = self.loss_factors(dt).to_vec();
        let apply = |c: &mut [Complex64]| c.iter_mut().zip(&half).for_each(|(c, f)| *c *= f);
        let mut coeffs = std::mem::take(&mut self.coeffs);
        apply(&mut coeffs);
        let beta = self.medium.beta_nl();
        if beta != 0.0 {
            self.line.rk4_flux(&mut coeffs, -beta, dt);
        }
        apply(&mut coeffs);
        self.steps += 1;
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NumericalBlowup { step: self.steps });
        }
        self.values = self.line.inverse(&coeffs);
        self.coeffs = coeffs;
        self.time += dt;
        Ok(())
    }

    /// `steps` equal steps of `dt`.
    pub fn advance(&mut self, dt: f64, steps: usize) -> Result<()> {
        (0..steps).try_for_each(|_| self.step(dt))
    }
}

/// One split step from `p`.
pub fn burgers_step(p: &Field, m: &NonlinearMedium, dt: f64) -> Result<Field> {
    let mut s = BurgersSolver::new(p, *m)?;
    s.step(dt)?;
    Ok(s.pressure())
}

/// Solution of `u_t + u u_x = ε u_xx` on the line with `u(x, 0) = A e^{-x²}`,
/// by quadrature of the Cole–Hopf representation.
///
/// `u = ∫ (x-ξ)/t e^{-Φ} dξ / ∫ e^{-Φ} dξ` with
/// `Φ = U0(ξ)/(2ε) + (x-ξ)²/(4εt)` and `U0` the running integral of the
/// initial data. Exponents are shifted by their maximum before summing.
pub fn cole_hopf_gaussian(amplitude: f64, epsilon: f64, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
    check_range("epsilon", epsilon, "epsilon > 0", epsilon > 0.0)?;
    check_range("t", t, "t > 0", t > 0.0)?;
    check_range("amplitude", amplitude, "finite", true)?;
    let spread = (4.0 * epsilon * t).sqrt();
    // The weight is Gaussian in η once η²/(4εt) outgrows the bounded
    // variation |A|√π/(2ε) of the other term.
    let reach = 14.0 * spread + (8.0 * amplitude.abs() * t).sqrt();
    let h = (spread / 16.0).min(0.25 * epsilon / amplitude.abs().max(epsilon));
    let nodes = (2.0 * reach / h).ceil() as usize + 1;
    let half_root_pi = 0.5 * std::f64::consts::PI.sqrt();
    Ok(xs
        .iter()
        .map(|&x| {
            let phi: Vec<(f64, f64)> = (0..nodes)
                .map(|i| {
                    let eta = -reach + i as f64 * h;
                    let xi = x - eta;
                    let u0_int = amplitude * half_root_pi * erf(xi);
                    (eta, -(u0_int / (2.0 * epsilon) + eta * eta / (4.0 * epsilon * t)))
                })
                .collect();
            let top = phi.iter().fold(f64::NEG_INFINITY, |m, (_, e)| m.max(*e));
            let (num, den) = phi.iter().fold((0.0, 0.0), |(a, b), (eta, e)| {
                let w = (e - top).exp();
                (a + eta / t * w, b + w)
            });
            num / den
        })
        .collect())
}
