//! Full-wave Westervelt equation with fractional-Laplacian loss,
//! scaled to unit `∂²p/∂t²`:
//!
//! `p_tt + 2γ(k) p_t + c0²|k|² p = b ∂²(p²)/∂t²`, `b = B/(ρ0c0²)`.
//!
//! The state is carried as `q = p - b p²`, which moves the nonlinearity out
//! of the inertia term:
//!
//! `q_tt + 2γ q_t + c0²|k|² q = -c0²|k|² b (p²) - 2γ (2b p p_t)`.
//!
//! The forcing on the right vanishes with `k` (for `y > 0`), so long waves
//! are not driven secularly by splitting errors. Steps are Strang split:
//! exact linear half-step on `(q, q_t)`, RK4 on `q_t` with `q` frozen,
//! exact linear half-step. Products are formed pseudo-spectrally and
//! dealiased by the two-thirds rule.

use num_complex::Complex64;

use super::medium::NonlinearMedium;
use crate::error::{Error, Result};
use crate::grid::{forward_transform, inverse_transform, Field, Spectrum, UniformGrid};
use crate::linear_wave::{
    dispersion_roots, tone_decay, AttenuationSettings, DrivenField, Medium, SeparableSource, WaveState,
};

/// Acoustic Mach number above which a run is flagged.
pub const MACH_LIMIT: f64 = 0.1;

/// Largest `2b|p|` tolerated; the map `p -> q` folds at `2bp = 1`.
const DENOMINATOR_LIMIT: f64 = 0.5;

/// Linear wave state plus the nonlinearity constants.
#[derive(Debug, Clone)]
pub struct WesterveltState {
    linear: WaveState,
    medium: NonlinearMedium,
    keep: Vec<bool>,
    steps: usize,
    peak_mach: f64,
}

fn dealias_mask(grid: &UniformGrid) -> Vec<bool> {
    let n = grid.n() as i64;
    let modes = grid.mode_indices();
    let ok = |j: i64| 3 * j.abs() <= n;
    match grid.dim() {
        1 => modes.iter().map(|&j| ok(j)).collect(),
        _ => (0..grid.point_count())
            .map(|f| ok(modes[f / grid.n()]) && ok(modes[f % grid.n()]))
            .collect(),
    }
}

fn check_denominator(p: &[f64], b: f64) -> Result<()> {
    let worst = p.iter().fold(0.0_f64, |m, v| m.max((2.0 * b * v).abs()));
    if worst >= DENOMINATOR_LIMIT {
        return Err(Error::OutOfRange {
            name: "2 B p / (rho0 c0^2)",
            value: worst,
            range: "below 0.5",
        });
    }
    Ok(())
}

impl WesterveltState {
    /// Pressure `p` and `∂p/∂t = v`.
    pub fn new(p: &Field, v: &Field, medium: NonlinearMedium) -> Result<Self> {
        if p.grid() != v.grid() {
            return Err(Error::GridMismatch);
        }
        let b = medium.westervelt_coefficient();
        check_denominator(p.values(), b)?;
        let q = Field::new(*p.grid(), p.values().iter().map(|x| x - b * x * x).collect())?;
        let u = Field::new(
            *p.grid(),
            p.values()
                .iter()
                .zip(v.values())
                .map(|(x, w)| w * (1.0 - 2.0 * b * x))
                .collect(),
        )?;
        let linear = WaveState::new(&q, &u, *medium.base())?;
        Ok(Self {
            keep: dealias_mask(linear.grid()),
            linear,
            medium,
            steps: 0,
            peak_mach: medium.mach(p.max_abs()),
        })
    }

    pub fn at_rest(grid: UniformGrid, medium: NonlinearMedium) -> Self {
        let z = Field::zeros(grid);
        Self::new(&z, &z, medium).expect("zero fields are valid")
    }

    /// Transformed state `(q, q_t)` evolved by the linear propagator.
    pub fn transformed(&self) -> &WaveState {
        &self.linear
    }

    pub fn medium(&self) -> &NonlinearMedium {
        &self.medium
    }

    pub fn time(&self) -> f64 {
        self.linear.time()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `p` recovered from `q = p - b p²` on the branch through `p = 0`.
    pub fn pressure(&self) -> Result<Field> {
        let q = self.linear.pressure()?;
        let b = self.medium.westervelt_coefficient();
        if b == 0.0 {
            return Ok(q);
        }
        let values = q
            .values()
            .iter()
            .map(|&q| {
                let disc = 1.0 - 4.0 * b * q;
                if disc > 0.0 {
                    Ok(2.0 * q / (1.0 + disc.sqrt()))
                } else {
                    Err(Error::NumericalBlowup { step: self.steps })
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(Field::new(*q.grid(), values)?.with_units(q.units()))
    }

    pub fn max_stable_dt(&self) -> f64 {
        self.linear.max_stable_dt()
    }

    /// Largest Mach number seen at a step boundary.
    pub fn peak_mach(&self) -> f64 {
        self.peak_mach
    }

    /// True once the Mach number has exceeded [`MACH_LIMIT`].
    pub fn mach_warning(&self) -> bool {
        self.peak_mach > MACH_LIMIT
    }

    fn check_dt(&self, dt: f64) -> Result<()> {
        let bound = self.max_stable_dt();
        if !(dt > 0.0) || dt > bound * (1.0 + 1e-12) {
            return Err(Error::UnstableStep { dt, bound });
        }
        Ok(())
    }

    fn physical(&self, coeffs: Vec<Complex64>) -> Result<Vec<f64>> {
        let spec = Spectrum::from_coefficients(*self.linear.grid(), coeffs)
            .map_err(|_| Error::NumericalBlowup { step: self.steps })?;
        Ok(inverse_transform(&spec)?.into_values())
    }

    fn dealiased(&self, values: Vec<f64>) -> Result<Vec<Complex64>> {
        let f = Field::new(*self.linear.grid(), values)
            .map_err(|_| Error::NumericalBlowup { step: self.steps })?;
        let mut s = forward_transform(&f)?;
        for (c, keep) in s.coefficients_mut().iter_mut().zip(&self.keep) {
            if !keep {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        Ok(s.coefficients().to_vec())
    }

    /// RK4 over `dt` on the nonlinear forcing of `q_t` with `q` frozen.
    fn nonlinear(&mut self, dt: f64) -> Result<()> {
        let b = self.medium.westervelt_coefficient();
        if b == 0.0 {
            return Ok(());
        }
        let c0 = self.linear.loss().c0();
        let loss = *self.linear.loss();
        let ks = self.linear.wavevectors().to_vec();
        let two_gamma: Vec<f64> = ks.iter().map(|&k| 2.0 * loss.damping(k)).collect();
        let p = self.pressure()?.into_values();
        check_denominator(&p, b)?;
        let square = self.dealiased(p.iter().map(|x| x * x).collect())?;
        let stiff: Vec<Complex64> = square
            .iter()
            .zip(&ks)
            .map(|(c, k)| -c * (b * c0 * c0 * (k[0] * k[0] + k[1] * k[1])))
            .collect();
        let inertia: Vec<f64> = p.iter().map(|x| 2.0 * b * x / (1.0 - 2.0 * b * x)).collect();
        let rhs = |uc: &[Complex64]| -> Result<Vec<Complex64>> {
            // 2b p p_t with p_t = q_t / (1 - 2bp).
            let u = self.physical(uc.to_vec())?;
            let flux = self.dealiased(u.iter().zip(&inertia).map(|(a, w)| a * w).collect())?;
            Ok(stiff
                .iter()
                .zip(&flux)
                .zip(&two_gamma)
                .map(|((s, f), g)| s - f * g)
                .collect())
        };
        let u0 = self.linear.coefficients_ref().1.to_vec();
        let add = |a: &[Complex64], k: &[Complex64], h: f64| -> Vec<Complex64> {
            a.iter().zip(k).map(|(x, d)| x + d * h).collect()
        };
        let k1 = rhs(&u0)?;
        let k2 = rhs(&add(&u0, &k1, 0.5 * dt))?;
        let k3 = rhs(&add(&u0, &k2, 0.5 * dt))?;
        let k4 = rhs(&add(&u0, &k3, dt))?;
        let (_, u) = self.linear.coefficients_mut();
        for (i, c) in u.iter_mut().enumerate() {
            *c += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
        Ok(())
    }

    fn finish_step(&mut self) -> Result<()> {
        self.steps += 1;
        let (p, v) = self.linear.coefficients_ref();
        if p.iter().chain(v).any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NumericalBlowup { step: self.steps });
        }
        let peak = self.pressure()?.max_abs();
        self.peak_mach = self.peak_mach.max(self.medium.mach(peak));
        Ok(())
    }

    /// One source-free split step.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        self.check_dt(dt)?;
        self.linear.advance_unchecked(0.5 * dt);
        self.nonlinear(dt)?;
        self.linear.advance_unchecked(0.5 * dt);
        self.finish_step()
    }

    /// One split step with the forcing `profile · signal(t)` carried by the
    /// linear half-steps.
    pub fn step_driven(
        &mut self,
        source: &mut SeparableSource,
        dt: f64,
        signal: &dyn Fn(f64) -> f64,
    ) -> Result<()> {
        self.check_dt(dt)?;
        source.step(&mut self.linear, 0.5 * dt, signal)?;
        self.nonlinear(dt)?;
        source.step(&mut self.linear, 0.5 * dt, signal)?;
        self.finish_step()
    }
}

impl DrivenField for WesterveltState {
    fn max_stable_dt(&self) -> f64 {
        WesterveltState::max_stable_dt(self)
    }

    fn drive(&mut self, source: &mut SeparableSource, dt: f64, signal: &dyn Fn(f64) -> f64) -> Result<()> {
        self.step_driven(source, dt, signal)
    }

    fn pressure(&self) -> Result<Field> {
        WesterveltState::pressure(self)
    }
}

/// Consume `state` and return it advanced by `dt`.
pub fn westervelt_step(mut state: WesterveltState, dt: f64) -> Result<WesterveltState> {
    state.step(dt)?;
    Ok(state)
}

/// Decay rate of the driven fundamental with and without nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalAttenuation {
    pub omega: f64,
    /// Rate measured with `B = 0`.
    pub linear_alpha: f64,
    /// Rate measured at the requested source Mach number.
    pub nonlinear_alpha: f64,
    /// `Im k` of the dispersion root.
    pub dispersion_alpha: f64,
    /// `|nonlinear - linear| / linear`.
    pub relative_deviation: f64,
    pub peak_mach: f64,
}

/// Drive a tone at `ω` whose envelope at the source has Mach number
/// `mach`, and compare its spatial decay with the linear measurement.
pub fn measure_fundamental_attenuation(
    medium: &NonlinearMedium,
    omega: f64,
    mach: f64,
    settings: &AttenuationSettings,
) -> Result<FundamentalAttenuation> {
    crate::error::check_range("mach", mach, "0 < mach <= 0.1", mach > 0.0 && mach <= MACH_LIMIT)?;
    let base: Medium = *medium.base();
    let lin = tone_decay(&base, omega, settings, 1.0, |g| Ok(WaveState::at_rest(g, base)))?;
    let target = mach * medium.rho0() * base.c0().powi(2);
    let amplitude = target / lin.source_amplitude;
    let mut peak = 0.0;
    let nl = tone_decay(&base, omega, settings, amplitude, |g| {
        Ok(PeakTracker {
            inner: WesterveltState::at_rest(g, *medium),
            peak: &mut peak,
        })
    })?;
    Ok(FundamentalAttenuation {
        omega,
        linear_alpha: lin.alpha,
        nonlinear_alpha: nl.alpha,
        dispersion_alpha: dispersion_roots(omega, &base)?.alpha,
        relative_deviation: (nl.alpha - lin.alpha).abs() / lin.alpha,
        peak_mach: peak,
    })
}

/// Forwards to the inner state and records its peak Mach number.
struct PeakTracker<'a> {
    inner: WesterveltState,
    peak: &'a mut f64,
}

impl DrivenField for PeakTracker<'_> {
    fn max_stable_dt(&self) -> f64 {
        self.inner.max_stable_dt()
    }

    fn drive(&mut self, source: &mut SeparableSource, dt: f64, signal: &dyn Fn(f64) -> f64) -> Result<()> {
        self.inner.step_driven(source, dt, signal)?;
        *self.peak = self.peak.max(self.inner.peak_mach());
        Ok(())
    }

    fn pressure(&self) -> Result<Field> {
        self.inner.pressure()
    }
}
