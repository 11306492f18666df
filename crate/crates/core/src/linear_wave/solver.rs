//! Time stepping of the linear lossy wave equation.
//!
//! Each Fourier mode obeys `P'' + 2γ(k) P' + c0²|k|² P = F̂(k, t)` and is
//! advanced by its exact solution operator. The loss term enters with a
//! positive sign so that the quadratic energy decays and plane waves
//! `e^{i(kx - ωt)}` attenuate in `+x` with `Im k > 0`.

use num_complex::Complex64;

use super::medium::Medium;
use super::propagator::{ModeMatrix, DUHAMEL_NODES};
use crate::error::{Error, Result};
use crate::grid::{forward_transform, inverse_transform, Field, Spectrum, UniformGrid, Units};

/// Loss operator acting on each mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LossModel {
    /// `2 α0 c0^{1+y} |k|^y ∂t`: the fractional-Laplacian loss.
    PowerLaw(Medium),
    /// `μ k² ∂t`: the classical thermoviscous loss.
    Thermoviscous { c0: f64, mu: f64 },
}

impl LossModel {
    pub fn c0(&self) -> f64 {
        match self {
            LossModel::PowerLaw(m) => m.c0(),
            LossModel::Thermoviscous { c0, .. } => *c0,
        }
    }

    /// Half the coefficient of `P'` for wavevector `k`.
    pub fn damping(&self, k: [f64; 2]) -> f64 {
        let k2 = k[0] * k[0] + k[1] * k[1];
        match self {
            LossModel::PowerLaw(m) => m.damping_rate(k2.sqrt()),
            LossModel::Thermoviscous { mu, .. } => 0.5 * mu * k2,
        }
    }
}

/// Largest step allowed on `grid`: 32 steps per period of the fastest mode.
pub fn max_stable_dt(grid: &UniformGrid, c0: f64) -> f64 {
    let k_max = grid.nyquist() * (grid.dim() as f64).sqrt();
    2.0 * std::f64::consts::PI / (32.0 * c0 * k_max)
}

/// Pressure and its time derivative, held as Fourier coefficients.
#[derive(Debug, Clone)]
pub struct WaveState {
    grid: UniformGrid,
    loss: LossModel,
    p: Vec<Complex64>,
    v: Vec<Complex64>,
    wavevectors: Vec<[f64; 2]>,
    time: f64,
    cache: Option<(f64, Vec<ModeMatrix>)>,
}

impl WaveState {
    /// State with pressure `p` and `∂p/∂t = v` in a power-law medium.
    pub fn new(p: &Field, v: &Field, medium: Medium) -> Result<Self> {
        Self::with_loss(p, v, LossModel::PowerLaw(medium))
    }

    /// State evolved under the thermoviscous loss `μ k²`.
    pub fn thermoviscous(p: &Field, v: &Field, c0: f64, mu: f64) -> Result<Self> {
        if !(c0 > 0.0 && mu >= 0.0 && mu.is_finite()) {
            return Err(Error::InvalidArgument(format!("c0 = {c0}, mu = {mu}")));
        }
        Self::with_loss(p, v, LossModel::Thermoviscous { c0, mu })
    }

    pub fn at_rest(grid: UniformGrid, medium: Medium) -> Self {
        let z = Field::zeros(grid);
        Self::new(&z, &z, medium).expect("zero fields are valid")
    }

    fn with_loss(p: &Field, v: &Field, loss: LossModel) -> Result<Self> {
        if p.grid() != v.grid() {
            return Err(Error::GridMismatch);
        }
        let ps = forward_transform(p)?;
        let vs = forward_transform(v)?;
        let wavevectors = (0..ps.coefficients().len()).map(|j| ps.wavevector(j)).collect();
        Ok(Self {
            grid: *p.grid(),
            loss,
            p: ps.coefficients().to_vec(),
            v: vs.coefficients().to_vec(),
            wavevectors,
            time: 0.0,
            cache: None,
        })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn loss(&self) -> &LossModel {
        &self.loss
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn max_stable_dt(&self) -> f64 {
        max_stable_dt(&self.grid, self.loss.c0())
    }

    pub fn pressure(&self) -> Result<Field> {
        Ok(inverse_transform(&self.spectrum(&self.p)?)?.with_units(Units::Pressure))
    }

    pub fn velocity(&self) -> Result<Field> {
        inverse_transform(&self.spectrum(&self.v)?)
    }

    fn spectrum(&self, c: &[Complex64]) -> Result<Spectrum> {
        Spectrum::from_coefficients(self.grid, c.to_vec())
    }

    pub(crate) fn coefficients_ref(&self) -> (&[Complex64], &[Complex64]) {
        (&self.p, &self.v)
    }

    pub(crate) fn coefficients_mut(&mut self) -> (&mut [Complex64], &mut [Complex64]) {
        (&mut self.p, &mut self.v)
    }

    pub(crate) fn wavevectors(&self) -> &[[f64; 2]] {
        &self.wavevectors
    }

    /// `Σ (|∂p/∂t|²/c0² + |∇p|²) Δx`, evaluated through Parseval.
    pub fn energy(&self) -> f64 {
        let c0 = self.loss.c0();
        let sum: f64 = self
            .p
            .iter()
            .zip(&self.v)
            .zip(&self.wavevectors)
            .map(|((p, v), k)| v.norm_sqr() / (c0 * c0) + (k[0] * k[0] + k[1] * k[1]) * p.norm_sqr())
            .sum();
        sum / self.grid.volume()
    }

    fn check_dt(&self, dt: f64) -> Result<()> {
        let bound = self.max_stable_dt();
        if !(dt > 0.0) || dt > bound * (1.0 + 1e-12) {
            return Err(Error::UnstableStep { dt, bound });
        }
        Ok(())
    }

    fn fill_cache(&mut self, dt: f64) {
        if self.cache.as_ref().map(|(t, _)| *t) != Some(dt) {
            let c0 = self.loss.c0();
            let m = self
                .wavevectors
                .iter()
                .map(|&k| ModeMatrix::new(self.loss.damping(k), c0 * k[0].hypot(k[1]), dt))
                .collect();
            self.cache = Some((dt, m));
        }
    }

    /// Advance the source-free equation by `dt`.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        self.check_dt(dt)?;
        self.advance_unchecked(dt);
        Ok(())
    }

    pub(crate) fn advance_unchecked(&mut self, dt: f64) {
        self.fill_cache(dt);
        let mats = &self.cache.as_ref().expect("filled").1;
        for ((p, v), m) in self.p.iter_mut().zip(self.v.iter_mut()).zip(mats) {
            let (p0, v0) = (*p, *v);
            *p = p0 * m.pp + v0 * m.pv;
            *v = p0 * m.vp + v0 * m.vv;
        }
        self.time += dt;
    }
}

/// Forcing `profile(x) · signal(t)` added to the right-hand side, integrated
/// across each step by three-point Gauss–Legendre Duhamel quadrature.
#[derive(Debug, Clone)]
pub struct SeparableSource {
    profile: Vec<Complex64>,
    lag_cache: Option<(f64, Vec<[ModeMatrix; 3]>)>,
}

impl SeparableSource {
    /// `profile` must live on the state's grid. Its mean is removed so the
    /// undamped DC mode is never driven.
    pub fn new(profile: &Field) -> Result<Self> {
        let mut s = forward_transform(profile)?;
        s.coefficients_mut()[0] = Complex64::new(0.0, 0.0);
        Ok(Self {
            profile: s.coefficients().to_vec(),
            lag_cache: None,
        })
    }

    /// Advance `state` by `dt` with forcing `signal(t)`.
    pub fn step(&mut self, state: &mut WaveState, dt: f64, signal: impl Fn(f64) -> f64) -> Result<()> {
        state.check_dt(dt)?;
        if self.profile.len() != state.p.len() {
            return Err(Error::GridMismatch);
        }
        if self.lag_cache.as_ref().map(|(t, _)| *t) != Some(dt) {
            let c0 = state.loss.c0();
            let lags = state
                .wavevectors
                .iter()
                .map(|&k| {
                    let g = state.loss.damping(k);
                    let w0 = c0 * k[0].hypot(k[1]);
                    DUHAMEL_NODES.map(|(x, _)| ModeMatrix::new(g, w0, dt * (1.0 - x)))
                })
                .collect();
            self.lag_cache = Some((dt, lags));
        }
        let t0 = state.time;
        let weights: [f64; 3] = DUHAMEL_NODES.map(|(x, w)| w * dt * signal(t0 + x * dt));
        state.advance_unchecked(dt);
        let lags = &self.lag_cache.as_ref().expect("filled").1;
        for (((p, v), g), lag) in state
            .p
            .iter_mut()
            .zip(state.v.iter_mut())
            .zip(&self.profile)
            .zip(lags)
        {
            let (mut dp, mut dv) = (0.0, 0.0);
            for (m, w) in lag.iter().zip(&weights) {
                dp += w * m.pv;
                dv += w * m.vv;
            }
            *p += g * dp;
            *v += g * dv;
        }
        Ok(())
    }
}

/// Consume `state` and return it advanced by `dt`.
pub fn step_lossy_wave(mut state: WaveState, dt: f64) -> Result<WaveState> {
    state.step(dt)?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn single_mode(medium: Medium, k: f64) -> (WaveState, UniformGrid) {
        let g = UniformGrid::new_1d(64, 2.0 * PI).unwrap();
        let p = Field::from_fn(g, |x, _| (k * x).sin()).unwrap();
        (WaveState::new(&p, &Field::zeros(g), medium).unwrap(), g)
    }

    #[test]
    fn lossless_mode_keeps_amplitude_and_frequency() {
        let c0 = 1.5;
        let k = 3.0;
        let (mut s, g) = single_mode(Medium::new(c0, 0.0, 1.0).unwrap(), k);
        let period = 2.0 * PI / (c0 * k);
        let m = (period / s.max_stable_dt()).ceil() as usize;
        let dt = period / m as f64;
        for _ in 0..100 * m {
            s.step(dt).unwrap();
        }
        // After 100 whole periods the field returns to sin(kx).
        let p = s.pressure().unwrap();
        for (x, v) in g.axis().iter().zip(p.values()) {
            assert!((v - (k * x).sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn frequency_independent_loss_envelope() {
        let (c0, a0) = (1.0, 0.05);
        let (mut s, _) = single_mode(Medium::new(c0, a0, 0.0).unwrap(), 4.0);
        let dt = s.max_stable_dt();
        let e0 = s.energy();
        let steps = 400;
        for _ in 0..steps {
            s.step(dt).unwrap();
        }
        // Energy of a weakly damped oscillator decays as e^{-2γt} up to an
        // O(γ/ω) ripple.
        let t = steps as f64 * dt;
        let ratio = (s.energy() / e0).sqrt();
        let expected = (-a0 * c0 * t).exp();
        assert!(
            (ratio - expected).abs() < 0.01 * expected,
            "{ratio} vs {expected}"
        );
    }

    #[test]
    fn unstable_step_rejected() {
        let (mut s, _) = single_mode(Medium::new(1.0, 0.1, 1.0).unwrap(), 2.0);
        let b = s.max_stable_dt();
        assert!(matches!(s.step(1.01 * b), Err(Error::UnstableStep { .. })));
        assert!(s.step(-b).is_err());
        assert_eq!(s.time(), 0.0);
    }

    #[test]
    fn square_law_equals_thermoviscous() {
        let (c0, mu) = (1.0, 0.02);
        let g = UniformGrid::centered_1d(128, 40.0).unwrap();
        let p = Field::from_fn(g, |x, _| (-x * x).exp()).unwrap();
        let v = Field::zeros(g);
        let mut a = WaveState::new(&p, &v, Medium::thermoviscous(c0, mu).unwrap()).unwrap();
        let mut b = WaveState::thermoviscous(&p, &v, c0, mu).unwrap();
        let dt = a.max_stable_dt();
        for _ in 0..200 {
            a.step(dt).unwrap();
            b.step(dt).unwrap();
        }
        let (pa, pb) = (a.pressure().unwrap(), b.pressure().unwrap());
        assert!(pa.max_abs_diff(&pb).unwrap() <= 1e-10 * pa.max_abs());
    }

    #[test]
    fn source_response_matches_direct_quadrature() {
        // One mode driven by sin(t): compare against a fine trapezoid
        // evaluation of the Duhamel integral.
        let g = UniformGrid::new_1d(16, 2.0 * PI).unwrap();
        let medium = Medium::new(1.0, 0.1, 1.0).unwrap();
        let profile = Field::from_fn(g, |x, _| (2.0 * x).cos()).unwrap();
        let mut src = SeparableSource::new(&profile).unwrap();
        let mut s = WaveState::at_rest(g, medium);
        let dt = s.max_stable_dt();
        let steps = 300;
        for _ in 0..steps {
            src.step(&mut s, dt, |t| t.sin()).unwrap();
        }
        let t = steps as f64 * dt;
        let gamma = medium.damping_rate(2.0);
        let n = 200_000;
        let h = t / n as f64;
        let amp: f64 = (0..=n)
            .map(|i| {
                let tau = i as f64 * h;
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w * h * tau.sin() * ModeMatrix::new(gamma, 2.0, t - tau).pv
            })
            .sum();
        let p = s.pressure().unwrap();
        for (x, v) in g.axis().iter().zip(p.values()) {
            assert!((v - amp * (2.0 * x).cos()).abs() < 1e-9);
        }
    }
}
