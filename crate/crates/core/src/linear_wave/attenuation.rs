//! Attenuation measured from simulated travelling waves, and fits of
//! attenuation curves.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::dispersion::smallness_ratio;
use super::medium::Medium;
use super::solver::{SeparableSource, WaveState};
use crate::error::{check_range, Error, Result};
use crate::grid::{Field, UniformGrid};

/// Knobs of the travelling-wave attenuation measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttenuationSettings {
    /// Grid points per wavelength; at least 16.
    pub points_per_wavelength: usize,
    /// Minimum driven run length in periods; runs are extended until the
    /// switch-on transient has decayed behind the fit window.
    pub periods: f64,
    /// Raised-cosine switch-on length in periods.
    pub ramp_periods: f64,
    /// Whole periods at the end of the run used for demodulation.
    pub demod_periods: usize,
    /// Wavelengths excluded next to the source and next to the front.
    pub margin_wavelengths: f64,
}

impl Default for AttenuationSettings {
    fn default() -> Self {
        Self {
            points_per_wavelength: 16,
            periods: 24.0,
            ramp_periods: 3.0,
            demod_periods: 2,
            margin_wavelengths: 2.0,
        }
    }
}

/// Measured spatial decay rate at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttenuationSample {
    pub omega: f64,
    pub alpha: f64,
    /// Coefficient of determination of the log-amplitude regression.
    pub r_squared: f64,
}

/// Drive a tone at each `ω`, demodulate the steady field and regress the
/// log-amplitude against distance. Frequencies run concurrently.
pub fn measure_attenuation(m: &Medium, omegas: &[f64], periods: f64) -> Result<Vec<AttenuationSample>> {
    let settings = AttenuationSettings {
        periods,
        ..Default::default()
    };
    measure_attenuation_with(m, omegas, &settings)
}

pub fn measure_attenuation_with(
    m: &Medium,
    omegas: &[f64],
    settings: &AttenuationSettings,
) -> Result<Vec<AttenuationSample>> {
    if settings.points_per_wavelength < 16 {
        return Err(Error::UnderResolved(format!(
            "{} points per wavelength; need at least 16",
            settings.points_per_wavelength
        )));
    }
    for &w in omegas {
        check_range("omega", w, "omega > 0", w > 0.0)?;
        let r = smallness_ratio(w, m);
        check_range("smallness ratio", r, "ratio <= 0.1", r <= 0.1)?;
    }
    let usable = settings.periods
        - settings.ramp_periods
        - settings.demod_periods as f64
        - 2.0 * settings.margin_wavelengths;
    if !(usable >= 4.0) {
        return Err(Error::InvalidArgument(format!(
            "{} periods leave only {usable} wavelengths for the fit",
            settings.periods
        )));
    }
    omegas.par_iter().map(|&w| measure_one(m, w, settings)).collect()
}

/// Decay (in nepers) required of the switch-on transient before the fit
/// window is trusted.
const TRANSIENT_DECAY: f64 = 9.2;

fn measure_one(m: &Medium, omega: f64, st: &AttenuationSettings) -> Result<AttenuationSample> {
    let fit = tone_decay(m, omega, st, 1.0, |grid| Ok(WaveState::at_rest(grid, *m)))?;
    Ok(AttenuationSample {
        omega,
        alpha: fit.alpha,
        r_squared: fit.r_squared,
    })
}

/// A field that a [`SeparableSource`] can drive.
pub(crate) trait DrivenField {
    fn max_stable_dt(&self) -> f64;
    fn drive(&mut self, source: &mut SeparableSource, dt: f64, signal: &dyn Fn(f64) -> f64) -> Result<()>;
    fn pressure(&self) -> Result<Field>;
}

impl DrivenField for WaveState {
    fn max_stable_dt(&self) -> f64 {
        WaveState::max_stable_dt(self)
    }

    fn drive(&mut self, source: &mut SeparableSource, dt: f64, signal: &dyn Fn(f64) -> f64) -> Result<()> {
        source.step(self, dt, signal)
    }

    fn pressure(&self) -> Result<Field> {
        WaveState::pressure(self)
    }
}

/// Exponential fit of a demodulated tone envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneFit {
    pub alpha: f64,
    pub r_squared: f64,
    /// Envelope extrapolated to the source position.
    pub source_amplitude: f64,
}

/// Drive `amplitude · sin(ωt)` (after a raised-cosine ramp) through the
/// field built by `make`, demodulate the last periods and regress the
/// log-envelope against distance.
pub(crate) fn tone_decay<S: DrivenField>(
    m: &Medium,
    omega: f64,
    st: &AttenuationSettings,
    amplitude: f64,
    make: impl FnOnce(UniformGrid) -> Result<S>,
) -> Result<ToneFit> {
    let c0 = m.c0();
    let period = 2.0 * PI / omega;
    let lambda = c0 * period;
    let dx = lambda / st.points_per_wavelength as f64;

    // Modes near the driving wavenumber ring down only in time, at rate
    // about α c0, so the fit window must trail the front by enough
    // wavelengths for that tail to die out.
    let fit_len = st.periods - st.ramp_periods - st.demod_periods as f64 - 2.0 * st.margin_wavelengths;
    let alpha_guess = m.power_law_attenuation(omega);
    let mut gap = st.ramp_periods + st.demod_periods as f64 + st.margin_wavelengths;
    if alpha_guess > 0.0 {
        gap = gap.max(TRANSIENT_DECAY / (alpha_guess * lambda));
    }
    let periods = st.periods.max(st.margin_wavelengths + fit_len + gap);

    // The front must stay clear of the periodic wrap.
    let half_span = c0 * periods * period + 4.0 * lambda;
    let n = ((2.0 * half_span / dx).ceil() as usize)
        .next_power_of_two()
        .max(8);
    let grid = UniformGrid::centered_1d(n, n as f64 * dx)?;

    // Odd profile: zero mean, so the periodic box needs no uniform
    // counter-oscillation that a free-space source would not produce.
    let sigma = lambda / 8.0;
    let profile = Field::from_fn(grid, |x, _| x / sigma * (-0.5 * (x / sigma).powi(2)).exp())?;
    let mut source = SeparableSource::new(&profile)?;
    let mut state = make(grid)?;

    let per_period = (period / state.max_stable_dt() * (1.0 - 1e-12)).ceil() as usize;
    let dt = period / per_period as f64;
    let total = (periods * per_period as f64).ceil() as usize;
    let demod = st.demod_periods * per_period;
    let ramp = st.ramp_periods * period;
    let signal = |t: f64| {
        let r = if t < ramp {
            0.5 * (1.0 - (PI * t / ramp).cos())
        } else {
            1.0
        };
        amplitude * r * (omega * t).sin()
    };

    let mut amp = vec![Complex64::new(0.0, 0.0); n];
    for step in 1..=total {
        state.drive(&mut source, dt, &signal)?;
        if step > total - demod {
            let t = step as f64 * dt;
            let ph = Complex64::from_polar(1.0, omega * t);
            for (a, p) in amp.iter_mut().zip(state.pressure()?.values()) {
                *a += p * ph;
            }
        }
    }
    let norm = 2.0 / demod as f64;

    let x_lo = st.margin_wavelengths * lambda;
    let x_hi = x_lo + fit_len * lambda;
    let (xs, ls): (Vec<f64>, Vec<f64>) = grid
        .axis()
        .into_iter()
        .zip(&amp)
        .filter(|(x, _)| *x >= x_lo && *x <= x_hi)
        .map(|(x, a)| (x, (a.norm() * norm).ln()))
        .unzip();
    let fit = linear_fit(&xs, &ls)?;
    // An envelope flat to within 1e-4 has no trend for R^2 to judge.
    let flat = (fit.slope * (x_hi - x_lo)).abs() < 1e-4;
    if !flat && fit.r_squared < 0.999 {
        return Err(Error::NonExponential {
            omega,
            r_squared: fit.r_squared,
        });
    }
    Ok(ToneFit {
        alpha: -fit.slope,
        r_squared: fit.r_squared,
        source_amplitude: fit.intercept.exp(),
    })
}

struct LinearFit {
    intercept: f64,
    slope: f64,
    r_squared: f64,
}

fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    let n = x.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "{n} points are too few for a fit"
        )));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(LinearFit {
        intercept,
        slope,
        r_squared,
    })
}

/// `α ≈ α0 ω^y` fitted in log-log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub alpha0: f64,
    pub y: f64,
}

/// Least-squares fit of `ln α = ln α0 + y ln ω`.
pub fn estimate_power_exponent(samples: &[(f64, f64)]) -> Result<PowerLawFit> {
    if samples.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "{} samples; need at least 3",
            samples.len()
        )));
    }
    if let Some(&(w, a)) = samples.iter().find(|(w, a)| !(*w > 0.0 && *a > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "sample (omega = {w}, alpha = {a}) is not positive"
        )));
    }
    let (lx, ly): (Vec<f64>, Vec<f64>) = samples.iter().map(|(w, a)| (w.ln(), a.ln())).unzip();
    let fit = linear_fit(&lx, &ly)?;
    Ok(PowerLawFit {
        alpha0: fit.intercept.exp(),
        y: fit.slope,
    })
}

/// Two-term approximation `β1 + β2 ω²` of a power-law attenuation curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighCoeffs {
    pub beta1: f64,
    pub beta2: f64,
    pub band: [f64; 2],
    /// Root-mean-square misfit over the sample points.
    pub residual: f64,
}

const RAYLEIGH_SAMPLES: usize = 64;

/// Non-negative least squares of `β1 + β2ω²` against `α0 ω^y` at 64
/// log-spaced frequencies in `band`.
pub fn fit_rayleigh(m: &Medium, band: [f64; 2]) -> Result<RayleighCoeffs> {
    let [lo, hi] = band;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "band [{lo}, {hi}] must satisfy 0 < lo < hi"
        )));
    }
    let omegas = log_spaced(lo, hi, RAYLEIGH_SAMPLES);
    let target: Vec<f64> = omegas.iter().map(|&w| m.power_law_attenuation(w)).collect();
    let sq: Vec<f64> = omegas.iter().map(|w| w * w).collect();
    let rms = |b1: f64, b2: f64| {
        (sq.iter()
            .zip(&target)
            .map(|(s, t)| (b1 + b2 * s - t).powi(2))
            .sum::<f64>()
            / RAYLEIGH_SAMPLES as f64)
            .sqrt()
    };

    // Normal equations of the unconstrained problem.
    let n = RAYLEIGH_SAMPLES as f64;
    let s1: f64 = sq.iter().sum();
    let s2: f64 = sq.iter().map(|s| s * s).sum();
    let t0: f64 = target.iter().sum();
    let t1: f64 = sq.iter().zip(&target).map(|(s, t)| s * t).sum();
    let det = n * s2 - s1 * s1;
    let mut candidates = vec![(0.0, 0.0), ((t0 / n).max(0.0), 0.0), (0.0, (t1 / s2).max(0.0))];
    let b1 = (s2 * t0 - s1 * t1) / det;
    let b2 = (n * t1 - s1 * t0) / det;
    if b1 >= 0.0 && b2 >= 0.0 {
        candidates.push((b1, b2));
    }
    let (beta1, beta2) = candidates
        .into_iter()
        .min_by(|a, b| rms(a.0, a.1).total_cmp(&rms(b.0, b.1)))
        .expect("non-empty");
    Ok(RayleighCoeffs {
        beta1,
        beta2,
        band,
        residual: rms(beta1, beta2),
    })
}

pub(crate) fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
