//! Linear lossy wave equation: per-mode exact time stepping, dispersion
//! roots and attenuation analysis.

mod attenuation;
mod dispersion;
mod medium;
mod propagator;
mod solver;

pub use attenuation::{
    estimate_power_exponent, fit_rayleigh, measure_attenuation, measure_attenuation_with, AttenuationSample,
    AttenuationSettings, PowerLawFit, RayleighCoeffs,
};
pub(crate) use attenuation::{log_spaced, tone_decay, DrivenField};
pub use dispersion::{dispersion_roots, smallness_limit_frequency, smallness_ratio, DispersionPoint};
pub use medium::{Medium, ThermoviscousConstituents};
pub use solver::{max_stable_dt, step_lossy_wave, LossModel, SeparableSource, WaveState};
