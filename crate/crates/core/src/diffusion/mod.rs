//! Fractional diffusion, symmetric stable laws and their sampling.

mod density;
mod equivalence;
mod evolve;
mod laws;
mod sampling;

pub use density::{stable_pdf, stable_pdf_in, InversionWindow};
pub use equivalence::{green_function_equivalence, required_length, GreenComparison};
pub use evolve::evolve_fractional_diffusion;
pub use laws::{cauchy_pdf, gaussian_green, DiffusionLaw, DiffusionProblem, StableLaw};
pub use sampling::{
    ks_two_sample, sample_stable, stability_check, stability_check_scaled, SampleSet, StabilityReport,
};
