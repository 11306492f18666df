//! Nonlinear models with fractional-Laplacian loss: Burgers, the parabolic
//! beam equation and the full-wave Westervelt equation.

mod beam;
mod burgers;
mod line;
mod medium;
mod westervelt;

pub use beam::{beam_width, gaussian_beam_reference, kzk_step, parabolic_loss_step, BeamGrid, BeamState};
pub use burgers::{burgers_step, cole_hopf_gaussian, BurgersSolver};
pub use medium::NonlinearMedium;
pub use westervelt::{
    measure_fundamental_attenuation, westervelt_step, FundamentalAttenuation, WesterveltState, MACH_LIMIT,
};
