//! Fractional Laplacian: spectral multiplier and real-space quadrature.

mod compare;
mod quadrature;
mod spectral;

pub use compare::{
    bump, bump_second_derivative, convergence_study, cross_validate, ConvergenceRow, CrossValidation,
};
pub use quadrature::{
    normalization_h, quadrature_fraclap, quadrature_fraclap_decomposed, riesz_potential, riesz_prefactor,
    riesz_prefactor_normalized, BoundaryCondition, BoundaryData, FraclapDecomposition, QuadratureDomain,
    SurfaceNode, MAX_QUADRATURE_ORDER,
};
pub(crate) use spectral::symbol;
pub use spectral::{spectral_fraclap, FracOrder};
