use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical operators and solvers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("sample count {got} does not match grid point count {expected}")]
    SampleCount { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("spectrum is not conjugate-symmetric (relative asymmetry {asymmetry:.3e})")]
    AsymmetricSpectrum { asymmetry: f64 },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("prefactor has a pole at d = {dim}, s = {order}")]
    PrefactorPole { dim: usize, order: f64 },

    #[error("boundary mismatch at surface node {node}: field value {field} vs Dirichlet data {data}")]
    BoundaryMismatch { node: usize, field: f64, data: f64 },

    #[error("unstable step: dt = {dt:.6e} exceeds the bound {bound:.6e}")]
    UnstableStep { dt: f64, bound: f64 },

    #[error(
        "Newton iteration for omega = {omega} did not converge in {iterations} iterations \
         (last iterate {last}, residual {residual:.3e})"
    )]
    NoConvergence {
        omega: f64,
        iterations: usize,
        last: Complex64,
        residual: f64,
    },

    #[error("under-resolved grid: {0}")]
    UnderResolved(String),

    #[error("envelope at omega = {omega} is not exponential (R^2 = {r_squared:.6})")]
    NonExponential { omega: f64, r_squared: f64 },

    #[error("x = {x} lies outside the resolved window [-{window}, {window}]")]
    OutsideWindow { x: f64, window: f64 },

    #[error("domain length {length} too small for the law's tails; need at least {required:.4}")]
    DomainTooSmall { length: f64, required: f64 },

    #[error("non-finite state at step {step}")]
    NumericalBlowup { step: usize },

    #[error("spectral tail ratio {ratio:.3e} exceeded the shock monitor threshold at step {step}")]
    SpectralTail { step: usize, ratio: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, value: f64, range: &'static str, ok: bool) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value, range })
    }
}
