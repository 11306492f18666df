//! Cross-validation of the quadrature operator against the spectral one.
//!
//! Test function: the C³ bump `(1 - (x/w)^2)^4` supported on the middle
//! fifth of `[-L/2, L/2]`. The spectral reference is computed on a periodic
//! box about thirty-two times wider and four times finer, aligned so that every
//! quadrature node is also a periodic grid point.

use super::quadrature::{quadrature_fraclap, QuadratureDomain};
use super::spectral::{spectral_fraclap, FracOrder};
use crate::error::{Error, Result};
use crate::grid::{Field, UniformGrid};

const DOMAIN_LENGTH: f64 = 20.0;
const REFINE: usize = 4;
const PAD: usize = 32;

/// C³ bump of half-width `w`.
pub fn bump(x: f64, w: f64) -> f64 {
    let t = x / w;
    if t.abs() < 1.0 {
        (1.0 - t * t).powi(4)
    } else {
        0.0
    }
}

/// Exact second derivative of [`bump`].
pub fn bump_second_derivative(x: f64, w: f64) -> f64 {
    let t = x / w;
    if t.abs() < 1.0 {
        let u = 1.0 - t * t;
        (-8.0 * u.powi(3) + 48.0 * t * t * u.powi(2)) / (w * w)
    } else {
        0.0
    }
}

/// Quadrature and spectral results on the nodes of one domain.
#[derive(Debug, Clone)]
pub struct CrossValidation {
    pub n: usize,
    pub order: f64,
    pub nodes: Vec<f64>,
    pub quadrature: Vec<f64>,
    pub spectral: Vec<f64>,
    pub max_abs_error: f64,
    /// `max|q - o| / max|o|`.
    pub relative_max_error: f64,
    /// Trapezoid-weighted discrete L2 norm of `q - o`.
    pub l2_error: f64,
}

/// Run both operators on the bump with `n` quadrature nodes.
pub fn cross_validate(order: FracOrder, n: usize) -> Result<CrossValidation> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!("{n} nodes; need at least 16")));
    }
    let half = 0.5 * DOMAIN_LENGTH;
    let w = DOMAIN_LENGTH / 10.0;
    let domain = QuadratureDomain::interval(-half, half, n)?;
    let f = domain.sample(|x, _| bump(x, w));
    let boundary = domain.dirichlet_boundary(&f)?;
    let quadrature = quadrature_fraclap(&domain, &f, order, &boundary)?;

    let h = domain.spacing() / REFINE as f64;
    let span = (n - 1) * REFINE;
    let np = (PAD * span).next_power_of_two();
    let offset = (np - span) / 2;
    let grid = UniformGrid::new_1d(np, np as f64 * h)?.with_origin(-half - offset as f64 * h);
    let periodic = Field::from_fn(grid, |x, _| bump(x, w))?;
    let reference = spectral_fraclap(&periodic, order)?;
    let spectral: Vec<f64> = (0..n).map(|i| reference.values()[offset + i * REFINE]).collect();

    let scale = spectral.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let max_abs_error = quadrature
        .iter()
        .zip(&spectral)
        .fold(0.0_f64, |m, (q, o)| m.max((q - o).abs()));
    let l2_error = quadrature
        .iter()
        .zip(&spectral)
        .zip(domain.weights())
        .map(|((q, o), w)| w * (q - o).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(CrossValidation {
        n,
        order: order.value(),
        nodes: domain.nodes().iter().map(|p| p[0]).collect(),
        quadrature,
        spectral,
        max_abs_error,
        relative_max_error: max_abs_error / scale,
        l2_error,
    })
}

/// Error of the quadrature operator at successive resolutions.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub max_abs_error: f64,
    pub l2_error: f64,
    /// `log2` of the max-error ratio against the previous (coarser) row.
    pub order_estimate: Option<f64>,
}

/// Cross-validation at each size in `sizes` (each expected to double the last).
pub fn convergence_study(order: FracOrder, sizes: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let cv = cross_validate(order, n)?;
        let order_estimate = rows
            .last()
            .map(|prev| (prev.max_abs_error / cv.max_abs_error).ln() / (n as f64 / prev.n as f64).ln());
        rows.push(ConvergenceRow {
            n,
            max_abs_error: cv.max_abs_error,
            l2_error: cv.l2_error,
            order_estimate,
        });
    }
    Ok(rows)
}
