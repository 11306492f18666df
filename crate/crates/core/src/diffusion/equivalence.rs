use std::f64::consts::PI;

use super::density::{stable_pdf_in, InversionWindow};
use super::evolve::evolve_fractional_diffusion;
use super::laws::{DiffusionLaw, DiffusionProblem, StableLaw};
use crate::error::{Error, Result};
use crate::grid::{Field, UniformGrid};
use crate::special::gamma;

/// Largest tail value at the box edge, relative to the peak, that the
/// periodic box tolerates.
const TAIL_FRACTION: f64 = 0.01;

/// Spectrally evolved delta against the inverted characteristic function.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenComparison {
    pub x: Vec<f64>,
    pub evolved: Vec<f64>,
    pub density: Vec<f64>,
    /// Max absolute difference over the central 80% of the box.
    pub max_abs_discrepancy: f64,
}

/// Box length at which the law's density at `±L/2` drops to
/// `TAIL_FRACTION` of its peak.
pub fn required_length(law: &StableLaw) -> f64 {
    let (y, d) = (law.index(), law.scale());
    let peak = law.peak_density();
    if y == 2.0 {
        return 2.0 * (4.0 * d * (1.0 / TAIL_FRACTION).ln()).sqrt();
    }
    let a1 = d * gamma(1.0 + y) * (0.5 * PI * y).sin() / PI;
    2.0 * (a1 / (TAIL_FRACTION * peak)).powf(1.0 / (1.0 + y))
}

/// Evolve a discrete delta (height `1/Δx` at the centre of a centred 1D
/// grid) so its spectrum becomes `e^{-D|k|^y}`, then compare against the
/// stable density.
pub fn green_function_equivalence(law: &StableLaw, grid: UniformGrid) -> Result<GreenComparison> {
    if grid.dim() != 1 {
        return Err(Error::InvalidGrid("green-function comparison is 1D".into()));
    }
    let required = required_length(law);
    if grid.length() < required {
        return Err(Error::DomainTooSmall {
            length: grid.length(),
            required,
        });
    }
    let axis = grid.axis();
    let centre = axis
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    if axis[centre].abs() > 1e-12 * grid.length() {
        return Err(Error::InvalidGrid("grid has no node at x = 0".into()));
    }
    let mut delta = vec![0.0; grid.point_count()];
    delta[centre] = 1.0 / grid.dx();
    let problem = DiffusionProblem::new(
        Field::new(grid, delta)?,
        DiffusionLaw::Fractional {
            zeta: law.scale(),
            y: law.index(),
        },
    )?;
    let evolved = evolve_fractional_diffusion(&problem, 1.0)?.into_values();

    let half = 0.5 * grid.length();
    let window = InversionWindow {
        half_width: half,
        period_factor: 100.0,
    };
    let density = stable_pdf_in(law, &axis, window)?;
    let max_abs_discrepancy = axis
        .iter()
        .zip(evolved.iter().zip(&density))
        .filter(|(x, _)| x.abs() <= 0.8 * half)
        .map(|(_, (e, d))| (e - d).abs())
        .fold(0.0, f64::max);
    Ok(GreenComparison {
        x: axis,
        evolved,
        density,
        max_abs_discrepancy,
    })
}
