use num_complex::Complex64;

use super::laws::DiffusionProblem;
use crate::error::{check_range, Result};
use crate::fraclap::symbol;
use crate::grid::{forward_transform, inverse_transform, Field};

/// Exact spectral solution at time `t`: each mode times `e^{-rate t |k|^y}`.
pub fn evolve_fractional_diffusion(prob: &DiffusionProblem, t: f64) -> Result<Field> {
    check_range("t", t, "t >= 0", t >= 0.0)?;
    if t == 0.0 {
        return Ok(prob.initial.clone());
    }
    let (y, rate) = prob.law.exponent_and_rate();
    let spec = forward_transform(&prob.initial)?;
    let out = spec.apply_symbol(|k| Complex64::new((-rate * t * symbol(k, y)).exp(), 0.0));
    Ok(inverse_transform(&out)?.with_units(prob.initial.units()))
}
