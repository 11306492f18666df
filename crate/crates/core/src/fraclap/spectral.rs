use num_complex::Complex64;

use crate::error::{check_range, Result};
use crate::grid::{forward_transform, inverse_transform, Field};

/// Order `s` of `(-Δ)^{s/2}`, restricted to `0 < s <= 2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(s: f64) -> Result<Self> {
        check_range("s", s, "0 < s <= 2", s > 0.0 && s <= 2.0)?;
        Ok(Self(s))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Fourier symbol `|k|^s`; `s = 2` is evaluated as the exact `k·k`.
pub(crate) fn symbol(k: [f64; 2], s: f64) -> f64 {
    let k2 = k[0] * k[0] + k[1] * k[1];
    if s == 2.0 {
        k2
    } else if k2 == 0.0 {
        0.0
    } else {
        k2.powf(0.5 * s)
    }
}

/// `(-Δ)^{s/2} f` on a periodic grid: multiply each mode by `|k|^s`.
///
/// The DC mode is annihilated for every admitted `s`.
pub fn spectral_fraclap(f: &Field, order: FracOrder) -> Result<Field> {
    let s = order.value();
    let spec = forward_transform(f)?;
    let out = spec.apply_symbol(|k| Complex64::new(symbol(k, s), 0.0));
    Ok(inverse_transform(&out)?.with_units(f.units()))
}
