//! Uniform periodic grids, sampled fields and their discrete Fourier spectra.
//!
//! Transforms follow the physics sign convention used throughout the crate:
//! the spatial kernel is `e^{-ikx}`, so `d/dx` maps to multiplication by
//! `ik` and the forward coefficient approximates `∫ f(x) e^{-ikx} dx`
//! (the DC coefficient is the sum of samples times the cell volume).
//! The inverse is `f(x) = (1/L^d) Σ_j F_j e^{i k_j x}`.
//!
//! Coefficients are stored in FFT order; the signed mode index of every
//! slot travels with the [`Spectrum`] so callers never have to assume a
//! layout.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::csv::{fmt_g17, Table};
use crate::error::{Error, Result};

/// Uniform periodic grid in one or two dimensions with `n` points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    dim: usize,
    n: usize,
    length: f64,
    origin: f64,
}

impl UniformGrid {
    /// One-dimensional grid on `[0, length)`.
    pub fn new_1d(n: usize, length: f64) -> Result<Self> {
        Self::build(1, n, length, 0.0)
    }

    /// One-dimensional grid on `[-length/2, length/2)`.
    pub fn centered_1d(n: usize, length: f64) -> Result<Self> {
        Self::build(1, n, length, -0.5 * length)
    }

    /// Square two-dimensional grid on `[0, length)^2`.
    pub fn new_2d(n: usize, length: f64) -> Result<Self> {
        Self::build(2, n, length, 0.0)
    }

    /// Square two-dimensional grid on `[-length/2, length/2)^2`.
    pub fn centered_2d(n: usize, length: f64) -> Result<Self> {
        Self::build(2, n, length, -0.5 * length)
    }

    /// Same grid shifted so that its first point sits at `origin`.
    pub fn with_origin(mut self, origin: f64) -> Self {
        self.origin = origin;
        self
    }

    fn build(dim: usize, n: usize, length: f64, origin: f64) -> Result<Self> {
        if !(dim == 1 || dim == 2) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{1, 2}}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "{n} points per axis; need a power of two >= 8"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidGrid(format!("length {length} must be positive")));
        }
        Ok(Self {
            dim,
            n,
            length,
            origin,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn is_periodic(&self) -> bool {
        true
    }

    /// Total number of samples (`n^d`).
    pub fn point_count(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// Cell volume `dx^d`.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Domain measure `L^d`.
    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    /// Coordinates along one axis.
    pub fn axis(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n).map(|i| self.origin + i as f64 * dx).collect()
    }

    /// Coordinates of sample `flat` (row-major, `x` slowest in 2D).
    pub fn point(&self, flat: usize) -> [f64; 2] {
        let dx = self.dx();
        match self.dim {
            1 => [self.origin + flat as f64 * dx, 0.0],
            _ => {
                let (i, j) = (flat / self.n, flat % self.n);
                [self.origin + i as f64 * dx, self.origin + j as f64 * dx]
            }
        }
    }

    /// Signed mode indices in FFT order: `0, 1, …, n/2-1, -n/2, …, -1`.
    pub fn mode_indices(&self) -> Vec<i64> {
        let n = self.n as i64;
        (0..n).map(|j| if j < n / 2 { j } else { j - n }).collect()
    }

    /// Angular wavenumbers `2πj/L` in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let dk = 2.0 * PI / self.length;
        self.mode_indices().iter().map(|&j| j as f64 * dk).collect()
    }

    /// Nyquist wavenumber `π/dx`.
    pub fn nyquist(&self) -> f64 {
        PI / self.dx()
    }
}

/// Physical units tag carried by a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    Pressure,
    #[default]
    Dimensionless,
}

/// Real samples on a [`UniformGrid`], one per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: UniformGrid,
    values: Vec<f64>,
    units: Units,
}

impl Field {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.point_count() {
            return Err(Error::SampleCount {
                expected: grid.point_count(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            grid,
            values,
            units: Units::default(),
        })
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.point_count()],
            units: Units::default(),
        }
    }

    /// Samples `f` at every grid point (`f(x, y)`, with `y = 0` in 1D).
    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = (0..grid.point_count())
            .map(|i| {
                let [x, y] = grid.point(i);
                f(x, y)
            })
            .collect();
        Self::new(grid, values)
    }

    pub fn with_units(mut self, units: Units) -> Self {
        self.units = units;
        self
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Discrete `∫ f dx`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    /// Discrete `(∫ f^2 dx)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// Largest absolute pointwise difference; errors if the grids differ.
    pub fn max_abs_diff(&self, other: &Field) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())))
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: f64, other: &Field, b: f64) -> Result<Field> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Field::new(self.grid, values).map(|f| f.with_units(self.units))
    }

    /// CSV snapshot: `x,value` in 1D, `x,y,value` in 2D.
    pub fn to_csv(&self) -> String {
        let mut table = match self.grid.dim {
            1 => Table::new(&["x", "value"]),
            _ => Table::new(&["x", "y", "value"]),
        };
        for (i, &v) in self.values.iter().enumerate() {
            let [x, y] = self.grid.point(i);
            let row = match self.grid.dim {
                1 => vec![fmt_g17(x), fmt_g17(v)],
                _ => vec![fmt_g17(x), fmt_g17(y), fmt_g17(v)],
            };
            table.push_raw(row);
        }
        table.render()
    }
}

/// Discrete Fourier coefficients of a field, with the wavenumber layout attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: UniformGrid,
    modes: Vec<i64>,
    wavenumbers: Vec<f64>,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    /// Builds a spectrum from coefficients given in FFT order.
    pub fn from_coefficients(grid: UniformGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.point_count() {
            return Err(Error::SampleCount {
                expected: grid.point_count(),
                got: coeffs.len(),
            });
        }
        if let Some(index) = coeffs
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            grid,
            modes: grid.mode_indices(),
            wavenumbers: grid.wavenumbers(),
            coeffs,
        })
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        Self {
            grid,
            modes: grid.mode_indices(),
            wavenumbers: grid.wavenumbers(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.point_count()],
        }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    /// Signed per-axis mode indices in storage order.
    pub fn modes(&self) -> &[i64] {
        &self.modes
    }

    /// Per-axis wavenumbers in storage order.
    pub fn axis_wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Wavevector of storage slot `flat` (`[k, 0]` in 1D).
    pub fn wavevector(&self, flat: usize) -> [f64; 2] {
        match self.grid.dim {
            1 => [self.wavenumbers[flat], 0.0],
            _ => {
                let n = self.grid.n;
                [self.wavenumbers[flat / n], self.wavenumbers[flat % n]]
            }
        }
    }

    /// `|k|` of storage slot `flat`.
    pub fn wavenumber_magnitude(&self, flat: usize) -> f64 {
        let [kx, ky] = self.wavevector(flat);
        kx.hypot(ky)
    }

    /// Coefficient of signed 1D mode `j` (`-n/2 <= j < n/2`).
    pub fn coefficient_of_mode(&self, j: i64) -> Option<Complex64> {
        let n = self.grid.n as i64;
        if self.grid.dim != 1 || j < -n / 2 || j >= n / 2 {
            return None;
        }
        Some(self.coeffs[j.rem_euclid(n) as usize])
    }

    /// Multiplies every coefficient by `symbol(k)`.
    pub fn apply_symbol(&self, symbol: impl Fn([f64; 2]) -> Complex64) -> Spectrum {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            *c *= symbol(self.wavevector(i));
        }
        out
    }

    /// True when the axis index is the (self-conjugate) Nyquist mode.
    pub(crate) fn is_nyquist_slot(&self, flat: usize) -> bool {
        let half = -(self.grid.n as i64) / 2;
        match self.grid.dim {
            1 => self.modes[flat] == half,
            _ => {
                let n = self.grid.n;
                self.modes[flat / n] == half || self.modes[flat % n] == half
            }
        }
    }
}

type PlanCache = HashMap<(usize, bool), Arc<dyn Fft<f64>>>;

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, PlanCache)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        let mut guard = cell.borrow_mut();
        let (planner, cache) = &mut *guard;
        cache
            .entry((n, forward))
            .or_insert_with(|| {
                let dir = if forward {
                    FftDirection::Forward
                } else {
                    FftDirection::Inverse
                };
                planner.plan_fft(n, dir)
            })
            .clone()
    })
}

/// Unnormalised in-place FFT along every axis (`e^{-2πi jm/n}` when forward).
pub(crate) fn fft_in_place(dim: usize, n: usize, buf: &mut [Complex64], forward: bool) {
    let fft = plan(n, forward);
    match dim {
        1 => fft.process(buf),
        _ => {
            // rows
            fft.process(buf);
            // columns
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for j in 0..n {
                for i in 0..n {
                    col[i] = buf[i * n + j];
                }
                fft.process(&mut col);
                for i in 0..n {
                    buf[i * n + j] = col[i];
                }
            }
        }
    }
}

/// Forward transform `F_j ≈ ∫ f(x) e^{-i k_j x} dx`.
pub fn forward_transform(f: &Field) -> Result<Spectrum> {
    if let Some(index) = f.values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let grid = f.grid;
    let mut buf: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(grid.dim, grid.n, &mut buf, true);
    let mut spec = Spectrum::zeros(grid);
    let vol = grid.cell_volume();
    for (i, c) in buf.into_iter().enumerate() {
        let [kx, ky] = spec.wavevector(i);
        let phase = Complex64::from_polar(1.0, -(kx + ky) * grid.origin);
        spec.coeffs[i] = c * phase * vol;
    }
    Ok(spec)
}

const SYMMETRY_TOL: f64 = 1e-10;

/// Inverse transform; the spectrum must be conjugate-symmetric so the field is real.
pub fn inverse_transform(s: &Spectrum) -> Result<Field> {
    let grid = s.grid;
    let n = grid.n;
    let vol = grid.cell_volume();
    // Undo the origin phase so that slot `j` and slot `-j` are plain FFT partners.
    let mut buf: Vec<Complex64> = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let [kx, ky] = s.wavevector(i);
            c * Complex64::from_polar(1.0, (kx + ky) * grid.origin) / vol
        })
        .collect();
    let scale = buf.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    if scale > 0.0 {
        let partner = |i: usize| -> usize {
            match grid.dim {
                1 => (n - i) % n,
                _ => {
                    let (a, b) = (i / n, i % n);
                    ((n - a) % n) * n + (n - b) % n
                }
            }
        };
        let asym = (0..buf.len())
            .map(|i| (buf[i] - buf[partner(i)].conj()).norm())
            .fold(0.0_f64, f64::max)
            / scale;
        if asym > SYMMETRY_TOL {
            return Err(Error::AsymmetricSpectrum { asymmetry: asym });
        }
    }
    fft_in_place(grid.dim, n, &mut buf, false);
    let norm = 1.0 / grid.point_count() as f64;
    let values = buf.iter().map(|c| c.re * norm).collect();
    Field::new(grid, values).map(|f| f.with_units(Units::default()))
}

/// Multiplies every coefficient by `(ik)^order` (1D only).
///
/// For odd orders the Nyquist slot is zeroed: its `±k` partners cancel and
/// keeping either sign would break conjugate symmetry.
pub fn derivative_spectrum(s: &Spectrum, order: u32) -> Result<Spectrum> {
    if order == 0 {
        return Err(Error::InvalidArgument("derivative order must be >= 1".into()));
    }
    if s.grid.dim != 1 {
        return Err(Error::InvalidArgument(
            "derivative_spectrum is defined for 1D spectra".into(),
        ));
    }
    let mut out = s.clone();
    for (i, c) in out.coeffs.iter_mut().enumerate() {
        if order % 2 == 1 && s.is_nyquist_slot(i) {
            *c = Complex64::new(0.0, 0.0);
            continue;
        }
        let k = s.wavenumbers[i];
        *c *= Complex64::new(0.0, k).powu(order);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(f: &Field) -> Vec<Complex64> {
        let g = f.grid();
        let x = g.axis();
        let k = g.wavenumbers();
        k.iter()
            .map(|&kj| {
                x.iter()
                    .zip(f.values())
                    .map(|(&xm, &v)| v * Complex64::from_polar(1.0, -kj * xm))
                    .sum::<Complex64>()
                    * g.dx()
            })
            .collect()
    }

    fn pseudo_random(n: usize, seed: u64) -> Vec<f64> {
        let mut s = seed;
        (0..n)
            .map(|_| {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
            })
            .collect()
    }

    #[test]
    fn grid_invariants() {
        assert!(UniformGrid::new_1d(4, 1.0).is_err());
        assert!(UniformGrid::new_1d(12, 1.0).is_err());
        assert!(UniformGrid::new_1d(16, 0.0).is_err());
        let g = UniformGrid::new_1d(64, 3.0).unwrap();
        assert_eq!(g.dx() * g.n() as f64, 3.0);
        assert!(g.is_periodic());
    }

    #[test]
    fn field_rejects_non_finite() {
        let g = UniformGrid::new_1d(8, 1.0).unwrap();
        let mut v = vec![0.0; 8];
        v[3] = f64::NAN;
        assert!(matches!(Field::new(g, v), Err(Error::NonFinite { index: 3 })));
        assert!(matches!(
            Field::new(g, vec![0.0; 7]),
            Err(Error::SampleCount { .. })
        ));
    }

    #[test]
    fn cosine_has_two_modes_of_half_length() {
        let l = 2.5;
        let g = UniformGrid::new_1d(64, l).unwrap();
        let f = Field::from_fn(g, |x, _| (2.0 * PI * x / l).cos()).unwrap();
        let s = forward_transform(&f).unwrap();
        for (i, c) in s.coefficients().iter().enumerate() {
            let j = s.modes()[i];
            if j.abs() == 1 {
                assert!((c.norm() - l / 2.0).abs() < 1e-12);
            } else {
                assert!(c.norm() < 1e-12, "mode {j}: {c}");
            }
        }
    }

    #[test]
    fn constant_field_is_dc_only() {
        let g = UniformGrid::centered_1d(32, 7.0).unwrap();
        let f = Field::from_fn(g, |_, _| 1.0).unwrap();
        let s = forward_transform(&f).unwrap();
        assert!((s.coefficient_of_mode(0).unwrap() - Complex64::new(7.0, 0.0)).norm() < 1e-12);
        let rest: f64 = s.coefficients()[1..].iter().map(|c| c.norm()).sum();
        assert!(rest < 1e-12);
    }

    #[test]
    fn matches_naive_dft() {
        for grid in [
            UniformGrid::new_1d(32, 1.7).unwrap(),
            UniformGrid::centered_1d(32, 4.0).unwrap(),
        ] {
            let f = Field::new(grid, pseudo_random(32, 7)).unwrap();
            let fast = forward_transform(&f).unwrap();
            let slow = naive_dft(&f);
            let scale = slow.iter().map(|c| c.norm()).fold(0.0, f64::max);
            for (a, b) in fast.coefficients().iter().zip(&slow) {
                assert!((a - b).norm() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn second_derivative_of_sine() {
        let g = UniformGrid::new_1d(64, 2.0 * PI).unwrap();
        let f = Field::from_fn(g, |x, _| (3.0 * x).sin()).unwrap();
        let d2 =
            inverse_transform(&derivative_spectrum(&forward_transform(&f).unwrap(), 2).unwrap()).unwrap();
        for (x, v) in g.axis().iter().zip(d2.values()) {
            assert!((v + 9.0 * (3.0 * x).sin()).abs() < 1e-11);
        }
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let g = UniformGrid::new_1d(16, 1.0).unwrap();
        let f = Field::from_fn(g, |_, _| 4.2).unwrap();
        for order in 1..4 {
            let d = inverse_transform(&derivative_spectrum(&forward_transform(&f).unwrap(), order).unwrap())
                .unwrap();
            assert!(d.max_abs() < 1e-12);
        }
        assert!(derivative_spectrum(&forward_transform(&f).unwrap(), 0).is_err());
    }

    #[test]
    fn first_derivative_converges_like_centered_difference() {
        // The finite-difference oracle is second order; its distance to the
        // spectral derivative must shrink by ~4 per halving of dx.
        let bump = |x: f64| (-(x * x) / 0.5).exp();
        let mut errs = Vec::new();
        for n in [64usize, 128, 256] {
            let g = UniformGrid::centered_1d(n, 10.0).unwrap();
            let f = Field::from_fn(g, |x, _| bump(x)).unwrap();
            let d =
                inverse_transform(&derivative_spectrum(&forward_transform(&f).unwrap(), 1).unwrap()).unwrap();
            let h = g.dx();
            let err = g
                .axis()
                .iter()
                .zip(d.values())
                .map(|(&x, &v)| ((bump(x + h) - bump(x - h)) / (2.0 * h) - v).abs())
                .fold(0.0, f64::max);
            errs.push(err);
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((order - 2.0).abs() < 0.15, "order {order}");
        }
    }

    #[test]
    fn round_trip_and_zero() {
        for n in [8usize, 64, 1024, 4096] {
            let g = UniformGrid::centered_1d(n, 3.0).unwrap();
            let f = Field::new(g, pseudo_random(n, n as u64)).unwrap();
            let back = inverse_transform(&forward_transform(&f).unwrap()).unwrap();
            assert!(back.max_abs_diff(&f).unwrap() <= 1e-12 * f.max_abs());
        }
        let g = UniformGrid::new_1d(16, 1.0).unwrap();
        let z = inverse_transform(&Spectrum::zeros(g)).unwrap();
        assert_eq!(z.max_abs(), 0.0);
    }

    #[test]
    fn two_mode_spectrum_inverts_to_cosine() {
        // F_{±2} = c  =>  f(x) = (1/L)(c e^{i k2 x} + c e^{-i k2 x}) = c (2/L) cos(4πx/L)
        let l = 3.0;
        let c = 0.7;
        let g = UniformGrid::new_1d(32, l).unwrap();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 32];
        coeffs[2] = Complex64::new(c, 0.0);
        coeffs[30] = Complex64::new(c, 0.0);
        let f = inverse_transform(&Spectrum::from_coefficients(g, coeffs).unwrap()).unwrap();
        for (x, v) in g.axis().iter().zip(f.values()) {
            assert!((v - c * (2.0 / l) * (4.0 * PI * x / l).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn asymmetric_spectrum_rejected() {
        let g = UniformGrid::new_1d(16, 1.0).unwrap();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 16];
        coeffs[3] = Complex64::new(1.0, 0.0);
        let s = Spectrum::from_coefficients(g, coeffs).unwrap();
        assert!(matches!(
            inverse_transform(&s),
            Err(Error::AsymmetricSpectrum { .. })
        ));
    }

    #[test]
    fn two_dimensional_round_trip_and_parseval() {
        let g = UniformGrid::centered_2d(16, 2.0).unwrap();
        let f = Field::new(g, pseudo_random(256, 3)).unwrap();
        let s = forward_transform(&f).unwrap();
        let back = inverse_transform(&s).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
        let lhs: f64 = f.values().iter().map(|v| v * v).sum::<f64>() * g.cell_volume();
        let rhs: f64 = s.coefficients().iter().map(|c| c.norm_sqr()).sum::<f64>() / g.volume();
        assert!((lhs - rhs).abs() <= 1e-10 * lhs);
        assert!(f.to_csv().starts_with("x,y,value\n"));
    }

    #[test]
    fn csv_snapshot() {
        let g = UniformGrid::new_1d(8, 8.0).unwrap();
        let f = Field::from_fn(g, |x, _| x * 0.5).unwrap();
        let csv = f.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,value"));
        assert_eq!(lines.next(), Some("0,0"));
        assert_eq!(lines.next(), Some("1,0.5"));
        assert_eq!(csv.lines().count(), 9);
    }
}
