//! Axisymmetric parabolic beam equation in retarded time `τ = t - z/c0`:
//!
//! `∂²p/∂z∂τ = (c0/2) Δ⊥p - α0 c0^y ∂τ (-∂zz)^{y/2} p + (B/ρ0c0³) ∂τ(p²/2)`.
//!
//! The state is held as `τ`-Fourier coefficients on each radial node. The
//! loss is realised per frequency as `e^{-α0|ω|^y dz}` (travelling-wave
//! substitution `k = ω/c0`). One step of length `dz` is
//! `D/2 A/2 N A/2 D/2`: Crank–Nicolson diffraction, exact absorption, and
//! RK4 on the integrated nonlinearity `∂p/∂z = (B/ρ0c0³) ∂τ(p²/2)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::line::PeriodicLine;
use super::medium::NonlinearMedium;
use crate::csv::Table;
use crate::error::{check_range, Error, Result};
use crate::fraclap::symbol;
use crate::special::bessel_j0;

/// Default abort threshold of the spectral-tail monitor.
const TAIL_THRESHOLD: f64 = 1e-8;

/// Periodic retarded-time axis times a radial axis `r_j = j Δr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGrid {
    n_tau: usize,
    period: f64,
    nr: usize,
    dr: f64,
}

impl BeamGrid {
    /// `n_tau` samples over one `τ` period (centred on `τ = 0`) and `nr`
    /// radial nodes covering `[0, r_max)`.
    pub fn new(n_tau: usize, period: f64, nr: usize, r_max: f64) -> Result<Self> {
        if n_tau < 8 || !n_tau.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "n_tau = {n_tau}; need an even count >= 8"
            )));
        }
        if nr < 4 {
            return Err(Error::InvalidGrid(format!("nr = {nr}; need at least 4")));
        }
        check_range("period", period, "period > 0", period > 0.0)?;
        check_range("r_max", r_max, "r_max > 0", r_max > 0.0)?;
        Ok(Self {
            n_tau,
            period,
            nr,
            dr: r_max / nr as f64,
        })
    }

    pub fn n_tau(&self) -> usize {
        self.n_tau
    }

    pub fn nr(&self) -> usize {
        self.nr
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn tau(&self) -> Vec<f64> {
        let h = self.period / self.n_tau as f64;
        (0..self.n_tau)
            .map(|i| -0.5 * self.period + i as f64 * h)
            .collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.nr).map(|j| j as f64 * self.dr).collect()
    }

    /// Angular frequencies in FFT order.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.n_tau as i64;
        (0..n)
            .map(|m| {
                let s = if m < n / 2 { m } else { m - n };
                2.0 * PI * s as f64 / self.period
            })
            .collect()
    }
}

/// Thomas-factored Crank–Nicolson system for one frequency.
#[derive(Debug, Clone)]
struct RadialSystem {
    /// Explicit half: `(I + h κ L / 2)` as (lower, diag, upper).
    rhs: Vec<[Complex64; 3]>,
    /// Forward-eliminated upper coefficients and inverse pivots.
    upper: Vec<Complex64>,
    inv_pivot: Vec<Complex64>,
    lower: Vec<Complex64>,
}

/// Radial Laplacian `∂rr + (1/r)∂r` rows: regular at `r = 0` through the
/// mirror ghost, zero slope at the outer edge.
fn radial_laplacian(nr: usize, dr: f64) -> Vec<[f64; 3]> {
    let s = 1.0 / (dr * dr);
    (0..nr)
        .map(|j| {
            if j == 0 {
                [0.0, -4.0 * s, 4.0 * s]
            } else if j == nr - 1 {
                [2.0 * s, -2.0 * s, 0.0]
            } else {
                let c = 0.5 / j as f64;
                [(1.0 - c) * s, -2.0 * s, (1.0 + c) * s]
            }
        })
        .collect()
}

impl RadialSystem {
    fn new(lap: &[[f64; 3]], kappa: Complex64) -> Self {
        let nr = lap.len();
        let half = 0.5 * kappa;
        let rhs: Vec<[Complex64; 3]> = lap
            .iter()
            .map(|[l, d, u]| [half * l, 1.0 + half * d, half * u])
            .collect();
        let a: Vec<[Complex64; 3]> = lap
            .iter()
            .map(|[l, d, u]| [-half * l, 1.0 - half * d, -half * u])
            .collect();
        let mut upper = vec![Complex64::new(0.0, 0.0); nr];
        let mut inv_pivot = vec![Complex64::new(0.0, 0.0); nr];
        let lower: Vec<Complex64> = a.iter().map(|r| r[0]).collect();
        for j in 0..nr {
            let pivot = if j == 0 {
                a[0][1]
            } else {
                a[j][1] - a[j][0] * upper[j - 1]
            };
            inv_pivot[j] = 1.0 / pivot;
            upper[j] = a[j][2] * inv_pivot[j];
        }
        Self {
            rhs,
            upper,
            inv_pivot,
            lower,
        }
    }

    fn solve(&self, x: &mut [Complex64]) {
        let nr = x.len();
        let b: Vec<Complex64> = (0..nr)
            .map(|j| {
                let [l, d, u] = self.rhs[j];
                let mut v = d * x[j];
                if j > 0 {
                    v += l * x[j - 1];
                }
                if j + 1 < nr {
                    v += u * x[j + 1];
                }
                v
            })
            .collect();
        let mut prev = Complex64::new(0.0, 0.0);
        for j in 0..nr {
            let v = if j == 0 { b[0] } else { b[j] - self.lower[j] * prev };
            prev = v * self.inv_pivot[j];
            x[j] = prev;
        }
        for j in (0..nr - 1).rev() {
            x[j] -= self.upper[j] * x[j + 1];
        }
    }
}

/// Beam pressure on the `(τ, r)` grid at axial position `z`.
#[derive(Debug, Clone)]
pub struct BeamState {
    grid: BeamGrid,
    medium: NonlinearMedium,
    line: PeriodicLine,
    /// Row `j` holds the unnormalised `τ`-FFT at radius `r_j`.
    coeffs: Vec<Complex64>,
    z: f64,
    steps: usize,
    tail_threshold: f64,
    diffraction: Option<(f64, Vec<Option<RadialSystem>>)>,
}

impl BeamState {
    /// Source plane `p(τ, r)` at `z = 0`. `source_radius` is the
    /// characteristic transverse size used for the validity checks: at
    /// least 8 radial nodes across it, and a radius-to-wavelength ratio
    /// above 0.1 at the dominant frequency. Every radial row must have zero
    /// `τ`-mean.
    pub fn new(
        grid: BeamGrid,
        medium: NonlinearMedium,
        source_radius: f64,
        source: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        check_range("source radius", source_radius, "radius > 0", source_radius > 0.0)?;
        if source_radius / grid.dr < 8.0 {
            return Err(Error::UnderResolved(format!(
                "{:.2} radial nodes across the source radius; need at least 8",
                source_radius / grid.dr
            )));
        }
        let line = PeriodicLine::new(grid.n_tau, grid.period);
        let tau = grid.tau();
        let n = grid.n_tau;
        let mut coeffs = Vec::with_capacity(n * grid.nr);
        for (j, r) in grid.radii().into_iter().enumerate() {
            let row: Vec<f64> = tau.iter().map(|&t| source(t, r)).collect();
            if let Some(i) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { index: j * n + i });
            }
            let peak = row.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let mean = row.iter().sum::<f64>() / n as f64;
            if mean.abs() > 1e-12 * peak.max(f64::MIN_POSITIVE) {
                return Err(Error::InvalidArgument(format!(
                    "source row at r = {r} has non-zero tau-mean {mean:.3e}"
                )));
            }
            let mut c = line.forward(&row);
            c[0] = Complex64::new(0.0, 0.0);
            coeffs.extend(c);
        }
        let state = Self {
            grid,
            medium,
            line,
            coeffs,
            z: 0.0,
            steps: 0,
            tail_threshold: TAIL_THRESHOLD,
            diffraction: None,
        };
        let omega = state.dominant_frequency();
        if omega > 0.0 {
            let lambda = 2.0 * PI * medium.base().c0() / omega;
            if source_radius / lambda <= 0.1 {
                return Err(Error::InvalidArgument(format!(
                    "source radius / wavelength = {:.4} is not above 0.1; the paraxial model does not apply",
                    source_radius / lambda
                )));
            }
        }
        Ok(state)
    }

    /// Frequency carrying the largest coefficient anywhere on the grid.
    fn dominant_frequency(&self) -> f64 {
        let n = self.grid.n_tau;
        let w = self.grid.frequencies();
        let (mut best, mut arg) = (0.0, 0.0);
        for row in self.coeffs.chunks(n) {
            for (m, c) in row.iter().enumerate().take(n / 2).skip(1) {
                if c.norm() > best {
                    best = c.norm();
                    arg = w[m];
                }
            }
        }
        arg
    }

    pub fn grid(&self) -> &BeamGrid {
        &self.grid
    }

    pub fn medium(&self) -> &NonlinearMedium {
        &self.medium
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Abort level of the ratio (peak coefficient above a quarter of the
    /// sampling rate) / (overall peak). Only checked while `B ≠ 0`.
    pub fn set_tail_threshold(&mut self, threshold: f64) {
        self.tail_threshold = threshold;
    }

    /// Pressure row at radial node `j`, sampled on [`BeamGrid::tau`].
    pub fn row(&self, j: usize) -> Vec<f64> {
        let n = self.grid.n_tau;
        self.line.inverse(&self.coeffs[j * n..(j + 1) * n])
    }

    /// Complex amplitudes `2 C_m / n` of `e^{iω_m τ}` at radial node `j`,
    /// for `m = 0..n/2`.
    pub fn harmonics(&self, j: usize) -> Vec<Complex64> {
        let n = self.grid.n_tau;
        self.coeffs[j * n..j * n + n / 2]
            .iter()
            .map(|c| c * (2.0 / n as f64))
            .collect()
    }

    /// `tau,r,value` table of the whole state.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["tau", "r", "value"]);
        let tau = self.grid.tau();
        for (j, r) in self.grid.radii().into_iter().enumerate() {
            for (ti, v) in tau.iter().zip(self.row(j)) {
                t.push_numbers(&[*ti, r, v]);
            }
        }
        t
    }

    /// `2 / (|B/ρ0c0³| max|p| ω_c)` with `ω_c` the dealiasing cutoff;
    /// unbounded in the linear case.
    pub fn max_stable_dz(&self) -> f64 {
        let coef = self.medium.beam_coefficient().abs();
        if coef == 0.0 {
            return f64::INFINITY;
        }
        let peak = (0..self.grid.nr)
            .map(|j| self.row(j).iter().fold(0.0_f64, |m, v| m.max(v.abs())))
            .fold(0.0_f64, f64::max);
        if peak == 0.0 {
            f64::INFINITY
        } else {
            2.0 / (coef * peak * self.line.cutoff())
        }
    }

    fn absorb(&mut self, dz: f64) {
        let m = *self.medium.base();
        if m.alpha0() == 0.0 {
            return;
        }
        let n = self.grid.n_tau;
        let factors: Vec<f64> = self
            .grid
            .frequencies()
            .iter()
            .map(|&w| (-m.alpha0() * symbol([w, 0.0], m.y()) * dz).exp())
            .collect();
        for row in self.coeffs.chunks_mut(n) {
            row.iter_mut().zip(&factors).for_each(|(c, f)| *c *= f);
        }
    }

    fn diffract(&mut self, h: f64) {
        let (n, nr) = (self.grid.n_tau, self.grid.nr);
        if self.diffraction.as_ref().map(|(s, _)| *s) != Some(h) {
            let lap = radial_laplacian(nr, self.grid.dr);
            let c0 = self.medium.base().c0();
            let systems = self
                .grid
                .frequencies()
                .par_iter()
                .map(|&w| {
                    (w != 0.0).then(|| RadialSystem::new(&lap, Complex64::new(0.0, -c0 * h / (2.0 * w))))
                })
                .collect();
            self.diffraction = Some((h, systems));
        }
        let systems = &self.diffraction.as_ref().expect("filled").1;
        let coeffs = &self.coeffs;
        let columns: Vec<Option<Vec<Complex64>>> = systems
            .par_iter()
            .enumerate()
            .map(|(m, sys)| {
                sys.as_ref().map(|s| {
                    let mut col: Vec<Complex64> = (0..nr).map(|j| coeffs[j * n + m]).collect();
                    s.solve(&mut col);
                    col
                })
            })
            .collect();
        for (m, col) in columns.into_iter().enumerate() {
            if let Some(col) = col {
                for (j, v) in col.into_iter().enumerate() {
                    self.coeffs[j * n + m] = v;
                }
            }
        }
    }

    fn nonlinear(&mut self, dz: f64) {
        let coef = self.medium.beam_coefficient();
        if coef == 0.0 {
            return;
        }
        let line = &self.line;
        self.coeffs
            .par_chunks_mut(self.grid.n_tau)
            .for_each(|row| line.rk4_flux(row, coef, dz));
    }

    fn check(&self) -> Result<()> {
        if self
            .coeffs
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NumericalBlowup { step: self.steps });
        }
        if self.medium.beam_coefficient() != 0.0 {
            let n = self.grid.n_tau;
            let peak = self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
            let tail = self
                .coeffs
                .chunks(n)
                .map(|row| self.line.tail_ratio(row) * row.iter().fold(0.0_f64, |m, c| m.max(c.norm())))
                .fold(0.0_f64, f64::max);
            let ratio = if peak > 0.0 { tail / peak } else { 0.0 };
            if ratio > self.tail_threshold {
                return Err(Error::SpectralTail {
                    step: self.steps,
                    ratio,
                });
            }
        }
        Ok(())
    }

    fn check_dz(&self, dz: f64) -> Result<()> {
        let bound = self.max_stable_dz();
        if !(dz > 0.0) || dz > bound {
            return Err(Error::UnstableStep { dt: dz, bound });
        }
        Ok(())
    }

    /// One full split step of length `dz`.
    pub fn step(&mut self, dz: f64) -> Result<()> {
        self.check_dz(dz)?;
        self.diffract(0.5 * dz);
        self.absorb(0.5 * dz);
        self.nonlinear(dz);
        self.absorb(0.5 * dz);
        self.diffract(0.5 * dz);
        self.z += dz;
        self.steps += 1;
        self.check()
    }

    /// `steps` equal steps of `dz`.
    pub fn advance(&mut self, dz: f64, steps: usize) -> Result<()> {
        (0..steps).try_for_each(|_| self.step(dz))
    }
}

/// Absorption alone over `dz`: each `τ`-mode times `e^{-α0|ω|^y dz}`.
pub fn parabolic_loss_step(mut state: BeamState, dz: f64) -> Result<BeamState> {
    check_range("dz", dz, "dz > 0", dz > 0.0)?;
    state.absorb(dz);
    state.z += dz;
    Ok(state)
}

/// One split step of the full beam equation.
pub fn kzk_step(mut state: BeamState, dz: f64) -> Result<BeamState> {
    state.step(dz)?;
    Ok(state)
}

/// Free-space field of the time-harmonic source `e^{-r²/a²}` at wavenumber
/// `k`, by the exact angular spectrum written as a Hankel integral:
/// `p(r, z) = ∫ (a²/2) e^{-κ²a²/4} J0(κr) e^{i(k - k_z)z} κ dκ`,
/// `k_z = √(k² - κ²)` (decaying for `κ > k`). The phase is relative to the
/// carrier `e^{i(ωt - kz)}`.
pub fn gaussian_beam_reference(radius: f64, k: f64, z: f64, rs: &[f64]) -> Result<Vec<Complex64>> {
    check_range("radius", radius, "radius > 0", radius > 0.0)?;
    check_range("k", k, "k > 0", k > 0.0)?;
    check_range("z", z, "z >= 0", z >= 0.0)?;
    // The spectrum e^{-κ²a²/4} is below 1e-30 beyond κ = 16.6/a.
    let kappa_max = 17.0 / radius;
    let r_max = rs.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    // Resolve both the J0 oscillation and the propagation phase.
    let phase_rate = z * kappa_max / (k * k - kappa_max * kappa_max).max(k * k * 1e-6).sqrt();
    let rate = r_max.max(radius) + phase_rate;
    let nodes = ((kappa_max * rate * 4.0).ceil() as usize).max(2000) | 1;
    let (gx, gw) = crate::special::gauss_legendre(16);
    let panels = nodes / 16 + 1;
    let hk = kappa_max / panels as f64;
    let a2 = radius * radius;
    Ok(rs
        .iter()
        .map(|&r| {
            let mut acc = Complex64::new(0.0, 0.0);
            for p in 0..panels {
                let mid = (p as f64 + 0.5) * hk;
                for (x, w) in gx.iter().zip(&gw) {
                    let kap = mid + 0.5 * hk * x;
                    let d2 = k * k - kap * kap;
                    let prop = if d2 >= 0.0 {
                        Complex64::from_polar(1.0, (k - d2.sqrt()) * z)
                    } else {
                        Complex64::from_polar((-(-d2).sqrt() * z).exp(), k * z)
                    };
                    let amp = 0.5 * a2 * (-0.25 * kap * kap * a2).exp() * bessel_j0(kap * r) * kap;
                    acc += prop * (amp * w * 0.5 * hk);
                }
            }
            acc
        })
        .collect())
}

/// Second-moment beam width `√(2 ∫|p|² r³ dr / ∫|p|² r dr)`, equal to `w`
/// for a Gaussian `e^{-r²/w²}`; trapezoid rule on the given nodes.
pub fn beam_width(rs: &[f64], amplitude: &[f64]) -> f64 {
    let (mut m0, mut m2) = (0.0, 0.0);
    for i in 1..rs.len() {
        let h = rs[i] - rs[i - 1];
        let f = |j: usize| amplitude[j] * amplitude[j] * rs[j];
        m0 += 0.5 * h * (f(i) + f(i - 1));
        m2 += 0.5 * h * (f(i) * rs[i] * rs[i] + f(i - 1) * rs[i - 1] * rs[i - 1]);
    }
    (2.0 * m2 / m0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Field, UniformGrid};
    use crate::linear_wave::Medium;
    use crate::nonlinear::burgers::BurgersSolver;

    fn medium(alpha0: f64, y: f64, b: f64) -> NonlinearMedium {
        NonlinearMedium::new(Medium::new(1.0, alpha0, y).unwrap(), 0.0, 1.0, b, 0.0).unwrap()
    }

    #[test]
    fn reference_matches_paraxial_gaussian_beam() {
        // For ka ≫ 1 the exact angular spectrum approaches the paraxial
        // Gaussian beam e^{-r²/(a² q)} / q, q = 1 - i z/z_R, up to O(1/(ka)²).
        let (a, k) = (1.0, 60.0);
        let zr = 0.5 * k * a * a;
        let rs = [0.0, 0.5, 1.0, 1.5];
        let got = gaussian_beam_reference(a, k, zr, &rs).unwrap();
        for (r, g) in rs.iter().zip(&got) {
            let q = Complex64::new(1.0, -1.0);
            let want = (-(r * r) / (a * a) / q).exp() / q;
            assert!((g - want).norm() < 2e-3, "r={r}: {g} vs {want}");
        }
        let at_source = gaussian_beam_reference(a, k, 0.0, &[0.0, 1.0]).unwrap();
        assert!((at_source[0].re - 1.0).abs() < 1e-12 && (at_source[1].re - (-1.0_f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn width_of_gaussian() {
        let rs: Vec<f64> = (0..2000).map(|j| j as f64 * 0.005).collect();
        let amp: Vec<f64> = rs.iter().map(|r| (-(r * r) / 1.69).exp()).collect();
        assert!((beam_width(&rs, &amp) - 1.3).abs() < 1e-5);
    }

    #[test]
    fn uniform_field_follows_plane_wave_burgers() {
        // Transverse-uniform data: diffraction vanishes identically and the
        // march reduces to retarded-time Burgers with loss α0|ω|^y.
        let (n, period) = (64, 2.0 * PI);
        let (alpha0, y, b) = (0.02, 1.5, 1.0);
        let grid = BeamGrid::new(n, period, 16, 1.0).unwrap();
        let m = medium(alpha0, y, b);
        let mut beam = BeamState::new(grid, m, 1.0, |t, _| 0.3 * t.sin()).unwrap();
        // ∂z p = C ∂τ(p²/2) is Burgers with β = -C; loss 2a0' c0'^{1+y} = α0
        // at c0' = 1.
        let line = UniformGrid::centered_1d(n, period).unwrap();
        let p0 = Field::from_fn(line, |t, _| 0.3 * t.sin()).unwrap();
        let bm = NonlinearMedium::new(Medium::new(1.0, 0.5 * alpha0, y).unwrap(), -b, 1.0, 0.0, 0.0).unwrap();
        let mut burgers = BurgersSolver::new(&p0, bm).unwrap();
        let dz = 0.02;
        beam.set_tail_threshold(1.0);
        for _ in 0..200 {
            beam.step(dz).unwrap();
            burgers.step(dz).unwrap();
        }
        let reference = burgers.pressure();
        for j in [0, 7, 15] {
            let row = beam.row(j);
            for (a, b) in row.iter().zip(reference.values()) {
                assert!((a - b).abs() < 1e-8, "row {j}");
            }
        }
    }

    #[test]
    fn absorption_is_exact_per_mode() {
        let grid = BeamGrid::new(64, 2.0 * PI, 64, 4.0).unwrap();
        let m = medium(0.03, 1.2, 0.0);
        let src = |t: f64, r: f64| (-r * r).exp() * (t.sin() + 0.5 * (5.0 * t).cos());
        let s = BeamState::new(grid, m, 1.0, src).unwrap();
        let before = s.harmonics(0);
        let after = parabolic_loss_step(s, 2.5).unwrap();
        assert_eq!(after.z(), 2.5);
        let h = after.harmonics(0);
        for w in [1usize, 5] {
            let expected = (-0.03 * (w as f64).powf(1.2) * 2.5).exp();
            assert!((h[w].norm() / before[w].norm() - expected).abs() < 1e-12);
        }
        let lossless = BeamState::new(grid, medium(0.0, 1.2, 0.0), 1.0, src).unwrap();
        let same = parabolic_loss_step(lossless.clone(), 1.0).unwrap();
        assert_eq!(same.coeffs, lossless.coeffs);
    }

    #[test]
    fn validity_checks() {
        let grid = BeamGrid::new(64, 2.0 * PI, 16, 4.0).unwrap();
        let m = medium(0.0, 1.0, 0.0);
        // Wavelength 2π at ω = 1: radius 0.5 is below a tenth of it.
        assert!(matches!(
            BeamState::new(grid, m, 0.5, |t, r| (-r * r).exp() * t.sin()),
            Err(Error::UnderResolved(_))
        ));
        let fine = BeamGrid::new(64, 2.0 * PI, 64, 4.0).unwrap();
        assert!(matches!(
            BeamState::new(fine, m, 0.6, |t, r| (-r * r).exp() * t.sin()),
            Err(Error::InvalidArgument(_))
        ));
        assert!(BeamState::new(grid, m, 1.0, |t, _| 1.0 + t.sin()).is_err());
    }

    #[test]
    fn tail_monitor_stops_steepening() {
        let grid = BeamGrid::new(64, 2.0 * PI, 8, 8.0).unwrap();
        let mut s = BeamState::new(grid, medium(0.0, 1.0, 1.0), 8.0, |t, _| t.sin()).unwrap();
        let dz = 0.5 * s.max_stable_dz();
        let err = s.advance(dz, 10_000).unwrap_err();
        assert!(matches!(err, Error::SpectralTail { .. }), "{err}");
        assert!(s.z() < 1.0);
    }
}
