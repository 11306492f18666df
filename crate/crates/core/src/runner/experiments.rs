//! One function per experiment kind: config in, tables and checks out.

use std::f64::consts::PI;

use super::config::{ExperimentConfig, ExperimentKind};
use crate::csv::Table;
use crate::diffusion::{
    cauchy_pdf, gaussian_green, green_function_equivalence, stability_check, stability_check_scaled,
    stable_pdf, DiffusionLaw, StableLaw,
};
use crate::fraclap::{convergence_study, cross_validate, FracOrder};
use crate::grid::{Field, UniformGrid};
use crate::linear_wave::{
    dispersion_roots, estimate_power_exponent, log_spaced, measure_attenuation_with, smallness_ratio,
    AttenuationSettings, Medium,
};
use crate::nonlinear::{
    beam_width, cole_hopf_gaussian, gaussian_beam_reference, measure_fundamental_attenuation, BeamGrid,
    BeamState, BurgersSolver, NonlinearMedium, MACH_LIMIT,
};
use crate::Result;

/// How a table should be drawn by its gnuplot script.
#[derive(Debug, Clone, PartialEq)]
pub enum PlotStyle {
    /// Every column after the first against the first.
    Lines { logscale: bool },
    /// Third column over the plane of the first two.
    Surface,
}

#[derive(Debug, Clone)]
pub struct NamedTable {
    pub stem: String,
    pub table: Table,
    pub style: PlotStyle,
}

/// Outcome of one built-in check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Everything an experiment produces before it touches the filesystem.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub tables: Vec<NamedTable>,
    pub checks: Vec<CheckOutcome>,
    pub warnings: Vec<String>,
    /// Extra `key = value` lines for the metadata sidecar.
    pub meta: Vec<(String, String)>,
}

impl Outcome {
    fn table(&mut self, stem: impl Into<String>, table: Table, style: PlotStyle) {
        self.tables.push(NamedTable {
            stem: stem.into(),
            table,
            style,
        });
    }

    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }
}

const LINES: PlotStyle = PlotStyle::Lines { logscale: false };
const LOGLOG: PlotStyle = PlotStyle::Lines { logscale: true };

pub fn compute(cfg: &ExperimentConfig) -> Result<Outcome> {
    match cfg.kind {
        ExperimentKind::Dispersion => dispersion(cfg),
        ExperimentKind::AttenuationSweep => attenuation_sweep(cfg),
        ExperimentKind::FraclapCompare => fraclap_compare(cfg),
        ExperimentKind::LevyCheck => levy_check(cfg),
        ExperimentKind::StableDensity => stable_density(cfg),
        ExperimentKind::Burgers => burgers(cfg),
        ExperimentKind::Kzk => kzk(cfg),
        ExperimentKind::Westervelt => westervelt(cfg),
        ExperimentKind::Diffusion => diffusion(cfg),
    }
}

fn medium(cfg: &ExperimentConfig) -> Result<Medium> {
    Medium::new(
        cfg.float("medium.c0"),
        cfg.float("medium.alpha0"),
        cfg.float("medium.y"),
    )
}

fn sweep_omegas(cfg: &ExperimentConfig) -> Vec<f64> {
    log_spaced(
        cfg.float("sweep.omega_min"),
        cfg.float("sweep.omega_max"),
        cfg.int("sweep.points"),
    )
}

fn dispersion(cfg: &ExperimentConfig) -> Result<Outcome> {
    let m = medium(cfg)?;
    let tol = cfg.float("check.phase_tolerance");
    let small = cfg.float("check.smallness_max");
    let mut t = Table::new(&[
        "omega",
        "re_k",
        "im_k",
        "alpha_power_law",
        "phase_speed",
        "phase_error",
        "smallness_ratio",
    ]);
    t.comment("complex wavenumber k = re_k + i im_k solving the fractional-loss dispersion relation");
    t.comment("alpha_power_law: alpha0 omega^y");
    t.comment("phase_error: |re_k - omega/c0| / (omega/c0)");
    let (mut worst, mut tested, mut skipped) = (0.0_f64, 0, 0);
    for w in sweep_omegas(cfg) {
        let root = dispersion_roots(w, &m)?;
        let k0 = w / m.c0();
        let err = (root.beta - k0).abs() / k0;
        let ratio = smallness_ratio(w, &m);
        if ratio <= small {
            worst = worst.max(err);
            tested += 1;
        } else {
            skipped += 1;
        }
        t.push_numbers(&[
            w,
            root.beta,
            root.alpha,
            m.power_law_attenuation(w),
            root.phase_speed,
            err,
            ratio,
        ]);
    }
    let mut out = Outcome::default();
    if skipped > 0 {
        out.warnings.push(format!(
            "{skipped} frequencies exceed smallness ratio {small} and are excluded from the phase check"
        ));
    }
    out.check(
        "phase speed",
        tested > 0 && worst <= tol,
        format!("max phase error {worst:.3e} over {tested} points (tolerance {tol})"),
    );
    out.table("dispersion", t, LINES);
    Ok(out)
}

fn attenuation_sweep(cfg: &ExperimentConfig) -> Result<Outcome> {
    let m = medium(cfg)?;
    let settings = AttenuationSettings {
        points_per_wavelength: cfg.int("numerics.points_per_wavelength"),
        periods: cfg.float("numerics.periods"),
        ..Default::default()
    };
    let omegas = sweep_omegas(cfg);
    let samples = measure_attenuation_with(&m, &omegas, &settings)?;
    let pairs: Vec<(f64, f64)> = samples.iter().map(|s| (s.omega, s.alpha)).collect();
    let fit = estimate_power_exponent(&pairs)?;

    let mut t = Table::new(&[
        "omega",
        "alpha_measured",
        "alpha_power_law",
        "alpha_dispersion",
        "r_squared",
    ]);
    t.comment("alpha_measured: spatial decay rate of a simulated steady tone");
    t.comment("alpha_power_law: alpha0 omega^y");
    t.comment("alpha_dispersion: imaginary part of the dispersion root");
    t.comment(format!("fitted alpha0 = {}, fitted y = {}", fit.alpha0, fit.y));
    for s in &samples {
        t.push_numbers(&[
            s.omega,
            s.alpha,
            m.power_law_attenuation(s.omega),
            dispersion_roots(s.omega, &m)?.alpha,
            s.r_squared,
        ]);
    }
    let mut out = Outcome::default();
    let (ty, ta) = (
        cfg.float("check.y_tolerance"),
        cfg.float("check.alpha0_tolerance"),
    );
    let dy = (fit.y - m.y()).abs();
    let da = (fit.alpha0 - m.alpha0()).abs() / m.alpha0();
    out.check(
        "fitted exponent",
        dy <= ty,
        format!("y = {:.6} vs {} (|error| {dy:.3e}, tolerance {ty})", fit.y, m.y()),
    );
    out.check(
        "fitted prefactor",
        da <= ta,
        format!(
            "alpha0 = {:.6e} vs {:e} (relative error {da:.3e}, tolerance {ta})",
            fit.alpha0,
            m.alpha0()
        ),
    );
    out.meta("points_per_wavelength", settings.points_per_wavelength);
    out.meta("fitted_y", fit.y);
    out.meta("fitted_alpha0", fit.alpha0);
    out.table("attenuation", t, LOGLOG);
    Ok(out)
}

fn fraclap_compare(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = cfg.float("operator.order");
    let order = FracOrder::new(s)?;
    let sizes = cfg.int_list("operator.sizes");
    let rows = convergence_study(order, &sizes)?;
    let mut t = Table::new(&["s", "n", "max_abs_error", "l2_error", "order_estimate"]);
    t.comment("quadrature fractional Laplacian of a compact bump against its Fourier-symbol counterpart");
    t.comment("order_estimate: log ratio of successive max errors over log ratio of node counts");
    for r in &rows {
        let est = r.order_estimate.map(crate::csv::fmt_g17).unwrap_or_default();
        t.push_raw(vec![
            crate::csv::fmt_g17(s),
            r.n.to_string(),
            crate::csv::fmt_g17(r.max_abs_error),
            crate::csv::fmt_g17(r.l2_error),
            est,
        ]);
    }
    let finest = *sizes.last().expect("validated non-empty");
    let cv = cross_validate(order, finest)?;
    let mut profile = Table::new(&["x", "quadrature", "spectral"]);
    profile.comment(format!("both operators on the bump at n = {finest}, s = {s}"));
    for ((x, q), o) in cv.nodes.iter().zip(&cv.quadrature).zip(&cv.spectral) {
        profile.push_numbers(&[*x, *q, *o]);
    }

    let mut out = Outcome::default();
    let tol = cfg.float("check.max_relative_error");
    out.check(
        "quadrature matches spectral",
        cv.relative_max_error <= tol,
        format!(
            "relative max error {:.3e} at n = {finest} (tolerance {tol})",
            cv.relative_max_error
        ),
    );
    let orders: Vec<f64> = rows.iter().filter_map(|r| r.order_estimate).collect();
    if !orders.is_empty() {
        let min_order = cfg.float("check.min_order");
        let worst = orders.iter().copied().fold(f64::INFINITY, f64::min);
        out.check(
            "convergence order",
            worst >= min_order,
            format!("smallest observed order {worst:.3} (required {min_order})"),
        );
    }
    out.table("convergence", t, LINES);
    out.table("profile", profile, LINES);
    Ok(out)
}

/// Offset added to `1/y` for the mis-scaled control.
const CONTROL_EXPONENT_SHIFT: f64 = 0.25;

fn levy_check(cfg: &ExperimentConfig) -> Result<Outcome> {
    let law = StableLaw::new(cfg.float("law.y"), cfg.float("law.scale"))?;
    let draws = cfg.int("sampling.draws");
    let mut t = Table::new(&[
        "n_sum",
        "exponent",
        "control",
        "ks_statistic",
        "ks_critical",
        "passed",
    ]);
    t.comment("sums of n_sum stable draws divided by n_sum^exponent, tested against fresh draws");
    t.comment("ks_critical: 1% critical value of the two-sample Kolmogorov-Smirnov statistic");
    t.comment(format!(
        "control rows use exponent 1/y + {CONTROL_EXPONENT_SHIFT} and should fail"
    ));
    let mut out = Outcome::default();
    for (i, n_sum) in cfg.int_list("sampling.n_sum").into_iter().enumerate() {
        let seed = cfg.seed ^ ((i as u64 + 1) << 40);
        let good = stability_check(&law, n_sum, draws, seed)?;
        let exponent = 1.0 / law.index() + CONTROL_EXPONENT_SHIFT;
        let bad = stability_check_scaled(&law, n_sum, draws, seed, exponent)?;
        for (r, control, exp) in [(good, 0.0, 1.0 / law.index()), (bad, 1.0, exponent)] {
            let passed = if control == 0.0 { r.passed } else { !r.passed };
            t.push_numbers(&[
                n_sum as f64,
                exp,
                control,
                r.ks_statistic,
                r.ks_critical,
                f64::from(u8::from(passed)),
            ]);
        }
        out.check(
            &format!("stability n_sum = {n_sum}"),
            good.passed,
            format!(
                "KS {:.4e} vs critical {:.4e}",
                good.ks_statistic, good.ks_critical
            ),
        );
        out.check(
            &format!("mis-scaled control n_sum = {n_sum}"),
            !bad.passed,
            format!(
                "KS {:.4e} should exceed {:.4e}",
                bad.ks_statistic, bad.ks_critical
            ),
        );
    }
    out.meta("draws", draws);
    out.table("stability", t, LINES);
    Ok(out)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn stable_density(cfg: &ExperimentConfig) -> Result<Outcome> {
    let law = StableLaw::new(cfg.float("law.y"), cfg.float("law.scale"))?;
    let x_max = cfg.float("grid.x_max");
    let xs = linspace(-x_max, x_max, cfg.int("grid.points"));
    let density = stable_pdf(&law, &xs)?;
    let (y, d) = (law.index(), law.scale());
    let closed: Option<Vec<f64>> = if y == 2.0 {
        Some(
            xs.iter()
                .map(|&x| gaussian_green(x, 1.0, d))
                .collect::<Result<_>>()?,
        )
    } else if y == 1.0 {
        Some(xs.iter().map(|&x| cauchy_pdf(x, d)).collect::<Result<_>>()?)
    } else {
        None
    };
    let mut header = vec!["x", "density"];
    if closed.is_some() {
        header.push("closed_form");
    }
    let mut t = Table::new(&header);
    t.comment(format!(
        "symmetric stable density with characteristic function exp(-{d} |k|^{y})"
    ));
    if closed.is_some() {
        t.comment("closed_form: Gaussian heat kernel (y = 2) or Cauchy density (y = 1)");
    }
    for (i, (&x, &p)) in xs.iter().zip(&density).enumerate() {
        match &closed {
            Some(c) => t.push_numbers(&[x, p, c[i]]),
            None => t.push_numbers(&[x, p]),
        }
    }
    let mut out = Outcome::default();
    let peak = law.peak_density();
    let floor = density.iter().copied().fold(f64::INFINITY, f64::min);
    out.check(
        "non-negative",
        floor >= -1e-9 * peak,
        format!("smallest density {floor:.3e}"),
    );
    let asym = density
        .iter()
        .zip(density.iter().rev())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    out.check(
        "symmetric",
        asym <= 1e-12 * peak,
        format!("max asymmetry {asym:.3e}"),
    );
    if let Some(c) = closed {
        let err = density
            .iter()
            .zip(&c)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        out.check("closed form", err <= 1e-6, format!("max deviation {err:.3e}"));
    }
    out.table("density", t, LINES);
    Ok(out)
}

fn snapshot_steps(steps: usize, snapshots: usize) -> Vec<usize> {
    let k = snapshots.min(steps);
    (1..=k).map(|i| i * steps / k).collect()
}

fn burgers(cfg: &ExperimentConfig) -> Result<Outcome> {
    let m = NonlinearMedium::new(medium(cfg)?, cfg.float("medium.beta"), 1.0, 0.0, 0.0)?;
    let grid = UniformGrid::centered_1d(cfg.int("grid.n"), cfg.float("grid.length"))?;
    let amplitude = cfg.float("initial.amplitude");
    let p0 = Field::from_fn(grid, |x, _| amplitude * (-x * x).exp())?;
    let mean0 = p0.integral();
    let mut solver = BurgersSolver::new(&p0, m)?;
    let (dt, steps) = (cfg.float("run.dt"), cfg.int("run.steps"));

    let mut out = Outcome::default();
    out.meta("grid", format!("n = {}, length = {}", grid.n(), grid.length()));
    out.meta("dt", dt);
    out.meta("max_stable_dt_initial", solver.max_stable_dt());
    let mut history = Table::new(&["t", "max_abs", "l2_norm", "integral"]);
    history.comment("solution norms at each snapshot");
    history.push_numbers(&[0.0, p0.max_abs(), p0.l2_norm(), mean0]);
    let mut done = 0;
    for (i, target) in snapshot_steps(steps, cfg.int("run.snapshots"))
        .into_iter()
        .enumerate()
    {
        solver.advance(dt, target - done)?;
        done = target;
        let p = solver.pressure();
        let mut snap = Table::new(&["x", "pressure"]);
        snap.comment(format!("t = {}", solver.time()));
        for (x, v) in grid.axis().iter().zip(p.values()) {
            snap.push_numbers(&[*x, *v]);
        }
        history.push_numbers(&[solver.time(), p.max_abs(), p.l2_norm(), p.integral()]);
        out.table(format!("snapshot_{:03}", i + 1), snap, LINES);
    }
    let p = solver.pressure();
    let drift = (p.integral() - mean0).abs();
    out.check(
        "integral conserved",
        drift <= 1e-10 * mean0.abs().max(1.0),
        format!("integral drift {drift:.3e}"),
    );
    let (c0, a0, y, beta) = (m.base().c0(), m.base().alpha0(), m.base().y(), m.beta_nl());
    if y == 2.0 && a0 > 0.0 && beta != 0.0 {
        let eps = 2.0 * a0 * c0.powi(3);
        let u = cole_hopf_gaussian(beta * amplitude, eps, solver.time(), &grid.axis())?;
        let scale = u.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let err = p
            .values()
            .iter()
            .zip(&u)
            .map(|(v, r)| (beta * v - r).abs())
            .fold(0.0, f64::max)
            / scale;
        let tol = cfg.float("check.cole_hopf_tolerance");
        out.check(
            "Cole-Hopf reference",
            err <= tol,
            format!(
                "relative max error {err:.3e} at t = {} (tolerance {tol})",
                solver.time()
            ),
        );
    }
    out.table("history", history, LINES);
    Ok(out)
}

fn kzk(cfg: &ExperimentConfig) -> Result<Outcome> {
    let base = medium(cfg)?;
    let m = NonlinearMedium::new(
        base,
        0.0,
        cfg.float("medium.rho0"),
        cfg.float("medium.nonlinearity"),
        0.0,
    )?;
    let c0 = base.c0();
    let a = cfg.float("beam.source_radius");
    let k0 = cfg.float("beam.wavenumber");
    let w0 = k0 * c0;
    let cycles = cfg.int("beam.cycles");
    let grid = BeamGrid::new(
        cfg.int("beam.n_tau"),
        cycles as f64 * 2.0 * PI / w0,
        cfg.int("beam.nr"),
        cfg.float("beam.r_max"),
    )?;
    if 3 * cycles >= grid.n_tau() / 2 {
        return Err(crate::Error::UnderResolved(format!(
            "{} time samples cannot hold three harmonics of {cycles} cycles",
            grid.n_tau()
        )));
    }
    let amp = cfg.float("beam.amplitude");
    let mut state = BeamState::new(grid, m, a, |t, r| {
        amp * (-(r * r) / (a * a)).exp() * (w0 * t).sin()
    })?;
    state.set_tail_threshold(cfg.float("run.tail_threshold"));
    let (dz, steps) = (cfg.float("run.dz"), cfg.int("run.steps"));
    let radii = grid.radii();

    let harmonic = |s: &BeamState, j: usize, h: usize| s.harmonics(j)[h * cycles].norm();
    let fundamental_power = |s: &BeamState| -> f64 {
        radii
            .iter()
            .enumerate()
            .map(|(j, r)| harmonic(s, j, 1).powi(2) * r)
            .sum()
    };
    let power0 = fundamental_power(&state);
    let rayleigh = 0.5 * k0 * a * a;

    let mut out = Outcome::default();
    out.meta(
        "grid",
        format!("n_tau = {}, nr = {}, dr = {}", grid.n_tau(), grid.nr(), grid.dr()),
    );
    out.meta("dz", dz);
    out.meta("rayleigh_distance", rayleigh);
    let mut axis = Table::new(&["z", "h1", "h2", "h3", "width", "h1_reference", "width_reference"]);
    axis.comment("h1, h2, h3: on-axis amplitudes of the first three harmonics");
    axis.comment("width: second-moment beam radius of the fundamental");
    axis.comment("reference columns: exact linear lossless Gaussian beam by angular spectrum");
    let push_axis = |t: &mut Table, s: &BeamState| -> Result<(f64, f64)> {
        let prof: Vec<f64> = (0..radii.len()).map(|j| harmonic(s, j, 1)).collect();
        let reference = gaussian_beam_reference(a, k0, s.z(), &radii)?;
        let ref_prof: Vec<f64> = reference.iter().map(|c| amp * c.norm()).collect();
        let (w, wr) = (beam_width(&radii, &prof), beam_width(&radii, &ref_prof));
        t.push_numbers(&[
            s.z(),
            prof[0],
            harmonic(s, 0, 2),
            harmonic(s, 0, 3),
            w,
            ref_prof[0],
            wr,
        ]);
        Ok(((prof[0] - ref_prof[0]).abs() / ref_prof[0], (w - wr).abs() / wr))
    };
    let (mut axis_err, mut width_err) = push_axis(&mut axis, &state)?;
    let mut done = 0;
    for (i, target) in snapshot_steps(steps, cfg.int("run.snapshots"))
        .into_iter()
        .enumerate()
    {
        state.advance(dz, target - done)?;
        done = target;
        let (ea, ew) = push_axis(&mut axis, &state)?;
        axis_err = axis_err.max(ea);
        width_err = width_err.max(ew);
        let mut radial = Table::new(&["r", "h1", "h2", "h3"]);
        radial.comment(format!(
            "harmonic amplitudes across the beam at z = {}",
            state.z()
        ));
        for (j, r) in radii.iter().enumerate() {
            radial.push_numbers(&[
                *r,
                harmonic(&state, j, 1),
                harmonic(&state, j, 2),
                harmonic(&state, j, 3),
            ]);
        }
        out.table(format!("radial_{:03}", i + 1), radial, LINES);
    }

    let linear = m.b_coef() == 0.0;
    let tol = cfg.float("check.reference_tolerance");
    if linear && base.alpha0() == 0.0 {
        out.check(
            "axial amplitude vs reference",
            axis_err <= tol,
            format!("max relative error {axis_err:.3e} (tolerance {tol})"),
        );
        out.check(
            "beam width vs reference",
            width_err <= tol,
            format!("max relative error {width_err:.3e} (tolerance {tol})"),
        );
    } else if linear {
        let ratio = (fundamental_power(&state) / power0).sqrt();
        let expected = (-base.alpha0() * w0.powf(base.y()) * state.z()).exp();
        let err = (ratio - expected).abs() / expected;
        out.check(
            "fundamental absorption",
            err <= 0.005,
            format!("amplitude ratio {ratio:.6e} vs {expected:.6e} (relative error {err:.3e})"),
        );
    } else {
        let h2 = harmonic(&state, 0, 2) / harmonic(&state, 0, 1).max(f64::MIN_POSITIVE);
        out.check(
            "second harmonic generated",
            h2 > 1e-6,
            format!("on-axis second-to-first harmonic ratio {h2:.3e}"),
        );
    }
    if state.z() > rayleigh * 1.000_001 && linear && base.alpha0() == 0.0 {
        out.warnings.push(format!(
            "run extends to z = {} beyond one Rayleigh distance {rayleigh}",
            state.z()
        ));
    }
    out.table("axis", axis, LINES);
    Ok(out)
}

fn westervelt(cfg: &ExperimentConfig) -> Result<Outcome> {
    let m = NonlinearMedium::new(
        medium(cfg)?,
        0.0,
        cfg.float("medium.rho0"),
        cfg.float("medium.nonlinearity"),
        0.0,
    )?;
    let settings = AttenuationSettings {
        points_per_wavelength: cfg.int("numerics.points_per_wavelength"),
        periods: cfg.float("numerics.periods"),
        ..Default::default()
    };
    let (omega, mach) = (cfg.float("tone.omega"), cfg.float("tone.mach"));
    let r = measure_fundamental_attenuation(&m, omega, mach, &settings)?;
    let mut t = Table::new(&[
        "omega",
        "linear_alpha",
        "nonlinear_alpha",
        "dispersion_alpha",
        "relative_deviation",
        "peak_mach",
    ]);
    t.comment("decay rate of the fundamental with and without quadratic nonlinearity");
    t.comment("dispersion_alpha: imaginary part of the dispersion root");
    t.push_numbers(&[
        r.omega,
        r.linear_alpha,
        r.nonlinear_alpha,
        r.dispersion_alpha,
        r.relative_deviation,
        r.peak_mach,
    ]);
    let mut out = Outcome::default();
    let tol = cfg.float("check.deviation_tolerance");
    out.check(
        "fundamental attenuation",
        r.relative_deviation <= tol,
        format!(
            "relative deviation {:.3e} (tolerance {tol})",
            r.relative_deviation
        ),
    );
    let warn = r.peak_mach > MACH_LIMIT;
    out.meta("mach_warning", warn);
    out.meta("peak_mach", r.peak_mach);
    if warn {
        out.warnings.push(format!(
            "peak Mach number {:.3} exceeds {MACH_LIMIT}; the quadratic model is outside its range",
            r.peak_mach
        ));
    }
    out.table("fundamental", t, LINES);
    Ok(out)
}

fn diffusion(cfg: &ExperimentConfig) -> Result<Outcome> {
    let y = cfg.float("law.y");
    let law = DiffusionLaw::Fractional {
        zeta: cfg.float("law.zeta"),
        y,
    }
    .law_at(cfg.float("law.t"))?;
    let grid = UniformGrid::centered_1d(cfg.int("grid.n"), cfg.float("grid.length"))?;
    let cmp = green_function_equivalence(&law, grid)?;
    let mut t = Table::new(&["x", "evolved", "density"]);
    t.comment("evolved: spectrally diffused point source");
    t.comment(format!(
        "density: stable density with characteristic function exp(-{} |k|^{y})",
        law.scale()
    ));
    for ((x, e), d) in cmp.x.iter().zip(&cmp.evolved).zip(&cmp.density) {
        t.push_numbers(&[*x, *e, *d]);
    }
    let mut out = Outcome::default();
    let tol = cfg.float("check.tolerance");
    out.check(
        "point source matches stable density",
        cmp.max_abs_discrepancy <= tol,
        format!(
            "max discrepancy {:.3e} (tolerance {tol})",
            cmp.max_abs_discrepancy
        ),
    );
    out.meta("grid", format!("n = {}, length = {}", grid.n(), grid.length()));
    out.table("green", t, LINES);
    Ok(out)
}
