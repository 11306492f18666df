//! Acceptance gate: one pass/fail line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use fraclap::diffusion::{
    cauchy_pdf, gaussian_green, green_function_equivalence, stability_check, stability_check_scaled,
    StableLaw,
};
use fraclap::diffusion::{evolve_fractional_diffusion, DiffusionLaw, DiffusionProblem};
use fraclap::fraclap::{bump_second_derivative, convergence_study, cross_validate, FracOrder};
use fraclap::grid::{Field, UniformGrid};
use fraclap::linear_wave::AttenuationSettings;
use fraclap::linear_wave::{
    dispersion_roots, estimate_power_exponent, measure_attenuation, smallness_ratio, Medium, WaveState,
};
use fraclap::nonlinear::{
    beam_width, cole_hopf_gaussian, gaussian_beam_reference, measure_fundamental_attenuation,
    parabolic_loss_step, BeamGrid, BeamState, BurgersSolver, NonlinearMedium, WesterveltState,
};
use fraclap::runner::{parse_config, run_experiment, sweep, ExperimentConfig};

type Outcome = Result<(bool, String), String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

const EXPONENTS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Media whose smallness ratio `α0 ω^{y-1}` stays at or below 0.05 on
/// `ω ∈ [1, 2]`.
fn sweep_medium(y: f64) -> Medium {
    let worst = 1.0_f64.powf(y - 1.0).max(2.0_f64.powf(y - 1.0));
    Medium::new(1.0, 0.05 / worst, y).unwrap()
}

fn power_law_recovery() -> Outcome {
    let omegas = log_grid(1.0, 2.0, 8);
    let mut lines = Vec::new();
    let mut ok = true;
    for y in EXPONENTS {
        let m = sweep_medium(y);
        let samples = measure_attenuation(&m, &omegas, 24.0).map_err(err)?;
        let pairs: Vec<(f64, f64)> = samples.iter().map(|s| (s.omega, s.alpha)).collect();
        let fit = estimate_power_exponent(&pairs).map_err(err)?;
        let dy = (fit.y - y).abs();
        let da = (fit.alpha0 - m.alpha0()).abs() / m.alpha0();
        ok &= dy <= 0.03 && da <= 0.03;
        lines.push(format!("y={y}: dy={dy:.1e} da0={da:.1e}"));
    }
    Ok((ok, lines.join(", ")))
}

fn phase_speed() -> Outcome {
    let mut worst = 0.0_f64;
    for y in EXPONENTS {
        let m = sweep_medium(y);
        for w in log_grid(1.0, 2.0, 8) {
            assert!(smallness_ratio(w, &m) <= 0.05 + 1e-12);
            let root = dispersion_roots(w, &m).map_err(err)?;
            worst = worst.max((root.beta - w / m.c0()).abs() / (w / m.c0()));
        }
    }
    Ok((worst <= 0.005, format!("max |Re k - w/c0|/(w/c0) = {worst:.3e}")))
}

fn thermoviscous_consistency() -> Outcome {
    let (c0, alpha0, k0): (f64, f64, f64) = (1.5, 0.01, 4.0);
    let mu = 2.0 * alpha0 * c0.powi(3);
    let g = UniformGrid::centered_1d(512, 64.0).map_err(err)?;
    let p = Field::from_fn(g, |x, _| (-x * x / 4.0).exp() * (k0 * x).cos()).map_err(err)?;
    let v = Field::zeros(g);
    let mut frac = WaveState::new(&p, &v, Medium::new(c0, alpha0, 2.0).map_err(err)?).map_err(err)?;
    let mut visc = WaveState::thermoviscous(&p, &v, c0, mu).map_err(err)?;
    let t_end = 50.0 * 2.0 * PI / (c0 * k0);
    let steps = (t_end / frac.max_stable_dt()).ceil() as usize;
    let dt = t_end / steps as f64;
    for _ in 0..steps {
        frac.step(dt).map_err(err)?;
        visc.step(dt).map_err(err)?;
    }
    let (a, b) = (frac.pressure().map_err(err)?, visc.pressure().map_err(err)?);
    let rel = a.max_abs_diff(&b).map_err(err)? / b.max_abs();
    Ok((
        rel <= 1e-6,
        format!("relative max difference {rel:.3e} after 50 periods ({steps} steps)"),
    ))
}

fn green_equivalence() -> Outcome {
    let grid = UniformGrid::centered_1d(2048, 256.0).map_err(err)?;
    let mut ok = true;
    let mut parts = Vec::new();

    let gauss = green_function_equivalence(&StableLaw::new(2.0, 1.0).map_err(err)?, grid).map_err(err)?;
    let mut e2 = gauss.max_abs_discrepancy;
    for (x, v) in gauss.x.iter().zip(&gauss.evolved) {
        e2 = e2.max((v - gaussian_green(*x, 1.0, 1.0).map_err(err)?).abs());
    }
    ok &= e2 <= 1e-6;
    parts.push(format!("y=2 {e2:.1e}"));

    let gamma = 1.0;
    let cauchy = green_function_equivalence(&StableLaw::new(1.0, gamma).map_err(err)?, grid).map_err(err)?;
    let mut e1 = cauchy.max_abs_discrepancy;
    let window = 0.4 * 256.0;
    for (x, v) in cauchy.x.iter().zip(&cauchy.evolved) {
        if x.abs() <= window {
            e1 = e1.max((v - cauchy_pdf(*x, gamma).map_err(err)?).abs());
        }
    }
    let centre = cauchy
        .x
        .iter()
        .position(|x| x.abs() < 1e-12)
        .ok_or("no node at x = 0")?;
    let g0 = (cauchy.evolved[centre] - 1.0 / (PI * gamma)).abs();
    ok &= e1 <= 1e-4 && g0 <= 1e-4;
    parts.push(format!("y=1 {e1:.1e} (g(0) off by {g0:.1e})"));

    let frac = green_function_equivalence(&StableLaw::new(0.8, 1.0).map_err(err)?, grid).map_err(err)?;
    ok &= frac.max_abs_discrepancy <= 1e-3;
    parts.push(format!("y=0.8 {:.1e}", frac.max_abs_discrepancy));
    Ok((ok, parts.join(", ")))
}

fn stability_property() -> Outcome {
    let mut ok = true;
    let mut worst_margin = f64::INFINITY;
    let mut weakest_control = f64::INFINITY;
    for (i, y) in [1.0, 1.5, 2.0].into_iter().enumerate() {
        let law = StableLaw::new(y, 1.0).map_err(err)?;
        for n_sum in [2, 4] {
            let seed = 2000 + 10 * i as u64 + n_sum as u64;
            let r = stability_check(&law, n_sum, 100_000, seed).map_err(err)?;
            ok &= r.passed;
            worst_margin = worst_margin.min(r.ks_critical - r.ks_statistic);
            let c = stability_check_scaled(&law, n_sum, 100_000, seed, 1.0 / y + 0.25).map_err(err)?;
            ok &= !c.passed;
            weakest_control = weakest_control.min(c.ks_statistic / c.ks_critical);
        }
    }
    Ok((
        ok,
        format!(
            "smallest margin below critical {worst_margin:.2e}; control KS/critical >= {weakest_control:.2}"
        ),
    ))
}

fn operator_cross_validation() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for s in [0.5, 1.0, 1.5] {
        let order = FracOrder::new(s).map_err(err)?;
        let rows = convergence_study(order, &[128, 256, 512]).map_err(err)?;
        let cv = cross_validate(order, 512).map_err(err)?;
        let min_order = rows
            .iter()
            .filter_map(|r| r.order_estimate)
            .fold(f64::INFINITY, f64::min);
        ok &= cv.relative_max_error <= 0.02 && min_order >= 1.0;
        parts.push(format!(
            "s={s}: {:.1e} order {min_order:.2}",
            cv.relative_max_error
        ));
    }
    let cv = cross_validate(FracOrder::new(1.95).map_err(err)?, 512).map_err(err)?;
    let w = (cv.nodes[cv.nodes.len() - 1] - cv.nodes[0]) / 10.0;
    let exact: Vec<f64> = cv.nodes.iter().map(|&x| -bump_second_derivative(x, w)).collect();
    let scale = exact.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let dev = cv
        .quadrature
        .iter()
        .zip(&exact)
        .map(|(q, e)| (q - e).abs())
        .fold(0.0, f64::max)
        / scale;
    ok &= dev <= 0.05;
    parts.push(format!("s=1.95 vs -f'': {dev:.1e}"));
    Ok((ok, parts.join(", ")))
}

fn burgers_medium(alpha0: f64, y: f64, beta: f64) -> NonlinearMedium {
    NonlinearMedium::new(Medium::new(1.0, alpha0, y).unwrap(), beta, 1.0, 0.0, 0.0).unwrap()
}

fn fractional_burgers() -> Outcome {
    // Cole-Hopf at y = 2: eps = 2 alpha0 c0^3 = 0.05.
    let g = UniformGrid::centered_1d(1024, 20.0).map_err(err)?;
    let p0 = Field::from_fn(g, |x, _| (-x * x).exp()).map_err(err)?;
    let mut s = BurgersSolver::new(&p0, burgers_medium(0.025, 2.0, 1.0)).map_err(err)?;
    s.advance(0.005, 200).map_err(err)?;
    let exact = cole_hopf_gaussian(1.0, 0.05, s.time(), &g.axis()).map_err(err)?;
    let peak = exact.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let ch = s
        .pressure()
        .values()
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / peak;

    // beta = 0 against the fractional diffusion propagator.
    let p1 = Field::from_fn(g, |x, _| (-x * x).exp() * (1.0 + 0.5 * x)).map_err(err)?;
    let mut lin = BurgersSolver::new(&p1, burgers_medium(0.03, 1.3, 0.0)).map_err(err)?;
    lin.advance(0.01, 100).map_err(err)?;
    let law = DiffusionLaw::WaveLoss {
        alpha0: 0.03,
        c0: 1.0,
        y: 1.3,
    };
    let diffused = evolve_fractional_diffusion(&DiffusionProblem::new(p1, law).map_err(err)?, lin.time())
        .map_err(err)?;
    let reduction = lin.pressure().max_abs_diff(&diffused).map_err(err)?;

    // Strang order at y = 1.5 from self-convergence.
    let line = UniformGrid::new_1d(128, 2.0 * PI).map_err(err)?;
    let sine = Field::from_fn(line, |x, _| x.sin()).map_err(err)?;
    let m = burgers_medium(0.05, 1.5, 1.0);
    let run = |steps: usize| -> Result<Field, String> {
        let mut b = BurgersSolver::new(&sine, m).map_err(err)?;
        b.advance(0.5 / steps as f64, steps).map_err(err)?;
        Ok(b.pressure())
    };
    let reference = run(1280)?;
    let errors: Vec<f64> = [20, 40, 80, 160]
        .into_iter()
        .map(|k| run(k).and_then(|p| p.max_abs_diff(&reference).map_err(err)))
        .collect::<Result<_, _>>()?;
    let orders: Vec<f64> = errors.windows(2).map(|e| (e[0] / e[1]).log2()).collect();
    let mean_order = orders.iter().sum::<f64>() / orders.len() as f64;

    let ok = ch <= 0.005 && reduction <= 1e-10 && (mean_order - 2.0).abs() <= 0.2;
    Ok((
        ok,
        format!("Cole-Hopf {ch:.1e}, beta=0 {reduction:.1e}, Strang order {mean_order:.3}"),
    ))
}

fn kzk_beam() -> Outcome {
    let (a, k0) = (1.0, 30.0);
    let cycles = 16;
    let period = cycles as f64 * 2.0 * PI / k0;
    let grid = BeamGrid::new(512, period, 256, 6.0).map_err(err)?;
    let lossless = NonlinearMedium::linear(Medium::new(1.0, 0.0, 2.0).map_err(err)?);
    let source = move |t: f64, r: f64| (-(r * r) / (a * a)).exp() * (k0 * t).sin();
    let mut beam = BeamState::new(grid, lossless, a, source).map_err(err)?;
    let radii = grid.radii();
    let z_r = 0.5 * k0 * a * a;
    let chunks = 8;
    let dz = z_r / 200.0;
    let (mut axis_err, mut width_err) = (0.0_f64, 0.0_f64);
    for _ in 0..chunks {
        beam.advance(dz, 200 / chunks).map_err(err)?;
        let prof: Vec<f64> = (0..radii.len())
            .map(|j| beam.harmonics(j)[cycles].norm())
            .collect();
        let exact: Vec<f64> = gaussian_beam_reference(a, k0, beam.z(), &radii)
            .map_err(err)?
            .iter()
            .map(|c| c.norm())
            .collect();
        axis_err = axis_err.max((prof[0] - exact[0]).abs() / exact[0]);
        let (w, we) = (beam_width(&radii, &prof), beam_width(&radii, &exact));
        width_err = width_err.max((w - we).abs() / we);
    }

    // Per-mode absorption of the loss sub-step against exp(-alpha0 |w|^y z).
    let (alpha0, y) = (0.002, 1.4);
    let lossy = NonlinearMedium::linear(Medium::new(1.0, alpha0, y).map_err(err)?);
    let s = BeamState::new(grid, lossy, a, source).map_err(err)?;
    let before = s.harmonics(0);
    let z = 3.0;
    let after = parabolic_loss_step(s, z).map_err(err)?.harmonics(0);
    let mut absorb = 0.0_f64;
    for h in [cycles, 2 * cycles] {
        if before[h].norm() > 1e-12 {
            let w = h as f64 * 2.0 * PI / period;
            let expected = (-alpha0 * w.powf(y) * z).exp();
            absorb = absorb.max((after[h].norm() / before[h].norm() - expected).abs() / expected);
        }
    }
    let ok = axis_err <= 0.01 && width_err <= 0.01 && absorb <= 0.005;
    Ok((
        ok,
        format!(
            "axis {axis_err:.1e}, width {width_err:.1e} over one Rayleigh distance; absorption {absorb:.1e}"
        ),
    ))
}

fn westervelt() -> Outcome {
    let base = Medium::new(1.0, 0.05, 1.5).map_err(err)?;
    let g = UniformGrid::centered_1d(256, 40.0).map_err(err)?;
    let p = Field::from_fn(g, |x, _| (-x * x).exp()).map_err(err)?;
    let v = Field::from_fn(g, |x, _| 0.3 * x * (-x * x).exp()).map_err(err)?;
    let mut nl = WesterveltState::new(
        &p,
        &v,
        NonlinearMedium::new(base, 0.0, 1.0, 0.0, 0.0).map_err(err)?,
    )
    .map_err(err)?;
    let mut lin = WaveState::new(&p, &v, base).map_err(err)?;
    let dt = lin.max_stable_dt();
    for _ in 0..1000 {
        nl.step(dt).map_err(err)?;
        lin.step(dt).map_err(err)?;
    }
    let (a, b) = (nl.pressure().map_err(err)?, lin.pressure().map_err(err)?);
    let reduction = a.max_abs_diff(&b).map_err(err)?;

    let medium = NonlinearMedium::new(base, 0.0, 1.0, 3.5, 0.0).map_err(err)?;
    let f =
        measure_fundamental_attenuation(&medium, 1.0, 0.01, &AttenuationSettings::default()).map_err(err)?;
    let ok = reduction <= 1e-9 && f.relative_deviation <= 0.02;
    Ok((
        ok,
        format!(
            "B=0 vs linear {reduction:.1e}; fundamental at Mach {:.4} deviates {:.1e}",
            f.peak_mach, f.relative_deviation
        ),
    ))
}

fn config(text: &str) -> ExperimentConfig {
    parse_config(text).unwrap_or_else(|e| panic!("{e}"))
}

fn read_csvs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "csv"))
        .map(|e| {
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

fn infrastructure() -> Outcome {
    let tmp = tempfile::tempdir().map_err(err)?;
    let mut parts = Vec::new();

    let levy = config("experiment = levy-check\nseed = 5\n[law]\ny = 1.5\n[sampling]\ndraws = 20000\n");
    let (d1, d2) = (tmp.path().join("a"), tmp.path().join("b"));
    run_experiment(&levy, &d1).map_err(err)?;
    run_experiment(&levy, &d2).map_err(err)?;
    let repeat = read_csvs(&d1) == read_csvs(&d2) && !read_csvs(&d1).is_empty();
    parts.push(format!("repeat identical {repeat}"));

    let cfgs: Vec<ExperimentConfig> = EXPONENTS
        .iter()
        .map(|y| {
            let m = sweep_medium(*y);
            config(&format!(
                "experiment = attenuation-sweep\n[medium]\nalpha0 = {}\ny = {y}\n[sweep]\nomega_min = 1\nomega_max = 2\npoints = 3\n",
                m.alpha0()
            ))
        })
        .collect();
    let runs = |root: &Path| -> Vec<_> {
        cfgs.iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), root.join(format!("run{i}"))))
            .collect()
    };
    let (one, four) = (tmp.path().join("w1"), tmp.path().join("w4"));
    let r1 = sweep(&runs(&one), 1).map_err(err)?;
    let r4 = sweep(&runs(&four), 4).map_err(err)?;
    let all_ok = r1.iter().chain(&r4).all(|r| r.as_ref().is_ok_and(|a| a.passed()));
    let same = (0..cfgs.len()).all(|i| {
        let (a, b) = (
            read_csvs(&one.join(format!("run{i}"))),
            read_csvs(&four.join(format!("run{i}"))),
        );
        !a.is_empty() && a == b
    });
    parts.push(format!("workers 1 vs 4 identical {same}"));

    let strict = [
        ("experiment = dispersion\n[medium]\nalpha0 = 0.01\ny = 2.5\n[sweep]\nomega_min = 1\nomega_max = 2\n", "0 < y <= 2"),
        ("experiment = dispersion\n[medium]\nalpha0 = 0.01\ny = 1\ny = 1\n[sweep]\nomega_min = 1\nomega_max = 2\n", "lines 4 and 5"),
        ("experiment = dispersion\n[medium]\nalpha0 = 0.01\ny = 1\nfoo = 1\n[sweep]\nomega_min = 1\nomega_max = 2\n", "unknown key"),
        ("experiment = dispersion\n[medium]\ny = 1\n[sweep]\nomega_min = 1\nomega_max = 2\n", "missing required key"),
    ]
    .iter()
    .all(|(doc, needle)| parse_config(doc).is_err_and(|e| e.to_string().contains(needle)));
    parts.push(format!("strict parsing {strict}"));

    Ok((repeat && all_ok && same && strict, parts.join(", ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("power-law attenuation recovery", power_law_recovery),
        ("phase speed", phase_speed),
        ("thermoviscous consistency", thermoviscous_consistency),
        ("Green function / stable density equivalence", green_equivalence),
        ("stability under addition", stability_property),
        ("quadrature vs spectral operator", operator_cross_validation),
        ("fractional Burgers", fractional_burgers),
        ("parabolic beam", kzk_beam),
        ("Westervelt", westervelt),
        ("infrastructure", infrastructure),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match result {
            Ok((p, d)) => (p, d),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {:>2} [{}] {name}: {detail} ({secs:.1} s)",
            i + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
