use std::f64::consts::PI;

use proptest::prelude::*;

use fraclap::csv::fmt_g17;
use fraclap::diffusion::{sample_stable, stable_pdf, StableLaw};
use fraclap::fraclap::{spectral_fraclap, FracOrder};
use fraclap::grid::{forward_transform, inverse_transform, Field, UniformGrid};
use fraclap::linear_wave::{dispersion_roots, Medium, WaveState};
use fraclap::nonlinear::{BurgersSolver, NonlinearMedium};
use fraclap::runner::parse_config;

/// `Σ a_j cos(j x) + b_j sin(j x)` on `[0, 2π)`.
fn trig_field(n: usize, coeffs: &[(f64, f64)]) -> Field {
    let g = UniformGrid::new_1d(n, 2.0 * PI).unwrap();
    Field::from_fn(g, |x, _| {
        coeffs
            .iter()
            .enumerate()
            .map(|(j, (a, b))| {
                let k = (j + 1) as f64;
                a * (k * x).cos() + b * (k * x).sin()
            })
            .sum()
    })
    .unwrap()
}

fn coeff_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_round_trip(vals in prop::collection::vec(-10.0..10.0f64, 64)) {
        let g = UniformGrid::centered_1d(64, 7.5).unwrap();
        let f = Field::new(g, vals).unwrap();
        let back = inverse_transform(&forward_transform(&f).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&f).unwrap() <= 1e-12 * f.max_abs().max(1.0));
    }

    #[test]
    fn fractional_orders_compose(c in coeff_strategy(), s1 in 0.1..0.9f64, s2 in 0.1..0.9f64) {
        let f = trig_field(64, &c);
        let two_step = spectral_fraclap(
            &spectral_fraclap(&f, FracOrder::new(s1).unwrap()).unwrap(),
            FracOrder::new(s2).unwrap(),
        )
        .unwrap();
        let one_step = spectral_fraclap(&f, FracOrder::new(s1 + s2).unwrap()).unwrap();
        prop_assert!(two_step.max_abs_diff(&one_step).unwrap() <= 1e-11 * one_step.max_abs().max(1.0));
    }

    #[test]
    fn order_two_is_minus_second_derivative(c in coeff_strategy()) {
        let f = trig_field(64, &c);
        let lap = spectral_fraclap(&f, FracOrder::new(2.0).unwrap()).unwrap();
        let exact = {
            let k2: Vec<(f64, f64)> = c
                .iter()
                .enumerate()
                .map(|(j, (a, b))| {
                    let k = (j + 1) as f64;
                    (a * k * k, b * k * k)
                })
                .collect();
            trig_field(64, &k2)
        };
        prop_assert!(lap.max_abs_diff(&exact).unwrap() <= 1e-10 * exact.max_abs().max(1.0));
    }

    #[test]
    fn g17_round_trips(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
        let s = fmt_g17(x);
        prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn lossy_energy_never_grows(alpha0 in 0.001..0.2f64, y in 0.1..2.0f64, c in coeff_strategy()) {
        let p = trig_field(64, &c);
        let v = Field::zeros(*p.grid());
        let mut s = WaveState::new(&p, &v, Medium::new(1.0, alpha0, y).unwrap()).unwrap();
        let dt = s.max_stable_dt();
        let mut last = s.energy();
        for _ in 0..50 {
            s.step(dt).unwrap();
            let e = s.energy();
            prop_assert!(e <= last * (1.0 + 1e-12) + 1e-300);
            last = e;
        }
    }

    #[test]
    fn dispersion_roots_are_lossy_and_conjugate(alpha0 in 0.0..0.1f64, y in 0.05..2.0f64, w in 0.1..5.0f64) {
        let m = Medium::new(1.0, alpha0, y).unwrap();
        let fwd = dispersion_roots(w, &m).unwrap();
        let back = dispersion_roots(-w, &m).unwrap();
        prop_assert!(fwd.alpha >= 0.0 && fwd.beta > 0.0);
        prop_assert!((back.k - fwd.k.conj()).norm() <= 1e-12 * fwd.k.norm());
    }

    #[test]
    fn burgers_l2_never_grows(alpha0 in 0.0..0.05f64, y in 0.2..2.0f64, amp in 0.1..1.0f64, c in coeff_strategy()) {
        let p0 = trig_field(128, &c);
        let scale = amp / p0.max_abs().max(1e-12);
        let p0 = Field::new(*p0.grid(), p0.values().iter().map(|v| v * scale).collect()).unwrap();
        let m = NonlinearMedium::new(Medium::new(1.0, alpha0, y).unwrap(), 1.0, 1.0, 0.0, 0.0).unwrap();
        let mut s = BurgersSolver::new(&p0, m).unwrap();
        let mut last = p0.l2_norm();
        for _ in 0..40 {
            let dt = 0.5 * s.max_stable_dt().min(0.05);
            s.step(dt).unwrap();
            let l2 = s.pressure().l2_norm();
            prop_assert!(l2 <= last * (1.0 + 1e-9));
            last = l2;
        }
    }

    #[test]
    fn stable_density_is_symmetric_and_positive(y in 0.5..2.0f64, d in 0.5..3.0f64, x in 0.0..10.0f64) {
        let law = StableLaw::new(y, d).unwrap();
        let v = stable_pdf(&law, &[-x, x, 0.0]).unwrap();
        prop_assert!((v[0] - v[1]).abs() <= 1e-12 * v[2]);
        prop_assert!(v[1] > 0.0 && v[1] <= v[2] * (1.0 + 1e-9));
    }

    #[test]
    fn sampling_is_reproducible(y in 0.3..2.0f64, seed in any::<u64>()) {
        let law = StableLaw::new(y, 1.0).unwrap();
        let a = sample_stable(&law, 257, seed).unwrap();
        let b = sample_stable(&law, 257, seed).unwrap();
        prop_assert_eq!(a.draws, b.draws);
    }

    #[test]
    fn rendered_config_parses_back(alpha0 in 0.0..1.0f64, y in 0.01..2.0f64, lo in 0.1..1.0f64, span in 0.1..5.0f64, points in 2u64..50) {
        let doc = format!(
            "experiment = dispersion\n[medium]\nalpha0 = {alpha0}\ny = {y}\n[sweep]\nomega_min = {lo}\nomega_max = {}\npoints = {points}\n",
            lo + span
        );
        let cfg = parse_config(&doc).unwrap();
        let again = parse_config(&cfg.render()).unwrap();
        prop_assert_eq!(cfg.render().replace("  # default", ""), again.render());
    }

    #[test]
    fn unknown_keys_are_rejected(key in "[a-z][a-z_]{0,10}") {
        prop_assume!(!["alpha0", "y", "c0"].contains(&key.as_str()));
        let doc = format!(
            "experiment = dispersion\n[medium]\nalpha0 = 0.1\ny = 1\n{key} = 3\n[sweep]\nomega_min = 1\nomega_max = 2\n"
        );
        let e = parse_config(&doc).unwrap_err();
        prop_assert!(e.errors().iter().any(|e| e.line == Some(5)));
    }

    #[test]
    fn out_of_range_exponent_cites_range(y in prop_oneof![2.0001..10.0f64, -5.0..=0.0f64]) {
        let doc = format!(
            "experiment = dispersion\n[medium]\nalpha0 = 0.1\ny = {y}\n[sweep]\nomega_min = 1\nomega_max = 2\n"
        );
        let e = parse_config(&doc).unwrap_err().to_string();
        prop_assert!(e.contains("0 < y <= 2"), "{}", e);
    }
}
