use std::fs;
use std::path::Path;
use std::process::Command;

use fraclap::diffusion::{stability_check, StableLaw};
use fraclap::runner::{parse_config, run_experiment, sweep, RunError};

fn fraclap() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fraclap"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const LEVY: &str = "experiment = levy-check\nseed = 3\n[law]\ny = 1.5\n[sampling]\ndraws = 20000\n";
const ATTENUATION_Y1: &str =
    "experiment = attenuation-sweep\n[medium]\nalpha0 = 0.05\ny = 1\n[sweep]\nomega_min = 1\nomega_max = 2\npoints = 4\n";

#[test]
fn list_names_every_experiment() {
    let out = fraclap().arg("list").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "dispersion",
        "attenuation-sweep",
        "kzk",
        "westervelt",
        "diffusion",
        "levy-check",
    ] {
        assert!(text.contains(name), "{name} missing from\n{text}");
    }
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();

    let ok = write(d, "levy.conf", LEVY);
    let st = fraclap()
        .args(["levy-check", "--config"])
        .arg(&ok)
        .arg("--out")
        .arg(d.join("o1"))
        .output()
        .unwrap()
        .status;
    assert_eq!(st.code(), Some(0));

    let bad = write(d, "bad.conf", "experiment = levy-check\n[law]\ny = 2.5\n");
    let out = fraclap()
        .args(["levy-check", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 < y <= 2"));

    let strict = write(
        d,
        "strict.conf",
        &format!("{ATTENUATION_Y1}[check]\ny_tolerance = 1e-12\n"),
    );
    let st = fraclap()
        .args(["attenuation-sweep", "--config"])
        .arg(&strict)
        .arg("--out")
        .arg(d.join("o2"))
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));

    // Shock forms well inside the run, so the spectral-tail monitor aborts.
    let shock = write(
        d,
        "shock.conf",
        "experiment = kzk\n[medium]\nnonlinearity = 3.5\n[beam]\namplitude = 0.05\nn_tau = 128\ncycles = 4\nnr = 32\nr_max = 3\n[run]\ndz = 0.02\nsteps = 250\n",
    );
    let out = fraclap()
        .args(["kzk", "--config"])
        .arg(&shock)
        .arg("--out")
        .arg(d.join("o3"))
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let st = fraclap().args(["no-such-experiment"]).output().unwrap().status;
    assert_eq!(st.code(), Some(2));
}

#[test]
fn output_root_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "levy.conf", LEVY);
    let st = fraclap()
        .args(["levy-check", "--config"])
        .arg(&cfg)
        .env("FRACLAP_OUT", tmp.path().join("root"))
        .output()
        .unwrap()
        .status;
    assert_eq!(st.code(), Some(0));
    assert!(tmp.path().join("root/levy-check/stability.csv").is_file());
}

#[test]
fn seed_flag_changes_draws() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "levy.conf", LEVY);
    for (seed, dir) in [("1", "a"), ("2", "b")] {
        let st = fraclap()
            .args(["levy-check", "--seed", seed, "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(tmp.path().join(dir))
            .output()
            .unwrap()
            .status;
        assert_eq!(st.code(), Some(0));
    }
    let a = fs::read(tmp.path().join("a/stability.csv")).unwrap();
    let b = fs::read(tmp.path().join("b/stability.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn artifacts_are_complete() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = parse_config(ATTENUATION_Y1).unwrap();
    let art = run_experiment(&cfg, tmp.path()).unwrap();
    assert!(art.passed());
    assert_eq!(art.csv_paths.len(), art.plot_paths.len());
    for p in art
        .csv_paths
        .iter()
        .chain(&art.plot_paths)
        .chain([&art.meta_path])
    {
        assert!(fs::metadata(p).unwrap().len() > 0, "{}", p.display());
    }
    let csv = fs::read_to_string(&art.csv_paths[0]).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "omega,alpha_measured,alpha_power_law,alpha_dispersion,r_squared"
    );
    let gp = fs::read_to_string(&art.plot_paths[0]).unwrap();
    assert!(gp.contains("'attenuation.csv'"));
    let meta = fs::read_to_string(&art.meta_path).unwrap();
    for key in [
        "timestamp_unix",
        "duration_s",
        "mach_warning",
        "fitted_y",
        "[config]",
        "seed = 0",
    ] {
        assert!(meta.contains(key), "{key} missing from\n{meta}");
    }
    let fitted: f64 = meta
        .lines()
        .find_map(|l| l.strip_prefix("fitted_y = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((0.97..=1.03).contains(&fitted));
}

#[test]
fn sweep_isolates_failures_and_rejects_collisions() {
    let tmp = tempfile::tempdir().unwrap();
    let good = parse_config(LEVY).unwrap();
    // Parses, but dt is far above the explicit step bound.
    let failing = parse_config(
        "experiment = burgers\n[medium]\nalpha0 = 0\ny = 2\nbeta = 5\n[grid]\nn = 256\n[run]\ndt = 1\nsteps = 3\n",
    )
    .unwrap();
    let runs: Vec<_> = [good.clone(), failing, good.clone(), good.clone()]
        .into_iter()
        .enumerate()
        .map(|(i, c)| (c, tmp.path().join(format!("r{i}"))))
        .collect();
    let results = sweep(&runs, 2).unwrap();
    assert!(matches!(results[1], Err(RunError::Solver { .. })));
    for i in [0, 2, 3] {
        assert!(results[i].as_ref().unwrap().passed());
    }
    // Run index offsets the seed.
    let a = fs::read(tmp.path().join("r0/stability.csv")).unwrap();
    let b = fs::read(tmp.path().join("r2/stability.csv")).unwrap();
    assert_ne!(a, b);

    let clash = vec![
        (good.clone(), tmp.path().join("same")),
        (good.clone(), tmp.path().join("other/../same")),
    ];
    assert!(matches!(sweep(&clash, 2), Err(RunError::OutputCollision { .. })));
    assert!(!tmp.path().join("same").exists());
}

#[test]
fn stability_test_is_calibrated() {
    // Under the null hypothesis the 1% test rejects about 2 of 200 seeds.
    let law = StableLaw::new(1.5, 1.0).unwrap();
    let rejected = (0..200u64)
        .filter(|s| !stability_check(&law, 4, 20_000, 90_000 + s).unwrap().passed)
        .count();
    assert!(rejected <= 8, "{rejected} of 200 rejected");
}
