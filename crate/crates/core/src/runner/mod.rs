//! Experiment orchestration: configs in, CSV files, plot scripts and a
//! metadata sidecar out.

mod config;
mod experiments;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use thiserror::Error;

pub use config::{
    parse_config, parse_config_for, ConfigError, ConfigErrors, ExperimentConfig, ExperimentKind, Value,
};
pub use experiments::{compute, CheckOutcome, NamedTable, Outcome, PlotStyle};

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const CHECKS_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration:\n{0}")]
    Config(#[from] ConfigErrors),

    #[error("{experiment}: {source}")]
    Solver {
        experiment: ExperimentKind,
        #[source]
        source: crate::Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("output directory {} is used by runs {first} and {second}", path.display())]
    OutputCollision {
        path: PathBuf,
        first: usize,
        second: usize,
    },

    #[error("worker pool: {0}")]
    Pool(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        use crate::Error as E;
        match self {
            RunError::Solver {
                source:
                    E::NumericalBlowup { .. }
                    | E::SpectralTail { .. }
                    | E::NoConvergence { .. }
                    | E::NonExponential { .. }
                    | E::NonFinite { .. }
                    | E::AsymmetricSpectrum { .. },
                ..
            } => exit::NUMERICAL,
            _ => exit::USAGE,
        }
    }
}

/// Files and verdicts of one completed run.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub kind: ExperimentKind,
    pub out_dir: PathBuf,
    pub csv_paths: Vec<PathBuf>,
    pub plot_paths: Vec<PathBuf>,
    pub meta_path: PathBuf,
    pub checks: Vec<CheckOutcome>,
    pub warnings: Vec<String>,
    pub duration: Duration,
}

impl RunArtifacts {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            exit::PASS
        } else {
            exit::CHECKS_FAILED
        }
    }

    /// Human-readable pass/fail lines.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(
                s,
                "[{}] {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        let _ = writeln!(
            s,
            "{}: {} in {:.2} s, output in {}",
            self.kind,
            if self.passed() { "passed" } else { "FAILED" },
            self.duration.as_secs_f64(),
            self.out_dir.display()
        );
        s
    }
}

/// Run one experiment and write its artifacts into `out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunArtifacts, RunError> {
    let start = Instant::now();
    let outcome = compute(cfg).map_err(|source| RunError::Solver {
        experiment: cfg.kind,
        source,
    })?;
    let duration = start.elapsed();
    write_artifacts(cfg, out_dir, outcome, duration)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_artifacts(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    outcome: Outcome,
    duration: Duration,
) -> Result<RunArtifacts, RunError> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut csv_paths = Vec::new();
    let mut plot_paths = Vec::new();
    for t in &outcome.tables {
        let csv = out_dir.join(format!("{}.csv", t.stem));
        fs::write(&csv, t.table.render()).map_err(io_err(&csv))?;
        let gp = out_dir.join(format!("{}.gp", t.stem));
        fs::write(&gp, plot_script(t)).map_err(io_err(&gp))?;
        csv_paths.push(csv);
        plot_paths.push(gp);
    }
    let meta_path = out_dir.join("run.meta");
    fs::write(&meta_path, metadata(cfg, &outcome, duration)).map_err(io_err(&meta_path))?;
    Ok(RunArtifacts {
        kind: cfg.kind,
        out_dir: out_dir.to_path_buf(),
        csv_paths,
        plot_paths,
        meta_path,
        checks: outcome.checks,
        warnings: outcome.warnings,
        duration,
    })
}

fn plot_script(t: &NamedTable) -> String {
    let file = format!("{}.csv", t.stem);
    let header = t.table.header();
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set xlabel '{}'", header[0]);
    match t.style {
        PlotStyle::Lines { logscale } => {
            if logscale {
                let _ = writeln!(s, "set logscale xy");
            }
            let series: Vec<String> = (2..=header.len())
                .map(|i| {
                    let src = if i == 2 { format!("'{file}'") } else { "''".into() };
                    format!("{src} using 1:{i} with linespoints")
                })
                .collect();
            let _ = writeln!(s, "plot {}", series.join(", \\\n     "));
        }
        PlotStyle::Surface => {
            let _ = writeln!(s, "set ylabel '{}'", header[1]);
            let _ = writeln!(s, "splot '{file}' using 1:2:3 with points palette");
        }
    }
    let _ = writeln!(s, "pause mouse close");
    s
}

fn metadata(cfg: &ExperimentConfig, outcome: &Outcome, duration: Duration) -> String {
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut s = String::new();
    let _ = writeln!(s, "timestamp_unix = {stamp}");
    let _ = writeln!(s, "duration_s = {:.6}", duration.as_secs_f64());
    let _ = writeln!(s, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "passed = {}", outcome.checks.iter().all(|c| c.passed));
    if !outcome.meta.iter().any(|(k, _)| k == "mach_warning") {
        let _ = writeln!(s, "mach_warning = false");
    }
    for (k, v) in &outcome.meta {
        let _ = writeln!(s, "{k} = {v}");
    }
    for w in &outcome.warnings {
        let _ = writeln!(s, "warning = {w}");
    }
    let _ = writeln!(s, "\n[checks]");
    for c in &outcome.checks {
        let _ = writeln!(
            s,
            "{} = {}: {}",
            c.name,
            if c.passed { "pass" } else { "fail" },
            c.detail
        );
    }
    let _ = writeln!(s, "\n[config]");
    s.push_str(&cfg.render());
    s
}

/// Run several experiments on a pool of `workers` threads. Run `i` uses
/// seed `cfg.seed + i`. Results come back in input order and do not depend
/// on `workers`; one failing run does not stop the others.
pub fn sweep(
    runs: &[(ExperimentConfig, PathBuf)],
    workers: usize,
) -> Result<Vec<Result<RunArtifacts, RunError>>, RunError> {
    let mut seen: Vec<(PathBuf, usize)> = Vec::new();
    for (i, (_, dir)) in runs.iter().enumerate() {
        let norm = normalize(dir);
        if let Some((_, first)) = seen.iter().find(|(p, _)| *p == norm) {
            return Err(RunError::OutputCollision {
                path: dir.clone(),
                first: *first,
                second: i,
            });
        }
        seen.push((norm, i));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| RunError::Pool(e.to_string()))?;
    Ok(pool.install(|| {
        runs.par_iter()
            .enumerate()
            .map(|(i, (cfg, dir))| {
                let mut cfg = cfg.clone();
                cfg.seed = cfg.seed.wrapping_add(i as u64);
                run_experiment(&cfg, dir)
            })
            .collect()
    }))
}

fn normalize(p: &Path) -> PathBuf {
    let abs = if p.is_absolute() {
        p.to_path_buf()
    } else {
        std::env::current_dir().unwrap_or_default().join(p)
    };
    let mut out = PathBuf::new();
    for c in abs.components() {
        match c {
            std::path::Component::CurDir => {}
            std::path::Component::ParentDir => {
                out.pop();
            }
            other => out.push(other),
        }
    }
    out
}

/// Output directory of each config under `root`: its `output` key, or
/// `run-NNN-<experiment>`.
pub fn default_run_dirs(root: &Path, cfgs: &[ExperimentConfig]) -> Vec<PathBuf> {
    cfgs.iter()
        .enumerate()
        .map(|(i, c)| {
            root.join(
                c.output
                    .clone()
                    .unwrap_or_else(|| format!("run-{i:03}-{}", c.kind)),
            )
        })
        .collect()
}
