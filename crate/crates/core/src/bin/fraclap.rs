use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fraclap::runner::{
    default_run_dirs, exit, parse_config, parse_config_for, run_experiment, sweep, ExperimentConfig,
    ExperimentKind, RunError,
};

/// Fractional-Laplacian lossy-media experiments.
#[derive(Debug, Parser)]
#[command(name = "fraclap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Describe the available experiments.
    List,
    /// Run several config files concurrently.
    Sweep(SweepArgs),
    Dispersion(RunArgs),
    AttenuationSweep(RunArgs),
    FraclapCompare(RunArgs),
    LevyCheck(RunArgs),
    StableDensity(RunArgs),
    Burgers(RunArgs),
    Kzk(RunArgs),
    Westervelt(RunArgs),
    Diffusion(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Config document.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to $FRACLAP_OUT/<experiment> or ./fraclap-out/<experiment>.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Config documents, each naming its experiment.
    #[arg(long = "config", required = true)]
    configs: Vec<PathBuf>,
    /// Root output directory; each run writes to its `output` key or run-NNN-<experiment>.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base seed; run i uses base + i. Defaults to each config's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

fn output_root() -> PathBuf {
    std::env::var_os("FRACLAP_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("fraclap-out"))
}

fn load(path: &Path, kind: Option<ExperimentKind>) -> Result<ExperimentConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let parsed = match kind {
        Some(k) => parse_config_for(&text, k),
        None => parse_config(&text),
    };
    parsed.map_err(|e| format!("{}:\n{e}", path.display()))
}

fn run_one(kind: ExperimentKind, args: RunArgs) -> i32 {
    let mut cfg = match load(&args.config, Some(kind)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return exit::USAGE;
        }
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let out = args.out.unwrap_or_else(|| output_root().join(kind.name()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers.max(1))
        .build();
    let result = match pool {
        Ok(p) => p.install(|| run_experiment(&cfg, &out)),
        Err(e) => Err(RunError::Pool(e.to_string())),
    };
    report(result)
}

fn report(result: Result<fraclap::runner::RunArtifacts, RunError>) -> i32 {
    match result {
        Ok(a) => {
            print!("{}", a.summary());
            a.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run_sweep(args: SweepArgs) -> i32 {
    let mut cfgs = Vec::with_capacity(args.configs.len());
    let mut failed = false;
    for path in &args.configs {
        match load(path, None) {
            Ok(mut c) => {
                if let Some(s) = args.seed {
                    c.seed = s;
                }
                cfgs.push(c);
            }
            Err(e) => {
                eprintln!("{e}");
                failed = true;
            }
        }
    }
    if failed {
        return exit::USAGE;
    }
    let root = args.out.unwrap_or_else(|| output_root().join("sweep"));
    let runs: Vec<_> = cfgs.iter().cloned().zip(default_run_dirs(&root, &cfgs)).collect();
    let results = match sweep(&runs, args.workers) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let mut worst = exit::PASS;
    for (i, r) in results.into_iter().enumerate() {
        println!("== run {i} ({})", args.configs[i].display());
        worst = worst.max(report(r));
    }
    worst
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::PASS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = match cli.command {
        Command::List => {
            for k in ExperimentKind::ALL {
                println!("{:<18} {}", k.name(), k.description());
            }
            exit::PASS
        }
        Command::Sweep(a) => run_sweep(a),
        Command::Dispersion(a) => run_one(ExperimentKind::Dispersion, a),
        Command::AttenuationSweep(a) => run_one(ExperimentKind::AttenuationSweep, a),
        Command::FraclapCompare(a) => run_one(ExperimentKind::FraclapCompare, a),
        Command::LevyCheck(a) => run_one(ExperimentKind::LevyCheck, a),
        Command::StableDensity(a) => run_one(ExperimentKind::StableDensity, a),
        Command::Burgers(a) => run_one(ExperimentKind::Burgers, a),
        Command::Kzk(a) => run_one(ExperimentKind::Kzk, a),
        Command::Westervelt(a) => run_one(ExperimentKind::Westervelt, a),
        Command::Diffusion(a) => run_one(ExperimentKind::Diffusion, a),
    };
    ExitCode::from(code as u8)
}
