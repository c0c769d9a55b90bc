//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 invalid config or usage, 2 verify-suite failure,
//! 3 I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use qkernel_harness::config::ExperimentConfig;
use qkernel_harness::problem::{generate_problem, ProblemFile};
use qkernel_harness::sweep::{run_sweep, SweepAxis};
use qkernel_harness::trial::{run_campaign, trial_problem_seed};
use qkernel_harness::verify::{verify_suite, FaultMode};
use qkernel_harness::{HarnessError, Result};

use qkernel_core::bounds::{remark1_rhs, theorem1_rhs, theorem2_rhs, BoundReport};

#[derive(Parser)]
#[command(
    name = "qkernel",
    version,
    about = "Simulator of noisy quantum kernel regression with concentration and bound checks"
)]
struct Cli {
    /// JSON config file; omitted keys take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the config's root seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the config's trial count.
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Print the effective config as JSON and exit without running.
    #[arg(long, global = true)]
    print_config: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a problem file (dataset, observable, kernels) for trial 0.
    Gen {
        /// Output path for the problem JSON (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded campaign of independent trials.
    Run {
        /// Output base path: writes BASE.csv and BASE.json (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one campaign per value along a single axis.
    Sweep {
        /// Axis to vary: m | p | n | lambda.
        #[arg(long)]
        axis: String,
        /// Comma-separated strictly increasing values.
        #[arg(long)]
        values: String,
        /// Output base path: writes BASE.csv and BASE.json (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property verification suite.
    Verify {
        /// Inject a deliberate fault: none | no_shift | biased_sampler.
        #[arg(long, default_value = "none")]
        fault: String,
        /// Write the JSON report here as well as to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the bound right-hand sides for a generated problem file.
    Bounds {
        /// Problem JSON produced by gen.
        #[arg(long)]
        problem: PathBuf,
    },
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(trials) = cli.trials {
        config.trials = trials;
    }
    config.validate()?;
    Ok(config)
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| HarnessError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn with_extension(base: &Path, ext: &str) -> PathBuf {
    let mut name = base.as_os_str().to_os_string();
    name.push(".");
    name.push(ext);
    PathBuf::from(name)
}

fn bound_json(report: &BoundReport) -> serde_json::Value {
    serde_json::json!({
        "term_regularizer": report.term_regularizer,
        "term_kernel": report.term_kernel,
        "term_confidence": report.term_confidence,
        "total": report.total,
    })
}

fn cmd_gen(config: &ExperimentConfig, out: Option<&Path>) -> Result<()> {
    let seed = trial_problem_seed(config.seed, 0);
    let problem = generate_problem(config, seed)?;
    let file = ProblemFile::from_problem(config, seed, &problem);
    let text = file.to_json_pretty();
    match out {
        Some(path) => write_file(path, &text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_run(config: &ExperimentConfig, out: Option<&Path>) -> Result<()> {
    let campaign = run_campaign(config)?;
    let json = campaign.to_json_pretty();
    match out {
        Some(base) => {
            write_file(&with_extension(base, "csv"), &campaign.to_csv())?;
            write_file(&with_extension(base, "json"), &json)?;
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_sweep(
    config: &ExperimentConfig,
    axis: &str,
    values: &str,
    out: Option<&Path>,
) -> Result<()> {
    let axis = SweepAxis::parse(axis)?;
    let values: Vec<f64> = values
        .split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| {
                HarnessError::Config(format!("sweep value \"{s}\" is not a number"))
            })
        })
        .collect::<Result<_>>()?;
    let table = run_sweep(config, axis, &values)?;
    let json = table.to_json_pretty();
    match out {
        Some(base) => {
            write_file(&with_extension(base, "csv"), &table.to_csv())?;
            write_file(&with_extension(base, "json"), &json)?;
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_verify(config: &ExperimentConfig, fault: &str, out: Option<&Path>) -> Result<()> {
    let fault = FaultMode::parse(fault)?;
    let report = verify_suite(config, fault);
    let text = report.to_json_pretty();
    println!("{text}");
    if let Some(path) = out {
        write_file(path, &text)?;
    }
    if !report.passed {
        return Err(HarnessError::VerifyFailed {
            failed: report.failed_names(),
        });
    }
    Ok(())
}

fn cmd_bounds(problem_path: &Path) -> Result<()> {
    let text = fs::read_to_string(problem_path).map_err(|e| HarnessError::Io {
        path: problem_path.to_path_buf(),
        source: e,
    })?;
    let file = ProblemFile::from_json(&text)?;
    file.config.validate()?;
    let kernel = file.kernel_exact_matrix()?;
    let lambda = file.config.lambda;
    let delta = file.config.delta;
    let theorem1 = theorem1_rhs(&file.labels, &kernel, lambda, delta)?;
    let remark1 = remark1_rhs(&file.labels, &kernel, lambda, delta)?;
    let theorem2 = theorem2_rhs(&file.labels, &kernel, lambda, file.config.p, delta)?;
    let doc = serde_json::json!({
        "train_size": file.labels.len(),
        "lambda": lambda,
        "p": file.config.p,
        "delta": delta,
        "theorem1": bound_json(&theorem1),
        "remark1": bound_json(&remark1),
        "theorem2": bound_json(&theorem2),
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let config = load_config(cli)?;
    if cli.print_config {
        println!("{}", config.to_json_pretty());
        return Ok(());
    }
    match &cli.command {
        Command::Gen { out } => cmd_gen(&config, out.as_deref()),
        Command::Run { out } => cmd_run(&config, out.as_deref()),
        Command::Sweep { axis, values, out } => {
            cmd_sweep(&config, axis, values, out.as_deref())
        }
        Command::Verify { fault, out } => cmd_verify(&config, fault, out.as_deref()),
        Command::Bounds { problem } => cmd_bounds(problem),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            process::exit(code);
        }
    };
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        process::exit(e.exit_code());
    }
}
