use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use vanhove_harness::config::{default_toml, ExperimentKind, RunConfig};
use vanhove_harness::error::{HarnessError, HarnessResult};
use vanhove_harness::run_experiment;

#[derive(Parser)]
#[command(name = "vanhove", version, about = "Checks of the van Hove model against independent oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bounded-volume closed forms against truncated Fock traces.
    VerifyBounded(RunArgs),
    /// Weyl and resolvent relations, cocycle and group law.
    Relations(RunArgs),
    /// KMS condition on Weyl and resolvent generators.
    Kms(RunArgs),
    /// Time clustering with and without a condensate.
    Cluster(RunArgs),
    /// Infrared classification table and ideal containment.
    IrTable(RunArgs),
    /// Removal of the source cutoffs.
    CutoffSweep(RunArgs),
    /// Selection criterion for the shifted field.
    Selection(RunArgs),
    /// Lists the experiments, their claims and default configuration.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration; built-in defaults when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for randomized draws; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for the CSV and JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the experiment's primary tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
}

const DEFAULT_OUT: &str = "vanhove-out";

fn load(args: &RunArgs) -> HarnessResult<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::builtin(),
    };
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    if args.tolerance.is_some() {
        cfg.tolerance = args.tolerance;
    }
    if cfg.dimension_cap.is_none() {
        if let Ok(v) = std::env::var("VANHOVE_DIM_CAP") {
            let cap = v
                .parse()
                .map_err(|_| HarnessError::Config(format!("VANHOVE_DIM_CAP: `{v}` is not a dimension")))?;
            cfg.dimension_cap = Some(cap);
        }
    }
    Ok(cfg)
}

fn run(kind: ExperimentKind, args: &RunArgs) -> HarnessResult<bool> {
    let cfg = load(args)?;
    let out = args.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let report = run_experiment(kind, &cfg)?;
    let (csv, json) = report.write(&out)?;
    let s = report.summary();
    println!(
        "{}: {} rows, {} passed, {} failed, max residual {:.3e}",
        s.experiment, s.rows, s.passed, s.failed, s.max_residual
    );
    for row in report.failures().take(20) {
        println!(
            "FAIL {} [{}] residual {:.3e} > tolerance {:.3e}",
            row.experiment_id, row.input_descriptor, row.residual, row.tolerance
        );
    }
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(report.pass())
}

fn list() {
    for kind in ExperimentKind::ALL {
        println!("{kind}");
        println!("  {}", kind.claims());
        println!("  default config:");
        for line in default_toml(kind).lines() {
            println!("    {line}");
        }
        println!();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::VerifyBounded(a) => (ExperimentKind::VerifyBounded, a),
        Command::Relations(a) => (ExperimentKind::Relations, a),
        Command::Kms(a) => (ExperimentKind::Kms, a),
        Command::Cluster(a) => (ExperimentKind::Cluster, a),
        Command::IrTable(a) => (ExperimentKind::IrTable, a),
        Command::CutoffSweep(a) => (ExperimentKind::CutoffSweep, a),
        Command::Selection(a) => (ExperimentKind::Selection, a),
        Command::List => {
            list();
            return ExitCode::SUCCESS;
        }
    };
    match run(kind, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
