use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tisparse::reduction::census::CensusBudget;
use tisparse::spectral::{Method, SpectralConfig, ITERATIVE_MAX_DIM};
use tisparse_cli::{cmd_build, cmd_census, cmd_reduce, cmd_solve, cmd_stoq, cmd_verify, CliError, Run, Status};

#[derive(Parser)]
#[command(name = "tisparse", version, about = "Build, sparsify, solve and verify lattice promise-problem instances")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Eigensolver; by default dense for small dimensions, iterative above.
    #[arg(long, global = true, value_enum)]
    method: Option<MethodArg>,
    /// Residual target relative to the operator norm.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Seed for the iterative solver's start vector.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest Hilbert-space dimension to build or diagonalize.
    #[arg(long, global = true, default_value_t = ITERATIVE_MAX_DIM)]
    max_dim: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Record wall-clock time in the report (off by default for reproducible output).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Dense,
    Iterative,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Build the operator and dump it in coordinate form.
    Build {
        instance: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Sparsify an instance and print it with its certificate chain.
    Reduce {
        instance: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Decide the promise problem with the spectral oracle.
    Solve { instance: PathBuf },
    /// Check a certificate chain (computed, embedded, or from --chain) against the oracle.
    Verify {
        instance: PathBuf,
        #[arg(long)]
        chain: Option<PathBuf>,
    },
    /// Count sparse instances per lattice side and fit the growth exponent.
    Census {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = CensusBudget::STANDARD.free_fields)]
        free_fields: usize,
        #[arg(long, default_value_t = CensusBudget::STANDARD.int_coeff)]
        int_coeff: usize,
        #[arg(long, default_value_t = CensusBudget::STANDARD.frac_coeff)]
        frac_coeff: usize,
        /// Cross-check each count by exhaustive enumeration where feasible.
        #[arg(long)]
        enumerate: bool,
    },
    /// Apply the bipartite sign conjugation and check stoquasticity.
    Stoq {
        instance: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn config(g: &Global) -> Result<SpectralConfig, CliError> {
    if !(g.tolerance > 0.0 && g.tolerance.is_finite()) {
        return Err(CliError::new(Status::Usage, "--tolerance must be a positive number"));
    }
    let mut cfg = SpectralConfig {
        tolerance: g.tolerance,
        seed: g.seed,
        max_dim: g.max_dim,
        ..SpectralConfig::default()
    };
    cfg.method = g.method.map(|m| match m {
        MethodArg::Dense => Method::Dense,
        MethodArg::Iterative => Method::Iterative,
    });
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(Run, Option<PathBuf>), CliError> {
    let cfg = config(&cli.global)?;
    let timing = cli.global.timing;
    Ok(match &cli.command {
        Command::Build { instance, out } => (cmd_build(instance, &cfg, timing)?, out.clone()),
        Command::Reduce { instance, out } => (cmd_reduce(instance, timing)?, out.clone()),
        Command::Solve { instance } => (cmd_solve(instance, &cfg, timing)?, None),
        Command::Verify { instance, chain } => (cmd_verify(instance, chain.as_deref(), &cfg, timing)?, None),
        Command::Census {
            n_min,
            n_max,
            free_fields,
            int_coeff,
            frac_coeff,
            enumerate,
        } => {
            let budget = CensusBudget {
                free_fields: *free_fields,
                int_coeff: *int_coeff,
                frac_coeff: *frac_coeff,
            };
            (cmd_census(*n_min, *n_max, budget, *enumerate, timing)?, None)
        }
        Command::Stoq { instance, out } => (cmd_stoq(instance, &cfg, timing)?, out.clone()),
    })
}

/// Text format: the artifact goes to stdout unless `--out` is given, and the
/// summary then moves to stderr so stdout stays a valid document.
/// Machine format: stdout carries only the report.
fn emit(run: &Run, out: Option<&PathBuf>, format: Format) -> Result<(), CliError> {
    if let (Some(path), Some(artifact)) = (out, &run.artifact) {
        fs::write(path, artifact)
            .map_err(|e| CliError::new(Status::Parse, format!("cannot write {}: {e}", path.display())))?;
    }
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    for w in &run.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    match format {
        Format::Machine => {
            let _ = stdout.write_all(run.report.to_machine().as_bytes());
        }
        Format::Text => {
            let artifact_on_stdout = out.is_none() && run.artifact.is_some();
            if artifact_on_stdout {
                let _ = stdout.write_all(run.artifact.as_deref().unwrap_or_default().as_bytes());
            }
            if let Some(body) = &run.body {
                let _ = stdout.write_all(body.as_bytes());
            }
            let summary = run.report.text_summary(run.body.is_some());
            if artifact_on_stdout {
                let _ = stderr.write_all(summary.as_bytes());
            } else {
                let _ = stdout.write_all(summary.as_bytes());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { Status::Usage.code() } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    let result = run(&cli).and_then(|(run, out)| emit(&run, out.as_ref(), cli.global.format).map(|_| run.status));
    match result {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status.code() as u8)
        }
    }
}
