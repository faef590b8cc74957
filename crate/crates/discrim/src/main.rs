use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use discrim::cli::{self, OutputFormat, SweepFamily, SweepSpec};

#[derive(Parser)]
#[command(
    name = "discrim",
    version,
    about = "Optimal minimum-error discrimination of qubit ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the optimal measurement for an ensemble document.
    Solve {
        /// Ensemble document (JSON).
        #[arg(long)]
        input: PathBuf,
        /// Override the certificate tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = FormatArg::Report)]
        format: FormatArg,
    },
    /// Sweep the shared prior of a state family and write a CSV file.
    Sweep {
        #[arg(long, value_enum, default_value_t = FamilyArg::MirrorSymmetric)]
        family: FamilyArg,
        /// Base ensemble document (custom-grid family only).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Mirror angle in radians.
        #[arg(long, default_value_t = 2.0 * std::f64::consts::PI / 3.0)]
        theta: f64,
        #[arg(long)]
        p_start: f64,
        #[arg(long)]
        p_stop: f64,
        #[arg(long)]
        p_step: f64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Add a dual-oracle column.
        #[arg(long)]
        with_oracle: bool,
    },
    /// Check a measurement document against the optimality certificate.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Measurement document (or machine solve output).
        #[arg(long)]
        povm: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Solve, then Monte Carlo sample the optimal measurement.
    Simulate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Report,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    MirrorSymmetric,
    CustomGrid,
}

fn run(command: Command) -> discrim::Result<i32> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Solve { input, tol, format } => {
            let format = match format {
                FormatArg::Report => OutputFormat::Report,
                FormatArg::Machine => OutputFormat::Machine,
            };
            cli::run_solve(&input, tol, format, &mut out)
        }
        Command::Sweep {
            family,
            input,
            theta,
            p_start,
            p_stop,
            p_step,
            out: out_path,
            with_oracle,
        } => {
            let family = match family {
                FamilyArg::MirrorSymmetric => SweepFamily::MirrorSymmetric,
                FamilyArg::CustomGrid => match input {
                    Some(input) => SweepFamily::CustomGrid { input },
                    None => {
                        eprintln!("error: --family custom-grid requires --input");
                        return Ok(2);
                    }
                },
            };
            let spec = SweepSpec {
                family,
                theta,
                p_start,
                p_stop,
                p_step,
                with_oracle,
            };
            cli::run_sweep(&spec, &out_path)
        }
        Command::Verify { input, povm, tol } => cli::run_verify(&input, &povm, tol, &mut out),
        Command::Simulate {
            input,
            samples,
            seed,
            tol,
        } => cli::run_simulate(&input, samples, seed, tol, &mut out),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    };
    std::process::exit(code);
}
