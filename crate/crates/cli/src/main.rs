use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hsbench_cli::commands::{run, Command};
use hsbench_cli::{thread_count, Failure};

#[derive(Parser)]
#[command(name = "hsbench", version, about = "Hamiltonian simulation benchmark runs")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Optimise QSP phases for exp(-itx^2) and write a phase file.
    SolvePhases(Common),
    /// Recompute the sup error of a phase file.
    VerifyPhases(Common),
    /// QUES heatmap over system sizes and degrees.
    Ques(Common),
    /// Fidelity table with QUES, sXES and reference rows.
    Benchmark(Common),
    /// Column statistics of random circuits against Haar values.
    HaarConvergence(Common),
    /// Threshold fidelity and slope along a time grid.
    Supremacy(Common),
    /// Monte-Carlo of the diagonal evolution probabilities.
    ToptMc(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

fn execute(cli: Cli) -> Result<PathBuf, Failure> {
    let (command, args) = match cli.command {
        Sub::SolvePhases(a) => (Command::SolvePhases, a),
        Sub::VerifyPhases(a) => (Command::VerifyPhases, a),
        Sub::Ques(a) => (Command::Ques, a),
        Sub::Benchmark(a) => (Command::Benchmark, a),
        Sub::HaarConvergence(a) => (Command::HaarConvergence, a),
        Sub::Supremacy(a) => (Command::Supremacy, a),
        Sub::ToptMc(a) => (Command::ToptMc, a),
    };
    if let Some(k) = thread_count(args.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Failure::Other(e.to_string()))?;
    }
    run(command, &args.config, args.seed, args.out)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(manifest) => {
            println!("{}", manifest.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("hsbench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
