use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::Failure;

/// Forests, parking functions and the bijection between them.
#[derive(Debug, Parser)]
#[command(name = "parkforest", version)]
struct Cli {
    /// Emit structured (JSON) output instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Inline input (comma-separated or JSON); `-` or absent reads stdin.
    #[arg(conflicts_with = "file")]
    input: Option<String>,

    /// Read the input from a file.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl Input {
    fn read(&self) -> Result<String, String> {
        match (&self.input, &self.file) {
            (Some(s), None) if s != "-" => Ok(s.clone()),
            (_, Some(path)) => std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display())),
            _ => {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| format!("cannot read stdin: {e}"))?;
                Ok(buf)
            }
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Map a forest (parent sequence, 0 = root) to its parking function.
    Map {
        #[command(flatten)]
        input: Input,
        /// Show every intermediate tree.
        #[arg(long)]
        trace: bool,
    },
    /// Map a parking function back to its forest.
    Unmap {
        #[command(flatten)]
        input: Input,
        /// Show the parking table and the reconstruction.
        #[arg(long)]
        trace: bool,
    },
    /// Run the parking algorithm on any positive preference sequence.
    Pa {
        #[command(flatten)]
        input: Input,
    },
    /// Statistics of a forest or a parking function.
    Stats {
        #[command(flatten)]
        input: Input,
        /// Treat the input as a forest.
        #[arg(long, conflicts_with = "parking")]
        forest: bool,
        /// Treat the input as a parking function.
        #[arg(long)]
        parking: bool,
    },
    /// Check the bijection exhaustively or on random instances.
    Verify {
        #[arg(long)]
        n: usize,
        /// Check every forest and parking function of size n (n <= 7).
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        exhaustive: bool,
        /// Number of random forests and parking functions to round-trip.
        #[arg(long, value_name = "COUNT")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generating polynomials and their product formulas.
    Poly {
        #[arg(long)]
        n: usize,
        /// Check every identity; exit 1 on any mismatch.
        #[arg(long)]
        compare_product: bool,
    },
}

fn run(cli: Cli) -> Result<String, Failure> {
    let json = cli.json;
    match cli.command {
        Command::Map { input, trace } => {
            commands::map(&input.read().map_err(Failure::input)?, trace, json)
        }
        Command::Unmap { input, trace } => {
            commands::unmap(&input.read().map_err(Failure::input)?, trace, json)
        }
        Command::Pa { input } => commands::pa(&input.read().map_err(Failure::input)?, json),
        Command::Stats {
            input,
            forest,
            parking,
        } => {
            let kind = match (forest, parking) {
                (true, _) => Some(commands::Kind::Forest),
                (_, true) => Some(commands::Kind::Parking),
                _ => None,
            };
            commands::stats(&input.read().map_err(Failure::input)?, kind, json)
        }
        Command::Verify {
            n,
            exhaustive,
            random,
            seed,
        } => {
            if exhaustive {
                commands::verify_exhaustive(n, json)
            } else {
                let count = random.expect("clap requires --exhaustive or --random");
                commands::verify_random(n, count, seed, json)
            }
        }
        Command::Poly { n, compare_product } => commands::poly(n, compare_product, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure {
            code,
            message,
            output,
        }) => {
            if let Some(out) = output {
                print!("{out}");
            }
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
