use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use adelic_chars::cli::{self, EXIT_VERIFY};
use adelic_chars::verify::Suite;

/// Exact-arithmetic classification of characters of groups L ⋉ U over Q.
#[derive(Parser)]
#[command(name = "adelic-chars", version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a system description file against all axioms.
    Validate { system: PathBuf },
    /// Classify a character: k, p, chi, orbit direction, L membership.
    Classify {
        system: PathBuf,
        lambda: PathBuf,
        /// Number of Levi membership samples in the report.
        #[arg(long, default_value_t = cli::DEFAULT_SAMPLES)]
        samples: usize,
        /// Seed for the sampled membership elements.
        #[arg(long, default_value_t = cli::DEFAULT_SEED)]
        seed: u64,
        /// Emit the canonical JSON document instead of text.
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// Emit the human-readable report (default).
        #[arg(long)]
        text: bool,
    },
    /// Decide whether two characters share a coadjoint quasi-orbit.
    Quasiorbit {
        system: PathBuf,
        lambda1: PathBuf,
        lambda2: PathBuf,
    },
    /// Run the seeded property suites against a system.
    Verify {
        system: PathBuf,
        /// core | traces | duality | all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit a catalog system with its characters and expected reports.
    Catalog {
        /// abelian-sl2 | heisenberg-1 | heisenberg-2 | free-3
        name: String,
        /// Directory the golden files are written to.
        #[arg(long)]
        emit: PathBuf,
    },
}

fn run(args: Args) -> Result<i32, adelic_chars::Error> {
    match args.command {
        Command::Validate { system } => {
            println!("{}", cli::cmd_validate(&system)?);
            Ok(0)
        }
        Command::Classify {
            system,
            lambda,
            samples,
            seed,
            json,
            text: _,
        } => {
            let out = cli::cmd_classify(&system, &lambda, samples, seed)?;
            if json {
                print!("{}", cli::to_canonical_json(&out.document));
            } else {
                print!("{}", out.text);
            }
            Ok(0)
        }
        Command::Quasiorbit {
            system,
            lambda1,
            lambda2,
        } => {
            let out = cli::cmd_quasiorbit(&system, &lambda1, &lambda2)?;
            println!("key 1: {}", cli::render_key(&out.key1));
            println!("key 2: {}", cli::render_key(&out.key2));
            println!("verdict: {}", if out.same { "same" } else { "different" });
            Ok(0)
        }
        Command::Verify {
            system,
            suite,
            seed,
        } => {
            let suite = Suite::parse(&suite)
                .ok_or_else(|| adelic_chars::Error::Parse(format!("unknown suite {suite:?}")))?;
            let doc = cli::cmd_verify(&system, suite, seed)?;
            print!("{}", cli::to_canonical_json(&doc));
            Ok(if doc.failed == 0 { 0 } else { EXIT_VERIFY })
        }
        Command::Catalog { name, emit } => {
            for path in cli::cmd_catalog(&name, &emit)? {
                println!("wrote {path}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(cli::exit_code_for(&err) as u8)
        }
    }
}
