use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mae_core::pipeline::{self, Command, Input, Options};

#[derive(Parser)]
#[command(name = "mae", version, about = "Equivalence-method pipelines for Monge-Ampere systems")]
struct Cli {
    #[command(subcommand)]
    command: Top,
}

#[derive(Subcommand)]
enum Top {
    /// Run pipeline stages: `mae run [FILE] STAGE`
    Run(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    Classify,
    Invariants,
    #[value(alias = "cartan-test")]
    Cartan,
    VerifyAlgebra,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    EllipticReduced,
}

#[derive(Args)]
struct RunArgs {
    /// An optional system file followed by the stage to run
    #[arg(num_args = 1..=2, required = true, value_name = "[FILE] STAGE")]
    args: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the random Cartan probes
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random probes per character
    #[arg(long)]
    probes: Option<usize>,
    /// Degree bound for the Euler-Lagrange certificate search
    #[arg(long)]
    el_degree: Option<u32>,
    /// Use a built-in structure instead of a file
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let Top::Run(a) = Cli::parse().command;
    let (file, stage) = match a.args.as_slice() {
        [stage] => (None, stage),
        [file, stage] => (Some(PathBuf::from(file)), stage),
        _ => unreachable!("clap enforces the arity"),
    };
    let stage = match Stage::from_str(stage, true) {
        Ok(s) => s,
        Err(_) => return usage(format!("unknown stage `{stage}` (classify, invariants, cartan, verify-algebra, all)")),
    };
    let command = match stage {
        Stage::Classify => Command::Classify,
        Stage::Invariants => Command::Invariants,
        Stage::Cartan => Command::Cartan,
        Stage::VerifyAlgebra => Command::VerifyAlgebra,
        Stage::All => Command::All,
    };
    let input = match (file, a.builtin) {
        (Some(_), Some(_)) => return usage("give either a file or --builtin, not both"),
        (Some(path), None) => match pipeline::parse_system(&path) {
            Ok(file) => Input::System {
                source: path.display().to_string(),
                file,
            },
            Err(e) => return usage(e),
        },
        (None, Some(Builtin::EllipticReduced)) => {
            if matches!(command, Command::Classify | Command::Invariants) {
                return usage("the elliptic-reduced builtin supports only `cartan`, `verify-algebra` and `all`");
            }
            Input::EllipticReduced
        }
        (None, None) if matches!(command, Command::VerifyAlgebra) => Input::None,
        (None, None) => return usage("this stage needs a system file or --builtin"),
    };
    let opts = Options {
        el_degree: a.el_degree,
        probes: a.probes,
        seed: a.seed,
    };
    let report = pipeline::run(&input, command, &opts);
    match a.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
    }
    ExitCode::from(report.exit_code() as u8)
}
