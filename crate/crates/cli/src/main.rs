//! `oredil`: runs the verification suites and prints a report.
//!
//! Exit status is 0 when every check passes, 1 when a check fails, and 2 on
//! a usage error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ore_dilation::suites::{run_suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "oredil", version, about = "Exact verification suites for Ore semigroup dilations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// RNG seed; reports are identical for identical flags.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random samples per check.
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,
    /// Largest element of ℕ× in the Bost–Connes suites.
    #[arg(long = "nmax", global = true, default_value_t = 12)]
    n_max: u64,
    /// Largest level N of functions on the profinite integers.
    #[arg(long = "Nmax", global = true, default_value_t = 12)]
    level_max: u64,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Instance to run the suite on (see `oredil help <suite>`).
    #[arg(long, global = true)]
    instance: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Ore pairs and divisions. Instances: natmul, natadd, natadd2, intmat2pos.
    Ore,
    /// Group of fractions and extension of homomorphisms. Instances as for `ore`.
    Fractions,
    /// Multiplier cocycle checks and extension. Instances: bicharacter, perturbed.
    Cocycle,
    /// Unitary dilation of isometric representations. Instances: shift, twisted.
    Dilate,
    /// Direct-limit dilation of the Bost–Connes action. Instances: bost-connes, collapse, wrong-beta.
    Limit,
    /// Crossed product corner, covariance, fullness and monomial oracle. Instances: bost-connes, printed-phase.
    Crossprod,
    /// Finite-adele model of the Bost–Connes dilation. Instances: bost-connes, off-by-one.
    Bc {
        #[arg(value_parser = ["verify"])]
        action: Option<String>,
    },
    /// Every suite on its default instance.
    All,
}

impl Command {
    fn suite(&self) -> &'static str {
        match self {
            Command::Ore => "ore",
            Command::Fractions => "fractions",
            Command::Cocycle => "cocycle",
            Command::Dilate => "dilate",
            Command::Limit => "limit",
            Command::Crossprod => "crossprod",
            Command::Bc { .. } => "bc",
            Command::All => "all",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = cli.opts;
    let cfg = SuiteConfig { seed: o.seed, samples: o.samples, n_max: o.n_max, level_max: o.level_max, instance: o.instance };
    let report = match run_suite(cli.command.suite(), &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("oredil: {e}");
            return ExitCode::from(2);
        }
    };
    if o.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{}", report.render());
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
