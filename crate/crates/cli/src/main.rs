//! `cohcalc`: check graded-dimension identities for wedges of co-H spaces and
//! write deterministic JSON reports.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cohcalc_core::linalg::is_prime;

use crate::commands::{CliError, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    Prime(u64),
    Rationals,
}

fn parse_field(s: &str) -> Result<FieldChoice, String> {
    if s.eq_ignore_ascii_case("q") {
        return Ok(FieldChoice::Rationals);
    }
    let p: u64 = s
        .parse()
        .map_err(|_| format!("expected a prime or Q, got {s:?}"))?;
    if p >= 1 << 32 || !is_prime(p) {
        return Err(format!("{p} is not a prime below 2^32"));
    }
    Ok(FieldChoice::Prime(p))
}

#[derive(Debug, Parser)]
#[command(name = "cohcalc", version)]
#[command(
    about = "Verify loop-space and Whitehead-product splittings at the level of Poincaré series"
)]
pub struct Cli {
    /// Truncation degree D; series are exact through this degree
    #[arg(long, global = true, env = "COHCALC_DEGREE", default_value_t = 32,
          value_parser = clap::value_parser!(u64).range(4..=4096))]
    degree: u64,

    /// Coefficient field: a prime p, or Q for the rationals
    #[arg(long, global = true, env = "COHCALC_FIELD", default_value = "101", value_parser = parse_field)]
    field: FieldChoice,

    /// Directory for JSON reports
    #[arg(
        long,
        global = true,
        env = "COHCALC_OUT",
        default_value = "cohcalc-reports"
    )]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the series identities for a pair of spaces
    Verify {
        g: PathBuf,
        h: PathBuf,
        /// Restrict to these identities (repeatable); all by default
        #[arg(long = "identity", value_enum)]
        identities: Vec<commands::Identity>,
    },
    /// Peel Ω(G ∨ H) into loop spaces of products up to a length threshold
    Peel {
        g: PathBuf,
        h: PathBuf,
        /// Final length threshold k
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Also list the products with bottom cell at most this degree
        #[arg(long)]
        basis_below: Option<usize>,
    },
    /// Brute-force spanning check in the tensor algebra
    Oracle {
        g: PathBuf,
        h: PathBuf,
        /// Highest degree to check
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// Telescope checks on explicit matrices or suspension pairs
    Telescope {
        #[command(subcommand)]
        action: TelescopeAction,
    },
}

#[derive(Debug, Subcommand)]
enum TelescopeAction {
    /// Splitting V = T(E) ⊕ T(1+E) for a map with E² = -E
    Split { endo: PathBuf },
    /// Stable ranks of F1·F2 and F2·F1 agree
    Swap { left: PathBuf, right: PathBuf },
    /// X ∘ Y as the telescope of e₁e₂ for suspensions X, Y
    Circle {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let config = commands::Config {
        degree: cli.degree as usize,
        field: cli.field,
        out: cli.out.clone(),
    };
    match &cli.command {
        Command::Verify { g, h, identities } => commands::verify(&config, g, h, identities),
        Command::Peel {
            g,
            h,
            k,
            basis_below,
        } => commands::peel(&config, g, h, *k, *basis_below),
        Command::Oracle { g, h, cap } => commands::oracle(&config, g, h, *cap),
        Command::Telescope { action } => match action {
            TelescopeAction::Split { endo } => commands::telescope_split(&config, endo),
            TelescopeAction::Swap { left, right } => commands::telescope_swap(&config, left, right),
            TelescopeAction::Circle { x, y, cap } => {
                commands::telescope_circle(&config, x, y, *cap)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for (name, pass) in &outcome.verdicts {
                println!("{} {name}", if *pass { "PASS" } else { "FAIL" });
            }
            println!("report: {}", outcome.report.display());
            if outcome.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
