//! `gessel`: constants, gluing functions, generating-function values and exact
//! counts for Gessel's quadrant walks, plus an identity-check suite.

mod commands;
mod config;
mod error;
mod json;
mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use config::{Format, Overrides, RunConfig};
use error::CliError;
use gessel::C64;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "gessel", version, about = "Generating functions of Gessel's quadrant walks")]
struct Cli {
    /// Key-value config file; flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Weight per step, in ]0,1/4[.
    #[arg(long, global = true, allow_negative_numbers = true)]
    z: Option<f64>,
    /// Initial quadrature node count.
    #[arg(long, global = true)]
    nodes: Option<usize>,
    /// Node doublings before quadrature gives up.
    #[arg(long, global = true)]
    max_doublings: Option<u32>,
    /// Stopping tolerance of the node-doubling driver.
    #[arg(long, global = true)]
    target_rel_err: Option<f64>,
    /// Tolerance of every identity check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output format for `coeffs`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Re-check gluing-function values against the elliptic formula.
    #[arg(long, global = true, value_name = "BOOL")]
    crosscheck: Option<bool>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Branch points, periods and the gluing cubic's constants.
    Constants,
    /// Run the identity suite; exit 1 if any check fails.
    Verify,
    /// Write the X-curve and Y-curve as CSV.
    Curves {
        /// Samples per side of each cut.
        #[arg(long, default_value_t = 500)]
        n: usize,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Evaluate Q(x, y, z).
    Gf {
        #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
        x: C64,
        #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
        y: C64,
    },
    /// Evaluate a gluing function.
    Cgf {
        #[arg(long, value_enum)]
        which: WhichArg,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        t: C64,
    },
    /// Exact walk counts as decimal strings.
    Coeffs {
        #[arg(long)]
        kmax: usize,
        #[arg(long, requires = "j")]
        i: Option<usize>,
        #[arg(long, requires = "i")]
        j: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WhichArg {
    W,
    Wt,
}

/// `RE` or `RE,IM`.
fn parse_complex(s: &str) -> Result<C64, String> {
    let part = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("{p:?} is not a number"));
    match s.split_once(',') {
        Some((re, im)) => Ok(C64::new(part(re)?, part(im)?)),
        None => Ok(C64::new(part(s)?, 0.0)),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let flags = Overrides {
        z: cli.z,
        nodes: cli.nodes,
        max_doublings: cli.max_doublings,
        target_rel_err: cli.target_rel_err,
        tol: cli.tol,
        format: cli.format,
        crosscheck: cli.crosscheck,
    };
    let cfg = RunConfig::load(cli.config.as_deref(), &flags)?;
    match cli.command {
        Command::Constants => commands::constants(&cfg),
        Command::Verify => commands::verify(&cfg),
        Command::Curves { n, out } => commands::curves(&cfg, n, &out),
        Command::Gf { x, y } => commands::gf(&cfg, x, y),
        Command::Cgf { which, t } => {
            let which = match which {
                WhichArg::W => gessel::cgf::Which::W,
                WhichArg::Wt => gessel::cgf::Which::WTilde,
            };
            commands::cgf(&cfg, which, t)
        }
        Command::Coeffs { kmax, i, j } => commands::coeffs(&cfg, kmax, i.zip(j)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
