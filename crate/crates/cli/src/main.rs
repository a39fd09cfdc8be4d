//! `lvhecke`: load and check orbit data, compute blocks, canonical classes,
//! Hecke actions and fiber polynomials, and run the bimodule verifications.
//!
//! Data arguments accept `builtin:NAME` for packaged data and a file path
//! otherwise. Tables go to stdout, diagnostics to stderr. Exit status is 0
//! on success, 1 when a datum or a verification fails, 2 on usage errors.

mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use failure::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "lvhecke",
    version,
    about = "Hecke modules of orbit data and their canonical bases"
)]
struct Cli {
    /// Output format for tables.
    #[arg(long, value_enum, global = true, default_value_t = Format::Tsv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a datum and certify the quadratic and braid relations.
    Check { datum: String },
    /// List the T_s-connected components of the parameters.
    Blocks { datum: String },
    /// Compute canonical classes and KLV polynomials.
    Klv(KlvArgs),
    /// Apply T_s (or b_s) along a word to a vector.
    Tsact(TsactArgs),
    /// Fiber Poincaré polynomials of a resolution, one per orbit.
    Fibers {
        datum: String,
        /// Resolution spec JSON file.
        #[arg(long)]
        spec: PathBuf,
    },
    /// Generate data files.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Bimodule verifications.
    #[command(subcommand)]
    Bimod(BimodCommand),
    /// Equivariant Poincaré series from invariant degrees.
    Poincare(PoincareArgs),
}

#[derive(Args, Debug)]
pub struct KlvArgs {
    pub datum: String,
    /// Extra parameters to seed as their own classes (comma separated ids).
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<String>,
    /// Report classes in the parameter basis instead of the hat basis.
    #[arg(long)]
    pub raw_ch: bool,
    /// Report KLV polynomials in q instead of class coefficients.
    #[arg(long)]
    pub polys: bool,
    /// Bound on productive rounds (default: parameters times rank).
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Ts,
    Bs,
}

#[derive(Args, Debug)]
pub struct TsactArgs {
    pub datum: String,
    /// Terms `ID` or `ID=COEF`, e.g. `O_triv=v + v^-1`; repeat or separate with commas.
    #[arg(long, required = true, value_delimiter = ',')]
    pub elem: Vec<String>,
    /// 0-based generator indices, applied left to right.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub word: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Op::Ts)]
    pub op: Op,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// The datum of a complex group: one parameter per Weyl group element.
    Complex {
        /// Cartan type such as A2, B2, A1xA2.
        #[arg(long = "type")]
        cartan: String,
        /// Output file (stdout when omitted).
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum BimodCommand {
    /// Run every check for a ring spec.
    Verify {
        /// `builtin:a1`, `builtin:a2`, `builtin:a1xa1-diag`, or a JSON file.
        #[arg(long)]
        rings: String,
        /// Cohomological degree bound.
        #[arg(long, default_value_t = 8)]
        degree: u32,
    },
}

#[derive(Args, Debug)]
pub struct PoincareArgs {
    /// Degrees of the fundamental invariants of W_K.
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    pub degrees_k: Vec<u32>,
    /// Degrees of the fundamental invariants of W.
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    pub degrees_g: Vec<u32>,
    /// Number of polynomial generators of R (default: number of W degrees).
    #[arg(long)]
    pub rank: Option<u32>,
    /// Truncation degree in t.
    #[arg(long, default_value_t = 20)]
    pub degree: usize,
}

fn run(cli: Cli) -> Result<String, Failure> {
    let fmt = cli.format;
    match cli.command {
        Command::Check { datum } => commands::check(&datum, fmt),
        Command::Blocks { datum } => commands::blocks(&datum, fmt),
        Command::Klv(args) => commands::klv(&args, fmt),
        Command::Tsact(args) => commands::tsact(&args, fmt),
        Command::Fibers { datum, spec } => commands::fibers(&datum, &spec, fmt),
        Command::Gen(GenCommand::Complex { cartan, output }) => commands::gen_complex(&cartan, output.as_deref()),
        Command::Bimod(BimodCommand::Verify { rings, degree }) => commands::bimod_verify(&rings, degree, fmt),
        Command::Poincare(args) => commands::poincare(&args, fmt),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (out, code) = f.report();
            // A failed verification still prints its table, so nothing the
            // run computed is lost.
            if let Some(out) = out {
                print!("{out}");
            }
            ExitCode::from(code)
        }
    }
}
