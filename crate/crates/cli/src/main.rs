//! `wcm`: analysis and removal of absorbing-set objects from the command
//! line.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wcm_core::formats::parse_mask;
use wcm_core::Mode;

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "wcm", version, about = "Weight consistency matrix analysis for non-binary LDPC codes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Primitive polynomial as a bitmask (0b…, 0x… or decimal); overrides the file header.
    #[arg(long, global = true, value_parser = poly_arg)]
    pub field_poly: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Gast)]
    pub mode: ModeArg,
    /// Largest null-space dimension searched for a full-support vector.
    #[arg(long, global = true, default_value_t = wcm_core::linalg::DEFAULT_SUPPORT_CAP)]
    pub support_cap: usize,
    /// Most value assignments the exhaustive oracle may visit.
    #[arg(long, global = true, default_value_t = wcm_core::removal::DEFAULT_ORACLE_CAP)]
    pub oracle_cap: u64,
    /// Weight assignments the removal search may try per object.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    pub max_evaluations: u64,
    /// Output file for the command's main artifact.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Gast,
    Ost,
    Eas,
    Bast,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Gast => Mode::Gast,
            ModeArg::Ost => Mode::Ost,
            ModeArg::Eas => Mode::Eas,
            ModeArg::Bast => Mode::Bast,
        }
    }
}

fn poly_arg(s: &str) -> Result<u32, String> {
    parse_mask(s).ok_or_else(|| format!("`{s}` is not a bitmask"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Gast,
    Ost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PhasesArg {
    Gast,
    #[value(name = "gast+ost")]
    GastOst,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a configuration and report its WCMs and their weight conditions.
    Analyze { config: PathBuf },
    /// Remove one object by edge-weight changes; writes the updated configuration.
    Remove {
        config: PathBuf,
        /// Same as --mode ost.
        #[arg(long)]
        ost: bool,
    },
    /// Remove a list of objects from a code; writes the updated code.
    Optimize {
        code: PathBuf,
        targets: PathBuf,
        #[arg(long, value_enum, default_value_t = PhasesArg::Gast)]
        phases: PhasesArg,
    },
    /// Scan a code's connected VN subsets for objects; writes a target list.
    Enumerate {
        code: PathBuf,
        #[arg(long)]
        max_a: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Gast)]
        kind: KindArg,
        /// Subsets examined before giving up.
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
    },
    /// Exhaustive check of a configuration against its WCM verdict.
    Verify { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global;
    let res = match cli.cmd {
        Command::Analyze { config } => commands::analyze(&config, &g),
        Command::Remove { config, ost } => {
            let mode = if ost { Mode::Ost } else { g.mode.into() };
            commands::remove(&config, mode, &g)
        }
        Command::Optimize { code, targets, phases } => commands::optimize(&code, &targets, phases, &g),
        Command::Enumerate { code, max_a, kind, budget } => commands::enumerate(&code, max_a, kind, budget, &g),
        Command::Verify { config } => commands::verify(&config, &g),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wcm: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
