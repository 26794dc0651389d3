//! Library half of the `llf` binary: argument definitions and the three
//! subcommands, kept here so they can be exercised from tests.

pub mod bench;
pub mod cache;
pub mod enhance;
pub mod io;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use fourier_llf::metrics::{psnr, psnr_quantized};

pub use bench::BenchArgs;
pub use enhance::EnhanceArgs;

/// Exit status for invalid arguments, matching clap's usage errors.
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "llf", version, about = "Local Laplacian filtering: enhance, benchmark, compare")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Filter one PGM/PPM image.
    Enhance(EnhanceArgs),
    /// Sweep fast and Fourier engines against the naive oracle and write CSV.
    Bench(BenchArgs),
    /// Print PSNR and MSE between two PGM/PPM images.
    Psnr(PsnrArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Naive,
    Fast,
    Fourier,
    FourierAdaptive,
    NaiveAdaptive,
    PyramidBaseline,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Fast => "fast",
            Method::Fourier => "fourier",
            Method::FourierAdaptive => "fourier-adaptive",
            Method::NaiveAdaptive => "naive-adaptive",
            Method::PyramidBaseline => "pyramid-baseline",
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct PsnrArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// Quantize both images to 8 bits first.
    #[arg(long)]
    pub quantized: bool,
}

/// Error raised for flag combinations clap cannot reject on its own.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Enhance(args) => enhance::run(&args),
        Command::Bench(args) => bench::run(&args),
        Command::Psnr(args) => run_psnr(&args),
    }
}

/// Usage errors (including invalid filter parameters) map to 2, everything
/// else to 1.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let bad_parameter = err.chain().any(|e| {
        e.is::<UsageError>()
            || matches!(
                e.downcast_ref::<fourier_llf::Error>(),
                Some(fourier_llf::Error::InvalidParameter { .. } | fourier_llf::Error::TooManyLevels { .. })
            )
    });
    if bad_parameter {
        EXIT_USAGE
    } else {
        EXIT_FAILURE
    }
}

fn run_psnr(args: &PsnrArgs) -> Result<()> {
    let (a, a_channels) = io::read_samples(&args.first)?;
    let (b, b_channels) = io::read_samples(&args.second)?;
    if a_channels != b_channels {
        anyhow::bail!(
            "{} has {a_channels} channel(s) but {} has {b_channels}",
            args.first.display(),
            args.second.display()
        );
    }
    let result = if args.quantized { psnr_quantized(&a, &b) } else { psnr(&a, &b) };
    let result = result.map_err(|e| anyhow::anyhow!("{} vs {}: {e}", args.first.display(), args.second.display()))?;
    println!("{result}");
    Ok(())
}
