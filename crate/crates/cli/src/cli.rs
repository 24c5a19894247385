//! Command-line surface. Exit codes: 0 success, 1 internal or self-check
//! failure, 2 decode stalled, 3 usage, 4 corrupt container.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "ambx",
    version,
    about = "Array XOR erasure codec over grid projections: encode, decode, simulate, and bound tables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derive a full parameter document for a code and print it as JSON
    GenParams(GenParamsArgs),
    /// Encode a payload file into per-projection container files
    Encode(EncodeArgs),
    /// Reconstruct the payload from surviving container files
    Decode(DecodeArgs),
    /// Monte Carlo erasure trials against one code, CSV output
    Simulate(SimulateArgs),
    /// Tabulate block-length bounds or minimum achievable rates, CSV output
    Bounds(BoundsArgs),
    /// Run the built-in cross-verification suite
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConstructionArg {
    /// q = 1 family: reconstruct from any k projections
    C33,
    /// Even-q family: reconstruct from any ceil(k/qe) projections
    C35,
    /// Hand-picked directions via --dirs
    Custom,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum ErasureModel {
    /// Erase a uniform random subset of projections
    Uniform,
    /// Erase a cyclically contiguous run starting at a random index
    Burst,
}

/// Code selection shared by every data-path subcommand.
#[derive(Args, Clone, Debug)]
pub struct CodeArgs {
    /// Direction family
    #[arg(long, value_enum, default_value_t = ConstructionArg::C33)]
    pub construction: ConstructionArg,
    /// Number of projections (implied by --dirs when that is given)
    #[arg(long)]
    pub n: Option<usize>,
    /// Grid columns (information dimension)
    #[arg(long)]
    pub k: usize,
    /// Grid rows per projection bin span
    #[arg(long)]
    pub b: usize,
    /// Even q for the c35 family
    #[arg(long, default_value_t = 2)]
    pub qe: u16,
    /// Symbol width in bytes
    #[arg(long, default_value_t = 1)]
    pub width: usize,
    /// Explicit directions "p:q,p:q,..."; analyzed as a custom set
    #[arg(long)]
    pub dirs: Option<String>,
}

#[derive(Args, Debug)]
pub struct GenParamsArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Write the JSON document here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Payload file to protect
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory for projection files and the manifest
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    /// A directory of .ambx files or an explicit list of them
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Where to write the reconstructed payload
    #[arg(long)]
    pub out: PathBuf,
    /// Skip the post-reconstruction re-encode comparison
    #[arg(long)]
    pub skip_consistency: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Projections erased per trial
    #[arg(long)]
    pub erasures: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ErasureModel::Uniform)]
    pub model: ErasureModel,
    /// Write CSV here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Design rate k/n for the required-n column, e.g. "1/2"
    #[arg(long)]
    pub rate: Option<String>,
    /// Emit minimum achievable rates per k instead of bound columns
    #[arg(long)]
    pub min_rate: bool,
    /// Rates to sweep in --min-rate mode
    #[arg(long, default_value = "5/6,3/4,1/2")]
    pub rates: String,
    #[arg(long)]
    pub b: u64,
    /// Even q of the family behind the amds column
    #[arg(long, default_value_t = 2)]
    pub qe: u16,
    /// Column degree of the sparse classical family
    #[arg(long, default_value_t = 3)]
    pub sigma: u64,
    #[arg(long, default_value_t = 2)]
    pub k_min: u64,
    #[arg(long, default_value_t = 60)]
    pub k_max: u64,
    /// Scan ceiling; hitting it reports the bound as unbounded
    #[arg(long, default_value_t = ambx_core::DEFAULT_SCAN_CAP)]
    pub cap: u64,
    /// Write CSV here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Soft time budget; remaining checks are skipped once exceeded
    #[arg(long, default_value_t = 300)]
    pub budget_secs: u64,
}
