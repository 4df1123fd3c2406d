use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypharm::certify::DEFAULT_PRECISION;

#[derive(Debug, Parser)]
#[command(
    name = "hypharm",
    version,
    about = "Exact verification that no two partial sums of 1/k^2 coincide"
)]
pub struct Cli {
    /// Report encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for modulus selection and sampled test cases.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Working precision for enclosures, in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION,
          value_parser = clap::value_parser!(u32).range(8..=4096))]
    pub precision_bits: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exhaustive collision search over all windows in [1, N].
    Search(SearchArgs),
    /// Check one lemma over a parameter range.
    Verify(VerifyArgs),
    /// Solve for eta on one window and certify its bands.
    Eta(EtaArgs),
    /// Exact R-term decomposition of a disjoint pair.
    Decompose(PairArgs),
    /// Reduce an overlapping pair to a disjoint one.
    Reduce(PairArgs),
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub max_n: u64,
    #[arg(long, default_value_t = 2)]
    pub exponent: u32,
    /// Number of prime moduli in each fingerprint.
    #[arg(long, default_value_t = 3)]
    pub moduli: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LemmaId {
    Bertrand,
    PrimeWindow,
    LcmBound,
    LargePrimeWindow,
    PowerSums,
    EtaBand,
    BracketIdentity,
    E11Search,
    Decompose,
    PositivityChain,
}

impl LemmaId {
    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::Bertrand => "bertrand",
            LemmaId::PrimeWindow => "prime-window",
            LemmaId::LcmBound => "lcm-bound",
            LemmaId::LargePrimeWindow => "large-prime-window",
            LemmaId::PowerSums => "power-sums",
            LemmaId::EtaBand => "eta-band",
            LemmaId::BracketIdentity => "bracket-identity",
            LemmaId::E11Search => "e11-search",
            LemmaId::Decompose => "decompose",
            LemmaId::PositivityChain => "positivity-chain",
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub lemma: LemmaId,
    #[arg(long)]
    pub n_max: Option<u64>,
    #[arg(long)]
    pub k_max: Option<u64>,
    #[arg(long)]
    pub span: Option<u64>,
    #[arg(long)]
    pub a_max: Option<u64>,
    #[arg(long)]
    pub b_max: Option<u64>,
    #[arg(long)]
    pub r_max: Option<u64>,
    /// Number of sampled pairs.
    #[arg(long)]
    pub pairs: Option<u64>,
    /// Largest integer covered by a sampled pair.
    #[arg(long)]
    pub max_end: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EtaArgs {
    #[arg(long)]
    pub a: u64,
    #[arg(long)]
    pub r: u64,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub a1: u64,
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub a2: u64,
    #[arg(long)]
    pub s: u64,
}
