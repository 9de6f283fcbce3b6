use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "aklt", version, about = "Exact block spectra and entanglement of inhomogeneous AKLT chains")]
pub struct Cli {
    /// Bond coefficient override `j,J,value` (bond (j, j+1), total spin J, positive rational C_J)
    #[arg(long = "coeff", global = true, value_name = "j,J,VALUE")]
    pub coeff: Vec<String>,

    /// Largest full-chain dimension Π(2S+1) accepted for brute-force work
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_dim: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the spin/bond relations and the solvability condition
    Validate(ValidateArgs),
    /// Block eigenvalues Λ(J) as CSV
    Spectrum(SpectrumArgs),
    /// Entropies of growing blocks as CSV
    Entropy(EntropyArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub chain: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    ClosedForm,
    BruteForce,
    Both,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub chain: PathBuf,
    /// First bulk site and length, `K:L`
    #[arg(long, value_name = "K:L")]
    pub block: String,
    #[arg(long, value_enum, default_value_t = Method::ClosedForm)]
    pub method: Method,
    /// Write CSV here instead of standard output
    #[arg(long, value_name = "OUT")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub chain: PathBuf,
    #[arg(long, value_name = "K")]
    pub block_start: usize,
    /// Block lengths `LMIN:LMAX`
    #[arg(long, value_name = "LMIN:LMAX")]
    pub sweep: String,
    /// Renyi orders, comma separated
    #[arg(long, value_delimiter = ',', default_value = "0.5,2")]
    pub alpha: Vec<f64>,
    #[arg(long, value_name = "OUT")]
    pub csv: Option<PathBuf>,
}
