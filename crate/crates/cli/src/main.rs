//! Command-line front end: construct and export codes, analyze matrices,
//! run FER and outage sweeps. Exit codes: 0 success, 1 validation error,
//! 2 I/O error, 3 internal invariant breach.

mod commands;
mod config;
mod manifest;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
    Internal(String),
}

impl CliError {
    fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }

    fn internal(msg: impl Into<String>) -> Self {
        CliError::Internal(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid configuration: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<rootcheck_ldpc::Error> for CliError {
    fn from(e: rootcheck_ldpc::Error) -> Self {
        use rootcheck_ldpc::Error::*;
        match e {
            BadDimensions(_) | UnsupportedFamily(_) | InvalidConfig(_) | InsufficientData(_)
            | AlistParse { .. } | IndexOutOfRange(_) | LengthMismatch { .. }
            | DimensionMismatch(_) => CliError::Validation(e.to_string()),
            SingularMatrix | NoCandidateCheck(_) | DuplicateEntry(..) => {
                CliError::Internal(e.to_string())
            }
        }
    }
}

#[derive(Parser)]
#[command(
    name = "rootcheck",
    version,
    about = "Construct and evaluate IRA/IRAA root-check LDPC codes on fading channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by config-driven commands; every flag overrides the
/// corresponding config-file key.
#[derive(Args, Debug, Default)]
struct Overrides {
    /// TOML run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Code family: ra | ira-rc-half | ira-rc-third | iraa-rc-half | iraa-rc-third | peg-baseline
    #[arg(long)]
    family: Option<String>,
    /// Codeword length before puncturing
    #[arg(long)]
    n: Option<usize>,
    /// Transmitted codeword length (mother length derived for IRAA)
    #[arg(long)]
    n_transmitted: Option<usize>,
    /// Fading blocks the structure targets (2 or 3)
    #[arg(long)]
    fading_blocks: Option<usize>,
    /// Construction seed
    #[arg(long)]
    seed: Option<u64>,
    /// Uniform column-weight target override
    #[arg(long)]
    degree: Option<usize>,
    /// Puncture mode: standard | none | second-stage
    #[arg(long)]
    puncture: Option<String>,
    /// Minimum displacement of the second-stage permutation
    #[arg(long)]
    pi1_min_displacement: Option<usize>,
    /// Channel: block | fast
    #[arg(long)]
    channel: Option<String>,
    /// SNR points in dB, comma separated
    #[arg(long, value_delimiter = ',')]
    snr_db: Option<Vec<f64>>,
    /// Decoder iteration cap
    #[arg(long)]
    max_iter: Option<usize>,
    /// Stop a point after this many frame errors
    #[arg(long)]
    min_frame_errors: Option<u64>,
    /// Hard frame cap per point
    #[arg(long)]
    max_frames: Option<u64>,
    /// Master seed for the simulation streams
    #[arg(long)]
    master_seed: Option<u64>,
    /// Worker threads (default: ROOTCHECK_WORKERS or all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Code rate for outage sweeps
    #[arg(long)]
    rate: Option<f64>,
    /// Monte-Carlo samples per outage point
    #[arg(long)]
    samples: Option<u64>,
    /// Input alist file (fer)
    #[arg(long)]
    code_file: Option<PathBuf>,
    /// Input metadata sidecar (fer)
    #[arg(long)]
    meta_file: Option<PathBuf>,
    /// Output path (alist for construct/export, CSV for fer/outage)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Manifest output path
    #[arg(long)]
    manifest: Option<PathBuf>,
}

impl Overrides {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        Ok(base.merged(RunConfig {
            family: self.family,
            n: self.n,
            n_transmitted: self.n_transmitted,
            fading_blocks: self.fading_blocks,
            seed: self.seed,
            degree: self.degree,
            degree_sequence: None,
            puncture: self.puncture,
            pi1_min_displacement: self.pi1_min_displacement,
            channel: self.channel,
            snr_db: self.snr_db,
            max_iter: self.max_iter,
            min_frame_errors: self.min_frame_errors,
            max_frames: self.max_frames,
            master_seed: self.master_seed,
            workers: self.workers,
            rate: self.rate,
            samples: self.samples,
            code_file: self.code_file,
            meta_file: self.meta_file,
            out: self.out,
            manifest: self.manifest,
        }))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Construct a code, write alist + metadata, print the analysis report
    Construct(Overrides),
    /// Construct a code and write alist + metadata only
    Export(Overrides),
    /// Report rank, girth, degrees and root-check state of an alist file
    Analyze {
        /// Parity-check matrix in alist format
        alist: PathBuf,
        /// Metadata sidecar enabling fading-aware analysis
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Run a frame-error-rate sweep and write CSV + manifest
    Fer(Overrides),
    /// Estimate outage probabilities and write CSV + manifest
    Outage(Overrides),
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Construct(o) => commands::cmd_construct(&o.into_config()?),
        Command::Export(o) => commands::cmd_export(&o.into_config()?),
        Command::Analyze { alist, meta } => commands::cmd_analyze(&alist, meta.as_deref()),
        Command::Fer(o) => commands::cmd_fer(&o.into_config()?),
        Command::Outage(o) => commands::cmd_outage(&o.into_config()?),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
