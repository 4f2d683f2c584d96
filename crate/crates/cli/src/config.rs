//! Run configuration: a TOML file as the durable record, command-line flags
//! as overrides. Flags win.

use rootcheck_ldpc::scaffold::{CodeFamily, FamilyKind, PunctureMode, ScaffoldOptions};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub family: Option<String>,
    /// Codeword length before puncturing.
    pub n: Option<usize>,
    /// Transmitted length; for IRAA families the mother length is derived.
    pub n_transmitted: Option<usize>,
    pub fading_blocks: Option<usize>,
    pub seed: Option<u64>,
    /// Uniform target column weight override.
    pub degree: Option<usize>,
    /// Full per-column degree sequence override; wins over `degree`.
    pub degree_sequence: Option<Vec<usize>>,
    /// "standard" | "none" | "second-stage"
    pub puncture: Option<String>,
    pub pi1_min_displacement: Option<usize>,

    /// "block" | "fast"
    pub channel: Option<String>,
    pub snr_db: Option<Vec<f64>>,
    pub max_iter: Option<usize>,
    pub min_frame_errors: Option<u64>,
    pub max_frames: Option<u64>,
    pub master_seed: Option<u64>,
    pub workers: Option<usize>,

    /// Outage-specific: code rate and sample count.
    pub rate: Option<f64>,
    pub samples: Option<u64>,

    pub code_file: Option<PathBuf>,
    pub meta_file: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::validation(format!("config {}: {e}", path.display())))
    }

    /// Layers `over` on top of `self`: any field set in `over` wins.
    pub fn merged(mut self, over: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(
            family,
            n,
            n_transmitted,
            fading_blocks,
            seed,
            degree,
            degree_sequence,
            puncture,
            pi1_min_displacement,
            channel,
            snr_db,
            max_iter,
            min_frame_errors,
            max_frames,
            master_seed,
            workers,
            rate,
            samples,
            code_file,
            meta_file,
            out,
            manifest
        );
        self
    }

    pub fn family_kind(&self) -> Result<FamilyKind, CliError> {
        let name = self
            .family
            .as_deref()
            .ok_or_else(|| CliError::validation("missing `family` (config key or --family)"))?;
        match name {
            "ra" => Ok(FamilyKind::Ra),
            "ira-rc-half" => Ok(FamilyKind::IraRcHalf),
            "ira-rc-third" => Ok(FamilyKind::IraRcThird),
            "iraa-rc-half" => Ok(FamilyKind::IraaRcHalf),
            "iraa-rc-third" => Ok(FamilyKind::IraaRcThird),
            "peg-baseline" => Ok(FamilyKind::PegBaseline),
            other => Err(CliError::validation(format!(
                "unknown family `{other}` (expected ra, ira-rc-half, ira-rc-third, \
                 iraa-rc-half, iraa-rc-third or peg-baseline)"
            ))),
        }
    }

    fn default_fading_blocks(kind: FamilyKind) -> usize {
        match kind {
            FamilyKind::IraRcThird | FamilyKind::IraaRcThird => 3,
            _ => 2,
        }
    }

    pub fn code_family(&self) -> Result<CodeFamily, CliError> {
        let kind = self.family_kind()?;
        let fading = self
            .fading_blocks
            .unwrap_or_else(|| Self::default_fading_blocks(kind));
        let seed = self.seed.unwrap_or(0);
        let family = match (self.n, self.n_transmitted) {
            (Some(n), None) => CodeFamily::new(kind, n, fading, seed),
            (None, Some(n_tx)) => CodeFamily::from_transmitted_len(kind, n_tx, fading, seed),
            (Some(_), Some(_)) => {
                return Err(CliError::validation(
                    "set either `n` or `n_transmitted`, not both",
                ))
            }
            (None, None) => {
                return Err(CliError::validation(
                    "missing code length: set `n` or `n_transmitted`",
                ))
            }
        };
        family.map_err(CliError::from)
    }

    pub fn scaffold_options(&self) -> Result<ScaffoldOptions, CliError> {
        let puncture = match self.puncture.as_deref() {
            None | Some("standard") => PunctureMode::Standard,
            Some("none") => PunctureMode::None,
            Some("second-stage") => PunctureMode::SecondStage,
            Some(other) => {
                return Err(CliError::validation(format!(
                    "unknown puncture mode `{other}` (expected standard, none or second-stage)"
                )))
            }
        };
        Ok(ScaffoldOptions {
            uniform_degree: self.degree,
            degree_targets: self.degree_sequence.clone(),
            pi1_min_displacement: self.pi1_min_displacement.unwrap_or(1),
            puncture,
        })
    }

    /// Channel selection; the block regime takes its block count from the
    /// code being simulated.
    pub fn regime_for(&self, fading_blocks: usize) -> Result<rootcheck_ldpc::channel::Regime, CliError> {
        match self.channel.as_deref() {
            None | Some("block") => Ok(rootcheck_ldpc::channel::Regime::Block(fading_blocks)),
            Some("fast") => Ok(rootcheck_ldpc::channel::Regime::Fast),
            Some(other) => Err(CliError::validation(format!(
                "unknown channel `{other}` (expected block or fast)"
            ))),
        }
    }

    /// Worker count: explicit setting, then the environment, then all cores.
    pub fn resolve_workers(&self) -> usize {
        if let Some(w) = self.workers {
            return w.max(1);
        }
        if let Ok(v) = std::env::var("ROOTCHECK_WORKERS") {
            if let Ok(w) = v.parse::<usize>() {
                return w.max(1);
            }
        }
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }
}
