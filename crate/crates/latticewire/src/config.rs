//! Experiment configuration: a flat `key = value` text format with `#`
//! comments and dot-namespaced keys, plus receiver placement presets and
//! seed resolution.

use std::path::{Path, PathBuf};

use crate::decode::{Concentration, DecodeMode, DecoderConfig};
use crate::error::{Error, Result};
use crate::lattice::SchemeId;
use crate::pipeline::PipelineMode;

/// Measured average SNRs of the four receiver placements, in dB.
pub const PLACEMENT_SNRS_DB: [f64; 4] = [20.6, 15.0, 9.0, 4.5];

/// Resolves `placement1`..`placement4` or a literal dB value.
pub fn resolve_placement(token: &str) -> Result<f64> {
    if let Some(rest) = token.strip_prefix("placement") {
        let n: usize = rest
            .parse()
            .ok()
            .filter(|n| (1..=PLACEMENT_SNRS_DB.len()).contains(n))
            .ok_or_else(|| Error::Config(format!("unknown placement preset {token:?}")))?;
        return Ok(PLACEMENT_SNRS_DB[n - 1]);
    }
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Config(format!("placement {token:?} is neither a preset nor dB")))
}

/// All experiment knobs; every field has a default except the seed, which
/// must come from the CLI, the environment, or the config file.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub schemes: Vec<SchemeId>,
    /// Receiver SNRs in dB, already resolved from presets.
    pub placements: Vec<f64>,
    pub seed: Option<u64>,
    pub secret_bits_target: u64,
    pub entropy_trials: u64,
    pub entropy_bin_width: Option<f64>,
    pub jitter_db: f64,
    pub mode: PipelineMode,
    pub decoder: DecoderConfig,
    /// Bilevel image for the demo; the bundled pattern when absent.
    pub image_path: Option<PathBuf>,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schemes: vec![SchemeId::CosetZ1s2r],
            placements: PLACEMENT_SNRS_DB.to_vec(),
            seed: None,
            secret_bits_target: 100_000,
            entropy_trials: 200_000,
            entropy_bin_width: None,
            jitter_db: 1.5,
            mode: PipelineMode::default(),
            decoder: DecoderConfig::default(),
            image_path: None,
            output_dir: PathBuf::from("."),
        }
    }
}

impl ExperimentConfig {
    /// Loads a config file; a missing or unreadable file is a
    /// configuration error, not an I/O failure.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_str_contents(&text)
    }

    pub fn from_str_contents(text: &str) -> Result<Self> {
        let mut config = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value, got {raw:?}", lineno + 1))
            })?;
            config
                .set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(config)
    }

    /// Applies one key/value pair; unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "scheme" | "schemes" => {
                self.schemes = split_list(value).map(str::parse).collect::<Result<Vec<_>>>()?;
                if self.schemes.is_empty() {
                    return Err(Error::Config("scheme list is empty".into()));
                }
            }
            "placements" => {
                self.placements =
                    split_list(value).map(resolve_placement).collect::<Result<Vec<_>>>()?;
                if self.placements.is_empty() {
                    return Err(Error::Config("placement list is empty".into()));
                }
            }
            "seed" => self.seed = Some(parse_num::<u64>(key, value)?),
            "ber.secret_bits_target" => {
                self.secret_bits_target = parse_num(key, value)?;
                if self.secret_bits_target == 0 {
                    return Err(Error::Config("ber.secret_bits_target must be positive".into()));
                }
            }
            "entropy.trials" => {
                self.entropy_trials = parse_num(key, value)?;
                if self.entropy_trials == 0 {
                    return Err(Error::Config("entropy.trials must be positive".into()));
                }
            }
            "entropy.bin_width" => {
                let w: f64 = parse_num(key, value)?;
                if w <= 0.0 || !w.is_finite() {
                    return Err(Error::Config(format!("entropy.bin_width {w} must be positive")));
                }
                self.entropy_bin_width = Some(w);
            }
            "channel.jitter_db" => {
                let j: f64 = parse_num(key, value)?;
                if j < 0.0 || !j.is_finite() {
                    return Err(Error::Config(format!(
                        "channel.jitter_db {j} must be non-negative"
                    )));
                }
                self.jitter_db = j;
            }
            "channel.mode" => {
                self.mode = match value {
                    "awgn" => PipelineMode::Awgn,
                    "frames" => PipelineMode::Frames,
                    other => {
                        return Err(Error::Config(format!(
                            "channel.mode {other:?} is not awgn or frames"
                        )))
                    }
                }
            }
            "decoder.mode" => {
                self.decoder.mode = match value {
                    "ml" => DecodeMode::Ml,
                    "md" => DecodeMode::Md,
                    other => {
                        return Err(Error::Config(format!("decoder.mode {other:?} is not ml or md")))
                    }
                }
            }
            "decoder.concentration" => {
                self.decoder.concentration = match value {
                    "inverse-noise" => Concentration::InverseNoise,
                    "snr" => Concentration::Snr,
                    other => {
                        let fixed: f64 = parse_num(key, other)?;
                        if fixed <= 0.0 || !fixed.is_finite() {
                            return Err(Error::Config(format!(
                                "decoder.concentration {fixed} must be positive"
                            )));
                        }
                        Concentration::Fixed(fixed)
                    }
                }
            }
            "image.file" => self.image_path = Some(PathBuf::from(value)),
            "output.dir" => self.output_dir = PathBuf::from(value),
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|t| !t.is_empty())
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value {value:?} for {key}")))
}

/// Seed precedence: command line, then `LATTICEWIRE_SEED`, then the
/// config file. A seed is mandatory somewhere.
pub fn resolve_seed(cli: Option<u64>, config: &ExperimentConfig) -> Result<u64> {
    resolve_seed_from(cli, std::env::var("LATTICEWIRE_SEED").ok().as_deref(), config.seed)
}

fn resolve_seed_from(cli: Option<u64>, env: Option<&str>, config: Option<u64>) -> Result<u64> {
    if let Some(seed) = cli {
        return Ok(seed);
    }
    if let Some(text) = env {
        return text
            .parse()
            .map_err(|_| Error::Config(format!("LATTICEWIRE_SEED {text:?} is not an integer")));
    }
    config.ok_or_else(|| {
        Error::Config("no seed given; pass --seed, set LATTICEWIRE_SEED, or add seed = N".into())
    })
}
