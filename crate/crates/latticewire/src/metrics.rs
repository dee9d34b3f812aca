//! Empirical confidentiality metrics: conditional entropy of the secret
//! given the eavesdropper's symbols, bit error rates, and the sweep
//! drivers that produce CSV experiment data.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::coset::{average_energy, coset_encode, modulate, RandomnessBits, SecretBits};
use crate::error::{Error, Result};
use crate::lattice::SchemeId;
use crate::phy::db_to_linear;
use crate::pipeline::{LinkParams, LinkSimulator, PipelineMode};

/// Empirical conditional entropy of the secret given the received symbols.
#[derive(Debug, Clone)]
pub struct EntropyEstimate {
    pub scheme: SchemeId,
    pub snr_db: f64,
    /// Estimated H(s | y) in bits.
    pub h_cond: f64,
    pub bin_width: f64,
    pub sample_count: u64,
    /// Spread of per-block estimates (8 blocks), as a standard error.
    pub stderr: f64,
    /// Fewer than 10 occupied bins: the histogram is too coarse to trust.
    pub low_occupancy: bool,
}

/// Normalizes an entropy estimate to per-secret-bit units (k = 1 scale).
pub fn normalize_entropy(e: &EntropyEstimate) -> f64 {
    e.h_cond / f64::from(e.scheme.secret_bits())
}

/// Empirical bit error rate at one (scheme, SNR) point.
#[derive(Debug, Clone)]
pub struct BerPoint {
    pub scheme: SchemeId,
    pub snr_db: f64,
    pub ber: f64,
    pub bits_counted: u64,
    /// Binomial standard error sqrt(p(1-p)/n).
    pub stderr: f64,
    pub sync_failure_rate: f64,
    /// Set when more than 1% of batches failed to synchronize.
    pub flagged: bool,
}

/// One sweep data point.
#[derive(Debug, Clone)]
pub enum SweepPoint {
    Ber(BerPoint),
    Entropy(EntropyEstimate),
}

/// Ordered sweep output, reproducible bit-for-bit from (options, seed).
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub seed: u64,
}

/// Knobs shared by the sweep drivers.
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub mode: PipelineMode,
    pub jitter_db: f64,
    pub decoder: crate::decode::DecoderConfig,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            mode: PipelineMode::default(),
            jitter_db: 1.5,
            decoder: crate::decode::DecoderConfig::default(),
        }
    }
}

/// Fraction of differing bit positions.
pub fn bit_error_rate(tx: &[u8], rx: &[u8]) -> Result<f64> {
    if tx.len() != rx.len() || tx.is_empty() {
        return Err(Error::Measurement(format!(
            "BER needs equal non-empty bit strings, got {} vs {}",
            tx.len(),
            rx.len()
        )));
    }
    let errors = tx.iter().zip(rx).filter(|(a, b)| a != b).count();
    Ok(errors as f64 / tx.len() as f64)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic per-point RNG seed: every (scheme, SNR) pair gets an
/// independent stream regardless of sweep order.
pub fn point_seed(master: u64, scheme: SchemeId, snr_db: f64) -> u64 {
    splitmix64(master ^ fnv1a(scheme.name().as_bytes()) ^ snr_db.to_bits().rotate_left(17))
}

/// Per-batch RNG derived from a point seed; batches are independent jobs.
pub fn batch_rng(point_seed: u64, batch_index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(point_seed ^ batch_index))
}

/// Default histogram bin width: an eighth of the per-axis noise standard
/// deviation, but never wider than a sixteenth of the constellation
/// spacing.
pub fn default_bin_width(scheme: SchemeId, snr_db: f64) -> f64 {
    let sigma2 = db_to_linear(-snr_db);
    let sigma_axis = (sigma2 / 2.0).sqrt();
    let spacing = average_energy(scheme.box_size()).sqrt().recip();
    (sigma_axis / 8.0).min(spacing / 16.0)
}

/// Monte-Carlo conditional entropy for a fixed unit channel gain: uniform
/// secrets are coset-encoded, sent through symbol-level noise, projected
/// onto the signal axis coordinate-wise, and histogrammed jointly with the
/// secret. Joint bins sharpen with dimension, so estimates for long
/// codewords need far more trials than the one-symbol schemes.
pub fn conditional_entropy<R: Rng + ?Sized>(
    scheme: SchemeId,
    snr_db: f64,
    trials: u64,
    bin_width: Option<f64>,
    rng: &mut R,
) -> Result<EntropyEstimate> {
    if trials == 0 {
        return Err(Error::Measurement("entropy estimation needs at least one trial".into()));
    }
    let width = match bin_width {
        Some(w) if w > 0.0 && w.is_finite() => w,
        Some(w) => return Err(Error::Measurement(format!("bin width {w} must be positive"))),
        None => default_bin_width(scheme, snr_db),
    };
    let codebook = scheme.codebook()?;
    let k = codebook.secret_bits() as usize;
    let r = codebook.randomness_bits() as usize;
    let sigma2 = db_to_linear(-snr_db);
    let noise_axis = (sigma2 / 2.0).sqrt();
    // Rotating by +45 degrees puts the signal on the real axis; the
    // imaginary part is noise only and carries no secret information.
    let rotate = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);

    const BLOCKS: usize = 8;
    let mut block_hists: Vec<HashMap<Vec<i64>, Vec<u64>>> =
        (0..BLOCKS).map(|_| HashMap::new()).collect();
    let coset_count = codebook.coset_count();
    for t in 0..trials {
        let s = rng.random_range(0..coset_count);
        let secret = SecretBits::from_value(s, k)?;
        let rand = RandomnessBits::random(rng, r);
        let point = coset_encode(&secret, &rand, &codebook)?;
        let x = modulate(point, codebook.box_size())?;
        let bin: Vec<i64> = x
            .symbols()
            .iter()
            .map(|&sym| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                let y = sym + Complex64::new(re * noise_axis, im * noise_axis);
                let z = (y * rotate).re;
                (z / width).floor() as i64
            })
            .collect();
        let block = (t as usize * BLOCKS / trials as usize).min(BLOCKS - 1);
        block_hists[block].entry(bin).or_insert_with(|| vec![0; coset_count])[s] += 1;
    }

    let block_h: Vec<f64> = block_hists.iter().map(histogram_entropy).collect();
    let mut merged: HashMap<Vec<i64>, Vec<u64>> = HashMap::new();
    for hist in &block_hists {
        for (bin, counts) in hist {
            let slot = merged.entry(bin.clone()).or_insert_with(|| vec![0; coset_count]);
            for (a, &b) in slot.iter_mut().zip(counts) {
                *a += b;
            }
        }
    }
    let h_cond = histogram_entropy(&merged);
    let occupied = merged.len();
    let mean_block = block_h.iter().sum::<f64>() / BLOCKS as f64;
    let var = block_h.iter().map(|h| (h - mean_block).powi(2)).sum::<f64>()
        / (BLOCKS as f64 - 1.0);
    let stderr = (var / BLOCKS as f64).sqrt();

    Ok(EntropyEstimate {
        scheme,
        snr_db,
        h_cond,
        bin_width: width,
        sample_count: trials,
        stderr,
        low_occupancy: occupied < 10,
    })
}

/// H(s | bin) averaged over bins, weighted by bin probability.
fn histogram_entropy(hist: &HashMap<Vec<i64>, Vec<u64>>) -> f64 {
    let total: u64 = hist.values().flat_map(|c| c.iter()).sum();
    if total == 0 {
        return 0.0;
    }
    let mut h = 0.0;
    for counts in hist.values() {
        let bin_total: u64 = counts.iter().sum();
        if bin_total == 0 {
            continue;
        }
        let mut h_bin = 0.0;
        for &c in counts {
            if c > 0 {
                let p = c as f64 / bin_total as f64;
                h_bin -= p * p.log2();
            }
        }
        h += (bin_total as f64 / total as f64) * h_bin;
    }
    h
}

/// BER sweep over the (scheme, SNR) grid. Every point accumulates batches
/// until `secret_bits_target` bits are counted; batches that fail to
/// synchronize are skipped and tracked, and a point whose failure rate
/// exceeds 1% is flagged.
pub fn run_ber_sweep(
    schemes: &[SchemeId],
    snrs_db: &[f64],
    secret_bits_target: u64,
    seed: u64,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    if secret_bits_target == 0 {
        return Err(Error::Measurement("BER sweep needs a positive bit target".into()));
    }
    let mut points = Vec::with_capacity(schemes.len() * snrs_db.len());
    for &scheme in schemes {
        for &snr_db in snrs_db {
            points.push(SweepPoint::Ber(ber_point(scheme, snr_db, secret_bits_target, seed, opts)?));
        }
    }
    Ok(SweepResult { points, seed })
}

fn ber_point(
    scheme: SchemeId,
    snr_db: f64,
    secret_bits_target: u64,
    seed: u64,
    opts: &SweepOptions,
) -> Result<BerPoint> {
    let params = LinkParams {
        scheme,
        snr_db,
        jitter_db: opts.jitter_db,
        mode: opts.mode,
        decoder: opts.decoder,
    };
    let link = LinkSimulator::new(params)?;
    let k = link.codebook().secret_bits();
    let coset_count = link.codebook().coset_count();
    let pseed = point_seed(seed, scheme, snr_db);

    let mut bits = 0u64;
    let mut errors = 0u64;
    let mut batches = 0u64;
    let mut failures = 0u64;
    while bits < secret_bits_target {
        let mut rng = batch_rng(pseed, batches);
        batches += 1;
        let secrets: Vec<usize> =
            (0..link.batch_capacity()).map(|_| rng.random_range(0..coset_count)).collect();
        let outcome = link.transmit_batch(&secrets, &mut rng)?;
        let Some(decoded) = outcome.decoded else {
            failures += 1;
            continue;
        };
        for (&tx, &rx) in secrets.iter().zip(&decoded) {
            errors += u64::from((tx ^ rx).count_ones());
            bits += u64::from(k);
        }
    }
    let ber = errors as f64 / bits as f64;
    let sync_failure_rate = failures as f64 / batches as f64;
    Ok(BerPoint {
        scheme,
        snr_db,
        ber,
        bits_counted: bits,
        stderr: (ber * (1.0 - ber) / bits as f64).sqrt(),
        sync_failure_rate,
        flagged: sync_failure_rate > 0.01,
    })
}

/// Conditional-entropy sweep over the (scheme, SNR) grid.
pub fn run_entropy_sweep(
    schemes: &[SchemeId],
    snrs_db: &[f64],
    trials: u64,
    seed: u64,
) -> Result<SweepResult> {
    if trials == 0 {
        return Err(Error::Measurement("entropy sweep needs a positive trial count".into()));
    }
    let mut points = Vec::with_capacity(schemes.len() * snrs_db.len());
    for &scheme in schemes {
        for &snr_db in snrs_db {
            let pseed = point_seed(seed, scheme, snr_db);
            let mut rng = ChaCha8Rng::seed_from_u64(pseed);
            points.push(SweepPoint::Entropy(conditional_entropy(
                scheme, snr_db, trials, None, &mut rng,
            )?));
        }
    }
    Ok(SweepResult { points, seed })
}

impl SweepResult {
    /// CSV with one row per point; floats carry 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scheme,snr_db,metric,value,stderr,samples,seed\n");
        for p in &self.points {
            let (scheme, snr_db, metric, value, stderr, samples) = match p {
                SweepPoint::Ber(b) => {
                    (b.scheme, b.snr_db, "ber", b.ber, b.stderr, b.bits_counted)
                }
                SweepPoint::Entropy(e) => {
                    (e.scheme, e.snr_db, "h_cond", e.h_cond, e.stderr, e.sample_count)
                }
            };
            let pseed = point_seed(self.seed, scheme, snr_db);
            writeln!(
                out,
                "{scheme},{snr_db},{metric},{value:.8e},{stderr:.8e},{samples},{pseed}"
            )
            .expect("writing to a String cannot fail");
        }
        out
    }
}
