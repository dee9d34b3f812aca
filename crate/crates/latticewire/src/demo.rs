//! End-to-end image transmission demo: one legitimate receiver at the
//! closest placement and an eavesdropper at each configured placement,
//! all observing independent channels.

use crate::config::{ExperimentConfig, PLACEMENT_SNRS_DB};
use crate::error::{Error, Result};
use crate::image::BitImage;
use crate::lattice::SchemeId;
use crate::metrics::{batch_rng, bit_error_rate, point_seed, BerPoint, SweepPoint, SweepResult};
use crate::pipeline::{LinkParams, LinkSimulator};

/// One receiver's view of the transmission.
#[derive(Debug, Clone)]
pub struct ReceiverReport {
    pub label: String,
    pub snr_db: f64,
    pub ber: BerPoint,
    pub image: BitImage,
}

#[derive(Debug, Clone)]
pub struct DemoReport {
    pub scheme: SchemeId,
    pub receivers: Vec<ReceiverReport>,
    pub seed: u64,
}

impl DemoReport {
    /// BER table in the common sweep CSV format.
    pub fn to_csv(&self) -> String {
        SweepResult {
            points: self.receivers.iter().map(|r| SweepPoint::Ber(r.ber.clone())).collect(),
            seed: self.seed,
        }
        .to_csv()
    }
}

/// Splits an MSB-first bit stream into k-bit secrets, zero-padding the tail.
pub fn bits_to_secrets(bits: &[u8], k: usize) -> Vec<usize> {
    bits.chunks(k)
        .map(|chunk| {
            let mut v = 0usize;
            for i in 0..k {
                v = v << 1 | usize::from(*chunk.get(i).unwrap_or(&0));
            }
            v
        })
        .collect()
}

/// Inverse of [`bits_to_secrets`], without the truncation.
pub fn secrets_to_bits(secrets: &[usize], k: usize) -> Vec<u8> {
    secrets
        .iter()
        .flat_map(|&s| (0..k).rev().map(move |i| (s >> i & 1) as u8))
        .collect()
}

/// Transmits the image to the legitimate receiver at the first placement
/// SNR and to an eavesdropper at each configured placement, reconstructing
/// what each receiver decodes.
pub fn image_demo(config: &ExperimentConfig, image: &BitImage, seed: u64) -> Result<DemoReport> {
    let scheme = *config
        .schemes
        .first()
        .ok_or_else(|| Error::Config("demo needs a scheme".into()))?;
    let mut receivers = Vec::with_capacity(1 + config.placements.len());
    receivers.push(run_receiver(config, scheme, image, "bob", PLACEMENT_SNRS_DB[0], 0, seed)?);
    for (i, &snr_db) in config.placements.iter().enumerate() {
        let label = format!("eve-{snr_db}dB");
        receivers.push(run_receiver(config, scheme, image, &label, snr_db, i as u64 + 1, seed)?);
    }
    Ok(DemoReport { scheme, receivers, seed })
}

fn run_receiver(
    config: &ExperimentConfig,
    scheme: SchemeId,
    image: &BitImage,
    label: &str,
    snr_db: f64,
    receiver_index: u64,
    seed: u64,
) -> Result<ReceiverReport> {
    let params = LinkParams {
        scheme,
        snr_db,
        jitter_db: config.jitter_db,
        mode: config.mode,
        decoder: config.decoder,
    };
    let link = LinkSimulator::new(params)?;
    let k = link.codebook().secret_bits() as usize;
    let capacity = link.batch_capacity();

    let tx_bits = image.bits();
    let mut secrets = bits_to_secrets(tx_bits, k);
    let pad_to = secrets.len().div_ceil(capacity) * capacity;
    secrets.resize(pad_to, 0);

    let pseed = point_seed(seed ^ receiver_index, scheme, snr_db);
    let mut rx_secrets = Vec::with_capacity(secrets.len());
    let mut failed_batches = 0u64;
    let mut batches = 0u64;
    for batch in secrets.chunks(capacity) {
        let mut rng = batch_rng(pseed, batches);
        batches += 1;
        match link.transmit_batch(batch, &mut rng)?.decoded {
            Some(decoded) => rx_secrets.extend(decoded),
            // An unsynchronized batch yields nothing; the receiver shows
            // blank pixels there.
            None => {
                failed_batches += 1;
                rx_secrets.extend(std::iter::repeat_n(0, capacity));
            }
        }
    }

    let rx_bits: Vec<u8> =
        secrets_to_bits(&rx_secrets, k).into_iter().take(tx_bits.len()).collect();
    let ber = bit_error_rate(tx_bits, &rx_bits)?;
    let bits_counted = tx_bits.len() as u64;
    let sync_failure_rate = failed_batches as f64 / batches as f64;
    Ok(ReceiverReport {
        label: label.to_string(),
        snr_db,
        ber: BerPoint {
            scheme,
            snr_db,
            ber,
            bits_counted,
            stderr: (ber * (1.0 - ber) / bits_counted as f64).sqrt(),
            sync_failure_rate,
            flagged: failed_batches > 0,
        },
        image: BitImage::new(image.width(), image.height(), rx_bits)?,
    })
}
