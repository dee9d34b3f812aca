//! Frame-start detection by cross-correlation with the pulse-shaped pilot.

use num_complex::Complex64;

use super::{barker_pilot, pulse_shape, SampleStream, FRAME_SAMPLES};
use crate::error::{Error, Result};

/// Peak phase vote must exceed this multiple of the median phase vote.
const PEAK_OVER_MEDIAN: f64 = 6.0;

/// Pulse-shaped Barker pilot block used as the correlation template.
pub fn pilot_template(taps: &[f64]) -> Result<SampleStream> {
    pulse_shape(&barker_pilot(), taps)
}

/// Locates frame starts in a batch. The correlation magnitudes are folded
/// onto the known 400-sample frame spacing, so every frame in the batch
/// votes for the common phase; the returned offsets are that phase plus
/// whole frame strides.
pub fn synchronize(batch: &SampleStream, template: &SampleStream) -> Result<Vec<usize>> {
    let x = batch.samples();
    let t = template.samples();
    if x.len() < t.len() + FRAME_SAMPLES {
        return Err(Error::SyncFailure(format!(
            "batch of {} samples is too short to hold a frame",
            x.len()
        )));
    }
    let positions = x.len() - t.len() + 1;
    // Correlation power, folded onto the frame grid so every frame in the
    // batch votes for the common phase. Power (not magnitude) keeps the
    // pilot peak well above the data-correlation background.
    let mut votes = [0.0f64; FRAME_SAMPLES];
    let mut counts = [0u32; FRAME_SAMPLES];
    for n in 0..positions {
        let c: Complex64 = x[n..n + t.len()].iter().zip(t).map(|(&a, &b)| a * b.conj()).sum();
        votes[n % FRAME_SAMPLES] += c.norm_sqr();
        counts[n % FRAME_SAMPLES] += 1;
    }
    for (v, &k) in votes.iter_mut().zip(&counts) {
        *v /= f64::from(k.max(1));
    }

    let (phase, peak) = votes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("votes are finite"))
        .map(|(i, &v)| (i, v))
        .expect("phase bins are non-empty");
    let mut sorted = votes;
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("votes are finite"));
    let median = sorted[sorted.len() / 2];
    if peak <= 0.0 || peak < PEAK_OVER_MEDIAN * median {
        return Err(Error::SyncFailure(format!(
            "no pilot correlation peak: max vote {peak:.3e} vs median {median:.3e}"
        )));
    }

    Ok((phase..)
        .step_by(FRAME_SAMPLES)
        .take_while(|o| o + FRAME_SAMPLES <= x.len())
        .collect())
}
