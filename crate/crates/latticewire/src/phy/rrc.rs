//! Root-raised-cosine pulse shaping and matched filtering at 4 samples
//! per symbol.

use num_complex::Complex64;

use super::{GROUP_DELAY, SPS};
use crate::error::{Error, Result};

/// Complex baseband samples at `SPS` samples per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleStream {
    samples: Vec<Complex64>,
}

impl SampleStream {
    pub fn new(samples: Vec<Complex64>) -> Self {
        Self { samples }
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sps(&self) -> usize {
        SPS
    }
}

/// Square-root raised-cosine taps: `span * sps + 1` of them, even-symmetric,
/// normalized to unit energy.
pub fn rrc_taps(rolloff: f64, span: usize, sps: usize) -> Result<Vec<f64>> {
    if !(rolloff > 0.0 && rolloff <= 1.0) {
        return Err(Error::Config(format!("rolloff {rolloff} outside (0, 1]")));
    }
    if span == 0 || sps == 0 {
        return Err(Error::Config("filter span and sps must be positive".into()));
    }
    let n = span * sps + 1;
    let center = (n - 1) as f64 / 2.0;
    let singular_t = 1.0 / (4.0 * rolloff);
    let mut taps: Vec<f64> = (0..n)
        .map(|i| {
            let t = (i as f64 - center) / sps as f64;
            if t.abs() < 1e-12 {
                1.0 + rolloff * (4.0 / std::f64::consts::PI - 1.0)
            } else if (t.abs() - singular_t).abs() < 1e-9 {
                // L'Hopital limit where the generic denominator vanishes.
                let a = std::f64::consts::PI / (4.0 * rolloff);
                (rolloff / 2f64.sqrt())
                    * ((1.0 + 2.0 / std::f64::consts::PI) * a.sin()
                        + (1.0 - 2.0 / std::f64::consts::PI) * a.cos())
            } else {
                let pi_t = std::f64::consts::PI * t;
                let num = (pi_t * (1.0 - rolloff)).sin()
                    + 4.0 * rolloff * t * (pi_t * (1.0 + rolloff)).cos();
                let den = pi_t * (1.0 - (4.0 * rolloff * t).powi(2));
                num / den
            }
        })
        .collect();
    let energy: f64 = taps.iter().map(|h| h * h).sum();
    let scale = energy.sqrt().recip();
    for h in &mut taps {
        *h *= scale;
    }
    Ok(taps)
}

/// Upsamples symbols by `SPS` (zero insertion) and applies the shaping
/// filter; the output keeps the full convolution tail.
pub fn pulse_shape(symbols: &[Complex64], taps: &[f64]) -> Result<SampleStream> {
    if symbols.is_empty() {
        return Err(Error::Processing("cannot pulse-shape an empty symbol stream".into()));
    }
    let up_len = symbols.len() * SPS;
    let out_len = up_len + taps.len() - 1;
    let mut out = vec![Complex64::ZERO; out_len];
    // Sparse convolution: only every SPS-th upsampled sample is nonzero.
    for (n, &s) in symbols.iter().enumerate() {
        let base = n * SPS;
        for (k, &h) in taps.iter().enumerate() {
            out[base + k] += s * h;
        }
    }
    Ok(SampleStream::new(out))
}

/// Receive-side matched filter: full convolution with the same taps.
pub fn matched_filter(stream: &SampleStream, taps: &[f64]) -> Result<SampleStream> {
    if stream.len() < taps.len() {
        return Err(Error::Processing(format!(
            "stream of {} samples is shorter than the {}-tap filter",
            stream.len(),
            taps.len()
        )));
    }
    let x = stream.samples();
    let out_len = x.len() + taps.len() - 1;
    let mut out = vec![Complex64::ZERO; out_len];
    for (n, &s) in x.iter().enumerate() {
        if s == Complex64::ZERO {
            continue;
        }
        for (k, &h) in taps.iter().enumerate() {
            out[n + k] += s * h;
        }
    }
    Ok(SampleStream::new(out))
}

/// Reads symbol estimates out of a matched-filtered stream: symbol `m` of a
/// frame starting at raw-stream offset `frame_offset` sits at index
/// `frame_offset + GROUP_DELAY + SPS * m` (the cascade group delay).
pub fn extract_symbols(
    filtered: &SampleStream,
    frame_offset: usize,
    count: usize,
) -> Result<Vec<Complex64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let last = frame_offset + GROUP_DELAY + SPS * (count - 1);
    if last >= filtered.len() {
        return Err(Error::Processing(format!(
            "symbol index {last} past the end of the {}-sample stream",
            filtered.len()
        )));
    }
    Ok((0..count)
        .map(|m| filtered.samples()[frame_offset + GROUP_DELAY + SPS * m])
        .collect())
}
