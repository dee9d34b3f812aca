//! Slow-fading AWGN channel and automatic gain control.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{db_to_linear, linear_to_db, SampleStream, FRAME_SAMPLES};
use crate::error::{Error, Result};

/// One channel realization: complex gain, noise variance, and optional
/// per-frame gain jitter. Average transmit power is 1 by construction, so
/// the configured SNR is rho = |h|^2 / sigma^2.
#[derive(Debug, Clone, Copy)]
pub struct ChannelInstance {
    h: Complex64,
    sigma2: f64,
    jitter_db: f64,
}

impl ChannelInstance {
    pub fn new(h: Complex64, sigma2: f64, jitter_db: f64) -> Result<Self> {
        if sigma2 <= 0.0 || !sigma2.is_finite() {
            return Err(Error::Config(format!("noise variance {sigma2} must be positive")));
        }
        if jitter_db < 0.0 || !jitter_db.is_finite() {
            return Err(Error::Config(format!("gain jitter {jitter_db} dB must be >= 0")));
        }
        if !h.is_finite() {
            return Err(Error::Config("channel gain must be finite".into()));
        }
        Ok(Self { h, sigma2, jitter_db })
    }

    /// Unit gain channel whose noise variance realizes the given average SNR.
    pub fn from_snr_db(snr_db: f64, jitter_db: f64) -> Result<Self> {
        Self::new(Complex64::new(1.0, 0.0), db_to_linear(-snr_db), jitter_db)
    }

    pub fn gain(&self) -> Complex64 {
        self.h
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn jitter_db(&self) -> f64 {
        self.jitter_db
    }

    /// Configured SNR rho = P |h|^2 / sigma^2 with P = 1.
    pub fn rho(&self) -> f64 {
        self.h.norm_sqr() / self.sigma2
    }

    pub fn snr_db(&self) -> f64 {
        linear_to_db(self.rho())
    }

    /// Draws one complex Gaussian noise sample with total variance sigma2.
    pub fn noise_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        let s = (self.sigma2 / 2.0).sqrt();
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(s * re, s * im)
    }

    /// Per-frame gain with log-normal jitter applied to the magnitude.
    fn frame_gain<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        if self.jitter_db == 0.0 {
            return self.h;
        }
        let g: f64 = StandardNormal.sample(rng);
        self.h * db_to_linear(g * self.jitter_db).sqrt()
    }
}

/// Applies y = h x + n sample-wise. When jitter is configured the gain
/// magnitude is redrawn once per 400-sample frame block; the filter tail
/// past the last full block reuses the final gain.
pub fn apply_channel<R: Rng + ?Sized>(
    stream: &SampleStream,
    ch: &ChannelInstance,
    rng: &mut R,
) -> SampleStream {
    let x = stream.samples();
    let frames = (x.len() / FRAME_SAMPLES).max(1);
    let gains: Vec<Complex64> = (0..frames).map(|_| ch.frame_gain(rng)).collect();
    let out = x
        .iter()
        .enumerate()
        .map(|(i, &s)| gains[(i / FRAME_SAMPLES).min(frames - 1)] * s + ch.noise_sample(rng))
        .collect();
    SampleStream::new(out)
}

/// Scales a batch to unit average power; the factor is constant within the
/// batch.
pub fn agc_normalize(batch: &SampleStream) -> Result<SampleStream> {
    let power: f64 = batch.samples().iter().map(|s| s.norm_sqr()).sum::<f64>()
        / batch.len().max(1) as f64;
    if power <= 0.0 || batch.is_empty() {
        return Err(Error::Agc("cannot normalize an all-zero batch".into()));
    }
    let scale = power.sqrt().recip();
    Ok(SampleStream::new(batch.samples().iter().map(|&s| s * scale).collect()))
}
