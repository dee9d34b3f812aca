//! Coset decoding: exact maximum-likelihood over Gaussian mixtures, the
//! minimum-distance high-SNR approximation, and conventional decoding as
//! the single-member special case.

use num_complex::Complex64;

use crate::coset::demodulate_reference;
use crate::error::{Error, Result};
use crate::lattice::CosetCodebook;
use crate::phy::ChannelEstimate;

/// Decoder selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecodeMode {
    /// Sum of Gaussian likelihoods over each coset (exact).
    #[default]
    Ml,
    /// Distance to the nearest member of each coset (high-SNR shortcut).
    Md,
}

/// Where the likelihood concentration beta comes from.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Concentration {
    /// beta = 1 / sigma2_hat: the true Gaussian likelihood scale.
    #[default]
    InverseNoise,
    /// beta = |h_hat|^2 / sigma2_hat, the dimensionless SNR estimate.
    Snr,
    /// Fixed value, independent of the channel.
    Fixed(f64),
}

impl Concentration {
    /// Resolves the concentration against the current channel knowledge.
    pub fn resolve(&self, h_hat: &ChannelEstimate, sigma2_hat: f64) -> Result<f64> {
        let beta = match self {
            Concentration::InverseNoise => {
                if sigma2_hat <= 0.0 || sigma2_hat.is_nan() {
                    return Err(Error::Decode(format!(
                        "noise estimate {sigma2_hat} must be positive"
                    )));
                }
                sigma2_hat.recip()
            }
            Concentration::Snr => {
                if sigma2_hat <= 0.0 || sigma2_hat.is_nan() {
                    return Err(Error::Decode(format!(
                        "noise estimate {sigma2_hat} must be positive"
                    )));
                }
                h_hat.h().norm_sqr() / sigma2_hat
            }
            Concentration::Fixed(b) => *b,
        };
        if beta <= 0.0 || !beta.is_finite() {
            return Err(Error::Decode(format!("concentration {beta} must be finite and positive")));
        }
        Ok(beta)
    }
}

/// Full decoder configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct DecoderConfig {
    pub mode: DecodeMode,
    pub concentration: Concentration,
}

/// Decoding result: the chosen coset index, its bits, and the per-coset
/// scores (higher is better; the index maximizes them, lowest index wins
/// exact ties).
#[derive(Debug, Clone)]
pub struct DecodedSecret {
    index: usize,
    bits: Vec<u8>,
    scores: Vec<f64>,
}

impl DecodedSecret {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }
}

/// Brute-force coset decoder with the modulated candidate points
/// precomputed once per codebook.
#[derive(Debug, Clone)]
pub struct CosetDecoder {
    secret_bits: usize,
    dimension: usize,
    /// candidates[j][l] = modulated symbols of the l-th member of coset j.
    candidates: Vec<Vec<Vec<Complex64>>>,
}

impl CosetDecoder {
    pub fn new(codebook: &CosetCodebook) -> Result<Self> {
        let mut candidates = Vec::with_capacity(codebook.coset_count());
        for j in 0..codebook.coset_count() {
            let members = codebook
                .coset(j)?
                .iter()
                .map(|p| {
                    demodulate_reference(p, codebook.box_size()).map(|s| s.symbols().to_vec())
                })
                .collect::<Result<Vec<_>>>()?;
            candidates.push(members);
        }
        Ok(Self {
            secret_bits: codebook.secret_bits() as usize,
            dimension: codebook.dimension(),
            candidates,
        })
    }

    pub fn coset_count(&self) -> usize {
        self.candidates.len()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    fn check_inputs(&self, y: &[Complex64], h: Complex64) -> Result<()> {
        if y.len() != self.dimension {
            return Err(Error::Decode(format!(
                "received {} symbols for a {}-symbol codeword",
                y.len(),
                self.dimension
            )));
        }
        if y.iter().any(|s| !s.is_finite()) || !h.is_finite() {
            return Err(Error::Decode("non-finite received symbol or channel estimate".into()));
        }
        Ok(())
    }

    /// Decodes with the mode and concentration from `cfg`.
    pub fn decode(
        &self,
        y: &[Complex64],
        h_hat: &ChannelEstimate,
        sigma2_hat: f64,
        cfg: &DecoderConfig,
    ) -> Result<DecodedSecret> {
        match cfg.mode {
            DecodeMode::Ml => self.ml_decode(y, h_hat, cfg.concentration.resolve(h_hat, sigma2_hat)?),
            DecodeMode::Md => self.md_decode(y, h_hat),
        }
    }

    /// Maximum-likelihood coset decision: per coset, log-sum-exp of
    /// -beta ||y - h_hat c||^2 over its members, computed with
    /// max-subtraction for numeric stability.
    pub fn ml_decode(
        &self,
        y: &[Complex64],
        h_hat: &ChannelEstimate,
        beta: f64,
    ) -> Result<DecodedSecret> {
        let h = h_hat.h();
        self.check_inputs(y, h)?;
        if beta <= 0.0 || !beta.is_finite() {
            return Err(Error::Decode(format!("concentration {beta} must be finite and positive")));
        }
        let scores = self
            .candidates
            .iter()
            .map(|members| {
                let exponents: Vec<f64> = members
                    .iter()
                    .map(|c| -beta * distance_sqr(y, h, c))
                    .collect();
                let peak = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                peak + exponents.iter().map(|e| (e - peak).exp()).sum::<f64>().ln()
            })
            .collect();
        self.pick(scores)
    }

    /// Minimum-distance coset decision on the equalized symbols y / h_hat.
    pub fn md_decode(&self, y: &[Complex64], h_hat: &ChannelEstimate) -> Result<DecodedSecret> {
        let h = h_hat.h();
        self.check_inputs(y, h)?;
        if h == Complex64::ZERO {
            return Err(Error::Decode("cannot equalize with a zero channel estimate".into()));
        }
        let z: Vec<Complex64> = y.iter().map(|&s| s / h).collect();
        let unit = Complex64::new(1.0, 0.0);
        let scores = self
            .candidates
            .iter()
            .map(|members| {
                -members
                    .iter()
                    .map(|c| distance_sqr(&z, unit, c))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        self.pick(scores)
    }

    fn pick(&self, scores: Vec<f64>) -> Result<DecodedSecret> {
        let mut index = 0usize;
        for (j, &s) in scores.iter().enumerate() {
            if s > scores[index] {
                index = j;
            }
        }
        if !scores[index].is_finite() && scores[index] != f64::NEG_INFINITY {
            return Err(Error::Decode("decoder scores are not finite".into()));
        }
        let bits = (0..self.secret_bits)
            .map(|i| ((index >> (self.secret_bits - 1 - i)) & 1) as u8)
            .collect();
        Ok(DecodedSecret { index, bits, scores })
    }
}

fn distance_sqr(y: &[Complex64], h: Complex64, c: &[Complex64]) -> f64 {
    y.iter().zip(c).map(|(&yi, &ci)| (yi - h * ci).norm_sqr()).sum()
}
