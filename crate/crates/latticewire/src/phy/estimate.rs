//! Least-squares channel estimation and SNR measurement from training
//! symbols.

use num_complex::Complex64;

use super::{barker_pilot, linear_to_db, PILOT_LEN};
use crate::error::{Error, Result};

/// Scalar least-squares channel estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelEstimate {
    h_hat: Complex64,
}

impl ChannelEstimate {
    pub fn new(h_hat: Complex64) -> Result<Self> {
        if !h_hat.is_finite() {
            return Err(Error::Measurement("channel estimate is not finite".into()));
        }
        Ok(Self { h_hat })
    }

    pub fn h(&self) -> Complex64 {
        self.h_hat
    }
}

/// Measured signal-to-noise ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snr {
    linear: f64,
}

impl Snr {
    pub fn linear(&self) -> f64 {
        self.linear
    }

    pub fn db(&self) -> f64 {
        linear_to_db(self.linear)
    }
}

/// Least-squares scalar gain: argmin_h sum |received - h reference|^2,
/// i.e. <reference, received> / <reference, reference>.
pub fn ls_gain(reference: &[Complex64], received: &[Complex64]) -> Result<Complex64> {
    if reference.len() != received.len() || reference.is_empty() {
        return Err(Error::Processing(format!(
            "gain fit needs matching non-empty slices, got {} vs {}",
            reference.len(),
            received.len()
        )));
    }
    let num: Complex64 = reference.iter().zip(received).map(|(&p, &r)| p.conj() * r).sum();
    let den: f64 = reference.iter().map(|p| p.norm_sqr()).sum();
    if den <= 0.0 {
        return Err(Error::Processing("reference sequence has zero energy".into()));
    }
    Ok(num / den)
}

/// Channel estimate from the 13 received pilot symbols, fitted against the
/// canonical Barker pilots.
pub fn estimate_channel(received_pilots: &[Complex64]) -> Result<ChannelEstimate> {
    if received_pilots.len() != PILOT_LEN {
        return Err(Error::Processing(format!(
            "expected {PILOT_LEN} pilot symbols, got {}",
            received_pilots.len()
        )));
    }
    ChannelEstimate::new(ls_gain(&barker_pilot(), received_pilots)?)
}

/// SNR of a block of received unit-energy training symbols given the gain
/// estimated from that same block: estimated signal power over residual
/// power, |h_hat|^2 / (mean |r|^2 - |h_hat|^2).
pub fn measure_snr(h_hat: &ChannelEstimate, received: &[Complex64]) -> Result<Snr> {
    if received.is_empty() {
        return Err(Error::Measurement("cannot measure SNR of an empty block".into()));
    }
    let mean_r2: f64 =
        received.iter().map(|r| r.norm_sqr()).sum::<f64>() / received.len() as f64;
    let signal = h_hat.h().norm_sqr();
    let denom = mean_r2 - signal;
    // Relative guard: a residual at rounding level means the noise floor
    // is unmeasurable, not astronomically high SNR.
    if denom <= mean_r2 * 1e-12 {
        return Err(Error::Measurement(format!(
            "residual power {denom:.3e} is below the measurable floor"
        )));
    }
    Ok(Snr { linear: signal / denom })
}

/// Unbiased noise variance from the LS fit residuals: the gain estimate
/// absorbs one complex degree of freedom, hence the n - 1 divisor.
pub fn estimate_noise(
    reference: &[Complex64],
    received: &[Complex64],
    h_hat: &ChannelEstimate,
) -> Result<f64> {
    if reference.len() != received.len() || reference.len() < 2 {
        return Err(Error::Measurement(format!(
            "noise estimation needs two matching slices of >= 2 symbols, got {} vs {}",
            reference.len(),
            received.len()
        )));
    }
    let h = h_hat.h();
    let residual: f64 = reference
        .iter()
        .zip(received)
        .map(|(&p, &r)| (r - h * p).norm_sqr())
        .sum();
    Ok(residual / (reference.len() - 1) as f64)
}

/// Mean of per-frame SNR readings in the dB domain.
pub fn average_snr_db(frames_db: &[f64]) -> f64 {
    frames_db.iter().sum::<f64>() / frames_db.len().max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phy::ChannelInstance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn noiseless_estimate_is_exact() {
        let h = Complex64::from_polar(0.7, FRAC_PI_3);
        let rx: Vec<Complex64> = barker_pilot().iter().map(|&p| h * p).collect();
        let est = estimate_channel(&rx).unwrap();
        assert!((est.h() - h).norm() < 1e-12);

        let doubled: Vec<Complex64> = barker_pilot().iter().map(|&p| 2.0 * p).collect();
        let est = estimate_channel(&doubled).unwrap();
        assert!((est.h() - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn estimator_rms_error_matches_ls_variance() {
        // Estimate variance over 13 pilots is sigma^2 / 13.
        let ch = ChannelInstance::from_snr_db(20.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pilots = barker_pilot();
        let trials = 10_000;
        let mse: f64 = (0..trials)
            .map(|_| {
                let rx: Vec<Complex64> =
                    pilots.iter().map(|&p| p + ch.noise_sample(&mut rng)).collect();
                (estimate_channel(&rx).unwrap().h() - Complex64::new(1.0, 0.0)).norm_sqr()
            })
            .sum::<f64>()
            / f64::from(trials);
        let predicted = ch.sigma2() / 13.0;
        assert!(
            mse > predicted / 2.0 && mse < predicted * 2.0,
            "mse {mse:.3e} vs predicted {predicted:.3e}"
        );
    }

    #[test]
    fn measured_snr_tracks_configuration() {
        let ch = ChannelInstance::new(Complex64::new(1.0, 0.0), 0.1, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        // 10^4 unit-energy training symbols: the Barker pilot tiled out.
        let reference: Vec<Complex64> =
            barker_pilot().iter().copied().cycle().take(10_000).collect();
        let rx: Vec<Complex64> =
            reference.iter().map(|&p| p + ch.noise_sample(&mut rng)).collect();
        let h_hat = ChannelEstimate::new(ls_gain(&reference, &rx).unwrap()).unwrap();
        let snr = measure_snr(&h_hat, &rx).unwrap();
        assert!((snr.db() - 10.0).abs() < 0.5, "measured {} dB", snr.db());
    }

    #[test]
    fn noise_estimate_tracks_true_variance() {
        let ch = ChannelInstance::new(Complex64::new(0.9, -0.2), 0.05, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let reference: Vec<Complex64> =
            barker_pilot().iter().copied().cycle().take(5_000).collect();
        let rx: Vec<Complex64> = reference
            .iter()
            .map(|&p| ch.gain() * p + ch.noise_sample(&mut rng))
            .collect();
        let h_hat = ChannelEstimate::new(ls_gain(&reference, &rx).unwrap()).unwrap();
        let s2 = estimate_noise(&reference, &rx, &h_hat).unwrap();
        assert!((s2 - 0.05).abs() < 0.005, "estimated {s2}");
        assert!(estimate_noise(&reference[..1], &rx[..1], &h_hat).is_err());
    }

    #[test]
    fn vanishing_noise_is_a_measurement_error() {
        let rx: Vec<Complex64> = barker_pilot().to_vec();
        let h_hat = estimate_channel(&rx).unwrap();
        assert!(matches!(measure_snr(&h_hat, &rx), Err(Error::Measurement(_))));
    }

    #[test]
    fn ls_gain_validates_inputs() {
        let a = [Complex64::new(1.0, 0.0)];
        assert!(ls_gain(&a, &[]).is_err());
        assert!(ls_gain(&[], &[]).is_err());
        let zero = [Complex64::ZERO];
        assert!(ls_gain(&zero, &a).is_err());
    }

    #[test]
    fn db_average_is_plain_mean() {
        assert!((average_snr_db(&[9.0, 11.0]) - 10.0).abs() < 1e-12);
        assert_eq!(average_snr_db(&[]), 0.0);
    }
}
