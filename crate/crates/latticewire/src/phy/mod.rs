//! Software baseband link: framing with Barker pilots, root-raised-cosine
//! pulse shaping, the slow-fading AWGN channel, AGC, frame synchronization,
//! channel estimation, and SNR measurement.

mod barker;
mod channel;
mod estimate;
mod frame;
mod rrc;
mod sync;

pub use barker::{barker_pilot, barker_sequence};
pub use channel::{agc_normalize, apply_channel, ChannelInstance};
pub use estimate::{
    average_snr_db, estimate_channel, estimate_noise, ls_gain, measure_snr, ChannelEstimate, Snr,
};
pub use frame::{assemble_frame, Frame};
pub use rrc::{extract_symbols, matched_filter, pulse_shape, rrc_taps, SampleStream};
pub use sync::{pilot_template, synchronize};

/// Samples per symbol after upsampling.
pub const SPS: usize = 4;
/// Symbols per frame: pilots plus data.
pub const FRAME_SYMBOLS: usize = 100;
/// Pilot symbols at the head of each frame.
pub const PILOT_LEN: usize = 13;
/// Data symbols per frame.
pub const DATA_SYMBOLS: usize = FRAME_SYMBOLS - PILOT_LEN;
/// Raw samples spanned by one frame.
pub const FRAME_SAMPLES: usize = FRAME_SYMBOLS * SPS;
/// Frames processed per batch (AGC and sync granularity).
pub const BATCH_FRAMES: usize = 10;
/// Transmit filter span in symbols.
pub const FILTER_SPAN: usize = 6;
/// Filter rolloff factor.
pub const ROLLOFF: f64 = 0.5;
/// Group delay of the shape+match cascade, in samples.
pub const GROUP_DELAY: usize = FILTER_SPAN * SPS;

/// Decibels to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to decibels.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_conversions_round_trip() {
        for db in [-10.0, 0.0, 4.5, 20.6] {
            assert!((linear_to_db(db_to_linear(db)) - db).abs() < 1e-12);
        }
        assert!((db_to_linear(0.0) - 1.0).abs() < 1e-15);
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
    }
}
