//! End-to-end link simulation: batches of framed codewords through the
//! transmit chain, the channel, and the receive chain back to secret bits.
//!
//! Two channel granularities are supported. `Frames` runs the full
//! baseband chain (pulse shaping, AGC, synchronization, pilot-aided
//! estimation). `Awgn` applies noise directly to codeword symbols with the
//! gain known exactly, the classic computer-simulation counterpart of the
//! over-the-air chain.

use num_complex::Complex64;
use rand::Rng;

use crate::coset::{coset_encode, modulate, RandomnessBits, SecretBits};
use crate::decode::{CosetDecoder, DecodedSecret, DecoderConfig};
use crate::error::{Error, Result};
use crate::lattice::{CosetCodebook, SchemeId};
use crate::phy::{
    agc_normalize, apply_channel, assemble_frame, average_snr_db, barker_pilot, estimate_channel,
    estimate_noise, extract_symbols, ls_gain, matched_filter, measure_snr, pilot_template,
    pulse_shape, rrc_taps, synchronize, ChannelEstimate, ChannelInstance, SampleStream,
    BATCH_FRAMES, DATA_SYMBOLS, FILTER_SPAN, FRAME_SAMPLES, FRAME_SYMBOLS, PILOT_LEN, ROLLOFF,
    SPS,
};

/// Channel granularity of a simulated link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PipelineMode {
    /// Symbol-level additive noise with the gain known exactly.
    #[default]
    Awgn,
    /// Full framed baseband chain with pilot-aided estimation.
    Frames,
}

/// Parameters of one simulated link.
#[derive(Debug, Clone, Copy)]
pub struct LinkParams {
    pub scheme: SchemeId,
    pub snr_db: f64,
    pub jitter_db: f64,
    pub mode: PipelineMode,
    pub decoder: DecoderConfig,
}

impl LinkParams {
    pub fn new(scheme: SchemeId, snr_db: f64) -> Self {
        Self {
            scheme,
            snr_db,
            jitter_db: 0.0,
            mode: PipelineMode::default(),
            decoder: DecoderConfig::default(),
        }
    }
}

/// Result of pushing one batch of secrets through the link.
#[derive(Debug, Clone)]
pub struct BatchOutcome {
    /// Decoded coset indices, frame order; None when sync failed and the
    /// batch produced nothing.
    pub decoded: Option<Vec<usize>>,
}

/// One link: codebook, decoder, filters, and channel, ready to push
/// batches of secrets through.
#[derive(Debug, Clone)]
pub struct LinkSimulator {
    params: LinkParams,
    codebook: CosetCodebook,
    decoder: CosetDecoder,
    taps: Vec<f64>,
    template: SampleStream,
    channel: ChannelInstance,
    codewords_per_frame: usize,
}

impl LinkSimulator {
    pub fn new(params: LinkParams) -> Result<Self> {
        let codebook = params.scheme.codebook()?;
        let decoder = CosetDecoder::new(&codebook)?;
        let taps = rrc_taps(ROLLOFF, FILTER_SPAN, SPS)?;
        let template = pilot_template(&taps)?;
        let jitter = match params.mode {
            PipelineMode::Frames => params.jitter_db,
            PipelineMode::Awgn => 0.0,
        };
        let channel = ChannelInstance::from_snr_db(params.snr_db, jitter)?;
        let codewords_per_frame = DATA_SYMBOLS / codebook.dimension();
        Ok(Self { params, codebook, decoder, taps, template, channel, codewords_per_frame })
    }

    pub fn params(&self) -> &LinkParams {
        &self.params
    }

    pub fn codebook(&self) -> &CosetCodebook {
        &self.codebook
    }

    pub fn channel(&self) -> &ChannelInstance {
        &self.channel
    }

    /// Codewords carried by one frame.
    pub fn codewords_per_frame(&self) -> usize {
        self.codewords_per_frame
    }

    /// Codewords (equivalently secrets) consumed per batch.
    pub fn batch_capacity(&self) -> usize {
        BATCH_FRAMES * self.codewords_per_frame
    }

    /// Secret bits carried per batch.
    pub fn batch_secret_bits(&self) -> usize {
        self.batch_capacity() * self.codebook.secret_bits() as usize
    }

    fn encode_points<R: Rng + ?Sized>(
        &self,
        secrets: &[usize],
        rng: &mut R,
    ) -> Result<Vec<Vec<i32>>> {
        let k = self.codebook.secret_bits() as usize;
        let r = self.codebook.randomness_bits() as usize;
        secrets
            .iter()
            .map(|&s| {
                let secret = SecretBits::from_value(s, k)?;
                let rand = RandomnessBits::random(rng, r);
                Ok(coset_encode(&secret, &rand, &self.codebook)?.clone())
            })
            .collect()
    }

    /// Pushes exactly `batch_capacity()` secrets (coset indices) through
    /// the link. Randomness bits are drawn from `rng`, as is the channel.
    pub fn transmit_batch<R: Rng + ?Sized>(
        &self,
        secrets: &[usize],
        rng: &mut R,
    ) -> Result<BatchOutcome> {
        if secrets.len() != self.batch_capacity() {
            return Err(Error::Processing(format!(
                "batch wants {} secrets, got {}",
                self.batch_capacity(),
                secrets.len()
            )));
        }
        if let Some(&bad) = secrets.iter().find(|&&s| s >= self.codebook.coset_count()) {
            return Err(Error::Encoding(format!("secret index {bad} out of range")));
        }
        match self.params.mode {
            PipelineMode::Awgn => self.transmit_awgn(secrets, rng),
            PipelineMode::Frames => self.transmit_frames(secrets, rng),
        }
    }

    fn transmit_awgn<R: Rng + ?Sized>(&self, secrets: &[usize], rng: &mut R) -> Result<BatchOutcome> {
        let points = self.encode_points(secrets, rng)?;
        let h = self.channel.gain();
        let h_hat = ChannelEstimate::new(h)?;
        let sigma2 = self.channel.sigma2();
        let mut decoded = Vec::with_capacity(secrets.len());
        for point in &points {
            let y: Vec<Complex64> = modulate(point, self.codebook.box_size())?
                .symbols()
                .iter()
                .map(|&s| h * s + self.channel.noise_sample(rng))
                .collect();
            decoded.push(self.decode_one(&y, &h_hat, sigma2)?.index());
        }
        Ok(BatchOutcome { decoded: Some(decoded) })
    }

    fn transmit_frames<R: Rng + ?Sized>(
        &self,
        secrets: &[usize],
        rng: &mut R,
    ) -> Result<BatchOutcome> {
        let points = self.encode_points(secrets, rng)?;
        let mut symbols = Vec::with_capacity(BATCH_FRAMES * FRAME_SYMBOLS);
        for frame_points in points.chunks(self.codewords_per_frame) {
            let cws = frame_points
                .iter()
                .map(|p| modulate(p, self.codebook.box_size()))
                .collect::<Result<Vec<_>>>()?;
            symbols.extend(assemble_frame(&cws, self.codebook.box_size())?.symbols());
        }
        let shaped = pulse_shape(&symbols, &self.taps)?;
        let received = apply_channel(&shaped, &self.channel, rng);
        let leveled = agc_normalize(&received)?;
        let offsets = match synchronize(&leveled, &self.template) {
            Ok(o) => o,
            Err(Error::SyncFailure(_)) => return Ok(BatchOutcome { decoded: None }),
            Err(e) => return Err(e),
        };
        let filtered = matched_filter(&leveled, &self.taps)?;

        let mut decoded = Vec::with_capacity(secrets.len());
        for &offset in offsets.iter().take(BATCH_FRAMES) {
            let frame = extract_symbols(&filtered, offset, FRAME_SYMBOLS)?;
            let (pilots, data) = frame.split_at(PILOT_LEN);
            let h_hat = estimate_channel(pilots)?;
            let sigma2_hat = estimate_noise(&barker_pilot(), pilots, &h_hat)?.max(1e-30);
            for cw in 0..self.codewords_per_frame {
                let y = &data[cw * self.codebook.dimension()..(cw + 1) * self.codebook.dimension()];
                decoded.push(self.decode_one(y, &h_hat, sigma2_hat)?.index());
            }
        }
        Ok(BatchOutcome { decoded: Some(decoded) })
    }

    fn decode_one(
        &self,
        y: &[Complex64],
        h_hat: &ChannelEstimate,
        sigma2_hat: f64,
    ) -> Result<DecodedSecret> {
        self.decoder.decode(y, h_hat, sigma2_hat, &self.params.decoder)
    }
}

/// Transmit-side loopback with no channel: every (secret, randomness)
/// pair is encoded, framed, shaped, matched-filtered, and decoded with the
/// noise floor estimated from the pilot residuals. Returns the number of
/// codewords checked; any decoding mismatch is an error.
pub fn loopback_exhaustive(scheme: SchemeId) -> Result<usize> {
    let codebook = scheme.codebook()?;
    let decoder = CosetDecoder::new(&codebook)?;
    let taps = rrc_taps(ROLLOFF, FILTER_SPAN, SPS)?;
    let per_frame = DATA_SYMBOLS / codebook.dimension();

    // Every (secret, randomness) combination, in order.
    let all_points: Vec<(usize, &Vec<i32>)> = (0..codebook.coset_count())
        .flat_map(|j| codebook.coset(j).map(|c| c.iter().map(move |p| (j, p))))
        .flatten()
        .collect();

    let mut symbols = Vec::new();
    for frame_points in all_points.chunks(per_frame) {
        let cws = frame_points
            .iter()
            .map(|(_, p)| modulate(p, codebook.box_size()))
            .collect::<Result<Vec<_>>>()?;
        symbols.extend(assemble_frame(&cws, codebook.box_size())?.symbols());
    }
    let shaped = pulse_shape(&symbols, &taps)?;
    let filtered = matched_filter(&shaped, &taps)?;

    let mut checked = 0usize;
    for (f, frame_points) in all_points.chunks(per_frame).enumerate() {
        let frame = extract_symbols(&filtered, f * FRAME_SAMPLES, FRAME_SYMBOLS)?;
        let (pilots, data) = frame.split_at(PILOT_LEN);
        let h_hat = estimate_channel(pilots)?;
        let sigma2_hat = estimate_noise(&barker_pilot(), pilots, &h_hat)?.max(1e-30);
        for (cw, &(expect, point)) in frame_points.iter().enumerate() {
            let y = &data[cw * codebook.dimension()..(cw + 1) * codebook.dimension()];
            let got = decoder.decode(y, &h_hat, sigma2_hat, &DecoderConfig::default())?;
            if got.index() != expect {
                return Err(Error::Decode(format!(
                    "{scheme}: loopback decoded coset {} for point {point:?} in coset {expect}",
                    got.index()
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Measured average SNR of the framed chain at a configured SNR: batches
/// of Barker-tiled training frames are shaped, passed through the channel,
/// gain-leveled, matched-filtered, and measured frame by frame. Offsets
/// are known (no blind sync): tiled pilots are self-similar every 13
/// symbols, which is exactly what training frames are for.
pub fn measure_link_snr_db<R: Rng + ?Sized>(
    snr_db: f64,
    jitter_db: f64,
    frames: usize,
    rng: &mut R,
) -> Result<f64> {
    if frames == 0 {
        return Err(Error::Measurement("need at least one frame".into()));
    }
    let taps = rrc_taps(ROLLOFF, FILTER_SPAN, SPS)?;
    let channel = ChannelInstance::from_snr_db(snr_db, jitter_db)?;
    let training: Vec<Complex64> =
        barker_pilot().iter().copied().cycle().take(FRAME_SYMBOLS).collect();

    let mut per_frame_db = Vec::with_capacity(frames);
    let mut remaining = frames;
    while remaining > 0 {
        let count = remaining.min(BATCH_FRAMES);
        let mut symbols = Vec::with_capacity(count * FRAME_SYMBOLS);
        for _ in 0..count {
            symbols.extend_from_slice(&training);
        }
        let shaped = pulse_shape(&symbols, &taps)?;
        let received = apply_channel(&shaped, &channel, rng);
        let leveled = agc_normalize(&received)?;
        let filtered = matched_filter(&leveled, &taps)?;
        for f in 0..count {
            let rx = extract_symbols(&filtered, f * FRAME_SAMPLES, FRAME_SYMBOLS)?;
            let h_hat = ChannelEstimate::new(ls_gain(&training, &rx)?)?;
            per_frame_db.push(measure_snr(&h_hat, &rx)?.db());
        }
        remaining -= count;
    }
    Ok(average_snr_db(&per_frame_db))
}
