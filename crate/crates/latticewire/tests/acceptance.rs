//! Release gate: one test per acceptance criterion, each printing a
//! single `criterion N: PASS/FAIL` line with its measured values before
//! asserting. Tolerances are pinned as constants next to each check.

mod common;

use std::time::Instant;

use latticewire::config::ExperimentConfig;
use latticewire::coset::modulate;
use latticewire::decode::CosetDecoder;
use latticewire::demo::image_demo;
use latticewire::image::test_pattern;
use latticewire::lattice::SchemeId;
use latticewire::metrics::{
    conditional_entropy, point_seed, run_ber_sweep, SweepOptions, SweepPoint,
};
use latticewire::phy::{
    agc_normalize, apply_channel, assemble_frame, pilot_template, pulse_shape, rrc_taps,
    synchronize, ChannelEstimate, ChannelInstance, SampleStream, FILTER_SPAN, FRAME_SAMPLES,
    ROLLOFF, SPS,
};
use latticewire::pipeline::{loopback_exhaustive, measure_link_snr_db};
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const SEED: u64 = 17;

fn verdict(n: usize, ok: bool, detail: &str) {
    println!("criterion {n}: {} - {detail}", if ok { "PASS" } else { "FAIL" });
}

fn ber_of(point: &SweepPoint) -> (f64, f64) {
    match point {
        SweepPoint::Ber(b) => (b.ber, b.stderr),
        SweepPoint::Entropy(_) => unreachable!("BER sweep yields BER points"),
    }
}

/// Coset-D2 secrecy floor at the far placement: coset BER pinned to
/// 0.50 +/- 0.05 with >= 1e5 secret bits, conventional BER < 0.10,
/// inside a two-minute budget.
#[test]
fn criterion_1_coset_d2_secrecy_floor() {
    const BITS: u64 = 100_000;
    const TARGET: f64 = 0.50;
    const TOLERANCE: f64 = 0.05;
    const CONV_CEILING: f64 = 0.10;
    const BUDGET_SECS: f64 = 120.0;

    let start = Instant::now();
    let opts = SweepOptions::default();
    let result = run_ber_sweep(
        &[SchemeId::CosetD2, SchemeId::ConvD2],
        &[4.5],
        BITS,
        SEED,
        &opts,
    )
    .expect("sweep runs");
    let elapsed = start.elapsed().as_secs_f64();
    let (coset_ber, _) = ber_of(&result.points[0]);
    let (conv_ber, _) = ber_of(&result.points[1]);

    let coset_ok = (coset_ber - TARGET).abs() <= TOLERANCE;
    let conv_ok = conv_ber < CONV_CEILING;
    let time_ok = elapsed < BUDGET_SECS;
    let ok = coset_ok && conv_ok && time_ok;
    verdict(
        1,
        ok,
        &format!(
            "coset-d2@4.5dB ber {coset_ber:.4} (want {TARGET} +/- {TOLERANCE}), \
             conv-d2 ber {conv_ber:.2e} (< {CONV_CEILING}), {elapsed:.0}s (< {BUDGET_SECS:.0}s)"
        ),
    );
    assert!(
        ok,
        "coset-d2 ber {coset_ber:.4} vs {TARGET}+/-{TOLERANCE}, conv {conv_ber:.2e}, {elapsed:.0}s"
    );
}

/// Coset BER dominates conventional BER for every D2/D4/E8 pair at the
/// four placement SNRs, within 3 combined binomial standard errors.
#[test]
fn criterion_2_coset_degrades_more_than_conventional() {
    const BITS: u64 = 24_000;
    const SNRS: [f64; 4] = [4.5, 9.0, 15.0, 20.6];
    const SIGMAS: f64 = 3.0;

    let pairs = [
        (SchemeId::ConvD2, SchemeId::CosetD2),
        (SchemeId::ConvD4, SchemeId::CosetD4),
        (SchemeId::ConvE8, SchemeId::CosetE8),
    ];
    let opts = SweepOptions::default();
    let mut violations = Vec::new();
    for (conv, coset) in pairs {
        let result = run_ber_sweep(&[conv, coset], &SNRS, BITS, SEED, &opts).expect("sweep runs");
        for (i, &snr) in SNRS.iter().enumerate() {
            let (conv_ber, conv_se) = ber_of(&result.points[i]);
            let (coset_ber, coset_se) = ber_of(&result.points[SNRS.len() + i]);
            let slack = SIGMAS * (conv_se.powi(2) + coset_se.powi(2)).sqrt();
            if coset_ber < conv_ber - slack {
                violations.push(format!(
                    "{coset}@{snr}dB {coset_ber:.3e} < {conv}@{snr}dB {conv_ber:.3e} - {slack:.1e}"
                ));
            }
        }
    }
    let ok = violations.is_empty();
    verdict(
        2,
        ok,
        &if ok {
            format!("BER(coset) >= BER(conv) at all 12 points within {SIGMAS} standard errors")
        } else {
            format!("ordering violated: {}", violations.join("; "))
        },
    );
    assert!(ok, "{}", violations.join("; "));
}

/// The histogram estimator tracks the quadrature oracle within 0.05 bits
/// on all one-symbol schemes, and the secrecy contrast holds: the coset
/// scheme keeps h >= 0.9 bits up to 10 dB while the one-bit conventional
/// scheme leaks to <= 0.2 bits from 15 dB.
#[test]
fn criterion_3_conditional_entropy_vs_quadrature_oracle() {
    const TRIALS: u64 = 400_000;
    const SNRS: [f64; 4] = [0.0, 5.0, 10.0, 15.0];
    const AGREEMENT: f64 = 0.05;
    const COSET_FLOOR: f64 = 0.9;
    const CONV_CEILING: f64 = 0.2;

    let schemes = [SchemeId::ConvZ2, SchemeId::ConvZ8, SchemeId::CosetZ1s2r];
    let mut worst_gap = 0.0f64;
    let mut clauses = Vec::new();
    let mut ok = true;
    for scheme in schemes {
        for snr in SNRS {
            let mut rng = ChaCha8Rng::seed_from_u64(point_seed(SEED, scheme, snr));
            let est = conditional_entropy(scheme, snr, TRIALS, None, &mut rng)
                .expect("estimator runs");
            let oracle = common::quadrature_h_cond(scheme, snr);
            let gap = (est.h_cond - oracle).abs();
            worst_gap = worst_gap.max(gap);
            if gap > AGREEMENT {
                ok = false;
                clauses.push(format!("{scheme}@{snr}dB est {:.3} vs oracle {oracle:.3}", est.h_cond));
            }
            if scheme == SchemeId::CosetZ1s2r && snr <= 10.0 && est.h_cond < COSET_FLOOR {
                ok = false;
                clauses.push(format!("{scheme}@{snr}dB h {:.3} < {COSET_FLOOR}", est.h_cond));
            }
            if scheme == SchemeId::ConvZ2 && snr >= 15.0 && est.h_cond > CONV_CEILING {
                ok = false;
                clauses.push(format!("{scheme}@{snr}dB h {:.3} > {CONV_CEILING}", est.h_cond));
            }
        }
    }
    verdict(
        3,
        ok,
        &if ok {
            format!("estimator within {AGREEMENT} of oracle on 12 points (worst gap {worst_gap:.3})")
        } else {
            format!("worst oracle gap {worst_gap:.3}; failed clauses: {}", clauses.join("; "))
        },
    );
    assert!(ok, "{}", clauses.join("; "));
}

/// The production ML decision matches an independent exact-posterior
/// computation on every randomized instance, and agrees with MD at high
/// SNR almost always.
#[test]
fn criterion_4_ml_matches_exact_posterior_oracle() {
    const INSTANCES: usize = 10_000;
    const MD_SNR_DB: f64 = 25.0;
    const MD_AGREEMENT: f64 = 0.999;

    let mut oracle_mismatches = 0usize;
    let mut md_agreements = Vec::new();
    for scheme in SchemeId::ALL {
        let codebook = scheme.codebook().expect("scheme table is valid");
        let decoder = CosetDecoder::new(&codebook).expect("codebook is decodable");
        let mut rng = ChaCha8Rng::seed_from_u64(point_seed(SEED, scheme, 4.0));

        for _ in 0..INSTANCES {
            let (y, h, sigma2) = random_instance(&codebook, 0.0, 20.0, &mut rng);
            let beta = sigma2.recip();
            let h_hat = ChannelEstimate::new(h).expect("finite gain");
            let ours = decoder.ml_decode(&y, &h_hat, beta).expect("decode runs").index();
            let reference = common::exact_posterior_decode(&y, h, beta, &codebook);
            oracle_mismatches += usize::from(ours != reference);
        }

        let mut same = 0usize;
        for _ in 0..INSTANCES {
            let (y, h, sigma2) = random_instance(&codebook, MD_SNR_DB, MD_SNR_DB, &mut rng);
            let h_hat = ChannelEstimate::new(h).expect("finite gain");
            let ml = decoder.ml_decode(&y, &h_hat, sigma2.recip()).expect("ml runs").index();
            let md = decoder.md_decode(&y, &h_hat).expect("md runs").index();
            same += usize::from(ml == md);
        }
        md_agreements.push((scheme, same as f64 / INSTANCES as f64));
    }

    let worst_md =
        md_agreements.iter().cloned().fold((SchemeId::ConvZ2, 1.0), |acc, x| {
            if x.1 < acc.1 { x } else { acc }
        });
    let ok = oracle_mismatches == 0 && worst_md.1 >= MD_AGREEMENT;
    verdict(
        4,
        ok,
        &format!(
            "{oracle_mismatches} oracle mismatches in {} instances; worst ML/MD agreement \
             {:.4} ({}) at {MD_SNR_DB} dB (>= {MD_AGREEMENT})",
            INSTANCES * SchemeId::ALL.len(),
            worst_md.1,
            worst_md.0
        ),
    );
    assert!(ok, "mismatches {oracle_mismatches}, worst md agreement {:.4}", worst_md.1);
}

/// Random codeword through a random complex gain and AWGN at a SNR drawn
/// uniformly from [lo, hi] dB; returns (y, h, sigma2).
fn random_instance(
    codebook: &latticewire::lattice::CosetCodebook,
    lo_db: f64,
    hi_db: f64,
    rng: &mut ChaCha8Rng,
) -> (Vec<Complex64>, Complex64, f64) {
    use latticewire::coset::{coset_encode, RandomnessBits, SecretBits};
    let s = rng.random_range(0..codebook.coset_count());
    let secret = SecretBits::from_value(s, codebook.secret_bits() as usize).expect("in range");
    let rand_bits = RandomnessBits::random(rng, codebook.randomness_bits() as usize);
    let point = coset_encode(&secret, &rand_bits, codebook).expect("encodes");
    let x = modulate(point, codebook.box_size()).expect("in box");

    let mag = 0.5 + 1.5 * rng.random::<f64>();
    let phase = std::f64::consts::TAU * rng.random::<f64>();
    let h = Complex64::from_polar(mag, phase);
    let snr_db = lo_db + (hi_db - lo_db) * rng.random::<f64>();
    let sigma2 = 10f64.powf(-snr_db / 10.0);
    let axis = (sigma2 / 2.0).sqrt();
    let y = x
        .symbols()
        .iter()
        .map(|&xi| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            h * xi + Complex64::new(re * axis, im * axis)
        })
        .collect();
    (y, h, sigma2)
}

/// Frame pipeline integrity: exhaustive noiseless loopback for every
/// scheme, blind sync at 10 dB over 1000 random offsets, and measured
/// SNR within 0.5 dB of configured across 0-25 dB.
#[test]
fn criterion_5_pipeline_integrity() {
    const SYNC_TRIALS: usize = 1000;
    const SYNC_SNR_DB: f64 = 10.0;
    const SYNC_EXACTNESS: f64 = 0.99;
    const SNR_TOLERANCE_DB: f64 = 0.5;
    const SNR_FRAMES: usize = 40;

    let mut loopback_ok = true;
    let mut loopback_notes = Vec::new();
    for scheme in SchemeId::ALL {
        let expected = 1usize << (scheme.secret_bits() + scheme.randomness_bits());
        match loopback_exhaustive(scheme) {
            Ok(n) if n == expected => {}
            Ok(n) => {
                loopback_ok = false;
                loopback_notes.push(format!("{scheme}: {n}/{expected} points"));
            }
            Err(e) => {
                loopback_ok = false;
                loopback_notes.push(format!("{scheme}: {e}"));
            }
        }
    }

    let sync_hits = sync_recovery_rate(SYNC_TRIALS, SYNC_SNR_DB);
    let sync_rate = sync_hits as f64 / SYNC_TRIALS as f64;
    let sync_ok = sync_rate >= SYNC_EXACTNESS;

    let mut snr_ok = true;
    let mut worst_snr_err = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x5352);
    for snr in [0.0, 5.0, 10.0, 15.0, 20.0, 25.0] {
        let measured =
            measure_link_snr_db(snr, 0.0, SNR_FRAMES, &mut rng).expect("measurement runs");
        let err = (measured - snr).abs();
        worst_snr_err = worst_snr_err.max(err);
        snr_ok &= err <= SNR_TOLERANCE_DB;
    }

    let ok = loopback_ok && sync_ok && snr_ok;
    verdict(
        5,
        ok,
        &format!(
            "loopback {} ({} schemes), sync {sync_hits}/{SYNC_TRIALS} at {SYNC_SNR_DB} dB \
             (>= {SYNC_EXACTNESS}), worst SNR error {worst_snr_err:.2} dB (<= {SNR_TOLERANCE_DB})",
            if loopback_ok { "exact".into() } else { loopback_notes.join("; ") },
            SchemeId::ALL.len()
        ),
    );
    assert!(ok, "loopback {loopback_notes:?}, sync {sync_rate}, snr err {worst_snr_err:.2}");
}

/// Offset recovery count: batches of pilot-bearing frames with random
/// lead-in noise; success means the first reported offset equals the true
/// one.
fn sync_recovery_rate(trials: usize, snr_db: f64) -> usize {
    use latticewire::coset::{coset_encode, RandomnessBits, SecretBits};
    let scheme = SchemeId::ConvZ8;
    let codebook = scheme.codebook().expect("scheme table is valid");
    let taps = rrc_taps(ROLLOFF, FILTER_SPAN, SPS).expect("fixed design is valid");
    let template = pilot_template(&taps).expect("template builds");
    let channel = ChannelInstance::from_snr_db(snr_db, 0.0).expect("parameters valid");
    let per_frame = 87;
    let frames = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xacc);

    let mut hits = 0usize;
    for _ in 0..trials {
        let mut symbols = Vec::with_capacity(frames * 100);
        for _ in 0..frames {
            let words: Vec<_> = (0..per_frame)
                .map(|_| {
                    let s = rng.random_range(0..codebook.coset_count());
                    let secret =
                        SecretBits::from_value(s, codebook.secret_bits() as usize).expect("fits");
                    let rand_bits =
                        RandomnessBits::random(&mut rng, codebook.randomness_bits() as usize);
                    let point = coset_encode(&secret, &rand_bits, &codebook).expect("encodes");
                    modulate(point, codebook.box_size()).expect("in box")
                })
                .collect();
            symbols.extend(assemble_frame(&words, codebook.box_size()).expect("fits").symbols());
        }
        let offset = rng.random_range(0..FRAME_SAMPLES);
        let shaped = pulse_shape(&symbols, &taps).expect("shaping runs");
        let mut delayed = vec![Complex64::ZERO; offset];
        delayed.extend_from_slice(shaped.samples());
        let received = apply_channel(&SampleStream::new(delayed), &channel, &mut rng);
        let leveled = agc_normalize(&received).expect("nonzero signal");
        if let Ok(offsets) = synchronize(&leveled, &template) {
            hits += usize::from(offsets.first() == Some(&offset));
        }
    }
    hits
}

/// Carved minimum squared distances against the exhaustive pairwise
/// oracle, with the three pinned table values.
#[test]
fn criterion_6_minimum_distances_by_brute_force() {
    const PINNED: [(SchemeId, u64); 3] =
        [(SchemeId::CosetD2, 2), (SchemeId::ConvE8, 4), (SchemeId::ConvZ2, 1)];

    let mut ok = true;
    let mut notes = Vec::new();
    for scheme in SchemeId::ALL {
        let codebook = scheme.codebook().expect("scheme table is valid");
        let oracle = common::pairwise_min_sq_distance(&codebook);
        let production = codebook.min_squared_distance().expect("at least two points");
        if production != oracle {
            ok = false;
            notes.push(format!("{scheme}: production {production} vs oracle {oracle}"));
        }
    }
    for (scheme, want) in PINNED {
        let codebook = scheme.codebook().expect("scheme table is valid");
        let oracle = common::pairwise_min_sq_distance(&codebook);
        if oracle != want {
            ok = false;
            notes.push(format!("{scheme}: oracle {oracle}, table says {want}"));
        }
    }
    verdict(
        6,
        ok,
        &if ok {
            "coset-d2 -> 2, conv-e8 -> 4, conv-z2 -> 1; production matches oracle on all schemes"
                .to_string()
        } else {
            notes.join("; ")
        },
    );
    assert!(ok, "{}", notes.join("; "));
}

/// Image demo contrast: the legitimate receiver recovers the test pattern
/// while the far eavesdropper sees noise, deterministically.
#[test]
fn criterion_7_image_demo_contrast() {
    const BOB_CEILING: f64 = 1e-3;
    const EVE_FLOOR: f64 = 0.4;

    let config = ExperimentConfig {
        schemes: vec![SchemeId::CosetZ1s2r],
        placements: vec![4.5],
        ..ExperimentConfig::default()
    };
    let image = test_pattern();

    let report = image_demo(&config, &image, SEED).expect("demo runs");
    let again = image_demo(&config, &image, SEED).expect("demo runs");
    let deterministic = report.to_csv() == again.to_csv()
        && report
            .receivers
            .iter()
            .zip(&again.receivers)
            .all(|(a, b)| a.image == b.image);

    let bob = &report.receivers[0];
    let eve = &report.receivers[1];
    let ok = bob.ber.ber < BOB_CEILING && eve.ber.ber >= EVE_FLOOR && deterministic;
    verdict(
        7,
        ok,
        &format!(
            "bob@{} dB ber {:.2e} (< {BOB_CEILING:.0e}), eve@{} dB ber {:.3} (>= {EVE_FLOOR}), \
             deterministic: {deterministic}",
            bob.snr_db, bob.ber.ber, eve.snr_db, eve.ber.ber
        ),
    );
    assert!(
        ok,
        "bob {:.2e}, eve {:.3}, deterministic {deterministic}",
        bob.ber.ber, eve.ber.ber
    );
}
