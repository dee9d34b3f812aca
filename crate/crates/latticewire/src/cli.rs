//! Command-line front end: experiment subcommands over the library, with
//! deterministic outputs and config-file plumbing.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::{resolve_seed, ExperimentConfig};
use crate::error::Result;
use crate::image::{image_to_bits, test_pattern, write_atomic, BitImage};
use crate::lattice::SchemeId;
use crate::metrics::{run_ber_sweep, run_entropy_sweep, SweepOptions};
use crate::pipeline::loopback_exhaustive;

#[derive(Parser)]
#[command(name = "latticewire", version, about = "Lattice coset coding wiretap simulator")]
struct Cli {
    /// Experiment config file (flat key = value lines).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// RNG seed; overrides LATTICEWIRE_SEED and the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory; overrides the config file.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bit error rate over the configured schemes and placements.
    BerSweep,
    /// Conditional entropy of the secret over schemes and placements.
    EntropySweep,
    /// Transmit the test image to every receiver and write what they see.
    ImageDemo,
    /// Exhaustive noiseless encode/decode self-test of every scheme.
    LoopbackTest,
    /// Print a scheme's code parameters and cosets.
    SchemeInfo {
        /// Scheme name, e.g. coset-d2.
        scheme: String,
    },
}

/// Runs the CLI and returns the process exit code: 0 on success, 2 on
/// configuration errors, 3 on everything else.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = cli.out {
        config.output_dir = out;
    }
    match cli.command {
        Command::BerSweep => ber_sweep(&config, cli.seed),
        Command::EntropySweep => entropy_sweep(&config, cli.seed),
        Command::ImageDemo => image_demo(&config, cli.seed),
        Command::LoopbackTest => loopback_test(),
        Command::SchemeInfo { scheme } => scheme_info(&scheme),
    }
}

fn out_path(config: &ExperimentConfig, name: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(&config.output_dir)?;
    Ok(config.output_dir.join(name))
}

fn ber_sweep(config: &ExperimentConfig, cli_seed: Option<u64>) -> Result<()> {
    let seed = resolve_seed(cli_seed, config)?;
    let opts = SweepOptions {
        mode: config.mode,
        jitter_db: config.jitter_db,
        decoder: config.decoder,
    };
    let result = run_ber_sweep(
        &config.schemes,
        &config.placements,
        config.secret_bits_target,
        seed,
        &opts,
    )?;
    let path = out_path(config, "ber_sweep.csv")?;
    write_atomic(&path, result.to_csv().as_bytes())?;
    print!("{}", result.to_csv());
    println!("wrote {}", path.display());
    Ok(())
}

fn entropy_sweep(config: &ExperimentConfig, cli_seed: Option<u64>) -> Result<()> {
    let seed = resolve_seed(cli_seed, config)?;
    let result =
        run_entropy_sweep(&config.schemes, &config.placements, config.entropy_trials, seed)?;
    let path = out_path(config, "entropy_sweep.csv")?;
    write_atomic(&path, result.to_csv().as_bytes())?;
    print!("{}", result.to_csv());
    println!("wrote {}", path.display());
    Ok(())
}

fn image_demo(config: &ExperimentConfig, cli_seed: Option<u64>) -> Result<()> {
    let seed = resolve_seed(cli_seed, config)?;
    let image: BitImage = match &config.image_path {
        Some(path) => image_to_bits(path)?,
        None => test_pattern(),
    };
    let report = crate::demo::image_demo(config, &image, seed)?;
    for receiver in &report.receivers {
        let name = format!("demo_{}_{}.pbm", report.scheme, receiver.label);
        let path = out_path(config, &name)?;
        crate::image::bits_to_image(&receiver.image, &path)?;
        let flag = if receiver.ber.flagged { "  [partial: sync failures]" } else { "" };
        println!(
            "{}: snr {} dB, ber {:.3e} -> {}{}",
            receiver.label,
            receiver.snr_db,
            receiver.ber.ber,
            path.display(),
            flag
        );
    }
    let csv_path = out_path(config, "image_demo.csv")?;
    write_atomic(&csv_path, report.to_csv().as_bytes())?;
    println!("wrote {}", csv_path.display());
    Ok(())
}

fn loopback_test() -> Result<()> {
    for scheme in SchemeId::ALL {
        let points = loopback_exhaustive(scheme)?;
        println!("{scheme}: {points} codebook points recovered through the frame pipeline");
    }
    Ok(())
}

fn scheme_info(name: &str) -> Result<()> {
    print!("{}", scheme_summary(name.parse()?)?);
    Ok(())
}

/// Human-readable code parameters and cosets, as printed by scheme-info.
pub fn scheme_summary(scheme: SchemeId) -> Result<String> {
    use std::fmt::Write as _;
    let codebook = scheme.codebook()?;
    let mut out = String::new();
    let _ = writeln!(out, "scheme: {scheme}");
    let _ = writeln!(out, "lattice: {}", scheme.lattice_name());
    let _ = writeln!(out, "dimension (L): {}", codebook.dimension());
    let _ = writeln!(out, "levels per axis (M): {}", codebook.box_size());
    let _ = writeln!(out, "secret bits (k): {}", codebook.secret_bits());
    let _ = writeln!(out, "randomness bits (r): {}", codebook.randomness_bits());
    for j in 0..codebook.coset_count() {
        let members = codebook.coset(j)?;
        let shown =
            members.iter().take(8).map(|p| format_point(p)).collect::<Vec<_>>().join(" ");
        if members.len() > 8 {
            let _ = writeln!(out, "coset {j}: {} members: {shown} ...", members.len());
        } else {
            let _ = writeln!(out, "coset {j}: {shown}");
        }
    }
    Ok(out)
}

fn format_point(point: &[i32]) -> String {
    let inner = point.iter().map(i32::to_string).collect::<Vec<_>>().join(", ");
    format!("({inner})")
}
