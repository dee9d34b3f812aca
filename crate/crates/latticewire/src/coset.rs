//! Coset encoding of secret plus randomness bits, and the rotated-PAM
//! modulation of integer points onto unit-energy complex symbols.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{CosetCodebook, IntPoint};

/// Unit rotation e^{-i pi/4} applied to every modulated symbol.
const ROTATION: Complex64 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2);

/// Secret bit string of length k, MSB first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretBits(Vec<u8>);

/// Randomness bit string of length r, MSB first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomnessBits(Vec<u8>);

fn check_bits(bits: &[u8]) -> Result<()> {
    if bits.iter().any(|&b| b > 1) {
        return Err(Error::Config("bit strings may contain only 0 and 1".into()));
    }
    Ok(())
}

fn bits_from_value(value: usize, len: usize) -> Result<Vec<u8>> {
    if len < usize::BITS as usize && value >> len != 0 {
        return Err(Error::Config(format!("value {value} does not fit in {len} bits")));
    }
    Ok((0..len).map(|i| ((value >> (len - 1 - i)) & 1) as u8).collect())
}

fn value_of(bits: &[u8]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

impl SecretBits {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        check_bits(&bits)?;
        Ok(Self(bits))
    }

    pub fn from_value(value: usize, len: usize) -> Result<Self> {
        Ok(Self(bits_from_value(value, len)?))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Integer value, MSB first.
    pub fn value(&self) -> usize {
        value_of(&self.0)
    }
}

impl RandomnessBits {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        check_bits(&bits)?;
        Ok(Self(bits))
    }

    pub fn from_value(value: usize, len: usize) -> Result<Self> {
        Ok(Self(bits_from_value(value, len)?))
    }

    /// Draws r bits uniformly.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, len: usize) -> Self {
        use rand::RngExt;
        Self((0..len).map(|_| rng.random_range(0..2u8)).collect())
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn value(&self) -> usize {
        value_of(&self.0)
    }
}

/// Selects the codebook point for a (secret, randomness) pair: the secret
/// picks the coset, the randomness picks the point inside it in
/// lexicographic order.
pub fn coset_encode<'a>(
    secret: &SecretBits,
    rand: &RandomnessBits,
    codebook: &'a CosetCodebook,
) -> Result<&'a IntPoint> {
    if secret.len() != codebook.secret_bits() as usize {
        return Err(Error::Config(format!(
            "secret has {} bits, codebook expects {}",
            secret.len(),
            codebook.secret_bits()
        )));
    }
    if rand.len() != codebook.randomness_bits() as usize {
        return Err(Error::Config(format!(
            "randomness has {} bits, codebook expects {}",
            rand.len(),
            codebook.randomness_bits()
        )));
    }
    Ok(&codebook.coset(secret.value())?[rand.value()])
}

/// Baseband symbols for one codeword: one complex symbol per integer
/// coordinate, rotated by -45 degrees and scaled to unit average energy
/// over the full constellation {0..M-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSymbols {
    symbols: Vec<Complex64>,
    e_avg: f64,
}

impl ComplexSymbols {
    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    pub fn e_avg(&self) -> f64 {
        self.e_avg
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Average energy of the centered constellation {0..M-1} - (M-1)/2.
pub fn average_energy(box_size: u32) -> f64 {
    let m = f64::from(box_size);
    (m * m - 1.0) / 12.0
}

/// Maps each coordinate v to e^{-i pi/4} (v - (M-1)/2) / sqrt(E_avg).
pub fn modulate(point: &[i32], box_size: u32) -> Result<ComplexSymbols> {
    if box_size < 2 {
        return Err(Error::Config("modulation needs box size >= 2".into()));
    }
    if let Some(&bad) = point.iter().find(|&&v| v < 0 || v as u32 >= box_size) {
        return Err(Error::InvalidPoint(format!(
            "coordinate {bad} outside {{0..{}}}",
            box_size - 1
        )));
    }
    let e_avg = average_energy(box_size);
    let center = f64::from(box_size - 1) / 2.0;
    let scale = 1.0 / e_avg.sqrt();
    let symbols = point
        .iter()
        .map(|&v| ROTATION * ((f64::from(v) - center) * scale))
        .collect();
    Ok(ComplexSymbols { symbols, e_avg })
}

/// Decoder-side candidate symbols: the identical map as `modulate`.
pub fn demodulate_reference(point: &[i32], box_size: u32) -> Result<ComplexSymbols> {
    modulate(point, box_size)
}

/// Inverse of `modulate` for a single noiseless symbol: the nearest
/// constellation level, clamped into {0..M-1}.
pub fn nearest_level(symbol: Complex64, box_size: u32) -> i32 {
    let e_avg = average_energy(box_size);
    let center = f64::from(box_size - 1) / 2.0;
    // Undo the rotation, rescale, recenter.
    let v = (symbol * ROTATION.conj()).re * e_avg.sqrt() + center;
    (v.round() as i32).clamp(0, box_size as i32 - 1)
}
