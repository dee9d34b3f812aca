//! Frame assembly: 13 Barker pilots followed by 87 data symbol slots.

use num_complex::Complex64;

use super::{barker_pilot, DATA_SYMBOLS, FRAME_SYMBOLS, PILOT_LEN};
use crate::coset::{modulate, ComplexSymbols};
use crate::error::{Error, Result};

/// One 100-symbol frame: pilots, codeword data, trailing dummies.
#[derive(Debug, Clone)]
pub struct Frame {
    pilots: [Complex64; PILOT_LEN],
    data: Vec<Complex64>,
    dummy_count: usize,
}

impl Frame {
    pub fn pilots(&self) -> &[Complex64] {
        &self.pilots
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn dummy_count(&self) -> usize {
        self.dummy_count
    }

    /// All 100 symbols, pilots first.
    pub fn symbols(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(FRAME_SYMBOLS);
        out.extend_from_slice(&self.pilots);
        out.extend_from_slice(&self.data);
        out
    }
}

/// Packs codeword symbols into one frame. Unused trailing data slots are
/// filled with the dummy symbol: the modulated all-zero point of the
/// active constellation.
pub fn assemble_frame(codewords: &[ComplexSymbols], box_size: u32) -> Result<Frame> {
    let used: usize = codewords.iter().map(ComplexSymbols::len).sum();
    if used > DATA_SYMBOLS {
        return Err(Error::Framing(format!(
            "{used} codeword symbols exceed the {DATA_SYMBOLS} data slots"
        )));
    }
    let dummy = modulate(&[0], box_size)?.symbols()[0];
    let mut data = Vec::with_capacity(DATA_SYMBOLS);
    for cw in codewords {
        data.extend_from_slice(cw.symbols());
    }
    let dummy_count = DATA_SYMBOLS - used;
    data.resize(DATA_SYMBOLS, dummy);
    Ok(Frame { pilots: barker_pilot(), data, dummy_count })
}
