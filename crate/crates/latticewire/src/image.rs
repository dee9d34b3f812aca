//! Bilevel image I/O for the transmission demo: PBM/PGM parsing, canonical
//! PBM output, and a deterministic built-in test pattern.

use std::path::Path;

use crate::error::{Error, Result};

/// Row-major bilevel image; 1 = black, 0 = white.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitImage {
    width: usize,
    height: usize,
    bits: Vec<u8>,
}

impl BitImage {
    pub fn new(width: usize, height: usize, bits: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ImageFormat(format!("degenerate size {width}x{height}")));
        }
        if bits.len() != width * height {
            return Err(Error::ImageFormat(format!(
                "{} bits do not fill {width}x{height}",
                bits.len()
            )));
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::ImageFormat(format!("bit value {b} out of range")));
        }
        Ok(Self { width, height, bits })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Row-major pixels, one byte per bit.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Canonical binary PBM bytes: `P4`, single-space dimensions, rows
    /// packed MSB-first and padded to whole bytes.
    pub fn to_pbm_bytes(&self) -> Vec<u8> {
        let stride = self.width.div_ceil(8);
        let mut out = format!("P4\n{} {}\n", self.width, self.height).into_bytes();
        for row in self.bits.chunks(self.width) {
            let mut packed = vec![0u8; stride];
            for (x, &bit) in row.iter().enumerate() {
                packed[x / 8] |= bit << (7 - x % 8);
            }
            out.extend_from_slice(&packed);
        }
        out
    }
}

/// Reads a PBM (P1/P4) or PGM (P2/P5) file; grayscale is thresholded at
/// mid-scale, darker half mapping to 1.
pub fn image_to_bits(path: &Path) -> Result<BitImage> {
    let data = std::fs::read(path)?;
    parse_netpbm(&data)
}

/// Writes the image as canonical binary PBM, atomically.
pub fn bits_to_image(image: &BitImage, path: &Path) -> Result<()> {
    write_atomic(path, &image.to_pbm_bytes())
}

/// Whole-file atomic write: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    use std::io::Write as _;
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn parse_netpbm(data: &[u8]) -> Result<BitImage> {
    let magic = data.get(..2).ok_or_else(|| Error::ImageFormat("file too short".into()))?;
    let mut cursor = Tokens { data, pos: 2 };
    match magic {
        b"P1" => parse_p1(&mut cursor),
        b"P2" => parse_ascii_gray(&mut cursor),
        b"P4" => parse_p4(&mut cursor),
        b"P5" => parse_binary_gray(&mut cursor),
        other => Err(Error::ImageFormat(format!(
            "unsupported magic {:?}; expected PBM (P1/P4) or PGM (P2/P5)",
            String::from_utf8_lossy(other)
        ))),
    }
}

/// Header tokenizer: whitespace-separated fields with `#` comments.
struct Tokens<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Tokens<'_> {
    fn next_token(&mut self) -> Result<&[u8]> {
        loop {
            match self.data.get(self.pos) {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'#') => {
                    while !matches!(self.data.get(self.pos), None | Some(b'\n')) {
                        self.pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(Error::ImageFormat("truncated header".into())),
            }
        }
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(|b| !b.is_ascii_whitespace()) {
            self.pos += 1;
        }
        Ok(&self.data[start..self.pos])
    }

    fn next_usize(&mut self, what: &str) -> Result<usize> {
        let tok = self.next_token()?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::ImageFormat(format!("bad {what}: {:?}", String::from_utf8_lossy(tok))))
    }

    fn dimensions(&mut self) -> Result<(usize, usize)> {
        let width = self.next_usize("width")?;
        let height = self.next_usize("height")?;
        if width == 0 || height == 0 {
            return Err(Error::ImageFormat(format!("degenerate size {width}x{height}")));
        }
        if width * height > 1 << 28 {
            return Err(Error::ImageFormat(format!("image {width}x{height} too large")));
        }
        Ok((width, height))
    }

    /// Binary payload starts after exactly one whitespace byte.
    fn binary_payload(&mut self, len: usize) -> Result<&[u8]> {
        if !self.data.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            return Err(Error::ImageFormat("missing separator before pixel data".into()));
        }
        self.pos += 1;
        self.data
            .get(self.pos..self.pos + len)
            .ok_or_else(|| Error::ImageFormat("truncated pixel data".into()))
    }
}

fn parse_p1(t: &mut Tokens) -> Result<BitImage> {
    let (width, height) = t.dimensions()?;
    let mut bits = Vec::with_capacity(width * height);
    while bits.len() < width * height {
        for &b in t.next_token()? {
            match b {
                b'0' => bits.push(0),
                b'1' => bits.push(1),
                other => {
                    return Err(Error::ImageFormat(format!("bad pixel digit {:?}", other as char)))
                }
            }
        }
    }
    BitImage::new(width, height, bits)
}

fn parse_p4(t: &mut Tokens) -> Result<BitImage> {
    let (width, height) = t.dimensions()?;
    let stride = width.div_ceil(8);
    let payload = t.binary_payload(stride * height)?;
    let bits = payload
        .chunks(stride)
        .flat_map(|row| (0..width).map(move |x| (row[x / 8] >> (7 - x % 8)) & 1))
        .collect();
    BitImage::new(width, height, bits)
}

fn maxval(t: &mut Tokens) -> Result<usize> {
    let maxval = t.next_usize("maxval")?;
    if !(1..=255).contains(&maxval) {
        return Err(Error::ImageFormat(format!("unsupported maxval {maxval}")));
    }
    Ok(maxval)
}

/// Darker half of the gray scale maps to 1 (threshold 128 at full scale).
fn threshold(value: usize, maxval: usize) -> u8 {
    u8::from(value * 255 / maxval < 128)
}

fn parse_ascii_gray(t: &mut Tokens) -> Result<BitImage> {
    let (width, height) = t.dimensions()?;
    let maxval = maxval(t)?;
    let bits = (0..width * height)
        .map(|_| {
            let v = t.next_usize("gray value")?;
            if v > maxval {
                return Err(Error::ImageFormat(format!("gray value {v} above maxval {maxval}")));
            }
            Ok(threshold(v, maxval))
        })
        .collect::<Result<Vec<u8>>>()?;
    BitImage::new(width, height, bits)
}

fn parse_binary_gray(t: &mut Tokens) -> Result<BitImage> {
    let (width, height) = t.dimensions()?;
    let maxval = maxval(t)?;
    let payload = t.binary_payload(width * height)?;
    let bits = payload.iter().map(|&v| threshold(v as usize, maxval)).collect();
    BitImage::new(width, height, bits)
}

const GLYPH_ROWS: usize = 7;
const GLYPH_COLS: usize = 5;

/// 5x7 glyphs for the banner text, one u8 per row, bit 4 = leftmost.
const BANNER: [[u8; GLYPH_ROWS]; 7] = [
    [0b10001, 0b10001, 0b10001, 0b10101, 0b10101, 0b11011, 0b10001], // W
    [0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b11111], // I
    [0b11110, 0b10001, 0b10001, 0b11110, 0b10100, 0b10010, 0b10001], // R
    [0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b11111], // E
    [0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100], // T
    [0b01110, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001], // A
    [0b11110, 0b10001, 0b10001, 0b11110, 0b10000, 0b10000, 0b10000], // P
];

const PATTERN_SIZE: usize = 256;
const CHECKER: usize = 16;
const SCALE: usize = 4;
const BAND_TOP: usize = 114;
const BAND_HEIGHT: usize = GLYPH_ROWS * SCALE;
const GLYPH_PITCH: usize = (GLYPH_COLS + 1) * SCALE;
const BANNER_WIDTH: usize = BANNER.len() * GLYPH_PITCH - SCALE;
const BANNER_LEFT: usize = (PATTERN_SIZE - BANNER_WIDTH) / 2;

/// Deterministic 256x256 bilevel test pattern: a 16-pixel checkerboard
/// with a horizontal banner band spelling WIRETAP.
pub fn test_pattern() -> BitImage {
    let mut bits = Vec::with_capacity(PATTERN_SIZE * PATTERN_SIZE);
    for y in 0..PATTERN_SIZE {
        for x in 0..PATTERN_SIZE {
            bits.push(pattern_pixel(x, y));
        }
    }
    BitImage::new(PATTERN_SIZE, PATTERN_SIZE, bits).expect("pattern dimensions are static")
}

fn pattern_pixel(x: usize, y: usize) -> u8 {
    if (BAND_TOP..BAND_TOP + BAND_HEIGHT).contains(&y) {
        let Some(rel) = x.checked_sub(BANNER_LEFT).filter(|&r| r < BANNER_WIDTH) else {
            return 0;
        };
        let col = rel % GLYPH_PITCH / SCALE;
        if col >= GLYPH_COLS {
            return 0;
        }
        let row = BANNER[rel / GLYPH_PITCH][(y - BAND_TOP) / SCALE];
        (row >> (GLYPH_COLS - 1 - col)) & 1
    } else {
        u8::from((x / CHECKER + y / CHECKER).is_multiple_of(2))
    }
}
