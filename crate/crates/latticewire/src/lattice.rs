//! Binary linear codes, Construction-A lattices, and finite coset codebooks.
//!
//! A codebook partitions a finite constellation carved from a lattice into
//! `2^k` equal-size cosets. Secret bits select the coset, randomness bits
//! select the point inside it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Integer lattice point, one coordinate per real dimension.
pub type IntPoint = Vec<i32>;

/// Named binary linear code constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeName {
    /// The full space {0,1}^L.
    Full(usize),
    /// Length-2 repetition code {00, 11}.
    Repetition2,
    /// (4,3,2) single parity check code.
    Parity4,
    /// (8,4,4) first-order Reed-Muller code RM(1,3).
    Rm13,
}

/// Binary linear code stored in reduced row echelon form.
///
/// The RREF rows fix a canonical bijection between information integers
/// `j in [0, 2^k)` (bits MSB-first) and codewords: the codeword restricted
/// to the pivot columns reads back exactly those bits.
#[derive(Debug, Clone)]
pub struct BinaryCode {
    length: usize,
    dimension: usize,
    rref_rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
    codewords: Vec<Vec<u8>>,
}

impl BinaryCode {
    /// Builds a code from generator rows (entries 0/1). Rows must be
    /// linearly independent and of equal length.
    pub fn new(generators: &[Vec<u8>]) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Config("binary code needs at least one generator".into()));
        }
        let length = generators[0].len();
        if length == 0 || generators.iter().any(|g| g.len() != length) {
            return Err(Error::Config("generator rows must be non-empty and equal length".into()));
        }
        if generators.iter().flatten().any(|&b| b > 1) {
            return Err(Error::Config("generator entries must be 0 or 1".into()));
        }
        let (rref_rows, pivots) = rref(generators);
        if rref_rows.len() != generators.len() {
            return Err(Error::Config("generator rows are linearly dependent".into()));
        }
        let dimension = rref_rows.len();
        let mut codewords = Vec::with_capacity(1 << dimension);
        for j in 0..(1usize << dimension) {
            let mut cw = vec![0u8; length];
            for (row, r) in rref_rows.iter().enumerate() {
                // Bit `row` of j, MSB-first, multiplies RREF row `row`.
                if (j >> (dimension - 1 - row)) & 1 == 1 {
                    for (c, b) in cw.iter_mut().zip(r) {
                        *c ^= b;
                    }
                }
            }
            codewords.push(cw);
        }
        Ok(Self { length, dimension, rref_rows, pivots, codewords })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// All `2^k` codewords, in information-integer order.
    pub fn codewords(&self) -> &[Vec<u8>] {
        &self.codewords
    }

    /// Systematic generator rows (reduced row echelon form).
    pub fn rref_rows(&self) -> &[Vec<u8>] {
        &self.rref_rows
    }

    /// Codeword for information integer `j` (bits MSB-first).
    pub fn encode(&self, j: usize) -> Result<&[u8]> {
        self.codewords
            .get(j)
            .map(|c| c.as_slice())
            .ok_or_else(|| Error::Encoding(format!("information index {j} out of range")))
    }

    /// Information integer of `word`, or None if it is not a codeword.
    pub fn index_of(&self, word: &[u8]) -> Option<usize> {
        if word.len() != self.length {
            return None;
        }
        let mut j = 0usize;
        for (row, &p) in self.pivots.iter().enumerate() {
            j |= (word[p] as usize) << (self.dimension - 1 - row);
        }
        (self.codewords[j] == word).then_some(j)
    }

    pub fn contains(&self, word: &[u8]) -> bool {
        self.index_of(word).is_some()
    }

    /// Minimum Hamming weight over nonzero codewords.
    pub fn min_weight(&self) -> usize {
        self.codewords
            .iter()
            .skip(1)
            .map(|c| c.iter().map(|&b| b as usize).sum())
            .min()
            .unwrap_or(0)
    }
}

/// Reduced row echelon form over GF(2); returns (rows, pivot columns).
fn rref(rows: &[Vec<u8>]) -> (Vec<Vec<u8>>, Vec<usize>) {
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    let ncols = m[0].len();
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        if rank == m.len() {
            break;
        }
        let Some(pivot_row) = (rank..m.len()).find(|&r| m[r][col] == 1) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[col] == 1 {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    m.truncate(rank);
    (m, pivots)
}

/// Builds one of the named code constructions.
pub fn build_binary_code(name: CodeName) -> Result<BinaryCode> {
    match name {
        CodeName::Full(len) => {
            if len == 0 {
                return Err(Error::Config("full code needs length >= 1".into()));
            }
            let gens: Vec<Vec<u8>> = (0..len)
                .map(|i| (0..len).map(|j| u8::from(i == j)).collect())
                .collect();
            BinaryCode::new(&gens)
        }
        CodeName::Repetition2 => BinaryCode::new(&[vec![1, 1]]),
        CodeName::Parity4 => BinaryCode::new(&[
            vec![1, 0, 0, 1],
            vec![0, 1, 0, 1],
            vec![0, 0, 1, 1],
        ]),
        CodeName::Rm13 => BinaryCode::new(&[
            vec![1, 1, 1, 1, 1, 1, 1, 1],
            vec![0, 1, 0, 1, 0, 1, 0, 1],
            vec![0, 0, 1, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 0, 1, 1, 1, 1],
        ]),
    }
}

/// Construction-A lattice `2Z^L + C` for a binary linear code C.
#[derive(Debug, Clone)]
pub struct ConstructionALattice {
    code: BinaryCode,
}

impl ConstructionALattice {
    pub fn new(code: BinaryCode) -> Self {
        Self { code }
    }

    pub fn code(&self) -> &BinaryCode {
        &self.code
    }

    pub fn dimension(&self) -> usize {
        self.code.length()
    }

    /// Membership test: `v` is a lattice point iff `v mod 2` is a codeword.
    pub fn contains(&self, point: &[i32]) -> bool {
        if point.len() != self.code.length() {
            return false;
        }
        let residue: Vec<u8> = point.iter().map(|&x| x.rem_euclid(2) as u8).collect();
        self.code.contains(&residue)
    }
}

/// How coset labels are read off a constellation point.
#[derive(Debug, Clone)]
enum CosetRule {
    /// Construction A: the label is the information integer of `point mod 2`.
    ModCode(BinaryCode),
    /// One-dimensional pulse-amplitude scheme: the label is `point mod 2^k`.
    Pam { modulus: i32 },
}

/// Finite coset codebook carved from a lattice inside the box {0..M-1}^L.
#[derive(Debug, Clone)]
pub struct CosetCodebook {
    dimension: usize,
    box_size: u32,
    secret_bits: u32,
    randomness_bits: u32,
    cosets: Vec<Vec<IntPoint>>,
    rule: CosetRule,
}

impl CosetCodebook {
    /// Carves a Construction-A codebook: coset `j` holds the points
    /// `2t + c_j` for the lexicographically first `2^r` shift tuples
    /// `t in {0..M/2-1}^L`.
    pub fn construction_a(code: &BinaryCode, box_size: u32, randomness_bits: u32) -> Result<Self> {
        if box_size == 0 || !box_size.is_multiple_of(2) {
            return Err(Error::Config(format!("box size {box_size} must be even and positive")));
        }
        let dimension = code.length();
        let half = u64::from(box_size / 2);
        let capacity = half.checked_pow(dimension as u32).unwrap_or(u64::MAX);
        let wanted = 1u64 << randomness_bits;
        if wanted > capacity {
            return Err(Error::Config(format!(
                "{randomness_bits} randomness bits exceed the {capacity} shifts available in a box of {box_size}"
            )));
        }
        let shifts = lex_tuples(dimension, half as i32, wanted as usize);
        let cosets = code
            .codewords()
            .iter()
            .map(|cw| {
                shifts
                    .iter()
                    .map(|t| t.iter().zip(cw).map(|(&ti, &ci)| 2 * ti + i32::from(ci)).collect())
                    .collect()
            })
            .collect();
        Ok(Self {
            dimension,
            box_size,
            secret_bits: code.dimension() as u32,
            randomness_bits,
            cosets,
            rule: CosetRule::ModCode(code.clone()),
        })
    }

    /// One-dimensional scheme over {0..2^(k+r)-1}: coset `j` holds the
    /// points `j + 2^k t` for `t in [0, 2^r)`.
    pub fn pam(secret_bits: u32, randomness_bits: u32) -> Result<Self> {
        if secret_bits == 0 || secret_bits + randomness_bits > 16 {
            return Err(Error::Config("pam scheme needs 1 <= k and k + r <= 16".into()));
        }
        let modulus = 1i32 << secret_bits;
        let box_size = 1u32 << (secret_bits + randomness_bits);
        let cosets = (0..modulus)
            .map(|j| (0..1i32 << randomness_bits).map(|t| vec![j + modulus * t]).collect())
            .collect();
        Ok(Self {
            dimension: 1,
            box_size,
            secret_bits,
            randomness_bits,
            cosets,
            rule: CosetRule::Pam { modulus },
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn box_size(&self) -> u32 {
        self.box_size
    }

    pub fn secret_bits(&self) -> u32 {
        self.secret_bits
    }

    pub fn randomness_bits(&self) -> u32 {
        self.randomness_bits
    }

    pub fn coset_count(&self) -> usize {
        self.cosets.len()
    }

    pub fn coset_size(&self) -> usize {
        1 << self.randomness_bits
    }

    pub fn total_points(&self) -> usize {
        self.coset_count() * self.coset_size()
    }

    /// Points of coset `j`, lexicographically sorted.
    pub fn coset(&self, j: usize) -> Result<&[IntPoint]> {
        self.cosets
            .get(j)
            .map(|c| c.as_slice())
            .ok_or_else(|| Error::Encoding(format!("coset index {j} out of range")))
    }

    pub fn points(&self) -> impl Iterator<Item = &IntPoint> {
        self.cosets.iter().flatten()
    }

    /// Coset label of `point`: the mod-2 residue decoded through the code's
    /// systematic form (or the mod-2^k residue for 1-D schemes), verified
    /// against the carved point set.
    pub fn coset_index(&self, point: &[i32]) -> Result<usize> {
        if point.len() != self.dimension {
            return Err(Error::InvalidPoint(format!(
                "point has {} coordinates, codebook has {}",
                point.len(),
                self.dimension
            )));
        }
        let j = match &self.rule {
            CosetRule::ModCode(code) => {
                let residue: Vec<u8> = point.iter().map(|&x| x.rem_euclid(2) as u8).collect();
                code.index_of(&residue).ok_or_else(|| {
                    Error::InvalidPoint(format!("{point:?} is not congruent to any codeword"))
                })?
            }
            CosetRule::Pam { modulus } => point[0].rem_euclid(*modulus) as usize,
        };
        // Lex order within a coset makes membership a binary search.
        if self.cosets[j].binary_search_by(|p| p.as_slice().cmp(point)).is_ok() {
            Ok(j)
        } else {
            Err(Error::InvalidPoint(format!("{point:?} is outside the carved codebook")))
        }
    }

    /// Minimum squared Euclidean distance over all distinct codebook pairs.
    pub fn min_squared_distance(&self) -> Result<u64> {
        let points: Vec<&IntPoint> = self.points().collect();
        if points.len() < 2 {
            return Err(Error::UndefinedDistance(
                "codebook has fewer than two points".into(),
            ));
        }
        let mut best = u64::MAX;
        for (i, p) in points.iter().enumerate() {
            for q in &points[i + 1..] {
                let d2: i64 = p
                    .iter()
                    .zip(q.iter())
                    .map(|(&a, &b)| {
                        let d = i64::from(a) - i64::from(b);
                        d * d
                    })
                    .sum();
                best = best.min(d2 as u64);
            }
        }
        Ok(best)
    }
}

/// First `count` tuples of {0..base-1}^dim in lexicographic order.
fn lex_tuples(dim: usize, base: i32, count: usize) -> Vec<IntPoint> {
    let mut out = Vec::with_capacity(count);
    let mut current = vec![0i32; dim];
    for _ in 0..count {
        out.push(current.clone());
        // Odometer increment, last coordinate fastest.
        for d in (0..dim).rev() {
            current[d] += 1;
            if current[d] < base {
                break;
            }
            current[d] = 0;
        }
    }
    out
}

/// Preset transmission schemes: a base lattice, a carving box, and the
/// secret/randomness bit split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    ConvZ2,
    ConvZ8,
    CosetZ1s1r,
    CosetZ1s2r,
    ConvD2,
    CosetD2,
    ConvD4,
    CosetD4,
    ConvE8,
    CosetE8,
}

impl SchemeId {
    pub const ALL: [SchemeId; 10] = [
        SchemeId::ConvZ2,
        SchemeId::ConvZ8,
        SchemeId::CosetZ1s1r,
        SchemeId::CosetZ1s2r,
        SchemeId::ConvD2,
        SchemeId::CosetD2,
        SchemeId::ConvD4,
        SchemeId::CosetD4,
        SchemeId::ConvE8,
        SchemeId::CosetE8,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeId::ConvZ2 => "conv-z2",
            SchemeId::ConvZ8 => "conv-z8",
            SchemeId::CosetZ1s1r => "coset-z-1s1r",
            SchemeId::CosetZ1s2r => "coset-z-1s2r",
            SchemeId::ConvD2 => "conv-d2",
            SchemeId::CosetD2 => "coset-d2",
            SchemeId::ConvD4 => "conv-d4",
            SchemeId::CosetD4 => "coset-d4",
            SchemeId::ConvE8 => "conv-e8",
            SchemeId::CosetE8 => "coset-e8",
        }
    }

    pub fn lattice_name(&self) -> &'static str {
        match self {
            SchemeId::ConvZ2 | SchemeId::ConvZ8 | SchemeId::CosetZ1s1r | SchemeId::CosetZ1s2r => "Z",
            SchemeId::ConvD2 | SchemeId::CosetD2 => "D2",
            SchemeId::ConvD4 | SchemeId::CosetD4 => "D4",
            SchemeId::ConvE8 | SchemeId::CosetE8 => "E8",
        }
    }

    /// Real dimension L (symbols per codeword).
    pub fn dimension(&self) -> usize {
        match self.lattice_name() {
            "Z" => 1,
            "D2" => 2,
            "D4" => 4,
            _ => 8,
        }
    }

    /// Carving box size M per coordinate.
    pub fn box_size(&self) -> u32 {
        match self {
            SchemeId::ConvZ2 => 2,
            SchemeId::ConvZ8 => 8,
            SchemeId::CosetZ1s1r => 4,
            SchemeId::CosetZ1s2r => 8,
            SchemeId::ConvD2 | SchemeId::ConvD4 | SchemeId::ConvE8 => 2,
            SchemeId::CosetD2 | SchemeId::CosetD4 | SchemeId::CosetE8 => 4,
        }
    }

    /// Secret bits k per codeword.
    pub fn secret_bits(&self) -> u32 {
        match self {
            SchemeId::ConvZ2 | SchemeId::CosetZ1s1r | SchemeId::CosetZ1s2r | SchemeId::ConvD2
            | SchemeId::CosetD2 => 1,
            SchemeId::ConvZ8 | SchemeId::ConvD4 | SchemeId::CosetD4 => 3,
            SchemeId::ConvE8 | SchemeId::CosetE8 => 4,
        }
    }

    /// Randomness (confusion) bits r per codeword.
    pub fn randomness_bits(&self) -> u32 {
        match self {
            SchemeId::ConvZ2 | SchemeId::ConvZ8 | SchemeId::ConvD2 | SchemeId::ConvD4
            | SchemeId::ConvE8 => 0,
            SchemeId::CosetZ1s1r => 1,
            SchemeId::CosetZ1s2r | SchemeId::CosetD2 => 2,
            SchemeId::CosetD4 => 4,
            SchemeId::CosetE8 => 8,
        }
    }

    /// Builds the codebook for this scheme.
    pub fn codebook(&self) -> Result<CosetCodebook> {
        match self.lattice_name() {
            "Z" => CosetCodebook::pam(self.secret_bits(), self.randomness_bits()),
            name => {
                let code = match name {
                    "D2" => build_binary_code(CodeName::Repetition2)?,
                    "D4" => build_binary_code(CodeName::Parity4)?,
                    _ => build_binary_code(CodeName::Rm13)?,
                };
                CosetCodebook::construction_a(&code, self.box_size(), self.randomness_bits())
            }
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .iter()
            .find(|id| id.name() == s)
            .copied()
            .ok_or_else(|| {
                let names: Vec<&str> = SchemeId::ALL.iter().map(|id| id.name()).collect();
                Error::Config(format!("unknown scheme '{s}', expected one of {}", names.join(", ")))
            })
    }
}
