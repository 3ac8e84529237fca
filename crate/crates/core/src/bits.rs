//! Binary blocks flowing through the FEC and spreading stages.

use crate::error::{Error, Result};
use rand::{Rng, RngExt};

/// An ordered sequence of bits, each 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitBlock {
    bits: Vec<u8>,
}

impl BitBlock {
    /// Wraps a bit vector, rejecting any element outside {0, 1}.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Config("bit value outside {0,1}".into()));
        }
        Ok(Self { bits })
    }

    /// Builds a block from anything bool-like without validation cost.
    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        Self {
            bits: bits.into_iter().map(u8::from).collect(),
        }
    }

    /// Uniform random bits.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self {
            bits: (0..len).map(|_| rng.random_range(0..=1u8)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().copied()
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.bits.push(bit);
    }

    pub fn truncate(&mut self, len: usize) {
        self.bits.truncate(len);
    }

    /// Element-wise XOR of equal-length blocks.
    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Config("length mismatch in bit xor".into()));
        }
        Ok(Self {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// Number of positions at which the blocks differ.
    pub fn hamming_distance(&self, other: &Self) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Flips each bit independently with probability `p` (binary symmetric
    /// channel).
    pub fn through_bsc<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> Self {
        Self {
            bits: self
                .bits
                .iter()
                .map(|&b| if rng.random::<f64>() < p { b ^ 1 } else { b })
                .collect(),
        }
    }
}

impl From<BitBlock> for Vec<u8> {
    fn from(b: BitBlock) -> Self {
        b.bits
    }
}

impl FromIterator<u8> for BitBlock {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        let bits: Vec<u8> = iter.into_iter().collect();
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self { bits }
    }
}

/// Parses a compact "1011" literal; test helper.
pub fn bits(s: &str) -> BitBlock {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => 0,
            '1' => 1,
            _ => panic!("invalid bit literal {c}"),
        })
        .collect()
}
