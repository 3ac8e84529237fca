//! Chip-level spreading: PN (LFSR m-sequence) and Walsh-Hadamard code
//! generation, factor-8 spreading of coded bits, and correlation
//! despreading.
//!
//! Chips are kept as +/-1 values; spreading multiplies the bit's antipodal
//! value (1 - 2b) into the code, which is the XOR of the binary
//! representations and keeps multi-user superposition well-defined.

use crate::bits::BitBlock;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// LFSR feedback polynomial for the default PN codes: x^7 + x^6 + 1,
/// written as a stage-selection mask (bit i-1 selects stage i).
pub const DEFAULT_PN_POLY: u32 = 0b110_0000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeKind {
    PnLfsr,
    Walsh,
}

/// A per-user +/-1 spreading sequence of length equal to the spreading
/// factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpreadingCode {
    pub kind: CodeKind,
    pub chips: Vec<i8>,
    pub id: usize,
}

impl SpreadingCode {
    /// PN code for one user: `factor` chips drawn from the default LFSR,
    /// seeded with `id + 1`.
    pub fn pn(factor: usize, id: usize) -> Result<Self> {
        let chips = pn_generate(DEFAULT_PN_POLY, id as u32 + 1, factor)?;
        Ok(Self {
            kind: CodeKind::PnLfsr,
            chips,
            id,
        })
    }

    /// Walsh code: row `id` of the Sylvester-Hadamard matrix of size
    /// `factor`.
    pub fn walsh(factor: usize, id: usize) -> Result<Self> {
        Ok(Self {
            kind: CodeKind::Walsh,
            chips: walsh_generate(factor, id)?,
            id,
        })
    }

    pub fn factor(&self) -> usize {
        self.chips.len()
    }
}

/// A +/-1 chip stream produced by spreading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChipBlock {
    pub chips: Vec<i8>,
    pub spreading_factor: usize,
}

impl ChipBlock {
    /// Reads chips back as bits: +1 -> 0, -1 -> 1.
    pub fn to_bits(&self) -> BitBlock {
        self.chips.iter().map(|&c| u8::from(c < 0)).collect()
    }
}

/// Converts hard bits to antipodal chips: 0 -> +1, 1 -> -1.
pub fn bits_to_chips<T: Scalar>(bits: &BitBlock) -> Vec<T> {
    bits.iter()
        .map(|b| if b == 0 { T::one() } else { -T::one() })
        .collect()
}

/// Fibonacci LFSR m-sequence chips. The state registers are stages
/// 1..=deg; the output is the last stage and the feedback is the XOR of
/// the stages selected by `poly` (bit i-1 selects stage i; pass the
/// nonconstant exponents of a primitive polynomial for full period).
/// Output bits map to chips as 1 - 2b.
pub fn pn_generate(poly: u32, seed: u32, count: usize) -> Result<Vec<i8>> {
    if poly == 0 {
        return Err(Error::Config("empty LFSR tap mask".into()));
    }
    let deg = (32 - poly.leading_zeros()) as usize;
    let state_mask = if deg == 32 { u32::MAX } else { (1 << deg) - 1 };
    let mut state = seed & state_mask;
    if state == 0 {
        return Err(Error::Config("degenerate LFSR state".into()));
    }
    // Stage i lives at register bit deg - i (stage 1 is the MSB, the
    // output stage deg is bit 0).
    let mut tap_bits = 0u32;
    for stage in 1..=deg {
        if poly >> (stage - 1) & 1 == 1 {
            tap_bits |= 1 << (deg - stage);
        }
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let bit = state & 1;
        out.push(if bit == 0 { 1 } else { -1 });
        let feedback = (state & tap_bits).count_ones() & 1;
        state = (state >> 1) | (feedback << (deg - 1));
    }
    Ok(out)
}

/// Row `id` of the Sylvester-Hadamard matrix of size `order` (a power of
/// two): H[id][j] = (-1)^popcount(id & j).
pub fn walsh_generate(order: usize, id: usize) -> Result<Vec<i8>> {
    if order == 0 || !order.is_power_of_two() {
        return Err(Error::Config(format!(
            "walsh order {order} is not a power of two"
        )));
    }
    if id >= order {
        return Err(Error::Config(format!(
            "walsh id {id} out of range for order {order}"
        )));
    }
    Ok((0..order)
        .map(|j| {
            if (id & j).count_ones().is_multiple_of(2) {
                1
            } else {
                -1
            }
        })
        .collect())
}

/// Spreads each bit over the code: bit b becomes (1 - 2b) * chips.
pub fn spread(bits: &BitBlock, code: &SpreadingCode) -> ChipBlock {
    let factor = code.factor();
    let mut chips = Vec::with_capacity(bits.len() * factor);
    for b in bits.iter() {
        let sign: i8 = if b == 0 { 1 } else { -1 };
        chips.extend(code.chips.iter().map(|&c| sign * c));
    }
    ChipBlock {
        chips,
        spreading_factor: factor,
    }
}

/// Correlation despreading of a (possibly noisy) real-valued chip stream:
/// per group, bit = 0 when the dot product with the code is positive, 1
/// when negative; an exact tie resolves to 0.
pub fn despread<T: Scalar>(chips: &[T], code: &SpreadingCode) -> Result<BitBlock> {
    let factor = code.factor();
    if !chips.len().is_multiple_of(factor) {
        return Err(Error::Config("ragged chip block".into()));
    }
    Ok(chips
        .chunks(factor)
        .map(|group| {
            let dot = group
                .iter()
                .zip(&code.chips)
                .fold(T::zero(), |acc, (&x, &c)| acc + x * T::of(c as f64));
            u8::from(dot < T::zero())
        })
        .collect())
}
