//! Rate-1/2 non-systematic convolutional code: encoder, hard-decision
//! Viterbi decoder, and an exhaustive maximum-likelihood decoding oracle.
//!
//! Generator masks are written MSB-first over the tap window
//! `(d_i, d_{i-1}, ..., d_{i-K+1})`, so the default constraint-length-3
//! code is the classic (7, 5) octal pair.

use crate::bits::BitBlock;
use crate::error::{Error, Result};

/// Convolutional code description.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvCode {
    /// Constraint length K (tap window span; K-1 registers).
    pub constraint_length: usize,
    /// Two generator tap masks over GF(2), MSB = current input.
    pub generators: [u32; 2],
    /// Zero-flush the encoder with K-1 tail bits.
    pub terminated: bool,
}

impl ConvCode {
    pub fn new(constraint_length: usize, generators: [u32; 2], terminated: bool) -> Result<Self> {
        if !(2..=24).contains(&constraint_length) {
            return Err(Error::Config(format!(
                "constraint length {constraint_length} out of range"
            )));
        }
        let limit = 1u32 << constraint_length;
        if generators.iter().any(|&g| g == 0 || g >= limit) {
            return Err(Error::Config("generator mask out of range".into()));
        }
        // The oldest tap (LSB under MSB-first masks) must be used by at
        // least one generator, otherwise the true constraint length is
        // smaller than claimed.
        if generators.iter().all(|&g| g & 1 == 0) {
            return Err(Error::Config(
                "no generator taps the oldest register".into(),
            ));
        }
        Ok(Self {
            constraint_length,
            generators,
            terminated,
        })
    }

    /// The (7, 5) octal K = 3 code used throughout the simulation.
    pub fn default_k3(terminated: bool) -> Self {
        Self::new(3, [0o7, 0o5], terminated).expect("valid default code")
    }

    fn memory(&self) -> usize {
        self.constraint_length - 1
    }

    fn n_states(&self) -> usize {
        1 << self.memory()
    }

    /// Output pair for one input bit from a given state.
    fn branch(&self, state: u32, input: u32) -> (u32, [u8; 2]) {
        let window = (input << self.memory()) | state;
        let out = [
            (window & self.generators[0]).count_ones() as u8 & 1,
            (window & self.generators[1]).count_ones() as u8 & 1,
        ];
        // Shifting the window right drops the oldest bit.
        (window >> 1, out)
    }
}

impl Default for ConvCode {
    fn default() -> Self {
        Self::default_k3(false)
    }
}

/// Encodes a message, emitting the two generator outputs interleaved per
/// input bit. Terminated codes append K-1 zero flush bits.
pub fn conv_encode(msg: &BitBlock, code: &ConvCode) -> Result<BitBlock> {
    if msg.is_empty() {
        return Err(Error::Config("empty input".into()));
    }
    let tail = if code.terminated { code.memory() } else { 0 };
    let mut out = Vec::with_capacity(2 * (msg.len() + tail));
    let mut state = 0u32;
    for bit in msg.iter().chain(std::iter::repeat_n(0, tail)) {
        let (next, pair) = code.branch(state, bit as u32);
        out.push(pair[0]);
        out.push(pair[1]);
        state = next;
    }
    debug_assert!(!code.terminated || state == 0);
    Ok(out.into_iter().collect())
}

/// Hard-decision Viterbi decoding: returns the message whose encoding has
/// minimum Hamming distance to `coded`. Metric ties at a trellis merge keep
/// the survivor whose dropped (oldest) bit is 0; an unterminated end-state
/// tie keeps the smallest state index.
pub fn viterbi_decode(coded: &BitBlock, code: &ConvCode) -> Result<BitBlock> {
    if !coded.len().is_multiple_of(2) {
        return Err(Error::Config("unpaired output bits".into()));
    }
    let steps = coded.len() / 2;
    let tail = if code.terminated { code.memory() } else { 0 };
    if steps < tail {
        return Err(Error::Config("coded block shorter than flush tail".into()));
    }

    let n_states = code.n_states();
    let state_mask = (n_states - 1) as u32;
    const INF: u32 = u32::MAX / 2;
    let mut metrics = vec![INF; n_states];
    metrics[0] = 0; // encoder starts in the all-zero state
    let mut next_metrics = vec![INF; n_states];
    // Survivor choice per (step, state): the dropped oldest bit.
    let mut survivors = vec![0u8; steps * n_states];

    let received: Vec<(u8, u8)> = coded
        .as_slice()
        .chunks(2)
        .map(|pair| (pair[0], pair[1]))
        .collect();

    for (step, &(r0, r1)) in received.iter().enumerate() {
        for (to, slot) in next_metrics.iter_mut().enumerate() {
            let mut best = INF;
            let mut best_drop = 0u8;
            for drop in 0..2u32 {
                // Reverse the window shift: predecessor window is the
                // target state with the dropped bit reattached.
                let window = ((to as u32) << 1) | drop;
                let from = (window & state_mask) as usize;
                if metrics[from] >= INF {
                    continue;
                }
                let input = window >> code.memory();
                let (next, pair) = code.branch(from as u32, input);
                debug_assert_eq!(next as usize, to);
                let cost = metrics[from] + u32::from(pair[0] != r0) + u32::from(pair[1] != r1);
                if cost < best {
                    best = cost;
                    best_drop = drop as u8;
                }
            }
            *slot = best;
            survivors[step * n_states + to] = best_drop;
        }
        std::mem::swap(&mut metrics, &mut next_metrics);
    }

    let mut state = if code.terminated {
        0usize
    } else {
        let mut best = 0usize;
        for s in 1..n_states {
            if metrics[s] < metrics[best] {
                best = s;
            }
        }
        best
    };

    // Full traceback; the input bit of each transition is the top bit of
    // the reconstructed window.
    let mut inputs = vec![0u8; steps];
    for step in (0..steps).rev() {
        let drop = survivors[step * n_states + state];
        let window = ((state as u32) << 1) | drop as u32;
        inputs[step] = (window >> code.memory()) as u8;
        state = (window & state_mask) as usize;
    }
    inputs.truncate(steps - tail);
    Ok(inputs.into_iter().collect())
}

/// Exhaustive ML decoder over all `2^msg_len` candidate messages; the
/// Hamming-nearest wins, ties broken by the numerically smallest message
/// (bits read MSB-first).
pub fn ml_decode_oracle(coded: &BitBlock, code: &ConvCode, msg_len: usize) -> Result<BitBlock> {
    if msg_len > 16 {
        return Err(Error::Config("oracle too large".into()));
    }
    if msg_len == 0 {
        return Err(Error::Config("empty input".into()));
    }
    let tail = if code.terminated { code.memory() } else { 0 };
    if coded.len() != 2 * (msg_len + tail) {
        return Err(Error::Config("coded length does not match msg_len".into()));
    }
    let mut best: Option<(usize, BitBlock)> = None;
    for m in 0u32..(1 << msg_len) {
        let candidate: BitBlock = (0..msg_len)
            .map(|i| ((m >> (msg_len - 1 - i)) & 1) as u8)
            .collect();
        let encoded = conv_encode(&candidate, code)?;
        let dist = encoded.hamming_distance(coded);
        if best.as_ref().is_none_or(|(d, _)| dist < *d) {
            best = Some((dist, candidate));
        }
    }
    Ok(best.expect("nonempty enumeration").1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hand_traced_terminated_encoding() {
        let code = ConvCode::default_k3(true);
        let out = conv_encode(&bits("1011"), &code).unwrap();
        assert_eq!(out, bits("11 10 00 01 01 11"));
    }

    #[test]
    fn zero_message_stays_zero() {
        let code = ConvCode::default_k3(false);
        let out = conv_encode(&bits("0000"), &code).unwrap();
        assert_eq!(out, bits("00000000"));
    }

    #[test]
    fn paper_frame_length() {
        let code = ConvCode::default_k3(false);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let msg = BitBlock::random(1040, &mut rng);
        assert_eq!(conv_encode(&msg, &code).unwrap().len(), 2080);
    }

    #[test]
    fn empty_message_rejected() {
        let code = ConvCode::default_k3(true);
        assert!(conv_encode(&bits(""), &code).is_err());
    }

    #[test]
    fn invalid_codes_rejected() {
        assert!(ConvCode::new(1, [1, 1], true).is_err());
        assert!(ConvCode::new(3, [0, 5], true).is_err());
        // Neither generator reaches the oldest register.
        assert!(ConvCode::new(3, [0b110, 0b100], true).is_err());
    }

    #[test]
    fn viterbi_roundtrip_noiseless() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &terminated in &[false, true] {
            let code = ConvCode::default_k3(terminated);
            for _ in 0..50 {
                let len = rng.random_range(1..=64);
                let msg = BitBlock::random(len, &mut rng);
                let decoded = viterbi_decode(&conv_encode(&msg, &code).unwrap(), &code).unwrap();
                assert_eq!(decoded, msg);
            }
        }
    }

    #[test]
    fn viterbi_rejects_odd_length() {
        let code = ConvCode::default_k3(true);
        assert!(viterbi_decode(&bits("101"), &code).is_err());
    }

    #[test]
    fn single_bit_errors_always_corrected() {
        // Free distance of (7,5) is 5, so any single flip decodes clean.
        let code = ConvCode::default_k3(true);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let len = rng.random_range(1..=64);
            let msg = BitBlock::random(len, &mut rng);
            let clean = conv_encode(&msg, &code).unwrap();
            for flip in 0..clean.len() {
                let corrupted: BitBlock = clean
                    .iter()
                    .enumerate()
                    .map(|(i, b)| if i == flip { b ^ 1 } else { b })
                    .collect();
                assert_eq!(viterbi_decode(&corrupted, &code).unwrap(), msg);
            }
        }
    }

    #[test]
    fn oracle_noiseless_and_zero_word() {
        let code = ConvCode::default_k3(true);
        let msg = bits("10110010");
        let coded = conv_encode(&msg, &code).unwrap();
        assert_eq!(ml_decode_oracle(&coded, &code, 8).unwrap(), msg);

        let zeros: BitBlock = std::iter::repeat_n(0, 20).collect();
        assert_eq!(
            ml_decode_oracle(&zeros, &code, 8).unwrap(),
            std::iter::repeat_n(0, 8).collect::<BitBlock>()
        );
    }

    #[test]
    fn oracle_size_guard() {
        let code = ConvCode::default_k3(true);
        let coded: BitBlock = std::iter::repeat_n(0, 2 * 19).collect();
        assert!(matches!(
            ml_decode_oracle(&coded, &code, 17),
            Err(Error::Config(ref m)) if m == "oracle too large"
        ));
    }

    #[test]
    fn oracle_matches_viterbi_on_single_errors() {
        let code = ConvCode::default_k3(true);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let msg = BitBlock::random(8, &mut rng);
        let clean = conv_encode(&msg, &code).unwrap();
        for flip in 0..clean.len() {
            let corrupted: BitBlock = clean
                .iter()
                .enumerate()
                .map(|(i, b)| if i == flip { b ^ 1 } else { b })
                .collect();
            let v = viterbi_decode(&corrupted, &code).unwrap();
            let o = ml_decode_oracle(&corrupted, &code, 8).unwrap();
            assert_eq!(v, o);
        }
    }

    #[test]
    fn encoding_is_linear() {
        let code = ConvCode::default_k3(true);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let len = rng.random_range(1..=40);
            let a = BitBlock::random(len, &mut rng);
            let b = BitBlock::random(len, &mut rng);
            let lhs = conv_encode(&a.xor(&b).unwrap(), &code).unwrap();
            let rhs = conv_encode(&a, &code)
                .unwrap()
                .xor(&conv_encode(&b, &code).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
