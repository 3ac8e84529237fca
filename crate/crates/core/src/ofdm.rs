//! OFDM framing: serial/parallel reshaping, unitary IFFT/FFT per symbol,
//! and cyclic-prefix insertion/removal.

use crate::dft::Dft;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_complex::Complex;

/// OFDM dimensioning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OfdmGrid {
    pub n_subcarriers: usize,
    pub cp_len: usize,
}

impl OfdmGrid {
    pub fn new(n_subcarriers: usize, cp_len: usize) -> Result<Self> {
        if n_subcarriers == 0 {
            return Err(Error::Config("zero subcarriers".into()));
        }
        if cp_len > n_subcarriers {
            return Err(Error::Config("cyclic prefix longer than symbol".into()));
        }
        Ok(Self {
            n_subcarriers,
            cp_len,
        })
    }

    /// Time-domain samples per OFDM symbol.
    pub fn symbol_len(&self) -> usize {
        self.n_subcarriers + self.cp_len
    }
}

impl Default for OfdmGrid {
    fn default() -> Self {
        Self {
            n_subcarriers: 6400,
            cp_len: 1280,
        }
    }
}

/// Prepends the last `cp_len` samples of the symbol.
pub fn add_cp<T: Scalar>(sym: &[Complex<T>], cp_len: usize) -> Result<Vec<Complex<T>>> {
    if cp_len > sym.len() {
        return Err(Error::Config("cyclic prefix longer than symbol".into()));
    }
    let mut out = Vec::with_capacity(sym.len() + cp_len);
    out.extend_from_slice(&sym[sym.len() - cp_len..]);
    out.extend_from_slice(sym);
    Ok(out)
}

/// Drops the first `cp_len` samples.
pub fn remove_cp<T: Scalar>(sym: &[Complex<T>], cp_len: usize) -> Result<Vec<Complex<T>>> {
    if sym.len() <= cp_len && !(cp_len == 0 && sym.is_empty()) {
        return Err(Error::Config("block shorter than cyclic prefix".into()));
    }
    Ok(sym[cp_len..].to_vec())
}

/// Serial-to-parallel, per-row unitary IDFT, cyclic prefix, and back to a
/// serial sample stream. The final row is zero-padded; the pad count is
/// returned with the samples.
pub fn ofdm_modulate<T: Scalar>(
    symbols: &[Complex<T>],
    grid: &OfdmGrid,
) -> Result<(Vec<Complex<T>>, usize)> {
    let n = grid.n_subcarriers;
    let rows = symbols.len().div_ceil(n);
    let pad = rows * n - symbols.len();
    let plan = Dft::new(n)?;
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = Vec::with_capacity(rows * grid.symbol_len());
    for r in 0..rows {
        let start = r * n;
        let mut row: Vec<Complex<T>> = Vec::with_capacity(n);
        row.extend_from_slice(&symbols[start..symbols.len().min(start + n)]);
        row.resize(n, zero);
        let time = plan.inverse(&row)?;
        out.extend(add_cp(&time, grid.cp_len)?);
    }
    Ok((out, pad))
}

/// Mirror of [`ofdm_modulate`]: per-row prefix removal and unitary DFT,
/// truncated to the `n_used` leading symbols.
pub fn ofdm_demodulate<T: Scalar>(
    samples: &[Complex<T>],
    grid: &OfdmGrid,
    n_used: usize,
) -> Result<Vec<Complex<T>>> {
    let sym_len = grid.symbol_len();
    if !samples.len().is_multiple_of(sym_len) {
        return Err(Error::Config("ragged OFDM sample stream".into()));
    }
    let rows = samples.len() / sym_len;
    if n_used > rows * grid.n_subcarriers {
        return Err(Error::Config("n_used exceeds demodulated length".into()));
    }
    let plan = Dft::new(grid.n_subcarriers)?;
    let mut out = Vec::with_capacity(rows * grid.n_subcarriers);
    for r in 0..rows {
        let time = remove_cp(&samples[r * sym_len..(r + 1) * sym_len], grid.cp_len)?;
        out.extend(plan.forward(&time)?);
    }
    out.truncate(n_used);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symbols(n: usize, seed: u64) -> Vec<Complex<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect()
    }

    #[test]
    fn cp_examples() {
        let sym: Vec<Complex<f64>> = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .map(|&v| Complex::new(v, 0.0))
            .collect();
        let with = add_cp(&sym, 2).unwrap();
        let values: Vec<f64> = with.iter().map(|c| c.re).collect();
        assert_eq!(values, vec![3.0, 4.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(remove_cp(&with, 2).unwrap(), sym);
        assert_eq!(add_cp(&sym, 0).unwrap(), sym);
        assert!(add_cp(&sym, 5).is_err());
        assert!(remove_cp(&sym, 4).is_err());
    }

    #[test]
    fn cp_roundtrip_all_lengths() {
        let sym = random_symbols(16, 3);
        for cp in 0..=16 {
            let back = remove_cp(&add_cp(&sym, cp).unwrap(), cp).unwrap();
            assert_eq!(back, sym);
        }
    }

    #[test]
    fn default_grid_lengths() {
        let grid = OfdmGrid::default();
        assert_eq!(grid.symbol_len(), 7680);
        let symbols = random_symbols(6400, 4);
        let (time, pad) = ofdm_modulate(&symbols, &grid).unwrap();
        assert_eq!(time.len(), 7680);
        assert_eq!(pad, 0);
    }

    #[test]
    fn padding_rule() {
        let grid = OfdmGrid::default();
        let symbols = random_symbols(6401, 5);
        let (time, pad) = ofdm_modulate(&symbols, &grid).unwrap();
        assert_eq!(time.len(), 2 * 7680);
        assert_eq!(pad, 6399);
        let back = ofdm_demodulate(&time, &grid, 6401).unwrap();
        for (a, b) in symbols.iter().zip(&back) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn roundtrip_small_and_paper_sizes() {
        for n in [16usize, 64, 6400] {
            let grid = OfdmGrid::new(n, n / 5).unwrap();
            let symbols = random_symbols(2 * n - 7, n as u64);
            let (time, _) = ofdm_modulate(&symbols, &grid).unwrap();
            let back = ofdm_demodulate(&time, &grid, symbols.len()).unwrap();
            let err: f64 = symbols
                .iter()
                .zip(&back)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-9, "n={n}");
        }
    }

    #[test]
    fn energy_preserved_without_cp() {
        let grid = OfdmGrid::new(64, 0).unwrap();
        let symbols = random_symbols(64, 8);
        let (time, _) = ofdm_modulate(&symbols, &grid).unwrap();
        let e_in: f64 = symbols.iter().map(|c| c.norm_sqr()).sum();
        let e_out: f64 = time.iter().map(|c| c.norm_sqr()).sum();
        assert!((e_in - e_out).abs() < 1e-9);
    }

    #[test]
    fn ragged_stream_rejected() {
        let grid = OfdmGrid::new(16, 4).unwrap();
        let samples = random_symbols(21, 9);
        assert!(ofdm_demodulate(&samples, &grid, 16).is_err());
    }
}
