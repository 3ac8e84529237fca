//! Bit-to-symbol mapping and hard nearest-point demapping for the six
//! modulation schemes, all normalized to unit average energy.
//!
//! Layouts: QPSK uses Gray quadrants; 8-PSK is the unit circle at angles
//! k*pi/4 with Gray labels; 8-QAM is the rectangular {+-1,+-3} x {+-1}
//! grid; 16/64-QAM are square grids with per-axis Gray labels; 32-QAM is
//! the 6x6-minus-corners cross, labeled by folding the outer columns of
//! the Gray-coded 8x4 rectangle into the cross arms (quasi-Gray).

use crate::bits::BitBlock;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_complex::Complex;
use std::fmt;
use std::str::FromStr;

/// Per-axis Gray-coded PAM amplitude tables, indexed by label.
const PAM2: [f64; 2] = [1.0, -1.0];
const PAM4: [f64; 4] = [3.0, 1.0, -3.0, -1.0];
const PAM8: [f64; 8] = [-7.0, -5.0, -1.0, -3.0, 7.0, 5.0, 1.0, 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modulation {
    Qpsk,
    Psk8,
    Qam8,
    Qam16,
    Qam32,
    Qam64,
}

impl Modulation {
    pub const ALL: [Modulation; 6] = [
        Modulation::Qpsk,
        Modulation::Psk8,
        Modulation::Qam8,
        Modulation::Qam16,
        Modulation::Qam32,
        Modulation::Qam64,
    ];

    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Qpsk => 2,
            Modulation::Psk8 | Modulation::Qam8 => 3,
            Modulation::Qam16 => 4,
            Modulation::Qam32 => 5,
            Modulation::Qam64 => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Modulation::Qpsk => "qpsk",
            Modulation::Psk8 => "8psk",
            Modulation::Qam8 => "8qam",
            Modulation::Qam16 => "16qam",
            Modulation::Qam32 => "32qam",
            Modulation::Qam64 => "64qam",
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qpsk" => Ok(Modulation::Qpsk),
            "8psk" | "8-psk" => Ok(Modulation::Psk8),
            "8qam" | "8-qam" => Ok(Modulation::Qam8),
            "16qam" | "16-qam" => Ok(Modulation::Qam16),
            "32qam" | "32-qam" => Ok(Modulation::Qam32),
            "64qam" | "64-qam" => Ok(Modulation::Qam64),
            other => Err(Error::Config(format!("unknown modulation '{other}'"))),
        }
    }
}

/// A labeled constellation: `points[label]` is the transmit point for the
/// bit group `label` read MSB-first.
#[derive(Debug, Clone)]
pub struct ModulationScheme<T> {
    pub modulation: Modulation,
    pub bits_per_symbol: usize,
    pub points: Vec<Complex<T>>,
}

impl<T: Scalar> ModulationScheme<T> {
    pub fn new(modulation: Modulation) -> Self {
        let raw = unscaled_points(modulation);
        let mean_energy: f64 = raw.iter().map(|p| p.norm_sqr()).sum::<f64>() / raw.len() as f64;
        let scale = mean_energy.sqrt().recip();
        let points = raw
            .iter()
            .map(|p| Complex::new(T::of(p.re * scale), T::of(p.im * scale)))
            .collect();
        Self {
            modulation,
            bits_per_symbol: modulation.bits_per_symbol(),
            points,
        }
    }
}

/// Integer-coordinate constellation before unit-energy scaling.
fn unscaled_points(modulation: Modulation) -> Vec<Complex<f64>> {
    let m = modulation.bits_per_symbol();
    (0..1usize << m)
        .map(|label| match modulation {
            Modulation::Qpsk => Complex::new(PAM2[label >> 1], PAM2[label & 1]),
            Modulation::Psk8 => {
                // Point k on the circle carries Gray label k ^ (k >> 1);
                // invert to place each label.
                let k = (0..8).find(|&k| (k ^ (k >> 1)) == label).unwrap();
                let angle = std::f64::consts::FRAC_PI_4 * k as f64;
                // Unit circle in integer-free form is fine here; scaling
                // normalizes anyway.
                Complex::new(angle.cos(), angle.sin())
            }
            Modulation::Qam8 => Complex::new(PAM4[label >> 1], PAM2[label & 1]),
            Modulation::Qam16 => Complex::new(PAM4[label >> 2], PAM4[label & 3]),
            Modulation::Qam32 => {
                let i = PAM8[label >> 2];
                let q = PAM4[label & 3];
                if i.abs() <= 5.0 {
                    Complex::new(i, q)
                } else {
                    // Fold the |I| = 7 rectangle columns into the cross
                    // arms at |Q| = 5.
                    Complex::new(i.signum() * q.abs(), q.signum() * 5.0)
                }
            }
            Modulation::Qam64 => Complex::new(PAM8[label >> 3], PAM8[label & 7]),
        })
        .collect()
}

/// Maps a bit block to symbols, MSB-first per group, zero-padding to a
/// whole symbol. Returns the symbols and the number of pad bits added.
pub fn map_bits<T: Scalar>(
    bits: &BitBlock,
    scheme: &ModulationScheme<T>,
) -> (Vec<Complex<T>>, usize) {
    let m = scheme.bits_per_symbol;
    let pad = (m - bits.len() % m) % m;
    let mut symbols = Vec::with_capacity((bits.len() + pad) / m);
    let mut label = 0usize;
    let mut filled = 0usize;
    for b in bits.iter().chain(std::iter::repeat_n(0, pad)) {
        label = (label << 1) | b as usize;
        filled += 1;
        if filled == m {
            symbols.push(scheme.points[label]);
            label = 0;
            filled = 0;
        }
    }
    (symbols, pad)
}

/// Hard demapping: each received value takes the label of the
/// minimum-distance constellation point, smallest label on ties.
pub fn demap_hard<T: Scalar>(received: &[Complex<T>], scheme: &ModulationScheme<T>) -> BitBlock {
    let m = scheme.bits_per_symbol;
    let mut bits = Vec::with_capacity(received.len() * m);
    for r in received {
        let mut best_label = 0usize;
        let mut best_dist = T::infinity();
        for (label, p) in scheme.points.iter().enumerate() {
            let d = (*r - *p).norm_sqr();
            if d < best_dist {
                best_dist = d;
                best_label = label;
            }
        }
        for i in (0..m).rev() {
            bits.push(((best_label >> i) & 1) as u8);
        }
    }
    bits.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scheme(m: Modulation) -> ModulationScheme<f64> {
        ModulationScheme::new(m)
    }

    #[test]
    fn unit_average_energy_all_schemes() {
        for m in Modulation::ALL {
            let s = scheme(m);
            let mean: f64 =
                s.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / s.points.len() as f64;
            assert!((mean - 1.0).abs() < 1e-12, "{m}: {mean}");
        }
    }

    #[test]
    fn labels_are_a_bijection() {
        for m in Modulation::ALL {
            let s = scheme(m);
            assert_eq!(s.points.len(), 1 << m.bits_per_symbol());
            for (a, pa) in s.points.iter().enumerate() {
                for pb in &s.points[a + 1..] {
                    assert!((pa - pb).norm() > 1e-9, "{m} duplicate point");
                }
            }
        }
    }

    #[test]
    fn qpsk_gray_quadrants() {
        let s = scheme(Modulation::Qpsk);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let (symbols, pad) = map_bits(&bits("00"), &s);
        assert_eq!(pad, 0);
        assert!((symbols[0] - Complex::new(r, r)).norm() < 1e-15);
    }

    #[test]
    fn qam_scale_factors() {
        // Mean energies of the integer grids: 10 for {1,3}^2 and 42 for
        // {1,3,5,7}^2.
        let s16 = scheme(Modulation::Qam16);
        let corner = s16.points.iter().map(|p| p.re.abs()).fold(0.0, f64::max);
        assert!((corner - 3.0 / 10f64.sqrt()).abs() < 1e-12);

        let s64 = scheme(Modulation::Qam64);
        let corner = s64.points.iter().map(|p| p.re.abs()).fold(0.0, f64::max);
        assert!((corner - 7.0 / 42f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn psk8_points_on_unit_circle() {
        let s = scheme(Modulation::Psk8);
        for p in &s.points {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
        // Every multiple of pi/4 is occupied.
        for k in 0..8 {
            let angle = std::f64::consts::FRAC_PI_4 * k as f64;
            let target = Complex::new(angle.cos(), angle.sin());
            assert!(s.points.iter().any(|p| (p - target).norm() < 1e-9));
        }
    }

    #[test]
    fn qam32_is_the_cross() {
        let s = scheme(Modulation::Qam32);
        let scale = 20f64.sqrt();
        for p in &s.points {
            let i = (p.re * scale).round() as i64;
            let q = (p.im * scale).round() as i64;
            assert!(i.abs() <= 5 && q.abs() <= 5);
            assert!(!(i.abs() == 5 && q.abs() == 5), "corner ({i},{q}) occupied");
            assert_eq!(i.abs() % 2, 1);
            assert_eq!(q.abs() % 2, 1);
        }
    }

    #[test]
    fn roundtrip_all_schemes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in Modulation::ALL {
            let s = scheme(m);
            for _ in 0..50 {
                let len = rng.random_range(1..=200);
                let data = BitBlock::random(len, &mut rng);
                let (symbols, pad) = map_bits(&data, &s);
                let mut back = demap_hard(&symbols, &s);
                assert_eq!(back.len(), data.len() + pad);
                back.truncate(data.len());
                assert_eq!(back, data, "{m}");
            }
        }
    }

    #[test]
    fn demap_every_point_to_its_label() {
        for m in Modulation::ALL {
            let s = scheme(m);
            let out = demap_hard(&s.points, &s);
            let expected: BitBlock = (0..s.points.len())
                .flat_map(|label| {
                    (0..s.bits_per_symbol)
                        .rev()
                        .map(move |i| ((label >> i) & 1) as u8)
                })
                .collect();
            assert_eq!(out, expected, "{m}");
        }
    }

    #[test]
    fn qpsk_nearest_quadrant() {
        let s = scheme(Modulation::Qpsk);
        let out = demap_hard(&[Complex::new(0.9, 0.1)], &s);
        assert_eq!(out, bits("00"));
    }

    #[test]
    fn gray_adjacency_where_required() {
        for m in [Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64] {
            let s = scheme(m);
            for (a, pa) in s.points.iter().enumerate() {
                let min_dist = s
                    .points
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| *b != a)
                    .map(|(_, pb)| (pa - pb).norm())
                    .fold(f64::INFINITY, f64::min);
                for (b, pb) in s.points.iter().enumerate() {
                    if b != a && ((pa - pb).norm() - min_dist).abs() < 1e-9 {
                        assert_eq!((a ^ b).count_ones(), 1, "{m}: {a:0b} vs {b:0b}");
                    }
                }
            }
        }
    }

    #[test]
    fn padding_recorded() {
        let s = scheme(Modulation::Qam64);
        let (symbols, pad) = map_bits(&bits("10110"), &s);
        assert_eq!(symbols.len(), 1);
        assert_eq!(pad, 1);
    }

    #[test]
    fn f32_instantiation_roundtrips() {
        let s: ModulationScheme<f32> = ModulationScheme::new(Modulation::Qam16);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let data = BitBlock::random(64, &mut rng);
        let (symbols, _) = map_bits(&data, &s);
        assert_eq!(demap_hard(&symbols, &s), data);
    }
}
