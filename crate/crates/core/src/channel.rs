//! Rayleigh flat-fading draws, AWGN injection, and SNR calibration.
//!
//! Fading is i.i.d. circularly-symmetric unit-variance complex Gaussian
//! per entry, held constant across the two slots of an Alamouti block and
//! drawn fresh per block and subcarrier pair. SNR is the per-receive-
//! antenna symbol SNR Es/sigma^2 with Es = 1 from the unit-energy
//! constellations and the 1/sqrt(2) transmit split.

use crate::linalg::CMat;
use crate::mimo::{AlamoutiBlock, ChannelRealization, ReceivedBlock};
use crate::scalar::Scalar;
use num_complex::Complex;
use rand::Rng;

/// Fading model selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FadingModel {
    /// Independent unit-variance Rayleigh gains per Alamouti block.
    RayleighIid,
}

/// A quasi-static fading process: one realization per Alamouti block,
/// independent across blocks.
#[derive(Debug, Clone)]
pub struct FadingProcess<R> {
    pub model: FadingModel,
    rng: R,
}

impl<R: Rng> FadingProcess<R> {
    pub fn new(model: FadingModel, rng: R) -> Self {
        Self { model, rng }
    }

    pub fn next_block<T: Scalar>(&mut self, nr: usize, nt: usize) -> ChannelRealization<T> {
        match self.model {
            FadingModel::RayleighIid => draw_channel(nr, nt, &mut self.rng),
        }
    }
}

/// Noise level for one SNR point: sigma2 = Es / 10^(snr_db/10), Es = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec<T> {
    pub snr_db: f64,
    pub sigma2: T,
}

impl<T: Scalar> NoiseSpec<T> {
    pub fn from_snr_db(snr_db: f64) -> Self {
        Self {
            snr_db,
            sigma2: T::of(10f64.powf(-snr_db / 10.0)),
        }
    }

    /// Noise disabled; the channel becomes exactly y = H a.
    pub fn noiseless() -> Self {
        Self {
            snr_db: f64::INFINITY,
            sigma2: T::zero(),
        }
    }

    /// One complex noise sample: variance sigma2 split over the two real
    /// dimensions.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex<T> {
        if self.sigma2 == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        let std = (self.sigma2 / T::of(2.0)).sqrt();
        Complex::new(T::standard_normal(rng) * std, T::standard_normal(rng) * std)
    }
}

/// One i.i.d. Rayleigh realization: real and imaginary parts of each gain
/// are Gaussian(0, 1/2), so E|h|^2 = 1.
pub fn draw_channel<T: Scalar, R: Rng + ?Sized>(
    nr: usize,
    nt: usize,
    rng: &mut R,
) -> ChannelRealization<T> {
    let std = T::of(std::f64::consts::FRAC_1_SQRT_2);
    let mut gains = CMat::zeros(nr, nt);
    for j in 0..nr {
        for i in 0..nt {
            gains[(j, i)] =
                Complex::new(T::standard_normal(rng) * std, T::standard_normal(rng) * std);
        }
    }
    ChannelRealization::new(gains)
}

/// Adds i.i.d. complex Gaussian noise of variance sigma2 per sample.
pub fn apply_awgn<T: Scalar, R: Rng + ?Sized>(
    signal: &[Complex<T>],
    spec: &NoiseSpec<T>,
    rng: &mut R,
) -> Vec<Complex<T>> {
    signal.iter().map(|&s| s + spec.sample(rng)).collect()
}

/// Passes one Alamouti block through the quasi-static channel:
/// y[:, t] = h * tx[t, :]^T + n_t, with h held over both slots.
pub fn transmit<T: Scalar, R: Rng + ?Sized>(
    block: &AlamoutiBlock<T>,
    h: &ChannelRealization<T>,
    spec: &NoiseSpec<T>,
    rng: &mut R,
) -> ReceivedBlock<T> {
    let nr = h.rx_antennas();
    let nt = h.tx_antennas();
    let mut samples = CMat::zeros(nr, 2);
    for t in 0..2 {
        for j in 0..nr {
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in 0..nt {
                acc += h.gains[(j, i)] * block.tx[t][i];
            }
            samples[(j, t)] = acc + spec.sample(rng);
        }
    }
    ReceivedBlock { samples }
}
