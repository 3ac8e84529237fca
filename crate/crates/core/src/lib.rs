//! Link-level Monte-Carlo simulator for a convolutionally coded 2x4 MIMO
//! MC-CDMA downlink over Rayleigh fading.
//!
//! The transmit chain is: message bits -> rate-1/2 convolutional encoder ->
//! chip spreading (PN or Walsh, factor 8) -> M-ary mapping -> Alamouti
//! space-time pairing -> per-antenna OFDM (unitary IFFT + cyclic prefix).
//! Each Alamouti block sees its own i.i.d. flat Rayleigh 4x2 channel draw
//! plus AWGN; the receiver mirrors the chain with zero-forcing,
//! real-decomposed least-squares, or exhaustive ML detection in front of
//! hard demapping, despreading and Viterbi decoding.
//!
//! All signal processing is generic over the scalar type via [`Scalar`]
//! (`f32` or `f64`); the aliases below pin the default `f64` instantiation
//! used by the command-line frontend.

pub mod analytic;
pub mod bits;
pub mod channel;
pub mod dft;
pub mod error;
pub mod fec;
pub mod linalg;
pub mod mimo;
pub mod modem;
pub mod ofdm;
pub mod rng;
pub mod scalar;
pub mod sim;
pub mod spread;

pub use bits::BitBlock;
pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default scalar type for simulation runs.
pub type Real = f64;
/// Complex sample in the default precision.
pub type Cplx = num_complex::Complex<Real>;
/// Modulation table in the default precision.
pub type Scheme = modem::ModulationScheme<Real>;
/// Channel realization in the default precision.
pub type Channel = mimo::ChannelRealization<Real>;
