//! Alamouti space-time block coding over two transmit antennas and its
//! detectors: zero-forcing on the conjugate-stacked effective channel,
//! the real-decomposed least-squares equivalent, and exhaustive ML.

use crate::error::{Error, Result};
use crate::linalg::{CMat, RMat};
use crate::modem::ModulationScheme;
use crate::scalar::Scalar;
use num_complex::Complex;
use num_traits::Zero;

/// Flat-fading gains for one Alamouti block: entry (j, i) is the gain
/// from transmit antenna i to receive antenna j.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T> {
    pub gains: CMat<T>,
}

impl<T: Scalar> ChannelRealization<T> {
    pub fn new(gains: CMat<T>) -> Self {
        Self { gains }
    }

    pub fn rx_antennas(&self) -> usize {
        self.gains.rows
    }

    pub fn tx_antennas(&self) -> usize {
        self.gains.cols
    }

    /// Squared Frobenius norm: the total diversity gain of the block.
    pub fn energy(&self) -> T {
        let f = self.gains.frobenius_norm();
        f * f
    }
}

/// One Alamouti codeword: `tx[slot][antenna]`, power-split by 1/sqrt(2)
/// so the per-slot total transmit power equals one symbol energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlamoutiBlock<T> {
    pub s1: Complex<T>,
    pub s2: Complex<T>,
    pub tx: [[Complex<T>; 2]; 2],
}

/// Encodes a symbol pair: slot 1 sends (s1, s2), slot 2 sends
/// (-s2*, s1*), both scaled by 1/sqrt(2).
pub fn alamouti_encode<T: Scalar>(s1: Complex<T>, s2: Complex<T>) -> AlamoutiBlock<T> {
    let g = T::of(std::f64::consts::FRAC_1_SQRT_2);
    AlamoutiBlock {
        s1,
        s2,
        tx: [
            [s1.scale(g), s2.scale(g)],
            [-s2.conj().scale(g), s1.conj().scale(g)],
        ],
    }
}

/// Received samples for one block: entry (j, t) is receive antenna j in
/// slot t.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedBlock<T> {
    pub samples: CMat<T>,
}

impl<T: Scalar> ReceivedBlock<T> {
    /// Conjugate stacking that turns the two slots into one linear system
    /// in (s1, s2): slot-1 rows as-is, slot-2 rows conjugated.
    pub fn stack(&self) -> Vec<Complex<T>> {
        let nr = self.samples.rows;
        let mut y = Vec::with_capacity(2 * nr);
        for j in 0..nr {
            y.push(self.samples[(j, 0)]);
        }
        for j in 0..nr {
            y.push(self.samples[(j, 1)].conj());
        }
        y
    }
}

/// Effective 2*nr x 2 channel of the stacked system: row j is
/// (h_1j, h_2j) and row nr+j is (h_2j*, -h_1j*). Its Gram matrix is
/// ||h||_F^2 * I exactly, which is the testable core of the 2x4
/// diversity claim.
pub fn effective_channel<T: Scalar>(h: &ChannelRealization<T>) -> CMat<T> {
    assert_eq!(h.tx_antennas(), 2, "Alamouti stacking needs 2 tx antennas");
    let nr = h.rx_antennas();
    let mut m = CMat::zeros(2 * nr, 2);
    for j in 0..nr {
        m[(j, 0)] = h.gains[(j, 0)];
        m[(j, 1)] = h.gains[(j, 1)];
        m[(nr + j, 0)] = h.gains[(j, 1)].conj();
        m[(nr + j, 1)] = -h.gains[(j, 0)].conj();
    }
    m
}

/// Zero-forcing weights W = (H^H H)^-1 H^H. Fails as a singular channel
/// when the Gram matrix's condition estimate exceeds 1e12.
pub fn zf_weights<T: Scalar>(h: &CMat<T>) -> Result<CMat<T>> {
    let hh = h.hermitian();
    let gram = hh.mul(h);
    let (inv, _cond) = gram.inverse_with_cond()?;
    Ok(inv.mul(&hh))
}

/// Zero-forcing detection of the stacked receive vector.
pub fn zf_detect<T: Scalar>(y: &[Complex<T>], h: &CMat<T>) -> Result<(Complex<T>, Complex<T>)> {
    if h.cols != 2 {
        return Err(Error::Config("detector expects two symbol streams".into()));
    }
    if y.len() != h.rows {
        return Err(Error::Config("received vector length mismatch".into()));
    }
    let s = zf_weights(h)?.mul_vec(y);
    Ok((s[0], s[1]))
}

/// Splits a complex system into its real form: [[Re H, -Im H],
/// [Im H, Re H]] and [Re y; Im y], so that the real solution stacks
/// [Re s; Im s].
pub fn real_decompose<T: Scalar>(h: &CMat<T>, y: &[Complex<T>]) -> (RMat<T>, Vec<T>) {
    assert_eq!(h.rows, y.len());
    let (m, n) = (h.rows, h.cols);
    let mut hr = RMat::zeros(2 * m, 2 * n);
    for r in 0..m {
        for c in 0..n {
            let v = h[(r, c)];
            hr[(r, c)] = v.re;
            hr[(r, n + c)] = -v.im;
            hr[(m + r, c)] = v.im;
            hr[(m + r, n + c)] = v.re;
        }
    }
    let mut yr = Vec::with_capacity(2 * m);
    yr.extend(y.iter().map(|v| v.re));
    yr.extend(y.iter().map(|v| v.im));
    (hr, yr)
}

/// Least-squares solution of the real-decomposed system via the normal
/// equations, recombined into the two complex symbols.
pub fn real_ls_detect<T: Scalar>(hr: &RMat<T>, yr: &[T]) -> Result<(Complex<T>, Complex<T>)> {
    if hr.cols != 4 {
        return Err(Error::Config("detector expects two symbol streams".into()));
    }
    if yr.len() != hr.rows {
        return Err(Error::Config("received vector length mismatch".into()));
    }
    let ht = hr.transpose();
    let normal = ht.mul(hr);
    let rhs = ht.mul_vec(yr);
    let x = normal.solve_vec(&rhs)?;
    Ok((Complex::new(x[0], x[2]), Complex::new(x[1], x[3])))
}

/// Exhaustive maximum-likelihood detection: scans every constellation
/// pair for the minimum of ||y - H s||^2, smallest label pair on ties.
/// Returns the winning labels with their points.
pub fn ml_detect<T: Scalar>(
    y: &[Complex<T>],
    h: &CMat<T>,
    scheme: &ModulationScheme<T>,
) -> (Complex<T>, Complex<T>) {
    assert_eq!(h.cols, 2);
    assert_eq!(y.len(), h.rows);
    let c1 = h.column(0);
    let c2 = h.column(1);
    let dot = |a: &[Complex<T>], b: &[Complex<T>]| {
        a.iter()
            .zip(b)
            .fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * *y)
    };
    // Expanding ||y - c1 s1 - c2 s2||^2 leaves a per-pair cost in the
    // precomputed inner products (the constant ||y||^2 drops out).
    let z1 = dot(&c1, y);
    let z2 = dot(&c2, y);
    let g11 = dot(&c1, &c1).re;
    let g22 = dot(&c2, &c2).re;
    let g12 = dot(&c1, &c2);
    let two = T::of(2.0);

    let mut best = (scheme.points[0], scheme.points[0]);
    let mut best_cost = T::infinity();
    for s1 in &scheme.points {
        let e1 = s1.norm_sqr() * g11 - two * (s1.conj() * z1).re;
        for s2 in &scheme.points {
            let cost = e1 + s2.norm_sqr() * g22 - two * (s2.conj() * z2).re
                + two * (s1.conj() * *s2 * g12).re;
            if cost < best_cost {
                best_cost = cost;
                best = (*s1, *s2);
            }
        }
    }
    best
}
