//! Unitary DFT/IDFT for arbitrary sizes.
//!
//! Composite sizes run a recursive mixed-radix Cooley-Tukey decimation
//! (smallest prime factor first); prime leaf sizes fall back to the direct
//! O(n^2) sum. Both directions carry the 1/sqrt(N) unitary scale so signal
//! energy is invariant through the transform.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_complex::Complex;

/// Precomputed transform plan for one size.
#[derive(Debug, Clone)]
pub struct Dft<T> {
    n: usize,
    /// twiddles[k] = exp(-2 pi i k / n)
    twiddles: Vec<Complex<T>>,
    scale: T,
}

impl<T: Scalar> Dft<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("zero-length transform".into()));
        }
        let twiddles = (0..n)
            .map(|k| {
                let angle = -2.0 * std::f64::consts::PI * k as f64 / n as f64;
                Complex::new(T::of(angle.cos()), T::of(angle.sin()))
            })
            .collect();
        Ok(Self {
            n,
            twiddles,
            scale: T::of(1.0 / (n as f64).sqrt()),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Forward unitary DFT.
    pub fn forward(&self, input: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.run(input, false)
    }

    /// Inverse unitary DFT.
    pub fn inverse(&self, input: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.run(input, true)
    }

    fn run(&self, input: &[Complex<T>], conjugate: bool) -> Result<Vec<Complex<T>>> {
        if input.len() != self.n {
            return Err(Error::Config(format!(
                "transform length {} does not match plan size {}",
                input.len(),
                self.n
            )));
        }
        let mut dst = vec![Complex::new(T::zero(), T::zero()); self.n];
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); self.n];
        self.recurse(input, 1, &mut dst, &mut scratch, self.n, conjugate);
        for v in &mut dst {
            *v = v.scale(self.scale);
        }
        Ok(dst)
    }

    #[inline]
    fn twiddle(&self, exponent: usize, conjugate: bool) -> Complex<T> {
        let w = self.twiddles[exponent % self.n];
        if conjugate {
            w.conj()
        } else {
            w
        }
    }

    fn recurse(
        &self,
        src: &[Complex<T>],
        stride: usize,
        dst: &mut [Complex<T>],
        scratch: &mut [Complex<T>],
        n: usize,
        conjugate: bool,
    ) {
        if n == 1 {
            dst[0] = src[0];
            return;
        }
        let p = smallest_prime_factor(n);
        let m = n / p;
        // Twiddle exponents for size n advance in steps of self.n / n.
        let step = self.n / n;

        if m == 1 {
            // Prime leaf: direct sum.
            for (k, out) in dst.iter_mut().enumerate().take(n) {
                let mut acc = Complex::new(T::zero(), T::zero());
                for j in 0..n {
                    acc += src[j * stride] * self.twiddle(j * k * step, conjugate);
                }
                *out = acc;
            }
            return;
        }

        for r in 0..p {
            let (sub_dst, _) = dst[r * m..].split_at_mut(m);
            self.recurse(
                &src[r * stride..],
                stride * p,
                sub_dst,
                scratch,
                m,
                conjugate,
            );
        }
        for s in 0..m {
            for t in 0..p {
                let k = t * m + s;
                let mut acc = Complex::new(T::zero(), T::zero());
                for r in 0..p {
                    acc += dst[r * m + s] * self.twiddle(r * k % n * step, conjugate);
                }
                scratch[k] = acc;
            }
        }
        dst[..n].copy_from_slice(&scratch[..n]);
    }
}

fn smallest_prime_factor(n: usize) -> usize {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return f;
        }
        f += 2;
    }
    n
}

/// One-shot forward unitary DFT.
pub fn dft<T: Scalar>(time: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    Dft::new(time.len())?.forward(time)
}

/// One-shot inverse unitary DFT.
pub fn idft<T: Scalar>(freq: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    Dft::new(freq.len())?.inverse(freq)
}
