//! Minimal dense matrices for the detection math. Sizes never exceed
//! 2*nr x 2*nt (16 x 4 real after decomposition), so plain Gauss-Jordan
//! with partial pivoting is all that is needed.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_complex::Complex;
use num_traits::{One, Zero};

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> CMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols));
        Self {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                for c in 0..rhs.cols {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self[(r, c)] * v[c])
                    .fold(Complex::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.scale(s)).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, v| acc + v.norm_sqr())
            .sqrt()
    }

    pub fn column(&self, c: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// Inverse together with the Frobenius condition estimate
    /// ||A||_F * ||A^-1||_F. Fails as a singular channel when the pivot
    /// collapses or the estimate exceeds 1e12.
    pub fn inverse_with_cond(&self) -> Result<(Self, T)> {
        assert_eq!(self.rows, self.cols);
        let inv = gauss_solve(self.clone(), Self::identity(self.rows), |v: &Complex<T>| {
            v.norm_sqr()
        })?;
        let cond = self.frobenius_norm() * inv.frobenius_norm();
        if cond > T::of(1e12) {
            return Err(Error::SingularChannel);
        }
        Ok((inv, cond))
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMat<T> {
    type Output = Complex<T>;
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.cols + c]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMat<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.cols + c]
    }
}

/// Row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RMat<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> RMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)];
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                for c in 0..rhs.cols {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self[(r, c)] * v[c])
                    .fold(T::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Solves A x = b for square A via the shared elimination.
    pub fn solve_vec(&self, b: &[T]) -> Result<Vec<T>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, b.len());
        let rhs = RMat {
            rows: b.len(),
            cols: 1,
            data: b.to_vec(),
        };
        let x = gauss_solve(self.clone(), rhs, |v: &T| *v * *v)?;
        Ok(x.data)
    }
}

impl<T> std::ops::Index<(usize, usize)> for RMat<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for RMat<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

trait MatStorage {
    type Elem: Copy
        + Zero
        + std::ops::Add<Output = Self::Elem>
        + std::ops::Sub<Output = Self::Elem>
        + std::ops::Mul<Output = Self::Elem>
        + std::ops::Div<Output = Self::Elem>;
    fn dims(&self) -> (usize, usize);
    fn at(&self, r: usize, c: usize) -> Self::Elem;
    fn set(&mut self, r: usize, c: usize, v: Self::Elem);
    fn swap_rows(&mut self, a: usize, b: usize);
}

impl<T: Scalar> MatStorage for CMat<T> {
    type Elem = Complex<T>;
    fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    fn at(&self, r: usize, c: usize) -> Complex<T> {
        self[(r, c)]
    }
    fn set(&mut self, r: usize, c: usize, v: Complex<T>) {
        self[(r, c)] = v;
    }
    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<T: Scalar> MatStorage for RMat<T> {
    type Elem = T;
    fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    fn at(&self, r: usize, c: usize) -> T {
        self[(r, c)]
    }
    fn set(&mut self, r: usize, c: usize, v: T) {
        self[(r, c)] = v;
    }
    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Gauss-Jordan elimination with partial pivoting; solves A X = B.
fn gauss_solve<M, T>(mut a: M, mut b: M, pivot_weight: impl Fn(&M::Elem) -> T) -> Result<M>
where
    M: MatStorage,
    T: Scalar,
{
    let (n, _) = a.dims();
    let (_, bcols) = b.dims();
    for col in 0..n {
        let mut pivot = col;
        let mut best = pivot_weight(&a.at(col, col));
        for r in col + 1..n {
            let w = pivot_weight(&a.at(r, col));
            if w > best {
                best = w;
                pivot = r;
            }
        }
        if best <= T::zero() || !best.is_finite() {
            return Err(Error::SingularChannel);
        }
        if pivot != col {
            a.swap_rows(col, pivot);
            b.swap_rows(col, pivot);
        }
        let diag = a.at(col, col);
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a.at(r, col) / diag;
            for c in col..n {
                let v = a.at(r, c) - factor * a.at(col, c);
                a.set(r, c, v);
            }
            for c in 0..bcols {
                let v = b.at(r, c) - factor * b.at(col, c);
                b.set(r, c, v);
            }
        }
    }
    for r in 0..n {
        let diag = a.at(r, r);
        for c in 0..bcols {
            let v = b.at(r, c) / diag;
            b.set(r, c, v);
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cmat(rows: usize, cols: usize, seed: u64) -> CMat<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = CMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            }
        }
        m
    }

    #[test]
    fn inverse_of_random_square() {
        for seed in 0..20 {
            let a = random_cmat(4, 4, seed);
            let (inv, _) = a.inverse_with_cond().unwrap();
            let prod = a.mul(&inv);
            for r in 0..4 {
                for c in 0..4 {
                    let expected = if r == c { 1.0 } else { 0.0 };
                    assert!((prod[(r, c)] - Complex::new(expected, 0.0)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let mut a = CMat::<f64>::zeros(2, 2);
        a[(0, 0)] = Complex::new(1.0, 0.0);
        a[(0, 1)] = Complex::new(2.0, 0.0);
        a[(1, 0)] = Complex::new(2.0, 0.0);
        a[(1, 1)] = Complex::new(4.0, 0.0);
        assert!(matches!(a.inverse_with_cond(), Err(Error::SingularChannel)));
    }

    #[test]
    fn real_solve_matches_known_system() {
        let mut a = RMat::<f64>::zeros(2, 2);
        a[(0, 0)] = 2.0;
        a[(0, 1)] = 1.0;
        a[(1, 0)] = 1.0;
        a[(1, 1)] = 3.0;
        let x = a.solve_vec(&[5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_and_mul_agree_with_manual() {
        let a = random_cmat(3, 2, 42);
        let g = a.hermitian().mul(&a);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex::new(0.0, 0.0);
                for r in 0..3 {
                    acc += a[(r, i)].conj() * a[(r, j)];
                }
                assert!((g[(i, j)] - acc).norm() < 1e-12);
            }
        }
    }
}
