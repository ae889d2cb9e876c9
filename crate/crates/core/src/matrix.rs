//! Small dense complex matrices used to check circuits against their
//! intended unitaries. Nothing here is tuned for speed; the largest matrix
//! the crate builds is 32 x 32.

use std::ops::Mul;

use num_complex::Complex;

use crate::gates::Gate2x2;
use crate::scalar::Real;

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if the length is not a square.
    pub fn from_rows(dim: usize, data: Vec<Complex<T>>) -> Self {
        assert_eq!(data.len(), dim * dim, "matrix data must be dim*dim");
        Self { dim, data }
    }

    pub fn from_gate(g: &Gate2x2<T>) -> Self {
        let e = g.entries();
        Self::from_rows(2, vec![e[0][0], e[0][1], e[1][0], e[1][1]])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: Complex<T>) {
        self.data[row * self.dim + col] = v;
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    /// Kronecker product `self ⊗ other`; `self` occupies the more significant index bits.
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let dim = da * db;
        let mut out = Self::zeros(dim);
        for ar in 0..da {
            for ac in 0..da {
                let a = self.get(ar, ac);
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for br in 0..db {
                    for bc in 0..db {
                        out.set(ar * db + br, ac * db + bc, a * other.get(br, bc));
                    }
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { dim: self.dim, data }
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| {
                let row = &self.data[r * self.dim..(r + 1) * self.dim];
                row.iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Largest entrywise modulus of `self - other`, with the first entry attaining it.
    pub fn max_abs_diff(&self, other: &Self) -> (T, usize, usize) {
        assert_eq!(self.dim, other.dim);
        let mut best = (T::zero(), 0, 0);
        for (k, (a, b)) in self.data.iter().zip(&other.data).enumerate() {
            let d = (a - b).norm();
            if d > best.0 {
                best = (d, k / self.dim, k % self.dim);
            }
        }
        best
    }

    /// `max |U†U - I|` over all entries.
    pub fn unitarity_residual(&self) -> T {
        let prod = &self.adjoint() * self;
        prod.max_abs_diff(&Self::identity(self.dim)).0
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_residual() <= tol
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] = out.data[r * n + c] + a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = CMatrix::<f64>::identity(2);
        assert_eq!(i2.kron(&i2), CMatrix::identity(4));
    }

    #[test]
    fn kron_block_layout() {
        let a = CMatrix::from_rows(2, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        let b = CMatrix::from_rows(2, vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let k = a.kron(&b);
        assert_eq!(k.get(0, 0), c(0.0, 1.0));
        assert_eq!(k.get(1, 3), c(2.0, 0.0));
        assert_eq!(k.get(2, 0), c(0.0, 3.0));
        assert_eq!(k.get(3, 3), c(4.0, 0.0));
    }

    #[test]
    fn non_unitary_detected() {
        let m = CMatrix::from_rows(2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        assert!(!m.is_unitary(1e-10));
    }
}
