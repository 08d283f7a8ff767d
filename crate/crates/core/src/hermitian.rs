//! Dense complex Hermitian operators.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Entry-wise Hermiticity tolerance applied at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A `dim x dim` Hermitian matrix stored row-major.
///
/// Construction replaces the input by `(A + A^H) / 2` and keeps the largest
/// entry-wise deviation that symmetrization removed.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
    asymmetry: T,
}

impl<T: Real> HermitianOperator<T> {
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("dimension must be at least 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Shape(format!(
                "{} entries cannot form a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let half = T::lit(0.5);
        let mut sym = entries.clone();
        let mut asymmetry = T::zero();
        for i in 0..dim {
            for j in i..dim {
                let a = entries[i * dim + j];
                let b = entries[j * dim + i].conj();
                asymmetry = asymmetry.max((a - b).norm());
                let avg = (a + b) * half;
                sym[i * dim + j] = avg;
                sym[j * dim + i] = avg.conj();
            }
        }
        if asymmetry > T::tol(HERMITIAN_TOL) {
            return Err(Error::NotHermitian {
                deviation: asymmetry.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            dim,
            entries: sym,
            asymmetry,
        })
    }

    /// Builds from real row-major entries.
    pub fn from_real(dim: usize, entries: &[T]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn from_rows(rows: &[&[Complex<T>]]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Shape("rows must all have length equal to the row count".into()));
        }
        Self::new(dim, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    pub fn diagonal(diag: &[T]) -> Result<Self> {
        let dim = diag.len();
        let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * dim + i] = Complex::new(d, T::zero());
        }
        Self::new(dim, entries)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::diagonal(&vec![T::one(); dim])
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::diagonal(&vec![T::zero(); dim])
    }

    pub fn pauli_x() -> Self {
        Self::from_real(2, &[T::zero(), T::one(), T::one(), T::zero()]).expect("valid")
    }

    pub fn pauli_y() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        Self::new(2, vec![z, -i, i, z]).expect("valid")
    }

    pub fn pauli_z() -> Self {
        Self::diagonal(&[T::one(), -T::one()]).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    /// Largest deviation from Hermiticity removed at construction.
    pub fn asymmetry(&self) -> T {
        self.asymmetry
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.get(i, i).re).fold(T::zero(), |a, b| a + b)
    }

    pub fn scale(&self, factor: T) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * factor).collect(),
            asymmetry: self.asymmetry,
        }
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max))
    }

    pub fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Plain matrix product; the result is generally not Hermitian.
    pub fn product(&self, other: &Self) -> Result<Vec<Complex<T>>> {
        self.check_dim(other)?;
        Ok(matmul(self.dim, &self.entries, &other.entries))
    }

    /// `A B - B A`, returned as a raw row-major matrix.
    pub fn commutator(&self, other: &Self) -> Result<Vec<Complex<T>>> {
        let ab = self.product(other)?;
        let ba = other.product(self)?;
        Ok(ab.iter().zip(&ba).map(|(x, y)| *x - *y).collect())
    }

    /// Conjugation `U A U^H` by a unitary given row-major.
    pub fn conjugate_by(&self, unitary: &[Complex<T>]) -> Result<Self> {
        if unitary.len() != self.dim * self.dim {
            return Err(Error::Shape("unitary has the wrong size".into()));
        }
        let ua = matmul(self.dim, unitary, &self.entries);
        let udag = adjoint(self.dim, unitary);
        Self::new(self.dim, matmul(self.dim, &ua, &udag))
    }

    pub fn determinant_2x2(&self) -> Option<T> {
        if self.dim != 2 {
            return None;
        }
        Some((self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0)).re)
    }
}

fn zip_with<T: Real>(
    a: &HermitianOperator<T>,
    b: &HermitianOperator<T>,
    f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>,
) -> HermitianOperator<T> {
    assert_eq!(a.dim, b.dim, "dimension mismatch in operator arithmetic");
    HermitianOperator {
        dim: a.dim,
        entries: a.entries.iter().zip(&b.entries).map(|(x, y)| f(*x, *y)).collect(),
        asymmetry: a.asymmetry.max(b.asymmetry),
    }
}

impl<T: Real> Add for &HermitianOperator<T> {
    type Output = HermitianOperator<T>;

    fn add(self, rhs: Self) -> HermitianOperator<T> {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl<T: Real> Sub for &HermitianOperator<T> {
    type Output = HermitianOperator<T>;

    fn sub(self, rhs: Self) -> HermitianOperator<T> {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl<T: Real> Mul<T> for &HermitianOperator<T> {
    type Output = HermitianOperator<T>;

    fn mul(self, rhs: T) -> HermitianOperator<T> {
        self.scale(rhs)
    }
}

pub(crate) fn matmul<T: Real>(dim: usize, a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik.re == T::zero() && aik.im == T::zero() {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] = out[i * dim + j] + aik * b[k * dim + j];
            }
        }
    }
    out
}

pub(crate) fn adjoint<T: Real>(dim: usize, a: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut out = a.to_vec();
    for i in 0..dim {
        for j in 0..dim {
            out[j * dim + i] = a[i * dim + j].conj();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    type H = HermitianOperator<f64>;

    #[test]
    fn symmetrizes_small_deviation() {
        let m = H::new(
            2,
            vec![
                Complex::new(1.0, 0.0),
                Complex::new(0.5, 1e-13),
                Complex::new(0.5, 0.0),
                Complex::new(0.0, 0.0),
            ],
        )
        .unwrap();
        assert!(m.asymmetry() > 0.0);
        assert_eq!(m.get(0, 1), m.get(1, 0).conj());
    }

    #[test]
    fn rejects_non_hermitian() {
        let err = H::from_real(2, &[1.0, 2.0, 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(H::new(0, vec![]), Err(Error::Shape(_))));
        assert!(matches!(H::from_real(2, &[1.0, 0.0, 0.0]), Err(Error::Shape(_))));
        assert!(matches!(H::from_real(1, &[f64::NAN]), Err(Error::NonFinite)));
    }

    #[test]
    fn paulis_anticommute() {
        let x = H::pauli_x();
        let z = H::pauli_z();
        let xz = x.product(&z).unwrap();
        let zx = z.product(&x).unwrap();
        for (a, b) in xz.iter().zip(&zx) {
            assert_eq!(*a + *b, Complex::new(0.0, 0.0));
        }
        assert_eq!(H::pauli_y().get(0, 1), Complex::new(0.0, -1.0));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = H::identity(2).unwrap();
        let b = H::identity(3).unwrap();
        assert_eq!(a.max_abs_diff(&b), Err(Error::DimensionMismatch { left: 2, right: 3 }));
    }
}
