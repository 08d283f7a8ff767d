//! Operator distances: quantum relative entropy (bits) and trace distance.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Result;
use crate::hermitian::HermitianOperator;
use crate::scalar::Real;
use crate::spectral::{clip_psd, eig_herm};

/// Eigenvalue / overlap threshold used to decide support inclusion.
pub const SUPPORT_TOL: f64 = 1e-10;
/// Floor substituted for vanishing eigenvalues of the second argument.
pub const LOG_FLOOR: f64 = 1e-300;

/// A real value or `+inf`, used where relative entropy can diverge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal<T> {
    Finite(T),
    PosInfinity,
}

impl<T: Real> ExtendedReal<T> {
    /// Wraps a finite value; `None` for NaN or infinities.
    pub fn finite(x: T) -> Option<Self> {
        x.is_finite().then_some(ExtendedReal::Finite(x))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn as_finite(&self) -> Option<T> {
        match *self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::PosInfinity => None,
        }
    }

    /// The value as a float, with `+inf` for the infinite marker.
    pub fn value(&self) -> T {
        self.as_finite().unwrap_or_else(T::infinity)
    }
}

impl<T: Real> PartialOrd for ExtendedReal<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a.partial_cmp(b),
            (ExtendedReal::Finite(_), ExtendedReal::PosInfinity) => Some(Ordering::Less),
            (ExtendedReal::PosInfinity, ExtendedReal::Finite(_)) => Some(Ordering::Greater),
            (ExtendedReal::PosInfinity, ExtendedReal::PosInfinity) => Some(Ordering::Equal),
        }
    }
}

impl<T: Real> fmt::Display for ExtendedReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::PosInfinity => write!(f, "inf"),
        }
    }
}

/// `tr(A log2 A - A log2 B)` for positive semidefinite `A`, `B`.
///
/// Neither argument needs unit trace, so the result may be negative. Returns
/// `+inf` when an eigenvector of `A` with eigenvalue above [`SUPPORT_TOL`]
/// has squared overlap above [`SUPPORT_TOL`] with the null space of `B`.
pub fn relative_entropy<T: Real>(a: &HermitianOperator<T>, b: &HermitianOperator<T>) -> Result<ExtendedReal<T>> {
    a.check_dim(b)?;
    let n = a.dim();
    let da = eig_herm(a)?;
    let db = eig_herm(b)?;
    let la = da
        .eigenvalues()
        .iter()
        .map(|&x| clip_psd(x))
        .collect::<Result<Vec<T>>>()?;
    let lb = db
        .eigenvalues()
        .iter()
        .map(|&x| clip_psd(x))
        .collect::<Result<Vec<T>>>()?;

    let tau = T::tol(SUPPORT_TOL);
    let floor = T::lit(LOG_FLOOR).max(T::min_positive_value());
    let log_b: Vec<T> = lb.iter().map(|&x| x.max(floor).log2()).collect();

    let mut total = T::zero();
    for (i, &lam) in la.iter().enumerate() {
        if lam == T::zero() {
            continue;
        }
        let ai = da.eigenvector(i);
        let mut cross = T::zero();
        let mut null_overlap = T::zero();
        for (j, &mu) in lb.iter().enumerate() {
            let bj = db.eigenvector(j);
            let overlap = (0..n)
                .map(|k| ai[k].conj() * bj[k])
                .fold(num_complex::Complex::new(T::zero(), T::zero()), |s, z| s + z)
                .norm_sqr();
            if mu <= tau {
                null_overlap = null_overlap + overlap;
            }
            cross = cross + overlap * log_b[j];
        }
        if lam > tau && null_overlap > tau {
            return Ok(ExtendedReal::PosInfinity);
        }
        total = total + lam * (lam.log2() - cross);
    }
    Ok(ExtendedReal::Finite(total))
}

/// `tr|A - B| / 2`.
pub fn trace_distance<T: Real>(a: &HermitianOperator<T>, b: &HermitianOperator<T>) -> Result<T> {
    a.check_dim(b)?;
    let diff = a - b;
    let dec = eig_herm(&diff)?;
    let sum = dec.eigenvalues().iter().fold(T::zero(), |s, x| s + x.abs());
    Ok(sum * T::lit(0.5))
}

/// `-tr(rho log2 rho)` with `0 log 0 = 0`.
pub fn von_neumann_entropy<T: Real>(rho: &HermitianOperator<T>) -> Result<T> {
    let dec = eig_herm(rho)?;
    let mut s = T::zero();
    for &x in dec.eigenvalues() {
        let x = clip_psd(x)?;
        if x > T::zero() {
            s = s - x * x.log2();
        }
    }
    Ok(s)
}

/// Binary entropy `-q log2 q - (1-q) log2 (1-q)`.
pub fn binary_entropy<T: Real>(q: T) -> T {
    let term = |x: T| if x > T::zero() { -x * x.log2() } else { T::zero() };
    term(q) + term(T::one() - q)
}
