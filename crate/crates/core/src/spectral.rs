//! Spectral decomposition of Hermitian operators and functions of them.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hermitian::{adjoint, matmul, HermitianOperator};
use crate::scalar::Real;

/// Eigenvalues in `[-PSD_CLIP, 0)` are treated as zero before powers and logs.
pub const PSD_CLIP: f64 = 1e-10;
/// Convergence threshold on the off-diagonal Frobenius norm for `dim > 2`.
pub const JACOBI_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalue gap below which a 2x2 operator is taken as scalar.
pub const DEGENERATE_GAP: f64 = 1e-14;
/// Multiple of `epsilon * dim * spectral radius` treated as zero by powers.
pub const ROUNDOFF_ULPS: f64 = 8.0;

/// `H = V diag(eigenvalues) V^H` with eigenvalues sorted descending.
///
/// Column `j` of the row-major `eigenvectors` matrix belongs to eigenvalue
/// `j`. Each column is phase-fixed so its first nonzero component is real
/// and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T> {
    dim: usize,
    eigenvalues: Vec<T>,
    eigenvectors: Vec<Complex<T>>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[Complex<T>] {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self.eigenvectors[i * self.dim + j]).collect()
    }

    /// `V diag(f(lambda)) V^H`.
    pub fn apply(&self, f: impl Fn(T) -> T) -> Result<HermitianOperator<T>> {
        let n = self.dim;
        let mut out = vec![Complex::new(T::zero(), T::zero()); n * n];
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == T::zero() {
                continue;
            }
            for i in 0..n {
                let vik = self.eigenvectors[i * n + k] * w;
                for j in 0..n {
                    out[i * n + j] = out[i * n + j] + vik * self.eigenvectors[j * n + k].conj();
                }
            }
        }
        HermitianOperator::new(n, out)
    }

    pub fn reconstruct(&self) -> Result<HermitianOperator<T>> {
        self.apply(|x| x)
    }

    /// Largest entry of `|V^H V - I|`.
    pub fn orthonormality_error(&self) -> T {
        let n = self.dim;
        let gram = matmul(n, &adjoint(n, &self.eigenvectors), &self.eigenvectors);
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((gram[i * n + j] - Complex::new(target, T::zero())).norm());
            }
        }
        worst
    }
}

/// Hermitian eigendecomposition: closed form for `dim <= 2`, cyclic complex
/// Jacobi rotations otherwise.
pub fn eig_herm<T: Real>(h: &HermitianOperator<T>) -> Result<SpectralDecomposition<T>> {
    let (eigenvalues, eigenvectors) = match h.dim() {
        1 => (vec![h.get(0, 0).re], vec![Complex::new(T::one(), T::zero())]),
        2 => eig_2x2(h),
        _ => jacobi(h)?,
    };
    Ok(finish(h.dim(), eigenvalues, eigenvectors))
}

fn eig_2x2<T: Real>(h: &HermitianOperator<T>) -> (Vec<T>, Vec<Complex<T>>) {
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let a = h.get(0, 0).re;
    let d = h.get(1, 1).re;
    let b = h.get(0, 1);
    if b.norm() == T::zero() && (a - d).abs() >= T::tol(DEGENERATE_GAP) {
        return if a >= d {
            (vec![a, d], vec![one, zero, zero, one])
        } else {
            (vec![d, a], vec![zero, one, one, zero])
        };
    }
    let half = T::lit(0.5);
    let mean = (a + d) * half;
    let diff = (a - d) * half;
    let radius = diff.hypot(b.norm());
    if radius + radius < T::tol(DEGENERATE_GAP) {
        return (vec![mean, mean], vec![one, zero, zero, one]);
    }
    // (x, y) spans the kernel of H - (mean + radius) I
    let (x, y) = if diff >= T::zero() {
        (Complex::new(diff + radius, T::zero()), b.conj())
    } else {
        (b, Complex::new(radius - diff, T::zero()))
    };
    let norm = (x.norm_sqr() + y.norm_sqr()).sqrt();
    let (x, y) = (x / norm, y / norm);
    // columns: (x, y) and (-y*, x*)
    (vec![mean + radius, mean - radius], vec![x, -y.conj(), y, x.conj()])
}

fn off_diagonal_norm<T: Real>(n: usize, a: &[Complex<T>]) -> T {
    let mut sum = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum = sum + a[i * n + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn jacobi<T: Real>(h: &HermitianOperator<T>) -> Result<(Vec<T>, Vec<Complex<T>>)> {
    let n = h.dim();
    let zero = Complex::new(T::zero(), T::zero());
    let mut a = h.entries().to_vec();
    let mut v = vec![zero; n * n];
    for i in 0..n {
        v[i * n + i] = Complex::new(T::one(), T::zero());
    }
    let scale = a.iter().map(|z| z.norm_sqr()).fold(T::zero(), |s, x| s + x).sqrt();
    let threshold = T::tol(JACOBI_TOL) * scale.max(T::one());

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(n, &a);
        if off <= threshold {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off.to_f64().unwrap_or(f64::NAN),
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                let phase = apq / mag;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (mag + mag);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                // G restricted to (p, q) is diag(1, e^{-i phi}) * [[c, s], [-s, c]]
                let g_pp = Complex::new(c, T::zero());
                let g_pq = Complex::new(s, T::zero());
                let g_qp = phase.conj() * (-s);
                let g_qq = phase.conj() * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * g_pp + akq * g_qp;
                    a[k * n + q] = akp * g_pq + akq * g_qq;
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * g_pp + vkq * g_qp;
                    v[k * n + q] = vkp * g_pq + vkq * g_qq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[p * n + q] = zero;
                a[q * n + p] = zero;
                a[p * n + p] = Complex::new(a[p * n + p].re, T::zero());
                a[q * n + q] = Complex::new(a[q * n + q].re, T::zero());
            }
        }
    }
    Ok(((0..n).map(|i| a[i * n + i].re).collect(), v))
}

fn finish<T: Real>(n: usize, eigenvalues: Vec<T>, eigenvectors: Vec<Complex<T>>) -> SpectralDecomposition<T> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigenvalues[j].partial_cmp(&eigenvalues[i]).expect("finite eigenvalues"));
    let mut values = Vec::with_capacity(n);
    let mut vectors = vec![Complex::new(T::zero(), T::zero()); n * n];
    let cutoff = T::tol(1e-12);
    for (dst, &src) in order.iter().enumerate() {
        values.push(eigenvalues[src]);
        let pivot = (0..n)
            .map(|i| eigenvectors[i * n + src])
            .find(|z| z.norm() > cutoff)
            .unwrap_or(Complex::new(T::one(), T::zero()));
        let unphase = pivot.conj() / pivot.norm();
        for i in 0..n {
            vectors[i * n + dst] = eigenvectors[i * n + src] * unphase;
        }
    }
    SpectralDecomposition {
        dim: n,
        eigenvalues: values,
        eigenvectors: vectors,
    }
}

/// Scalar functions applied through the spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralFn<T> {
    /// `lambda -> |lambda|`
    Abs,
    /// `lambda -> max(lambda, 0)^alpha` with `alpha > 0`
    Power(T),
    /// `lambda -> log2(lambda)`; every eigenvalue must be positive
    Log2,
}

/// Eigenvalues at or below this are numerically indistinguishable from zero.
pub(crate) fn roundoff_floor<T: Real>(dec: &SpectralDecomposition<T>) -> T {
    let scale = dec.eigenvalues().iter().fold(T::zero(), |m, x| m.max(x.abs()));
    T::epsilon() * T::lit(ROUNDOFF_ULPS) * T::count(dec.dim()) * scale
}

/// Clips eigenvalues in `[-PSD_CLIP, 0)` to zero; anything lower is an error.
pub(crate) fn clip_psd<T: Real>(lambda: T) -> Result<T> {
    if lambda >= T::zero() {
        Ok(lambda)
    } else if lambda >= -T::tol(PSD_CLIP) {
        Ok(T::zero())
    } else {
        Err(Error::NotPsd {
            eigenvalue: lambda.to_f64().unwrap_or(f64::NAN),
        })
    }
}

pub fn spectral_map<T: Real>(h: &HermitianOperator<T>, f: SpectralFn<T>) -> Result<HermitianOperator<T>> {
    let dec = eig_herm(h)?;
    match f {
        SpectralFn::Abs => dec.apply(|x| x.abs()),
        SpectralFn::Power(alpha) => {
            if !(alpha > T::zero()) || !alpha.is_finite() {
                return Err(crate::error::invalid(
                    "alpha",
                    alpha.to_f64().unwrap_or(f64::NAN),
                    "power exponent must be positive and finite",
                ));
            }
            for &lambda in dec.eigenvalues() {
                clip_psd(lambda)?;
            }
            // positive roundoff dust is zeroed too: a fractional power would inflate it
            let dust = roundoff_floor(&dec);
            dec.apply(|x| if x > dust { x.powf(alpha) } else { T::zero() })
        }
        SpectralFn::Log2 => {
            if let Some(&low) = dec.eigenvalues().last() {
                if low <= T::zero() {
                    return Err(Error::LogDomain {
                        eigenvalue: low.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
            dec.apply(|x| x.log2())
        }
    }
}

/// Applies an arbitrary scalar map to the spectrum.
pub fn spectral_map_with<T: Real>(h: &HermitianOperator<T>, f: impl Fn(T) -> T) -> Result<HermitianOperator<T>> {
    eig_herm(h)?.apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    type H = HermitianOperator<f64>;

    #[test]
    fn diagonal_input_is_already_decomposed() {
        let dec = eig_herm(&H::diagonal(&[0.7, 0.3]).unwrap()).unwrap();
        assert_eq!(dec.eigenvalues(), &[0.7, 0.3]);
        assert_eq!(dec.eigenvector(0), vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]);
        assert_eq!(dec.eigenvector(1), vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)]);
    }

    #[test]
    fn ascending_diagonal_is_sorted() {
        let dec = eig_herm(&H::diagonal(&[0.3, 0.7]).unwrap()).unwrap();
        assert_eq!(dec.eigenvalues(), &[0.7, 0.3]);
        assert!((dec.eigenvector(0)[1].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_x_spectrum() {
        let dec = eig_herm(&H::pauli_x()).unwrap();
        assert!((dec.eigenvalues()[0] - 1.0).abs() < 1e-15);
        assert!((dec.eigenvalues()[1] + 1.0).abs() < 1e-15);
        assert!(dec.orthonormality_error() < 1e-15);
    }

    #[test]
    fn scalar_matrix_returns_standard_basis() {
        let dec = eig_herm(&H::diagonal(&[0.5, 0.5]).unwrap()).unwrap();
        assert_eq!(dec.eigenvalues(), &[0.5, 0.5]);
        assert_eq!(dec.eigenvector(0)[0], Complex::new(1.0, 0.0));
    }

    #[test]
    fn eigenvector_phase_is_fixed() {
        let dec = eig_herm(&H::pauli_y()).unwrap();
        for j in 0..2 {
            let v = dec.eigenvector(j);
            assert!(v[0].re > 0.0 && v[0].im.abs() < 1e-15);
        }
    }

    #[test]
    fn jacobi_handles_complex_3x3() {
        let i = Complex::new(0.0, 1.0);
        let r = |x: f64| Complex::new(x, 0.0);
        let h = H::new(
            3,
            vec![
                r(2.0),
                r(1.0) + i,
                r(0.0),
                r(1.0) - i,
                r(3.0),
                i * 0.5,
                r(0.0),
                -i * 0.5,
                r(-1.0),
            ],
        )
        .unwrap();
        let dec = eig_herm(&h).unwrap();
        assert!(dec.reconstruct().unwrap().max_abs_diff(&h).unwrap() < 1e-12);
        assert!(dec.orthonormality_error() < 1e-12);
        let sum: f64 = dec.eigenvalues().iter().sum();
        assert!((sum - 4.0).abs() < 1e-12);
    }

    #[test]
    fn abs_of_signed_diagonal_is_identity() {
        let out = spectral_map(&H::diagonal(&[1.0, -1.0]).unwrap(), SpectralFn::Abs).unwrap();
        assert!(out.max_abs_diff(&H::identity(2).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn square_root_of_projector_is_itself() {
        let p = H::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let out = spectral_map(&p, SpectralFn::Power(0.5)).unwrap();
        assert!(out.max_abs_diff(&p).unwrap() < 1e-15);
    }

    #[test]
    fn cube_root_of_diagonal() {
        let out = spectral_map(&H::diagonal(&[8.0, 1.0]).unwrap(), SpectralFn::Power(1.0 / 3.0)).unwrap();
        assert!(out.max_abs_diff(&H::diagonal(&[2.0, 1.0]).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn power_clips_negative_dust_and_rejects_real_negatives() {
        let dusty = H::diagonal(&[1.0, -1e-12]).unwrap();
        let out = spectral_map(&dusty, SpectralFn::Power(0.5)).unwrap();
        assert_eq!(out.get(1, 1).re, 0.0);
        let bad = H::diagonal(&[1.0, -1e-6]).unwrap();
        assert!(matches!(
            spectral_map(&bad, SpectralFn::Power(0.5)),
            Err(Error::NotPsd { .. })
        ));
        assert!(matches!(
            spectral_map(&dusty, SpectralFn::Power(0.0)),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn log_of_singular_operator_is_an_error() {
        let singular = H::diagonal(&[1.0, 0.0]).unwrap();
        assert!(matches!(
            spectral_map(&singular, SpectralFn::Log2),
            Err(Error::LogDomain { .. })
        ));
        let out = spectral_map(&H::diagonal(&[4.0, 0.5]).unwrap(), SpectralFn::Log2).unwrap();
        assert!(out.max_abs_diff(&H::diagonal(&[2.0, -1.0]).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn generic_over_f32() {
        let h = HermitianOperator::<f32>::pauli_x();
        let dec = eig_herm(&h).unwrap();
        assert!((dec.eigenvalues()[0] - 1.0).abs() < 1e-6);
        let big = HermitianOperator::<f32>::from_real(3, &[1.0, 0.5, 0.0, 0.5, 2.0, 0.25, 0.0, 0.25, 3.0]).unwrap();
        let dec = eig_herm(&big).unwrap();
        assert!(dec.reconstruct().unwrap().max_abs_diff(&big).unwrap() < 1e-5);
    }
}
