//! Success probability of phase estimation when every Hadamard on the
//! auxiliary register is replaced by
//!
//! ```text
//! V(theta) = [[cos(theta/2),  sin(theta/2)],
//!             [sin(theta/2), -cos(theta/2)]]
//! ```
//!
//! With eigenphase `phi = a / 2^m + delta`, the probability of reading `a`
//! is available three ways: the direct `2^m`-term sum, the bitwise product
//! `prod_k |cos(theta/2) + sin(theta/2) e^{2 pi i delta 2^k}|^2 / 2^m`, and an
//! explicit state vector pushed through the inverse Fourier transform.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::optimize::{grid_refine, linspace, Goal, GridRefine};
use crate::scalar::Real;

pub const SUM_MAX_QUBITS: u32 = 22;
pub const PRODUCT_MAX_QUBITS: u32 = 64;
pub const CIRCUIT_MAX_QUBITS: u32 = 12;
pub const DERIVATIVE_STEP: f64 = 1e-4;
pub const THETA_GRID_POINTS: usize = 4001;
/// Bracket width at which extremum refinement stops.
pub const THETA_RESOLUTION: f64 = 1e-6;
/// The sum form hands over to the product form this close to `theta = pi`.
const SUM_POLE_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QpeaParams<T> {
    m: u32,
    theta: T,
    delta: T,
    a: u64,
}

fn register_size<T: Real>(m: u32) -> T {
    T::lit(2f64.powi(m as i32))
}

impl<T: Real> QpeaParams<T> {
    pub fn new(m: u32, theta: T, delta: T, a: u64) -> Result<Self> {
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        if m == 0 || m > PRODUCT_MAX_QUBITS {
            return Err(invalid("m", m as f64, "auxiliary register needs 1..=64 qubits"));
        }
        if !(theta >= T::zero() && theta <= T::PI()) {
            return Err(invalid("theta", f(theta), "rotation angle must lie in [0, pi]"));
        }
        let bound = T::lit(2f64.powi(-(m as i32) - 1));
        if !(delta.abs() <= bound) {
            return Err(invalid("delta", f(delta), "|delta| must not exceed 2^-(m+1)"));
        }
        if m < 64 && a >= 1u64 << m {
            return Err(invalid("a", a as f64, "outcome index must be below 2^m"));
        }
        let params = Self { m, theta, delta, a };
        let phi = params.phi();
        if !(phi >= T::zero() && phi < T::one()) {
            return Err(invalid("phi", f(phi), "eigenphase a/2^m + delta must lie in [0, 1)"));
        }
        Ok(params)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn phi(&self) -> T {
        T::lit(self.a as f64) / register_size::<T>(self.m) + self.delta
    }

    pub fn with_theta(&self, theta: T) -> Result<Self> {
        Self::new(self.m, theta, self.delta, self.a)
    }
}

/// Number of ones in the binary expansion of `y`.
pub fn popcount(y: u64) -> u32 {
    y.count_ones()
}

/// `e^{2 pi i x}` with `x` reduced mod 1 first.
fn turn<T: Real>(x: T) -> Complex<T> {
    Complex::from_polar(T::one(), T::TAU() * x.fract())
}

pub fn success_prob_sum<T: Real>(q: &QpeaParams<T>) -> Result<T> {
    if q.m > SUM_MAX_QUBITS {
        return Err(Error::RegisterTooLarge {
            m: q.m,
            max: SUM_MAX_QUBITS,
        });
    }
    if q.theta > T::PI() - T::lit(SUM_POLE_GUARD) {
        return Ok(success_prob_product(q));
    }
    let half = q.theta * T::lit(0.5);
    let t = half.tan();
    let powers: Vec<T> = (0..=q.m).map(|b| t.powi(b as i32)).collect();
    let mut sum = Complex::new(T::zero(), T::zero());
    for y in 0..1u64 << q.m {
        sum = sum + turn(q.delta * T::lit(y as f64)) * powers[popcount(y) as usize];
    }
    let prefactor = half.cos().powi(q.m as i32) / register_size::<T>(q.m).sqrt();
    Ok((sum * prefactor).norm_sqr())
}

/// Canonical evaluator, `O(m)` and exact at `theta = pi`.
pub fn success_prob_product<T: Real>(q: &QpeaParams<T>) -> T {
    let (s, c) = (q.theta * T::lit(0.5)).sin_cos();
    let half = T::lit(0.5);
    let mut prob = T::one();
    let mut scaled = q.delta;
    for _ in 0..q.m {
        let factor = (Complex::new(c, T::zero()) + turn(scaled) * s).norm_sqr();
        prob = prob * factor * half;
        scaled = (scaled + scaled).fract();
    }
    prob
}

/// State vector after `V^{(x) m}`, phase kickback from an eigenstate with
/// eigenphase `phi`, and the inverse Fourier transform.
pub fn circuit_amplitudes<T: Real>(m: u32, theta: T, phi: T) -> Result<Vec<Complex<T>>> {
    let kicked = kicked_register(m, theta, phi)?;
    let n = kicked.len() as u64;
    let norm = T::one() / T::lit(n as f64).sqrt();
    Ok((0..n).map(|x| inverse_qft_entry(&kicked, x) * norm).collect())
}

/// Probability of reading `a` from [`circuit_amplitudes`].
pub fn circuit_oracle<T: Real>(m: u32, theta: T, phi: T, a: u64) -> Result<T> {
    let kicked = kicked_register(m, theta, phi)?;
    let n = kicked.len() as u64;
    if a >= n {
        return Err(invalid("a", a as f64, "outcome index must be below 2^m"));
    }
    Ok(inverse_qft_entry(&kicked, a).norm_sqr() / T::lit(n as f64))
}

fn kicked_register<T: Real>(m: u32, theta: T, phi: T) -> Result<Vec<Complex<T>>> {
    if m == 0 || m > CIRCUIT_MAX_QUBITS {
        return Err(Error::RegisterTooLarge {
            m,
            max: CIRCUIT_MAX_QUBITS,
        });
    }
    let (s, c) = (theta * T::lit(0.5)).sin_cos();
    let cos_pow: Vec<T> = (0..=m).map(|k| c.powi(k as i32)).collect();
    let sin_pow: Vec<T> = (0..=m).map(|k| s.powi(k as i32)).collect();
    Ok((0..1u64 << m)
        .map(|y| {
            let b = popcount(y) as usize;
            turn(phi * T::lit(y as f64)) * (cos_pow[m as usize - b] * sin_pow[b])
        })
        .collect())
}

/// `sum_y amp(y) e^{-2 pi i x y / N}` without the `1/sqrt(N)` factor.
fn inverse_qft_entry<T: Real>(amps: &[Complex<T>], x: u64) -> Complex<T> {
    let n = amps.len() as u64;
    let inv_n = T::one() / T::lit(n as f64);
    amps.iter()
        .enumerate()
        .map(|(y, &amp)| {
            let k = (x * y as u64) % n;
            amp * turn(-T::lit(k as f64) * inv_n)
        })
        .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
}

/// Central difference of the product form in `theta`.
pub fn success_prob_derivative<T: Real>(q: &QpeaParams<T>, h: T) -> Result<T> {
    if !(h > T::zero()) {
        return Err(invalid("h", h.to_f64().unwrap_or(f64::NAN), "step must be positive"));
    }
    if q.theta - h < T::zero() || q.theta + h > T::PI() {
        return Err(invalid(
            "theta",
            q.theta.to_f64().unwrap_or(f64::NAN),
            "theta +/- h must stay inside [0, pi]",
        ));
    }
    let up = success_prob_product(&q.with_theta(q.theta + h)?);
    let down = success_prob_product(&q.with_theta(q.theta - h)?);
    Ok((up - down) / (h + h))
}

/// Default phase offsets: `2^-10` for `m <= 7`, `2^-20` for
/// `m <= 17` and `2^-30` for `m <= 25`.
pub fn default_delta<T: Real>(m: u32) -> Result<T> {
    let exponent = match m {
        2..=7 => -10,
        8..=17 => -20,
        18..=25 => -30,
        _ => return Err(Error::ExplicitDeltaRequired { m }),
    };
    Ok(T::lit(2f64.powi(exponent)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbCurve<T> {
    pub thetas: Vec<T>,
    pub probs: Vec<T>,
    pub derivs: Vec<T>,
}

/// Probability and derivative on a strictly increasing grid whose points
/// all keep `theta +/- h` inside `[0, pi]`.
pub fn prob_curve<T: Real>(m: u32, delta: T, thetas: &[T], h: T) -> Result<ProbCurve<T>> {
    if thetas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid("thetas", f64::NAN, "grid must be strictly increasing"));
    }
    let mut probs = Vec::with_capacity(thetas.len());
    let mut derivs = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let q = QpeaParams::new(m, theta, delta, 0)?;
        probs.push(success_prob_product(&q));
        derivs.push(success_prob_derivative(&q, h)?);
    }
    Ok(ProbCurve {
        thetas: thetas.to_vec(),
        probs,
        derivs,
    })
}

fn theta_search<T: Real>(grid_points: usize) -> GridRefine<T> {
    GridRefine::new(grid_points, 200).with_min_width(T::lit(THETA_RESOLUTION))
}

fn theta_extremum<T: Real>(m: u32, delta: T, lo: T, hi: T, grid_points: usize, goal: Goal) -> Result<T> {
    QpeaParams::new(m, T::zero(), delta, 0)?;
    if !(T::zero() <= lo && hi <= T::PI()) {
        return Err(invalid(
            "theta",
            lo.to_f64().unwrap_or(f64::NAN),
            "window must lie inside [0, pi]",
        ));
    }
    let opt = grid_refine(lo, hi, theta_search(grid_points), goal, |theta| {
        QpeaParams::new(m, theta, delta, 0)
            .ok()
            .map(|q| success_prob_product(&q))
    })?;
    Ok(opt.location)
}

/// Location of the largest success probability over `[0, pi]`.
pub fn theta_argmax<T: Real>(m: u32, delta: T, grid_points: usize) -> Result<T> {
    theta_extremum(m, delta, T::zero(), T::PI(), grid_points, Goal::Maximize)
}

/// Location of the smallest success probability over `[0, pi]`.
pub fn theta_argmin<T: Real>(m: u32, delta: T, grid_points: usize) -> Result<T> {
    theta_extremum(m, delta, T::zero(), T::PI(), grid_points, Goal::Minimize)
}

/// [`theta_argmax`] restricted to `[lo, hi]`.
pub fn theta_argmax_on<T: Real>(m: u32, delta: T, lo: T, hi: T, grid_points: usize) -> Result<T> {
    theta_extremum(m, delta, lo, hi, grid_points, Goal::Maximize)
}

/// [`theta_argmin`] restricted to `[lo, hi]`.
pub fn theta_argmin_on<T: Real>(m: u32, delta: T, lo: T, hi: T, grid_points: usize) -> Result<T> {
    theta_extremum(m, delta, lo, hi, grid_points, Goal::Minimize)
}

/// Steepest point of the rising flank, searched on `[h, theta_argmax]`.
pub fn derivative_argmax<T: Real>(m: u32, delta: T) -> Result<T> {
    derivative_argmax_on(m, delta, T::zero(), T::PI())
}

/// [`derivative_argmax`] with both the peak search and the flank clipped
/// to `[lo, hi]`.
pub fn derivative_argmax_on<T: Real>(m: u32, delta: T, lo: T, hi: T) -> Result<T> {
    let h = T::lit(DERIVATIVE_STEP);
    let peak = theta_argmax_on(m, delta, lo, hi, THETA_GRID_POINTS)?;
    let start = lo.max(h);
    let stop = peak.min(T::PI() - h);
    if stop - start <= h {
        return Err(invalid(
            "theta_argmax",
            peak.to_f64().unwrap_or(f64::NAN),
            "no rising segment to search",
        ));
    }
    let opt = grid_refine(start, stop, theta_search(THETA_GRID_POINTS), Goal::Maximize, |theta| {
        let q = QpeaParams::new(m, theta, delta, 0).ok()?;
        success_prob_derivative(&q, h).ok()
    })?;
    Ok(opt.location)
}

/// Uniform grid on `[lo, hi]`.
pub fn theta_grid<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    linspace(lo, hi, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn params(m: u32, theta: f64, delta: f64) -> QpeaParams<f64> {
        QpeaParams::new(m, theta, delta, 0).unwrap()
    }

    #[test]
    fn popcount_examples() {
        assert_eq!(popcount(0), 0);
        assert_eq!(popcount(7), 3);
        for k in 0..=30 {
            assert_eq!(popcount(1 << k), 1);
        }
    }

    #[test]
    fn hadamard_with_exact_phase_always_succeeds() {
        for m in [1, 2, 5, 10] {
            assert!((success_prob_sum(&params(m, FRAC_PI_2, 0.0)).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_rotation_leaves_uniform_weight() {
        let exact = success_prob_sum(&params(3, 0.0, 1.0 / 64.0)).unwrap();
        assert!((exact - 0.125).abs() < 1e-15);
        let near = success_prob_sum(&params(3, 1e-8, 1.0 / 64.0)).unwrap();
        assert!((near - 0.125).abs() < 1e-7);
    }

    #[test]
    fn zero_offset_closed_form() {
        let theta = PI / 5.0;
        let closed = ((1.0 + theta.sin()) / 2.0).powi(4);
        assert!((closed - 0.39723).abs() < 1e-5);
        assert!((success_prob_sum(&params(4, theta, 0.0)).unwrap() - closed).abs() < 1e-12);
        assert!((success_prob_product(&params(4, theta, 0.0)) - closed).abs() < 1e-12);
    }

    #[test]
    fn product_form_handles_theta_pi() {
        let p = success_prob_product(&params(3, PI, 1.0 / 64.0));
        // every factor is |e^{i psi}|^2 / 2
        assert!((p - 0.125).abs() < 1e-15);
        let s = success_prob_sum(&params(3, PI, 1.0 / 64.0)).unwrap();
        assert_eq!(s, p);
    }

    #[test]
    fn two_qubit_product_matches_expanded_sum() {
        let (theta, delta): (f64, f64) = (1.1, 2f64.powi(-5));
        let t = (theta / 2.0).tan();
        let e = |k: f64| Complex::from_polar(1.0, 2.0 * PI * delta * k);
        let expanded = Complex::new(1.0, 0.0) + e(1.0) * t + e(2.0) * t + e(3.0) * t * t;
        let direct = (expanded * (theta / 2.0).cos().powi(2) / 2.0).norm_sqr();
        assert!((success_prob_product(&params(2, theta, delta)) - direct).abs() < 1e-14);
    }

    #[test]
    fn large_register_near_hadamard() {
        let p = success_prob_product(&params(25, FRAC_PI_2, 2f64.powi(-30)));
        assert!(p > 0.99 && p <= 1.0);
    }

    #[test]
    fn exact_three_bit_phase() {
        let p = circuit_oracle(3, FRAC_PI_2, 5.0 / 8.0, 5).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circuit_is_normalized_and_independent_of_a() {
        let delta = 2f64.powi(-10);
        let reference = circuit_oracle(4, FRAC_PI_2, delta, 0).unwrap();
        for a in [7u64, 15] {
            let phi = a as f64 / 16.0 + delta;
            assert!((circuit_oracle(4, FRAC_PI_2, phi, a).unwrap() - reference).abs() < 1e-12);
        }
        let amps = circuit_amplitudes(5, 0.7, 0.3).unwrap();
        let total: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            success_prob_sum(&params(23, 1.0, 0.0)),
            Err(Error::RegisterTooLarge { m: 23, .. })
        ));
        assert!(matches!(
            circuit_oracle(13, 1.0, 0.0, 0),
            Err(Error::RegisterTooLarge { .. })
        ));
        assert!(QpeaParams::new(3, 1.0, 0.1, 0).is_err());
        assert!(QpeaParams::new(3, 1.0, 0.0, 8).is_err());
        assert!(QpeaParams::new(3, 4.0, 0.0, 0).is_err());
        assert!(QpeaParams::new(3, 1.0, -0.01, 0).is_err());
        assert!(QpeaParams::new(3, 1.0, -0.01, 1).is_ok());
        assert!(success_prob_derivative(&params(3, 0.0, 0.0), 1e-4).is_err());
    }

    #[test]
    fn delta_schedule() {
        assert_eq!(default_delta::<f64>(5).unwrap(), 2f64.powi(-10));
        assert_eq!(default_delta::<f64>(7).unwrap(), 2f64.powi(-10));
        assert_eq!(default_delta::<f64>(8).unwrap(), 2f64.powi(-20));
        assert_eq!(default_delta::<f64>(10).unwrap(), 2f64.powi(-20));
        assert_eq!(default_delta::<f64>(20).unwrap(), 2f64.powi(-30));
        assert_eq!(default_delta::<f64>(1), Err(Error::ExplicitDeltaRequired { m: 1 }));
        assert_eq!(default_delta::<f64>(26), Err(Error::ExplicitDeltaRequired { m: 26 }));
    }

    #[test]
    fn derivative_examples() {
        for m in [1, 5, 12] {
            let d = success_prob_derivative(&params(m, FRAC_PI_2, 0.0), 1e-4).unwrap();
            assert!(d.abs() < 2e-7);
        }
        // d/dtheta ((1 + sin)/2)^m = m ((1 + sin)/2)^(m-1) cos / 2
        let theta: f64 = 1.0;
        let analytic = 5.0 * ((1.0 + theta.sin()) / 2.0).powi(4) * theta.cos() / 2.0;
        let numeric = success_prob_derivative(&params(5, theta, 0.0), 1e-4).unwrap();
        assert!((numeric - analytic).abs() < 1e-6);
        for theta in [0.1, 0.5, 1.0, 1.5] {
            assert!(success_prob_derivative(&params(5, theta, 0.0), 1e-4).unwrap() > 0.0);
        }
    }

    #[test]
    fn zero_offset_peak_is_hadamard() {
        for m in [2, 6, 15] {
            let peak = theta_argmax(m, 0.0, THETA_GRID_POINTS).unwrap();
            assert!((peak - FRAC_PI_2).abs() < 1e-6);
        }
    }

    #[test]
    fn curve_rejects_unsorted_grid() {
        assert!(prob_curve(3, 0.0, &[0.5, 0.4], 1e-4).is_err());
        let curve = prob_curve(3, 0.0, &[0.5, 1.0, 1.5], 1e-4).unwrap();
        assert_eq!(curve.probs.len(), 3);
    }
}
