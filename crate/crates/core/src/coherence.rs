//! Noncommutative coherence of a qubit with respect to the computational
//! basis, plus the conventional relative-entropy and trace-distance
//! coherences used for comparison.
//!
//! For a state `rho` and an incoherent `sigma = diag(p, 1 - p)` the order-`n`
//! construction compares
//!
//! ```text
//! L = ( |rho sigma + sigma rho| / 2 )^(1/n)
//! R =   |rho^(1/n) sigma^(1/n) + sigma^(1/n) rho^(1/n)| / 2
//! ```
//!
//! which coincide whenever `rho` and `sigma` commute. The coherence is the
//! largest distance `D(L, R)` over the incoherent family.

use num_complex::Complex;

use crate::distance::{binary_entropy, relative_entropy, trace_distance, von_neumann_entropy, ExtendedReal};
use crate::error::{invalid, Error, Result};
use crate::hermitian::HermitianOperator;
use crate::optimize::{grid_refine, Goal, GridRefine};
use crate::scalar::Real;
use crate::spectral::{spectral_map, SpectralFn};

/// Closed form and optimizer estimates of the conventional coherence must
/// agree to this absolute tolerance.
pub const ROUTE_AGREEMENT_TOL: f64 = 1e-6;

/// Qubit state on the Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState<T> {
    pub r: T,
    pub theta: T,
    pub phi_az: T,
}

impl<T: Real> BlochState<T> {
    pub fn new(r: T, theta: T, phi_az: T) -> Result<Self> {
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        if !(r >= T::zero() && r <= T::one()) {
            return Err(invalid("r", f(r), "Bloch radius must lie in [0, 1]"));
        }
        if !(theta >= T::zero() && theta <= T::PI()) {
            return Err(invalid("theta", f(theta), "zenith angle must lie in [0, pi]"));
        }
        if !(phi_az >= T::zero() && phi_az < T::TAU()) {
            return Err(invalid("phi_az", f(phi_az), "azimuth must lie in [0, 2 pi)"));
        }
        Ok(Self { r, theta, phi_az })
    }

    /// Pure state `cos(theta/2)|0> + sin(theta/2)|1>`.
    pub fn pure(theta: T) -> Result<Self> {
        Self::new(T::one(), theta, T::zero())
    }

    pub fn mixed(r: T, theta: T) -> Result<Self> {
        Self::new(r, theta, T::zero())
    }

    /// `(I + r . sigma) / 2`.
    pub fn density(&self) -> HermitianOperator<T> {
        let half = T::lit(0.5);
        let (s, c) = self.theta.sin_cos();
        let z = self.r * c;
        let off = Complex::from_polar(self.r * s * half, -self.phi_az);
        HermitianOperator::new(
            2,
            vec![
                Complex::new((T::one() + z) * half, T::zero()),
                off,
                off.conj(),
                Complex::new((T::one() - z) * half, T::zero()),
            ],
        )
        .expect("Bloch density is Hermitian")
    }
}

pub fn density_from_bloch<T: Real>(state: &BlochState<T>) -> HermitianOperator<T> {
    state.density()
}

/// `diag(p, 1 - p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncoherentQubit<T> {
    p: T,
}

impl<T: Real> IncoherentQubit<T> {
    pub fn new(p: T) -> Result<Self> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(invalid(
                "p",
                p.to_f64().unwrap_or(f64::NAN),
                "population must lie in [0, 1]",
            ));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn operator(&self) -> HermitianOperator<T> {
        HermitianOperator::diagonal(&[self.p, T::one() - self.p]).expect("diagonal is Hermitian")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    RelativeEntropy,
    TraceDistance,
}

impl Distance {
    pub fn name(&self) -> &'static str {
        match self {
            Distance::RelativeEntropy => "relative-entropy",
            Distance::TraceDistance => "trace-distance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcConfig<T> {
    /// `alpha = 1/n`; `alpha = 1/2` is the usual order-2 measure.
    pub order_inverse: T,
    pub distance: Distance,
    pub coarse_grid_points: usize,
    pub refine_iterations: usize,
    /// The search runs over `p` in `[boundary_eps, 1 - boundary_eps]`.
    pub boundary_eps: T,
}

impl<T: Real> Default for NcConfig<T> {
    fn default() -> Self {
        Self {
            order_inverse: T::lit(0.5),
            distance: Distance::RelativeEntropy,
            coarse_grid_points: 2001,
            refine_iterations: 60,
            boundary_eps: T::lit(1e-4),
        }
    }
}

impl<T: Real> NcConfig<T> {
    pub fn with_order_inverse(mut self, alpha: T) -> Self {
        self.order_inverse = alpha;
        self
    }

    pub fn with_distance(mut self, distance: Distance) -> Self {
        self.distance = distance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        if !(self.order_inverse > T::zero()) || !self.order_inverse.is_finite() {
            return Err(invalid(
                "order_inverse",
                f(self.order_inverse),
                "alpha = 1/n must be positive",
            ));
        }
        if self.coarse_grid_points < 3 {
            return Err(invalid(
                "coarse_grid_points",
                self.coarse_grid_points as f64,
                "need at least 3",
            ));
        }
        if self.refine_iterations == 0 {
            return Err(invalid("refine_iterations", 0.0, "need at least one refinement"));
        }
        if !(self.boundary_eps > T::zero() && self.boundary_eps < T::lit(0.5)) {
            return Err(invalid("boundary_eps", f(self.boundary_eps), "must lie in (0, 0.5)"));
        }
        Ok(())
    }

    fn search(&self) -> GridRefine<T> {
        GridRefine::new(self.coarse_grid_points, self.refine_iterations)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcResult<T> {
    pub value: T,
    pub argmax_p: T,
    /// Some evaluated `p` gave an infinite distance and was skipped.
    pub infinite_encountered: bool,
}

/// `(AB + BA) / 2`.
pub fn jordan_half<T: Real>(a: &HermitianOperator<T>, b: &HermitianOperator<T>) -> Result<HermitianOperator<T>> {
    let ab = a.product(b)?;
    let ba = b.product(a)?;
    let half = T::lit(0.5);
    HermitianOperator::new(a.dim(), ab.iter().zip(&ba).map(|(x, y)| (*x + *y) * half).collect())
}

/// Returns `(L, R)` for the given `alpha = 1/n`.
pub fn nc_operator_pair<T: Real>(
    rho: &HermitianOperator<T>,
    sigma: &HermitianOperator<T>,
    alpha: T,
) -> Result<(HermitianOperator<T>, HermitianOperator<T>)> {
    let rho_alpha = spectral_map(rho, SpectralFn::Power(alpha))?;
    pair_with_root(rho, &rho_alpha, sigma, alpha)
}

fn pair_with_root<T: Real>(
    rho: &HermitianOperator<T>,
    rho_alpha: &HermitianOperator<T>,
    sigma: &HermitianOperator<T>,
    alpha: T,
) -> Result<(HermitianOperator<T>, HermitianOperator<T>)> {
    let left = spectral_map(
        &spectral_map(&jordan_half(rho, sigma)?, SpectralFn::Abs)?,
        SpectralFn::Power(alpha),
    )?;
    let sigma_alpha = spectral_map(sigma, SpectralFn::Power(alpha))?;
    let right = spectral_map(&jordan_half(rho_alpha, &sigma_alpha)?, SpectralFn::Abs)?;
    Ok((left, right))
}

fn check_qubit<T: Real>(rho: &HermitianOperator<T>) -> Result<()> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: 2,
        });
    }
    Ok(())
}

fn distance_between<T: Real>(
    left: &HermitianOperator<T>,
    right: &HermitianOperator<T>,
    distance: Distance,
) -> Result<ExtendedReal<T>> {
    match distance {
        Distance::RelativeEntropy => relative_entropy(left, right),
        Distance::TraceDistance => Ok(ExtendedReal::Finite(trace_distance(left, right)?)),
    }
}

/// `D(L, R)` at `sigma = diag(p, 1 - p)`, first argument `L`.
pub fn nc_distance_at<T: Real>(rho: &HermitianOperator<T>, p: T, cfg: &NcConfig<T>) -> Result<ExtendedReal<T>> {
    check_qubit(rho)?;
    cfg.validate()?;
    let sigma = IncoherentQubit::new(p)?.operator();
    let (left, right) = nc_operator_pair(rho, &sigma, cfg.order_inverse)?;
    distance_between(&left, &right, cfg.distance)
}

/// Maximizes `D(L, R)` over the clamped incoherent family.
///
/// Each half of the interval is searched in terms of the smaller diagonal
/// entry `s` of sigma, so `diag(s, 1 - s)` and `diag(1 - s, s)` resolve `s`
/// equally finely. Near `p = 1` an explicit `p` would lose that resolution,
/// which matters when the supremum sits at the edge of an excluded region.
pub fn nc_coherence<T: Real>(rho: &HermitianOperator<T>, cfg: &NcConfig<T>) -> Result<NcResult<T>> {
    check_qubit(rho)?;
    cfg.validate()?;
    let alpha = cfg.order_inverse;
    let rho_alpha = spectral_map(rho, SpectralFn::Power(alpha))?;
    let half = T::lit(0.5);
    let settings = GridRefine::new((cfg.coarse_grid_points / 2 + 1).max(3), cfg.refine_iterations);

    let mut failure = None;
    let mut side = |upper: bool| {
        let objective = |s: T| {
            let diag = if upper { [T::one() - s, s] } else { [s, T::one() - s] };
            let sigma = HermitianOperator::diagonal(&diag).ok()?;
            let outcome = pair_with_root(rho, &rho_alpha, &sigma, alpha)
                .and_then(|(l, r)| distance_between(&l, &r, cfg.distance));
            match outcome {
                Ok(d) => d.as_finite(),
                Err(e) => {
                    failure.get_or_insert(e);
                    None
                }
            }
        };
        grid_refine(cfg.boundary_eps, half, settings, Goal::Maximize, objective)
    };
    let lower = side(false);
    let upper = side(true);
    if let Some(e) = failure {
        return Err(e);
    }
    let excluded = matches!(&lower, Ok(o) if o.excluded > 0) || matches!(&upper, Ok(o) if o.excluded > 0);
    let best = match (lower, upper) {
        (Ok(l), Ok(u)) if u.value > l.value => (u.value, T::one() - u.location),
        (Ok(l), _) => (l.value, l.location),
        (Err(_), Ok(u)) => (u.value, T::one() - u.location),
        (Err(e), Err(_)) => return Err(e),
    };
    Ok(NcResult {
        value: best.0,
        argmax_p: best.1,
        infinite_encountered: excluded,
    })
}

/// Relative entropy of coherence computed by two independent routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConventionalCoherence<T> {
    /// `S(dephased rho) - S(rho)`.
    pub value: T,
    /// `min_p S(rho || diag(p, 1-p))` from the grid search.
    pub optimized_value: T,
    pub argmin_p: T,
}

fn conventional_search<T: Real>() -> GridRefine<T> {
    let cfg = NcConfig::<T>::default();
    cfg.search()
}

pub fn rel_ent_coherence<T: Real>(rho: &HermitianOperator<T>) -> Result<ConventionalCoherence<T>> {
    check_qubit(rho)?;
    let dephased = HermitianOperator::diagonal(&[rho.get(0, 0).re, rho.get(1, 1).re])?;
    let closed_form = von_neumann_entropy(&dephased)? - von_neumann_entropy(rho)?;
    let opt = grid_refine(T::zero(), T::one(), conventional_search(), Goal::Minimize, |p| {
        let sigma = HermitianOperator::diagonal(&[p, T::one() - p]).ok()?;
        relative_entropy(rho, &sigma).ok()?.as_finite()
    })?;
    if (closed_form - opt.value).abs() > T::tol(ROUTE_AGREEMENT_TOL) {
        return Err(Error::RouteDisagreement {
            closed_form: closed_form.to_f64().unwrap_or(f64::NAN),
            optimized: opt.value.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(ConventionalCoherence {
        value: closed_form,
        optimized_value: opt.value,
        argmin_p: opt.location,
    })
}

/// `min_p tr|rho - diag(p, 1-p)| / 2`.
pub fn trace_dist_coherence<T: Real>(rho: &HermitianOperator<T>) -> Result<T> {
    check_qubit(rho)?;
    let opt = grid_refine(T::zero(), T::one(), conventional_search(), Goal::Minimize, |p| {
        let sigma = HermitianOperator::diagonal(&[p, T::one() - p]).ok()?;
        trace_distance(rho, &sigma).ok()
    })?;
    Ok(opt.value)
}

/// Relative entropy of coherence of a pure state at zenith angle `theta`.
pub fn pure_rel_ent_coherence<T: Real>(theta: T) -> T {
    let c = (theta * T::lit(0.5)).cos();
    binary_entropy(c * c)
}
