//! One-dimensional extremum search: uniform grid, then bracket halving
//! around the best grid point.
//!
//! The objective returns `None` for points that must be excluded (for
//! instance an infinite relative entropy). Excluded points never win.

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    Maximize,
    Minimize,
}

impl Goal {
    fn better<T: Real>(self, candidate: T, incumbent: T) -> bool {
        match self {
            Goal::Maximize => candidate > incumbent,
            Goal::Minimize => candidate < incumbent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRefine<T> {
    pub grid_points: usize,
    /// Maximum number of bracket halvings.
    pub refine_iterations: usize,
    /// Stop once the bracket `[center - w, center + w]` is narrower than this.
    pub min_width: T,
}

impl<T: Real> GridRefine<T> {
    pub fn new(grid_points: usize, refine_iterations: usize) -> Self {
        Self {
            grid_points,
            refine_iterations,
            min_width: T::zero(),
        }
    }

    pub fn with_min_width(mut self, width: T) -> Self {
        self.min_width = width;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum<T> {
    pub location: T,
    pub value: T,
    /// Grid or refinement points for which the objective returned `None`.
    pub excluded: usize,
    pub evaluations: usize,
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let last = T::count(count - 1);
            (0..count)
                .map(|i| {
                    if i + 1 == count {
                        hi
                    } else {
                        lo + (hi - lo) * T::count(i) / last
                    }
                })
                .collect()
        }
    }
}

pub fn grid_refine<T: Real>(
    lo: T,
    hi: T,
    settings: GridRefine<T>,
    goal: Goal,
    mut objective: impl FnMut(T) -> Option<T>,
) -> Result<Optimum<T>> {
    if settings.grid_points < 3 {
        return Err(invalid(
            "grid_points",
            settings.grid_points as f64,
            "need at least three grid points",
        ));
    }
    if !(lo < hi) {
        return Err(invalid(
            "interval",
            (hi - lo).to_f64().unwrap_or(f64::NAN),
            "empty search interval",
        ));
    }
    let grid = linspace(lo, hi, settings.grid_points);
    let mut excluded = 0;
    let mut evaluations = 0;
    let mut best: Option<(usize, T)> = None;
    for (i, &x) in grid.iter().enumerate() {
        evaluations += 1;
        match objective(x) {
            Some(v) if !v.is_nan() => {
                if best.is_none_or(|(_, b)| goal.better(v, b)) {
                    best = Some((i, v));
                }
            }
            _ => excluded += 1,
        }
    }
    let (index, mut value) = best.ok_or(Error::AllInfinite)?;
    let mut center = grid[index];
    let mut half = (hi - lo) / T::count(settings.grid_points - 1);
    let two = T::lit(2.0);

    for _ in 0..settings.refine_iterations {
        if half * two <= settings.min_width {
            break;
        }
        half = half / two;
        // probes that round back onto the center carry no information
        if center - half == center || center + half == center {
            break;
        }
        let mut next = (center, value);
        for x in [center - half, center + half] {
            if x < lo || x > hi {
                continue;
            }
            evaluations += 1;
            match objective(x) {
                Some(v) if !v.is_nan() => {
                    if goal.better(v, next.1) {
                        next = (x, v);
                    }
                }
                _ => excluded += 1,
            }
        }
        center = next.0;
        value = next.1;
    }
    Ok(Optimum {
        location: center,
        value,
        excluded,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_both_ends() {
        let xs = linspace(0.0, 1.0, 5);
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
    }

    #[test]
    fn finds_interior_maximum_to_high_precision() {
        let opt = grid_refine(0.0, 1.0, GridRefine::new(11, 60), Goal::Maximize, |x: f64| {
            Some(-(x - 0.3141592653589793).powi(2))
        })
        .unwrap();
        assert!((opt.location - 0.3141592653589793).abs() < 1e-12);
    }

    #[test]
    fn picks_global_over_local() {
        // local max at 0.2 (height 0.5), global at 0.8 (height 1.0)
        let f = |x: f64| Some(0.5 * (-(x - 0.2).powi(2) * 400.0).exp() + (-(x - 0.8).powi(2) * 400.0).exp());
        let opt = grid_refine(0.0, 1.0, GridRefine::new(101, 60), Goal::Maximize, f).unwrap();
        assert!((opt.location - 0.8).abs() < 1e-9);
    }

    #[test]
    fn minimum_at_boundary_stays_in_range() {
        let opt = grid_refine(0.0, 1.0, GridRefine::new(5, 60), Goal::Minimize, |x: f64| Some(x)).unwrap();
        assert_eq!(opt.location, 0.0);
    }

    #[test]
    fn excluded_points_never_win() {
        let opt = grid_refine(0.0, 1.0, GridRefine::new(11, 10), Goal::Maximize, |x: f64| {
            if x > 0.85 {
                None
            } else {
                Some(x)
            }
        })
        .unwrap();
        assert!(opt.location <= 0.85);
        assert!(opt.excluded >= 2);
    }

    #[test]
    fn all_excluded_is_an_error() {
        let err = grid_refine(0.0, 1.0, GridRefine::new(11, 10), Goal::Maximize, |_: f64| None::<f64>);
        assert_eq!(err, Err(Error::AllInfinite));
    }

    #[test]
    fn min_width_stops_refinement() {
        let opt = grid_refine(
            0.0,
            1.0,
            GridRefine::new(11, 100).with_min_width(1e-3),
            Goal::Maximize,
            |x: f64| Some(-(x - 0.123456).powi(2)),
        )
        .unwrap();
        assert!((opt.location - 0.123456).abs() < 1e-3);
        assert!(opt.evaluations < 11 + 2 * 10);
    }
}
