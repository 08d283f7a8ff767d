use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ncoherence::qpea::DERIVATIVE_STEP;
use ncoherence::{default_delta, linspace, Distance, NcConfig};
use serde::{Serialize, Serializer};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    CoherencePure,
    CoherenceMixed,
    CoherenceOrders,
    QpeaSweep,
    QpeaDerivative,
}

impl Experiment {
    pub fn id(self) -> &'static str {
        match self {
            Experiment::CoherencePure => "coherence-pure",
            Experiment::CoherenceMixed => "coherence-mixed",
            Experiment::CoherenceOrders => "coherence-orders",
            Experiment::QpeaSweep => "qpea-sweep",
            Experiment::QpeaDerivative => "qpea-derivative",
        }
    }

    fn is_qpea(self) -> bool {
        matches!(self, Experiment::QpeaSweep | Experiment::QpeaDerivative)
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridRange {
    pub fn new(start: f64, stop: f64, count: usize) -> Self {
        Self { start, stop, count }
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }

    fn check(&self, name: &str, lo: f64, hi: f64, open_lo: bool) -> Result<()> {
        if self.count < 2 {
            return Err(domain(format!(
                "{name} grid needs at least 2 points, got {}",
                self.count
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(domain(format!(
                "{name} grid needs start < stop, got {} .. {}",
                self.start, self.stop
            )));
        }
        let below = if open_lo { self.start <= lo } else { self.start < lo };
        if below || self.stop > hi {
            return Err(domain(format!(
                "{name} grid {} .. {} leaves the allowed range [{lo}, {hi}]",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    fn describe(&self, name: &str) -> String {
        format!(
            "{name}: start={:.16e} stop={:.16e} count={}",
            self.start, self.stop, self.count
        )
    }
}

/// A coherence order `n = num/den`; the curve uses `alpha = 1/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Order {
    pub num: u32,
    pub den: u32,
}

impl Order {
    pub fn alpha(self) -> f64 {
        f64::from(self.den) / f64::from(self.num)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Order {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (num, den) = match s.trim().split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), "1"),
        };
        let parse = |x: &str| {
            x.parse::<u32>()
                .map_err(|_| format!("bad order {s:?}: expected n or a/b"))
        };
        let order = Order {
            num: parse(num)?,
            den: parse(den)?,
        };
        if order.num == 0 || order.den == 0 {
            return Err(format!("bad order {s:?}: both parts must be positive"));
        }
        Ok(order)
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceArg {
    RelEnt,
    Trace,
}

impl From<DistanceArg> for Distance {
    fn from(d: DistanceArg) -> Self {
        match d {
            DistanceArg::RelEnt => Distance::RelativeEntropy,
            DistanceArg::Trace => Distance::TraceDistance,
        }
    }
}

/// Optimizer settings shared by the coherence experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NcSettings {
    pub distance: DistanceArg,
    pub grid: usize,
    pub refine: usize,
    pub boundary_eps: f64,
}

impl Default for NcSettings {
    fn default() -> Self {
        let d = NcConfig::default();
        Self {
            distance: DistanceArg::RelEnt,
            grid: d.coarse_grid_points,
            refine: d.refine_iterations,
            boundary_eps: d.boundary_eps,
        }
    }
}

impl NcSettings {
    pub fn config(&self, alpha: f64) -> NcConfig {
        NcConfig {
            order_inverse: alpha,
            distance: self.distance.into(),
            coarse_grid_points: self.grid,
            refine_iterations: self.refine,
            boundary_eps: self.boundary_eps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub experiment: Experiment,
    pub theta: GridRange,
    /// Union of the ranges, sorted with duplicates removed.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub r: Vec<GridRange>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub orders: Vec<Order>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub m_list: Vec<u32>,
    /// Replaces the per-register default offset for every `m`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nc: Option<NcSettings>,
    #[serde(skip)]
    pub threads: usize,
    #[serde(skip)]
    pub out: PathBuf,
}

pub const DEFAULT_ORDERS: &str = "1,2,3,4,5,6,7,8,9,10,1/2,1/3,1/4,1/5,1/6,1/7,1/8,1/9,1/10";
pub const DEFAULT_M_LIST: [u32; 10] = [2, 3, 4, 5, 6, 7, 10, 15, 20, 25];

impl SweepSpec {
    /// Default grids for the experiment; `threads` = 1, output in `out`.
    pub fn defaults(experiment: Experiment) -> Self {
        let coherence = !experiment.is_qpea();
        let theta = if coherence {
            GridRange::new(0.001, PI - 0.001, 1001)
        } else {
            GridRange::new(0.001, PI - 0.001, 4001)
        };
        let r = match experiment {
            // coarse sweep plus the nearly-pure window
            Experiment::CoherenceMixed => vec![GridRange::new(0.0001, 1.0, 51), GridRange::new(0.9, 1.0, 21)],
            _ => Vec::new(),
        };
        let orders = match experiment {
            Experiment::CoherenceOrders => parse_orders(DEFAULT_ORDERS).expect("default orders parse"),
            _ => Vec::new(),
        };
        Self {
            experiment,
            theta,
            r,
            orders,
            m_list: if coherence { Vec::new() } else { DEFAULT_M_LIST.to_vec() },
            delta: None,
            nc: coherence.then(NcSettings::default),
            threads: 1,
            out: PathBuf::from("out"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.threads == 0 {
            return Err(domain("threads must be positive"));
        }
        let h = DERIVATIVE_STEP;
        match self.experiment {
            Experiment::QpeaSweep => self.theta.check("theta", 0.0, PI, false)?,
            Experiment::QpeaDerivative => self.theta.check("theta", h, PI - h, false)?,
            _ => self.theta.check("theta", 0.0, PI, true)?,
        }
        if !self.experiment.is_qpea() && self.theta.stop >= PI {
            return Err(domain("coherence theta grid must stay below pi"));
        }
        if let Some(nc) = &self.nc {
            nc.config(0.5)
                .validate()
                .map_err(|e| domain(format!("optimizer settings: {e}")))?;
        }
        match self.experiment {
            Experiment::CoherenceMixed => {
                if self.r.is_empty() {
                    return Err(domain("mixed sweep needs an r grid"));
                }
                for range in &self.r {
                    range.check("r", 0.0, 1.0, true)?;
                }
            }
            Experiment::CoherenceOrders => {
                if self.orders.is_empty() {
                    return Err(domain("order list is empty"));
                }
            }
            Experiment::QpeaSweep | Experiment::QpeaDerivative => {
                if self.m_list.is_empty() {
                    return Err(domain("m list is empty"));
                }
                for &m in &self.m_list {
                    if !(2..=25).contains(&m) {
                        return Err(domain(format!("m = {m} outside [2, 25]")));
                    }
                    self.delta_for(m)?;
                }
            }
            Experiment::CoherencePure => {}
        }
        Ok(())
    }

    /// Offset used for register size `m`.
    pub fn delta_for(&self, m: u32) -> Result<f64> {
        match self.delta {
            None => Ok(default_delta(m)?),
            Some(d) => {
                let bound = 2f64.powi(-(m as i32) - 1);
                if !d.is_finite() || d.abs() > bound {
                    return Err(domain(format!("delta = {d} exceeds 2^-(m+1) = {bound} for m = {m}")));
                }
                Ok(d)
            }
        }
    }

    pub fn r_values(&self) -> Vec<f64> {
        let mut rs: Vec<f64> = self.r.iter().flat_map(GridRange::points).collect();
        rs.sort_by(f64::total_cmp);
        rs.dedup();
        rs
    }

    pub fn nc_settings(&self) -> NcSettings {
        self.nc.unwrap_or_default()
    }

    /// One line per grid, for the CSV header.
    pub fn grid_lines(&self) -> Vec<String> {
        let mut lines = vec![self.theta.describe("theta_rad")];
        lines.extend(self.r.iter().map(|g| g.describe("r")));
        if !self.orders.is_empty() {
            let list: Vec<String> = self.orders.iter().map(Order::to_string).collect();
            lines.push(format!("order n: {}", list.join(",")));
        }
        if !self.m_list.is_empty() {
            let list: Vec<String> = self.m_list.iter().map(u32::to_string).collect();
            lines.push(format!("m: {}", list.join(",")));
        }
        lines
    }
}

pub fn parse_orders(s: &str) -> std::result::Result<Vec<Order>, String> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(str::parse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_parse_and_print() {
        let orders = parse_orders("2, 1/3,10").unwrap();
        assert_eq!(
            orders.iter().map(Order::to_string).collect::<Vec<_>>(),
            ["2", "1/3", "10"]
        );
        assert_eq!(orders[1].alpha(), 3.0);
        assert!("0".parse::<Order>().is_err());
        assert!("x/2".parse::<Order>().is_err());
    }

    #[test]
    fn default_r_grid_merges_window() {
        let spec = SweepSpec::defaults(Experiment::CoherenceMixed);
        let rs = spec.r_values();
        assert_eq!(rs.len(), 51 + 21 - 1);
        assert!(rs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*rs.last().unwrap(), 1.0);
    }

    #[test]
    fn delta_override_is_checked_per_register() {
        let mut spec = SweepSpec::defaults(Experiment::QpeaSweep);
        assert!(spec.validate().is_ok());
        spec.delta = Some(2f64.powi(-10));
        // fine up to m = 9, too large from m = 10 on
        assert!(spec.delta_for(7).is_ok());
        assert_eq!(spec.validate().unwrap_err().exit_code(), 3);
    }

    #[test]
    fn every_default_validates() {
        for e in [
            Experiment::CoherencePure,
            Experiment::CoherenceMixed,
            Experiment::CoherenceOrders,
            Experiment::QpeaSweep,
            Experiment::QpeaDerivative,
        ] {
            SweepSpec::defaults(e).validate().unwrap();
        }
    }
}
