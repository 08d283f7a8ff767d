use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ncoherence::qpea::{DERIVATIVE_STEP, THETA_GRID_POINTS};
use ncoherence::{
    derivative_argmax_on, nc_coherence, rel_ent_coherence, success_prob_derivative, success_prob_product,
    theta_argmax_on, theta_argmin_on, BlochState, QpeaParams,
};
use rayon::prelude::*;

use crate::error::{Result, SweepError};
use crate::output::{Cell, Table};
use crate::report::{Curve, Extremum, ExtremumReport, Kind};
use crate::spec::{Experiment, SweepSpec};

pub struct SweepOutput {
    pub table: Table,
    pub report: ExtremumReport,
}

impl SweepOutput {
    /// Header block: versions, the run settings as JSON, the grids.
    pub fn header(&self) -> Result<Vec<String>> {
        let mut lines = vec![
            format!("nc-sweep {}", env!("CARGO_PKG_VERSION")),
            format!("toolkit_version: {}", self.report.toolkit_version),
            format!("spec: {}", serde_json::to_string(&self.report.config)?),
        ];
        lines.extend(self.report.config.grid_lines().into_iter().map(|g| format!("grid {g}")));
        Ok(lines)
    }

    pub fn csv(&self) -> Result<String> {
        Ok(self.table.to_csv(&self.header()?))
    }

    /// Writes `<experiment>.csv` and `<experiment>.json` under `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        let io = |path: &Path| {
            let path = path.display().to_string();
            move |source| SweepError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        let id = &self.report.experiment;
        let csv_path = dir.join(format!("{id}.csv"));
        let json_path = dir.join(format!("{id}.json"));
        fs::write(&csv_path, self.csv()?).map_err(io(&csv_path))?;
        fs::write(&json_path, self.report.to_json()?).map_err(io(&json_path))?;
        Ok((csv_path, json_path))
    }
}

pub fn run(spec: &SweepSpec) -> Result<SweepOutput> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(spec.threads).build()?;
    let clock = Instant::now();
    let (table, curves) = pool.install(|| match spec.experiment {
        Experiment::CoherencePure => coherence_pure(spec),
        Experiment::CoherenceMixed => coherence_mixed(spec),
        Experiment::CoherenceOrders => coherence_orders(spec),
        Experiment::QpeaSweep => qpea_sweep(spec),
        Experiment::QpeaDerivative => qpea_derivative(spec),
    })?;
    let report = ExtremumReport {
        experiment: spec.experiment.id().to_string(),
        curves,
        config: spec.clone(),
        toolkit_version: ncoherence::VERSION.to_string(),
        wall_clock_seconds: clock.elapsed().as_secs_f64(),
    };
    Ok(SweepOutput { table, report })
}

/// Evaluates `f` over `items` in parallel, keeping input order.
fn ordered<I: Sync, O: Send>(items: &[I], f: impl Fn(&I) -> Result<O> + Sync + Send) -> Result<Vec<O>> {
    items.par_iter().map(f).collect()
}

fn is_local_max(v: &[f64], i: usize) -> bool {
    (i == 0 || v[i] >= v[i - 1]) && (i + 1 == v.len() || v[i] >= v[i + 1])
}

/// Largest local maximum among `indices`; first index wins ties.
fn local_max_in(v: &[f64], indices: impl Iterator<Item = usize>) -> Option<usize> {
    indices
        .filter(|&i| is_local_max(v, i))
        .fold(None, |best: Option<usize>, i| match best {
            Some(b) if v[b] >= v[i] => Some(b),
            _ => Some(i),
        })
}

fn argmin_in(v: &[f64], indices: impl Iterator<Item = usize>) -> Option<usize> {
    indices.fold(None, |best: Option<usize>, i| match best {
        Some(b) if v[b] <= v[i] => Some(b),
        _ => Some(i),
    })
}

fn grid_point(kind: Kind, thetas: &[f64], values: &[f64], i: usize) -> Extremum {
    Extremum {
        kind,
        location: thetas[i],
        value: values[i],
    }
}

/// The largest local maximum on each side of `pi/2`.
fn hemisphere_maxima(thetas: &[f64], values: &[f64]) -> (Option<usize>, Option<usize>) {
    let n = thetas.len();
    let north = local_max_in(values, (0..n).filter(|&i| thetas[i] <= FRAC_PI_2));
    let south = local_max_in(values, (0..n).filter(|&i| thetas[i] >= FRAC_PI_2));
    (north, south)
}

fn coherence_pure(spec: &SweepSpec) -> Result<(Table, Vec<Curve>)> {
    let thetas = spec.theta.points();
    let cfg = spec.nc_settings().config(0.5);
    let rows = ordered(&thetas, |&theta| {
        let rho = BlochState::pure(theta)?.density();
        let nc = nc_coherence(&rho, &cfg)?;
        let conventional = rel_ent_coherence(&rho)?.value;
        Ok([theta, nc.value, conventional, nc.argmax_p])
    })?;
    let nc: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let conventional: Vec<f64> = rows.iter().map(|r| r[2]).collect();

    let mut extrema = Vec::new();
    let (north, south) = hemisphere_maxima(&thetas, &nc);
    extrema.extend(north.map(|i| grid_point(Kind::Max, &thetas, &nc, i)));
    extrema.extend(south.map(|i| grid_point(Kind::Max, &thetas, &nc, i)));
    if let (Some(a), Some(b)) = (north, south) {
        if b > a + 1 {
            let i = argmin_in(&nc, a + 1..b).expect("non-empty range");
            extrema.push(grid_point(Kind::Min, &thetas, &nc, i));
        }
    }
    let mut curves = vec![Curve::new("c_nc", extrema)];
    let peak = local_max_in(&conventional, 0..thetas.len());
    curves.push(Curve::new(
        "c_rel_ent",
        peak.map(|i| grid_point(Kind::Max, &thetas, &conventional, i))
            .into_iter()
            .collect(),
    ));

    let table = Table {
        columns: vec!["theta_rad", "c_nc_bits", "c_rel_ent_bits", "argmax_p"],
        rows: rows
            .iter()
            .map(|r| r.iter().map(|&x| Cell::Real(x)).collect())
            .collect(),
    };
    Ok((table, curves))
}

fn coherence_mixed(spec: &SweepSpec) -> Result<(Table, Vec<Curve>)> {
    let thetas = spec.theta.points();
    let rs = spec.r_values();
    let cfg = spec.nc_settings().config(0.5);
    let pairs: Vec<(f64, f64)> = rs.iter().flat_map(|&r| thetas.iter().map(move |&t| (r, t))).collect();
    let rows = ordered(&pairs, |&(r, theta)| {
        let nc = nc_coherence(&BlochState::mixed(r, theta)?.density(), &cfg)?;
        Ok([r, theta, nc.value, nc.argmax_p])
    })?;
    let equator = ordered(&rs, |&r| {
        Ok(nc_coherence(&BlochState::mixed(r, FRAC_PI_2)?.density(), &cfg)?.value)
    })?;

    let curves = rs
        .iter()
        .zip(rows.chunks(thetas.len()))
        .zip(&equator)
        .map(|((r, block), &at_equator)| {
            let values: Vec<f64> = block.iter().map(|row| row[2]).collect();
            let i = local_max_in(&values, 0..values.len()).expect("a global maximum is a local one");
            let mut curve = Curve::new(format!("r={r}"), vec![grid_point(Kind::Max, &thetas, &values, i)]);
            curve.dip_depth = Some(values[i] - at_equator);
            curve
        })
        .collect();
    let table = Table {
        columns: vec!["r", "theta_rad", "c_nc_bits", "argmax_p"],
        rows: rows
            .iter()
            .map(|r| r.iter().map(|&x| Cell::Real(x)).collect())
            .collect(),
    };
    Ok((table, curves))
}

fn coherence_orders(spec: &SweepSpec) -> Result<(Table, Vec<Curve>)> {
    let thetas = spec.theta.points();
    let settings = spec.nc_settings();
    let pairs: Vec<(usize, f64)> = (0..spec.orders.len())
        .flat_map(|k| thetas.iter().map(move |&t| (k, t)))
        .collect();
    let rows = ordered(&pairs, |&(k, theta)| {
        let alpha = spec.orders[k].alpha();
        let nc = nc_coherence(&BlochState::pure(theta)?.density(), &settings.config(alpha))?;
        Ok([alpha, theta, nc.value])
    })?;
    let curves = spec
        .orders
        .iter()
        .zip(rows.chunks(thetas.len()))
        .map(|(order, block)| {
            let values: Vec<f64> = block.iter().map(|row| row[2]).collect();
            let (north, south) = hemisphere_maxima(&thetas, &values);
            let extrema = [north, south]
                .into_iter()
                .flatten()
                .map(|i| grid_point(Kind::Max, &thetas, &values, i))
                .collect();
            Curve::new(format!("n={order}"), extrema)
        })
        .collect();
    let table = Table {
        columns: vec!["alpha", "theta_rad", "c_nc_bits"],
        rows: rows
            .iter()
            .map(|r| r.iter().map(|&x| Cell::Real(x)).collect())
            .collect(),
    };
    Ok((table, curves))
}

type Registers = Vec<(u32, f64)>;

/// Rows `(m, delta, theta, value)` and the `(m, delta)` pairs in use.
fn qpea_rows(spec: &SweepSpec, derivative: bool) -> Result<(Registers, Vec<Vec<Cell>>)> {
    let thetas = spec.theta.points();
    let registers = spec
        .m_list
        .iter()
        .map(|&m| Ok((m, spec.delta_for(m)?)))
        .collect::<Result<Vec<_>>>()?;
    let cases: Vec<(u32, f64, f64)> = registers
        .iter()
        .flat_map(|&(m, d)| thetas.iter().map(move |&t| (m, d, t)))
        .collect();
    let rows = ordered(&cases, |&(m, delta, theta)| {
        let q = QpeaParams::new(m, theta, delta, 0)?;
        let value = if derivative {
            success_prob_derivative(&q, DERIVATIVE_STEP)?
        } else {
            success_prob_product(&q)
        };
        Ok(vec![
            Cell::Int(u64::from(m)),
            Cell::Real(delta),
            Cell::Real(theta),
            Cell::Real(value),
        ])
    })?;
    Ok((registers, rows))
}

fn qpea_sweep(spec: &SweepSpec) -> Result<(Table, Vec<Curve>)> {
    let (registers, rows) = qpea_rows(spec, false)?;
    let (lo, hi) = (spec.theta.start, spec.theta.stop);
    let curves = registers
        .iter()
        .map(|&(m, delta)| {
            let prob = |theta: f64| -> Result<f64> { Ok(success_prob_product(&QpeaParams::new(m, theta, delta, 0)?)) };
            let top = theta_argmax_on(m, delta, lo, hi, THETA_GRID_POINTS)?;
            let bottom = theta_argmin_on(m, delta, lo, hi, THETA_GRID_POINTS)?;
            Ok(Curve::new(
                format!("m={m}"),
                vec![
                    Extremum {
                        kind: Kind::Max,
                        location: top,
                        value: prob(top)?,
                    },
                    Extremum {
                        kind: Kind::Min,
                        location: bottom,
                        value: prob(bottom)?,
                    },
                ],
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let table = Table {
        columns: vec!["m", "delta", "theta_rad", "p_a"],
        rows,
    };
    Ok((table, curves))
}

fn qpea_derivative(spec: &SweepSpec) -> Result<(Table, Vec<Curve>)> {
    let (registers, rows) = qpea_rows(spec, true)?;
    let (lo, hi) = (spec.theta.start, spec.theta.stop);
    let curves = registers
        .iter()
        .map(|&(m, delta)| {
            let at = derivative_argmax_on(m, delta, lo, hi)?;
            let slope = success_prob_derivative(&QpeaParams::new(m, at, delta, 0)?, DERIVATIVE_STEP)?;
            Ok(Curve::new(
                format!("m={m}"),
                vec![Extremum {
                    kind: Kind::DerivativeMax,
                    location: at,
                    value: slope,
                }],
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let table = Table {
        columns: vec!["m", "delta", "theta_rad", "dp_dtheta"],
        rows,
    };
    Ok((table, curves))
}
