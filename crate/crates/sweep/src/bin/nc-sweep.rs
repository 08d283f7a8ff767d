use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use ncoherence_sweep::spec::{parse_orders, Order};
use ncoherence_sweep::{run, DistanceArg, Experiment, GridRange, SweepError, SweepSpec};

/// Sweeps noncommutative coherence and non-Hadamard phase estimation
/// quantities, writing `<experiment>.csv` and `<experiment>.json`.
#[derive(Parser, Debug)]
#[command(name = "nc-sweep", version)]
struct Cli {
    #[arg(long, value_enum)]
    experiment: Experiment,

    #[arg(long)]
    theta_min: Option<f64>,
    #[arg(long)]
    theta_max: Option<f64>,
    #[arg(long)]
    theta_steps: Option<usize>,

    /// Any of the r flags replaces the default r grid by a single range.
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    r_steps: Option<usize>,

    /// Comma-separated orders n, integers or fractions like 1/3.
    #[arg(long, value_parser = parse_orders)]
    orders: Option<Vec<Order>>,

    #[arg(long, value_delimiter = ',')]
    m_list: Option<Vec<u32>>,

    /// Phase offset used for every m instead of the default schedule.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,

    #[arg(long, value_enum)]
    distance: Option<DistanceArg>,
    /// Coarse grid points over p.
    #[arg(long)]
    grid: Option<usize>,
    /// Bracket halvings after the grid.
    #[arg(long)]
    refine: Option<usize>,
    #[arg(long)]
    boundary_eps: Option<f64>,

    #[arg(long, default_value_t = 1)]
    threads: usize,

    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl Cli {
    fn into_spec(self) -> Result<SweepSpec, SweepError> {
        let mut spec = SweepSpec::defaults(self.experiment);
        let t = spec.theta;
        spec.theta = GridRange::new(
            self.theta_min.unwrap_or(t.start),
            self.theta_max.unwrap_or(t.stop),
            self.theta_steps.unwrap_or(t.count),
        );
        let coherence = spec.nc.is_some();
        let misplaced = |flag: &str| SweepError::Domain(format!("--{flag} does not apply to {}", self.experiment.id()));

        if self.r_min.is_some() || self.r_max.is_some() || self.r_steps.is_some() {
            if self.experiment != Experiment::CoherenceMixed {
                return Err(misplaced("r-*"));
            }
            let coarse = spec.r[0];
            spec.r = vec![GridRange::new(
                self.r_min.unwrap_or(coarse.start),
                self.r_max.unwrap_or(coarse.stop),
                self.r_steps.unwrap_or(coarse.count),
            )];
        }
        if let Some(orders) = self.orders {
            if self.experiment != Experiment::CoherenceOrders {
                return Err(misplaced("orders"));
            }
            spec.orders = orders;
        }
        if let Some(ms) = self.m_list {
            if coherence {
                return Err(misplaced("m-list"));
            }
            spec.m_list = ms;
        }
        if self.delta.is_some() {
            if coherence {
                return Err(misplaced("delta"));
            }
            spec.delta = self.delta;
        }
        if let Some(nc) = spec.nc.as_mut() {
            nc.distance = self.distance.unwrap_or(nc.distance);
            nc.grid = self.grid.unwrap_or(nc.grid);
            nc.refine = self.refine.unwrap_or(nc.refine);
            nc.boundary_eps = self.boundary_eps.unwrap_or(nc.boundary_eps);
        } else if self.distance.is_some() || self.grid.is_some() || self.refine.is_some() || self.boundary_eps.is_some()
        {
            return Err(misplaced("distance/--grid/--refine/--boundary-eps"));
        }
        spec.threads = self.threads;
        spec.out = self.out;
        Ok(spec)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    let outcome = cli.into_spec().and_then(|spec| {
        let output = run(&spec)?;
        let (csv, json) = output.write_to(&spec.out)?;
        eprintln!(
            "{}: {} rows in {:.2} s -> {}, {}",
            spec.experiment.id(),
            output.table.rows.len(),
            output.report.wall_clock_seconds,
            csv.display(),
            json.display()
        );
        Ok(())
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nc-sweep: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
