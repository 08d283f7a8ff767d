//! Parameter sweeps over the coherence and phase estimation routines, with
//! CSV plot data and JSON extremum reports.

pub mod error;
pub mod output;
pub mod report;
pub mod run;
pub mod spec;

pub use error::{Result, SweepError};
pub use output::{Cell, Table};
pub use report::{Curve, Extremum, ExtremumReport, Kind};
pub use run::{run, SweepOutput};
pub use spec::{DistanceArg, Experiment, GridRange, NcSettings, Order, SweepSpec};
