use serde::Serialize;

use crate::spec::SweepSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Max,
    Min,
    DerivativeMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub kind: Kind,
    pub location: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub label: String,
    pub extrema: Vec<Extremum>,
    /// `max_theta C_nc - C_nc(pi/2)`, mixed sweep only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dip_depth: Option<f64>,
}

impl Curve {
    pub fn new(label: impl Into<String>, extrema: Vec<Extremum>) -> Self {
        Self {
            label: label.into(),
            extrema,
            dip_depth: None,
        }
    }

    pub fn first(&self, kind: Kind) -> Option<&Extremum> {
        self.extrema.iter().find(|e| e.kind == kind)
    }
}

/// Field order here is the key order in the JSON file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremumReport {
    pub experiment: String,
    pub curves: Vec<Curve>,
    pub config: SweepSpec,
    pub toolkit_version: String,
    pub wall_clock_seconds: f64,
}

impl ExtremumReport {
    pub fn curve(&self, label: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.label == label)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self).map(|mut s| {
            s.push('\n');
            s
        })
    }
}
