//! JSON run configuration. Every field is optional; command-line flags take
//! precedence over anything set here.

use std::path::{Path, PathBuf};

use panelfield::geometry::ShapeTag;
use panelfield::oracle::NearFieldMode;
use panelfield::scan::ScanMethod;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub threads: Option<usize>,
    /// `[x1, z1, x2, z2]` of the scanned panel.
    pub panel: Option<[f64; 4]>,
    pub quadrature: Option<QuadratureOverrides>,
    #[serde(default)]
    pub eval: EvalConfig,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub capacitance: CapacitanceConfig,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOverrides {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub near_field_mode: Option<NearFieldMode>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalConfig {
    pub point: Option<[f64; 3]>,
    pub method: Option<ScanMethod>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub start: Option<[f64; 3]>,
    pub end: Option<[f64; 3]>,
    pub samples: Option<usize>,
    pub methods: Option<Vec<ScanMethod>>,
    pub grid: Option<GridConfig>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub y: Option<f64>,
    pub x_range: Option<[f64; 2]>,
    pub z_range: Option<[f64; 2]>,
    pub nx: Option<usize>,
    pub nz: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacitanceConfig {
    pub shape: Option<ShapeTag>,
    /// Refinement levels, strictly increasing; the last one is exported.
    pub n: Option<Vec<usize>>,
    /// Centre-to-edge cell ratio; 1 means uniform.
    pub grading: Option<f64>,
    pub summary: Option<PathBuf>,
    pub densities: Option<PathBuf>,
    pub table: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("invalid config {}: {e}", path.display())))
    }
}
