//! Line and surface scans of a single panel's field, comparing the exact
//! kernel with lumped point sources and direct quadrature.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::geometry::Vec3;
use crate::kernel::{self, EvalPoint, InfluenceValues, KernelError, PanelExtent};
use crate::oracle::{
    force_quadrature, normalized_error, point_source_influence, potential_quadrature, ErrorValue, OracleError,
    PointSourceGrid, QuadratureSpec,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("a scan needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("scan start and end coincide")]
    DegenerateLine,
    #[error("scan coordinates must be finite")]
    NonFinite,
    #[error("no methods requested")]
    NoMethods,
    #[error("unknown method `{0}` (expected exact, quadrature or point_source:<m>)")]
    UnknownMethod(String),
    #[error("grid extent must be non-empty")]
    InvalidGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ScanMethod {
    Exact,
    PointSource(PointSourceGrid),
    Quadrature,
}

impl fmt::Display for ScanMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanMethod::Exact => f.write_str("exact"),
            ScanMethod::PointSource(g) => write!(f, "point_source:{}", g.per_side()),
            ScanMethod::Quadrature => f.write_str("quadrature"),
        }
    }
}

impl FromStr for ScanMethod {
    type Err = ScanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || ScanError::UnknownMethod(s.to_string());
        match s.trim() {
            "exact" => Ok(ScanMethod::Exact),
            "quadrature" => Ok(ScanMethod::Quadrature),
            other => {
                let m = other.strip_prefix("point_source:").ok_or_else(unknown)?;
                let m: usize = m.parse().map_err(|_| unknown())?;
                PointSourceGrid::new(m).map(ScanMethod::PointSource).map_err(|_| unknown())
            }
        }
    }
}

impl TryFrom<String> for ScanMethod {
    type Error = ScanError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<ScanMethod> for String {
    fn from(m: ScanMethod) -> String {
        m.to_string()
    }
}

/// Evenly spaced samples on the segment `start → end`, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScanSpec")]
pub struct ScanSpec {
    start: Vec3,
    end: Vec3,
    samples: usize,
    methods: Vec<ScanMethod>,
}

#[derive(Deserialize)]
struct RawScanSpec {
    start: Vec3,
    end: Vec3,
    samples: usize,
    methods: Vec<ScanMethod>,
}

impl TryFrom<RawScanSpec> for ScanSpec {
    type Error = ScanError;
    fn try_from(r: RawScanSpec) -> Result<Self, Self::Error> {
        ScanSpec::new(r.start, r.end, r.samples, r.methods)
    }
}

impl ScanSpec {
    pub fn new(start: Vec3, end: Vec3, samples: usize, methods: Vec<ScanMethod>) -> Result<Self, ScanError> {
        if start.iter().chain(&end).any(|v| !v.is_finite()) {
            return Err(ScanError::NonFinite);
        }
        if start == end {
            return Err(ScanError::DegenerateLine);
        }
        if samples < 2 {
            return Err(ScanError::TooFewSamples(samples));
        }
        if methods.is_empty() {
            return Err(ScanError::NoMethods);
        }
        Ok(ScanSpec { start, end, samples, methods })
    }

    /// The diagonal from `(-1.5,-1.5,-1.5)` to `(1.5,1.5,1.5)` through the unit plate.
    pub fn diagonal(samples: usize, methods: Vec<ScanMethod>) -> Result<Self, ScanError> {
        ScanSpec::new([-1.5; 3], [1.5; 3], samples, methods)
    }

    pub fn start(&self) -> Vec3 {
        self.start
    }

    pub fn end(&self) -> Vec3 {
        self.end
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn methods(&self) -> &[ScanMethod] {
        &self.methods
    }

    pub fn length(&self) -> f64 {
        (0..3).map(|k| (self.end[k] - self.start[k]).powi(2)).sum::<f64>().sqrt()
    }

    /// Sample `i` as `start + t (end - start)` with `t = i / (samples - 1)`.
    pub fn point(&self, i: usize) -> Vec3 {
        let t = i as f64 / (self.samples - 1) as f64;
        let mut p = [0.0; 3];
        for k in 0..3 {
            p[k] = self.start[k] + t * (self.end[k] - self.start[k]);
        }
        p
    }

    pub fn points(&self) -> Vec<Vec3> {
        (0..self.samples).map(|i| self.point(i)).collect()
    }
}

/// A rectangular grid in a plane of constant `y`, rows over `z` then `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGridSpec {
    pub y: f64,
    pub x_range: [f64; 2],
    pub z_range: [f64; 2],
    pub nx: usize,
    pub nz: usize,
    pub methods: Vec<ScanMethod>,
}

impl SurfaceGridSpec {
    pub fn points(&self) -> Result<Vec<Vec3>, ScanError> {
        let vals = [self.y, self.x_range[0], self.x_range[1], self.z_range[0], self.z_range[1]];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(ScanError::NonFinite);
        }
        if self.nx < 2 || self.nz < 2 {
            return Err(ScanError::TooFewSamples(self.nx.min(self.nz)));
        }
        if self.x_range[1] <= self.x_range[0] || self.z_range[1] <= self.z_range[0] {
            return Err(ScanError::InvalidGrid);
        }
        if self.methods.is_empty() {
            return Err(ScanError::NoMethods);
        }
        let lerp = |r: [f64; 2], i: usize, n: usize| r[0] + (i as f64 / (n - 1) as f64) * (r[1] - r[0]);
        let mut out = Vec::with_capacity(self.nx * self.nz);
        for j in 0..self.nz {
            let z = lerp(self.z_range, j, self.nz);
            for i in 0..self.nx {
                out.push([lerp(self.x_range, i, self.nx), self.y, z]);
            }
        }
        Ok(out)
    }
}

/// Why a row carries no values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowStatus {
    Ok,
    EdgeSingularity,
    CoincidentSource,
    OnSurface,
    QuadratureFailed,
}

impl RowStatus {
    pub fn tag(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::EdgeSingularity => "edge_singularity",
            RowStatus::CoincidentSource => "coincident_source",
            RowStatus::OnSurface => "on_surface",
            RowStatus::QuadratureFailed => "quadrature_failed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub point: Vec3,
    pub method: ScanMethod,
    pub values: Option<InfluenceValues>,
    /// Potential error against the exact kernel.
    pub err_phi: Option<ErrorValue>,
    /// Normal-force error against the exact kernel.
    pub err_f: Option<ErrorValue>,
    /// The exact reference at this point was perturbed off an edge line or the panel plane.
    pub perturbed: bool,
    pub status: RowStatus,
}

/// Column order of [`write_csv`].
pub const CSV_HEADER: &str = "x,y,z,method,phi,fx,fy,fz,err_phi,err_f,err_absolute,perturbed,status";

/// Scan driver for one panel in its own frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Scanner {
    pub panel: PanelExtent,
    /// Fixed quadrature settings; by default chosen per point from its distance to the panel.
    pub quadrature: Option<QuadratureSpec>,
}

impl Default for Scanner {
    fn default() -> Self {
        Scanner { panel: PanelExtent::unit(), quadrature: None }
    }
}

impl Scanner {
    pub fn new(panel: PanelExtent) -> Self {
        Scanner { panel, quadrature: None }
    }

    pub fn line(&self, spec: &ScanSpec) -> Vec<ScanRow> {
        self.run(&spec.points(), spec.methods())
    }

    pub fn grid(&self, spec: &SurfaceGridSpec) -> Result<Vec<ScanRow>, ScanError> {
        Ok(self.run(&spec.points()?, &spec.methods))
    }

    /// Rows ordered by point, then by method as listed.
    pub fn run(&self, points: &[Vec3], methods: &[ScanMethod]) -> Vec<ScanRow> {
        #[cfg(feature = "parallel")]
        let per_point: Vec<Vec<ScanRow>> = points.par_iter().map(|&p| self.rows_at(p, methods)).collect();
        #[cfg(not(feature = "parallel"))]
        let per_point: Vec<Vec<ScanRow>> = points.iter().map(|&p| self.rows_at(p, methods)).collect();
        per_point.into_iter().flatten().collect()
    }

    fn rows_at(&self, point: Vec3, methods: &[ScanMethod]) -> Vec<ScanRow> {
        let p = EvalPoint::from(point);
        let exact = kernel::evaluate(&self.panel, p);
        let perturbed = exact.as_ref().map(|e| e.perturbation.any() || e.on_surface).unwrap_or(false);
        let reference = exact.as_ref().ok().map(|e| e.values);
        methods
            .iter()
            .map(|&method| {
                let result = match method {
                    ScanMethod::Exact => exact.as_ref().map(|e| e.values).map_err(status_of_kernel),
                    ScanMethod::PointSource(g) => point_source_influence(&self.panel, g, p).map_err(status_of_oracle),
                    ScanMethod::Quadrature => self.quadrature_at(p),
                };
                let values = result.ok();
                let status = result.err().unwrap_or(RowStatus::Ok);
                let (err_phi, err_f) = match (values, reference) {
                    (Some(v), Some(r)) => (Some(normalized_error(v.phi, r.phi)), Some(normalized_error(v.fy, r.fy))),
                    _ => (None, None),
                };
                ScanRow { point, method, values, err_phi, err_f, perturbed, status }
            })
            .collect()
    }

    fn quadrature_at(&self, p: EvalPoint) -> Result<InfluenceValues, RowStatus> {
        let spec = self.quadrature.unwrap_or_else(|| QuadratureSpec::for_distance(self.panel.distance_to(p)));
        let phi = potential_quadrature(&self.panel, p, &spec).map_err(status_of_oracle)?;
        let f = force_quadrature(&self.panel, p, &spec).map_err(status_of_oracle)?;
        Ok(InfluenceValues { phi: phi.value, fx: f.value[0], fy: f.value[1], fz: f.value[2] })
    }
}

fn status_of_kernel(e: &KernelError) -> RowStatus {
    match e {
        KernelError::OnSurfaceAmbiguity { .. } => RowStatus::OnSurface,
        _ => RowStatus::EdgeSingularity,
    }
}

fn status_of_oracle(e: OracleError) -> RowStatus {
    match e {
        OracleError::CoincidentSource { .. } => RowStatus::CoincidentSource,
        OracleError::OnSurface => RowStatus::OnSurface,
        _ => RowStatus::QuadratureFailed,
    }
}

/// Writes rows as CSV with [`CSV_HEADER`]. Floats use the shortest
/// representation that round-trips; fields without a value are left empty.
pub fn write_csv<W: Write>(mut out: W, rows: &[ScanRow]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let [x, y, z] = r.point;
        write!(out, "{x:?},{y:?},{z:?},{}", r.method)?;
        match r.values {
            Some(v) => write!(out, ",{:?},{:?},{:?},{:?}", v.phi, v.fx, v.fy, v.fz)?,
            None => write!(out, ",,,,")?,
        }
        match (r.err_phi, r.err_f) {
            (Some(a), Some(b)) => write!(out, ",{:?},{:?},{}", a.value, b.value, u8::from(a.absolute || b.absolute))?,
            _ => write!(out, ",,,")?,
        }
        writeln!(out, ",{},{}", u8::from(r.perturbed), r.status.tag())?;
    }
    Ok(())
}

pub fn to_csv_string(rows: &[ScanRow]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}
