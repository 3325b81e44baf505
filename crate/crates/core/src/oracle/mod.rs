//! Brute-force references for the closed-form kernel.
//!
//! Two independent routes: nested adaptive Gauss–Kronrod quadrature of the
//! `1/r` and `r̂/r²` surface integrals, and the conventional piecewise-constant
//! approximation that lumps each sub-cell into a point source at its centroid.
//! Neither calls into [`crate::kernel`] beyond the geometry accessors.

pub mod gauss_kronrod;
mod point_source;

pub use point_source::{point_source_influence, point_sources, PointSource, PointSourceGrid};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{EvalPoint, PanelExtent};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(&'static str),
    #[error("point-source grid needs at least one subdivision per side")]
    InvalidGrid,
    #[error("evaluation point lies on the panel surface")]
    OnSurface,
    #[error("quadrature tolerance not met (estimate {estimate:?}, error {error:e})")]
    ToleranceNotMet { estimate: Vec<f64>, error: f64 },
    #[error("evaluation point coincides with point source {index}")]
    CoincidentSource { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NearFieldMode {
    /// Break the integration ranges at the projection of the point only.
    Plain,
    /// Also lay geometrically shrinking cells toward the projection.
    SubdivideTowardSingularity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Interval budget for each one-dimensional adaptive pass.
    pub max_subdivisions: usize,
    pub near_field_mode: NearFieldMode,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-11,
            abs_tol: 1e-14,
            max_subdivisions: 4000,
            near_field_mode: NearFieldMode::Plain,
        }
    }
}

/// Points closer than this use the relaxed near-surface settings.
pub const NEAR_SURFACE_DISTANCE: f64 = 1e-3;

impl QuadratureSpec {
    pub fn new(
        rel_tol: f64,
        abs_tol: f64,
        max_subdivisions: usize,
        near_field_mode: NearFieldMode,
    ) -> Result<Self, OracleError> {
        let spec = QuadratureSpec { rel_tol, abs_tol, max_subdivisions, near_field_mode };
        spec.validate()?;
        Ok(spec)
    }

    /// Settings suited to a point at `distance` from the panel.
    pub fn for_distance(distance: f64) -> Self {
        if distance < NEAR_SURFACE_DISTANCE {
            QuadratureSpec {
                rel_tol: 1e-6,
                abs_tol: 1e-12,
                near_field_mode: NearFieldMode::SubdivideTowardSingularity,
                ..Default::default()
            }
        } else {
            QuadratureSpec::default()
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(OracleError::InvalidSpec("rel_tol must be positive"));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(OracleError::InvalidSpec("abs_tol must be non-negative"));
        }
        if self.max_subdivisions < 1 {
            return Err(OracleError::InvalidSpec("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

/// Quadrature result with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate<T> {
    pub value: T,
    pub error: f64,
    /// Total number of one-dimensional cells used.
    pub subdivisions: usize,
}

/// Breakpoints for a 1-D pass over `[a, b]` whose integrand peaks at `c`
/// with width `h`.
fn knots(a: f64, b: f64, c: f64, h: f64, mode: NearFieldMode) -> Vec<f64> {
    let mut k = vec![a, b];
    let c = c.clamp(a, b);
    if c > a && c < b {
        k.push(c);
    }
    if mode == NearFieldMode::SubdivideTowardSingularity && h > 0.0 {
        let mut step = h;
        while step < b - a {
            for x in [c - step, c + step] {
                if x > a && x < b {
                    k.push(x);
                }
            }
            step *= 2.0;
        }
    }
    k.sort_by(f64::total_cmp);
    k.dedup();
    k
}

fn panel_integral<const N: usize>(
    panel: &PanelExtent,
    p: EvalPoint,
    spec: &QuadratureSpec,
    integrand: impl Fn(f64, f64, f64) -> [f64; N],
) -> Result<QuadEstimate<[f64; N]>, OracleError> {
    spec.validate()?;
    if panel.distance_to(p) == 0.0 {
        return Err(OracleError::OnSurface);
    }
    let (x1, x2, z1, z2) = (panel.x1(), panel.x2(), panel.z1(), panel.z2());
    let mode = spec.near_field_mode;
    let x_out = (x1 - p.x).max(0.0).max(p.x - x2);
    let z_knots = knots(z1, z2, p.z, x_out.hypot(p.y), mode);
    let inner_rel = 0.1 * spec.rel_tol;
    let inner_abs = 0.1 * spec.abs_tol / panel.height();

    let mut inner_ok = true;
    let mut inner_cells = 0usize;
    let outer = gauss_kronrod::integrate(
        |z: f64| {
            let dz = p.z - z;
            let x_knots = knots(x1, x2, p.x, dz.hypot(p.y), mode);
            let r = gauss_kronrod::integrate(
                |x: f64| integrand(p.x - x, p.y, dz),
                &x_knots,
                inner_rel,
                inner_abs,
                spec.max_subdivisions,
            );
            inner_ok &= r.converged;
            inner_cells += r.intervals;
            r.value
        },
        &z_knots,
        spec.rel_tol,
        spec.abs_tol,
        spec.max_subdivisions,
    );
    if !(outer.converged && inner_ok) {
        return Err(OracleError::ToleranceNotMet { estimate: outer.value.to_vec(), error: outer.error });
    }
    Ok(QuadEstimate { value: outer.value, error: outer.error, subdivisions: outer.intervals + inner_cells })
}

/// Potential of a unit-density panel by direct integration of `1/r`.
pub fn potential_quadrature(
    panel: &PanelExtent,
    p: EvalPoint,
    spec: &QuadratureSpec,
) -> Result<QuadEstimate<f64>, OracleError> {
    let r = panel_integral(panel, p, spec, |dx, dy, dz| [1.0 / (dx * dx + dy * dy + dz * dz).sqrt()])?;
    Ok(QuadEstimate { value: r.value[0], error: r.error, subdivisions: r.subdivisions })
}

/// Force of a unit-density panel by direct integration of `r̂/r²`.
pub fn force_quadrature(
    panel: &PanelExtent,
    p: EvalPoint,
    spec: &QuadratureSpec,
) -> Result<QuadEstimate<[f64; 3]>, OracleError> {
    panel_integral(panel, p, spec, |dx, dy, dz| {
        let r2 = dx * dx + dy * dy + dz * dz;
        let inv = 1.0 / (r2 * r2.sqrt());
        [dx * inv, dy * inv, dz * inv]
    })
}

/// Comparison of an approximation against a reference value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorValue {
    pub value: f64,
    /// `true` when the reference is too close to zero and `value` is absolute.
    pub absolute: bool,
}

/// References smaller than this in magnitude switch the metric to absolute error.
pub const NORMALIZED_ERROR_FLOOR: f64 = 1e-10;

/// `(approx - exact) / exact`, or `approx - exact` where `exact` is near zero.
pub fn normalized_error(approx: f64, exact: f64) -> ErrorValue {
    if exact.abs() <= NORMALIZED_ERROR_FLOOR {
        ErrorValue { value: approx - exact, absolute: true }
    } else {
        ErrorValue { value: (approx - exact) / exact, absolute: false }
    }
}
