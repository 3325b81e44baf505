//! Closed-form potential and force field of a uniformly charged rectangle.
//!
//! The panel lies in its local XZ plane with corners `(x1, z1)` and `(x2, z2)`;
//! `Y` is the signed normal offset of the evaluation point. The source density
//! is one and the kernel is the bare `1/r` (no `4πε₀`).
//!
//! The potential is a sum of four logarithmic terms and a group of conjugate
//! arctanh pairs scaled by `i|Y|/2`. Each pair `atanh(w) - atanh(conj w)` is
//! purely imaginary on the principal branch. Far from the panel the pairs
//! approach `±iπ` and would cancel catastrophically against the footprint
//! term `-2π|Y|`, so arguments with `|w| > 1` are folded through
//! `atanh(w) = atanh(1/w) + i·sgn(Im w)·π/2` and the quarter turns are summed
//! as an exact integer before scaling.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum KernelError {
    #[error("invalid panel extent ({x1}, {z1})-({x2}, {z2})")]
    InvalidExtent { x1: f64, z1: f64, x2: f64, z2: f64 },
    #[error("evaluation point is within {tolerance:e} of a panel edge (distance {distance:e})")]
    EdgeSingularity { distance: f64, tolerance: f64 },
    #[error("non-finite kernel value")]
    NonFinite,
    /// The normal force component jumps by `4π` across the panel; the tangential
    /// components are still well defined and are carried along.
    #[error("normal force is two-valued on the panel surface")]
    OnSurfaceAmbiguity { fx: f64, fz: f64 },
}

/// Rectangle `[x1, x2] × [z1, z2]` in the panel's local XZ plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExtent", into = "RawExtent")]
pub struct PanelExtent {
    x1: f64,
    z1: f64,
    x2: f64,
    z2: f64,
}

#[derive(Serialize, Deserialize)]
struct RawExtent {
    x1: f64,
    z1: f64,
    x2: f64,
    z2: f64,
}

impl TryFrom<RawExtent> for PanelExtent {
    type Error = KernelError;
    fn try_from(r: RawExtent) -> Result<Self, Self::Error> {
        PanelExtent::new(r.x1, r.z1, r.x2, r.z2)
    }
}

impl From<PanelExtent> for RawExtent {
    fn from(e: PanelExtent) -> Self {
        RawExtent { x1: e.x1, z1: e.z1, x2: e.x2, z2: e.z2 }
    }
}

impl PanelExtent {
    pub fn new(x1: f64, z1: f64, x2: f64, z2: f64) -> Result<Self, KernelError> {
        let ok = [x1, z1, x2, z2].iter().all(|v| v.is_finite())
            && x1 < x2
            && z1 < z2
            && (x2 - x1).is_finite()
            && (z2 - z1).is_finite();
        if ok {
            Ok(PanelExtent { x1, z1, x2, z2 })
        } else {
            Err(KernelError::InvalidExtent { x1, z1, x2, z2 })
        }
    }

    /// Panel of sides `a × b` centred on the local origin.
    pub fn centered(a: f64, b: f64) -> Result<Self, KernelError> {
        PanelExtent::new(-0.5 * a, -0.5 * b, 0.5 * a, 0.5 * b)
    }

    /// The unit square `[-0.5, 0.5]²`.
    pub fn unit() -> Self {
        PanelExtent { x1: -0.5, z1: -0.5, x2: 0.5, z2: 0.5 }
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }
    pub fn z1(&self) -> f64 {
        self.z1
    }
    pub fn x2(&self) -> f64 {
        self.x2
    }
    pub fn z2(&self) -> f64 {
        self.z2
    }

    /// Side along local x.
    pub fn width(&self) -> f64 {
        self.x2 - self.x1
    }

    /// Side along local z.
    pub fn height(&self) -> f64 {
        self.z2 - self.z1
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn centroid(&self) -> (f64, f64) {
        (0.5 * (self.x1 + self.x2), 0.5 * (self.z1 + self.z2))
    }

    /// Euclidean distance from `p` to the closest point of the panel.
    pub fn distance_to(&self, p: EvalPoint) -> f64 {
        let dx = (self.x1 - p.x).max(0.0).max(p.x - self.x2);
        let dz = (self.z1 - p.z).max(0.0).max(p.z - self.z2);
        (dx * dx + p.y * p.y + dz * dz).sqrt()
    }

    /// Distance from `p` to the nearest of the four edge segments.
    pub fn distance_to_edges(&self, p: EvalPoint) -> f64 {
        let dx = (self.x1 - p.x).max(0.0).max(p.x - self.x2);
        let dz = (self.z1 - p.z).max(0.0).max(p.z - self.z2);
        let y2 = p.y * p.y;
        let along_x = dx * dx + y2 + (p.z - self.z1).powi(2).min((p.z - self.z2).powi(2));
        let along_z = dz * dz + y2 + (p.x - self.x1).powi(2).min((p.x - self.x2).powi(2));
        along_x.min(along_z).sqrt()
    }
}

/// Evaluation point in panel-local coordinates; `y` is the normal offset.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EvalPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl EvalPoint {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        EvalPoint { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for EvalPoint {
    fn from(a: [f64; 3]) -> Self {
        EvalPoint::new(a[0], a[1], a[2])
    }
}

impl From<EvalPoint> for [f64; 3] {
    fn from(p: EvalPoint) -> Self {
        [p.x, p.y, p.z]
    }
}

/// Where the normal projection of a point falls relative to the panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FootprintClass {
    Inside,
    Outside,
    OnEdgeProjection,
}

/// Potential and force of a unit-density panel at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct InfluenceValues {
    pub phi: f64,
    pub fx: f64,
    pub fy: f64,
    pub fz: f64,
}

impl InfluenceValues {
    pub fn force(&self) -> [f64; 3] {
        [self.fx, self.fy, self.fz]
    }

    pub fn scaled(&self, s: f64) -> Self {
        InfluenceValues { phi: s * self.phi, fx: s * self.fx, fy: s * self.fy, fz: s * self.fz }
    }
}

/// Which coordinates sat on a degenerate value and were handled specially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Perturbation {
    /// Averaged over `x ± eps` around an edge line.
    pub x: bool,
    /// Snapped onto the panel plane, `Y = 0`.
    pub y: bool,
    /// Averaged over `z ± eps` around an edge line.
    pub z: bool,
}

impl Perturbation {
    pub fn any(&self) -> bool {
        self.x || self.y || self.z
    }
}

/// Kernel values together with how they were obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub values: InfluenceValues,
    pub perturbation: Perturbation,
    /// Offset used for perturbed coordinates.
    pub epsilon: f64,
    /// Largest imaginary part dropped when taking the real part of the arctanh groups.
    pub imag_residue: f64,
    /// The point lies on the panel itself; `values.fy` is the mean of the two one-sided limits.
    pub on_surface: bool,
}

/// Geometric quantities shared by every closed-form term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelIntermediates {
    pub d11: f64,
    pub d12: f64,
    pub d21: f64,
    pub d22: f64,
    pub r1: f64,
    pub r2: f64,
    pub i1: f64,
    pub i2: f64,
    pub s1: f64,
    pub s2: f64,
}

impl KernelIntermediates {
    pub fn new(panel: &PanelExtent, p: EvalPoint) -> Self {
        let ux1 = p.x - panel.x1;
        let ux2 = p.x - panel.x2;
        let wz1 = p.z - panel.z1;
        let wz2 = p.z - panel.z2;
        let y2 = p.y * p.y;
        let ay = p.y.abs();
        let r1 = y2 + wz1 * wz1;
        let r2 = y2 + wz2 * wz2;
        KernelIntermediates {
            d11: (ux1 * ux1 + r1).sqrt(),
            d12: (ux1 * ux1 + r2).sqrt(),
            d21: (ux2 * ux2 + r1).sqrt(),
            d22: (ux2 * ux2 + r2).sqrt(),
            r1,
            r2,
            i1: ux1 * ay,
            i2: ux2 * ay,
            s1: sign(panel.z1 - p.z),
            s2: sign(panel.z2 - p.z),
        }
    }
}

/// `sign(0) = +1`.
fn sign(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Tolerance below which a coordinate is treated as sitting on a panel edge line or plane.
pub fn geometric_tolerance(panel: &PanelExtent, p: EvalPoint) -> f64 {
    1e-12 * panel.diagonal().max(p.norm()).max(1.0)
}

pub fn classify_footprint(panel: &PanelExtent, p: EvalPoint) -> FootprintClass {
    classify_with(panel, p, geometric_tolerance(panel, p))
}

fn classify_with(panel: &PanelExtent, p: EvalPoint, eps: f64) -> FootprintClass {
    let x_in = p.x > panel.x1 + eps && p.x < panel.x2 - eps;
    let z_in = p.z > panel.z1 + eps && p.z < panel.z2 - eps;
    if x_in && z_in {
        return FootprintClass::Inside;
    }
    let x_closed = p.x >= panel.x1 - eps && p.x <= panel.x2 + eps;
    let z_closed = p.z >= panel.z1 - eps && p.z <= panel.z2 + eps;
    let on_x_line = (p.x - panel.x1).abs() <= eps || (p.x - panel.x2).abs() <= eps;
    let on_z_line = (p.z - panel.z1).abs() <= eps || (p.z - panel.z2).abs() <= eps;
    if (on_x_line && z_closed) || (on_z_line && x_closed) {
        FootprintClass::OnEdgeProjection
    } else {
        FootprintClass::Outside
    }
}

/// `ln(D - w)` with `D = sqrt(w² + rest)`, free of cancellation when `w > 0`.
fn log_gap(d: f64, w: f64, rest: f64) -> f64 {
    if w > 0.0 {
        (rest / (d + w)).ln()
    } else {
        (d - w).ln()
    }
}

/// `ln((D_a - w_a) / (D_b - w_b))` with the same cancellation-free gaps.
fn log_gap_ratio(da: f64, wa: f64, ra: f64, db: f64, wb: f64, rb: f64) -> f64 {
    let gap = |d: f64, w: f64, r: f64| if w > 0.0 { r / (d + w) } else { d - w };
    let (ga, gb) = (gap(da, wa, ra), gap(db, wb, rb));
    let q = ga / gb;
    if q.is_finite() && q > 0.0 {
        q.ln()
    } else {
        log_gap(da, wa, ra) - log_gap(db, wb, rb)
    }
}

/// `Im atanh((r + i·im) / den)`, split into whole quarter turns and a remainder.
///
/// Returns `(quarter_turns, remainder, real_residue)` where
/// `Im atanh = quarter_turns·π/2 + remainder`; `real_residue` is the real part
/// left over by `atanh(w) - atanh(conj w)`, zero up to rounding.
fn folded_im_atanh(r: f64, im: f64, den: f64) -> (i32, f64, f64) {
    let num = Complex64::new(r, im);
    let (w, turns) = if num.norm() > den {
        // |w| > 1: fold through 1/w.
        (Complex64::new(den, 0.0) / num, if im > 0.0 { 1 } else { -1 })
    } else {
        (num / den, 0)
    };
    let pair = w.atanh() - w.conj().atanh();
    (turns, 0.5 * pair.im, pair.re)
}

struct Raw {
    phi: f64,
    fx: f64,
    fy: f64,
    fz: f64,
    residue: f64,
}

/// Evaluates every closed-form term at a point that is off all degenerate lines.
fn evaluate_raw(panel: &PanelExtent, p: EvalPoint) -> Raw {
    let k = KernelIntermediates::new(panel, p);
    let ux1 = p.x - panel.x1;
    let ux2 = p.x - panel.x2;
    let wz1 = p.z - panel.z1;
    let wz2 = p.z - panel.z2;
    let y2 = p.y * p.y;
    let ay = p.y.abs();

    let lz_a = log_gap_ratio(k.d12, wz2, ux1 * ux1 + y2, k.d11, wz1, ux1 * ux1 + y2);
    let lz_b = log_gap_ratio(k.d21, wz1, ux2 * ux2 + y2, k.d22, wz2, ux2 * ux2 + y2);
    let lx_a = log_gap_ratio(k.d21, ux2, wz1 * wz1 + y2, k.d11, ux1, wz1 * wz1 + y2);
    let lx_b = log_gap_ratio(k.d12, ux1, wz2 * wz2 + y2, k.d22, ux2, wz2 * wz2 + y2);

    let logs = ux1 * lz_a + ux2 * lz_b + wz1 * lx_a + wz2 * lx_b;
    let fx = -lz_a - lz_b;
    let fz = -lx_a - lx_b;

    let c1 = wz1.abs();
    let c2 = wz2.abs();
    let (t1, m1, e1) = folded_im_atanh(k.r1, k.i1, k.d11 * c1);
    let (t2, m2, e2) = folded_im_atanh(k.r1, k.i2, k.d21 * c1);
    let (t3, m3, e3) = folded_im_atanh(k.r2, k.i2, k.d22 * c2);
    let (t4, m4, e4) = folded_im_atanh(k.r2, k.i1, k.d12 * c2);

    let s1 = k.s1 as i32;
    let s2 = k.s2 as i32;
    // Exact test: perturbed samples sit deliberately within eps of an edge line.
    let inside = p.x > panel.x1 && p.x < panel.x2 && p.z > panel.z1 && p.z < panel.z2;
    let turns = s1 * (t1 - t2) + s2 * (t3 - t4) + if inside { 4 } else { 0 };
    let remainder = k.s1 * (m1 - m2) + k.s2 * (m3 - m4);
    let real_part = k.s1 * (e1 - e2) + k.s2 * (e3 - e4);

    // Subtended solid angle; the footprint constant is folded into `turns`.
    let omega = remainder + f64::from(turns) * FRAC_PI_2;
    let phi = logs - ay * omega;
    let fy = sign(p.y) * omega;
    let residue = (0.5 * real_part.abs()) * ay.max(1.0);
    Raw { phi, fx, fy, fz, residue }
}

/// Full evaluation with edge checks and degenerate-coordinate handling.
pub fn evaluate(panel: &PanelExtent, p: EvalPoint) -> Result<Evaluation, KernelError> {
    if !p.is_finite() {
        return Err(KernelError::NonFinite);
    }
    let eps = geometric_tolerance(panel, p);
    let edge_distance = panel.distance_to_edges(p);
    if edge_distance < eps {
        return Err(KernelError::EdgeSingularity { distance: edge_distance, tolerance: eps });
    }

    let near = |v: f64, a: f64, b: f64| {
        if (v - a).abs() < eps {
            Some(a)
        } else if (v - b).abs() < eps {
            Some(b)
        } else {
            None
        }
    };
    let x_line = near(p.x, panel.x1, panel.x2);
    let z_line = near(p.z, panel.z1, panel.z2);
    let on_plane = p.y.abs() < eps;
    let perturbation = Perturbation { x: x_line.is_some(), y: on_plane, z: z_line.is_some() };

    // Symmetric ±eps samples along each degenerate in-plane coordinate. On the
    // plane itself Y is set to zero: the arctanh group carries a factor |Y| and
    // the potential has a |Y| cusp there, so nudging Y would bias it by 2π·eps.
    let samples = |line: Option<f64>, v: f64| match line {
        Some(a) => ([a - eps, a + eps], 2),
        None => ([v, v], 1),
    };
    let (xs, nx) = samples(x_line, p.x);
    let (zs, nz) = samples(z_line, p.z);
    let (xs, zs) = (&xs[..nx], &zs[..nz]);
    let y = if on_plane { 0.0 } else { p.y };

    let mut acc = InfluenceValues::default();
    let mut residue = 0.0f64;
    for &x in xs {
        for &z in zs {
            let raw = evaluate_raw(panel, EvalPoint::new(x, y, z));
            acc.phi += raw.phi;
            acc.fx += raw.fx;
            acc.fy += raw.fy;
            acc.fz += raw.fz;
            residue = residue.max(raw.residue);
        }
    }
    let mut values = acc.scaled(1.0 / (nx * nz) as f64);
    let mut on_surface = false;
    if on_plane {
        // Mean of the one-sided limits: zero both on and off the footprint.
        values.fy = 0.0;
        on_surface = classify_with(panel, p, eps) != FootprintClass::Outside;
    }

    if !(values.phi.is_finite() && values.fx.is_finite() && values.fy.is_finite() && values.fz.is_finite()) {
        return Err(KernelError::NonFinite);
    }
    Ok(Evaluation { values, perturbation, epsilon: eps, imag_residue: residue, on_surface })
}

/// Potential of a unit-density panel at `p`.
pub fn potential_exact(panel: &PanelExtent, p: EvalPoint) -> Result<f64, KernelError> {
    evaluate(panel, p).map(|e| e.values.phi)
}

/// Force `(fx, fy, fz) = -∇φ` of a unit-density panel at `p`.
pub fn force_exact(panel: &PanelExtent, p: EvalPoint) -> Result<[f64; 3], KernelError> {
    let e = evaluate(panel, p)?;
    if e.on_surface {
        return Err(KernelError::OnSurfaceAmbiguity { fx: e.values.fx, fz: e.values.fz });
    }
    Ok(e.values.force())
}

/// Potential and force together.
pub fn influence_exact(panel: &PanelExtent, p: EvalPoint) -> Result<InfluenceValues, KernelError> {
    let e = evaluate(panel, p)?;
    if e.on_surface {
        return Err(KernelError::OnSurfaceAmbiguity { fx: e.values.fx, fz: e.values.fz });
    }
    Ok(e.values)
}

/// Potential at the centroid of an `a × b` panel.
pub fn potential_centroid(a: f64, b: f64) -> f64 {
    let d = a.hypot(b);
    2.0 * (a * ((d + b) / a).ln() + b * ((d + a) / b).ln())
}

/// Normal force just above the centre of an `a × b` panel at height `y > 0`.
///
/// This is the solid angle the rectangle subtends from a point on its axis.
pub fn on_axis_normal_force(a: f64, b: f64, y: f64) -> f64 {
    4.0 * (a * b / (2.0 * y * (4.0 * y * y + a * a + b * b).sqrt())).atan()
}

/// Jump of the normal force across a uniformly charged sheet.
pub const NORMAL_FORCE_JUMP: f64 = 4.0 * PI;
