//! Panels placed in global space by rigid frames, and plate/cube meshes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{EvalPoint, KernelError, PanelExtent};

pub type Vec3 = [f64; 3];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid grading ratio {0}: must be finite and at least 1")]
    InvalidGrading(f64),
    #[error("mesh needs at least one cell per side")]
    InvalidCount,
    #[error("frame basis is not orthonormal and right-handed")]
    InvalidFrame,
    #[error("collocation offset ({0}, {1}) is not strictly inside the panel")]
    InvalidCollocation(f64, f64),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Rigid placement of a panel's local axes; `basis[1]` is the panel normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    origin: Vec3,
    basis: [Vec3; 3],
}

impl Frame {
    pub fn new(origin: Vec3, basis: [Vec3; 3]) -> Result<Self, GeometryError> {
        const TOL: f64 = 1e-14;
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { 0.0 };
                if (dot(basis[i], basis[j]) - expected).abs() > TOL {
                    return Err(GeometryError::InvalidFrame);
                }
            }
        }
        let z = cross(basis[0], basis[1]);
        if (0..3).any(|k| (z[k] - basis[2][k]).abs() > TOL) || !origin.iter().all(|v| v.is_finite()) {
            return Err(GeometryError::InvalidFrame);
        }
        Ok(Frame { origin, basis })
    }

    pub fn identity() -> Self {
        Frame { origin: [0.0; 3], basis: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Frame with local `x` along `x_axis` and local `y` along `normal`.
    pub fn from_axes(origin: Vec3, x_axis: Vec3, normal: Vec3) -> Result<Self, GeometryError> {
        Frame::new(origin, [x_axis, normal, cross(x_axis, normal)])
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    pub fn basis(&self) -> [Vec3; 3] {
        self.basis
    }

    pub fn normal(&self) -> Vec3 {
        self.basis[1]
    }

    pub fn to_local(&self, global: Vec3) -> EvalPoint {
        let d = [global[0] - self.origin[0], global[1] - self.origin[1], global[2] - self.origin[2]];
        EvalPoint::new(dot(d, self.basis[0]), dot(d, self.basis[1]), dot(d, self.basis[2]))
    }

    pub fn to_global(&self, local: EvalPoint) -> Vec3 {
        let mut g = self.origin;
        for k in 0..3 {
            g[k] += local.x * self.basis[0][k] + local.y * self.basis[1][k] + local.z * self.basis[2][k];
        }
        g
    }

    /// Rotates a vector given in local components into global components.
    pub fn vector_to_global(&self, v: Vec3) -> Vec3 {
        let mut g = [0.0; 3];
        for k in 0..3 {
            g[k] = v[0] * self.basis[0][k] + v[1] * self.basis[1][k] + v[2] * self.basis[2][k];
        }
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingMode {
    Uniform,
    Geometric,
}

/// Cell-size law along one side: `ratio` is centre-cell width over edge-cell width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradingSpec {
    mode: GradingMode,
    ratio: f64,
}

impl Default for GradingSpec {
    fn default() -> Self {
        GradingSpec::uniform()
    }
}

impl GradingSpec {
    pub fn uniform() -> Self {
        GradingSpec { mode: GradingMode::Uniform, ratio: 1.0 }
    }

    /// Geometric progression from centre to edge; a ratio of exactly 1 is uniform.
    pub fn geometric(ratio: f64) -> Result<Self, GeometryError> {
        if !(ratio.is_finite() && ratio >= 1.0) {
            return Err(GeometryError::InvalidGrading(ratio));
        }
        if ratio == 1.0 {
            return Ok(GradingSpec::uniform());
        }
        Ok(GradingSpec { mode: GradingMode::Geometric, ratio })
    }

    pub fn mode(&self) -> GradingMode {
        self.mode
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// `n + 1` cell boundaries on `[-0.5, 0.5]`, mirror-symmetric about 0.
    ///
    /// With `h` cells on each side of the centre, widths shrink by a constant
    /// factor from the centre cell(s) to the edge cell so that their ratio is
    /// `ratio`. For `n ≤ 2` every cell touches an edge and the law is uniform.
    pub fn breakpoints(&self, n: usize) -> Result<Vec<f64>, GeometryError> {
        if n == 0 {
            return Err(GeometryError::InvalidCount);
        }
        let odd = n % 2 == 1;
        let h = n / 2;
        // Widths from the centre outward on the positive half.
        let widths: Vec<f64> = match self.mode {
            GradingMode::Geometric if n > 2 => {
                let steps = if odd { h } else { h - 1 };
                let q = self.ratio.powf(-1.0 / steps as f64);
                let first = if odd { 1 } else { 0 };
                (first..first + h).map(|k| q.powi(k as i32)).collect()
            }
            _ => vec![1.0; h],
        };
        let centre = if odd { 0.5 } else { 0.0 };
        let total = centre + widths.iter().sum::<f64>();
        let scale = 0.5 / total;

        let mut positive = Vec::with_capacity(h + 1);
        let mut acc = centre;
        if odd {
            positive.push(centre * scale);
        } else {
            positive.push(0.0);
        }
        for w in &widths {
            acc += w;
            positive.push(acc * scale);
        }
        *positive.last_mut().expect("non-empty") = 0.5;

        let mut points: Vec<f64> = positive.iter().rev().map(|&v| if v == 0.0 { 0.0 } else { -v }).collect();
        // Even counts share the centre line at 0.
        let skip = if odd { 0 } else { 1 };
        points.extend(positive.iter().skip(skip));
        Ok(points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeTag {
    Plate,
    Cube,
    Custom,
}

/// Where on the panel the boundary condition is enforced, as fractions of the sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollocationOffset {
    pub fx: f64,
    pub fz: f64,
}

impl Default for CollocationOffset {
    fn default() -> Self {
        CollocationOffset { fx: 0.5, fz: 0.5 }
    }
}

impl CollocationOffset {
    pub fn new(fx: f64, fz: f64) -> Result<Self, GeometryError> {
        if fx > 0.0 && fx < 1.0 && fz > 0.0 && fz < 1.0 {
            Ok(CollocationOffset { fx, fz })
        } else {
            Err(GeometryError::InvalidCollocation(fx, fz))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    pub extent: PanelExtent,
    pub frame: Frame,
    pub area: f64,
    pub collocation: CollocationOffset,
    /// Face index within the owning mesh (0 for a plate).
    pub face: usize,
}

impl Panel {
    pub fn new(extent: PanelExtent, frame: Frame, face: usize) -> Self {
        Panel { extent, frame, area: extent.area(), collocation: CollocationOffset::default(), face }
    }

    pub fn collocation_local(&self) -> EvalPoint {
        let e = &self.extent;
        EvalPoint::new(e.x1() + self.collocation.fx * e.width(), 0.0, e.z1() + self.collocation.fz * e.height())
    }

    pub fn collocation_point(&self) -> Vec3 {
        self.frame.to_global(self.collocation_local())
    }

    pub fn centroid(&self) -> Vec3 {
        let (x, z) = self.extent.centroid();
        self.frame.to_global(EvalPoint::new(x, 0.0, z))
    }

    /// Corners in global coordinates, counter-clockwise seen from the normal side.
    pub fn corners(&self) -> [Vec3; 4] {
        let e = &self.extent;
        [(e.x1(), e.z1()), (e.x1(), e.z2()), (e.x2(), e.z2()), (e.x2(), e.z1())]
            .map(|(x, z)| self.frame.to_global(EvalPoint::new(x, 0.0, z)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub panels: Vec<Panel>,
    pub shape: ShapeTag,
    pub grading: GradingSpec,
    /// Cells per side along each face direction.
    pub divisions: (usize, usize),
}

impl Mesh {
    pub fn len(&self) -> usize {
        self.panels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.panels.is_empty()
    }

    pub fn total_area(&self) -> f64 {
        self.panels.iter().map(|p| p.area).collect::<crate::numeric::NeumaierSum>().total()
    }

    /// Moves every collocation point to the same fractional offset.
    pub fn with_collocation(mut self, offset: CollocationOffset) -> Self {
        for p in &mut self.panels {
            p.collocation = offset;
        }
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        let panels: Vec<_> = self
            .panels
            .iter()
            .enumerate()
            .map(|(i, p)| {
                serde_json::json!({
                    "index": i,
                    "face": p.face,
                    "extent": p.extent,
                    "frame": p.frame,
                    "area": p.area,
                    "corners": p.corners(),
                    "collocation": p.collocation_point(),
                })
            })
            .collect();
        serde_json::json!({
            "shape": self.shape,
            "grading": self.grading,
            "divisions": [self.divisions.0, self.divisions.1],
            "elements": self.panels.len(),
            "total_area": self.total_area(),
            "panels": panels,
        })
    }
}

fn tile_face(
    panels: &mut Vec<Panel>,
    frame: Frame,
    face: usize,
    xs: &[f64],
    zs: &[f64],
) -> Result<(), GeometryError> {
    for zw in zs.windows(2) {
        for xw in xs.windows(2) {
            let extent = PanelExtent::new(xw[0], zw[0], xw[1], zw[1])?;
            panels.push(Panel::new(extent, frame, face));
        }
    }
    Ok(())
}

/// Unit square plate on `[-0.5, 0.5]²` in the global XZ plane, normal +Y.
pub fn mesh_plate(nx: usize, nz: usize, grading: GradingSpec) -> Result<Mesh, GeometryError> {
    let xs = grading.breakpoints(nx)?;
    let zs = grading.breakpoints(nz)?;
    let mut panels = Vec::with_capacity(nx * nz);
    tile_face(&mut panels, Frame::identity(), 0, &xs, &zs)?;
    Ok(Mesh { panels, shape: ShapeTag::Plate, grading, divisions: (nx, nz) })
}

/// Outward normals of the cube faces, in mesh order.
pub const CUBE_FACES: [Vec3; 6] = [
    [-1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0],
    [0.0, -1.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0],
];

/// Unit cube `[-0.5, 0.5]³` with `n × n` panels per face and outward normals.
pub fn mesh_cube(n: usize, grading: GradingSpec) -> Result<Mesh, GeometryError> {
    let edges = grading.breakpoints(n)?;
    let mut panels = Vec::with_capacity(6 * n * n);
    for (face, normal) in CUBE_FACES.iter().enumerate() {
        let x_axis = match face / 2 {
            0 => [0.0, 0.0, 1.0],
            1 => [1.0, 0.0, 0.0],
            _ => [0.0, 1.0, 0.0],
        };
        let origin = normal.map(|c| 0.5 * c);
        let frame = Frame::from_axes(origin, x_axis, *normal)?;
        tile_face(&mut panels, frame, face, &edges, &edges)?;
    }
    Ok(Mesh { panels, shape: ShapeTag::Cube, grading, divisions: (n, n) })
}
