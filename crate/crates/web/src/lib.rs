//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export has a plain Rust counterpart returning `Result<_, String>` so
//! the logic can be tested natively; the `#[wasm_bindgen]` wrappers only turn
//! errors into JS exceptions.

use panelfield::geometry::{mesh_plate, GradingSpec};
use panelfield::kernel::{self, EvalPoint, PanelExtent};
use panelfield::oracle::{point_source_influence, PointSourceGrid};
use panelfield::solver::solve_unit_potential;
use wasm_bindgen::prelude::*;

/// Largest plate division accepted by [`solve_plate`]; the dense solve is O(n⁶).
pub const MAX_PLATE_DIVISIONS: usize = 24;
/// Largest point-source grid accepted by [`diagonal_scan`].
pub const MAX_SOURCE_GRID: usize = 200;

/// `[phi, fx, fy, fz, flags]` for the panel `[x1, x2] × [z1, z2]` at `(x, y, z)`.
///
/// `flags` is a bit set: 1 and 4 when x or z sat on an edge line and was
/// averaged, 2 when y was snapped onto the panel plane, 8 when the point lies
/// on the panel.
pub fn evaluate_point(panel: [f64; 4], point: [f64; 3]) -> Result<[f64; 5], String> {
    let extent = PanelExtent::new(panel[0], panel[1], panel[2], panel[3]).map_err(|e| e.to_string())?;
    let e = kernel::evaluate(&extent, EvalPoint::from(point)).map_err(|e| e.to_string())?;
    let flags = [e.perturbation.x, e.perturbation.y, e.perturbation.z, e.on_surface]
        .iter()
        .enumerate()
        .fold(0u32, |acc, (bit, &set)| acc | (u32::from(set) << bit));
    let v = e.values;
    Ok([v.phi, v.fx, v.fy, v.fz, f64::from(flags)])
}

/// Unit panel sampled along the diagonal from `(-1.5, -1.5, -1.5)` to `(1.5, 1.5, 1.5)`.
///
/// Returns `samples` rows of `[s, phi_exact, fy_exact, phi_ps, fy_ps]` flattened,
/// where `s` is arc length and `ps` an `m × m` point-source grid. Values that
/// cannot be computed at a sample are `NaN`.
pub fn diagonal_scan(samples: usize, m: usize) -> Result<Vec<f64>, String> {
    if samples < 2 {
        return Err("need at least two samples".into());
    }
    if m > MAX_SOURCE_GRID {
        return Err(format!("point-source grid is limited to {MAX_SOURCE_GRID}"));
    }
    let grid = PointSourceGrid::new(m).map_err(|e| e.to_string())?;
    let panel = PanelExtent::unit();
    let length = 3.0 * 3f64.sqrt();
    let mut out = Vec::with_capacity(samples * 5);
    for i in 0..samples {
        let t = i as f64 / (samples - 1) as f64;
        let c = -1.5 + 3.0 * t;
        let p = EvalPoint::new(c, c, c);
        let exact = kernel::evaluate(&panel, p).map(|e| e.values).ok();
        let approx = point_source_influence(&panel, grid, p).ok();
        out.push(t * length);
        for v in [exact, approx] {
            out.push(v.map_or(f64::NAN, |v| v.phi));
            out.push(v.map_or(f64::NAN, |v| v.fy));
        }
    }
    Ok(out)
}

/// Unit-potential solution on the unit square plate.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct PlateSolution {
    capacitance: f64,
    residual: f64,
    cells: Vec<f64>,
}

#[wasm_bindgen]
impl PlateSolution {
    #[wasm_bindgen(getter)]
    pub fn capacitance(&self) -> f64 {
        self.capacitance
    }

    /// Largest residual of the dense solve.
    #[wasm_bindgen(getter)]
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// `[x0, z0, x1, z1, density]` per panel, flattened.
    pub fn cells(&self) -> Vec<f64> {
        self.cells.clone()
    }
}

/// Solves the plate with `n × n` panels graded geometrically by `ratio` (1 is uniform).
pub fn solve_plate(n: usize, ratio: f64) -> Result<PlateSolution, String> {
    if n == 0 || n > MAX_PLATE_DIVISIONS {
        return Err(format!("divisions must be between 1 and {MAX_PLATE_DIVISIONS}"));
    }
    let grading = GradingSpec::geometric(ratio).map_err(|e| e.to_string())?;
    let mesh = mesh_plate(n, n, grading).map_err(|e| e.to_string())?;
    let solution = solve_unit_potential(&mesh).map_err(|e| e.to_string())?;
    let mut cells = Vec::with_capacity(mesh.len() * 5);
    for (panel, sigma) in mesh.panels.iter().zip(&solution.densities) {
        let e = panel.extent;
        cells.extend([e.x1(), e.z1(), e.x2(), e.z2(), *sigma]);
    }
    Ok(PlateSolution { capacitance: solution.capacitance, residual: solution.solve_residual, cells })
}

#[wasm_bindgen]
pub fn evaluate(x1: f64, z1: f64, x2: f64, z2: f64, x: f64, y: f64, z: f64) -> Result<Vec<f64>, JsError> {
    evaluate_point([x1, z1, x2, z2], [x, y, z]).map(Vec::from).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = diagonalScan)]
pub fn diagonal_scan_js(samples: usize, m: usize) -> Result<Vec<f64>, JsError> {
    diagonal_scan(samples, m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = solvePlate)]
pub fn solve_plate_js(n: usize, ratio: f64) -> Result<PlateSolution, JsError> {
    solve_plate(n, ratio).map_err(|e| JsError::new(&e))
}
