//! Collocation BEM with exact panel influence coefficients.
//!
//! Entry `(i, j)` of the influence matrix is the potential at collocation
//! point `i` due to unit density on panel `j`. Solving for unit potential gives
//! the panel densities; their area-weighted sum is the capacitance in the
//! `1/r`-kernel convention (multiply by `4πε₀` for SI).

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::geometry::{mesh_cube, mesh_plate, GeometryError, GradingSpec, Mesh, ShapeTag, Vec3};
use crate::kernel::{self, InfluenceValues, KernelError};
use crate::linalg::{DenseMatrix, LinalgError, LuFactorization};
use crate::numeric::NeumaierSum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("kernel failure for collocation point {row}, panel {column}: {source}")]
    Kernel { row: usize, column: usize, source: KernelError },
    #[error("field evaluation failed at panel {panel}: {source}")]
    Field { panel: usize, source: KernelError },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("boundary condition has {got} values for {expected} collocation points")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("boundary condition contains non-finite values")]
    NonFiniteBoundary,
    #[error("refinement list must be non-empty and strictly increasing")]
    InvalidRefinement,
    #[error("custom meshes have no refinement rule")]
    UnsupportedShape,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceMatrix {
    matrix: DenseMatrix,
    areas: Vec<f64>,
}

impl InfluenceMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }
}

/// Prescribed potential at each collocation point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    values: Vec<f64>,
}

impl BoundaryCondition {
    pub fn uniform(n: usize, value: f64) -> Result<Self, SolverError> {
        BoundaryCondition::from_values(vec![value; n])
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self, SolverError> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SolverError::NonFiniteBoundary);
        }
        Ok(BoundaryCondition { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub densities: Vec<f64>,
    pub capacitance: f64,
    /// `max_i |(A σ - rhs)_i|`.
    pub solve_residual: f64,
    /// One-norm condition number estimate of the influence matrix.
    pub condition_estimate: f64,
}

/// Builds the influence matrix, one row per collocation point.
pub fn assemble(mesh: &Mesh) -> Result<InfluenceMatrix, SolverError> {
    let n = mesh.len();
    let points: Vec<Vec3> = mesh.panels.iter().map(|p| p.collocation_point()).collect();
    let mut data = vec![0.0; n * n];
    let fill_row = |(i, row): (usize, &mut [f64])| -> Result<(), SolverError> {
        for (j, (entry, panel)) in row.iter_mut().zip(&mesh.panels).enumerate() {
            let local = panel.frame.to_local(points[i]);
            *entry = kernel::potential_exact(&panel.extent, local)
                .map_err(|source| SolverError::Kernel { row: i, column: j, source })?;
        }
        Ok(())
    };
    if n > 0 {
        #[cfg(feature = "parallel")]
        data.par_chunks_mut(n).enumerate().try_for_each(fill_row)?;
        #[cfg(not(feature = "parallel"))]
        data.chunks_mut(n).enumerate().try_for_each(fill_row)?;
    }
    Ok(InfluenceMatrix {
        matrix: DenseMatrix::from_rows(n, data)?,
        areas: mesh.panels.iter().map(|p| p.area).collect(),
    })
}

/// Dense LU solve of `A σ = bc`.
pub fn solve(matrix: &InfluenceMatrix, bc: &BoundaryCondition) -> Result<Solution, SolverError> {
    let n = matrix.dim();
    if bc.values.len() != n {
        return Err(SolverError::DimensionMismatch { expected: n, got: bc.values.len() });
    }
    let lu = LuFactorization::new(matrix.matrix.clone())?;
    let densities = lu.solve(&bc.values)?;
    let solve_residual = matrix
        .matrix
        .mul_vec(&densities)
        .iter()
        .zip(&bc.values)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let condition_estimate = matrix.matrix.norm_one() * lu.inverse_norm_one_estimate()?;
    let capacitance = weighted_charge(&densities, &matrix.areas);
    Ok(Solution { densities, capacitance, solve_residual, condition_estimate })
}

fn weighted_charge(densities: &[f64], areas: &[f64]) -> f64 {
    densities.iter().zip(areas).map(|(s, a)| s * a).collect::<NeumaierSum>().total()
}

/// Total charge `Σ σ_j A_j` in panel order.
pub fn capacitance(solution: &Solution, mesh: &Mesh) -> f64 {
    let areas: Vec<f64> = mesh.panels.iter().map(|p| p.area).collect();
    weighted_charge(&solution.densities, &areas)
}

/// Assembles and solves for unit potential on every panel.
pub fn solve_unit_potential(mesh: &Mesh) -> Result<Solution, SolverError> {
    let matrix = assemble(mesh)?;
    solve(&matrix, &BoundaryCondition::uniform(mesh.len(), 1.0)?)
}

/// Potential and force (global components) of the solved charge at `point`.
///
/// On a panel the normal component of that panel's own contribution is the
/// mean of its one-sided limits.
pub fn field_at(mesh: &Mesh, solution: &Solution, point: Vec3) -> Result<InfluenceValues, SolverError> {
    let mut phi = NeumaierSum::default();
    let mut f = [NeumaierSum::default(), NeumaierSum::default(), NeumaierSum::default()];
    for (j, (panel, &sigma)) in mesh.panels.iter().zip(&solution.densities).enumerate() {
        let local = panel.frame.to_local(point);
        let e = kernel::evaluate(&panel.extent, local).map_err(|source| SolverError::Field { panel: j, source })?;
        phi.add(sigma * e.values.phi);
        let g = panel.frame.vector_to_global(e.values.force());
        for k in 0..3 {
            f[k].add(sigma * g[k]);
        }
    }
    Ok(InfluenceValues { phi: phi.total(), fx: f[0].total(), fy: f[1].total(), fz: f[2].total() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub elements: usize,
    pub capacitance: f64,
    /// Relative change from the previous row.
    pub delta: Option<f64>,
    pub solve_residual: f64,
    pub condition_estimate: f64,
}

/// Mesh for a named shape at `n` cells per side.
pub fn build_mesh(shape: ShapeTag, n: usize, grading: GradingSpec) -> Result<Mesh, SolverError> {
    match shape {
        ShapeTag::Plate => Ok(mesh_plate(n, n, grading)?),
        ShapeTag::Cube => Ok(mesh_cube(n, grading)?),
        ShapeTag::Custom => Err(SolverError::UnsupportedShape),
    }
}

/// One solve per refinement level.
pub fn convergence_study(shape: ShapeTag, n_list: &[usize], grading: GradingSpec) -> Result<Vec<ConvergenceRow>, SolverError> {
    convergence_study_with(shape, n_list, grading, |_, _, _| {})
}

/// As [`convergence_study`], handing each mesh and solution to `inspect` as it completes.
pub fn convergence_study_with(
    shape: ShapeTag,
    n_list: &[usize],
    grading: GradingSpec,
    mut inspect: impl FnMut(&Mesh, &Solution, &ConvergenceRow),
) -> Result<Vec<ConvergenceRow>, SolverError> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SolverError::InvalidRefinement);
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let mesh = build_mesh(shape, n, grading)?;
        let solution = solve_unit_potential(&mesh)?;
        let delta = rows.last().map(|prev| (solution.capacitance - prev.capacitance) / prev.capacitance);
        let row = ConvergenceRow {
            n,
            elements: mesh.len(),
            capacitance: solution.capacitance,
            delta,
            solve_residual: solution.solve_residual,
            condition_estimate: solution.condition_estimate,
        };
        inspect(&mesh, &solution, &row);
        rows.push(row);
    }
    Ok(rows)
}
