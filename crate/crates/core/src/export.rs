//! Solution and convergence-table artifacts.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::geometry::{GradingMode, Mesh, ShapeTag};
use crate::solver::{ConvergenceRow, Solution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub shape: ShapeTag,
    pub n: usize,
    /// Centre-to-edge cell size ratio; 1 for uniform meshes.
    pub grading_ratio: f64,
    pub elements: usize,
    pub capacitance: f64,
    pub solve_residual: f64,
    pub condition_estimate: f64,
}

impl SolutionSummary {
    pub fn new(mesh: &Mesh, solution: &Solution) -> Self {
        SolutionSummary {
            shape: mesh.shape,
            n: mesh.divisions.0,
            grading_ratio: match mesh.grading.mode() {
                GradingMode::Uniform => 1.0,
                GradingMode::Geometric => mesh.grading.ratio(),
            },
            elements: mesh.len(),
            capacitance: solution.capacitance,
            solve_residual: solution.solve_residual,
            condition_estimate: solution.condition_estimate,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary is always serializable")
    }
}

pub const DENSITY_HEADER: &str = "index,x,y,z,area,density";

/// One row per panel: index, centroid, area, density.
pub fn write_densities_csv<W: Write>(mut out: W, mesh: &Mesh, solution: &Solution) -> io::Result<()> {
    writeln!(out, "{DENSITY_HEADER}")?;
    for (i, (panel, sigma)) in mesh.panels.iter().zip(&solution.densities).enumerate() {
        let [x, y, z] = panel.centroid();
        writeln!(out, "{i},{x:?},{y:?},{z:?},{:?},{sigma:?}", panel.area)?;
    }
    Ok(())
}

pub const CONVERGENCE_HEADER: &str = "n,elements,capacitance,delta,solve_residual,condition_estimate";

/// The first row has an empty `delta`.
pub fn write_convergence_csv<W: Write>(mut out: W, rows: &[ConvergenceRow]) -> io::Result<()> {
    writeln!(out, "{CONVERGENCE_HEADER}")?;
    for r in rows {
        let delta = r.delta.map(|d| format!("{d:?}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{:?},{delta},{:?},{:?}",
            r.n, r.elements, r.capacitance, r.solve_residual, r.condition_estimate
        )?;
    }
    Ok(())
}
