use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::kernel::{EvalPoint, InfluenceValues, PanelExtent};
use crate::numeric::NeumaierSum;

/// Zeroth-order lumping of a panel into `m × m` equal point sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSourceGrid {
    m: usize,
}

impl PointSourceGrid {
    pub fn new(m: usize) -> Result<Self, OracleError> {
        if m == 0 {
            return Err(OracleError::InvalidGrid);
        }
        Ok(PointSourceGrid { m })
    }

    pub fn per_side(&self) -> usize {
        self.m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSource {
    pub x: f64,
    pub z: f64,
    pub strength: f64,
}

/// Sources at the sub-cell centroids, row-major in z then x, for unit density.
pub fn point_sources(panel: &PanelExtent, grid: PointSourceGrid) -> Vec<PointSource> {
    let m = grid.m;
    let dx = panel.width() / m as f64;
    let dz = panel.height() / m as f64;
    let strength = dx * dz;
    let mut out = Vec::with_capacity(m * m);
    for j in 0..m {
        let z = panel.z1() + (j as f64 + 0.5) * dz;
        for i in 0..m {
            let x = panel.x1() + (i as f64 + 0.5) * dx;
            out.push(PointSource { x, z, strength });
        }
    }
    out
}

/// Potential and force from the lumped sources.
pub fn point_source_influence(
    panel: &PanelExtent,
    grid: PointSourceGrid,
    p: EvalPoint,
) -> Result<InfluenceValues, OracleError> {
    let mut phi = NeumaierSum::default();
    let mut fx = NeumaierSum::default();
    let mut fy = NeumaierSum::default();
    let mut fz = NeumaierSum::default();
    for (index, s) in point_sources(panel, grid).iter().enumerate() {
        let dx = p.x - s.x;
        let dz = p.z - s.z;
        let r2 = dx * dx + p.y * p.y + dz * dz;
        if r2 == 0.0 {
            return Err(OracleError::CoincidentSource { index });
        }
        let r = r2.sqrt();
        let q = s.strength / r;
        let q3 = q / r2;
        phi.add(q);
        fx.add(q3 * dx);
        fy.add(q3 * p.y);
        fz.add(q3 * dz);
    }
    Ok(InfluenceValues { phi: phi.total(), fx: fx.total(), fy: fy.total(), fz: fz.total() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_source_is_a_monopole() {
        let grid = PointSourceGrid::new(1).unwrap();
        for y in [0.25, 1.0, 3.0] {
            let v = point_source_influence(&PanelExtent::unit(), grid, EvalPoint::new(0.0, y, 0.0)).unwrap();
            assert_eq!(v.phi, 1.0 / y);
            assert_eq!(v.fx, 0.0);
        }
    }

    #[test]
    fn strength_is_conserved() {
        let panel = PanelExtent::new(-0.3, 0.1, 0.9, 0.45).unwrap();
        for m in [1, 7, 100, 333] {
            let mut total = NeumaierSum::default();
            for s in point_sources(&panel, PointSourceGrid::new(m).unwrap()) {
                total.add(s.strength);
            }
            assert!((total.total() - panel.area()).abs() <= 1e-15, "m = {m}");
        }
    }

    #[test]
    fn coincident_source_is_an_error() {
        let grid = PointSourceGrid::new(2).unwrap();
        let r = point_source_influence(&PanelExtent::unit(), grid, EvalPoint::new(0.25, 0.0, -0.25));
        assert!(matches!(r, Err(OracleError::CoincidentSource { .. })));
        assert_eq!(PointSourceGrid::new(0), Err(OracleError::InvalidGrid));
    }
}
