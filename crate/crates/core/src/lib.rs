//! Exact influence of uniformly charged rectangular panels and a collocation
//! boundary-element solver built on it.

pub mod export;
pub mod geometry;
pub mod kernel;
pub mod linalg;
pub mod numeric;
pub mod oracle;
pub mod scan;
pub mod solver;

pub use kernel::{
    classify_footprint, force_exact, influence_exact, potential_centroid, potential_exact, EvalPoint,
    Evaluation, FootprintClass, InfluenceValues, KernelError, KernelIntermediates, PanelExtent,
};
