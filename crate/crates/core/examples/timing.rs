//! Times one capacitance solve.
//!
//! `cargo run --release --example timing -- plate 64 4`

use std::time::Instant;

use panelfield::geometry::{GradingSpec, ShapeTag};
use panelfield::solver::{assemble, build_mesh, solve, BoundaryCondition};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let shape = match args.first().map(String::as_str) {
        Some("cube") => ShapeTag::Cube,
        _ => ShapeTag::Plate,
    };
    let n = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(32);
    let ratio = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(4.0);

    let start = Instant::now();
    let mesh = build_mesh(shape, n, GradingSpec::geometric(ratio).expect("grading ratio >= 1")).expect("mesh");
    let matrix = assemble(&mesh).expect("assembly");
    let assembled = start.elapsed();
    let bc = BoundaryCondition::uniform(mesh.len(), 1.0).expect("boundary condition");
    let s = solve(&matrix, &bc).expect("solve");
    println!(
        "{shape:?} n={n} ratio={ratio} unknowns={} C={:.9} residual={:e} cond={:.3e} assemble={:.2}s total={:.2}s",
        mesh.len(),
        s.capacitance,
        s.solve_residual,
        s.condition_estimate,
        assembled.as_secs_f64(),
        start.elapsed().as_secs_f64()
    );
}
