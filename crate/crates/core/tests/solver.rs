use std::collections::HashMap;

use panelfield::geometry::{mesh_cube, mesh_plate, GradingSpec, Mesh, ShapeTag};
use panelfield::kernel::potential_centroid;
use panelfield::solver::{assemble, build_mesh, convergence_study, field_at, solve_unit_potential, Solution};

fn plate(n: usize, ratio: f64) -> (Mesh, Solution) {
    let mesh = mesh_plate(n, n, GradingSpec::geometric(ratio).unwrap()).unwrap();
    let sol = solve_unit_potential(&mesh).unwrap();
    (mesh, sol)
}

#[test]
fn plate_densities_have_the_square_symmetry() {
    for (n, ratio) in [(8, 1.0), (9, 4.0), (12, 4.0)] {
        let (_, sol) = plate(n, ratio);
        let s = |i: usize, j: usize| sol.densities[j * n + i];
        for j in 0..n {
            for i in 0..n {
                let v = s(i, j);
                for w in [s(n - 1 - i, j), s(i, n - 1 - j), s(j, i), s(n - 1 - j, n - 1 - i)] {
                    assert!((v - w).abs() <= 1e-10, "n={n} ({i},{j}): {v} vs {w}");
                }
            }
        }
    }
}

#[test]
fn cube_densities_have_the_octahedral_symmetry() {
    let mesh = mesh_cube(5, GradingSpec::geometric(3.0).unwrap()).unwrap();
    let sol = solve_unit_potential(&mesh).unwrap();
    // Congruent panels share the sorted absolute centroid coordinates.
    let mut classes: HashMap<[i64; 3], Vec<f64>> = HashMap::new();
    for (panel, &d) in mesh.panels.iter().zip(&sol.densities) {
        let mut c = panel.centroid().map(|v| (v.abs() * 1e9).round() as i64);
        c.sort_unstable();
        classes.entry(c).or_default().push(d);
    }
    for (class, values) in classes {
        let spread = values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
            - values.iter().fold(f64::INFINITY, |m, &v| m.min(v));
        assert!(spread <= 1e-10, "{class:?}: spread {spread:e}");
    }
}

#[test]
fn six_panel_cube_matrix_symmetry_classes() {
    let mesh = mesh_cube(1, GradingSpec::uniform()).unwrap();
    let a = assemble(&mesh).unwrap();
    let diag = potential_centroid(1.0, 1.0);
    let (mut adjacent, mut opposite) = (Vec::new(), Vec::new());
    for i in 0..6 {
        assert!((a.get(i, i) - diag).abs() <= 1e-12);
        for j in 0..6 {
            if i == j {
                continue;
            }
            // Faces are ordered -x, +x, -y, +y, -z, +z: pairs (2k, 2k+1) are opposite.
            if i / 2 == j / 2 { opposite.push(a.get(i, j)) } else { adjacent.push(a.get(i, j)) }
        }
    }
    for class in [&adjacent, &opposite] {
        assert!(class.iter().all(|&v| (v - class[0]).abs() <= 1e-13), "{class:?}");
    }
    assert!(adjacent[0] > opposite[0]);
    let sol = solve_unit_potential(&mesh).unwrap();
    assert!(sol.densities.iter().all(|&d| (d - sol.densities[0]).abs() <= 1e-14));
}

#[test]
fn uniform_plate_capacitance_increases_with_refinement() {
    let rows = convergence_study(ShapeTag::Plate, &[1, 2, 4, 8, 16, 32], GradingSpec::uniform()).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].capacitance >= w[0].capacitance - 1e-10, "{:?}", w);
        assert!(w[1].delta.unwrap() >= -1e-10);
    }
    assert!((rows[0].capacitance - 1.0 / potential_centroid(1.0, 1.0)).abs() <= 1e-12);
    assert!(rows.iter().all(|r| r.capacitance > 0.2836 && r.capacitance < 0.3667869));
}

#[test]
fn ten_by_ten_plate_is_bracketed() {
    let mesh = build_mesh(ShapeTag::Plate, 10, GradingSpec::uniform()).unwrap();
    let c = solve_unit_potential(&mesh).unwrap().capacitance;
    assert!(c > 0.2837 && c < 0.3667869, "{c}");
}

#[test]
fn charge_concentrates_at_the_edges() {
    let n = 16;
    let (_, sol) = plate(n, 4.0);
    let ring = |k: usize| {
        let mut acc = Vec::new();
        for j in 0..n {
            for i in 0..n {
                if i.min(j).min(n - 1 - i).min(n - 1 - j) == k {
                    acc.push(sol.densities[j * n + i]);
                }
            }
        }
        acc.iter().sum::<f64>() / acc.len() as f64
    };
    let means: Vec<f64> = (0..n / 2).map(ring).collect();
    assert!(means[0] > means[n / 2 - 1]);
    assert!(means.windows(2).all(|w| w[0] > w[1]), "{means:?}");
}

#[test]
fn residuals_are_small() {
    for (mesh, sol) in [
        plate(1, 1.0),
        plate(7, 2.0),
        plate(20, 4.0),
        {
            let m = mesh_cube(6, GradingSpec::geometric(4.0).unwrap()).unwrap();
            let s = solve_unit_potential(&m).unwrap();
            (m, s)
        },
    ] {
        assert!(sol.solve_residual <= 1e-10 * mesh.len() as f64, "{}", sol.solve_residual);
        assert!(sol.condition_estimate >= 1.0 - 1e-12 && sol.condition_estimate.is_finite());
    }
}

#[test]
fn far_potential_approaches_the_capacitance() {
    let (mesh, sol) = plate(16, 4.0);
    for d in [[0.0, 1.0, 0.0], [0.6, 0.0, 0.8], [0.48, 0.6, -0.64]] {
        let r = 1e3;
        let v = field_at(&mesh, &sol, [r * d[0], r * d[1], r * d[2]]).unwrap();
        assert!((v.phi * r - sol.capacitance).abs() <= 1e-3 * sol.capacitance, "{d:?}");
    }
}

/// Midpoints between neighbouring collocation points sit on a shared edge, so
/// they are sampled 1e-9 above the plate. The two outermost rings carry the
/// edge singularity of the charge, which a piecewise-constant density cannot
/// follow, and are left out.
#[test]
fn potential_between_collocation_points_is_close_to_one() {
    let n = 32;
    let (mesh, sol) = plate(n, 4.0);
    let mut worst = 0.0f64;
    for j in 2..n - 2 {
        for i in 2..n - 3 {
            let (a, b) = (mesh.panels[j * n + i].centroid(), mesh.panels[j * n + i + 1].centroid());
            let p = [0.5 * (a[0] + b[0]), 1e-9, 0.5 * (a[2] + b[2])];
            worst = worst.max((field_at(&mesh, &sol, p).unwrap().phi - 1.0).abs());
        }
    }
    assert!(worst <= 1e-3, "{worst}");
}
