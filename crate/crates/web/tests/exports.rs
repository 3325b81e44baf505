use panelfield_web::{diagonal_scan, evaluate_point, solve_plate, MAX_PLATE_DIVISIONS};

const UNIT: [f64; 4] = [-0.5, -0.5, 0.5, 0.5];

#[test]
fn centroid_of_the_unit_panel() {
    let [phi, fx, fy, fz, flags] = evaluate_point(UNIT, [0.0; 3]).unwrap();
    assert!((phi - 4.0 * 2f64.sqrt().ln_1p()).abs() < 1e-12);
    assert_eq!([fx, fy, fz], [0.0; 3]);
    assert_eq!(flags as u32 & 8, 8);
}

#[test]
fn plain_points_carry_no_flags() {
    let v = evaluate_point(UNIT, [0.2, 0.7, -0.1]).unwrap();
    assert_eq!(v[4], 0.0);
    assert!(v[2] > 0.0);
}

#[test]
fn bad_inputs_are_reported() {
    assert!(evaluate_point([0.5, 0.0, -0.5, 1.0], [0.0, 1.0, 0.0]).is_err());
    assert!(evaluate_point(UNIT, [0.5, 0.0, 0.5]).is_err());
    assert!(diagonal_scan(1, 4).is_err());
    assert!(diagonal_scan(10, 0).is_err());
    assert!(solve_plate(0, 1.0).is_err());
    assert!(solve_plate(MAX_PLATE_DIVISIONS + 1, 1.0).is_err());
    assert!(solve_plate(4, 0.0).is_err());
}

#[test]
fn diagonal_scan_rows() {
    let rows = diagonal_scan(31, 10).unwrap();
    assert_eq!(rows.len(), 31 * 5);
    assert_eq!(rows[0], 0.0);
    assert!((rows[30 * 5] - 3.0 * 3f64.sqrt()).abs() < 1e-12);
    let far = &rows[..5];
    assert!((far[1] - far[3]).abs() < 1e-3 * far[1]);
    assert!(rows.iter().skip(1).step_by(5).all(|v| v.is_finite()));
}

#[test]
fn coincident_point_source_is_nan() {
    let rows = diagonal_scan(3, 1).unwrap();
    let mid = &rows[5..10];
    assert!(mid[1].is_finite());
    assert!(mid[3].is_nan() && mid[4].is_nan());
}

#[test]
fn plate_solution_cells() {
    let s = solve_plate(1, 1.0).unwrap();
    assert!((s.capacitance() - 0.25 / 2f64.sqrt().ln_1p()).abs() < 1e-12);
    assert_eq!(s.cells(), vec![-0.5, -0.5, 0.5, 0.5, s.capacitance()]);

    let s = solve_plate(8, 4.0).unwrap();
    let cells = s.cells();
    assert_eq!(cells.len(), 64 * 5);
    let charge: f64 = cells.chunks(5).map(|c| (c[2] - c[0]) * (c[3] - c[1]) * c[4]).sum();
    assert!((charge - s.capacitance()).abs() < 1e-12);
    assert!(s.residual() < 1e-10);
    assert!(s.capacitance() > 0.355 && s.capacitance() < 0.3668);
}
