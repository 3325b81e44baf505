#![allow(dead_code)]

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use panelfield::geometry::{GradingSpec, ShapeTag};
use panelfield::kernel::{
    force_exact, on_axis_normal_force, potential_centroid, potential_exact, EvalPoint, PanelExtent,
};
use panelfield::oracle::{force_quadrature, potential_quadrature, PointSourceGrid, QuadratureSpec};
use panelfield::scan::{ScanMethod, ScanSpec, Scanner};
use panelfield::solver::{build_mesh, convergence_study, solve_unit_potential, ConvergenceRow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PLATE_REFERENCE: f64 = 0.3667869;
pub const CUBE_REFERENCE: f64 = 0.6606746;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A point at least `min_distance` from `panel`, mixing mid-range and
/// near-surface placements, plus far ones (up to 20 diagonals) when `far`.
pub fn sample_point(rng: &mut ChaCha8Rng, panel: &PanelExtent, min_distance: f64, far: bool) -> EvalPoint {
    let (cx, cz) = panel.centroid();
    let scale = panel.diagonal();
    loop {
        let kind: f64 = if far { rng.gen() } else { rng.gen_range(0.0..0.8) };
        let p = if kind < 0.4 {
            EvalPoint::new(
                cx + scale * rng.gen_range(-1.5..1.5),
                scale * rng.gen_range(-1.5..1.5),
                cz + scale * rng.gen_range(-1.5..1.5),
            )
        } else if kind < 0.8 {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            EvalPoint::new(
                cx + panel.width() * rng.gen_range(-0.8..0.8),
                sign * scale * 10f64.powf(rng.gen_range(-3.0..-0.5)),
                cz + panel.height() * rng.gen_range(-0.8..0.8),
            )
        } else {
            let d = unit_vector(rng);
            let r = scale * 10f64.powf(rng.gen_range(0.3..1.3));
            EvalPoint::new(cx + r * d[0], r * d[1], cz + r * d[2])
        };
        if panel.distance_to(p) >= min_distance {
            return p;
        }
    }
}

/// Uniform in `[-2, 2]³` around the unit panel, at least `min_distance` from it.
pub fn box_point(rng: &mut ChaCha8Rng, min_distance: f64) -> EvalPoint {
    let panel = PanelExtent::unit();
    loop {
        let p = EvalPoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if panel.distance_to(p) >= min_distance {
            return p;
        }
    }
}

pub fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// `count` nearly uniform directions on the sphere (Fibonacci lattice).
pub fn fibonacci_directions(count: usize) -> Vec<[f64; 3]> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let y = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = (1.0 - y * y).sqrt();
            let t = golden * i as f64;
            [r * t.cos(), y, r * t.sin()]
        })
        .collect()
}

pub fn random_panel(rng: &mut ChaCha8Rng) -> PanelExtent {
    let x1 = rng.gen_range(-1.0..1.0);
    let z1 = rng.gen_range(-1.0..1.0);
    PanelExtent::new(x1, z1, x1 + rng.gen_range(0.1..2.0), z1 + rng.gen_range(0.1..2.0)).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[derive(Debug, Clone)]
pub struct Report {
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

fn finish(start: Instant, limit: Option<Duration>, passed: bool, detail: String) -> Report {
    let elapsed = start.elapsed();
    let in_time = limit.map_or(true, |l| elapsed <= l);
    let detail = match limit {
        Some(l) if !in_time => format!("{detail}; runtime {:.1}s exceeds {:.0}s", elapsed.as_secs_f64(), l.as_secs_f64()),
        _ => detail,
    };
    Report { passed: passed && in_time, detail, elapsed }
}

/// Potential at the centre of random `a × b` panels against the closed form.
pub fn centroid_identity(count: usize) -> Report {
    let start = Instant::now();
    let mut rng = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let (a, b) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        let panel = PanelExtent::centered(a, b).unwrap();
        let phi = potential_exact(&panel, EvalPoint::new(0.0, 0.0, 0.0)).unwrap();
        worst = worst.max(rel(phi, potential_centroid(a, b)));
    }
    finish(start, Some(Duration::from_secs(1)), worst <= 1e-12, format!("{count} panels, max rel err {worst:.2e} (tol 1e-12)"))
}

/// Where random test points come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Unit panel, points uniform in `[-2, 2]³`.
    Box,
    /// Alternating unit and random panels, points mixing near-surface and mid-range placements.
    Local,
    /// As `Local`, plus far-field points.
    Mixed,
}

fn draw(rng: &mut ChaCha8Rng, sampling: Sampling, i: usize, min_distance: f64) -> (PanelExtent, EvalPoint) {
    match sampling {
        Sampling::Box => (PanelExtent::unit(), box_point(rng, min_distance)),
        Sampling::Local | Sampling::Mixed => {
            let panel = if i % 2 == 0 { PanelExtent::unit() } else { random_panel(rng) };
            let p = sample_point(rng, &panel, min_distance, sampling == Sampling::Mixed);
            (panel, p)
        }
    }
}

/// Exact kernel against adaptive quadrature at random points.
pub fn oracle_equivalence(count: usize, seed: u64, sampling: Sampling) -> Report {
    let start = Instant::now();
    let mut rng = rng(seed);
    let spec = QuadratureSpec::default();
    let (mut worst_phi, mut worst_force, mut failures) = (0.0f64, 0.0f64, 0usize);
    for i in 0..count {
        let (panel, p) = draw(&mut rng, sampling, i, 1e-3);
        let phi = potential_exact(&panel, p).unwrap();
        let f = force_exact(&panel, p).unwrap();
        let (q_phi, q_f) = match (potential_quadrature(&panel, p, &spec), force_quadrature(&panel, p, &spec)) {
            (Ok(a), Ok(b)) => (a.value, b.value),
            _ => {
                failures += 1;
                continue;
            }
        };
        let e_phi = rel(phi, q_phi);
        worst_phi = worst_phi.max(e_phi);
        let mut ok = e_phi <= 1e-8;
        for k in 0..3 {
            let abs = (f[k] - q_f[k]).abs();
            // Measured against whichever bound is looser for this component.
            let score = (abs / q_f[k].abs() / 1e-7).min(abs / 1e-9);
            worst_force = worst_force.max(score);
            ok &= score <= 1.0;
        }
        if !ok {
            failures += 1;
        }
    }
    finish(
        start,
        Some(Duration::from_secs(120)),
        failures == 0,
        format!(
            "{count} points, {failures} failures, max phi rel err {worst_phi:.2e} (tol 1e-8), max force err {worst_force:.2e} of tolerance"
        ),
    )
}

/// Central differences of the potential against the closed-form force,
/// componentwise relative to `max(|F_k|, floor · |F|)`.
pub fn gradient_check(count: usize, seed: u64, sampling: Sampling, tol: f64) -> Report {
    let start = Instant::now();
    let mut rng = rng(seed);
    let h = 1e-6;
    let floor = 1e-3;
    let mut worst = 0.0f64;
    for i in 0..count {
        let (panel, p) = draw(&mut rng, sampling, i, 1e-2);
        let f = force_exact(&panel, p).unwrap();
        let phi = |q: EvalPoint| potential_exact(&panel, q).unwrap();
        let g = [
            (phi(EvalPoint::new(p.x + h, p.y, p.z)) - phi(EvalPoint::new(p.x - h, p.y, p.z))) / (2.0 * h),
            (phi(EvalPoint::new(p.x, p.y + h, p.z)) - phi(EvalPoint::new(p.x, p.y - h, p.z))) / (2.0 * h),
            (phi(EvalPoint::new(p.x, p.y, p.z + h)) - phi(EvalPoint::new(p.x, p.y, p.z - h))) / (2.0 * h),
        ];
        let norm = (f[0] * f[0] + f[1] * f[1] + f[2] * f[2]).sqrt();
        for k in 0..3 {
            worst = worst.max((f[k] + g[k]).abs() / f[k].abs().max(floor * norm));
        }
    }
    finish(start, Some(Duration::from_secs(10)), worst <= tol, format!("{count} points, max rel err {worst:.2e} (tol {tol:e})"))
}

/// Normal force just above and below the centre, and along the axis.
pub fn jump_and_axis() -> Report {
    let start = Instant::now();
    let panel = PanelExtent::unit();
    let up = force_exact(&panel, EvalPoint::new(0.0, 1e-9, 0.0)).unwrap()[1];
    let down = force_exact(&panel, EvalPoint::new(0.0, -1e-9, 0.0)).unwrap()[1];
    let jump_err = (up - 2.0 * PI).abs().max((down + 2.0 * PI).abs());
    let mut axis_err = 0.0f64;
    for y in [0.1, 1.0, 10.0] {
        let fy = force_exact(&panel, EvalPoint::new(0.0, y, 0.0)).unwrap()[1];
        axis_err = axis_err.max(rel(fy, on_axis_normal_force(1.0, 1.0, y)));
    }
    finish(
        start,
        None,
        jump_err <= 1e-6 && axis_err <= 1e-9,
        format!("Fy(0,±1e-9,0) off ±2π by {jump_err:.2e} (tol 1e-6); on-axis rel err {axis_err:.2e} (tol 1e-9)"),
    )
}

/// `φ·r` at `r = 10³` against the panel area.
pub fn far_field(directions: usize) -> Report {
    let start = Instant::now();
    let panel = PanelExtent::unit();
    let r = 1e3;
    let worst = fibonacci_directions(directions)
        .into_iter()
        .map(|d| {
            let phi = potential_exact(&panel, EvalPoint::new(r * d[0], r * d[1], r * d[2])).unwrap();
            rel(phi * r, panel.area())
        })
        .fold(0.0f64, f64::max);
    finish(start, None, worst <= 1e-4, format!("{directions} directions, max rel err {worst:.2e} (tol 1e-4)"))
}

fn table(rows: &[ConvergenceRow]) -> String {
    rows.iter().map(|r| format!("n={} C={:.7}", r.n, r.capacitance)).collect::<Vec<_>>().join(", ")
}

fn monotone(rows: &[ConvergenceRow]) -> bool {
    rows.windows(2).all(|w| w[1].capacitance > w[0].capacitance)
}

/// Graded plate convergence study up to 64 × 64.
pub fn plate_capacitance() -> Report {
    let start = Instant::now();
    let rows = convergence_study(ShapeTag::Plate, &[8, 16, 32, 64], GradingSpec::geometric(4.0).unwrap()).unwrap();
    let last = rows.last().unwrap();
    let err = rel(last.capacitance, PLATE_REFERENCE);
    let delta = last.delta.unwrap().abs();
    finish(
        start,
        Some(Duration::from_secs(120)),
        err <= 1e-3 && delta < 5e-4 && monotone(&rows),
        format!(
            "{}; rel err {err:.2e} (tol 1e-3), final delta {delta:.2e} (tol 5e-4), monotone {}",
            table(&rows),
            monotone(&rows)
        ),
    )
}

/// Graded cube at 24 × 24 per face, with the coarser levels for the trend.
pub fn cube_capacitance() -> Report {
    let start = Instant::now();
    let rows = convergence_study(ShapeTag::Cube, &[4, 8, 16, 24], GradingSpec::geometric(4.0).unwrap()).unwrap();
    let last = rows.last().unwrap();
    let err = rel(last.capacitance, CUBE_REFERENCE);
    finish(
        start,
        Some(Duration::from_secs(300)),
        err <= 2e-3 && monotone(&rows),
        format!("{}; rel err {err:.2e} (tol 2e-3), monotone {}", table(&rows), monotone(&rows)),
    )
}

/// Point on the diagonal scan at arc length `s` from its origin.
pub fn diagonal_at(s: f64) -> [f64; 3] {
    [-1.5 + s / 3f64.sqrt(); 3]
}

/// Lumped point sources against the exact kernel on the diagonal scan.
pub fn comparator_claims() -> Report {
    let start = Instant::now();
    let scanner = Scanner::default();
    let one = ScanMethod::PointSource(PointSourceGrid::new(1).unwrap());
    let hundred = ScanMethod::PointSource(PointSourceGrid::new(100).unwrap());

    let at_two = scanner.run(&[diagonal_at(2.0)], &[one]);
    let e_phi = at_two[0].err_phi.unwrap().value.abs();
    let e_f = at_two[0].err_f.unwrap().value.abs();

    let spec = ScanSpec::diagonal(301, vec![hundred]).unwrap();
    let panel = PanelExtent::unit();
    let mut worst = 0.0f64;
    let mut used = 0;
    for row in scanner.line(&spec) {
        if panel.distance_to(EvalPoint::from(row.point)) <= 1e-3 {
            continue;
        }
        used += 1;
        worst = worst.max(row.err_phi.unwrap().value.abs()).max(row.err_f.unwrap().value.abs());
    }
    finish(
        start,
        None,
        e_phi > 0.01 && e_f > 0.10 && worst < 0.01,
        format!(
            "1x1 at arc length 2: phi err {:.2}% (> 1%), Fy err {:.1}% (> 10%); 100x100 max err {:.3}% over {used} points (< 1%)",
            100.0 * e_phi,
            100.0 * e_f,
            100.0 * worst
        ),
    )
}

/// Scan CSV and solution artifacts from a fixed-size rayon pool.
pub fn artifacts_with_threads(threads: usize) -> (String, String, String) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| {
        let methods = vec![
            ScanMethod::Exact,
            ScanMethod::PointSource(PointSourceGrid::new(10).unwrap()),
            ScanMethod::Quadrature,
        ];
        let spec = ScanSpec::diagonal(61, methods).unwrap();
        let scan = panelfield::scan::to_csv_string(&Scanner::default().line(&spec));
        let mesh = build_mesh(ShapeTag::Plate, 16, GradingSpec::geometric(4.0).unwrap()).unwrap();
        let sol = solve_unit_potential(&mesh).unwrap();
        let summary = panelfield::export::SolutionSummary::new(&mesh, &sol).to_json();
        let mut dens = Vec::new();
        panelfield::export::write_densities_csv(&mut dens, &mesh, &sol).unwrap();
        (scan, summary, String::from_utf8(dens).unwrap())
    })
}

/// Library-level determinism across runs and thread counts.
pub fn determinism() -> Report {
    let start = Instant::now();
    let a = artifacts_with_threads(1);
    let b = artifacts_with_threads(8);
    let c = artifacts_with_threads(8);
    let same = a == b && b == c;
    finish(
        start,
        None,
        same,
        format!("scan CSV ({} bytes), summary JSON, density CSV identical for 1 vs 8 threads and across runs: {same}", a.0.len()),
    )
}
