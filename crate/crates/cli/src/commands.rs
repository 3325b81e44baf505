use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use panelfield::export::{write_convergence_csv, write_densities_csv, SolutionSummary};
use panelfield::geometry::{GradingSpec, Mesh, ShapeTag};
use panelfield::kernel::{self, EvalPoint, InfluenceValues, PanelExtent};
use panelfield::oracle::{force_quadrature, point_source_influence, potential_quadrature, QuadratureSpec};
use panelfield::scan::{write_csv, ScanMethod, ScanSpec, Scanner, SurfaceGridSpec};
use panelfield::solver::{convergence_study_with, Solution};
use serde_json::json;

use crate::cli::{CapacitanceArgs, EvalArgs, PanelArgs, QuadratureArgs, ScanArgs};
use crate::config::RunConfig;
use crate::error::CliError;

const DEFAULT_METHODS: &str = "exact,point_source:1,point_source:10,point_source:100";

fn panel(args: &PanelArgs, config: &RunConfig) -> Result<PanelExtent, CliError> {
    match args.panel.or(config.panel) {
        Some([x1, z1, x2, z2]) => Ok(PanelExtent::new(x1, z1, x2, z2)?),
        None => Ok(PanelExtent::unit()),
    }
}

/// `None` leaves the choice to the per-point default.
fn quadrature(args: &QuadratureArgs, config: &RunConfig) -> Result<Option<QuadratureSpec>, CliError> {
    let o = config.quadrature.unwrap_or_default();
    let rel = args.rel_tol.or(o.rel_tol);
    let abs = args.abs_tol.or(o.abs_tol);
    if rel.is_none() && abs.is_none() && o.max_subdivisions.is_none() && o.near_field_mode.is_none() {
        return Ok(None);
    }
    let d = QuadratureSpec::default();
    let spec = QuadratureSpec {
        rel_tol: rel.unwrap_or(d.rel_tol),
        abs_tol: abs.unwrap_or(d.abs_tol),
        max_subdivisions: o.max_subdivisions.unwrap_or(d.max_subdivisions),
        near_field_mode: o.near_field_mode.unwrap_or(d.near_field_mode),
    };
    spec.validate()?;
    Ok(Some(spec))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", path.display())))
}

fn io_error(e: io::Error) -> CliError {
    CliError::input(format!("write failed: {e}"))
}

pub fn eval(args: &EvalArgs, config: &RunConfig) -> Result<(), CliError> {
    let panel = panel(&args.panel, config)?;
    let point = args
        .point
        .or(config.eval.point)
        .ok_or_else(|| CliError::input("eval needs --point x,y,z"))?;
    let p = EvalPoint::from(point);
    let method = args.method.or(config.eval.method).unwrap_or(ScanMethod::Exact);
    let mut flags: Vec<&str> = Vec::new();
    let mut error_estimate = None;
    let values: InfluenceValues = match method {
        ScanMethod::Exact => {
            let e = kernel::evaluate(&panel, p)?;
            for (set, name) in [
                (e.perturbation.x, "perturbed_x"),
                (e.perturbation.y, "perturbed_y"),
                (e.perturbation.z, "perturbed_z"),
                (e.on_surface, "on_surface"),
            ] {
                if set {
                    flags.push(name);
                }
            }
            e.values
        }
        ScanMethod::PointSource(grid) => point_source_influence(&panel, grid, p)?,
        ScanMethod::Quadrature => {
            let spec = quadrature(&args.quadrature, config)?
                .unwrap_or_else(|| QuadratureSpec::for_distance(panel.distance_to(p)));
            let phi = potential_quadrature(&panel, p, &spec)?;
            let f = force_quadrature(&panel, p, &spec)?;
            error_estimate = Some(phi.error.max(f.error));
            InfluenceValues { phi: phi.value, fx: f.value[0], fy: f.value[1], fz: f.value[2] }
        }
    };
    let mut out = io::stdout().lock();
    if args.json {
        let v = json!({
            "method": method.to_string(),
            "point": point,
            "phi": values.phi,
            "fx": values.fx,
            "fy": values.fy,
            "fz": values.fz,
            "flags": flags,
            "error_estimate": error_estimate,
        });
        writeln!(out, "{v}").map_err(io_error)?;
    } else {
        write!(out, "method={method} phi={:?} fx={:?} fy={:?} fz={:?}", values.phi, values.fx, values.fy, values.fz)
            .map_err(io_error)?;
        if let Some(e) = error_estimate {
            write!(out, " error_estimate={e:?}").map_err(io_error)?;
        }
        if !flags.is_empty() {
            write!(out, " flags={}", flags.join(",")).map_err(io_error)?;
        }
        writeln!(out).map_err(io_error)?;
    }
    Ok(())
}

pub fn scan(args: &ScanArgs, config: &RunConfig) -> Result<(), CliError> {
    let sc = &config.scan;
    let scanner = Scanner { panel: panel(&args.panel, config)?, quadrature: quadrature(&args.quadrature, config)? };
    let methods = match args.methods.clone().or_else(|| sc.methods.clone()) {
        Some(m) => m,
        None => DEFAULT_METHODS.split(',').map(|s| s.parse()).collect::<Result<_, _>>()?,
    };
    let grid_config = sc.grid.clone();
    let rows = if args.grid || grid_config.is_some() {
        let g = grid_config.unwrap_or_default();
        let spec = SurfaceGridSpec {
            y: args.y.or(g.y).unwrap_or(1e-8),
            x_range: args.x_range.or(g.x_range).unwrap_or([-1.0, 1.0]),
            z_range: args.z_range.or(g.z_range).unwrap_or([-1.0, 1.0]),
            nx: args.nx.or(g.nx).unwrap_or(41),
            nz: args.nz.or(g.nz).unwrap_or(41),
            methods,
        };
        scanner.grid(&spec)?
    } else {
        let spec = ScanSpec::new(
            args.start.or(sc.start).unwrap_or([-1.5; 3]),
            args.end.or(sc.end).unwrap_or([1.5; 3]),
            args.samples.or(sc.samples).unwrap_or(301),
            methods,
        )?;
        scanner.line(&spec)
    };
    match args.output.as_ref().or(sc.output.as_ref()) {
        Some(path) => {
            let mut w = create(path)?;
            write_csv(&mut w, &rows).and_then(|_| w.flush()).map_err(io_error)
        }
        None => write_csv(io::stdout().lock(), &rows).map_err(io_error),
    }
}

pub fn capacitance(args: &CapacitanceArgs, config: &RunConfig) -> Result<(), CliError> {
    let cc = &config.capacitance;
    let shape = args.shape.map(ShapeTag::from).or(cc.shape).unwrap_or(ShapeTag::Plate);
    let levels = args.n.clone().or_else(|| cc.n.clone()).unwrap_or_else(|| vec![16]);
    if levels.contains(&0) {
        return Err(CliError::input("--n values must be at least 1"));
    }
    let ratio = args.grading.or(cc.grading).unwrap_or(1.0);
    let grading = GradingSpec::geometric(ratio).map_err(|e| CliError::input(e.to_string()))?;

    let mut last: Option<(Mesh, Solution)> = None;
    let rows = convergence_study_with(shape, &levels, grading, |mesh, solution, row| {
        eprintln!(
            "n={} elements={} capacitance={:?} delta={}",
            row.n,
            row.elements,
            row.capacitance,
            row.delta.map(|d| format!("{d:e}")).unwrap_or_else(|| "-".into())
        );
        last = Some((mesh.clone(), solution.clone()));
    })?;
    let (mesh, solution) = last.expect("at least one level was solved");
    let summary = SolutionSummary::new(&mesh, &solution).to_json();

    match args.summary.as_ref().or(cc.summary.as_ref()) {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{summary}").and_then(|_| w.flush()).map_err(io_error)?;
        }
        None => writeln!(io::stdout().lock(), "{summary}").map_err(io_error)?,
    }
    if let Some(path) = args.densities.as_ref().or(cc.densities.as_ref()) {
        let mut w = create(path)?;
        write_densities_csv(&mut w, &mesh, &solution).and_then(|_| w.flush()).map_err(io_error)?;
    }
    if let Some(path) = args.table.as_ref().or(cc.table.as_ref()) {
        let mut w = create(path)?;
        write_convergence_csv(&mut w, &rows).and_then(|_| w.flush()).map_err(io_error)?;
    }
    Ok(())
}
