use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use panelfield::geometry::ShapeTag;
use panelfield::scan::ScanMethod;

#[derive(Debug, Parser)]
#[command(name = "panelfield", version, about = "Exact rectangular-panel fields, comparator scans and capacitance studies")]
pub struct Cli {
    /// Worker threads for assembly and scans.
    #[arg(long, global = true, env = "PANELFIELD_THREADS")]
    pub threads: Option<usize>,

    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one panel at one point.
    Eval(EvalArgs),
    /// Sample a line or a surface grid with several methods and write CSV.
    Scan(ScanArgs),
    /// Solve for unit potential and report the capacitance.
    Capacitance(CapacitanceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PanelArgs {
    /// Panel corners `x1,z1,x2,z2` in its own plane (default: the unit square centred at the origin).
    #[arg(long, value_parser = parse_list::<4>, allow_hyphen_values = true)]
    pub panel: Option<[f64; 4]>,
}

#[derive(Debug, Clone, Args)]
pub struct QuadratureArgs {
    /// Relative tolerance for the quadrature method.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance for the quadrature method.
    #[arg(long)]
    pub abs_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Evaluation point `x,y,z`.
    #[arg(long, value_parser = parse_list::<3>, allow_hyphen_values = true)]
    pub point: Option<[f64; 3]>,
    /// `exact`, `quadrature` or `point_source:<m>`.
    #[arg(long)]
    pub method: Option<ScanMethod>,
    /// Print a JSON object instead of a text line.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub panel: PanelArgs,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Line start `x,y,z` (default -1.5,-1.5,-1.5).
    #[arg(long, value_parser = parse_list::<3>, allow_hyphen_values = true)]
    pub start: Option<[f64; 3]>,
    /// Line end `x,y,z` (default 1.5,1.5,1.5).
    #[arg(long, value_parser = parse_list::<3>, allow_hyphen_values = true)]
    pub end: Option<[f64; 3]>,
    /// Samples along the line, endpoints included.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Comma-separated methods (default exact,point_source:1,point_source:10,point_source:100).
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<ScanMethod>>,
    /// Sample a grid in the plane of constant `y` instead of a line.
    #[arg(long)]
    pub grid: bool,
    /// Grid plane offset (default 1e-8).
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    /// Grid `x` range `lo,hi` (default -1,1).
    #[arg(long, value_parser = parse_list::<2>, allow_hyphen_values = true)]
    pub x_range: Option<[f64; 2]>,
    /// Grid `z` range `lo,hi` (default -1,1).
    #[arg(long, value_parser = parse_list::<2>, allow_hyphen_values = true)]
    pub z_range: Option<[f64; 2]>,
    /// Grid samples along `x` (default 41).
    #[arg(long)]
    pub nx: Option<usize>,
    /// Grid samples along `z` (default 41).
    #[arg(long)]
    pub nz: Option<usize>,
    /// Output file (default stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub panel: PanelArgs,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Plate,
    Cube,
}

impl From<Shape> for ShapeTag {
    fn from(s: Shape) -> ShapeTag {
        match s {
            Shape::Plate => ShapeTag::Plate,
            Shape::Cube => ShapeTag::Cube,
        }
    }
}

#[derive(Debug, Args)]
pub struct CapacitanceArgs {
    #[arg(long, value_enum)]
    pub shape: Option<Shape>,
    /// Cells per side; several comma-separated values run a convergence study.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Centre-to-edge cell size ratio (1 for uniform).
    #[arg(long)]
    pub grading: Option<f64>,
    /// Summary JSON path (default stdout).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Panel densities CSV for the finest level.
    #[arg(long)]
    pub densities: Option<PathBuf>,
    /// Convergence table CSV.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got {}", parts.len()));
    }
    let mut out = [0.0f64; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| format!("`{p}` is not a number"))?;
        if !slot.is_finite() {
            return Err(format!("`{p}` is not finite"));
        }
    }
    Ok(out)
}
