//! Command-line front end for the morphometric pipeline.
//!
//! Exit codes: 0 success, 2 invalid flags or parameters, 3 input format
//! error, 4 incompatible flag combination, 5 I/O failure. The environment
//! variable `MORPHO_THREADS` caps the worker thread count; results are
//! byte-identical for any value.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicI64, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};

use morpho::error::MorphoError;
use morpho::io;
use morpho::mesh::MeshStyle;
use morpho::pipeline::{run_compute, ComputeParams, Progress};
use morpho::report::{convert_density_metrics, ComputeMode, ObjSource};
use morpho::shapes;
use morpho::volume::{Dims, PhasePolarity, VoxelSpacing};
use morpho::voxel::EulerConnectivity;

#[derive(Parser)]
#[command(
    name = "morpho",
    version,
    about = "Porosity, surface area, mean curvature, and Euler characteristic of 3D stacks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on an image stack and report the descriptors.
    Compute(ComputeArgs),
    /// Write a synthetic test volume as a TIFF stack.
    Generate(GenerateArgs),
    /// Convert density measurements to totals over the image volume.
    ConvertDensity(ConvertDensityArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PoresArg {
    Dark,
    Bright,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Mesh,
    Voxel,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Mc,
    Rect,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjSourceArg {
    Mesh,
    Voxel,
}

#[derive(Args)]
struct ComputeArgs {
    /// Multi-page TIFF file or directory of TIFF slices.
    #[arg(long)]
    input: PathBuf,
    /// Whether pores are the darker or the brighter phase.
    #[arg(long, value_enum)]
    pores: PoresArg,
    /// Fractional threshold tolerance in [0, 0.1].
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Per-axis voxel spacing as SZ,SY,SX.
    #[arg(long, value_parser = parse_f64_triple, default_value = "1,1,1")]
    spacing: (f64, f64, f64),
    /// Unit label carried into reports and exports.
    #[arg(long, default_value = "px")]
    unit: String,
    /// Add a one-voxel solid border before analysis.
    #[arg(long, overrides_with = "no_pad")]
    pad: bool,
    /// Keep the original domain (default).
    #[arg(long = "no-pad")]
    no_pad: bool,
    /// Toroidal adjacency in all three axes (voxel mode only).
    #[arg(long)]
    periodic: bool,
    /// Pore opening radius in voxels.
    #[arg(long, default_value_t = 0)]
    open_radius: u32,
    /// Solid closing radius in voxels.
    #[arg(long, default_value_t = 0)]
    close_radius: u32,
    /// Geometry path.
    #[arg(long, value_enum, default_value_t = ModeArg::Mesh)]
    mode: ModeArg,
    /// Interface extraction style for mesh mode.
    #[arg(long, value_enum, default_value_t = StyleArg::Mc)]
    mesh_style: StyleArg,
    /// Euler characteristic connectivity convention (voxel mode).
    #[arg(long, value_parser = ["6", "26"], default_value = "6")]
    euler_connectivity: String,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    /// Binary STL of the interface mesh (mesh mode only).
    #[arg(long)]
    export_stl: Option<PathBuf>,
    /// OBJ wireframe of the interface.
    #[arg(long)]
    export_obj: Option<PathBuf>,
    /// Wireframe source; defaults to the mode's own geometry.
    #[arg(long, value_enum)]
    obj_source: Option<ObjSourceArg>,
    /// Post-binarization QC stack (pore = 0, solid = 255).
    #[arg(long)]
    export_binary: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// sphere, box, or torus.
    #[arg(long, value_parser = ["sphere", "box", "torus"])]
    shape: String,
    /// Volume dimensions as NZ,NY,NX.
    #[arg(long, value_parser = parse_usize_triple)]
    dims: (usize, usize, usize),
    /// Center as CZ,CY,CX (sphere and torus).
    #[arg(long, value_parser = parse_f64_triple)]
    center: Option<(f64, f64, f64)>,
    /// Sphere radius in voxels.
    #[arg(long)]
    radius: Option<f64>,
    /// Box low corner as Z,Y,X (inclusive).
    #[arg(long, value_parser = parse_usize_triple)]
    lo: Option<(usize, usize, usize)>,
    /// Box high corner as Z,Y,X (inclusive).
    #[arg(long, value_parser = parse_usize_triple)]
    hi: Option<(usize, usize, usize)>,
    /// Torus major radius in voxels.
    #[arg(long)]
    major: Option<f64>,
    /// Torus minor radius in voxels.
    #[arg(long)]
    minor: Option<f64>,
    /// Foreground intensity (background gets the complement).
    #[arg(long, default_value_t = 255)]
    foreground: u8,
    /// Output TIFF path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ConvertDensityArgs {
    #[arg(long)]
    volume_density: f64,
    #[arg(long)]
    surface_area_density: f64,
    #[arg(long)]
    mean_breadth_density: f64,
    #[arg(long)]
    euler_density: f64,
    /// Volume dimensions as NZ,NY,NX.
    #[arg(long, value_parser = parse_usize_triple)]
    dims: (usize, usize, usize),
    /// Per-axis voxel spacing as SZ,SY,SX.
    #[arg(long, value_parser = parse_f64_triple, default_value = "1,1,1")]
    spacing: (f64, f64, f64),
}

fn parse_f64_triple(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<_> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got {s:?}"));
    }
    let mut v = [0.0f64; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.trim().parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok((v[0], v[1], v[2]))
}

fn parse_usize_triple(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<_> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got {s:?}"));
    }
    let mut v = [0usize; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.trim().parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok((v[0], v[1], v[2]))
}

/// Stage progress printed to stderr in 5% steps.
struct StderrProgress {
    stage: Mutex<String>,
    bucket: AtomicI64,
}

impl StderrProgress {
    fn new() -> Self {
        StderrProgress {
            stage: Mutex::new(String::new()),
            bucket: AtomicI64::new(-1),
        }
    }
}

impl Progress for StderrProgress {
    fn stage(&self, name: &str) {
        *self.stage.lock().unwrap() = name.to_string();
        self.bucket.store(-1, Ordering::SeqCst);
        eprintln!("{name}: 0%");
    }

    fn step(&self, done: u64, total: u64) {
        if total == 0 {
            return;
        }
        let pct = (100 * done / total).min(100) as i64;
        let bucket = pct / 5;
        let prev = self.bucket.fetch_max(bucket, Ordering::SeqCst);
        if bucket > prev {
            let stage = self.stage.lock().unwrap();
            eprintln!("{stage}: {pct}%");
        }
    }
}

fn exit_code_for(err: &MorphoError) -> u8 {
    match err {
        MorphoError::Parameter(_) | MorphoError::IndexOutOfBounds { .. } => 2,
        MorphoError::Format(_) | MorphoError::EmptyInput(_) => 3,
        MorphoError::UnsupportedMode(_) => 4,
        MorphoError::Io { .. } | MorphoError::Capacity(_) => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(code) = configure_threads() {
        return code;
    }
    let result = match cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Generate(args) => cmd_generate(args),
        Command::ConvertDensity(args) => cmd_convert_density(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn configure_threads() -> Result<(), ExitCode> {
    match std::env::var("MORPHO_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => match raw.parse::<usize>() {
            Ok(n) if n > 0 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .expect("thread pool configured before first use");
                Ok(())
            }
            _ => {
                eprintln!("error: MORPHO_THREADS must be a positive integer, got {raw:?}");
                Err(ExitCode::from(2))
            }
        },
    }
}

fn cmd_compute(args: ComputeArgs) -> Result<(), MorphoError> {
    let spacing = VoxelSpacing::new(args.spacing.0, args.spacing.1, args.spacing.2, &args.unit)?;
    let params = ComputeParams {
        input_label: args.input.display().to_string(),
        polarity: match args.pores {
            PoresArg::Dark => PhasePolarity::PoresDark,
            PoresArg::Bright => PhasePolarity::PoresBright,
        },
        epsilon: args.epsilon,
        spacing,
        pad: args.pad,
        periodic: args.periodic,
        open_radius: args.open_radius,
        close_radius: args.close_radius,
        mode: match args.mode {
            ModeArg::Mesh => ComputeMode::Mesh,
            ModeArg::Voxel => ComputeMode::Voxel,
        },
        mesh_style: match args.mesh_style {
            StyleArg::Mc => MeshStyle::MarchingCubes,
            StyleArg::Rect => MeshStyle::Rectilinear,
        },
        euler_connectivity: match args.euler_connectivity.as_str() {
            "26" => EulerConnectivity::TwentySix,
            _ => EulerConnectivity::Six,
        },
        obj_source: args.obj_source.map(|s| match s {
            ObjSourceArg::Mesh => ObjSource::Mesh,
            ObjSourceArg::Voxel => ObjSource::Voxel,
        }),
        out_csv: args.out_csv,
        out_json: args.out_json,
        export_stl: args.export_stl,
        export_obj: args.export_obj,
        export_binary: args.export_binary,
    };
    params.validate()?;

    let progress = StderrProgress::new();
    progress.stage("read");
    let step = |done: u64, total: u64| Progress::step(&progress, done, total);
    let vol = io::read_stack_with_progress(&args.input, Some(&step))?;

    let report = run_compute(&vol, &params, &progress)?;

    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let unit = &report.spacing.unit;
    println!("porosity [%]: {}", report.porosity_percent);
    println!("solid fraction [%]: {}", report.solid_fraction_percent);
    println!("surface area [{unit}^2]: {}", report.surface_area);
    println!("total mean curvature [{unit}]: {}", report.total_mean_curvature);
    println!(
        "normalized mean curvature [1/{unit}]: {}",
        report.normalized_mean_curvature
    );
    println!("euler characteristic: {}", report.euler_characteristic);
    if let Some(chi) = report.chi_surface {
        println!("chi surface (V - E + F): {chi}");
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<(), MorphoError> {
    let dims = Dims::new(args.dims.0, args.dims.1, args.dims.2)?;
    let require = |name: &str, ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(MorphoError::Parameter(format!(
                "--{name} is required for --shape {}",
                args.shape
            )))
        }
    };
    let vol = match args.shape.as_str() {
        "sphere" => {
            require("center", args.center.is_some())?;
            require("radius", args.radius.is_some())?;
            let (vol, clipped) = shapes::generate_sphere(
                dims,
                args.center.unwrap(),
                args.radius.unwrap(),
                args.foreground,
            )?;
            if clipped {
                eprintln!("warning: sphere extends past the domain and was clipped");
            }
            vol
        }
        "box" => {
            require("lo", args.lo.is_some())?;
            require("hi", args.hi.is_some())?;
            shapes::generate_box(dims, args.lo.unwrap(), args.hi.unwrap(), args.foreground)?
        }
        "torus" => {
            require("center", args.center.is_some())?;
            require("major", args.major.is_some())?;
            require("minor", args.minor.is_some())?;
            shapes::generate_torus(
                dims,
                args.center.unwrap(),
                args.major.unwrap(),
                args.minor.unwrap(),
                args.foreground,
            )?
        }
        other => {
            return Err(MorphoError::Parameter(format!("unknown shape {other:?}")));
        }
    };
    io::write_intensity_stack(&vol, &args.out)?;
    println!(
        "wrote {} ({}x{}x{} voxels)",
        args.out.display(),
        dims.n_z,
        dims.n_y,
        dims.n_x
    );
    Ok(())
}

fn cmd_convert_density(args: ConvertDensityArgs) -> Result<(), MorphoError> {
    let dims = Dims::new(args.dims.0, args.dims.1, args.dims.2)?;
    let spacing = VoxelSpacing::new(args.spacing.0, args.spacing.1, args.spacing.2, "px")?;
    let totals = convert_density_metrics(
        args.volume_density,
        args.surface_area_density,
        args.mean_breadth_density,
        args.euler_density,
        dims,
        &spacing,
    );
    println!("porosity [%]: {:.3}", totals.porosity_percent);
    println!("surface area: {:.3}", totals.surface_area);
    println!("integral mean curvature: {:.3}", totals.integral_mean_curvature);
    println!("euler characteristic: {:.3}", totals.euler_characteristic);
    Ok(())
}
