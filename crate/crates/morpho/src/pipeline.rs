//! End-to-end orchestration of a compute run: threshold, stabilize, handle
//! the boundary, evaluate the chosen geometry path, and write every
//! requested artifact.
//!
//! Every step is deterministic for fixed inputs and flags: integer tallies
//! merge associatively across any slab partition, and floating-point
//! accumulations run in fixed mesh order, so outputs are byte-identical
//! across thread counts.

use std::path::PathBuf;

use crate::binarize::{binarize, pad_solid};
use crate::error::{MorphoError, Result};
use crate::io;
use crate::mesh::{
    extract_interface_with_progress, mesh_euler, mesh_surface_area, mesh_total_mean_curvature,
    normalized_mean_curvature, EdgeTable, MeshStyle,
};
use crate::morphology::morph_stabilize;
use crate::report::{
    write_report, ComputeMode, MorphometricReport, ObjSource, ReportFormat, RunManifest,
};
use crate::volume::{BinaryVolume, BoundaryMode, IntensityVolume, PhasePolarity, VoxelSpacing};
use crate::voxel::{
    count_cells_with_progress, euler_characteristic, mean_curvature_from_counts, porosity,
    surface_area_voxel, EulerConnectivity,
};

/// Stage-level progress reporting; implementations must be shareable across
/// the worker threads of a stage.
pub trait Progress: Sync {
    /// A named stage begins.
    fn stage(&self, _name: &str) {}
    /// `done` of `total` slabs of the current stage finished (`total` 0 when
    /// unknown).
    fn step(&self, _done: u64, _total: u64) {}
}

/// Silent progress sink.
pub struct NoProgress;

impl Progress for NoProgress {}

/// All flags of a compute run.
#[derive(Debug, Clone)]
pub struct ComputeParams {
    /// Input identifier carried into reports (path or synthetic label).
    pub input_label: String,
    pub polarity: PhasePolarity,
    pub epsilon: f64,
    pub spacing: VoxelSpacing,
    pub pad: bool,
    pub periodic: bool,
    pub open_radius: u32,
    pub close_radius: u32,
    pub mode: ComputeMode,
    pub mesh_style: MeshStyle,
    pub euler_connectivity: EulerConnectivity,
    /// Wireframe source; defaults to the mode's natural geometry.
    pub obj_source: Option<ObjSource>,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
    pub export_stl: Option<PathBuf>,
    pub export_obj: Option<PathBuf>,
    pub export_binary: Option<PathBuf>,
}

impl ComputeParams {
    pub fn new(input_label: impl Into<String>) -> Self {
        ComputeParams {
            input_label: input_label.into(),
            polarity: PhasePolarity::PoresDark,
            epsilon: 0.0,
            spacing: VoxelSpacing::unit_px(),
            pad: false,
            periodic: false,
            open_radius: 0,
            close_radius: 0,
            mode: ComputeMode::Mesh,
            mesh_style: MeshStyle::MarchingCubes,
            euler_connectivity: EulerConnectivity::Six,
            obj_source: None,
            out_csv: None,
            out_json: None,
            export_stl: None,
            export_obj: None,
            export_binary: None,
        }
    }

    /// Reject flag combinations the pipeline cannot honor.
    pub fn validate(&self) -> Result<()> {
        if self.periodic && self.mode == ComputeMode::Mesh {
            return Err(MorphoError::UnsupportedMode(
                "--periodic requires --mode voxel (the mesh path cannot wrap)".into(),
            ));
        }
        if self.periodic && self.pad {
            return Err(MorphoError::UnsupportedMode(
                "--periodic and --pad are mutually exclusive boundary treatments".into(),
            ));
        }
        if self.export_stl.is_some() && self.mode == ComputeMode::Voxel {
            return Err(MorphoError::UnsupportedMode(
                "--export-stl requires --mode mesh".into(),
            ));
        }
        if self.obj_source == Some(ObjSource::Mesh) && self.mode == ComputeMode::Voxel {
            return Err(MorphoError::UnsupportedMode(
                "--obj-source mesh requires --mode mesh".into(),
            ));
        }
        Ok(())
    }

    fn boundary(&self) -> BoundaryMode {
        if self.periodic {
            BoundaryMode::Periodic
        } else if self.pad {
            BoundaryMode::PadSolid
        } else {
            BoundaryMode::Open
        }
    }

    fn effective_obj_source(&self) -> ObjSource {
        self.obj_source.unwrap_or(match self.mode {
            ComputeMode::Mesh => ObjSource::Mesh,
            ComputeMode::Voxel => ObjSource::Voxel,
        })
    }
}

/// Run the full pipeline on an already-loaded intensity volume and write all
/// requested artifacts. Returns the report that was (optionally) written.
pub fn run_compute(
    vol: &IntensityVolume,
    params: &ComputeParams,
    progress: &dyn Progress,
) -> Result<MorphometricReport> {
    params.validate()?;
    let boundary = params.boundary();
    let mut warnings = Vec::new();

    progress.stage("binarize");
    let binarized = binarize(vol, params.polarity, params.epsilon)?;
    if binarized.degenerate {
        warnings.push(
            "constant-intensity input: every voxel satisfies the inclusive pore rule".to_string(),
        );
    }
    let mut bin = binarized.volume;
    progress.step(1, 1);

    if params.open_radius > 0 || params.close_radius > 0 {
        progress.stage("morphology");
        bin = morph_stabilize(&bin, params.open_radius, params.close_radius)?;
        progress.step(1, 1);
    }

    // porosity always refers to the pre-padding domain
    let phi = porosity(&bin);

    progress.stage("boundary");
    let analyzed: BinaryVolume = match boundary {
        BoundaryMode::PadSolid => pad_solid(&bin),
        BoundaryMode::Open | BoundaryMode::Periodic => bin.clone(),
    };
    progress.step(1, 1);

    let pore = analyzed.pore_count();
    if pore == 0 {
        warnings.push("analyzed volume is all solid: A = 0, M and H are NaN".to_string());
    } else if pore == analyzed.dims().total() {
        warnings.push("analyzed volume is all pore: A = 0, M and H are NaN".to_string());
    }

    let step_sink = |done: u64, total: u64| progress.step(done, total);

    let (surface_area, m_total, euler, chi_surface, open_edges, mesh) = match params.mode {
        ComputeMode::Voxel => {
            progress.stage("count");
            let counts = count_cells_with_progress(&analyzed, boundary, Some(&step_sink));
            let a = surface_area_voxel(&counts, &params.spacing);
            let m = mean_curvature_from_counts(&counts, &params.spacing);
            let chi = euler_characteristic(&counts, params.euler_connectivity);
            (a, m, chi, None, None, None)
        }
        ComputeMode::Mesh => {
            progress.stage("mesh");
            let mesh = extract_interface_with_progress(
                &analyzed,
                &params.spacing,
                params.mesh_style,
                boundary,
                Some(&step_sink),
            )?;
            progress.stage("metrics");
            let edges = EdgeTable::build(&mesh);
            let a = mesh_surface_area(&mesh);
            let m = mesh_total_mean_curvature(&mesh, &edges);
            let chi = mesh_euler(&mesh, &edges);
            if !chi.closed && !mesh.is_empty() {
                warnings.push(format!(
                    "interface mesh is not closed ({} open or nonmanifold edges); \
                     chi reported as chi_surface",
                    edges.irregular_edge_count()
                ));
            }
            progress.step(1, 1);
            (
                a,
                m,
                chi.chi_object,
                Some(chi.chi_surface),
                Some(edges.irregular_edge_count()),
                Some((mesh, edges)),
            )
        }
    };

    let report = MorphometricReport {
        input: params.input_label.clone(),
        mode: params.mode,
        mesh_style: match params.mode {
            ComputeMode::Mesh => Some(params.mesh_style),
            ComputeMode::Voxel => None,
        },
        boundary,
        polarity: params.polarity,
        epsilon: params.epsilon,
        spacing: params.spacing.clone(),
        open_radius: params.open_radius,
        close_radius: params.close_radius,
        porosity: phi,
        porosity_percent: 100.0 * phi,
        solid_fraction_percent: 100.0 - 100.0 * phi,
        surface_area,
        total_mean_curvature: m_total,
        normalized_mean_curvature: normalized_mean_curvature(m_total, surface_area),
        euler_characteristic: euler,
        chi_surface,
        open_edge_count: open_edges,
        warnings,
        manifest: RunManifest {
            pad: params.pad,
            periodic: params.periodic,
            euler_connectivity: params.euler_connectivity,
            obj_source: params.export_obj.as_ref().map(|_| params.effective_obj_source()),
            out_csv: params.out_csv.as_deref().map(display_path),
            out_json: params.out_json.as_deref().map(display_path),
            export_stl: params.export_stl.as_deref().map(display_path),
            export_obj: params.export_obj.as_deref().map(display_path),
            export_binary: params.export_binary.as_deref().map(display_path),
        },
    };

    progress.stage("export");
    if let Some(path) = &params.export_binary {
        io::write_binary_stack(&bin, path)?;
    }
    if let Some(path) = &params.export_stl {
        let (mesh, _) = mesh.as_ref().expect("stl export implies mesh mode");
        io::write_stl(mesh, path)?;
    }
    if let Some(path) = &params.export_obj {
        match params.effective_obj_source() {
            ObjSource::Mesh => {
                let (mesh, edges) = mesh.as_ref().expect("mesh obj source implies mesh mode");
                io::write_obj_mesh_wireframe(mesh, edges, path)?;
            }
            ObjSource::Voxel => {
                io::write_obj_voxel_wireframe(&analyzed, &params.spacing, boundary, path)?;
            }
        }
    }
    if let Some(path) = &params.out_csv {
        write_report(&report, path, ReportFormat::Csv)?;
    }
    if let Some(path) = &params.out_json {
        write_report(&report, path, ReportFormat::Json)?;
    }
    progress.step(1, 1);

    Ok(report)
}

fn display_path(p: &std::path::Path) -> String {
    p.display().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::volume::Dims;

    fn ball_volume() -> IntensityVolume {
        let dims = Dims::new(24, 24, 24).unwrap();
        crate::shapes::generate_sphere(dims, (11.5, 11.5, 11.5), 6.0, 255)
            .unwrap()
            .0
    }

    #[test]
    fn validation_rejects_bad_combinations() {
        let mut p = ComputeParams::new("x");
        p.periodic = true;
        assert!(matches!(
            p.validate(),
            Err(MorphoError::UnsupportedMode(_))
        ));
        p.mode = ComputeMode::Voxel;
        assert!(p.validate().is_ok());
        p.pad = true;
        assert!(p.validate().is_err());
        p.pad = false;
        p.export_stl = Some("x.stl".into());
        assert!(p.validate().is_err());
        p.export_stl = None;
        p.obj_source = Some(ObjSource::Mesh);
        assert!(p.validate().is_err());
    }

    #[test]
    fn mesh_and_voxel_modes_agree_on_porosity_and_euler() {
        let vol = ball_volume();
        let mut p = ComputeParams::new("ball");
        p.polarity = PhasePolarity::PoresBright;
        p.mode = ComputeMode::Voxel;
        let voxel = run_compute(&vol, &p, &NoProgress).unwrap();
        p.mode = ComputeMode::Mesh;
        let mesh = run_compute(&vol, &p, &NoProgress).unwrap();
        assert_eq!(voxel.porosity_percent, mesh.porosity_percent);
        assert_eq!(voxel.euler_characteristic, 1);
        assert_eq!(mesh.euler_characteristic, 1);
        assert!(
            (voxel.normalized_mean_curvature * voxel.surface_area
                - voxel.total_mean_curvature)
                .abs()
                < 1e-9
        );
    }

    #[test]
    fn degenerate_all_solid_reports_nan() {
        let dims = Dims::new(4, 4, 4).unwrap();
        let vol = IntensityVolume::new(
            dims,
            (0..64).map(|i| if i == 0 { 1 } else { 255 }).collect(),
        )
        .unwrap();
        // pores dark with eps 0: only voxel 0 is pore; invert for all-solid
        let mut p = ComputeParams::new("solid");
        p.polarity = PhasePolarity::PoresDark;
        p.epsilon = 0.0;
        p.mode = ComputeMode::Voxel;
        let vol_all_solid = IntensityVolume::new(dims, vec![255u16; 64]).unwrap();
        let report = run_compute(&vol_all_solid, &p, &NoProgress).unwrap();
        // constant input: all voxels become pore -> all-pore degenerate
        assert_eq!(report.surface_area, 0.0);
        assert!(report.total_mean_curvature.is_nan());
        assert!(report.normalized_mean_curvature.is_nan());
        assert!(!report.warnings.is_empty());
        let _ = vol;
    }

    #[test]
    fn padding_closes_boundary_surfaces() {
        // all-pore input: open mode has no interface, padded mode wraps it
        let dims = Dims::new(3, 3, 3).unwrap();
        let vol = IntensityVolume::new(dims, vec![0u16; 27]).unwrap();
        // trick: values 0 and 255 so the volume is not constant
        let mut data = vec![0u16; 27];
        data[13] = 255;
        let vol2 = IntensityVolume::new(dims, data).unwrap();
        let mut p = ComputeParams::new("pore");
        p.mode = ComputeMode::Voxel;
        let open = run_compute(&vol2, &p, &NoProgress).unwrap();
        p.pad = true;
        let padded = run_compute(&vol2, &p, &NoProgress).unwrap();
        assert!(padded.surface_area > open.surface_area);
        assert_eq!(open.porosity, padded.porosity);
        let _ = vol;
    }
}
