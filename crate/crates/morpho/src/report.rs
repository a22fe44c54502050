//! Morphometric run reports: the four descriptors plus provenance, written
//! as CSV or JSON.
//!
//! Reals are formatted as their shortest round-trip decimal; the
//! not-a-number sentinel serializes as the literal token `NaN` in both
//! formats (as a bare string in JSON, which has no NaN literal). The JSON
//! report additionally embeds the full flag manifest of the run, so a
//! result can be reproduced from its report alone.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{MorphoError, Result};
use crate::mesh::MeshStyle;
use crate::volume::{BoundaryMode, Dims, PhasePolarity, VoxelSpacing};
use crate::voxel::EulerConnectivity;

/// Which geometry path produced the descriptors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComputeMode {
    #[serde(rename = "mesh")]
    Mesh,
    #[serde(rename = "voxel")]
    Voxel,
}

impl ComputeMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ComputeMode::Mesh => "mesh",
            ComputeMode::Voxel => "voxel",
        }
    }
}

/// Source geometry for the OBJ wireframe export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObjSource {
    #[serde(rename = "mesh")]
    Mesh,
    #[serde(rename = "voxel")]
    Voxel,
}

/// Every flag of a compute run that is not already a top-level report
/// field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub pad: bool,
    pub periodic: bool,
    pub euler_connectivity: EulerConnectivity,
    pub obj_source: Option<ObjSource>,
    pub out_csv: Option<String>,
    pub out_json: Option<String>,
    pub export_stl: Option<String>,
    pub export_obj: Option<String>,
    pub export_binary: Option<String>,
}

/// The four descriptors plus normalized mean curvature and run provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphometricReport {
    pub input: String,
    pub mode: ComputeMode,
    pub mesh_style: Option<MeshStyle>,
    pub boundary: BoundaryMode,
    pub polarity: PhasePolarity,
    pub epsilon: f64,
    pub spacing: VoxelSpacing,
    pub open_radius: u32,
    pub close_radius: u32,
    pub porosity: f64,
    pub porosity_percent: f64,
    pub solid_fraction_percent: f64,
    pub surface_area: f64,
    #[serde(with = "nan_token")]
    pub total_mean_curvature: f64,
    #[serde(with = "nan_token")]
    pub normalized_mean_curvature: f64,
    pub euler_characteristic: i64,
    /// `V - E + F` of the interface mesh; mesh mode only.
    pub chi_surface: Option<i64>,
    /// Edges without exactly two incident faces; mesh mode only.
    pub open_edge_count: Option<u64>,
    pub warnings: Vec<String>,
    pub manifest: RunManifest,
}

/// Report file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Exact CSV column set, in order.
pub const CSV_HEADER: &str = "input,mode,mesh_style,boundary,polarity,epsilon,unit,s_z,s_y,s_x,\
porosity_percent,solid_fraction_percent,surface_area,total_mean_curvature,\
normalized_mean_curvature,euler_characteristic,chi_surface,open_edge_count";

impl MorphometricReport {
    /// One CSV data row matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let opt_int =
            |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&self.input),
            self.mode.as_str(),
            self.mesh_style.map(style_str).unwrap_or(""),
            boundary_str(self.boundary),
            polarity_str(self.polarity),
            self.epsilon,
            csv_field(&self.spacing.unit),
            self.spacing.s_z,
            self.spacing.s_y,
            self.spacing.s_x,
            self.porosity_percent,
            self.solid_fraction_percent,
            self.surface_area,
            self.total_mean_curvature,
            self.normalized_mean_curvature,
            self.euler_characteristic,
            opt_int(self.chi_surface),
            opt_int(self.open_edge_count.map(|v| v as i64)),
        )
    }
}

pub(crate) fn style_str(style: MeshStyle) -> &'static str {
    match style {
        MeshStyle::Rectilinear => "rect",
        MeshStyle::MarchingCubes => "mc",
    }
}

pub(crate) fn boundary_str(boundary: BoundaryMode) -> &'static str {
    match boundary {
        BoundaryMode::Open => "open",
        BoundaryMode::PadSolid => "pad",
        BoundaryMode::Periodic => "periodic",
    }
}

pub(crate) fn polarity_str(polarity: PhasePolarity) -> &'static str {
    match polarity {
        PhasePolarity::PoresDark => "dark",
        PhasePolarity::PoresBright => "bright",
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Write the report at `path` in the requested format.
pub fn write_report(report: &MorphometricReport, path: &Path, format: ReportFormat) -> Result<()> {
    let file = File::create(path).map_err(|e| MorphoError::io(path, e))?;
    let mut w = BufWriter::new(file);
    match format {
        ReportFormat::Csv => {
            writeln!(w, "{CSV_HEADER}").map_err(|e| MorphoError::io(path, e))?;
            writeln!(w, "{}", report.csv_row()).map_err(|e| MorphoError::io(path, e))?;
        }
        ReportFormat::Json => {
            let body = serde_json::to_string_pretty(report)
                .map_err(|e| MorphoError::Format(format!("{}: {e}", path.display())))?;
            writeln!(w, "{body}").map_err(|e| MorphoError::io(path, e))?;
        }
    }
    w.flush().map_err(|e| MorphoError::io(path, e))
}

/// Totals converted from per-volume densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityTotals {
    pub porosity_percent: f64,
    pub surface_area: f64,
    pub integral_mean_curvature: f64,
    pub euler_characteristic: f64,
}

/// Convert density measurements to totals over the image volume
/// `V = n_x n_y n_z v_x v_y v_z`:
/// porosity `= 100 (1 - VolumeDensity)`, `S = S_v V`,
/// `int H dA = 2 pi B_v V`, `chi = E_v V`.
pub fn convert_density_metrics(
    volume_density: f64,
    surface_area_density: f64,
    mean_breadth_density: f64,
    euler_density: f64,
    dims: Dims,
    spacing: &VoxelSpacing,
) -> DensityTotals {
    let volume = dims.total() as f64 * spacing.s_z * spacing.s_y * spacing.s_x;
    DensityTotals {
        porosity_percent: 100.0 * (1.0 - volume_density),
        surface_area: surface_area_density * volume,
        integral_mean_curvature: 2.0 * std::f64::consts::PI * mean_breadth_density * volume,
        euler_characteristic: euler_density * volume,
    }
}

/// Serialize a possibly-NaN value as a number or the literal token "NaN".
mod nan_token {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str("NaN")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumOrToken {
        Num(f64),
        Token(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match NumOrToken::deserialize(d)? {
            NumOrToken::Num(v) => Ok(v),
            NumOrToken::Token(t) if t == "NaN" => Ok(f64::NAN),
            NumOrToken::Token(t) => Err(serde::de::Error::custom(format!(
                "expected a number or \"NaN\", got \"{t}\""
            ))),
        }
    }
}
