//! Voxel grid data model: dimensions, physical spacing, intensity and binary
//! volumes, and the phase/boundary conventions shared by every analysis path.
//!
//! Index order is `(z, y, x)` throughout the crate, with `z` the slice (page)
//! axis of an image stack. Physical positions are `index * spacing` per axis;
//! nothing is ever resampled, anisotropy is handled by the spacing-aware
//! formulas downstream.

use crate::error::{MorphoError, Result};

/// Grid dimensions `(n_z, n_y, n_x)`. All axes are at least 1 and the voxel
/// count fits in a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Dims {
    pub n_z: usize,
    pub n_y: usize,
    pub n_x: usize,
}

impl Dims {
    pub fn new(n_z: usize, n_y: usize, n_x: usize) -> Result<Self> {
        if n_z == 0 || n_y == 0 || n_x == 0 {
            return Err(MorphoError::EmptyInput(format!(
                "dims ({n_z}, {n_y}, {n_x}) contain a zero axis"
            )));
        }
        (n_z as u64)
            .checked_mul(n_y as u64)
            .and_then(|v| v.checked_mul(n_x as u64))
            .ok_or_else(|| {
                MorphoError::Parameter(format!(
                    "dims ({n_z}, {n_y}, {n_x}) overflow a 64-bit voxel count"
                ))
            })?;
        Ok(Dims { n_z, n_y, n_x })
    }

    /// Total voxel count.
    pub fn total(&self) -> u64 {
        self.n_z as u64 * self.n_y as u64 * self.n_x as u64
    }

    #[inline]
    pub(crate) fn index(&self, z: usize, y: usize, x: usize) -> usize {
        (z * self.n_y + y) * self.n_x + x
    }

    pub fn contains(&self, z: usize, y: usize, x: usize) -> bool {
        z < self.n_z && y < self.n_y && x < self.n_x
    }
}

/// Per-axis physical voxel spacing plus a unit label.
///
/// The label is carried verbatim into reports and exports; it is never
/// interpreted.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VoxelSpacing {
    pub s_z: f64,
    pub s_y: f64,
    pub s_x: f64,
    pub unit: String,
}

impl VoxelSpacing {
    pub fn new(s_z: f64, s_y: f64, s_x: f64, unit: impl Into<String>) -> Result<Self> {
        for (name, v) in [("s_z", s_z), ("s_y", s_y), ("s_x", s_x)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(MorphoError::Parameter(format!(
                    "spacing {name} = {v} must be a positive finite length"
                )));
            }
        }
        Ok(VoxelSpacing {
            s_z,
            s_y,
            s_x,
            unit: unit.into(),
        })
    }

    /// Isotropic spacing of 1 in pixel units.
    pub fn unit_px() -> Self {
        VoxelSpacing::new(1.0, 1.0, 1.0, "px").unwrap()
    }
}

/// Whether pores are the darker or the brighter intensity phase.
///
/// Resolved at binarization into the fixed `0 = pore, 1 = solid` convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PhasePolarity {
    #[serde(rename = "dark")]
    PoresDark,
    #[serde(rename = "bright")]
    PoresBright,
}

/// How the domain boundary is treated when counting interface elements.
///
/// `PadSolid` is realized upstream by [`crate::binarize::pad_solid`]; the
/// counting routines then see an ordinary non-wrapping grid. `Periodic` wraps
/// adjacency toroidally in all three axes and is valid only for the voxel
/// path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BoundaryMode {
    #[serde(rename = "open")]
    Open,
    #[serde(rename = "pad")]
    PadSolid,
    #[serde(rename = "periodic")]
    Periodic,
}

/// Raw 3D scalar field as loaded from a stack.
///
/// Intensities are stored as unsigned 16-bit; 8-bit input is widened without
/// rescaling.
#[derive(Debug, Clone)]
pub struct IntensityVolume {
    dims: Dims,
    data: Vec<u16>,
}

impl IntensityVolume {
    pub fn new(dims: Dims, data: Vec<u16>) -> Result<Self> {
        if data.len() as u64 != dims.total() {
            return Err(MorphoError::Parameter(format!(
                "data length {} does not match dims total {}",
                data.len(),
                dims.total()
            )));
        }
        Ok(IntensityVolume { dims, data })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn values(&self) -> &[u16] {
        &self.data
    }

    #[inline]
    pub fn get(&self, z: usize, y: usize, x: usize) -> u16 {
        self.data[self.dims.index(z, y, x)]
    }
}

/// Strict `{0, 1}` field with the fixed convention `0 = pore, 1 = solid`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryVolume {
    dims: Dims,
    data: Vec<u8>,
}

impl BinaryVolume {
    pub fn new(dims: Dims, data: Vec<u8>) -> Result<Self> {
        if data.len() as u64 != dims.total() {
            return Err(MorphoError::Parameter(format!(
                "data length {} does not match dims total {}",
                data.len(),
                dims.total()
            )));
        }
        if let Some(v) = data.iter().find(|&&v| v > 1) {
            return Err(MorphoError::Parameter(format!(
                "binary volume contains value {v}, expected only 0 (pore) or 1 (solid)"
            )));
        }
        Ok(BinaryVolume { dims, data })
    }

    /// Constructor for internal producers that guarantee `{0, 1}` values.
    pub(crate) fn from_raw(dims: Dims, data: Vec<u8>) -> Self {
        debug_assert_eq!(data.len() as u64, dims.total());
        debug_assert!(data.iter().all(|&v| v <= 1));
        BinaryVolume { dims, data }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn values(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, z: usize, y: usize, x: usize) -> u8 {
        self.data[self.dims.index(z, y, x)]
    }

    #[inline]
    pub fn is_pore(&self, z: usize, y: usize, x: usize) -> bool {
        self.get(z, y, x) == 0
    }

    /// Number of pore voxels.
    pub fn pore_count(&self) -> u64 {
        self.data.iter().filter(|&&v| v == 0).count() as u64
    }

    /// One z-slice as a contiguous row-major slab.
    #[inline]
    pub(crate) fn slice(&self, z: usize) -> &[u8] {
        let n = self.dims.n_y * self.dims.n_x;
        &self.data[z * n..(z + 1) * n]
    }
}

/// Physical position of a voxel index: `(s_z * z, s_y * y, s_x * x)`.
pub fn world_coords(
    index: (usize, usize, usize),
    dims: Dims,
    spacing: &VoxelSpacing,
) -> Result<(f64, f64, f64)> {
    let (z, y, x) = index;
    if !dims.contains(z, y, x) {
        return Err(MorphoError::IndexOutOfBounds {
            z,
            y,
            x,
            nz: dims.n_z,
            ny: dims.n_y,
            nx: dims.n_x,
        });
    }
    Ok((
        spacing.s_z * z as f64,
        spacing.s_y * y as f64,
        spacing.s_x * x as f64,
    ))
}

/// Global intensity extrema `(I_min, I_max)`.
///
/// Volumes are non-empty by construction, so the minimum and maximum always
/// exist.
pub fn intensity_extrema(vol: &IntensityVolume) -> (u16, u16) {
    let mut lo = u16::MAX;
    let mut hi = u16::MIN;
    for &v in vol.values() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}
