//! Closed-form descriptors computed directly from the cubical complex of the
//! pore voxels, without meshing.
//!
//! A single streaming pass over 2x2x2 voxel windows gathers every tally the
//! four descriptors need:
//!
//! * open-cell counts `n3`, `n2*`, `n1*`, `n0` (pore voxels, face-adjacent
//!   pairs, fully-pore 2x2 squares, fully-pore 2x2x2 cubes) for the
//!   inclusion-exclusion Euler characteristic,
//! * exposed pore/solid face counts per axis for the interface area,
//! * convex/concave interface edge tallies per axis for the total mean
//!   curvature,
//! * distinct closed-complex cell counts for the 26-connected Euler variant.
//!
//! Interface edges parallel to an axis are classified from the 2x2 voxel
//! window perpendicular to that axis: 1 pore voxel of 4 is convex, 3 of 4 is
//! concave, 2 face-adjacent is flat, and 2 diagonal (a pinch) contributes
//! zero net curvature.
//!
//! Boundary semantics: under `Open`, elements on the domain boundary are not
//! interface (outside is no-data); `PadSolid` is realized upstream by
//! padding, after which the pass sees an ordinary grid; `Periodic` wraps all
//! three axes toroidally.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::volume::{BinaryVolume, BoundaryMode, VoxelSpacing};
use crate::SlabProgress;

/// Signed interface-edge tallies per axis, in voxel-length units.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct EdgeClassCounts {
    pub convex_z: u64,
    pub convex_y: u64,
    pub convex_x: u64,
    pub concave_z: u64,
    pub concave_y: u64,
    pub concave_x: u64,
}

impl EdgeClassCounts {
    fn merge(&mut self, o: &EdgeClassCounts) {
        self.convex_z += o.convex_z;
        self.convex_y += o.convex_y;
        self.convex_x += o.convex_x;
        self.concave_z += o.concave_z;
        self.concave_y += o.concave_y;
        self.concave_x += o.concave_x;
    }
}

/// Cubical-complex element counts for the pore set, plus the face and edge
/// tallies collected in the same pass.
///
/// `n1_xy` counts fully-pore 2x2 squares lying in xy planes (their shared
/// lattice edge is parallel to z), and likewise for the other planes. The
/// `closed_*` fields count distinct cells of the union of closed voxel
/// cubes, which back the 26-connected Euler variant.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct CellCounts {
    pub total_voxels: u64,
    pub n3: u64,
    pub n2_x: u64,
    pub n2_y: u64,
    pub n2_z: u64,
    pub n1_xy: u64,
    pub n1_yz: u64,
    pub n1_zx: u64,
    pub n0: u64,
    /// Pore/solid face-adjacent pairs per axis (interface faces).
    pub exposed_x: u64,
    pub exposed_y: u64,
    pub exposed_z: u64,
    pub edge_classes: EdgeClassCounts,
    pub closed_vertices: u64,
    pub closed_edges_x: u64,
    pub closed_edges_y: u64,
    pub closed_edges_z: u64,
    pub closed_faces_x: u64,
    pub closed_faces_y: u64,
    pub closed_faces_z: u64,
}

impl CellCounts {
    fn merge(mut self, o: CellCounts) -> CellCounts {
        self.n3 += o.n3;
        self.n2_x += o.n2_x;
        self.n2_y += o.n2_y;
        self.n2_z += o.n2_z;
        self.n1_xy += o.n1_xy;
        self.n1_yz += o.n1_yz;
        self.n1_zx += o.n1_zx;
        self.n0 += o.n0;
        self.exposed_x += o.exposed_x;
        self.exposed_y += o.exposed_y;
        self.exposed_z += o.exposed_z;
        self.edge_classes.merge(&o.edge_classes);
        self.closed_vertices += o.closed_vertices;
        self.closed_edges_x += o.closed_edges_x;
        self.closed_edges_y += o.closed_edges_y;
        self.closed_edges_z += o.closed_edges_z;
        self.closed_faces_x += o.closed_faces_x;
        self.closed_faces_y += o.closed_faces_y;
        self.closed_faces_z += o.closed_faces_z;
        self
    }
}

/// Connectivity convention for the voxel-path Euler characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum EulerConnectivity {
    /// Foreground 6-connected: inclusion-exclusion over shared faces,
    /// squares, and cubes. The default.
    #[serde(rename = "6")]
    Six,
    /// Foreground 26-connected: cell counts of the union of closed voxel
    /// cubes.
    #[serde(rename = "26")]
    TwentySix,
}

/// Exact element counts over the pore set under the given boundary mode.
///
/// `PadSolid` volumes are expected to be padded upstream, so the pass treats
/// the grid as-is (same as `Open`).
pub fn count_cells(bin: &BinaryVolume, boundary: BoundaryMode) -> CellCounts {
    count_cells_with_progress(bin, boundary, None)
}

/// [`count_cells`] with per-slab progress reporting.
pub fn count_cells_with_progress(
    bin: &BinaryVolume,
    boundary: BoundaryMode,
    progress: SlabProgress<'_>,
) -> CellCounts {
    let mut counts = match boundary {
        BoundaryMode::Periodic => scan::<true>(bin, progress),
        BoundaryMode::Open | BoundaryMode::PadSolid => scan::<false>(bin, progress),
    };
    counts.total_voxels = bin.dims().total();
    counts
}

/// Pore volume fraction; independent of spacing. Always evaluated on the
/// pre-padding domain by the pipeline.
pub fn porosity(bin: &BinaryVolume) -> f64 {
    bin.pore_count() as f64 / bin.dims().total() as f64
}

/// Interface area from exposed-face tallies, scaled per axis.
pub fn surface_area_voxel(counts: &CellCounts, spacing: &VoxelSpacing) -> f64 {
    counts.exposed_x as f64 * (spacing.s_y * spacing.s_z)
        + counts.exposed_y as f64 * (spacing.s_x * spacing.s_z)
        + counts.exposed_z as f64 * (spacing.s_x * spacing.s_y)
}

/// Total mean curvature of the pore interface from signed edge tallies:
/// `(pi/4) * sum_d s_d * (convex_d - concave_d)`.
///
/// Positive for convex pore bodies; an axis-aligned pore box of `a x b x c`
/// voxels at unit spacing yields exactly `pi * (a + b + c)`. Returns NaN when
/// there is no interface (all-pore or all-solid input).
pub fn mean_curvature_voxel(
    bin: &BinaryVolume,
    spacing: &VoxelSpacing,
    boundary: BoundaryMode,
) -> f64 {
    mean_curvature_from_counts(&count_cells(bin, boundary), spacing)
}

/// Same as [`mean_curvature_voxel`] on an existing tally.
pub fn mean_curvature_from_counts(counts: &CellCounts, spacing: &VoxelSpacing) -> f64 {
    if counts.n3 == 0 || counts.n3 == counts.total_voxels {
        return f64::NAN;
    }
    let e = &counts.edge_classes;
    let net_z = e.convex_z as f64 - e.concave_z as f64;
    let net_y = e.convex_y as f64 - e.concave_y as f64;
    let net_x = e.convex_x as f64 - e.concave_x as f64;
    std::f64::consts::FRAC_PI_4 * (spacing.s_z * net_z + spacing.s_y * net_y + spacing.s_x * net_x)
}

/// Euler characteristic of the pore set, 6-connected foreground:
/// `n3 - sum(n2) + sum(n1) - n0`.
pub fn euler_voxel(counts: &CellCounts) -> i64 {
    counts.n3 as i64 - (counts.n2_x + counts.n2_y + counts.n2_z) as i64
        + (counts.n1_xy + counts.n1_yz + counts.n1_zx) as i64
        - counts.n0 as i64
}

/// Euler characteristic of the pore set, 26-connected foreground: the
/// alternating cell count of the union of closed voxel cubes.
pub fn euler_voxel_26(counts: &CellCounts) -> i64 {
    counts.closed_vertices as i64
        - (counts.closed_edges_x + counts.closed_edges_y + counts.closed_edges_z) as i64
        + (counts.closed_faces_x + counts.closed_faces_y + counts.closed_faces_z) as i64
        - counts.n3 as i64
}

/// Euler characteristic under the selected connectivity convention.
pub fn euler_characteristic(counts: &CellCounts, connectivity: EulerConnectivity) -> i64 {
    match connectivity {
        EulerConnectivity::Six => euler_voxel(counts),
        EulerConnectivity::TwentySix => euler_voxel_26(counts),
    }
}

/// One pass over all 2x2x2 anchor windows. Anchors range one step past the
/// lower boundary so that every closed-complex cell is visited; out-of-domain
/// voxels contribute zero bits. Slabs are processed in parallel and the
/// integer tallies merged, so results are identical for any thread count.
fn scan<const PERIODIC: bool>(bin: &BinaryVolume, progress: SlabProgress<'_>) -> CellCounts {
    let d = bin.dims();
    let (n_z, n_y, n_x) = (d.n_z as i64, d.n_y as i64, d.n_x as i64);
    let z_anchors: Vec<i64> = if PERIODIC {
        (0..n_z).collect()
    } else {
        (-1..n_z).collect()
    };
    let total_slabs = z_anchors.len() as u64;
    let done = AtomicU64::new(0);
    z_anchors
        .into_par_iter()
        .map(|z| {
            let mut c = CellCounts::default();
            let z1 = if PERIODIC { (z + 1) % n_z } else { z + 1 };
            let y_range = if PERIODIC { 0..n_y } else { -1..n_y };
            for y in y_range {
                let y1 = if PERIODIC { (y + 1) % n_y } else { y + 1 };
                let r00 = row(bin, z, y);
                let r01 = row(bin, z, y1);
                let r10 = row(bin, z1, y);
                let r11 = row(bin, z1, y1);
                let x_range = if PERIODIC { 0..n_x } else { -1..n_x };
                for x in x_range {
                    let x1 = if PERIODIC { (x + 1) % n_x } else { x + 1 };
                    let b000 = bit(r00, x, n_x);
                    let b001 = bit(r00, x1, n_x);
                    let b010 = bit(r01, x, n_x);
                    let b011 = bit(r01, x1, n_x);
                    let b100 = bit(r10, x, n_x);
                    let b101 = bit(r10, x1, n_x);
                    let b110 = bit(r11, x, n_x);
                    let b111 = bit(r11, x1, n_x);

                    c.n3 += b000;
                    c.n2_x += b000 & b001;
                    c.n2_y += b000 & b010;
                    c.n2_z += b000 & b100;
                    c.n1_xy += b000 & b001 & b010 & b011;
                    c.n1_zx += b000 & b001 & b100 & b101;
                    c.n1_yz += b000 & b010 & b100 & b110;
                    c.n0 += b000 & b001 & b010 & b011 & b100 & b101 & b110 & b111;

                    // validity of each coordinate (all true under wrap)
                    let vz = PERIODIC || z >= 0;
                    let vz1 = PERIODIC || z1 < n_z;
                    let vy = PERIODIC || y >= 0;
                    let vy1 = PERIODIC || y1 < n_y;
                    let vx = PERIODIC || x >= 0;
                    let vx1 = PERIODIC || x1 < n_x;

                    if vz && vy && vx && vx1 {
                        c.exposed_x += b000 ^ b001;
                    }
                    if vz && vx && vy && vy1 {
                        c.exposed_y += b000 ^ b010;
                    }
                    if vy && vx && vz && vz1 {
                        c.exposed_z += b000 ^ b100;
                    }

                    if vz && vy && vy1 && vx && vx1 {
                        match b000 + b001 + b010 + b011 {
                            1 => c.edge_classes.convex_z += 1,
                            3 => c.edge_classes.concave_z += 1,
                            _ => {}
                        }
                    }
                    if vy && vz && vz1 && vx && vx1 {
                        match b000 + b001 + b100 + b101 {
                            1 => c.edge_classes.convex_y += 1,
                            3 => c.edge_classes.concave_y += 1,
                            _ => {}
                        }
                    }
                    if vx && vz && vz1 && vy && vy1 {
                        match b000 + b010 + b100 + b110 {
                            1 => c.edge_classes.convex_x += 1,
                            3 => c.edge_classes.concave_x += 1,
                            _ => {}
                        }
                    }

                    // distinct cells of the closed complex
                    c.closed_vertices +=
                        b000 | b001 | b010 | b011 | b100 | b101 | b110 | b111;
                    c.closed_edges_z += b000 | b001 | b010 | b011;
                    c.closed_edges_y += b000 | b001 | b100 | b101;
                    c.closed_edges_x += b000 | b010 | b100 | b110;
                    c.closed_faces_x += b000 | b001;
                    c.closed_faces_y += b000 | b010;
                    c.closed_faces_z += b000 | b100;
                }
            }
            if let Some(p) = progress {
                p(done.fetch_add(1, Ordering::Relaxed) + 1, total_slabs);
            }
            c
        })
        .reduce(CellCounts::default, CellCounts::merge)
}

#[inline]
fn row(bin: &BinaryVolume, z: i64, y: i64) -> Option<&[u8]> {
    let d = bin.dims();
    if z < 0 || y < 0 || z >= d.n_z as i64 || y >= d.n_y as i64 {
        return None;
    }
    let slab = bin.slice(z as usize);
    Some(&slab[y as usize * d.n_x..(y as usize + 1) * d.n_x])
}

#[inline]
fn bit(row: Option<&[u8]>, x: i64, n_x: i64) -> u64 {
    match row {
        Some(r) if x >= 0 && x < n_x => (r[x as usize] == 0) as u64,
        _ => 0,
    }
}
