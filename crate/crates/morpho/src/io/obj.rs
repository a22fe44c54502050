//! Text OBJ wireframe export: `v x y z` vertex records and `l i j` line
//! records in world units.
//!
//! The mesh source emits the consolidated mesh edges. The voxel source
//! traces the 4 boundary edges of every exposed pore voxel face directly,
//! with shared corners welded, so no triangulation diagonals appear.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use indexmap::{IndexMap, IndexSet};

use crate::error::{MorphoError, Result};
use crate::mesh::{EdgeTable, TriangleMesh};
use crate::volume::{BinaryVolume, BoundaryMode, VoxelSpacing};

/// Write the consolidated edges of a mesh as an OBJ wireframe. The mesh is
/// already in world coordinates.
pub fn write_obj_mesh_wireframe(
    mesh: &TriangleMesh,
    edges: &EdgeTable,
    path: &Path,
) -> Result<()> {
    let file = File::create(path).map_err(|e| MorphoError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io_err = |e| MorphoError::io(path, e);
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", v[0], v[1], v[2]).map_err(io_err)?;
    }
    for (a, b) in edges.endpoints() {
        writeln!(w, "l {} {}", a + 1, b + 1).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// Directions in a fixed traversal order, as `(dz, dy, dx)`.
const DIRS: [(i64, i64, i64); 6] = [
    (-1, 0, 0),
    (1, 0, 0),
    (0, -1, 0),
    (0, 1, 0),
    (0, 0, -1),
    (0, 0, 1),
];

/// Write the boundary edges of all exposed pore voxel faces as an OBJ
/// wireframe, respecting the boundary mode (including periodic wrapping).
pub fn write_obj_voxel_wireframe(
    bin: &BinaryVolume,
    spacing: &VoxelSpacing,
    boundary: BoundaryMode,
    path: &Path,
) -> Result<()> {
    let d = bin.dims();
    let periodic = boundary == BoundaryMode::Periodic;
    // corner keys are doubled half-integer lattice coordinates (z, y, x)
    let mut corners: IndexMap<(i64, i64, i64), u32> = IndexMap::new();
    let mut lines: IndexSet<(u32, u32)> = IndexSet::new();
    for z in 0..d.n_z {
        for y in 0..d.n_y {
            for x in 0..d.n_x {
                if !bin.is_pore(z, y, x) {
                    continue;
                }
                for &(dz, dy, dx) in &DIRS {
                    let (nz, ny, nx) = (z as i64 + dz, y as i64 + dy, x as i64 + dx);
                    let exposed = if periodic {
                        let wz = nz.rem_euclid(d.n_z as i64) as usize;
                        let wy = ny.rem_euclid(d.n_y as i64) as usize;
                        let wx = nx.rem_euclid(d.n_x as i64) as usize;
                        !bin.is_pore(wz, wy, wx)
                    } else {
                        nz >= 0
                            && ny >= 0
                            && nx >= 0
                            && (nz as usize) < d.n_z
                            && (ny as usize) < d.n_y
                            && (nx as usize) < d.n_x
                            && !bin.is_pore(nz as usize, ny as usize, nx as usize)
                    };
                    if !exposed {
                        continue;
                    }
                    let quad = face_corners((z, y, x), (dz, dy, dx));
                    let mut ids = [0u32; 4];
                    for (i, key) in quad.iter().enumerate() {
                        let next = corners.len() as u32;
                        ids[i] = *corners.entry(*key).or_insert(next);
                    }
                    for i in 0..4 {
                        let (a, b) = (ids[i], ids[(i + 1) % 4]);
                        lines.insert((a.min(b), a.max(b)));
                    }
                }
            }
        }
    }
    let file = File::create(path).map_err(|e| MorphoError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io_err = |e| MorphoError::io(path, e);
    for &(kz, ky, kx) in corners.keys() {
        writeln!(
            w,
            "v {} {} {}",
            (kx as f64 - 1.0) * 0.5 * spacing.s_x,
            (ky as f64 - 1.0) * 0.5 * spacing.s_y,
            (kz as f64 - 1.0) * 0.5 * spacing.s_z,
        )
        .map_err(io_err)?;
    }
    for &(a, b) in &lines {
        writeln!(w, "l {} {}", a + 1, b + 1).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// The 4 corners of the face of voxel `(z, y, x)` facing `dir`, as doubled
/// half-integer keys `(kz, ky, kx)` in perimeter order.
fn face_corners(voxel: (usize, usize, usize), dir: (i64, i64, i64)) -> [(i64, i64, i64); 4] {
    let center = [
        2 * voxel.0 as i64 + 1,
        2 * voxel.1 as i64 + 1,
        2 * voxel.2 as i64 + 1,
    ];
    let (axis, sign) = match dir {
        (s, 0, 0) => (0usize, s),
        (0, s, 0) => (1usize, s),
        (0, 0, s) => (2usize, s),
        _ => unreachable!(),
    };
    let (b_axis, c_axis) = match axis {
        0 => (2usize, 1usize),
        1 => (0usize, 2usize),
        _ => (1usize, 0usize),
    };
    let mut quad = [(0i64, 0i64, 0i64); 4];
    for (i, &(db, dc)) in [(-1i64, -1i64), (1, -1), (1, 1), (-1, 1)].iter().enumerate() {
        let mut corner = center;
        corner[axis] += sign;
        corner[b_axis] += db;
        corner[c_axis] += dc;
        quad[i] = (corner[0], corner[1], corner[2]);
    }
    quad
}
