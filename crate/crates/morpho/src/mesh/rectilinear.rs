//! Rectilinear interface extraction: every exposed pore voxel face becomes
//! two triangles on the half-integer corner lattice.
//!
//! The voxel centered at index `i` occupies the cube `[i - 1/2, i + 1/2]`
//! per axis, so corner coordinates double to even integers and are welded
//! exactly. A face is exposed when its in-domain neighbor is solid;
//! out-of-domain is no-data and leaves the surface open (padding upstream
//! closes it).

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::volume::{BinaryVolume, VoxelSpacing};
use crate::SlabProgress;

use super::{weld, MeshStyle, TriangleMesh};

/// Outward directions in scan order, as `(dz, dy, dx)`.
const DIRS: [(i64, i64, i64); 6] = [
    (-1, 0, 0),
    (1, 0, 0),
    (0, -1, 0),
    (0, 1, 0),
    (0, 0, -1),
    (0, 0, 1),
];

pub(super) fn extract(
    bin: &BinaryVolume,
    spacing: &VoxelSpacing,
    progress: SlabProgress<'_>,
) -> TriangleMesh {
    let d = bin.dims();
    let done = AtomicU64::new(0);
    let per_slab: Vec<Vec<[[u32; 3]; 3]>> = (0..d.n_z)
        .into_par_iter()
        .map(|z| {
            let mut tris = Vec::new();
            for y in 0..d.n_y {
                for x in 0..d.n_x {
                    if !bin.is_pore(z, y, x) {
                        continue;
                    }
                    for &(dz, dy, dx) in &DIRS {
                        let nz = z as i64 + dz;
                        let ny = y as i64 + dy;
                        let nx = x as i64 + dx;
                        let exposed = nz >= 0
                            && ny >= 0
                            && nx >= 0
                            && (nz as usize) < d.n_z
                            && (ny as usize) < d.n_y
                            && (nx as usize) < d.n_x
                            && !bin.is_pore(nz as usize, ny as usize, nx as usize);
                        if exposed {
                            emit_face(&mut tris, (z, y, x), (dz, dy, dx));
                        }
                    }
                }
            }
            if let Some(p) = progress {
                p(done.fetch_add(1, Ordering::Relaxed) + 1, d.n_z as u64);
            }
            tris
        })
        .collect();
    let mut triangles = Vec::new();
    for mut slab in per_slab {
        triangles.append(&mut slab);
    }
    weld(triangles, spacing, MeshStyle::Rectilinear)
}

/// Quad corners for the face of voxel `(z, y, x)` facing `dir`, wound
/// counter-clockwise seen from outside the pore, emitted as two triangles in
/// doubled-index keys `(kz, ky, kx)`.
fn emit_face(out: &mut Vec<[[u32; 3]; 3]>, voxel: (usize, usize, usize), dir: (i64, i64, i64)) {
    let center = [
        2 * voxel.0 as i64 + 1,
        2 * voxel.1 as i64 + 1,
        2 * voxel.2 as i64 + 1,
    ];
    // axis: 0 = z, 1 = y, 2 = x; right-handed companion axes in (x, y, z)
    // space so that the (b-, c-) -> (b+, c-) -> (b+, c+) -> (b-, c+) cycle
    // faces the positive axis direction.
    let (axis, sign) = match dir {
        (s, 0, 0) => (0usize, s),
        (0, s, 0) => (1usize, s),
        (0, 0, s) => (2usize, s),
        _ => unreachable!(),
    };
    // companions expressed as (z, y, x) component indices: +x -> (y, z),
    // +y -> (z, x), +z -> (x, y)
    let (b_axis, c_axis) = match axis {
        0 => (2usize, 1usize), // +z: (x, y)
        1 => (0usize, 2usize), // +y: (z, x)
        _ => (1usize, 0usize), // +x: (y, z)
    };
    let mut quad = [[0u32; 3]; 4];
    let pattern = [(-1i64, -1i64), (1, -1), (1, 1), (-1, 1)];
    for (i, &(db, dc)) in pattern.iter().enumerate() {
        let mut corner = center;
        corner[axis] += sign;
        corner[b_axis] += db;
        corner[c_axis] += dc;
        quad[i] = [corner[0] as u32, corner[1] as u32, corner[2] as u32];
    }
    if sign < 0 {
        quad.reverse();
    }
    out.push([quad[0], quad[1], quad[2]]);
    out.push([quad[0], quad[2], quad[3]]);
}
