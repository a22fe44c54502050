//! Marching cubes over the pore indicator at isolevel 0.5 with midpoint
//! vertex placement.
//!
//! The 256-entry case table is generated once from a face-local marching
//! squares rule: on every cell face, cut segments separate the inside (pore)
//! corners, and a diagonal face pattern always produces two segments that
//! each cut off one inside corner. Because the rule depends only on the
//! face's own pattern, the two cells sharing a face always agree on its cut
//! segments, which makes the global mesh watertight on padded volumes by
//! construction. Interior cell ambiguities resolve to separated pore
//! bodies, consistent with the voxel path's treatment of pinches.
//!
//! Cube corners are numbered by the bit code `dz << 2 | dy << 1 | dx`; case
//! index bit `i` is set when corner `i` is pore.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::volume::{BinaryVolume, VoxelSpacing};
use crate::SlabProgress;

use super::{weld, MeshStyle, TriangleMesh};

/// Corner pairs of the 12 cube edges, in a fixed enumeration order.
fn edge_list() -> [(u8, u8); 12] {
    let mut edges = [(0u8, 0u8); 12];
    let mut n = 0;
    for c in 0u8..8 {
        for mask in [1u8, 2, 4] {
            if c & mask == 0 {
                edges[n] = (c, c | mask);
                n += 1;
            }
        }
    }
    debug_assert_eq!(n, 12);
    edges
}

/// Corner cycles of the 6 faces, counter-clockwise seen from outside the
/// cell. Axis masks: x = 1, y = 2, z = 4; companions follow the right-handed
/// cyclic order x -> (y, z), y -> (z, x), z -> (x, y).
fn face_cycles() -> [[u8; 4]; 6] {
    let axes = [(1u8, 2u8, 4u8), (2, 4, 1), (4, 1, 2)];
    let mut faces = [[0u8; 4]; 6];
    let mut n = 0;
    for &(a, b, c) in &axes {
        for side in [0u8, 1] {
            let base = side * a;
            let cycle = if side == 1 {
                [base, base | b, base | b | c, base | c]
            } else {
                [base, base | c, base | b | c, base | b]
            };
            faces[n] = cycle;
            n += 1;
        }
    }
    faces
}

/// Per-case triangles as triples of cube-edge ids.
fn build_table() -> Vec<Vec<[u8; 3]>> {
    let edges = edge_list();
    let faces = face_cycles();
    let mut edge_id = [[u8::MAX; 8]; 8];
    for (id, &(a, b)) in edges.iter().enumerate() {
        edge_id[a as usize][b as usize] = id as u8;
        edge_id[b as usize][a as usize] = id as u8;
    }

    let mut table = Vec::with_capacity(256);
    for config in 0u16..256 {
        let inside = |c: u8| config >> c & 1 == 1;

        // directed cut segments: head edge -> tail edge
        let mut next = [u8::MAX; 12];
        for cycle in &faces {
            for j in 0..4 {
                let from = cycle[j];
                let to = cycle[(j + 1) % 4];
                if !(inside(from) && !inside(to)) {
                    continue;
                }
                // walk backward to the first outside -> inside crossing
                let mut k = (j + 3) % 4;
                loop {
                    let kf = cycle[k];
                    let kt = cycle[(k + 1) % 4];
                    if !inside(kf) && inside(kt) {
                        let head = edge_id[from as usize][to as usize];
                        let tail = edge_id[kf as usize][kt as usize];
                        debug_assert_eq!(next[head as usize], u8::MAX);
                        next[head as usize] = tail;
                        break;
                    }
                    k = (k + 3) % 4;
                }
            }
        }

        // chain segments into loops and fan-triangulate
        let mut tris = Vec::new();
        let mut used = [false; 12];
        for start in 0..12u8 {
            if next[start as usize] == u8::MAX || used[start as usize] {
                continue;
            }
            let mut ring = vec![start];
            used[start as usize] = true;
            let mut cur = next[start as usize];
            while cur != start {
                debug_assert!(!used[cur as usize]);
                ring.push(cur);
                used[cur as usize] = true;
                cur = next[cur as usize];
            }
            assert!(ring.len() >= 3);
            // the traversal winds with normals into the pore; flip it
            ring.reverse();
            rotate_to_safe_root(&mut ring, &edges);
            for i in 1..ring.len() - 1 {
                tris.push([ring[0], ring[i], ring[i + 1]]);
            }
        }
        table.push(tris);
    }
    table
}

/// Rotate the ring so the fan root lies on no face the ring visits twice.
///
/// Fan chords all start at the root. A chord lying in a cell face would be
/// invisible to the neighboring cell and could collide with its
/// triangulation; with this root choice every chord runs strictly through
/// the cell interior, so only shared cut segments ever land on faces. A face
/// holds 4 ring vertices exactly when the ring crosses it twice (two
/// diagonal-pattern segments), and rings of length 3 have no chords at all.
fn rotate_to_safe_root(ring: &mut [u8], edges: &[(u8, u8); 12]) {
    if ring.len() == 3 {
        return;
    }
    let on_face = |edge: u8, axis_mask: u8, side: u8| {
        let (a, b) = edges[edge as usize];
        (a & axis_mask == side * axis_mask) && (b & axis_mask == side * axis_mask)
    };
    let root = ring
        .iter()
        .position(|&v| {
            for axis_mask in [1u8, 2, 4] {
                for side in [0u8, 1] {
                    if !on_face(v, axis_mask, side) {
                        continue;
                    }
                    let occupancy = ring
                        .iter()
                        .filter(|&&w| on_face(w, axis_mask, side))
                        .count();
                    if occupancy >= 4 {
                        return false;
                    }
                }
            }
            true
        })
        .expect("every ring has a vertex clear of twice-visited faces");
    ring.rotate_left(root);
}

fn table() -> &'static Vec<Vec<[u8; 3]>> {
    static TABLE: OnceLock<Vec<Vec<[u8; 3]>>> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

/// Doubled-index offsets of each edge midpoint relative to the cell anchor,
/// as `(lz, ly, lx)` with components in `{0, 1, 2}`.
fn edge_midpoints() -> [(u32, u32, u32); 12] {
    let edges = edge_list();
    let mut mids = [(0u32, 0u32, 0u32); 12];
    for (id, &(a, b)) in edges.iter().enumerate() {
        let (az, ay, ax) = ((a >> 2 & 1) as u32, (a >> 1 & 1) as u32, (a & 1) as u32);
        let (bz, by, bx) = ((b >> 2 & 1) as u32, (b >> 1 & 1) as u32, (b & 1) as u32);
        mids[id] = (az + bz, ay + by, ax + bx);
    }
    mids
}

pub(super) fn extract(
    bin: &BinaryVolume,
    spacing: &VoxelSpacing,
    progress: SlabProgress<'_>,
) -> TriangleMesh {
    let d = bin.dims();
    let table = table();
    let mids = edge_midpoints();
    if d.n_z < 2 || d.n_y < 2 || d.n_x < 2 {
        return weld(Vec::new(), spacing, MeshStyle::MarchingCubes);
    }
    let done = AtomicU64::new(0);
    let per_slab: Vec<Vec<[[u32; 3]; 3]>> = (0..d.n_z - 1)
        .into_par_iter()
        .map(|z| {
            let mut tris = Vec::new();
            let s0 = bin.slice(z);
            let s1 = bin.slice(z + 1);
            for y in 0..d.n_y - 1 {
                let r00 = &s0[y * d.n_x..(y + 1) * d.n_x];
                let r01 = &s0[(y + 1) * d.n_x..(y + 2) * d.n_x];
                let r10 = &s1[y * d.n_x..(y + 1) * d.n_x];
                let r11 = &s1[(y + 1) * d.n_x..(y + 2) * d.n_x];
                for x in 0..d.n_x - 1 {
                    let config = (r00[x] == 0) as usize
                        | ((r00[x + 1] == 0) as usize) << 1
                        | ((r01[x] == 0) as usize) << 2
                        | ((r01[x + 1] == 0) as usize) << 3
                        | ((r10[x] == 0) as usize) << 4
                        | ((r10[x + 1] == 0) as usize) << 5
                        | ((r11[x] == 0) as usize) << 6
                        | ((r11[x + 1] == 0) as usize) << 7;
                    if config == 0 || config == 255 {
                        continue;
                    }
                    let base = (2 * z as u32 + 1, 2 * y as u32 + 1, 2 * x as u32 + 1);
                    for t in &table[config] {
                        let mut tri = [[0u32; 3]; 3];
                        for (slot, &eid) in t.iter().enumerate() {
                            let (lz, ly, lx) = mids[eid as usize];
                            tri[slot] = [base.0 + lz, base.1 + ly, base.2 + lx];
                        }
                        tris.push(tri);
                    }
                }
            }
            if let Some(p) = progress {
                p(done.fetch_add(1, Ordering::Relaxed) + 1, d.n_z as u64 - 1);
            }
            tris
        })
        .collect();
    let mut triangles = Vec::new();
    for mut slab in per_slab {
        triangles.append(&mut slab);
    }
    weld(triangles, spacing, MeshStyle::MarchingCubes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{mesh_euler, mesh_surface_area, mesh_total_mean_curvature, EdgeTable};
    use crate::volume::{BoundaryMode, Dims};

    fn bin(dims: (usize, usize, usize), pore: &[(usize, usize, usize)]) -> BinaryVolume {
        let d = Dims::new(dims.0, dims.1, dims.2).unwrap();
        let mut data = vec![1u8; d.total() as usize];
        for &(z, y, x) in pore {
            data[(z * dims.1 + y) * dims.2 + x] = 0;
        }
        BinaryVolume::new(d, data).unwrap()
    }

    #[test]
    fn table_case_sizes() {
        let t = table();
        assert!(t[0].is_empty());
        assert!(t[255].is_empty());
        // single pore corner: one triangle, and likewise its complement
        assert_eq!(t[1].len(), 1);
        assert_eq!(t[1 << 7].len(), 1);
        assert_eq!(t[254].len(), 1);
        // two pore corners sharing an edge: quad, two triangles
        assert_eq!(t[0b11].len(), 2);
        // two pore corners on a face diagonal: two separate triangles
        assert_eq!(t[0b1001].len(), 2);
        // two antipodal pore corners: two separate triangles
        assert_eq!(t[0b1000_0001].len(), 2);
        // every ring decomposes into triangles: 3 vertices per face, all
        // edge ids valid
        for tris in t.iter() {
            for tri in tris {
                assert!(tri.iter().all(|&e| e < 12));
            }
        }
    }

    #[test]
    fn single_pore_voxel_is_octahedron() {
        let v = bin((3, 3, 3), &[(1, 1, 1)]);
        let mesh = extract(&v, &VoxelSpacing::unit_px(), None);
        assert_eq!(mesh.vertices.len(), 6);
        assert_eq!(mesh.faces.len(), 8);
        let edges = EdgeTable::build(&mesh);
        assert!(edges.is_watertight());
        let chi = mesh_euler(&mesh, &edges);
        assert_eq!(chi.chi_object, 1);
        // octahedron with vertices 0.5 from the center along each axis
        let a = mesh_surface_area(&mesh);
        assert!((a - 3.0f64.sqrt()).abs() < 1e-12, "area {a}");
    }

    #[test]
    fn normals_point_away_from_pore() {
        let v = bin((3, 3, 3), &[(1, 1, 1)]);
        let mesh = extract(&v, &VoxelSpacing::unit_px(), None);
        let c = [1.0, 1.0, 1.0];
        for f in 0..mesh.faces.len() {
            let n = mesh.face_normal(f);
            let va = mesh.vertices[mesh.faces[f][0] as usize];
            let outward = [va[0] - c[0], va[1] - c[1], va[2] - c[2]];
            let d = n[0] * outward[0] + n[1] * outward[1] + n[2] * outward[2];
            assert!(d > 0.0, "face {f} normal {n:?} points into the pore");
        }
    }

    #[test]
    fn convex_body_positive_curvature() {
        let pore: Vec<_> = (1..3)
            .flat_map(|z| (1..3).flat_map(move |y| (1..3).map(move |x| (z, y, x))))
            .collect();
        let v = bin((4, 4, 4), &pore);
        let mesh = extract(&v, &VoxelSpacing::unit_px(), None);
        let edges = EdgeTable::build(&mesh);
        assert!(edges.is_watertight());
        let m = mesh_total_mean_curvature(&mesh, &edges);
        assert!(m > 0.0);
    }

    #[test]
    fn watertight_on_random_padded_volumes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let (nz, ny, nx) = (
                rng.random_range(2..8usize),
                rng.random_range(2..8usize),
                rng.random_range(2..8usize),
            );
            let d = Dims::new(nz, ny, nx).unwrap();
            let data: Vec<u8> = (0..d.total()).map(|_| rng.random_range(0..2u8)).collect();
            let v = BinaryVolume::new(d, data).unwrap();
            let padded = crate::binarize::pad_solid(&v);
            let mesh = crate::mesh::extract_interface(
                &padded,
                &VoxelSpacing::unit_px(),
                MeshStyle::MarchingCubes,
                BoundaryMode::PadSolid,
            )
            .unwrap();
            let edges = EdgeTable::build(&mesh);
            if !mesh.is_empty() {
                assert!(
                    edges.is_watertight(),
                    "non-watertight mesh for volume {:?}",
                    v.values()
                );
                // 2E = 3F on closed triangle meshes
                assert_eq!(2 * edges.len(), 3 * mesh.faces.len());
                let chi = mesh_euler(&mesh, &edges);
                assert_eq!(chi.chi_surface % 2, 0);
            }
        }
    }
}
