//! Brute-force oracles shared by the integration suites. These deliberately
//! use direct enumeration into hash sets and per-element loops, independent
//! of the streaming window pass they verify.
#![allow(dead_code)] // each test target uses its own subset

use std::collections::HashSet;

use morpho::volume::{BinaryVolume, Dims};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn bin_from(dims: (usize, usize, usize), data: Vec<u8>) -> BinaryVolume {
    BinaryVolume::new(Dims::new(dims.0, dims.1, dims.2).unwrap(), data).unwrap()
}

pub fn random_volume(dims: (usize, usize, usize), pore_frac: f64, seed: u64) -> BinaryVolume {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = dims.0 * dims.1 * dims.2;
    let data = (0..n)
        .map(|_| if rng.random::<f64>() < pore_frac { 0u8 } else { 1u8 })
        .collect();
    bin_from(dims, data)
}

pub fn random_dims(rng: &mut ChaCha8Rng, max: usize) -> (usize, usize, usize) {
    (
        rng.random_range(1..=max),
        rng.random_range(1..=max),
        rng.random_range(1..=max),
    )
}

/// Exposed-face counts per axis `(x, y, z)` by direct neighbor scanning.
/// `wrap` selects toroidal adjacency; `outside_solid` counts domain-boundary
/// faces as interface (the padded semantics, applied without padding).
pub fn oracle_exposed_faces(
    bin: &BinaryVolume,
    wrap: bool,
    outside_solid: bool,
) -> (u64, u64, u64) {
    let d = bin.dims();
    let mut counts = [0u64; 3]; // x, y, z
    let dirs: [(usize, (i64, i64, i64)); 3] =
        [(0, (0, 0, 1)), (1, (0, 1, 0)), (2, (1, 0, 0))];
    for z in 0..d.n_z {
        for y in 0..d.n_y {
            for x in 0..d.n_x {
                if !bin.is_pore(z, y, x) {
                    continue;
                }
                for &(axis, (dz, dy, dx)) in &dirs {
                    for sign in [-1i64, 1] {
                        let nz = z as i64 + sign * dz;
                        let ny = y as i64 + sign * dy;
                        let nx = x as i64 + sign * dx;
                        let neighbor_solid = if wrap {
                            let wz = nz.rem_euclid(d.n_z as i64) as usize;
                            let wy = ny.rem_euclid(d.n_y as i64) as usize;
                            let wx = nx.rem_euclid(d.n_x as i64) as usize;
                            !bin.is_pore(wz, wy, wx)
                        } else if nz < 0
                            || ny < 0
                            || nx < 0
                            || nz >= d.n_z as i64
                            || ny >= d.n_y as i64
                            || nx >= d.n_x as i64
                        {
                            outside_solid
                        } else {
                            !bin.is_pore(nz as usize, ny as usize, nx as usize)
                        };
                        if neighbor_solid {
                            counts[axis] += 1;
                        }
                    }
                }
            }
        }
    }
    (counts[0], counts[1], counts[2])
}

/// Euler characteristic of the pore set under 6-connectivity by explicit
/// inclusion-exclusion over the adjacency complex: one 0-cell per pore
/// voxel, one 1-cell per face-adjacent pair, one 2-cell per fully-pore 2x2
/// square, one 3-cell per fully-pore 2x2x2 cube.
pub fn oracle_chi_six(bin: &BinaryVolume) -> i64 {
    let pore: HashSet<(i64, i64, i64)> = iter_pore(bin).collect();
    let mut edges: HashSet<((i64, i64, i64), usize)> = HashSet::new();
    let mut squares: HashSet<((i64, i64, i64), usize)> = HashSet::new();
    let mut cubes: HashSet<(i64, i64, i64)> = HashSet::new();
    let offs = [(0, 0, 1), (0, 1, 0), (1, 0, 0)];
    for &(z, y, x) in &pore {
        for (axis, &(dz, dy, dx)) in offs.iter().enumerate() {
            if pore.contains(&(z + dz, y + dy, x + dx)) {
                edges.insert(((z, y, x), axis));
            }
        }
        // squares spanned by pairs of axes, anchored at the voxel
        let planes = [
            [(0, 0, 1), (0, 1, 0), (0, 1, 1)], // xy plane
            [(0, 1, 0), (1, 0, 0), (1, 1, 0)], // yz plane
            [(0, 0, 1), (1, 0, 0), (1, 0, 1)], // zx plane
        ];
        for (pi, plane) in planes.iter().enumerate() {
            if plane
                .iter()
                .all(|&(dz, dy, dx)| pore.contains(&(z + dz, y + dy, x + dx)))
            {
                squares.insert(((z, y, x), pi));
            }
        }
        let mut full = true;
        for dz in 0..2 {
            for dy in 0..2 {
                for dx in 0..2 {
                    full &= pore.contains(&(z + dz, y + dy, x + dx));
                }
            }
        }
        if full {
            cubes.insert((z, y, x));
        }
    }
    pore.len() as i64 - edges.len() as i64 + squares.len() as i64 - cubes.len() as i64
}

/// Euler characteristic of the pore set under 26-connectivity: alternating
/// count of the distinct vertices, edges, faces, and cubes of the union of
/// closed unit voxels.
pub fn oracle_chi_twentysix(bin: &BinaryVolume) -> i64 {
    let mut verts: HashSet<(i64, i64, i64)> = HashSet::new();
    let mut edges: HashSet<((i64, i64, i64), usize)> = HashSet::new();
    let mut faces: HashSet<((i64, i64, i64), usize)> = HashSet::new();
    let mut cubes = 0i64;
    for (z, y, x) in iter_pore(bin) {
        cubes += 1;
        for dz in 0..2 {
            for dy in 0..2 {
                for dx in 0..2 {
                    verts.insert((z + dz, y + dy, x + dx));
                }
            }
        }
        // edges along x, y, z anchored at their low corner
        for (axis, corners) in [
            [(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0)], // along x
            [(0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 0, 1)], // along y
            [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1)], // along z
        ]
        .iter()
        .enumerate()
        {
            for &(dz, dy, dx) in corners {
                edges.insert(((z + dz, y + dy, x + dx), axis));
            }
        }
        // faces normal to x, y, z anchored at their low corner
        faces.insert(((z, y, x), 0));
        faces.insert(((z, y, x + 1), 0));
        faces.insert(((z, y, x), 1));
        faces.insert(((z, y + 1, x), 1));
        faces.insert(((z, y, x), 2));
        faces.insert(((z + 1, y, x), 2));
    }
    verts.len() as i64 - edges.len() as i64 + faces.len() as i64 - cubes
}

/// Signed interface-edge tallies `(convex - concave)` per axis `(z, y, x)`
/// by direct window classification, open boundaries.
pub fn oracle_edge_net(bin: &BinaryVolume) -> (i64, i64, i64) {
    let d = bin.dims();
    let p = |z: usize, y: usize, x: usize| bin.is_pore(z, y, x) as i32;
    let mut net_z = 0i64;
    for z in 0..d.n_z {
        for y in 0..d.n_y.saturating_sub(1) {
            for x in 0..d.n_x.saturating_sub(1) {
                let s = p(z, y, x) + p(z, y, x + 1) + p(z, y + 1, x) + p(z, y + 1, x + 1);
                net_z += match s {
                    1 => 1,
                    3 => -1,
                    _ => 0,
                };
            }
        }
    }
    let mut net_y = 0i64;
    for z in 0..d.n_z.saturating_sub(1) {
        for y in 0..d.n_y {
            for x in 0..d.n_x.saturating_sub(1) {
                let s = p(z, y, x) + p(z, y, x + 1) + p(z + 1, y, x) + p(z + 1, y, x + 1);
                net_y += match s {
                    1 => 1,
                    3 => -1,
                    _ => 0,
                };
            }
        }
    }
    let mut net_x = 0i64;
    for z in 0..d.n_z.saturating_sub(1) {
        for y in 0..d.n_y.saturating_sub(1) {
            for x in 0..d.n_x {
                let s = p(z, y, x) + p(z, y + 1, x) + p(z + 1, y, x) + p(z + 1, y + 1, x);
                net_x += match s {
                    1 => 1,
                    3 => -1,
                    _ => 0,
                };
            }
        }
    }
    (net_z, net_y, net_x)
}

fn iter_pore(bin: &BinaryVolume) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
    let d = bin.dims();
    (0..d.n_z).flat_map(move |z| {
        (0..d.n_y).flat_map(move |y| {
            (0..d.n_x).filter_map(move |x| {
                bin.is_pore(z, y, x).then_some((z as i64, y as i64, x as i64))
            })
        })
    })
}

/// Exact count of lattice points inside the closed ball of radius `r`
/// centered on a lattice point.
pub fn digital_ball_count(r: i64) -> u64 {
    let rr = r * r;
    let mut count = 0u64;
    for z in -r..=r {
        for y in -r..=r {
            let rem = rr - z * z - y * y;
            if rem < 0 {
                continue;
            }
            let reach = (rem as f64).sqrt().floor() as i64;
            // correct any floating-point edge slip
            let mut reach = reach;
            while (reach + 1) * (reach + 1) <= rem {
                reach += 1;
            }
            while reach > 0 && reach * reach > rem {
                reach -= 1;
            }
            count += (2 * reach + 1) as u64;
        }
    }
    count
}

/// True when the volume is well-composed: no 2x2 diagonal pattern in any
/// axis plane and no 2x2x2 window whose pore or solid set is exactly an
/// antipodal corner pair. Boundaries count as solid (matching the padded
/// analysis the identity suite runs on).
pub fn well_composed(bin: &BinaryVolume) -> bool {
    let d = bin.dims();
    let pore = |z: i64, y: i64, x: i64| -> u32 {
        if z < 0 || y < 0 || x < 0 || z >= d.n_z as i64 || y >= d.n_y as i64 || x >= d.n_x as i64 {
            0
        } else {
            bin.is_pore(z as usize, y as usize, x as usize) as u32
        }
    };
    for z in -1..d.n_z as i64 {
        for y in -1..d.n_y as i64 {
            for x in -1..d.n_x as i64 {
                let b = [
                    pore(z, y, x),
                    pore(z, y, x + 1),
                    pore(z, y + 1, x),
                    pore(z, y + 1, x + 1),
                    pore(z + 1, y, x),
                    pore(z + 1, y, x + 1),
                    pore(z + 1, y + 1, x),
                    pore(z + 1, y + 1, x + 1),
                ];
                // 2D diagonal checks in the three plane orientations
                let quads = [
                    [b[0], b[1], b[2], b[3]],
                    [b[0], b[1], b[4], b[5]],
                    [b[0], b[2], b[4], b[6]],
                ];
                for q in quads {
                    if q[0] == q[3] && q[1] == q[2] && q[0] != q[1] {
                        return false;
                    }
                }
                // 3D antipodal pair checks
                let total: u32 = b.iter().sum();
                if total == 2 {
                    for (i, j) in [(0, 7), (1, 6), (2, 5), (3, 4)] {
                        if b[i] == 1 && b[j] == 1 {
                            return false;
                        }
                    }
                }
                if total == 6 {
                    for (i, j) in [(0, 7), (1, 6), (2, 5), (3, 4)] {
                        if b[i] == 0 && b[j] == 0 {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Random unions of solid boxes and balls, used to produce pore phases that
/// are occasionally well-composed.
pub fn random_blob_volume(rng: &mut ChaCha8Rng, max_dim: usize) -> BinaryVolume {
    let dims = (
        rng.random_range(6..=max_dim),
        rng.random_range(6..=max_dim),
        rng.random_range(6..=max_dim),
    );
    let mut data = vec![1u8; dims.0 * dims.1 * dims.2];
    let shapes = rng.random_range(1..=4);
    for _ in 0..shapes {
        if rng.random::<bool>() {
            // box
            let lo = (
                rng.random_range(0..dims.0),
                rng.random_range(0..dims.1),
                rng.random_range(0..dims.2),
            );
            let hi = (
                rng.random_range(lo.0..dims.0),
                rng.random_range(lo.1..dims.1),
                rng.random_range(lo.2..dims.2),
            );
            for z in lo.0..=hi.0 {
                for y in lo.1..=hi.1 {
                    for x in lo.2..=hi.2 {
                        data[(z * dims.1 + y) * dims.2 + x] = 0;
                    }
                }
            }
        } else {
            // ball
            let c = (
                rng.random_range(0..dims.0) as f64,
                rng.random_range(0..dims.1) as f64,
                rng.random_range(0..dims.2) as f64,
            );
            let r = rng.random_range(2.0..=(max_dim as f64 / 3.0));
            for z in 0..dims.0 {
                for y in 0..dims.1 {
                    for x in 0..dims.2 {
                        let dz = z as f64 - c.0;
                        let dy = y as f64 - c.1;
                        let dx = x as f64 - c.2;
                        if dz * dz + dy * dy + dx * dx <= r * r {
                            data[(z * dims.1 + y) * dims.2 + x] = 0;
                        }
                    }
                }
            }
        }
    }
    bin_from(dims, data)
}
