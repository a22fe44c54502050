//! 3D morphological stabilization: pore opening followed by solid closing,
//! both with Euclidean ball structuring elements.
//!
//! The structuring element of radius `r` contains every offset
//! `(dz, dy, dx)` with `dz^2 + dy^2 + dx^2 <= r^2`. Erosions and dilations
//! are evaluated through an exact squared Euclidean distance transform
//! (separable parabola sweeps), so a pass over the volume costs the same for
//! every radius. Out-of-domain voxels are treated as solid throughout.

use rayon::prelude::*;

use crate::error::{MorphoError, Result};
use crate::volume::{BinaryVolume, Dims};

const UNREACHED: u32 = u32::MAX;

/// Pore opening with radius `r_open`, then solid closing with radius
/// `r_close`. Radii of zero leave the corresponding stage out; `(0, 0)`
/// returns the input unchanged.
pub fn morph_stabilize(bin: &BinaryVolume, r_open: u32, r_close: u32) -> Result<BinaryVolume> {
    let d = bin.dims();
    let min_dim = d.n_z.min(d.n_y).min(d.n_x) as u64;
    for (name, r) in [("open", r_open), ("close", r_close)] {
        if (r as u64) * 4 > min_dim {
            return Err(MorphoError::Parameter(format!(
                "{name} radius {r} exceeds the sanity bound min(dims)/4 = {}",
                min_dim / 4
            )));
        }
    }
    let mut out = bin.clone();
    if r_open > 0 {
        out = dilate_pore(&erode_pore(&out, r_open), r_open);
    }
    if r_close > 0 {
        out = erode_solid(&dilate_solid(&out, r_close), r_close);
    }
    Ok(out)
}

/// Erosion of the pore phase: a voxel stays pore iff the whole ball around it
/// is pore (out-of-domain counts as solid).
pub fn erode_pore(bin: &BinaryVolume, r: u32) -> BinaryVolume {
    let rr = (r as u64) * (r as u64);
    let dist = sq_distance_to(bin, 1);
    threshold(bin.dims(), |i, outside_sq| {
        let keep = bin.values()[i] == 0 && dist[i] as u64 > rr && outside_sq > rr;
        !keep as u8
    })
}

/// Dilation of the pore phase: a voxel becomes pore iff any in-domain pore
/// voxel lies within the ball.
pub fn dilate_pore(bin: &BinaryVolume, r: u32) -> BinaryVolume {
    let rr = (r as u64) * (r as u64);
    let dist = sq_distance_to(bin, 0);
    threshold(bin.dims(), |i, _| {
        let pore = dist[i] as u64 <= rr;
        !pore as u8
    })
}

/// Dilation of the solid phase; the out-of-domain solid counts as a source.
pub fn dilate_solid(bin: &BinaryVolume, r: u32) -> BinaryVolume {
    let rr = (r as u64) * (r as u64);
    let dist = sq_distance_to(bin, 1);
    threshold(bin.dims(), |i, outside_sq| {
        let solid = dist[i] as u64 <= rr || outside_sq <= rr;
        solid as u8
    })
}

/// Erosion of the solid phase: a voxel stays solid iff no in-domain pore
/// voxel lies within the ball.
pub fn erode_solid(bin: &BinaryVolume, r: u32) -> BinaryVolume {
    let rr = (r as u64) * (r as u64);
    let dist = sq_distance_to(bin, 0);
    threshold(bin.dims(), |i, _| {
        let keep = bin.values()[i] == 1 && dist[i] as u64 > rr;
        keep as u8
    })
}

/// Build a volume from a per-voxel rule receiving the linear index and the
/// squared distance to the nearest out-of-domain voxel.
fn threshold(dims: Dims, rule: impl Fn(usize, u64) -> u8 + Sync) -> BinaryVolume {
    let (n_z, n_y, n_x) = (dims.n_z, dims.n_y, dims.n_x);
    let mut data = vec![0u8; dims.total() as usize];
    data.par_chunks_mut(n_y * n_x)
        .enumerate()
        .for_each(|(z, slab)| {
            let dz = ((z + 1).min(n_z - z)) as u64;
            for y in 0..n_y {
                let dy = ((y + 1).min(n_y - y)) as u64;
                let dzy = (dz * dz).min(dy * dy);
                for x in 0..n_x {
                    let dx = ((x + 1).min(n_x - x)) as u64;
                    let outside_sq = dzy.min(dx * dx);
                    let i = (z * n_y + y) * n_x + x;
                    slab[y * n_x + x] = rule(i, outside_sq);
                }
            }
        });
    BinaryVolume::from_raw(dims, data)
}

/// Exact squared Euclidean distance to the nearest voxel of `source_value`
/// (0 = pore, 1 = solid). Voxels unreachable from any source hold
/// `u32::MAX`.
fn sq_distance_to(bin: &BinaryVolume, source_value: u8) -> Vec<u32> {
    let d = bin.dims();
    let (n_z, n_y, n_x) = (d.n_z, d.n_y, d.n_x);
    let mut g = vec![UNREACHED; d.total() as usize];

    // Pass 1: squared distance along x within each row, by two linear sweeps.
    g.par_chunks_mut(n_x)
        .zip(bin.values().par_chunks(n_x))
        .for_each(|(row, src)| {
            let mut run: u32 = UNREACHED;
            for x in 0..n_x {
                if src[x] == source_value {
                    run = 0;
                } else if run != UNREACHED {
                    run = run.saturating_add(1);
                }
                row[x] = run;
            }
            run = UNREACHED;
            for x in (0..n_x).rev() {
                if src[x] == source_value {
                    run = 0;
                } else if run != UNREACHED {
                    run = run.saturating_add(1);
                }
                row[x] = row[x].min(run);
            }
            for v in row.iter_mut() {
                if *v != UNREACHED {
                    *v = v.saturating_mul(*v);
                }
            }
        });

    // Pass 2: parabola envelope along y, per z-slab.
    g.par_chunks_mut(n_y * n_x).for_each(|slab| {
        let mut scratch = EnvelopeScratch::new(n_y);
        for x in 0..n_x {
            scratch.load(n_y, |y| slab[y * n_x + x]);
            scratch.transform();
            scratch.store(n_y, |y, v| slab[y * n_x + x] = v);
        }
    });

    // Pass 3: parabola envelope along z. Columns stride across slabs, so each
    // y-stripe is gathered into a compact [z][x] buffer first to keep the
    // sweep cache-resident.
    let plane = n_y * n_x;
    let mut stripe = vec![0u32; n_z * n_x];
    let mut scratch = EnvelopeScratch::new(n_z);
    for y in 0..n_y {
        for z in 0..n_z {
            let row = &g[z * plane + y * n_x..z * plane + (y + 1) * n_x];
            stripe[z * n_x..(z + 1) * n_x].copy_from_slice(row);
        }
        for x in 0..n_x {
            scratch.load(n_z, |z| stripe[z * n_x + x]);
            scratch.transform();
            scratch.store(n_z, |z, v| stripe[z * n_x + x] = v);
        }
        for z in 0..n_z {
            let row = &mut g[z * plane + y * n_x..z * plane + (y + 1) * n_x];
            row.copy_from_slice(&stripe[z * n_x..(z + 1) * n_x]);
        }
    }
    g
}

/// Scratch buffers for the 1D lower-envelope distance transform
/// (Felzenszwalb & Huttenlocher). Inputs are exact squared distances, so all
/// comparisons that matter resolve on integer-valued parabolas.
struct EnvelopeScratch {
    f: Vec<f64>,
    d: Vec<f64>,
    v: Vec<usize>,
    z: Vec<f64>,
}

const FAR: f64 = 1e18;

impl EnvelopeScratch {
    fn new(n: usize) -> Self {
        EnvelopeScratch {
            f: vec![0.0; n],
            d: vec![0.0; n],
            v: vec![0; n],
            z: vec![0.0; n + 1],
        }
    }

    fn load(&mut self, n: usize, get: impl Fn(usize) -> u32) {
        for i in 0..n {
            let raw = get(i);
            self.f[i] = if raw == UNREACHED { FAR } else { raw as f64 };
        }
    }

    fn transform(&mut self) {
        let n = self.f.len();
        let (f, d, v, z) = (&self.f, &mut self.d, &mut self.v, &mut self.z);
        let mut k = 0usize;
        v[0] = 0;
        z[0] = f64::NEG_INFINITY;
        z[1] = f64::INFINITY;
        for q in 1..n {
            loop {
                let p = v[k];
                let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64))
                    / ((2 * q - 2 * p) as f64);
                if s <= z[k] {
                    k -= 1;
                } else {
                    k += 1;
                    v[k] = q;
                    z[k] = s;
                    z[k + 1] = f64::INFINITY;
                    break;
                }
            }
        }
        k = 0;
        for (q, out) in d.iter_mut().enumerate() {
            while z[k + 1] < q as f64 {
                k += 1;
            }
            let p = v[k];
            *out = ((q as f64 - p as f64) * (q as f64 - p as f64)) + f[p];
        }
    }

    fn store(&self, n: usize, mut put: impl FnMut(usize, u32)) {
        for i in 0..n {
            let v = self.d[i];
            put(i, if v >= UNREACHED as f64 { UNREACHED } else { v as u32 });
        }
    }
}
