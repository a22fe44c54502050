//! Deterministic synthetic-volume generators used as validation oracles and
//! demo inputs.
//!
//! All generators sample voxel centers at integer coordinates and use closed
//! (`<=`) inclusion rules, so foreground counts are reproducible bit-for-bit
//! across runs and thread counts. Analytic expectations for an `a x b x c`
//! voxel box: `A = 2(ab + bc + ca)`, `M = pi (a + b + c)`, `chi = 1`; a torus
//! has `chi = 0`.

use rayon::prelude::*;

use crate::error::{MorphoError, Result};
use crate::volume::{Dims, IntensityVolume};

fn check_foreground(foreground: u8) -> Result<(u16, u16)> {
    match foreground {
        255 => Ok((255, 0)),
        0 => Ok((0, 255)),
        v => Err(MorphoError::Parameter(format!(
            "foreground must be 0 or 255, got {v}"
        ))),
    }
}

fn fill(dims: Dims, fg: u16, bg: u16, inside: impl Fn(usize, usize, usize) -> bool + Sync) -> IntensityVolume {
    let mut data = vec![0u16; dims.total() as usize];
    data.par_chunks_mut(dims.n_y * dims.n_x)
        .enumerate()
        .for_each(|(z, slab)| {
            for y in 0..dims.n_y {
                for x in 0..dims.n_x {
                    slab[y * dims.n_x + x] = if inside(z, y, x) { fg } else { bg };
                }
            }
        });
    IntensityVolume::new(dims, data).expect("dims match")
}

/// Digital ball: voxel `(z, y, x)` is foreground iff
/// `(z-c_z)^2 + (y-c_y)^2 + (x-c_x)^2 <= r^2`.
///
/// The sphere may extend past the domain; the returned flag is true when it
/// was clipped.
pub fn generate_sphere(
    dims: Dims,
    center: (f64, f64, f64),
    radius: f64,
    foreground: u8,
) -> Result<(IntensityVolume, bool)> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(MorphoError::Parameter(format!(
            "sphere radius {radius} must be positive"
        )));
    }
    let (fg, bg) = check_foreground(foreground)?;
    let (c_z, c_y, c_x) = center;
    let rr = radius * radius;
    let vol = fill(dims, fg, bg, |z, y, x| {
        let dz = z as f64 - c_z;
        let dy = y as f64 - c_y;
        let dx = x as f64 - c_x;
        dz * dz + dy * dy + dx * dx <= rr
    });
    let clipped = c_z - radius < 0.0
        || c_y - radius < 0.0
        || c_x - radius < 0.0
        || c_z + radius > (dims.n_z - 1) as f64
        || c_y + radius > (dims.n_y - 1) as f64
        || c_x + radius > (dims.n_x - 1) as f64;
    Ok((vol, clipped))
}

/// Axis-aligned box of foreground voxels with inclusive corners.
pub fn generate_box(
    dims: Dims,
    lo: (usize, usize, usize),
    hi: (usize, usize, usize),
    foreground: u8,
) -> Result<IntensityVolume> {
    let (fg, bg) = check_foreground(foreground)?;
    if lo.0 > hi.0 || lo.1 > hi.1 || lo.2 > hi.2 {
        return Err(MorphoError::Parameter(format!(
            "box corners lo {lo:?} exceed hi {hi:?}"
        )));
    }
    if !dims.contains(hi.0, hi.1, hi.2) {
        return Err(MorphoError::Parameter(format!(
            "box corner {hi:?} outside dims ({}, {}, {})",
            dims.n_z, dims.n_y, dims.n_x
        )));
    }
    Ok(fill(dims, fg, bg, |z, y, x| {
        (lo.0..=hi.0).contains(&z) && (lo.1..=hi.1).contains(&y) && (lo.2..=hi.2).contains(&x)
    }))
}

/// Solid torus around the z axis: voxel included iff
/// `(sqrt((x-c_x)^2 + (y-c_y)^2) - R)^2 + (z-c_z)^2 <= r^2`.
pub fn generate_torus(
    dims: Dims,
    center: (f64, f64, f64),
    major_radius: f64,
    minor_radius: f64,
    foreground: u8,
) -> Result<IntensityVolume> {
    if !(minor_radius.is_finite() && major_radius.is_finite())
        || minor_radius <= 0.0
        || minor_radius >= major_radius
    {
        return Err(MorphoError::Parameter(format!(
            "torus radii must satisfy 0 < minor ({minor_radius}) < major ({major_radius})"
        )));
    }
    let (fg, bg) = check_foreground(foreground)?;
    let (c_z, c_y, c_x) = center;
    let rr = minor_radius * minor_radius;
    Ok(fill(dims, fg, bg, |z, y, x| {
        let dz = z as f64 - c_z;
        let dy = y as f64 - c_y;
        let dx = x as f64 - c_x;
        let ring = (dx * dx + dy * dy).sqrt() - major_radius;
        ring * ring + dz * dz <= rr
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_fg(v: &IntensityVolume) -> usize {
        v.values().iter().filter(|&&p| p == 255).count()
    }

    #[test]
    fn tiny_sphere_single_voxel() {
        let dims = Dims::new(3, 3, 3).unwrap();
        let (v, clipped) = generate_sphere(dims, (1.0, 1.0, 1.0), 0.5, 255).unwrap();
        assert_eq!(count_fg(&v), 1);
        assert_eq!(v.get(1, 1, 1), 255);
        assert!(!clipped);
    }

    #[test]
    fn huge_radius_covers_domain() {
        let dims = Dims::new(4, 4, 4).unwrap();
        let (v, clipped) = generate_sphere(dims, (1.5, 1.5, 1.5), 100.0, 255).unwrap();
        assert_eq!(count_fg(&v), 64);
        assert!(clipped);
    }

    #[test]
    fn sphere_rejects_bad_radius() {
        let dims = Dims::new(3, 3, 3).unwrap();
        assert!(generate_sphere(dims, (1.0, 1.0, 1.0), 0.0, 255).is_err());
        assert!(generate_sphere(dims, (1.0, 1.0, 1.0), -1.0, 255).is_err());
        assert!(generate_sphere(dims, (1.0, 1.0, 1.0), 1.0, 7).is_err());
    }

    #[test]
    fn sphere_lattice_symmetry() {
        // 48 axis symmetries of the lattice about an integer center
        let dims = Dims::new(9, 9, 9).unwrap();
        let (v, _) = generate_sphere(dims, (4.0, 4.0, 4.0), 3.2, 255).unwrap();
        let get = |z: i64, y: i64, x: i64| v.get(z as usize, y as usize, x as usize);
        for z in 0..9i64 {
            for y in 0..9i64 {
                for x in 0..9i64 {
                    let (dz, dy, dx) = (z - 4, y - 4, x - 4);
                    // sign flips
                    assert_eq!(get(z, y, x), get(4 - dz, 4 + dy, 4 + dx));
                    assert_eq!(get(z, y, x), get(4 + dz, 4 - dy, 4 + dx));
                    assert_eq!(get(z, y, x), get(4 + dz, 4 + dy, 4 - dx));
                    // axis permutations
                    assert_eq!(get(z, y, x), get(4 + dy, 4 + dz, 4 + dx));
                    assert_eq!(get(z, y, x), get(4 + dx, 4 + dy, 4 + dz));
                }
            }
        }
    }

    #[test]
    fn box_examples() {
        let dims = Dims::new(8, 8, 8).unwrap();
        let v = generate_box(dims, (2, 2, 2), (2, 2, 2), 255).unwrap();
        assert_eq!(count_fg(&v), 1);
        let v = generate_box(dims, (1, 1, 1), (2, 3, 4), 255).unwrap();
        assert_eq!(count_fg(&v), 2 * 3 * 4);
        let v = generate_box(dims, (0, 0, 0), (7, 7, 7), 255).unwrap();
        assert_eq!(count_fg(&v), 512);
        assert!(generate_box(dims, (3, 3, 3), (2, 3, 3), 255).is_err());
        assert!(generate_box(dims, (0, 0, 0), (8, 7, 7), 255).is_err());
    }

    #[test]
    fn torus_parameter_checks() {
        let dims = Dims::new(16, 16, 16).unwrap();
        assert!(generate_torus(dims, (8.0, 8.0, 8.0), 2.0, 2.0, 255).is_err());
        assert!(generate_torus(dims, (8.0, 8.0, 8.0), 2.0, 3.0, 255).is_err());
        assert!(generate_torus(dims, (8.0, 8.0, 8.0), 5.0, 2.0, 255).is_ok());
    }

    #[test]
    fn inverted_foreground() {
        let dims = Dims::new(3, 3, 3).unwrap();
        let (v, _) = generate_sphere(dims, (1.0, 1.0, 1.0), 0.5, 0).unwrap();
        assert_eq!(v.get(1, 1, 1), 0);
        assert_eq!(v.get(0, 0, 0), 255);
    }
}
