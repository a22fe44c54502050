//! Intensity-to-binary conversion with an explicit phase convention, plus the
//! one-voxel solid padding used to close interfaces at the domain box.
//!
//! The output convention is fixed: `0 = pore`, `1 = solid`. Polarity is
//! resolved here and never flips afterwards. Thresholds use the global
//! extrema with a fractional tolerance `epsilon` that absorbs near-extreme
//! noise:
//!
//! * pores dark:   `tau_low  = I_min + eps * (I_max - I_min)`, pore iff
//!   `I <= tau_low`
//! * pores bright: `tau_high = I_max - eps * (I_max - I_min)`, pore iff
//!   `I >= tau_high`
//!
//! Ties go to pore; both comparisons are inclusive on the pore branch.

use crate::error::{MorphoError, Result};
use crate::volume::{BinaryVolume, Dims, IntensityVolume, PhasePolarity};

/// Result of thresholding, with the resolved threshold and a degeneracy flag
/// for run metadata.
#[derive(Debug, Clone)]
pub struct Binarization {
    pub volume: BinaryVolume,
    /// The applied threshold (`tau_low` or `tau_high` depending on polarity).
    pub threshold: f64,
    /// True when the input had constant intensity; every voxel became pore.
    pub degenerate: bool,
}

/// Threshold an intensity volume into a strict `{0, 1}` pore/solid field.
///
/// `epsilon` must lie in `[0, 0.1]`. A constant-intensity input succeeds (all
/// voxels satisfy both inclusive comparisons and become pore) but is flagged
/// as degenerate.
pub fn binarize(
    vol: &IntensityVolume,
    polarity: PhasePolarity,
    epsilon: f64,
) -> Result<Binarization> {
    if !(epsilon.is_finite() && (0.0..=0.1).contains(&epsilon)) {
        return Err(MorphoError::Parameter(format!(
            "epsilon = {epsilon} outside [0, 0.1]"
        )));
    }
    let (lo, hi) = crate::volume::intensity_extrema(vol);
    let span = (hi - lo) as f64;
    let (threshold, pore): (f64, Box<dyn Fn(u16) -> bool>) = match polarity {
        PhasePolarity::PoresDark => {
            let tau = lo as f64 + epsilon * span;
            (tau, Box::new(move |v| (v as f64) <= tau))
        }
        PhasePolarity::PoresBright => {
            let tau = hi as f64 - epsilon * span;
            (tau, Box::new(move |v| (v as f64) >= tau))
        }
    };
    let data: Vec<u8> = vol
        .values()
        .iter()
        .map(|&v| if pore(v) { 0 } else { 1 })
        .collect();
    Ok(Binarization {
        volume: BinaryVolume::from_raw(vol.dims(), data),
        threshold,
        degenerate: lo == hi,
    })
}

/// Add a one-voxel solid border on every side.
///
/// Dims grow by 2 per axis; the interior is copied at offset `(1, 1, 1)` and
/// every new border voxel is solid. The pore voxel count is preserved
/// exactly.
pub fn pad_solid(bin: &BinaryVolume) -> BinaryVolume {
    let d = bin.dims();
    let padded = Dims::new(d.n_z + 2, d.n_y + 2, d.n_x + 2).expect("padded dims fit");
    let mut data = vec![1u8; padded.total() as usize];
    for z in 0..d.n_z {
        let src = bin.slice(z);
        for y in 0..d.n_y {
            let row = &src[y * d.n_x..(y + 1) * d.n_x];
            let start = ((z + 1) * padded.n_y + (y + 1)) * padded.n_x + 1;
            data[start..start + d.n_x].copy_from_slice(row);
        }
    }
    BinaryVolume::from_raw(padded, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::volume::IntensityVolume;

    fn vol(dims: (usize, usize, usize), data: Vec<u16>) -> IntensityVolume {
        IntensityVolume::new(Dims::new(dims.0, dims.1, dims.2).unwrap(), data).unwrap()
    }

    #[test]
    fn binary_input_eps_zero() {
        let v = vol((1, 1, 4), vec![0, 255, 0, 255]);
        let b = binarize(&v, PhasePolarity::PoresDark, 0.0).unwrap();
        assert_eq!(b.volume.values(), &[0, 1, 0, 1]);
        assert!(!b.degenerate);
        let b = binarize(&v, PhasePolarity::PoresBright, 0.0).unwrap();
        assert_eq!(b.volume.values(), &[1, 0, 1, 0]);
    }

    #[test]
    fn dark_threshold_formula() {
        // I_min=0, I_max=255, eps=0.02 -> tau_low = 5.1; 5 -> pore, 6 -> solid.
        let v = vol((1, 1, 4), vec![0, 5, 6, 255]);
        let b = binarize(&v, PhasePolarity::PoresDark, 0.02).unwrap();
        assert!((b.threshold - 5.1).abs() < 1e-12);
        assert_eq!(b.volume.values(), &[0, 0, 1, 1]);
    }

    #[test]
    fn bright_threshold_formula() {
        // tau_high = 249.9; 250 -> pore, 249 -> solid.
        let v = vol((1, 1, 4), vec![0, 249, 250, 255]);
        let b = binarize(&v, PhasePolarity::PoresBright, 0.02).unwrap();
        assert!((b.threshold - 249.9).abs() < 1e-12);
        assert_eq!(b.volume.values(), &[1, 1, 0, 0]);
    }

    #[test]
    fn epsilon_range_enforced() {
        let v = vol((1, 1, 2), vec![0, 255]);
        assert!(binarize(&v, PhasePolarity::PoresDark, -0.01).is_err());
        assert!(binarize(&v, PhasePolarity::PoresDark, 0.100001).is_err());
        assert!(binarize(&v, PhasePolarity::PoresDark, 0.1).is_ok());
    }

    #[test]
    fn constant_volume_is_degenerate_all_pore() {
        let v = vol((2, 2, 2), vec![7; 8]);
        for polarity in [PhasePolarity::PoresDark, PhasePolarity::PoresBright] {
            let b = binarize(&v, polarity, 0.05).unwrap();
            assert!(b.degenerate);
            assert!(b.volume.values().iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn pore_set_monotone_in_epsilon() {
        let data: Vec<u16> = (0..=255).collect();
        let v = vol((1, 16, 16), data);
        for polarity in [PhasePolarity::PoresDark, PhasePolarity::PoresBright] {
            let mut prev = binarize(&v, polarity, 0.0).unwrap().volume;
            for step in 1..=10 {
                let eps = step as f64 * 0.01;
                let cur = binarize(&v, polarity, eps).unwrap().volume;
                for (p, c) in prev.values().iter().zip(cur.values()) {
                    // pore (0) never reverts to solid as eps grows
                    assert!(*c <= *p);
                }
                prev = cur;
            }
        }
    }

    #[test]
    fn pad_solid_counts() {
        let d = Dims::new(2, 2, 2).unwrap();
        let b = BinaryVolume::new(d, vec![0; 8]).unwrap();
        let p = pad_solid(&b);
        assert_eq!(p.dims(), Dims::new(4, 4, 4).unwrap());
        assert_eq!(p.pore_count(), 8);
        assert_eq!(p.dims().total() - p.pore_count(), 56);
    }

    #[test]
    fn pad_solid_single_pore_centered() {
        let d = Dims::new(1, 1, 1).unwrap();
        let b = BinaryVolume::new(d, vec![0]).unwrap();
        let p = pad_solid(&b);
        assert_eq!(p.dims(), Dims::new(3, 3, 3).unwrap());
        assert_eq!(p.pore_count(), 1);
        assert!(p.is_pore(1, 1, 1));
    }

    #[test]
    fn pad_solid_idempotent_on_all_solid() {
        let d = Dims::new(2, 3, 4).unwrap();
        let b = BinaryVolume::new(d, vec![1; 24]).unwrap();
        let p = pad_solid(&b);
        assert_eq!(p.pore_count(), 0);
        assert!(p.values().iter().all(|&v| v == 1));
    }
}
