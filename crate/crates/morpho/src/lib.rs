//! Morphometric analysis of 3D porous-media image stacks.
//!
//! Computes the four strength-law morphometers of the pore phase, porosity,
//! interface surface area, total mean curvature, and Euler characteristic,
//! in physical units, through two consistent geometry paths: a closed-form
//! voxel path streaming over the cubical complex, and a mesh path evaluating
//! a triangulated interface.

pub mod binarize;
pub mod error;
pub mod io;
pub mod mesh;
pub mod morphology;
pub mod pipeline;
pub mod report;
pub mod shapes;
pub mod volume;
pub mod voxel;

pub use error::{MorphoError, Result};
pub use volume::{
    intensity_extrema, world_coords, BinaryVolume, BoundaryMode, Dims, IntensityVolume,
    PhasePolarity, VoxelSpacing,
};

/// Optional per-slab progress callback `(slabs_done, slabs_total)` used by
/// the long-running scans; `slabs_total` is 0 when unknown up front.
pub type SlabProgress<'a> = Option<&'a (dyn Fn(u64, u64) + Sync)>;

// The guide's code blocks run as doctests so the book can never drift from
// the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }

    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(Volumes, "../../../book/src/volumes.md");
    chapter!(VoxelPath, "../../../book/src/voxel-path.md");
    chapter!(MeshPath, "../../../book/src/mesh-path.md");
    chapter!(Shapes, "../../../book/src/shapes.md");
    chapter!(IoFormats, "../../../book/src/io-formats.md");
    chapter!(CommandLine, "../../../book/src/cli.md");
}
