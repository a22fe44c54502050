//! File formats: TIFF stacks, binary STL, OBJ wireframes.

mod obj;
mod stack;
mod stl;

pub use obj::{write_obj_mesh_wireframe, write_obj_voxel_wireframe};
pub use stack::{read_stack, read_stack_with_progress, write_binary_stack, write_intensity_stack};
pub use stl::write_stl;
