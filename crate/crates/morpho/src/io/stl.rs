//! Binary little-endian STL export of the interface mesh.
//!
//! Layout: 80-byte header, 32-bit triangle count, then 50 bytes per
//! triangle (unit normal, three vertices, zero attribute count), so the file
//! size is exactly `84 + 50 * faces` bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{MorphoError, Result};
use crate::mesh::TriangleMesh;

/// Write the mesh as binary STL. Vertices are expected in world units
/// already; normals come from the face orientation.
pub fn write_stl(mesh: &TriangleMesh, path: &Path) -> Result<()> {
    if mesh.faces.len() as u64 > u32::MAX as u64 {
        return Err(MorphoError::Capacity(format!(
            "{} faces exceed the 32-bit STL triangle count",
            mesh.faces.len()
        )));
    }
    let file = File::create(path).map_err(|e| MorphoError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut header = [0u8; 80];
    let tag = b"morpho binary STL";
    header[..tag.len()].copy_from_slice(tag);
    w.write_all(&header).map_err(|e| MorphoError::io(path, e))?;
    w.write_all(&(mesh.faces.len() as u32).to_le_bytes())
        .map_err(|e| MorphoError::io(path, e))?;
    for (fi, face) in mesh.faces.iter().enumerate() {
        let n = mesh.face_normal(fi);
        let mut record = [0u8; 50];
        for (k, &v) in n.iter().enumerate() {
            record[k * 4..k * 4 + 4].copy_from_slice(&(v as f32).to_le_bytes());
        }
        for (vi, &idx) in face.iter().enumerate() {
            let vert = mesh.vertices[idx as usize];
            for (k, &c) in vert.iter().enumerate() {
                let at = 12 + vi * 12 + k * 4;
                record[at..at + 4].copy_from_slice(&(c as f32).to_le_bytes());
            }
        }
        w.write_all(&record).map_err(|e| MorphoError::io(path, e))?;
    }
    w.flush().map_err(|e| MorphoError::io(path, e))
}
