//! TIFF stack reading and binary QC stack writing.
//!
//! Input is either one multi-page grayscale TIFF (8- or 16-bit unsigned) or
//! a directory of single-image TIFF slices ordered by lexicographic
//! filename. Slice index becomes the z axis. QC output is a multi-page
//! 8-bit stack with pore = 0 and solid = 255, so it round-trips through
//! [`read_stack`] + `binarize(PoresDark, 0)` to the identical binary volume
//! (except for the degenerate all-solid stack, which thresholding maps to
//! all-pore by the constant-input rule).

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use tiff::decoder::{Decoder, DecodingResult};
use tiff::encoder::{colortype, TiffEncoder};
use tiff::ColorType;

use crate::error::{MorphoError, Result};
use crate::volume::{BinaryVolume, Dims, IntensityVolume};
use crate::SlabProgress;

/// Read an image stack from a multi-page TIFF file or a directory of slices.
pub fn read_stack(path: &Path) -> Result<IntensityVolume> {
    read_stack_with_progress(path, None)
}

/// [`read_stack`] with per-slice progress reporting.
pub fn read_stack_with_progress(path: &Path, progress: SlabProgress<'_>) -> Result<IntensityVolume> {
    if path.is_dir() {
        read_directory(path, progress)
    } else {
        read_multipage(path, progress)
    }
}

struct SliceAccumulator {
    width: usize,
    height: usize,
    slices: Vec<Vec<u16>>,
}

impl SliceAccumulator {
    fn new() -> Self {
        SliceAccumulator {
            width: 0,
            height: 0,
            slices: Vec::new(),
        }
    }

    fn push(&mut self, context: &Path, width: u32, height: u32, data: Vec<u16>) -> Result<()> {
        let (w, h) = (width as usize, height as usize);
        if self.slices.is_empty() {
            self.width = w;
            self.height = h;
        } else if (w, h) != (self.width, self.height) {
            return Err(MorphoError::Format(format!(
                "slice {} in {} is {}x{}, expected {}x{}",
                self.slices.len(),
                context.display(),
                w,
                h,
                self.width,
                self.height
            )));
        }
        if data.len() != w * h {
            return Err(MorphoError::Format(format!(
                "slice {} in {} has {} samples, expected {}",
                self.slices.len(),
                context.display(),
                data.len(),
                w * h
            )));
        }
        self.slices.push(data);
        Ok(())
    }

    fn finish(self) -> Result<IntensityVolume> {
        if self.slices.is_empty() {
            return Err(MorphoError::EmptyInput("stack contains no slices".into()));
        }
        let dims = Dims::new(self.slices.len(), self.height, self.width)?;
        let mut data = Vec::with_capacity(dims.total() as usize);
        for slice in self.slices {
            data.extend_from_slice(&slice);
        }
        IntensityVolume::new(dims, data)
    }
}

fn decode_current<R: std::io::Read + std::io::Seek>(
    decoder: &mut Decoder<R>,
    context: &Path,
) -> Result<(u32, u32, Vec<u16>)> {
    let color = decoder
        .colortype()
        .map_err(|e| MorphoError::Format(format!("{}: {e}", context.display())))?;
    match color {
        ColorType::Gray(8) | ColorType::Gray(16) => {}
        other => {
            return Err(MorphoError::Format(format!(
                "{}: unsupported color type {other:?}, expected 8- or 16-bit grayscale",
                context.display()
            )))
        }
    }
    let (w, h) = decoder
        .dimensions()
        .map_err(|e| MorphoError::Format(format!("{}: {e}", context.display())))?;
    let image = decoder
        .read_image()
        .map_err(|e| MorphoError::Format(format!("{}: {e}", context.display())))?;
    let data = match image {
        DecodingResult::U8(v) => v.into_iter().map(u16::from).collect(),
        DecodingResult::U16(v) => v,
        _ => {
            return Err(MorphoError::Format(format!(
                "{}: unsupported sample format, expected unsigned 8- or 16-bit",
                context.display()
            )))
        }
    };
    Ok((w, h, data))
}

fn read_multipage(path: &Path, progress: SlabProgress<'_>) -> Result<IntensityVolume> {
    let file = File::open(path).map_err(|e| MorphoError::io(path, e))?;
    let mut decoder = Decoder::new(BufReader::new(file))
        .map_err(|e| MorphoError::Format(format!("{}: {e}", path.display())))?;
    let mut acc = SliceAccumulator::new();
    loop {
        let (w, h, data) = decode_current(&mut decoder, path)?;
        acc.push(path, w, h, data)?;
        if let Some(p) = progress {
            p(acc.slices.len() as u64, 0);
        }
        if !decoder.more_images() {
            break;
        }
        decoder
            .next_image()
            .map_err(|e| MorphoError::Format(format!("{}: {e}", path.display())))?;
    }
    acc.finish()
}

fn read_directory(path: &Path, progress: SlabProgress<'_>) -> Result<IntensityVolume> {
    let mut names: Vec<_> = std::fs::read_dir(path)
        .map_err(|e| MorphoError::io(path, e))?
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| MorphoError::io(path, e))?
        .into_iter()
        .map(|entry| entry.path())
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|e| e.to_str())
                    .map(|e| e.eq_ignore_ascii_case("tif") || e.eq_ignore_ascii_case("tiff"))
                    .unwrap_or(false)
        })
        .collect();
    names.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    let total = names.len() as u64;
    let mut acc = SliceAccumulator::new();
    for (i, slice_path) in names.iter().enumerate() {
        let file = File::open(slice_path).map_err(|e| MorphoError::io(slice_path, e))?;
        let mut decoder = Decoder::new(BufReader::new(file))
            .map_err(|e| MorphoError::Format(format!("{}: {e}", slice_path.display())))?;
        let (w, h, data) = decode_current(&mut decoder, slice_path)?;
        acc.push(slice_path, w, h, data)?;
        if let Some(p) = progress {
            p(i as u64 + 1, total);
        }
    }
    acc.finish()
}

/// Write an intensity volume as a multi-page grayscale TIFF: 8-bit when all
/// values fit, 16-bit otherwise.
pub fn write_intensity_stack(vol: &IntensityVolume, path: &Path) -> Result<()> {
    let d = vol.dims();
    if d.n_y > u32::MAX as usize || d.n_x > u32::MAX as usize {
        return Err(MorphoError::Capacity(format!(
            "slice dims {}x{} exceed the TIFF size field",
            d.n_y, d.n_x
        )));
    }
    let file = File::create(path).map_err(|e| MorphoError::io(path, e))?;
    let mut encoder = TiffEncoder::new(BufWriter::new(file))
        .map_err(|e| MorphoError::Format(format!("{}: {e}", path.display())))?;
    let fmt_err = |e: tiff::TiffError| MorphoError::Format(format!("{}: {e}", path.display()));
    let plane = d.n_y * d.n_x;
    let narrow = vol.values().iter().all(|&v| v <= u8::MAX as u16);
    for z in 0..d.n_z {
        let slice = &vol.values()[z * plane..(z + 1) * plane];
        if narrow {
            let page: Vec<u8> = slice.iter().map(|&v| v as u8).collect();
            encoder
                .write_image::<colortype::Gray8>(d.n_x as u32, d.n_y as u32, &page)
                .map_err(fmt_err)?;
        } else {
            encoder
                .write_image::<colortype::Gray16>(d.n_x as u32, d.n_y as u32, slice)
                .map_err(fmt_err)?;
        }
    }
    Ok(())
}

/// Write a binary volume as a multi-page 8-bit TIFF with pore = 0 and
/// solid = 255.
pub fn write_binary_stack(bin: &BinaryVolume, path: &Path) -> Result<()> {
    let d = bin.dims();
    if d.n_y > u32::MAX as usize || d.n_x > u32::MAX as usize {
        return Err(MorphoError::Capacity(format!(
            "slice dims {}x{} exceed the TIFF size field",
            d.n_y, d.n_x
        )));
    }
    let file = File::create(path).map_err(|e| MorphoError::io(path, e))?;
    let mut encoder = TiffEncoder::new(BufWriter::new(file))
        .map_err(|e| MorphoError::Format(format!("{}: {e}", path.display())))?;
    let mut page = vec![0u8; d.n_y * d.n_x];
    for z in 0..d.n_z {
        for (dst, src) in page.iter_mut().zip(bin.slice(z)) {
            *dst = if *src == 0 { 0 } else { 255 };
        }
        encoder
            .write_image::<colortype::Gray8>(d.n_x as u32, d.n_y as u32, &page)
            .map_err(|e| MorphoError::Format(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
