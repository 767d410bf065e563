//! `GFV1` labeled feature files.
//!
//! ```text
//! "GFV1"
//! u32 N, u32 D, u32 C        little-endian
//! N x u32                    labels
//! N*D x f64                  features, row-major, little-endian
//! ```

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::DatasetBundle;
use crate::error::{GucError, Result};
use crate::numeric::Matrix;
use crate::prototypes::PrototypeSet;

pub const GFV1_MAGIC: [u8; 4] = *b"GFV1";

pub fn write_gfv1<W: Write>(bundle: &DatasetBundle, w: W) -> std::io::Result<()> {
    write_raw(bundle.features(), bundle.labels(), bundle.num_classes(), w)
}

fn write_raw<W: Write>(features: &Matrix, labels: &[usize], classes: usize, mut w: W) -> std::io::Result<()> {
    w.write_all(&GFV1_MAGIC)?;
    for v in [features.rows(), features.cols(), classes] {
        w.write_all(&(v as u32).to_le_bytes())?;
    }
    for &l in labels {
        w.write_all(&(l as u32).to_le_bytes())?;
    }
    for v in features.as_slice() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()
}

pub fn save_gfv1(bundle: &DatasetBundle, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| GucError::io(path, e))?;
    write_gfv1(bundle, BufWriter::new(file)).map_err(|e| GucError::io(path, e))
}

/// Writes a prototype set as a GFV1 section: one row per class, labelled
/// with its class id.
pub fn save_prototypes_gfv1(prototypes: &PrototypeSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| GucError::io(path, e))?;
    let labels: Vec<usize> = (0..prototypes.num_classes()).collect();
    write_raw(prototypes.vectors(), &labels, prototypes.num_classes(), BufWriter::new(file))
        .map_err(|e| GucError::io(path, e))
}

pub fn load_gfv1(path: impl AsRef<Path>) -> Result<DatasetBundle> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| GucError::io(path, e))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    read_gfv1(file, name)
}

pub fn read_gfv1<R: Read>(mut r: R, name: impl Into<String>) -> Result<DatasetBundle> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| GucError::Truncated(e.to_string()))?;
    if bytes.len() < 4 {
        return Err(GucError::Truncated(format!("{} bytes, no magic", bytes.len())));
    }
    let found: [u8; 4] = bytes[..4].try_into().unwrap();
    if found != GFV1_MAGIC {
        return Err(GucError::BadMagic { expected: GFV1_MAGIC, found });
    }
    if bytes.len() < 16 {
        return Err(GucError::Truncated("header".into()));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
    let (n, d, c) = (word(4), word(8), word(12));
    let need = (n as u128) * 4 + (n as u128) * (d as u128) * 8 + 16;
    if (bytes.len() as u128) < need {
        let rows_present = if n == 0 {
            0
        } else {
            ((bytes.len().saturating_sub(16 + 4 * n)) / (8 * d.max(1))).min(n)
        };
        return Err(GucError::Truncated(format!(
            "header declares N={n}, D={d} ({need} bytes) but file has {} bytes (~{rows_present} rows)",
            bytes.len()
        )));
    }
    if bytes.len() as u128 != need {
        return Err(GucError::InvariantViolation(format!("{} trailing bytes after features", bytes.len() as u128 - need)));
    }
    let labels: Vec<usize> = (0..n).map(|i| word(16 + 4 * i)).collect();
    if let Some(&bad) = labels.iter().find(|&&l| l >= c) {
        return Err(GucError::LabelOutOfRange { label: bad, classes: c });
    }
    let data = bytes[16 + 4 * n..].chunks_exact(8).map(|ch| f64::from_le_bytes(ch.try_into().unwrap())).collect();
    DatasetBundle::new(Matrix::new(n, d, data)?, labels, c, name)
}
