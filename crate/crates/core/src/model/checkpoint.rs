//! `GUCW` checkpoint files.
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! "GUCW"                      magic
//! u32 version                 currently 1
//! u32 mode                    0 baseline, 1 prototype, 2 texture
//! f64 dropout
//! u32 num_classes
//! u32 n, n x u32              X tower dims [input, hidden.., latent]
//! u32 n, n x u32              guide tower dims (n = 0 when absent)
//! f64...                      per layer in declaration order: weight
//!                             (in x out, row-major) then bias; X tower,
//!                             guide tower, head
//! u32 has_prototypes
//!   u32 kind, u64 param       kind 0 multi-hot (param = ones), 1 random (param = seed)
//!   f64 x C*K                 prototype rows
//! ```

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::gucnet::{GucnetModel, ModelMode};
use super::tower::{Dense, FcnTower};
use crate::error::{GucError, Result};
use crate::numeric::Matrix;
use crate::prototypes::{PrototypeKind, PrototypeSet};

pub const CHECKPOINT_MAGIC: [u8; 4] = *b"GUCW";
pub const CHECKPOINT_VERSION: u32 = 1;

pub fn write_checkpoint<W: Write>(model: &GucnetModel, mut w: W) -> std::io::Result<()> {
    let mut buf = Vec::new();
    buf.extend_from_slice(&CHECKPOINT_MAGIC);
    buf.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    buf.extend_from_slice(&model.mode().tag().to_le_bytes());
    buf.extend_from_slice(&model.tower_x().dropout().to_le_bytes());
    buf.extend_from_slice(&(model.num_classes() as u32).to_le_bytes());
    put_dims(&mut buf, &model.tower_x().dims());
    put_dims(&mut buf, &model.tower_y().map(FcnTower::dims).unwrap_or_default());
    for p in model.params() {
        put_floats(&mut buf, p.as_slice());
    }
    match model.prototypes() {
        Some(g) => {
            buf.extend_from_slice(&1u32.to_le_bytes());
            let (tag, param) = match g.kind() {
                PrototypeKind::MultiHotBlock { ones } => (0u32, ones as u64),
                PrototypeKind::RandomUnit { seed } => (1u32, seed),
            };
            buf.extend_from_slice(&tag.to_le_bytes());
            buf.extend_from_slice(&param.to_le_bytes());
            put_floats(&mut buf, g.vectors().as_slice());
        }
        None => buf.extend_from_slice(&0u32.to_le_bytes()),
    }
    w.write_all(&buf)?;
    w.flush()
}

fn put_dims(buf: &mut Vec<u8>, dims: &[usize]) {
    buf.extend_from_slice(&(dims.len() as u32).to_le_bytes());
    for &d in dims {
        buf.extend_from_slice(&(d as u32).to_le_bytes());
    }
}

fn put_floats(buf: &mut Vec<u8>, values: &[f64]) {
    for v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
}

pub fn save_checkpoint(model: &GucnetModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| GucError::io(path, e))?;
    write_checkpoint(model, BufWriter::new(file)).map_err(|e| GucError::io(path, e))
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<GucnetModel> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| GucError::io(path, e))?;
    read_checkpoint(file)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(GucError::BadCheckpoint(format!("truncated while reading {what}")));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn dims(&mut self, what: &str) -> Result<Vec<usize>> {
        let n = self.u32(what)? as usize;
        if n > 64 {
            return Err(GucError::BadCheckpoint(format!("{what}: implausible layer count {n}")));
        }
        (0..n).map(|_| self.u32(what).map(|d| d as usize)).collect()
    }

    fn matrix(&mut self, rows: usize, cols: usize, what: &str) -> Result<Matrix> {
        let n = rows
            .checked_mul(cols)
            .and_then(|n| n.checked_mul(8))
            .ok_or_else(|| GucError::BadCheckpoint(format!("{what}: size overflow")))?;
        let raw = self.take(n, what)?;
        let data = raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        Matrix::new(rows, cols, data)
    }

    fn tower(&mut self, dims: &[usize], dropout: f64, what: &str) -> Result<FcnTower> {
        if dims.len() < 2 || dims.contains(&0) {
            return Err(GucError::BadCheckpoint(format!("{what}: bad dims {dims:?}")));
        }
        let mut layers = Vec::with_capacity(dims.len() - 1);
        for w in dims.windows(2) {
            let weight = self.matrix(w[0], w[1], what)?;
            let bias = self.matrix(1, w[1], what)?;
            layers.push(Dense { weight, bias });
        }
        FcnTower::from_layers(layers, dropout)
    }
}

pub fn read_checkpoint<R: Read>(mut r: R) -> Result<GucnetModel> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| GucError::BadCheckpoint(e.to_string()))?;
    let mut c = Cursor { bytes: &bytes, pos: 0 };

    let magic = c.take(4, "magic")?;
    if magic != CHECKPOINT_MAGIC {
        return Err(GucError::BadCheckpoint(format!("bad magic {magic:?}")));
    }
    let version = c.u32("version")?;
    if version != CHECKPOINT_VERSION {
        return Err(GucError::BadCheckpoint(format!("unsupported version {version}")));
    }
    let mode = ModelMode::from_tag(c.u32("mode")?).ok_or_else(|| GucError::BadCheckpoint("unknown mode tag".into()))?;
    let dropout = c.f64("dropout")?;
    if !(0.0..1.0).contains(&dropout) {
        return Err(GucError::BadCheckpoint(format!("dropout {dropout} out of range")));
    }
    let classes = c.u32("class count")? as usize;
    let dims_x = c.dims("X tower dims")?;
    let dims_y = c.dims("guide tower dims")?;

    let tower_x = c.tower(&dims_x, dropout, "X tower")?;
    let tower_y = if dims_y.is_empty() { None } else { Some(c.tower(&dims_y, dropout, "guide tower")?) };
    let k = tower_x.latent_dim();
    let head = Dense { weight: c.matrix(k, classes, "head")?, bias: c.matrix(1, classes, "head")? };

    let prototypes = match c.u32("prototype flag")? {
        0 => None,
        1 => {
            let kind = match (c.u32("prototype kind")?, c.u64("prototype param")?) {
                (0, ones) => PrototypeKind::MultiHotBlock { ones: ones as usize },
                (1, seed) => PrototypeKind::RandomUnit { seed },
                (t, _) => return Err(GucError::BadCheckpoint(format!("unknown prototype kind {t}"))),
            };
            let vectors = c.matrix(classes, k, "prototypes")?;
            Some(PrototypeSet::from_matrix(vectors, kind).map_err(|e| GucError::BadCheckpoint(e.to_string()))?)
        }
        f => return Err(GucError::BadCheckpoint(format!("bad prototype flag {f}"))),
    };
    if c.pos != bytes.len() {
        return Err(GucError::BadCheckpoint(format!("{} trailing bytes", bytes.len() - c.pos)));
    }
    GucnetModel::from_parts(mode, tower_x, tower_y, head, prototypes).map_err(|e| GucError::BadCheckpoint(e.to_string()))
}
