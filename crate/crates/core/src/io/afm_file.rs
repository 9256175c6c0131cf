//! Binary attraction field map files.
//!
//! Layout (all integers and floats little-endian):
//!
//! | offset | size      | field                                          |
//! |--------|-----------|------------------------------------------------|
//! | 0      | 4         | magic `b"AFM1"`                                |
//! | 4      | 4         | height, `u32`                                  |
//! | 8      | 4         | width, `u32`                                   |
//! | 12     | 1         | flags: bit 0 size-normalized, bit 1 stretched  |
//! | 13     | 8·H·W     | row-major `f32` pairs `(a_x, a_y)`             |
//!
//! Bit 1 requires bit 0; other bits must be clear. Values are stored as
//! 32-bit floats, so writing rounds the in-memory `f64` values once.

use crate::afm::{AfmState, AttractionFieldMap};
use crate::error::{Error, Result};
use crate::geom::{LatticeDims, Vec2};

pub const MAGIC: [u8; 4] = *b"AFM1";
pub const HEADER_LEN: usize = 13;

const FLAG_NORMALIZED: u8 = 0b01;
const FLAG_STRETCHED: u8 = 0b10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AfmFileHeader {
    pub height: u32,
    pub width: u32,
    pub state: AfmState,
}

impl AfmFileHeader {
    pub fn flags(&self) -> u8 {
        match self.state {
            AfmState::Raw => 0,
            AfmState::SizeNormalized => FLAG_NORMALIZED,
            AfmState::Stretched => FLAG_NORMALIZED | FLAG_STRETCHED,
        }
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::format(format!(
                "truncated header: {} of {HEADER_LEN} bytes",
                bytes.len()
            )));
        }
        if bytes[0..4] != MAGIC {
            return Err(Error::format(format!("bad magic {:?}", &bytes[0..4])));
        }
        let height = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        let width = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        let state = match bytes[12] {
            0 => AfmState::Raw,
            FLAG_NORMALIZED => AfmState::SizeNormalized,
            f if f == FLAG_NORMALIZED | FLAG_STRETCHED => AfmState::Stretched,
            f => return Err(Error::format(format!("inconsistent state flags {f:#04b}"))),
        };
        Ok(Self {
            height,
            width,
            state,
        })
    }
}

pub fn write_afm(afm: &AttractionFieldMap) -> Vec<u8> {
    let dims = afm.dims();
    let header = AfmFileHeader {
        height: dims.height(),
        width: dims.width(),
        state: afm.state(),
    };
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * dims.pixel_count());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&header.height.to_le_bytes());
    out.extend_from_slice(&header.width.to_le_bytes());
    out.push(header.flags());
    for v in afm.vectors() {
        out.extend_from_slice(&(v.x as f32).to_le_bytes());
        out.extend_from_slice(&(v.y as f32).to_le_bytes());
    }
    out
}

pub fn read_afm(bytes: &[u8]) -> Result<AttractionFieldMap> {
    let header = AfmFileHeader::parse(bytes)?;
    let dims = LatticeDims::new(header.width, header.height)?;
    let expected = (dims.pixel_count() as u64)
        .checked_mul(8)
        .and_then(|n| n.checked_add(HEADER_LEN as u64))
        .ok_or_else(|| Error::format("lattice too large"))?;
    if bytes.len() as u64 != expected {
        return Err(Error::format(format!(
            "payload length mismatch: file has {} bytes, {}x{} lattice needs {expected}",
            bytes.len(),
            dims.width(),
            dims.height()
        )));
    }
    let vectors = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| {
            let x = f32::from_le_bytes(c[0..4].try_into().unwrap());
            let y = f32::from_le_bytes(c[4..8].try_into().unwrap());
            Vec2::new(x as f64, y as f64)
        })
        .collect();
    AttractionFieldMap::from_vectors(dims, header.state, vectors).map_err(|e| match e {
        Error::Validation(msg) => Error::Format(msg),
        other => other,
    })
}
