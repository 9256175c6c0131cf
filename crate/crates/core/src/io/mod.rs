//! File formats and synthetic data.
//!
//! * [`annotation`]: JSON line segment maps (`{"width", "height", "segments"}`).
//! * [`afm_file`]: the little-endian binary attraction field format.
//! * [`csv`]: tables emitted by the evaluation commands.
//! * [`synth`]: seeded random scene corpora.

pub mod afm_file;
pub mod annotation;
pub mod csv;
pub mod synth;

use std::path::Path;

use crate::error::{Error, Result};

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
