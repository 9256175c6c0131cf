//! JSON annotation documents.
//!
//! ```json
//! {"width":320,"height":240,"segments":[[x1,y1,x2,y2],...],"scores":[...]}
//! ```
//!
//! Coordinates are sub-pixel and must lie in `[0, width] × [0, height]`.
//! `scores` is optional; detections written by the squeeze command carry
//! their aspect ratios there. Numbers are written in shortest round-trip
//! form, so reading a written document reproduces every coordinate exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{LatticeDims, LineSegment, LineSegmentMap, Point2};
use crate::squeeze::Detections;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationDocument {
    pub width: u32,
    pub height: u32,
    pub segments: Vec<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scores: Option<Vec<f64>>,
}

impl AnnotationDocument {
    pub fn from_map(lsm: &LineSegmentMap) -> Self {
        Self {
            width: lsm.dims.width(),
            height: lsm.dims.height(),
            segments: lsm.segments.iter().map(LineSegment::coords).collect(),
            scores: None,
        }
    }

    pub fn from_detections(det: &Detections) -> Self {
        Self {
            scores: Some(det.items.iter().map(|d| d.aspect_ratio).collect()),
            ..Self::from_map(&det.to_segment_map())
        }
    }

    /// Validate and convert. Errors name the offending segment index.
    pub fn to_map(&self) -> Result<LineSegmentMap> {
        let dims = LatticeDims::new(self.width, self.height)?;
        let (w, h) = (self.width as f64, self.height as f64);
        let mut segments = Vec::with_capacity(self.segments.len());
        for (i, c) in self.segments.iter().enumerate() {
            let in_range = |v: f64, hi: f64| v.is_finite() && (0.0..=hi).contains(&v);
            if !(in_range(c[0], w) && in_range(c[1], h) && in_range(c[2], w) && in_range(c[3], h)) {
                return Err(Error::validation(format!(
                    "coordinate out of range at segment index {i}: {c:?} outside [0, {w}] x [0, {h}]"
                )));
            }
            let (a, b) = (Point2::new(c[0], c[1]), Point2::new(c[2], c[3]));
            if a == b {
                return Err(Error::validation(format!(
                    "zero-length segment at index {i}"
                )));
            }
            segments.push(LineSegment::new(a, b)?);
        }
        if let Some(scores) = &self.scores {
            if scores.len() != self.segments.len() {
                return Err(Error::validation(format!(
                    "{} scores for {} segments",
                    scores.len(),
                    self.segments.len()
                )));
            }
        }
        Ok(LineSegmentMap::new(dims, segments))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec(self).expect("annotation documents always serialize");
        out.push(b'\n');
        out
    }
}

pub fn read_annotation_document(bytes: &[u8]) -> Result<AnnotationDocument> {
    let doc: AnnotationDocument = serde_json::from_slice(bytes)?;
    doc.to_map()?;
    Ok(doc)
}

pub fn read_annotation(bytes: &[u8]) -> Result<LineSegmentMap> {
    let doc: AnnotationDocument = serde_json::from_slice(bytes)?;
    doc.to_map()
}

pub fn write_annotation(lsm: &LineSegmentMap) -> Vec<u8> {
    AnnotationDocument::from_map(lsm).to_bytes()
}

pub fn write_detections(det: &Detections) -> Vec<u8> {
    AnnotationDocument::from_detections(det).to_bytes()
}
