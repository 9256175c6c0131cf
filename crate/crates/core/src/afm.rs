//! Forward transform: region partition and attraction field maps.
//!
//! Every lattice pixel is assigned to its nearest segment (ties go to the
//! lowest segment index) and stores the vector pointing to its closest point
//! on that segment. The resulting field can be made size-independent
//! ([`size_normalize`]) and log-stretched ([`stretch`]); both transforms have
//! exact inverses, and the [`AfmState`] tag records which ones were applied.

use crate::error::{Error, Result};
use crate::geom::{project_onto_segment, LatticeDims, LineSegmentMap, Point2, Vec2};

/// Offset used by the stretching transform to keep `log` finite at zero.
pub const STRETCH_EPSILON: f64 = 1e-6;

/// Which value transforms have been applied to an attraction field map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AfmState {
    /// Pixel-unit attraction vectors.
    Raw,
    /// `x` components divided by the width, `y` components by the height.
    SizeNormalized,
    /// Size-normalized, then log-stretched component-wise.
    Stretched,
}

/// Nearest-segment label for every pixel of the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPartitionMap {
    pub dims: LatticeDims,
    labels: Vec<u32>,
}

impl RegionPartitionMap {
    pub fn label(&self, x: u32, y: u32) -> u32 {
        self.labels[self.dims.index(x, y)]
    }

    /// Row-major labels.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Number of pixels assigned to each of `n` segments.
    pub fn region_sizes(&self, n: usize) -> Vec<usize> {
        let mut sizes = vec![0; n];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }
}

/// Dense grid of 2-vectors with a transform-state tag.
#[derive(Debug, Clone, PartialEq)]
pub struct AttractionFieldMap {
    dims: LatticeDims,
    state: AfmState,
    vectors: Vec<Vec2>,
}

impl AttractionFieldMap {
    /// Wrap a row-major vector grid. Fails if the length does not match `dims`
    /// or a value is not finite.
    pub fn from_vectors(dims: LatticeDims, state: AfmState, vectors: Vec<Vec2>) -> Result<Self> {
        if vectors.len() != dims.pixel_count() {
            return Err(Error::validation(format!(
                "expected {} vectors for a {}x{} lattice, got {}",
                dims.pixel_count(),
                dims.width(),
                dims.height(),
                vectors.len()
            )));
        }
        if let Some(i) = vectors.iter().position(|v| !v.is_finite()) {
            return Err(Error::validation(format!(
                "non-finite vector at pixel index {i}"
            )));
        }
        Ok(Self {
            dims,
            state,
            vectors,
        })
    }

    pub fn zeros(dims: LatticeDims, state: AfmState) -> Self {
        Self {
            dims,
            state,
            vectors: vec![Vec2::ZERO; dims.pixel_count()],
        }
    }

    #[inline]
    pub fn dims(&self) -> LatticeDims {
        self.dims
    }

    #[inline]
    pub fn state(&self) -> AfmState {
        self.state
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> Vec2 {
        self.vectors[self.dims.index(x, y)]
    }

    /// Row-major vectors.
    pub fn vectors(&self) -> &[Vec2] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vec2> {
        self.vectors
    }

    pub(crate) fn expect_state(&self, expected: AfmState) -> Result<()> {
        if self.state != expected {
            return Err(Error::State {
                expected,
                found: self.state,
            });
        }
        Ok(())
    }

    fn map_components(&self, state: AfmState, f: impl Fn(f64, f64) -> f64) -> Self {
        let (w, h) = (self.dims.width() as f64, self.dims.height() as f64);
        Self {
            dims: self.dims,
            state,
            vectors: self
                .vectors
                .iter()
                .map(|v| Vec2::new(f(v.x, w), f(v.y, h)))
                .collect(),
        }
    }
}

fn nearest_segments(lsm: &LineSegmentMap) -> Result<(Vec<u32>, Vec<Vec2>)> {
    if lsm.segments.is_empty() {
        return Err(Error::validation("partition undefined for empty map"));
    }
    let dims = lsm.dims;
    let mut labels = Vec::with_capacity(dims.pixel_count());
    let mut vectors = Vec::with_capacity(dims.pixel_count());
    for (x, y) in dims.pixels() {
        let p = Point2::new(x as f64, y as f64);
        let mut best_label = 0u32;
        let mut best = project_onto_segment(p, &lsm.segments[0]);
        for (i, seg) in lsm.segments.iter().enumerate().skip(1) {
            let proj = project_onto_segment(p, seg);
            // strict: equidistant pixels stay with the lower index
            if proj.sq_dist < best.sq_dist {
                best = proj;
                best_label = i as u32;
            }
        }
        labels.push(best_label);
        vectors.push(best.foot - p);
    }
    Ok((labels, vectors))
}

/// Assign every pixel to its nearest segment.
pub fn region_partition(lsm: &LineSegmentMap) -> Result<RegionPartitionMap> {
    let (labels, _) = nearest_segments(lsm)?;
    Ok(RegionPartitionMap {
        dims: lsm.dims,
        labels,
    })
}

/// Raw attraction field map of a non-empty segment map.
pub fn encode_afm(lsm: &LineSegmentMap) -> Result<AttractionFieldMap> {
    let (_, vectors) = nearest_segments(lsm)?;
    Ok(AttractionFieldMap {
        dims: lsm.dims,
        state: AfmState::Raw,
        vectors,
    })
}

/// Partition and field in one pass.
pub fn encode_with_partition(
    lsm: &LineSegmentMap,
) -> Result<(RegionPartitionMap, AttractionFieldMap)> {
    let (labels, vectors) = nearest_segments(lsm)?;
    Ok((
        RegionPartitionMap {
            dims: lsm.dims,
            labels,
        },
        AttractionFieldMap {
            dims: lsm.dims,
            state: AfmState::Raw,
            vectors,
        },
    ))
}

pub fn size_normalize(afm: &AttractionFieldMap) -> Result<AttractionFieldMap> {
    afm.expect_state(AfmState::Raw)?;
    Ok(afm.map_components(AfmState::SizeNormalized, |z, side| z / side))
}

pub fn size_denormalize(afm: &AttractionFieldMap) -> Result<AttractionFieldMap> {
    afm.expect_state(AfmState::SizeNormalized)?;
    Ok(afm.map_components(AfmState::Raw, |z, side| z * side))
}

#[inline]
fn sign(z: f64) -> f64 {
    if z > 0.0 {
        1.0
    } else if z < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `z ↦ -sign(z)·ln(|z| + ε)` with `sign(0) = 0`. Requires `|z| ≤ 1 − ε`.
#[inline]
pub fn stretch_value(z: f64) -> f64 {
    -sign(z) * (z.abs() + STRETCH_EPSILON).ln()
}

/// `z' ↦ sign(z')·e^(−|z'|)` with `sign(0) = 0`.
#[inline]
pub fn unstretch_value(z: f64) -> f64 {
    sign(z) * (-z.abs()).exp()
}

pub fn stretch(afm: &AttractionFieldMap) -> Result<AttractionFieldMap> {
    afm.expect_state(AfmState::SizeNormalized)?;
    let limit = 1.0 - STRETCH_EPSILON;
    if let Some(i) = afm
        .vectors
        .iter()
        .position(|v| v.x.abs() > limit || v.y.abs() > limit)
    {
        return Err(Error::validation(format!(
            "component magnitude above 1 - {STRETCH_EPSILON} at pixel index {i}; stretching would flip its sign"
        )));
    }
    Ok(afm.map_components(AfmState::Stretched, |z, _| stretch_value(z)))
}

pub fn unstretch(afm: &AttractionFieldMap) -> Result<AttractionFieldMap> {
    afm.expect_state(AfmState::Stretched)?;
    Ok(afm.map_components(AfmState::SizeNormalized, |z, _| unstretch_value(z)))
}

/// Undo whatever transforms the map carries and return it in pixel units.
pub fn to_raw(afm: &AttractionFieldMap) -> Result<AttractionFieldMap> {
    match afm.state {
        AfmState::Raw => Ok(afm.clone()),
        AfmState::SizeNormalized => size_denormalize(afm),
        AfmState::Stretched => size_denormalize(&unstretch(afm)?),
    }
}
