//! Seeded random scene corpora.
//!
//! Endpoints are drawn uniformly over the pixel lattice and resampled until
//! the segment is long enough and its midpoint keeps `min_separation` pixels
//! from every existing segment (and vice versa). The generator is ChaCha8,
//! so a seed yields the same corpus on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{project_onto_segment, LatticeDims, LineSegment, LineSegmentMap, Point2};

/// Draws allowed per segment before the configuration is declared unsatisfiable.
pub const RESAMPLE_CAP: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub scene_count: usize,
    pub dims: LatticeDims,
    /// Inclusive range of segment counts per scene.
    pub segments_per_scene: (usize, usize),
    /// Minimum segment length as a fraction of the lattice diagonal.
    pub min_length_fraction: f64,
    /// Minimum midpoint-to-segment distance, pixels.
    pub min_separation: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            scene_count: 200,
            dims: LatticeDims::new(320, 320).unwrap(),
            segments_per_scene: (2, 30),
            min_length_fraction: 0.05,
            min_separation: 3.0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.segments_per_scene;
        if lo < 1 || hi < lo {
            return Err(Error::config(format!(
                "invalid segment count range [{lo}, {hi}]"
            )));
        }
        if self.scene_count == 0 {
            return Err(Error::config("scene_count must be positive"));
        }
        if !(self.min_length_fraction > 0.0 && self.min_length_fraction < 1.0) {
            return Err(Error::config(format!(
                "min_length_fraction must lie in (0, 1), got {}",
                self.min_length_fraction
            )));
        }
        if !(self.min_separation >= 0.0 && self.min_separation.is_finite()) {
            return Err(Error::config(
                "min_separation must be a finite non-negative number",
            ));
        }
        Ok(())
    }
}

fn separated(candidate: &LineSegment, existing: &[LineSegment], min_sep: f64) -> bool {
    let min_sq = min_sep * min_sep;
    existing.iter().all(|e| {
        project_onto_segment(candidate.midpoint(), e).sq_dist >= min_sq
            && project_onto_segment(e.midpoint(), candidate).sq_dist >= min_sq
    })
}

fn generate_scene(cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> Result<LineSegmentMap> {
    let (lo, hi) = cfg.segments_per_scene;
    let count = rng.random_range(lo..=hi);
    let max_x = (cfg.dims.width() - 1) as f64;
    let max_y = (cfg.dims.height() - 1) as f64;
    let min_len = cfg.min_length_fraction * cfg.dims.diagonal();
    let mut segments: Vec<LineSegment> = Vec::with_capacity(count);
    for index in 0..count {
        let mut placed = false;
        for _ in 0..RESAMPLE_CAP {
            let a = Point2::new(rng.random_range(0.0..=max_x), rng.random_range(0.0..=max_y));
            let b = Point2::new(rng.random_range(0.0..=max_x), rng.random_range(0.0..=max_y));
            let Ok(seg) = LineSegment::new(a, b) else {
                continue;
            };
            if seg.length() >= min_len && separated(&seg, &segments, cfg.min_separation) {
                segments.push(seg);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::config(format!(
                "could not place segment {index} within {RESAMPLE_CAP} draws; configuration is unsatisfiable"
            )));
        }
    }
    Ok(LineSegmentMap::new(cfg.dims, segments))
}

/// Generate `cfg.scene_count` scenes deterministically from `cfg.seed`.
pub fn generate_scenes(cfg: &SynthConfig) -> Result<Vec<LineSegmentMap>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.scene_count)
        .map(|_| generate_scene(cfg, &mut rng))
        .collect()
}
