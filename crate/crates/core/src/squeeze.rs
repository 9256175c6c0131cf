//! Inverse transform: recover line segments from an attraction field map.
//!
//! Each retained attraction vector is moved to its projection point
//! (`foot = p + a(p)`), and the feet are bucketed by their nearest lattice
//! cell into a [`LineProposalMap`]. Regions are then grown greedily from seed
//! entries: starting at the seed cell, every unused entry within the
//! `window × window` neighbourhood of a frontier cell whose tangent direction
//! lies within `tau` of the region's running mean direction is absorbed, and
//! its cell joins the frontier. A grown region is summarised by a
//! principal-axis rectangle and accepted when the rectangle is thin enough
//! (`width / length < aspect_ratio_max`). Rejected regions release their
//! entries so later regions may claim them.
//!
//! Zero attraction vectors (pixels lying exactly on a segment) carry no
//! direction; they are kept in the proposal map but never seed or join a
//! region.

use std::collections::VecDeque;
use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::afm::{AfmState, AttractionFieldMap};
use crate::error::{Error, Result};
use crate::geom::{
    angular_distance, normal_angle, Direction, DirectionAccumulator, LatticeDims, LineSegment,
    LineSegmentMap, Point2, Vec2,
};

/// Tuning knobs of the squeeze module.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeConfig {
    /// Angular tolerance for joining a region, radians.
    pub tau: f64,
    /// Side of the square search window, odd.
    pub window: usize,
    /// Regions are accepted when `width / length` is strictly below this.
    pub aspect_ratio_max: f64,
    /// Minimum number of feet in a region before a rectangle is fitted.
    pub min_support: usize,
    /// Drop vectors longer than `outlier_gamma_fraction * min(H, W)` first.
    pub remove_outliers: bool,
    pub outlier_gamma_fraction: f64,
    /// Row-major seed scan when true, seeded shuffle otherwise.
    pub deterministic_order: bool,
    pub seed: u64,
}

impl Default for SqueezeConfig {
    fn default() -> Self {
        Self {
            tau: 10f64.to_radians(),
            window: 3,
            aspect_ratio_max: 0.2,
            min_support: 2,
            remove_outliers: true,
            outlier_gamma_fraction: 0.02,
            deterministic_order: true,
            seed: 0,
        }
    }
}

impl SqueezeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau < PI / 2.0) {
            return Err(Error::config(format!(
                "tau must lie in (0, pi/2), got {}",
                self.tau
            )));
        }
        if self.window == 0 || self.window.is_multiple_of(2) {
            return Err(Error::config(format!(
                "window must be a positive odd integer, got {}",
                self.window
            )));
        }
        if !(self.aspect_ratio_max > 0.0 && self.aspect_ratio_max <= 1.0) {
            return Err(Error::config(format!(
                "aspect ratio threshold must lie in (0, 1], got {}",
                self.aspect_ratio_max
            )));
        }
        if self.min_support == 0 {
            return Err(Error::config("min_support must be positive"));
        }
        if self.remove_outliers && !(self.outlier_gamma_fraction > 0.0) {
            return Err(Error::config(format!(
                "outlier gamma fraction must be positive, got {}",
                self.outlier_gamma_fraction
            )));
        }
        Ok(())
    }
}

/// An attraction vector that survived outlier removal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetainedVector {
    pub x: u32,
    pub y: u32,
    pub attraction: Vec2,
}

/// Keep the vectors with `‖a‖ ≤ gamma_fraction · min(H, W)`, in row-major order.
pub fn remove_outliers(
    afm: &AttractionFieldMap,
    gamma_fraction: f64,
) -> Result<Vec<RetainedVector>> {
    afm.expect_state(AfmState::Raw)?;
    if !(gamma_fraction > 0.0) {
        return Err(Error::config(format!(
            "outlier gamma fraction must be positive, got {gamma_fraction}"
        )));
    }
    let gamma = gamma_fraction * afm.dims().min_side() as f64;
    let gamma_sq = gamma * gamma;
    Ok(all_vectors(afm)
        .filter(|v| v.attraction.norm_sq() <= gamma_sq)
        .collect())
}

fn all_vectors(afm: &AttractionFieldMap) -> impl Iterator<Item = RetainedVector> + '_ {
    afm.dims()
        .pixels()
        .zip(afm.vectors())
        .map(|((x, y), &attraction)| RetainedVector { x, y, attraction })
}

/// One attraction vector filed under the lattice cell nearest to its foot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProposalEntry {
    pub source: (u32, u32),
    pub attraction: Vec2,
    pub foot: Point2,
    /// Normal angle rotated by a quarter turn; `None` for zero vectors.
    pub tangent: Option<Direction>,
}

/// Sparse grouping of proposal entries by cell, stored as a compressed
/// row-major table.
#[derive(Debug, Clone)]
pub struct LineProposalMap {
    dims: LatticeDims,
    entries: Vec<ProposalEntry>,
    /// `cell_start[c]..cell_start[c + 1]` indexes the entries of cell `c`.
    cell_start: Vec<u32>,
}

impl LineProposalMap {
    pub fn dims(&self) -> LatticeDims {
        self.dims
    }

    pub fn entries(&self) -> &[ProposalEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry index range of cell `(x, y)`.
    pub fn cell_range(&self, x: u32, y: u32) -> std::ops::Range<usize> {
        let c = self.dims.index(x, y);
        self.cell_start[c] as usize..self.cell_start[c + 1] as usize
    }

    pub fn cell(&self, x: u32, y: u32) -> &[ProposalEntry] {
        &self.entries[self.cell_range(x, y)]
    }

    /// Cell that entry `i` is filed under.
    pub fn cell_of(&self, i: usize) -> (u32, u32) {
        let c = self.cell_start.partition_point(|&s| s as usize <= i) - 1;
        let w = self.dims.width() as usize;
        ((c % w) as u32, (c / w) as u32)
    }

    /// Non-empty cells in row-major order.
    pub fn occupied_cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.dims
            .pixels()
            .filter(|&(x, y)| !self.cell_range(x, y).is_empty())
    }
}

/// Lattice cell nearest to `v`, if it lies inside the lattice.
#[inline]
pub fn discretize(v: Point2, dims: LatticeDims) -> Option<(u32, u32)> {
    let qx = (v.x + 0.5).floor();
    let qy = (v.y + 0.5).floor();
    if qx >= 0.0 && qy >= 0.0 && qx < dims.width() as f64 && qy < dims.height() as f64 {
        Some((qx as u32, qy as u32))
    } else {
        None
    }
}

fn tangent_of(a: Vec2) -> Option<Direction> {
    normal_angle(a)
        .ok()
        .map(|phi| Direction::new(phi + PI / 2.0))
}

/// File every vector under the cell nearest to its foot; vectors whose foot
/// falls outside the lattice are dropped.
pub fn build_proposal_map(vectors: &[RetainedVector], dims: LatticeDims) -> LineProposalMap {
    let mut keyed: Vec<(usize, ProposalEntry)> = vectors
        .iter()
        .filter_map(|v| {
            let source = Point2::new(v.x as f64, v.y as f64);
            let foot = source + v.attraction;
            let (qx, qy) = discretize(foot, dims)?;
            Some((
                dims.index(qx, qy),
                ProposalEntry {
                    source: (v.x, v.y),
                    attraction: v.attraction,
                    foot,
                    tangent: tangent_of(v.attraction),
                },
            ))
        })
        .collect();
    // stable: entries within a cell keep input order
    keyed.sort_by_key(|(c, _)| *c);

    let mut cell_start = vec![0u32; dims.pixel_count() + 1];
    for (c, _) in &keyed {
        cell_start[c + 1] += 1;
    }
    for c in 0..dims.pixel_count() {
        cell_start[c + 1] += cell_start[c];
    }
    LineProposalMap {
        dims,
        entries: keyed.into_iter().map(|(_, e)| e).collect(),
        cell_start,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EntryStatus {
    Active,
    Used,
    Discarded,
}

/// Entries absorbed by one growth pass.
#[derive(Debug, Clone, PartialEq)]
pub struct GrownRegion {
    /// Indices into [`LineProposalMap::entries`], in absorption order; the seed comes first.
    pub entries: Vec<usize>,
    pub direction: Direction,
}

impl GrownRegion {
    pub fn feet(&self, proposal: &LineProposalMap) -> Vec<Point2> {
        self.entries
            .iter()
            .map(|&i| proposal.entries[i].foot)
            .collect()
    }
}

/// Mutable bookkeeping for greedy region growth over one proposal map.
pub struct RegionGrower<'a> {
    proposal: &'a LineProposalMap,
    tau: f64,
    half_window: i64,
    status: Vec<EntryStatus>,
    releases: Vec<u8>,
    visit_stamp: Vec<u32>,
    generation: u32,
    queue: VecDeque<(u32, u32)>,
}

impl<'a> RegionGrower<'a> {
    pub fn new(proposal: &'a LineProposalMap, cfg: &SqueezeConfig) -> Self {
        Self {
            proposal,
            tau: cfg.tau,
            half_window: (cfg.window / 2) as i64,
            status: vec![EntryStatus::Active; proposal.len()],
            releases: vec![0; proposal.len()],
            visit_stamp: vec![0; proposal.dims.pixel_count()],
            generation: 0,
            queue: VecDeque::new(),
        }
    }

    /// Whether entry `i` can still seed or join a region.
    pub fn is_active(&self, i: usize) -> bool {
        self.status[i] == EntryStatus::Active && self.proposal.entries[i].tangent.is_some()
    }

    /// Grow a region from entry `seed`.
    ///
    /// Returns `None` when the seed is not active, or when no aligned entry
    /// exists in the seed cell's window; in the latter case the seed is
    /// discarded for good.
    pub fn grow(&mut self, seed: usize) -> Option<GrownRegion> {
        if !self.is_active(seed) {
            return None;
        }
        let proposal = self.proposal;
        let dims = proposal.dims;
        self.generation += 1;
        let generation = self.generation;

        let seed_tangent = proposal.entries[seed].tangent?;
        let mut acc = DirectionAccumulator::new();
        acc.push(seed_tangent, 1.0);
        let mut mean = seed_tangent;
        self.status[seed] = EntryStatus::Used;
        let mut absorbed = vec![seed];

        let (sx, sy) = proposal.cell_of(seed);
        self.queue.clear();
        self.queue.push_back((sx, sy));
        self.visit_stamp[dims.index(sx, sy)] = generation;

        let mut first = true;
        while let Some((cx, cy)) = self.queue.pop_front() {
            for dy in -self.half_window..=self.half_window {
                for dx in -self.half_window..=self.half_window {
                    let (nx, ny) = (cx as i64 + dx, cy as i64 + dy);
                    if !dims.contains(nx, ny) {
                        continue;
                    }
                    let (nx, ny) = (nx as u32, ny as u32);
                    let range = proposal.cell_range(nx, ny);
                    if range.is_empty() {
                        continue;
                    }
                    let mut took_any = false;
                    for i in range {
                        if self.status[i] != EntryStatus::Active {
                            continue;
                        }
                        let Some(t) = proposal.entries[i].tangent else {
                            continue;
                        };
                        if angular_distance(t, mean) < self.tau {
                            self.status[i] = EntryStatus::Used;
                            absorbed.push(i);
                            acc.push(t, 1.0);
                            mean = acc.mean().unwrap_or(mean);
                            took_any = true;
                        }
                    }
                    let c = dims.index(nx, ny);
                    if took_any && self.visit_stamp[c] != generation {
                        self.visit_stamp[c] = generation;
                        self.queue.push_back((nx, ny));
                    }
                }
            }
            if first {
                first = false;
                if absorbed.len() == 1 {
                    self.status[seed] = EntryStatus::Discarded;
                    return None;
                }
            }
        }

        Some(GrownRegion {
            entries: absorbed,
            direction: mean,
        })
    }

    /// Return a rejected region's entries to the pool. An entry released a
    /// second time is discarded, which bounds the total work.
    pub fn release(&mut self, region: &GrownRegion) {
        for &i in &region.entries {
            self.releases[i] = self.releases[i].saturating_add(1);
            self.status[i] = if self.releases[i] >= 2 {
                EntryStatus::Discarded
            } else {
                EntryStatus::Active
            };
        }
    }
}

/// Grow one region from `seed` with fresh bookkeeping.
pub fn grow_region(
    seed: usize,
    proposal: &LineProposalMap,
    cfg: &SqueezeConfig,
) -> Option<GrownRegion> {
    RegionGrower::new(proposal, cfg).grow(seed)
}

/// Principal-axis rectangle around a point set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FittedRectangle {
    pub endpoint_a: Point2,
    pub endpoint_b: Point2,
    pub width: f64,
    pub support_size: usize,
}

impl FittedRectangle {
    pub fn length(&self) -> f64 {
        (self.endpoint_b - self.endpoint_a).norm()
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.width / self.length()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum FitError {
    #[error("support of {found} points is below the minimum of {min}")]
    TooFewPoints { found: usize, min: usize },
    #[error("support points are coincident")]
    Coincident,
}

/// Supports spanning less than this many pixels along their axis count as
/// coincident. Feet that differ only by `f32` storage rounding fall below it.
pub const COINCIDENT_EXTENT: f64 = 1e-3;

/// Fit a rectangle whose long axis is the dominant eigenvector of the
/// support covariance. Endpoints are the extreme projections onto that axis
/// through the centroid; the width is the spread across it.
pub fn fit_rectangle(points: &[Point2], min_support: usize) -> Result<FittedRectangle, FitError> {
    let min = min_support.max(2);
    if points.len() < min {
        return Err(FitError::TooFewPoints {
            found: points.len(),
            min,
        });
    }
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    let centroid = Point2::new(sx / n, sy / n);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in points {
        let d = *p - centroid;
        sxx += d.x * d.x;
        syy += d.y * d.y;
        sxy += d.x * d.y;
    }
    let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let axis = Vec2::new(angle.cos(), angle.sin());
    let normal = Vec2::new(-axis.y, axis.x);

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut plo, mut phi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        let d = *p - centroid;
        let u = d.dot(axis);
        let v = d.dot(normal);
        lo = lo.min(u);
        hi = hi.max(u);
        plo = plo.min(v);
        phi = phi.max(v);
    }
    if !(hi - lo >= COINCIDENT_EXTENT) {
        return Err(FitError::Coincident);
    }
    Ok(FittedRectangle {
        endpoint_a: centroid + axis * lo,
        endpoint_b: centroid + axis * hi,
        width: phi - plo,
        support_size: points.len(),
    })
}

/// A recovered segment and its thinness score (lower is more confident).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub segment: LineSegment,
    pub aspect_ratio: f64,
    pub support_size: usize,
}

/// Output of [`squeeze`].
#[derive(Debug, Clone, PartialEq)]
pub struct Detections {
    pub dims: LatticeDims,
    pub items: Vec<Detection>,
}

impl Detections {
    pub fn to_segment_map(&self) -> LineSegmentMap {
        LineSegmentMap::new(self.dims, self.items.iter().map(|d| d.segment).collect())
    }

    /// Detections with aspect ratio strictly below `threshold`.
    pub fn below(&self, threshold: f64) -> Detections {
        Detections {
            dims: self.dims,
            items: self
                .items
                .iter()
                .filter(|d| d.aspect_ratio < threshold)
                .copied()
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

fn clamp_to_lattice(p: Point2, dims: LatticeDims) -> Point2 {
    Point2::new(
        p.x.clamp(0.0, dims.width() as f64),
        p.y.clamp(0.0, dims.height() as f64),
    )
}

/// Recover line segments from a raw attraction field map.
pub fn squeeze(afm: &AttractionFieldMap, cfg: &SqueezeConfig) -> Result<Detections> {
    afm.expect_state(AfmState::Raw)?;
    cfg.validate()?;
    let dims = afm.dims();
    let retained = if cfg.remove_outliers {
        remove_outliers(afm, cfg.outlier_gamma_fraction)?
    } else {
        all_vectors(afm).collect()
    };
    let proposal = build_proposal_map(&retained, dims);

    let mut order: Vec<usize> = (0..proposal.len()).collect();
    if !cfg.deterministic_order {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
    }

    let mut grower = RegionGrower::new(&proposal, cfg);
    let mut items = Vec::new();
    for seed in order {
        let Some(region) = grower.grow(seed) else {
            continue;
        };
        let feet = region.feet(&proposal);
        let accepted = fit_rectangle(&feet, cfg.min_support).ok().and_then(|rect| {
            let ratio = rect.aspect_ratio();
            if !(ratio < cfg.aspect_ratio_max) {
                return None;
            }
            let a = clamp_to_lattice(rect.endpoint_a, dims);
            let b = clamp_to_lattice(rect.endpoint_b, dims);
            LineSegment::new(a, b).ok().map(|segment| Detection {
                segment,
                aspect_ratio: ratio,
                support_size: rect.support_size,
            })
        });
        match accepted {
            Some(d) => items.push(d),
            None => grower.release(&region),
        }
    }
    Ok(Detections { dims, items })
}
