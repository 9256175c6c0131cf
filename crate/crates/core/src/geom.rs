//! Sub-pixel geometry on the image lattice.
//!
//! Lattice pixels sit at integer coordinates: `x` indexes columns in
//! `0..width`, `y` indexes rows in `0..height`. Distances are kept squared
//! wherever they are only compared.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or displacement) in continuous lattice coordinates, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

/// Displacements share the point representation.
pub type Vec2 = Point2;

impl Point2 {
    pub const ZERO: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// A line segment with distinct, finite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSegment {
    start: Point2,
    end: Point2,
}

impl LineSegment {
    pub fn new(start: Point2, end: Point2) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() {
            return Err(Error::validation("non-finite segment endpoint"));
        }
        if start == end {
            return Err(Error::validation("zero-length segment"));
        }
        Ok(Self { start, end })
    }

    /// Shorthand for `new` from raw coordinates.
    pub fn from_coords(x1: f64, y1: f64, x2: f64, y2: f64) -> Result<Self> {
        Self::new(Point2::new(x1, y1), Point2::new(x2, y2))
    }

    #[inline]
    pub fn start(&self) -> Point2 {
        self.start
    }

    #[inline]
    pub fn end(&self) -> Point2 {
        self.end
    }

    #[inline]
    pub fn delta(&self) -> Vec2 {
        self.end - self.start
    }

    pub fn length(&self) -> f64 {
        self.delta().norm()
    }

    pub fn midpoint(&self) -> Point2 {
        (self.start + self.end) * 0.5
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.start.x, self.start.y, self.end.x, self.end.y]
    }

    /// Both endpoints multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.start * factor, self.end * factor)
    }

    /// Undirected direction of the segment.
    pub fn direction(&self) -> Direction {
        let d = self.delta();
        Direction::new(d.y.atan2(d.x))
    }
}

/// Size of the image lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeDims {
    width: u32,
    height: u32,
}

impl LatticeDims {
    pub fn new(width: u32, height: u32) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::validation(format!(
                "lattice dimensions must be positive, got {width}x{height}"
            )));
        }
        Ok(Self { width, height })
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn diagonal(&self) -> f64 {
        (self.width as f64).hypot(self.height as f64)
    }

    pub fn min_side(&self) -> u32 {
        self.width.min(self.height)
    }

    /// Row-major index of pixel `(x, y)`.
    #[inline]
    pub fn index(&self, x: u32, y: u32) -> usize {
        y as usize * self.width as usize + x as usize
    }

    #[inline]
    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && x < self.width as i64 && y < self.height as i64
    }

    /// Dimensions multiplied by `factor`, rounded up.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::validation(format!(
                "scale must be positive, got {factor}"
            )));
        }
        let w = (self.width as f64 * factor).ceil();
        let h = (self.height as f64 * factor).ceil();
        if w > u32::MAX as f64 || h > u32::MAX as f64 {
            return Err(Error::validation("scaled lattice too large"));
        }
        Self::new(w as u32, h as u32)
    }

    /// Pixel coordinates in row-major order.
    pub fn pixels(&self) -> impl Iterator<Item = (u32, u32)> {
        let w = self.width;
        (0..self.height).flat_map(move |y| (0..w).map(move |x| (x, y)))
    }
}

/// A lattice together with an ordered list of segments. Segment `i` keeps
/// index `i` for the lifetime of the map.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSegmentMap {
    pub dims: LatticeDims,
    pub segments: Vec<LineSegment>,
}

impl LineSegmentMap {
    pub fn new(dims: LatticeDims, segments: Vec<LineSegment>) -> Self {
        Self { dims, segments }
    }

    pub fn empty(dims: LatticeDims) -> Self {
        Self::new(dims, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Scale both the lattice (ceiling) and every coordinate by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let dims = self.dims.scaled(factor)?;
        let segments = self
            .segments
            .iter()
            .map(|s| s.scaled(factor))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(dims, segments))
    }
}

/// Undirected line direction, always stored in `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Direction(f64);

impl Direction {
    pub fn new(theta: f64) -> Self {
        let mut t = theta.rem_euclid(PI);
        // rem_euclid can round up to exactly π for tiny negative inputs
        if t >= PI {
            t = 0.0;
        }
        Direction(t)
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Result of projecting a point onto a segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    /// Clamped parameter along the segment, in `[0, 1]`.
    pub t: f64,
    pub foot: Point2,
    /// Squared distance from the point to `foot`.
    pub sq_dist: f64,
}

/// Closest point of `seg` to `p`.
#[inline]
pub fn project_onto_segment(p: Point2, seg: &LineSegment) -> Projection {
    let d = seg.delta();
    let t = (p - seg.start).dot(d) / d.norm_sq();
    let (t, foot) = if t <= 0.0 {
        (0.0, seg.start)
    } else if t >= 1.0 {
        (1.0, seg.end)
    } else {
        (t, seg.start + d * t)
    };
    Projection {
        t,
        foot,
        sq_dist: (foot - p).norm_sq(),
    }
}

/// Vector from `p` to its closest point on `seg`.
#[inline]
pub fn attraction_vector(p: Point2, seg: &LineSegment) -> Vec2 {
    project_onto_segment(p, seg).foot - p
}

/// Angle of an attraction vector, in `(-π, π]`. The vector points along the
/// normal of the segment it was attracted to.
pub fn normal_angle(a: Vec2) -> Result<f64> {
    if a.x == 0.0 && a.y == 0.0 {
        return Err(Error::validation("normal undefined for zero attraction"));
    }
    Ok(a.y.atan2(a.x))
}

/// Smallest angle between two undirected directions, in `[0, π/2]`.
#[inline]
pub fn angular_distance(a: Direction, b: Direction) -> f64 {
    let d = (a.0 - b.0).abs();
    d.min(PI - d)
}

/// Running doubled-angle mean of undirected directions.
///
/// Sums are accumulated in push order so results do not depend on anything
/// but the input sequence.
#[derive(Debug, Clone, Copy, Default)]
pub struct DirectionAccumulator {
    sum_cos: f64,
    sum_sin: f64,
    total_weight: f64,
}

impl DirectionAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, dir: Direction, weight: f64) {
        let doubled = 2.0 * dir.0;
        self.sum_cos += weight * doubled.cos();
        self.sum_sin += weight * doubled.sin();
        self.total_weight += weight;
    }

    /// Current mean, or `None` when the resultant vanishes.
    pub fn mean(&self) -> Option<Direction> {
        let r = self.sum_cos.hypot(self.sum_sin);
        if !(self.total_weight > 0.0) || r <= 1e-12 * self.total_weight {
            return None;
        }
        Some(Direction::new(0.5 * self.sum_sin.atan2(self.sum_cos)))
    }
}

/// Weighted circular mean of undirected directions (doubled-angle method).
pub fn circular_mean(dirs: &[Direction], weights: Option<&[f64]>) -> Result<Direction> {
    if dirs.is_empty() {
        return Err(Error::validation("mean direction of an empty set"));
    }
    let mut acc = DirectionAccumulator::new();
    match weights {
        Some(w) => {
            if w.len() != dirs.len() {
                return Err(Error::validation(format!(
                    "{} weights for {} directions",
                    w.len(),
                    dirs.len()
                )));
            }
            if w.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::validation("weights must be finite and non-negative"));
            }
            for (&d, &wi) in dirs.iter().zip(w) {
                acc.push(d, wi);
            }
        }
        None => dirs.iter().for_each(|&d| acc.push(d, 1.0)),
    }
    acc.mean()
        .ok_or_else(|| Error::validation("mean direction undefined"))
}
