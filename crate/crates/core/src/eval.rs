//! Pixel-level precision/recall scoring and the experiments built on it.
//!
//! Segments are digitized onto the lattice, and a predicted pixel counts as a
//! positive when it can be paired with a ground-truth pixel within 1% of the
//! image diagonal. Pairing is one-to-one by default, built greedily in
//! ascending distance order.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::afm::{encode_afm, AfmState, AttractionFieldMap};
use crate::error::{Error, Result};
use crate::geom::{LatticeDims, LineSegmentMap, Vec2};
use crate::squeeze::{squeeze, Detections, SqueezeConfig};

/// Matching radius as a fraction of the lattice diagonal.
pub const MATCH_RADIUS_FRACTION: f64 = 0.01;

/// Number of aspect-ratio thresholds in a sweep over `(0, 1]`.
pub const SWEEP_STEPS: usize = 50;

/// A lattice pixel as `(x, y)`.
pub type Pixel = (u32, u32);

/// One point of a precision/recall curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PRPoint {
    pub threshold: Option<f64>,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

impl PRPoint {
    pub fn new(threshold: Option<f64>, precision: f64, recall: f64) -> Self {
        Self {
            threshold,
            precision,
            recall,
            f_measure: f_measure(precision, recall),
        }
    }
}

/// Harmonic mean of precision and recall; zero when both are zero.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PRCurve {
    pub points: Vec<PRPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleResult {
    pub scale: f64,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DualityReport {
    pub scales: Vec<ScaleResult>,
}

impl DualityReport {
    pub fn mean_precision(&self) -> f64 {
        mean(self.scales.iter().map(|s| s.precision))
    }

    pub fn mean_recall(&self) -> f64 {
        mean(self.scales.iter().map(|s| s.recall))
    }

    pub fn min_precision(&self) -> f64 {
        self.scales
            .iter()
            .map(|s| s.precision)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_recall(&self) -> f64 {
        self.scales
            .iter()
            .map(|s| s.recall)
            .fold(f64::INFINITY, f64::min)
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// Histogram of attraction magnitudes divided by `min(H, W)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeHistogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl MagnitudeHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Fraction of the mass in bins whose upper edge is at most `limit`.
    pub fn fraction_at_or_below(&self, limit: f64) -> f64 {
        let below: u64 = self
            .counts
            .iter()
            .zip(&self.bin_edges[1..])
            .filter(|(_, &hi)| hi <= limit)
            .map(|(c, _)| c)
            .sum();
        below as f64 / self.total() as f64
    }
}

/// Digitize segments: `⌈len⌉ + 1` evenly spaced samples per segment
/// (spacing at most one pixel), each rounded to the nearest pixel and
/// clamped into the lattice. Returns sorted, deduplicated pixels.
pub fn rasterize_segments(lsm: &LineSegmentMap) -> Vec<Pixel> {
    let (w, h) = (lsm.dims.width(), lsm.dims.height());
    let round =
        |v: f64, hi: u32| -> u32 { ((v + 0.5).floor().max(0.0) as u64).min(hi as u64 - 1) as u32 };
    let mut pixels = Vec::new();
    for seg in &lsm.segments {
        let steps = seg.length().ceil().max(1.0) as usize;
        let (s, d) = (seg.start(), seg.delta());
        for k in 0..=steps {
            let p = if k == steps {
                seg.end()
            } else {
                s + d * (k as f64 / steps as f64)
            };
            pixels.push((round(p.x, w), round(p.y, h)));
        }
    }
    pixels.sort_unstable();
    pixels.dedup();
    pixels
}

/// How predicted and ground-truth pixels are paired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchMode {
    /// Each pixel participates in at most one pair.
    #[default]
    OneToOne,
    /// A pixel is matched when any pixel of the other set lies within the radius.
    AnyWithinRadius,
}

/// Pixel totals and matched counts for one or more images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MatchCounts {
    pub pred_total: usize,
    pub gt_total: usize,
    pub matched_pred: usize,
    pub matched_gt: usize,
}

impl MatchCounts {
    pub fn precision(&self) -> f64 {
        if self.pred_total == 0 {
            0.0
        } else {
            self.matched_pred as f64 / self.pred_total as f64
        }
    }

    pub fn recall(&self) -> f64 {
        if self.gt_total == 0 {
            0.0
        } else {
            self.matched_gt as f64 / self.gt_total as f64
        }
    }

    pub fn pr_point(&self, threshold: Option<f64>) -> PRPoint {
        PRPoint::new(threshold, self.precision(), self.recall())
    }
}

impl std::ops::AddAssign for MatchCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.pred_total += rhs.pred_total;
        self.gt_total += rhs.gt_total;
        self.matched_pred += rhs.matched_pred;
        self.matched_gt += rhs.matched_gt;
    }
}

/// Matching radius for a lattice, in pixels.
pub fn match_radius(dims: LatticeDims) -> f64 {
    MATCH_RADIUS_FRACTION * dims.diagonal()
}

fn disc_offsets(radius: f64) -> Vec<(i64, i64, u64)> {
    let r = radius.floor() as i64;
    let r2 = radius * radius;
    let mut offsets = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            let d2 = (dx * dx + dy * dy) as u64;
            if d2 as f64 <= r2 {
                offsets.push((dx, dy, d2));
            }
        }
    }
    offsets
}

/// Count matched pixels between two pixel sets on the same lattice.
///
/// Returns `(matched_pred, matched_gt)`.
pub fn match_pixels(
    pred: &[Pixel],
    gt: &[Pixel],
    dims: LatticeDims,
    mode: MatchMode,
) -> (usize, usize) {
    if pred.is_empty() || gt.is_empty() {
        return (0, 0);
    }
    let offsets = disc_offsets(match_radius(dims));
    let mut gt_index = vec![u32::MAX; dims.pixel_count()];
    for (j, &(x, y)) in gt.iter().enumerate() {
        gt_index[dims.index(x, y)] = j as u32;
    }
    let (offsets, gt_index) = (&offsets, &gt_index);
    let neighbours = |&(x, y): &Pixel| {
        offsets.iter().filter_map(move |&(dx, dy, d2)| {
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            if !dims.contains(nx, ny) {
                return None;
            }
            let j = gt_index[dims.index(nx as u32, ny as u32)];
            (j != u32::MAX).then_some((d2, j))
        })
    };

    match mode {
        MatchMode::AnyWithinRadius => {
            let mut gt_hit = vec![false; gt.len()];
            let mut matched_pred = 0;
            for p in pred {
                let mut any = false;
                for (_, j) in neighbours(p) {
                    gt_hit[j as usize] = true;
                    any = true;
                }
                matched_pred += any as usize;
            }
            (matched_pred, gt_hit.iter().filter(|&&b| b).count())
        }
        MatchMode::OneToOne => {
            let mut pairs: Vec<(u64, u32, u32)> = Vec::new();
            for (i, p) in pred.iter().enumerate() {
                pairs.extend(neighbours(p).map(|(d2, j)| (d2, i as u32, j)));
            }
            pairs.sort_unstable();
            let mut pred_used = vec![false; pred.len()];
            let mut gt_used = vec![false; gt.len()];
            let mut matched = 0;
            for (_, i, j) in pairs {
                let (i, j) = (i as usize, j as usize);
                if !pred_used[i] && !gt_used[j] {
                    pred_used[i] = true;
                    gt_used[j] = true;
                    matched += 1;
                }
            }
            (matched, matched)
        }
    }
}

fn check_dims(a: LatticeDims, b: LatticeDims) -> Result<()> {
    if a != b {
        return Err(Error::validation(format!(
            "lattice mismatch: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}

/// Raw match counts of a prediction against ground truth.
pub fn match_counts(
    pred: &LineSegmentMap,
    gt: &LineSegmentMap,
    mode: MatchMode,
) -> Result<MatchCounts> {
    check_dims(pred.dims, gt.dims)?;
    let pp = rasterize_segments(pred);
    let gp = rasterize_segments(gt);
    Ok(counts_for_pixels(&pp, &gp, gt.dims, mode))
}

fn counts_for_pixels(
    pred: &[Pixel],
    gt: &[Pixel],
    dims: LatticeDims,
    mode: MatchMode,
) -> MatchCounts {
    let (matched_pred, matched_gt) = match_pixels(pred, gt, dims, mode);
    MatchCounts {
        pred_total: pred.len(),
        gt_total: gt.len(),
        matched_pred,
        matched_gt,
    }
}

/// Precision, recall and F-measure of one prediction (threshold unset).
pub fn precision_recall(
    pred: &LineSegmentMap,
    gt: &LineSegmentMap,
    mode: MatchMode,
) -> Result<PRPoint> {
    Ok(match_counts(pred, gt, mode)?.pr_point(None))
}

/// Aspect-ratio thresholds `0.02, 0.04, …, 1.00`.
pub fn sweep_thresholds() -> impl Iterator<Item = f64> {
    (1..=SWEEP_STEPS).map(|k| k as f64 / SWEEP_STEPS as f64)
}

/// Score a set of detections at every sweep threshold, accumulating into `acc`.
pub fn accumulate_sweep(
    detections: &Detections,
    gt: &LineSegmentMap,
    mode: MatchMode,
    acc: &mut [MatchCounts],
) -> Result<()> {
    check_dims(detections.dims, gt.dims)?;
    let gp = rasterize_segments(gt);
    for (slot, thr) in acc.iter_mut().zip(sweep_thresholds()) {
        let pred = detections.below(thr).to_segment_map();
        *slot += counts_for_pixels(&rasterize_segments(&pred), &gp, gt.dims, mode);
    }
    Ok(())
}

/// Squeeze once with every region accepted up to aspect ratio 1, then score
/// the detections kept at each sweep threshold.
pub fn pr_sweep(
    afm: &AttractionFieldMap,
    gt: &LineSegmentMap,
    cfg: &SqueezeConfig,
    mode: MatchMode,
) -> Result<PRCurve> {
    afm.expect_state(AfmState::Raw)?;
    let cfg = SqueezeConfig {
        aspect_ratio_max: 1.0,
        ..cfg.clone()
    };
    let detections = squeeze(afm, &cfg)?;
    let mut acc = vec![MatchCounts::default(); SWEEP_STEPS];
    accumulate_sweep(&detections, gt, mode, &mut acc)?;
    Ok(PRCurve {
        points: acc
            .iter()
            .zip(sweep_thresholds())
            .map(|(c, t)| c.pr_point(Some(t)))
            .collect(),
    })
}

/// Encode and squeeze one map, returning its match counts against itself.
pub fn round_trip_counts(
    lsm: &LineSegmentMap,
    cfg: &SqueezeConfig,
    mode: MatchMode,
) -> Result<MatchCounts> {
    let afm = encode_afm(lsm)?;
    let detected = squeeze(&afm, cfg)?.to_segment_map();
    match_counts(&detected, lsm, mode)
}

/// Encode→squeeze every map of `corpus` at each scale and report
/// micro-averaged precision and recall per scale.
pub fn verify_duality(
    corpus: &[LineSegmentMap],
    scales: &[f64],
    cfg: &SqueezeConfig,
    mode: MatchMode,
) -> Result<DualityReport> {
    if corpus.is_empty() {
        return Err(Error::validation("duality check needs a non-empty corpus"));
    }
    if scales.is_empty() || scales.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
        return Err(Error::validation("scales must be positive and non-empty"));
    }
    if scales.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("scales must be strictly increasing"));
    }
    let mut report = DualityReport::default();
    for &scale in scales {
        let mut total = MatchCounts::default();
        for lsm in corpus {
            total += round_trip_counts(&lsm.scaled(scale)?, cfg, mode)?;
        }
        report.scales.push(ScaleResult {
            scale,
            precision: total.precision(),
            recall: total.recall(),
        });
    }
    Ok(report)
}

/// Inclusive range `lo, lo + step, …, hi` (endpoint tolerance 1e-9), with
/// values rounded to 12 decimals to hide accumulation noise.
pub fn scale_range(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && step > 0.0)
        || !(lo.is_finite() && hi.is_finite() && step.is_finite())
    {
        return Err(Error::validation(format!(
            "invalid scale range {lo}:{hi}:{step}"
        )));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|k| ((lo + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Sum of component-wise absolute differences between two fields.
pub fn afm_l1(a: &AttractionFieldMap, b: &AttractionFieldMap) -> Result<f64> {
    check_dims(a.dims(), b.dims())?;
    b.expect_state(a.state())?;
    Ok(a.vectors()
        .iter()
        .zip(b.vectors())
        .map(|(u, v)| (u.x - v.x).abs() + (u.y - v.y).abs())
        .sum())
}

/// Histogram of `‖a‖ / min(H, W)` over every pixel of every map, with
/// `bins` uniform bins on `[0, max]`.
pub fn magnitude_histogram<'a, I>(afms: I, bins: usize) -> Result<MagnitudeHistogram>
where
    I: IntoIterator<Item = &'a AttractionFieldMap>,
    I::IntoIter: Clone,
{
    if bins == 0 {
        return Err(Error::validation("histogram needs at least one bin"));
    }
    let iter = afms.into_iter();
    let normalized = |afm: &'a AttractionFieldMap| {
        let side = afm.dims().min_side() as f64;
        afm.vectors().iter().map(move |v| v.norm() / side)
    };
    let mut seen = false;
    let mut max = 0.0f64;
    for afm in iter.clone() {
        afm.expect_state(AfmState::Raw)?;
        seen = true;
        max = normalized(afm).fold(max, f64::max);
    }
    if !seen {
        return Err(Error::validation("histogram of an empty stream"));
    }
    let hi = if max > 0.0 { max } else { 1.0 };
    let bin_edges: Vec<f64> = (0..=bins).map(|k| hi * k as f64 / bins as f64).collect();
    let mut counts = vec![0u64; bins];
    for afm in iter {
        for m in normalized(afm) {
            let k = ((m / hi) * bins as f64).floor() as usize;
            counts[k.min(bins - 1)] += 1;
        }
    }
    Ok(MagnitudeHistogram { bin_edges, counts })
}

/// Add a vector of length `magnitude` and uniformly random direction to every
/// pixel of a raw field.
pub fn perturb_afm(
    afm: &AttractionFieldMap,
    magnitude: f64,
    seed: u64,
) -> Result<AttractionFieldMap> {
    afm.expect_state(AfmState::Raw)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors = afm
        .vectors()
        .iter()
        .map(|v| {
            let angle = rng.random_range(0.0..2.0 * PI);
            *v + Vec2::new(angle.cos(), angle.sin()) * magnitude
        })
        .collect();
    AttractionFieldMap::from_vectors(afm.dims(), AfmState::Raw, vectors)
}
