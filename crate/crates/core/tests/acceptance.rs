//! Acceptance suite. Runs every criterion and prints one PASS/FAIL line each.
//!
//! Set `AFM_WIREFRAME_DIR` to a directory of annotation JSON files to run the
//! round-trip criterion on a real corpus; otherwise a seeded synthetic corpus
//! is used.
//!
//! Failures are reported but only turn into a non-zero exit status when
//! `AFM_ACCEPTANCE_STRICT` is set.

use std::collections::VecDeque;
use std::path::Path;
use std::time::{Duration, Instant};

use afm_core::afm::{encode_with_partition, stretch_value, unstretch_value, STRETCH_EPSILON};
use afm_core::eval::{
    match_counts, match_pixels, match_radius, perturb_afm, pr_sweep, rasterize_segments,
    round_trip_counts, scale_range, sweep_thresholds, verify_duality, MatchCounts, MatchMode,
    Pixel,
};
use afm_core::io::afm_file::{read_afm, write_afm};
use afm_core::io::annotation::{read_annotation, write_annotation};
use afm_core::io::synth::{generate_scenes, SynthConfig};
use afm_core::squeeze::remove_outliers;
use afm_core::{
    encode_afm, squeeze, LatticeDims, LineSegment, LineSegmentMap, Point2, SqueezeConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Thresholds, pinned.
const AC1_WIREFRAME_MIN_P: f64 = 0.99;
const AC1_WIREFRAME_MIN_R: f64 = 0.93;
const AC1_SYNTH_MIN_P: f64 = 0.98;
const AC1_SYNTH_MIN_R: f64 = 0.95;
const AC1_TIME_LIMIT: Duration = Duration::from_secs(300);
const AC2_SLACK: f64 = 0.001;
const AC3_SAMPLES: usize = 10_001;
const AC3_TOL: f64 = 1e-12;
const AC4_MAPS: usize = 100;
const AC4_CLOSURE_TOL: f64 = 1e-7;
const AC4_PERP_TOL: f64 = 1e-9;
const AC5_SCENES: usize = 500;
const AC5_ENDPOINT_TOL: f64 = 1.0;
const AC6_F_SLACK: f64 = 0.01;
const AC7_STEPS: usize = 50;
const AC8_INSTANCES: usize = 50;
const AC8_SLACK: usize = 2;
const AC9_NOISE: [f64; 4] = [0.0, 1.0, 2.0, 4.0];
const AC9_SCENES: usize = 40;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&mut Shared) -> Outcome);

struct Shared {
    corpus: Vec<LineSegmentMap>,
    scale1: Option<MatchCounts>,
}

fn synthetic_corpus() -> Vec<LineSegmentMap> {
    generate_scenes(&SynthConfig::default()).expect("default synthetic corpus")
}

fn corpus_counts(corpus: &[LineSegmentMap], scale: f64, cfg: &SqueezeConfig) -> MatchCounts {
    let mut total = MatchCounts::default();
    for lsm in corpus {
        total += round_trip_counts(&lsm.scaled(scale).unwrap(), cfg, MatchMode::OneToOne).unwrap();
    }
    total
}

fn load_annotation_dir(dir: &Path) -> Vec<LineSegmentMap> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .expect("readable annotation directory")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .filter_map(|p| read_annotation(&std::fs::read(p).unwrap()).ok())
        .filter(|m| !m.is_empty())
        .collect()
}

fn ac1_duality(shared: &mut Shared) -> Outcome {
    if let Ok(dir) = std::env::var("AFM_WIREFRAME_DIR") {
        let corpus = load_annotation_dir(Path::new(&dir));
        if corpus.is_empty() {
            return Err(format!("no annotations found in {dir}"));
        }
        let scales = scale_range(0.5, 2.0, 0.1).unwrap();
        let report = verify_duality(
            &corpus,
            &scales,
            &SqueezeConfig::default(),
            MatchMode::OneToOne,
        )
        .map_err(|e| e.to_string())?;
        let (p, r) = (report.mean_precision(), report.mean_recall());
        let detail = format!("wireframe corpus of {}: mean P {p:.4} (> {AC1_WIREFRAME_MIN_P}), mean R {r:.4} (> {AC1_WIREFRAME_MIN_R})", corpus.len());
        return if p > AC1_WIREFRAME_MIN_P && r > AC1_WIREFRAME_MIN_R {
            Ok(detail)
        } else {
            Err(detail)
        };
    }
    let start = Instant::now();
    let counts = corpus_counts(&shared.corpus, 1.0, &SqueezeConfig::default());
    let elapsed = start.elapsed();
    shared.scale1 = Some(counts);
    let (p, r) = (counts.precision(), counts.recall());
    let detail = format!(
        "synthetic corpus of {} at scale 1.0: P {p:.4} (>= {AC1_SYNTH_MIN_P}), R {r:.4} (>= {AC1_SYNTH_MIN_R}), {:.1}s (< {}s)",
        shared.corpus.len(),
        elapsed.as_secs_f64(),
        AC1_TIME_LIMIT.as_secs()
    );
    if p >= AC1_SYNTH_MIN_P && r >= AC1_SYNTH_MIN_R && elapsed < AC1_TIME_LIMIT {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ac2_scale_trend(shared: &mut Shared) -> Outcome {
    let cfg = SqueezeConfig::default();
    let at1 = match shared.scale1 {
        Some(c) => c,
        None => corpus_counts(&shared.corpus, 1.0, &cfg),
    };
    let at2 = corpus_counts(&shared.corpus, 2.0, &cfg);
    let (p1, p2) = (at1.precision(), at2.precision());
    let detail = format!("P(2.0) {p2:.4} vs P(1.0) {p1:.4} + {AC2_SLACK}");
    if p2 <= p1 + AC2_SLACK {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ac3_stretch_round_trip(_: &mut Shared) -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..AC3_SAMPLES {
        let z = -0.99 + 1.98 * k as f64 / (AC3_SAMPLES - 1) as f64;
        let sign = if z > 0.0 {
            1.0
        } else if z < 0.0 {
            -1.0
        } else {
            0.0
        };
        let expected = sign * (z.abs() + STRETCH_EPSILON);
        worst = worst.max((unstretch_value(stretch_value(z)) - expected).abs());
    }
    let detail = format!("{AC3_SAMPLES} samples, max deviation {worst:.3e} (<= {AC3_TOL:e})");
    if worst <= AC3_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Closest point on a segment, written independently of the library:
/// perpendicular foot via the cross product, else the nearer endpoint.
fn oracle_closest(p: Point2, s: &LineSegment) -> (f64, Point2) {
    let (a, b) = (s.start(), s.end());
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len_sq = dx * dx + dy * dy;
    let along = (p.x - a.x) * dx + (p.y - a.y) * dy;
    if along > 0.0 && along < len_sq {
        let cross = (p.x - a.x) * dy - (p.y - a.y) * dx;
        let t = along / len_sq;
        (
            cross * cross / len_sq,
            Point2::new(a.x + t * dx, a.y + t * dy),
        )
    } else {
        let da = (p.x - a.x).powi(2) + (p.y - a.y).powi(2);
        let db = (p.x - b.x).powi(2) + (p.y - b.y).powi(2);
        if da <= db {
            (da, a)
        } else {
            (db, b)
        }
    }
}

fn random_map(
    rng: &mut ChaCha8Rng,
    max_side: u32,
    max_segments: usize,
    snap: bool,
) -> LineSegmentMap {
    let dims = LatticeDims::new(
        rng.random_range(1..=max_side),
        rng.random_range(1..=max_side),
    )
    .unwrap();
    let n = rng.random_range(1..=max_segments);
    let (w, h) = (dims.width() as f64, dims.height() as f64);
    let mut segments = Vec::new();
    while segments.len() < n {
        let mut c = [
            rng.random_range(0.0..=w),
            rng.random_range(0.0..=h),
            rng.random_range(0.0..=w),
            rng.random_range(0.0..=h),
        ];
        if snap {
            c.iter_mut().for_each(|v| *v = v.round());
        }
        if let Ok(s) = LineSegment::from_coords(c[0], c[1], c[2], c[3]) {
            segments.push(s);
        }
    }
    LineSegmentMap::new(dims, segments)
}

fn ac4_partition(_: &mut Shared) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst_closure, mut worst_perp) = (0.0f64, 0.0f64);
    let mut exact_labels = 0usize;
    let mut pixels = 0usize;
    for m in 0..AC4_MAPS {
        let lsm = random_map(&mut rng, 64, 20, m % 5 == 0);
        let (rpm, afm) = encode_with_partition(&lsm).map_err(|e| e.to_string())?;
        let n = lsm.len();
        let sizes = rpm.region_sizes(n);
        if sizes.iter().sum::<usize>() != lsm.dims.pixel_count() {
            return Err(format!("map {m}: partition does not cover the lattice"));
        }
        for (x, y) in lsm.dims.pixels() {
            pixels += 1;
            let p = Point2::new(x as f64, y as f64);
            let label = rpm.label(x, y) as usize;
            if label >= n {
                return Err(format!("map {m}: label {label} out of range at ({x},{y})"));
            }
            let dists: Vec<f64> = lsm
                .segments
                .iter()
                .map(|s| oracle_closest(p, s).0)
                .collect();
            let mut oracle = 0;
            for (i, &d) in dists.iter().enumerate() {
                if d < dists[oracle] {
                    oracle = i;
                }
            }
            if label == oracle {
                exact_labels += 1;
            } else if (dists[label] - dists[oracle]).abs() > 1e-12 * (1.0 + dists[oracle]) {
                return Err(format!(
                    "map {m}: pixel ({x},{y}) labelled {label}, oracle says {oracle}"
                ));
            }
            let a = afm.get(x, y);
            let seg = &lsm.segments[label];
            let foot = p + a;
            worst_closure = worst_closure.max(oracle_closest(foot, seg).0.sqrt());
            let d = seg.delta();
            let along = (p - seg.start()).dot(d);
            if along > 0.0 && along < d.norm_sq() {
                worst_perp = worst_perp.max((a.dot(d) / d.norm()).abs());
            }
        }
    }
    let detail = format!(
        "{AC4_MAPS} maps, {pixels} pixels, {exact_labels} labels identical to oracle; closure {worst_closure:.2e} (<= {AC4_CLOSURE_TOL:e}), perpendicularity {worst_perp:.2e} (<= {AC4_PERP_TOL:e})"
    );
    if worst_closure <= AC4_CLOSURE_TOL && worst_perp <= AC4_PERP_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ac5_isolated_segment(_: &mut Shared) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    // the outlier radius is below one pixel on the smallest lattices
    let cfg = SqueezeConfig {
        remove_outliers: false,
        ..SqueezeConfig::default()
    };
    let mut worst = 0.0f64;
    for k in 0..AC5_SCENES {
        let dims =
            LatticeDims::new(rng.random_range(10..=128), rng.random_range(10..=128)).unwrap();
        let (w, h) = ((dims.width() - 1) as f64, (dims.height() - 1) as f64);
        let seg = loop {
            let s = LineSegment::from_coords(
                rng.random_range(0.0..=w),
                rng.random_range(0.0..=h),
                rng.random_range(0.0..=w),
                rng.random_range(0.0..=h),
            );
            if let Ok(s) = s {
                if s.length() >= 0.1 * dims.diagonal() {
                    break s;
                }
            }
        };
        let lsm = LineSegmentMap::new(dims, vec![seg]);
        let det = squeeze(&encode_afm(&lsm).unwrap(), &cfg).map_err(|e| e.to_string())?;
        if det.len() != 1 {
            return Err(format!(
                "scene {k} ({:?} on {}x{}): {} segments",
                seg.coords(),
                dims.width(),
                dims.height(),
                det.len()
            ));
        }
        let d = det.items[0].segment;
        let err = ((d.start() - seg.start())
            .norm()
            .max((d.end() - seg.end()).norm()))
        .min(
            (d.start() - seg.end())
                .norm()
                .max((d.end() - seg.start()).norm()),
        );
        if err > AC5_ENDPOINT_TOL {
            return Err(format!(
                "scene {k} ({:?}): endpoint error {err:.3}",
                seg.coords()
            ));
        }
        worst = worst.max(err);
    }
    Ok(format!("{AC5_SCENES} scenes, one segment each, worst endpoint error {worst:.3} px (<= {AC5_ENDPOINT_TOL})"))
}

fn ac6_outlier_filter(shared: &mut Shared) -> Outcome {
    for (i, lsm) in shared.corpus.iter().enumerate() {
        let afm = encode_afm(lsm).unwrap();
        let gamma = 0.02 * afm.dims().min_side() as f64;
        let kept = remove_outliers(&afm, 0.02).map_err(|e| e.to_string())?;
        for v in &kept {
            if v.attraction != afm.get(v.x, v.y) {
                return Err(format!(
                    "scene {i}: retained vector at ({},{}) is not an input vector",
                    v.x, v.y
                ));
            }
            if v.attraction.norm() > gamma {
                return Err(format!(
                    "scene {i}: retained norm {} above {gamma}",
                    v.attraction.norm()
                ));
            }
        }
    }
    let with = match shared.scale1 {
        Some(c) => c,
        None => corpus_counts(&shared.corpus, 1.0, &SqueezeConfig::default()),
    };
    let without = corpus_counts(
        &shared.corpus,
        1.0,
        &SqueezeConfig {
            remove_outliers: false,
            ..SqueezeConfig::default()
        },
    );
    let (fw, fo) = (
        with.pr_point(None).f_measure,
        without.pr_point(None).f_measure,
    );
    let detail = format!("subset and norm bound hold on {} fields; F with filter {fw:.4} vs without {fo:.4} - {AC6_F_SLACK}", shared.corpus.len());
    if fw >= fo - AC6_F_SLACK {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ac7_sweep_shape(shared: &mut Shared) -> Outcome {
    let thresholds: Vec<f64> = sweep_thresholds().collect();
    if thresholds.len() != AC7_STEPS
        || thresholds.windows(2).any(|w| w[0] >= w[1])
        || thresholds[AC7_STEPS - 1] != 1.0
    {
        return Err(format!("bad threshold grid {thresholds:?}"));
    }
    let cfg = SqueezeConfig::default();
    for (i, lsm) in shared.corpus.iter().take(20).enumerate() {
        let afm = encode_afm(lsm).unwrap();
        let curve = pr_sweep(&afm, lsm, &cfg, MatchMode::OneToOne).map_err(|e| e.to_string())?;
        if curve.points.len() != AC7_STEPS {
            return Err(format!("scene {i}: {} points", curve.points.len()));
        }
        let all = squeeze(
            &afm,
            &SqueezeConfig {
                aspect_ratio_max: 1.0,
                ..cfg.clone()
            },
        )
        .unwrap();
        let mut prev: Vec<_> = Vec::new();
        for &t in &thresholds {
            let cur = all.below(t).items;
            if !prev.iter().all(|d| cur.contains(d)) {
                return Err(format!(
                    "scene {i}: acceptance set shrinks at threshold {t}"
                ));
            }
            prev = cur;
        }
        let unfiltered = match_counts(&all.to_segment_map(), lsm, MatchMode::OneToOne).unwrap();
        if curve.points[AC7_STEPS - 1].recall != unfiltered.recall() {
            return Err(format!(
                "scene {i}: recall at 1.0 differs from unfiltered squeeze"
            ));
        }
    }
    Ok(format!(
        "{AC7_STEPS} strictly increasing thresholds; nested acceptance sets on 20 scenes"
    ))
}

/// Maximum-cardinality bipartite matching (Hopcroft–Karp) over pairs within `radius`.
fn optimal_matching(pred: &[Pixel], gt: &[Pixel], radius: f64) -> usize {
    let r2 = radius * radius;
    let adj: Vec<Vec<usize>> = pred
        .iter()
        .map(|&(px, py)| {
            gt.iter()
                .enumerate()
                .filter(|(_, &(gx, gy))| {
                    let (dx, dy) = (px as f64 - gx as f64, py as f64 - gy as f64);
                    dx * dx + dy * dy <= r2
                })
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    const NIL: usize = usize::MAX;
    let mut match_p = vec![NIL; pred.len()];
    let mut match_g = vec![NIL; gt.len()];
    let mut dist = vec![0usize; pred.len()];
    let mut total = 0;
    loop {
        // BFS layering from free left vertices
        let mut queue = VecDeque::new();
        let mut found = false;
        for (u, d) in dist.iter_mut().enumerate() {
            if match_p[u] == NIL {
                *d = 0;
                queue.push_back(u);
            } else {
                *d = usize::MAX;
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_g[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        fn dfs(
            u: usize,
            adj: &[Vec<usize>],
            mp: &mut [usize],
            mg: &mut [usize],
            dist: &mut [usize],
        ) -> bool {
            for &v in &adj[u] {
                let w = mg[v];
                if w == usize::MAX || (dist[w] == dist[u] + 1 && dfs(w, adj, mp, mg, dist)) {
                    mp[u] = v;
                    mg[v] = u;
                    return true;
                }
            }
            dist[u] = usize::MAX;
            false
        }
        for u in 0..pred.len() {
            if match_p[u] == NIL && dfs(u, &adj, &mut match_p, &mut match_g, &mut dist) {
                total += 1;
            }
        }
    }
    total
}

fn ac8_matcher(_: &mut Shared) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_gap = 0usize;
    let mut over = Vec::new();
    for k in 0..AC8_INSTANCES {
        let gt = random_map(&mut rng, 200, 6, false);
        let dims = gt.dims;
        let (w, h) = (dims.width() as f64, dims.height() as f64);
        let jitter = match_radius(dims).max(1.0);
        let mut pred_segments: Vec<LineSegment> = gt
            .segments
            .iter()
            .filter_map(|s| {
                let mut c = s.coords();
                for (i, v) in c.iter_mut().enumerate() {
                    let hi = if i % 2 == 0 { w } else { h };
                    *v = (*v + rng.random_range(-jitter..=jitter)).clamp(0.0, hi);
                }
                LineSegment::from_coords(c[0], c[1], c[2], c[3]).ok()
            })
            .collect();
        pred_segments.extend(
            random_map(&mut rng, 200, 2, false)
                .segments
                .into_iter()
                .filter(|s| {
                    s.coords()
                        .iter()
                        .enumerate()
                        .all(|(i, &v)| v <= if i % 2 == 0 { w } else { h })
                }),
        );
        let pred = LineSegmentMap::new(dims, pred_segments);
        let (pp, gp) = (rasterize_segments(&pred), rasterize_segments(&gt));
        let (greedy, greedy_gt) = match_pixels(&pp, &gp, dims, MatchMode::OneToOne);
        if greedy != greedy_gt {
            return Err(format!("instance {k}: asymmetric counts"));
        }
        let best = optimal_matching(&pp, &gp, match_radius(dims));
        if greedy > best {
            return Err(format!(
                "instance {k}: greedy {greedy} exceeds optimum {best}"
            ));
        }
        worst_gap = worst_gap.max(best - greedy);
        if best - greedy > AC8_SLACK {
            over.push(format!("#{k} {greedy}/{best}"));
        }
    }
    let detail = format!(
        "{AC8_INSTANCES} instances, largest greedy shortfall {worst_gap} px (<= {AC8_SLACK}); {} beyond slack{}",
        over.len(),
        if over.is_empty() {
            String::new()
        } else {
            format!(" (greedy/optimum: {})", over.join(", "))
        }
    );
    if over.is_empty() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ac9_noise(_: &mut Shared) -> Outcome {
    let corpus = generate_scenes(&SynthConfig {
        seed: 9,
        scene_count: AC9_SCENES,
        ..SynthConfig::default()
    })
    .unwrap();
    let cfg = SqueezeConfig::default();
    let mut fs = Vec::new();
    for &sigma in &AC9_NOISE {
        let mut total = MatchCounts::default();
        for (i, lsm) in corpus.iter().enumerate() {
            let afm = perturb_afm(&encode_afm(lsm).unwrap(), sigma, i as u64).unwrap();
            let det = squeeze(&afm, &cfg).unwrap().to_segment_map();
            total += match_counts(&det, lsm, MatchMode::OneToOne).unwrap();
        }
        fs.push(total.pr_point(None).f_measure);
    }
    let detail = format!(
        "F at noise {:?} px: {}",
        AC9_NOISE,
        fs.iter()
            .map(|f| format!("{f:.4}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    if fs.windows(2).all(|w| w[1] <= w[0]) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn golden_map() -> LineSegmentMap {
    LineSegmentMap::new(
        LatticeDims::new(8, 6).unwrap(),
        vec![
            LineSegment::from_coords(0.5, 1.25, 6.75, 4.5).unwrap(),
            LineSegment::from_coords(2.0, 5.0, 7.0, 0.5).unwrap(),
        ],
    )
}

fn ac10_golden_files(_: &mut Shared) -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let afm_bytes = std::fs::read(dir.join("reference.afm")).map_err(|e| e.to_string())?;
    let json_bytes = std::fs::read(dir.join("reference.json")).map_err(|e| e.to_string())?;
    let lsm = golden_map();
    if write_afm(&encode_afm(&lsm).unwrap()) != afm_bytes {
        return Err("encoded reference field differs from reference.afm".into());
    }
    if write_afm(&read_afm(&afm_bytes).map_err(|e| e.to_string())?) != afm_bytes {
        return Err("reference.afm does not survive read/write".into());
    }
    if write_annotation(&lsm) != json_bytes {
        return Err("reference map serializes differently from reference.json".into());
    }
    if read_annotation(&json_bytes).map_err(|e| e.to_string())? != lsm {
        return Err("reference.json does not read back to the reference map".into());
    }
    Ok(format!(
        "reference.afm ({} bytes) and reference.json ({} bytes) byte-identical",
        afm_bytes.len(),
        json_bytes.len()
    ))
}

fn main() {
    // honour `cargo test -- --list` and similar libtest probes
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [Criterion; 10] = [
        ("AC1 duality round trip", ac1_duality),
        ("AC2 scale trend", ac2_scale_trend),
        ("AC3 stretch round trip", ac3_stretch_round_trip),
        ("AC4 partition properties", ac4_partition),
        ("AC5 isolated segment round trip", ac5_isolated_segment),
        ("AC6 outlier filter contract", ac6_outlier_filter),
        ("AC7 sweep shape", ac7_sweep_shape),
        ("AC8 matcher vs optimal matching", ac8_matcher),
        ("AC9 noise degradation", ac9_noise),
        ("AC10 format stability", ac10_golden_files),
    ];
    let mut shared = Shared {
        corpus: synthetic_corpus(),
        scale1: None,
    };
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run(&mut shared);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        if std::env::var_os("AFM_ACCEPTANCE_STRICT").is_some() {
            std::process::exit(1);
        }
        return;
    }
    println!("all acceptance criteria passed");
}
