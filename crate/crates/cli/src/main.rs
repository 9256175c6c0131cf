//! `afm`: encode line segment annotations into attraction field maps, squeeze
//! them back into segments, and score the results.
//!
//! Exit codes: 0 success, 1 invalid input or arguments, 2 file system error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use afm_core::afm::{size_normalize, stretch, to_raw};
use afm_core::eval::{
    magnitude_histogram, match_counts, pr_sweep, scale_range, verify_duality, MatchMode,
};
use afm_core::io::afm_file::{read_afm, write_afm};
use afm_core::io::annotation::{read_annotation, write_annotation, write_detections};
use afm_core::io::csv::{duality_csv, histogram_csv, pr_curve_csv, pr_points_csv};
use afm_core::io::synth::{generate_scenes, SynthConfig};
use afm_core::io::{read_bytes, write_bytes};
use afm_core::{
    encode_afm, squeeze, AfmState, AttractionFieldMap, Error, LatticeDims, LineSegmentMap, Point2,
    Result, SqueezeConfig,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "afm",
    version,
    about = "Attraction field maps for line segment maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode an annotation file into a binary attraction field map.
    Encode {
        /// Annotation JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Output .afm file.
        #[arg(long)]
        output: PathBuf,
        /// Divide vectors by the lattice width and height.
        #[arg(long)]
        normalize: bool,
        /// Apply the logarithmic stretch (requires --normalize).
        #[arg(long)]
        stretch: bool,
        /// Rescale the lattice (ceiling) and coordinates before encoding.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Recover line segments from an .afm file.
    Squeeze {
        /// Input .afm file; normalized or stretched maps are reversed first.
        #[arg(long)]
        input: PathBuf,
        /// Output annotation JSON with aspect ratios as scores.
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        squeeze: SqueezeArgs,
    },
    /// Encode and squeeze every annotation of a directory at several scales.
    Roundtrip {
        /// Directory of annotation JSON files.
        #[arg(long)]
        input: PathBuf,
        /// Scales as lo:hi:step, endpoints included.
        #[arg(long, default_value = "0.5:2.0:0.1")]
        scales: String,
        /// Write the per-scale precision and recall as CSV.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        squeeze: SqueezeArgs,
    },
    /// Score detected segments against ground truth.
    Eval {
        /// Predicted segments (annotation JSON).
        #[arg(long, required_unless_present = "sweep")]
        pred: Option<PathBuf>,
        /// Ground truth annotation JSON.
        #[arg(long)]
        gt: PathBuf,
        /// Sweep the aspect-ratio threshold over 0.02..1.00 by squeezing this .afm file.
        #[arg(long, conflicts_with = "pred")]
        sweep: Option<PathBuf>,
        /// Write precision/recall rows as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Count every pixel with a counterpart within the radius instead of matching one-to-one.
        #[arg(long)]
        any_match: bool,
        #[command(flatten)]
        squeeze: SqueezeArgs,
    },
    /// Write a seeded corpus of random annotation files.
    Synth {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of scenes.
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 320)]
        width: u32,
        #[arg(long, default_value_t = 320)]
        height: u32,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
    /// Histogram of attraction magnitudes relative to min(H, W).
    Stats {
        /// Directory of .afm files and annotation JSON files (encoded on the fly).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 50)]
        bins: usize,
        /// Output CSV file.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SqueezeArgs {
    /// Accept regions whose width/length is below this.
    #[arg(long, default_value_t = 0.2)]
    aspect_ratio: f64,
    /// Angular tolerance for region growing, degrees.
    #[arg(long, default_value_t = 10.0)]
    tau_deg: f64,
    /// Side of the square neighbourhood scanned during growth.
    #[arg(long, default_value_t = 3)]
    window: usize,
    /// Keep long attraction vectors (outlier removal is on by default).
    #[arg(long)]
    no_outlier_removal: bool,
    /// Outlier radius as a fraction of min(H, W).
    #[arg(long, default_value_t = 0.02)]
    gamma_fraction: f64,
}

impl SqueezeArgs {
    fn config(&self) -> Result<SqueezeConfig> {
        let cfg = SqueezeConfig {
            tau: self.tau_deg.to_radians(),
            window: self.window,
            aspect_ratio_max: self.aspect_ratio,
            remove_outliers: !self.no_outlier_removal,
            outlier_gamma_fraction: self.gamma_fraction,
            ..SqueezeConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

fn load_annotation(path: &Path) -> Result<LineSegmentMap> {
    read_annotation(&read_bytes(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

/// Read an .afm file and reverse it to pixel units. A reversed field is
/// rounded to file precision, so it squeezes exactly like the raw file that
/// stores it.
fn load_raw_afm(path: &Path) -> Result<AttractionFieldMap> {
    let afm =
        read_afm(&read_bytes(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    if afm.state() == AfmState::Raw {
        return Ok(afm);
    }
    let raw = to_raw(&afm)?;
    let vectors = raw
        .vectors()
        .iter()
        .map(|v| Point2::new(v.x as f32 as f64, v.y as f32 as f64))
        .collect();
    AttractionFieldMap::from_vectors(raw.dims(), AfmState::Raw, vectors)
}

/// Files of `dir` with one of `extensions`, sorted by file name.
fn list_files(dir: &Path, extensions: &[&str]) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let ext = path.extension().and_then(|x| x.to_str()).unwrap_or("");
        if path.is_file() && extensions.contains(&ext) {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

fn parse_scales(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| invalid(format!("bad scale spec {spec:?}; expected lo:hi:step")))?;
    match nums[..] {
        [lo, hi, step] => scale_range(lo, hi, step),
        [s] => Ok(vec![s]),
        _ => Err(invalid(format!(
            "bad scale spec {spec:?}; expected lo:hi:step"
        ))),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Encode {
            input,
            output,
            normalize,
            stretch: do_stretch,
            scale,
        } => {
            if do_stretch && !normalize {
                return Err(invalid("--stretch requires --normalize"));
            }
            let mut lsm = load_annotation(&input)?;
            if scale != 1.0 {
                lsm = lsm.scaled(scale)?;
            }
            let mut afm = encode_afm(&lsm)?;
            if normalize {
                afm = size_normalize(&afm)?;
            }
            if do_stretch {
                afm = stretch(&afm)?;
            }
            write_bytes(&output, &write_afm(&afm))
        }
        Command::Squeeze {
            input,
            output,
            squeeze: args,
        } => {
            let cfg = args.config()?;
            let det = squeeze(&load_raw_afm(&input)?, &cfg)?;
            write_bytes(&output, &write_detections(&det))?;
            println!("{} segments", det.len());
            Ok(())
        }
        Command::Roundtrip {
            input,
            scales,
            report,
            squeeze: args,
        } => {
            let cfg = args.config()?;
            let scales = parse_scales(&scales)?;
            let corpus = list_files(&input, &["json"])?
                .iter()
                .map(|p| load_annotation(p))
                .collect::<Result<Vec<_>>>()?;
            if corpus.is_empty() {
                return Err(invalid(format!(
                    "no annotation files in {}",
                    input.display()
                )));
            }
            let result = verify_duality(&corpus, &scales, &cfg, MatchMode::OneToOne)?;
            if let Some(path) = report {
                write_bytes(&path, duality_csv(&result).as_bytes())?;
            }
            println!(
                "{} files, {} scales: precision min {:.4} mean {:.4}, recall min {:.4} mean {:.4}",
                corpus.len(),
                scales.len(),
                result.min_precision(),
                result.mean_precision(),
                result.min_recall(),
                result.mean_recall()
            );
            Ok(())
        }
        Command::Eval {
            pred,
            gt,
            sweep,
            out,
            any_match,
            squeeze: args,
        } => {
            let mode = if any_match {
                MatchMode::AnyWithinRadius
            } else {
                MatchMode::OneToOne
            };
            let gt = load_annotation(&gt)?;
            let csv = if let Some(afm_path) = sweep {
                let curve = pr_sweep(&load_raw_afm(&afm_path)?, &gt, &args.config()?, mode)?;
                let best = curve
                    .points
                    .iter()
                    .max_by(|a, b| a.f_measure.total_cmp(&b.f_measure))
                    .expect("sweeps are never empty");
                println!(
                    "best F={:.4} at threshold {} (P={:.4} R={:.4})",
                    best.f_measure,
                    best.threshold.unwrap_or(1.0),
                    best.precision,
                    best.recall
                );
                pr_curve_csv(&curve)
            } else {
                let pred = load_annotation(pred.as_deref().expect("clap requires --pred"))?;
                let point = match_counts(&pred, &gt, mode)?.pr_point(None);
                println!(
                    "P={:.4} R={:.4} F={:.4}",
                    point.precision, point.recall, point.f_measure
                );
                pr_points_csv(&[point])
            };
            match out {
                Some(path) => write_bytes(&path, csv.as_bytes()),
                None => Ok(()),
            }
        }
        Command::Synth {
            seed,
            count,
            width,
            height,
            out,
        } => {
            let cfg = SynthConfig {
                seed,
                scene_count: count,
                dims: LatticeDims::new(width, height)?,
                ..SynthConfig::default()
            };
            let scenes = generate_scenes(&cfg)?;
            std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
            let digits = count.saturating_sub(1).to_string().len().max(4);
            for (i, scene) in scenes.iter().enumerate() {
                let path = out.join(format!("scene_{i:0digits$}.json"));
                write_bytes(&path, &write_annotation(scene))?;
            }
            println!("wrote {count} scenes to {}", out.display());
            Ok(())
        }
        Command::Stats { input, bins, out } => {
            let mut afms = Vec::new();
            for path in list_files(&input, &["afm", "json"])? {
                if path.extension().is_some_and(|x| x == "afm") {
                    afms.push(load_raw_afm(&path)?);
                } else {
                    afms.push(encode_afm(&load_annotation(&path)?)?);
                }
            }
            if afms.is_empty() {
                return Err(invalid(format!(
                    "no .afm or .json files in {}",
                    input.display()
                )));
            }
            let hist = magnitude_histogram(&afms, bins)?;
            write_bytes(&out, histogram_csv(&hist).as_bytes())?;
            println!(
                "{} maps, {} vectors, {:.4} in the first bin [0, {}]",
                afms.len(),
                hist.total(),
                hist.counts[0] as f64 / hist.total() as f64,
                hist.bin_edges[1]
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(if err.is_io() { 2 } else { 1 })
        }
    }
}
