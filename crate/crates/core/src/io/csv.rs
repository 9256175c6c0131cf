//! CSV tables: header line first, `.` decimal separator, `\n` after every row.

use std::fmt::Write;

use crate::eval::{DualityReport, MagnitudeHistogram, PRCurve, PRPoint};

fn pr_row(out: &mut String, p: &PRPoint) {
    match p.threshold {
        Some(t) => write!(out, "{t}"),
        None => Ok(()),
    }
    .unwrap();
    writeln!(out, ",{},{},{}", p.precision, p.recall, p.f_measure).unwrap();
}

pub fn pr_points_csv(points: &[PRPoint]) -> String {
    let mut out = String::from("threshold,precision,recall,f\n");
    for p in points {
        pr_row(&mut out, p);
    }
    out
}

pub fn pr_curve_csv(curve: &PRCurve) -> String {
    pr_points_csv(&curve.points)
}

pub fn duality_csv(report: &DualityReport) -> String {
    let mut out = String::from("scale,precision,recall\n");
    for s in &report.scales {
        writeln!(out, "{},{},{}", s.scale, s.precision, s.recall).unwrap();
    }
    out
}

pub fn histogram_csv(hist: &MagnitudeHistogram) -> String {
    let mut out = String::from("bin_lo,bin_hi,count\n");
    for (edges, count) in hist.bin_edges.windows(2).zip(&hist.counts) {
        writeln!(out, "{},{},{}", edges[0], edges[1], count).unwrap();
    }
    out
}
