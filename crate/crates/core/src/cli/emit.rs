//! Report files: CSV, JSON, and log-log SVG decay plots.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oscillation::OscillationReport;
use crate::polyphase::{ErgodicAverageSeries, SpectralPeak};
use crate::probabilistic::{lsk_to_csv, LskRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::invalid(format!("format: unknown report format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Series(&'a ErgodicAverageSeries),
    Oscillation(&'a OscillationReport),
    Lsk(&'a [LskRecord]),
    Census(&'a BTreeMap<u64, u64>),
    Spectrum(&'a [SpectralPeak]),
    Margins(&'a [(f64, f64)]),
}

#[derive(Serialize)]
struct Margin {
    lambda: f64,
    margin: f64,
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

pub fn render(report: Report<'_>, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(render_csv(report)),
        Format::Json => Ok(render_json(report)),
        Format::Svg => render_svg(report),
    }
}

fn render_csv(report: Report<'_>) -> String {
    match report {
        Report::Series(s) => s.to_csv(),
        Report::Oscillation(r) => {
            let mut out = String::from("degree,n,sup,coeffs\n");
            for rec in &r.degrees {
                for cp in &rec.checkpoints {
                    let coeffs: Vec<String> = cp.coeffs.iter().map(|c| format!("{c:?}")).collect();
                    let _ = writeln!(out, "{},{},{:?},{}", rec.degree, cp.n, cp.sup, coeffs.join(";"));
                }
            }
            out
        }
        Report::Lsk(records) => lsk_to_csv(records),
        Report::Census(c) => crate::padic::census_to_csv(c),
        Report::Spectrum(peaks) => {
            let mut out = String::from("frequency,modulus\n");
            for p in peaks {
                let _ = writeln!(out, "{:?},{:?}", p.frequency, p.modulus);
            }
            out
        }
        Report::Margins(m) => {
            let mut out = String::from("lambda,margin\n");
            for (l, v) in m {
                let _ = writeln!(out, "{l:?},{v:?}");
            }
            out
        }
    }
}

fn render_json(report: Report<'_>) -> String {
    match report {
        Report::Series(s) => json(s),
        Report::Oscillation(r) => json(r),
        Report::Lsk(records) => json(records),
        Report::Census(c) => json(c),
        Report::Spectrum(peaks) => json(peaks),
        Report::Margins(m) => {
            let rows: Vec<Margin> = m.iter().map(|&(lambda, margin)| Margin { lambda, margin }).collect();
            json(&rows)
        }
    }
}

fn render_svg(report: Report<'_>) -> Result<String> {
    let curves: Vec<(String, Vec<(f64, f64)>)> = match report {
        Report::Series(s) => vec![(
            "modulus".into(),
            s.checkpoints.iter().map(|&n| n as f64).zip(s.moduli()).collect(),
        )],
        Report::Oscillation(r) => r
            .degrees
            .iter()
            .map(|rec| {
                (
                    format!("d = {}", rec.degree),
                    rec.checkpoints.iter().map(|c| (c.n as f64, c.sup)).collect(),
                )
            })
            .collect(),
        Report::Lsk(records) => {
            // mean sup over seeds, per degree
            let mut by_degree: BTreeMap<usize, BTreeMap<usize, (f64, usize)>> = BTreeMap::new();
            for r in records {
                let slot = by_degree.entry(r.d).or_default().entry(r.n).or_insert((0.0, 0));
                slot.0 += r.sup;
                slot.1 += 1;
            }
            by_degree
                .into_iter()
                .map(|(d, pts)| {
                    (
                        format!("d = {d}"),
                        pts.into_iter().map(|(n, (s, k))| (n as f64, s / k as f64)).collect(),
                    )
                })
                .collect()
        }
        _ => {
            return Err(Error::invalid(
                "format: svg is only available for checkpointed series and reports",
            ))
        }
    };
    let y_label = match report {
        Report::Series(_) => "modulus",
        _ => "sup",
    };
    Ok(loglog_svg(y_label, &curves))
}

const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// Log-log plot, one `<polyline>` per curve. Nonpositive values are skipped.
pub fn loglog_svg(y_label: &str, curves: &[(String, Vec<(f64, f64)>)]) -> String {
    let (w, h, left, right, top, bottom) = (640.0, 440.0, 70.0, 20.0, 20.0, 50.0);
    let logs: Vec<Vec<(f64, f64)>> = curves
        .iter()
        .map(|(_, pts)| {
            pts.iter()
                .filter(|(x, y)| *x > 0.0 && *y > 0.0)
                .map(|(x, y)| (x.log10(), y.log10()))
                .collect()
        })
        .collect();
    let all = logs.iter().flatten();
    let bounds = |f: fn(&(f64, f64)) -> f64| {
        let (lo, hi) = all.clone().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi - lo < 1e-9 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    };
    let (x0, x1) = bounds(|p| p.0);
    let (y0, y1) = bounds(|p| p.1);
    let px = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
    let py = |y: f64| h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{left}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        h - bottom,
        w - right,
        h - bottom
    );
    let _ = writeln!(s, r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{}" stroke="black"/>"#, h - bottom);
    for (v, x) in [(x0, px(x0)), (x1, px(x1))] {
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{}" font-size="11" text-anchor="middle">1e{v:.2}</text>"#,
            h - bottom + 15.0
        );
    }
    for (v, y) in [(y0, py(y0)), (y1, py(y1))] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y:.1}" font-size="11" text-anchor="end">1e{v:.2}</text>"#,
            left - 5.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">N</text>"#,
        (left + w - right) / 2.0,
        h - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 15 {})">{y_label}</text>"#,
        (top + h - bottom) / 2.0,
        (top + h - bottom) / 2.0
    );
    for (i, ((label, _), pts)) in curves.iter().zip(&logs).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" fill="{color}">{label}</text>"#,
            w - right - 60.0,
            top + 15.0 * (i + 1) as f64
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_report(report: Report<'_>, format: Format, path: &Path) -> Result<()> {
    let body = render(report, format)?;
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillation::{CheckpointSup, DegreeRecord, Verdict};

    fn series() -> ErgodicAverageSeries {
        ErgodicAverageSeries {
            checkpoints: vec![10, 100],
            averages: vec![num_complex::Complex64::new(0.5, 0.0), num_complex::Complex64::new(0.0, 0.1)],
            weight_provenance: "test".into(),
        }
    }

    fn report() -> OscillationReport {
        let rec = |d| DegreeRecord {
            degree: d,
            checkpoints: vec![
                CheckpointSup { n: 10, sup: 0.5, coeffs: vec![0.0, 0.25] },
                CheckpointSup { n: 100, sup: 0.1, coeffs: vec![0.0, 0.5] },
            ],
            slope: Some(-0.7),
            verdict: Verdict::Inconclusive,
        };
        OscillationReport { degrees: vec![rec(1), rec(2), rec(3)] }
    }

    #[test]
    fn series_csv_header() {
        let csv = render(Report::Series(&series()), Format::Csv).unwrap();
        assert!(csv.starts_with("n,re,im,modulus\n10,0.5,0.0,0.5\n"), "{csv}");
    }

    #[test]
    fn oscillation_json_schema() {
        let text = render(Report::Oscillation(&report()), Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let first = &v.as_array().unwrap()[0];
        for key in ["degree", "checkpoints", "slope", "verdict"] {
            assert!(first.get(key).is_some(), "{key}");
        }
        let cp = &first["checkpoints"][0];
        for key in ["n", "sup", "coeffs"] {
            assert!(cp.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn svg_has_one_polyline_per_degree() {
        let svg = render(Report::Oscillation(&report()), Format::Svg).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
        let one = render(Report::Series(&series()), Format::Svg).unwrap();
        assert_eq!(one.matches("<polyline").count(), 1);
        let census = BTreeMap::from([(0u64, 1u64)]);
        assert!(render(Report::Census(&census), Format::Svg).is_err());
        assert!("png".parse::<Format>().is_err());
    }
}
