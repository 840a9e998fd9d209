//! Minimal plot emission: line SVGs for sweep curves, band SVGs for Monte
//! Carlo statistics, and a tidy long-form CSV for external plotting.

use std::fmt::Write as _;

use crate::csvio::{fmt_f64, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotStyle {
    Svg,
    Tidy,
}

impl std::str::FromStr for PlotStyle {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "svg" => Ok(PlotStyle::Svg),
            "tidy" => Ok(PlotStyle::Tidy),
            other => Err(format!("unknown plot style {other:?} (svg|tidy)")),
        }
    }
}

/// Long-form `series,x,y` rows, one per (column, row) pair.
pub fn render_tidy(table: &Table) -> String {
    let mut out = String::from("series,x,y\n");
    for (ci, name) in table.header.iter().enumerate().skip(1) {
        for row in &table.rows {
            let _ = writeln!(out, "{},{},{}", name, fmt_f64(row[0]), fmt_f64(row[ci]));
        }
    }
    out
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 46.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// One polyline per value column against the first column; a Monte Carlo
/// table (recognized by its schema) additionally gets the band between
/// `mean - sigma_minus` and `mean + sigma_plus`.
pub fn render_svg(table: &Table) -> String {
    let xs: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();

    let is_mc = table.header.len() >= 4
        && table.header[1] == "mean_xi"
        && table.header[2] == "sigma_plus"
        && table.header[3] == "sigma_minus";

    // series drawn as lines; the band bounds join the y-range computation
    let mut lines: Vec<(String, Vec<f64>)> = Vec::new();
    let mut band: Option<(Vec<f64>, Vec<f64>)> = None;
    if is_mc {
        let mean: Vec<f64> = table.rows.iter().map(|r| r[1]).collect();
        let hi: Vec<f64> = table.rows.iter().map(|r| r[1] + r[2]).collect();
        let lo: Vec<f64> = table.rows.iter().map(|r| r[1] - r[3]).collect();
        lines.push(("mean_xi".into(), mean));
        band = Some((lo, hi));
    } else {
        for (ci, name) in table.header.iter().enumerate().skip(1) {
            lines.push((name.clone(), table.rows.iter().map(|r| r[ci]).collect()));
        }
    }

    let (x_lo, x_hi) = bounds(&xs);
    let mut ys_all: Vec<f64> = lines.iter().flat_map(|(_, ys)| ys.iter().copied()).collect();
    if let Some((lo, hi)) = &band {
        ys_all.extend(lo.iter().copied());
        ys_all.extend(hi.iter().copied());
    }
    let (y_lo, y_hi) = bounds(&ys_all);

    let sx = |x: f64| MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect x=\"{m}\" y=\"{m}\" width=\"{w}\" height=\"{h}\" fill=\"none\" stroke=\"#333\"/>",
        m = MARGIN,
        w = WIDTH - 2.0 * MARGIN,
        h = HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        svg,
        "  <text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>",
        MARGIN,
        HEIGHT - MARGIN / 3.0,
        xml_escape(&format!("x: {} in [{:.4}, {:.4}]", table.header[0], x_lo, x_hi))
    );
    let _ = writeln!(
        svg,
        "  <text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>",
        MARGIN,
        MARGIN / 2.0,
        xml_escape(&format!("y in [{:.4}, {:.4}]", y_lo, y_hi))
    );

    if let Some((lo, hi)) = &band {
        let mut points = String::new();
        for (x, y) in xs.iter().zip(hi) {
            let _ = write!(points, "{:.2},{:.2} ", sx(*x), sy(*y));
        }
        for (x, y) in xs.iter().zip(lo).rev() {
            let _ = write!(points, "{:.2},{:.2} ", sx(*x), sy(*y));
        }
        let _ = writeln!(
            svg,
            "  <polygon points=\"{}\" fill=\"#1f77b4\" opacity=\"0.25\" stroke=\"none\"><title>band</title></polygon>",
            points.trim_end()
        );
    }

    for (i, (name, ys)) in lines.iter().enumerate() {
        let mut points = String::new();
        for (x, y) in xs.iter().zip(ys) {
            let _ = write!(points, "{:.2},{:.2} ", sx(*x), sy(*y));
        }
        let _ = writeln!(
            svg,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"><title>{}</title></polyline>",
            points.trim_end(),
            COLORS[i % COLORS.len()],
            xml_escape(name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
