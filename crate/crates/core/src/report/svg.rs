use std::fmt::Write;

use crate::impact::INDICATORS;
use crate::Scalar;

use super::{sig3, NormalizedMatrix};

const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// One bar per category for a mode.
#[derive(Debug, Clone, PartialEq)]
pub struct BarSeries<T> {
    pub name: String,
    pub values: Vec<(String, T)>,
}

/// Grouped bar chart: categories (scenario levels) on the x axis, one bar
/// per series inside each group.
pub fn sweep_svg<T: Scalar>(title: &str, unit: &str, series: &[BarSeries<T>]) -> String {
    let mut categories: Vec<&str> = Vec::new();
    for s in series {
        for (c, _) in &s.values {
            if !categories.contains(&c.as_str()) {
                categories.push(c);
            }
        }
    }
    let max = series
        .iter()
        .flat_map(|s| s.values.iter().map(|(_, v)| v.to_f64_lossy()))
        .fold(0.0f64, f64::max);
    let max = if max > 0.0 { max } else { 1.0 };
    let (left, top, plot_h) = (70.0, 50.0, 300.0);
    let bar_w = 22.0;
    let group_w = bar_w * series.len().max(1) as f64 + 30.0;
    let width = left + group_w * categories.len().max(1) as f64 + 160.0;
    let height = top + plot_h + 70.0;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{left}" y="24" font-size="14">{}</text>"#,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{:.1}" stroke="black"/>"#,
        top + plot_h
    );
    let _ = writeln!(
        out,
        r#"<line x1="{left}" y1="{y:.1}" x2="{x2:.1}" y2="{y:.1}" stroke="black"/>"#,
        y = top + plot_h,
        x2 = left + group_w * categories.len() as f64
    );
    for i in 0..=4 {
        let v = max * i as f64 / 4.0;
        let y = top + plot_h - plot_h * i as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{y:.1}" text-anchor="end">{}</text>"#,
            left - 6.0,
            sig3(v)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.1}" transform="rotate(-90 14 {:.1})" text-anchor="middle">{}</text>"#,
        top + plot_h / 2.0,
        top + plot_h / 2.0,
        escape(unit)
    );
    for (ci, c) in categories.iter().enumerate() {
        let gx = left + 15.0 + group_w * ci as f64;
        for (si, s) in series.iter().enumerate() {
            let Some((_, v)) = s.values.iter().find(|(name, _)| name == c) else {
                continue;
            };
            let v = v.to_f64_lossy();
            let h = (v.max(0.0) / max) * plot_h;
            let x = gx + bar_w * si as f64;
            let y = top + plot_h - h;
            let _ = writeln!(
                out,
                r#"<rect x="{x:.1}" y="{y:.1}" width="{:.1}" height="{h:.1}" fill="{}"/>"#,
                bar_w - 2.0,
                PALETTE[si % PALETTE.len()]
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="9">{}</text>"#,
                x + bar_w / 2.0 - 1.0,
                y - 3.0,
                sig3(v)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            gx + bar_w * series.len() as f64 / 2.0,
            top + plot_h + 18.0,
            escape(c)
        );
    }
    let lx = left + group_w * categories.len() as f64 + 20.0;
    for (si, s) in series.iter().enumerate() {
        let y = top + 16.0 * si as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{lx:.1}" y="{y:.1}" width="10" height="10" fill="{}"/>"#,
            PALETTE[si % PALETTE.len()]
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 14.0,
            y + 9.0,
            escape(&s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Radar chart of a normalized matrix, one polygon per mode.
pub fn radar_svg<T: Scalar>(title: &str, m: &NormalizedMatrix<T>) -> String {
    let (cx, cy, r) = (260.0, 250.0, 170.0);
    let n = INDICATORS.len();
    let angle = |i: usize| -std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * i as f64 / n as f64;
    let point = |i: usize, v: f64| {
        let v = v.clamp(0.0, 1.0);
        (cx + r * v * angle(i).cos(), cy + r * v * angle(i).sin())
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="720" height="500" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<text x="20" y="24" font-size="14">{}</text>"#, escape(title));
    for ring in 1..=4 {
        let v = ring as f64 / 4.0;
        let pts: Vec<String> = (0..n)
            .map(|i| {
                let (x, y) = point(i, v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="none" stroke="#cccccc"/>"##,
            pts.join(" ")
        );
    }
    for (i, k) in INDICATORS.iter().enumerate() {
        let (x, y) = point(i, 1.0);
        let _ = writeln!(
            out,
            r##"<line x1="{cx}" y1="{cy}" x2="{x:.2}" y2="{y:.2}" stroke="#999999"/>"##
        );
        let (lx, ly) = (cx + (r + 24.0) * angle(i).cos(), cy + (r + 24.0) * angle(i).sin());
        let _ = writeln!(
            out,
            r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="middle">{}</text>"#,
            k.id()
        );
    }
    for (mi, (mode, row)) in m.modes.iter().zip(&m.rows).enumerate() {
        let colour = PALETTE[mi % PALETTE.len()];
        let pts: Vec<String> = INDICATORS
            .iter()
            .enumerate()
            .map(|(i, k)| {
                let (x, y) = point(i, row[*k].to_f64_lossy());
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            pts.join(" ")
        );
        let ly = 60.0 + 16.0 * mi as f64;
        let _ = writeln!(
            out,
            r#"<rect x="520" y="{ly:.1}" width="10" height="10" fill="{colour}"/>"#
        );
        let values: Vec<String> = INDICATORS.iter().map(|k| sig3(row[*k])).collect();
        let _ = writeln!(
            out,
            r#"<text x="534" y="{:.1}">{}<title>{}</title></text>"#,
            ly + 9.0,
            escape(mode),
            values.join(" / ")
        );
    }
    out.push_str("</svg>\n");
    out
}
