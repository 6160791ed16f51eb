//! Minimal static SVG line and bar charts.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        W / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, x_label: &str, y_label: &str, y: (f64, f64)) {
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, H - BOTTOM, TOP);
    let _ = writeln!(
        out,
        r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" stroke="black" fill="none"/>"#
    );
    for i in 0..=4 {
        let frac = i as f64 / 4.0;
        let py = y0 - frac * (y0 - y1);
        let v = y.0 + frac * (y.1 - y.0);
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/><text x="{}" y="{}" text-anchor="end">{}</text>"##,
            x0 - 4.0,
            x0 - 6.0,
            py + 4.0,
            tick(v)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        H - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}")
    }
}

pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let xs = range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let ys = range(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let px = |x: f64| LEFT + (x - xs.0) / (xs.1 - xs.0) * (W - RIGHT - LEFT);
    let py = |y: f64| H - BOTTOM - (y - ys.0) / (ys.1 - ys.0) * (H - BOTTOM - TOP);

    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, x_label, y_label, ys);
    let xticks: std::collections::BTreeSet<u64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0.to_bits()))
        .collect();
    for bits in xticks {
        let x = f64::from_bits(bits);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            px(x),
            H - BOTTOM + 16.0,
            x
        );
    }
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .enumerate()
            .map(|(j, &(x, y))| format!("{}{:.2} {:.2}", if j == 0 { "M" } else { "L" }, px(x), py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<path d="{}" stroke="{color}" stroke-width="2" fill="none"/>"#,
            path.join(" ")
        );
        for &(x, y) in &s.points {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                px(x),
                py(y)
            );
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = W - RIGHT + 12.0;
        let _ = writeln!(
            out,
            r#"<rect x="{lx}" y="{}" width="12" height="3" fill="{color}"/><text x="{}" y="{}">{}</text>"#,
            ly - 4.0,
            lx + 18.0,
            ly,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn bar_chart(title: &str, y_label: &str, bars: &[(String, f64)]) -> String {
    let ys = range(bars.iter().map(|b| b.1).chain([0.0]));
    let plot_w = W - RIGHT - LEFT;
    let py = |y: f64| H - BOTTOM - (y - ys.0) / (ys.1 - ys.0) * (H - BOTTOM - TOP);

    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, "", y_label, ys);
    let slot = plot_w / bars.len().max(1) as f64;
    for (i, (label, v)) in bars.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let x = LEFT + slot * i as f64 + slot * 0.15;
        let (top, bottom) = (py(v.max(0.0)), py(v.min(0.0)));
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="{color}"><title>{}: {v}</title></rect>"#,
            slot * 0.7,
            bottom - top,
            escape(label)
        );
        let ly = TOP + 10.0 + 16.0 * i as f64;
        let lx = W - RIGHT + 12.0;
        if ly < H - 10.0 {
            let _ = writeln!(
                out,
                r#"<rect x="{lx}" y="{}" width="10" height="10" fill="{color}"/><text x="{}" y="{ly}" font-size="10">{}</text>"#,
                ly - 9.0,
                lx + 14.0,
                escape(label)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_has_one_path_per_series() {
        let series = vec![
            Series {
                label: "a".into(),
                points: vec![(1.0, 2.0), (2.0, 3.0)],
            },
            Series {
                label: "b<c".into(),
                points: vec![(1.0, 1.0)],
            },
        ];
        let svg = line_chart("t", "x", "y", &series);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("stroke-width=\"2\"").count(), 2);
        assert!(svg.contains("b&lt;c"));
    }

    #[test]
    fn bar_chart_handles_flat_and_empty_data() {
        let svg = bar_chart("t", "y", &[("a".into(), 0.0), ("b".into(), 0.0)]);
        assert_eq!(svg.matches("<title>").count(), 2);
        assert!(!svg.contains("NaN"));
        assert!(bar_chart("t", "y", &[]).ends_with("</svg>\n"));
    }
}
