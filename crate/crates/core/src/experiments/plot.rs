//! Standalone log-log scatter of a sweep as SVG.

use std::fmt::Write;

use super::{ScalingFit, SweepRow};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

/// Scatter of `(ε, ratio)` on log₂ axes with the fitted line, if any.
/// Rows without a ratio are skipped.
pub fn svg_loglog(rows: &[SweepRow], fit: Option<&ScalingFit>) -> String {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.ratio.map(|q| (r.epsilon.log2(), q.log2())))
        .collect();
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if pts.is_empty() {
        let _ = writeln!(
            svg,
            r#"<text x="{MARGIN}" y="{MARGIN}">no rows with antipodes</text>"#
        );
        svg.push_str("</svg>\n");
        return svg;
    }
    let (mut x0, mut x1, mut y0, mut y1) = pts.iter().fold(
        (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if let Some(f) = fit {
        for x in [x0, x1] {
            let y = f.intercept + f.slope * x;
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let _ = writeln!(
        svg,
        r#"<path d="M{a},{b} H{c} M{a},{b} V{d}" stroke="black" fill="none"/>"#,
        a = MARGIN,
        b = HEIGHT - MARGIN,
        c = WIDTH - MARGIN,
        d = MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">log2 epsilon</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{}" transform="rotate(-90 15 {})" text-anchor="middle">log2 neighbors/antipodes</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (v, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="{anchor}" font-size="11">{v:.2}</text>"#,
            sx(v),
            HEIGHT - MARGIN + 16.0
        );
    }
    for v in [y0, y1] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-size="11">{v:.2}</text>"#,
            MARGIN - 6.0,
            sy(v) + 4.0
        );
    }
    if let Some(f) = fit {
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="steelblue" stroke-width="1.5"/>"#,
            sx(x0),
            sy(f.intercept + f.slope * x0),
            sx(x1),
            sy(f.intercept + f.slope * x1)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="12">slope {:.4}, r² {:.4}</text>"#,
            MARGIN + 10.0,
            MARGIN - 10.0,
            f.slope,
            f.r_squared
        );
    }
    for (x, y) in &pts {
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="firebrick"/>"#,
            sx(*x),
            sy(*y)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
