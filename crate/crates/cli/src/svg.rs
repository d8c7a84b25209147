//! Minimal SVG plot of spectrum contours.

use std::fmt::Write;

use num_complex::Complex64;
use sgfloquet::stability::Grid;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 720.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 48.0;
const BOTTOM: f64 = 64.0;

struct Frame {
    grid: Grid,
}

impl Frame {
    fn x(&self, re: f64) -> f64 {
        LEFT + (re - self.grid.re_min) / (self.grid.re_max - self.grid.re_min)
            * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, im: f64) -> f64 {
        HEIGHT
            - BOTTOM
            - (im - self.grid.im_min) / (self.grid.im_max - self.grid.im_min)
                * (HEIGHT - TOP - BOTTOM)
    }
}

/// Tick positions at a 1-2-5 step giving roughly six intervals.
fn ticks(lo: f64, hi: f64) -> (Vec<f64>, usize) {
    let raw = (hi - lo) / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    let values = (first..=last).map(|i| i as f64 * step).collect();
    (values, decimals)
}

fn label(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    // Avoid "-0.0" labels.
    if s.trim_start_matches('-')
        .chars()
        .all(|ch| ch == '0' || ch == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Renders contour polylines and imaginary-axis spectrum intervals
/// (`beta` ranges, drawn at both signs) over the grid box.
pub fn render(
    title: &str,
    grid: Grid,
    polylines: &[Vec<Complex64>],
    beta_intervals: &[(f64, f64)],
) -> String {
    let f = Frame { grid };
    let mut s = String::new();
    let (px0, px1) = (LEFT, WIDTH - RIGHT);
    let (py0, py1) = (TOP, HEIGHT - BOTTOM);
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<clipPath id="plot"><rect x="{px0}" y="{py0}" width="{}" height="{}"/></clipPath>"#,
        px1 - px0,
        py1 - py0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();

    let (xt, xd) = ticks(grid.re_min, grid.re_max);
    for v in xt {
        let x = f.x(v);
        writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{py0}" x2="{x:.2}" y2="{py1}" stroke="#e4e4e4"/>"##
        )
        .unwrap();
        writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{py1}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"##,
            py1 + 6.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            py1 + 22.0,
            label(v, xd)
        )
        .unwrap();
    }
    let (yt, yd) = ticks(grid.im_min, grid.im_max);
    for v in yt {
        let y = f.y(v);
        writeln!(
            s,
            r##"<line x1="{px0}" y1="{y:.2}" x2="{px1}" y2="{y:.2}" stroke="#e4e4e4"/>"##
        )
        .unwrap();
        writeln!(
            s,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{px0}" y2="{y:.2}" stroke="black"/>"##,
            px0 - 6.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            px0 - 10.0,
            y + 4.0,
            label(v, yd)
        )
        .unwrap();
    }
    if grid.re_min < 0.0 && grid.re_max > 0.0 {
        let x = f.x(0.0);
        writeln!(s, r##"<line x1="{x:.2}" y1="{py0}" x2="{x:.2}" y2="{py1}" stroke="#888" stroke-dasharray="4 3"/>"##).unwrap();
    }
    if grid.im_min < 0.0 && grid.im_max > 0.0 {
        let y = f.y(0.0);
        writeln!(s, r##"<line x1="{px0}" y1="{y:.2}" x2="{px1}" y2="{y:.2}" stroke="#888" stroke-dasharray="4 3"/>"##).unwrap();
    }

    writeln!(s, r#"<g clip-path="url(#plot)">"#).unwrap();
    if grid.re_min <= 0.0 && grid.re_max >= 0.0 {
        let x = f.x(0.0);
        for &(lo, hi) in beta_intervals {
            for (a, b) in [(lo, hi), (-hi, -lo)] {
                writeln!(
                    s,
                    r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#c0392b" stroke-width="3"/>"##,
                    f.y(a),
                    f.y(b)
                )
                .unwrap();
            }
        }
    }
    for line in polylines {
        let points: Vec<String> = line
            .iter()
            .map(|p| format!("{:.2},{:.2}", f.x(p.re), f.y(p.im)))
            .collect();
        writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#1f4e9e" stroke-width="1.4"/>"##,
            points.join(" ")
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();

    writeln!(
        s,
        r#"<rect x="{px0}" y="{py0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        px1 - px0,
        py1 - py0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Re λ</text>"#,
        (px0 + px1) / 2.0,
        HEIGHT - 18.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="22" y="{:.2}" text-anchor="middle" transform="rotate(-90 22 {:.2})">Im λ</text>"#,
        (py0 + py1) / 2.0,
        (py0 + py1) / 2.0
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_cover_the_range() {
        let (t, d) = ticks(-1.5, 1.5);
        assert_eq!(t, vec![-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5]);
        assert_eq!(d, 1);
        assert_eq!(label(-0.0, 1), "0.0");
    }
}
