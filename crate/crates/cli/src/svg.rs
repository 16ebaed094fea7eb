//! Static SVG line plot of the four overlap traces with event markers.

use std::fmt::Write as _;
use std::path::Path;

use orthospeed_core::{OrthogonalityEvent, OverlapSample};

use crate::error::{CliError, CliResult};
use crate::output::write_file;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 40.0;
const COLORS: [&str; 4] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"];
const LABELS: [&str; 4] = ["|Sp11|", "|Sp12|", "|Sp21|", "|Sp22|"];

struct Frame {
    t0: f64,
    t1: f64,
}

impl Frame {
    fn x(&self, t: f64) -> f64 {
        LEFT + (t - self.t0) / (self.t1 - self.t0) * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - v.clamp(0.0, 1.0) * (HEIGHT - TOP - BOTTOM)
    }
}

/// Collapses each pixel column to its first, lowest, highest and last points
/// so that minima survive while the file stays small.
fn decimate(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < points.len() {
        let col = points[i].0.round();
        let mut j = i;
        while j < points.len() && points[j].0.round() == col {
            j += 1;
        }
        let bucket = &points[i..j];
        let lo = bucket.iter().enumerate().max_by(|a, b| a.1 .1.total_cmp(&b.1 .1)).unwrap().0;
        let hi = bucket.iter().enumerate().min_by(|a, b| a.1 .1.total_cmp(&b.1 .1)).unwrap().0;
        let mut picks = vec![0, lo, hi, bucket.len() - 1];
        picks.sort_unstable();
        picks.dedup();
        out.extend(picks.into_iter().map(|k| bucket[k]));
        i = j;
    }
    out
}

pub fn render_svg(trace: &[OverlapSample], events: &[OrthogonalityEvent]) -> CliResult<String> {
    let (first, last) = match (trace.first(), trace.last()) {
        (Some(a), Some(b)) if b.t > a.t => (a.t, b.t),
        (Some(_), Some(_)) => return Err(CliError::Validation("plot needs a trace spanning a positive time".into())),
        _ => return Err(CliError::Validation("cannot plot an empty trace".into())),
    };
    let frame = Frame { t0: first, t1: last };
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();

    let (x0, x1) = (frame.x(first), frame.x(last));
    let (y0, y1) = (frame.y(0.0), frame.y(1.0));
    writeln!(s, r#"<g stroke="black" fill="none"><rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}"/></g>"#, x1 - x0, y0 - y1).unwrap();
    for k in 0..=4 {
        let v = k as f64 / 4.0;
        let y = frame.y(v);
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#, x0 - 6.0, y + 4.0).unwrap();
        let t = first + (last - first) * v;
        let x = frame.x(t);
        writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{t:.4}</text>"#, y0 + 16.0).unwrap();
    }
    writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">t</text>"#, 0.5 * (x0 + x1), HEIGHT - 6.0).unwrap();

    for (k, (color, label)) in COLORS.iter().zip(LABELS).enumerate() {
        let (i, j) = (k / 2, k % 2);
        let points: Vec<(f64, f64)> = trace.iter().map(|p| (frame.x(p.t), frame.y(p.sp[i][j]))).collect();
        s.push_str(&format!(r#"<polyline fill="none" stroke="{color}" stroke-width="1" points=""#));
        for (n, (x, y)) in decimate(&points).into_iter().enumerate() {
            if n > 0 {
                s.push(' ');
            }
            write!(s, "{x:.2},{y:.2}").unwrap();
        }
        s.push_str("\"/>\n");
        let ly = TOP + 20.0 + 18.0 * k as f64;
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{label}</text>"#,
            x1 + 12.0,
            x1 + 32.0,
            x1 + 38.0,
            ly + 4.0
        )
        .unwrap();
    }

    s.push_str("<g fill=\"black\">\n");
    for e in events {
        let color = COLORS[2 * (e.pair.0 - 1) + (e.pair.1 - 1)];
        writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" stroke="{color}"/>"#,
            frame.x(e.t_event),
            frame.y(e.residual)
        )
        .unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

pub fn emit_svg(trace: &[OverlapSample], events: &[OrthogonalityEvent], path: &Path) -> CliResult<()> {
    let svg = render_svg(trace, events)?;
    write_file(path, &svg)
}
