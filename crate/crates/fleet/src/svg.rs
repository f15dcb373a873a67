//! SVG rendering of planned paths.
//!
//! One user unit is one metre and the y axis is flipped so north is up.
//! Each path is a single `<path>` element made of exact `L` and `A`
//! commands, followed by discs of radius `δ/2` at a few common instants.

use std::f64::consts::PI;
use std::fmt::Write;

use dubins_fleet_core::dubins::PrimitiveKind;
use dubins_fleet_core::{Complex, FleetPath};

const PALETTE: [&str; 10] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

/// Instants (as fractions of the shortest duration) where discs are drawn.
pub const DISC_INSTANTS: usize = 8;

fn xy(c: Complex) -> (f64, f64) {
    (c.re, -c.im)
}

/// SVG path data for one path: `M`, then `L` per line and `A` per arc
/// piece (arcs are split so no piece exceeds a half turn).
pub fn path_data(path: &FleetPath) -> String {
    let (x0, y0) = xy(path.start.position());
    let mut d = format!("M {x0:.9} {y0:.9}");
    for p in &path.primitives {
        if p.duration <= 0.0 {
            continue;
        }
        match p.kind {
            PrimitiveKind::Line { .. } => {
                let (x, y) = xy(p.position(p.duration));
                let _ = write!(d, " L {x:.9} {y:.9}");
            }
            PrimitiveKind::Arc { radius, angular_rate, .. } => {
                let sweep = angular_rate.abs() * p.duration;
                let pieces = (sweep / (PI * 0.999)).ceil().max(1.0) as usize;
                // a left turn is counter-clockwise in the plane, clockwise on screen
                let flag = if angular_rate > 0.0 { 1 } else { 0 };
                for k in 1..=pieces {
                    let (x, y) = xy(p.position(p.duration * k as f64 / pieces as f64));
                    let _ = write!(d, " A {radius:.9} {radius:.9} 0 0 {flag} {x:.9} {y:.9}");
                }
            }
        }
    }
    d
}

/// Complete SVG document for a set of paths (air frame).
pub fn render(paths: &[FleetPath], separation: f64) -> String {
    let mut lo = Complex::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Complex::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in paths {
        for q in p.sample_positions(256) {
            lo = Complex::new(lo.re.min(q.re), lo.im.min(q.im));
            hi = Complex::new(hi.re.max(q.re), hi.im.max(q.im));
        }
    }
    if paths.is_empty() {
        lo = Complex::ZERO;
        hi = Complex::ZERO;
    }
    let margin = separation + 20.0;
    let (x, y) = (lo.re - margin, -hi.im - margin);
    let (w, h) = (hi.re - lo.re + 2.0 * margin, hi.im - lo.im + 2.0 * margin);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x:.3} {y:.3} {w:.3} {h:.3}" width="{:.0}" height="{:.0}">"#,
        w.min(4000.0),
        h * w.min(4000.0) / w
    );
    let _ = writeln!(s, r#"<rect x="{x:.3}" y="{y:.3}" width="{w:.3}" height="{h:.3}" fill="white"/>"#);
    let horizon = paths.iter().map(FleetPath::duration).fold(f64::INFINITY, f64::min);
    for (k, p) in paths.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<path id="aircraft-{k}" d="{}" fill="none" stroke="{color}" stroke-width="3"/>"#,
            path_data(p)
        );
        if horizon.is_finite() {
            for i in 0..=DISC_INSTANTS {
                let (cx, cy) = xy(p.position_at(horizon * i as f64 / DISC_INSTANTS as f64));
                let _ = writeln!(
                    s,
                    r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="{color}" fill-opacity="0.12" stroke="{color}" stroke-width="0.5"/>"#,
                    0.5 * separation
                );
            }
        }
        let (ex, ey) = xy(p.end.position());
        let _ = writeln!(s, r#"<text x="{ex:.3}" y="{ey:.3}" font-size="24" fill="{color}">{k}</text>"#);
    }
    s.push_str("</svg>\n");
    s
}

/// Start and end points of every `d` attribute in an SVG document, in
/// document order. Understands the `M`, `L` and `A` commands written by
/// [`path_data`]; the y axis is flipped back.
pub fn parse_endpoints(svg: &str) -> Vec<(Complex, Complex)> {
    let mut out = Vec::new();
    for chunk in svg.split(" d=\"").skip(1) {
        let data = chunk.split('"').next().unwrap_or("");
        let tokens: Vec<&str> = data.split_whitespace().collect();
        let mut first = None;
        let mut last = None;
        let mut i = 0;
        while i < tokens.len() {
            let skip = match tokens[i] {
                "M" | "L" => 0,
                "A" => 5,
                _ => {
                    i += 1;
                    continue;
                }
            };
            let x: f64 = tokens[i + 1 + skip].parse().unwrap_or(f64::NAN);
            let y: f64 = tokens[i + 2 + skip].parse().unwrap_or(f64::NAN);
            let p = Complex::new(x, -y);
            first.get_or_insert(p);
            last = Some(p);
            i += 3 + skip;
        }
        if let (Some(a), Some(b)) = (first, last) {
            out.push((a, b));
        }
    }
    out
}
