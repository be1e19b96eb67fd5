//! Stereographic drawings of circle configurations.

use std::fmt::Write;

use hyperideal_core::circles::{sphere_grid, CircleConfig, Color, SphericalCircle};
use hyperideal_core::nalgebra::{Rotation3, Vector2, Vector3};

#[derive(Debug, Clone, Copy)]
pub struct SvgOptions {
    /// Side of the square canvas in pixels.
    pub size: f64,
    /// Draw the incidence graph between circle centres.
    pub incidence: bool,
    /// Projection pole; chosen away from all circles when `None`.
    pub pole: Option<Vector3<f64>>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { size: 800.0, incidence: false, pole: None }
    }
}

/// Angular distance from `p` to the nearest circle.
fn clearance(c: &CircleConfig, p: &Vector3<f64>) -> f64 {
    c.circles
        .iter()
        .map(|k| (k.axis.dot(p).clamp(-1.0, 1.0).acos() - k.radius).abs())
        .fold(f64::INFINITY, f64::min)
}

/// A pole far from every circle, preferring points outside all caps.
pub fn choose_pole(c: &CircleConfig) -> Vector3<f64> {
    let north = Vector3::z();
    if c.circles.is_empty() {
        return north;
    }
    let score = |p: &Vector3<f64>| {
        let inside = c.circles.iter().any(|k| k.contains(p, 0.0));
        (if inside { 0.0 } else { 10.0 }) + clearance(c, p)
    };
    let mut best = north;
    let mut best_score = score(&north);
    for p in sphere_grid(2000) {
        let s = score(&p);
        if s > best_score + 1e-12 {
            best = p;
            best_score = s;
        }
    }
    best
}

fn project(p: &Vector3<f64>) -> Vector2<f64> {
    let d = (1.0 - p.z).max(1e-12);
    Vector2::new(p.x / d, p.y / d)
}

/// Planar image of a circle that misses the pole `+z`.
fn image(k: &SphericalCircle) -> (Vector2<f64>, f64) {
    let a = k.axis;
    // great circle through the axis and the pole; its two crossings with
    // the circle project to a diameter of the image
    let mut t = Vector3::z() - a * a.z;
    if t.norm() < 1e-12 {
        t = Vector3::x();
    }
    let t = t.normalize();
    let (s, c) = k.radius.sin_cos();
    let p = project(&(a * c + t * s));
    let q = project(&(a * c - t * s));
    ((p + q) * 0.5, (p - q).norm() * 0.5)
}

/// SVG 1.1 document of the stereographic projection of `c`.
pub fn emit_svg(c: &CircleConfig, opts: &SvgOptions) -> String {
    let pole = opts.pole.unwrap_or_else(|| choose_pole(c));
    let rot = Rotation3::rotation_between(&pole, &Vector3::z())
        .unwrap_or_else(|| Rotation3::from_axis_angle(&Vector3::x_axis(), std::f64::consts::PI));
    let images: Vec<(Vector2<f64>, f64)> = c
        .circles
        .iter()
        .map(|k| {
            let mut k = *k;
            k.axis = rot * k.axis;
            image(&k)
        })
        .collect();
    let (mut lo, mut hi) = (Vector2::new(-1.0, -1.0), Vector2::new(1.0, 1.0));
    for (m, r) in &images {
        let r = r.min(50.0);
        lo = lo.inf(&(m - Vector2::new(r, r)));
        hi = hi.sup(&(m + Vector2::new(r, r)));
    }
    let lo = lo.sup(&Vector2::new(-50.0, -50.0));
    let hi = hi.inf(&Vector2::new(50.0, 50.0));
    let span = (hi - lo).max() * 1.05;
    let scale = opts.size / span;
    let mid = (lo + hi) * 0.5;
    let to_px = |q: &Vector2<f64>| {
        let d = (q - mid) * scale;
        (opts.size * 0.5 + d.x, opts.size * 0.5 - d.y)
    };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{s:.0}" height="{s:.0}" viewBox="0 0 {s:.0} {s:.0}">"#,
        s = opts.size
    );
    let _ = writeln!(out, r#"  <rect x="0" y="0" width="{s:.0}" height="{s:.0}" fill="white"/>"#, s = opts.size);
    if opts.incidence {
        for arc in &c.arcs {
            let (x1, y1) = to_px(&images[arc.a].0);
            let (x2, y2) = to_px(&images[arc.b].0);
            let _ = writeln!(
                out,
                r##"  <line x1="{x1:.4}" y1="{y1:.4}" x2="{x2:.4}" y2="{y2:.4}" stroke="#888888" stroke-width="0.5"/>"##
            );
        }
    }
    for (k, (m, r)) in c.circles.iter().zip(&images) {
        let (cx, cy) = to_px(m);
        let style = match k.color {
            Color::Black => r##"stroke="#000000" stroke-width="1.5""##,
            Color::Red => r##"stroke="#cc0000" stroke-width="1" stroke-dasharray="4 2""##,
        };
        let _ = writeln!(out, r#"  <circle cx="{cx:.4}" cy="{cy:.4}" r="{:.4}" fill="none" {style}/>"#, r * scale);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperideal_core::circles::Provenance;

    #[test]
    fn empty_config() {
        let c = CircleConfig { circles: vec![], arcs: vec![], tangent: vec![] };
        let s = emit_svg(&c, &SvgOptions::default());
        assert!(s.contains("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(!s.contains("<circle"));
    }

    #[test]
    fn image_of_circle_around_south_pole() {
        // the cap of radius r around -z projects to the disk of radius tan(r/2)
        let k = SphericalCircle { axis: -Vector3::z(), radius: 0.7, color: Color::Black, provenance: Provenance::Face(0) };
        let (m, r) = image(&k);
        assert!(m.norm() < 1e-12);
        assert!((r - (0.35f64).tan()).abs() < 1e-12);
    }
}
