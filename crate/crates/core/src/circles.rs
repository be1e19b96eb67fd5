//! Red and black circle configurations on the sphere at infinity.
//!
//! A space-like unit vector `n` of Minkowski space cuts the sphere along the
//! circle `{p : <n, (1, p)> = 0}` and bounds the cap `<n, (1, p)> > 0`. Black
//! circles come from the outward face planes of a realization, red ones from
//! the polar planes of its strictly hyperideal vertices; the angle between
//! two caps is `arccos <n, m>`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, Vector3};
#[allow(unused_imports)]
use num_traits::Float;

use crate::combinatorics::Cellulation;
use crate::error::{Error, Result};
use crate::mink::{ip, PointClass, Vec4};
use crate::solver::{realize_warm, Realization, RealizeOptions, ShearedStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Red,
    Black,
}

/// What a circle stands for in the cellulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Face(usize),
    Vertex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCircle {
    /// Unit centre of the cap.
    pub axis: Vector3<f64>,
    /// Spherical radius of the cap.
    pub radius: f64,
    pub color: Color,
    pub provenance: Provenance,
}

impl SphericalCircle {
    /// Circle cut by the plane with space-like normal `n`, bounding the cap
    /// on the positive side.
    pub fn from_normal(n: &Vec4, color: Color, provenance: Provenance) -> Result<Self> {
        let s = Vector3::new(n[1], n[2], n[3]);
        let len = s.norm();
        if !(len > n[0].abs()) {
            return Err(Error::DegenerateConfiguration("plane misses the sphere"));
        }
        Ok(SphericalCircle { axis: s / len, radius: (n[0] / len).acos(), color, provenance })
    }

    /// Unit space-like normal of the plane through the circle.
    pub fn normal(&self) -> Vec4 {
        let (s, c) = self.radius.sin_cos();
        Vec4::new(c, self.axis.x, self.axis.y, self.axis.z) / s
    }

    /// Whether the closed cap contains `p`, up to `tol` in angle.
    pub fn contains(&self, p: &Vector3<f64>, tol: f64) -> bool {
        self.axis.dot(p).clamp(-1.0, 1.0).acos() <= self.radius + tol
    }
}

/// Cosine-like pairing of two caps: in `[-1, 1]` when the circles meet, below
/// `-1` for disjoint caps, above `1` for nested ones.
pub fn pairing(a: &SphericalCircle, b: &SphericalCircle) -> f64 {
    ip(&a.normal(), &b.normal())
}

/// Intersection angle of two caps, `None` when the circles do not meet.
pub fn intersection_angle(a: &SphericalCircle, b: &SphericalCircle) -> Option<f64> {
    let c = pairing(a, b);
    if c.abs() > 1.0 {
        None
    } else {
        Some(c.acos())
    }
}

/// Spherical distance between two caps: negative when they overlap, zero at
/// external tangency.
pub fn gap(a: &SphericalCircle, b: &SphericalCircle) -> f64 {
    a.axis.dot(&b.axis).clamp(-1.0, 1.0).acos() - a.radius - b.radius
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    /// Faces sharing an edge.
    BlackBlack,
    /// A vertex and a face containing it.
    RedBlack,
    /// Vertices sharing an edge; only present at the tangency limit.
    RedRed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub a: usize,
    pub b: usize,
    pub kind: ArcKind,
    /// Recorded intersection angle.
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircleConfig {
    pub circles: Vec<SphericalCircle>,
    pub arcs: Vec<Arc>,
    /// One flag per arc: the two circles are tangent.
    pub tangent: Vec<bool>,
}

impl CircleConfig {
    pub fn find(&self, p: Provenance) -> Option<usize> {
        self.circles.iter().position(|c| c.provenance == p)
    }
}

/// Black circles of all faces, red circles of the strictly hyperideal
/// vertices, with measured angles on the arcs.
pub fn config_from_realization(sigma: &Cellulation, r: &Realization) -> Result<CircleConfig> {
    let mut circles = Vec::new();
    for (f, plane) in r.faces.iter().enumerate() {
        circles.push(SphericalCircle::from_normal(&plane.n, Color::Black, Provenance::Face(f))?);
    }
    let mut red_of = vec![None; r.vertices.len()];
    for (v, p) in r.vertices.iter().enumerate() {
        if p.class == PointClass::Hyperideal {
            red_of[v] = Some(circles.len());
            circles.push(SphericalCircle::from_normal(&p.lift(), Color::Red, Provenance::Vertex(v))?);
        }
    }
    let mut arcs = Vec::new();
    for e in 0..sigma.n_edges() {
        let (f, g) = sigma.edge_faces(e);
        let angle = pairing(&circles[f], &circles[g]).clamp(-1.0, 1.0).acos();
        arcs.push(Arc { a: f, b: g, kind: ArcKind::BlackBlack, angle });
    }
    for v in 0..sigma.n_vertices() {
        let Some(rv) = red_of[v] else { continue };
        for f in sigma.vertex_faces(v) {
            let angle = pairing(&circles[rv], &circles[f]).clamp(-1.0, 1.0).acos();
            arcs.push(Arc { a: rv, b: f, kind: ArcKind::RedBlack, angle });
        }
    }
    let tangent = vec![false; arcs.len()];
    Ok(CircleConfig { circles, arcs, tangent })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigVerdict {
    pub valid: bool,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    /// Tolerance on pairings and recorded angles.
    pub tol: f64,
    /// Points of the sphere grid used for the double-cover bound.
    pub samples: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { tol: 1e-6, samples: 4000 }
    }
}

/// Fibonacci points on the unit sphere.
pub fn sphere_grid(n: usize) -> Vec<Vector3<f64>> {
    let golden = PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let t = golden * i as f64;
            Vector3::new(r * t.cos(), r * t.sin(), z)
        })
        .collect()
}

/// Check the defining constraints of a red/black configuration.
pub fn validate_config(c: &CircleConfig, opts: &ValidateOptions) -> ConfigVerdict {
    let mut reasons = Vec::new();
    let tol = opts.tol;
    for (i, k) in c.circles.iter().enumerate() {
        if !(k.radius > 0.0 && k.radius <= FRAC_PI_2 + tol) {
            reasons.push(format!("circle {i}: radius {} outside (0, pi/2]", k.radius));
        }
        if (k.axis.norm() - 1.0).abs() > tol {
            reasons.push(format!("circle {i}: axis is not a unit vector"));
        }
        if c.circles[..i].iter().any(|o| o.provenance == k.provenance) {
            reasons.push(format!("circle {i}: duplicate provenance"));
        }
        let expected = match k.provenance {
            Provenance::Face(_) => Color::Black,
            Provenance::Vertex(_) => Color::Red,
        };
        if k.color != expected {
            reasons.push(format!("circle {i}: color does not match provenance"));
        }
    }
    let reds: Vec<usize> = (0..c.circles.len()).filter(|&i| c.circles[i].color == Color::Red).collect();
    for (x, &i) in reds.iter().enumerate() {
        for &j in &reds[x + 1..] {
            let q = pairing(&c.circles[i], &c.circles[j]);
            if q > -1.0 + tol {
                reasons.push(format!("red circles {i} and {j} bound overlapping disks (pairing {q:.3e})"));
            }
        }
    }
    if c.tangent.len() != c.arcs.len() {
        reasons.push(String::from("tangency flags do not match the arcs"));
    }
    for (x, arc) in c.arcs.iter().enumerate() {
        if arc.a >= c.circles.len() || arc.b >= c.circles.len() || arc.a == arc.b {
            reasons.push(format!("arc {x}: bad endpoints"));
            continue;
        }
        let (ka, kb) = (&c.circles[arc.a], &c.circles[arc.b]);
        let colors = match arc.kind {
            ArcKind::BlackBlack => (Color::Black, Color::Black),
            ArcKind::RedBlack => (Color::Red, Color::Black),
            ArcKind::RedRed => (Color::Red, Color::Red),
        };
        if (ka.color, kb.color) != colors {
            reasons.push(format!("arc {x}: colors do not match its kind"));
        }
        if !(0.0..=PI).contains(&arc.angle) {
            reasons.push(format!("arc {x}: recorded angle {} outside [0, pi]", arc.angle));
            continue;
        }
        let measured = pairing(ka, kb);
        if (measured - arc.angle.cos()).abs() > tol {
            reasons.push(format!("arc {x}: recorded angle {} disagrees with the circles", arc.angle));
        }
        if arc.kind == ArcKind::RedBlack && (arc.angle - FRAC_PI_2).abs() > tol {
            reasons.push(format!("arc {x}: red and black circles are not orthogonal"));
        }
    }
    let blacks: Vec<&SphericalCircle> = c.circles.iter().filter(|k| k.color == Color::Black).collect();
    for p in sphere_grid(opts.samples) {
        let count = blacks.iter().filter(|k| k.contains(&p, -tol)).count();
        if count > 2 {
            reasons.push(format!("point {p:?} lies in {count} black disks"));
            break;
        }
    }
    ConfigVerdict { valid: reasons.is_empty(), reasons }
}

#[derive(Debug, Clone, Copy)]
pub struct KoebeOptions {
    /// Number of continuation steps.
    pub steps: usize,
    /// Initial distance of the angles from pi.
    pub delta0: f64,
    /// Ratio between consecutive distances.
    pub ratio: f64,
    /// Number of trailing steps used for the extrapolation.
    pub order: usize,
    /// Halvings tried before a step is declared stalled.
    pub max_halvings: usize,
    pub realize: RealizeOptions,
}

impl Default for KoebeOptions {
    fn default() -> Self {
        KoebeOptions {
            steps: 20,
            delta0: 0.3,
            ratio: 0.8,
            order: 4,
            max_halvings: 6,
            realize: RealizeOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KoebeResult {
    pub config: CircleConfig,
    /// Distances of the angles from pi along the continuation.
    pub deltas: Vec<f64>,
    /// Optimal volumes along the continuation.
    pub volumes: Vec<f64>,
    /// Largest spherical gap between circles flagged tangent.
    pub tangency_residual: f64,
    /// Largest `|cos|` of the angle between incident red and black circles.
    pub orthogonality_residual: f64,
    /// Difference between the two highest extrapolation orders.
    pub extrapolation_error: f64,
}

/// Neville extrapolation of `ys(hs)` to `h = 0`, with the difference to the
/// next lower order.
fn extrapolate(hs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = hs.len();
    let mut p = ys.to_vec();
    let mut lower = p[n - 1];
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (hs[i + m] * p[i] - hs[i] * p[i + 1]) / (hs[i + m] - hs[i]);
        }
        if m == n - 2 {
            lower = p[1];
        }
    }
    (p[0], (p[0] - lower).abs())
}

/// Unit space-like vector orthogonal to the given normals, with positive
/// time component.
fn polar_of(normals: &[Vec4]) -> Result<(Vec4, f64)> {
    // padded to at least four rows so the thin factorization keeps the
    // null direction
    let mut m = DMatrix::zeros(normals.len().max(4), 4);
    for (r, n) in normals.iter().enumerate() {
        m[(r, 0)] = -n[0];
        for k in 1..4 {
            m[(r, k)] = n[k];
        }
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.ok_or(Error::DegenerateConfiguration("polar of faces"))?;
    let (k, smin) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let smin = if normals.len() < 4 { 0.0 } else { smin };
    let mut v = Vec4::new(vt[(k, 0)], vt[(k, 1)], vt[(k, 2)], vt[(k, 3)]);
    let q = ip(&v, &v);
    if !(q > 0.0) {
        return Err(Error::DegenerateConfiguration("polar of faces is not space-like"));
    }
    v /= q.sqrt();
    if v[0] < 0.0 {
        v = -v;
    }
    Ok((v, smin))
}

/// Run the angles `w = pi - delta` toward pi on all edges of `sigma` and
/// extrapolate the circle configuration to the tangency limit.
pub fn koebe_continuation(sigma: &Cellulation, opts: &KoebeOptions) -> Result<KoebeResult> {
    if opts.steps < 2 || opts.order < 2 || !(opts.ratio > 0.0 && opts.ratio < 1.0) {
        return Err(Error::OutOfDomain("continuation schedule"));
    }
    let sigma = sigma.with_ideal(&[])?;
    let ne = sigma.n_edges();
    let mut deltas = Vec::with_capacity(opts.steps);
    let mut volumes = Vec::with_capacity(opts.steps);
    let mut normals: Vec<Vec<Vec4>> = Vec::with_capacity(opts.steps);
    let mut warm: Option<ShearedStructure> = None;
    let mut current = f64::NAN;
    for k in 0..opts.steps {
        let target = opts.delta0 * opts.ratio.powi(k as i32);
        let mut r = None;
        let mut delta = target;
        let mut halvings = 0;
        while r.is_none() {
            let w = vec![PI - delta; ne];
            match realize_warm(&sigma, &w, &opts.realize, warm.as_ref()) {
                Ok(sol) => {
                    log::debug!("continuation at delta {delta:.3e}: volume {:.12}", sol.volume);
                    warm = Some(sol.structure.clone());
                    current = delta;
                    if delta == target {
                        r = Some(sol);
                    } else {
                        delta = target;
                    }
                }
                Err(e) => {
                    log::debug!("continuation step to {delta:.3e} failed: {e}");
                    if halvings == opts.max_halvings || current.is_nan() {
                        return Err(Error::ContinuationStalled(delta));
                    }
                    halvings += 1;
                    delta = 0.5 * (current + delta);
                }
            }
        }
        let r = r.unwrap();
        deltas.push(target);
        volumes.push(r.volume);
        normals.push(r.faces.iter().map(|p| p.n).collect());
    }

    let m = opts.order.min(opts.steps);
    let hs = &deltas[deltas.len() - m..];
    let tail = &normals[normals.len() - m..];
    let mut extrapolation_error: f64 = 0.0;
    let mut limit = Vec::with_capacity(sigma.n_faces());
    for f in 0..sigma.n_faces() {
        let mut n = Vec4::zeros();
        for c in 0..4 {
            let ys: Vec<f64> = tail.iter().map(|s| s[f][c]).collect();
            let (y, err) = extrapolate(hs, &ys);
            n[c] = y;
            extrapolation_error = extrapolation_error.max(err);
        }
        let q = ip(&n, &n);
        if !(q > 0.0) {
            return Err(Error::DegenerateConfiguration("extrapolated face plane"));
        }
        limit.push(n / q.sqrt());
    }

    let mut circles = Vec::new();
    for (f, n) in limit.iter().enumerate() {
        circles.push(SphericalCircle::from_normal(n, Color::Black, Provenance::Face(f))?);
    }
    let nf = circles.len();
    for v in 0..sigma.n_vertices() {
        let around: Vec<Vec4> = sigma.vertex_faces(v).into_iter().map(|f| limit[f]).collect();
        let (p, _) = polar_of(&around)?;
        circles.push(SphericalCircle::from_normal(&p, Color::Red, Provenance::Vertex(v))?);
    }
    let angle_of = |a: usize, b: usize| pairing(&circles[a], &circles[b]).clamp(-1.0, 1.0).acos();
    let mut arcs = Vec::new();
    let mut tangent = Vec::new();
    let mut tangency_residual: f64 = 0.0;
    let mut orthogonality_residual: f64 = 0.0;
    for e in 0..ne {
        let (f, g) = sigma.edge_faces(e);
        arcs.push(Arc { a: f, b: g, kind: ArcKind::BlackBlack, angle: angle_of(f, g) });
        tangent.push(true);
        tangency_residual = tangency_residual.max(gap(&circles[f], &circles[g]).abs());
    }
    for &(a, b) in sigma.edges() {
        let (ra, rb) = (nf + a, nf + b);
        arcs.push(Arc { a: ra, b: rb, kind: ArcKind::RedRed, angle: angle_of(ra, rb) });
        tangent.push(true);
        tangency_residual = tangency_residual.max(gap(&circles[ra], &circles[rb]).abs());
    }
    for v in 0..sigma.n_vertices() {
        for f in sigma.vertex_faces(v) {
            let rv = nf + v;
            arcs.push(Arc { a: rv, b: f, kind: ArcKind::RedBlack, angle: angle_of(rv, f) });
            tangent.push(false);
            orthogonality_residual = orthogonality_residual.max(pairing(&circles[rv], &circles[f]).abs());
        }
    }
    log::debug!(
        "koebe limit: tangency {tangency_residual:.2e}, orthogonality {orthogonality_residual:.2e}, extrapolation {extrapolation_error:.2e}"
    );
    Ok(KoebeResult {
        config: CircleConfig { circles, arcs, tangent },
        deltas,
        volumes,
        tangency_residual,
        orthogonality_residual,
        extrapolation_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neville_recovers_polynomials() {
        let hs = [0.5, 0.4, 0.32, 0.256];
        let ys: Vec<f64> = hs.iter().map(|h| 2.0 - 3.0 * h + h * h * h).collect();
        let (y, _) = extrapolate(&hs, &ys);
        assert!((y - 2.0).abs() < 1e-12);
    }

    #[test]
    fn circle_normal_round_trip() {
        let n = Vec4::new(0.3, 0.2, -0.9, 0.5);
        let n = n / ip(&n, &n).sqrt();
        let c = SphericalCircle::from_normal(&n, Color::Black, Provenance::Face(0)).unwrap();
        assert!((c.normal() - n).norm() < 1e-12);
        assert!(c.radius < FRAC_PI_2);
    }

    #[test]
    fn tangent_caps() {
        let a = SphericalCircle { axis: Vector3::z(), radius: 0.5, color: Color::Black, provenance: Provenance::Face(0) };
        let axis = Vector3::new(0.8f64.sin(), 0.0, 0.8f64.cos());
        let b = SphericalCircle { axis, radius: 0.3, color: Color::Black, provenance: Provenance::Face(1) };
        assert!(gap(&a, &b).abs() < 1e-15);
        assert!((pairing(&a, &b) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn nested_reds_rejected() {
        let red = |r: f64, v: usize| SphericalCircle {
            axis: Vector3::z(),
            radius: r,
            color: Color::Red,
            provenance: Provenance::Vertex(v),
        };
        let c = CircleConfig { circles: vec![red(0.2, 0), red(0.4, 1)], arcs: Vec::new(), tangent: Vec::new() };
        assert!(!validate_config(&c, &ValidateOptions::default()).valid);
    }
}
