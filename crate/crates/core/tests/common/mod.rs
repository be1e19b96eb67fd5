//! Shared generators for the integration tests.
#![allow(dead_code)]

use hyperideal_core::combinatorics::{build_cellulation, Cellulation};
use hyperideal_core::mink::{ip, klein_to_lift, Plane, PointClass, ProjPoint, Vec3};
use rand::Rng;

/// Faces of the convex hull of points in general position, as index
/// triples ordered counter-clockwise seen from outside.
pub fn convex_hull(p: &[Vec3]) -> Option<Vec<Vec<usize>>> {
    let n = p.len();
    let scale = p.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let mut faces = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = (p[j] - p[i]).cross(&(p[k] - p[i]));
                if nrm.norm() < 1e-9 * scale * scale {
                    return None;
                }
                let mut pos = 0;
                let mut neg = 0;
                for m in 0..n {
                    if m == i || m == j || m == k {
                        continue;
                    }
                    let s = nrm.dot(&(p[m] - p[i])) / nrm.norm();
                    if s.abs() < 1e-9 * scale {
                        return None;
                    }
                    if s > 0.0 {
                        pos += 1;
                    } else {
                        neg += 1;
                    }
                }
                if pos == 0 {
                    faces.push(vec![i, j, k]);
                } else if neg == 0 {
                    faces.push(vec![i, k, j]);
                }
            }
        }
    }
    Some(faces)
}

/// Whether the segment `a b` meets the open unit ball.
pub fn crosses_ball(a: &Vec3, b: &Vec3) -> bool {
    let d = b - a;
    let t = (-a.dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
    (a + d * t).norm() < 1.0 - 1e-6
}

/// Mean of the midpoints of the edge chords inside the ball.
pub fn inner_point(sigma: &Cellulation, p: &[Vec3]) -> Vec3 {
    let mut acc = Vec3::zeros();
    for &(a, b) in sigma.edges() {
        let d = p[b] - p[a];
        let dd = d.norm_squared();
        let ad = p[a].dot(&d);
        let disc = (ad * ad - dd * (p[a].norm_squared() - 1.0)).max(0.0).sqrt();
        let s1 = ((-ad - disc) / dd).max(0.0);
        let s2 = ((-ad + disc) / dd).min(1.0);
        acc += p[a] + d * (0.5 * (s1 + s2));
    }
    acc / sigma.n_edges() as f64
}

/// Outward face planes of a polyhedron with the given vertices.
pub fn face_planes(sigma: &Cellulation, p: &[Vec3]) -> Vec<Plane> {
    let inside = klein_to_lift(&inner_point(sigma, p));
    sigma
        .faces()
        .iter()
        .map(|f| {
            let l: Vec<_> = f.iter().take(3).map(|&v| klein_to_lift(&p[v])).collect();
            Plane::through(&l[0], &l[1], &l[2], &inside).unwrap()
        })
        .collect()
}

/// Exterior dihedral angles of a polyhedron.
pub fn measure_angles(sigma: &Cellulation, p: &[Vec3]) -> Vec<f64> {
    let planes = face_planes(sigma, p);
    (0..sigma.n_edges())
        .map(|e| {
            let (f, g) = sigma.edge_faces(e);
            ip(&planes[f].n, &planes[g].n).clamp(-1.0, 1.0).acos()
        })
        .collect()
}

/// Face-normal Gram matrix and strictly hyperideal vertex Gram matrix, in the
/// same layout as `Realization::congruence_invariants`.
pub fn invariants(sigma: &Cellulation, p: &[Vec3]) -> Vec<f64> {
    let planes = face_planes(sigma, p);
    let mut out = Vec::new();
    for i in 0..planes.len() {
        for j in i + 1..planes.len() {
            out.push(ip(&planes[i].n, &planes[j].n));
        }
    }
    let hyp: Vec<_> = (0..p.len())
        .filter(|&v| !sigma.is_ideal(v))
        .map(|v| ProjPoint { p: p[v], class: PointClass::Hyperideal }.lift())
        .collect();
    for i in 0..hyp.len() {
        for j in i + 1..hyp.len() {
            out.push(ip(&hyp[i], &hyp[j]));
        }
    }
    out
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// A random hyperideal polyhedron: `n` points at radius in `[1, 1.3]`
/// (exactly 1 with probability `p_ideal`), kept when every hull edge
/// crosses the ball and every vertex is on the hull.
pub struct RandomPolyhedron {
    pub sigma: Cellulation,
    pub points: Vec<Vec3>,
    pub angles: Vec<f64>,
}

pub fn random_polyhedron<R: Rng>(rng: &mut R, n: usize, p_ideal: f64) -> RandomPolyhedron {
    loop {
        let mut pts = Vec::with_capacity(n);
        let mut ideal = Vec::new();
        for v in 0..n {
            let u = random_unit(rng);
            if rng.random_bool(p_ideal) {
                ideal.push(v);
                pts.push(u);
            } else {
                pts.push(u * rng.random_range(1.0..1.3));
            }
        }
        let Some(faces) = convex_hull(&pts) else { continue };
        let used = faces.iter().flatten().collect::<std::collections::BTreeSet<_>>().len();
        if used != n {
            continue;
        }
        let Ok(sigma) = build_cellulation(n, &faces, &ideal) else { continue };
        if !sigma.edges().iter().all(|&(a, b)| crosses_ball(&pts[a], &pts[b])) {
            continue;
        }
        let angles = measure_angles(&sigma, &pts);
        if angles.iter().any(|&a| a < 0.05 || a > std::f64::consts::PI - 0.05) {
            continue;
        }
        // vertices grazing the sphere have angle sums within rounding of 2 pi
        let tau = 2.0 * std::f64::consts::PI;
        if (0..n).any(|v| {
            let s: f64 = sigma.vertex_edges(v).iter().map(|&e| angles[e]).sum();
            !sigma.is_ideal(v) && s < tau + 1e-4
        }) {
            continue;
        }
        return RandomPolyhedron { sigma, points: pts, angles };
    }
}
