//! Truncation and hyperbolic volume of hyperideal simplices.
//!
//! The Klein density `(1 - r^2)^-2` is the divergence of the radial field
//! `F(r) x / r^3` with `F(r) = (r / (1 - r^2) - artanh r) / 2`. The volume is
//! therefore a sum of flux integrals over the faces of the truncated
//! polytope; on each face the radial integration is done in closed form,
//! leaving one smooth integral per polygon edge (log-singular at ideal
//! endpoints), evaluated by tanh-sinh quadrature.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mink::{spatial, Plane, Vec3};
use crate::quad::tanh_sinh;
use crate::simplex::HyperidealSimplex;

/// Per-edge absolute tolerance of the boundary quadrature.
pub const QUAD_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    /// Part of the face opposite the given vertex.
    Real(usize),
    /// Truncation face of the given hyperideal vertex.
    Cut(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub kind: FaceKind,
    pub plane: Plane,
    /// Vertices ordered counter-clockwise seen from outside.
    pub points: Vec<Vec3>,
    /// Whether each vertex lies on the sphere at infinity.
    pub at_infinity: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSimplex {
    pub faces: Vec<Polygon>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEstimate {
    pub value: f64,
    pub error: f64,
}

/// Point of segment `a b` on the polar plane `x . a = 1` of hyperideal `a`.
fn cut_point(a: &Vec3, b: &Vec3) -> Vec3 {
    let aa = a.norm_squared();
    let t = (aa - 1.0) / (aa - a.dot(b));
    a + (b - a) * t
}

fn newell_normal(pts: &[Vec3]) -> Vec3 {
    let mut n = Vec3::zeros();
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        n += a.cross(&b);
    }
    n
}

impl TruncatedSimplex {
    pub fn new(s: &HyperidealSimplex) -> Result<Self> {
        let p: [Vec3; 4] = core::array::from_fn(|k| s.vertices[k].p);
        let mut faces = Vec::new();
        for i in 0..4 {
            let idx: Vec<usize> = (0..4).filter(|&k| k != i).collect();
            let mut points = Vec::new();
            let mut inf = Vec::new();
            for m in 0..3 {
                let a = idx[m];
                let prev = idx[(m + 2) % 3];
                let next = idx[(m + 1) % 3];
                if s.ideal[a] {
                    points.push(p[a]);
                    inf.push(true);
                } else {
                    points.push(cut_point(&p[a], &p[prev]));
                    points.push(cut_point(&p[a], &p[next]));
                    inf.push(false);
                    inf.push(false);
                }
            }
            faces.push(oriented(FaceKind::Real(i), s.faces[i], points, inf)?);
        }
        for k in 0..4 {
            if s.ideal[k] {
                continue;
            }
            let points: Vec<Vec3> =
                (0..4).filter(|&j| j != k).map(|j| cut_point(&p[k], &p[j])).collect();
            let plane = Plane { n: s.lifts[k] };
            faces.push(oriented(FaceKind::Cut(k), plane, points, alloc::vec![false; 3])?);
        }
        Ok(TruncatedSimplex { faces })
    }

    /// Hyperbolic volume of the truncated polytope.
    pub fn volume(&self) -> Result<VolumeEstimate> {
        let mut value = 0.0;
        let mut error = 0.0;
        for f in &self.faces {
            let ns = spatial(&f.plane.n);
            let len = ns.norm();
            if len < 1e-300 {
                return Err(Error::DegenerateSimplex);
            }
            let nh = ns / len;
            // plane is nh . x = h
            let h = f.plane.n[0] / len;
            if h.abs() < 1e-300 {
                continue;
            }
            let foot = nh * h;
            let m = f.points.len();
            for e in 0..m {
                let a = f.points[e];
                let b = f.points[(e + 1) % m];
                let c = (a - foot).cross(&(b - a)).dot(&nh);
                if c.abs() < 1e-300 {
                    continue;
                }
                let r = edge_integral(&a, f.at_infinity[e], &b, f.at_infinity[(e + 1) % m], h * h)?;
                value += h * c * r.0;
                error += (h * c).abs() * r.1;
            }
        }
        Ok(VolumeEstimate { value, error })
    }
}

fn oriented(kind: FaceKind, plane: Plane, mut points: Vec<Vec3>, mut inf: Vec<bool>) -> Result<Polygon> {
    let ns = spatial(&plane.n);
    let nn = newell_normal(&points);
    if nn.norm() < 1e-14 {
        return Err(Error::DegenerateSimplex);
    }
    if nn.dot(&ns) < 0.0 {
        points.reverse();
        inf.reverse();
    }
    Ok(Polygon { kind, plane, points, at_infinity: inf })
}

/// `a(u) = artanh(sqrt u) / sqrt u`, given `u` and `1 - u`.
fn a_value(u: f64, omu: f64) -> f64 {
    if u < 0.3 {
        let mut sum = 0.0;
        let mut uk = 1.0;
        for k in 0..80 {
            let term = uk / (2 * k + 1) as f64;
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
            uk *= u;
        }
        return sum;
    }
    let s = u.sqrt();
    ((1.0 + s).ln() - 0.5 * omu.ln()) / s
}

/// `a` and its first three derivatives.
fn a_derivs(u: f64, omu: f64) -> [f64; 4] {
    if u < 0.3 {
        let mut out = [0.0; 4];
        for k in 0..80i32 {
            let c = 1.0 / (2 * k + 1) as f64;
            let kf = k as f64;
            out[0] += c * u.powi(k);
            if k >= 1 {
                out[1] += c * kf * u.powi(k - 1);
            }
            if k >= 2 {
                out[2] += c * kf * (kf - 1.0) * u.powi(k - 2);
            }
            if k >= 3 {
                out[3] += c * kf * (kf - 1.0) * (kf - 2.0) * u.powi(k - 3);
            }
            if k > 6 && u.powi(k - 3) * kf * kf * kf < 1e-18 {
                break;
            }
        }
        return out;
    }
    let a0 = a_value(u, omu);
    let r = 1.0 / omu;
    let a1 = (r - a0) / (2.0 * u);
    let a2 = (r * r - 3.0 * a1) / (2.0 * u);
    let a3 = (2.0 * r * r * r - 5.0 * a2) / (2.0 * u);
    [a0, a1, a2, a3]
}

/// Divided difference `(a(u) - a(v)) / (u - v)`.
fn a_divided(u: f64, omu: f64, v: f64, omv: f64) -> f64 {
    let d = u - v;
    let mid = 0.5 * (u + v);
    let ommid = 0.5 * (omu + omv);
    if d.abs() <= 1e-3 * ommid.min(1.0) {
        let [_, a1, _, a3] = a_derivs(mid, ommid);
        return a1 + a3 * d * d / 24.0;
    }
    (a_value(u, omu) - a_value(v, omv)) / d
}

/// `int_0^1 (g(u(t)) - g(h2)) / (u(t) - h2) dt` with `g = a / 2` and
/// `u(t) = |a + t (b - a)|^2`.
fn edge_integral(a: &Vec3, a_inf: bool, b: &Vec3, b_inf: bool, h2: f64) -> Result<(f64, f64)> {
    let d = b - a;
    let dd = d.norm_squared();
    let ad = a.dot(&d);
    let bd = b.dot(&d);
    let omh = 1.0 - h2;
    let f = |t: f64, s: f64| -> f64 {
        let (u, omu) = if t <= 0.5 {
            let y = a + d * t;
            let u = y.norm_squared();
            let omu = if a_inf { -t * (2.0 * ad + t * dd) } else { 1.0 - u };
            (u, omu)
        } else {
            let y = b - d * s;
            let u = y.norm_squared();
            let omu = if b_inf { s * (2.0 * bd - s * dd) } else { 1.0 - u };
            (u, omu)
        };
        if !(omu > 0.0) {
            return 0.0;
        }
        0.5 * a_divided(u, omu, h2, omh)
    };
    let r = tanh_sinh(f, QUAD_TOL)?;
    Ok((r.value, r.error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn series_matches_closed_form() {
        for &u in &[0.05, 0.2, 0.29] {
            let s = a_derivs(u, 1.0 - u);
            // closed-form branch evaluated directly
            let sq = u.sqrt();
            let a0 = sq.atanh() / sq;
            let a1 = (1.0 / (1.0 - u) - a0) / (2.0 * u);
            let a2 = (1.0 / (1.0 - u).powi(2) - 3.0 * a1) / (2.0 * u);
            let a3 = (2.0 / (1.0 - u).powi(3) - 5.0 * a2) / (2.0 * u);
            assert!((s[0] - a0).abs() < 1e-14);
            assert!((s[1] - a1).abs() < 1e-12);
            assert!((s[2] - a2).abs() < 1e-10, "{} {}", s[2], a2);
            assert!((s[3] - a3).abs() < 1e-8, "{} {}", s[3], a3);
        }
    }

    #[test]
    fn regular_ideal_volume() {
        let t = 2.0 * PI / 3.0;
        let s = HyperidealSimplex::from_angles(&[t; 6], &[true; 4]).unwrap();
        let v = s.volume().unwrap();
        assert!((v - 1.0149416064096536).abs() < 1e-12, "{v}");
    }

    #[test]
    fn regular_hyperideal_truncation_shape() {
        let s = HyperidealSimplex::from_angles(&[2.2; 6], &[false; 4]).unwrap();
        let tr = s.truncate().unwrap();
        let real = tr.faces.iter().filter(|f| matches!(f.kind, FaceKind::Real(_))).count();
        let cut = tr.faces.iter().filter(|f| matches!(f.kind, FaceKind::Cut(_))).count();
        assert_eq!((real, cut), (4, 4));
        for f in &tr.faces {
            let n = if matches!(f.kind, FaceKind::Real(_)) { 6 } else { 3 };
            assert_eq!(f.points.len(), n);
        }
    }
}
