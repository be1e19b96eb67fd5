//! Minkowski space R^4_1, the Klein projective model and polarity.
//!
//! The form is `<x,y> = -x0 y0 + x1 y1 + x2 y2 + x3 y3`. A Klein point `p`
//! lifts to `(1, p)`, rescaled according to its class.

use nalgebra::{Matrix4, Rotation3, Vector2, Vector3, Vector4};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type Vec4 = Vector4<f64>;
pub type Vec3 = Vector3<f64>;

/// Band around the unit sphere inside which a Klein point counts as ideal.
pub const TOL_CLASS: f64 = 1e-9;

/// Threshold under which two planes are reported as tangent.
pub const TOL_PARABOLIC: f64 = 1e-9;

#[inline]
pub fn ip(a: &Vec4, b: &Vec4) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

#[inline]
pub fn norm_sq(a: &Vec4) -> f64 {
    ip(a, a)
}

pub fn j_matrix() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vec4::new(-1.0, 1.0, 1.0, 1.0))
}

/// Vector `n` with `<n, x> = det[x, a, b, c]` for every `x`.
pub fn lorentz_cross(a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
    let mut e = Vec4::zeros();
    for i in 0..4 {
        let mut m = Matrix4::zeros();
        m[(i, 0)] = 1.0;
        for r in 0..4 {
            m[(r, 1)] = a[r];
            m[(r, 2)] = b[r];
            m[(r, 3)] = c[r];
        }
        e[i] = m.determinant();
    }
    // det[x,a,b,c] = sum x_i e_i = <x, J e>
    Vec4::new(-e[0], e[1], e[2], e[3])
}

pub fn klein_to_lift(p: &Vec3) -> Vec4 {
    Vec4::new(1.0, p.x, p.y, p.z)
}

pub fn spatial(x: &Vec4) -> Vec3 {
    Vec3::new(x[1], x[2], x[3])
}

/// Central projection of a vector with `x0 != 0` to the Klein chart.
pub fn lift_to_klein(x: &Vec4) -> Result<Vec3> {
    if x[0].abs() < 1e-300 {
        return Err(Error::DegenerateConfiguration("vector has no affine image"));
    }
    Ok(spatial(x) / x[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointClass {
    Finite,
    Ideal,
    Hyperideal,
}

/// A classified point of the Klein model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjPoint {
    pub p: Vec3,
    pub class: PointClass,
}

impl ProjPoint {
    pub fn new(p: Vec3) -> Self {
        let r = p.norm();
        let class = if (r - 1.0).abs() <= TOL_CLASS {
            PointClass::Ideal
        } else if r < 1.0 {
            PointClass::Finite
        } else {
            PointClass::Hyperideal
        };
        ProjPoint { p, class }
    }

    /// Ideal point in direction `p`, snapped onto the sphere.
    pub fn ideal(p: Vec3) -> Self {
        ProjPoint { p: p / p.norm(), class: PointClass::Ideal }
    }

    pub fn from_lift(x: &Vec4) -> Result<Self> {
        Ok(Self::new(lift_to_klein(x)?))
    }

    pub fn is_ideal(&self) -> bool {
        self.class == PointClass::Ideal
    }

    /// Hyperboloid point, default light-like lift (`x0 = 1`), or unit
    /// de Sitter lift depending on the class.
    pub fn lift(&self) -> Vec4 {
        let x = klein_to_lift(&self.p);
        match self.class {
            PointClass::Finite => x / (1.0 - self.p.norm_squared()).sqrt(),
            PointClass::Ideal => {
                let q = self.p / self.p.norm();
                klein_to_lift(&q)
            }
            PointClass::Hyperideal => x / (self.p.norm_squared() - 1.0).sqrt(),
        }
    }
}

/// Oriented totally geodesic plane `{<x,n> = 0}`; the outward side is `<x,n> > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub n: Vec4,
}

impl Plane {
    pub fn new(n: Vec4) -> Result<Self> {
        let q = norm_sq(&n);
        if q <= 0.0 {
            return Err(Error::DegenerateConfiguration("plane normal is not space-like"));
        }
        Ok(Plane { n: n / q.sqrt() })
    }

    pub fn flipped(&self) -> Self {
        Plane { n: -self.n }
    }

    /// Signed value `<x, n>` for a Klein point lifted with `x0 = 1`.
    pub fn side(&self, p: &Vec3) -> f64 {
        ip(&klein_to_lift(p), &self.n)
    }

    /// Plane through three points given by their Minkowski lifts, oriented so
    /// that `inside` lies on the negative side.
    pub fn through(a: &Vec4, b: &Vec4, c: &Vec4, inside: &Vec4) -> Result<Self> {
        let mut n = lorentz_cross(a, b, c);
        let q = norm_sq(&n);
        if !(q > 0.0) {
            return Err(Error::DegenerateConfiguration("points do not span a space-like plane"));
        }
        n /= q.sqrt();
        if ip(&n, inside) > 0.0 {
            n = -n;
        }
        Ok(Plane { n })
    }
}

/// Polar plane of a hyperideal point: `{x : x . v = 1}` in Klein coordinates,
/// oriented away from the origin.
pub fn dual_point_to_plane(v: &ProjPoint) -> Result<Plane> {
    if v.class != PointClass::Hyperideal {
        return Err(Error::NotHyperideal);
    }
    Ok(Plane { n: v.lift() })
}

pub fn dual_plane_to_point(pl: &Plane) -> Result<ProjPoint> {
    let n0 = pl.n[0];
    if n0.abs() < 1e-14 {
        return Err(Error::DegenerateConfiguration("plane through the center has no affine pole"));
    }
    Ok(ProjPoint::new(spatial(&pl.n) / n0))
}

/// Signed coordinates of four collinear points along their common line.
fn line_coordinates(pts: [&Vec3; 4]) -> Result<[f64; 4]> {
    let mut best = (0usize, 0usize, 0.0);
    for i in 0..4 {
        for j in i + 1..4 {
            let d = (pts[j] - pts[i]).norm();
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    if best.2 == 0.0 {
        return Err(Error::DegenerateConfiguration("coincident points"));
    }
    let o = pts[best.0];
    let dir = (pts[best.1] - o) / best.2;
    let mut s = [0.0; 4];
    let scale = pts.iter().map(|p| p.norm()).fold(1.0, f64::max);
    for k in 0..4 {
        let v = pts[k] - o;
        let t = v.dot(&dir);
        if (v - dir * t).norm() > 1e-9 * scale {
            return Err(Error::NonCollinear);
        }
        s[k] = t;
    }
    Ok(s)
}

/// `[x,y;a,b] = (x-a)(b-y) / ((y-a)(b-x))` along the common line.
pub fn cross_ratio(x: &ProjPoint, y: &ProjPoint, a: &ProjPoint, b: &ProjPoint) -> Result<f64> {
    let [sx, sy, sa, sb] = line_coordinates([&x.p, &y.p, &a.p, &b.p])?;
    let den = (sy - sa) * (sb - sx);
    if den.abs() < 1e-300 {
        return Err(Error::DegenerateConfiguration("vanishing cross-ratio denominator"));
    }
    Ok((sx - sa) * (sb - sy) / den)
}

/// Roots `s_a < s_b` of `|x + s d|^2 = 1`, computed without cancellation.
fn chord_roots(x: &Vec3, d: &Vec3) -> (f64, f64) {
    let a = d.norm_squared();
    let b = x.dot(d);
    let c = x.norm_squared() - 1.0;
    let disc = (b * b - a * c).max(0.0).sqrt();
    let q = -(b + b.signum() * disc);
    if q == 0.0 {
        let r = (-c / a).sqrt();
        return (-r, r);
    }
    let r1 = q / a;
    let r2 = c / q;
    (r1.min(r2), r1.max(r2))
}

/// Hilbert metric of the unit ball, equal to the hyperbolic distance.
pub fn hilbert_distance(x: &ProjPoint, y: &ProjPoint) -> Result<f64> {
    if x.class != PointClass::Finite || y.class != PointClass::Finite {
        return Err(Error::PointNotFinite);
    }
    let d = y.p - x.p;
    if d.norm() == 0.0 {
        return Ok(0.0);
    }
    let (sa, sb) = chord_roots(&x.p, &d);
    // parameter 0 at x, 1 at y
    let cr = ((0.0 - sa) * (sb - 1.0)) / ((1.0 - sa) * sb);
    Ok(-0.5 * cr.ln())
}

/// Position of a lift on its horosphere family, scaled by `exp(h)`.
fn horo_lift(p: &ProjPoint, h: Option<f64>) -> Result<Vec4> {
    let h = h.ok_or(Error::MissingHorosphere)?;
    Ok(p.lift() * h.exp())
}

/// Distance between two points of the closed projective model.
///
/// Ideal points take a horosphere given as the log of the scale applied to
/// the light-like lift with `x0 = 1`; distances to an ideal point are signed
/// and negative when the horoballs overlap.
pub fn point_pair_distance(
    x: &ProjPoint,
    y: &ProjPoint,
    hx: Option<f64>,
    hy: Option<f64>,
) -> Result<f64> {
    use PointClass::*;
    match (x.class, y.class) {
        (Finite, Finite) => hilbert_distance(x, y),
        (Ideal, Ideal) => {
            let u = horo_lift(x, hx)?;
            let v = horo_lift(y, hy)?;
            let q = -ip(&u, &v) / 2.0;
            if q <= 0.0 {
                return Err(Error::DegenerateConfiguration("coincident ideal points"));
            }
            Ok(q.ln())
        }
        (Ideal, _) | (_, Ideal) => {
            let (u, other) = if x.class == Ideal {
                (horo_lift(x, hx)?, y)
            } else {
                (horo_lift(y, hy)?, x)
            };
            let q = -ip(&u, &other.lift());
            if q <= 0.0 {
                return Err(Error::SegmentMissesBall);
            }
            Ok(q.ln())
        }
        (Hyperideal, Hyperideal) => {
            let c = -ip(&x.lift(), &y.lift());
            if c > 1.0 + TOL_PARABOLIC {
                Ok(c.acosh())
            } else if c >= 1.0 - TOL_PARABOLIC {
                Ok(0.0)
            } else {
                Err(Error::SegmentMissesBall)
            }
        }
        (Hyperideal, Finite) | (Finite, Hyperideal) => {
            // signed distance from the finite point to the polar plane
            let (w, f) = if x.class == Hyperideal { (x, y) } else { (y, x) };
            Ok((-ip(&f.lift(), &w.lift())).asinh())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Angle,
    Distance,
    Parabolic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeMeasure {
    pub kind: MeasureKind,
    pub value: f64,
}

/// Exterior dihedral angle or distance between two oriented planes.
pub fn desitter_edge_measure(a: &Plane, b: &Plane) -> Result<EdgeMeasure> {
    if (a.n - b.n).norm() < 1e-12 || (a.n + b.n).norm() < 1e-12 {
        return Err(Error::ProportionalNormals);
    }
    let c = ip(&a.n, &b.n);
    if (c.abs() - 1.0).abs() <= TOL_PARABOLIC {
        return Ok(EdgeMeasure { kind: MeasureKind::Parabolic, value: 0.0 });
    }
    if c.abs() < 1.0 {
        Ok(EdgeMeasure { kind: MeasureKind::Angle, value: c.acos() })
    } else {
        Ok(EdgeMeasure { kind: MeasureKind::Distance, value: c.abs().acosh() })
    }
}

/// Stereographic projection from the north pole `(0,0,1)`.
pub fn stereographic(p: &Vec3) -> Result<Vector2<f64>> {
    let d = 1.0 - p.z;
    if d < 1e-12 {
        return Err(Error::AtPole);
    }
    Ok(Vector2::new(p.x / d, p.y / d))
}

pub fn inverse_stereographic(q: &Vector2<f64>) -> Vec3 {
    let r2 = q.norm_squared();
    Vec3::new(2.0 * q.x, 2.0 * q.y, r2 - 1.0) / (r2 + 1.0)
}

/// Orientation and time-orientation preserving Lorentz transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub m: Matrix4<f64>,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { m: Matrix4::identity() }
    }

    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let g = Isometry { m };
        if g.defect() > 1e-8 * (1.0 + m.norm().powi(2)) || m[(0, 0)] <= 0.0 || m.determinant() <= 0.0 {
            return Err(Error::DegenerateConfiguration("matrix is not an oriented Lorentz map"));
        }
        Ok(g)
    }

    /// Max entry of `G^T J G - J`.
    pub fn defect(&self) -> f64 {
        let j = j_matrix();
        (self.m.transpose() * j * self.m - j).abs().max()
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry { m: self.m * other.m }
    }

    pub fn inverse(&self) -> Isometry {
        let j = j_matrix();
        Isometry { m: j * self.m.transpose() * j }
    }

    pub fn apply(&self, x: &Vec4) -> Vec4 {
        self.m * x
    }

    pub fn apply_point(&self, p: &ProjPoint) -> Result<ProjPoint> {
        let x = self.apply(&klein_to_lift(&p.p));
        let q = lift_to_klein(&x)?;
        Ok(match p.class {
            PointClass::Ideal => ProjPoint::ideal(q),
            _ => ProjPoint::new(q),
        })
    }

    pub fn apply_plane(&self, pl: &Plane) -> Plane {
        Plane { n: self.apply(&pl.n) }
    }

    pub fn rotation(r: &Rotation3<f64>) -> Self {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(r.matrix());
        Isometry { m }
    }

    /// Reflection `y -> -y`; reverses orientation, used only for frames.
    pub(crate) fn reflect_y() -> Matrix4<f64> {
        Matrix4::from_diagonal(&Vec4::new(1.0, 1.0, -1.0, 1.0))
    }

    /// Pure boost with rapidity vector `b` (direction times rapidity).
    pub fn boost(b: &Vec3) -> Self {
        let r = b.norm();
        if r == 0.0 {
            return Self::identity();
        }
        let d = b / r;
        let (ch, sh) = (r.cosh(), r.sinh());
        let mut m = Matrix4::identity();
        m[(0, 0)] = ch;
        for i in 0..3 {
            m[(0, i + 1)] = sh * d[i];
            m[(i + 1, 0)] = sh * d[i];
            for k in 0..3 {
                m[(i + 1, k + 1)] += (ch - 1.0) * d[i] * d[k];
            }
        }
        Isometry { m }
    }

    /// Boost taking the future unit time-like vector `t` to `e0`.
    pub fn boost_to_origin(t: &Vec4) -> Self {
        let t = t / (-norm_sq(t)).sqrt();
        let g = t[0];
        let v = spatial(&t);
        let mut m = Matrix4::identity();
        m[(0, 0)] = g;
        for i in 0..3 {
            m[(0, i + 1)] = -v[i];
            m[(i + 1, 0)] = -v[i];
            for k in 0..3 {
                m[(i + 1, k + 1)] += v[i] * v[k] / (1.0 + g);
            }
        }
        Isometry { m }
    }
}
