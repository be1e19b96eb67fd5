//! Pairs of hyperideal triangles in the hyperbolic plane sharing an edge
//! with two ideal endpoints: horocycle lengths and the shift along the
//! common edge.

use nalgebra::{Vector2, Vector3};

use crate::error::{Error, Result};

/// Lorentz form of signature (-, +, +).
fn ip3(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// A vertex of a hyperideal polygon in the Klein disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskVertex {
    pub p: Vector2<f64>,
    pub ideal: bool,
    /// Log-scale of the horocycle at an ideal vertex (ignored otherwise).
    pub horoscale: f64,
}

impl DiskVertex {
    pub fn ideal(p: Vector2<f64>, horoscale: f64) -> Self {
        DiskVertex { p: p / p.norm(), ideal: true, horoscale }
    }

    pub fn hyperideal(p: Vector2<f64>) -> Result<Self> {
        if p.norm_squared() <= 1.0 {
            return Err(Error::NotHyperideal);
        }
        Ok(DiskVertex { p, ideal: false, horoscale: 0.0 })
    }

    /// Light-like lift scaled by the horocycle, or the unit space-like
    /// normal of the dual line.
    pub fn lift(&self) -> Vector3<f64> {
        let x = Vector3::new(1.0, self.p.x, self.p.y);
        if self.ideal {
            x * self.horoscale.exp()
        } else {
            x / (self.p.norm_squared() - 1.0).sqrt()
        }
    }
}

/// Signed distance between the horocycles or dual lines of two vertices,
/// negative when they overlap.
pub fn vertex_distance(a: &DiskVertex, b: &DiskVertex) -> Result<f64> {
    let c = -ip3(&a.lift(), &b.lift());
    if c <= 0.0 {
        return Err(Error::SegmentMissesBall);
    }
    Ok(match (a.ideal, b.ideal) {
        (true, true) => (c / 2.0).ln(),
        (false, false) => {
            if c < 1.0 {
                return Err(Error::SegmentMissesBall);
            }
            c.acosh()
        }
        _ => c.ln(),
    })
}

/// Position of the orthogonal projection of `x` on the geodesic from `a` to
/// `b` (both ideal), measured as arclength from the point where the
/// horocycle of `a` crosses it, increasing toward `b`.
pub fn projection_parameter(a: &DiskVertex, b: &DiskVertex, x: &DiskVertex) -> Result<f64> {
    if !a.ideal || !b.ideal {
        return Err(Error::MissingHorosphere);
    }
    let (ua, ub, y) = (a.lift(), b.lift(), x.lift());
    let c = -ip3(&ua, &ub);
    let (ya, yb) = (ip3(&y, &ua), ip3(&y, &ub));
    if c <= 0.0 || ya * yb <= 0.0 {
        return Err(Error::SegmentMissesBall);
    }
    // unit-speed gamma(s) = e^{-s} ua / 2 + e^{s} ub / c meets the
    // horocycle of a at s = 0; <y, gamma(s)> is stationary at the foot
    Ok(0.5 * (c * ya / (2.0 * yb)).ln())
}

/// Oriented distance from the projection of `x2` to that of `x4` on the
/// edge `(x3, x1)`, positive in the direction of `x1`.
pub fn shift(x: &[DiskVertex; 4]) -> Result<f64> {
    let s2 = projection_parameter(&x[0], &x[2], &x[1])?;
    let s4 = projection_parameter(&x[0], &x[2], &x[3])?;
    Ok(s2 - s4)
}

/// `l12 - l23 + l34 - l41` for the quadrilateral `x1 x2 x3 x4`.
pub fn alternating_length_sum(x: &[DiskVertex; 4]) -> Result<f64> {
    let l = |i: usize, j: usize| vertex_distance(&x[i], &x[j]);
    Ok(l(0, 1)? - l(1, 2)? + l(2, 3)? - l(3, 0)?)
}
