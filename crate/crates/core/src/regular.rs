//! Positivity of `d(interior angle) / d(length)` at the regular
//! strictly hyperideal simplex.
//!
//! Deform one edge `e` of the regular simplex with edge length `l0` to
//! length `l`. The vertex links are hyperbolic triangles whose sides follow
//! from the edge lengths; the interior dihedral angles at `e` (`t1`), at the
//! four adjacent edges (`t2`) and at the opposite edge (`t3`) follow from
//! the links. Their derivatives `a, b, c` at `l = l0` fill the symmetric
//! matrix `[[a,b,b,c,b,b], ...]`, which must be positive definite.

use alloc::vec::Vec;
use nalgebra::{Matrix6, SymmetricEigen};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::simplex::simplex_from_lengths;

#[derive(Debug, Clone, PartialEq)]
pub struct RegularSimplexReport {
    pub l0: f64,
    pub al: f64,
    pub bl: f64,
    pub a0: f64,
    /// Interior angles at `e`, at the adjacent edges and at the opposite edge.
    pub t: [f64; 3],
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub matrix: [[f64; 6]; 6],
    /// Eigenvalues in increasing order.
    pub eigenvalues: [f64; 6],
    /// `a + c + 4b`, `a + c - 2b` (twice) and `a - c` (three times).
    pub closed_form_eigenvalues: [f64; 3],
    /// `(a, b, c)` from central differences on the geometric family.
    pub geometric: Option<[f64; 3]>,
}

impl RegularSimplexReport {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn positive_definite(&self) -> bool {
        self.eigenvalues[0] > 0.0
    }

    /// Largest deviation between the closed-form and geometric derivatives.
    pub fn geometric_deviation(&self) -> Option<f64> {
        self.geometric.map(|g| {
            (g[0] - self.a).abs().max((g[1] - self.b).abs()).max((g[2] - self.c).abs())
        })
    }
}

fn acosh_checked(x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::OutOfDomain("arccosh argument below 1"));
    }
    Ok(x.acosh())
}

fn acos_checked(x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::OutOfDomain("arccos argument outside [-1, 1]"));
    }
    Ok(x.acos())
}

/// Closed-form chain at `l`, returning `(al, bl, a0, [t1, t2, t3])`.
fn chain(l: f64, l0: f64) -> Result<(f64, f64, f64, [f64; 3])> {
    let (c, s) = (l.cosh(), l.sinh());
    let (c0, s0) = (l0.cosh(), l0.sinh());
    let al = acosh_checked((c0 * c0 + c) / (s0 * s0))?;
    let bl = acosh_checked(c0 * (c + 1.0) / (s * s0))?;
    let a0 = acosh_checked(c0 * (c0 + 1.0) / (s0 * s0))?;
    let (ca0, sa0) = (a0.cosh(), a0.sinh());
    let (cb, sb) = (bl.cosh(), bl.sinh());
    let t1 = acos_checked((-ca0 + cb * cb) / (sb * sb))?;
    let t2 = acos_checked(cb * (ca0 - 1.0) / (sb * sa0))?;
    let t3 = acos_checked((ca0 * ca0 - al.cosh()) / (sa0 * sa0))?;
    Ok((al, bl, a0, [t1, t2, t3]))
}

/// Analytic derivatives of `t1, t2, t3` with respect to `l` at `l = l0`.
fn derivatives(l0: f64) -> Result<[f64; 3]> {
    let (_, bl, a0, t) = chain(l0, l0)?;
    let (c, s) = (l0.cosh(), l0.sinh());
    let (c0, s0) = (c, s);
    let big_a = a0.cosh();
    let big_b = bl.cosh();
    let db = -c0 * (1.0 + c) / (s0 * s * s);
    let dcal = s / (s0 * s0);
    let bb = big_b * big_b - 1.0;
    let dx1 = 2.0 * big_b * (big_a - 1.0) / (bb * bb) * db;
    let dx2 = -(big_a - 1.0) / (a0.sinh() * bb.powf(1.5)) * db;
    let dx3 = -dcal / (big_a * big_a - 1.0);
    let d = |x: f64, theta: f64| -x / theta.sin();
    Ok([d(dx1, t[0]), d(dx2, t[1]), d(dx3, t[2])])
}

/// Pattern matrix with opposite edges at positions `i` and `i + 3`.
pub fn pattern_matrix(a: f64, b: f64, c: f64) -> [[f64; 6]; 6] {
    let mut m = [[b; 6]; 6];
    for i in 0..6 {
        m[i][i] = a;
        m[i][(i + 3) % 6] = c;
    }
    m
}

/// Derivatives of the interior angles at `e`, at its neighbours and at the
/// opposite edge, along the family with lengths `(l, l0, ..., l0)`.
pub fn geometric_derivatives(l0: f64, step: f64) -> Result<[f64; 3]> {
    let angles = |l: f64| -> Result<[f64; 3]> {
        let mut len = [l0; 6];
        len[0] = l;
        let s = simplex_from_lengths(&len)?;
        let int: Vec<f64> = s.theta.iter().map(|t| core::f64::consts::PI - t).collect();
        let adj = (int[1] + int[2] + int[3] + int[4]) / 4.0;
        Ok([int[0], adj, int[5]])
    };
    let p = angles(l0 + step)?;
    let m = angles(l0 - step)?;
    Ok(core::array::from_fn(|k| (p[k] - m[k]) / (2.0 * step)))
}

/// Closed-form check at `l0`; with `geometric` the derivatives are also
/// measured on realized simplices.
pub fn regular_simplex_check(l0: f64, geometric: bool) -> Result<RegularSimplexReport> {
    if !(l0 > 0.0) {
        return Err(Error::OutOfDomain("l0 must be positive"));
    }
    let (al, bl, a0, t) = chain(l0, l0)?;
    let [a, b, c] = derivatives(l0)?;
    let matrix = pattern_matrix(a, b, c);
    let m = Matrix6::from_fn(|i, j| matrix[i][j]);
    let eig = SymmetricEigen::new(m);
    let mut ev: [f64; 6] = core::array::from_fn(|k| eig.eigenvalues[k]);
    ev.sort_by(f64::total_cmp);
    let geometric = if geometric { Some(geometric_derivatives(l0, 1e-5)?) } else { None };
    Ok(RegularSimplexReport {
        l0,
        al,
        bl,
        a0,
        t,
        a,
        b,
        c,
        matrix,
        eigenvalues: ev,
        closed_form_eigenvalues: [a + c + 4.0 * b, a + c - 2.0 * b, a - c],
        geometric,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_difference_quotients_of_chain() {
        let l0 = 1.2;
        let h = 1e-6;
        let p = chain(l0 + h, l0).unwrap().3;
        let m = chain(l0 - h, l0).unwrap().3;
        let d = derivatives(l0).unwrap();
        for k in 0..3 {
            assert!(((p[k] - m[k]) / (2.0 * h) - d[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn angles_agree_at_regular_point() {
        let (al, bl, a0, t) = chain(1.2, 1.2).unwrap();
        assert!((al - a0).abs() < 1e-12 && (bl - a0).abs() < 1e-12);
        assert!((t[0] - t[1]).abs() < 1e-12 && (t[1] - t[2]).abs() < 1e-12);
    }

    #[test]
    fn positive_at_1_2() {
        let r = regular_simplex_check(1.2, false).unwrap();
        assert!(r.positive_definite());
        assert!(r.min_eigenvalue() > 1e-3);
        let cf = r.closed_form_eigenvalues;
        let mut expect = [cf[0], cf[1], cf[1], cf[2], cf[2], cf[2]];
        expect.sort_by(f64::total_cmp);
        for k in 0..6 {
            assert!((expect[k] - r.eigenvalues[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_nonpositive_length() {
        assert!(matches!(regular_simplex_check(0.0, false), Err(Error::OutOfDomain(_))));
    }
}
