//! Realization of hyperideal polyhedra with prescribed combinatorics and
//! exterior dihedral angles, by maximizing the total volume of a cone
//! triangulation over its angle structures and developing the maximizer.

mod constraints;
mod develop;
mod newton;
mod residuals;

use alloc::vec::Vec;

pub use constraints::{assemble_constraints, independent_rows, ConstraintSet, RowKind};
pub use develop::Polyhedron;
pub use newton::{
    blend_feasible, maximize, random_feasible_start, total_volume_and_gradient, Maximizer,
    NewtonOptions, ShearedStructure, COLLAPSE_STREAK, SAFEGUARD,
};
pub use residuals::{exactness_residuals, shear_by_holonomy, shear_by_lengths, ExactnessResiduals};

use crate::combinatorics::{check_all, cone_triangulation, Cellulation};
use crate::error::{Error, Result};
use crate::mink::{ip, PointClass, ProjPoint};

#[derive(Debug, Clone, Copy)]
pub struct RealizeOptions {
    /// Reduced-gradient tolerance of the Newton iteration.
    pub tol: f64,
    pub max_iter: usize,
    /// Tolerance on gluing and exactness residuals.
    pub geometry_tol: f64,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions { tol: 1e-9, max_iter: 200, geometry_tol: 1e-7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub iterations: usize,
    pub reduced_gradient: f64,
    pub length_mismatch: f64,
    pub shear: f64,
    pub gluing_mismatch: f64,
    pub coplanarity: f64,
    pub convexity: f64,
    pub max_angle_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub vertices: Vec<ProjPoint>,
    pub faces: Vec<crate::mink::Plane>,
    pub angles: Vec<f64>,
    pub volume: f64,
    pub diagnostics: Diagnostics,
    /// The maximizing angle structure on the cone triangulation.
    pub structure: ShearedStructure,
}

impl Realization {
    /// Isometry invariants: the Gram matrix of the face normals followed by
    /// the Gram matrix of the strictly hyperideal vertices (upper triangles,
    /// in index order).
    pub fn congruence_invariants(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 0..self.faces.len() {
            for j in i + 1..self.faces.len() {
                out.push(ip(&self.faces[i].n, &self.faces[j].n));
            }
        }
        let hyp: Vec<_> =
            self.vertices.iter().filter(|v| v.class == PointClass::Hyperideal).map(|v| v.lift()).collect();
        for i in 0..hyp.len() {
            for j in i + 1..hyp.len() {
                out.push(ip(&hyp[i], &hyp[j]));
            }
        }
        out
    }
}

/// Largest difference between two invariant lists of equal length.
pub fn invariant_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Solve from the given strictly feasible start and develop the result.
pub fn realize_from(
    sigma: &Cellulation,
    w: &[f64],
    cs: &ConstraintSet,
    start: &[f64],
    opts: &RealizeOptions,
) -> Result<Realization> {
    let m = maximize(cs, start, &NewtonOptions { tol: opts.tol, max_iter: opts.max_iter })?;
    let res = exactness_residuals(&cs.cone, &m.structure)?;
    log::debug!(
        "maximizer after {} iterations: volume {:.12}, reduced gradient {:.2e}, length mismatch {:.2e}, shear {:.2e}",
        m.iterations,
        m.volume,
        m.reduced_gradient,
        res.length_mismatch,
        res.shear
    );
    let poly = develop::develop_polyhedron(sigma, &cs.cone, &m.structure, opts.geometry_tol)?;
    let max_angle_error = poly.angles.iter().zip(w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(Realization {
        vertices: poly.vertices,
        faces: poly.faces,
        angles: poly.angles,
        volume: m.volume,
        diagnostics: Diagnostics {
            iterations: m.iterations,
            reduced_gradient: m.reduced_gradient,
            length_mismatch: res.length_mismatch,
            shear: res.shear,
            gluing_mismatch: poly.gluing_mismatch,
            coplanarity: poly.coplanarity,
            convexity: poly.convexity,
            max_angle_error,
        },
        structure: m.structure,
    })
}

/// Check the angles, then solve and develop. `warm` is an optional angle
/// structure on the same cone triangulation to start from.
pub fn realize_warm(
    sigma: &Cellulation,
    w: &[f64],
    opts: &RealizeOptions,
    warm: Option<&ShearedStructure>,
) -> Result<Realization> {
    let verdict = check_all(sigma, w);
    if !verdict.admissible {
        return Err(Error::Inadmissible(verdict.reasons));
    }
    let cone = cone_triangulation(sigma)?;
    let cs = assemble_constraints(sigma, &cone, w)?;
    let start = match warm {
        Some(x) if x.theta.len() == cone.n_simplices() => blend_feasible(&cs, &x.to_vec()),
        _ => cs.interior_point.clone(),
    };
    realize_from(sigma, w, &cs, &start, opts)
}

/// The hyperideal polyhedron with cellulation `sigma` and exterior angles
/// `w` (indexed like `sigma.edges()`).
pub fn realize(sigma: &Cellulation, w: &[f64], opts: &RealizeOptions) -> Result<Realization> {
    realize_warm(sigma, w, opts, None)
}
