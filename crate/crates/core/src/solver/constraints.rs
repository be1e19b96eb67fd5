use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::combinatorics::{Cellulation, ConeTriangulation};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome};
use crate::simplex::{null_space, vertex_edges};

/// Upper bound on the slack sought by the interior-point LP.
const SLACK_CAP: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// Total interior angle `2 pi` around the spoke from the apex to a vertex.
    InteriorEdge(usize),
    /// Total interior angle `pi - w` at a boundary edge (index into
    /// `tri_edges`).
    BoundaryEdge(usize),
    /// Exterior angles summing to `2 pi` at an ideal corner of a simplex.
    IdealCorner(usize, usize),
}

/// Linear equalities `a x = b` on the exterior angles of all simplices,
/// laid out as `x[6 s + k]` for local edge `k` of simplex `s`.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    pub cone: ConeTriangulation,
    /// Ideal flags of the simplex corners, inherited from the vertices.
    pub corner_ideal: Vec<[bool; 4]>,
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub rows: Vec<RowKind>,
    /// A maximal independent subset of rows.
    pub independent: Vec<usize>,
    pub rank: usize,
    /// Orthonormal basis of the directions tangent to the affine set.
    pub null_basis: DMatrix<f64>,
    /// Strictly feasible point found by slack maximization.
    pub interior_point: Vec<f64>,
    /// Its slack: distance of every angle from 0 and pi, and of every
    /// non-ideal corner sum from `2 pi`.
    pub slack: f64,
}

impl ConstraintSet {
    pub fn n_vars(&self) -> usize {
        6 * self.cone.n_simplices()
    }

    pub fn dimension(&self) -> usize {
        self.null_basis.ncols()
    }

    /// Max violation of the equalities at `x`.
    pub fn equality_residual(&self, x: &[f64]) -> f64 {
        let r = &self.a * DVector::from_column_slice(x) - &self.b;
        r.abs().max()
    }

    /// Smallest margin of `x` against the open inequalities.
    pub fn margin(&self, x: &[f64]) -> f64 {
        let mut m = f64::INFINITY;
        for &t in x {
            m = m.min(t).min(PI - t);
        }
        for (s, ci) in self.corner_ideal.iter().enumerate() {
            for v in 0..4 {
                if !ci[v] {
                    let sum: f64 = vertex_edges(v).iter().map(|&k| x[6 * s + k]).sum();
                    m = m.min(sum - 2.0 * PI);
                }
            }
        }
        m
    }

    /// Project `x` onto the affine set along the row space.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let xv = DVector::from_column_slice(x);
        let d = xv - &self.interior_point_vector();
        let n = &self.null_basis;
        let p = n * (n.transpose() * d);
        (self.interior_point_vector() + p).iter().copied().collect()
    }

    fn interior_point_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.interior_point)
    }
}

/// Rows of `a` kept by Gram-Schmidt against the earlier ones.
pub fn independent_rows(a: &DMatrix<f64>, tol: f64) -> Vec<usize> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut keep = Vec::new();
    for r in 0..a.nrows() {
        let row = a.row(r).transpose();
        let norm = row.norm();
        if norm == 0.0 {
            continue;
        }
        let mut v = row.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = q.dot(&v);
                v -= q * c;
            }
        }
        if v.norm() > tol * norm {
            basis.push(&v / v.norm());
            keep.push(r);
        }
    }
    keep
}

/// Assemble the gluing, boundary and ideal-corner equalities of the cone
/// triangulation for the exterior angles `w` of `sigma`, and find a strictly
/// feasible point.
pub fn assemble_constraints(sigma: &Cellulation, cone: &ConeTriangulation, w: &[f64]) -> Result<ConstraintSet> {
    let ns = cone.n_simplices();
    let n = 6 * ns;
    let corner_ideal: Vec<[bool; 4]> =
        cone.simplices.iter().map(|s| core::array::from_fn(|i| sigma.is_ideal(s[i]))).collect();
    let mut rows: Vec<(RowKind, Vec<usize>, f64)> = Vec::new();
    for (i, inc) in cone.interior_incidence().into_iter().enumerate() {
        let m = inc.len() as f64;
        let idx = inc.iter().map(|&(s, k)| 6 * s + k).collect();
        rows.push((RowKind::InteriorEdge(cone.interior_edges[i]), idx, (m - 2.0) * PI));
    }
    for (e, inc) in cone.boundary_incidence().into_iter().enumerate() {
        if inc.is_empty() {
            continue;
        }
        let we = cone.tri_edges[e].sigma_edge.map_or(0.0, |se| w[se]);
        let m = inc.len() as f64;
        let idx = inc.iter().map(|&(s, k)| 6 * s + k).collect();
        rows.push((RowKind::BoundaryEdge(e), idx, (m - 1.0) * PI + we));
    }
    for (s, ci) in corner_ideal.iter().enumerate() {
        for v in 0..4 {
            if ci[v] {
                let idx = vertex_edges(v).iter().map(|&k| 6 * s + k).collect();
                rows.push((RowKind::IdealCorner(s, v), idx, 2.0 * PI));
            }
        }
    }
    let m = rows.len();
    let mut a = DMatrix::zeros(m, n);
    let mut b = DVector::zeros(m);
    for (r, (_, idx, rhs)) in rows.iter().enumerate() {
        for &j in idx {
            a[(r, j)] += 1.0;
        }
        b[r] = *rhs;
    }
    let independent = independent_rows(&a, 1e-9);
    let rank = independent.len();
    let a_ind = a.select_rows(independent.iter());
    let null_basis = if n == 0 { DMatrix::zeros(0, 0) } else { null_space(&a_ind) };

    // maximize s subject to the equalities and s-margins; s = sp - sm
    let nv = n + 2;
    let (sp, sm) = (n, n + 1);
    let mut lp = LinearProgram::new(nv);
    lp.c[sp] = 1.0;
    lp.c[sm] = -1.0;
    for &r in &independent {
        let mut row = vec![0.0; nv];
        for j in 0..n {
            row[j] = a[(r, j)];
        }
        lp.add_eq(row, b[r]);
    }
    for j in 0..n {
        let mut row = vec![0.0; nv];
        row[j] = 1.0;
        row[sp] = -1.0;
        row[sm] = 1.0;
        lp.add_ge(row.clone(), 0.0);
        row[j] = -1.0;
        lp.add_ge(row, -PI);
    }
    for (s, ci) in corner_ideal.iter().enumerate() {
        for v in 0..4 {
            if !ci[v] {
                let mut row = vec![0.0; nv];
                for k in vertex_edges(v) {
                    row[6 * s + k] = 1.0;
                }
                row[sp] = -1.0;
                row[sm] = 1.0;
                lp.add_ge(row, 2.0 * PI);
            }
        }
    }
    let mut cap = vec![0.0; nv];
    cap[sp] = 1.0;
    cap[sm] = -1.0;
    lp.add_le(cap, SLACK_CAP);
    let (x, slack) = match lp.solve() {
        LpOutcome::Optimal { x, value } => (x, value),
        LpOutcome::Infeasible { infeasibility } => return Err(Error::Infeasible(-infeasibility)),
        LpOutcome::Unbounded => return Err(Error::Infeasible(f64::NAN)),
    };
    if !(slack > 1e-9) {
        return Err(Error::Infeasible(slack));
    }
    let mut cs = ConstraintSet {
        cone: cone.clone(),
        corner_ideal,
        a,
        b,
        rows: rows.into_iter().map(|r| r.0).collect(),
        independent,
        rank,
        null_basis,
        interior_point: x[..n].to_vec(),
        slack,
    };
    // polish onto the affine set: the tableau solution carries rounding
    let ip = cs.interior_point.clone();
    let a_ind = cs.a.select_rows(cs.independent.iter());
    let b_ind = cs.b.select_rows(cs.independent.iter());
    let r = &a_ind * DVector::from_column_slice(&ip) - b_ind;
    if r.len() > 0 {
        let aat = &a_ind * a_ind.transpose();
        if let Some(l) = aat.cholesky() {
            let corr = a_ind.transpose() * l.solve(&r);
            cs.interior_point = ip.iter().zip(corr.iter()).map(|(x, c)| x - c).collect();
        }
    }
    Ok(cs)
}
