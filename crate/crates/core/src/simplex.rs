//! Hyperideal simplices parametrized by their exterior dihedral angles.
//!
//! Vertices are labelled 0..4 and face `i` is the face opposite vertex `i`.
//! Edges are ordered `01, 02, 03, 12, 13, 23`; edge `k` and edge `5 - k`
//! are opposite.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, Matrix4, Rotation3, SymmetricEigen, Vector3};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mink::{
    ip, klein_to_lift, lift_to_klein, norm_sq, spatial, Isometry, Plane, PointClass,
    ProjPoint, Vec3, Vec4,
};
use crate::volume::TruncatedSimplex;

pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Tolerance on the vertex sums `2 pi` that mark an ideal vertex.
pub const TOL_SUM: f64 = 1e-9;

/// Discriminant threshold under which a simplex is treated as degenerate.
pub const TOL_DEGENERATE: f64 = 1e-9;

/// Step of the central differences used for second derivatives.
pub const HESSIAN_STEP: f64 = 1e-5;

pub fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no edge {a}-{b}"),
    }
}

pub fn opposite_edge(k: usize) -> usize {
    5 - k
}

/// The three edges incident to vertex `v`.
pub fn vertex_edges(v: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut n = 0;
    for (k, &(a, b)) in EDGES.iter().enumerate() {
        if a == v || b == v {
            out[n] = k;
            n += 1;
        }
    }
    out
}

/// The three edges of face `f` (the face opposite vertex `f`).
pub fn face_edges(f: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut n = 0;
    for (k, &(a, b)) in EDGES.iter().enumerate() {
        if a != f && b != f {
            out[n] = k;
            n += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleVerdict {
    pub admissible: bool,
    pub vertex_sums: [f64; 4],
    pub reasons: Vec<String>,
}

/// Vertex-sum condition for exterior angles: each sum is at least `2 pi`,
/// with equality exactly at the ideal vertices.
pub fn admissible_simplex_angles(theta: &[f64; 6], ideal: &[bool; 4]) -> AngleVerdict {
    let mut reasons = Vec::new();
    for (k, &t) in theta.iter().enumerate() {
        if !(t > 0.0 && t < PI) {
            reasons.push(format!("angle {k} = {t} outside (0, pi)"));
        }
    }
    let mut sums = [0.0; 4];
    for v in 0..4 {
        let s: f64 = vertex_edges(v).iter().map(|&k| theta[k]).sum();
        sums[v] = s;
        let gap = s - 2.0 * PI;
        if ideal[v] && gap.abs() > TOL_SUM {
            reasons.push(format!("ideal vertex {v}: sum {s} differs from 2pi"));
        }
        if !ideal[v] && gap <= TOL_SUM {
            reasons.push(format!("vertex {v}: sum {s} not above 2pi"));
        }
    }
    AngleVerdict { admissible: reasons.is_empty(), vertex_sums: sums, reasons }
}

/// Face sums of six edge values, each at least `2 pi` for a dual simplex.
pub fn dual_simplex_edge_check(l: &[f64; 6]) -> AngleVerdict {
    let mut reasons = Vec::new();
    for (k, &t) in l.iter().enumerate() {
        if !(t > 0.0 && t < PI) {
            reasons.push(format!("value {k} = {t} outside (0, pi)"));
        }
    }
    let mut sums = [0.0; 4];
    for f in 0..4 {
        let s: f64 = face_edges(f).iter().map(|&k| l[k]).sum();
        sums[f] = s;
        if s < 2.0 * PI - TOL_SUM {
            reasons.push(format!("face {f}: sum {s} below 2pi"));
        }
    }
    AngleVerdict { admissible: reasons.is_empty(), vertex_sums: sums, reasons }
}

/// Gram matrix of the outward face normals.
pub fn face_gram(theta: &[f64; 6]) -> Matrix4<f64> {
    let mut g = Matrix4::identity();
    for i in 0..4 {
        for j in i + 1..4 {
            let c = theta[opposite_edge(edge_index(i, j))].cos();
            g[(i, j)] = c;
            g[(j, i)] = c;
        }
    }
    g
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperidealSimplex {
    pub theta: [f64; 6],
    pub ideal: [bool; 4],
    pub vertices: [ProjPoint; 4],
    /// Light-like lifts with `x0 = 1` at ideal vertices, unit space-like
    /// lifts at hyperideal ones.
    pub lifts: [Vec4; 4],
    /// Outward unit normals, face `i` opposite vertex `i`.
    pub faces: [Plane; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLengthClass {
    pub raw: [f64; 6],
    pub ideal: [bool; 4],
}

impl EdgeLengthClass {
    pub fn n_ideal(&self) -> usize {
        self.ideal.iter().filter(|&&b| b).count()
    }

    /// Distance to `other` in the quotient by horosphere changes.
    pub fn quotient_distance(&self, other: &EdgeLengthClass) -> f64 {
        let d = DMatrix::from_iterator(6, 1, (0..6).map(|k| self.raw[k] - other.raw[k]));
        let ids: Vec<usize> = (0..4).filter(|&v| self.ideal[v]).collect();
        if ids.is_empty() {
            return d.abs().max();
        }
        let mut phi = DMatrix::zeros(6, ids.len());
        for (k, &(a, b)) in EDGES.iter().enumerate() {
            for (c, &v) in ids.iter().enumerate() {
                if a == v || b == v {
                    phi[(k, c)] = 1.0;
                }
            }
        }
        let svd = phi.clone().svd(true, true);
        let c = svd.solve(&d, 1e-12).unwrap_or_else(|_| DMatrix::zeros(ids.len(), 1));
        (d - phi * c).abs().max()
    }
}

/// Distance between two lifted vertices; light-like lifts carry their
/// horosphere in their scale.
pub fn lifted_distance(x: &Vec4, x_ideal: bool, y: &Vec4, y_ideal: bool) -> Result<f64> {
    let c = -ip(x, y);
    match (x_ideal, y_ideal) {
        (true, true) => {
            if c <= 0.0 {
                return Err(Error::SegmentMissesBall);
            }
            Ok((c / 2.0).ln())
        }
        (true, false) | (false, true) => {
            if c <= 0.0 {
                return Err(Error::SegmentMissesBall);
            }
            Ok(c.ln())
        }
        (false, false) => {
            if c >= 1.0 {
                Ok(c.acosh())
            } else if c > 1.0 - crate::mink::TOL_PARABOLIC {
                Ok(0.0)
            } else {
                Err(Error::SegmentMissesBall)
            }
        }
    }
}

/// Orientation-normalizing map: `t` to the origin, vertex `a` on the +z
/// axis, vertex `b` in the xz half-plane `x > 0`.
pub(crate) fn frame_map(t: &Vec4, a: &Vec4, b: &[Vec4]) -> Result<Matrix4<f64>> {
    let boost = Isometry::boost_to_origin(t);
    let pa = lift_to_klein(&boost.apply(a))?;
    if pa.norm() < 1e-14 {
        return Err(Error::DegenerateSimplex);
    }
    let za = pa / pa.norm();
    let ez = Vector3::z();
    let r1 = Rotation3::rotation_between(&za, &ez)
        .unwrap_or_else(|| Rotation3::from_axis_angle(&Vector3::x_axis(), PI));
    let m1 = Isometry::rotation(&r1).m * boost.m;
    for q in b {
        let pb = lift_to_klein(&(m1 * q))?;
        let r = (pb.x * pb.x + pb.y * pb.y).sqrt();
        if r > 1e-9 * (1.0 + pb.norm()) {
            let r2 = Rotation3::from_axis_angle(&Vector3::z_axis(), -pb.y.atan2(pb.x));
            return Ok(Isometry::rotation(&r2).m * m1);
        }
    }
    Ok(m1)
}

fn orient_det(p: &[Vec3; 4]) -> f64 {
    let m = nalgebra::Matrix3::from_columns(&[p[1] - p[0], p[2] - p[0], p[3] - p[0]]);
    m.determinant()
}

impl HyperidealSimplex {
    /// The unique simplex with exterior angles `theta`, in canonical position.
    pub fn from_angles(theta: &[f64; 6], ideal: &[bool; 4]) -> Result<Self> {
        let verdict = admissible_simplex_angles(theta, ideal);
        if !verdict.admissible {
            return Err(Error::InvalidAngles(verdict.reasons.join("; ")));
        }
        let g = face_gram(theta);
        let eig = SymmetricEigen::new(g);
        let mut order = [0usize, 1, 2, 3];
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let lam: [f64; 4] = core::array::from_fn(|k| eig.eigenvalues[order[k]]);
        if !(lam[0] < -TOL_DEGENERATE && lam[1] > TOL_DEGENERATE) {
            return Err(Error::DegenerateSimplex);
        }
        // rows of `nm` are the normals in Minkowski coordinates
        let mut normals = [Vec4::zeros(); 4];
        for i in 0..4 {
            for k in 0..4 {
                normals[i][k] = lam[k].abs().sqrt() * eig.eigenvectors[(i, order[k])];
            }
        }
        let mut ginv = Matrix4::zeros();
        for k in 0..4 {
            let q = eig.eigenvectors.column(order[k]);
            ginv += q * q.transpose() / lam[k];
        }
        let mut w = [Vec4::zeros(); 4];
        for k in 0..4 {
            for j in 0..4 {
                w[k] -= normals[j] * ginv[(j, k)];
            }
            let q = ginv[(k, k)];
            if ideal[k] {
                w[k] /= w[k].norm();
            } else {
                if q <= 0.0 {
                    return Err(Error::SolveDiverged("hyperideal vertex is not space-like"));
                }
                w[k] /= q.sqrt();
            }
        }
        let t = interior_point(&w, ideal)?;
        let t = if t[0] < 0.0 {
            for k in 0..4 {
                w[k] = -w[k];
                normals[k] = -normals[k];
            }
            -t
        } else {
            t
        };
        let mut m = frame_map(&t, &w[0], &[w[1], w[2], w[3]])?;
        let klein: Result<Vec<Vec3>> = w.iter().map(|x| lift_to_klein(&(m * x))).collect();
        let klein = klein?;
        if orient_det(&[klein[0], klein[1], klein[2], klein[3]]) < 0.0 {
            m = Isometry::reflect_y() * m;
        }
        let mut lifts = [Vec4::zeros(); 4];
        let mut vertices = [ProjPoint::new(Vec3::zeros()); 4];
        for k in 0..4 {
            let x = m * w[k];
            if x[0] <= 0.0 {
                return Err(Error::DegenerateSimplex);
            }
            let p = spatial(&x) / x[0];
            if ideal[k] {
                let q = p / p.norm();
                lifts[k] = klein_to_lift(&q);
                vertices[k] = ProjPoint { p: q, class: PointClass::Ideal };
            } else {
                lifts[k] = x / norm_sq(&x).sqrt();
                vertices[k] = ProjPoint { p, class: PointClass::Hyperideal };
            }
        }
        let mut faces = [Plane { n: Vec4::zeros() }; 4];
        for i in 0..4 {
            let n = m * normals[i];
            faces[i] = Plane { n: n / norm_sq(&n).sqrt() };
        }
        Ok(HyperidealSimplex { theta: *theta, ideal: *ideal, vertices, lifts, faces })
    }

    /// Simplex spanned by four given points, in their given position.
    pub fn from_vertices(points: &[ProjPoint; 4]) -> Result<Self> {
        let mut ideal = [false; 4];
        let mut lifts = [Vec4::zeros(); 4];
        for k in 0..4 {
            match points[k].class {
                PointClass::Finite => return Err(Error::DegenerateSimplex),
                PointClass::Ideal => ideal[k] = true,
                PointClass::Hyperideal => {}
            }
            lifts[k] = points[k].lift();
        }
        let ps = [points[0].p, points[1].p, points[2].p, points[3].p];
        let scale = ps.iter().map(|p| p.norm()).fold(1.0, f64::max);
        if orient_det(&ps).abs() < TOL_DEGENERATE * scale.powi(3) {
            return Err(Error::DegenerateSimplex);
        }
        let mut faces = [Plane { n: Vec4::zeros() }; 4];
        for i in 0..4 {
            let o: Vec<usize> = (0..4).filter(|&k| k != i).collect();
            let inside = klein_to_lift(&ps[i]);
            faces[i] = Plane::through(&lifts[o[0]], &lifts[o[1]], &lifts[o[2]], &inside)?;
        }
        for &(a, b) in EDGES.iter() {
            lifted_distance(&lifts[a], ideal[a], &lifts[b], ideal[b])?;
        }
        let mut theta = [0.0; 6];
        for k in 0..6 {
            let (i, j) = EDGES[opposite_edge(k)];
            let c = ip(&faces[i].n, &faces[j].n);
            if c.abs() >= 1.0 {
                return Err(Error::DegenerateSimplex);
            }
            theta[k] = c.acos();
        }
        Ok(HyperidealSimplex { theta, ideal, vertices: *points, lifts, faces })
    }

    /// Exterior angles measured from the planes through the vertices.
    pub fn measured_angles(&self) -> Result<[f64; 6]> {
        let mut faces = [Plane { n: Vec4::zeros() }; 4];
        for i in 0..4 {
            let o: Vec<usize> = (0..4).filter(|&k| k != i).collect();
            let inside = klein_to_lift(&self.vertices[i].p);
            faces[i] =
                Plane::through(&self.lifts[o[0]], &self.lifts[o[1]], &self.lifts[o[2]], &inside)?;
        }
        let mut out = [0.0; 6];
        for k in 0..6 {
            let (i, j) = EDGES[opposite_edge(k)];
            out[k] = ip(&faces[i].n, &faces[j].n).clamp(-1.0, 1.0).acos();
        }
        Ok(out)
    }

    pub fn n_ideal(&self) -> usize {
        self.ideal.iter().filter(|&&b| b).count()
    }

    pub fn truncate(&self) -> Result<TruncatedSimplex> {
        TruncatedSimplex::new(self)
    }

    pub fn volume(&self) -> Result<f64> {
        Ok(self.truncate()?.volume()?.value)
    }

    /// Raw edge lengths; `horoscales[v]` is the log of the scale applied to
    /// the default light-like lift at ideal vertex `v` (ignored otherwise).
    pub fn edge_lengths(&self, horoscales: &[f64; 4]) -> Result<EdgeLengthClass> {
        let mut x = self.lifts;
        for v in 0..4 {
            if self.ideal[v] {
                x[v] *= horoscales[v].exp();
            }
        }
        let mut raw = [0.0; 6];
        for (k, &(a, b)) in EDGES.iter().enumerate() {
            raw[k] = lifted_distance(&x[a], self.ideal[a], &x[b], self.ideal[b])?;
        }
        Ok(EdgeLengthClass { raw, ideal: self.ideal })
    }

    /// Gradient of the volume with respect to the exterior angles, `L / 2`.
    /// In interior angles `pi - theta` this is `-L / 2`.
    pub fn schlafli_gradient(&self, horoscales: &[f64; 4]) -> Result<[f64; 6]> {
        let l = self.edge_lengths(horoscales)?;
        Ok(l.raw.map(|x| 0.5 * x))
    }

    /// Hessian of the volume on the stratum, in the orthonormal basis
    /// returned by [`stratum_basis`].
    pub fn volume_hessian(&self) -> Result<StratumHessian> {
        stratum_hessian(&self.theta, &self.ideal, HESSIAN_STEP)
    }

    /// Upper triangle of the face-normal Gram matrix; determines the
    /// simplex up to isometry.
    pub fn isometry_invariants(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                out.push(ip(&self.faces[i].n, &self.faces[j].n));
            }
        }
        out
    }

    /// Apply an isometry, keeping the angle data.
    pub fn transformed(&self, g: &Isometry) -> Result<Self> {
        let mut s = self.clone();
        for k in 0..4 {
            let x = g.apply(&self.lifts[k]);
            let p = lift_to_klein(&x)?;
            if self.ideal[k] {
                let q = p / p.norm();
                s.vertices[k] = ProjPoint { p: q, class: PointClass::Ideal };
                s.lifts[k] = klein_to_lift(&q);
            } else {
                // no sign normalization: when the vertex crosses the plane at
                // infinity its lift changes chart but keeps its orientation
                s.vertices[k] = ProjPoint { p, class: PointClass::Hyperideal };
                s.lifts[k] = x / norm_sq(&x).sqrt();
            }
            s.faces[k] = g.apply_plane(&self.faces[k]);
        }
        Ok(s)
    }
}

/// Future time-like point strictly inside the truncated simplex: the sum
/// of the vertex lifts, with ideal lifts scaled so that each pairs to at
/// most `-2` with every hyperideal lift.
fn interior_point(w: &[Vec4; 4], ideal: &[bool; 4]) -> Result<Vec4> {
    let mut t = Vec4::zeros();
    for j in 0..4 {
        let mut c: f64 = 1.0;
        if ideal[j] {
            for k in 0..4 {
                if ideal[k] {
                    continue;
                }
                let q = -ip(&w[j], &w[k]);
                if !(q > 1e-300) {
                    return Err(Error::DegenerateSimplex);
                }
                c = c.max(2.0 / q);
            }
        }
        t += w[j] * c;
    }
    if !(norm_sq(&t) < 0.0) {
        return Err(Error::SolveDiverged("interior point is not time-like"));
    }
    Ok(t)
}

/// Orthonormal basis (columns) of the directions preserving the ideal
/// vertex sums.
pub fn stratum_basis(ideal: &[bool; 4]) -> DMatrix<f64> {
    let ids: Vec<usize> = (0..4).filter(|&v| ideal[v]).collect();
    if ids.is_empty() {
        return DMatrix::identity(6, 6);
    }
    let mut c = DMatrix::zeros(ids.len(), 6);
    for (r, &v) in ids.iter().enumerate() {
        for k in vertex_edges(v) {
            c[(r, k)] = 1.0;
        }
    }
    null_space(&c)
}

/// Orthonormal basis of the null space of `a`, columns ordered by the
/// eigen-decomposition of `a^T a`.
pub fn null_space(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.ncols();
    let ata = a.transpose() * a;
    let scale = ata.abs().max().max(1.0);
    let eig = SymmetricEigen::new(ata);
    let mut cols: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k].abs() < 1e-10 * scale).collect();
    cols.sort();
    let mut out = DMatrix::zeros(n, cols.len());
    for (c, &k) in cols.iter().enumerate() {
        let mut v = eig.eigenvectors.column(k).into_owned();
        // deterministic sign: first significant entry positive
        if let Some(x) = v.iter().find(|x| x.abs() > 1e-8) {
            if *x < 0.0 {
                v = -v;
            }
        }
        out.set_column(c, &v);
    }
    out
}

#[derive(Debug, Clone)]
pub struct StratumHessian {
    /// 6 x k orthonormal basis of the stratum tangent.
    pub basis: DMatrix<f64>,
    /// k x k Hessian in that basis (not symmetrized).
    pub h: DMatrix<f64>,
}

impl StratumHessian {
    pub fn symmetric(&self) -> DMatrix<f64> {
        (&self.h + self.h.transpose()) * 0.5
    }

    pub fn symmetry_defect(&self) -> f64 {
        (&self.h - self.h.transpose()).abs().max()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let e = SymmetricEigen::new(self.symmetric());
        let mut v: Vec<f64> = e.eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

pub fn stratum_hessian(theta: &[f64; 6], ideal: &[bool; 4], step: f64) -> Result<StratumHessian> {
    let basis = stratum_basis(ideal);
    let k = basis.ncols();
    let mut h = DMatrix::zeros(k, k);
    let zero = [0.0; 4];
    for j in 0..k {
        let mut tp = *theta;
        let mut tm = *theta;
        for e in 0..6 {
            tp[e] += step * basis[(e, j)];
            tm[e] -= step * basis[(e, j)];
        }
        let gp = HyperidealSimplex::from_angles(&tp, ideal)?.schlafli_gradient(&zero)?;
        let gm = HyperidealSimplex::from_angles(&tm, ideal)?.schlafli_gradient(&zero)?;
        for i in 0..k {
            let mut s = 0.0;
            for e in 0..6 {
                s += basis[(e, i)] * (gp[e] - gm[e]);
            }
            h[(i, j)] = s / (2.0 * step);
        }
    }
    Ok(StratumHessian { basis, h })
}

/// Jacobian `dL_i / d theta_j` of the edge lengths on the strictly
/// hyperideal stratum, by central differences.
pub fn length_jacobian(theta: &[f64; 6], step: f64) -> Result<DMatrix<f64>> {
    let ideal = [false; 4];
    let zero = [0.0; 4];
    let mut jm = DMatrix::zeros(6, 6);
    for j in 0..6 {
        let mut tp = *theta;
        let mut tm = *theta;
        tp[j] += step;
        tm[j] -= step;
        let lp = HyperidealSimplex::from_angles(&tp, &ideal)?.edge_lengths(&zero)?;
        let lm = HyperidealSimplex::from_angles(&tm, &ideal)?.edge_lengths(&zero)?;
        for i in 0..6 {
            jm[(i, j)] = (lp.raw[i] - lm.raw[i]) / (2.0 * step);
        }
    }
    Ok(jm)
}

/// Common exterior angle of the regular strictly hyperideal simplex with
/// edge length `l`.
pub fn regular_angle_for_length(l: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(Error::OutOfDomain("edge length must be positive"));
    }
    let ideal = [false; 4];
    let len = |t: f64| -> Result<f64> {
        Ok(HyperidealSimplex::from_angles(&[t; 6], &ideal)?.edge_lengths(&[0.0; 4])?.raw[0])
    };
    // length decreases from +inf at 2pi/3 to 0 at pi
    let (mut lo, mut hi) = (2.0 * PI / 3.0 + 1e-12, PI - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if len(mid)? > l {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Strictly hyperideal simplex with prescribed edge lengths, by damped
/// Newton iteration on the exterior angles.
pub fn simplex_from_lengths(lengths: &[f64; 6]) -> Result<HyperidealSimplex> {
    if lengths.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::OutOfDomain("edge lengths must be positive"));
    }
    let ideal = [false; 4];
    let zero = [0.0; 4];
    let mean = lengths.iter().sum::<f64>() / 6.0;
    let mut theta = [regular_angle_for_length(mean)?; 6];
    let resid = |th: &[f64; 6]| -> Option<DMatrix<f64>> {
        let s = HyperidealSimplex::from_angles(th, &ideal).ok()?;
        let l = s.edge_lengths(&zero).ok()?;
        Some(DMatrix::from_iterator(6, 1, (0..6).map(|k| l.raw[k] - lengths[k])))
    };
    let mut r = resid(&theta).ok_or(Error::SolveDiverged("initial guess"))?;
    for _ in 0..100 {
        if r.abs().max() < 1e-14 {
            break;
        }
        let jm = length_jacobian(&theta, 1e-7)?;
        let step = jm.lu().solve(&r).ok_or(Error::SolveDiverged("singular length Jacobian"))?;
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: [f64; 6] = core::array::from_fn(|k| theta[k] - alpha * step[k]);
            if let Some(rc) = resid(&cand) {
                if rc.norm() < r.norm() * (1.0 - 1e-4 * alpha) || rc.abs().max() < 1e-14 {
                    theta = cand;
                    r = rc;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if r.abs().max() > 1e-11 {
        return Err(Error::SolveDiverged("length inversion did not converge"));
    }
    HyperidealSimplex::from_angles(&theta, &ideal)
}

/// Compact hyperbolic triangle (Klein disk coordinates) with its outward
/// side normals in de Sitter space.
#[derive(Debug, Clone, PartialEq)]
pub struct DualTriangle {
    /// Unit space-like normals in R^3_1, side `i` opposite vertex `i`.
    pub normals: [Vector3<f64>; 3],
    /// Exterior angle at vertex `i`.
    pub exterior_angles: [f64; 3],
    /// Length of the dual edge between normals `j` and `k`, indexed by `i`.
    pub dual_lengths: [f64; 3],
}

fn ip3(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Side normals and dual edge lengths of a compact triangle in the disk.
pub fn dual_triangle(p: &[nalgebra::Vector2<f64>; 3]) -> Result<DualTriangle> {
    let lift = |q: &nalgebra::Vector2<f64>| Vector3::new(1.0, q.x, q.y);
    let x: [Vector3<f64>; 3] = core::array::from_fn(|i| lift(&p[i]));
    for q in p {
        if q.norm() >= 1.0 {
            return Err(Error::PointNotFinite);
        }
    }
    let area = (p[1] - p[0]).perp(&(p[2] - p[0]));
    if area.abs() < 1e-14 {
        return Err(Error::DegenerateConfiguration("collinear triangle"));
    }
    let mut normals = [Vector3::zeros(); 3];
    for i in 0..3 {
        let a = x[(i + 1) % 3];
        let b = x[(i + 2) % 3];
        // <n, y> = det[y, a, b]
        let c = a.cross(&b);
        let mut n = Vector3::new(-c[0], c[1], c[2]);
        let q = ip3(&n, &n);
        n /= q.sqrt();
        if ip3(&n, &x[i]) > 0.0 {
            n = -n;
        }
        normals[i] = n;
    }
    let mut exterior_angles = [0.0; 3];
    let mut dual_lengths = [0.0; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        // interior angle from the tangent directions at x_i
        let xi = x[i] / (-ip3(&x[i], &x[i])).sqrt();
        let tangent = |y: &Vector3<f64>| y + xi * ip3(&xi, y);
        let (tj, tk) = (tangent(&x[j]), tangent(&x[k]));
        let c = ip3(&tj, &tk) / (ip3(&tj, &tj) * ip3(&tk, &tk)).sqrt();
        exterior_angles[i] = PI - c.clamp(-1.0, 1.0).acos();
        // the dual edge between the sides meeting at x_i
        dual_lengths[i] = ip3(&normals[j], &normals[k]).clamp(-1.0, 1.0).acos();
    }
    Ok(DualTriangle { normals, exterior_angles, dual_lengths })
}


#[cfg(test)]
mod schlafli_tests {
    use super::*;

    fn fd_check(theta: [f64; 6], ideal: [bool; 4]) -> f64 {
        let s = HyperidealSimplex::from_angles(&theta, &ideal).unwrap();
        let g = s.schlafli_gradient(&[0.0; 4]).unwrap();
        let b = stratum_basis(&ideal);
        let h = 1e-4;
        let mut worst: f64 = 0.0;
        let mut gnorm: f64 = 0.0;
        for j in 0..b.ncols() {
            let gd: f64 = (0..6).map(|e| g[e] * b[(e, j)]).sum();
            gnorm = gnorm.max(gd.abs());
        }
        for j in 0..b.ncols() {
            let tp: [f64; 6] = core::array::from_fn(|e| theta[e] + h * b[(e, j)]);
            let tm: [f64; 6] = core::array::from_fn(|e| theta[e] - h * b[(e, j)]);
            let vp = HyperidealSimplex::from_angles(&tp, &ideal).unwrap().volume().unwrap();
            let vm = HyperidealSimplex::from_angles(&tm, &ideal).unwrap().volume().unwrap();
            let fd = (vp - vm) / (2.0 * h);
            let gd: f64 = (0..6).map(|e| g[e] * b[(e, j)]).sum();
            worst = worst.max((fd - gd).abs() / gnorm);
        }
        worst
    }

    #[test]
    fn schlafli_on_each_stratum() {
        assert!(fd_check([2.1, 2.2, 2.3, 2.0, 2.25, 2.15], [false; 4]) < 1e-6);
        let t = [2.0, 2.3, 2.0 * PI - 4.3, 2.4, 2.2, 2.5];
        assert!(fd_check(t, [true, false, false, false]) < 1e-6);
        // two ideal vertices 0, 1: sums over {01,02,03} and {01,12,13}
        let t = [2.2, 2.0, 2.0 * PI - 4.2, 2.1, 2.0 * PI - 4.3, 2.6];
        assert!(fd_check(t, [true, true, false, false]) < 1e-6);
        let a = 2.0 * PI / 3.0;
        assert!(fd_check([a + 0.1, a - 0.2, a + 0.1, a + 0.1, a - 0.2, a + 0.1], [true; 4]) < 1e-6);
    }
}
