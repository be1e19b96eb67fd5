use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::Matrix4;
#[allow(unused_imports)]
use num_traits::Float;

use super::newton::ShearedStructure;
use crate::combinatorics::{Cellulation, ConeTriangulation};
use crate::error::{Error, Result};
use crate::mink::{
    ip, klein_to_lift, lift_to_klein, lorentz_cross, norm_sq, Isometry, Plane, PointClass,
    ProjPoint, Vec3, Vec4,
};
use crate::simplex::{frame_map, HyperidealSimplex};

/// Basis `[m_0, m_1, m_2, n]` attached to a triangular face: `m_k` is the
/// outward unit normal, inside the face plane, of the side opposite the
/// `k`-th vertex, and `n` is the face normal. It does not depend on the
/// scale of the vertex lifts.
fn face_basis(p: &[Vec4; 3], n: &Vec4, flip: bool) -> Result<Matrix4<f64>> {
    let mut m = Matrix4::zeros();
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let mut v = lorentz_cross(&p[i], &p[j], n);
        let q = norm_sq(&v);
        if !(q > 0.0) {
            return Err(Error::DegenerateSimplex);
        }
        v /= q.sqrt();
        if ip(&v, &p[k]) > 0.0 {
            v = -v;
        }
        m.set_column(k, &v);
    }
    m.set_column(3, &if flip { -n } else { *n });
    Ok(m)
}

/// Isometry taking the face of `src` spanned by its local vertices `sv` onto
/// the face of `dst` spanned by `dv` (same order), with the two simplices on
/// opposite sides.
pub(crate) fn face_matching(
    src: &HyperidealSimplex,
    sv: [usize; 3],
    dst: &HyperidealSimplex,
    dv: [usize; 3],
) -> Result<Matrix4<f64>> {
    let opp = |v: [usize; 3]| (0..4).find(|k| !v.contains(k)).unwrap();
    let ps = [src.lifts[sv[0]], src.lifts[sv[1]], src.lifts[sv[2]]];
    let pd = [dst.lifts[dv[0]], dst.lifts[dv[1]], dst.lifts[dv[2]]];
    let s = face_basis(&ps, &src.faces[opp(sv)].n, false)?;
    let t = face_basis(&pd, &dst.faces[opp(dv)].n, true)?;
    let inv = s.try_inverse().ok_or(Error::DegenerateSimplex)?;
    Ok(t * inv)
}

pub(crate) fn local_index(simplex: &[usize; 4], v: usize) -> usize {
    simplex.iter().position(|&x| x == v).unwrap()
}

/// Place every simplex by gluing across interior faces. Returns the
/// placement of each simplex and the largest disagreement between
/// placements of the same vertex.
pub(crate) fn glue(
    cone: &ConeTriangulation,
    simplices: &[HyperidealSimplex],
) -> Result<(Vec<Matrix4<f64>>, Vec<Vec4>, f64)> {
    let ns = simplices.len();
    let mut place: Vec<Option<Matrix4<f64>>> = vec![None; ns];
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ns];
    for f in &cone.interior_faces {
        adj[f.simplices.0].push((f.simplices.1, f.edge));
        adj[f.simplices.1].push((f.simplices.0, f.edge));
    }
    let mut pos: Vec<Option<Vec4>> = vec![None; cone.n_vertices];
    let mut mismatch: f64 = 0.0;
    let mut record = |g: &Matrix4<f64>, s: usize, pos: &mut Vec<Option<Vec4>>| -> Result<()> {
        for i in 0..4 {
            let v = cone.simplices[s][i];
            let x = g * simplices[s].lifts[i];
            match pos[v] {
                None => pos[v] = Some(x),
                Some(y) => {
                    let a = lift_to_klein(&x)?;
                    let b = lift_to_klein(&y)?;
                    mismatch = mismatch.max((a - b).norm() / a.norm().max(1.0));
                }
            }
        }
        Ok(())
    };
    if ns == 0 {
        return Ok((Vec::new(), Vec::new(), 0.0));
    }
    place[0] = Some(Matrix4::identity());
    record(&Matrix4::identity(), 0, &mut pos)?;
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let gs = place[s].unwrap();
        for &(t, e) in &adj[s] {
            if place[t].is_some() {
                continue;
            }
            let te = cone.tri_edges[e];
            let verts = [cone.apex, te.a, te.b];
            let sv = verts.map(|v| local_index(&cone.simplices[s], v));
            let tv = verts.map(|v| local_index(&cone.simplices[t], v));
            let g = gs * face_matching(&simplices[t], tv, &simplices[s], sv)?;
            record(&g, t, &mut pos)?;
            place[t] = Some(g);
            queue.push_back(t);
        }
    }
    let placed: Vec<Matrix4<f64>> = place.into_iter().map(|p| p.ok_or(Error::DegenerateSimplex)).collect::<Result<_>>()?;
    let pos: Vec<Vec4> = pos.into_iter().map(|p| p.ok_or(Error::DegenerateSimplex)).collect::<Result<_>>()?;
    Ok((placed, pos, mismatch))
}

/// Geometry of a developed polyhedron.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    pub vertices: Vec<ProjPoint>,
    /// Outward face planes, one per face of the cellulation.
    pub faces: Vec<Plane>,
    /// Measured exterior dihedral angles, one per edge of the cellulation.
    pub angles: Vec<f64>,
    pub gluing_mismatch: f64,
    /// Largest distance of a vertex from the plane of a face containing it.
    pub coplanarity: f64,
    /// Largest signed value of a vertex against a face plane not containing
    /// it (negative for a strictly convex polyhedron).
    pub convexity: f64,
}

/// Point inside both the ball and the polyhedron: the mean of the midpoints
/// of the edge chords.
fn inner_point(sigma: &Cellulation, p: &[Vec3]) -> Vec3 {
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

pub(crate) fn develop_polyhedron(
    sigma: &Cellulation,
    cone: &ConeTriangulation,
    x: &ShearedStructure,
    tol: f64,
) -> Result<Polyhedron> {
    let simplices = x.simplices()?;
    let (_, lifts, mismatch) = glue(cone, &simplices)?;
    if mismatch > tol {
        return Err(Error::GluingMismatch(mismatch));
    }
    let p0: Vec<Vec3> = lifts.iter().map(lift_to_klein).collect::<Result<_>>()?;
    let t = klein_to_lift(&inner_point(sigma, &p0));
    let rest: Vec<Vec4> = lifts[1..].to_vec();
    let g = frame_map(&t, &lifts[0], &rest)?;
    let iso = Isometry { m: g };
    let mut vertices = Vec::with_capacity(lifts.len());
    for (v, x) in lifts.iter().enumerate() {
        let p = lift_to_klein(&iso.apply(x))?;
        vertices.push(if sigma.is_ideal(v) {
            ProjPoint { p: p / p.norm(), class: PointClass::Ideal }
        } else {
            ProjPoint { p, class: PointClass::Hyperideal }
        });
    }
    let pts: Vec<Vec3> = vertices.iter().map(|v| v.p).collect();
    let inside = klein_to_lift(&inner_point(sigma, &pts));
    let mut faces = Vec::with_capacity(sigma.n_faces());
    let mut coplanarity: f64 = 0.0;
    let mut convexity = f64::NEG_INFINITY;
    for f in 0..sigma.n_faces() {
        let cyc = sigma.face(f);
        let k = cyc.len();
        let pick = [cyc[0], cyc[k / 3], cyc[(2 * k) / 3]];
        let l = pick.map(|v| klein_to_lift(&pts[v]));
        let plane = Plane::through(&l[0], &l[1], &l[2], &inside)?;
        for v in 0..pts.len() {
            let s = plane.side(&pts[v]) / (1.0 + pts[v].norm());
            if cyc.contains(&v) {
                coplanarity = coplanarity.max(s.abs());
            } else {
                convexity = convexity.max(s);
            }
        }
        faces.push(plane);
    }
    let angles = (0..sigma.n_edges())
        .map(|e| {
            let (f, g) = sigma.edge_faces(e);
            ip(&faces[f].n, &faces[g].n).clamp(-1.0, 1.0).acos()
        })
        .collect();
    Ok(Polyhedron { vertices, faces, angles, gluing_mismatch: mismatch, coplanarity, convexity })
}
