use alloc::vec::Vec;

use nalgebra::Matrix4;
#[allow(unused_imports)]
use num_traits::Float;

use super::develop::{face_matching, local_index};
use super::newton::ShearedStructure;
use crate::combinatorics::ConeTriangulation;
use crate::error::Result;
use crate::mink::ip;
use crate::simplex::{edge_index, HyperidealSimplex};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactnessResiduals {
    /// Largest disagreement of shared-face shapes and interior edge lengths.
    pub length_mismatch: f64,
    /// Largest shear along an interior edge with two ideal endpoints.
    pub shear: f64,
}

/// Horosphere-independent shape parameters of the triangle on local
/// vertices `v` of a simplex.
fn face_moduli(s: &HyperidealSimplex, l: &[f64; 6], v: [usize; 3]) -> Vec<f64> {
    let len = |a: usize, b: usize| l[edge_index(v[a], v[b])];
    let ideal: Vec<usize> = (0..3).filter(|&i| s.ideal[v[i]]).collect();
    match ideal.len() {
        0 => alloc::vec![len(0, 1), len(0, 2), len(1, 2)],
        1 => {
            let i = ideal[0];
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let (j, k) = (j.min(k), j.max(k));
            alloc::vec![len(j, k), len(i, j) - len(i, k)]
        }
        2 => {
            let k = (0..3).find(|x| !ideal.contains(x)).unwrap();
            alloc::vec![len(ideal[0], k) + len(ideal[1], k) - len(ideal[0], ideal[1])]
        }
        _ => Vec::new(),
    }
}

/// Simplices around the spoke `apex - v`, in cyclic order, each with the
/// two other vertices `(c_j, c_{j+1})`.
fn spoke_fan(cone: &ConeTriangulation, v: usize) -> Vec<(usize, usize, usize)> {
    let mut tris: Vec<(usize, usize, usize)> = Vec::new();
    for (s, sv) in cone.simplices.iter().enumerate() {
        let t = [sv[1], sv[2], sv[3]];
        if let Some(i) = t.iter().position(|&x| x == v) {
            tris.push((s, t[(i + 1) % 3], t[(i + 2) % 3]));
        }
    }
    let mut out = Vec::with_capacity(tris.len());
    if tris.is_empty() {
        return out;
    }
    let mut cur = tris[0];
    for _ in 0..tris.len() {
        out.push(cur);
        match tris.iter().find(|t| t.1 == cur.2) {
            Some(&n) => cur = n,
            None => break,
        }
    }
    out
}

/// Shear along the spoke `apex - v` (both ideal) from the horosphere
/// bookkeeping: the foot of each side face on the spoke moves by half the
/// difference of its two other lengths.
pub fn shear_by_lengths(cone: &ConeTriangulation, simplices: &[HyperidealSimplex], v: usize) -> Result<f64> {
    let a = cone.apex;
    let mut total = 0.0;
    for (s, c0, c1) in spoke_fan(cone, v) {
        let l = simplices[s].edge_lengths(&[0.0; 4])?.raw;
        let sv = &cone.simplices[s];
        let li = |x: usize, y: usize| l[edge_index(local_index(sv, x), local_index(sv, y))];
        total += 0.5 * ((li(a, c1) - li(v, c1)) - (li(a, c0) - li(v, c0)));
    }
    Ok(total)
}

/// Shear along the spoke `apex - v` (both ideal) as the translation part of
/// the holonomy around it: glue the fan face by face and compare the
/// horosphere at the apex before and after.
pub fn shear_by_holonomy(cone: &ConeTriangulation, simplices: &[HyperidealSimplex], v: usize) -> Result<f64> {
    let a = cone.apex;
    let fan = spoke_fan(cone, v);
    if fan.is_empty() {
        return Ok(0.0);
    }
    let mut g = Matrix4::identity();
    for j in 0..fan.len() {
        let (s, _, c1) = fan[j];
        let (t, _, _) = fan[(j + 1) % fan.len()];
        let verts = [a, v, c1];
        let sv = verts.map(|x| local_index(&cone.simplices[s], x));
        let tv = verts.map(|x| local_index(&cone.simplices[t], x));
        g *= face_matching(&simplices[t], tv, &simplices[s], sv)?;
    }
    let s0 = fan[0].0;
    let ua = simplices[s0].lifts[local_index(&cone.simplices[s0], a)];
    let uv = simplices[s0].lifts[local_index(&cone.simplices[s0], v)];
    let lam = ip(&(g * ua), &uv) / ip(&ua, &uv);
    Ok(lam.ln())
}

pub fn exactness_residuals(cone: &ConeTriangulation, x: &ShearedStructure) -> Result<ExactnessResiduals> {
    let simplices = x.simplices()?;
    let lengths: Vec<[f64; 6]> =
        simplices.iter().map(|s| s.edge_lengths(&[0.0; 4]).map(|l| l.raw)).collect::<Result<_>>()?;
    let mut length_mismatch: f64 = 0.0;
    for f in &cone.interior_faces {
        let te = cone.tri_edges[f.edge];
        let verts = [cone.apex, te.a, te.b];
        let (s, t) = f.simplices;
        let ms = face_moduli(&simplices[s], &lengths[s], verts.map(|v| local_index(&cone.simplices[s], v)));
        let mt = face_moduli(&simplices[t], &lengths[t], verts.map(|v| local_index(&cone.simplices[t], v)));
        for (a, b) in ms.iter().zip(&mt) {
            length_mismatch = length_mismatch.max((a - b).abs());
        }
    }
    let inc = cone.interior_incidence();
    let mut shear: f64 = 0.0;
    for (i, &v) in cone.interior_edges.iter().enumerate() {
        let a_ideal = x.ideal[inc[i][0].0][0];
        let v_ideal = x.ideal[inc[i][0].0][local_index(&cone.simplices[inc[i][0].0], v)];
        if !a_ideal && !v_ideal {
            let ls: Vec<f64> = inc[i].iter().map(|&(s, k)| lengths[s][k]).collect();
            let hi = ls.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = ls.iter().copied().fold(f64::INFINITY, f64::min);
            length_mismatch = length_mismatch.max(hi - lo);
        }
        if a_ideal && v_ideal {
            shear = shear.max(shear_by_lengths(cone, &simplices, v)?.abs());
        }
    }
    Ok(ExactnessResiduals { length_mismatch, shear })
}
