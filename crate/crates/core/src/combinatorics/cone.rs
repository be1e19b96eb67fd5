use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::cellulation::Cellulation;
use crate::error::Result;

/// An edge of the triangulated boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriEdge {
    pub a: usize,
    pub b: usize,
    /// Edge of the cellulation, or `None` for an added diagonal.
    pub sigma_edge: Option<usize>,
}

/// Where a local simplex edge lives in the complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSlot {
    /// Boundary edge (index into `tri_edges`).
    Boundary(usize),
    /// Interior edge joining the apex to the given vertex.
    Interior(usize),
}

/// A face shared by two simplices: apex plus the boundary edge `edge`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorFace {
    pub edge: usize,
    pub simplices: (usize, usize),
}

/// Cone of the boundary triangulation from the apex vertex.
///
/// Simplex `s` has local vertices `(apex, a, b, c)` where `(a, b, c)` is a
/// boundary triangle in its ccw orientation; local edge `k` follows the
/// order `01, 02, 03, 12, 13, 23`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeTriangulation {
    pub apex: usize,
    pub n_vertices: usize,
    pub triangles: Vec<[usize; 3]>,
    pub triangle_face: Vec<usize>,
    pub tri_edges: Vec<TriEdge>,
    pub simplices: Vec<[usize; 4]>,
    pub slots: Vec<[EdgeSlot; 6]>,
    pub interior_edges: Vec<usize>,
    pub interior_faces: Vec<InteriorFace>,
    /// Boundary triangles through the apex, which are faces of no simplex.
    pub apex_triangles: Vec<usize>,
}

/// Fan-triangulate each face (from the apex where it occurs, otherwise
/// from the face's lowest vertex) and cone from the apex (vertex 0).
pub fn cone_triangulation(sigma: &Cellulation) -> Result<ConeTriangulation> {
    let apex = 0usize;
    let mut triangles = Vec::new();
    let mut triangle_face = Vec::new();
    for (f, cyc) in sigma.faces().iter().enumerate() {
        let k = cyc.len();
        let start = if let Some(p) = cyc.iter().position(|&v| v == apex) {
            p
        } else {
            (0..k).min_by_key(|&i| cyc[i]).unwrap()
        };
        for i in 1..k - 1 {
            triangles.push([cyc[start], cyc[(start + i) % k], cyc[(start + i + 1) % k]]);
            triangle_face.push(f);
        }
    }
    let mut edge_map: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut tri_edges = Vec::new();
    let mut edge_tris: Vec<Vec<usize>> = Vec::new();
    for (t, tri) in triangles.iter().enumerate() {
        for i in 0..3 {
            let (a, b) = (tri[i], tri[(i + 1) % 3]);
            let key = (a.min(b), a.max(b));
            let idx = *edge_map.entry(key).or_insert_with(|| {
                tri_edges.push(TriEdge { a: key.0, b: key.1, sigma_edge: sigma.edge(key.0, key.1) });
                edge_tris.push(Vec::new());
                tri_edges.len() - 1
            });
            edge_tris[idx].push(t);
        }
    }
    let mut adjacent = vec![false; sigma.n_vertices()];
    adjacent[apex] = true;
    for e in &tri_edges {
        if e.a == apex {
            adjacent[e.b] = true;
        }
    }
    let interior_edges: Vec<usize> = (0..sigma.n_vertices()).filter(|&v| !adjacent[v]).collect();
    let mut simplices = Vec::new();
    let mut slots = Vec::new();
    let mut tet_of_tri = vec![usize::MAX; triangles.len()];
    let mut apex_triangles = Vec::new();
    for (t, tri) in triangles.iter().enumerate() {
        if tri.contains(&apex) {
            apex_triangles.push(t);
            continue;
        }
        let s = [apex, tri[0], tri[1], tri[2]];
        let bedge = |a: usize, b: usize| EdgeSlot::Boundary(edge_map[&(a.min(b), a.max(b))]);
        let spoke = |v: usize| match edge_map.get(&(apex.min(v), apex.max(v))) {
            Some(&e) => EdgeSlot::Boundary(e),
            None => EdgeSlot::Interior(v),
        };
        slots.push([
            spoke(s[1]),
            spoke(s[2]),
            spoke(s[3]),
            bedge(s[1], s[2]),
            bedge(s[1], s[3]),
            bedge(s[2], s[3]),
        ]);
        tet_of_tri[t] = simplices.len();
        simplices.push(s);
    }
    let mut interior_faces = Vec::new();
    for (e, ts) in edge_tris.iter().enumerate() {
        let te = tri_edges[e];
        if te.a == apex || te.b == apex {
            continue;
        }
        let (s1, s2) = (tet_of_tri[ts[0]], tet_of_tri[ts[1]]);
        if s1 != usize::MAX && s2 != usize::MAX {
            interior_faces.push(InteriorFace { edge: e, simplices: (s1, s2) });
        }
    }
    Ok(ConeTriangulation {
        apex,
        n_vertices: sigma.n_vertices(),
        triangles,
        triangle_face,
        tri_edges,
        simplices,
        slots,
        interior_edges,
        interior_faces,
        apex_triangles,
    })
}

impl ConeTriangulation {
    pub fn n_simplices(&self) -> usize {
        self.simplices.len()
    }

    /// Local edges `(simplex, k)` sitting on each boundary edge.
    pub fn boundary_incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.tri_edges.len()];
        for (s, sl) in self.slots.iter().enumerate() {
            for (k, slot) in sl.iter().enumerate() {
                if let EdgeSlot::Boundary(e) = slot {
                    out[*e].push((s, k));
                }
            }
        }
        out
    }

    /// Local edges `(simplex, k)` sitting on each interior edge, indexed like
    /// `interior_edges`.
    pub fn interior_incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.interior_edges.len()];
        for (s, sl) in self.slots.iter().enumerate() {
            for (k, slot) in sl.iter().enumerate() {
                if let EdgeSlot::Interior(v) = slot {
                    let i = self.interior_edges.binary_search(v).unwrap();
                    out[i].push((s, k));
                }
            }
        }
        out
    }

    /// Local corners `(simplex, local vertex)` at each vertex of the complex.
    pub fn vertex_incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.n_vertices];
        for (s, vs) in self.simplices.iter().enumerate() {
            for (i, &v) in vs.iter().enumerate() {
                out[v].push((s, i));
            }
        }
        out
    }
}
