use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Half-edge structure of a cellulation of the sphere.
///
/// Faces are vertex cycles, oriented consistently (counter-clockwise seen
/// from outside for a realized polyhedron). Half-edge `h` runs from
/// `origin[h]` to `origin[next[h]]` along face `face[h]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cellulation {
    n_vertices: usize,
    faces: Vec<Vec<usize>>,
    origin: Vec<usize>,
    twin: Vec<usize>,
    next: Vec<usize>,
    face: Vec<usize>,
    edge_of: Vec<usize>,
    edges: Vec<(usize, usize)>,
    edge_half: Vec<usize>,
    vertex_half: Vec<usize>,
    ideal: Vec<bool>,
}

/// Validate a face list and build the half-edge structure. `ideal` lists
/// the designated ideal vertices.
pub fn build_cellulation(n_vertices: usize, faces: &[Vec<usize>], ideal: &[usize]) -> Result<Cellulation> {
    let mut origin = Vec::new();
    let mut next = Vec::new();
    let mut face = Vec::new();
    let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (f, cyc) in faces.iter().enumerate() {
        if cyc.len() < 3 {
            return Err(Error::InvalidFace(format!("face {f} has fewer than 3 vertices")));
        }
        for &v in cyc {
            if v >= n_vertices {
                return Err(Error::InvalidFace(format!("face {f} uses unknown vertex {v}")));
            }
        }
        let mut seen = cyc.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != cyc.len() {
            return Err(Error::InvalidFace(format!("face {f} repeats a vertex")));
        }
        let base = origin.len();
        let k = cyc.len();
        for i in 0..k {
            let (a, b) = (cyc[i], cyc[(i + 1) % k]);
            if directed.insert((a, b), base + i).is_some() {
                let (u, v) = if a < b { (a, b) } else { (b, a) };
                return Err(Error::NonManifoldEdge(u, v));
            }
            origin.push(a);
            next.push(base + (i + 1) % k);
            face.push(f);
        }
    }
    let nh = origin.len();
    let mut twin = vec![usize::MAX; nh];
    let mut edges = Vec::new();
    let mut edge_half = Vec::new();
    let mut edge_of = vec![usize::MAX; nh];
    let mut edge_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&(a, b), &h) in directed.iter() {
        let Some(&t) = directed.get(&(b, a)) else {
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            return Err(Error::NonManifoldEdge(u, v));
        };
        twin[h] = t;
        if a < b {
            edge_index.insert((a, b), edges.len());
            edge_of[h] = edges.len();
            edge_of[t] = edges.len();
            edge_half.push(h);
            edges.push((a, b));
        }
    }
    for h in 0..nh {
        if face[h] == face[twin[h]] {
            let (a, b) = (origin[h], origin[twin[h]]);
            return Err(Error::NonManifoldEdge(a.min(b), a.max(b)));
        }
    }
    let mut vertex_half = vec![usize::MAX; n_vertices];
    for h in 0..nh {
        if vertex_half[origin[h]] == usize::MAX {
            vertex_half[origin[h]] = h;
        }
    }
    if let Some(v) = vertex_half.iter().position(|&h| h == usize::MAX) {
        return Err(Error::InvalidFace(format!("vertex {v} belongs to no face")));
    }
    let mut out_count = vec![0usize; n_vertices];
    for h in 0..nh {
        out_count[origin[h]] += 1;
    }
    let sigma = Cellulation {
        n_vertices,
        faces: faces.to_vec(),
        origin,
        twin,
        next,
        face,
        edge_of,
        edges,
        edge_half,
        vertex_half,
        ideal: {
            let mut t = vec![false; n_vertices];
            for &v in ideal {
                if v >= n_vertices {
                    return Err(Error::InvalidFace(format!("ideal vertex {v} does not exist")));
                }
                t[v] = true;
            }
            t
        },
    };
    for v in 0..n_vertices {
        if sigma.outgoing(v).len() != out_count[v] {
            return Err(Error::InvalidFace(format!("neighbourhood of vertex {v} is not a disk")));
        }
    }
    let chi = n_vertices as i64 - sigma.edges.len() as i64 + faces.len() as i64;
    if chi != 2 || !sigma.connected() {
        return Err(Error::NotASphere(chi));
    }
    Ok(sigma)
}

impl Cellulation {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.n_edges() as i64 + self.n_faces() as i64
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    /// Edges as `(min, max)` vertex pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).ok()
    }

    pub fn ideal(&self) -> &[bool] {
        &self.ideal
    }

    pub fn is_ideal(&self, v: usize) -> bool {
        self.ideal[v]
    }

    pub fn with_ideal(&self, ideal: &[usize]) -> Result<Cellulation> {
        build_cellulation(self.n_vertices, &self.faces, ideal)
    }

    /// The two faces of edge `e`: left of `min -> max`, then right.
    pub fn edge_faces(&self, e: usize) -> (usize, usize) {
        let h = self.edge_half[e];
        (self.face[h], self.face[self.twin[h]])
    }

    /// Outgoing half-edges of `v` in rotation order.
    fn outgoing(&self, v: usize) -> Vec<usize> {
        let start = self.vertex_half[v];
        let mut out = vec![start];
        let mut h = self.next[self.twin[start]];
        while h != start {
            out.push(h);
            if out.len() > self.origin.len() {
                break;
            }
            h = self.next[self.twin[h]];
        }
        out
    }

    /// Neighbours of `v` in cyclic order.
    pub fn vertex_neighbors(&self, v: usize) -> Vec<usize> {
        self.outgoing(v).iter().map(|&h| self.origin[self.twin[h]]).collect()
    }

    /// Edges at `v` in cyclic order.
    pub fn vertex_edges(&self, v: usize) -> Vec<usize> {
        self.outgoing(v).iter().map(|&h| self.edge_of[h]).collect()
    }

    /// Faces around `v` in cyclic order.
    pub fn vertex_faces(&self, v: usize) -> Vec<usize> {
        self.outgoing(v).iter().map(|&h| self.face[h]).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.outgoing(v).len()
    }

    pub fn is_triangulated(&self) -> bool {
        self.faces.iter().all(|f| f.len() == 3)
    }

    fn connected(&self) -> bool {
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in self.vertex_neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn dual_graph(&self) -> DualGraph {
        let mut adj = vec![Vec::new(); self.n_faces()];
        let mut arcs = Vec::with_capacity(self.n_edges());
        for e in 0..self.n_edges() {
            let (f, g) = self.edge_faces(e);
            arcs.push((f, g));
            adj[f].push((g, e));
            adj[g].push((f, e));
        }
        DualGraph { arcs, adj }
    }
}

/// One node per face, one arc per edge (arc index = edge index).
#[derive(Debug, Clone, PartialEq)]
pub struct DualGraph {
    pub arcs: Vec<(usize, usize)>,
    /// `(neighbour, arc)` lists.
    pub adj: Vec<Vec<(usize, usize)>>,
}

impl DualGraph {
    pub fn n_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn n_arcs(&self) -> usize {
        self.arcs.len()
    }
}
