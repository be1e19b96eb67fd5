use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use super::cellulation::{Cellulation, DualGraph};

/// Tolerance on angle-sum comparisons.
pub const TOL_ANGLE: f64 = 1e-9;

/// A dual cycle or path violating one of the angle conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// Dual nodes (faces) in order; for a cycle the first node is not repeated.
    pub nodes: Vec<usize>,
    /// Dual arcs (edges) in order.
    pub arcs: Vec<usize>,
    pub weight: f64,
    /// For cycles: whether the cycle is a vertex link. For paths: the vertex
    /// whose link the path leaves and rejoins.
    pub vertex: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitVerdict {
    pub ok: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathVerdict {
    pub ok: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    pub reasons: Vec<String>,
    pub circuits: CircuitVerdict,
    pub paths: PathVerdict,
}

#[derive(Copy, Clone, PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Dijkstra on the dual graph. Arcs in `banned_arcs` and nodes in
/// `banned_nodes` are skipped. Returns the path `(nodes, arcs, weight)`.
fn shortest_path(
    g: &DualGraph,
    w: &[f64],
    from: usize,
    to: usize,
    banned_arcs: &[bool],
    banned_nodes: &[bool],
) -> Option<(Vec<usize>, Vec<usize>, f64)> {
    let n = g.n_nodes();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[from] = 0.0;
    heap.push(Item(0.0, from));
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if u == to {
            break;
        }
        for &(v, a) in &g.adj[u] {
            if banned_arcs[a] || banned_nodes[v] {
                continue;
            }
            let nd = d + w[a];
            if nd < dist[v] {
                dist[v] = nd;
                prev[v] = Some((u, a));
                heap.push(Item(nd, v));
            }
        }
    }
    if !dist[to].is_finite() {
        return None;
    }
    let mut nodes = vec![to];
    let mut arcs = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, a) = prev[cur]?;
        arcs.push(a);
        nodes.push(p);
        cur = p;
    }
    nodes.reverse();
    arcs.reverse();
    Some((nodes, arcs, dist[to]))
}

/// Up to `k` shortest simple paths `from -> to` avoiding `banned` (Yen).
fn k_shortest_paths(
    g: &DualGraph,
    w: &[f64],
    from: usize,
    to: usize,
    banned: &[bool],
    k: usize,
) -> Vec<(Vec<usize>, Vec<usize>, f64)> {
    let no_nodes = vec![false; g.n_nodes()];
    let Some(first) = shortest_path(g, w, from, to, banned, &no_nodes) else {
        return Vec::new();
    };
    let mut found = vec![first];
    let mut candidates: Vec<(Vec<usize>, Vec<usize>, f64)> = Vec::new();
    while found.len() < k {
        let last = found.last().unwrap().clone();
        for i in 0..last.1.len() {
            let spur = last.0[i];
            let root_nodes = &last.0[..=i];
            let root_arcs = &last.1[..i];
            let mut ban_a = banned.to_vec();
            for p in &found {
                if p.0.len() > i && p.0[..=i] == *root_nodes && p.1.len() > i {
                    ban_a[p.1[i]] = true;
                }
            }
            let mut ban_n = vec![false; g.n_nodes()];
            for &v in &root_nodes[..i] {
                ban_n[v] = true;
            }
            if let Some((sn, sa, sw)) = shortest_path(g, w, spur, to, &ban_a, &ban_n) {
                let mut nodes = root_nodes.to_vec();
                nodes.extend_from_slice(&sn[1..]);
                let mut arcs = root_arcs.to_vec();
                arcs.extend_from_slice(&sa);
                let weight = root_arcs.iter().map(|&a| w[a]).sum::<f64>() + sw;
                if !candidates.iter().any(|c| c.1 == arcs) && !found.iter().any(|c| c.1 == arcs) {
                    candidates.push((nodes, arcs, weight));
                }
            }
        }
        if candidates.is_empty() {
            break;
        }
        let best = (0..candidates.len())
            .min_by(|&a, &b| candidates[a].2.total_cmp(&candidates[b].2))
            .unwrap();
        found.push(candidates.swap_remove(best));
    }
    found
}

/// The vertex whose link is the given arc set, if any.
pub fn cycle_is_elementary(sigma: &Cellulation, arcs: &[usize]) -> Option<usize> {
    let (a, b) = sigma.edges()[*arcs.first()?];
    [a, b].into_iter().find(|&v| {
        arcs.len() == sigma.degree(v)
            && arcs.iter().all(|&e| {
                let (x, y) = sigma.edges()[e];
                x == v || y == v
            })
    })
}

/// Vertex sums against the ideal set: `2 pi` exactly at ideal vertices,
/// strictly more elsewhere. Exterior angles must lie in `(0, pi)`.
pub fn check_vertex_sums(sigma: &Cellulation, w: &[f64]) -> Vec<String> {
    let mut reasons = Vec::new();
    if w.len() != sigma.n_edges() {
        reasons.push(format!("expected {} edge angles, got {}", sigma.n_edges(), w.len()));
        return reasons;
    }
    for (e, &x) in w.iter().enumerate() {
        if !(x > 0.0 && x < PI) || !x.is_finite() {
            let (a, b) = sigma.edges()[e];
            reasons.push(format!("exterior angle of edge {a}-{b} is {x}, outside (0, pi)"));
        }
    }
    for v in 0..sigma.n_vertices() {
        let s: f64 = sigma.vertex_edges(v).iter().map(|&e| w[e]).sum();
        if sigma.is_ideal(v) {
            if (s - 2.0 * PI).abs() > TOL_ANGLE {
                reasons.push(format!("ideal vertex {v} has angle sum {s}, expected 2 pi"));
            }
        } else if s <= 2.0 * PI + TOL_ANGLE {
            reasons.push(format!("vertex {v} has angle sum {s}, must exceed 2 pi"));
        }
    }
    reasons
}

/// Every simple dual cycle has weight at least `2 pi`, strictly more when it
/// is not a vertex link.
pub fn check_circuits(sigma: &Cellulation, w: &[f64]) -> CircuitVerdict {
    let g = sigma.dual_graph();
    let mut witness: Option<Witness> = None;
    let mut consider = |wit: Witness| {
        if witness.as_ref().map_or(true, |x| wit.weight < x.weight) {
            witness = Some(wit);
        }
    };
    for v in 0..sigma.n_vertices() {
        let arcs = sigma.vertex_edges(v);
        let weight: f64 = arcs.iter().map(|&e| w[e]).sum();
        if weight < 2.0 * PI - TOL_ANGLE {
            consider(Witness { nodes: sigma.vertex_faces(v), arcs, weight, vertex: Some(v) });
        }
    }
    for a in 0..g.n_arcs() {
        let (f, h) = g.arcs[a];
        let mut banned = vec![false; g.n_arcs()];
        banned[a] = true;
        for (nodes, mut arcs, pw) in k_shortest_paths(&g, w, h, f, &banned, 3) {
            let weight = pw + w[a];
            if weight > 2.0 * PI + TOL_ANGLE {
                break;
            }
            arcs.insert(0, a);
            let mut cyc_nodes = vec![f];
            cyc_nodes.extend_from_slice(&nodes[..nodes.len() - 1]);
            let elem = cycle_is_elementary(sigma, &arcs);
            if elem.is_none() || weight < 2.0 * PI - TOL_ANGLE {
                consider(Witness { nodes: cyc_nodes, arcs, weight, vertex: elem });
            }
        }
    }
    CircuitVerdict { ok: witness.is_none(), witness }
}

/// Every dual path that starts and ends on the link of a vertex, but is not
/// contained in it, has weight greater than `pi`.
pub fn check_simple_paths(sigma: &Cellulation, w: &[f64]) -> PathVerdict {
    let g = sigma.dual_graph();
    let mut witness: Option<Witness> = None;
    for v in 0..sigma.n_vertices() {
        let link_nodes = sigma.vertex_faces(v);
        let link_arcs = sigma.vertex_edges(v);
        let mut on_link = vec![false; g.n_nodes()];
        for &f in &link_nodes {
            on_link[f] = true;
        }
        let mut is_link_arc = vec![false; g.n_arcs()];
        for &e in &link_arcs {
            is_link_arc[e] = true;
        }
        for &f1 in &link_nodes {
            // interior nodes must avoid the link; the last arc re-enters it
            let mut dist = vec![f64::INFINITY; g.n_nodes()];
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; g.n_nodes()];
            let mut heap = BinaryHeap::new();
            for &(x, a) in &g.adj[f1] {
                if !on_link[x] && w[a] < dist[x] {
                    dist[x] = w[a];
                    prev[x] = Some((f1, a));
                    heap.push(Item(w[a], x));
                }
            }
            while let Some(Item(d, u)) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for &(x, a) in &g.adj[u] {
                    if on_link[x] {
                        continue;
                    }
                    let nd = d + w[a];
                    if nd < dist[x] {
                        dist[x] = nd;
                        prev[x] = Some((u, a));
                        heap.push(Item(nd, x));
                    }
                }
            }
            let mut best: Option<(f64, usize, usize)> = None;
            for &(x, a) in &g.adj[f1] {
                if on_link[x] && x != f1 && !is_link_arc[a] && best.map_or(true, |b| w[a] < b.0) {
                    best = Some((w[a], usize::MAX, a));
                }
            }
            for u in 0..g.n_nodes() {
                if on_link[u] || !dist[u].is_finite() {
                    continue;
                }
                for &(x, a) in &g.adj[u] {
                    if on_link[x] && x != f1 {
                        let d = dist[u] + w[a];
                        if best.map_or(true, |b| d < b.0) {
                            best = Some((d, u, a));
                        }
                    }
                }
            }
            let Some((weight, last, arc)) = best else { continue };
            if weight > PI + TOL_ANGLE {
                continue;
            }
            if witness.as_ref().is_some_and(|x| x.weight <= weight) {
                continue;
            }
            let end = if g.arcs[arc].0 == last || (last == usize::MAX && g.arcs[arc].0 == f1) {
                g.arcs[arc].1
            } else {
                g.arcs[arc].0
            };
            let mut nodes = vec![end];
            let mut arcs = vec![arc];
            if last != usize::MAX {
                let mut cur = last;
                nodes.push(cur);
                while let Some((p, a)) = prev[cur] {
                    arcs.push(a);
                    nodes.push(p);
                    if p == f1 {
                        break;
                    }
                    cur = p;
                }
            } else {
                nodes.push(f1);
            }
            nodes.reverse();
            arcs.reverse();
            witness = Some(Witness { nodes, arcs, weight, vertex: Some(v) });
        }
    }
    PathVerdict { ok: witness.is_none(), witness }
}

/// All admissibility conditions on an angle assignment.
pub fn check_all(sigma: &Cellulation, w: &[f64]) -> Admissibility {
    let mut reasons = check_vertex_sums(sigma, w);
    if w.len() != sigma.n_edges() {
        let empty = CircuitVerdict { ok: false, witness: None };
        return Admissibility {
            admissible: false,
            reasons,
            circuits: empty.clone(),
            paths: PathVerdict { ok: false, witness: None },
        };
    }
    let circuits = check_circuits(sigma, w);
    let paths = check_simple_paths(sigma, w);
    if let Some(wit) = &circuits.witness {
        reasons.push(format!(
            "dual cycle through faces {:?} has weight {:.12} ({})",
            wit.nodes,
            wit.weight,
            if wit.vertex.is_some() { "vertex link" } else { "non-elementary" }
        ));
    }
    if let Some(wit) = &paths.witness {
        reasons.push(format!(
            "dual path through faces {:?} around vertex {} has weight {:.12}, must exceed pi",
            wit.nodes,
            wit.vertex.unwrap_or(usize::MAX),
            wit.weight
        ));
    }
    Admissibility { admissible: reasons.is_empty(), reasons, circuits, paths }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::build_cellulation;

    fn cube() -> Cellulation {
        let faces = vec![
            vec![0, 3, 2, 1],
            vec![4, 5, 6, 7],
            vec![0, 1, 5, 4],
            vec![1, 2, 6, 5],
            vec![2, 3, 7, 6],
            vec![3, 0, 4, 7],
        ];
        build_cellulation(8, &faces, &[]).unwrap()
    }

    #[test]
    fn cube_uniform_angles() {
        let s = cube();
        // vertex sum 3w > 2 pi needs w > 2 pi / 3; the 4-cycle around a face
        // belt needs 4w > 2 pi
        let ok = check_all(&s, &vec![2.2; 12]);
        assert!(ok.admissible, "{:?}", ok.reasons);
        let ideal = check_all(&s.with_ideal(&(0..8).collect::<Vec<_>>()).unwrap(), &vec![2.0 * PI / 3.0; 12]);
        assert!(ideal.admissible, "{:?}", ideal.reasons);
        let bad = check_circuits(&s, &vec![1.5; 12]);
        assert!(!bad.ok);
        let wit = bad.witness.unwrap();
        assert!(wit.weight < 2.0 * PI);
    }

    #[test]
    fn belt_violation_found() {
        let s = cube();
        let mut w = vec![2.5; 12];
        // the belt between faces 0 and 1 crosses the four vertical edges
        for &(a, b) in &[(0, 4), (1, 5), (2, 6), (3, 7)] {
            w[s.edge(a, b).unwrap()] = 1.5;
        }
        let v = check_circuits(&s, &w);
        let wit = v.witness.unwrap();
        assert!(wit.vertex.is_none());
        assert!((wit.weight - 6.0).abs() < 1e-12);
    }
}
