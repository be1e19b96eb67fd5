use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::cellulation::{build_cellulation, Cellulation};

/// Canonical code of the underlying embedded graph, invariant under
/// relabelling and reflection. Two polyhedral graphs are isomorphic exactly
/// when their codes agree.
pub fn canonical_code(sigma: &Cellulation) -> Vec<usize> {
    let n = sigma.n_vertices();
    let rot: Vec<Vec<usize>> = (0..n).map(|v| sigma.vertex_neighbors(v)).collect();
    let mut best: Option<Vec<usize>> = None;
    for mirror in [false, true] {
        for u in 0..n {
            for &w in &rot[u] {
                let code = traversal_code(&rot, u, w, mirror);
                if best.as_ref().map_or(true, |b| code < *b) {
                    best = Some(code);
                }
            }
        }
    }
    best.unwrap_or_default()
}

fn traversal_code(rot: &[Vec<usize>], root: usize, first: usize, mirror: bool) -> Vec<usize> {
    let n = rot.len();
    let mut label = vec![usize::MAX; n];
    let mut reference = vec![usize::MAX; n];
    let mut order = vec![root];
    label[root] = 0;
    reference[root] = first;
    let mut code = Vec::new();
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        let r = &rot[x];
        let d = r.len();
        let start = r.iter().position(|&y| y == reference[x]).unwrap();
        for i in 0..d {
            let idx = if mirror { (start + d - i) % d } else { (start + i) % d };
            let y = r[idx];
            if label[y] == usize::MAX {
                label[y] = order.len();
                reference[y] = x;
                order.push(y);
            }
            code.push(label[y]);
        }
        code.push(usize::MAX);
    }
    code
}

fn three_connected(sigma: &Cellulation) -> bool {
    let n = sigma.n_vertices();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| sigma.vertex_neighbors(v)).collect();
    for v in 0..n {
        let mut nb = adj[v].clone();
        nb.sort();
        if nb.windows(2).any(|w| w[0] == w[1]) || nb.len() < 3 {
            return false;
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let start = (0..n).find(|&x| x != a && x != b).unwrap();
            let mut seen = vec![false; n];
            seen[a] = true;
            seen[b] = true;
            seen[start] = true;
            let mut stack = vec![start];
            let mut count = 1;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            if count != n - 2 {
                return false;
            }
        }
    }
    true
}

fn face_splits(sigma: &Cellulation) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for (f, cyc) in sigma.faces().iter().enumerate() {
        let k = cyc.len();
        for i in 0..k {
            for j in i + 2..k {
                if i == 0 && j == k - 1 {
                    continue;
                }
                let mut faces: Vec<Vec<usize>> = sigma.faces().to_vec();
                faces[f] = cyc[i..=j].to_vec();
                let mut other: Vec<usize> = cyc[j..].to_vec();
                other.extend_from_slice(&cyc[..=i]);
                faces.push(other);
                out.push(faces);
            }
        }
    }
    out
}

fn vertex_splits(sigma: &Cellulation) -> Vec<Vec<Vec<usize>>> {
    // Positions around v alternate between neighbours (2t) and the faces
    // between consecutive neighbours (2t + 1). The new edge leaves through
    // two positions; v keeps the side strictly between them.
    let mut out = Vec::new();
    let n = sigma.n_vertices();
    for v in 0..n {
        let nb = sigma.vertex_neighbors(v);
        let d = nb.len();
        let m = 2 * d;
        let index_of = |x: usize| nb.iter().position(|&y| y == x).unwrap();
        for p in 0..m {
            for q in p + 1..m {
                let in_a = |x: usize| x > p && x < q;
                let mut faces = Vec::new();
                for cyc in sigma.faces() {
                    let k = cyc.len();
                    let mut nf = Vec::with_capacity(k + 1);
                    for i in 0..k {
                        if cyc[i] != v {
                            nf.push(cyc[i]);
                            continue;
                        }
                        let pos = 2 * index_of(cyc[(i + k - 1) % k]) + 1;
                        if pos == p {
                            nf.push(n);
                            nf.push(v);
                        } else if pos == q {
                            nf.push(v);
                            nf.push(n);
                        } else if in_a(pos) {
                            nf.push(v);
                        } else {
                            nf.push(n);
                        }
                    }
                    faces.push(nf);
                }
                if p % 2 == 0 {
                    faces.push(vec![v, nb[p / 2], n]);
                }
                if q % 2 == 0 {
                    faces.push(vec![n, nb[q / 2], v]);
                }
                out.push(faces);
            }
        }
    }
    out
}

/// All polyhedral graphs (3-connected planar) with at most `max_faces`
/// faces, one per isomorphism class, sorted by face count, then vertex
/// count. Vertices are all finite.
pub fn polyhedral_catalog(max_faces: usize) -> Vec<Cellulation> {
    let tetra = vec![vec![0, 1, 2], vec![0, 3, 1], vec![0, 2, 3], vec![1, 3, 2]];
    let root = build_cellulation(4, &tetra, &[]).unwrap();
    if max_faces < 4 {
        return Vec::new();
    }
    let mut seen = BTreeSet::new();
    seen.insert(canonical_code(&root));
    let mut all = vec![root];
    let mut head = 0;
    while head < all.len() {
        let cur = all[head].clone();
        head += 1;
        let mut children = vertex_splits(&cur);
        if cur.n_faces() < max_faces {
            children.extend(face_splits(&cur));
        }
        for faces in children {
            if faces.len() > max_faces {
                continue;
            }
            let nv = faces.iter().flatten().max().map_or(0, |m| m + 1);
            let Ok(s) = build_cellulation(nv, &faces, &[]) else { continue };
            if !three_connected(&s) {
                continue;
            }
            let code = canonical_code(&s);
            if seen.insert(code) {
                all.push(s);
            }
        }
    }
    all.sort_by_key(|s| (s.n_faces(), s.n_vertices()));
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let cat = polyhedral_catalog(6);
        let count = |f: usize| cat.iter().filter(|s| s.n_faces() == f).count();
        assert_eq!((count(4), count(5), count(6)), (1, 2, 7));
    }

    #[test]
    fn code_ignores_labels() {
        let a = build_cellulation(4, &[vec![0, 1, 2], vec![0, 3, 1], vec![0, 2, 3], vec![1, 3, 2]], &[]).unwrap();
        let b = build_cellulation(4, &[vec![3, 2, 1], vec![3, 0, 2], vec![3, 1, 0], vec![2, 0, 1]], &[]).unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));
    }
}
