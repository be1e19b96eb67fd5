//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! when any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{crosses_ball, invariants, random_polyhedron, random_unit};
use hyperideal_core::regular::{pattern_matrix, regular_simplex_check};
use hyperideal_core::circles::{koebe_continuation, validate_config, KoebeOptions, ValidateOptions};
use hyperideal_core::combinatorics::{
    build_cellulation, check_circuits, check_simple_paths, cone_triangulation, polyhedral_catalog, Cellulation,
    TOL_ANGLE,
};
use hyperideal_core::mink::{dual_plane_to_point, dual_point_to_plane, ip, klein_to_lift, Plane, ProjPoint, Vec3, Vec4};
use hyperideal_core::nalgebra::{Vector2, Vector3};
use hyperideal_core::plane::{alternating_length_sum, shift, DiskVertex};
use hyperideal_core::simplex::{dual_triangle, simplex_from_lengths, stratum_basis, HyperidealSimplex, EDGES};
use hyperideal_core::solver::{
    assemble_constraints, invariant_distance, random_feasible_start, realize, realize_from, Realization,
    RealizeOptions,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

/// Four vertices of a simplex with `k` ideal vertices, every edge crossing
/// the ball, angles away from 0 and pi and hyperideal sums away from 2 pi.
fn random_simplex<R: Rng>(rng: &mut R, k: usize) -> HyperidealSimplex {
    loop {
        let pts: Vec<Vec3> =
            (0..4).map(|v| random_unit(rng) * if v < k { 1.0 } else { rng.random_range(1.02..1.6) }).collect();
        if !EDGES.iter().all(|&(a, b)| crosses_ball(&pts[a], &pts[b])) {
            continue;
        }
        let points: [ProjPoint; 4] =
            std::array::from_fn(|v| if v < k { ProjPoint::ideal(pts[v]) } else { ProjPoint::new(pts[v]) });
        let Ok(s) = HyperidealSimplex::from_vertices(&points) else { continue };
        if s.theta.iter().any(|&t| t < 0.1 || t > PI - 0.1) {
            continue;
        }
        let sums_ok = (k..4).all(|v| {
            let s: f64 = EDGES.iter().zip(&s.theta).filter(|((a, b), _)| *a == v || *b == v).map(|(_, t)| t).sum();
            s > 2.0 * PI + 0.02
        });
        if !sums_ok {
            continue;
        }
        let Ok(canon) = HyperidealSimplex::from_angles(&s.theta, &s.ideal) else { continue };
        return canon;
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_hyperideal")).args(["simplex", "--regular", "1.2"]).output();
    let elapsed = start.elapsed();
    let Ok(out) = out else { return verdict(false, "binary did not start".into()) };
    let text = String::from_utf8_lossy(&out.stdout);
    let eig: Vec<f64> = text
        .lines()
        .find_map(|l| l.strip_prefix("eigenvalues: "))
        .map(|l| l.trim_matches(|c| c == '[' || c == ']').split(',').filter_map(|x| x.trim().parse().ok()).collect())
        .unwrap_or_default();
    let r = match regular_simplex_check(1.2, true) {
        Ok(r) => r,
        Err(e) => return verdict(false, format!("library check failed: {e}")),
    };
    let pattern = pattern_matrix(r.a, r.b, r.c) == r.matrix;
    let mut closed = vec![
        r.closed_form_eigenvalues[0],
        r.closed_form_eigenvalues[1],
        r.closed_form_eigenvalues[1],
        r.closed_form_eigenvalues[2],
        r.closed_form_eigenvalues[2],
        r.closed_form_eigenvalues[2],
    ];
    closed.sort_by(f64::total_cmp);
    let closed_dev = max_abs_diff(&closed, &r.eigenvalues);
    let geo_dev = r.geometric_deviation().unwrap_or(f64::INFINITY);
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let pass = out.status.success()
        && eig.len() == 6
        && min > 1e-3
        && pattern
        && closed_dev < 1e-12
        && geo_dev < 1e-6
        && elapsed < Duration::from_secs(1);
    verdict(
        pass,
        format!(
            "smallest eigenvalue {min:.6}, closed-form deviation {closed_dev:.1e}, geometric deviation {geo_dev:.1e}, {:.3} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(2);
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for case in 0..100 {
        let s = random_simplex(&mut rng, case % 5);
        let basis = stratum_basis(&s.ideal);
        let g = s.schlafli_gradient(&[0.0; 4]).unwrap();
        // interior angles pi - theta: dV/d(alpha) = -L/2
        let mut fd = Vec::new();
        let mut exact = Vec::new();
        for c in 0..basis.ncols() {
            let b = basis.column(c);
            let vol = |sign: f64| {
                let alpha: [f64; 6] = std::array::from_fn(|k| PI - s.theta[k] + sign * h * b[k]);
                let theta = alpha.map(|a| PI - a);
                HyperidealSimplex::from_angles(&theta, &s.ideal).and_then(|t| t.volume())
            };
            match (vol(1.0), vol(-1.0)) {
                (Ok(p), Ok(m)) => fd.push((p - m) / (2.0 * h)),
                _ => fd.push(f64::NAN),
            }
            exact.push(-(0..6).map(|k| b[k] * g[k]).sum::<f64>());
        }
        let scale = exact.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let rel = max_abs_diff(&fd, &exact) / scale;
        if !(rel < 1e-5) {
            failures += 1;
        }
        worst = worst.max(if rel.is_nan() { f64::INFINITY } else { rel });
    }
    let elapsed = start.elapsed();
    verdict(
        failures == 0 && elapsed < Duration::from_secs(120),
        format!("worst relative error {worst:.2e}, {failures} failures, {:.1} s", elapsed.as_secs_f64()),
    )
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst = f64::NEG_INFINITY;
    let mut per_stratum = [f64::NEG_INFINITY; 5];
    for k in 0..5 {
        for _ in 0..50 {
            let s = random_simplex(&mut rng, k);
            let top = match s.volume_hessian() {
                Ok(hs) => hs.eigenvalues().into_iter().fold(f64::NEG_INFINITY, f64::max),
                Err(_) => f64::INFINITY,
            };
            per_stratum[k] = per_stratum[k].max(top);
            worst = worst.max(top);
        }
    }
    let elapsed = start.elapsed();
    let strata: Vec<String> = per_stratum.iter().map(|x| format!("{x:.2e}")).collect();
    verdict(
        worst < -1e-6 && elapsed < Duration::from_secs(300),
        format!("largest eigenvalue per stratum [{}], {:.1} s", strata.join(", "), elapsed.as_secs_f64()),
    )
}

fn criterion_4() -> Verdict {
    let mut rng = StdRng::seed_from_u64(4);
    let mut angle_err: f64 = 0.0;
    for case in 0..100 {
        let s = random_simplex(&mut rng, case % 5);
        let m = s.measured_angles().unwrap();
        angle_err = angle_err.max(max_abs_diff(&m, &s.theta));
    }
    let mut length_err: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..100 {
        let s = random_simplex(&mut rng, 0);
        let l = s.edge_lengths(&[0.0; 4]).unwrap();
        match simplex_from_lengths(&l.raw) {
            Ok(t) => length_err = length_err.max(max_abs_diff(&t.theta, &s.theta)),
            Err(_) => failures += 1,
        }
    }
    verdict(
        angle_err < 1e-9 && length_err < 1e-8 && failures == 0,
        format!("angle round trip {angle_err:.1e}, length inversion {length_err:.1e}, {failures} inversion failures"),
    )
}

/// Realized instances kept for the vertex-class criterion.
struct Realized {
    sigma: Cellulation,
    w: Vec<f64>,
    r: Realization,
}

fn criterion_5(keep: &mut Vec<Realized>) -> Verdict {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(5);
    let (mut inv, mut grad, mut resid): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut failures = Vec::new();
    for case in 0..25 {
        let poly = random_polyhedron(&mut rng, 5 + case % 6, 0.3);
        match realize(&poly.sigma, &poly.angles, &RealizeOptions::default()) {
            Ok(r) => {
                let d = &r.diagnostics;
                inv = inv.max(invariant_distance(&r.congruence_invariants(), &invariants(&poly.sigma, &poly.points)));
                grad = grad.max(d.reduced_gradient);
                resid = resid.max(d.length_mismatch).max(d.shear);
                keep.push(Realized { sigma: poly.sigma, w: poly.angles, r });
            }
            Err(e) => failures.push(format!("case {case}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    verdict(
        failures.is_empty() && inv < 1e-6 && grad < 1e-9 && resid < 1e-7 && elapsed < Duration::from_secs(600),
        format!(
            "invariants {inv:.1e}, reduced gradient {grad:.1e}, residuals {resid:.1e}, failures {failures:?}, {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_6(keep: &mut Vec<Realized>) -> Verdict {
    let mut rng = StdRng::seed_from_u64(6);
    let mut spread: f64 = 0.0;
    let mut failures = Vec::new();
    for inst in 0..5 {
        let poly = random_polyhedron(&mut rng, 6 + inst, 0.3);
        let cone = cone_triangulation(&poly.sigma).unwrap();
        let cs = assemble_constraints(&poly.sigma, &cone, &poly.angles).unwrap();
        let mut found: Vec<Vec<f64>> = Vec::new();
        for start in 0..10 {
            let u: Vec<f64> = (0..cs.dimension()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let x0 = random_feasible_start(&cs, &u, rng.random_range(0.2..0.9));
            match realize_from(&poly.sigma, &poly.angles, &cs, &x0, &RealizeOptions::default()) {
                Ok(r) => {
                    let c = r.congruence_invariants();
                    for other in &found {
                        spread = spread.max(invariant_distance(&c, other));
                    }
                    found.push(c);
                    keep.push(Realized { sigma: poly.sigma.clone(), w: poly.angles.clone(), r });
                }
                Err(e) => failures.push(format!("instance {inst} start {start}: {e}")),
            }
        }
    }
    verdict(failures.is_empty() && spread < 1e-6, format!("invariant spread {spread:.1e}, failures {failures:?}"))
}

fn criterion_7(realized: &[Realized]) -> Verdict {
    let (mut ideal_dev, mut hyp_min): (f64, f64) = (0.0, f64::INFINITY);
    let (mut n_ideal, mut n_hyp) = (0, 0);
    let mut pass = !realized.is_empty();
    for x in realized {
        for v in 0..x.sigma.n_vertices() {
            let s: f64 = x.sigma.vertex_edges(v).iter().map(|&e| x.w[e]).sum();
            let r = x.r.vertices[v].p.norm();
            if (s - 2.0 * PI).abs() <= TOL_ANGLE {
                n_ideal += 1;
                ideal_dev = ideal_dev.max((r - 1.0).abs());
                pass &= (r - 1.0).abs() < 1e-7;
            } else {
                n_hyp += 1;
                hyp_min = hyp_min.min(r - 1.0);
                pass &= r > 1.0 + 1e-6;
            }
        }
    }
    verdict(
        pass,
        format!(
            "{} instances; {n_ideal} vertices with sum 2 pi, max ||p| - 1| {ideal_dev:.1e}; {n_hyp} others, min |p| - 1 {hyp_min:.1e}",
            realized.len()
        ),
    )
}

/// Random point with `|p|` in `[lo, hi]`.
fn random_at<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Vec3 {
    random_unit(rng) * rng.random_range(lo..hi)
}

fn criterion_8() -> Verdict {
    let mut rng = StdRng::seed_from_u64(8);
    let mut involution: f64 = 0.0;
    for _ in 0..100 {
        let v = ProjPoint::new(random_at(&mut rng, 1.01, 5.0));
        let back = dual_plane_to_point(&dual_point_to_plane(&v).unwrap()).unwrap();
        involution = involution.max((back.p - v.p).norm() / v.p.norm());
        // a plane missing the origin, back and forth
        let n = klein_to_lift(&random_at(&mut rng, 1.01, 5.0));
        let pl = Plane::new(n).unwrap();
        let again = dual_point_to_plane(&dual_plane_to_point(&pl).unwrap()).unwrap();
        involution = involution.max((again.n - pl.n).norm().min((again.n + pl.n).norm()));
    }
    // hyperbolic angle between the dual plane of v and a line through v
    let mut ortho: f64 = 0.0;
    for _ in 0..100 {
        let v = ProjPoint::new(random_at(&mut rng, 1.01, 5.0));
        let n = dual_point_to_plane(&v).unwrap().n;
        let q = random_at(&mut rng, 0.0, 0.95);
        let (vv, qq) = (klein_to_lift(&v.p), klein_to_lift(&q));
        let t = -ip(&qq, &n) / ip(&vv, &n);
        let x: Vec4 = qq + vv * t;
        let x = x / (-ip(&x, &x)).sqrt();
        let tangent = vv + x * ip(&vv, &x);
        let normal_part = ip(&tangent, &n);
        let along = tangent - n * normal_part;
        let angle = normal_part.abs().atan2(ip(&along, &along).max(0.0).sqrt());
        ortho = ortho.max((angle - PI / 2.0).abs());
    }
    let mut disjoint = 0;
    let mut worst_pair = f64::NEG_INFINITY;
    let mut segments = 0;
    while segments < 100 {
        let (a, b) = (random_at(&mut rng, 1.01, 3.0), random_at(&mut rng, 1.01, 3.0));
        if !crosses_ball(&a, &b) {
            continue;
        }
        segments += 1;
        let na = dual_point_to_plane(&ProjPoint::new(a)).unwrap().n;
        let nb = dual_point_to_plane(&ProjPoint::new(b)).unwrap().n;
        let c = ip(&na, &nb);
        worst_pair = worst_pair.max(c);
        if c <= -1.0 {
            disjoint += 1;
        }
    }
    verdict(
        involution < 1e-12 && ortho < 1e-8 && disjoint == 100,
        format!(
            "involution {involution:.1e}, orthogonality {ortho:.1e}, disjoint {disjoint}/100 (largest pairing {worst_pair:.6})"
        ),
    )
}

fn criterion_9() -> Verdict {
    let mut rng = StdRng::seed_from_u64(9);
    let at = |t: f64, r: f64| Vector2::new(t.cos(), t.sin()) * r;
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mut errors = 0;
    while cases < 100 {
        // common edge x1 x3 with ideal endpoints, x2 and x4 on either side
        let t1 = rng.random_range(0.0..2.0 * PI);
        let t3 = t1 + rng.random_range(0.8..PI - 0.3);
        let t2 = rng.random_range(t1 + 0.1..t3 - 0.1);
        let t4 = rng.random_range(t3 + 0.1..t1 + 2.0 * PI - 0.1);
        let mut vertex = |t: f64| {
            if rng.random_bool(0.5) {
                Some(DiskVertex::ideal(at(t, 1.0), rng.random_range(-1.0..1.0)))
            } else {
                DiskVertex::hyperideal(at(t, rng.random_range(1.01..1.4))).ok()
            }
        };
        let (Some(x2), Some(x4)) = (vertex(t2), vertex(t4)) else { continue };
        let x = [
            DiskVertex::ideal(at(t1, 1.0), rng.random_range(-1.0..1.0)),
            x2,
            DiskVertex::ideal(at(t3, 1.0), rng.random_range(-1.0..1.0)),
            x4,
        ];
        let sides = [(0, 1), (1, 2), (2, 3), (3, 0)];
        let crossing = sides.iter().all(|&(i, j)| {
            let (a, b) = (x[i].p, x[j].p);
            let d = b - a;
            let s = (-a.dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
            (a + d * s).norm() < 1.0 - 1e-3
        });
        if !crossing {
            continue;
        }
        cases += 1;
        match (shift(&x), alternating_length_sum(&x)) {
            (Ok(d), Ok(l)) => worst = worst.max((2.0 * d - l).abs()),
            _ => errors += 1,
        }
    }
    verdict(worst < 1e-9 && errors == 0, format!("max |2 shift - alternating sum| {worst:.1e} over 100 pairs, {errors} errors"))
}

/// Exhaustive checks on the dual graph by enumeration of simple cycles and
/// link-to-link paths.
fn brute_force(sigma: &Cellulation, w: &[f64]) -> (bool, bool) {
    let g = sigma.dual_graph();
    let n = g.n_nodes();
    let mut links: Vec<Vec<usize>> = (0..sigma.n_vertices()).map(|v| sigma.vertex_edges(v)).collect();
    for l in &mut links {
        l.sort_unstable();
    }
    let mut circuits_ok = true;
    // cycles through their smallest node
    fn cycles(
        g: &hyperideal_core::combinatorics::DualGraph,
        root: usize,
        u: usize,
        seen: &mut Vec<bool>,
        arcs: &mut Vec<usize>,
        out: &mut dyn FnMut(&[usize]),
    ) {
        for &(x, a) in &g.adj[u] {
            if arcs.contains(&a) {
                continue;
            }
            if x == root && arcs.len() >= 2 {
                arcs.push(a);
                out(arcs);
                arcs.pop();
            } else if x > root && !seen[x] {
                seen[x] = true;
                arcs.push(a);
                cycles(g, root, x, seen, arcs, out);
                arcs.pop();
                seen[x] = false;
            }
        }
    }
    for root in 0..n {
        let mut seen = vec![false; n];
        seen[root] = true;
        cycles(&g, root, root, &mut seen, &mut Vec::new(), &mut |arcs: &[usize]| {
            let weight: f64 = arcs.iter().map(|&a| w[a]).sum();
            let mut sorted = arcs.to_vec();
            sorted.sort_unstable();
            let elementary = links.contains(&sorted);
            if weight < 2.0 * PI - TOL_ANGLE || (!elementary && weight <= 2.0 * PI + TOL_ANGLE) {
                circuits_ok = false;
            }
        });
    }
    let mut paths_ok = true;
    for v in 0..sigma.n_vertices() {
        let link_nodes = sigma.vertex_faces(v);
        let on_link: Vec<bool> = (0..n).map(|f| link_nodes.contains(&f)).collect();
        // depth-first over paths whose interior avoids the link
        fn walk(
            g: &hyperideal_core::combinatorics::DualGraph,
            w: &[f64],
            on_link: &[bool],
            link_arcs: &[usize],
            start: usize,
            u: usize,
            weight: f64,
            seen: &mut Vec<bool>,
            depth: usize,
            bad: &mut bool,
        ) {
            for &(x, a) in &g.adj[u] {
                let nw = weight + w[a];
                if on_link[x] {
                    let single_link_arc = depth == 0 && link_arcs.contains(&a);
                    if x != start && !single_link_arc && nw <= PI + TOL_ANGLE {
                        *bad = true;
                    }
                } else if !seen[x] {
                    seen[x] = true;
                    walk(g, w, on_link, link_arcs, start, x, nw, seen, depth + 1, bad);
                    seen[x] = false;
                }
            }
        }
        for &f in &link_nodes {
            let mut bad = false;
            walk(&g, w, &on_link, &links[v], f, f, 0.0, &mut vec![false; n], 0, &mut bad);
            if bad {
                paths_ok = false;
            }
        }
    }
    (circuits_ok, paths_ok)
}

fn criterion_10() -> Verdict {
    let start = Instant::now();
    let catalog = polyhedral_catalog(8);
    let mut rng = StdRng::seed_from_u64(10);
    let (mut cases, mut agree) = (0, 0);
    let (mut rejects, mut path_rejects) = (0, 0);
    for sigma in &catalog {
        for trial in 0..40 {
            // weights around the thresholds so both verdicts occur
            let w: Vec<f64> = match trial % 4 {
                0 => (0..sigma.n_edges()).map(|_| rng.random_range(0.3..3.0)).collect(),
                1 => {
                    let base = rng.random_range(1.2..2.6);
                    (0..sigma.n_edges()).map(|_| base + rng.random_range(-0.4..0.4)).collect()
                }
                2 => (0..sigma.n_edges()).map(|_| rng.random_range(1.4..PI - 0.01)).collect(),
                _ => {
                    let base = rng.random_range(2.2..2.9);
                    (0..sigma.n_edges()).map(|_| base + rng.random_range(-0.25..0.2)).collect()
                }
            };
            let (oc, op) = brute_force(sigma, &w);
            let c = check_circuits(sigma, &w);
            let p = check_simple_paths(sigma, &w);
            let witnesses_valid = c.witness.as_ref().is_none_or(|x| (x.arcs.iter().map(|&a| w[a]).sum::<f64>() - x.weight).abs() < 1e-12)
                && p.witness.as_ref().is_none_or(|x| x.weight <= PI + TOL_ANGLE);
            cases += 1;
            if c.ok == oc && p.ok == op && witnesses_valid {
                agree += 1;
            }
            rejects += usize::from(!oc);
            path_rejects += usize::from(!op);
        }
    }
    verdict(
        agree == cases,
        format!(
            "{} cellulations, {agree}/{cases} agree ({rejects} circuit and {path_rejects} path rejections), {:.1} s",
            catalog.len(),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn tetrahedron() -> Cellulation {
    build_cellulation(4, &[vec![0, 1, 2], vec![0, 3, 1], vec![0, 2, 3], vec![1, 3, 2]], &[]).unwrap()
}

fn cube() -> Cellulation {
    let faces =
        vec![vec![0, 3, 2, 1], vec![4, 5, 6, 7], vec![0, 1, 5, 4], vec![1, 2, 6, 5], vec![2, 3, 7, 6], vec![3, 0, 4, 7]];
    build_cellulation(8, &faces, &[]).unwrap()
}

fn octahedron() -> Cellulation {
    let faces = vec![
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 1],
        vec![5, 2, 1],
        vec![5, 3, 2],
        vec![5, 4, 3],
        vec![5, 1, 4],
    ];
    build_cellulation(6, &faces, &[]).unwrap()
}

fn criterion_11() -> Verdict {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, sigma) in [("tetrahedron", tetrahedron()), ("cube", cube()), ("octahedron", octahedron())] {
        match koebe_continuation(&sigma, &KoebeOptions::default()) {
            Ok(k) => {
                let increasing = k.volumes.windows(2).all(|p| p[1] > p[0]);
                let valid = validate_config(&k.config, &ValidateOptions::default()).valid;
                pass &= k.tangency_residual < 1e-6 && k.orthogonality_residual < 1e-6 && increasing && valid;
                parts.push(format!(
                    "{name}: tangency {:.1e}, orthogonality {:.1e}, volume {}",
                    k.tangency_residual,
                    k.orthogonality_residual,
                    if increasing { "increasing" } else { "NOT increasing" }
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(pass && elapsed < Duration::from_secs(600), format!("{}; {:.1} s", parts.join("; "), elapsed.as_secs_f64()))
}

fn criterion_12() -> Verdict {
    let mut rng = StdRng::seed_from_u64(12);
    let lift = |p: &Vector2<f64>| {
        let x = Vector3::new(1.0, p.x, p.y);
        x / (1.0 - p.norm_squared()).sqrt()
    };
    let dist = |a: &Vector3<f64>, b: &Vector3<f64>| (a[0] * b[0] - a[1] * b[1] - a[2] * b[2]).max(1.0).acosh();
    let (mut min_sum, mut dual_err, mut law_err) = (f64::INFINITY, 0.0f64, 0.0f64);
    let mut cases = 0;
    while cases < 100 {
        let p: [Vector2<f64>; 3] = std::array::from_fn(|_| {
            let t = rng.random_range(0.0..2.0 * PI);
            Vector2::new(t.cos(), t.sin()) * rng.random_range(0.0..0.95f64).sqrt()
        });
        let Ok(d) = dual_triangle(&p) else { continue };
        if d.exterior_angles.iter().any(|&a| a > PI - 1e-3) {
            continue;
        }
        cases += 1;
        min_sum = min_sum.min(d.exterior_angles.iter().sum());
        dual_err = dual_err.max(max_abs_diff(&d.dual_lengths, &d.exterior_angles));
        // law of cosines from the side lengths
        let x = p.map(|q| lift(&q));
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let (b, c, a) = (dist(&x[i], &x[j]), dist(&x[i], &x[k]), dist(&x[j], &x[k]));
            let cos = (b.cosh() * c.cosh() - a.cosh()) / (b.sinh() * c.sinh());
            law_err = law_err.max((PI - cos.clamp(-1.0, 1.0).acos() - d.exterior_angles[i]).abs());
        }
    }
    verdict(
        min_sum > 2.0 * PI && dual_err < 1e-8 && law_err < 1e-8,
        format!(
            "smallest exterior sum 2 pi + {:.2e}, dual length error {dual_err:.1e}, law of cosines {law_err:.1e}",
            min_sum - 2.0 * PI
        ),
    )
}

fn run(name: &str, f: impl FnOnce() -> Verdict) -> bool {
    let v = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        verdict(false, format!("panicked: {}", msg.unwrap_or_default()))
    });
    println!("{name}: {} ({})", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    v.pass
}

fn main() {
    let mut realized = Vec::new();
    let results = [
        run("criterion 1, regular simplex eigenvalues", criterion_1),
        run("criterion 2, volume gradient", criterion_2),
        run("criterion 3, strict concavity", criterion_3),
        run("criterion 4, simplex round trips", criterion_4),
        run("criterion 5, polyhedron realization", || criterion_5(&mut realized)),
        run("criterion 6, independence of the start", || criterion_6(&mut realized)),
        run("criterion 7, vertex classes", || criterion_7(&realized)),
        run("criterion 8, duality", criterion_8),
        run("criterion 9, shift identity", criterion_9),
        run("criterion 10, checkers against enumeration", criterion_10),
        run("criterion 11, tangency limit", criterion_11),
        run("criterion 12, triangle duality", criterion_12),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
