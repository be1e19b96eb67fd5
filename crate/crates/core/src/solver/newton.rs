
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::simplex::{stratum_hessian, vertex_edges, HyperidealSimplex, HESSIAN_STEP};

/// Distance kept from the boundary of the admissible region.
pub const SAFEGUARD: f64 = 1e-6;

/// Consecutive safeguard-limited steps tolerated before giving up.
pub const COLLAPSE_STREAK: usize = 5;

/// Independent simplex geometries, one per simplex of the cone
/// triangulation; they need not glue.
#[derive(Debug, Clone, PartialEq)]
pub struct ShearedStructure {
    pub theta: Vec<[f64; 6]>,
    pub ideal: Vec<[bool; 4]>,
}

impl ShearedStructure {
    pub fn from_vec(x: &[f64], ideal: &[[bool; 4]]) -> Self {
        let theta = x.chunks(6).map(|c| core::array::from_fn(|k| c[k])).collect();
        ShearedStructure { theta, ideal: ideal.to_vec() }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.theta.iter().flat_map(|t| t.iter().copied()).collect()
    }

    pub fn simplices(&self) -> Result<Vec<HyperidealSimplex>> {
        self.theta.iter().zip(&self.ideal).map(|(t, i)| HyperidealSimplex::from_angles(t, i)).collect()
    }
}

/// Total volume and its gradient in the exterior angles (`L / 2` per slot,
/// with default horospheres at ideal vertices).
pub fn total_volume_and_gradient(x: &ShearedStructure) -> Result<(f64, Vec<f64>)> {
    let mut v = 0.0;
    let mut g = Vec::with_capacity(6 * x.theta.len());
    for s in x.simplices()? {
        v += s.volume()?;
        g.extend_from_slice(&s.schlafli_gradient(&[0.0; 4])?);
    }
    Ok((v, g))
}

fn gradient(x: &ShearedStructure) -> Result<Vec<f64>> {
    let mut g = Vec::with_capacity(6 * x.theta.len());
    for s in x.simplices()? {
        g.extend_from_slice(&s.schlafli_gradient(&[0.0; 4])?);
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-9, max_iter: 200 }
    }
}

#[derive(Debug, Clone)]
pub struct Maximizer {
    pub structure: ShearedStructure,
    pub iterations: usize,
    pub reduced_gradient: f64,
    pub volume: f64,
}

/// Largest step along `d` keeping `x` inside the safeguarded region, and the
/// simplex owning the blocking constraint.
fn step_to_boundary(cs: &ConstraintSet, x: &[f64], d: &[f64], eps: f64) -> (f64, usize) {
    let mut amax = f64::INFINITY;
    let mut who = usize::MAX;
    let mut limit = |room: f64, rate: f64, s: usize| {
        if rate < 0.0 {
            let a = (room / -rate).max(0.0);
            if a < amax {
                amax = a;
                who = s;
            }
        }
    };
    for j in 0..x.len() {
        limit(x[j] - eps, d[j], j / 6);
        limit(PI - eps - x[j], -d[j], j / 6);
    }
    for (s, ci) in cs.corner_ideal.iter().enumerate() {
        for v in 0..4 {
            if !ci[v] {
                let e = vertex_edges(v);
                let sum: f64 = e.iter().map(|&k| x[6 * s + k]).sum();
                let rate: f64 = e.iter().map(|&k| d[6 * s + k]).sum();
                limit(sum - 2.0 * PI - eps, rate, s);
            }
        }
    }
    (amax, who)
}

/// Reduced Hessian `N^T H N` assembled from the per-simplex stratum
/// Hessians.
fn reduced_hessian(cs: &ConstraintSet, simplices: &[HyperidealSimplex]) -> Result<DMatrix<f64>> {
    let n = &cs.null_basis;
    let k = n.ncols();
    let mut h = DMatrix::zeros(k, k);
    for (s, simp) in simplices.iter().enumerate() {
        // keep the difference stencil inside the open region
        let th = &simp.theta;
        let mut margin = f64::INFINITY;
        for &t in th {
            margin = margin.min(t).min(PI - t);
        }
        for v in 0..4 {
            if !simp.ideal[v] {
                margin = margin.min(vertex_edges(v).iter().map(|&k| th[k]).sum::<f64>() - 2.0 * PI);
            }
        }
        let step = HESSIAN_STEP.min(0.25 * margin);
        let sh = stratum_hessian(th, &simp.ideal, step)?;
        let ns = n.rows(6 * s, 6);
        let proj = sh.basis.transpose() * ns;
        h += proj.transpose() * sh.symmetric() * proj;
    }
    Ok((&h + h.transpose()) * 0.5)
}

/// Gradient and Hessian of `sum ln(margin)` over the open inequalities.
fn barrier_terms(cs: &ConstraintSet, x: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
    let n = x.len();
    let mut g = DVector::zeros(n);
    let mut h = DMatrix::zeros(n, n);
    for j in 0..n {
        let (a, b) = (x[j], PI - x[j]);
        g[j] += 1.0 / a - 1.0 / b;
        h[(j, j)] -= 1.0 / (a * a) + 1.0 / (b * b);
    }
    for (s, ci) in cs.corner_ideal.iter().enumerate() {
        for v in 0..4 {
            if !ci[v] {
                let e = vertex_edges(v).map(|k| 6 * s + k);
                let m: f64 = e.iter().map(|&k| x[k]).sum::<f64>() - 2.0 * PI;
                for &p in &e {
                    g[p] += 1.0 / m;
                    for &q in &e {
                        h[(p, q)] -= 1.0 / (m * m);
                    }
                }
            }
        }
    }
    (g, h)
}

fn barrier_gradient(cs: &ConstraintSet, x: &[f64], mu: f64) -> Result<DVector<f64>> {
    let st = ShearedStructure::from_vec(x, &cs.corner_ideal);
    let mut g = DVector::from_vec(gradient(&st)?);
    if mu > 0.0 {
        g += barrier_terms(cs, x).0 * mu;
    }
    Ok(g)
}

struct Phase {
    x: Vec<f64>,
    iterations: usize,
    reduced_gradient: f64,
    simplices: Vec<HyperidealSimplex>,
}

/// Newton iterations on `V + mu B` (`B` the log barrier). With `mu = 0`
/// the safeguard applies and persistent blocking is reported as a collapse.
fn newton_phase(cs: &ConstraintSet, x0: Vec<f64>, mu: f64, tol: f64, max_iter: usize) -> Result<Phase> {
    let n = &cs.null_basis;
    let mut x = x0;
    let mut streak = 0usize;
    for it in 0..=max_iter {
        let st = ShearedStructure::from_vec(&x, &cs.corner_ideal);
        let simplices = st.simplices()?;
        let mut g = Vec::with_capacity(x.len());
        for s in &simplices {
            g.extend_from_slice(&s.schlafli_gradient(&[0.0; 4])?);
        }
        let mut gv = DVector::from_vec(g);
        let mut hb = None;
        if mu > 0.0 {
            let (bg, bh) = barrier_terms(cs, &x);
            gv += bg * mu;
            hb = Some(bh * mu);
        }
        let r = n.transpose() * &gv;
        let rn = r.norm();
        log::trace!("newton iteration {it} (mu {mu:.1e}): reduced gradient {rn:.3e}");
        if rn < tol {
            return Ok(Phase { x, iterations: it, reduced_gradient: rn, simplices });
        }
        if it == max_iter {
            return Ok(Phase { x, iterations: it, reduced_gradient: rn, simplices });
        }
        let mut h = reduced_hessian(cs, &simplices)?;
        if let Some(bh) = hb {
            h += n.transpose() * bh * n;
        }
        let eig = SymmetricEigen::new(h);
        // the objective is strictly concave; clamp eigenvalues that rounding
        // pushed to the wrong sign
        let scale = eig.eigenvalues.abs().max().max(1e-12);
        let mut dz = DVector::zeros(r.len());
        for i in 0..r.len() {
            let lam = eig.eigenvalues[i].min(-1e-8 * scale);
            let q = eig.eigenvectors.column(i);
            dz -= q * (q.dot(&r) / lam);
        }
        let d: Vec<f64> = (n * dz).iter().copied().collect();
        let slope: f64 = gv.iter().zip(&d).map(|(a, b)| a * b).sum();
        let (amax, who) = step_to_boundary(cs, &x, &d, if mu > 0.0 { 0.0 } else { SAFEGUARD });
        log::trace!("  margin {:.3e}, step to boundary {amax:.3e} (simplex {who}), slope {slope:.3e}", cs.margin(&x));
        let mut alpha = 1.0;
        if 0.995 * amax < 1.0 {
            alpha = 0.995 * amax;
            if mu == 0.0 {
                streak += 1;
                if streak >= COLLAPSE_STREAK {
                    return Err(Error::BoundaryCollapse(who));
                }
            }
        } else {
            streak = 0;
        }
        // search for a step whose directional derivative has not overshot
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + alpha * b).collect();
            match barrier_gradient(cs, &trial, mu) {
                Ok(gt) => {
                    let sl: f64 = gt.iter().zip(&d).map(|(a, b)| a * b).sum();
                    if sl > -0.5 * slope {
                        accepted = Some(trial);
                        break;
                    }
                    let sec = alpha * slope / (slope - sl);
                    alpha = sec.clamp(0.1 * alpha, 0.9 * alpha);
                }
                Err(_) => alpha *= 0.5,
            }
        }
        match accepted {
            Some(t) => x = t,
            None => return Err(Error::SolveDiverged("line search failed")),
        }
    }
    unreachable!()
}

/// Initial weight of the log barrier.
const MU_START: f64 = 1e-1;
/// Weight below which the barrier is dropped.
const MU_END: f64 = 1e-10;
/// Fraction of the tolerance targeted by the final iterations.
const POLISH: f64 = 1e-2;

/// Maximize the total volume on the affine set of `cs`, starting from the
/// strictly feasible `x0`. A log-barrier path keeps the early iterates away
/// from the frontier; the final iterations are plain safeguarded Newton.
pub fn maximize(cs: &ConstraintSet, x0: &[f64], opts: &NewtonOptions) -> Result<Maximizer> {
    let mut x = x0.to_vec();
    let mut iterations = 0;
    if cs.null_basis.ncols() > 0 {
        let mut mu = MU_START;
        while mu > MU_END {
            let ph = newton_phase(cs, x, mu, (0.1 * mu).max(opts.tol), 30)?;
            iterations += ph.iterations;
            x = ph.x;
            mu *= 0.1;
        }
    }
    let budget = opts.max_iter.saturating_sub(iterations).max(10);
    // aim a little below the tolerance; the last quadratic step is cheap
    let ph = newton_phase(cs, x, 0.0, POLISH * opts.tol, budget)?;
    if !(ph.reduced_gradient < opts.tol) {
        return Err(Error::MaxIterations(ph.reduced_gradient));
    }
    let mut volume = 0.0;
    for s in &ph.simplices {
        volume += s.volume()?;
    }
    Ok(Maximizer {
        structure: ShearedStructure::from_vec(&ph.x, &cs.corner_ideal),
        iterations: iterations + ph.iterations,
        reduced_gradient: ph.reduced_gradient,
        volume,
    })
}

/// A strictly feasible point: `base` moved toward the interior point until
/// every margin exceeds the safeguard.
pub fn blend_feasible(cs: &ConstraintSet, base: &[f64]) -> Vec<f64> {
    let proj = cs.project(base);
    let ip = &cs.interior_point;
    for k in 0..=20 {
        let beta = k as f64 / 20.0;
        let x: Vec<f64> = proj.iter().zip(ip).map(|(a, b)| (1.0 - beta) * a + beta * b).collect();
        if cs.margin(&x) > 10.0 * SAFEGUARD {
            return x;
        }
    }
    ip.clone()
}

/// Strictly feasible point at a random offset from the interior point:
/// `u` holds uniform samples in `[-1, 1]` (one per reduced coordinate) and
/// `fraction` in `(0, 1)` sets how far toward the boundary to go.
pub fn random_feasible_start(cs: &ConstraintSet, u: &[f64], fraction: f64) -> Vec<f64> {
    let n = &cs.null_basis;
    let k = n.ncols();
    if k == 0 {
        return cs.interior_point.clone();
    }
    let z = DVector::from_iterator(k, (0..k).map(|i| u.get(i).copied().unwrap_or(0.0)));
    let d: Vec<f64> = (n * z).iter().copied().collect();
    let (amax, _) = step_to_boundary(cs, &cs.interior_point, &d, SAFEGUARD);
    let a = if amax.is_finite() { fraction * amax } else { fraction };
    cs.interior_point.iter().zip(&d).map(|(x, y)| x + a * y).collect()
}
