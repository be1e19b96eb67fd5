//! Dense two-phase simplex method for small linear programs.
//!
//! Maximize `c . x` subject to `A_eq x = b_eq`, `A_le x <= b_le`, `x >= 0`.

use alloc::vec;
use alloc::vec::Vec;

const EPS: f64 = 1e-10;

#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub n: usize,
    pub c: Vec<f64>,
    pub eq: Vec<(Vec<f64>, f64)>,
    pub le: Vec<(Vec<f64>, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible { infeasibility: f64 },
    Unbounded,
}

impl LinearProgram {
    pub fn new(n: usize) -> Self {
        LinearProgram { n, c: vec![0.0; n], eq: Vec::new(), le: Vec::new() }
    }

    pub fn add_eq(&mut self, row: Vec<f64>, b: f64) {
        debug_assert_eq!(row.len(), self.n);
        self.eq.push((row, b));
    }

    pub fn add_le(&mut self, row: Vec<f64>, b: f64) {
        debug_assert_eq!(row.len(), self.n);
        self.le.push((row, b));
    }

    pub fn add_ge(&mut self, row: Vec<f64>, b: f64) {
        self.add_le(row.into_iter().map(|x| -x).collect(), -b);
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// row-major, `rows + 1` rows (last is the objective), `cols + 1` columns
    /// (last is the right-hand side)
    t: Vec<f64>,
    basis: Vec<usize>,
    n_struct: usize,
    n_art_start: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * (self.cols + 1) + c]
    }

    fn build(lp: &LinearProgram) -> Self {
        let m = lp.eq.len() + lp.le.len();
        let n_slack = lp.le.len();
        let n_art_start = lp.n + n_slack;
        let cols = n_art_start + m;
        let w = cols + 1;
        let mut t = vec![0.0; (m + 1) * w];
        let mut basis = vec![0; m];
        for (r, (row, b)) in lp.eq.iter().map(|(a, b)| (a, *b)).chain(lp.le.iter().map(|(a, b)| (a, *b))).enumerate() {
            let sign = if b < 0.0 { -1.0 } else { 1.0 };
            for j in 0..lp.n {
                t[r * w + j] = sign * row[j];
            }
            if r >= lp.eq.len() {
                t[r * w + lp.n + (r - lp.eq.len())] = sign;
            }
            t[r * w + n_art_start + r] = 1.0;
            t[r * w + cols] = sign * b;
            basis[r] = n_art_start + r;
        }
        Tableau { rows: m, cols, t, basis, n_struct: lp.n, n_art_start }
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let p = self.t[pr * w + pc];
        for j in 0..w {
            self.t[pr * w + j] /= p;
        }
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let f = self.t[r * w + pc];
            if f.abs() < 1e-300 {
                continue;
            }
            for j in 0..w {
                let v = self.t[pr * w + j];
                if v != 0.0 {
                    self.t[r * w + j] -= f * v;
                }
            }
        }
        self.basis[pr] = pc;
    }

    /// Set the objective row to `-cost` reduced against the current basis
    /// (minimization form: entering columns have negative reduced cost).
    fn set_objective(&mut self, cost: &[f64]) {
        let w = self.cols + 1;
        let obj = self.rows * w;
        for j in 0..w {
            self.t[obj + j] = if j < cost.len() { cost[j] } else { 0.0 };
        }
        for r in 0..self.rows {
            let cb = cost.get(self.basis[r]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for j in 0..w {
                    self.t[obj + j] -= cb * self.t[r * w + j];
                }
            }
        }
    }

    /// Minimize over columns `< limit`. Returns false when unbounded.
    fn optimize(&mut self, limit: usize) -> bool {
        let w = self.cols + 1;
        let obj = self.rows * w;
        let mut stall = 0usize;
        let mut last = f64::INFINITY;
        let mut bland = false;
        for _ in 0..50_000 {
            let mut pc = None;
            let mut best = -EPS;
            for j in 0..limit {
                let d = self.t[obj + j];
                if d < -EPS {
                    if bland {
                        pc = Some(j);
                        break;
                    }
                    if d < best {
                        best = d;
                        pc = Some(j);
                    }
                }
            }
            let Some(pc) = pc else { return true };
            let mut pr = None;
            let mut ratio = f64::INFINITY;
            for r in 0..self.rows {
                let a = self.t[r * w + pc];
                if a > EPS {
                    let q = self.t[r * w + self.cols] / a;
                    if q < ratio - 1e-12 || (q <= ratio + 1e-12 && pr.map_or(true, |p: usize| self.basis[r] < self.basis[p])) {
                        ratio = q;
                        pr = Some(r);
                    }
                }
            }
            let Some(pr) = pr else { return false };
            self.pivot(pr, pc);
            let val = -self.t[obj + self.cols];
            if val < last - 1e-12 {
                last = val;
                stall = 0;
            } else {
                stall += 1;
                if stall > 50 {
                    bland = true;
                }
            }
        }
        true
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let w = self.cols + 1;
        // phase 1: minimize the sum of artificials
        let mut cost = vec![0.0; self.cols];
        for j in self.n_art_start..self.cols {
            cost[j] = 1.0;
        }
        self.set_objective(&cost);
        self.optimize(self.cols);
        let infeas = -self.at(self.rows, self.cols);
        if infeas.abs() > 1e-7 {
            return LpOutcome::Infeasible { infeasibility: infeas.abs() };
        }
        // drive artificials out of the basis
        for r in 0..self.rows {
            if self.basis[r] >= self.n_art_start {
                if let Some(j) = (0..self.n_art_start).find(|&j| self.t[r * w + j].abs() > 1e-9) {
                    self.pivot(r, j);
                }
            }
        }
        // phase 2 on structural and slack columns, maximizing c . x
        let mut cost = vec![0.0; self.cols];
        for j in 0..self.n_struct {
            cost[j] = -lp.c[j];
        }
        self.set_objective(&cost);
        if !self.optimize(self.n_art_start) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![0.0; self.n_struct];
        for r in 0..self.rows {
            if self.basis[r] < self.n_struct {
                x[self.basis[r]] = self.at(r, self.cols);
            }
        }
        let value = lp.c.iter().zip(&x).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { x, value }
    }
}
