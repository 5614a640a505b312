//! Phase-one simplex over a generic scalar with Bland's rule.
//!
//! Decides feasibility of `A x = b, x ≥ 0` with `b ≥ 0`. An infeasible
//! system comes with a Farkas vector `y` (`yᵀA ≤ 0`, `yᵀb > 0`); a feasible
//! one with a vertex `x`. Both are checkable without the tableau.

use serde::Serialize;

use crate::scalar::Scalar;

/// One pivot: entering column and leaving row of the tableau.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<W> {
    Feasible { x: Vec<W> },
    Infeasible { farkas: Vec<W> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<W> {
    pub outcome: LpOutcome<W>,
    pub pivots: Vec<Pivot>,
}

/// Dense phase-one tableau: `m` constraint rows over `n` structural and `m`
/// artificial columns, plus the right-hand side.
struct Tableau<W> {
    m: usize,
    n: usize,
    rows: Vec<Vec<W>>,
    rhs: Vec<W>,
    /// reduced costs of all `n + m` columns
    cost: Vec<W>,
    basis: Vec<usize>,
}

impl<W: Scalar> Tableau<W> {
    fn new(a: &[Vec<W>], b: &[W]) -> Self {
        let m = a.len();
        let n = a.first().map_or(0, Vec::len);
        let rows: Vec<Vec<W>> = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..m).map(|k| if k == i { W::one() } else { W::zero() }));
                r
            })
            .collect();
        let cost = (0..n + m)
            .map(|j| {
                if j < n {
                    rows.iter().fold(W::zero(), |acc, r| acc - r[j].clone())
                } else {
                    W::zero()
                }
            })
            .collect();
        Self {
            m,
            n,
            rows,
            rhs: b.to_vec(),
            cost,
            basis: (n..n + m).collect(),
        }
    }

    fn objective(&self) -> W {
        self.basis
            .iter()
            .zip(&self.rhs)
            .filter(|(&j, _)| j >= self.n)
            .fold(W::zero(), |acc, (_, v)| acc + v.clone())
    }

    fn pivot(&mut self, p: Pivot) {
        let Pivot { row, col } = p;
        let inv = W::one() / self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        self.rhs[row] = self.rhs[row].clone() * inv;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let f = self.rows[i][col].clone();
            if f.is_zero() {
                continue;
            }
            for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * p.clone();
            }
            self.rhs[i] = self.rhs[i].clone() - f * pivot_rhs.clone();
        }
        let f = self.cost[col].clone();
        if !f.is_zero() {
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * p.clone();
            }
        }
        self.basis[row] = col;
    }

    fn choose(&self, eps: &W) -> Option<Pivot> {
        let col = (0..self.n + self.m).find(|&j| self.cost[j].sign_tol(eps) < 0)?;
        let mut best: Option<(usize, W)> = None;
        for i in 0..self.m {
            if self.rows[i][col].sign_tol(eps) <= 0 {
                continue;
            }
            let ratio = self.rhs[i].clone() / self.rows[i][col].clone();
            let better = match &best {
                None => true,
                Some((r, b)) => ratio < *b || (ratio == *b && self.basis[i] < self.basis[*r]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        // the phase-one objective is bounded below, so a column always has a row
        best.map(|(row, _)| Pivot { row, col })
    }

    fn result(&self, eps: &W) -> LpOutcome<W> {
        if self.objective().sign_tol(eps) > 0 {
            // duals of the artificial columns: π_i = c_i − d_i with c_i = 1
            let farkas = (0..self.m)
                .map(|i| W::one() - self.cost[self.n + i].clone())
                .collect();
            LpOutcome::Infeasible { farkas }
        } else {
            let mut x = vec![W::zero(); self.n];
            for (i, &j) in self.basis.iter().enumerate() {
                if j < self.n {
                    x[j] = self.rhs[i].clone();
                }
            }
            LpOutcome::Feasible { x }
        }
    }
}

/// Solves the phase-one problem for `A x = b, x ≥ 0`. Rows of `a` are
/// constraints; every `b_i` must be nonnegative.
pub fn solve<W: Scalar>(a: &[Vec<W>], b: &[W], eps: &W) -> LpSolution<W> {
    debug_assert!(b.iter().all(|v| *v >= W::zero()));
    let mut t = Tableau::new(a, b);
    let mut pivots = Vec::new();
    while let Some(p) = t.choose(eps) {
        t.pivot(p);
        pivots.push(p);
    }
    LpSolution {
        outcome: t.result(eps),
        pivots,
    }
}

/// Re-executes a pivot sequence on a fresh tableau and returns the outcome
/// it ends in, or `None` if a pivot is out of range or on a zero entry.
pub fn replay_pivots<W: Scalar>(a: &[Vec<W>], b: &[W], pivots: &[Pivot], eps: &W) -> Option<LpOutcome<W>> {
    let mut t = Tableau::new(a, b);
    for &p in pivots {
        if p.row >= t.m || p.col >= t.n + t.m || t.rows[p.row][p.col].is_zero_tol(eps) {
            return None;
        }
        t.pivot(p);
    }
    if t.choose(eps).is_some() {
        return None;
    }
    Some(t.result(eps))
}

/// `yᵀA_j ≤ 0` for every column and `yᵀb > 0`.
pub fn is_farkas_certificate<W: Scalar>(a: &[Vec<W>], b: &[W], y: &[W], eps: &W) -> bool {
    if y.len() != a.len() || b.len() != a.len() {
        return false;
    }
    let n = a.first().map_or(0, Vec::len);
    let yb = y.iter().zip(b).fold(W::zero(), |acc, (y, b)| acc + y.clone() * b.clone());
    if yb.sign_tol(eps) <= 0 {
        return false;
    }
    (0..n).all(|j| {
        let s = y
            .iter()
            .zip(a)
            .fold(W::zero(), |acc, (y, row)| acc + y.clone() * row[j].clone());
        s.sign_tol(eps) <= 0
    })
}

/// `A x = b` and `x ≥ 0`.
pub fn is_solution<W: Scalar>(a: &[Vec<W>], b: &[W], x: &[W], eps: &W) -> bool {
    let n = a.first().map_or(0, Vec::len);
    if x.len() != n || x.iter().any(|v| v.sign_tol(eps) < 0) {
        return false;
    }
    a.iter().zip(b).all(|(row, bi)| {
        let lhs = row
            .iter()
            .zip(x)
            .fold(W::zero(), |acc, (a, x)| acc + a.clone() * x.clone());
        (lhs - bi.clone()).is_zero_tol(eps)
    })
}
