//! Dense two-phase simplex for `min c·x  s.t.  A x = b, x ≥ 0`.
//!
//! Generic over the scalar: with [`BigRational`] every pivot is exact and
//! zero tests are exact; with `f64` comparisons use a fixed pivot tolerance.
//! Bland's rule is used throughout, so the method terminates on degenerate
//! problems.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait LpScalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn is_positive_tol(&self) -> bool;
    fn is_negative_tol(&self) -> bool;
    fn is_zero_tol(&self) -> bool {
        !self.is_positive_tol() && !self.is_negative_tol()
    }
}

impl LpScalar for BigRational {
    fn is_positive_tol(&self) -> bool {
        self.is_positive()
    }
    fn is_negative_tol(&self) -> bool {
        self.is_negative()
    }
}

const F64_PIVOT_TOL: f64 = 1e-11;

impl LpScalar for f64 {
    fn is_positive_tol(&self) -> bool {
        *self > F64_PIVOT_TOL
    }
    fn is_negative_tol(&self) -> bool {
        *self < -F64_PIVOT_TOL
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, objective: T },
    Infeasible,
    Unbounded,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    /// Reduced costs; the last entry is minus the objective value.
    cost: Vec<T>,
    basis: Vec<usize>,
}

impl<T: LpScalar> Tableau<T> {
    fn rhs(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<T>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.basis[r] = c;
    }

    /// Runs simplex iterations over the columns `0..active`. Returns false
    /// when the objective is unbounded below.
    fn optimize(&mut self, active: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(enter) = (0..active).find(|&j| self.cost[j].is_negative_tol()) else {
                return true;
            };
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive_tol() {
                    continue;
                }
                let ratio = row[rhs].clone() / row[enter].clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        let diff = ratio.clone() - lr.clone();
                        diff.is_negative_tol() || (diff.is_zero_tol() && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Solves `min c·x  s.t.  A x = b, x ≥ 0`. Redundant equality rows are
/// dropped after phase one, so an optimal basic solution has at most
/// `rank(A)` nonzero entries.
pub fn solve<T: LpScalar>(a: &[Vec<T>], b: &[T], c: &[T]) -> LpOutcome<T> {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "one right-hand side per row");
    assert!(a.iter().all(|row| row.len() == n), "rows must have one entry per variable");

    // phase one: artificial columns n..n+m, rhs at n+m
    let width = n + m + 1;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative_tol() || (bi.is_zero_tol() && *bi < T::zero());
        let mut r: Vec<T> = Vec::with_capacity(width);
        r.extend(row.iter().map(|v| if flip { -v.clone() } else { v.clone() }));
        r.extend((0..m).map(|j| if j == i { T::one() } else { T::zero() }));
        r.push(if flip { -bi.clone() } else { bi.clone() });
        rows.push(r);
    }
    let mut cost = vec![T::zero(); width];
    for row in &rows {
        for j in (0..n).chain(std::iter::once(n + m)) {
            cost[j] = cost[j].clone() - row[j].clone();
        }
    }
    let mut tab = Tableau {
        rows,
        cost,
        basis: (n..n + m).collect(),
    };
    tab.optimize(n);
    if (-tab.cost[n + m].clone()).is_positive_tol() {
        return LpOutcome::Infeasible;
    }

    // drive remaining artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.rows[i][j].is_zero_tol()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // phase two on the original columns
    for row in tab.rows.iter_mut() {
        let rhs = row[n + m].clone();
        row.truncate(n);
        row.push(rhs);
    }
    let mut cost: Vec<T> = c.to_vec();
    cost.push(T::zero());
    for (row, &bj) in tab.rows.iter().zip(&tab.basis) {
        let cb = c[bj].clone();
        if cb.is_zero() {
            continue;
        }
        for (v, rv) in cost.iter_mut().zip(row) {
            *v = v.clone() - cb.clone() * rv.clone();
        }
    }
    tab.cost = cost;
    if !tab.optimize(n) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![T::zero(); n];
    for (row, &bj) in tab.rows.iter().zip(&tab.basis) {
        x[bj] = row[n].clone();
    }
    let objective = -tab.cost[n].clone();
    LpOutcome::Optimal { x, objective }
}
