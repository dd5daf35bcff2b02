// SPDX-License-Identifier: Apache-2.0

//! Dense primal simplex over exact rationals.
//!
//! Solves `maximize c·x subject to A x ≤ b, x ≥ 0` with `b ≥ 0`, so the
//! all-slack basis is feasible and no phase one is needed. Pivoting follows
//! Bland's rule (smallest-index entering and leaving variables), which
//! cannot cycle; results are therefore deterministic for identical inputs.

use crate::rational::Rational;

/// One `Σ coeff·x ≤ rhs` row, stored sparsely.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        solution: Vec<Rational>,
        pivots: usize,
    },
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rational) {
        self.objective[var] = coeff;
    }

    /// Adds `Σ coeff·x ≤ rhs`. Requires `rhs ≥ 0`.
    pub fn add_le(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational) {
        assert!(!rhs.is_negative(), "right-hand sides must be non-negative");
        assert!(coeffs.iter().all(|(j, _)| *j < self.num_vars));
        self.constraints.push(Constraint { coeffs, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::new(self).run()
    }
}

/// Consecutive zero-step pivots tolerated before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 50;

struct Tableau {
    num_vars: usize,
    // rows[i][k]: coefficient of nonbasic column k in row i.
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    reduced: Vec<Rational>,
    value: Rational,
    // Variable ids: 0..num_vars structural, num_vars.. slacks.
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
}

impl Tableau {
    fn new(lp: &LinearProgram) -> Self {
        let k = lp.num_vars;
        let rows = lp
            .constraints
            .iter()
            .map(|c| {
                let mut row = vec![Rational::zero(); k];
                for (j, a) in &c.coeffs {
                    row[*j] += a;
                }
                row
            })
            .collect();
        Tableau {
            num_vars: k,
            rows,
            rhs: lp.constraints.iter().map(|c| c.rhs.clone()).collect(),
            reduced: lp.objective.clone(),
            value: Rational::zero(),
            basic: (k..k + lp.constraints.len()).collect(),
            nonbasic: (0..k).collect(),
        }
    }

    fn run(mut self) -> LpOutcome {
        let mut pivots = 0;
        let mut degenerate_run = 0;
        let mut bland = false;
        loop {
            let entering = if bland {
                (0..self.nonbasic.len())
                    .filter(|&k| self.reduced[k].is_positive())
                    .min_by_key(|&k| self.nonbasic[k])
            } else {
                self.dantzig_column()
            };
            let Some(col) = entering else {
                return self.finish(pivots);
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leaving {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basic[i] < self.basic[*best])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((row, step)) = leaving else {
                return LpOutcome::Unbounded;
            };
            if step.is_zero() {
                degenerate_run += 1;
                if degenerate_run >= DEGENERATE_LIMIT {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(row, col);
            pivots += 1;
        }
    }

    /// Largest reduced cost, ties to the smallest variable id.
    fn dantzig_column(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for k in 0..self.nonbasic.len() {
            if !self.reduced[k].is_positive() {
                continue;
            }
            best = match best {
                Some(b)
                    if self.reduced[b] > self.reduced[k]
                        || (self.reduced[b] == self.reduced[k]
                            && self.nonbasic[b] < self.nonbasic[k]) =>
                {
                    Some(b)
                }
                _ => Some(k),
            };
        }
        best
    }

    fn pivot(&mut self, r: usize, k: usize) {
        let p = self.rows[r][k].clone();
        let inv = p.recip();
        {
            let row = &mut self.rows[r];
            for (j, x) in row.iter_mut().enumerate() {
                if j != k && !x.is_zero() {
                    *x *= &inv;
                }
            }
            row[k] = inv.clone();
            self.rhs[r] *= &inv;
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let support: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| j != k && !pivot_row[j].is_zero())
            .collect();
        let pivot_rhs = self.rhs[r].clone();

        for i in 0..self.rows.len() {
            if i == r || self.rows[i][k].is_zero() {
                continue;
            }
            let a = self.rows[i][k].clone();
            let row = &mut self.rows[i];
            for &j in &support {
                row[j] -= &a * &pivot_row[j];
            }
            row[k] = -(&a * &inv);
            if !pivot_rhs.is_zero() {
                self.rhs[i] -= &a * &pivot_rhs;
            }
        }
        if !self.reduced[k].is_zero() {
            let c = self.reduced[k].clone();
            for &j in &support {
                self.reduced[j] -= &c * &pivot_row[j];
            }
            self.reduced[k] = -(&c * &inv);
            self.value += &c * &pivot_rhs;
        }
        self.rows[r] = pivot_row;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[k]);
    }

    fn finish(self, pivots: usize) -> LpOutcome {
        let mut solution = vec![Rational::zero(); self.num_vars];
        for (i, &var) in self.basic.iter().enumerate() {
            if var < self.num_vars {
                solution[var] = self.rhs[i].clone();
            }
        }
        LpOutcome::Optimal {
            value: self.value,
            solution,
            pivots,
        }
    }
}
