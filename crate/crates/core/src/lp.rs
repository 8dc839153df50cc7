//! A small exact linear-programming solver.
//!
//! Dense two-phase primal simplex over rationals with Bland's rule, which
//! rules out cycling. Intended for the tiny programs solved per s-t cut and
//! per leximin stage; it makes no attempt to scale.

use num_traits::{Signed, Zero};

use crate::rational::{zero, Q};

/// Sense of a constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `coeffs · x (rel) rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rel: Relation,
    pub rhs: Q,
}

/// Maximize `objective · x` subject to the constraints and `x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Q>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Q, x: Vec<Q> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, objective: vec![zero(); num_vars], constraints: Vec::new() }
    }

    pub fn maximize(mut self, objective: Vec<Q>) -> Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<Q>, rel: Relation, rhs: Q) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    num_vars: usize,
    /// columns `>= first_artificial` are artificial
    first_artificial: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.constraints.len();
        let normalized: Vec<(Vec<Q>, Relation, Q)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let rel = match c.rel {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|a| -a).collect(), rel, -&c.rhs)
                } else {
                    (c.coeffs.clone(), c.rel, c.rhs.clone())
                }
            })
            .collect();
        let slacks = normalized.iter().filter(|c| c.1 != Relation::Eq).count();
        let artificials = normalized.iter().filter(|c| c.1 != Relation::Le).count();
        let first_slack = lp.num_vars;
        let first_artificial = first_slack + slacks;
        let width = first_artificial + artificials;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut next_slack, mut next_art) = (first_slack, first_artificial);
        for (coeffs, rel, rhs) in normalized {
            let mut row = coeffs;
            row.resize(width + 1, zero());
            row[width] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = crate::rational::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -crate::rational::one();
                    next_slack += 1;
                    row[next_art] = crate::rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = crate::rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        Self { rows, basis, num_vars: lp.num_vars, first_artificial, width }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over the current basis, never entering columns at
    /// or beyond `limit`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Q], limit: usize) -> bool {
        loop {
            // reduced costs: c_B·B⁻¹A_j − c_j
            let entering = (0..limit).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut z = -&cost[j];
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if !row[j].is_zero() && !cost[b].is_zero() {
                        z += &cost[b] * &row[j];
                    }
                }
                z.is_negative()
            });
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, j),
                None => return false,
            }
        }
    }

    fn solve(mut self, objective: &[Q]) -> LpOutcome {
        if self.first_artificial < self.width {
            let mut phase1 = vec![zero(); self.width];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = -crate::rational::one();
            }
            self.optimize(&phase1, self.width);
            let infeasibility: Q = self
                .rows
                .iter()
                .zip(&self.basis)
                .filter(|(_, &b)| b >= self.first_artificial)
                .map(|(row, _)| row[self.width].clone())
                .sum();
            if infeasibility.is_positive() {
                return LpOutcome::Infeasible;
            }
            // drive zero-valued artificials out of the basis
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                        Some(j) => self.pivot(r, j),
                        None => {
                            self.rows.remove(r);
                            self.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }
        let mut cost = objective.to_vec();
        cost.resize(self.width, zero());
        if !self.optimize(&cost, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![zero(); self.num_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.num_vars {
                x[b] = row[self.width].clone();
            }
        }
        let value = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpOutcome::Optimal { value, x }
    }
}
