//! Dense two-phase simplex method.
//!
//! Problems here are desk-sized (tens of rows and columns), so a full tableau
//! with Bland's anti-cycling rule is adequate and keeps every pivot
//! deterministic.

use crate::error::{Error, Result};

/// Pivot elements smaller than this are treated as zero.
pub const PIVOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `maximize objective·x` subject to the constraints and `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

impl LinearProgram {
    pub fn maximize(objective: Vec<f64>) -> Self {
        LinearProgram {
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        assert_eq!(coeffs.len(), self.objective.len(), "constraint width");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn solve(&self) -> Result<LpSolution> {
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    /// `rows × (width + 1)`; the last column is the right-hand side.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n_vars: usize,
    /// Columns `[first_artificial, width)` are artificials.
    first_artificial: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.n_vars();
        let rows: Vec<Constraint> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs < 0.0 {
                    Constraint {
                        coeffs: c.coeffs.iter().map(|v| -v).collect(),
                        relation: match c.relation {
                            Relation::Le => Relation::Ge,
                            Relation::Ge => Relation::Le,
                            Relation::Eq => Relation::Eq,
                        },
                        rhs: -c.rhs,
                    }
                } else {
                    c.clone()
                }
            })
            .collect();

        let n_slack = rows.iter().filter(|c| c.relation != Relation::Eq).count();
        let n_art = rows.iter().filter(|c| c.relation != Relation::Le).count();
        let first_artificial = n + n_slack;
        let width = first_artificial + n_art;

        let mut t = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let (mut slack, mut art) = (n, first_artificial);
        for c in &rows {
            let mut row = vec![0.0; width + 1];
            row[..n].copy_from_slice(&c.coeffs);
            row[width] = c.rhs;
            match c.relation {
                Relation::Le => {
                    row[slack] = 1.0;
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[art] = 1.0;
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = 1.0;
                    basis.push(art);
                    art += 1;
                }
            }
            t.push(row);
        }
        Tableau {
            t,
            basis,
            n_vars: n,
            first_artificial,
            width,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.t[r][c];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for j in 0..=w {
                    row[j] -= f * pivot_row[j];
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Runs primal simplex maximizing `cost·z` over columns `< allowed`.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<()> {
        let w = self.width;
        let max_iter = 50_000 + 100 * (w + self.t.len());
        for _ in 0..max_iter {
            // Bland: smallest-index column with negative reduced cost.
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let z: f64 = self
                    .t
                    .iter()
                    .zip(&self.basis)
                    .map(|(row, &b)| cost[b] * row[j])
                    .sum();
                z - cost[j] < -PIVOT_TOL
            });
            let Some(e) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for (r, row) in self.t.iter().enumerate() {
                if row[e] > PIVOT_TOL {
                    let ratio = row[w] / row[e];
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-12
                                || (ratio <= lratio + 1e-12 && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::Lp("is unbounded"));
            };
            self.pivot(r, e);
        }
        Err(Error::Lp("exceeded its pivot budget"))
    }

    fn solve(mut self, objective: &[f64]) -> Result<LpSolution> {
        let w = self.width;
        if self.first_artificial < w {
            let mut phase1 = vec![0.0; w];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = -1.0;
            }
            self.optimize(&phase1, w)?;
            let infeas: f64 = self
                .t
                .iter()
                .zip(&self.basis)
                .filter(|(_, &b)| b >= self.first_artificial)
                .map(|(row, _)| row[w])
                .sum();
            let scale = 1.0 + self.t.iter().map(|r| r[w].abs()).fold(0.0, f64::max);
            if infeas > 1e-9 * scale {
                return Err(Error::Lp("is infeasible"));
            }
            // Drive zero-level artificials out of the basis where possible.
            for r in 0..self.t.len() {
                if self.basis[r] >= self.first_artificial {
                    if let Some(c) = (0..self.first_artificial).find(|&c| self.t[r][c].abs() > PIVOT_TOL) {
                        self.pivot(r, c);
                    }
                }
            }
        }
        let mut cost = vec![0.0; w];
        cost[..self.n_vars].copy_from_slice(objective);
        self.optimize(&cost, self.first_artificial)?;

        let mut x = vec![0.0; self.n_vars];
        for (row, &b) in self.t.iter().zip(&self.basis) {
            if b < self.n_vars {
                x[b] = row[w].max(0.0);
            }
        }
        let objective = x.iter().zip(objective).map(|(a, b)| a * b).sum();
        Ok(LpSolution { x, objective })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36
        let mut lp = LinearProgram::maximize(vec![3.0, 5.0]);
        lp.constrain(vec![1.0, 0.0], Relation::Le, 4.0)
            .constrain(vec![0.0, 2.0], Relation::Le, 12.0)
            .constrain(vec![3.0, 2.0], Relation::Le, 18.0);
        let s = lp.solve().unwrap();
        assert!((s.objective - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + y (= max −x − y), x + y ≥ 2, x − y = 1 → x = 1.5, y = 0.5
        let mut lp = LinearProgram::maximize(vec![-1.0, -1.0]);
        lp.constrain(vec![1.0, 1.0], Relation::Ge, 2.0)
            .constrain(vec![1.0, -1.0], Relation::Eq, 1.0);
        let s = lp.solve().unwrap();
        assert!((s.objective + 2.0).abs() < 1e-12);
        assert!((s.x[0] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn negative_rhs_is_flipped() {
        // max x, −x ≥ −3 → x = 3
        let mut lp = LinearProgram::maximize(vec![1.0]);
        lp.constrain(vec![-1.0], Relation::Ge, -3.0);
        assert!((lp.solve().unwrap().x[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::maximize(vec![1.0]);
        lp.constrain(vec![1.0], Relation::Le, 1.0)
            .constrain(vec![1.0], Relation::Ge, 2.0);
        assert_eq!(lp.solve(), Err(Error::Lp("is infeasible")));

        let mut lp = LinearProgram::maximize(vec![1.0, 0.0]);
        lp.constrain(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(lp.solve(), Err(Error::Lp("is unbounded")));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::maximize(vec![1.0, 2.0]);
        lp.constrain(vec![1.0, 1.0], Relation::Eq, 1.0)
            .constrain(vec![2.0, 2.0], Relation::Eq, 2.0);
        let s = lp.solve().unwrap();
        assert!((s.objective - 2.0).abs() < 1e-12);
    }
}
