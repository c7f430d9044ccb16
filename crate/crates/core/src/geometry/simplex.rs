//! Two-phase tableau simplex over exact rationals with Bland's rule.
//!
//! Bland's rule (lowest-index entering column, lowest-index basic variable on
//! ratio ties) rules out cycling, so every solve terminates without any
//! numerical tolerance.

use num_traits::{Signed, Zero};

use super::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub(crate) struct Row {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Maximize `objective . x` subject to `rows`; `free[j]` marks variables
/// without a sign constraint, the rest are `>= 0`.
#[derive(Clone, Debug)]
pub(crate) struct Program {
    pub free: Vec<bool>,
    pub rows: Vec<Row>,
    pub objective: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Outcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl Program {
    pub fn new(free: Vec<bool>) -> Self {
        let n = free.len();
        Program { free, rows: Vec::new(), objective: vec![Rational::zero(); n] }
    }

    pub fn n_vars(&self) -> usize {
        self.free.len()
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        debug_assert_eq!(coeffs.len(), self.n_vars());
        self.rows.push(Row { coeffs, relation, rhs });
    }

    pub fn solve(&self) -> Outcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    obj: Vec<Rational>,
    n_cols: usize,
    /// Columns `>= first_artificial` are artificial.
    first_artificial: usize,
    /// `(positive column, negative column)` of each program variable.
    var_cols: Vec<(usize, Option<usize>)>,
}

impl Tableau {
    fn build(program: &Program) -> Tableau {
        let mut var_cols = Vec::with_capacity(program.n_vars());
        let mut next = 0;
        for &free in &program.free {
            if free {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            } else {
                var_cols.push((next, None));
                next += 1;
            }
        }
        let n_struct = next;

        // Normalize every right-hand side to be nonnegative.
        let normalized: Vec<(Vec<Rational>, Relation, Rational)> = program
            .rows
            .iter()
            .map(|row| {
                if row.rhs.is_negative() {
                    let flipped = match row.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (row.coeffs.iter().map(|c| -c).collect(), flipped, -row.rhs.clone())
                } else {
                    (row.coeffs.clone(), row.relation, row.rhs.clone())
                }
            })
            .collect();

        let n_slack = normalized.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = normalized.iter().filter(|r| r.1 != Relation::Le).count();
        let first_artificial = n_struct + n_slack;
        let n_cols = first_artificial + n_art;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut slack, mut art) = (n_struct, first_artificial);
        for (coeffs, relation, rhs) in normalized {
            let mut row = vec![Rational::zero(); n_cols + 1];
            for (j, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (pos, neg) = var_cols[j];
                row[pos] = c.clone();
                if let Some(neg) = neg {
                    row[neg] = -c;
                }
            }
            row[n_cols] = rhs;
            match relation {
                Relation::Le => {
                    row[slack] = Rational::from_integer(1.into());
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = Rational::from_integer((-1).into());
                    slack += 1;
                    row[art] = Rational::from_integer(1.into());
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = Rational::from_integer(1.into());
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            obj: vec![Rational::zero(); n_cols + 1],
            n_cols,
            first_artificial,
            var_cols,
        }
    }

    fn run(mut self, program: &Program) -> Outcome {
        if self.first_artificial < self.n_cols {
            // Phase 1: maximize minus the sum of artificials.
            for j in self.first_artificial..self.n_cols {
                self.obj[j] = Rational::from_integer(1.into());
            }
            self.price_out_basis();
            let finished = self.iterate(self.n_cols);
            debug_assert!(finished, "phase 1 is bounded");
            if self.obj[self.n_cols].is_negative() {
                return Outcome::Infeasible;
            }
            self.expel_artificials();
        }

        // Phase 2.
        self.obj.iter_mut().for_each(|x| *x = Rational::zero());
        for (j, c) in program.objective.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (pos, neg) = self.var_cols[j];
            self.obj[pos] = -c;
            if let Some(neg) = neg {
                self.obj[neg] = c.clone();
            }
        }
        self.price_out_basis();
        if !self.iterate(self.first_artificial) {
            return Outcome::Unbounded;
        }

        let mut values = vec![Rational::zero(); self.n_cols];
        for (i, &b) in self.basis.iter().enumerate() {
            values[b] = self.rows[i][self.n_cols].clone();
        }
        let point = self
            .var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &values[pos] - &values[neg],
                None => values[pos].clone(),
            })
            .collect();
        Outcome::Optimal { value: self.obj[self.n_cols].clone(), point }
    }

    /// Makes the objective row zero on every basic column.
    fn price_out_basis(&mut self) {
        for i in 0..self.rows.len() {
            let b = self.basis[i];
            if self.obj[b].is_zero() {
                continue;
            }
            let factor = self.obj[b].clone();
            for (o, r) in self.obj.iter_mut().zip(&self.rows[i]) {
                if !r.is_zero() {
                    *o -= &factor * r;
                }
            }
        }
    }

    /// Runs pivots with entering columns restricted to `< col_limit`.
    /// Returns false when the objective is unbounded.
    fn iterate(&mut self, col_limit: usize) -> bool {
        loop {
            let Some(enter) = (0..col_limit).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &row[self.n_cols] / a;
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, enter);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        let mut support = Vec::new();
        for (j, x) in self.rows[r].iter_mut().enumerate() {
            if !x.is_zero() {
                *x *= &inv;
                support.push(j);
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for &j in &support {
                row[j] -= &factor * &pivot_row[j];
            }
        }
        if !self.obj[c].is_zero() {
            let factor = self.obj[c].clone();
            for &j in &support {
                self.obj[j] -= &factor * &pivot_row[j];
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// After a feasible phase 1, pivots zero-level artificials out of the
    /// basis, dropping rows that turn out to be redundant.
    fn expel_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.first_artificial {
                i += 1;
                continue;
            }
            match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}
