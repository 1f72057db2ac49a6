//! Exact rational linear programming (two-phase simplex, Bland's rule).

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::RatVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: RatVector,
    pub relation: Relation,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: RatVector, relation: Relation, rhs: BigRational) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: BigRational, point: RatVector },
}

/// `min objective . x` subject to the constraints; variables are free unless
/// flagged non-negative.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    vars: usize,
    nonneg: Vec<bool>,
    constraints: Vec<Constraint>,
    objective: RatVector,
}

impl LinearProgram {
    pub fn new(vars: usize) -> Self {
        LinearProgram {
            vars,
            nonneg: vec![false; vars],
            constraints: Vec::new(),
            objective: vec![BigRational::zero(); vars],
        }
    }

    pub fn nonnegative(mut self, var: usize) -> Self {
        self.nonneg[var] = true;
        self
    }

    pub fn all_nonnegative(mut self) -> Self {
        self.nonneg.iter_mut().for_each(|b| *b = true);
        self
    }

    pub fn constrain(&mut self, coeffs: RatVector, relation: Relation, rhs: BigRational) -> &mut Self {
        assert_eq!(coeffs.len(), self.vars, "constraint width mismatch");
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
        self
    }

    pub fn minimize(mut self, objective: RatVector) -> Self {
        assert_eq!(objective.len(), self.vars);
        self.objective = objective;
        self
    }

    /// A feasible point, ignoring the objective.
    pub fn feasible_point(&self) -> Option<RatVector> {
        let mut lp = self.clone();
        lp.objective = vec![BigRational::zero(); self.vars];
        match lp.solve() {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible_point().is_some()
    }

    pub fn solve(&self) -> LpOutcome {
        // column layout: one column per non-negative var, two per free var,
        // then one slack per inequality
        let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.vars);
        let mut ncols = 0;
        for &nn in &self.nonneg {
            if nn {
                var_cols.push((ncols, None));
                ncols += 1;
            } else {
                var_cols.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let structural = ncols;
        let slack_count = self.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let m = self.constraints.len();
        let total = structural + slack_count + m; // + artificials
        let rhs_col = total;

        let mut tab: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); total + 1]; m];
        let mut slack = structural;
        for (r, con) in self.constraints.iter().enumerate() {
            for (i, a) in con.coeffs.iter().enumerate() {
                let (p, q) = var_cols[i];
                tab[r][p] = a.clone();
                if let Some(q) = q {
                    tab[r][q] = -a;
                }
            }
            match con.relation {
                Relation::Eq => {}
                Relation::Ge => {
                    tab[r][slack] = -BigRational::from_integer(1.into());
                    slack += 1;
                }
                Relation::Le => {
                    tab[r][slack] = BigRational::from_integer(1.into());
                    slack += 1;
                }
            }
            tab[r][rhs_col] = con.rhs.clone();
            if con.rhs.is_negative() {
                for x in tab[r].iter_mut() {
                    *x = -&*x;
                }
            }
            tab[r][structural + slack_count + r] = BigRational::from_integer(1.into());
        }
        let first_art = structural + slack_count;
        let mut basis: Vec<usize> = (0..m).map(|r| first_art + r).collect();

        // phase 1
        let mut cost = vec![BigRational::zero(); total];
        for c in cost.iter_mut().skip(first_art) {
            *c = BigRational::from_integer(1.into());
        }
        if !run_simplex(&mut tab, &mut basis, &cost, total, None) {
            unreachable!("phase one is bounded below");
        }
        let art_sum: BigRational = basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= first_art)
            .map(|(r, _)| tab[r][rhs_col].clone())
            .sum();
        if !art_sum.is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive zero-valued artificials out of the basis
        let mut r = 0;
        while r < tab.len() {
            if basis[r] >= first_art {
                match (0..first_art).find(|&c| !tab[r][c].is_zero()) {
                    Some(c) => pivot(&mut tab, &mut basis, r, c),
                    None => {
                        tab.remove(r);
                        basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }

        // phase 2, artificial columns forbidden
        let mut cost = vec![BigRational::zero(); total];
        for (i, obj) in self.objective.iter().enumerate() {
            let (p, q) = var_cols[i];
            cost[p] = obj.clone();
            if let Some(q) = q {
                cost[q] = -obj;
            }
        }
        if !run_simplex(&mut tab, &mut basis, &cost, total, Some(first_art)) {
            return LpOutcome::Unbounded;
        }
        let mut y = vec![BigRational::zero(); total];
        for (r, &b) in basis.iter().enumerate() {
            y[b] = tab[r][rhs_col].clone();
        }
        let point: RatVector = var_cols
            .iter()
            .map(|&(p, q)| match q {
                Some(q) => &y[p] - &y[q],
                None => y[p].clone(),
            })
            .collect();
        let value = point.iter().zip(&self.objective).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { value, point }
    }
}

fn pivot(tab: &mut [Vec<BigRational>], basis: &mut [usize], r: usize, c: usize) {
    let inv = tab[r][c].recip();
    for x in tab[r].iter_mut() {
        *x = &*x * &inv;
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let k = row[c].clone();
        for (x, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= &k * p;
            }
        }
    }
    basis[r] = c;
}

/// Minimises `cost` from the current basic feasible solution. Columns at or
/// beyond `forbid_from` never enter. Returns false when unbounded.
fn run_simplex(
    tab: &mut [Vec<BigRational>],
    basis: &mut [usize],
    cost: &[BigRational],
    total: usize,
    forbid_from: Option<usize>,
) -> bool {
    let limit = forbid_from.unwrap_or(total);
    loop {
        // reduced costs: c_j - sum_r c_{basis(r)} * tab[r][j]
        let entering = (0..limit).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut rc = cost[j].clone();
            for (r, &b) in basis.iter().enumerate() {
                if !cost[b].is_zero() && !tab[r][j].is_zero() {
                    rc -= &cost[b] * &tab[r][j];
                }
            }
            rc.is_negative()
        });
        let Some(c) = entering else { return true };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..tab.len() {
            if tab[r][c].is_positive() {
                let ratio = &tab[r][total] / &tab[r][c];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { return false };
        pivot(tab, basis, r, c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    #[test]
    fn simple_minimum() {
        // min x + y s.t. x + 2y >= 2, 3x + y >= 3, x, y >= 0
        let mut lp = LinearProgram::new(2).all_nonnegative();
        lp.constrain(vec![rat(1, 1), rat(2, 1)], Relation::Ge, rat(2, 1));
        lp.constrain(vec![rat(3, 1), rat(1, 1)], Relation::Ge, rat(3, 1));
        let lp = lp.minimize(vec![rat(1, 1), rat(1, 1)]);
        match lp.solve() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(7, 5));
                assert_eq!(point, vec![rat(4, 5), rat(3, 5)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![rat(1, 1)], Relation::Ge, rat(1, 1));
        lp.constrain(vec![rat(1, 1)], Relation::Le, rat(0, 1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![rat(1, 1)], Relation::Le, rat(0, 1));
        let lp = lp.minimize(vec![rat(1, 1)]);
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn equalities_with_free_variables() {
        let mut lp = LinearProgram::new(2);
        lp.constrain(vec![rat(1, 1), rat(1, 1)], Relation::Eq, rat(-3, 1));
        lp.constrain(vec![rat(1, 1), rat(-1, 1)], Relation::Eq, rat(1, 1));
        assert_eq!(lp.feasible_point(), Some(vec![rat(-1, 1), rat(-2, 1)]));
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new(2).all_nonnegative();
        lp.constrain(vec![rat(1, 1), rat(1, 1)], Relation::Eq, rat(1, 1));
        lp.constrain(vec![rat(2, 1), rat(2, 1)], Relation::Eq, rat(2, 1));
        let lp = lp.minimize(vec![rat(1, 1), rat(0, 1)]);
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(0, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
