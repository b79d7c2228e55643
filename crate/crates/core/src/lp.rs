//! Exact linear feasibility by the phase-one simplex method with Bland's
//! rule. Small dense problems only.

use num_traits::{Signed, Zero};

use crate::num::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

/// A system of linear constraints over `n` variables. Variables are
/// nonnegative unless marked free.
#[derive(Clone, Debug)]
pub struct Lp {
    n: usize,
    free: Vec<bool>,
    rows: Vec<(Vec<Rational>, Cmp, Rational)>,
}

impl Lp {
    pub fn new(n: usize) -> Self {
        Lp { n, free: vec![false; n], rows: Vec::new() }
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, cmp: Cmp, rhs: Rational) {
        debug_assert_eq!(coeffs.len(), self.n);
        self.rows.push((coeffs, cmp, rhs));
    }

    /// A feasible assignment, or `None` when the system is infeasible.
    pub fn solve(&self) -> Option<Vec<Rational>> {
        // Column layout: x+ (n), x- for free vars, slacks, then artificials.
        let free_idx: Vec<usize> = (0..self.n).filter(|&i| self.free[i]).collect();
        let n_slack = self.rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let m = self.rows.len();
        let base = self.n + free_idx.len() + n_slack;
        let cols = base + m;
        let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut rhs: Vec<Rational> = Vec::with_capacity(m);
        let mut slack = self.n + free_idx.len();
        for (i, (coeffs, cmp, b)) in self.rows.iter().enumerate() {
            let mut row = vec![Rational::zero(); cols];
            row[..self.n].clone_from_slice(coeffs);
            for (k, &f) in free_idx.iter().enumerate() {
                row[self.n + k] = -coeffs[f].clone();
            }
            match cmp {
                Cmp::Le => {
                    row[slack] = Rational::from_integer(1.into());
                    slack += 1;
                }
                Cmp::Ge => {
                    row[slack] = Rational::from_integer((-1).into());
                    slack += 1;
                }
                Cmp::Eq => {}
            }
            let mut b = b.clone();
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
            }
            row[base + i] = Rational::from_integer(1.into());
            tab.push(row);
            rhs.push(b);
        }
        let mut basis: Vec<usize> = (0..m).map(|i| base + i).collect();
        // Reduced costs of the phase-one objective (sum of artificials).
        let mut cost = vec![Rational::zero(); cols];
        let mut obj = Rational::zero();
        for i in 0..m {
            for j in 0..base {
                if !tab[i][j].is_zero() {
                    cost[j] -= &tab[i][j];
                }
            }
            obj -= &rhs[i];
        }
        while let Some(enter) = (0..cols).find(|&j| cost[j].is_negative()) {
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..m {
                if tab[i][enter].is_positive() {
                    let ratio = &rhs[i] / &tab[i][enter];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((p, _)) = leave else {
                // Unbounded direction cannot occur for a bounded-below objective.
                break;
            };
            let piv = tab[p][enter].clone();
            for x in tab[p].iter_mut() {
                if !x.is_zero() {
                    *x /= &piv;
                }
            }
            rhs[p] /= &piv;
            let prow = tab[p].clone();
            let prhs = rhs[p].clone();
            for i in 0..m {
                if i == p || tab[i][enter].is_zero() {
                    continue;
                }
                let f = tab[i][enter].clone();
                for (j, pj) in prow.iter().enumerate() {
                    if !pj.is_zero() {
                        tab[i][j] -= &f * pj;
                    }
                }
                rhs[i] -= &f * &prhs;
            }
            if !cost[enter].is_zero() {
                let f = cost[enter].clone();
                for (j, pj) in prow.iter().enumerate() {
                    if !pj.is_zero() {
                        cost[j] -= &f * pj;
                    }
                }
                obj -= &f * &prhs;
            }
            basis[p] = enter;
        }
        if !obj.is_zero() {
            return None;
        }
        let mut values = vec![Rational::zero(); cols];
        for (i, &b) in basis.iter().enumerate() {
            values[b] = rhs[i].clone();
        }
        let mut x: Vec<Rational> = values[..self.n].to_vec();
        for (k, &f) in free_idx.iter().enumerate() {
            x[f] -= &values[self.n + k];
        }
        Some(x)
    }
}
