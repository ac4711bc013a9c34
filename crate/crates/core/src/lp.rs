//! Dense two-phase simplex over exact rationals (Bland's rule, so it terminates).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub sense: Sense,
    pub rhs: Q,
}

/// maximize `objective . x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<Q>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<Q>,
        value: Q,
        /// Row duals `y` with `y^T A >= c` (for `Le` rows `y >= 0`).
        dual: Vec<Q>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    // rows[i] has `cols` coefficients followed by the rhs
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &p;
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

    /// Reduced costs `c_j - c_B B^-1 A_j` for maximizing `cost` over the allowed columns.
    fn reduced(&self, cost: &[Q]) -> Vec<Q> {
        let mut red: Vec<Q> = cost.to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in row[..self.cols].iter().enumerate() {
                if !v.is_zero() {
                    red[j] -= cb * v;
                }
            }
        }
        red
    }

    /// Runs primal simplex maximizing `cost`; `false` when unbounded.
    fn optimize(&mut self, cost: &[Q], allowed: &[bool]) -> bool {
        loop {
            let red = self.reduced(cost);
            let Some(enter) = (0..self.cols).find(|&j| allowed[j] && red[j].is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[self.cols] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }
}

impl LinearProgram {
    pub fn solve(&self) -> LpOutcome {
        let nv = self.objective.len();
        let m = self.constraints.len();
        // normalize rhs >= 0
        let mut rows_in: Vec<(Vec<Q>, Sense, Q)> = Vec::with_capacity(m);
        for c in &self.constraints {
            assert_eq!(c.coeffs.len(), nv, "constraint width");
            if c.rhs.is_negative() {
                let sense = match c.sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
                rows_in.push((c.coeffs.iter().map(|v| -v).collect(), sense, -&c.rhs));
            } else {
                rows_in.push((c.coeffs.clone(), c.sense, c.rhs.clone()));
            }
        }
        // columns: originals, one slack/surplus per non-Eq row, one artificial per Ge/Eq row
        let n_slack = rows_in.iter().filter(|r| r.1 != Sense::Eq).count();
        let n_art = rows_in.iter().filter(|r| r.1 != Sense::Le).count();
        let cols = nv + n_slack + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack_col = vec![usize::MAX; m];
        let (mut s, mut a) = (nv, nv + n_slack);
        for (i, (coeffs, sense, rhs)) in rows_in.iter().enumerate() {
            let mut row = vec![Q::zero(); cols + 1];
            row[..nv].clone_from_slice(coeffs);
            row[cols] = rhs.clone();
            match sense {
                Sense::Le => {
                    row[s] = Q::one();
                    slack_col[i] = s;
                    basis.push(s);
                    s += 1;
                }
                Sense::Ge => {
                    row[s] = -Q::one();
                    slack_col[i] = s;
                    s += 1;
                    row[a] = Q::one();
                    basis.push(a);
                    a += 1;
                }
                Sense::Eq => {
                    row[a] = Q::one();
                    basis.push(a);
                    a += 1;
                }
            }
            rows.push(row);
        }
        let mut t = Tableau { rows, basis, cols };
        let is_art = |j: usize| j >= nv + n_slack;

        if n_art > 0 {
            let cost: Vec<Q> = (0..cols).map(|j| if is_art(j) { -Q::one() } else { Q::zero() }).collect();
            t.optimize(&cost, &vec![true; cols]);
            let infeas: Q = t
                .rows
                .iter()
                .zip(&t.basis)
                .filter(|(_, &b)| is_art(b))
                .map(|(r, _)| r[cols].clone())
                .sum();
            if infeas.is_positive() {
                return LpOutcome::Infeasible;
            }
            // drive zero-level artificials out of the basis
            let mut i = 0;
            while i < t.rows.len() {
                if is_art(t.basis[i]) {
                    if let Some(j) = (0..nv + n_slack).find(|&j| !t.rows[i][j].is_zero()) {
                        t.pivot(i, j);
                    } else {
                        // redundant row
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
                i += 1;
            }
        }

        let mut cost = vec![Q::zero(); cols];
        cost[..nv].clone_from_slice(&self.objective);
        let allowed: Vec<bool> = (0..cols).map(|j| !is_art(j)).collect();
        if !t.optimize(&cost, &allowed) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Q::zero(); nv];
        for (row, &b) in t.rows.iter().zip(&t.basis) {
            if b < nv {
                x[b] = row[cols].clone();
            }
        }
        let value: Q = x.iter().zip(&self.objective).map(|(a, b)| a * b).sum();
        // duals from slack reduced costs: y_i = -(reduced cost of slack i) for Le, +for Ge
        let red = t.reduced(&cost);
        let dual = (0..m)
            .map(|i| {
                let sign_flip = self.constraints[i].rhs.is_negative();
                let y = match rows_in[i].1 {
                    Sense::Le => -red[slack_col[i]].clone(),
                    Sense::Ge => red[slack_col[i]].clone(),
                    Sense::Eq => Q::zero(),
                };
                if sign_flip {
                    -y
                } else {
                    y
                }
            })
            .collect();
        LpOutcome::Optimal { x, value, dual }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(c: &[i64], sense: Sense, rhs: i64) -> Constraint {
        Constraint {
            coeffs: c.iter().map(|&v| qi(v)).collect(),
            sense,
            rhs: qi(rhs),
        }
    }

    #[test]
    fn small_max() {
        // max x + y, x + 2y <= 4, 3x + y <= 6  ->  x = 8/5, y = 6/5
        let lp = LinearProgram {
            objective: vec![qi(1), qi(1)],
            constraints: vec![row(&[1, 2], Sense::Le, 4), row(&[3, 1], Sense::Le, 6)],
        };
        match lp.solve() {
            LpOutcome::Optimal { x, value, dual } => {
                assert_eq!(x, vec![q(8, 5), q(6, 5)]);
                assert_eq!(value, q(14, 5));
                // y = (2/5, 1/5), and b.y equals the optimum
                assert_eq!(dual, vec![q(2, 5), q(1, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram {
            objective: vec![qi(1)],
            constraints: vec![row(&[1], Sense::Le, 1), row(&[1], Sense::Ge, 2)],
        };
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
        let lp = LinearProgram {
            objective: vec![qi(1), qi(0)],
            constraints: vec![row(&[-1, 1], Sense::Le, 1)],
        };
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_rows() {
        // max -x - y  s.t. x + y = 3, x - y >= -1
        let lp = LinearProgram {
            objective: vec![qi(-1), qi(-1)],
            constraints: vec![row(&[1, 1], Sense::Eq, 3), row(&[1, -1], Sense::Ge, -1)],
        };
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, qi(-3)),
            other => panic!("{other:?}"),
        }
    }
}
