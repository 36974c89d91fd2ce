//! Two-phase dense tableau simplex with Bland's rule.
//!
//! Variables are free; constraints are `a·x <= b` and `a·x = b`. With an exact
//! field the answers are certificates: no tolerances are involved.

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<F> {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<F>, value: F },
}

impl<F> LpOutcome<F> {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    basis: Vec<usize>,
    cols: usize,
}

impl<F: Field> Tableau<F> {
    fn rhs(&self, r: usize) -> &F {
        &self.rows[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = F::one() / self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · z` over the current basic feasible solution's polytope,
    /// entering only columns marked in `allowed`. Returns false when unbounded.
    fn maximize(&mut self, cost: &[F], allowed: &[bool]) -> bool {
        loop {
            let mut entering = None;
            for j in 0..self.cols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        d = d - cost[b].clone() * self.rows[i][j].clone();
                    }
                }
                if d.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, F)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i).clone() / a.clone();
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Maximizes `c · x` subject to `ineqs` (`a·x <= b`) and `eqs` (`a·x = b`).
pub fn maximize<F: Field>(
    n: usize,
    c: &[F],
    ineqs: &[(Vec<F>, F)],
    eqs: &[(Vec<F>, F)],
) -> LpOutcome<F> {
    let m = ineqs.len();
    let k = eqs.len();
    let slack0 = 2 * n;
    let art0 = slack0 + m;
    let nrows = m + k;
    // Rows whose initial basic variable must be artificial.
    let mut needs_art = Vec::with_capacity(nrows);
    for (_, b) in ineqs {
        needs_art.push(b.is_negative());
    }
    needs_art.extend(std::iter::repeat_n(true, k));
    let n_art = needs_art.iter().filter(|&&x| x).count();
    let cols = art0 + n_art;

    let mut rows = Vec::with_capacity(nrows);
    let mut basis = Vec::with_capacity(nrows);
    let mut next_art = art0;
    for r in 0..nrows {
        let (a, b) = if r < m { &ineqs[r] } else { &eqs[r - m] };
        let mut row = vec![F::zero(); cols + 1];
        for j in 0..n {
            row[j] = a[j].clone();
            row[n + j] = -a[j].clone();
        }
        if r < m {
            row[slack0 + r] = F::one();
        }
        row[cols] = b.clone();
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        if needs_art[r] {
            row[next_art] = F::one();
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(slack0 + r);
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, cols };

    if n_art > 0 {
        let mut cost = vec![F::zero(); cols];
        for x in cost.iter_mut().skip(art0) {
            *x = -F::one();
        }
        let all = vec![true; cols];
        t.maximize(&cost, &all);
        let infeas = t
            .basis
            .iter()
            .enumerate()
            .any(|(i, &b)| b >= art0 && !t.rhs(i).is_zero());
        if infeas {
            return LpOutcome::Infeasible;
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= art0 {
                match (0..art0).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => {
                        t.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }

    let mut cost = vec![F::zero(); cols];
    for j in 0..n {
        cost[j] = c[j].clone();
        cost[n + j] = -c[j].clone();
    }
    let allowed: Vec<bool> = (0..cols).map(|j| j < art0).collect();
    if !t.maximize(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut z = vec![F::zero(); cols];
    for (i, &b) in t.basis.iter().enumerate() {
        z[b] = t.rhs(i).clone();
    }
    let x: Vec<F> = (0..n).map(|j| z[j].clone() - z[n + j].clone()).collect();
    let value = c
        .iter()
        .zip(&x)
        .fold(F::zero(), |acc, (ci, xi)| acc + ci.clone() * xi.clone());
    LpOutcome::Optimal { x, value }
}

pub fn feasible_point<F: Field>(
    n: usize,
    ineqs: &[(Vec<F>, F)],
    eqs: &[(Vec<F>, F)],
) -> Option<Vec<F>> {
    match maximize(n, &vec![F::zero(); n], ineqs, eqs) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ivec, rat, Rational};

    fn row(a: &[i64], b: i64) -> (Vec<Rational>, Rational) {
        (ivec(a), int(b))
    }

    #[test]
    fn simple_optimum() {
        // max x + y on the unit square
        let ineqs = vec![
            row(&[1, 0], 1),
            row(&[0, 1], 1),
            row(&[-1, 0], 0),
            row(&[0, -1], 0),
        ];
        match maximize(2, &ivec(&[1, 1]), &ineqs, &[]) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, int(2));
                assert_eq!(x, ivec(&[1, 1]));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let contradictory = vec![row(&[1], 1), row(&[-1], -2)];
        assert_eq!(
            maximize(1, &ivec(&[0]), &contradictory, &[]),
            LpOutcome::Infeasible
        );
        let halfline = vec![row(&[-1], 0)];
        assert_eq!(
            maximize(1, &ivec(&[1]), &halfline, &[]),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn equalities_and_negative_rhs() {
        // x + y = 1, x >= 1/2 (i.e. -x <= -1/2); maximize y
        let ineqs = vec![(ivec(&[-1, 0]), rat(-1, 2))];
        let eqs = vec![row(&[1, 1], 1)];
        match maximize(2, &ivec(&[0, 1]), &ineqs, &eqs) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(1, 2)),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn redundant_equalities() {
        let eqs = vec![row(&[1, 1], 1), row(&[2, 2], 2)];
        let x = feasible_point(2, &[], &eqs).unwrap();
        assert_eq!(x[0].clone() + x[1].clone(), int(1));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example: cycles under the textbook largest-coefficient rule.
        let ineqs = vec![
            (vec![rat(1, 4), int(-60), rat(-1, 25), int(9)], int(0)),
            (vec![rat(1, 2), int(-90), rat(-1, 50), int(3)], int(0)),
            (ivec(&[0, 0, 1, 0]), int(1)),
            (ivec(&[-1, 0, 0, 0]), int(0)),
            (ivec(&[0, -1, 0, 0]), int(0)),
            (ivec(&[0, 0, -1, 0]), int(0)),
            (ivec(&[0, 0, 0, -1]), int(0)),
        ];
        let c = vec![rat(3, 4), int(-150), rat(1, 50), int(-6)];
        match maximize(4, &c, &ineqs, &[]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(1, 20)),
            o => panic!("{o:?}"),
        }
    }
}
