//! Exact linear programming over the rationals (two-phase simplex with
//! Bland's rule) for small polyhedra `{x : A x ≤ b}` with free variables.

use num::{Signed, Zero};

use crate::linalg::{QVec, Q};

#[derive(Clone, Debug, PartialEq)]
pub enum Lp {
    Optimal { x: QVec, value: Q },
    Unbounded,
    Infeasible,
}

struct Tableau {
    rows: Vec<QVec>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pr = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pr) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · y` over columns `< limit`; `false` if unbounded.
    fn optimize(&mut self, cost: &[Q], limit: usize) -> bool {
        let rhs = self.ncols;
        loop {
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    if !row[j].is_zero() {
                        d -= &cost[self.basis[i]] * &row[j];
                    }
                }
                if d.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, c);
        }
    }
}

/// Maximizes `c · x` subject to `a x ≤ b` (`x` free, `a` has `n` columns).
pub fn maximize(a: &[QVec], b: &[Q], c: &[Q], n: usize) -> Lp {
    let m = a.len();
    let n_art = b.iter().filter(|x| x.is_negative()).count();
    let ncols = 2 * n + m + n_art;
    let zero = Q::zero();
    let one = Q::from_integer(1.into());
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = 2 * n + m;
    for i in 0..m {
        let mut row = vec![zero.clone(); ncols + 1];
        let neg = b[i].is_negative();
        let sgn = if neg { -one.clone() } else { one.clone() };
        for j in 0..n {
            row[j] = &sgn * &a[i][j];
            row[n + j] = -&row[j];
        }
        row[2 * n + i] = sgn.clone();
        row[ncols] = &sgn * &b[i];
        if neg {
            row[art] = one.clone();
            basis.push(art);
            art += 1;
        } else {
            basis.push(2 * n + i);
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, ncols };
    if n_art > 0 {
        let mut cost = vec![zero.clone(); ncols];
        for c in cost.iter_mut().skip(2 * n + m) {
            *c = -one.clone();
        }
        t.optimize(&cost, ncols);
        let infeasible = t
            .basis
            .iter()
            .zip(&t.rows)
            .any(|(&bi, row)| bi >= 2 * n + m && !row[ncols].is_zero());
        if infeasible {
            return Lp::Infeasible;
        }
        // drive remaining (zero-valued) artificials out of the basis
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= 2 * n + m {
                match (0..2 * n + m).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }
    let mut cost = vec![zero.clone(); ncols];
    for j in 0..n {
        cost[j] = c[j].clone();
        cost[n + j] = -c[j].clone();
    }
    if !t.optimize(&cost, 2 * n + m) {
        return Lp::Unbounded;
    }
    let mut y = vec![zero.clone(); ncols];
    for (i, &bi) in t.basis.iter().enumerate() {
        y[bi] = t.rows[i][ncols].clone();
    }
    let x: QVec = (0..n).map(|j| &y[j] - &y[n + j]).collect();
    let value = x.iter().zip(c).fold(zero, |acc, (xi, ci)| acc + xi * ci);
    Lp::Optimal { x, value }
}

fn slack(row: &[Q], b: &Q, x: &[Q]) -> Q {
    row.iter()
        .zip(x)
        .fold(b.clone(), |acc, (r, xi)| acc - r * xi)
}

/// A point in the relative interior of `{x : a x ≤ b}`, or `None` if empty.
pub fn relint_point(a: &[QVec], b: &[Q], n: usize) -> Option<QVec> {
    let zero = Q::zero();
    let one = Q::from_integer(1.into());
    let first = match maximize(a, b, &vec![zero.clone(); n], n) {
        Lp::Optimal { x, .. } => x,
        _ => return None,
    };
    let m = a.len();
    let mut covered: Vec<bool> = (0..m)
        .map(|i| slack(&a[i], &b[i], &first).is_positive())
        .collect();
    let mut points = vec![first];
    for i in 0..m {
        if covered[i] {
            continue;
        }
        // maximize the slack of row i, capped at 1 so the problem stays bounded
        let mut a2 = a.to_vec();
        let mut b2 = b.to_vec();
        a2.push(a[i].iter().map(|v| -v).collect());
        b2.push(&one - &b[i]);
        let c: QVec = a[i].iter().map(|v| -v).collect();
        if let Lp::Optimal { x, .. } = maximize(&a2, &b2, &c, n) {
            if slack(&a[i], &b[i], &x).is_positive() {
                for k in 0..m {
                    if !covered[k] && slack(&a[k], &b[k], &x).is_positive() {
                        covered[k] = true;
                    }
                }
                points.push(x);
            }
        }
    }
    let k = Q::from_integer((points.len() as i64).into());
    let mut avg = vec![zero; n];
    for p in &points {
        for (s, v) in avg.iter_mut().zip(p) {
            *s += v;
        }
    }
    Some(avg.into_iter().map(|s| s / &k).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qfrac, qvec};

    fn rows(v: &[&[i64]]) -> Vec<QVec> {
        v.iter().map(|r| qvec(r)).collect()
    }

    #[test]
    fn simple_optimum() {
        // max x + y s.t. x ≤ 2, y ≤ 3, x + 2y ≤ 7
        let a = rows(&[&[1, 0], &[0, 1], &[1, 2]]);
        let r = maximize(&a, &qvec(&[2, 3, 7]), &qvec(&[1, 1]), 2);
        assert_eq!(
            r,
            Lp::Optimal {
                x: vec![q(2), qfrac(5, 2)],
                value: qfrac(9, 2)
            }
        );
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = rows(&[&[1], &[-1]]);
        assert_eq!(
            maximize(&a, &qvec(&[1, -2]), &qvec(&[1]), 1),
            Lp::Infeasible
        );
        let a = rows(&[&[-1]]);
        assert_eq!(maximize(&a, &qvec(&[0]), &qvec(&[1]), 1), Lp::Unbounded);
    }

    #[test]
    fn negative_rhs_feasible() {
        // x ≥ 1, y ≥ 1, x + y ≤ 3; maximize x
        let a = rows(&[&[-1, 0], &[0, -1], &[1, 1]]);
        let r = maximize(&a, &qvec(&[-1, -1, 3]), &qvec(&[1, 0]), 2);
        assert!(matches!(r, Lp::Optimal { value, .. } if value == q(2)));
    }

    #[test]
    fn relint_of_segment_in_plane() {
        // x + y = 1 (as two inequalities), x ≥ 0, y ≥ 0
        let a = rows(&[&[1, 1], &[-1, -1], &[-1, 0], &[0, -1]]);
        let b = qvec(&[1, -1, 0, 0]);
        let p = relint_point(&a, &b, 2).unwrap();
        assert_eq!(&p[0] + &p[1], q(1));
        assert!(p[0].is_positive() && p[1].is_positive());
    }

    #[test]
    fn relint_empty_and_point() {
        let a = rows(&[&[1], &[-1]]);
        assert!(relint_point(&a, &qvec(&[0, -1]), 1).is_none());
        assert_eq!(relint_point(&a, &qvec(&[0, 0]), 1), Some(vec![q(0)]));
    }
}
