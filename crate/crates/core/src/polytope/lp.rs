//! Exact phase-one simplex, used to decide convex-hull membership.

use num_traits::{One, Signed, Zero};

use crate::linalg::{QVector, Rational};

/// Is `p` a convex combination of `points`?
///
/// Solves `sum l_j q_j = p, sum l_j = 1, l >= 0` for feasibility with a
/// phase-one simplex over the rationals (Bland's rule, so it terminates).
pub(crate) fn in_convex_hull(p: &QVector, points: &[&QVector]) -> bool {
    if points.is_empty() {
        return false;
    }
    let d = p.dim();
    let rows = d + 1;
    let k = points.len();

    // Constraint matrix [A | b] with b made nonnegative.
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    let mut b: Vec<Rational> = Vec::with_capacity(rows);
    for i in 0..d {
        a.push(points.iter().map(|q| q[i].clone()).collect());
        b.push(p[i].clone());
    }
    a.push(vec![Rational::one(); k]);
    b.push(Rational::one());
    for (row, rhs) in a.iter_mut().zip(b.iter_mut()) {
        if rhs.is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
            *rhs = -&*rhs;
        }
    }

    // Tableau columns: k structural, then `rows` artificials.
    let width = k + rows;
    let mut tab: Vec<Vec<Rational>> = a
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..rows).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row
        })
        .collect();
    let mut rhs = b;
    let mut basis: Vec<usize> = (k..width).collect();

    // Reduced costs of the phase-one objective (minimize sum of artificials).
    let mut cost: Vec<Rational> = (0..width)
        .map(|j| {
            if j < k {
                -tab.iter().fold(Rational::zero(), |acc, r| acc + &r[j])
            } else {
                Rational::zero()
            }
        })
        .collect();
    let mut objective: Rational = -rhs.iter().fold(Rational::zero(), |acc, r| acc + r);

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &tab[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero, so a leaving row always exists.
        let (r, _) = leave.expect("phase-one objective is bounded");
        let piv = tab[r][enter].clone();
        for x in tab[r].iter_mut() {
            *x /= &piv;
        }
        rhs[r] /= &piv;
        let prow = tab[r].clone();
        let prhs = rhs[r].clone();
        for i in 0..rows {
            if i == r || tab[i][enter].is_zero() {
                continue;
            }
            let f = tab[i][enter].clone();
            for (x, y) in tab[i].iter_mut().zip(&prow) {
                *x -= &f * y;
            }
            rhs[i] -= &f * &prhs;
        }
        let f = cost[enter].clone();
        for (x, y) in cost.iter_mut().zip(&prow) {
            *x -= &f * y;
        }
        objective -= &f * &prhs;
        basis[r] = enter;
    }
    objective.is_zero()
}
