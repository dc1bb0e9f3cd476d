//! Double description for bounded polytopes `{x : <a_i, x> <= 1}`.
//!
//! The polytope is homogenized into the pointed cone
//! `{(t, x) : t >= 0, t - <a_i, x> >= 0}`; its extreme rays with `t > 0` are
//! the vertices. Rays are kept as primitive integer vectors and inequalities
//! are inserted one at a time in the order given. Two rays are adjacent when
//! the inequalities tight at both have rank `D - 2`, `D` the cone dimension.

use std::time::Instant;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{bareiss_rank, primitive, QMatrix, QVector, Rational};

/// Optional limits on a run.
#[derive(Clone, Debug, Default)]
pub struct DdLimits {
    pub deadline: Option<Instant>,
    pub max_rays: Option<usize>,
}

impl DdLimits {
    fn exhausted(&self, rays: usize) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
            || self.max_rays.is_some_and(|m| rays > m)
    }
}

/// Result of a possibly interrupted run.
#[derive(Clone, Debug)]
pub enum DdOutcome {
    Complete(Vec<QVector>),
    /// The limits were hit after `processed` of `total` inequalities.
    /// `partial` holds the bounded rays of the relaxation built so far; they
    /// are vertices of a polytope containing the target, not of the target.
    Interrupted {
        processed: usize,
        total: usize,
        partial: Vec<QVector>,
    },
}

struct Ray {
    v: Vec<BigInt>,
    zeros: FixedBitSet,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_point(v: &[BigInt]) -> QVector {
    let t = &v[0];
    QVector::new(
        v[1..]
            .iter()
            .map(|x| BigRational::new(x.clone(), t.clone()))
            .collect(),
    )
}

fn rank_of(rows: &[Vec<BigInt>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    bareiss_rank(&mut m, cols)
}

/// Vertices of `{x in Q^dim : <a, x> <= 1 for a in inequalities}`.
pub(crate) fn vertices_of(
    dim: usize,
    inequalities: &[QVector],
    limits: &DdLimits,
) -> Result<DdOutcome> {
    let d = dim + 1;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(inequalities.len() + 1);
    let mut e0 = vec![BigInt::zero(); d];
    e0[0] = BigInt::from(1);
    rows.push(e0);
    for a in inequalities {
        let mut r = Vec::with_capacity(d);
        r.push(Rational::from_integer(1.into()));
        r.extend(a.iter().map(|c| -c));
        rows.push(primitive(crate::linalg::scale_to_integers(&r)));
    }
    let total = rows.len();

    // Greedy initial basis in insertion order.
    let mut basis: Vec<usize> = Vec::with_capacity(d);
    let mut chosen: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    for (i, r) in rows.iter().enumerate() {
        if basis.len() == d {
            break;
        }
        chosen.push(r.clone());
        if rank_of(&chosen, d) == chosen.len() {
            basis.push(i);
        } else {
            chosen.pop();
        }
    }
    if basis.len() < d {
        return Err(Error::Unbounded);
    }

    let initial = QMatrix::from_rows(
        basis
            .iter()
            .map(|&i| {
                QVector::new(
                    rows[i]
                        .iter()
                        .map(|x| Rational::from_integer(x.clone()))
                        .collect(),
                )
            })
            .collect(),
    )?;
    let inv = initial
        .inverse()
        .ok_or_else(|| Error::Inconsistency("initial basis is singular".into()))?;
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let mut zeros = FixedBitSet::with_capacity(total);
            for (k, &bi) in basis.iter().enumerate() {
                if k != j {
                    zeros.insert(bi);
                }
            }
            Ray {
                v: inv.column(j).primitive_integers(),
                zeros,
            }
        })
        .collect();

    let mut in_basis = FixedBitSet::with_capacity(total);
    for &b in &basis {
        in_basis.insert(b);
    }
    let pending: Vec<usize> = (0..total).filter(|i| !in_basis.contains(*i)).collect();

    for (step, &c) in pending.iter().enumerate() {
        if limits.exhausted(rays.len()) {
            return Ok(interrupted(&rays, basis.len() + step, total));
        }
        let row = &rows[c];
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut zero = Vec::new();
        for (idx, ray) in rays.iter().enumerate() {
            let s = dot(row, &ray.v);
            if s.is_positive() {
                pos.push((idx, s));
            } else if s.is_negative() {
                neg.push((idx, s));
            } else {
                zero.push(idx);
            }
        }
        if neg.is_empty() {
            for idx in zero {
                rays[idx].zeros.insert(c);
            }
            continue;
        }

        let mut created = Vec::new();
        for (pi, ps) in &pos {
            for (ni, ns) in &neg {
                let (p, n) = (&rays[*pi], &rays[*ni]);
                let mut common = p.zeros.clone();
                common.intersect_with(&n.zeros);
                if common.count_ones(..) + 2 < d {
                    continue;
                }
                let tight: Vec<Vec<BigInt>> = common.ones().map(|k| rows[k].clone()).collect();
                if rank_of(&tight, d) + 2 != d {
                    continue;
                }
                let v: Vec<BigInt> =
                    n.v.iter()
                        .zip(&p.v)
                        .map(|(nv, pv)| ps * nv - ns * pv)
                        .collect();
                let mut zeros = common;
                zeros.insert(c);
                created.push(Ray {
                    v: primitive(v),
                    zeros,
                });
            }
            if limits.exhausted(rays.len() + created.len()) {
                return Ok(interrupted(&rays, basis.len() + step, total));
            }
        }

        let keep: FixedBitSet = {
            let mut k = FixedBitSet::with_capacity(rays.len());
            for (idx, _) in &pos {
                k.insert(*idx);
            }
            for idx in &zero {
                k.insert(*idx);
            }
            k
        };
        for idx in &zero {
            rays[*idx].zeros.insert(c);
        }
        let mut next: Vec<Ray> = Vec::with_capacity(keep.count_ones(..) + created.len());
        for (idx, ray) in rays.into_iter().enumerate() {
            if keep.contains(idx) {
                next.push(ray);
            }
        }
        next.extend(created);
        rays = next;
    }

    let mut out = Vec::with_capacity(rays.len());
    for ray in &rays {
        if !ray.v[0].is_positive() {
            return Err(Error::Unbounded);
        }
        out.push(to_point(&ray.v));
    }
    Ok(DdOutcome::Complete(out))
}

fn interrupted(rays: &[Ray], processed: usize, total: usize) -> DdOutcome {
    DdOutcome::Interrupted {
        processed,
        total,
        partial: rays
            .iter()
            .filter(|r| r.v[0].is_positive())
            .map(|r| to_point(&r.v))
            .collect(),
    }
}
