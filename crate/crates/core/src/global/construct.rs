//! Planar counterexamples to the weak L-P property.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{int, rat, QMatrix, QVector, Rational};
use crate::operator::Operator;
use crate::space::{linf_space, make_space, PolyhedralSpace};

fn cross(a: &QVector, b: &QVector) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn upper(v: &QVector) -> bool {
    v[1].is_positive() || (v[1].is_zero() && v[0].is_positive())
}

/// Nonzero planar vectors sorted counterclockwise by angle from the positive
/// first axis.
pub fn cyclic_order(points: &[QVector]) -> Vec<QVector> {
    let mut out = points.to_vec();
    out.sort_by(|a, b| match (upper(a), upper(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => Rational::zero().cmp(&cross(a, b)),
    });
    out
}

fn require_planar_with_eight(x: &PolyhedralSpace) -> Result<()> {
    if x.dim() != 2 {
        return Err(Error::Inapplicable("space must be 2-dimensional".into()));
    }
    if x.ball().len() <= 6 {
        return Err(Error::Inapplicable(format!(
            "unit ball has {} vertices; at least 8 are needed",
            x.ball().len()
        )));
    }
    Ok(())
}

/// An extreme contraction `X -> l_inf^2` sending no vertex to a vertex.
///
/// Its rows are dual vertices `x1`, `x3` with neither `[x1, x3]` nor
/// `[x1, -x3]` an edge of the dual ball, so no vertex of `B_X` is tight for
/// both functionals.
pub fn vertex_avoiding_contraction(x: &Arc<PolyhedralSpace>) -> Result<Operator> {
    require_planar_with_eight(x)?;
    let ring = cyclic_order(x.dual_vertices());
    let k = ring.len();
    let x1 = &ring[0];
    let neighbours = [&ring[1], &ring[k - 1]];
    let x3 = ring[2..k - 1]
        .iter()
        .find(|c| {
            let neg = -*c;
            **c != -x1 && !neighbours.contains(&&neg)
        })
        .ok_or_else(|| Error::Inconsistency("no admissible pair of dual vertices".into()))?;
    let m = QMatrix::from_rows(vec![x1.clone(), x3.clone()])?;
    let t = Operator::new(x.clone(), Arc::new(linf_space(2)?), m)?;
    if !t.op_norm().is_one() || !t.is_extreme_contraction() || t.hits_a_vertex() {
        return Err(Error::Inconsistency(format!(
            "constructed operator {} fails verification",
            t.matrix()
        )));
    }
    Ok(t)
}

/// Parameters `(s, u)` with `p + s (q - p) = r + u (w - r)`, if the lines
/// are not parallel.
fn intersect(p: &QVector, q: &QVector, r: &QVector, w: &QVector) -> Option<(Rational, Rational)> {
    let d1 = q.sub(p);
    let d2 = w.sub(r);
    let den = cross(&d1, &d2);
    if den.is_zero() {
        return None;
    }
    let rp = r.sub(p);
    Some((cross(&rp, &d2) / &den, cross(&rp, &d1) / &den))
}

/// A planar space `Y` with `2n` vertices such that the identity `X -> Y` is
/// an extreme contraction sending no vertex to a vertex.
///
/// Four consecutive vertices `x1..x4` of `B_X` are chosen; `y1` is where the
/// lines through `[x1, x2]` and `[x4, x3]` meet beyond `x2` and `x3`, and
/// `y2` where the lines through `[x2, x1]` and `[-x3, -x4]` meet beyond `x1`
/// and `-x4`. The ball of `Y` has vertices `+-y2` and `+-z_j`, where
/// `z_1 = (y1 + x2)/2`, `z_{n-1} = (y1 + x3)/2`, and the points between are
/// pushed outward from the chord by `(1 + d_i)` with
/// `d_i = 2^-k t_i (1 - t_i)`, `t_i = (i - 1)/(n - 2)`, taking the least
/// `k >= 1` that passes verification.
pub fn vertex_avoiding_space(
    x: &Arc<PolyhedralSpace>,
    n: usize,
) -> Result<(PolyhedralSpace, Operator)> {
    require_planar_with_eight(x)?;
    if n < 3 {
        return Err(Error::OutOfRange(format!("n = {n}; need n >= 3")));
    }
    let ring = cyclic_order(x.vertices());
    let len = ring.len();
    let one = Rational::one();
    for start in 0..len {
        let [x1, x2, x3, x4] = [0, 1, 2, 3].map(|k| &ring[(start + k) % len]);
        let Some((s, u)) = intersect(x1, x2, x4, x3) else {
            continue;
        };
        if s <= one || u <= one {
            continue;
        }
        let y1 = x1.lerp(x2, &(&one - &s));
        let (nx3, nx4) = (-x3, -x4);
        let Some((s, u)) = intersect(x2, x1, &nx3, &nx4) else {
            continue;
        };
        if s <= one || u <= one {
            continue;
        }
        let y2 = x2.lerp(x1, &(&one - &s));
        let half = rat(1, 2);
        let z1 = y1.lerp(x2, &half);
        let zl = y1.lerp(x3, &half);
        for k in 1..=64u32 {
            let scale = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(k));
            let mut points = vec![y2.clone(), z1.clone()];
            for i in 2..n - 1 {
                let t = rat(i as i64 - 1, n as i64 - 2);
                let d = &scale * &t * (int(1) - &t);
                let a = (int(1) - &t) * (int(1) + &d);
                let b = &t * (int(1) + &d);
                points.push(z1.scale(&a).add(&zl.scale(&b)));
            }
            points.push(zl.clone());
            let all: Vec<QVector> = points
                .iter()
                .cloned()
                .chain(points.iter().map(|p| -p))
                .collect();
            let Ok(y) = make_space(all) else {
                continue;
            };
            if y.ball().len() != 2 * n {
                continue;
            }
            let cert = Operator::new(x.clone(), Arc::new(y.clone()), QMatrix::identity(2))?;
            if cert.op_norm().is_one() && cert.is_extreme_contraction() && !cert.hits_a_vertex() {
                return Ok((y, cert));
            }
        }
    }
    Err(Error::Inapplicable(
        "no vertex quadruple admits the construction".into(),
    ))
}
