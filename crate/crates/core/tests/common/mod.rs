#![allow(dead_code)]

use std::sync::Arc;

use num_traits::{One, Zero};
use polyext_core::linalg::{int, rat, QMatrix, QVector, Rational};
use polyext_core::polytope::face_of;
use polyext_core::space::{linf_space, make_space};
use polyext_core::{Operator, PolyhedralSpace};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational<R: Rng>(rng: &mut R, span: i64, den: i64) -> Rational {
    rat(rng.gen_range(-span..=span), rng.gen_range(1..=den))
}

/// Strictly between 0 and 1.
pub fn open_unit<R: Rng>(rng: &mut R) -> Rational {
    let d = rng.gen_range(2..=12);
    rat(rng.gen_range(1..d), d)
}

/// Symmetric space of dimension `dim` whose ball has exactly `2 * pairs`
/// vertices, from small integer points.
pub fn random_space<R: Rng>(rng: &mut R, dim: usize, pairs: usize) -> PolyhedralSpace {
    let span = if dim == 1 { 6 } else { 5 };
    loop {
        let pts: Vec<QVector> = (0..pairs)
            .map(|_| QVector::new((0..dim).map(|_| int(rng.gen_range(-span..=span))).collect()))
            .collect();
        if pts.iter().any(|p| p.is_zero()) {
            continue;
        }
        let all: Vec<QVector> = pts.iter().cloned().chain(pts.iter().map(|p| -p)).collect();
        if let Ok(x) = make_space(all) {
            if x.ball().len() == 2 * pairs {
                return x;
            }
        }
    }
}

/// Invertible rational matrix with small entries.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> QMatrix {
    loop {
        let entries = (0..n * n).map(|_| random_rational(rng, 4, 3)).collect();
        let m = QMatrix::new(n, n, entries).unwrap();
        if m.rank() == n {
            return m;
        }
    }
}

/// Random point in the relative interior of a random facet.
pub fn facet_interior_point<R: Rng>(rng: &mut R, x: &PolyhedralSpace) -> QVector {
    let f = x.dual_vertices().choose(rng).unwrap();
    let tight: Vec<&QVector> = x.vertices().iter().filter(|v| f.dot(v).is_one()).collect();
    let weights: Vec<Rational> = tight.iter().map(|_| int(rng.gen_range(1..=9))).collect();
    let total = weights.iter().fold(Rational::zero(), |a, w| a + w);
    tight
        .iter()
        .zip(&weights)
        .fold(QVector::zeros(x.dim()), |acc, (v, w)| {
            acc.add(&v.scale(&(w / &total)))
        })
}

/// Two points on a common edge of a planar ball, ordered counterclockwise
/// along it. With `interior` both lie strictly inside the edge.
pub fn points_on_an_edge<R: Rng>(
    rng: &mut R,
    y: &PolyhedralSpace,
    interior: bool,
) -> (QVector, QVector) {
    let f = y.dual_vertices().choose(rng).unwrap();
    let ends: Vec<&QVector> = y.vertices().iter().filter(|v| f.dot(v).is_one()).collect();
    assert_eq!(ends.len(), 2, "planar facets are edges");
    loop {
        let (s, t) = if interior {
            (open_unit(rng), open_unit(rng))
        } else {
            let pick = |rng: &mut R| match rng.gen_range(0..4) {
                0 => Rational::zero(),
                1 => Rational::one(),
                _ => open_unit(rng),
            };
            (pick(rng), pick(rng))
        };
        if s != t {
            return (ends[0].lerp(ends[1], &s), ends[0].lerp(ends[1], &t));
        }
    }
}

/// Projection-plus-shear map from the sup-norm `n`-space into a plane:
/// one column is `a = (u + w)/2`, the others split `b = (u - w)/2` with
/// weights `t_j`, `sum |t_j| = 1`. Every vertex `v` goes to
/// `v_k a + (sum v_j t_j) b`, a point of the segment `+-[w, u]`.
pub fn projection_shear<R: Rng>(
    rng: &mut R,
    n: usize,
    y: &Arc<PolyhedralSpace>,
    interior: bool,
) -> Operator {
    let x = Arc::new(linf_space(n).unwrap());
    let (u, w) = points_on_an_edge(rng, y, interior);
    let half = rat(1, 2);
    let a = u.add(&w).scale(&half);
    let b = u.sub(&w).scale(&half);
    let k = rng.gen_range(0..n);
    let raw: Vec<Rational> = (0..n - 1).map(|_| int(rng.gen_range(-5..=5))).collect();
    let total = raw
        .iter()
        .fold(Rational::zero(), |acc, r| acc + num_traits::Signed::abs(r));
    let weights: Vec<Rational> = if total.is_zero() {
        let mut w = vec![Rational::zero(); n - 1];
        w[0] = Rational::one();
        w
    } else {
        raw.iter().map(|r| r / &total).collect()
    };
    let mut cols = Vec::with_capacity(n);
    let mut it = weights.iter();
    for j in 0..n {
        if j == k {
            cols.push(a.clone());
        } else {
            cols.push(b.scale(it.next().unwrap()));
        }
    }
    Operator::new(x, y.clone(), QMatrix::from_columns(&cols).unwrap()).unwrap()
}

/// `x -> x_i y` with `y` a smooth unit vector.
pub fn rank_one_smooth<R: Rng>(rng: &mut R, n: usize, y: &Arc<PolyhedralSpace>) -> Operator {
    let x = Arc::new(linf_space(n).unwrap());
    let (p, _) = points_on_an_edge(rng, y, true);
    let i = rng.gen_range(0..n);
    let cols: Vec<QVector> = (0..n)
        .map(|j| {
            if i == j {
                p.clone()
            } else {
                QVector::zeros(y.dim())
            }
        })
        .collect();
    Operator::new(x, y.clone(), QMatrix::from_columns(&cols).unwrap()).unwrap()
}

/// Is `x` a smooth unit vector of `y`?
pub fn is_smooth(y: &PolyhedralSpace, p: &QVector) -> bool {
    face_of(y.facets(), p)
        .map(|f| f.len() == 1)
        .unwrap_or(false)
}
