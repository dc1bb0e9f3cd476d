//! Vertex and half-space descriptions of centrally symmetric polytopes.
//!
//! Half-spaces are always written `{x : <a, x> <= 1}`, which puts the origin
//! in the interior. Under that encoding the facet normals of a symmetric
//! polytope are exactly the vertices of its polar, so both directions of the
//! conversion go through the same vertex enumeration.

mod dd;
mod lp;

use std::collections::BTreeSet;

use num_traits::One;
use serde::{Deserialize, Serialize};

pub use dd::{DdLimits, DdOutcome};

use crate::error::{Error, Result};
use crate::linalg::{check_dim, span_dimension, QVector};

/// Largest dimension the conversions accept without an explicit override.
pub const DEFAULT_CAP: usize = 9;

/// Dimension cap plus optional time/size limits for a conversion.
#[derive(Clone, Debug)]
pub struct ConvertOptions {
    pub cap: usize,
    pub limits: DdLimits,
}

impl Default for ConvertOptions {
    fn default() -> Self {
        ConvertOptions {
            cap: DEFAULT_CAP,
            limits: DdLimits::default(),
        }
    }
}

impl ConvertOptions {
    fn check_cap(&self, dim: usize) -> Result<()> {
        if dim > self.cap {
            Err(Error::CapExceeded { dim, cap: self.cap })
        } else {
            Ok(())
        }
    }
}

fn canonical(dim: usize, points: Vec<QVector>) -> Result<Vec<QVector>> {
    for p in &points {
        check_dim(dim, p.dim())?;
    }
    let set: BTreeSet<QVector> = points.into_iter().collect();
    Ok(set.into_iter().collect())
}

/// A finite point set, sorted lexicographically and deduplicated.
///
/// Outputs of [`h_to_v`] and [`extreme_filter`] list extreme points only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "VRepJson")]
pub struct VRep {
    dim: usize,
    vertices: Vec<QVector>,
}

#[derive(Deserialize)]
struct VRepJson {
    dim: usize,
    vertices: Vec<QVector>,
}

impl TryFrom<VRepJson> for VRep {
    type Error = Error;
    fn try_from(raw: VRepJson) -> Result<Self> {
        VRep::new(raw.dim, raw.vertices)
    }
}

impl VRep {
    pub fn new(dim: usize, vertices: Vec<QVector>) -> Result<Self> {
        Ok(VRep {
            dim,
            vertices: canonical(dim, vertices)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, p: &QVector) -> bool {
        self.vertices.binary_search(p).is_ok()
    }

    /// `v` listed iff `-v` listed.
    pub fn is_symmetric(&self) -> bool {
        self.vertices.iter().all(|v| self.contains(&-v))
    }

    fn first_without_antipode(&self) -> Option<&QVector> {
        self.vertices.iter().find(|v| !self.contains(&-*v))
    }
}

/// Half-spaces `{x : <a, x> <= 1}`, one normal `a` per entry, sorted and
/// deduplicated. Outputs of [`v_to_h`] contain facets only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "HRepJson")]
pub struct HRep {
    dim: usize,
    inequalities: Vec<QVector>,
}

#[derive(Deserialize)]
struct HRepJson {
    dim: usize,
    inequalities: Vec<QVector>,
}

impl TryFrom<HRepJson> for HRep {
    type Error = Error;
    fn try_from(raw: HRepJson) -> Result<Self> {
        HRep::new(raw.dim, raw.inequalities)
    }
}

impl HRep {
    pub fn new(dim: usize, inequalities: Vec<QVector>) -> Result<Self> {
        Ok(HRep {
            dim,
            inequalities: canonical(dim, inequalities)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[QVector] {
        &self.inequalities
    }

    pub fn len(&self) -> usize {
        self.inequalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inequalities.is_empty()
    }

    /// `<a, x> <= 1` for every normal.
    pub fn contains(&self, x: &QVector) -> bool {
        let one = num_rational::BigRational::one();
        self.inequalities.iter().all(|a| a.dot(x) <= one)
    }

    /// Keeps the inequalities that are facets of the polytope with the given
    /// vertices: those whose tight vertices span the whole space.
    pub fn facets_given(&self, vertices: &VRep) -> HRep {
        let one = num_rational::BigRational::one();
        let inequalities = self
            .inequalities
            .iter()
            .filter(|a| {
                let tight: Vec<QVector> = vertices
                    .vertices
                    .iter()
                    .filter(|v| a.dot(v) == one)
                    .cloned()
                    .collect();
                span_dimension(&tight).unwrap_or(0) == self.dim
            })
            .cloned()
            .collect();
        HRep {
            dim: self.dim,
            inequalities,
        }
    }
}

/// Facet description of a symmetric full-dimensional polytope.
pub fn v_to_h(v: &VRep) -> Result<HRep> {
    v_to_h_with(v, &ConvertOptions::default())
}

pub fn v_to_h_with(v: &VRep, opts: &ConvertOptions) -> Result<HRep> {
    opts.check_cap(v.dim)?;
    if v.is_empty() {
        return Err(Error::Empty("vertex set"));
    }
    if let Some(p) = v.first_without_antipode() {
        return Err(Error::Asymmetric(p.to_string()));
    }
    let rank = span_dimension(&v.vertices)?;
    if rank < v.dim {
        return Err(Error::Degenerate(format!(
            "vertices span dimension {rank} < {}",
            v.dim
        )));
    }
    // Facet normals of P are the vertices of its polar {a : <a, v> <= 1}.
    match dd::vertices_of(v.dim, &v.vertices, &opts.limits)? {
        DdOutcome::Complete(normals) => HRep::new(v.dim, normals),
        DdOutcome::Interrupted {
            processed, total, ..
        } => Err(Error::BudgetExhausted { processed, total }),
    }
}

/// Extreme points of a bounded polytope with the origin in its interior.
pub fn h_to_v(h: &HRep) -> Result<VRep> {
    h_to_v_with(h, &ConvertOptions::default())
}

pub fn h_to_v_with(h: &HRep, opts: &ConvertOptions) -> Result<VRep> {
    match h_to_v_budgeted(h, opts)? {
        DdOutcome::Complete(v) => VRep::new(h.dim, v),
        DdOutcome::Interrupted {
            processed, total, ..
        } => Err(Error::BudgetExhausted { processed, total }),
    }
}

/// Like [`h_to_v_with`] but hands back the partial state when the limits
/// in `opts` run out.
pub fn h_to_v_budgeted(h: &HRep, opts: &ConvertOptions) -> Result<DdOutcome> {
    opts.check_cap(h.dim)?;
    Ok(
        match dd::vertices_of(h.dim, &h.inequalities, &opts.limits)? {
            DdOutcome::Complete(v) => DdOutcome::Complete(canonical(h.dim, v)?),
            other => other,
        },
    )
}

/// Drops redundant inequalities.
pub fn remove_redundant(h: &HRep, opts: &ConvertOptions) -> Result<HRep> {
    let v = h_to_v_with(h, opts)?;
    Ok(h.facets_given(&v))
}

/// The points that are extreme in the convex hull of `points`.
///
/// A point survives iff it is not a convex combination of the other
/// (distinct) points; this works in any affine span.
pub fn extreme_filter(points: &[QVector]) -> Result<VRep> {
    let first = points.first().ok_or(Error::Empty("point list"))?;
    let dim = first.dim();
    let distinct = canonical(dim, points.to_vec())?;
    let keep = distinct
        .iter()
        .enumerate()
        .filter(|(i, p)| {
            let others: Vec<&QVector> = distinct
                .iter()
                .enumerate()
                .filter(|(j, _)| j != i)
                .map(|(_, q)| q)
                .collect();
            !lp::in_convex_hull(p, &others)
        })
        .map(|(_, p)| p.clone())
        .collect();
    Ok(VRep {
        dim,
        vertices: keep,
    })
}

/// Inequalities tight at `x`, which must lie in the polytope.
pub fn face_of(h: &HRep, x: &QVector) -> Result<Vec<QVector>> {
    check_dim(h.dim, x.dim())?;
    if !h.contains(x) {
        return Err(Error::OutsidePolytope);
    }
    let one = num_rational::BigRational::one();
    Ok(h.inequalities
        .iter()
        .filter(|a| a.dot(x) == one)
        .cloned()
        .collect())
}

/// Index pairs `(i, j)`, `i < j`, of vertices joined by an edge: the
/// inequalities tight at both have rank `dim - 1`.
pub fn adjacent_pairs(h: &HRep, v: &VRep) -> Vec<(usize, usize)> {
    let one = num_rational::BigRational::one();
    let tight: Vec<Vec<usize>> = v
        .vertices
        .iter()
        .map(|p| {
            h.inequalities
                .iter()
                .enumerate()
                .filter(|(_, a)| a.dot(p) == one)
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let common: Vec<QVector> = tight[i]
                .iter()
                .filter(|k| tight[j].binary_search(k).is_ok())
                .map(|&k| h.inequalities[k].clone())
                .collect();
            if common.len() + 1 >= h.dim && span_dimension(&common).unwrap_or(0) + 1 == h.dim {
                out.push((i, j));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, QMatrix};

    fn v(c: &[i64]) -> QVector {
        QVector::from_ints(c)
    }

    fn vs(list: &[&[i64]]) -> Vec<QVector> {
        list.iter().map(|c| v(c)).collect()
    }

    fn square() -> VRep {
        VRep::new(2, vs(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])).unwrap()
    }

    fn cross() -> Vec<QVector> {
        vs(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])
    }

    fn hexagon() -> VRep {
        VRep::new(
            2,
            vs(&[&[1, 0], &[-1, 0], &[1, 1], &[-1, -1], &[0, 1], &[0, -1]]),
        )
        .unwrap()
    }

    #[test]
    fn square_and_cross_polytope_are_polar() {
        let h = v_to_h(&square()).unwrap();
        assert_eq!(h, HRep::new(2, cross()).unwrap());
        let c = VRep::new(2, cross()).unwrap();
        let h = v_to_h(&c).unwrap();
        assert_eq!(h.inequalities(), square().vertices());
    }

    #[test]
    fn hexagon_facets_brute_force() {
        // Oracle: for every pair of vertices take the line through them; keep
        // it when all vertices lie on one side and it misses the origin.
        let hex = hexagon();
        let mut expected = BTreeSet::new();
        let pts = hex.vertices();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let (p, q) = (&pts[i], &pts[j]);
                // Normal a with <a,p> = <a,q> = 1 solves a 2x2 system.
                let m = QMatrix::from_rows(vec![p.clone(), q.clone()]).unwrap();
                let Some(inv) = m.inverse() else { continue };
                let a = QVector::new(vec![
                    inv.get(0, 0) + inv.get(0, 1),
                    inv.get(1, 0) + inv.get(1, 1),
                ]);
                if pts.iter().all(|w| a.dot(w) <= rat(1, 1)) {
                    expected.insert(a);
                }
            }
        }
        let h = v_to_h(&hex).unwrap();
        assert_eq!(h.inequalities(), expected.into_iter().collect::<Vec<_>>());
        assert_eq!(
            h,
            HRep::new(
                2,
                vs(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1], &[1, -1], &[-1, 1]])
            )
            .unwrap()
        );
    }

    #[test]
    fn h_to_v_examples() {
        let sq = h_to_v(&HRep::new(2, cross()).unwrap()).unwrap();
        assert_eq!(sq, square());
        let c = h_to_v(&HRep::new(2, square().vertices().to_vec()).unwrap()).unwrap();
        assert_eq!(c.vertices(), VRep::new(2, cross()).unwrap().vertices());
    }

    #[test]
    fn operator_ball_of_linf2_has_sixteen_vertices() {
        // Constraints <f (x) x, T> <= 1 for x in {(1,1),(1,-1)}, f in {+-e1,+-e2}.
        let xs = vs(&[&[1, 1], &[1, -1]]);
        let fs = cross();
        let mut ineq = Vec::new();
        for x in &xs {
            for f in &fs {
                ineq.push(crate::linalg::tensor_flatten(f, x));
            }
        }
        let h = HRep::new(4, ineq).unwrap();
        let vert = h_to_v(&h).unwrap();
        // Oracle: the ball is a product of two l1 balls, rows in {+-e1, +-e2}.
        let mut oracle = BTreeSet::new();
        for r1 in &fs {
            for r2 in &fs {
                oracle.insert(
                    QMatrix::from_rows(vec![r1.clone(), r2.clone()])
                        .unwrap()
                        .flatten(),
                );
            }
        }
        assert_eq!(vert.vertices(), oracle.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn conversion_errors() {
        let lopsided = VRep::new(2, vs(&[&[1, 0], &[0, 1]])).unwrap();
        assert!(matches!(v_to_h(&lopsided), Err(Error::Asymmetric(_))));
        let flat = VRep::new(2, vs(&[&[1, 1], &[-1, -1]])).unwrap();
        assert!(matches!(v_to_h(&flat), Err(Error::Degenerate(_))));
        let strip = HRep::new(2, vs(&[&[1, 0], &[-1, 0]])).unwrap();
        assert!(matches!(h_to_v(&strip), Err(Error::Unbounded)));
        let big = VRep::new(10, vec![QVector::unit(10, 0)]).unwrap();
        assert!(matches!(
            v_to_h(&big),
            Err(Error::CapExceeded { dim: 10, cap: 9 })
        ));
    }

    #[test]
    fn extreme_filter_examples() {
        let mid = QVector::new(vec![rat(1, 2), rat(1, 2)]);
        let r = extreme_filter(&[v(&[1, 0]), v(&[0, 1]), mid]).unwrap();
        assert_eq!(r.vertices(), &vs(&[&[0, 1], &[1, 0]])[..]);
        assert_eq!(extreme_filter(square().vertices()).unwrap(), square());

        let proj = QMatrix::from_ints(&[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        let mut images = Vec::new();
        for s in 0..8i64 {
            let x = v(&[1 - 2 * (s & 1), 1 - (s & 2), 1 - ((s & 4) >> 1)]);
            images.push(crate::linalg::mat_apply(&proj, &x).unwrap());
        }
        assert_eq!(extreme_filter(&images).unwrap(), square());
    }

    #[test]
    fn face_of_examples() {
        let h = HRep::new(2, cross()).unwrap();
        assert_eq!(face_of(&h, &v(&[1, 0])).unwrap(), vs(&[&[1, 0]]));
        assert_eq!(face_of(&h, &v(&[1, 1])).unwrap(), vs(&[&[0, 1], &[1, 0]]));
        assert!(face_of(&h, &v(&[0, 0])).unwrap().is_empty());
        assert!(matches!(
            face_of(&h, &v(&[2, 0])),
            Err(Error::OutsidePolytope)
        ));
    }

    #[test]
    fn redundant_inequalities_are_dropped() {
        let mut ineq = cross();
        ineq.push(QVector::new(vec![rat(1, 2), rat(1, 2)]));
        let h = HRep::new(2, ineq).unwrap();
        let reduced = remove_redundant(&h, &ConvertOptions::default()).unwrap();
        assert_eq!(reduced, HRep::new(2, cross()).unwrap());
    }

    #[test]
    fn square_adjacency() {
        let h = HRep::new(2, cross()).unwrap();
        let sq = square();
        let pairs = adjacent_pairs(&h, &sq);
        assert_eq!(pairs.len(), 4);
        for (i, j) in pairs {
            assert_ne!(sq.vertices()[i], -&sq.vertices()[j]);
        }
    }

    #[test]
    fn budget_interrupts() {
        let h = HRep::new(2, cross()).unwrap();
        let opts = ConvertOptions {
            cap: DEFAULT_CAP,
            limits: DdLimits {
                deadline: None,
                max_rays: Some(0),
            },
        };
        assert!(matches!(
            h_to_v_budgeted(&h, &opts).unwrap(),
            DdOutcome::Interrupted { .. }
        ));
        assert!(matches!(
            h_to_v_with(&h, &opts),
            Err(Error::BudgetExhausted { .. })
        ));
    }
}
