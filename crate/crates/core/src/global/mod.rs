//! Whole-pair computations over `L(X, Y)`.
//!
//! The unit ball of `L(X, Y)` is cut out by `f (x) x <= 1` for `x` a vertex
//! of `B_X` and `f` a vertex of `B_{Y*}`. Its vertices, found by double
//! description, are the extreme contractions; each one is re-checked through
//! the smoothness criterion in [`Operator::is_extreme_contraction`].

mod construct;
mod property;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{tensor_flatten, QMatrix, QVector};
use crate::operator::{Case2d, Operator};
use crate::polytope::{
    h_to_v_budgeted, remove_redundant, ConvertOptions, DdLimits, DdOutcome, HRep, DEFAULT_CAP,
};
use crate::space::{hexagon_space, PolyhedralSpace};

pub use construct::{cyclic_order, vertex_avoiding_contraction, vertex_avoiding_space};
pub use property::{
    check_lp, check_weak_lp, weak_lp_sufficient, CheckMode, LpCounterexample, LpSide, LpVerdict,
    WeakLpVerdict,
};

/// Dimension cap for `L(X, Y)` and an optional wall-clock budget per call.
#[derive(Clone, Debug)]
pub struct Limits {
    pub cap: usize,
    pub budget: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            cap: DEFAULT_CAP,
            budget: None,
        }
    }
}

impl Limits {
    pub fn with_cap(cap: usize) -> Self {
        Limits {
            cap,
            ..Limits::default()
        }
    }

    fn options(&self) -> ConvertOptions {
        ConvertOptions {
            cap: self.cap,
            limits: DdLimits {
                deadline: self.budget.map(|b| Instant::now() + b),
                max_rays: None,
            },
        }
    }

    fn check_pair(&self, x: &PolyhedralSpace, y: &PolyhedralSpace) -> Result<()> {
        let dim = x.dim() * y.dim();
        if dim > self.cap {
            Err(Error::CapExceeded { dim, cap: self.cap })
        } else {
            Ok(())
        }
    }
}

/// All extreme contractions `X -> Y`, sorted by matrix.
#[derive(Clone, Debug)]
pub struct ContractionCensus {
    pub domain: Arc<PolyhedralSpace>,
    pub codomain: Arc<PolyhedralSpace>,
    pub contractions: Vec<Operator>,
    /// Filled when both spaces are planar.
    pub per_case: Option<BTreeMap<Case2d, usize>>,
}

impl ContractionCensus {
    pub fn count(&self) -> usize {
        self.contractions.len()
    }

    /// Members permuting the vertices of `B_X`; `None` unless `X = Y`.
    pub fn isometries(&self) -> Option<usize> {
        (self.domain.ball() == self.codomain.ball()).then(|| {
            self.contractions
                .iter()
                .filter(|t| t.permutes_vertices())
                .count()
        })
    }

    pub fn contains(&self, t: &QMatrix) -> bool {
        self.contractions
            .binary_search_by(|c| c.matrix().cmp(t))
            .is_ok()
    }
}

impl Serialize for ContractionCensus {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Pair<'a> {
            domain: &'a PolyhedralSpace,
            codomain: &'a PolyhedralSpace,
        }
        let matrices: Vec<&QMatrix> = self.contractions.iter().map(|t| t.matrix()).collect();
        let mut s = serializer.serialize_struct("ContractionCensus", 5)?;
        s.serialize_field(
            "pair",
            &Pair {
                domain: &self.domain,
                codomain: &self.codomain,
            },
        )?;
        s.serialize_field("count", &self.count())?;
        s.serialize_field("contractions", &matrices)?;
        s.serialize_field("per_case", &self.per_case)?;
        s.serialize_field("isometries", &self.isometries())?;
        s.end()
    }
}

pub(crate) enum CensusOutcome {
    Complete(ContractionCensus),
    Interrupted {
        processed: usize,
        total: usize,
        partial: Vec<QMatrix>,
    },
}

fn tensor_inequalities(x: &PolyhedralSpace, y: &PolyhedralSpace) -> Result<HRep> {
    let mut tensors = Vec::with_capacity(x.ball().len() * y.dual_ball().len());
    for v in x.vertices() {
        for f in y.dual_vertices() {
            tensors.push(tensor_flatten(f, v));
        }
    }
    HRep::new(x.dim() * y.dim(), tensors)
}

/// Facets of the unit ball of `L(X, Y)` in row-major coordinates.
pub fn operator_ball(x: &PolyhedralSpace, y: &PolyhedralSpace, limits: &Limits) -> Result<HRep> {
    limits.check_pair(x, y)?;
    remove_redundant(&tensor_inequalities(x, y)?, &limits.options())
}

pub(crate) fn census_outcome(
    x: &Arc<PolyhedralSpace>,
    y: &Arc<PolyhedralSpace>,
    limits: &Limits,
) -> Result<CensusOutcome> {
    limits.check_pair(x, y)?;
    let (m, n) = (y.dim(), x.dim());
    let ball = tensor_inequalities(x, y)?;
    let flat = match h_to_v_budgeted(&ball, &limits.options())? {
        DdOutcome::Complete(v) => v,
        DdOutcome::Interrupted {
            processed,
            total,
            partial,
        } => {
            return Ok(CensusOutcome::Interrupted {
                processed,
                total,
                partial: partial
                    .iter()
                    .map(|p| QMatrix::unflatten(m, n, p))
                    .collect::<Result<_>>()?,
            })
        }
    };
    let mut contractions = Vec::with_capacity(flat.len());
    for p in &flat {
        let t = Operator::new(x.clone(), y.clone(), QMatrix::unflatten(m, n, p)?)?;
        if !t.is_extreme_contraction() {
            return Err(Error::Inconsistency(format!(
                "vertex {} of the operator ball is not mn-smooth",
                t.matrix()
            )));
        }
        contractions.push(t);
    }
    contractions.sort_by(|a, b| a.matrix().cmp(b.matrix()));
    let per_case = if m == 2 && n == 2 {
        let mut counts = BTreeMap::new();
        for t in &contractions {
            *counts.entry(t.classify_2d()?).or_insert(0) += 1;
        }
        Some(counts)
    } else {
        None
    };
    Ok(CensusOutcome::Complete(ContractionCensus {
        domain: x.clone(),
        codomain: y.clone(),
        contractions,
        per_case,
    }))
}

/// Every extreme contraction `X -> Y`.
pub fn enumerate_extreme_contractions(
    x: &Arc<PolyhedralSpace>,
    y: &Arc<PolyhedralSpace>,
    limits: &Limits,
) -> Result<ContractionCensus> {
    match census_outcome(x, y, limits)? {
        CensusOutcome::Complete(c) => Ok(c),
        CensusOutcome::Interrupted {
            processed, total, ..
        } => Err(Error::BudgetExhausted { processed, total }),
    }
}

/// Extreme contractions of `X` that permute the vertices of `B_X`.
pub fn count_isometries(x: &Arc<PolyhedralSpace>, limits: &Limits) -> Result<usize> {
    let census = enumerate_extreme_contractions(x, x, limits)?;
    Ok(census.isometries().unwrap_or(0))
}

/// The hexagon census with its expected structure asserted: 30 members, 12
/// isometries, and 18 others attaining the norm at exactly 4 vertices and
/// identifying the images of two vertices up to sign.
pub fn hexagon_census(limits: &Limits) -> Result<ContractionCensus> {
    let hex = Arc::new(hexagon_space());
    let census = enumerate_extreme_contractions(&hex, &hex, limits)?;
    let fail = |what: String| Err(Error::Inconsistency(format!("hexagon census: {what}")));
    if census.count() != 30 {
        return fail(format!(
            "{} extreme contractions, expected 30",
            census.count()
        ));
    }
    let isometries = census.isometries().unwrap_or(0);
    if isometries != 12 {
        return fail(format!("{isometries} isometries, expected 12"));
    }
    let reps: Vec<&QVector> = hex
        .vertices()
        .iter()
        .filter(|v| v.sign_normalized() == **v)
        .collect();
    for t in census
        .contractions
        .iter()
        .filter(|t| !t.permutes_vertices())
    {
        let attainers = t.support()?.attainer_count();
        if attainers != 4 {
            return fail(format!(
                "{} attains its norm at {attainers} vertices",
                t.matrix()
            ));
        }
        let images: Vec<QVector> = reps.iter().map(|v| t.apply(v)).collect::<Result<_>>()?;
        let collapsed = (0..images.len()).any(|i| {
            (i + 1..images.len()).any(|j| images[i] == images[j] || images[i] == -&images[j])
        });
        if !collapsed {
            return fail(format!("{} identifies no two vertex images", t.matrix()));
        }
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{adjacent_pairs, h_to_v};
    use crate::space::{linf_space, octagon_space};

    fn linf2() -> Arc<PolyhedralSpace> {
        Arc::new(linf_space(2).unwrap())
    }

    #[test]
    fn operator_ball_sizes() {
        let l = limits();
        assert_eq!(operator_ball(&linf2(), &linf2(), &l).unwrap().len(), 8);
        let hex = hexagon_space();
        assert_eq!(tensor_inequalities(&hex, &hex).unwrap().len(), 18);
        assert_eq!(operator_ball(&hex, &hex, &l).unwrap().len(), 18);
    }

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn square_census_is_sixteen() {
        let c = enumerate_extreme_contractions(&linf2(), &linf2(), &limits()).unwrap();
        assert_eq!(c.count(), 16);
        assert_eq!(c.isometries(), Some(8));
        assert_eq!(c.per_case.as_ref().unwrap().get(&Case2d::I), Some(&16));
    }

    #[test]
    fn hexagon_census_structure() {
        let c = hexagon_census(&limits()).unwrap();
        assert_eq!(c.count(), 30);
        let cases = c.per_case.unwrap();
        assert_eq!(cases.values().sum::<usize>(), 30);
        assert_eq!(cases.get(&Case2d::II), Some(&12));
        assert_eq!(cases.get(&Case2d::I), Some(&18));
    }

    #[test]
    fn census_is_closed_under_negation() {
        let oct = Arc::new(octagon_space());
        let c = enumerate_extreme_contractions(&oct, &linf2(), &limits()).unwrap();
        assert_eq!(c.count() % 2, 0);
        for t in &c.contractions {
            assert!(c.contains(&-t.matrix()));
        }
    }

    #[test]
    fn isometry_counts() {
        assert_eq!(count_isometries(&linf2(), &limits()).unwrap(), 8);
        let oct = Arc::new(octagon_space());
        assert!(count_isometries(&oct, &limits()).unwrap() >= 2);
    }

    #[test]
    fn edge_midpoints_are_not_extreme() {
        let (x, y) = (Arc::new(hexagon_space()), linf2());
        let h = operator_ball(&x, &y, &limits()).unwrap();
        let v = h_to_v(&h).unwrap();
        let pairs = adjacent_pairs(&h, &v);
        assert!(!pairs.is_empty());
        let half = crate::linalg::rat(1, 2);
        for (i, j) in pairs {
            let mid = v.vertices()[i].lerp(&v.vertices()[j], &half);
            let t = Operator::new(
                x.clone(),
                y.clone(),
                QMatrix::unflatten(2, 2, &mid).unwrap(),
            )
            .unwrap();
            assert!(!t.is_extreme_contraction());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let q = Arc::new(linf_space(4).unwrap());
        let c = Arc::new(linf_space(3).unwrap());
        assert!(matches!(
            enumerate_extreme_contractions(&q, &c, &limits()),
            Err(Error::CapExceeded { dim: 12, cap: 9 })
        ));
        assert!(operator_ball(&q, &c, &Limits::with_cap(3)).is_err());
    }

    #[test]
    fn census_json_shape() {
        let c = enumerate_extreme_contractions(&linf2(), &linf2(), &limits()).unwrap();
        let j = serde_json::to_value(&c).unwrap();
        assert_eq!(j["count"], 16);
        assert_eq!(j["isometries"], 8);
        assert_eq!(j["contractions"].as_array().unwrap().len(), 16);
        assert_eq!(j["per_case"]["I"], 16);
        assert!(j["pair"]["domain"]["vertices"].is_array());
    }
}
