//! Weak L-P and L-P decisions.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::{census_outcome, enumerate_extreme_contractions, CensusOutcome, Limits};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, QVector};
use crate::operator::Operator;
use crate::polytope::face_of;
use crate::space::{linf_space, PolyhedralSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    Exhaustive,
    InconclusiveBudget,
}

/// Outcome of the weak L-P check. `holds` is `None` when the budget ran out.
#[derive(Clone, Debug, Serialize)]
pub struct WeakLpVerdict {
    pub holds: Option<bool>,
    #[serde(serialize_with = "matrix_of")]
    pub witness: Option<Operator>,
    pub checked: usize,
    pub mode: CheckMode,
}

fn matrix_of<S: Serializer>(t: &Option<Operator>, s: S) -> std::result::Result<S::Ok, S::Error> {
    t.as_ref().map(|t| t.matrix()).serialize(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpSide {
    /// Extreme, but some vertex image is not a vertex.
    ExtremeNotVertexPreserving,
    /// Sends every vertex to a vertex, but is not extreme.
    VertexPreservingNotExtreme,
}

#[derive(Clone, Debug, Serialize)]
pub struct LpCounterexample {
    pub side: LpSide,
    pub matrix: QMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct LpVerdict {
    pub holds: bool,
    pub counterexample: Option<LpCounterexample>,
    pub extreme: usize,
    pub vertex_preserving: usize,
}

/// `m p < n + p`, where `|Ext(B_X)| = 2(n + p)`, `n = dim X`, `m = dim Y`.
pub fn weak_lp_sufficient(x: &PolyhedralSpace, y: &PolyhedralSpace) -> bool {
    let p = x.excess();
    y.dim() * p < x.dim() + p
}

/// Does every extreme contraction `X -> Y` send some vertex of `B_X` to a
/// vertex of `B_Y`?
///
/// When the budget runs out on a map from the sup-norm 4-space into a plane,
/// the order bound of [`Operator::ksmooth_bound_check`] is verified on the
/// normalized partial vertices and on the rank-one maps `x -> x_i y`, `y` an
/// edge midpoint, and the verdict is left open.
pub fn check_weak_lp(
    x: &Arc<PolyhedralSpace>,
    y: &Arc<PolyhedralSpace>,
    limits: &Limits,
) -> Result<WeakLpVerdict> {
    match census_outcome(x, y, limits)? {
        CensusOutcome::Complete(census) => {
            let witness = census
                .contractions
                .iter()
                .find(|t| !t.hits_a_vertex())
                .cloned();
            Ok(WeakLpVerdict {
                holds: Some(witness.is_none()),
                witness,
                checked: census.count(),
                mode: CheckMode::Exhaustive,
            })
        }
        CensusOutcome::Interrupted {
            processed,
            total,
            partial,
        } => {
            let cube = linf_space(4)?;
            if x.ball() != cube.ball() || y.dim() != 2 {
                return Err(Error::BudgetExhausted { processed, total });
            }
            let mut checked = 0;
            for m in partial.into_iter().chain(rank_one_family(y)) {
                let t = Operator::new(x.clone(), y.clone(), m)?;
                let norm = t.op_norm();
                if norm.is_zero() {
                    continue;
                }
                t.scaled(&norm.recip()).ksmooth_bound_check()?;
                checked += 1;
            }
            Ok(WeakLpVerdict {
                holds: None,
                witness: None,
                checked,
                mode: CheckMode::InconclusiveBudget,
            })
        }
    }
}

fn rank_one_family(y: &PolyhedralSpace) -> Vec<QMatrix> {
    let half = crate::linalg::rat(1, 2);
    let mut mids = BTreeSet::new();
    for a in y.vertices() {
        for b in y.vertices() {
            let mid = a.lerp(b, &half);
            let on_one_facet = face_of(y.facets(), &mid)
                .map(|f| f.len() == 1)
                .unwrap_or(false);
            if a < b && y.norm(&mid).map(|n| n.is_one()).unwrap_or(false) && on_one_facet {
                mids.insert(mid);
            }
        }
    }
    let mut out = Vec::new();
    for mid in &mids {
        for i in 0..4 {
            let cols: Vec<QVector> = (0..4)
                .map(|j| {
                    if i == j {
                        mid.clone()
                    } else {
                        QVector::zeros(2)
                    }
                })
                .collect();
            out.push(QMatrix::from_columns(&cols).expect("columns share a length"));
        }
    }
    out
}

/// Norm-one maps sending every vertex of `B_X` to a vertex of `B_Y`: each is
/// fixed by the images of a basis of vertices.
fn vertex_preserving_maps(
    x: &Arc<PolyhedralSpace>,
    y: &Arc<PolyhedralSpace>,
) -> Result<Vec<QMatrix>> {
    let n = x.dim();
    let mut basis: Vec<QVector> = Vec::with_capacity(n);
    for v in x.vertices() {
        basis.push(v.clone());
        if crate::linalg::span_dimension(&basis)? < basis.len() {
            basis.pop();
        }
        if basis.len() == n {
            break;
        }
    }
    let inv = QMatrix::from_columns(&basis)?
        .inverse()
        .ok_or_else(|| Error::Inconsistency("vertex basis is singular".into()))?;
    let targets = y.vertices();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; n];
    loop {
        let cols: Vec<QVector> = idx.iter().map(|&k| targets[k].clone()).collect();
        let m = QMatrix::from_columns(&cols)?.mul(&inv)?;
        let t = Operator::new(x.clone(), y.clone(), m)?;
        if t.preserves_vertices() {
            out.insert(t.matrix().clone());
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(out.into_iter().collect());
            }
            idx[pos] += 1;
            if idx[pos] < targets.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Are the extreme contractions exactly the norm-one maps sending every
/// vertex to a vertex?
pub fn check_lp(
    x: &Arc<PolyhedralSpace>,
    y: &Arc<PolyhedralSpace>,
    limits: &Limits,
) -> Result<LpVerdict> {
    let census = enumerate_extreme_contractions(x, y, limits)?;
    let preserving = vertex_preserving_maps(x, y)?;
    let extreme: BTreeSet<&QMatrix> = census.contractions.iter().map(|t| t.matrix()).collect();
    let preserving_set: BTreeSet<&QMatrix> = preserving.iter().collect();
    let counterexample = extreme
        .difference(&preserving_set)
        .next()
        .map(|m| LpCounterexample {
            side: LpSide::ExtremeNotVertexPreserving,
            matrix: (*m).clone(),
        })
        .or_else(|| {
            preserving_set
                .difference(&extreme)
                .next()
                .map(|m| LpCounterexample {
                    side: LpSide::VertexPreservingNotExtreme,
                    matrix: (*m).clone(),
                })
        });
    Ok(LpVerdict {
        holds: counterexample.is_none(),
        counterexample,
        extreme: extreme.len(),
        vertex_preserving: preserving.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{hexagon_space, octagon_space};
    use std::time::Duration;

    fn space(s: PolyhedralSpace) -> Arc<PolyhedralSpace> {
        Arc::new(s)
    }

    #[test]
    fn weak_lp_examples() {
        let l = Limits::default();
        let sq = space(linf_space(2).unwrap());
        let v = check_weak_lp(&space(hexagon_space()), &sq, &l).unwrap();
        assert_eq!(v.holds, Some(true));
        assert!(v.witness.is_none());

        let oct = space(octagon_space());
        let v = check_weak_lp(&oct, &sq, &l).unwrap();
        assert_eq!(v.holds, Some(false));
        let w = v.witness.unwrap();
        assert!(w.is_extreme_contraction());
        assert!(!w.hits_a_vertex());

        let real = space(linf_space(1).unwrap());
        let v = check_weak_lp(&space(hexagon_space()), &real, &l).unwrap();
        assert_eq!(v.holds, Some(true));
        assert_eq!(v.mode, CheckMode::Exhaustive);
    }

    #[test]
    fn sufficient_condition_arithmetic() {
        let sq = linf_space(2).unwrap();
        assert!(weak_lp_sufficient(&hexagon_space(), &sq));
        assert!(!weak_lp_sufficient(&linf_space(4).unwrap(), &sq));
        assert!(!weak_lp_sufficient(&octagon_space(), &sq));
    }

    #[test]
    fn lp_examples() {
        let l = Limits::default();
        let sq = space(linf_space(2).unwrap());
        let v = check_lp(&sq, &sq, &l).unwrap();
        assert!(v.holds);
        assert_eq!(v.extreme, 16);
        assert_eq!(v.vertex_preserving, 16);

        let hex = space(hexagon_space());
        let v = check_lp(&hex, &hex, &l).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.counterexample.unwrap().side,
            LpSide::ExtremeNotVertexPreserving
        );
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let q = space(linf_space(4).unwrap());
        let hex = space(hexagon_space());
        let l = Limits {
            budget: Some(Duration::ZERO),
            ..Limits::default()
        };
        let v = check_weak_lp(&q, &hex, &l).unwrap();
        assert_eq!(v.mode, CheckMode::InconclusiveBudget);
        assert_eq!(v.holds, None);
        assert!(v.checked >= 12);
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["mode"], "inconclusive-budget");
        assert!(j["holds"].is_null());

        let sq = space(linf_space(2).unwrap());
        assert!(matches!(
            check_weak_lp(&sq, &sq, &l),
            Err(Error::BudgetExhausted { .. })
        ));
    }
}
