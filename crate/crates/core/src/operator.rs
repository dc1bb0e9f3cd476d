//! Linear maps between polyhedral spaces.
//!
//! For a norm-one `T` the extreme supporting functionals of `T` in the dual of
//! the operator space are the tensors `f (x) x` with `x` a vertex of the
//! domain ball attaining the norm and `f` in `Ext J(Tx)`. The rank of those
//! tensors is the order of smoothness of `T`, and `T` is an extreme
//! contraction exactly when that order is `m * n`.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{mat_apply, span_dimension, tensor_flatten, QMatrix, QVector, Rational};
use crate::polytope::{extreme_filter, face_of, VRep};
use crate::space::{linf_space, PolyhedralSpace};

/// `T : X -> Y` stored as an `m x n` matrix, `n = dim X`, `m = dim Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Operator {
    domain: Arc<PolyhedralSpace>,
    codomain: Arc<PolyhedralSpace>,
    matrix: QMatrix,
}

/// Norm-attainment data of a norm-one operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperatorSupport {
    /// Attaining domain vertices, one per antipodal pair (first nonzero
    /// coordinate positive).
    pub attainers: Vec<QVector>,
    /// `(x, f)` with `x` an attainer and `f` in `Ext J(Tx)`.
    pub pairs: Vec<SupportPair>,
    /// `f (x) x` for each pair, flattened row-major.
    pub tensors: Vec<QVector>,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportPair {
    pub x: QVector,
    pub f: QVector,
}

impl OperatorSupport {
    /// `|M_T ∩ Ext(B_X)|`, counting both members of each antipodal pair.
    pub fn attainer_count(&self) -> usize {
        2 * self.attainers.len()
    }
}

/// Case tags for norm-one operators between planar spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Case2d {
    I,
    II,
    III,
    IV,
    V,
    #[serde(rename = "NOT_EXTREME")]
    NotExtreme,
}

impl Case2d {
    pub fn as_str(self) -> &'static str {
        match self {
            Case2d::I => "I",
            Case2d::II => "II",
            Case2d::III => "III",
            Case2d::IV => "IV",
            Case2d::V => "V",
            Case2d::NotExtreme => "NOT_EXTREME",
        }
    }
}

impl fmt::Display for Case2d {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KsmoothCheck {
    /// Every domain vertex attains the norm and maps to a smooth point.
    pub hypotheses: bool,
    pub order: usize,
}

impl Operator {
    pub fn new(
        domain: Arc<PolyhedralSpace>,
        codomain: Arc<PolyhedralSpace>,
        matrix: QMatrix,
    ) -> Result<Self> {
        if matrix.shape() != (codomain.dim(), domain.dim()) {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim() * domain.dim(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        Ok(Operator {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn identity(space: Arc<PolyhedralSpace>) -> Self {
        let n = space.dim();
        Operator {
            domain: space.clone(),
            codomain: space,
            matrix: QMatrix::identity(n),
        }
    }

    pub fn domain(&self) -> &Arc<PolyhedralSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<PolyhedralSpace> {
        &self.codomain
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    /// Same spaces, different matrix.
    pub fn with_matrix(&self, matrix: QMatrix) -> Result<Self> {
        Operator::new(self.domain.clone(), self.codomain.clone(), matrix)
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        Operator {
            matrix: self.matrix.scale(s),
            ..self.clone()
        }
    }

    pub fn negated(&self) -> Self {
        Operator {
            matrix: -&self.matrix,
            ..self.clone()
        }
    }

    pub fn apply(&self, x: &QVector) -> Result<QVector> {
        mat_apply(&self.matrix, x)
    }

    fn images(&self) -> Vec<QVector> {
        self.domain
            .vertices()
            .iter()
            .map(|v| mat_apply(&self.matrix, v).expect("shape checked at construction"))
            .collect()
    }

    /// Largest codomain norm of the image of a domain vertex. The norm is
    /// convex, so this is the operator norm.
    pub fn op_norm(&self) -> Rational {
        self.images()
            .iter()
            .map(|y| self.codomain.norm_unchecked(y))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Attainers, supporting pairs and order of smoothness. Requires
    /// `||T|| = 1`.
    pub fn support(&self) -> Result<OperatorSupport> {
        let norm = self.op_norm();
        if !norm.is_one() {
            return Err(Error::NotNormalized(norm.to_string()));
        }
        Ok(self.support_at_level(&norm))
    }

    fn support_at_level(&self, level: &Rational) -> OperatorSupport {
        let mut attainers = Vec::new();
        let mut pairs = Vec::new();
        let mut tensors = Vec::new();
        for (x, tx) in self.domain.vertices().iter().zip(self.images()) {
            if x.sign_normalized() != *x || self.codomain.norm_unchecked(&tx) != *level {
                continue;
            }
            let face = self
                .codomain
                .ext_j(&tx)
                .expect("attaining image of a nonzero operator is nonzero");
            for f in face.functionals {
                tensors.push(tensor_flatten(&f, x));
                pairs.push(SupportPair { x: x.clone(), f });
            }
            attainers.push(x.clone());
        }
        let order = span_dimension(&tensors).expect("tensors share one length");
        OperatorSupport {
            attainers,
            pairs,
            tensors,
            order,
        }
    }

    /// `||T|| = 1` and `T` is `mn`-smooth.
    pub fn is_extreme_contraction(&self) -> bool {
        let norm = self.op_norm();
        norm.is_one()
            && self.support_at_level(&norm).order == self.domain.dim() * self.codomain.dim()
    }

    /// Extreme points of `T(B_X)`.
    pub fn image_extreme_points(&self) -> VRep {
        extreme_filter(&self.images()).expect("domain ball is nonempty")
    }

    /// `rank T = 2`, `||T|| = 1` and every domain vertex attains the norm.
    pub fn rank_two_attaining(&self) -> bool {
        self.matrix.rank() == 2 && self.attains_at_every_vertex()
    }

    fn attains_at_every_vertex(&self) -> bool {
        let one = Rational::one();
        self.images()
            .iter()
            .all(|y| self.codomain.norm_unchecked(y) == one)
    }

    /// Some domain vertex is sent to a codomain vertex.
    pub fn hits_a_vertex(&self) -> bool {
        self.images()
            .iter()
            .any(|y| self.codomain.ball().contains(y))
    }

    /// Every domain vertex is sent to a codomain vertex.
    pub fn preserves_vertices(&self) -> bool {
        self.images()
            .iter()
            .all(|y| self.codomain.ball().contains(y))
    }

    /// Permutes the vertices of the ball (an isometry onto the same space).
    pub fn permutes_vertices(&self) -> bool {
        if self.domain.ball() != self.codomain.ball() {
            return false;
        }
        let mut images = self.images();
        images.sort();
        images.as_slice() == self.codomain.vertices()
    }

    /// Case analysis for norm-one operators between planar spaces.
    ///
    /// Extremality is decided by the order of smoothness; the geometric
    /// conditions of each case are then required to agree with it, and a
    /// disagreement is reported as an inconsistency.
    pub fn classify_2d(&self) -> Result<Case2d> {
        if self.domain.dim() != 2 || self.codomain.dim() != 2 {
            return Err(Error::Inapplicable(
                "planar classification needs 2-dimensional spaces".into(),
            ));
        }
        let support = self.support()?;
        let count = support.attainer_count();
        let images: Vec<QVector> = support
            .attainers
            .iter()
            .map(|x| self.apply(x))
            .collect::<Result<_>>()?;
        let extreme: Vec<bool> = images
            .iter()
            .map(|y| self.codomain.ball().contains(y))
            .collect();
        let n_extreme = extreme.iter().filter(|&&e| e).count();

        let cond_i = count == 4 && n_extreme == 2;
        let cond_ii = count == 6 && n_extreme >= 2;
        let cond_iii = count == 6 && n_extreme == 1 && {
            let edges: Vec<Vec<QVector>> = images
                .iter()
                .zip(&extreme)
                .filter(|(_, &e)| !e)
                .map(|(y, _)| face_of(self.codomain.facets(), y))
                .collect::<Result<_>>()?;
            let (f, g) = (&edges[0], &edges[1]);
            let neg_g: Vec<QVector> = {
                let mut n: Vec<QVector> = g.iter().map(|a| -a).collect();
                n.sort();
                n
            };
            f != g && *f != neg_g
        };
        let cond_iv = count >= 8 && n_extreme >= 1;

        let order_full = support.order == 4;
        let tag = if order_full {
            if cond_i {
                Case2d::I
            } else if cond_ii {
                Case2d::II
            } else if cond_iii {
                Case2d::III
            } else if cond_iv {
                Case2d::IV
            } else if count >= 8 {
                Case2d::V
            } else {
                return Err(Error::Inconsistency(format!(
                    "4-smooth operator {} matches no case ({count} attainers, {n_extreme} extreme images)",
                    self.matrix
                )));
            }
        } else {
            if cond_i || cond_ii || cond_iii || cond_iv {
                return Err(Error::Inconsistency(format!(
                    "operator {} meets a sufficient case condition but has order {}",
                    self.matrix, support.order
                )));
            }
            Case2d::NotExtreme
        };
        Ok(tag)
    }

    /// Order bound for maps from the sup-norm 4-space into a plane: when every
    /// vertex attains the norm at a smooth image the order is at most 6.
    pub fn ksmooth_bound_check(&self) -> Result<KsmoothCheck> {
        let cube = linf_space(4)?;
        if self.domain.ball() != cube.ball() || self.codomain.dim() != 2 {
            return Err(Error::Inapplicable(
                "bound applies to maps from linf4 into a 2-dimensional space".into(),
            ));
        }
        let norm = self.op_norm();
        if norm.is_zero() {
            return Ok(KsmoothCheck {
                hypotheses: false,
                order: 0,
            });
        }
        let support = self.support_at_level(&norm);
        let hypotheses = norm.is_one()
            && self.attains_at_every_vertex()
            && self.images().iter().all(|y| {
                self.codomain
                    .ext_j(y)
                    .map(|face| face.order == 1)
                    .unwrap_or(false)
            });
        if hypotheses && support.order > 6 {
            return Err(Error::Inconsistency(format!(
                "operator {} meets the hypotheses but has order {}",
                self.matrix, support.order
            )));
        }
        Ok(KsmoothCheck {
            hypotheses,
            order: support.order,
        })
    }
}

impl Serialize for Operator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Operator", 3)?;
        s.serialize_field("domain", self.domain.as_ref())?;
        s.serialize_field("codomain", self.codomain.as_ref())?;
        s.serialize_field("matrix", &self.matrix)?;
        s.end()
    }
}

#[derive(Deserialize)]
struct OperatorJson {
    domain: PolyhedralSpace,
    codomain: PolyhedralSpace,
    matrix: QMatrix,
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = OperatorJson::deserialize(deserializer)?;
        Operator::new(Arc::new(raw.domain), Arc::new(raw.codomain), raw.matrix)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use crate::space::{hexagon_space, l1_space, octagon_space};

    fn v(c: &[i64]) -> QVector {
        QVector::from_ints(c)
    }

    fn linf2() -> Arc<PolyhedralSpace> {
        Arc::new(linf_space(2).unwrap())
    }

    fn op(x: &Arc<PolyhedralSpace>, y: &Arc<PolyhedralSpace>, rows: &[&[i64]]) -> Operator {
        Operator::new(x.clone(), y.clone(), QMatrix::from_ints(rows).unwrap()).unwrap()
    }

    #[test]
    fn op_norm_examples() {
        let s = linf2();
        assert_eq!(Operator::identity(s.clone()).op_norm(), int(1));
        assert_eq!(op(&s, &s, &[&[1, 1], &[0, 0]]).op_norm(), int(2));

        // l1 -> hexagon dual, e1 -> x1, e2 -> x3 for two dual vertices.
        let hex_dual = Arc::new(hexagon_space().dual());
        let l12 = Arc::new(l1_space(2).unwrap());
        let x1 = hex_dual.vertices()[0].clone();
        let x3 = hex_dual.vertices()[2].clone();
        let t = Operator::new(l12, hex_dual, QMatrix::from_columns(&[x1, x3]).unwrap()).unwrap();
        assert_eq!(t.op_norm(), int(1));
    }

    #[test]
    fn support_of_identity_on_square() {
        let t = Operator::identity(linf2());
        let s = t.support().unwrap();
        assert_eq!(s.attainers, vec![v(&[1, -1]), v(&[1, 1])]);
        assert_eq!(s.attainer_count(), 4);
        assert_eq!(s.pairs.len(), 4);
        assert_eq!(s.order, 4);
    }

    #[test]
    fn support_of_coordinate_projection() {
        let s = linf2();
        let t = op(&s, &s, &[&[1, 0], &[0, 0]]);
        let sup = t.support().unwrap();
        assert_eq!(sup.attainers.len(), 2);
        assert_eq!(sup.order, 2);
        let mut tensors = sup.tensors.clone();
        tensors.sort();
        assert_eq!(tensors, vec![v(&[1, -1, 0, 0]), v(&[1, 1, 0, 0])]);
    }

    #[test]
    fn support_requires_norm_one() {
        let s = linf2();
        let t = op(&s, &s, &[&[1, 1], &[0, 0]]);
        assert!(matches!(t.support(), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn extreme_contraction_examples() {
        let s = linf2();
        assert!(Operator::identity(s.clone()).is_extreme_contraction());
        assert!(!op(&s, &s, &[&[1, 0], &[0, 0]]).is_extreme_contraction());
        let half = Operator::new(
            s.clone(),
            s.clone(),
            QMatrix::new(2, 2, vec![int(1), int(0), int(0), rat(1, 2)]).unwrap(),
        )
        .unwrap();
        assert!(!half.is_extreme_contraction());
        assert_eq!(half.support().unwrap().order, 2);
        assert_eq!(half.classify_2d().unwrap(), Case2d::NotExtreme);
    }

    #[test]
    fn image_extreme_points_examples() {
        let cube = Arc::new(linf_space(3).unwrap());
        let t = op(&cube, &linf2(), &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(t.image_extreme_points().vertices(), linf2().vertices());
        let hex = Arc::new(hexagon_space());
        assert_eq!(
            Operator::identity(hex.clone())
                .image_extreme_points()
                .vertices(),
            hex.vertices()
        );
        let s = linf2();
        let t = Operator::new(
            s.clone(),
            s,
            QMatrix::new(2, 2, vec![rat(1, 2), rat(1, 2), int(0), int(0)]).unwrap(),
        )
        .unwrap();
        assert_eq!(
            t.image_extreme_points().vertices(),
            &[v(&[-1, 0]), v(&[1, 0])]
        );
    }

    #[test]
    fn rank_two_attaining_examples() {
        let cube = Arc::new(linf_space(3).unwrap());
        assert!(op(&cube, &linf2(), &[&[1, 0, 0], &[0, 1, 0]]).rank_two_attaining());
        assert!(Operator::identity(linf2()).rank_two_attaining());
        assert!(!op(&cube, &linf2(), &[&[1, 0, 0], &[0, 0, 0]]).rank_two_attaining());
    }

    #[test]
    fn classify_examples() {
        let hex = Arc::new(hexagon_space());
        assert_eq!(Operator::identity(hex).classify_2d().unwrap(), Case2d::II);
        assert_eq!(
            Operator::identity(linf2()).classify_2d().unwrap(),
            Case2d::I
        );
        let cube = Arc::new(linf_space(3).unwrap());
        let t = op(&cube, &linf2(), &[&[1, 0, 0], &[0, 1, 0]]);
        assert!(matches!(t.classify_2d(), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn classify_octagon_identity() {
        let oct = Arc::new(octagon_space());
        assert_eq!(Operator::identity(oct).classify_2d().unwrap(), Case2d::IV);
    }

    #[test]
    fn ksmooth_examples() {
        let q = Arc::new(linf_space(4).unwrap());
        let t = op(&q, &linf2(), &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let c = t.ksmooth_bound_check().unwrap();
        assert!(!c.hypotheses);

        // Rank one onto a smooth point: every vertex attains, order 4.
        let hex = Arc::new(hexagon_space());
        let y = QVector::new(vec![int(1), rat(1, 2)]);
        let m =
            QMatrix::from_columns(&[y, QVector::zeros(2), QVector::zeros(2), QVector::zeros(2)])
                .unwrap();
        let t = Operator::new(q.clone(), hex, m).unwrap();
        let c = t.ksmooth_bound_check().unwrap();
        assert!(c.hypotheses);
        assert_eq!(c.order, 4);

        let half = op(&q, &linf2(), &[&[1, 0, 0, 0], &[0, 0, 0, 0]]).scaled(&rat(1, 2));
        assert!(!half.ksmooth_bound_check().unwrap().hypotheses);
        assert!(Operator::identity(linf2()).ksmooth_bound_check().is_err());
    }

    #[test]
    fn operator_json_round_trip() {
        let t = op(&linf2(), &Arc::new(hexagon_space()), &[&[1, 0], &[0, 1]]);
        let s = serde_json::to_string(&t).unwrap();
        let back: Operator = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn shape_is_checked() {
        let q = Arc::new(linf_space(3).unwrap());
        assert!(Operator::new(q, linf2(), QMatrix::identity(2)).is_err());
    }
}
