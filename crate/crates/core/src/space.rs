//! Finite-dimensional real normed spaces whose unit ball is a symmetric
//! polytope.
//!
//! A space is stored by the extreme points of its unit ball together with the
//! extreme points of the dual ball, which double as the facet normals of the
//! primal ball. The norm is the support function of the dual vertices.

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{check_dim, int, span_dimension, QMatrix, QVector, Rational};
use crate::polytope::{extreme_filter, v_to_h_with, ConvertOptions, HRep, VRep, DEFAULT_CAP};

/// A polyhedral Banach space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyhedralSpace {
    dim: usize,
    ball: VRep,
    dual_ball: VRep,
    facets: HRep,
}

/// Extreme supporting functionals of a nonzero point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportFace {
    pub point: QVector,
    /// Dual-ball vertices `f` with `f(point) = ||point||`.
    pub functionals: Vec<QVector>,
    /// Dimension of their span.
    pub order: usize,
}

/// Builds a space from a symmetric point set whose hull is the unit ball.
///
/// Non-extreme points are discarded; the set must already be closed under
/// negation.
pub fn make_space(vertices: Vec<QVector>) -> Result<PolyhedralSpace> {
    make_space_with(vertices, &ConvertOptions::default())
}

pub fn make_space_with(vertices: Vec<QVector>, opts: &ConvertOptions) -> Result<PolyhedralSpace> {
    let first = vertices.first().ok_or(Error::Empty("vertex list"))?;
    let dim = first.dim();
    if dim == 0 {
        return Err(Error::Degenerate("zero-dimensional space".into()));
    }
    let raw = VRep::new(dim, vertices)?;
    if let Some(p) = raw.vertices().iter().find(|v| !raw.contains(&-*v)) {
        return Err(Error::Asymmetric(p.to_string()));
    }
    let ball = extreme_filter(raw.vertices())?;
    let rank = span_dimension(ball.vertices())?;
    if rank < dim {
        return Err(Error::Degenerate(format!(
            "hull spans dimension {rank} < {dim}"
        )));
    }
    if ball.len() < 2 * dim {
        return Err(Error::Degenerate(format!(
            "{} extreme points cannot bound a {dim}-dimensional symmetric ball",
            ball.len()
        )));
    }
    let facets = v_to_h_with(&ball, opts)?;
    let dual_ball = VRep::new(dim, facets.inequalities().to_vec())?;
    Ok(PolyhedralSpace {
        dim,
        ball,
        dual_ball,
        facets,
    })
}

fn sign_vectors(n: usize) -> Vec<QVector> {
    (0..1u32 << n)
        .map(|mask| {
            QVector::new(
                (0..n)
                    .map(|i| if mask >> i & 1 == 1 { int(-1) } else { int(1) })
                    .collect(),
            )
        })
        .collect()
}

fn signed_units(n: usize) -> Vec<QVector> {
    (0..n)
        .flat_map(|i| {
            let e = QVector::unit(n, i);
            [-&e, e]
        })
        .collect()
}

fn check_builtin_dim(n: usize) -> Result<()> {
    if (1..=DEFAULT_CAP).contains(&n) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "dimension {n} (allowed 1..={DEFAULT_CAP})"
        )))
    }
}

/// The sup-norm space; its ball has the `2^n` sign vectors as vertices.
pub fn linf_space(n: usize) -> Result<PolyhedralSpace> {
    check_builtin_dim(n)?;
    Ok(PolyhedralSpace::from_known_parts(
        n,
        sign_vectors(n),
        signed_units(n),
    ))
}

/// The l1 space; its ball has the `2n` signed unit vectors as vertices.
pub fn l1_space(n: usize) -> Result<PolyhedralSpace> {
    check_builtin_dim(n)?;
    Ok(PolyhedralSpace::from_known_parts(
        n,
        signed_units(n),
        sign_vectors(n),
    ))
}

/// Rational model of the regular hexagon: `+-(1,0), +-(1,1), +-(0,1)`.
///
/// It is the image of the Euclidean regular hexagon under the linear map
/// fixing `(1,0)` and sending `(1/2, sqrt3/2)` to `(1,1)`, so every quantity
/// invariant under linear isometric isomorphism is the same for both.
pub fn hexagon_space() -> PolyhedralSpace {
    make_space(
        [[1, 0], [1, 1], [0, 1]]
            .iter()
            .flat_map(|c| {
                let v = QVector::from_ints(c);
                [-&v, v]
            })
            .collect(),
    )
    .expect("hexagon model is a valid space")
}

/// A fixed rational octagon: `(+-2, +-1), (+-1, +-2)`.
pub fn octagon_space() -> PolyhedralSpace {
    make_space(
        [[2, 1], [1, 2], [-1, 2], [-2, 1]]
            .iter()
            .flat_map(|c| {
                let v = QVector::from_ints(c);
                [-&v, v]
            })
            .collect(),
    )
    .expect("octagon model is a valid space")
}

/// Looks up a built-in space: `hexagon`, `octagon`, `linf<n>`, `l1<n>`.
pub fn builtin_space(name: &str) -> Option<PolyhedralSpace> {
    match name {
        "hexagon" => Some(hexagon_space()),
        "octagon" => Some(octagon_space()),
        _ => {
            if let Some(n) = name.strip_prefix("linf") {
                n.parse().ok().and_then(|n| linf_space(n).ok())
            } else if let Some(n) = name.strip_prefix("l1") {
                n.parse().ok().and_then(|n| l1_space(n).ok())
            } else {
                None
            }
        }
    }
}

impl PolyhedralSpace {
    /// Assembles a space whose ball and dual ball are already known to be
    /// polar to each other.
    fn from_known_parts(dim: usize, ball: Vec<QVector>, dual: Vec<QVector>) -> Self {
        let ball = VRep::new(dim, ball).expect("uniform dimension");
        let facets = HRep::new(dim, dual).expect("uniform dimension");
        let dual_ball = VRep::new(dim, facets.inequalities().to_vec()).expect("uniform dimension");
        PolyhedralSpace {
            dim,
            ball,
            dual_ball,
            facets,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extreme points of the unit ball.
    pub fn ball(&self) -> &VRep {
        &self.ball
    }

    /// Extreme points of the dual unit ball.
    pub fn dual_ball(&self) -> &VRep {
        &self.dual_ball
    }

    /// Facet description of the unit ball.
    pub fn facets(&self) -> &HRep {
        &self.facets
    }

    pub fn vertices(&self) -> &[QVector] {
        self.ball.vertices()
    }

    pub fn dual_vertices(&self) -> &[QVector] {
        self.dual_ball.vertices()
    }

    /// The dual space; its ball is the polar of this ball.
    pub fn dual(&self) -> PolyhedralSpace {
        Self::from_known_parts(
            self.dim,
            self.dual_ball.vertices().to_vec(),
            self.ball.vertices().to_vec(),
        )
    }

    /// The number `p >= 0` with `|Ext(B)| = 2(dim + p)`.
    pub fn excess(&self) -> usize {
        self.ball.len() / 2 - self.dim
    }

    /// Image of the space under an invertible linear map `S`: the ball becomes
    /// `S(B)`, so `||Sx||` in the new space equals `||x||` here.
    pub fn transformed(&self, s: &QMatrix) -> Result<PolyhedralSpace> {
        check_dim(self.dim, s.cols())?;
        check_dim(self.dim, s.rows())?;
        if s.rank() < self.dim {
            return Err(Error::Degenerate("transformation is singular".into()));
        }
        make_space(
            self.vertices()
                .iter()
                .map(|v| crate::linalg::mat_apply(s, v))
                .collect::<Result<_>>()?,
        )
    }

    pub fn norm(&self, x: &QVector) -> Result<Rational> {
        check_dim(self.dim, x.dim())?;
        Ok(self.norm_unchecked(x))
    }

    pub(crate) fn norm_unchecked(&self, x: &QVector) -> Rational {
        self.dual_vertices()
            .iter()
            .map(|f| f.dot(x))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// `Ext J(x)`: dual vertices attaining `||x||` at `x`. The point need not
    /// be a unit vector.
    pub fn ext_j(&self, x: &QVector) -> Result<SupportFace> {
        check_dim(self.dim, x.dim())?;
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        let n = self.norm_unchecked(x);
        let functionals: Vec<QVector> = self
            .dual_vertices()
            .iter()
            .filter(|f| f.dot(x) == n)
            .cloned()
            .collect();
        let order = span_dimension(&functionals)?;
        Ok(SupportFace {
            point: x.clone(),
            functionals,
            order,
        })
    }

    fn require_unit(&self, x: &QVector) -> Result<()> {
        let n = self.norm(x)?;
        if n.is_one() {
            Ok(())
        } else {
            Err(Error::NotOnSphere(n.to_string()))
        }
    }

    /// `k` such that the unit vector `x` is `k`-smooth.
    pub fn smoothness_order(&self, x: &QVector) -> Result<usize> {
        self.require_unit(x)?;
        Ok(self.ext_j(x)?.order)
    }

    /// Vertex membership of a unit vector. In a polyhedral space this agrees
    /// with `x` being `dim`-smooth; the two are cross-checked in debug builds.
    pub fn is_extreme_point(&self, x: &QVector) -> Result<bool> {
        self.require_unit(x)?;
        let listed = self.ball.contains(x);
        debug_assert_eq!(
            listed,
            self.ext_j(x).map(|f| f.order == self.dim).unwrap_or(false),
            "vertex membership and full smoothness order disagree at {x}"
        );
        Ok(listed)
    }
}

impl Serialize for PolyhedralSpace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PolyhedralSpace", 3)?;
        s.serialize_field("dim", &self.dim)?;
        s.serialize_field("vertices", self.ball.vertices())?;
        s.serialize_field("dual", &self.dual_ball)?;
        s.end()
    }
}

/// Wire form of a space; extra fields such as `dual` are ignored on input
/// and recomputed.
#[derive(Deserialize)]
pub struct SpaceJson {
    pub dim: usize,
    pub vertices: Vec<QVector>,
}

impl SpaceJson {
    pub fn into_space(self, opts: &ConvertOptions) -> Result<PolyhedralSpace> {
        for v in &self.vertices {
            check_dim(self.dim, v.dim())?;
        }
        make_space_with(self.vertices, opts)
    }
}

impl TryFrom<SpaceJson> for PolyhedralSpace {
    type Error = Error;
    fn try_from(raw: SpaceJson) -> Result<Self> {
        raw.into_space(&ConvertOptions::default())
    }
}

impl<'de> Deserialize<'de> for PolyhedralSpace {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = SpaceJson::deserialize(deserializer)?;
        PolyhedralSpace::try_from(raw).map_err(serde::de::Error::custom)
    }
}
