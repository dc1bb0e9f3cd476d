//! Exact geometry of polyhedral normed spaces and their extreme contractions.
//!
//! All arithmetic is over the rationals. A space is given by the vertices of
//! its (centrally symmetric) unit ball; operators are matrices between two
//! such spaces.

pub mod error;
pub mod global;
pub mod linalg;
pub mod operator;
pub mod polytope;
pub mod space;

pub use error::{Error, Result};
pub use global::{
    check_lp, check_weak_lp, count_isometries, enumerate_extreme_contractions, hexagon_census,
    operator_ball, vertex_avoiding_contraction, vertex_avoiding_space, weak_lp_sufficient,
    CheckMode, ContractionCensus, Limits, LpVerdict, WeakLpVerdict,
};
pub use linalg::{QMatrix, QVector, Rational};
pub use operator::{Case2d, Operator, OperatorSupport};
pub use polytope::{ConvertOptions, HRep, VRep, DEFAULT_CAP};
pub use space::{builtin_space, make_space, PolyhedralSpace, SupportFace};
