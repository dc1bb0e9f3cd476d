//! Exact rational scalars, vectors and matrices.
//!
//! Scalars are [`num_rational::BigRational`], which keeps every value in
//! lowest terms with a positive denominator, so structural equality is value
//! equality. Ranks are computed by fraction-free (Bareiss) elimination on an
//! integer rescaling of the rows.
//!
//! Operators are flattened row-major: entry `(i, j)` of an `m x n` matrix sits
//! at position `i * n + j`. [`tensor_flatten`] uses the same layout so that the
//! pairing of `f (x) x` with a flattened operator `T` is `f(Tx)`.

use std::fmt;
use std::ops::{Index, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form.
pub type Rational = BigRational;

/// Builds a rational from an integer pair. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` (optionally signed, surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Canonical `"p/q"` text; integers print without a denominator.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// A coordinate vector over the rationals.
///
/// Ordering is lexicographic by coordinates, which is the canonical vertex
/// order used throughout the crate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        QVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        QVector(coords.iter().map(|&c| int(c)).collect())
    }

    /// Parses each coordinate with [`parse_rational`].
    pub fn parse<S: AsRef<str>>(coords: &[S]) -> Result<Self> {
        coords
            .iter()
            .map(|c| parse_rational(c.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(QVector)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn checked_dot(&self, other: &QVector) -> Result<Rational> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.dot(other))
    }

    pub fn add(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> QVector {
        QVector(self.0.iter().map(|a| a * s).collect())
    }

    /// `t * self + (1 - t) * other`.
    pub fn lerp(&self, other: &QVector, t: &Rational) -> QVector {
        let u = Rational::one() - t;
        QVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a * t + b * &u)
                .collect(),
        )
    }

    /// The representative of `{self, -self}` whose first nonzero coordinate
    /// is positive.
    pub fn sign_normalized(&self) -> QVector {
        match self.0.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Smallest positive multiple with integer coordinates and gcd 1.
    pub(crate) fn primitive_integers(&self) -> Vec<BigInt> {
        primitive(scale_to_integers(&self.0))
    }
}

impl Neg for &QVector {
    type Output = QVector;
    fn neg(self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Neg for QVector {
    type Output = QVector;
    fn neg(self) -> QVector {
        -&self
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl From<Vec<Rational>> for QVector {
    fn from(v: Vec<Rational>) -> Self {
        QVector(v)
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for QVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            seq.serialize_element(&format_rational(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        QVector::parse(&raw).map_err(de::Error::custom)
    }
}

/// Dense `rows x cols` rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        check_dim(rows * cols, entries.len())?;
        Ok(QMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| QVector::from_ints(r)).collect())
    }

    /// Stacks equal-length vectors as rows.
    pub fn from_rows(rows: Vec<QVector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, QVector::dim);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            check_dim(c, row.dim())?;
            entries.extend(row.into_coords());
        }
        Ok(QMatrix {
            rows: r,
            cols: c,
            entries,
        })
    }

    /// Places the vectors as columns.
    pub fn from_columns(cols: &[QVector]) -> Result<Self> {
        Ok(Self::from_rows(cols.to_vec())?.transpose())
    }

    /// Inverse of [`QMatrix::flatten`].
    pub fn unflatten(rows: usize, cols: usize, flat: &QVector) -> Result<Self> {
        Self::new(rows, cols, flat.coords().to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> QVector {
        QVector(self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_vectors(&self) -> Vec<QVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, j: usize) -> QVector {
        QVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn transpose(&self) -> QMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        QMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Row-major flattening, index `i * cols + j`.
    pub fn flatten(&self) -> QVector {
        QVector(self.entries.clone())
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        check_dim(self.cols, other.rows)?;
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(
            (0..self.rows).map(|i| &self.entries[i * self.cols..(i + 1) * self.cols]),
            self.cols,
        )
    }

    /// Gauss-Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n).map(|i| self.row(i).into_coords()).collect();
        let mut inv: Vec<Vec<Rational>> =
            (0..n).map(|i| QVector::unit(n, i).into_coords()).collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= &p;
                inv[col][j] /= &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let (ac, ic) = (a[col][j].clone(), inv[col][j].clone());
                    a[r][j] -= &f * ac;
                    inv[r][j] -= &f * ic;
                }
            }
        }
        Some(QMatrix {
            rows: n,
            cols: n,
            entries: inv.into_iter().flatten().collect(),
        })
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&self.row(i))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<QVector>::deserialize(deserializer)?;
        if rows.is_empty() {
            return Err(de::Error::custom("matrix has no rows"));
        }
        QMatrix::from_rows(rows).map_err(de::Error::custom)
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Rank of the matrix whose rows are `vectors`.
///
/// Returns 0 for an empty list; mixed dimensions are an error.
pub fn span_dimension(vectors: &[QVector]) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let d = first.dim();
    for v in vectors {
        check_dim(d, v.dim())?;
    }
    Ok(rank_of_rows(vectors.iter().map(|v| v.coords()), d))
}

/// Exact product `T x`.
pub fn mat_apply(t: &QMatrix, x: &QVector) -> Result<QVector> {
    check_dim(t.cols, x.dim())?;
    Ok(QVector(
        (0..t.rows)
            .map(|i| {
                t.entries[i * t.cols..(i + 1) * t.cols]
                    .iter()
                    .zip(x.iter())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect(),
    ))
}

/// The functional `S -> f(S x)` on `m x n` operators, flattened row-major:
/// entry `i * n + j` is `f_i * x_j`.
pub fn tensor_flatten(f: &QVector, x: &QVector) -> QVector {
    let mut out = Vec::with_capacity(f.dim() * x.dim());
    for fi in f.iter() {
        for xj in x.iter() {
            out.push(fi * xj);
        }
    }
    QVector(out)
}

/// Clears denominators row-wise: returns a positive multiple of `row` with
/// integer entries.
pub(crate) fn scale_to_integers(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect()
}

/// Divides out the gcd of the entries (leaves the zero vector alone).
pub(crate) fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

fn rank_of_rows<'a, I>(rows: I, cols: usize) -> usize
where
    I: Iterator<Item = &'a [Rational]>,
{
    let mut m: Vec<Vec<BigInt>> = rows
        .map(scale_to_integers)
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    bareiss_rank(&mut m, cols)
}

/// Fraction-free Gaussian elimination. After step `k` every active entry is
/// a `(k+1)`-minor of the input, so each division by the previous pivot is
/// exact and coefficient growth stays polynomial.
pub(crate) fn bareiss_rank(m: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = &pivot_row[col];
        for row in rest.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..cols {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot.clone();
        rank += 1;
    }
    rank
}
