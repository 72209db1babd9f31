//! Max-preserving maps on `ℝⁿ₊` as `n × n` matrices of [`ScalarFn`] entries,
//! and points of the positive cone with the component-wise order.
//!
//! Entry `(i, j)` is `a_ij(t) = (A(t·e_j))_i`, and the map acts by
//! `(Ax)_i = max_j a_ij(x_j)`. Composition and pointwise maximum of maps make
//! the set of such maps a semiring with unit [`MpMap::identity`] and neutral
//! element [`MpMap::zero`].

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fnalg::{self, FnDescriptor, FnError, ScalarFn};
use crate::ratio::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("coordinate {index} is negative")]
    NegativeCoordinate { index: usize },
    #[error("entries[{row}][{col}]: {source}")]
    Entry {
        row: usize,
        col: usize,
        #[source]
        source: FnError,
    },
    #[error("map file: {0}")]
    Format(String),
}

/// A point of `ℝⁿ₊` with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NonnegVector(#[serde(with = "ratio::serde_str::vec")] Vec<Rational>);

/// Relation of `x` to `y` in the component-wise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderRelation {
    /// `x <= y`; here with `x == y`.
    LessOrEqual,
    /// `x <= y` and `x != y`, strict in some but not all coordinates.
    StrictlyLess,
    /// `x ≪ y`: strict in every coordinate.
    ComponentwiseStrict,
    Incomparable,
}

impl OrderRelation {
    /// `x <= y` in any form.
    pub fn is_le(self) -> bool {
        !matches!(self, OrderRelation::Incomparable)
    }

    /// `x < y` in the sense `x <= y` and `x != y`.
    pub fn is_strict(self) -> bool {
        matches!(
            self,
            OrderRelation::StrictlyLess | OrderRelation::ComponentwiseStrict
        )
    }
}

impl NonnegVector {
    pub fn new(coords: Vec<Rational>) -> Result<Self, MapError> {
        if coords.is_empty() {
            return Err(MapError::EmptyDimension);
        }
        if let Some(index) = coords.iter().position(|c| c.is_negative()) {
            return Err(MapError::NegativeCoordinate { index });
        }
        Ok(NonnegVector(coords))
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self, MapError> {
        Self::new(coords.iter().map(|&c| ratio::int(c)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        NonnegVector(vec![Rational::zero(); n])
    }

    /// The all-ones vector `𝟏`.
    pub fn ones(n: usize) -> Self {
        NonnegVector(vec![Rational::one(); n])
    }

    /// Unit vector `e_i` (zero based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
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

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// All coordinates strictly positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }

    fn check_dim(&self, n: usize) -> Result<(), MapError> {
        if self.dim() != n {
            return Err(MapError::DimensionMismatch {
                expected: n,
                actual: self.dim(),
            });
        }
        Ok(())
    }

    /// Component-wise maximum `x ⊕ y`.
    pub fn join(&self, other: &NonnegVector) -> Result<NonnegVector, MapError> {
        other.check_dim(self.dim())?;
        Ok(NonnegVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.max(b).clone())
                .collect(),
        ))
    }

    /// `t·x` for `t >= 0`.
    pub fn scale(&self, t: &Rational) -> NonnegVector {
        assert!(!t.is_negative(), "negative scale");
        NonnegVector(self.0.iter().map(|c| c * t).collect())
    }

    /// Component-wise product with another vector.
    pub fn hadamard(&self, other: &NonnegVector) -> Result<NonnegVector, MapError> {
        other.check_dim(self.dim())?;
        Ok(NonnegVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect(),
        ))
    }

    pub fn max_norm(&self) -> Rational {
        max_norm(self)
    }

    pub fn le(&self, other: &NonnegVector) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, c| acc + c)
    }
}

impl fmt::Display for NonnegVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", ratio::format(c))?;
        }
        write!(f, ")")
    }
}

/// `‖x‖ = max_i |x_i|`.
pub fn max_norm(x: &NonnegVector) -> Rational {
    x.0.iter().max().cloned().unwrap_or_else(Rational::zero)
}

/// Classifies `x` against `y`.
pub fn compare_vectors(x: &NonnegVector, y: &NonnegVector) -> Result<OrderRelation, MapError> {
    y.check_dim(x.dim())?;
    let mut all_strict = true;
    let mut any_strict = false;
    for (a, b) in x.0.iter().zip(&y.0) {
        if a > b {
            return Ok(OrderRelation::Incomparable);
        }
        if a < b {
            any_strict = true;
        } else {
            all_strict = false;
        }
    }
    Ok(if all_strict {
        OrderRelation::ComponentwiseStrict
    } else if any_strict {
        OrderRelation::StrictlyLess
    } else {
        OrderRelation::LessOrEqual
    })
}

/// A max-preserving map `A: ℝⁿ₊ → ℝⁿ₊` in matrix form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MpMap {
    n: usize,
    entries: Vec<Vec<ScalarFn>>,
}

impl MpMap {
    /// Builds a map from its rows; the grid must be square and nonempty.
    pub fn new(entries: Vec<Vec<ScalarFn>>) -> Result<Self, MapError> {
        let n = entries.len();
        if n == 0 {
            return Err(MapError::EmptyDimension);
        }
        for row in &entries {
            if row.len() != n {
                return Err(MapError::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
        }
        Ok(MpMap { n, entries })
    }

    /// Max-times matrix: entry `(i, j)` is `t ↦ gains[i][j]·t`.
    pub fn from_gains(gains: &[Vec<Rational>]) -> Result<Self, MapError> {
        let rows = gains
            .iter()
            .enumerate()
            .map(|(row, r)| {
                r.iter()
                    .enumerate()
                    .map(|(col, g)| {
                        if g.is_negative() {
                            Err(MapError::Entry {
                                row,
                                col,
                                source: FnError::InvalidParameter("negative gain".into()),
                            })
                        } else {
                            Ok(ScalarFn::linear_nonneg(g.clone()))
                        }
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Self::new(rows)
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            ScalarFn::Identity
                        } else {
                            ScalarFn::Zero
                        }
                    })
                    .collect()
            })
            .collect();
        MpMap { n, entries }
    }

    pub fn zero(n: usize) -> Self {
        MpMap {
            n,
            entries: vec![vec![ScalarFn::Zero; n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `a_ij` (zero based).
    pub fn entry(&self, i: usize, j: usize) -> &ScalarFn {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<ScalarFn>] {
        &self.entries
    }

    pub fn transpose(&self) -> MpMap {
        let entries = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entries[j][i].clone()).collect())
            .collect();
        MpMap { n: self.n, entries }
    }

    /// Gains of a map whose entries are all linear (or zero/identity).
    pub fn gains(&self) -> Option<Vec<Vec<Rational>>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(ScalarFn::as_gain).collect())
            .collect()
    }

    fn check_dim(&self, other: usize) -> Result<(), MapError> {
        if self.n != other {
            return Err(MapError::DimensionMismatch {
                expected: self.n,
                actual: other,
            });
        }
        Ok(())
    }

    pub fn apply(&self, x: &NonnegVector) -> Result<NonnegVector, MapError> {
        apply(self, x)
    }

    /// Whether every entry is structurally equal (after normalization).
    pub fn structurally_equal(&self, other: &MpMap) -> bool {
        self == other
    }

    /// Whether both maps agree at every vector of `grid`.
    pub fn pointwise_equal_on(
        &self,
        other: &MpMap,
        grid: &[NonnegVector],
    ) -> Result<bool, MapError> {
        other.check_dim(self.n)?;
        for x in grid {
            if apply(self, x)? != apply(other, x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for MpMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(" | "))?;
        }
        Ok(())
    }
}

/// `(Ax)_i = max_j a_ij(x_j)`.
pub fn apply(a: &MpMap, x: &NonnegVector) -> Result<NonnegVector, MapError> {
    x.check_dim(a.n)?;
    let mut out = Vec::with_capacity(a.n);
    for (i, row) in a.entries.iter().enumerate() {
        let mut best = Rational::zero();
        for (j, (f, xj)) in row.iter().zip(&x.0).enumerate() {
            if f.is_zero() {
                continue;
            }
            let v = fnalg::evaluate(f, xj).map_err(|source| MapError::Entry {
                row: i,
                col: j,
                source,
            })?;
            if v > best {
                best = v;
            }
        }
        out.push(best);
    }
    Ok(NonnegVector(out))
}

/// `A ∘ B`; entry `(i, j)` is `max_k a_ik ∘ b_kj`.
pub fn compose_maps(a: &MpMap, b: &MpMap) -> Result<MpMap, MapError> {
    a.check_dim(b.n)?;
    let n = a.n;
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    fnalg::max_of(
                        (0..n).map(|k| fnalg::compose(&a.entries[i][k], &b.entries[k][j])),
                    )
                })
                .collect()
        })
        .collect();
    Ok(MpMap { n, entries })
}

/// `A ⊕ B`, the entrywise maximum.
pub fn oplus_maps(a: &MpMap, b: &MpMap) -> Result<MpMap, MapError> {
    a.check_dim(b.n)?;
    let entries = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(f, g)| fnalg::max2(f, g)).collect())
        .collect();
    Ok(MpMap { n: a.n, entries })
}

/// `A^k`, with `A^0 = id`.
pub fn power_map(a: &MpMap, k: usize) -> MpMap {
    let mut acc = MpMap::identity(a.n);
    for _ in 0..k {
        acc = compose_maps(a, &acc).expect("same dimension");
    }
    acc
}

/// On-disk map schema: `{"n": int, "entries": [[F, ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapFile {
    pub n: usize,
    pub entries: Vec<Vec<FnDescriptor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_degree: Option<usize>,
}

impl MapFile {
    pub fn from_map(a: &MpMap) -> Self {
        MapFile {
            n: a.n,
            entries: a
                .entries
                .iter()
                .map(|row| row.iter().map(FnDescriptor::from).collect())
                .collect(),
            truncation_degree: None,
        }
    }

    /// Validates the grid shape and every entry, reporting the first
    /// violation with its position.
    pub fn to_map(&self) -> Result<MpMap, MapError> {
        if self.n == 0 {
            return Err(MapError::EmptyDimension);
        }
        if self.entries.len() != self.n {
            return Err(MapError::Format(format!(
                "n = {} but entries has {} rows",
                self.n,
                self.entries.len()
            )));
        }
        let mut rows = Vec::with_capacity(self.n);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.n {
                return Err(MapError::Format(format!(
                    "n = {} but entries[{i}] has {} columns",
                    self.n,
                    row.len()
                )));
            }
            let fs = row
                .iter()
                .enumerate()
                .map(|(j, d)| {
                    d.to_fn().map_err(|source| MapError::Entry {
                        row: i,
                        col: j,
                        source,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(fs);
        }
        MpMap::new(rows)
    }
}

impl Serialize for MpMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MapFile::from_map(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MpMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        MapFile::deserialize(d)?
            .to_map()
            .map_err(serde::de::Error::custom)
    }
}

/// Deterministic grid of `count` vectors in `ℝⁿ₊` used for pointwise map
/// comparisons: the zero vector, the unit vectors, `𝟏`, then vectors with
/// coordinates `((k·(i+3) + i²) mod 17) / 4`.
pub fn verification_grid(n: usize, count: usize) -> Vec<NonnegVector> {
    let mut grid = vec![NonnegVector::zeros(n)];
    grid.extend((0..n).map(|i| NonnegVector::unit(n, i)));
    grid.push(NonnegVector::ones(n));
    let mut k = 1i64;
    while grid.len() < count {
        let coords = (0..n as i64)
            .map(|i| ratio::frac((k * (i + 3) + i * i) % 17, 4))
            .collect();
        grid.push(NonnegVector(coords));
        k += 1;
    }
    grid.truncate(count);
    grid
}
