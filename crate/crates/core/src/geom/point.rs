use std::collections::HashMap;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, int, Rational};

/// A point (or vector) in R² or R³ with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExactPoint {
    #[serde(with = "crate::rational::serde_vec")]
    pub coords: Vec<Rational>,
}

impl ExactPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| int(c)).collect())
    }

    /// Builds a point from `(numerator, denominator)` pairs.
    pub fn from_ratios(coords: &[(i64, i64)]) -> Self {
        Self::new(
            coords
                .iter()
                .map(|&(n, d)| crate::rational::rat(n, d))
                .collect(),
        )
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &ExactPoint) -> Rational {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, t: &Rational) -> ExactPoint {
        ExactPoint::new(self.coords.iter().map(|c| c * t).collect())
    }

    pub fn midpoint(&self, other: &ExactPoint) -> ExactPoint {
        let half = crate::rational::rat(1, 2);
        (self + other).scale(&half)
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(crate::rational::to_f64).collect()
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl Add for &ExactPoint {
    type Output = ExactPoint;
    fn add(self, rhs: &ExactPoint) -> ExactPoint {
        ExactPoint::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &ExactPoint {
    type Output = ExactPoint;
    fn sub(self, rhs: &ExactPoint) -> ExactPoint {
        ExactPoint::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &ExactPoint {
    type Output = ExactPoint;
    fn neg(self) -> ExactPoint {
        ExactPoint::new(self.coords.iter().map(|c| -c).collect())
    }
}

impl std::fmt::Display for ExactPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An indexed list of points sharing one dimension (2 or 3).
///
/// Duplicates are allowed in raw input; operations that need distinct
/// points check with [`PointSet::find_duplicate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub dimension: usize,
    pub points: Vec<ExactPoint>,
}

impl PointSet {
    pub fn new(dimension: usize, points: Vec<ExactPoint>) -> Result<Self> {
        if dimension != 2 && dimension != 3 {
            return Err(Error::UnsupportedDimension(dimension));
        }
        for p in &points {
            p.check_dim(dimension)?;
        }
        Ok(Self { dimension, points })
    }

    /// Infers the dimension from the first point.
    pub fn from_points(points: Vec<ExactPoint>) -> Result<Self> {
        let dim = points
            .first()
            .map(ExactPoint::dim)
            .ok_or_else(|| Error::InvalidInput("empty point list".into()))?;
        Self::new(dim, points)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_points(rows.iter().map(|r| ExactPoint::from_ints(r)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ExactPoint> {
        self.points.iter()
    }

    /// First pair `(i, j)`, `i < j`, of equal points.
    pub fn find_duplicate(&self) -> Option<(usize, usize)> {
        let mut seen: HashMap<&ExactPoint, usize> = HashMap::new();
        for (j, p) in self.points.iter().enumerate() {
            if let Some(&i) = seen.get(p) {
                return Some((i, j));
            }
            seen.insert(p, j);
        }
        None
    }

    pub fn require_distinct(&self) -> Result<()> {
        match self.find_duplicate() {
            Some((i, j)) => Err(Error::DuplicatePoints(i, j)),
            None => Ok(()),
        }
    }

    /// Removes duplicates, returning the distinct set and, for each kept
    /// point, the original indices that map to it (ascending).
    pub fn dedup_with_provenance(&self) -> (PointSet, Vec<Vec<usize>>) {
        let mut index: HashMap<&ExactPoint, usize> = HashMap::new();
        let mut kept = Vec::new();
        let mut prov: Vec<Vec<usize>> = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            match index.get(p) {
                Some(&k) => prov[k].push(i),
                None => {
                    index.insert(p, kept.len());
                    kept.push(p.clone());
                    prov.push(vec![i]);
                }
            }
        }
        (
            PointSet {
                dimension: self.dimension,
                points: kept,
            },
            prov,
        )
    }

    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet {
            dimension: self.dimension,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    pub fn translate(&self, v: &ExactPoint) -> PointSet {
        PointSet {
            dimension: self.dimension,
            points: self.points.iter().map(|p| p + v).collect(),
        }
    }

    /// Coordinates multiplied by the common denominator, as integers.
    /// Positive scaling preserves every affine predicate used here.
    pub fn integer_coords(&self) -> Vec<Vec<BigInt>> {
        integer_rows(&self.points)
    }

    /// Rank of the affine hull (0 for a single point).
    pub fn affine_rank(&self) -> usize {
        match self.points.first() {
            None => 0,
            Some(base) => {
                let diffs: Vec<ExactPoint> = self.points.iter().map(|p| p - base).collect();
                crate::geom::predicates::rank(&diffs)
            }
        }
    }
}

impl std::ops::Index<usize> for PointSet {
    type Output = ExactPoint;
    fn index(&self, i: usize) -> &ExactPoint {
        &self.points[i]
    }
}

pub(crate) fn integer_rows(points: &[ExactPoint]) -> Vec<Vec<BigInt>> {
    let l = common_denominator(points.iter().flat_map(|p| p.coords.iter()));
    points
        .iter()
        .map(|p| {
            p.coords
                .iter()
                .map(|c| c.numer() * (&l / c.denom()))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedup_keeps_first_occurrence() {
        let s = PointSet::from_ints(&[&[0, 0], &[1, 0], &[0, 0], &[1, 0], &[2, 2]]).unwrap();
        assert_eq!(s.find_duplicate(), Some((0, 2)));
        let (d, prov) = s.dedup_with_provenance();
        assert_eq!(d.len(), 3);
        assert_eq!(prov, vec![vec![0, 2], vec![1, 3], vec![4]]);
    }

    #[test]
    fn rejects_mixed_dimensions() {
        let pts = vec![
            ExactPoint::from_ints(&[0, 0]),
            ExactPoint::from_ints(&[0, 0, 1]),
        ];
        assert!(PointSet::from_points(pts).is_err());
        assert!(PointSet::from_ints(&[&[1]]).is_err());
    }

    #[test]
    fn integer_scaling_is_common() {
        let s = PointSet::from_points(vec![
            ExactPoint::from_ratios(&[(1, 2), (1, 3)]),
            ExactPoint::from_ratios(&[(1, 1), (-1, 6)]),
        ])
        .unwrap();
        let rows = s.integer_coords();
        let i = |n: i64| BigInt::from(n);
        assert_eq!(rows, vec![vec![i(3), i(2)], vec![i(6), i(-1)]]);
    }
}
