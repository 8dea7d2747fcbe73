//! Norm-side computations: gauge distances under a polytopal unit ball,
//! unit/diameter distance censuses, the strict-antipodality verifier and the
//! grid covering extraction.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    antipodal_triple_3d, unit_ball_from_antipodal, AntipodalFamily, UnitBallCertificate,
};
use crate::error::{Error, Result};
use crate::geom::lp::{IntLp, LpOutcome};
use crate::geom::point::integer_rows;
use crate::geom::separation::{open_halfspace, HalfSpace};
use crate::geom::{canonical_direction, ExactPoint, LinearFunctional, PointSet};
use crate::rational::{common_denominator, Rational};

/// The distance function used by a census or a covering.
#[derive(Clone, Debug)]
pub enum Norm {
    /// Compared through exact squared lengths.
    Euclidean,
    Polytope(UnitBallCertificate),
}

/// Minkowski functional of a certified unit ball, prepared for repeated use.
pub struct Gauge<'a> {
    ball: &'a UnitBallCertificate,
    scale: BigInt,
    columns: Vec<Vec<BigInt>>,
    vertices: HashSet<&'a ExactPoint>,
}

impl<'a> Gauge<'a> {
    pub fn new(ball: &'a UnitBallCertificate) -> Self {
        let pts = &ball.vertices().points;
        let scale = common_denominator(pts.iter().flat_map(|p| p.coords.iter()));
        Self {
            ball,
            columns: integer_rows(pts),
            scale,
            vertices: pts.iter().collect(),
        }
    }

    /// `min { t ≥ 0 : v ∈ t · conv(vertices) }`, exact.
    pub fn eval(&self, v: &ExactPoint) -> Result<Rational> {
        v.check_dim(self.ball.dimension())?;
        if v.is_zero() {
            return Ok(Rational::zero());
        }
        if self.vertices.contains(v) {
            // certified vertices lie on the boundary
            return Ok(Rational::one());
        }
        let scaled: Vec<Rational> = v
            .coords
            .iter()
            .map(|c| c * Rational::from_integer(self.scale.clone()))
            .collect();
        let den = common_denominator(scaled.iter());
        let rhs: Vec<BigInt> = scaled
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let lp = IntLp {
            rows: v.dim(),
            cols: self.columns.clone(),
            costs: vec![BigInt::one(); self.columns.len()],
            rhs,
        };
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => Ok(value / Rational::from_integer(den)),
            _ => Err(Error::Degenerate(
                "unit ball is not full-dimensional".into(),
            )),
        }
    }
}

pub fn gauge(ball: &UnitBallCertificate, v: &ExactPoint) -> Result<Rational> {
    Gauge::new(ball).eval(v)
}

/// Exact classification of all pairs of a point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceCensus {
    pub unit_pairs: Vec<(usize, usize)>,
    pub diameter_pairs: Vec<(usize, usize)>,
    /// Distinct canonical directions among unit pairs.
    pub nonparallel_unit_directions: Vec<Vec<BigInt>>,
    /// Diameter as a gauge value, or as a squared length for the Euclidean norm.
    #[serde(with = "crate::rational::serde_str")]
    pub diameter_value: Rational,
    pub squared_lengths: bool,
}

impl DistanceCensus {
    pub fn unit_count(&self) -> usize {
        self.unit_pairs.len()
    }
    pub fn nonparallel_count(&self) -> usize {
        self.nonparallel_unit_directions.len()
    }
    pub fn diameter_count(&self) -> usize {
        self.diameter_pairs.len()
    }
}

fn pair_lengths(p: &PointSet, norm: &Norm) -> Result<Vec<((usize, usize), Rational)>> {
    let n = p.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    match norm {
        Norm::Euclidean => Ok(pairs
            .into_par_iter()
            .map(|(i, j)| ((i, j), (&p[j] - &p[i]).norm2()))
            .collect()),
        Norm::Polytope(ball) => {
            let g = Gauge::new(ball);
            pairs
                .into_par_iter()
                .map(|(i, j)| Ok(((i, j), g.eval(&(&p[j] - &p[i]))?)))
                .collect()
        }
    }
}

/// Unit pairs (length exactly one), diameter pairs (length exactly the
/// maximum) and the number of directions among unit pairs.
pub fn distance_census(p: &PointSet, norm: &Norm) -> Result<DistanceCensus> {
    p.require_distinct()?;
    let lengths = pair_lengths(p, norm)?;
    let diameter_value = lengths
        .iter()
        .map(|(_, l)| l)
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero);
    let unit_pairs: Vec<(usize, usize)> = lengths
        .iter()
        .filter(|(_, l)| l.is_one())
        .map(|(pr, _)| *pr)
        .collect();
    let diameter_pairs = if diameter_value.is_zero() {
        Vec::new()
    } else {
        lengths
            .iter()
            .filter(|(_, l)| *l == diameter_value)
            .map(|(pr, _)| *pr)
            .collect()
    };
    let dirs: BTreeSet<Vec<BigInt>> = unit_pairs
        .iter()
        .map(|&(i, j)| canonical_direction(&(&p[j] - &p[i])))
        .collect::<Result<_>>()?;
    Ok(DistanceCensus {
        unit_pairs,
        diameter_pairs,
        nonparallel_unit_directions: dirs.into_iter().collect(),
        diameter_value,
        squared_lengths: matches!(norm, Norm::Euclidean),
    })
}

/// Position of a point inside a family: `(set, index within set)`.
pub type Member = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntipodalWitness {
    pub p: Member,
    pub q: Member,
    /// `φ(p) < φ(r) < φ(q)` for every other point `r` of the union.
    pub functional: LinearFunctional,
}

impl AntipodalWitness {
    pub fn verify(&self, family: &AntipodalFamily) -> bool {
        let (Some(p), Some(q)) = (family.point(self.p), family.point(self.q)) else {
            return false;
        };
        let lo = self.functional.eval(p);
        let hi = self.functional.eval(q);
        lo < hi
            && family.members().all(|(m, r)| {
                m == self.p || m == self.q || {
                    let v = self.functional.eval(r);
                    lo < v && v < hi
                }
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AntipodalityVerdict {
    Verified(Vec<AntipodalWitness>),
    /// No functional separates this cross pair; `weights` is a convex
    /// combination of the constraint vectors `p - r`, `r - q` and `p - q`
    /// (in that order over `others`) summing to zero.
    Counterexample {
        p: Member,
        q: Member,
        others: Vec<Member>,
        #[serde(with = "crate::rational::serde_vec")]
        weights: Vec<Rational>,
    },
}

/// Checks every cross pair `p ∈ A_i`, `q ∈ A_j` (`i < j`) for a functional
/// with `φ(p) < φ(r) < φ(q)` for all other points `r` of the union.
pub fn verify_strict_antipodality(family: &AntipodalFamily) -> Result<AntipodalityVerdict> {
    let union = family.union();
    union.require_distinct()?;
    let dim = union.dimension;
    let members: Vec<Member> = family.members().map(|(m, _)| m).collect();
    let ints = union.integer_coords();
    let flat = |m: Member| members.iter().position(|&x| x == m).expect("member");
    let cross: Vec<(Member, Member)> = family.cross_pairs().collect();

    let results: Vec<std::result::Result<AntipodalWitness, AntipodalityVerdict>> = cross
        .par_iter()
        .map(|&(pm, qm)| {
            let (pi, qi) = (flat(pm), flat(qm));
            let others: Vec<usize> = (0..members.len()).filter(|&r| r != pi && r != qi).collect();
            let diff = |a: usize, b: usize| -> Vec<BigInt> {
                (0..dim).map(|k| &ints[a][k] - &ints[b][k]).collect()
            };
            let mut vectors = Vec::with_capacity(2 * others.len() + 1);
            for &r in &others {
                vectors.push(diff(pi, r));
            }
            for &r in &others {
                vectors.push(diff(r, qi));
            }
            vectors.push(diff(pi, qi));
            match open_halfspace(&vectors, dim) {
                HalfSpace::Open(phi) => Ok(AntipodalWitness {
                    p: pm,
                    q: qm,
                    functional: LinearFunctional::new(phi, Rational::zero()),
                }),
                HalfSpace::Combination(weights) => Err(AntipodalityVerdict::Counterexample {
                    p: pm,
                    q: qm,
                    others: others.iter().map(|&r| members[r]).collect(),
                    weights,
                }),
            }
        })
        .collect();
    let mut witnesses = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(w) => witnesses.push(w),
            Err(counter) => return Ok(counter),
        }
    }
    Ok(AntipodalityVerdict::Verified(witnesses))
}

/// Output of the grid covering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringExtraction {
    /// Indices of `A'`, the points of the densest cell.
    pub subset: Vec<usize>,
    #[serde(with = "crate::rational::serde_str")]
    pub lambda: Rational,
    /// Number of nonempty grid cells.
    pub cells_used: usize,
    /// Grid cell of every input point.
    pub cell_of: Vec<Vec<i64>>,
    #[serde(with = "crate::rational::serde_str")]
    pub cell_side: Rational,
    /// Diameter of `A` and of `A'` (squared for the Euclidean norm).
    #[serde(with = "crate::rational::serde_str")]
    pub diameter: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub subset_diameter: Rational,
    pub squared_lengths: bool,
    /// Reference values `(1+λ)^d` and `((1+λ)/λ)^d · (d ln d + d ln ln d + 5d)`.
    pub bound_forms: (f64, f64),
}

impl CoveringExtraction {
    /// Both covering invariants, exactly.
    pub fn verify(&self, total: usize) -> bool {
        let limit = if self.squared_lengths {
            &self.lambda * &self.lambda * &self.diameter
        } else {
            &self.lambda * &self.diameter
        };
        !self.subset.is_empty()
            && self.subset_diameter <= limit
            && self.subset.len() * self.cells_used >= total
    }
}

fn diameter(points: &PointSet, norm: &Norm) -> Result<Rational> {
    Ok(pair_lengths(points, norm)?
        .into_iter()
        .map(|(_, l)| l)
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Axis-aligned grid covering with cells of norm-diameter at most
/// `λ · diameter(A)`; returns the densest cell.
pub fn covering_extract(
    a: &PointSet,
    lambda: &Rational,
    norm: &Norm,
) -> Result<CoveringExtraction> {
    if a.is_empty() {
        return Err(Error::InvalidInput(
            "covering needs at least one point".into(),
        ));
    }
    if !lambda.is_positive() || *lambda >= Rational::one() {
        return Err(Error::InvalidInput("lambda must lie in (0, 1)".into()));
    }
    let d = a.dimension;
    let squared = matches!(norm, Norm::Euclidean);
    let diam = diameter(a, norm)?;
    let lf = crate::rational::to_f64(lambda);
    let bound_forms = {
        let df = d as f64;
        let rz = df * df.ln() + df * df.ln().ln() + 5.0 * df;
        (
            (1.0 + lf).powi(d as i32),
            ((1.0 + lf) / lf).powi(d as i32) * rz,
        )
    };
    if diam.is_zero() {
        return Ok(CoveringExtraction {
            subset: (0..a.len()).collect(),
            lambda: lambda.clone(),
            cells_used: 1,
            cell_of: vec![vec![0; d]; a.len()],
            cell_side: Rational::zero(),
            diameter: diam.clone(),
            subset_diameter: diam,
            squared_lengths: squared,
            bound_forms,
        });
    }

    let mins: Vec<Rational> = (0..d)
        .map(|k| {
            a.iter()
                .map(|p| p.coords[k].clone())
                .min()
                .expect("nonempty")
        })
        .collect();
    // two points of one cell differ by less than the side on every axis
    // along which A has positive extent, and not at all on the others
    let active: Vec<bool> = (0..d)
        .map(|k| a.iter().any(|p| p.coords[k] != mins[k]))
        .collect();
    let side = match norm {
        Norm::Euclidean => {
            // largest h (up to rounding) with d' h² ≤ λ² D²
            let target = lambda * lambda * &diam;
            let dd = Rational::from_integer(BigInt::from(active.iter().filter(|&&x| x).count()));
            let mut h = crate::rational::from_f64_dyadic(
                (crate::rational::to_f64(&(&target / &dd))).sqrt(),
                40,
            );
            let shrink = Rational::new(BigInt::from(1023), BigInt::from(1024));
            while !h.is_positive() || &h * &h * &dd > target {
                h = if h.is_positive() {
                    h * &shrink
                } else {
                    &target / Rational::from_integer(BigInt::from(4 * d))
                };
            }
            h
        }
        Norm::Polytope(ball) => {
            let g = Gauge::new(ball);
            let mut worst = Rational::zero();
            for mask in 0..(1u32 << d) {
                let corner = ExactPoint::new(
                    (0..d)
                        .map(|k| match (active[k], mask >> k & 1 == 1) {
                            (false, _) => Rational::zero(),
                            (true, true) => -Rational::one(),
                            (true, false) => Rational::one(),
                        })
                        .collect(),
                );
                worst = worst.max(g.eval(&corner)?);
            }
            lambda * &diam / worst
        }
    };

    let cell_of: Vec<Vec<i64>> = a
        .iter()
        .map(|p| {
            (0..d)
                .map(|k| {
                    let c = ((&p.coords[k] - &mins[k]) / &side).floor().to_integer();
                    i64::try_from(c).unwrap_or(i64::MAX)
                })
                .collect()
        })
        .collect();
    let mut cells: BTreeMap<&Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, c) in cell_of.iter().enumerate() {
        cells.entry(c).or_default().push(i);
    }
    let cells_used = cells.len();
    let subset = cells
        .values()
        .fold(None::<&Vec<usize>>, |best, v| match best {
            Some(b) if b.len() >= v.len() => Some(b),
            _ => Some(v),
        })
        .cloned()
        .expect("at least one cell");
    let subset_diameter = diameter(&a.subset(&subset), norm)?;
    let out = CoveringExtraction {
        subset,
        lambda: lambda.clone(),
        cells_used,
        cell_of,
        cell_side: side,
        diameter: diam,
        subset_diameter,
        squared_lengths: squared,
        bound_forms,
    };
    if !out.verify(a.len()) {
        return Err(Error::Inconsistency(
            "grid cell exceeded its certified diameter".into(),
        ));
    }
    Ok(out)
}

/// Census of the three-set strictly antipodal construction in R³.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Theorem3Report {
    pub m: usize,
    pub points: usize,
    pub total_pairs: usize,
    pub unit_pairs: usize,
    pub diameter_pairs: usize,
    pub nonparallel_unit_pairs: usize,
    pub expected_cross_pairs: usize,
    pub antipodal_witnesses: usize,
    pub ball_vertices: usize,
    /// `unit_pairs / C(3m, 2)`; tends to `1 - 1/3` as `m` grows.
    pub ratio: f64,
    pub family: AntipodalFamily,
}

/// Builds the family for `m`, its unit ball, and counts unit, diameter and
/// nonparallel pairs; all three must equal `3m²`.
pub fn theorem3_census(m: usize) -> Result<Theorem3Report> {
    let family = antipodal_triple_3d(m)?;
    let ball = unit_ball_from_antipodal(&family)?;
    let union = family.union();
    let census = distance_census(&union, &Norm::Polytope(ball.clone()))?;
    let expected = 3 * m * m;
    let n = union.len();
    let total = n * (n - 1) / 2;
    let witnesses = family.witnesses.as_ref().map_or(0, Vec::len);
    let report = Theorem3Report {
        m,
        points: n,
        total_pairs: total,
        unit_pairs: census.unit_count(),
        diameter_pairs: census.diameter_count(),
        nonparallel_unit_pairs: census.nonparallel_count(),
        expected_cross_pairs: expected,
        antipodal_witnesses: witnesses,
        ball_vertices: ball.vertices().len(),
        ratio: census.unit_count() as f64 / total as f64,
        family,
    };
    let cross: HashSet<(usize, usize)> = report.family.cross_pairs_flat().into_iter().collect();
    let unit: HashSet<(usize, usize)> = census.unit_pairs.iter().copied().collect();
    if report.unit_pairs != expected
        || report.diameter_pairs != expected
        || report.nonparallel_unit_pairs != expected
        || witnesses != expected
        || unit != cross
        || census.diameter_pairs.iter().any(|p| !cross.contains(p))
    {
        return Err(Error::Inconsistency(format!(
            "m = {m}: unit {}, diameter {}, nonparallel {}, witnesses {}, expected {expected}",
            report.unit_pairs, report.diameter_pairs, report.nonparallel_unit_pairs, witnesses
        )));
    }
    Ok(report)
}
