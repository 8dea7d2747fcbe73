//! Witness transformations between the midpoint quantity `E`, the Minkowski
//! sum quantity `M`, and nonparallel unit distances `W`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::UnitBallCertificate;
use crate::error::{Error, Result};
use crate::extremal::{compute_m, minkowski_sum, ExtremalResult, PairSystem, DEFAULT_CAP};
use crate::geom::predicates::orient2;
use crate::geom::{
    canonical_direction, convexly_independent, ConvexPositionCertificate, ExactPoint, PointSet,
};
use crate::norms::Gauge;
use crate::rational::{int, rat, Rational};

/// Largest number of doublings tried when pushing a translate far enough.
const MAX_DOUBLINGS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReductionWitness {
    /// `M(n, n) ≤ E(2n)`.
    Claim1 {
        p: PointSet,
        q: PointSet,
        s: PointSet,
        /// Translation applied to `Q` to make it disjoint from `P`.
        offset: Option<ExactPoint>,
        /// `R = P ∪ (Q + offset)`, `|S|` pairs, midpoints `(S + offset) / 2`.
        pairs: PairSystem,
        certificate: ConvexPositionCertificate,
    },
    /// `M(n, n) ≤ 2 W(2n)` in the plane.
    Claim2 {
        p: PointSet,
        q: PointSet,
        s: PointSet,
        /// Indices into `s` of the chosen chain `S'`.
        chain: Vec<usize>,
        /// Reflection center `τ`: the ball has vertices `±(S' - τ)`.
        center: ExactPoint,
        ball: UnitBallCertificate,
        /// `R = P ∪ (τ - Q)`.
        points: PointSet,
        /// Index pairs into `points` at gauge distance exactly 1.
        unit_pairs: Vec<(usize, usize)>,
        directions: Vec<Vec<BigInt>>,
    },
    /// `M(2n, 2n) ≤ 4 M(n, n)`.
    Claim3 {
        p: PointSet,
        q: PointSet,
        c: PointSet,
        seed: u64,
        p_halves: [Vec<usize>; 2],
        q_halves: [Vec<usize>; 2],
        /// Label `(i, j)` of every point of `c` (halves numbered from 0).
        labels: Vec<(usize, usize)>,
        /// Points of `c` whose generating pairs carry more than one label;
        /// they keep the lowest label.
        ambiguous: Vec<usize>,
        block: (usize, usize),
        /// Indices into `c` of the largest block.
        members: Vec<usize>,
        certificate: ConvexPositionCertificate,
    },
}

impl ReductionWitness {
    /// Size of the input convexly independent set.
    pub fn input_size(&self) -> usize {
        match self {
            Self::Claim1 { s, .. } | Self::Claim2 { s, .. } => s.len(),
            Self::Claim3 { c, .. } => c.len(),
        }
    }

    /// Size of the produced witness: pairs, unit pairs, or block points.
    pub fn output_size(&self) -> usize {
        match self {
            Self::Claim1 { pairs, .. } => pairs.pairs.len(),
            Self::Claim2 { unit_pairs, .. } => unit_pairs.len(),
            Self::Claim3 { members, .. } => members.len(),
        }
    }

    /// The bound promised by the claim, on this instance.
    pub fn bound_holds(&self) -> bool {
        let n = self.input_size();
        match self {
            Self::Claim1 { .. } => self.output_size() == n,
            Self::Claim2 { .. } => self.output_size() >= n.div_ceil(2),
            Self::Claim3 { .. } => self.output_size() >= n.div_ceil(4),
        }
    }

    /// Exact re-verification of every stored certificate.
    pub fn verify(&self) -> Result<bool> {
        Ok(self.bound_holds()
            && match self {
                Self::Claim1 {
                    p,
                    pairs,
                    certificate,
                    ..
                } => {
                    pairs.verify()
                        && pairs
                            .pairs
                            .iter()
                            .all(|&(a, b)| a < p.len() && b >= p.len())
                        && certificate.is_independent()
                        && certificate.verify(&pairs.midpoints)
                }
                Self::Claim2 {
                    ball,
                    points,
                    unit_pairs,
                    directions,
                    ..
                } => {
                    let g = Gauge::new(ball);
                    let mut ok = ball.verify() && points.find_duplicate().is_none();
                    for &(a, b) in unit_pairs {
                        ok &= g.eval(&(&points[b] - &points[a]))?.is_one();
                    }
                    let distinct: HashSet<_> = directions.iter().collect();
                    ok && distinct.len() == unit_pairs.len()
                }
                Self::Claim3 {
                    c,
                    members,
                    certificate,
                    ..
                } => certificate.is_independent() && certificate.verify(&c.subset(members)),
            })
    }
}

fn require_independent(s: &PointSet) -> Result<()> {
    let cert = convexly_independent(s);
    if cert.is_independent() {
        Ok(())
    } else {
        Err(Error::CertificationFailed(format!(
            "S is not convexly independent (point {})",
            cert.violation.map_or(0, |v| v.index)
        )))
    }
}

/// For each point of `s`, its generating pairs in `P + Q`.
fn provenance(p: &PointSet, q: &PointSet, s: &PointSet) -> Result<Vec<Vec<(usize, usize)>>> {
    let ms = minkowski_sum(p, q)?;
    let index: HashMap<&ExactPoint, usize> =
        ms.sum.iter().enumerate().map(|(k, x)| (x, k)).collect();
    s.iter()
        .enumerate()
        .map(|(k, x)| {
            index
                .get(x)
                .map(|&i| ms.provenance[i].clone())
                .ok_or_else(|| Error::InvalidInput(format!("point {k} of S is not in P + Q")))
        })
        .collect()
}

fn axis_offset(d: usize, h: Rational) -> ExactPoint {
    let mut v = ExactPoint::zero(d);
    v.coords[0] = h;
    v
}

/// Turns a convexly independent `S ⊆ P + Q` into `|S|` pairs of `P ∪ Q`
/// with convexly independent midpoints.
pub fn claim1_reduce(p: &PointSet, q: &PointSet, s: &PointSet) -> Result<ReductionWitness> {
    require_independent(s)?;
    let prov = provenance(p, q, s)?;
    let mut offset = None;
    let mut shifted = q.clone();
    let pset: HashSet<&ExactPoint> = p.iter().collect();
    if q.iter().any(|x| pset.contains(x)) {
        let mut h = Rational::one();
        let found = (0..MAX_DOUBLINGS).find_map(|_| {
            let v = axis_offset(p.dimension, h.clone());
            let moved = q.translate(&v);
            h = &h * int(2);
            (!moved.iter().any(|x| pset.contains(x))).then_some((v, moved))
        });
        let (v, moved) = found
            .ok_or_else(|| Error::BudgetExhausted("no disjoint translate of Q found".into()))?;
        offset = Some(v);
        shifted = moved;
    }
    let mut base = p.points.clone();
    base.extend(shifted.points.iter().cloned());
    let base = PointSet::new(p.dimension, base)?;
    let pairs: Vec<(usize, usize)> = prov.iter().map(|v| (v[0].0, p.len() + v[0].1)).collect();
    let pairs = PairSystem::new(base, pairs)?;
    let certificate = convexly_independent(&pairs.midpoints);
    if pairs.midpoints.len() != s.len() || !certificate.is_independent() {
        return Err(Error::Inconsistency(
            "translated midpoints of an independent set are dependent".into(),
        ));
    }
    Ok(ReductionWitness::Claim1 {
        p: p.clone(),
        q: q.clone(),
        s: s.clone(),
        offset,
        pairs,
        certificate,
    })
}

/// Splits a planar convex-position set into the chain on the left of the
/// segment from its `u`-minimum to its `u`-maximum (with the minimum) and
/// the chain on the right (with the maximum); `u = (1, t)`.
fn chains(s: &PointSet, t: &Rational) -> (usize, usize, Vec<usize>, Vec<usize>) {
    let key = |k: usize| &s[k].coords[0] + t * &s[k].coords[1];
    let lo = (0..s.len())
        .min_by(|&a, &b| key(a).cmp(&key(b)))
        .expect("nonempty");
    let hi = (0..s.len())
        .max_by(|&a, &b| key(a).cmp(&key(b)))
        .expect("nonempty");
    let (mut upper, mut lower) = (vec![lo], vec![]);
    if hi != lo {
        lower.push(hi);
    }
    for k in 0..s.len() {
        if k == lo || k == hi {
            continue;
        }
        if orient2(&s[lo], &s[hi], &s[k]) > 0 {
            upper.push(k);
        } else {
            lower.push(k);
        }
    }
    upper.sort_unstable();
    lower.sort_unstable();
    (lo, hi, upper, lower)
}

/// Smallest `t` in `0, 1/2, 1/4, ...` making `x + t y` injective on `s`.
fn generic_slope(s: &PointSet) -> Rational {
    let mut t = Rational::zero();
    loop {
        let keys: HashSet<Rational> = s.iter().map(|x| &x.coords[0] + &t * &x.coords[1]).collect();
        if keys.len() == s.len() {
            return t;
        }
        t = if t.is_zero() { rat(1, 2) } else { t / int(2) };
    }
}

/// Planar: selects a chain `S'` of at least half of `S`, a center `τ` with
/// `±(S' - τ)` in convex position, and the resulting unit pairs
/// `{p, τ - q}` of `P ∪ (τ - Q)` under the norm with that unit ball.
pub fn claim2_reduce(p: &PointSet, q: &PointSet, s: &PointSet) -> Result<ReductionWitness> {
    if s.dimension != 2 {
        return Err(Error::UnsupportedDimension(s.dimension));
    }
    require_independent(s)?;
    if s.is_empty() {
        return Err(Error::InvalidInput("S is empty".into()));
    }
    let prov = provenance(p, q, s)?;
    let t = generic_slope(s);
    let (lo, hi, upper, lower) = chains(s, &t);
    let (chain, side) = if upper.len() >= lower.len() {
        (upper, int(1))
    } else {
        (lower, int(-1))
    };
    let mid = s[lo].midpoint(&s[hi]);
    // normal to u = (1, t), pointing to the chosen chain's side
    let normal = ExactPoint::new(vec![-&t * &side, side.clone()]);
    let scale = s
        .iter()
        .flat_map(|x| x.coords.iter())
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Rational::one)
        + Rational::one();
    let pset: HashSet<&ExactPoint> = p.iter().collect();
    let mut h = scale;
    for _ in 0..MAX_DOUBLINGS {
        let center = &mid - &normal.scale(&h);
        h = &h * int(2);
        let mut verts: Vec<ExactPoint> = chain.iter().map(|&k| &s[k] - &center).collect();
        verts.extend(chain.iter().map(|&k| &center - &s[k]));
        let Ok(ball) = UnitBallCertificate::with_padding(PointSet::new(2, verts)?) else {
            continue;
        };
        let reflected: Vec<ExactPoint> = q.iter().map(|x| &center - x).collect();
        if reflected.iter().any(|x| pset.contains(x)) {
            continue;
        }
        let mut pts = p.points.clone();
        pts.extend(reflected);
        let points = PointSet::new(2, pts)?;
        let unit_pairs: Vec<(usize, usize)> = chain
            .iter()
            .map(|&k| (prov[k][0].0, p.len() + prov[k][0].1))
            .collect();
        let directions = unit_pairs
            .iter()
            .map(|&(a, b)| canonical_direction(&(&points[b] - &points[a])))
            .collect::<Result<Vec<_>>>()?;
        let w = ReductionWitness::Claim2 {
            p: p.clone(),
            q: q.clone(),
            s: s.clone(),
            chain,
            center,
            ball,
            points,
            unit_pairs,
            directions,
        };
        return if w.verify()? {
            Ok(w)
        } else {
            Err(Error::Inconsistency(
                "claim 2 witness failed re-verification".into(),
            ))
        };
    }
    Err(Error::BudgetExhausted(
        "no reflection center certified the symmetrized chain".into(),
    ))
}

/// Halves `P` and `Q` with a seeded shuffle, labels each point of `C` by the
/// halves of its generating pair, and returns the most popular label class.
pub fn claim3_reduce(
    p: &PointSet,
    q: &PointSet,
    c: &PointSet,
    seed: u64,
) -> Result<ReductionWitness> {
    if p.len() != q.len() || !p.len().is_multiple_of(2) || p.is_empty() {
        return Err(Error::InvalidInput(
            "P and Q must have the same even, nonzero size".into(),
        ));
    }
    require_independent(c)?;
    let prov = provenance(p, q, c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut halves = |n: usize| {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let mut a = idx[..n / 2].to_vec();
        let mut b = idx[n / 2..].to_vec();
        a.sort_unstable();
        b.sort_unstable();
        [a, b]
    };
    let p_halves = halves(p.len());
    let q_halves = halves(q.len());
    let half_of = |h: &[Vec<usize>; 2], i: usize| usize::from(!h[0].contains(&i));
    let mut labels = Vec::with_capacity(c.len());
    let mut ambiguous = Vec::new();
    for (k, gens) in prov.iter().enumerate() {
        let ls: Vec<(usize, usize)> = gens
            .iter()
            .map(|&(i, j)| (half_of(&p_halves, i), half_of(&q_halves, j)))
            .collect();
        let first = *ls.iter().min().expect("nonempty provenance");
        if ls.iter().any(|&l| l != first) {
            ambiguous.push(k);
        }
        labels.push(first);
    }
    let mut counts = [[0usize; 2]; 2];
    for &(i, j) in &labels {
        counts[i][j] += 1;
    }
    let block = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .max_by(|&(a, b), &(x, y)| counts[a][b].cmp(&counts[x][y]).then((x, y).cmp(&(a, b))))
        .expect("four labels");
    let members: Vec<usize> = (0..c.len()).filter(|&k| labels[k] == block).collect();
    let certificate = convexly_independent(&c.subset(&members));
    Ok(ReductionWitness::Claim3 {
        p: p.clone(),
        q: q.clone(),
        c: c.clone(),
        seed,
        p_halves,
        q_halves,
        labels,
        ambiguous,
        block,
        members,
        certificate,
    })
}

/// `M(P, Q)` together with the `E` and (in the plane) `W` witnesses built
/// from its optimal subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub m: ExtremalResult,
    pub claim1: ReductionWitness,
    pub claim2: Option<ReductionWitness>,
    /// `M ≤ E`-witness pair count (equality by construction).
    pub e_witness_pairs: usize,
    pub e_witness_points: usize,
    /// `⌈M / 2⌉ ≤` nonparallel unit pairs, in the plane.
    pub w_witness_pairs: Option<usize>,
    pub chain_holds: bool,
}

pub fn equivalence_report(p: &PointSet, q: &PointSet) -> Result<EquivalenceReport> {
    let m = compute_m(p, q, DEFAULT_CAP)?;
    let claim1 = claim1_reduce(p, q, &m.points)?;
    let claim2 = if p.dimension == 2 {
        Some(claim2_reduce(p, q, &m.points)?)
    } else {
        None
    };
    let (e_witness_pairs, e_witness_points) = match &claim1 {
        ReductionWitness::Claim1 { pairs, .. } => (pairs.pairs.len(), pairs.base.len()),
        _ => unreachable!(),
    };
    let w_witness_pairs = claim2.as_ref().map(|w| w.output_size());
    let chain_holds = m.value <= e_witness_pairs
        && e_witness_points <= p.len() + q.len()
        && w_witness_pairs.is_none_or(|w| m.value <= 2 * w)
        && claim1.verify()?
        && match &claim2 {
            Some(w) => w.verify()?,
            None => true,
        };
    Ok(EquivalenceReport {
        m,
        claim1,
        claim2,
        e_witness_pairs,
        e_witness_points,
        w_witness_pairs,
        chain_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(c: &[&[i64]]) -> PointSet {
        PointSet::from_ints(c).unwrap()
    }

    #[test]
    fn claim1_single_pair() {
        let w = claim1_reduce(&pts(&[&[0, 0]]), &pts(&[&[1, 0]]), &pts(&[&[1, 0]])).unwrap();
        let ReductionWitness::Claim1 { pairs, offset, .. } = &w else {
            panic!()
        };
        assert!(offset.is_none());
        assert_eq!(pairs.base.len(), 2);
        assert_eq!(
            pairs.midpoints.points,
            vec![ExactPoint::from_ratios(&[(1, 2), (0, 1)])]
        );
        assert!(w.verify().unwrap());
    }

    #[test]
    fn claim1_overlapping_triangle() {
        let t = pts(&[&[0, 0], &[2, 0], &[0, 2]]);
        let s = pts(&[&[0, 0], &[4, 0], &[0, 4]]);
        let w = claim1_reduce(&t, &t, &s).unwrap();
        let ReductionWitness::Claim1 { offset, pairs, .. } = &w else {
            panic!()
        };
        assert!(offset.is_some());
        assert_eq!(pairs.pairs.len(), 3);
        assert!(w.verify().unwrap());
    }

    #[test]
    fn claim1_rejects_dependent_or_foreign_s() {
        let t = pts(&[&[0, 0], &[2, 0]]);
        assert!(claim1_reduce(&t, &t, &pts(&[&[0, 0], &[2, 0], &[4, 0]])).is_err());
        assert!(claim1_reduce(&t, &t, &pts(&[&[1, 1]])).is_err());
    }

    #[test]
    fn claim2_examples() {
        let w = claim2_reduce(&pts(&[&[0, 0]]), &pts(&[&[1, 0]]), &pts(&[&[1, 0]])).unwrap();
        assert_eq!(w.output_size(), 1);
        let ReductionWitness::Claim2 { ball, .. } = &w else {
            panic!()
        };
        assert_eq!(ball.required(), 2);
        assert!(ball.padding() > 0);

        // S = square corners as sums of {(0,0),(1,1)} and {(0,0),(1,-1)}
        let p = pts(&[&[0, 0], &[1, 1]]);
        let q = pts(&[&[0, 0], &[1, -1]]);
        let s = pts(&[&[0, 0], &[1, 1], &[1, -1], &[2, 0]]);
        let w = claim2_reduce(&p, &q, &s).unwrap();
        assert_eq!(w.output_size(), 2);
        assert!(w.verify().unwrap());
    }

    #[test]
    fn claim2_vertical_ties() {
        // x-coordinates tie on the left and right: needs the tilted direction
        let p = pts(&[&[0, 0], &[0, 1], &[3, 0], &[3, 1]]);
        let q = pts(&[&[0, 0]]);
        let w = claim2_reduce(&p, &q, &p).unwrap();
        assert!(w.output_size() >= 2);
        assert!(w.verify().unwrap());
    }

    #[test]
    fn claim3_pigeonhole() {
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let q = pts(&[&[0, 0], &[3, 1], &[1, 3], &[5, 5]]);
        let ms = minkowski_sum(&p, &q).unwrap();
        let best = crate::extremal::largest_convex_subset_2d(&ms.sum).unwrap();
        for seed in 0..20 {
            let w = claim3_reduce(&p, &q, &best.points, seed).unwrap();
            assert!(w.bound_holds());
            assert!(w.verify().unwrap());
            assert_eq!(w, claim3_reduce(&p, &q, &best.points, seed).unwrap());
        }
        assert!(claim3_reduce(&p, &pts(&[&[0, 0]]), &best.points, 0).is_err());
    }

    #[test]
    fn equivalence_examples() {
        let t = pts(&[&[0, 0], &[2, 0], &[0, 2]]);
        let r = equivalence_report(&t, &t).unwrap();
        assert_eq!(r.m.value, 4);
        assert_eq!(r.e_witness_pairs, 4);
        assert!(r.chain_holds);

        let seg = pts(&[&[0, 0], &[1, 0]]);
        let r = equivalence_report(&seg, &seg).unwrap();
        assert_eq!(r.m.value, 2);
        assert!(r.chain_holds);

        let sq = pts(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
        let r = equivalence_report(&sq, &sq).unwrap();
        assert!(r.m.value <= r.e_witness_pairs);
        assert!(r.chain_holds);
    }
}
