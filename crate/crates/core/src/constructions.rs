//! Explicit configurations with exact certificates: rational circle arcs on
//! three cube edges whose cross midpoints are convexly independent, a
//! strictly antipodal family of three arcs in R³, and the polytopal unit
//! ball spanned by the family's cross differences.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::PairSystem;
use crate::geom::predicates::rank;
use crate::geom::{
    canonical_direction, convexly_independent, hull_vertices, ConvexPositionCertificate,
    ExactPoint, PointSet, Violation,
};
use crate::norms::{verify_strict_antipodality, AntipodalWitness, AntipodalityVerdict, Member};
use crate::rational::{int, rat, Rational};

/// Default number of halvings for every adaptive shrink loop.
pub const DEFAULT_HALVINGS: u32 = 30;

/// Three arcs of `k` points near the midpoints of the cube edges through
/// `(1, 1, 1)` of `[-1, 1]³`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeArcConfig {
    pub k: usize,
    /// Arc half-width: the arc points stay within `delta` of the edge
    /// midpoint along the edge direction.
    #[serde(with = "crate::rational::serde_str")]
    pub delta: Rational,
}

impl CubeArcConfig {
    pub fn new(k: usize, delta: Rational) -> Self {
        Self { k, delta }
    }

    pub fn with_default_delta(k: usize) -> Self {
        Self::new(k, rat(1, 4))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeArc {
    pub config: CubeArcConfig,
    /// Arc 0 first, then arc 1, then arc 2.
    pub points: PointSet,
    /// Arc label (0, 1, 2) of each point.
    pub arc_of: Vec<usize>,
}

fn axis(i: usize) -> ExactPoint {
    let mut e = ExactPoint::zero(3);
    e.coords[i] = Rational::one();
    e
}

/// Midpoint of edge `i`: the vertex `(1, 1, 1)` with coordinate `i` zeroed.
fn edge_midpoint(i: usize) -> ExactPoint {
    let mut m = ExactPoint::from_ints(&[1, 1, 1]);
    m.coords[i] = Rational::zero();
    m
}

/// Points `t e_i + s m_i` with `t² + 2 s² = 2`: the circle of radius √2
/// about the origin in the plane through `o` and edge `i`, parametrized
/// rationally through the edge midpoint `(t, s) = (0, 1)`.
fn arc_parameters(cfg: &CubeArcConfig) -> Vec<(Rational, Rational)> {
    let k = cfg.k as i64;
    (0..k)
        .map(|l| {
            let mu = if k == 1 {
                Rational::zero()
            } else {
                &cfg.delta / int(4) * (int(2 * l) / int(k - 1) - int(1))
            };
            let mu2 = &mu * &mu;
            let den = int(1) + int(2) * &mu2;
            let t = -int(4) * &mu / &den;
            let s = (int(1) - int(2) * &mu2) / &den;
            (t, s)
        })
        .collect()
}

/// Generates the three arcs and checks that each arc together with the
/// cube center is in strictly convex position inside its plane.
pub fn cube_arc_points(cfg: &CubeArcConfig) -> Result<CubeArc> {
    if cfg.k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if !cfg.delta.is_positive() || cfg.delta >= Rational::one() {
        return Err(Error::InvalidInput("delta must lie in (0, 1)".into()));
    }
    let params = arc_parameters(cfg);
    // in-plane coordinates (t, s) are an exact linear chart of Σ_i
    let mut planar: Vec<ExactPoint> = params
        .iter()
        .map(|(t, s)| ExactPoint::new(vec![t.clone(), s.clone()]))
        .collect();
    planar.push(ExactPoint::zero(2));
    let planar = PointSet::new(2, planar)?;
    let cert = convexly_independent(&planar);
    if !cert.is_independent() {
        return Err(Error::CertificationFailed(format!(
            "arc with delta {} is not strictly convex with the center",
            cfg.delta
        )));
    }
    let mut points = Vec::with_capacity(3 * cfg.k);
    let mut arc_of = Vec::with_capacity(3 * cfg.k);
    for i in 0..3 {
        let (e, m) = (axis(i), edge_midpoint(i));
        for (t, s) in &params {
            points.push(&e.scale(t) + &m.scale(s));
            arc_of.push(i);
        }
    }
    Ok(CubeArc {
        config: cfg.clone(),
        points: PointSet::new(3, points)?,
        arc_of,
    })
}

/// All `3k²` pairs joining points on different arcs.
pub fn cube_arc_cross_pairs(arc: &CubeArc) -> Vec<(usize, usize)> {
    let n = arc.points.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| arc.arc_of[i] != arc.arc_of[j])
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeArcVerification {
    pub arc: CubeArc,
    pub pairs: PairSystem,
    pub certificate: ConvexPositionCertificate,
    pub halvings: u32,
}

impl CubeArcVerification {
    pub fn midpoint_count(&self) -> usize {
        self.pairs.midpoints.len()
    }

    /// Exact re-check: provenance, `3k²` distinct midpoints, certificate.
    pub fn verify(&self) -> bool {
        let k = self.arc.config.k;
        self.pairs.verify()
            && self.pairs.pairs.len() == 3 * k * k
            && self.midpoint_count() == 3 * k * k
            && self.certificate.is_independent()
            && self.certificate.verify(&self.pairs.midpoints)
    }
}

/// Certifies the cross-midpoint set of the cube arcs, halving `delta` until
/// it is convexly independent or the halving budget runs out.
pub fn verify_cube_arc(cfg: &CubeArcConfig, max_halvings: u32) -> Result<CubeArcVerification> {
    let mut cfg = cfg.clone();
    let mut last: Option<(Rational, Option<Violation>)> = None;
    for halvings in 0..=max_halvings {
        if halvings > 0 {
            cfg.delta = &cfg.delta / int(2);
        }
        let arc = match cube_arc_points(&cfg) {
            Ok(a) => a,
            Err(Error::CertificationFailed(_)) => {
                last = Some((cfg.delta.clone(), None));
                continue;
            }
            Err(e) => return Err(e),
        };
        let pairs = PairSystem::new(arc.points.clone(), cube_arc_cross_pairs(&arc))?;
        if pairs.midpoints.len() != pairs.pairs.len() {
            last = Some((cfg.delta.clone(), None));
            continue;
        }
        let certificate = convexly_independent(&pairs.midpoints);
        if certificate.is_independent() {
            return Ok(CubeArcVerification {
                arc,
                pairs,
                certificate,
                halvings,
            });
        }
        last = Some((cfg.delta.clone(), certificate.violation));
    }
    let (delta, violation) = last.expect("at least one attempt");
    Err(Error::CertificationFailed(format!(
        "cube arcs with k = {} not certified after {max_halvings} halvings (last delta {delta}, violating midpoint {})",
        cfg.k,
        violation.map_or("none".into(), |v| v.index.to_string())
    )))
}

/// A list of point sets, with strict-antipodality witnesses once verified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntipodalFamily {
    pub sets: Vec<PointSet>,
    pub witnesses: Option<Vec<AntipodalWitness>>,
}

impl AntipodalFamily {
    pub fn new(sets: Vec<PointSet>) -> Result<Self> {
        let dim = sets
            .first()
            .map(|s| s.dimension)
            .ok_or_else(|| Error::InvalidInput("family has no sets".into()))?;
        for s in &sets {
            if s.dimension != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.dimension,
                });
            }
            if s.is_empty() {
                return Err(Error::InvalidInput("family contains an empty set".into()));
            }
        }
        Ok(Self {
            sets,
            witnesses: None,
        })
    }

    pub fn dimension(&self) -> usize {
        self.sets[0].dimension
    }

    pub fn point(&self, m: Member) -> Option<&ExactPoint> {
        self.sets.get(m.0).and_then(|s| s.points.get(m.1))
    }

    pub fn members(&self) -> impl Iterator<Item = (Member, &ExactPoint)> {
        self.sets
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().enumerate().map(move |(a, p)| ((i, a), p)))
    }

    /// All points, set by set.
    pub fn union(&self) -> PointSet {
        PointSet {
            dimension: self.dimension(),
            points: self.members().map(|(_, p)| p.clone()).collect(),
        }
    }

    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.sets
            .iter()
            .map(|s| {
                let o = acc;
                acc += s.len();
                o
            })
            .collect()
    }

    /// Cross pairs `(p, q)` with `p` in an earlier set than `q`.
    pub fn cross_pairs(&self) -> impl Iterator<Item = (Member, Member)> + '_ {
        let k = self.sets.len();
        (0..k).flat_map(move |i| {
            (i + 1..k).flat_map(move |j| {
                (0..self.sets[i].len())
                    .flat_map(move |a| (0..self.sets[j].len()).map(move |b| ((i, a), (j, b))))
            })
        })
    }

    /// Cross pairs as indices into [`AntipodalFamily::union`].
    pub fn cross_pairs_flat(&self) -> Vec<(usize, usize)> {
        let off = self.offsets();
        self.cross_pairs()
            .map(|((i, a), (j, b))| (off[i] + a, off[j] + b))
            .collect()
    }

    /// Every stored witness re-verifies and covers every cross pair.
    pub fn is_verified(&self) -> bool {
        self.witnesses.as_ref().is_some_and(|ws| {
            let pairs: HashSet<(Member, Member)> = ws.iter().map(|w| (w.p, w.q)).collect();
            ws.len() == self.cross_pairs().count()
                && self.cross_pairs().all(|pq| pairs.contains(&pq))
                && ws.iter().all(|w| w.verify(self))
        })
    }

    /// Number of distinct directions among cross segments equals their count.
    pub fn cross_directions_distinct(&self) -> Result<bool> {
        let mut seen = HashSet::new();
        for (pm, qm) in self.cross_pairs() {
            let v = self.point(qm).expect("member") - self.point(pm).expect("member");
            if !seen.insert(canonical_direction(&v)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn with_verification(mut self) -> Result<std::result::Result<Self, AntipodalityVerdict>> {
        match verify_strict_antipodality(&self)? {
            AntipodalityVerdict::Verified(w) => {
                self.witnesses = Some(w);
                Ok(Ok(self))
            }
            counter => Ok(Err(counter)),
        }
    }
}

/// Rationally perturbs the family until no two cross segments are parallel
/// and strict antipodality still verifies. The perturbation magnitude starts
/// at `1/64` and halves on each failed attempt; a family that already
/// qualifies is returned unchanged (with witnesses).
pub fn perturb_nonparallel(family: &AntipodalFamily, seed: u64) -> Result<AntipodalFamily> {
    perturb_nonparallel_with_budget(family, seed, DEFAULT_HALVINGS)
}

pub fn perturb_nonparallel_with_budget(
    family: &AntipodalFamily,
    seed: u64,
    max_halvings: u32,
) -> Result<AntipodalFamily> {
    let mut base = family.clone();
    base.witnesses = None;
    if base.cross_directions_distinct()? {
        if let Ok(v) = base.clone().with_verification()? {
            return Ok(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = base.dimension();
    let mut magnitude = rat(1, 64);
    for _ in 0..=max_halvings {
        let mut sets = Vec::with_capacity(base.sets.len());
        for s in &base.sets {
            let pts = s
                .iter()
                .map(|p| {
                    let noise = ExactPoint::new(
                        (0..dim)
                            .map(|_| &magnitude * rat(rng.gen_range(-512..=512), 512))
                            .collect(),
                    );
                    p + &noise
                })
                .collect();
            sets.push(PointSet::new(dim, pts)?);
        }
        let candidate = AntipodalFamily::new(sets)?;
        if candidate.union().find_duplicate().is_none() && candidate.cross_directions_distinct()? {
            if let Ok(v) = candidate.with_verification()? {
                return Ok(v);
            }
        }
        magnitude /= int(2);
    }
    Err(Error::BudgetExhausted(format!(
        "no nonparallel strictly antipodal perturbation after {max_halvings} halvings"
    )))
}

/// Anchor, tangent and curvature vectors of the three parabolic arcs.
///
/// The anchors are the unit vectors. For each pair of arcs the normal
/// `n_ij` orders the anchors with the third one strictly in the middle; each
/// tangent is orthogonal to the two normals of its arc, and each curvature
/// vector bends its arc so that the arc is minimized (first index) or
/// maximized (second index) by the corresponding normal.
const ARC_FRAMES: [([i64; 3], [i64; 3], [i64; 3]); 3] = [
    ([1, 0, 0], [3, 0, 0], [0, 3, 3]),
    ([0, 1, 0], [4, 1, -2], [1, -2, 1]),
    ([0, 0, 1], [2, 2, -1], [-1, -1, -4]),
];

fn parabolic_arcs(m: usize, delta: &Rational) -> Result<AntipodalFamily> {
    let sets = ARC_FRAMES
        .iter()
        .map(|(c, t, k)| {
            let (c, t, k) = (
                ExactPoint::from_ints(c),
                ExactPoint::from_ints(t),
                ExactPoint::from_ints(k),
            );
            let pts = (0..m as i64)
                .map(|l| {
                    let s = if m == 1 {
                        Rational::zero()
                    } else {
                        delta * (int(2 * l) / int(m as i64 - 1) - int(1))
                    };
                    let half_s2 = &s * &s / int(2);
                    &(&c + &t.scale(&s)) + &k.scale(&half_s2)
                })
                .collect();
            PointSet::new(3, pts)
        })
        .collect::<Result<Vec<_>>>()?;
    AntipodalFamily::new(sets)
}

/// A verified strictly antipodal family of three sets of `m` points in R³
/// with pairwise nonparallel cross segments.
///
/// The sets are short parabolic arcs; the arc length parameter is halved
/// until the exact verifier accepts every cross pair.
pub fn antipodal_triple_3d(m: usize) -> Result<AntipodalFamily> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let mut delta = rat(1, 4);
    for attempt in 0..=DEFAULT_HALVINGS {
        let fam = parabolic_arcs(m, &delta)?;
        match perturb_nonparallel_with_budget(&fam, attempt as u64, 8) {
            Ok(f) => return Ok(f),
            Err(Error::BudgetExhausted(_)) => delta /= int(2),
            Err(e) => return Err(e),
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no strictly antipodal triple with m = {m} after {DEFAULT_HALVINGS} halvings"
    )))
}

/// A centrally symmetric, convexly independent, full-dimensional vertex set.
/// Its convex hull is the unit ball of a norm; every vertex has norm one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BallFile")]
pub struct UnitBallCertificate {
    vertices: PointSet,
    antipode: Vec<usize>,
    /// Vertices `required..` were added only to reach full dimension.
    required: usize,
    certificate: ConvexPositionCertificate,
}

#[derive(Deserialize)]
struct BallFile {
    vertices: PointSet,
    required: Option<usize>,
}

impl TryFrom<BallFile> for UnitBallCertificate {
    type Error = Error;
    fn try_from(f: BallFile) -> Result<Self> {
        let mut b = UnitBallCertificate::new(f.vertices)?;
        if let Some(r) = f.required {
            b.required = r.min(b.vertices.len());
        }
        Ok(b)
    }
}

impl UnitBallCertificate {
    /// Certifies a vertex set as given.
    pub fn new(vertices: PointSet) -> Result<Self> {
        let index: std::collections::HashMap<&ExactPoint, usize> =
            vertices.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut antipode = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            match index.get(&-v) {
                Some(&j) if j != i => antipode.push(j),
                _ => {
                    return Err(Error::CertificationFailed(format!(
                        "vertex {i} has no antipode"
                    )))
                }
            }
        }
        if rank(&vertices.points) < vertices.dimension {
            return Err(Error::Degenerate(
                "unit ball is not full-dimensional".into(),
            ));
        }
        let certificate = convexly_independent(&vertices);
        if !certificate.is_independent() {
            return Err(Error::CertificationFailed(format!(
                "unit ball vertices are not convexly independent (vertex {})",
                certificate.violation.as_ref().map_or(0, |v| v.index)
            )));
        }
        Ok(Self {
            required: vertices.len(),
            vertices,
            antipode,
            certificate,
        })
    }

    /// Certifies `required` after padding it with antipodal pairs along
    /// coordinate axes missing from its span.
    pub fn with_padding(required: PointSet) -> Result<Self> {
        Self::from_parts(required.points, Vec::new())
    }

    /// Certifies `required` followed by `extra`, padded to full dimension.
    fn from_parts(required: Vec<ExactPoint>, extra: Vec<ExactPoint>) -> Result<Self> {
        let d = required
            .first()
            .map(|p| p.dim())
            .ok_or_else(|| Error::InvalidInput("unit ball needs vertices".into()))?;
        let count = required.len();
        let mut pts = required;
        pts.extend(extra);
        let eps = pts
            .iter()
            .flat_map(|p| p.coords.iter())
            .filter(|c| !c.is_zero())
            .map(|c| c.abs())
            .min()
            .map_or_else(Rational::one, |c| c / int(2));
        let mut r = rank(&pts);
        for k in 0..d {
            if r == d {
                break;
            }
            let e = axis_d(d, k).scale(&eps);
            let mut trial = pts.clone();
            trial.push(e.clone());
            if rank(&trial) > r {
                pts.push(-&e);
                pts.push(e);
                r += 1;
            }
        }
        let mut ball = Self::new(PointSet::new(d, pts)?)?;
        ball.required = count;
        Ok(ball)
    }

    pub fn vertices(&self) -> &PointSet {
        &self.vertices
    }

    pub fn dimension(&self) -> usize {
        self.vertices.dimension
    }

    pub fn antipode(&self, i: usize) -> usize {
        self.antipode[i]
    }

    pub fn required(&self) -> usize {
        self.required
    }

    pub fn padding(&self) -> usize {
        self.vertices.len() - self.required
    }

    pub fn certificate(&self) -> &ConvexPositionCertificate {
        &self.certificate
    }

    /// Exact re-check of symmetry, involution and the stored certificate.
    pub fn verify(&self) -> bool {
        self.antipode.iter().enumerate().all(|(i, &j)| {
            j != i && self.antipode[j] == i && self.vertices[j] == -&self.vertices[i]
        }) && rank(&self.vertices.points) == self.dimension()
            && self.certificate.is_independent()
            && self.certificate.verify(&self.vertices)
    }
}

fn axis_d(d: usize, k: usize) -> ExactPoint {
    let mut e = ExactPoint::zero(d);
    e.coords[k] = Rational::one();
    e
}

/// The unit ball of the family's norm.
///
/// Its vertices are the cross differences `A_i - A_j` (`i ≠ j`), listed
/// first, followed by those within-set differences, stretched by `1 + η`,
/// that are extreme, and by axis padding when the rest is not
/// full-dimensional. Every cross pair is then at gauge exactly 1 and every
/// pair inside one set at gauge below 1, so the cross pairs are exactly the
/// diameter pairs of the union.
pub fn unit_ball_from_antipodal(family: &AntipodalFamily) -> Result<UnitBallCertificate> {
    if !family.is_verified() {
        return Err(Error::InvalidInput(
            "family must carry verified strict-antipodality witnesses".into(),
        ));
    }
    let mut diffs = Vec::new();
    for (pm, qm) in family.cross_pairs() {
        let (p, q) = (
            family.point(pm).expect("member"),
            family.point(qm).expect("member"),
        );
        diffs.push(p - q);
        diffs.push(q - p);
    }
    let d = family.dimension();
    let cross = PointSet::new(d, diffs)?;
    if let Some((i, j)) = cross.find_duplicate() {
        return Err(Error::Inconsistency(format!(
            "cross differences {i} and {j} coincide in a verified family"
        )));
    }
    let within: Vec<ExactPoint> = family
        .sets
        .iter()
        .flat_map(|s| {
            s.iter()
                .enumerate()
                .flat_map(move |(a, p)| s.iter().skip(a + 1).flat_map(move |q| [p - q, q - p]))
        })
        .collect();
    let n = cross.len();
    let mut stretch = rat(1, 2);
    for _ in 0..=DEFAULT_HALVINGS {
        let factor = int(1) + &stretch;
        let mut all = cross.points.clone();
        all.extend(within.iter().map(|w| w.scale(&factor)));
        let hull = hull_vertices(&PointSet::new(d, all.clone())?);
        let mut extreme: Vec<usize> = hull.iter().map(|(i, _)| *i).collect();
        extreme.sort_unstable();
        if extreme.iter().take_while(|&&i| i < n).count() == n {
            let extra: Vec<ExactPoint> = extreme[n..].iter().map(|&i| all[i].clone()).collect();
            return UnitBallCertificate::from_parts(cross.points, extra).map_err(|e| match e {
                Error::CertificationFailed(msg) => Error::Inconsistency(msg),
                other => other,
            });
        }
        stretch /= int(2);
    }
    Err(Error::Inconsistency(
        "cross differences are not all extreme in a verified family".into(),
    ))
}

/// Canonical integer directions of all cross segments, in cross-pair order.
pub fn cross_directions(family: &AntipodalFamily) -> Result<Vec<Vec<BigInt>>> {
    family
        .cross_pairs()
        .map(|(pm, qm)| {
            canonical_direction(
                &(family.point(qm).expect("member") - family.point(pm).expect("member")),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_arc_single_point_per_arc() {
        let arc = cube_arc_points(&CubeArcConfig::with_default_delta(1)).unwrap();
        assert_eq!(
            arc.points.points,
            vec![edge_midpoint(0), edge_midpoint(1), edge_midpoint(2)]
        );
        let v = verify_cube_arc(&CubeArcConfig::with_default_delta(1), 0).unwrap();
        assert_eq!(v.midpoint_count(), 3);
        assert!(v.verify());
    }

    #[test]
    fn cube_arc_points_on_circle() {
        let arc = cube_arc_points(&CubeArcConfig::new(5, rat(1, 8))).unwrap();
        for p in arc.points.iter() {
            assert_eq!(p.norm2(), int(2));
        }
        assert!(cube_arc_points(&CubeArcConfig::new(0, rat(1, 8))).is_err());
        assert!(cube_arc_points(&CubeArcConfig::new(2, int(1))).is_err());
    }

    #[test]
    fn cube_arc_small_k() {
        let v = verify_cube_arc(&CubeArcConfig::new(2, rat(1, 8)), 0).unwrap();
        assert_eq!(v.midpoint_count(), 12);
        assert!(v.verify());
        let v = verify_cube_arc(&CubeArcConfig::new(4, rat(1, 16)), DEFAULT_HALVINGS).unwrap();
        assert_eq!(v.midpoint_count(), 48);
    }

    #[test]
    fn antipodal_small() {
        let f = antipodal_triple_3d(1).unwrap();
        assert!(f.is_verified());
        let f = antipodal_triple_3d(2).unwrap();
        assert_eq!(f.union().len(), 6);
        assert_eq!(f.witnesses.as_ref().unwrap().len(), 12);
        assert!(f.is_verified());
        assert!(f.cross_directions_distinct().unwrap());
        assert!(antipodal_triple_3d(0).is_err());
    }

    #[test]
    fn unit_ball_examples() {
        let single = |c: &[i64]| PointSet::from_ints(&[c]).unwrap();
        let f = AntipodalFamily::new(vec![
            single(&[1, 0, 0]),
            single(&[0, 1, 0]),
            single(&[0, 0, 1]),
        ])
        .unwrap();
        let f = perturb_nonparallel(&f, 0).unwrap();
        assert_eq!(
            f.union(),
            AntipodalFamily::new(f.sets.clone()).unwrap().union()
        );
        let ball = unit_ball_from_antipodal(&f).unwrap();
        assert_eq!(ball.required(), 6);
        // the six differences span only the plane x + y + z = 0
        assert_eq!(ball.padding(), 2);
        assert!(ball.verify());

        let f2 = AntipodalFamily::new(vec![
            PointSet::from_ints(&[&[1, 0]]).unwrap(),
            PointSet::from_ints(&[&[0, 1]]).unwrap(),
        ])
        .unwrap();
        let f2 = perturb_nonparallel(&f2, 0).unwrap();
        let ball = unit_ball_from_antipodal(&f2).unwrap();
        assert_eq!(ball.required(), 2);
        assert_eq!(
            ball.vertices().points[..2].to_vec(),
            vec![
                ExactPoint::from_ints(&[1, -1]),
                ExactPoint::from_ints(&[-1, 1])
            ]
        );
        assert!(ball.verify());
    }

    #[test]
    fn unit_ball_requires_verified_family() {
        let f = AntipodalFamily::new(vec![
            PointSet::from_ints(&[&[1, 0]]).unwrap(),
            PointSet::from_ints(&[&[0, 1]]).unwrap(),
        ])
        .unwrap();
        assert!(unit_ball_from_antipodal(&f).is_err());
    }

    #[test]
    fn perturbation_of_qualifying_family_is_identity() {
        let f = AntipodalFamily::new(vec![
            PointSet::from_ints(&[&[0, 0]]).unwrap(),
            PointSet::from_ints(&[&[3, 1], &[2, -2]]).unwrap(),
        ])
        .unwrap();
        let g = perturb_nonparallel(&f, 7).unwrap();
        assert_eq!(g.sets, f.sets);
        assert!(g.is_verified());
    }

    #[test]
    fn parallel_sides_cannot_be_repaired() {
        // (0,0)-(3,0) and (0,1)-(3,1) are parallel; no small perturbation
        // makes the pair strictly antipodal
        let f = AntipodalFamily::new(vec![
            PointSet::from_ints(&[&[0, 0], &[0, 1]]).unwrap(),
            PointSet::from_ints(&[&[3, 0], &[3, 1]]).unwrap(),
        ])
        .unwrap();
        assert!(!f.cross_directions_distinct().unwrap());
        assert!(matches!(
            perturb_nonparallel_with_budget(&f, 7, 4),
            Err(Error::BudgetExhausted(_))
        ));
    }
}
