//! Forbidden midpoint configurations in R³: an exact refuter for five
//! classes of two points, the five-point midpoint property, a replay of the
//! largest-tetrahedron argument, and a seeded search for four classes of
//! `c` close points with convexly independent cross midpoints.

use std::collections::HashMap;

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::predicates::{barycentric, determinant};
use crate::geom::separation::first_violation;
use crate::geom::{
    convexly_independent, Combination, ConvexPositionCertificate, ExactPoint, PointSet, Violation,
};
use crate::norms::Member;
use crate::rational::{from_f64_dyadic, int, rat, to_f64, Rational};

/// Five classes of two points in R³; repeated points are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FivePairConfig {
    pub classes: Vec<PointSet>,
}

impl FivePairConfig {
    pub fn new(classes: Vec<PointSet>) -> Result<Self> {
        if classes.len() != 5 {
            return Err(Error::InvalidInput(format!(
                "expected 5 classes, found {}",
                classes.len()
            )));
        }
        for c in &classes {
            if c.dimension != 3 {
                return Err(Error::DimensionMismatch {
                    expected: 3,
                    found: c.dimension,
                });
            }
            if c.len() != 2 {
                return Err(Error::InvalidInput(
                    "every class needs exactly 2 points".into(),
                ));
            }
        }
        Ok(Self { classes })
    }

    /// Random rational configuration with coordinates in `[-1, 1]` and
    /// denominators at most 16.
    pub fn random(rng: &mut impl Rng) -> Self {
        let classes = (0..5)
            .map(|_| PointSet {
                dimension: 3,
                points: (0..2).map(|_| random_point(rng, 3)).collect(),
            })
            .collect();
        Self { classes }
    }

    /// The 40 midpoints of pairs from different classes, in class-pair
    /// order, with their generating members. Coinciding midpoints are kept.
    pub fn cross_midpoints(&self) -> (Vec<ExactPoint>, Vec<(Member, Member)>) {
        cross_midpoints(&self.classes)
    }
}

fn cross_midpoints(classes: &[PointSet]) -> (Vec<ExactPoint>, Vec<(Member, Member)>) {
    let mut mids = Vec::new();
    let mut gens = Vec::new();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            for (a, p) in classes[i].iter().enumerate() {
                for (b, q) in classes[j].iter().enumerate() {
                    mids.push(p.midpoint(q));
                    gens.push(((i, a), (j, b)));
                }
            }
        }
    }
    (mids, gens)
}

/// A rational in `[-1, 1]` with denominator at most 16.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    let den: i64 = rng.gen_range(1..=16);
    rat(rng.gen_range(-den..=den), den)
}

pub fn random_point(rng: &mut impl Rng, dim: usize) -> ExactPoint {
    ExactPoint::new((0..dim).map(|_| random_rational(rng)).collect())
}

/// Five random points in R³ in convex position with no four coplanar.
pub fn random_independent_five(rng: &mut impl Rng) -> Vec<ExactPoint> {
    loop {
        let pts: Vec<ExactPoint> = (0..5).map(|_| random_point(rng, 3)).collect();
        if !no_four_coplanar(&pts) {
            continue;
        }
        if convexly_independent(&PointSet::new(3, pts.clone()).expect("dimension 3"))
            .is_independent()
        {
            return pts;
        }
    }
}

fn no_four_coplanar(pts: &[ExactPoint]) -> bool {
    (0..pts.len()).all(|skip| {
        let q: Vec<&ExactPoint> = pts
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, p)| p)
            .collect();
        !volume6(q[0], q[1], q[2], q[3]).is_zero()
    })
}

/// Signed determinant of `(b - a, c - a, d - a)`.
fn volume6(a: &ExactPoint, b: &ExactPoint, c: &ExactPoint, d: &ExactPoint) -> Rational {
    determinant(vec![(b - a).coords, (c - a).coords, (d - a).coords])
}

/// One cross midpoint expressed from the others.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K22222Refutation {
    pub midpoints: Vec<ExactPoint>,
    pub generators: Vec<(Member, Member)>,
    pub violation: Violation,
}

impl K22222Refutation {
    pub fn verify(&self) -> bool {
        self.violation.verify(&self.midpoints)
    }
}

/// Finds a cross midpoint of the configuration that is not a strict
/// vertex of the rest. Two coinciding midpoints count as a violation.
pub fn refute_k22222(cfg: &FivePairConfig) -> Result<K22222Refutation> {
    let (midpoints, generators) = cfg.cross_midpoints();
    let mut seen: HashMap<&ExactPoint, usize> = HashMap::new();
    let mut duplicate = None;
    for (k, m) in midpoints.iter().enumerate() {
        if let Some(&j) = seen.get(m) {
            duplicate = Some(Violation {
                index: k,
                coefficients: vec![Combination {
                    index: j,
                    weight: int(1),
                }],
            });
            break;
        }
        seen.insert(m, k);
    }
    let violation = match duplicate {
        Some(v) => v,
        None => first_violation(&midpoints).ok_or_else(|| {
            Error::Inconsistency(
                "no cross midpoint is dependent: five-partite configuration refutation failed"
                    .into(),
            )
        })?,
    };
    let r = K22222Refutation {
        midpoints,
        generators,
        violation,
    };
    if !r.verify() {
        return Err(Error::Inconsistency(
            "violation failed exact re-check".into(),
        ));
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Halman5Result {
    pub points: ConvexPositionCertificate,
    /// Present only when the points are convexly independent.
    pub midpoints: Option<ConvexPositionCertificate>,
    pub note: Option<String>,
}

impl Halman5Result {
    /// The property: independent points have dependent midpoints.
    pub fn holds(&self) -> bool {
        match &self.midpoints {
            None => !self.points.is_independent(),
            Some(m) => self.points.is_independent() && !m.is_independent(),
        }
    }
}

/// For five points in R³ in convex position, certifies that their ten
/// midpoints are not.
pub fn halman5_check(points: &[ExactPoint]) -> Result<Halman5Result> {
    let set = PointSet::new(3, points.to_vec())?;
    if set.len() != 5 {
        return Err(Error::InvalidInput(format!(
            "expected 5 points, found {}",
            set.len()
        )));
    }
    set.require_distinct()?;
    let pc = convexly_independent(&set);
    if !pc.is_independent() {
        return Ok(Halman5Result {
            points: pc,
            midpoints: None,
            note: Some("points are not in convex position; check skipped".into()),
        });
    }
    let mids: Vec<ExactPoint> = (0..5)
        .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
        .map(|(i, j)| set[i].midpoint(&set[j]))
        .collect();
    let mc = convexly_independent(&PointSet::new(3, mids)?);
    if mc.is_independent() {
        return Err(Error::Inconsistency(
            "five points and their ten midpoints are both convexly independent".into(),
        ));
    }
    Ok(Halman5Result {
        points: pc,
        midpoints: Some(mc),
        note: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayStep {
    pub from: Member,
    pub through: Member,
    /// Members spanning the facet the ray leaves through.
    pub facet: [Member; 3],
    /// `from + s (through - from)` lies on the facet.
    #[serde(with = "crate::rational::serde_str")]
    pub parameter: Rational,
    pub exit_point: ExactPoint,
    /// `facet ∪ {from, through}`, certified dependent.
    pub witness: Vec<Member>,
    pub certificate: ConvexPositionCertificate,
}

/// Replay of the largest-tetrahedron case analysis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub classes: Vec<PointSet>,
    /// Picks from four distinct classes with the largest `|det|`.
    pub tetrahedron: [Member; 4],
    #[serde(with = "crate::rational::serde_str")]
    pub volume6: Rational,
    pub left_out: usize,
    /// Barycentric coordinates of each point of the left-out class, if it
    /// lies in the closed tetrahedron.
    pub containment: Vec<Option<ExactPoint>>,
    pub ray_step: Option<RayStep>,
}

impl ProofTrace {
    fn member(&self, m: Member) -> &ExactPoint {
        &self.classes[m.0][m.1]
    }

    /// Exact re-check: no single-point swap increases the volume, the
    /// stored containment is correct and the ray witness is dependent.
    pub fn verify(&self) -> bool {
        let vol = |t: &[Member; 4]| {
            volume6(
                self.member(t[0]),
                self.member(t[1]),
                self.member(t[2]),
                self.member(t[3]),
            )
            .abs()
        };
        let best = vol(&self.tetrahedron);
        if best != self.volume6 || best.is_zero() {
            return false;
        }
        for slot in 0..4 {
            for (ci, class) in self.classes.iter().enumerate() {
                let used = self
                    .tetrahedron
                    .iter()
                    .enumerate()
                    .any(|(s, m)| s != slot && m.0 == ci);
                if used {
                    continue;
                }
                for a in 0..class.len() {
                    let mut t = self.tetrahedron;
                    t[slot] = (ci, a);
                    if vol(&t) > best {
                        return false;
                    }
                }
            }
        }
        let simplex: Vec<ExactPoint> = self
            .tetrahedron
            .iter()
            .map(|&m| self.member(m).clone())
            .collect();
        for (a, b) in self.containment.iter().enumerate() {
            let inside = barycentric(&simplex, &self.classes[self.left_out][a])
                .filter(|l| l.iter().all(|x| !x.is_negative()))
                .map(ExactPoint::new);
            if &inside != b {
                return false;
            }
        }
        self.ray_step.as_ref().is_none_or(|r| {
            let pts: Vec<ExactPoint> = r.witness.iter().map(|&m| self.member(m).clone()).collect();
            let set = PointSet::new(3, pts).expect("dimension 3");
            !r.certificate.is_independent() && r.certificate.verify(&set)
        })
    }
}

/// Runs the largest-tetrahedron argument on five classes of one or two
/// points: picks the largest tetrahedron over four distinct classes, tests
/// the left-out points for containment and, when two of them are inside,
/// follows the ray between them to a facet.
pub fn proof_path_extract(classes: &[PointSet]) -> Result<ProofTrace> {
    if classes.len() != 5 {
        return Err(Error::InvalidInput(format!(
            "expected 5 classes, found {}",
            classes.len()
        )));
    }
    for c in classes {
        if c.dimension != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: c.dimension,
            });
        }
        if c.is_empty() || c.len() > 2 {
            return Err(Error::InvalidInput("classes need one or two points".into()));
        }
    }
    let mut best: Option<([Member; 4], Rational, usize)> = None;
    for skip in 0..5 {
        let cls: Vec<usize> = (0..5).filter(|&c| c != skip).collect();
        for a in 0..classes[cls[0]].len() {
            for b in 0..classes[cls[1]].len() {
                for c in 0..classes[cls[2]].len() {
                    for d in 0..classes[cls[3]].len() {
                        let t = [(cls[0], a), (cls[1], b), (cls[2], c), (cls[3], d)];
                        let p = |m: Member| &classes[m.0][m.1];
                        let v = volume6(p(t[0]), p(t[1]), p(t[2]), p(t[3])).abs();
                        if v.is_zero() {
                            return Err(Error::Degenerate(format!(
                                "coplanar quadruple {t:?}; perturb the input"
                            )));
                        }
                        if best.as_ref().is_none_or(|(_, bv, _)| &v > bv) {
                            best = Some((t, v, skip));
                        }
                    }
                }
            }
        }
    }
    let (tetrahedron, vol, left_out) = best.expect("at least one quadruple");
    let simplex: Vec<ExactPoint> = tetrahedron
        .iter()
        .map(|&(c, a)| classes[c][a].clone())
        .collect();
    let containment: Vec<Option<ExactPoint>> = classes[left_out]
        .iter()
        .map(|x| {
            barycentric(&simplex, x)
                .filter(|l| l.iter().all(|v| !v.is_negative()))
                .map(ExactPoint::new)
        })
        .collect();
    let ray_step = match (containment.first(), containment.get(1)) {
        (Some(Some(b0)), Some(Some(b1))) if b0 != b1 => {
            let (l0, l1) = (&b0.coords, &b1.coords);
            // barycentric coordinates move linearly along the ray; the first
            // one to reach zero names the exit facet
            let (k, s) = (0..4)
                .filter(|&k| l1[k] < l0[k])
                .map(|k| (k, &l0[k] / (&l0[k] - &l1[k])))
                .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
                .expect("coordinates sum to one, so one decreases");
            let from = &classes[left_out][0];
            let exit_point = from + &(&classes[left_out][1] - from).scale(&s);
            let facet: Vec<Member> = (0..4).filter(|&j| j != k).map(|j| tetrahedron[j]).collect();
            let facet = [facet[0], facet[1], facet[2]];
            let mut witness = facet.to_vec();
            witness.push((left_out, 0));
            witness.push((left_out, 1));
            let pts = witness
                .iter()
                .map(|&(c, a)| classes[c][a].clone())
                .collect();
            let certificate = convexly_independent(&PointSet::new(3, pts)?);
            if certificate.is_independent() {
                return Err(Error::Inconsistency(
                    "ray witness is convexly independent".into(),
                ));
            }
            Some(RayStep {
                from: (left_out, 0),
                through: (left_out, 1),
                facet,
                parameter: s,
                exit_point,
                witness,
                certificate,
            })
        }
        _ => None,
    };
    Ok(ProofTrace {
        classes: classes.to_vec(),
        tetrahedron,
        volume6: vol,
        left_out,
        containment,
        ray_step,
    })
}

/// Outcome of [`conjecture_search`]. The floating margin only guides the
/// search; `verdict` is computed exactly on the rounded configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub c: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub epsilon: Rational,
    pub budget: u64,
    pub seed: u64,
    pub evaluations: u64,
    pub workers: usize,
    pub best_margin: Option<f64>,
    pub best: Option<Vec<PointSet>>,
    pub verdict: Option<ConvexPositionCertificate>,
    /// Class diameters of the rounded configuration are below `epsilon`.
    pub diameters_ok: bool,
    /// Certified: independent cross midpoints and small classes.
    pub found: bool,
}

/// Number of independent search workers; fixed so reports do not depend on
/// the thread count.
pub const SEARCH_WORKERS: usize = 8;
/// Denominator exponent of the rounding applied before certification.
pub const ROUNDING_BITS: u32 = 20;
const CLIMB_STEPS: u64 = 400;

type Cfg = Vec<Vec<[f64; 3]>>;

fn cross_midpoints_f64(cfg: &Cfg) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for i in 0..cfg.len() {
        for j in i + 1..cfg.len() {
            for p in &cfg[i] {
                for q in &cfg[j] {
                    out.push([
                        (p[0] + q[0]) / 2.0,
                        (p[1] + q[1]) / 2.0,
                        (p[2] + q[2]) / 2.0,
                    ]);
                }
            }
        }
    }
    out
}

/// `max t` subject to `φ·(m_i - m_j) ≥ t` for all `j ≠ i`, `|φ_k| ≤ 1`.
fn point_margin(m: &[[f64; 3]], i: usize) -> f64 {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let phi: Vec<_> = (0..3).map(|_| lp.add_var(0.0, (-1.0, 1.0))).collect();
    let t = lp.add_var(1.0, (-10.0, 10.0));
    for (j, x) in m.iter().enumerate() {
        if j == i {
            continue;
        }
        let d: Vec<f64> = (0..3).map(|k| m[i][k] - x[k]).collect();
        lp.add_constraint(
            [(t, 1.0), (phi[0], -d[0]), (phi[1], -d[1]), (phi[2], -d[2])],
            ComparisonOp::Le,
            0.0,
        );
    }
    lp.solve()
        .ok()
        .and_then(|o| o.solution().map(|s| s.objective()))
        .unwrap_or(f64::NEG_INFINITY)
}

/// Minimum point margin and the point attaining it, stopping early once the
/// margin drops to `floor`. Point `first` is examined first.
fn margin(cfg: &Cfg, floor: f64, first: usize) -> (f64, usize) {
    let m = cross_midpoints_f64(cfg);
    let n = m.len();
    let mut worst = (f64::INFINITY, first);
    for i in (0..n).map(|k| (k + first) % n) {
        let v = point_margin(&m, i);
        if v < worst.0 {
            worst = (v, i);
        }
        if worst.0 <= floor {
            break;
        }
    }
    worst
}

fn class_ok(class: &[[f64; 3]], eps: f64) -> bool {
    class.iter().enumerate().all(|(a, p)| {
        class[a + 1..].iter().all(|q| {
            let d2: f64 = (0..3).map(|k| (p[k] - q[k]).powi(2)).sum();
            d2.sqrt() < eps
        })
    })
}

fn random_cfg(rng: &mut ChaCha8Rng, c: usize, eps: f64) -> Cfg {
    // a box of half-side eps / (2√3) has diameter below eps
    let r = 0.999 * eps / (2.0 * 3f64.sqrt());
    (0..4)
        .map(|_| {
            let center: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            (0..c)
                .map(|_| std::array::from_fn(|k| center[k] + rng.gen_range(-r..=r)))
                .collect()
        })
        .collect()
}

fn worker(c: usize, eps: f64, evals: u64, seed: u64) -> Option<(f64, Cfg)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = 0u64;
    let mut best: Option<(f64, Cfg)> = None;
    while used < evals {
        let mut cur = random_cfg(&mut rng, c, eps);
        let (mut cur_m, mut arg) = margin(&cur, f64::NEG_INFINITY, 0);
        used += 1;
        let mut sigma = 0.25;
        let mut steps = 0;
        while used < evals && steps < CLIMB_STEPS {
            steps += 1;
            let mut cand = cur.clone();
            let (k, l, x) = (
                rng.gen_range(0..4),
                rng.gen_range(0..c),
                rng.gen_range(0..3),
            );
            let step = if c > 1 { sigma * eps } else { sigma };
            cand[k][l][x] += rng.gen_range(-step..=step);
            if !class_ok(&cand[k], eps) {
                continue;
            }
            let (m, at) = margin(&cand, cur_m, arg);
            used += 1;
            arg = at;
            if m > cur_m {
                cur = cand;
                cur_m = m;
            } else {
                sigma = (sigma * 0.9).max(1e-4);
            }
        }
        if best.as_ref().is_none_or(|(b, _)| cur_m > *b) {
            best = Some((cur_m, cur));
        }
    }
    best
}

fn rounded(cfg: &Cfg) -> Vec<PointSet> {
    cfg.iter()
        .map(|class| PointSet {
            dimension: 3,
            points: class
                .iter()
                .map(|p| {
                    ExactPoint::new(
                        p.iter()
                            .map(|&x| from_f64_dyadic(x, ROUNDING_BITS))
                            .collect(),
                    )
                })
                .collect(),
        })
        .collect()
}

fn certify(classes: &[PointSet], eps: &Rational) -> (ConvexPositionCertificate, bool) {
    let (mids, _) = cross_midpoints(classes);
    let cert = convexly_independent(&PointSet::new(3, mids).expect("dimension 3"));
    let eps2 = eps * eps;
    let small = classes.iter().all(|cl| {
        cl.iter()
            .enumerate()
            .all(|(a, p)| cl.points[a + 1..].iter().all(|q| (p - q).norm2() < eps2))
    });
    (cert, small)
}

/// Seeded search for four classes of `c` points in R³, each of diameter
/// below `epsilon`, whose cross midpoints are convexly independent.
///
/// `budget` counts margin evaluations, split evenly over
/// [`SEARCH_WORKERS`] workers with seeds derived from `seed`. The best
/// configuration of each worker is rounded to dyadic rationals and
/// certified; certified ones win, then larger margin, then lower worker id.
pub fn conjecture_search(
    c: usize,
    epsilon: &Rational,
    budget: u64,
    seed: u64,
) -> Result<SearchReport> {
    if c == 0 {
        return Err(Error::InvalidInput("class size must be at least 1".into()));
    }
    if !epsilon.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let eps = to_f64(epsilon);
    let w = SEARCH_WORKERS as u64;
    let results: Vec<Option<(f64, Cfg, ConvexPositionCertificate, bool)>> = (0..w)
        .into_par_iter()
        .map(|k| {
            let evals = budget / w + u64::from(k < budget % w);
            let wseed = seed ^ (k + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            worker(c, eps, evals, wseed).map(|(m, cfg)| {
                let (cert, small) = certify(&rounded(&cfg), epsilon);
                (m, cfg, cert, small)
            })
        })
        .collect();
    let mut best: Option<(f64, Cfg, ConvexPositionCertificate, bool)> = None;
    for r in results.into_iter().flatten() {
        let better = match &best {
            None => true,
            Some(b) => {
                let (rf, bf) = (r.2.is_independent() && r.3, b.2.is_independent() && b.3);
                (rf && !bf) || (rf == bf && r.0 > b.0)
            }
        };
        if better {
            best = Some(r);
        }
    }
    Ok(match best {
        None => SearchReport {
            c,
            epsilon: epsilon.clone(),
            budget,
            seed,
            evaluations: 0,
            workers: SEARCH_WORKERS,
            best_margin: None,
            best: None,
            verdict: None,
            diameters_ok: false,
            found: false,
        },
        Some((m, cfg, cert, small)) => SearchReport {
            c,
            epsilon: epsilon.clone(),
            budget,
            seed,
            evaluations: budget,
            workers: SEARCH_WORKERS,
            best_margin: Some(m),
            found: cert.is_independent() && small,
            best: Some(rounded(&cfg)),
            verdict: Some(cert),
            diameters_ok: small,
        },
    })
}
