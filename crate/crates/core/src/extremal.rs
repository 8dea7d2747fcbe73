//! Extremal quantities on concrete point sets: the largest convexly
//! independent subset of the midpoint set `E(P)`, of a Minkowski sum
//! `M(P, Q)`, and the largest concyclic midpoint family `E∘(P)`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::predicates::{circumcenter, orient2_int};
use crate::geom::separation::convexly_independent_points;
use crate::geom::{convexly_independent, ConvexPositionCertificate, ExactPoint, PointSet};
use crate::rational::Rational;

/// Default size limit for exhaustive searches.
pub const DEFAULT_CAP: usize = 18;

/// A set of unordered index pairs over `base` with their deduplicated midpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSystem {
    pub base: PointSet,
    pub pairs: Vec<(usize, usize)>,
    pub midpoints: PointSet,
    /// For each midpoint, the indices into `pairs` producing it (ascending).
    pub provenance: Vec<Vec<usize>>,
}

impl PairSystem {
    pub fn new(base: PointSet, pairs: Vec<(usize, usize)>) -> Result<Self> {
        for &(i, j) in &pairs {
            if i >= base.len() || j >= base.len() || i == j {
                return Err(Error::InvalidInput(format!("bad pair ({i}, {j})")));
            }
        }
        let raw = PointSet {
            dimension: base.dimension,
            points: pairs
                .iter()
                .map(|&(i, j)| base[i].midpoint(&base[j]))
                .collect(),
        };
        let (midpoints, provenance) = raw.dedup_with_provenance();
        Ok(Self {
            base,
            pairs,
            midpoints,
            provenance,
        })
    }

    /// Exact re-check of the provenance invariant.
    pub fn verify(&self) -> bool {
        self.provenance.iter().enumerate().all(|(m, list)| {
            !list.is_empty()
                && list.iter().all(|&k| {
                    let (i, j) = self.pairs[k];
                    self.base[i].midpoint(&self.base[j]) == self.midpoints[m]
                })
        })
    }
}

/// All `C(n, 2)` pairs of `p` in lexicographic order.
pub fn midpoint_system(p: &PointSet) -> Result<PairSystem> {
    p.require_distinct()?;
    let n = p.len();
    let pairs = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    PairSystem::new(p.clone(), pairs)
}

/// Distinct sums `p + q` with, for each sum, every `(p_index, q_index)`
/// producing it in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinkowskiSum {
    pub sum: PointSet,
    pub provenance: Vec<Vec<(usize, usize)>>,
}

pub fn minkowski_sum(p: &PointSet, q: &PointSet) -> Result<MinkowskiSum> {
    if p.dimension != q.dimension {
        return Err(Error::DimensionMismatch {
            expected: p.dimension,
            found: q.dimension,
        });
    }
    let mut index: HashMap<ExactPoint, usize> = HashMap::new();
    let mut points = Vec::new();
    let mut provenance: Vec<Vec<(usize, usize)>> = Vec::new();
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            let s = a + b;
            match index.get(&s) {
                Some(&k) => provenance[k].push((i, j)),
                None => {
                    index.insert(s.clone(), points.len());
                    points.push(s);
                    provenance.push(vec![(i, j)]);
                }
            }
        }
    }
    Ok(MinkowskiSum {
        sum: PointSet {
            dimension: p.dimension,
            points,
        },
        provenance,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circle {
    pub center: ExactPoint,
    #[serde(with = "crate::rational::serde_str")]
    pub radius_squared: Rational,
}

/// A maximum found on a concrete instance, with its certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub value: usize,
    /// Indices into the candidate set (midpoints, sums, or the input itself).
    pub selected: Vec<usize>,
    pub points: PointSet,
    /// One generating pair per selected point, when the candidates came from pairs.
    pub pairs: Option<Vec<(usize, usize)>>,
    pub certificate: ConvexPositionCertificate,
    pub circle: Option<Circle>,
}

impl ExtremalResult {
    fn from_selection(candidates: &PointSet, selected: Vec<usize>) -> Self {
        let points = candidates.subset(&selected);
        let certificate = convexly_independent(&points);
        Self {
            value: selected.len(),
            selected,
            points,
            pairs: None,
            certificate,
            circle: None,
        }
    }

    /// Value matches the witness and the certificate re-verifies.
    pub fn verify(&self) -> bool {
        self.value == self.points.len()
            && self.value == self.selected.len()
            && self.certificate.is_independent()
            && self.certificate.verify(&self.points)
    }
}

fn require_plane(s: &PointSet) -> Result<()> {
    if s.dimension != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: s.dimension,
        });
    }
    Ok(())
}

/// Largest subset of a planar point set in strictly convex position.
///
/// For every pivot (the lowest, then leftmost, vertex of the polygon) the
/// remaining candidates are sorted by angle and chains are extended edge by
/// edge with strict left turns, so collinear triples never enter a solution.
pub fn largest_convex_subset_2d(s: &PointSet) -> Result<ExtremalResult> {
    require_plane(s)?;
    s.require_distinct()?;
    let n = s.len();
    if n <= 2 {
        return Ok(ExtremalResult::from_selection(s, (0..n).collect()));
    }
    let ints = s.integer_coords();
    let turn = |a: usize, b: usize, c: usize| orient2_int(&ints[a], &ints[b], &ints[c]);

    let best = (0..n)
        .into_par_iter()
        .filter_map(|pivot| {
            let key = |i: usize| (&ints[i][1], &ints[i][0]);
            let mut cand: Vec<usize> = (0..n).filter(|&i| key(i) > key(pivot)).collect();
            let dist2 = |i: usize| -> BigInt {
                let dx = &ints[i][0] - &ints[pivot][0];
                let dy = &ints[i][1] - &ints[pivot][1];
                &dx * &dx + &dy * &dy
            };
            cand.sort_by(|&b, &c| match turn(pivot, b, c) {
                1 => std::cmp::Ordering::Less,
                -1 => std::cmp::Ordering::Greater,
                _ => dist2(b).cmp(&dist2(c)),
            });
            let m = cand.len();
            // chain[j][i]: vertices on the best chain pivot → … → cand[j] → cand[i]
            let mut chain = vec![vec![0usize; m]; m];
            let mut prev = vec![vec![usize::MAX; m]; m];
            let mut top: Option<(usize, usize, usize)> = None;
            for i in 0..m {
                for j in 0..i {
                    if turn(pivot, cand[j], cand[i]) <= 0 {
                        continue;
                    }
                    let mut val = 3;
                    let mut arg = usize::MAX;
                    for k in 0..j {
                        if chain[k][j] > 0
                            && chain[k][j] + 1 > val
                            && turn(cand[k], cand[j], cand[i]) > 0
                        {
                            val = chain[k][j] + 1;
                            arg = k;
                        }
                    }
                    chain[j][i] = val;
                    prev[j][i] = arg;
                    if turn(cand[j], cand[i], pivot) > 0 && top.is_none_or(|(v, _, _)| val > v) {
                        top = Some((val, j, i));
                    }
                }
            }
            top.map(|(val, mut j, mut i)| {
                let mut poly = vec![cand[i], cand[j]];
                while prev[j][i] != usize::MAX {
                    let k = prev[j][i];
                    poly.push(cand[k]);
                    i = j;
                    j = k;
                }
                poly.push(pivot);
                poly.reverse();
                debug_assert_eq!(poly.len(), val);
                poly
            })
        })
        .reduce_with(pick);

    let selected = best.unwrap_or_else(|| vec![0, 1]);
    Ok(ExtremalResult::from_selection(s, selected))
}

/// Larger list wins; ties go to the lexicographically smaller sorted list.
fn pick(a: Vec<usize>, b: Vec<usize>) -> Vec<usize> {
    if a.len() != b.len() {
        return if a.len() > b.len() { a } else { b };
    }
    let mut sa = a.clone();
    let mut sb = b.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa <= sb {
        a
    } else {
        b
    }
}

/// Exhaustive maximum by depth-first subset search, any dimension.
///
/// Convex independence is hereditary, so a branch is abandoned as soon as
/// the partial selection stops being independent.
pub fn largest_convex_subset_bruteforce(s: &PointSet, cap: usize) -> Result<ExtremalResult> {
    let n = s.len();
    if n > cap {
        return Err(Error::CapExceeded { size: n, cap });
    }
    let best_len = AtomicUsize::new(0);
    let best = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut local: Vec<usize> = Vec::new();
            let mut current = vec![first];
            dfs(s, &mut current, first + 1, &mut local, &best_len);
            local
        })
        .reduce_with(|a, b| {
            if a.len() != b.len() {
                if a.len() > b.len() {
                    a
                } else {
                    b
                }
            } else if a <= b {
                a
            } else {
                b
            }
        })
        .unwrap_or_default();
    Ok(ExtremalResult::from_selection(s, best))
}

fn dfs(
    s: &PointSet,
    current: &mut Vec<usize>,
    next: usize,
    best: &mut Vec<usize>,
    global: &AtomicUsize,
) {
    if current.len() > best.len() {
        *best = current.clone();
        global.fetch_max(current.len(), Ordering::Relaxed);
    }
    for k in next..s.len() {
        // strict: equal-size selections are still explored for the tie-break
        if current.len() + (s.len() - k) < global.load(Ordering::Relaxed).max(best.len() + 1) {
            return;
        }
        current.push(k);
        let pts: Vec<ExactPoint> = current.iter().map(|&i| s[i].clone()).collect();
        if pts.len() <= 2 && pts.first() != pts.get(1)
            || convexly_independent_points(&pts).is_independent()
        {
            dfs(s, current, k + 1, best, global);
        }
        current.pop();
    }
}

fn largest_convex_subset(s: &PointSet, cap: usize) -> Result<ExtremalResult> {
    if s.dimension == 2 {
        largest_convex_subset_2d(s)
    } else {
        largest_convex_subset_bruteforce(s, cap)
    }
}

/// `E(P)`: the most pairs of `p` whose midpoints are convexly independent.
///
/// Pairs sharing a midpoint cannot both be chosen, so the witness lists the
/// lowest-index pair for each selected midpoint.
pub fn compute_e(p: &PointSet, cap: usize) -> Result<ExtremalResult> {
    let sys = midpoint_system(p)?;
    let mut res = largest_convex_subset(&sys.midpoints, cap)?;
    res.pairs = Some(
        res.selected
            .iter()
            .map(|&m| sys.pairs[sys.provenance[m][0]])
            .collect(),
    );
    Ok(res)
}

/// `M(P, Q)`: the largest convexly independent subset of `P + Q`.
/// Witness pairs are `(p_index, q_index)`.
pub fn compute_m(p: &PointSet, q: &PointSet, cap: usize) -> Result<ExtremalResult> {
    let ms = minkowski_sum(p, q)?;
    let mut res = largest_convex_subset(&ms.sum, cap)?;
    res.pairs = Some(res.selected.iter().map(|&k| ms.provenance[k][0]).collect());
    Ok(res)
}

/// `E∘(P)`: the most pairs of a planar set whose distinct midpoints are concyclic.
pub fn compute_e_circ(p: &PointSet, cap: usize) -> Result<ExtremalResult> {
    require_plane(p)?;
    if p.len() > cap {
        return Err(Error::CapExceeded { size: p.len(), cap });
    }
    let sys = midpoint_system(p)?;
    let mids = &sys.midpoints;
    let m = mids.len();
    let ints = mids.integer_coords();

    // anchor a < b, group every c > b by the exact circumcenter of (a, b, c)
    let best: Option<(usize, Vec<usize>)> = (0..m)
        .into_par_iter()
        .filter_map(|a| {
            let mut local: Option<Vec<usize>> = None;
            for b in a + 1..m {
                let mut groups: HashMap<(BigInt, BigInt, BigInt), Vec<usize>> = HashMap::new();
                for c in b + 1..m {
                    if let Some(key) = int_circumcenter(&ints[a], &ints[b], &ints[c]) {
                        groups.entry(key).or_default().push(c);
                    }
                }
                for (_, cs) in groups {
                    let mut sel = vec![a, b];
                    sel.extend(cs);
                    if local.as_ref().is_none_or(|l| sel.len() > l.len()) {
                        local = Some(sel);
                    }
                }
            }
            local.map(|l| (l.len(), l))
        })
        .reduce_with(|x, y| {
            if x.0 != y.0 {
                if x.0 > y.0 {
                    x
                } else {
                    y
                }
            } else if x.1 <= y.1 {
                x
            } else {
                y
            }
        });

    let (selected, circle) = match best {
        Some((_, sel)) => {
            let center = circumcenter(&mids[sel[0]], &mids[sel[1]], &mids[sel[2]])
                .expect("grouped triples are not collinear");
            let radius_squared = (&mids[sel[0]] - &center).norm2();
            (
                sel,
                Some(Circle {
                    center,
                    radius_squared,
                }),
            )
        }
        None => ((0..m.min(2)).collect(), None),
    };
    let mut res = ExtremalResult::from_selection(mids, selected);
    res.pairs = Some(
        res.selected
            .iter()
            .map(|&k| sys.pairs[sys.provenance[k][0]])
            .collect(),
    );
    res.circle = circle;
    Ok(res)
}

/// Circumcenter of three integer points as a normalized `(x, y, den)` key.
fn int_circumcenter(a: &[BigInt], b: &[BigInt], c: &[BigInt]) -> Option<(BigInt, BigInt, BigInt)> {
    let (bx, by) = (&b[0] - &a[0], &b[1] - &a[1]);
    let (cx, cy) = (&c[0] - &a[0], &c[1] - &a[1]);
    let d = BigInt::from(2) * (&bx * &cy - &by * &cx);
    if d.is_zero() {
        return None;
    }
    let b2 = &bx * &bx + &by * &by;
    let c2 = &cx * &cx + &cy * &cy;
    let ux = &cy * &b2 - &by * &c2 + &a[0] * &d;
    let uy = &bx * &c2 - &cx * &b2 + &a[1] * &d;
    let g = ux.gcd(&uy).gcd(&d);
    let sgn = if d.is_negative() { -g } else { g };
    Some((ux / &sgn, uy / &sgn, d / &sgn))
}

/// True if every point of `points` lies on `circle` (exact).
pub fn on_circle(points: &PointSet, circle: &Circle) -> bool {
    points
        .iter()
        .all(|p| (p - &circle.center).norm2() == circle.radius_squared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn set(rows: &[&[i64]]) -> PointSet {
        PointSet::from_ints(rows).unwrap()
    }

    fn circle25() -> PointSet {
        set(&[&[5, 0], &[3, 4], &[0, 5], &[-4, 3], &[-3, -4], &[4, -3]])
    }

    #[test]
    fn midpoint_system_examples() {
        let tri = midpoint_system(&set(&[&[0, 0], &[2, 0], &[0, 2]])).unwrap();
        assert_eq!(tri.midpoints, set(&[&[1, 0], &[0, 1], &[1, 1]]));
        assert!(tri.provenance.iter().all(|p| p.len() == 1));
        let sq = midpoint_system(&set(&[&[0, 0], &[2, 0], &[2, 2], &[0, 2]])).unwrap();
        assert_eq!(sq.midpoints.len(), 5);
        let center = sq
            .midpoints
            .iter()
            .position(|p| *p == ExactPoint::from_ints(&[1, 1]))
            .unwrap();
        let diag: Vec<_> = sq.provenance[center].iter().map(|&k| sq.pairs[k]).collect();
        assert_eq!(diag, vec![(0, 2), (1, 3)]);
        assert!(sq.verify());
        assert_eq!(
            midpoint_system(&set(&[&[0, 0], &[4, 2]]))
                .unwrap()
                .midpoints
                .len(),
            1
        );
        assert!(matches!(
            midpoint_system(&set(&[&[0, 0], &[0, 0]])),
            Err(Error::DuplicatePoints(0, 1))
        ));
    }

    #[test]
    fn minkowski_examples() {
        let seg = set(&[&[0, 0], &[1, 0]]);
        let ms = minkowski_sum(&seg, &seg).unwrap();
        assert_eq!(ms.sum, set(&[&[0, 0], &[1, 0], &[2, 0]]));
        assert_eq!(ms.provenance[1], vec![(0, 1), (1, 0)]);
        let generic_p = set(&[&[0, 0], &[1, 3], &[7, 2]]);
        let generic_q = set(&[&[0, 0], &[100, 1]]);
        assert_eq!(minkowski_sum(&generic_p, &generic_q).unwrap().sum.len(), 6);
        let origin = set(&[&[0, 0]]);
        let sq = set(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
        assert_eq!(minkowski_sum(&origin, &sq).unwrap().sum, sq);
        let p3 = set(&[&[0, 0, 0]]);
        assert!(minkowski_sum(&p3, &sq).is_err());
    }

    #[test]
    fn dp_fixed_instances() {
        let mut sqc = set(&[&[0, 0], &[2, 0], &[2, 2], &[0, 2], &[1, 1]]);
        assert_eq!(largest_convex_subset_2d(&sqc).unwrap().value, 4);
        sqc.points.swap(0, 4);
        assert_eq!(largest_convex_subset_2d(&sqc).unwrap().value, 4);
        let grid: Vec<Vec<i64>> = (0..3)
            .flat_map(|x| (0..3).map(move |y| vec![x, y]))
            .collect();
        let grid =
            PointSet::from_points(grid.iter().map(|r| ExactPoint::from_ints(r)).collect()).unwrap();
        let g = largest_convex_subset_2d(&grid).unwrap();
        assert_eq!(g.value, 6);
        assert!(g.verify());
        let c = largest_convex_subset_2d(&circle25().subset(&[0, 1, 2, 3, 4])).unwrap();
        assert_eq!(c.value, 5);
    }

    #[test]
    fn dp_degenerate_inputs() {
        assert_eq!(largest_convex_subset_2d(&set(&[&[0, 0]])).unwrap().value, 1);
        let line = set(&[&[0, 0], &[1, 1], &[2, 2], &[3, 3]]);
        let r = largest_convex_subset_2d(&line).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.verify());
    }

    #[test]
    fn bruteforce_matches_fixed() {
        let grid: Vec<ExactPoint> = (0..3)
            .flat_map(|x| (0..3).map(move |y| ExactPoint::from_ints(&[x, y])))
            .collect();
        let grid = PointSet::from_points(grid).unwrap();
        assert_eq!(
            largest_convex_subset_bruteforce(&grid, 18).unwrap().value,
            6
        );
        let sqc = set(&[&[0, 0], &[2, 0], &[2, 2], &[0, 2], &[1, 1]]);
        assert_eq!(largest_convex_subset_bruteforce(&sqc, 18).unwrap().value, 4);
        assert!(matches!(
            largest_convex_subset_bruteforce(&grid, 5),
            Err(Error::CapExceeded { size: 9, cap: 5 })
        ));
    }

    #[test]
    fn compute_e_examples() {
        let tri = compute_e(&set(&[&[0, 0], &[2, 0], &[0, 2]]), DEFAULT_CAP).unwrap();
        assert_eq!(tri.value, 3);
        assert_eq!(tri.pairs.as_ref().unwrap().len(), 3);
        let sq = compute_e(&set(&[&[0, 0], &[2, 0], &[2, 2], &[0, 2]]), DEFAULT_CAP).unwrap();
        assert_eq!(sq.value, 4);
        assert_eq!(
            compute_e(&set(&[&[0, 0], &[1, 0]]), DEFAULT_CAP)
                .unwrap()
                .value,
            1
        );
        let tet = set(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(compute_e(&tet, DEFAULT_CAP).unwrap().value, 6);
    }

    #[test]
    fn compute_m_examples() {
        let tri = set(&[&[0, 0], &[2, 0], &[0, 2]]);
        // the six sums are the corners and edge midpoints of a triangle
        let m = compute_m(&tri, &tri, DEFAULT_CAP).unwrap();
        assert_eq!(m.value, 4);
        let ms = minkowski_sum(&tri, &tri).unwrap();
        assert_eq!(
            largest_convex_subset_bruteforce(&ms.sum, DEFAULT_CAP)
                .unwrap()
                .value,
            4
        );
        assert!(m.verify());
        let origin = set(&[&[0, 0]]);
        let sq = set(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
        assert_eq!(compute_m(&origin, &sq, DEFAULT_CAP).unwrap().value, 4);
        let seg = set(&[&[0, 0], &[1, 0]]);
        assert_eq!(compute_m(&seg, &seg, DEFAULT_CAP).unwrap().value, 2);
    }

    #[test]
    fn e_circ_examples() {
        let sq = compute_e_circ(&set(&[&[0, 0], &[2, 0], &[2, 2], &[0, 2]]), DEFAULT_CAP).unwrap();
        assert_eq!(sq.value, 4);
        let circle = sq.circle.clone().unwrap();
        assert_eq!(circle.center, ExactPoint::from_ints(&[1, 1]));
        assert_eq!(circle.radius_squared, int(1));
        assert!(on_circle(&sq.points, &circle));
        let three = compute_e_circ(&set(&[&[0, 0], &[5, 1], &[2, 7]]), DEFAULT_CAP).unwrap();
        assert_eq!(three.value, 3);
        assert_eq!(
            compute_e_circ(&set(&[&[0, 0], &[1, 0]]), DEFAULT_CAP)
                .unwrap()
                .value,
            1
        );
    }
}
