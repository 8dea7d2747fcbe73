use convind::cli::PointSetFile;
use convind::constructions::{
    antipodal_triple_3d, unit_ball_from_antipodal, AntipodalFamily, UnitBallCertificate,
};
use convind::extremal::{
    compute_e, compute_e_circ, largest_convex_subset_2d, largest_convex_subset_bruteforce,
    DEFAULT_CAP,
};
use convind::geom::{convexly_independent, hull_vertices, is_extreme, orient, orient2};
use convind::norms::{
    distance_census, gauge, verify_strict_antipodality, AntipodalityVerdict, Norm,
};
use convind::rational::int;
use convind::reductions::{claim1_reduce, claim3_reduce};
use convind::{ExactPoint, PointSet, Rational};
use num_traits::Signed;
use proptest::prelude::*;

fn point(dim: usize) -> impl Strategy<Value = ExactPoint> {
    prop::collection::vec((-20i64..=20, 1i64..=3), dim).prop_map(|c| ExactPoint::from_ratios(&c))
}

fn int_point(dim: usize, r: i64) -> impl Strategy<Value = ExactPoint> {
    prop::collection::vec(-r..=r, dim).prop_map(|c| ExactPoint::from_ints(&c))
}

fn distinct_planar(max: usize, r: i64) -> impl Strategy<Value = PointSet> {
    prop::collection::hash_set((-r..=r, -r..=r), 1..=max).prop_map(|s| {
        PointSet::from_points(
            s.into_iter()
                .map(|(x, y)| ExactPoint::from_ints(&[x, y]))
                .collect(),
        )
        .unwrap()
    })
}

fn ball(rows: &[&[i64]]) -> UnitBallCertificate {
    UnitBallCertificate::new(PointSet::from_ints(rows).unwrap()).unwrap()
}

fn l1(v: &ExactPoint) -> Rational {
    v.coords.iter().map(|c| c.abs()).sum()
}

fn linf(v: &ExactPoint) -> Rational {
    v.coords.iter().map(|c| c.abs()).max().unwrap()
}

/// `x` lies in the closed, possibly degenerate, triangle `abc`.
fn in_triangle(x: &ExactPoint, a: &ExactPoint, b: &ExactPoint, c: &ExactPoint) -> bool {
    if orient2(a, b, c) != 0 {
        let s = [orient2(a, b, x), orient2(b, c, x), orient2(c, a, x)];
        return !(s.contains(&1) && s.contains(&-1));
    }
    let on = |p: &ExactPoint, q: &ExactPoint| {
        orient2(p, q, x) == 0
            && (0..2).all(|k| {
                let (lo, hi) = (
                    p.coords[k].clone().min(q.coords[k].clone()),
                    p.coords[k].clone().max(q.coords[k].clone()),
                );
                lo <= x.coords[k] && x.coords[k] <= hi
            })
    };
    on(a, b) || on(b, c) || on(a, c)
}

/// Planar Carathéodory: a point is not extreme iff it lies in a triangle
/// (possibly degenerate) of the other points.
fn extreme_oracle(s: &PointSet, i: usize) -> bool {
    let o: Vec<&ExactPoint> = s
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, p)| p)
        .collect();
    for a in 0..o.len() {
        for b in a..o.len() {
            for c in b..o.len() {
                if in_triangle(&s[i], o[a], o[b], o[c]) {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orient_swap_negates(a in point(3), b in point(3), c in point(3), d in point(3)) {
        let s = orient(&[a.clone(), b.clone(), c.clone(), d.clone()]).unwrap();
        let t = orient(&[b, a, c, d]).unwrap();
        prop_assert_eq!(s, -t);
    }

    #[test]
    fn orient_translation_invariant(a in point(2), b in point(2), c in point(2), v in point(2)) {
        let s = orient(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let t = orient(&[&a + &v, &b + &v, &c + &v]).unwrap();
        prop_assert_eq!(s, t);
    }

    #[test]
    fn gauge_matches_l1_and_linf(v in point(2)) {
        let diamond = ball(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
        let square = ball(&[&[1, 1], &[-1, 1], &[-1, -1], &[1, -1]]);
        prop_assert_eq!(gauge(&diamond, &v).unwrap(), l1(&v));
        prop_assert_eq!(gauge(&square, &v).unwrap(), linf(&v));
    }

    #[test]
    fn gauge_is_a_norm(u in point(3), v in point(3), t in -5i64..=5) {
        let b = ball(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, 0, 0], &[0, -1, 0], &[0, 0, -1], &[1, 1, 1], &[-1, -1, -1]]);
        let g = |x: &ExactPoint| gauge(&b, x).unwrap();
        let t = int(t);
        prop_assert_eq!(g(&u.scale(&t)), t.abs() * g(&u));
        prop_assert_eq!(g(&u.scale(&int(-1))), g(&u));
        prop_assert!(g(&(&u + &v)) <= g(&u) + g(&v));
        prop_assert_eq!(g(&u) == int(0), u.is_zero());
    }

    #[test]
    fn is_extreme_matches_caratheodory(s in distinct_planar(8, 4)) {
        for i in 0..s.len() {
            let t = is_extreme(i, &s).unwrap();
            prop_assert_eq!(t.is_extreme(), extreme_oracle(&s, i), "point {}", i);
        }
        let cert = convexly_independent(&s);
        prop_assert!(cert.verify(&s));
    }

    #[test]
    fn dp_matches_bruteforce(s in distinct_planar(9, 4)) {
        let dp = largest_convex_subset_2d(&s).unwrap();
        let brute = largest_convex_subset_bruteforce(&s, DEFAULT_CAP).unwrap();
        prop_assert!(dp.verify());
        prop_assert!(brute.verify());
        prop_assert_eq!(dp.value, brute.value);
    }

    #[test]
    fn census_translation_invariant(s in distinct_planar(7, 3), v in int_point(2, 9)) {
        let a = distance_census(&s, &Norm::Euclidean).unwrap();
        let b = distance_census(&s.translate(&v), &Norm::Euclidean).unwrap();
        prop_assert_eq!(a.unit_pairs, b.unit_pairs);
        prop_assert_eq!(a.diameter_pairs, b.diameter_pairs);
        prop_assert_eq!(a.nonparallel_unit_directions, b.nonparallel_unit_directions);
    }

    #[test]
    fn point_file_round_trip(pts in prop::collection::vec(point(3), 0..6), labelled in any::<bool>()) {
        let set = PointSet::new(3, pts).unwrap();
        let labels = labelled.then(|| (0..set.len()).map(|i| i % 2).collect());
        let file = PointSetFile::from_set(&set, labels);
        let text = serde_json::to_string(&file).unwrap();
        let back: PointSetFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.to_set().unwrap(), set);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn independence_iff_all_hull_vertices(pts in prop::collection::vec(int_point(2, 3), 1..8)) {
        let s = PointSet::new(2, pts).unwrap();
        let cert = convexly_independent(&s);
        let expected = hull_vertices(&s).len() == s.len() && s.find_duplicate().is_none();
        prop_assert_eq!(cert.is_independent(), expected);
        prop_assert!(cert.verify(&s));
    }

    #[test]
    fn e_is_monotone_and_bounds_e_circ(s in distinct_planar(6, 3), extra in int_point(2, 3)) {
        let e = compute_e(&s, DEFAULT_CAP).unwrap();
        prop_assert!(e.verify());
        prop_assert!(e.value <= s.len() * (s.len() - 1) / 2);
        let circ = compute_e_circ(&s, DEFAULT_CAP).unwrap();
        prop_assert!(circ.value <= e.value);
        if s.affine_rank() == 2 {
            prop_assert!(e.value >= 3);
        }
        if !s.points.contains(&extra) {
            let mut bigger = s.points.clone();
            bigger.push(extra);
            let e2 = compute_e(&PointSet::from_points(bigger).unwrap(), DEFAULT_CAP).unwrap();
            prop_assert!(e2.value >= e.value);
        }
    }

    #[test]
    fn census_relabel_and_scale(s in distinct_planar(6, 3), rot in 0usize..6, t in 1i64..=4) {
        let square = ball(&[&[1, 1], &[-1, 1], &[-1, -1], &[1, -1]]);
        let a = distance_census(&s, &Norm::Polytope(square.clone())).unwrap();

        let k = rot % s.len();
        let mut pts = s.points.clone();
        pts.rotate_left(k);
        let relabeled = distance_census(&PointSet::from_points(pts).unwrap(), &Norm::Polytope(square.clone())).unwrap();
        let n = s.len();
        let mut back: Vec<(usize, usize)> = relabeled
            .unit_pairs
            .iter()
            .map(|&(i, j)| {
                let (x, y) = ((i + k) % n, (j + k) % n);
                (x.min(y), x.max(y))
            })
            .collect();
        back.sort_unstable();
        let mut orig = a.unit_pairs.clone();
        orig.sort_unstable();
        prop_assert_eq!(back, orig);

        let t = int(t);
        let scaled_ball = UnitBallCertificate::new(
            PointSet::from_points(square.vertices().iter().map(|v| v.scale(&t)).collect()).unwrap(),
        )
        .unwrap();
        let scaled = PointSet::from_points(s.iter().map(|p| p.scale(&t)).collect()).unwrap();
        let b = distance_census(&scaled, &Norm::Polytope(scaled_ball)).unwrap();
        prop_assert_eq!(a.nonparallel_count(), b.nonparallel_count());
        prop_assert_eq!(a.unit_count(), b.unit_count());
    }

    #[test]
    fn antipodality_verdict_symmetric(a in distinct_planar(3, 4), b in distinct_planar(3, 4)) {
        prop_assume!(a.points.iter().all(|p| !b.points.contains(p)));
        let ab = AntipodalFamily::new(vec![a.clone(), b.clone()]).unwrap();
        let ba = AntipodalFamily::new(vec![b, a]).unwrap();
        let x = verify_strict_antipodality(&ab).unwrap();
        let y = verify_strict_antipodality(&ba).unwrap();
        prop_assert_eq!(
            matches!(x, AntipodalityVerdict::Verified(_)),
            matches!(y, AntipodalityVerdict::Verified(_))
        );
        if let AntipodalityVerdict::Verified(ws) = x {
            prop_assert!(ws.iter().all(|w| w.verify(&ab)));
        }
    }

    #[test]
    fn claim3_then_claim1(p in distinct_planar(4, 3), q in distinct_planar(4, 3), seed in any::<u64>()) {
        prop_assume!(p.len() == q.len() && p.len() % 2 == 0);
        let c = convind::extremal::compute_m(&p, &q, DEFAULT_CAP).unwrap().points;
        let w3 = claim3_reduce(&p, &q, &c, seed).unwrap();
        prop_assert!(w3.verify().unwrap());
        let convind::reductions::ReductionWitness::Claim3 { p_halves, q_halves, block, members, .. } = &w3 else {
            unreachable!()
        };
        let ph = p.subset(&p_halves[block.0]);
        let qh = q.subset(&q_halves[block.1]);
        let w1 = claim1_reduce(&ph, &qh, &c.subset(members)).unwrap();
        prop_assert!(w1.verify().unwrap());
        prop_assert!(w1.output_size() >= c.len().div_ceil(4));
        prop_assert!(ph.len() + qh.len() <= p.len());
    }
}

#[test]
fn antipodal_ball_antipode_is_fixed_point_free_involution() {
    for m in 1..=3 {
        let family = antipodal_triple_3d(m).unwrap();
        let b = unit_ball_from_antipodal(&family).unwrap();
        for i in 0..b.vertices().len() {
            let j = b.antipode(i);
            assert_ne!(i, j);
            assert_eq!(b.antipode(j), i);
            assert_eq!(b.vertices()[j], b.vertices()[i].scale(&int(-1)));
        }
        let union = family.union();
        for (x, y) in family.cross_pairs_flat() {
            assert_eq!(gauge(&b, &(&union[y] - &union[x])).unwrap(), int(1));
        }
    }
}
