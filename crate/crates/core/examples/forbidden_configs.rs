//! Five classes of two points never have convexly independent cross
//! midpoints; five points in convex position always have dependent midpoints.

use convind::forbidden::{
    halman5_check, proof_path_extract, random_independent_five, refute_k22222, FivePairConfig,
};
use convind::{ExactPoint, PointSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> convind::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = FivePairConfig::random(&mut rng);
    let r = refute_k22222(&cfg)?;
    let (a, b) = r.generators[r.violation.index];
    println!("midpoint of {a:?}-{b:?} is a convex combination of:");
    for c in &r.violation.coefficients {
        println!("  {} x midpoint {}", c.weight, c.index);
    }

    let pts = random_independent_five(&mut rng);
    let h = halman5_check(&pts)?;
    println!(
        "\nfive independent points, midpoints dependent: {}",
        h.holds()
    );

    let mut classes: Vec<PointSet> = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]
        .iter()
        .map(|c| PointSet::from_ints(&[c]))
        .collect::<convind::Result<_>>()?;
    classes.push(PointSet::new(
        3,
        vec![
            ExactPoint::from_ratios(&[(0, 1), (0, 1), (-1, 4)]),
            ExactPoint::from_ratios(&[(0, 1), (0, 1), (1, 4)]),
        ],
    )?);
    let trace = proof_path_extract(&classes)?;
    println!(
        "\nlargest tetrahedron {:?}, 6·volume {}",
        trace.tetrahedron, trace.volume6
    );
    if let Some(ray) = &trace.ray_step {
        println!(
            "ray exits facet {:?} at {} (s = {})",
            ray.facet, ray.exit_point, ray.parameter
        );
    }
    Ok(())
}
