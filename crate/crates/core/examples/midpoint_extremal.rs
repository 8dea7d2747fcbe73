//! Exact maxima on small instances: convex subsets, midpoint pairs,
//! Minkowski sums and concyclic midpoints.

use convind::extremal::{
    compute_e, compute_e_circ, compute_m, largest_convex_subset_2d,
    largest_convex_subset_bruteforce, DEFAULT_CAP,
};
use convind::PointSet;

fn main() -> convind::Result<()> {
    let grid = PointSet::from_ints(&[
        &[0, 0],
        &[1, 0],
        &[2, 0],
        &[0, 1],
        &[1, 1],
        &[2, 1],
        &[0, 2],
        &[1, 2],
        &[2, 2],
    ])?;
    let dp = largest_convex_subset_2d(&grid)?;
    let bf = largest_convex_subset_bruteforce(&grid, DEFAULT_CAP)?;
    println!("3x3 grid: DP {} / brute force {}", dp.value, bf.value);
    for p in dp.points.iter() {
        println!("  {p}");
    }

    let hexagon =
        PointSet::from_ints(&[&[2, 0], &[1, 2], &[-1, 2], &[-2, 0], &[-1, -2], &[1, -2]])?;
    let e = compute_e(&hexagon, DEFAULT_CAP)?;
    println!(
        "hexagon: E = {} with pairs {:?}",
        e.value,
        e.pairs.as_deref().unwrap_or_default()
    );

    let tri = PointSet::from_ints(&[&[0, 0], &[2, 0], &[0, 2]])?;
    let m = compute_m(&tri, &tri, DEFAULT_CAP)?;
    println!("triangle + triangle: M = {}", m.value);

    let ec = compute_e_circ(&hexagon, DEFAULT_CAP)?;
    if let Some(c) = &ec.circle {
        println!(
            "hexagon: E-circ = {} on circle center {} r² = {}",
            ec.value, c.center, c.radius_squared
        );
    }
    Ok(())
}
