//! Turning a convexly independent subset of P + Q into midpoint pairs,
//! nonparallel unit distances, and a quarter-size block.

use convind::extremal::{largest_convex_subset_2d, minkowski_sum};
use convind::reductions::{claim3_reduce, equivalence_report, ReductionWitness};
use convind::PointSet;

fn main() -> convind::Result<()> {
    let p = PointSet::from_ints(&[&[0, 0], &[3, 1], &[1, 4]])?;
    let q = PointSet::from_ints(&[&[0, 0], &[2, -1], &[-1, 2]])?;
    let r = equivalence_report(&p, &q)?;
    println!("M(P, Q) = {}", r.m.value);
    println!(
        "E-witness: {} pairs on {} points",
        r.e_witness_pairs, r.e_witness_points
    );
    if let Some(ReductionWitness::Claim2 {
        center,
        unit_pairs,
        ball,
        ..
    }) = &r.claim2
    {
        println!(
            "W-witness: {} unit pairs, reflection center {center}, ball with {} vertices",
            unit_pairs.len(),
            ball.vertices().len()
        );
    }
    println!("chain holds: {}", r.chain_holds);

    let p4 = PointSet::from_ints(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])?;
    let q4 = PointSet::from_ints(&[&[0, 0], &[3, 1], &[1, 3], &[5, 5]])?;
    let c = largest_convex_subset_2d(&minkowski_sum(&p4, &q4)?.sum)?.points;
    for seed in 0..3 {
        let w = claim3_reduce(&p4, &q4, &c, seed)?;
        println!(
            "seed {seed}: |C| = {}, largest block {}",
            w.input_size(),
            w.output_size()
        );
    }
    Ok(())
}
