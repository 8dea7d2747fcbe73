//! Grid covering: a dense subset of small diameter, under the Euclidean
//! norm and under a polytope norm.

use convind::constructions::UnitBallCertificate;
use convind::norms::{covering_extract, gauge, Norm};
use convind::rational::rat;
use convind::{ExactPoint, PointSet};

fn main() -> convind::Result<()> {
    let line = PointSet::from_ints(&[
        &[0, 0],
        &[1, 0],
        &[2, 0],
        &[3, 0],
        &[4, 0],
        &[5, 0],
        &[6, 0],
        &[7, 0],
    ])?;
    for lambda in [rat(1, 4), rat(1, 2), rat(3, 4)] {
        let c = covering_extract(&line, &lambda, &Norm::Euclidean)?;
        println!(
            "lambda {lambda}: {} of {} points in one cell, {} cells, verified {}",
            c.subset.len(),
            line.len(),
            c.cells_used,
            c.verify(line.len())
        );
    }

    let diamond = UnitBallCertificate::new(PointSet::from_ints(&[
        &[1, 0],
        &[0, 1],
        &[-1, 0],
        &[0, -1],
    ])?)?;
    println!(
        "\ndiamond gauge of (1, 1): {}",
        gauge(&diamond, &ExactPoint::from_ints(&[1, 1]))?
    );
    let c = covering_extract(&line, &rat(1, 2), &Norm::Polytope(diamond))?;
    println!(
        "diamond norm, lambda 1/2: subset {:?}, diameter {}",
        c.subset, c.subset_diameter
    );
    Ok(())
}
