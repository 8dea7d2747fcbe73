//! Strictly antipodal triples in R³ and the unit-distance census under the
//! polytope norm spanned by their cross differences.

use convind::constructions::{antipodal_triple_3d, unit_ball_from_antipodal, AntipodalFamily};
use convind::norms::{
    distance_census, theorem3_census, verify_strict_antipodality, AntipodalityVerdict, Norm,
};
use convind::PointSet;

fn main() -> convind::Result<()> {
    println!(" m  points  unit  diameter  nonparallel  ball vertices  unit/all");
    for m in 1..=5 {
        let r = theorem3_census(m)?;
        println!(
            "{m:>2}  {:>6}  {:>4}  {:>8}  {:>11}  {:>13}  {:.3}",
            r.points,
            r.unit_pairs,
            r.diameter_pairs,
            r.nonparallel_unit_pairs,
            r.ball_vertices,
            r.ratio
        );
    }

    let fam = antipodal_triple_3d(3)?;
    let ball = unit_ball_from_antipodal(&fam)?;
    let census = distance_census(&fam.union(), &Norm::Polytope(ball))?;
    println!("\nm = 3 diameter (gauge): {}", census.diameter_value);

    let collinear = AntipodalFamily::new(vec![
        PointSet::from_ints(&[&[0, 0]])?,
        PointSet::from_ints(&[&[1, 0]])?,
        PointSet::from_ints(&[&[2, 0]])?,
    ])?;
    if let AntipodalityVerdict::Counterexample { p, q, .. } =
        verify_strict_antipodality(&collinear)?
    {
        println!("collinear triple fails at pair {p:?} - {q:?}");
    }
    Ok(())
}
