//! Three rational circle arcs on cube edges whose 3k² cross midpoints are
//! certified to be in strictly convex position.

use convind::constructions::{verify_cube_arc, CubeArcConfig, DEFAULT_HALVINGS};

fn main() -> convind::Result<()> {
    for k in 1..=6 {
        let v = verify_cube_arc(&CubeArcConfig::with_default_delta(k), DEFAULT_HALVINGS)?;
        println!(
            "k = {k}: {} points, {} certified midpoints (3k² = {}), delta = {}, re-verified: {}",
            v.arc.points.len(),
            v.midpoint_count(),
            3 * k * k,
            v.arc.config.delta,
            v.verify()
        );
    }
    let v = verify_cube_arc(&CubeArcConfig::with_default_delta(2), 0)?;
    println!("\nk = 2 arc points:");
    for (p, arc) in v.arc.points.iter().zip(&v.arc.arc_of) {
        println!("  arc {arc}: {p}");
    }
    Ok(())
}
