//! Seeded search for four classes of close points whose cross midpoints
//! are convexly independent. Every verdict is exact.

use convind::forbidden::conjecture_search;
use convind::rational::rat;

fn main() -> convind::Result<()> {
    let single = conjecture_search(1, &rat(1, 10), 2_000, 7)?;
    println!(
        "c = 1: found {}, float margin {:.4}",
        single.found,
        single.best_margin.unwrap_or(f64::NAN)
    );
    let pairs = conjecture_search(2, &rat(1, 10), 4_000, 7)?;
    println!(
        "c = 2, epsilon 1/10: found {}, float margin {:.3e}, classes small {}",
        pairs.found,
        pairs.best_margin.unwrap_or(f64::NAN),
        pairs.diameters_ok
    );
    Ok(())
}
