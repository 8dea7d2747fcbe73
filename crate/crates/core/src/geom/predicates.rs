//! Exact predicates and small dense linear algebra over the rationals.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::point::ExactPoint;
use crate::error::{Error, Result};
use crate::rational::{common_denominator, Rational};

/// Sign of the orientation determinant of `d + 1` points in R^d.
///
/// Returns `+1` for a positively oriented simplex, `-1` for negative and `0`
/// when the points are affinely dependent.
pub fn orient(simplex: &[ExactPoint]) -> Result<i32> {
    let d = simplex.len().saturating_sub(1);
    if d == 0 {
        return Err(Error::InvalidInput(
            "orient needs at least two points".into(),
        ));
    }
    for p in simplex {
        p.check_dim(d)?;
    }
    let rows: Vec<Vec<Rational>> = simplex[1..]
        .iter()
        .map(|p| (p - &simplex[0]).coords)
        .collect();
    Ok(sign(&determinant(rows)))
}

/// Planar orientation of `(a, b, c)`: `+1` for a left turn.
pub fn orient2(a: &ExactPoint, b: &ExactPoint, c: &ExactPoint) -> i32 {
    let ab = b - a;
    let ac = c - a;
    sign(&(&ab.coords[0] * &ac.coords[1] - &ab.coords[1] * &ac.coords[0]))
}

pub(crate) fn orient2_int(a: &[BigInt], b: &[BigInt], c: &[BigInt]) -> i32 {
    let v = (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0]);
    sign_int(&v)
}

pub fn sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

pub(crate) fn sign_int(r: &BigInt) -> i32 {
    match r.cmp(&BigInt::zero()) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    }
}

/// Determinant by Gaussian elimination with exact pivots.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::from_integer(1.into());
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let delta = &f * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[ExactPoint]) -> usize {
    let mut m: Vec<Vec<Rational>> = vectors.iter().map(|v| v.coords.clone()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(piv, r);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            for k in c..cols {
                let delta = &f * &m[r][k];
                m[i][k] -= delta;
            }
        }
        r += 1;
    }
    r
}

/// Solves the square system `a x = b`; `None` if singular.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        b.swap(piv, col);
        let p = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &f * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Center of the circle through three non-collinear planar points.
pub fn circumcenter(a: &ExactPoint, b: &ExactPoint, c: &ExactPoint) -> Option<ExactPoint> {
    let two = Rational::from_integer(2.into());
    let ab = b - a;
    let ac = c - a;
    let rows = vec![
        ab.coords.iter().map(|x| x * &two).collect(),
        ac.coords.iter().map(|x| x * &two).collect(),
    ];
    let rhs = vec![b.norm2() - a.norm2(), c.norm2() - a.norm2()];
    solve(rows, rhs).map(ExactPoint::new)
}

/// Primitive integer direction of `v`, normalized so the first nonzero entry
/// is positive. Two segments are parallel iff these agree.
pub fn canonical_direction(v: &ExactPoint) -> Result<Vec<BigInt>> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let l = common_denominator(v.coords.iter());
    let mut ints: Vec<BigInt> = v
        .coords
        .iter()
        .map(|c| c.numer() * (&l / c.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    for x in &mut ints {
        *x /= &g;
    }
    let first = ints
        .iter()
        .find(|x| !x.is_zero())
        .cloned()
        .unwrap_or_default();
    if first.is_negative() {
        for x in &mut ints {
            *x = -&*x;
        }
    }
    Ok(ints)
}

/// Barycentric coordinates of `p` with respect to a full-dimensional simplex
/// of `d + 1` vertices; `None` if the simplex is degenerate.
pub fn barycentric(simplex: &[ExactPoint], p: &ExactPoint) -> Option<Vec<Rational>> {
    let d = p.dim();
    let base = &simplex[0];
    // columns are v_i - v_0
    let a: Vec<Vec<Rational>> = (0..d)
        .map(|r| {
            (1..=d)
                .map(|i| &simplex[i].coords[r] - &base.coords[r])
                .collect()
        })
        .collect();
    let rhs = (p - base).coords;
    let mu = solve(a, rhs)?;
    let mut lam = Vec::with_capacity(d + 1);
    let s: Rational = mu.iter().fold(Rational::zero(), |acc, x| acc + x);
    lam.push(Rational::from_integer(1.into()) - s);
    lam.extend(mu);
    Some(lam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn p(c: &[i64]) -> ExactPoint {
        ExactPoint::from_ints(c)
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(&[p(&[0, 0]), p(&[1, 0]), p(&[0, 1])]).unwrap(), 1);
        assert_eq!(orient(&[p(&[0, 0]), p(&[1, 0]), p(&[2, 0])]).unwrap(), 0);
        assert_eq!(orient(&[p(&[0, 0]), p(&[0, 1]), p(&[1, 0])]).unwrap(), -1);
        let tet = [p(&[0, 0, 0]), p(&[1, 0, 0]), p(&[0, 1, 0]), p(&[0, 0, 1])];
        assert_eq!(orient(&tet).unwrap(), 1);
        assert!(orient(&[p(&[0, 0]), p(&[1, 0, 0]), p(&[0, 1])]).is_err());
    }

    #[test]
    fn canonical_direction_examples() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let v = ExactPoint::new(vec![rat(2, 3), rat(-4, 3)]);
        assert_eq!(canonical_direction(&v).unwrap(), b(&[1, -2]));
        assert_eq!(canonical_direction(&p(&[0, -5])).unwrap(), b(&[0, 1]));
        assert_eq!(
            canonical_direction(&p(&[-2, 4, -6])).unwrap(),
            b(&[1, -2, 3])
        );
        assert!(matches!(
            canonical_direction(&p(&[0, 0])),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn circumcenter_of_right_triangle() {
        let c = circumcenter(&p(&[0, 0]), &p(&[2, 0]), &p(&[0, 2])).unwrap();
        assert_eq!(c, p(&[1, 1]));
        assert!(circumcenter(&p(&[0, 0]), &p(&[1, 0]), &p(&[2, 0])).is_none());
    }

    #[test]
    fn barycentric_centroid() {
        let tri = [p(&[0, 0]), p(&[3, 0]), p(&[0, 3])];
        let lam = barycentric(&tri, &p(&[1, 1])).unwrap();
        assert_eq!(lam, vec![rat(1, 3), rat(1, 3), rat(1, 3)]);
        assert_eq!(
            determinant(vec![vec![int(2), int(1)], vec![int(4), int(2)]]),
            int(0)
        );
    }
}
