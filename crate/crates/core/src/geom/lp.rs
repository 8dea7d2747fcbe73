//! Exact revised simplex for programs with very few rows.
//!
//! Every problem solved in this crate has at most four equality rows (the
//! ambient dimension plus one), so the basis inverse is a tiny dense rational
//! matrix while the column count can run into the hundreds. Columns and
//! costs are kept as integers and pricing is done against an integer scaling
//! of the dual vector, which keeps the per-column work to a handful of
//! big-integer products.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{common_denominator, Rational};

/// `min costᵀx  s.t.  A x = rhs, x ≥ 0` with integer data.
#[derive(Clone, Debug)]
pub(crate) struct IntLp {
    pub rows: usize,
    pub cols: Vec<Vec<BigInt>>,
    pub costs: Vec<BigInt>,
    pub rhs: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub(crate) enum LpOutcome {
    /// Farkas ray `y`: `yᵀA_j ≤ 0` for every column and `yᵀrhs > 0`.
    Infeasible {
        farkas: Vec<Rational>,
    },
    Optimal {
        x: Vec<Rational>,
        value: Rational,
    },
    Unbounded,
}

struct Tableau<'a> {
    lp: &'a IntLp,
    flip: Vec<bool>,
    basis: Vec<usize>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
    /// artificial rows whose constraint turned out redundant
    locked: Vec<bool>,
}

impl<'a> Tableau<'a> {
    fn n(&self) -> usize {
        self.lp.cols.len()
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.n()
    }

    fn column(&self, j: usize) -> Vec<Rational> {
        let m = self.lp.rows;
        if self.is_artificial(j) {
            let mut e = vec![Rational::zero(); m];
            e[j - self.n()] = Rational::one();
            e
        } else {
            self.lp.cols[j]
                .iter()
                .zip(&self.flip)
                .map(|(a, &f)| Rational::from_integer(if f { -a } else { a.clone() }))
                .collect()
        }
    }

    fn ftran(&self, col: &[Rational]) -> Vec<Rational> {
        self.binv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(col)
                    .filter(|(_, c)| !c.is_zero())
                    .fold(Rational::zero(), |acc, (b, c)| acc + b * c)
            })
            .collect()
    }

    /// Dual vector `c_Bᵀ B⁻¹` for the given cost function.
    fn duals(&self, cost: &dyn Fn(usize) -> BigInt) -> Vec<Rational> {
        let m = self.lp.rows;
        let mut y = vec![Rational::zero(); m];
        for (r, &j) in self.basis.iter().enumerate() {
            let c = cost(j);
            if c.is_zero() {
                continue;
            }
            let c = Rational::from_integer(c);
            for (k, yk) in y.iter_mut().enumerate() {
                *yk += &c * &self.binv[r][k];
            }
        }
        y
    }

    fn pivot(&mut self, r: usize, j: usize, u: &[Rational]) {
        let m = self.lp.rows;
        let ur = u[r].clone();
        for k in 0..m {
            self.binv[r][k] = &self.binv[r][k] / &ur;
        }
        self.xb[r] = &self.xb[r] / &ur;
        for i in 0..m {
            if i == r || u[i].is_zero() {
                continue;
            }
            let f = u[i].clone();
            for k in 0..m {
                let delta = &f * &self.binv[r][k];
                self.binv[i][k] -= delta;
            }
            let delta = &f * &self.xb[r];
            self.xb[i] -= delta;
        }
        self.basis[r] = j;
    }

    /// Runs simplex iterations for one phase. Returns false if unbounded.
    fn run(&mut self, cost: &dyn Fn(usize) -> BigInt, allow_artificial: bool) -> bool {
        let m = self.lp.rows;
        let n = self.n();
        let mut bland = false;
        loop {
            let y = self.duals(cost);
            let den = common_denominator(y.iter());
            let ynum: Vec<BigInt> = y.iter().map(|v| v.numer() * (&den / v.denom())).collect();
            let in_basis = {
                let mut b = vec![false; n + m];
                for &j in &self.basis {
                    b[j] = true;
                }
                b
            };
            let mut entering: Option<(usize, BigInt)> = None;
            let limit = if allow_artificial { n + m } else { n };
            for j in 0..limit {
                if in_basis[j] {
                    continue;
                }
                // scaled reduced cost: den * c_j - ynum · A_j (rows flipped)
                let mut rc = cost(j) * &den;
                if j >= n {
                    let k = j - n;
                    rc -= &ynum[k];
                } else {
                    for (k, a) in self.lp.cols[j].iter().enumerate() {
                        if a.is_zero() || ynum[k].is_zero() {
                            continue;
                        }
                        if self.flip[k] {
                            rc += &ynum[k] * a;
                        } else {
                            rc -= &ynum[k] * a;
                        }
                    }
                }
                if rc.is_negative() {
                    match &entering {
                        None => entering = Some((j, rc)),
                        Some((_, best)) if !bland && rc < *best => entering = Some((j, rc)),
                        _ => {}
                    }
                    if bland {
                        break;
                    }
                }
            }
            let Some((j, _)) = entering else {
                return true;
            };
            let u = self.ftran(&self.column(j));
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..m {
                if !u[r].is_positive() || self.locked[r] {
                    continue;
                }
                let ratio = &self.xb[r] / &u[r];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, ratio)) = leave else {
                return false;
            };
            bland = ratio.is_zero();
            self.pivot(r, j, &u);
        }
    }
}

impl IntLp {
    pub fn solve(&self) -> LpOutcome {
        let m = self.rows;
        let n = self.cols.len();
        let flip: Vec<bool> = self.rhs.iter().map(Signed::is_negative).collect();
        let mut identity = vec![vec![Rational::zero(); m]; m];
        for (i, row) in identity.iter_mut().enumerate() {
            row[i] = Rational::one();
        }
        let xb = self
            .rhs
            .iter()
            .map(|b| Rational::from_integer(b.abs()))
            .collect();
        let mut t = Tableau {
            lp: self,
            flip,
            basis: (n..n + m).collect(),
            binv: identity,
            xb,
            locked: vec![false; m],
        };

        let phase1 = |j: usize| {
            if j >= n {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        };
        t.run(&phase1, false);
        let infeas: Rational = t
            .basis
            .iter()
            .zip(&t.xb)
            .filter(|(&j, _)| j >= n)
            .fold(Rational::zero(), |acc, (_, x)| acc + x);
        if infeas.is_positive() {
            let y = t.duals(&phase1);
            let farkas = y
                .into_iter()
                .zip(&t.flip)
                .map(|(v, &f)| if f { -v } else { v })
                .collect();
            return LpOutcome::Infeasible { farkas };
        }

        // drive zero-level artificials out of the basis
        for r in 0..m {
            if t.basis[r] < n {
                continue;
            }
            let in_basis: Vec<usize> = t.basis.clone();
            let mut replaced = false;
            for j in 0..n {
                if in_basis.contains(&j) {
                    continue;
                }
                let u = t.ftran(&t.column(j));
                if !u[r].is_zero() {
                    t.pivot(r, j, &u);
                    replaced = true;
                    break;
                }
            }
            if !replaced {
                t.locked[r] = true;
            }
        }

        let costs = &self.costs;
        let phase2 = |j: usize| {
            if j >= n {
                BigInt::zero()
            } else {
                costs[j].clone()
            }
        };
        if self.costs.iter().any(|c| !c.is_zero()) && !t.run(&phase2, false) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); n];
        for (r, &j) in t.basis.iter().enumerate() {
            if j < n {
                x[j] = t.xb[r].clone();
            }
        }
        let value = x
            .iter()
            .zip(&self.costs)
            .fold(Rational::zero(), |acc, (xi, c)| {
                acc + xi * Rational::from_integer(c.clone())
            });
        LpOutcome::Optimal { x, value }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_optimum() {
        // min -x1 - x2  s.t. x1 + 2 x2 + s1 = 4, 3 x1 + x2 + s2 = 6
        let lp = IntLp {
            rows: 2,
            cols: vec![b(&[1, 3]), b(&[2, 1]), b(&[1, 0]), b(&[0, 1])],
            costs: b(&[-1, -1, 0, 0]),
            rhs: b(&[4, 6]),
        };
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(-14, 5));
                assert_eq!(x[0], rat(8, 5));
                assert_eq!(x[1], rat(6, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_has_farkas_ray() {
        // x1 + x2 = -1 with x ≥ 0 is infeasible
        let lp = IntLp {
            rows: 1,
            cols: vec![b(&[1]), b(&[1])],
            costs: b(&[0, 0]),
            rhs: b(&[-1]),
        };
        match lp.solve() {
            LpOutcome::Infeasible { farkas } => {
                assert!(farkas[0] < int(0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbounded_detected() {
        let lp = IntLp {
            rows: 1,
            cols: vec![b(&[1]), b(&[-1])],
            costs: b(&[0, -1]),
            rhs: b(&[1]),
        };
        assert!(matches!(lp.solve(), LpOutcome::Unbounded));
    }

    #[test]
    fn redundant_rows() {
        // two copies of the same row
        let lp = IntLp {
            rows: 2,
            cols: vec![b(&[1, 1]), b(&[1, 1])],
            costs: b(&[1, 2]),
            rhs: b(&[3, 3]),
        };
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(3)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
