//! Matching pairs `(a, b)` with `a*a~ = b*b~`, their subordinated functions
//! `c = a/b`, `d = b/a~`, and the 2x2 matrix symbol `U(a, b)`.

use crate::circle::Side;
use crate::error::{Error, Result};
use crate::symbol::PCSymbol;
use crate::tolerance::{Tolerances, GRID_SIZE};
use nalgebra::Matrix2;
use num_complex::Complex64;

/// A verified matching pair together with its subordinated functions.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingPair {
    pub a: PCSymbol,
    pub b: PCSymbol,
    pub c: PCSymbol,
    pub d: PCSymbol,
    /// Largest grid deviation of `a*a~ - b*b~`.
    pub residual: f64,
    /// The value of `a*a~` when it is constant on the grid.
    pub normalization: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatchingCheck {
    Yes(MatchingPair),
    No { max_residual: f64 },
}

impl MatchingCheck {
    pub fn pair(self) -> Option<MatchingPair> {
        match self {
            MatchingCheck::Yes(p) => Some(p),
            MatchingCheck::No { .. } => None,
        }
    }
}

/// Maximum of `|f|` over the default grid of `f`, both sides of every point.
pub fn grid_sup(f: &PCSymbol, tol: &Tolerances) -> Result<f64> {
    let mut worst = 0.0f64;
    for (angle, side) in f.grid(GRID_SIZE) {
        worst = worst.max(f.eval_angle(angle, side, tol.invertibility)?.norm());
    }
    Ok(worst)
}

fn ensure_invertible(s: &PCSymbol, name: &str, tol: &Tolerances) -> Result<()> {
    let m = s.min_modulus(tol);
    if m <= tol.invertibility {
        Err(Error::NotInvertible(format!(
            "{name} has minimum modulus {m:.3e} on the grid"
        )))
    } else {
        Ok(())
    }
}

/// Constant value of `s` if its grid values agree within `eps`.
fn constant_value(s: &PCSymbol, eps: f64, tol: &Tolerances) -> Option<Complex64> {
    let grid = s.grid(GRID_SIZE);
    let first = s.eval_angle(grid[0].0, grid[0].1, tol.invertibility).ok()?;
    for (angle, side) in grid {
        let v = s.eval_angle(angle, side, tol.invertibility).ok()?;
        if (v - first).norm() > eps {
            return None;
        }
    }
    Some(first)
}

/// True when `c*c~ = 1` on the grid.
pub fn is_matching_function(c: &PCSymbol, tol: &Tolerances) -> Result<bool> {
    let dev = &(c * &c.tilde()) - &PCSymbol::one();
    Ok(grid_sup(&dev, tol)? < tol.matching)
}

/// Decide whether `(a, b)` satisfies `a*a~ = b*b~` on the grid.
pub fn is_matching_pair(a: &PCSymbol, b: &PCSymbol, tol: &Tolerances) -> Result<MatchingCheck> {
    ensure_invertible(a, "a", tol)?;
    ensure_invertible(b, "b", tol)?;
    let aa = a * &a.tilde();
    let bb = b * &b.tilde();
    let residual = grid_sup(&(&aa - &bb), tol)?;
    if residual >= tol.matching {
        return Ok(MatchingCheck::No {
            max_residual: residual,
        });
    }
    let (c, d) = subordinate(a, b);
    Ok(MatchingCheck::Yes(MatchingPair {
        normalization: constant_value(&aa, tol.matching, tol),
        a: a.clone(),
        b: b.clone(),
        c,
        d,
        residual,
    }))
}

fn subordinate(a: &PCSymbol, b: &PCSymbol) -> (PCSymbol, PCSymbol) {
    (a / b, b / &a.tilde())
}

impl MatchingPair {
    /// The subordinated matching functions `(c, d) = (a/b, b/a~)`.
    pub fn subordinated_pair(&self) -> (PCSymbol, PCSymbol) {
        (self.c.clone(), self.d.clone())
    }

    /// `U(a, b) = [[0, -d], [c, 1/a~]]`.
    pub fn build_u(&self) -> MatrixSymbol {
        MatrixSymbol::new([
            [PCSymbol::real(0.0), -&self.d],
            [self.c.clone(), self.a.tilde().inverse()],
        ])
    }

    /// Group inverse `(1/a, 1/b)`.
    pub fn inverse(&self) -> MatchingPair {
        let a = self.a.inverse();
        let b = self.b.inverse();
        let (c, d) = subordinate(&a, &b);
        MatchingPair {
            a,
            b,
            c,
            d,
            residual: self.residual,
            normalization: self.normalization.map(|v| v.inv()),
        }
    }
}

/// Product `(a1*a2, b1*b2)` of two matching pairs, re-verified on the grid.
pub fn pair_product(p1: &MatchingPair, p2: &MatchingPair, tol: &Tolerances) -> Result<MatchingPair> {
    let a = &p1.a * &p2.a;
    let b = &p1.b * &p2.b;
    match is_matching_pair(&a, &b, tol)? {
        MatchingCheck::Yes(p) => Ok(p),
        MatchingCheck::No { max_residual } => Err(Error::PreconditionViolation(format!(
            "product of matching pairs has residual {max_residual:.3e}"
        ))),
    }
}

/// `U(a, b)` for an arbitrary pair with invertible `a`:
/// `[[a - b*b~/a~, -b/a~], [b~/a~, 1/a~]]`.
pub fn build_u_general(a: &PCSymbol, b: &PCSymbol) -> MatrixSymbol {
    let at_inv = a.tilde().inverse();
    let bt = b.tilde();
    MatrixSymbol::new([
        [a - &(&(b * &bt) * &at_inv), -&(b * &at_inv)],
        [&bt * &at_inv, at_inv],
    ])
}

/// A 2x2 matrix of symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSymbol {
    pub entries: [[PCSymbol; 2]; 2],
}

impl MatrixSymbol {
    pub fn new(entries: [[PCSymbol; 2]; 2]) -> Self {
        MatrixSymbol { entries }
    }

    pub fn eval_angle(&self, angle: f64, side: Side, inv_tol: f64) -> Result<Matrix2<Complex64>> {
        let e = |i: usize, j: usize| self.entries[i][j].eval_angle(angle, side, inv_tol);
        Ok(Matrix2::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?))
    }

    pub fn determinant(&self) -> PCSymbol {
        let [[p, q], [r, s]] = &self.entries;
        &(p * s) - &(q * r)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.entries.iter().flatten().flat_map(|e| e.breakpoints()).collect();
        out.sort_by(f64::total_cmp);
        crate::circle::dedup_angles(out)
    }

    pub fn grid(&self, n: usize) -> Vec<(f64, Side)> {
        let mut angles: Vec<f64> = (0..n).map(|k| std::f64::consts::TAU * k as f64 / n as f64).collect();
        angles.extend(self.breakpoints());
        angles.push(std::f64::consts::PI);
        crate::circle::dedup_angles(angles)
            .into_iter()
            .flat_map(|a| [(a, Side::Left), (a, Side::Right)])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::CirclePoint;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ex1_a() -> PCSymbol {
        PCSymbol::constant(Complex64::from_polar(1.0, FRAC_PI_4))
            * PCSymbol::power_arc(c(0.25, 0.0), CirclePoint::ONE)
    }

    fn ex2_a() -> PCSymbol {
        PCSymbol::piecewise_const(vec![CirclePoint::ONE, CirclePoint::MINUS_ONE], vec![c(1.0, 0.0), c(-1.0, 0.0)])
            .unwrap()
    }

    fn same(x: &PCSymbol, y: &PCSymbol, eps: f64) -> bool {
        grid_sup(&(x - y), &Tolerances::default()).unwrap() < eps
    }

    #[test]
    fn example_one_pair() {
        let tol = Tolerances::default();
        let a = ex1_a();
        let b = &a * &PCSymbol::monomial(1);
        let pair = is_matching_pair(&a, &b, &tol).unwrap().pair().unwrap();
        assert!(same(&pair.c, &PCSymbol::monomial(-1), 1e-14));
        let d = &(&a / &a.tilde()) * &PCSymbol::monomial(1);
        assert!(same(&pair.d, &d, 1e-14));
        let n = pair.normalization.unwrap();
        assert!((n - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn example_two_pair() {
        let tol = Tolerances::default();
        let a = ex2_a();
        let pair = is_matching_pair(&PCSymbol::constant(c(0.0, 1.0)), &a, &tol)
            .unwrap()
            .pair()
            .unwrap();
        assert!(same(&pair.c, &a.scale(c(0.0, -1.0)).inverse(), 1e-14));
        assert!(same(&pair.c, &a.scale(c(0.0, 1.0)), 1e-14));
    }

    #[test]
    fn monomial_pairs() {
        let tol = Tolerances::default();
        let p = is_matching_pair(&PCSymbol::monomial(1), &PCSymbol::one(), &tol)
            .unwrap()
            .pair()
            .unwrap();
        assert!(same(&p.c, &PCSymbol::monomial(1), 1e-15));
        assert!(same(&p.d, &PCSymbol::monomial(1), 1e-15));
        assert!(is_matching_pair(&PCSymbol::monomial(1), &PCSymbol::monomial(2), &tol)
            .unwrap()
            .pair()
            .is_some());
    }

    #[test]
    fn non_matching_reports_residual() {
        let tol = Tolerances::default();
        let a = PCSymbol::real(2.0);
        match is_matching_pair(&a, &PCSymbol::one(), &tol).unwrap() {
            MatchingCheck::No { max_residual } => assert!((max_residual - 3.0).abs() < 1e-12),
            MatchingCheck::Yes(_) => panic!("2 and 1 do not match"),
        }
    }

    #[test]
    fn non_invertible_is_error() {
        let tol = Tolerances::default();
        let a = &PCSymbol::monomial(1) - &PCSymbol::one();
        assert!(matches!(
            is_matching_pair(&a, &PCSymbol::one(), &tol),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn u_is_triangular_and_det_is_cd() {
        let tol = Tolerances::default();
        let a = ex1_a();
        let pair = is_matching_pair(&a, &(&a * &PCSymbol::monomial(1)), &tol)
            .unwrap()
            .pair()
            .unwrap();
        let u = pair.build_u();
        assert!(grid_sup(&u.entries[0][0], &tol).unwrap() == 0.0);
        assert!(same(&u.determinant(), &(&pair.c * &pair.d), 1e-12));
        let general = build_u_general(&pair.a, &pair.b);
        for i in 0..2 {
            for j in 0..2 {
                assert!(same(&general.entries[i][j], &u.entries[i][j], 1e-12));
            }
        }
    }

    #[test]
    fn general_u_for_non_matching() {
        let a = PCSymbol::monomial(2);
        let b = PCSymbol::monomial(1);
        let u = build_u_general(&a, &b);
        for k in 0..64 {
            let theta = 2.0 * PI * k as f64 / 64.0;
            let t = Complex64::from_polar(1.0, theta);
            let m = u.eval_angle(theta, Side::Right, 1e-9).unwrap();
            let (av, bv, at, bt) = (t * t, t, t.inv() * t.inv(), t.inv());
            let want = [[av - bv * bt / at, -bv / at], [bt / at, at.inv()]];
            for i in 0..2 {
                for j in 0..2 {
                    assert!((m[(i, j)] - want[i][j]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn group_structure() {
        let tol = Tolerances::default();
        let a = ex1_a();
        let p = is_matching_pair(&a, &(&a * &PCSymbol::monomial(1)), &tol)
            .unwrap()
            .pair()
            .unwrap();
        let sq = pair_product(&p, &p, &tol).unwrap();
        assert!(sq.residual < 1e-9);
        assert!(same(&sq.c, &PCSymbol::monomial(-2), 1e-12));
        let unit = pair_product(&p, &p.inverse(), &tol).unwrap();
        assert!(same(&unit.a, &PCSymbol::one(), 1e-12));
        assert!(same(&unit.b, &PCSymbol::one(), 1e-12));

        let m = |n| is_matching_pair(&PCSymbol::monomial(n), &PCSymbol::one(), &tol).unwrap().pair().unwrap();
        let mn = pair_product(&m(2), &m(3), &tol).unwrap();
        assert_eq!(mn.a, PCSymbol::monomial(5));
    }

    #[test]
    fn subordinated_functions_match() {
        let tol = Tolerances::default();
        let a = ex1_a();
        let p = is_matching_pair(&a, &(&a * &PCSymbol::monomial(1)), &tol)
            .unwrap()
            .pair()
            .unwrap();
        assert!(is_matching_function(&p.c, &tol).unwrap());
        assert!(is_matching_function(&p.d, &tol).unwrap());
        assert!(same(&(&p.b * &p.c), &p.a, 1e-10));
        assert!(same(&(&p.d * &p.a.tilde()), &p.b, 1e-10));
    }
}
