//! Power functions, their factorization into `xi_{-beta} * eta_beta`, binomial
//! coefficient streams, the constant coefficient `c0` and one-sided inverses of
//! Fredholm Toeplitz operators.

use crate::calculus::{toeplitz_index, HardyExponent};
use crate::circle::CirclePoint;
use crate::error::{Error, Result};
use crate::finite_section::{section_solve, toeplitz_rect};
use crate::quadrature::integrate_adaptive;
use crate::symbol::PCSymbol;
use crate::tolerance::Tolerances;
use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

type C = Complex64;

/// `phi_beta` anchored at `anchor`.
pub fn power_function(beta: C, anchor: CirclePoint) -> PCSymbol {
    PCSymbol::power_arc(beta, anchor)
}

/// Lazily extendable Taylor coefficients of `(1 - z)^gamma`.
#[derive(Debug, Clone)]
pub struct BinomialStream {
    gamma: C,
    coeffs: Vec<C>,
}

impl BinomialStream {
    pub fn new(gamma: C) -> Self {
        BinomialStream {
            gamma,
            coeffs: vec![C::new(1.0, 0.0)],
        }
    }

    pub fn gamma(&self) -> C {
        self.gamma
    }

    pub fn coeff(&mut self, k: usize) -> C {
        while self.coeffs.len() <= k {
            let j = self.coeffs.len() - 1;
            let next = self.coeffs[j] * (j as f64 - self.gamma) / (j as f64 + 1.0);
            self.coeffs.push(next);
        }
        self.coeffs[k]
    }

    pub fn take(&mut self, n: usize) -> Vec<C> {
        if n > 0 {
            self.coeff(n - 1);
        }
        self.coeffs[..n].to_vec()
    }
}

/// Open interval `(lo, hi)` of exponents `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentInterval {
    pub lo: f64,
    pub hi: f64,
}

impl ExponentInterval {
    pub fn contains(&self, p: f64) -> bool {
        p > self.lo && p < self.hi
    }
}

/// `phi_beta = xi_{-beta} eta_beta` with `xi_g(t) = (1 - 1/t)^g`, `eta_g(t) = (1 - t)^g`.
#[derive(Debug, Clone, Serialize)]
pub struct PowerFactorization {
    pub beta: C,
    /// Coefficient of `t^-k` in `xi_{-beta}`.
    pub xi_coeffs: Vec<C>,
    /// Coefficient of `t^k` in `eta_beta`.
    pub eta_coeffs: Vec<C>,
    pub valid_p: Option<ExponentInterval>,
}

/// Exponents with `-(1 - 1/p) < Re beta < 1/p`.
pub fn factorization_window(beta: C) -> Option<ExponentInterval> {
    let r = beta.re;
    let hi = if r > 0.0 {
        1.0 / r
    } else if r < 0.0 {
        1.0 / (1.0 + r)
    } else {
        f64::INFINITY
    };
    if r <= -1.0 || r >= 1.0 || hi <= 1.0 {
        None
    } else {
        Some(ExponentInterval { lo: 1.0, hi })
    }
}

pub fn binomial_streams(beta: C, n: usize) -> Result<PowerFactorization> {
    if n == 0 {
        return Err(Error::PreconditionViolation("stream length must be positive".into()));
    }
    Ok(PowerFactorization {
        beta,
        xi_coeffs: BinomialStream::new(-beta).take(n),
        eta_coeffs: BinomialStream::new(beta).take(n),
        valid_p: factorization_window(beta),
    })
}

/// `xi_g(t) = (1 - 1/t)^g`, principal branch.
pub fn xi(g: C, t: C) -> C {
    (C::new(1.0, 0.0) - t.inv()).powc(g)
}

/// `eta_g(t) = (1 - t)^g`, principal branch.
pub fn eta(g: C, t: C) -> C {
    (C::new(1.0, 0.0) - t).powc(g)
}

/// Largest deviation of `xi_{-beta} eta_beta` from `phi_beta` on `n` points off `t = 1`.
pub fn factorization_residual(beta: C, n: usize) -> Result<f64> {
    let phi = power_function(beta, CirclePoint::ONE);
    let mut worst = 0.0f64;
    for k in 1..=n {
        let theta = std::f64::consts::TAU * k as f64 / (n + 1) as f64;
        let t = C::from_polar(1.0, theta);
        let lhs = xi(-beta, t) * eta(beta, t);
        let rhs = phi.eval_angle(theta, crate::circle::Side::Right, 0.0)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// First `n` coefficients of the product of two power series.
pub fn convolve(x: &[C], y: &[C], n: usize) -> Vec<C> {
    (0..n)
        .map(|m| {
            (0..=m)
                .filter(|&k| k < x.len() && m - k < y.len())
                .map(|k| x[k] * y[m - k])
                .sum()
        })
        .collect()
}

/// Coefficients `0..n` of `P (xi f)` where `xi` is given by its coefficients at
/// `t^0, t^-1, ...` and `f` by its coefficients at `t^0, t^1, ...`.
pub fn project_xi_times(xi: &[C], f: &[C], n: usize) -> Vec<C> {
    (0..n)
        .map(|m| {
            xi.iter()
                .enumerate()
                .filter(|(k, _)| m + k < f.len())
                .map(|(k, x)| x * f[m + k])
                .sum()
        })
        .collect()
}

/// `c0 = sum_k ((beta)_k / k!)^2`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct C0Coefficient {
    pub value: C,
    pub tail_bound: f64,
    pub terms: usize,
}

const C0_FIRST_BLOCK: usize = 1000;
const C0_MAX_LEVELS: usize = 15;

/// Partial sums at `1000 * 2^j` terms, accelerated by repeated Richardson
/// elimination of the tail powers `K^(2 beta - 1 - m)`.
pub fn c0_coefficient(beta: f64, tail_tol: f64) -> Result<C0Coefficient> {
    if !(beta > 0.0 && beta < 0.5) {
        return Err(Error::SeriesDiverges(beta));
    }
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut term = 1.0f64;
    let mut k = 0usize;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut last_bound = f64::INFINITY;
    for level in 0..C0_MAX_LEVELS {
        let target = C0_FIRST_BLOCK << level;
        while k < target {
            term *= (k as f64 + beta) / (k as f64 + 1.0);
            k += 1;
            let x = term * term;
            let t = sum + x;
            if sum.abs() >= x.abs() {
                comp += (sum - t) + x;
            } else {
                comp += (x - t) + sum;
            }
            sum = t;
        }
        let mut row = vec![sum + comp];
        if let Some(prev) = rows.last() {
            for m in 0..prev.len() {
                let f = 2f64.powf(2.0 * beta - 1.0 - m as f64);
                let next = (row[m] - f * prev[m]) / (1.0 - f);
                row.push(next);
            }
        }
        if row.len() >= 3 {
            let n = row.len();
            let bound = (row[n - 1] - row[n - 2]).abs().max((row[n - 1] - rows.last().unwrap()[n - 2]).abs());
            last_bound = bound;
            if bound < tail_tol && level >= 4 {
                return Ok(C0Coefficient {
                    value: C::new(row[n - 1], 0.0),
                    tail_bound: bound,
                    terms: k + 1,
                });
            }
        }
        rows.push(row);
    }
    Err(Error::QuadratureNotConverged {
        index: 0,
        estimate: last_bound,
    })
}

/// `c0 = (1/pi) int_0^pi (2 sin(x/2))^(-2 beta) dx`, with the endpoint singularity
/// removed by `x = u^(1/(1 - 2 beta))`.
pub fn c0_quadrature(beta: f64, tol: f64) -> Result<C0Coefficient> {
    if !(beta > 0.0 && beta < 0.5) {
        return Err(Error::SeriesDiverges(beta));
    }
    let e = 1.0 - 2.0 * beta;
    let top = PI.powf(e);
    let r = integrate_adaptive(
        |u| {
            if u <= 0.0 {
                // limit of x^(-2 beta) dx/du as u -> 0
                return C::new(1.0 / e, 0.0);
            }
            let x = u.powf(1.0 / e);
            let s = (2.0 * (x / 2.0).sin()).powf(-2.0 * beta);
            let jac = u.powf(2.0 * beta / e) / e;
            C::new(s * jac, 0.0)
        },
        0.0,
        top,
        tol * PI,
    );
    if !r.converged {
        return Err(Error::QuadratureNotConverged {
            index: 0,
            estimate: r.error,
        });
    }
    Ok(C0Coefficient {
        value: r.value / PI,
        tail_bound: r.error / PI,
        terms: 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseSide {
    Left,
    Right,
    TwoSided,
}

/// `psi = psi0 t^n` with `T(psi0)` invertible.
#[derive(Debug, Clone)]
pub struct OneSidedInversePlan {
    pub n: i64,
    pub psi: PCSymbol,
    pub psi0: PCSymbol,
    pub side: InverseSide,
}

pub fn one_sided_inverse_plan(psi: &PCSymbol, p: &HardyExponent, tol: &Tolerances) -> Result<OneSidedInversePlan> {
    let idx = toeplitz_index(psi, p, tol)?
        .index()
        .ok_or_else(|| Error::NotFredholm(format!("T(psi) at p = {}", p.p())))?;
    let n = -idx;
    let side = match n.signum() {
        0 => InverseSide::TwoSided,
        1 => InverseSide::Left,
        _ => InverseSide::Right,
    };
    Ok(OneSidedInversePlan {
        n,
        psi: psi.clone(),
        psi0: psi * &PCSymbol::monomial(-n),
        side,
    })
}

/// `T(t^m)` applied to a coefficient vector, truncated to the same length.
fn shift(x: &DVector<C>, m: i64) -> DVector<C> {
    let len = x.len() as i64;
    DVector::from_fn(x.len(), |k, _| {
        let j = k as i64 - m;
        if (0..len).contains(&j) {
            x[j as usize]
        } else {
            C::new(0.0, 0.0)
        }
    })
}

impl OneSidedInversePlan {
    pub fn composition(&self) -> &'static str {
        match self.side {
            InverseSide::Left => "T(t^-n) T^-1(psi0)",
            InverseSide::Right => "T^-1(psi0) T(t^-n)",
            InverseSide::TwoSided => "T^-1(psi0)",
        }
    }

    /// Applies the one-sided inverse through a finite section of `T(psi0)` of
    /// size `rhs.len()`; returns the result and the section-solve residual.
    pub fn apply(&self, rhs: &DVector<C>, tol: &Tolerances) -> Result<(DVector<C>, f64)> {
        if self.n >= 0 {
            let (y, r) = section_solve(&self.psi0, rhs, tol)?;
            Ok((shift(&y, -self.n), r))
        } else {
            let y = shift(rhs, -self.n);
            section_solve(&self.psi0, &y, tol)
        }
    }

    /// Largest deviation from the identity of the one-sided inverse composed with
    /// `T(psi)` on the leading `probes` unit vectors, using sections of size `size`.
    pub fn identity_residual(&self, size: usize, probes: usize, tol: &Tolerances) -> Result<f64> {
        let t = toeplitz_rect(&self.psi, size, size, tol)?;
        let mut worst = 0.0f64;
        for j in 0..probes.min(size) {
            let mut e = DVector::zeros(size);
            e[j] = C::new(1.0, 0.0);
            let out = if self.n >= 0 {
                self.apply(&(&t * &e), tol)?.0
            } else {
                &t * self.apply(&e, tol)?.0
            };
            let lead = size / 4;
            for k in 0..lead {
                worst = worst.max((out[k] - e[k]).norm());
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::Side;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn power_function_limits() {
        assert_eq!(power_function(c(0.0, 0.0), CirclePoint::ONE), PCSymbol::one());
        let phi = power_function(c(0.5, 0.0), CirclePoint::ONE);
        let r = phi.evaluate(CirclePoint::ONE, Side::Right).unwrap();
        let l = phi.evaluate(CirclePoint::ONE, Side::Left).unwrap();
        assert!((r - c(0.0, -1.0)).norm() < 1e-15);
        assert!((l - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn stream_values() {
        let mut s = BinomialStream::new(c(-0.25, 0.0));
        assert!((s.coeff(2) - c(5.0 / 32.0, 0.0)).norm() < 1e-16);
        let mut g = BinomialStream::new(c(-1.0, 0.0));
        assert!(g.take(10).iter().all(|z| *z == c(1.0, 0.0)));
    }

    #[test]
    fn stream_ratio_law() {
        let beta = 0.25;
        let f = binomial_streams(c(beta, 0.0), 51).unwrap();
        for k in 0..50 {
            let ratio = f.xi_coeffs[k + 1] / f.xi_coeffs[k];
            assert!((ratio.re - (k as f64 + beta) / (k as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn xi_semigroup() {
        let q = c(0.25, 0.0);
        let a = BinomialStream::new(q).take(20);
        let ab = BinomialStream::new(q + q).take(20);
        let prod = convolve(&a, &a, 20);
        for k in 0..20 {
            assert!((prod[k] - ab[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn factorization_identity() {
        for beta in [0.25, 0.5] {
            assert!(factorization_residual(c(beta, 0.0), 512).unwrap() < 1e-10);
        }
    }

    #[test]
    fn xi_half_projection() {
        let xi_half = BinomialStream::new(c(0.5, 0.0)).take(64);
        let out = project_xi_times(&xi_half, &[c(1.0, 0.0)], 8);
        assert!((out[0] - c(1.0, 0.0)).norm() < 1e-10);
        assert!(out[1..].iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn window_for_quarter_and_half() {
        let w = factorization_window(c(0.25, 0.0)).unwrap();
        assert!(w.contains(1.5) && w.contains(3.0) && !w.contains(4.5));
        let w = factorization_window(c(0.5, 0.0)).unwrap();
        assert!(w.contains(1.9) && !w.contains(2.1));
        assert!(factorization_window(c(1.0, 0.0)).is_none());
    }

    #[test]
    fn c0_series_and_quadrature() {
        let s = c0_coefficient(0.25, 1e-12).unwrap();
        assert!(s.tail_bound < 1e-12);
        let q = c0_quadrature(0.25, 1e-12).unwrap();
        assert!((s.value - q.value).norm() < 1e-8);
        assert!(s.value.re > 1.0);
        let small = c0_coefficient(1e-6, 1e-12).unwrap();
        assert!((small.value.re - 1.0).abs() < 1e-9);
        assert_eq!(c0_coefficient(0.5, 1e-12).unwrap_err(), Error::SeriesDiverges(0.5));
        assert!(c0_coefficient(-0.1, 1e-12).is_err());
    }

    #[test]
    fn inverse_plans() {
        let tol = Tolerances::default();
        let p = HardyExponent::new(1.5).unwrap();
        let plan = one_sided_inverse_plan(&PCSymbol::monomial(3), &p, &tol).unwrap();
        assert_eq!((plan.n, plan.side), (3, InverseSide::Left));
        assert_eq!(plan.psi0, PCSymbol::one());
        let plan = one_sided_inverse_plan(&PCSymbol::monomial(-1), &p, &tol).unwrap();
        assert_eq!((plan.n, plan.side), (-1, InverseSide::Right));
        let phi = power_function(c(0.25, 0.0), CirclePoint::ONE);
        let plan = one_sided_inverse_plan(&phi, &p, &tol).unwrap();
        assert_eq!((plan.n, plan.side), (0, InverseSide::TwoSided));
    }

    #[test]
    fn inverse_plan_residuals() {
        let tol = Tolerances::default();
        let p = HardyExponent::new(2.0).unwrap();
        let psi = PCSymbol::monomial(2) * (PCSymbol::real(3.0) + PCSymbol::monomial(1));
        let plan = one_sided_inverse_plan(&psi, &p, &tol).unwrap();
        assert_eq!(plan.side, InverseSide::Left);
        assert!(plan.identity_residual(64, 4, &tol).unwrap() < 1e-12);
        let plan = one_sided_inverse_plan(&psi.tilde(), &p, &tol).unwrap();
        assert_eq!(plan.side, InverseSide::Right);
        assert!(plan.identity_residual(64, 4, &tol).unwrap() < 1e-12);
    }
}
