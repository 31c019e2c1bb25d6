//! Reference matching pairs used by the regression suites.

use crate::circle::CirclePoint;
use crate::matching::{is_matching_pair, MatchingPair};
use crate::symbol::PCSymbol;
use crate::tolerance::Tolerances;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn verified(a: PCSymbol, b: PCSymbol) -> MatchingPair {
    is_matching_pair(&a, &b, &Tolerances::default())
        .ok()
        .and_then(|m| m.pair())
        .expect("catalog pairs satisfy the matching condition")
}

/// `a(e^{iz}) = e^{iz/4}` on `(0, 2 pi)`, with a single jump at `1`.
pub fn quarter_power() -> PCSymbol {
    PCSymbol::constant(Complex64::from_polar(1.0, FRAC_PI_4)) * PCSymbol::power_arc(c(0.25, 0.0), CirclePoint::ONE)
}

/// `1` on the open upper half circle, `-1` on the lower one.
pub fn half_sign() -> PCSymbol {
    PCSymbol::piecewise_const(vec![CirclePoint::ONE, CirclePoint::MINUS_ONE], vec![c(1.0, 0.0), c(-1.0, 0.0)])
        .expect("valid breaks")
}

/// `1` on `Re t >= 0`, `-1` on `Re t < 0`.
pub fn right_sign() -> PCSymbol {
    PCSymbol::piecewise_const(
        vec![CirclePoint::new(FRAC_PI_2), CirclePoint::new(3.0 * FRAC_PI_2)],
        vec![c(-1.0, 0.0), c(1.0, 0.0)],
    )
    .expect("valid breaks")
}

/// `(a, a t^n)` with `a` the quarter power.
pub fn quarter_power_pair(n: i64) -> MatchingPair {
    let a = quarter_power();
    let b = &a * &PCSymbol::monomial(n);
    verified(a, b)
}

/// `(i, a)` with `a` the half-circle sign; `T(i) +- H(a) = iI +- H(a)`.
pub fn half_sign_pair() -> MatchingPair {
    verified(PCSymbol::constant(c(0.0, 1.0)), half_sign())
}

/// `(a, a t)` with `a` the right half-plane sign.
pub fn right_sign_pair() -> MatchingPair {
    let a = right_sign();
    let b = &a * &PCSymbol::monomial(1);
    verified(a, b)
}

/// Polynomials lying in `ker(T(a) + H(a t^n))` (first) and `ker(T(a) - H(a t^n))`
/// (second), as coefficient vectors in `1, t, t^2, ...`.
pub fn monomial_shift_kernel_basis(n: usize) -> (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>) {
    let binomial = |i: usize, j: usize, sj: f64| -> Vec<Complex64> {
        let mut v = vec![c(0.0, 0.0); i.max(j) + 1];
        v[i] += c(1.0, 0.0);
        v[j] += c(sj, 0.0);
        v
    };
    let m = n / 2;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    if n % 2 == 1 {
        let mut t_m = vec![c(0.0, 0.0); m + 1];
        t_m[m] = c(1.0, 0.0);
        minus.push(t_m);
        for k in 1..=m {
            plus.push(binomial(m + k, m - k, -1.0));
            minus.push(binomial(m + k, m - k, 1.0));
        }
    } else {
        for k in 0..m {
            plus.push(binomial(m - k - 1, m + k, -1.0));
            minus.push(binomial(m - k - 1, m + k, 1.0));
        }
    }
    (plus, minus)
}
