//! Identity suites (`verify`) and reference regressions (`selftest`).

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::f64::consts::PI;
use th_core::analyzer::{classify, AnalyzerOptions, Classification, FredholmReport};
use th_core::calculus::{arc, toeplitz_index, u_grid, u_to_y, weight_functions, HardyExponent};
use th_core::catalog::{half_sign_pair, monomial_shift_kernel_basis, quarter_power, quarter_power_pair, right_sign_pair};
use th_core::finite_section::{apply_operator, block_assembly, identity7_error, laurent_ops, laurent_section, verify_product_identities};
use th_core::laurent::LaurentPoly;
use th_core::wiener_hopf::{binomial_streams, c0_coefficient, c0_quadrature, factorization_residual};
use th_core::{PCSymbol, Result, Tolerances};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn below(name: &str, value: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            passed: value < tolerance,
            value,
            tolerance,
            detail: String::new(),
        }
    }

    fn holds(name: &str, passed: bool, detail: String) -> Check {
        Check {
            name: name.into(),
            passed,
            value: if passed { 0.0 } else { 1.0 },
            tolerance: 0.5,
            detail,
        }
    }

    fn from_result(name: &str, r: Result<Check>) -> Check {
        r.unwrap_or_else(|e| Check::holds(name, false, format!("error: {e}")))
    }
}

/// Fixed-width pass/fail table.
pub fn render_table(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        out.push_str(&format!(
            "{:<44} {:<4} value={:.3e} tol={:.1e}{}{}\n",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.value,
            c.tolerance,
            if c.detail.is_empty() { "" } else { "  " },
            c.detail
        ));
    }
    out
}

/// Random Laurent polynomial with exponents in `[-deg, deg]`.
pub fn random_band_limited(rng: &mut StdRng, deg: i64) -> PCSymbol {
    let lo = rng.gen_range(-deg..=0);
    let hi = rng.gen_range(0..=deg);
    let coeffs = (lo..=hi)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    LaurentPoly::new(lo, coeffs).to_symbol()
}

pub const IDENTITY_PAIRS: usize = 50;
pub const IDENTITY_WINDOW: usize = 16;
pub const IDENTITY_TOL: f64 = 1e-12;

fn identity_checks(seed: u64, tol: &Tolerances) -> Result<Vec<Check>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut prod, mut flip, mut diag, mut proj, mut seven) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..IDENTITY_PAIRS {
        let a = random_band_limited(&mut rng, 6);
        let b = random_band_limited(&mut rng, 6);
        prod = prod.max(verify_product_identities(&a, &b, IDENTITY_WINDOW)?);
        let blk = block_assembly(&a, &b, IDENTITY_WINDOW, tol)?;
        flip = flip.max(blk.flip_form_error);
        diag = diag.max(blk.identity3_error);
        proj = proj.max(blk.projection_form_error);
        let ops = laurent_ops(IDENTITY_WINDOW);
        let ma = laurent_section(&a, IDENTITY_WINDOW, tol)?.matrix;
        seven = seven.max(identity7_error(&ma, &ops.p));
    }
    Ok(vec![
        Check::below("product identities T(ab), H(ab)", prod, IDENTITY_TOL),
        Check::below("block operator flip form", flip, IDENTITY_TOL),
        Check::below("block diagonalization", diag, IDENTITY_TOL),
        Check::below("block projection form", proj, IDENTITY_TOL),
        Check::below("aP + Q factorization", seven, IDENTITY_TOL),
    ])
}

fn weight_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut limits_exact = true;
    let mut parity = 0.0f64;
    let mut strict = true;
    let mut lower_half = true;
    let grid: Vec<f64> = u_grid()[1..u_grid().len() - 1].iter().map(|&u| u_to_y(u)).collect();
    for p in [1.2, 2.0, 4.0] {
        let hp = HardyExponent::new(p)?;
        let (nm, hm) = weight_functions(&hp, f64::NEG_INFINITY)?;
        let (np, hpos) = weight_functions(&hp, f64::INFINITY)?;
        limits_exact &= nm == Complex64::new(0.0, 0.0)
            && np == Complex64::new(1.0, 0.0)
            && hm == Complex64::new(0.0, 0.0)
            && hpos == Complex64::new(0.0, 0.0);
        let bound = 1.0 / (PI / p).sin();
        for &y in &grid {
            let (_, h) = weight_functions(&hp, y)?;
            let (_, hr) = weight_functions(&hp, -y)?;
            parity = parity.max((h.re + hr.re).abs()).max((h.im - hr.im).abs());
            lower_half &= h.im < 0.0;
            if y != 0.0 {
                strict &= h.im.abs() < bound;
            } else {
                strict &= (h.im.abs() - bound).abs() < 1e-12;
            }
        }
    }
    out.push(Check::holds("weights exact at +-inf", limits_exact, String::new()));
    out.push(Check::below("h parity (Re odd, Im even)", parity, 1e-12));
    out.push(Check::holds("|Im h| bound strict off y = 0", strict, String::new()));
    out.push(Check::holds("Im h < 0 for finite y", lower_half, String::new()));

    // Inscribed angle of [1, i] from interior points of the p = 4 arc.
    let hp = HardyExponent::new(4.0)?;
    let (u, w) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
    let mut angle_err = 0.0f64;
    for y in [-1.0, -0.3, 0.0, 0.4, 1.2] {
        let (nu, _) = weight_functions(&hp, y)?;
        let z = u * (1.0 - nu) + w * nu;
        let ang = ((u - z) / (w - z)).arg().abs();
        angle_err = angle_err.max((ang - 2.0 * PI / 4.0).abs());
    }
    out.push(Check::below("arc inscribed angle, p = 4", angle_err, 1e-9));

    let hp = HardyExponent::new(2.0)?;
    let curve = arc(Complex64::new(-0.3, 0.7), Complex64::new(1.1, -0.2), &hp, 257)?;
    let dir = Complex64::new(1.4, -0.9);
    let col = curve
        .samples
        .iter()
        .map(|s| ((s.value - Complex64::new(-0.3, 0.7)) / dir).im.abs())
        .fold(0.0, f64::max);
    out.push(Check::below("arc collinear at p = 2", col, 1e-12));
    Ok(out)
}

fn wiener_hopf_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for beta in [0.25, 0.5] {
        out.push(Check::below(
            &format!("xi_-b eta_b = phi_b, b = {beta}"),
            factorization_residual(Complex64::new(beta, 0.0), 512)?,
            1e-10,
        ));
    }
    let f = binomial_streams(Complex64::new(0.25, 0.0), 51)?;
    let ratio = (0..50)
        .map(|k| (f.xi_coeffs[k + 1] / f.xi_coeffs[k] - (k as f64 + 0.25) / (k as f64 + 1.0)).norm())
        .fold(0.0, f64::max);
    out.push(Check::below("binomial stream ratio law", ratio, 1e-12));
    Ok(out)
}

/// Identity suites; every check is deterministic for a given seed.
pub fn verify_suite(seed: u64, tol: &Tolerances) -> Vec<Check> {
    let mut out = Vec::new();
    match identity_checks(seed, tol) {
        Ok(v) => out.extend(v),
        Err(e) => out.push(Check::holds("identity suite", false, format!("error: {e}"))),
    }
    match weight_checks() {
        Ok(v) => out.extend(v),
        Err(e) => out.push(Check::holds("weight suite", false, format!("error: {e}"))),
    }
    match wiener_hopf_checks() {
        Ok(v) => out.extend(v),
        Err(e) => out.push(Check::holds("factorization suite", false, format!("error: {e}"))),
    }
    out
}

fn expect_class(name: &str, r: &FredholmReport, sign: f64, want: Classification) -> Check {
    let got = r.record(sign).classification;
    Check::holds(name, got == want, format!("{got:?}"))
}

fn selftest_checks(opts: &AnalyzerOptions) -> Vec<Check> {
    let tol = &opts.tolerances;
    let hp = |p: f64| HardyExponent::new(p).expect("valid exponent");
    let mut out = Vec::new();

    for n in -5i64..=5 {
        let name = format!("ind T(t^{n}) = {}", -n);
        out.push(Check::from_result(&name, (|| {
            let k = toeplitz_index(&PCSymbol::monomial(n), &hp(1.7), tol)?.index();
            Ok(Check::holds(&name, k == Some(-n), format!("{k:?}")))
        })()));
    }

    let q1 = quarter_power_pair(1);
    for (p, want) in [(1.5, Some(-1)), (3.0, Some(-2)), (2.0, None)] {
        let name = format!("quarter power: ind T(d) at p = {p}");
        out.push(Check::from_result(&name, (|| {
            let k = toeplitz_index(&q1.d, &hp(p), tol)?.index();
            Ok(Check::holds(&name, k == want, format!("{k:?}")))
        })()));
    }
    let name = "quarter power (a, at): classification";
    out.push(Check::from_result(name, (|| {
        let r15 = classify(&q1, &hp(1.5), opts)?;
        let r3 = classify(&q1, &hp(3.0), opts)?;
        let r2 = classify(&q1, &hp(2.0), opts)?;
        let ok = r15.plus.classification == Classification::Invertible
            && r3.plus.classification == Classification::LeftInvertible
            && r3.plus.cokernel_dim == Some(1)
            && [&r15, &r2, &r3]
                .iter()
                .all(|r| r.minus.index == Some(0) && r.minus.classification == Classification::NotOneSidedInvertible);
        Ok(Check::holds(name, ok, String::new()))
    })()));
    for n in [2usize, 3] {
        let name = format!("kernel basis of T(a) +- H(a t^{n})");
        out.push(Check::from_result(&name, (|| {
            let a = quarter_power();
            let b = &a * &PCSymbol::monomial(n as i64);
            let (plus, minus) = monomial_shift_kernel_basis(n);
            let mut worst = 0.0f64;
            for (sign, basis) in [(1.0, plus), (-1.0, minus)] {
                for v in basis {
                    let r = apply_operator(&a, &b, sign, &v, 256, tol)?;
                    worst = worst.max(r.iter().map(|z| z.norm()).fold(0.0, f64::max));
                }
            }
            Ok(Check::below(&name, worst, 1e-10))
        })()));
    }

    let h = half_sign_pair();
    for p in [1.5, 3.0] {
        let name = format!("iI - H(a), half-circle sign, p = {p}");
        out.push(Check::from_result(&name, (|| {
            let r = classify(&h, &hp(p), opts)?;
            Ok(expect_class(&name, &r, -1.0, Classification::Invertible))
        })()));
    }
    let name = "iI + H(a): |index| = 2 on both sides of 2";
    out.push(Check::from_result(name, (|| {
        let lo = classify(&h, &hp(1.5), opts)?.plus.index;
        let hi = classify(&h, &hp(3.0), opts)?.plus.index;
        Ok(Check::holds(name, lo == Some(2) && hi == Some(-2), format!("{lo:?}, {hi:?}")))
    })()));

    let q = quarter_power_pair(-1);
    let name = "c0 series vs quadrature";
    out.push(Check::from_result(name, (|| {
        let s = c0_coefficient(0.25, 1e-12)?;
        let qd = c0_quadrature(0.25, 1e-12)?;
        Ok(Check::below(name, (s.value - qd.value).norm(), 1e-8))
    })()));
    for p in [1.5, 3.0] {
        let name = format!("quarter power (a, a/t): T(a)-H(b) at p = {p}");
        out.push(Check::from_result(&name, (|| {
            let r = classify(&q, &hp(p), opts)?;
            Ok(expect_class(&name, &r, -1.0, Classification::Invertible))
        })()));
    }
    let name = "quarter power (a, a/t): T(a)+H(b) at p = 3";
    out.push(Check::from_result(name, (|| {
        let r = classify(&q, &hp(3.0), opts)?;
        let ok = r.plus.classification == Classification::LeftInvertible && r.plus.cokernel_dim == Some(1);
        Ok(Check::holds(name, ok, format!("{:?}", r.plus.classification)))
    })()));

    let s = right_sign_pair();
    for p in [1.5, 2.0, 3.0] {
        let name = format!("right-half sign (a, at) at p = {p}");
        out.push(Check::from_result(&name, (|| {
            let r = classify(&s, &hp(p), opts)?;
            let ok = r.plus.classification == Classification::Invertible
                && r.minus.classification == Classification::NotOneSidedInvertible;
            Ok(Check::holds(&name, ok, format!("{:?} / {:?}", r.plus.classification, r.minus.classification)))
        })()));
    }
    out
}

pub fn selftest_suite(opts: &AnalyzerOptions) -> Vec<Check> {
    selftest_checks(opts)
}
