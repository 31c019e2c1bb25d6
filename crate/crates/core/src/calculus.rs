//! The `p`-dependent symbol calculus: weight functions, circular arcs, sampled
//! symbol curves and winding numbers, Toeplitz indices and the Fredholm check
//! and index formula for Toeplitz plus Hankel operators.

use crate::circle::{angles_close, canonical_angle, dedup_angles, CirclePoint, Side};
use crate::error::{Error, Result};
use crate::matching::MatrixSymbol;
use crate::symbol::{PCSymbol, JUMP_TOL};
use crate::tolerance::{Tolerances, GRID_SIZE};
use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_8, PI, TAU};
use std::io::Write;

const MAX_DEPTH: u32 = 40;
/// Largest argument increment allowed between neighbouring curve samples.
const MAX_ARG_STEP: f64 = FRAC_PI_8 / 2.0;
const Y_GRID_POINTS: usize = 257;
const Y_GRID_DELTA: f64 = 1e-6;

/// Hardy space exponent `p` in `(1, inf)` with its conjugate `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardyExponent {
    p: f64,
    q: f64,
}

impl HardyExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        Ok(HardyExponent { p, q: p / (p - 1.0) })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// `(nu_p(y), h_p(y))` with exact values at `y = +-inf`.
pub fn weight_functions(p: &HardyExponent, y: f64) -> Result<(Complex64, Complex64)> {
    let zero = Complex64::new(0.0, 0.0);
    if y == f64::INFINITY {
        return Ok((Complex64::new(1.0, 0.0), zero));
    }
    if y == f64::NEG_INFINITY {
        return Ok((zero, zero));
    }
    if y.is_nan() {
        return Err(Error::PoleHit(y));
    }
    let z = Complex64::new(PI * y, PI / p.p);
    let one = Complex64::new(1.0, 0.0);
    if y > 0.0 {
        let em = (-2.0 * z).exp();
        let den = one - em;
        if den.norm() < 1e-300 {
            return Err(Error::PoleHit(y));
        }
        Ok((den.inv(), 2.0 * (-z).exp() / den))
    } else {
        let ep = (2.0 * z).exp();
        let den = one - ep;
        if den.norm() < 1e-300 {
            return Err(Error::PoleHit(y));
        }
        Ok((-ep / den, -2.0 * z.exp() / den))
    }
}

/// Map from the compact parameter `u in [-1, 1]` to `y = atanh(u)`.
pub fn u_to_y(u: f64) -> f64 {
    if u >= 1.0 {
        f64::INFINITY
    } else if u <= -1.0 {
        f64::NEG_INFINITY
    } else {
        u.signum() * u.abs().atanh()
    }
}

/// Compact parameters: 257 tanh-mapped interior points plus `-1` and `1`.
pub fn u_grid() -> Vec<f64> {
    let mut out = Vec::with_capacity(Y_GRID_POINTS + 2);
    out.push(-1.0);
    let half = (Y_GRID_POINTS - 1) as f64 / 2.0;
    for k in 0..Y_GRID_POINTS {
        out.push((k as f64 - half) / half * (1.0 - Y_GRID_DELTA));
    }
    out.push(1.0);
    out
}

/// The `y` grid including both infinite endpoints; symmetric and containing 0.
pub fn y_grid() -> Vec<f64> {
    u_grid().into_iter().map(u_to_y).collect()
}

/// One sample of a symbol curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub segment: usize,
    pub param: f64,
    pub value: Complex64,
}

/// Sampled oriented curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolCurve {
    pub samples: Vec<CurveSample>,
    pub closed: bool,
    pub min_modulus: f64,
}

impl SymbolCurve {
    /// Writes `segment,param,re,im` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "segment,param,re,im")?;
        for s in &self.samples {
            writeln!(out, "{},{:.17e},{:.17e},{:.17e}", s.segment, s.param, s.value.re, s.value.im)?;
        }
        Ok(())
    }
}

/// Winding number of a closed curve about the origin.
pub fn winding(curve: &SymbolCurve, tol: &Tolerances) -> Result<i64> {
    if curve.min_modulus <= tol.winding {
        return Err(Error::CurveThroughOrigin {
            min_modulus: curve.min_modulus,
        });
    }
    let n = curve.samples.len();
    let mut total = 0.0;
    for k in 0..n {
        let next = if k + 1 < n {
            curve.samples[k + 1].value
        } else if curve.closed {
            curve.samples[0].value
        } else {
            break;
        };
        total += (next / curve.samples[k].value).arg();
    }
    let value = total / TAU;
    let rounded = value.round();
    if (value - rounded).abs() >= 0.01 {
        return Err(Error::NonIntegerWinding { value });
    }
    Ok(rounded as i64)
}

fn small_step(a: Complex64, b: Complex64) -> bool {
    a.norm() == 0.0 || b.norm() == 0.0 || (b / a).arg().abs() < MAX_ARG_STEP
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..80 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
        if (hi - lo).abs() < 1e-15 * (1.0 + lo.abs()) {
            break;
        }
    }
    f1.min(f2)
}

/// Samples `f` over `params` with adaptive bisection until the argument moves
/// by less than `pi/16` between neighbours. Returns the refined minimum modulus.
fn sample_segment(
    f: &dyn Fn(f64) -> Result<Complex64>,
    params: &[f64],
    segment: usize,
    out: &mut Vec<CurveSample>,
) -> Result<f64> {
    fn refine(
        f: &dyn Fn(f64) -> Result<Complex64>,
        s0: f64,
        v0: Complex64,
        s1: f64,
        v1: Complex64,
        depth: u32,
        segment: usize,
        out: &mut Vec<CurveSample>,
    ) -> Result<()> {
        if depth >= MAX_DEPTH || small_step(v0, v1) {
            return Ok(());
        }
        let sm = 0.5 * (s0 + s1);
        let vm = f(sm)?;
        refine(f, s0, v0, sm, vm, depth + 1, segment, out)?;
        out.push(CurveSample {
            segment,
            param: sm,
            value: vm,
        });
        refine(f, sm, vm, s1, v1, depth + 1, segment, out)
    }

    let start = out.len();
    let values = params.iter().map(|&s| f(s)).collect::<Result<Vec<_>>>()?;
    for k in 0..params.len() {
        out.push(CurveSample {
            segment,
            param: params[k],
            value: values[k],
        });
        if k + 1 < params.len() {
            refine(f, params[k], values[k], params[k + 1], values[k + 1], 0, segment, out)?;
        }
    }
    let seg = &out[start..];
    let mut best = seg.iter().map(|s| s.value.norm()).fold(f64::INFINITY, f64::min);
    for k in 1..seg.len().saturating_sub(1) {
        let m = seg[k].value.norm();
        if m <= seg[k - 1].value.norm() && m <= seg[k + 1].value.norm() {
            let g = golden_min(
                |s| f(s).map(|v| v.norm()).unwrap_or(0.0),
                seg[k - 1].param,
                seg[k + 1].param,
            );
            best = best.min(g);
        }
    }
    Ok(best)
}

/// Closed curve assembled from continuous pieces between `breaks` and arcs
/// inserted at `arc_points`, traversed counterclockwise from angle 0.
///
/// `cont(angle, side)` gives the continuous part; `arc(angle, nu, h)` the arc at a
/// point; `exact_min` may supply an exact minimum modulus for an arc.
pub struct CurveParts<'a> {
    pub breaks: Vec<f64>,
    pub arc_points: Vec<f64>,
    pub cont: &'a dyn Fn(f64, Side) -> Result<Complex64>,
    pub arc: &'a dyn Fn(f64, Complex64, Complex64) -> Result<Complex64>,
    pub exact_min: Option<&'a dyn Fn(f64) -> Result<f64>>,
}

pub fn closed_curve(parts: &CurveParts<'_>, p: &HardyExponent) -> Result<SymbolCurve> {
    let mut breaks = parts.breaks.clone();
    breaks.extend(parts.arc_points.iter().copied());
    breaks.push(0.0);
    let breaks = dedup_angles(breaks);
    let mut samples = Vec::new();
    let mut min_modulus = f64::INFINITY;
    let mut segment = 0usize;
    let ugrid = u_grid();
    for (k, &b) in breaks.iter().enumerate() {
        if parts.arc_points.iter().any(|&a| angles_close(a, b)) {
            let f = |u: f64| -> Result<Complex64> {
                let (nu, h) = weight_functions(p, u_to_y(u))?;
                (parts.arc)(b, nu, h)
            };
            let m = sample_segment(&f, &ugrid, segment, &mut samples)?;
            let m = match parts.exact_min {
                Some(exact) => exact(b)?,
                None => m,
            };
            min_modulus = min_modulus.min(m);
            segment += 1;
        }
        let end = breaks.get(k + 1).copied().unwrap_or(breaks[0] + TAU);
        let len = end - b;
        let n = ((len / TAU) * GRID_SIZE as f64).ceil().max(16.0) as usize;
        let params: Vec<f64> = (0..=n).map(|j| b + len * j as f64 / n as f64).collect();
        let f = |theta: f64| -> Result<Complex64> {
            if theta <= b {
                (parts.cont)(b, Side::Right)
            } else if theta >= end {
                (parts.cont)(canonical_angle(end), Side::Left)
            } else {
                (parts.cont)(canonical_angle(theta), Side::Right)
            }
        };
        let m = sample_segment(&f, &params, segment, &mut samples)?;
        min_modulus = min_modulus.min(m);
        segment += 1;
    }
    Ok(SymbolCurve {
        samples,
        closed: true,
        min_modulus,
    })
}

/// Index `Fredholm(k)` or a failure of the Fredholm property.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FredholmIndex {
    Fredholm(i64),
    NotFredholm { min_modulus: f64 },
}

impl FredholmIndex {
    pub fn index(&self) -> Option<i64> {
        match self {
            FredholmIndex::Fredholm(k) => Some(*k),
            FredholmIndex::NotFredholm { .. } => None,
        }
    }

    pub fn is_fredholm(&self) -> bool {
        matches!(self, FredholmIndex::Fredholm(_))
    }
}

fn index_from_curve(curve: &SymbolCurve, tol: &Tolerances) -> Result<FredholmIndex> {
    match winding(curve, tol) {
        Ok(w) => Ok(FredholmIndex::Fredholm(-w)),
        Err(Error::CurveThroughOrigin { min_modulus }) => Ok(FredholmIndex::NotFredholm { min_modulus }),
        Err(e) => Err(e),
    }
}

/// Exact distance from the origin to the arc `u(1 - nu_p) + w nu_p`.
pub fn arc_min_modulus(u: Complex64, w: Complex64, p: &HardyExponent) -> Result<f64> {
    let scale = (w - u).norm();
    if scale == 0.0 {
        return Err(Error::DegenerateArc);
    }
    // z = u + (w - u) nu vanishes at nu0; |z| = |w - u| |nu - nu0|.
    let nu0 = u / (u - w);
    let alpha = TAU / p.p;
    let s = alpha.sin();
    let d = if s.abs() < 1e-12 {
        let x = nu0.re.clamp(0.0, 1.0);
        (nu0 - Complex64::new(x, 0.0)).norm()
    } else {
        let centre = Complex64::new(0.5, -0.5 * alpha.cos() / s);
        let radius = 0.5 / s.abs();
        let nu1 = Complex64::new(0.5, -0.5 / (alpha / 2.0).tan());
        let off = nu0 - centre;
        let ends = nu0.norm().min((nu0 - 1.0).norm());
        if off.norm() == 0.0 {
            radius
        } else {
            let proj = centre + off * (radius / off.norm());
            if proj.im * nu1.im > 0.0 {
                (off.norm() - radius).abs().min(ends)
            } else {
                ends
            }
        }
    };
    Ok(scale * d)
}

/// Samples of the arc from `u` to `w` at `n` compact parameters.
pub fn arc(u: Complex64, w: Complex64, p: &HardyExponent, n_samples: usize) -> Result<SymbolCurve> {
    let min_modulus = arc_min_modulus(u, w, p)?;
    let n = n_samples.max(2);
    let samples = (0..n)
        .map(|k| {
            let uu = -1.0 + 2.0 * k as f64 / (n - 1) as f64;
            let (nu, _) = weight_functions(p, u_to_y(uu))?;
            Ok(CurveSample {
                segment: 0,
                param: uu,
                value: u * (1.0 - nu) + w * nu,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolCurve {
        samples,
        closed: false,
        min_modulus,
    })
}

/// The exponent `p*` at which the arc from `u` to `w` passes through 0, if any.
pub fn critical_exponent(u: Complex64, w: Complex64) -> Option<f64> {
    if u.norm() == 0.0 || w.norm() == 0.0 {
        return None;
    }
    let theta = canonical_angle((u / w).arg());
    if theta < 1e-12 || TAU - theta < 1e-12 {
        return None;
    }
    Some(TAU / theta)
}

/// Critical exponents of `T(a)`, sorted.
pub fn critical_exponents(a: &PCSymbol) -> Vec<f64> {
    let mut out: Vec<f64> = a
        .jump_set()
        .iter()
        .filter_map(|j| critical_exponent(j.left, j.right))
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    out
}

/// The arc-completed curve of `a`: the image of the circle with, at every jump,
/// the arc from `a(t-0)` to `a(t+0)`.
pub fn toeplitz_symbol_curve(a: &PCSymbol, p: &HardyExponent, tol: &Tolerances) -> Result<SymbolCurve> {
    let jumps = a.jump_set().to_vec();
    let inv = tol.invertibility;
    let cont = |theta: f64, side: Side| a.eval_angle(theta, side, inv);
    let arc_fn = |theta: f64, nu: Complex64, _h: Complex64| -> Result<Complex64> {
        let l = a.eval_angle(theta, Side::Left, inv)?;
        let r = a.eval_angle(theta, Side::Right, inv)?;
        Ok(r * nu + l * (1.0 - nu))
    };
    let exact = |theta: f64| -> Result<f64> {
        let l = a.eval_angle(theta, Side::Left, inv)?;
        let r = a.eval_angle(theta, Side::Right, inv)?;
        arc_min_modulus(l, r, p)
    };
    let parts = CurveParts {
        breaks: a.breakpoints(),
        arc_points: jumps.iter().map(|j| j.point.angle()).collect(),
        cont: &cont,
        arc: &arc_fn,
        exact_min: Some(&exact),
    };
    closed_curve(&parts, p)
}

/// `ind T(a) = -wind` of the arc-completed curve, or NotFredholm.
pub fn toeplitz_index(a: &PCSymbol, p: &HardyExponent, tol: &Tolerances) -> Result<FredholmIndex> {
    index_from_curve(&toeplitz_symbol_curve(a, p, tol)?, tol)
}

fn matrix_jumps(
    eval: &dyn Fn(f64, Side) -> Result<Matrix2<Complex64>>,
    candidates: &[f64],
) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for &theta in candidates {
        let l = eval(theta, Side::Left)?;
        let r = eval(theta, Side::Right)?;
        let scale = 1f64.max(l.norm()).max(r.norm());
        if (l - r).norm() > JUMP_TOL * scale {
            out.push(theta);
        }
    }
    Ok(out)
}

/// Arc-completed determinant curve of a matrix symbol given pointwise: on
/// jumps, `det((1 - nu) M(t-0) + nu M(t+0))`.
fn matrix_det_curve(
    eval: &dyn Fn(f64, Side) -> Result<Matrix2<Complex64>>,
    candidates: Vec<f64>,
    p: &HardyExponent,
) -> Result<SymbolCurve> {
    let candidates = dedup_angles(candidates);
    let arc_points = matrix_jumps(eval, &candidates)?;
    let cont = |theta: f64, side: Side| eval(theta, side).map(|m| m.determinant());
    let arc_fn = |theta: f64, nu: Complex64, _h: Complex64| -> Result<Complex64> {
        let l = eval(theta, Side::Left)?;
        let r = eval(theta, Side::Right)?;
        Ok((l * (Complex64::new(1.0, 0.0) - nu) + r * nu).determinant())
    };
    let parts = CurveParts {
        breaks: candidates,
        arc_points,
        cont: &cont,
        arc: &arc_fn,
        exact_min: None,
    };
    closed_curve(&parts, p)
}

/// Index of the block Toeplitz operator `T(U)` via its determinant curve.
pub fn block_toeplitz_index(u: &MatrixSymbol, p: &HardyExponent, tol: &Tolerances) -> Result<FredholmIndex> {
    let inv = tol.invertibility;
    let eval = |theta: f64, side: Side| u.eval_angle(theta, side, inv);
    let curve = matrix_det_curve(&eval, u.breakpoints(), p)?;
    index_from_curve(&curve, tol)
}

/// Value of the Toeplitz plus Hankel symbol at a point of the closed upper half-circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThSymbol {
    Matrix(Matrix2<Complex64>),
    Scalar(Complex64),
}

impl ThSymbol {
    /// `|det|` for the matrix branch, `|value|` for the scalar one.
    pub fn modulus(&self) -> f64 {
        match self {
            ThSymbol::Matrix(m) => m.determinant().norm(),
            ThSymbol::Scalar(v) => v.norm(),
        }
    }
}

fn th_symbol_angle(
    a: &PCSymbol,
    b: &PCSymbol,
    p: &HardyExponent,
    theta: f64,
    y: f64,
    inv: f64,
) -> Result<ThSymbol> {
    let (nu, h) = weight_functions(p, y)?;
    let one = Complex64::new(1.0, 0.0);
    let ev = |s: &PCSymbol, angle: f64, side: Side| s.eval_angle(angle, side, inv);
    let tsym = |angle: f64| -> Result<Complex64> {
        Ok(ev(a, angle, Side::Right)? * nu + ev(a, angle, Side::Left)? * (one - nu))
    };
    if angles_close(theta, 0.0) || angles_close(theta, PI) {
        let sign = if angles_close(theta, 0.0) { 1.0 } else { -1.0 };
        let jump = ev(b, theta, Side::Right)? - ev(b, theta, Side::Left)?;
        return Ok(ThSymbol::Scalar(tsym(theta)? + jump * h * (0.5 * sign)));
    }
    if theta > PI {
        return Err(Error::OutOfDomain(theta));
    }
    let conj = canonical_angle(-theta);
    let two_i = Complex64::new(0.0, 2.0);
    let m = Matrix2::new(
        tsym(theta)?,
        (ev(b, theta, Side::Right)? - ev(b, theta, Side::Left)?) / two_i * h,
        (ev(b, conj, Side::Left)? - ev(b, conj, Side::Right)?) / two_i * h,
        tsym(conj)?,
    );
    Ok(ThSymbol::Matrix(m))
}

/// The symbol of `T(a) + H(b)`: a 2x2 matrix on the open upper half-circle and
/// a scalar at `t = +-1`.
pub fn th_symbol(
    a: &PCSymbol,
    b: &PCSymbol,
    p: &HardyExponent,
    t: CirclePoint,
    y: f64,
    tol: &Tolerances,
) -> Result<ThSymbol> {
    th_symbol_angle(a, b, p, t.angle(), y, tol.invertibility)
}

/// Outcome of the Fredholm check, with the point where the symbol is smallest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThFredholmCheck {
    pub fredholm: bool,
    pub witness_angle: f64,
    pub witness_y: f64,
    pub min_modulus: f64,
}

/// Fredholm check for `T(a) + H(b)` by sampling the symbol on the closed upper
/// half-circle times the extended real line.
pub fn th_fredholm_check(a: &PCSymbol, b: &PCSymbol, p: &HardyExponent, tol: &Tolerances) -> Result<ThFredholmCheck> {
    let inv = tol.invertibility;
    let mut special: Vec<f64> = Vec::new();
    for s in [a, b] {
        for j in s.jump_set() {
            special.push(j.point.angle());
            special.push(j.point.reflect().angle());
        }
    }
    special.push(0.0);
    special.push(PI);
    let special: Vec<f64> = dedup_angles(special).into_iter().filter(|&t| t <= PI).collect();
    let ugrid = u_grid();
    let mut best = ThFredholmCheck {
        fredholm: true,
        witness_angle: 0.0,
        witness_y: 0.0,
        min_modulus: f64::INFINITY,
    };
    let mut consider = |theta: f64, y: f64, m: f64| {
        if m < best.min_modulus {
            best.min_modulus = m;
            best.witness_angle = theta;
            best.witness_y = y;
        }
    };
    for &theta in &special {
        let f = |u: f64| th_symbol_angle(a, b, p, theta, u_to_y(u), inv).map(|s| s.modulus());
        let values = ugrid.iter().map(|&u| f(u)).collect::<Result<Vec<_>>>()?;
        for (k, &m) in values.iter().enumerate() {
            consider(theta, u_to_y(ugrid[k]), m);
        }
        let k = values
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .map(|(k, _)| k)
            .unwrap_or(0);
        let lo = ugrid[k.saturating_sub(1)];
        let hi = ugrid[(k + 1).min(ugrid.len() - 1)];
        let g = golden_min(|u| f(u).unwrap_or(0.0), lo, hi);
        consider(theta, u_to_y(0.5 * (lo + hi)), g);
    }
    let n = GRID_SIZE / 2;
    for k in 1..n {
        let theta = PI * k as f64 / n as f64;
        if special.iter().any(|&s| angles_close(s, theta)) {
            continue;
        }
        let m = th_symbol_angle(a, b, p, theta, 0.0, inv)?.modulus();
        consider(theta, 0.0, m);
    }
    best.fredholm = best.min_modulus > tol.winding;
    Ok(best)
}

/// Angle-linear interpolation between one-sided limits on each half-circle.
struct HalfLinear {
    /// Values at `1+0`, `-1-0`, `-1+0`, `1-0`.
    ends: [Complex64; 4],
}

impl HalfLinear {
    fn eval(&self, theta: f64, side: Side) -> Complex64 {
        let [r1, lm1, rm1, l1] = self.ends;
        if angles_close(theta, 0.0) {
            return if side == Side::Right { r1 } else { l1 };
        }
        if angles_close(theta, PI) {
            return if side == Side::Left { lm1 } else { rm1 };
        }
        let theta = canonical_angle(theta);
        if theta < PI {
            r1 + (lm1 - r1) * (theta / PI)
        } else {
            rm1 + (l1 - rm1) * ((theta - PI) / PI)
        }
    }
}

fn nearest_log(z: Complex64, reference: Complex64) -> Complex64 {
    let mut l = z.ln();
    let k = ((reference.im - l.im) / TAU).round();
    l.im += k * TAU;
    l
}

/// The pieces of the index formula: `(-wind smb(T(g)+H(b0)), ind T(U1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThIndexParts {
    pub toeplitz_part: i64,
    pub block_part: i64,
}

pub fn th_index_parts(a: &PCSymbol, b: &PCSymbol, p: &HardyExponent, tol: &Tolerances) -> Result<ThIndexParts> {
    let check = th_fredholm_check(a, b, p, tol)?;
    if !check.fredholm {
        return Err(Error::NotFredholm(format!(
            "symbol of T(a)+H(b) has modulus {:.3e} at angle {:.6}, y = {}",
            check.min_modulus, check.witness_angle, check.witness_y
        )));
    }
    let inv = tol.invertibility;
    let lim = |s: &PCSymbol| -> Result<[Complex64; 4]> {
        Ok([
            s.eval_angle(0.0, Side::Right, inv)?,
            s.eval_angle(PI, Side::Left, inv)?,
            s.eval_angle(PI, Side::Right, inv)?,
            s.eval_angle(0.0, Side::Left, inv)?,
        ])
    };
    let b0 = HalfLinear { ends: lim(b)? };
    let [ar1, alm1, arm1, al1] = lim(a)?;
    if [ar1, alm1, arm1, al1].iter().any(|v| v.norm() <= inv) {
        return Err(Error::SplitFailure("a vanishes at +1 or -1".into()));
    }
    let lr1 = ar1.ln();
    let llm1 = nearest_log(alm1, lr1);
    let lrm1 = arm1.ln();
    let ll1 = nearest_log(al1, lrm1);
    let log_g = HalfLinear {
        ends: [lr1, llm1, lrm1, ll1],
    };
    let g = |theta: f64, side: Side| log_g.eval(theta, side).exp();

    let cont1 = |theta: f64, side: Side| Ok(g(theta, side));
    let arc1 = |theta: f64, nu: Complex64, h: Complex64| -> Result<Complex64> {
        let sign = if angles_close(theta, 0.0) { 0.5 } else { -0.5 };
        let jump = b0.eval(theta, Side::Right) - b0.eval(theta, Side::Left);
        Ok(g(theta, Side::Right) * nu + g(theta, Side::Left) * (1.0 - nu) + jump * h * sign)
    };
    let parts1 = CurveParts {
        breaks: vec![0.0, PI],
        arc_points: vec![0.0, PI],
        cont: &cont1,
        arc: &arc1,
        exact_min: None,
    };
    let curve1 = closed_curve(&parts1, p)?;
    let toeplitz_part = -winding(&curve1, tol)
        .map_err(|e| Error::SplitFailure(format!("T(g)+H(b0) curve: {e}")))?;

    let a2 = |theta: f64, side: Side| -> Result<Complex64> { Ok(a.eval_angle(theta, side, inv)? / g(theta, side)) };
    let b2 = |theta: f64, side: Side| -> Result<Complex64> {
        Ok((b.eval_angle(theta, side, inv)? - b0.eval(theta, side)) / g(theta, side))
    };
    let u1 = |theta: f64, side: Side| -> Result<Matrix2<Complex64>> {
        let refl = canonical_angle(-theta);
        let (x, y) = (a2(theta, side)?, b2(theta, side)?);
        let (xt, yt) = (a2(refl, side.flip())?, b2(refl, side.flip())?);
        if xt.norm() <= inv {
            return Err(Error::DivisionBySmallModulus {
                angle: theta,
                modulus: xt.norm(),
            });
        }
        Ok(Matrix2::new(x - y * yt / xt, -y / xt, yt / xt, xt.inv()))
    };
    let mut candidates = vec![0.0, PI];
    for s in [a, b] {
        for t in s.breakpoints() {
            candidates.push(t);
            candidates.push(canonical_angle(-t));
        }
    }
    let curve2 = matrix_det_curve(&u1, candidates, p)?;
    let block_part = match index_from_curve(&curve2, tol)? {
        FredholmIndex::Fredholm(k) => k,
        FredholmIndex::NotFredholm { min_modulus } => {
            return Err(Error::SplitFailure(format!(
                "T(U1) determinant curve passes through 0 (min modulus {min_modulus:.3e})"
            )))
        }
    };
    if block_part % 2 != 0 {
        return Err(Error::SplitFailure(format!("ind T(U1) = {block_part} is odd")));
    }
    Ok(ThIndexParts {
        toeplitz_part,
        block_part,
    })
}

/// `ind(T(a) + H(b)) = -wind smb(T(g) + H(b0)) + ind T(U1) / 2`.
pub fn th_index(a: &PCSymbol, b: &PCSymbol, p: &HardyExponent, tol: &Tolerances) -> Result<i64> {
    let parts = th_index_parts(a, b, p, tol)?;
    Ok(parts.toeplitz_part + parts.block_part / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn hp(p: f64) -> HardyExponent {
        HardyExponent::new(p).unwrap()
    }

    fn ex1_a() -> PCSymbol {
        PCSymbol::constant(Complex64::from_polar(1.0, FRAC_PI_4))
            * PCSymbol::power_arc(c(0.25, 0.0), CirclePoint::ONE)
    }

    fn ex2_a() -> PCSymbol {
        PCSymbol::piecewise_const(vec![CirclePoint::ONE, CirclePoint::MINUS_ONE], vec![c(1.0, 0.0), c(-1.0, 0.0)])
            .unwrap()
    }

    #[test]
    fn exponent_validation() {
        assert!(HardyExponent::new(1.0).is_err());
        assert!(HardyExponent::new(f64::INFINITY).is_err());
        assert!((hp(3.0).q() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn weights_at_zero_and_infinity() {
        let (nu, h) = weight_functions(&hp(2.0), 0.0).unwrap();
        assert!((nu - c(0.5, 0.0)).norm() < 1e-15);
        assert!((h - c(0.0, -1.0)).norm() < 1e-15);
        for p in [1.2, 2.0, 4.0] {
            assert_eq!(weight_functions(&hp(p), f64::INFINITY).unwrap(), (c(1.0, 0.0), c(0.0, 0.0)));
            assert_eq!(weight_functions(&hp(p), f64::NEG_INFINITY).unwrap(), (c(0.0, 0.0), c(0.0, 0.0)));
        }
        let (_, h4) = weight_functions(&hp(4.0), 0.0).unwrap();
        assert!((h4.im.abs() - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn weights_stable_for_large_y() {
        let (nu, h) = weight_functions(&hp(3.0), 400.0).unwrap();
        assert!((nu - 1.0).norm() < 1e-15 && h.norm() < 1e-300);
        let (nu, h) = weight_functions(&hp(3.0), -400.0).unwrap();
        assert!(nu.norm() < 1e-300 && h.norm() < 1e-300);
    }

    #[test]
    fn nu_ratio_identity() {
        let p = hp(3.0);
        for y in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            let (nu, _) = weight_functions(&p, y).unwrap();
            let want = Complex64::new(TAU * y, TAU / 3.0).exp();
            let got = nu / (nu - 1.0);
            assert!((got - want).norm() < 1e-10 * want.norm(), "{y} {got} {want}");
        }
    }

    #[test]
    fn y_grid_is_symmetric() {
        let g = y_grid();
        assert_eq!(g.len(), 259);
        assert!(g.contains(&0.0));
        for k in 0..g.len() {
            assert_eq!(g[k], -g[g.len() - 1 - k]);
        }
    }

    #[test]
    fn arc_min_modulus_matches_sampling() {
        for p in [1.3, 2.0, 2.5, 5.0] {
            let p = hp(p);
            for (u, w) in [(c(1.0, 0.0), c(0.0, 1.0)), (c(0.3, -1.0), c(-0.2, 0.9)), (c(2.0, 1.0), c(1.0, 2.0))] {
                let exact = arc_min_modulus(u, w, &p).unwrap();
                let sampled = (0..20001)
                    .map(|k| {
                        let (nu, _) = weight_functions(&p, u_to_y(-1.0 + 2.0 * k as f64 / 20000.0)).unwrap();
                        (u * (1.0 - nu) + w * nu).norm()
                    })
                    .fold(f64::INFINITY, f64::min);
                assert!(exact <= sampled + 1e-12 && sampled - exact < 1e-3, "{exact} {sampled}");
            }
        }
    }

    #[test]
    fn segment_through_origin() {
        let m = arc_min_modulus(c(0.0, -1.0), c(0.0, 1.0), &hp(2.0)).unwrap();
        assert!(m < 1e-15);
        assert!(matches!(arc_min_modulus(c(1.0, 0.0), c(1.0, 0.0), &hp(2.0)), Err(Error::DegenerateArc)));
    }

    #[test]
    fn monomial_indices() {
        let tol = Tolerances::default();
        for n in -5..=5 {
            let idx = toeplitz_index(&PCSymbol::monomial(n), &hp(1.7), &tol).unwrap();
            assert_eq!(idx, FredholmIndex::Fredholm(-n));
        }
    }

    #[test]
    fn example_one_indices() {
        let tol = Tolerances::default();
        let a = ex1_a();
        let d = &(&a / &a.tilde()) * &PCSymbol::monomial(1);
        assert_eq!(toeplitz_index(&d, &hp(1.5), &tol).unwrap(), FredholmIndex::Fredholm(-1));
        assert_eq!(toeplitz_index(&d, &hp(3.0), &tol).unwrap(), FredholmIndex::Fredholm(-2));
        assert!(!toeplitz_index(&d, &hp(2.0), &tol).unwrap().is_fredholm());
        assert_eq!(critical_exponents(&d), vec![2.0]);
        let cinv = PCSymbol::monomial(-1);
        assert_eq!(toeplitz_index(&cinv, &hp(3.0), &tol).unwrap(), FredholmIndex::Fredholm(1));
    }

    #[test]
    fn example_two_toeplitz_index() {
        let tol = Tolerances::default();
        let a = ex2_a();
        assert_eq!(toeplitz_index(&a, &hp(1.5), &tol).unwrap(), FredholmIndex::Fredholm(1));
        assert_eq!(toeplitz_index(&a, &hp(3.0), &tol).unwrap(), FredholmIndex::Fredholm(-1));
    }

    #[test]
    fn th_check_example_one() {
        let tol = Tolerances::default();
        let a = ex1_a();
        let b = &a * &PCSymbol::monomial(1);
        assert!(!th_fredholm_check(&a, &b, &hp(2.0), &tol).unwrap().fredholm);
        assert!(th_fredholm_check(&a, &(-&b), &hp(2.0), &tol).unwrap().fredholm);
        assert_eq!(th_index(&a, &(-&b), &hp(2.0), &tol).unwrap(), 0);
        assert!(th_fredholm_check(&PCSymbol::one(), &PCSymbol::real(0.0), &hp(3.0), &tol).unwrap().fredholm);
    }

    #[test]
    fn th_index_reduces_to_toeplitz_index() {
        let tol = Tolerances::default();
        let zero = PCSymbol::real(0.0);
        for (a, p) in [(ex1_a(), 1.5), (ex2_a(), 3.0), (PCSymbol::monomial(2), 2.0)] {
            let want = toeplitz_index(&a, &hp(p), &tol).unwrap().index().unwrap();
            assert_eq!(th_index(&a, &zero, &hp(p), &tol).unwrap(), want);
        }
    }

    #[test]
    fn th_index_example_two() {
        let tol = Tolerances::default();
        let i = PCSymbol::constant(c(0.0, 1.0));
        let a = ex2_a();
        for p in [1.5, 2.0, 3.0] {
            assert_eq!(th_index(&i, &(-&a), &hp(p), &tol).unwrap(), 0);
        }
        assert!(!th_fredholm_check(&i, &a, &hp(2.0), &tol).unwrap().fredholm);
        let lo = th_index(&i, &a, &hp(1.5), &tol).unwrap();
        let hi = th_index(&i, &a, &hp(3.0), &tol).unwrap();
        assert_eq!((lo, hi), (2, -2));
    }

    #[test]
    fn th_symbol_out_of_domain() {
        let tol = Tolerances::default();
        let r = th_symbol(&PCSymbol::one(), &PCSymbol::one(), &hp(2.0), CirclePoint::new(4.0), 0.0, &tol);
        assert!(matches!(r, Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn curve_csv_header() {
        let tol = Tolerances::default();
        let curve = toeplitz_symbol_curve(&PCSymbol::monomial(1), &hp(2.0), &tol).unwrap();
        let mut buf = Vec::new();
        curve.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("segment,param,re,im\n"));
        assert!((curve.min_modulus - 1.0).abs() < 1e-12);
    }
}
