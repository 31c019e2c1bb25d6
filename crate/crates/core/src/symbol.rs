//! Piecewise continuous generating functions on the unit circle.
//!
//! A [`PCSymbol`] is an immutable expression tree over a handful of primitives
//! (constants, monomials `t^n`, rotated power functions, piecewise constants and
//! the half-circle extension) closed under sums, products, inverses, complex
//! conjugation and the flip `a(t) -> a(1/t)`. Every node can be evaluated as a
//! one-sided limit, which is what the Fredholm symbol calculus consumes.
//!
//! The smart constructors keep trees in a normal form where possible: the flip,
//! conjugate and inverse of a primitive are again primitives, products merge
//! constants, monomials and power functions sharing an anchor. This keeps the
//! Fourier coefficients of all symbols used in practice available in closed form.

use crate::circle::{
    angle_distance, angles_close, canonical_angle, dedup_angles, CirclePoint, Side, ANGLE_EPS,
};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::tolerance::{Tolerances, GRID_SIZE};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::{Arc, OnceLock};

/// Relative size below which a difference of one-sided limits is not a jump.
pub const JUMP_TOL: f64 = 1e-10;

/// Nodes of the expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    /// `t^n`.
    Monomial(i64),
    /// `exp(i*beta*(zeta - pi))` with `zeta in [0, 2pi)` measured from the anchor.
    PowerArc { beta: Complex64, anchor: CirclePoint },
    /// `values[k]` on the open arc from `breaks[k]` to `breaks[k+1]` (cyclically).
    PiecewiseConst {
        breaks: Vec<CirclePoint>,
        values: Vec<Complex64>,
    },
    /// `g0` on the closed upper half-circle and `1/g0(conj t)` on the lower one.
    HalfCircleExtension(PCSymbol),
    Sum(Vec<PCSymbol>),
    Product(Vec<PCSymbol>),
    Inverse(PCSymbol),
    Conjugate(PCSymbol),
    /// `t -> s(1/t)`.
    Tilde(PCSymbol),
}

/// A jump of a symbol: the point together with both one-sided limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jump {
    pub point: CirclePoint,
    pub left: Complex64,
    pub right: Complex64,
}

struct Inner {
    expr: Expr,
    jumps: OnceLock<Vec<Jump>>,
}

/// Immutable, cheaply clonable piecewise continuous symbol.
#[derive(Clone)]
pub struct PCSymbol(Arc<Inner>);

impl PartialEq for PCSymbol {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.expr == other.0.expr
    }
}

impl fmt::Debug for PCSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.expr.fmt(f)
    }
}

/// Where a Fourier coefficient came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierCoefficient {
    pub index: i64,
    pub value: Complex64,
    pub provenance: Provenance,
    /// Present only for quadrature values; always positive.
    pub quadrature_error_bound: Option<f64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn is_one(z: Complex64) -> bool {
    z == c(1.0, 0.0)
}

/// `sin(pi z) / (pi z)` for complex `z`.
fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-8 {
        let w = z * PI;
        c(1.0, 0.0) - w * w / 6.0
    } else {
        (z * PI).sin() / (z * PI)
    }
}

impl PCSymbol {
    fn from_expr(expr: Expr) -> Self {
        PCSymbol(Arc::new(Inner {
            expr,
            jumps: OnceLock::new(),
        }))
    }

    pub fn expr(&self) -> &Expr {
        &self.0.expr
    }

    pub fn constant(value: Complex64) -> Self {
        Self::from_expr(Expr::Const(value))
    }

    pub fn real(value: f64) -> Self {
        Self::constant(c(value, 0.0))
    }

    pub fn one() -> Self {
        Self::real(1.0)
    }

    pub fn monomial(n: i64) -> Self {
        if n == 0 {
            Self::one()
        } else {
            Self::from_expr(Expr::Monomial(n))
        }
    }

    /// The power function with one-sided limits `exp(-i*pi*beta)` (right) and
    /// `exp(i*pi*beta)` (left) at `anchor`.
    pub fn power_arc(beta: Complex64, anchor: CirclePoint) -> Self {
        if beta == c(0.0, 0.0) {
            Self::one()
        } else {
            Self::from_expr(Expr::PowerArc { beta, anchor })
        }
    }

    /// Piecewise constant symbol; `values[k]` holds on the arc starting at `breaks[k]`.
    pub fn piecewise_const(breaks: Vec<CirclePoint>, values: Vec<Complex64>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != values.len() {
            return Err(Error::InvalidSymbol(format!(
                "piecewise_const needs matching non-empty breaks and values ({} vs {})",
                breaks.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidSymbol("piecewise_const value is not finite".into()));
        }
        let mut pairs: Vec<(CirclePoint, Complex64)> = breaks.into_iter().zip(values).collect();
        pairs.sort_by(|x, y| x.0.angle().total_cmp(&y.0.angle()));
        for w in 0..pairs.len() {
            let next = (w + 1) % pairs.len();
            if next != w && pairs[w].0.is_close(&pairs[next].0) {
                return Err(Error::InvalidSymbol("piecewise_const has repeated breaks".into()));
            }
        }
        if pairs.iter().all(|(_, v)| *v == pairs[0].1) {
            return Ok(Self::constant(pairs[0].1));
        }
        let (breaks, values) = pairs.into_iter().unzip();
        Ok(Self::from_expr(Expr::PiecewiseConst { breaks, values }))
    }

    pub fn sum(terms: Vec<PCSymbol>) -> Self {
        let mut constant = c(0.0, 0.0);
        let mut rest = Vec::new();
        for term in terms {
            match term.expr() {
                Expr::Sum(inner) => {
                    for t in inner {
                        if let Expr::Const(v) = t.expr() {
                            constant += v;
                        } else {
                            rest.push(t.clone());
                        }
                    }
                }
                Expr::Const(v) => constant += v,
                _ => rest.push(term),
            }
        }
        if constant != c(0.0, 0.0) || rest.is_empty() {
            rest.insert(0, Self::constant(constant));
        }
        if rest.len() == 1 {
            rest.pop().unwrap()
        } else {
            Self::from_expr(Expr::Sum(rest))
        }
    }

    pub fn product(factors: Vec<PCSymbol>) -> Self {
        let mut scalar = c(1.0, 0.0);
        let mut shift = 0i64;
        let mut arcs: Vec<(CirclePoint, Complex64)> = Vec::new();
        let mut rest = Vec::new();
        let mut stack: Vec<PCSymbol> = factors.into_iter().rev().collect();
        while let Some(f) = stack.pop() {
            match f.expr() {
                Expr::Product(inner) => stack.extend(inner.iter().rev().cloned()),
                Expr::Const(v) => scalar *= v,
                Expr::Monomial(n) => shift += n,
                Expr::PowerArc { beta, anchor } => {
                    if let Some(slot) = arcs.iter_mut().find(|(a, _)| a.is_close(anchor)) {
                        slot.1 += beta;
                    } else {
                        arcs.push((*anchor, *beta));
                    }
                }
                _ => rest.push(f),
            }
        }
        if scalar == c(0.0, 0.0) {
            return Self::constant(scalar);
        }
        let mut out = Vec::new();
        if !is_one(scalar) {
            out.push(Self::constant(scalar));
        }
        if shift != 0 {
            out.push(Self::monomial(shift));
        }
        for (anchor, beta) in arcs {
            if beta != c(0.0, 0.0) {
                out.push(Self::power_arc(beta, anchor));
            }
        }
        out.extend(rest);
        match out.len() {
            0 => Self::one(),
            1 => out.pop().unwrap(),
            _ => Self::from_expr(Expr::Product(out)),
        }
    }

    /// Pointwise reciprocal. Invertibility is checked at evaluation time.
    pub fn inverse(&self) -> Self {
        match self.expr() {
            Expr::Const(v) if *v != c(0.0, 0.0) => Self::constant(v.inv()),
            Expr::Monomial(n) => Self::monomial(-n),
            Expr::PowerArc { beta, anchor } => Self::power_arc(-beta, *anchor),
            Expr::PiecewiseConst { breaks, values } if values.iter().all(|v| v.norm() > 0.0) => {
                Self::from_expr(Expr::PiecewiseConst {
                    breaks: breaks.clone(),
                    values: values.iter().map(|v| v.inv()).collect(),
                })
            }
            Expr::Product(fs) => Self::product(fs.iter().map(|f| f.inverse()).collect()),
            Expr::Inverse(inner) => inner.clone(),
            _ => Self::from_expr(Expr::Inverse(self.clone())),
        }
    }

    /// Pointwise complex conjugate.
    pub fn conjugate(&self) -> Self {
        match self.expr() {
            Expr::Const(v) => Self::constant(v.conj()),
            Expr::Monomial(n) => Self::monomial(-n),
            Expr::PowerArc { beta, anchor } => Self::power_arc(-beta.conj(), *anchor),
            Expr::PiecewiseConst { breaks, values } => Self::from_expr(Expr::PiecewiseConst {
                breaks: breaks.clone(),
                values: values.iter().map(|v| v.conj()).collect(),
            }),
            Expr::Sum(ts) => Self::sum(ts.iter().map(|t| t.conjugate()).collect()),
            Expr::Product(fs) => Self::product(fs.iter().map(|f| f.conjugate()).collect()),
            Expr::Inverse(inner) => inner.conjugate().inverse(),
            Expr::Conjugate(inner) => inner.clone(),
            _ => Self::from_expr(Expr::Conjugate(self.clone())),
        }
    }

    /// The flipped symbol `t -> s(1/t)`. Jumps move to the reflected points with
    /// their one-sided limits exchanged.
    pub fn tilde(&self) -> Self {
        match self.expr() {
            Expr::Const(_) => self.clone(),
            Expr::Monomial(n) => Self::monomial(-n),
            Expr::PowerArc { beta, anchor } => Self::power_arc(-beta, anchor.reflect()),
            Expr::PiecewiseConst { breaks, values } => {
                let m = breaks.len();
                let pairs = (0..m)
                    .map(|k| (breaks[(k + 1) % m].reflect(), values[k]))
                    .collect::<Vec<_>>();
                let (b, v) = pairs.into_iter().unzip();
                Self::piecewise_const(b, v).expect("reflection preserves validity")
            }
            Expr::Sum(ts) => Self::sum(ts.iter().map(|t| t.tilde()).collect()),
            Expr::Product(fs) => Self::product(fs.iter().map(|f| f.tilde()).collect()),
            Expr::Inverse(inner) => inner.tilde().inverse(),
            Expr::Conjugate(inner) => inner.tilde().conjugate(),
            Expr::Tilde(inner) => inner.clone(),
            Expr::HalfCircleExtension(_) => Self::from_expr(Expr::Tilde(self.clone())),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::product(vec![Self::constant(factor), self.clone()])
    }

    /// One-sided limit at `t` using the default invertibility tolerance.
    pub fn evaluate(&self, t: CirclePoint, side: Side) -> Result<Complex64> {
        self.eval_angle(t.angle(), side, Tolerances::default().invertibility)
    }

    pub fn evaluate_with(&self, t: CirclePoint, side: Side, tol: &Tolerances) -> Result<Complex64> {
        self.eval_angle(t.angle(), side, tol.invertibility)
    }

    /// One-sided limit at the point with the given angle. `Side::Right` is the
    /// counterclockwise-forward limit `a(t+0)`.
    pub fn eval_angle(&self, theta: f64, side: Side, inv_tol: f64) -> Result<Complex64> {
        let theta = canonical_angle(theta);
        match self.expr() {
            Expr::Const(v) => Ok(*v),
            Expr::Monomial(n) => Ok(Complex64::from_polar(1.0, *n as f64 * theta)),
            Expr::PowerArc { beta, anchor } => {
                let mut zeta = canonical_angle(theta - anchor.angle());
                if zeta < ANGLE_EPS || TAU - zeta < ANGLE_EPS {
                    zeta = match side {
                        Side::Right => 0.0,
                        Side::Left => TAU,
                    };
                }
                Ok((Complex64::i() * beta * (zeta - PI)).exp())
            }
            Expr::PiecewiseConst { breaks, values } => {
                let m = breaks.len();
                if let Some(k) = breaks.iter().position(|b| angles_close(b.angle(), theta)) {
                    return Ok(match side {
                        Side::Right => values[k],
                        Side::Left => values[(k + m - 1) % m],
                    });
                }
                let idx = breaks.iter().filter(|b| b.angle() < theta).count();
                Ok(values[(idx + m - 1) % m])
            }
            Expr::HalfCircleExtension(g0) => {
                let recip = |v: Complex64, at: f64| -> Result<Complex64> {
                    if v.norm() < inv_tol {
                        Err(Error::DivisionBySmallModulus {
                            angle: at,
                            modulus: v.norm(),
                        })
                    } else {
                        Ok(v.inv())
                    }
                };
                if angles_close(theta, 0.0) {
                    let v = g0.eval_angle(0.0, Side::Right, inv_tol)?;
                    match side {
                        Side::Right => Ok(v),
                        Side::Left => recip(v, theta),
                    }
                } else if angles_close(theta, PI) {
                    let v = g0.eval_angle(PI, Side::Left, inv_tol)?;
                    match side {
                        Side::Left => Ok(v),
                        Side::Right => recip(v, theta),
                    }
                } else if theta < PI {
                    g0.eval_angle(theta, side, inv_tol)
                } else {
                    recip(g0.eval_angle(TAU - theta, side.flip(), inv_tol)?, theta)
                }
            }
            Expr::Sum(ts) => ts
                .iter()
                .map(|t| t.eval_angle(theta, side, inv_tol))
                .sum::<Result<Complex64>>(),
            Expr::Product(fs) => fs
                .iter()
                .map(|f| f.eval_angle(theta, side, inv_tol))
                .product::<Result<Complex64>>(),
            Expr::Inverse(inner) => {
                let v = inner.eval_angle(theta, side, inv_tol)?;
                if v.norm() < inv_tol {
                    Err(Error::DivisionBySmallModulus {
                        angle: theta,
                        modulus: v.norm(),
                    })
                } else {
                    Ok(v.inv())
                }
            }
            Expr::Conjugate(inner) => Ok(inner.eval_angle(theta, side, inv_tol)?.conj()),
            Expr::Tilde(inner) => inner.eval_angle(canonical_angle(-theta), side.flip(), inv_tol),
        }
    }

    /// Angles where the symbol may fail to be smooth (jump or kink candidates).
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breakpoints(&mut out);
        dedup_angles(out)
    }

    fn collect_breakpoints(&self, out: &mut Vec<f64>) {
        match self.expr() {
            Expr::Const(_) | Expr::Monomial(_) => {}
            Expr::PowerArc { anchor, .. } => out.push(anchor.angle()),
            Expr::PiecewiseConst { breaks, .. } => out.extend(breaks.iter().map(|b| b.angle())),
            Expr::HalfCircleExtension(g0) => {
                let mut inner = Vec::new();
                g0.collect_breakpoints(&mut inner);
                for a in inner {
                    if a <= PI + ANGLE_EPS {
                        out.push(a);
                        out.push(canonical_angle(-a));
                    }
                }
                out.push(0.0);
                out.push(PI);
            }
            Expr::Sum(xs) | Expr::Product(xs) => {
                for x in xs {
                    x.collect_breakpoints(out);
                }
            }
            Expr::Inverse(x) | Expr::Conjugate(x) => x.collect_breakpoints(out),
            Expr::Tilde(x) => {
                let mut inner = Vec::new();
                x.collect_breakpoints(&mut inner);
                out.extend(inner.into_iter().map(|a| canonical_angle(-a)));
            }
        }
    }

    /// Points where the one-sided limits differ, sorted by angle. The points
    /// `t = 1` and `t = -1` are always probed.
    pub fn jump_set(&self) -> &[Jump] {
        self.0.jumps.get_or_init(|| {
            let mut candidates = self.breakpoints();
            candidates.push(0.0);
            candidates.push(PI);
            let inv_tol = Tolerances::default().invertibility;
            dedup_angles(candidates)
                .into_iter()
                .filter_map(|a| {
                    let left = self.eval_angle(a, Side::Left, inv_tol).ok()?;
                    let right = self.eval_angle(a, Side::Right, inv_tol).ok()?;
                    let scale = 1f64.max(left.norm()).max(right.norm());
                    ((left - right).norm() > JUMP_TOL * scale).then_some(Jump {
                        point: CirclePoint::new(a),
                        left,
                        right,
                    })
                })
                .collect()
        })
    }

    pub fn is_continuous(&self) -> bool {
        self.jump_set().is_empty()
    }

    /// `n` equispaced angles plus every breakpoint, each with both sides.
    pub fn grid(&self, n: usize) -> Vec<(f64, Side)> {
        let mut angles: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
        angles.extend(self.breakpoints());
        angles.push(PI);
        dedup_angles(angles)
            .into_iter()
            .flat_map(|a| [(a, Side::Left), (a, Side::Right)])
            .collect()
    }

    /// Minimum modulus over the default grid; evaluation errors count as zero.
    pub fn min_modulus(&self, tol: &Tolerances) -> f64 {
        self.grid(GRID_SIZE)
            .into_iter()
            .map(|(a, s)| {
                self.eval_angle(a, s, tol.invertibility)
                    .map(|v| v.norm())
                    .unwrap_or(0.0)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Closed-form Fourier coefficient when the tree admits one.
    pub fn analytic_coefficient(&self, n: i64) -> Option<Complex64> {
        match self.expr() {
            Expr::Const(v) => Some(if n == 0 { *v } else { c(0.0, 0.0) }),
            Expr::Monomial(m) => Some(if n == *m { c(1.0, 0.0) } else { c(0.0, 0.0) }),
            Expr::PowerArc { beta, anchor } => {
                let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let phase = Complex64::from_polar(1.0, -(n as f64) * anchor.angle());
                Some(phase * sign * sinc(beta - n as f64))
            }
            Expr::PiecewiseConst { breaks, values } => {
                let m = breaks.len();
                let mut acc = c(0.0, 0.0);
                for k in 0..m {
                    let lo = breaks[k].angle();
                    let mut hi = breaks[(k + 1) % m].angle();
                    if hi <= lo {
                        hi += TAU;
                    }
                    let part = if n == 0 {
                        c((hi - lo) / TAU, 0.0)
                    } else {
                        let nf = n as f64;
                        let e_hi = Complex64::from_polar(1.0, -nf * hi);
                        let e_lo = Complex64::from_polar(1.0, -nf * lo);
                        Complex64::i() * (e_hi - e_lo) / (TAU * nf)
                    };
                    acc += values[k] * part;
                }
                Some(acc)
            }
            Expr::Sum(ts) => ts.iter().map(|t| t.analytic_coefficient(n)).sum(),
            Expr::Product(fs) => {
                let mut scalar = c(1.0, 0.0);
                let mut shift = 0i64;
                let mut other: Option<&PCSymbol> = None;
                for f in fs {
                    match f.expr() {
                        Expr::Const(v) => scalar *= v,
                        Expr::Monomial(m) => shift += m,
                        _ if other.is_none() => other = Some(f),
                        _ => return None,
                    }
                }
                let base = match other {
                    Some(f) => f.analytic_coefficient(n - shift)?,
                    None if n == shift => c(1.0, 0.0),
                    None => c(0.0, 0.0),
                };
                Some(scalar * base)
            }
            Expr::Tilde(x) => x.analytic_coefficient(-n),
            Expr::Conjugate(x) => x.analytic_coefficient(-n).map(|v| v.conj()),
            Expr::Inverse(_) | Expr::HalfCircleExtension(_) => None,
        }
    }

    pub fn has_analytic_coefficients(&self) -> bool {
        self.analytic_coefficient(0).is_some()
    }

    /// Single Fourier coefficient with default tolerances.
    pub fn fourier_coefficient(&self, n: i64) -> Result<FourierCoefficient> {
        Ok(self.fourier_coefficients(n..=n, &Tolerances::default())?[0])
    }

    /// Fourier coefficients `f_n = (1/2pi) int f(e^{i theta}) e^{-i n theta} d theta`
    /// for every `n` in `range`; analytic when possible, quadrature otherwise.
    pub fn fourier_coefficients(
        &self,
        range: RangeInclusive<i64>,
        tol: &Tolerances,
    ) -> Result<Vec<FourierCoefficient>> {
        if self.has_analytic_coefficients() {
            return Ok(range
                .map(|n| FourierCoefficient {
                    index: n,
                    value: self.analytic_coefficient(n).expect("checked analytic"),
                    provenance: Provenance::Analytic,
                    quadrature_error_bound: None,
                })
                .collect());
        }
        self.quadrature_coefficients(range, tol)
    }

    /// Coefficient values only, as a lookup table indexed from `*range.start()`.
    pub fn coefficient_table(&self, range: RangeInclusive<i64>, tol: &Tolerances) -> Result<CoefficientTable> {
        let lo = *range.start();
        let values = self
            .fourier_coefficients(range, tol)?
            .into_iter()
            .map(|f| f.value)
            .collect();
        Ok(CoefficientTable { lo, values })
    }

    /// Composite Gauss-Legendre quadrature on panels split at the breakpoints,
    /// each panel refined by doubling until successive estimates agree.
    pub fn quadrature_coefficients(
        &self,
        range: RangeInclusive<i64>,
        tol: &Tolerances,
    ) -> Result<Vec<FourierCoefficient>> {
        let lo = *range.start();
        let hi = *range.end();
        if hi < lo {
            return Ok(Vec::new());
        }
        let count = (hi - lo + 1) as usize;
        let nmax = lo.abs().max(hi.abs()) as f64;
        let rule = GaussLegendre::new(24);
        let mut cuts = self.breakpoints();
        cuts.push(0.0);
        cuts.push(PI);
        let cuts = dedup_angles(cuts);
        let mut total = vec![c(0.0, 0.0); count];
        let mut bound = vec![0.0f64; count];
        for (i, &a) in cuts.iter().enumerate() {
            let mut b = cuts.get(i + 1).copied().unwrap_or(cuts[0] + TAU);
            if b <= a {
                b += TAU;
            }
            let len = b - a;
            let share = tol.quadrature * len / TAU;
            let mut m = ((len * (nmax + 1.0)) / 8.0).ceil().max(2.0) as usize;
            let mut prev = self.panel_sums(a, b, m, &rule, lo, count, tol.invertibility)?;
            let mut done = false;
            for _ in 0..12 {
                m *= 2;
                let next = self.panel_sums(a, b, m, &rule, lo, count, tol.invertibility)?;
                let diff: Vec<f64> = next.iter().zip(&prev).map(|(x, y)| (x - y).norm()).collect();
                let worst = diff.iter().cloned().fold(0.0, f64::max);
                prev = next;
                if worst <= share {
                    for k in 0..count {
                        total[k] += prev[k];
                        bound[k] += diff[k];
                    }
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(Error::QuadratureNotConverged {
                    index: lo,
                    estimate: share,
                });
            }
        }
        Ok(total
            .into_iter()
            .zip(bound)
            .enumerate()
            .map(|(k, (value, err))| FourierCoefficient {
                index: lo + k as i64,
                value,
                provenance: Provenance::Quadrature,
                quadrature_error_bound: Some(err.max(f64::EPSILON * value.norm().max(1e-300))),
            })
            .collect())
    }

    #[allow(clippy::too_many_arguments)]
    fn panel_sums(
        &self,
        a: f64,
        b: f64,
        m: usize,
        rule: &GaussLegendre,
        lo: i64,
        count: usize,
        inv_tol: f64,
    ) -> Result<Vec<Complex64>> {
        let h = (b - a) / m as f64;
        let mut acc = vec![c(0.0, 0.0); count];
        for j in 0..m {
            let pa = a + h * j as f64;
            for (x, w) in rule.mapped(pa, pa + h) {
                let fx = self.eval_angle(x, Side::Right, inv_tol)? * (w / TAU);
                let step = Complex64::from_polar(1.0, -x);
                let mut e = Complex64::from_polar(1.0, -(lo as f64) * x);
                for slot in acc.iter_mut() {
                    *slot += fx * e;
                    e *= step;
                }
            }
        }
        Ok(acc)
    }
}

/// Contiguous table of Fourier coefficients.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    lo: i64,
    values: Vec<Complex64>,
}

impl CoefficientTable {
    pub fn get(&self, n: i64) -> Complex64 {
        let k = n - self.lo;
        if k < 0 || k as usize >= self.values.len() {
            panic!("coefficient {n} outside table");
        }
        self.values[k as usize]
    }

    pub fn range(&self) -> RangeInclusive<i64> {
        self.lo..=self.lo + self.values.len() as i64 - 1
    }
}

/// Flipped symbol `t -> sym(1/t)`.
pub fn tilde(sym: &PCSymbol) -> PCSymbol {
    sym.tilde()
}

/// Extend `g0` from the upper half-circle to a matching function `g` with
/// `g * g~ = 1`: `g = g0` on the closed upper half and `g(t) = 1/g0(conj t)` below.
pub fn extend_half_circle(g0: &PCSymbol, tol: &Tolerances) -> Result<PCSymbol> {
    for (angle, name) in [(0.0, "+1"), (PI, "-1")] {
        let l = g0.eval_angle(angle, Side::Left, tol.invertibility)?;
        let r = g0.eval_angle(angle, Side::Right, tol.invertibility)?;
        if (l - r).norm() > tol.matching {
            return Err(Error::PreconditionViolation(format!(
                "g0 is not continuous at {name}"
            )));
        }
        if (r - 1.0).norm() > tol.matching && (r + 1.0).norm() > tol.matching {
            return Err(Error::PreconditionViolation(format!(
                "g0({name}) = {r} is not +1 or -1"
            )));
        }
    }
    if g0.min_modulus(tol) <= tol.invertibility {
        return Err(Error::PreconditionViolation("g0 is not invertible".into()));
    }
    if let Expr::Const(v) = g0.expr() {
        return Ok(PCSymbol::constant(*v));
    }
    Ok(PCSymbol::from_expr(Expr::HalfCircleExtension(g0.clone())))
}

/// Largest deviation between two symbols over a grid built from both, both sides.
pub fn grid_distance(x: &PCSymbol, y: &PCSymbol, n: usize, tol: &Tolerances) -> Result<f64> {
    let mut angles: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    angles.extend(x.breakpoints());
    angles.extend(y.breakpoints());
    angles.push(PI);
    let mut worst = 0.0f64;
    for a in dedup_angles(angles) {
        for s in [Side::Left, Side::Right] {
            let d = (x.eval_angle(a, s, tol.invertibility)? - y.eval_angle(a, s, tol.invertibility)?).norm();
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// Distance from an angle to the nearest breakpoint of a symbol.
pub fn distance_to_breaks(sym: &PCSymbol, angle: f64) -> f64 {
    sym.breakpoints()
        .into_iter()
        .map(|b| angle_distance(b, angle))
        .fold(f64::INFINITY, f64::min)
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl std::ops::$trait<&PCSymbol> for &PCSymbol {
            type Output = PCSymbol;
            fn $method(self, rhs: &PCSymbol) -> PCSymbol {
                let f: fn(&PCSymbol, &PCSymbol) -> PCSymbol = $body;
                f(self, rhs)
            }
        }
        impl std::ops::$trait<PCSymbol> for PCSymbol {
            type Output = PCSymbol;
            fn $method(self, rhs: PCSymbol) -> PCSymbol {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| PCSymbol::sum(vec![a.clone(), b.clone()]));
binop!(Sub, sub, |a, b| PCSymbol::sum(vec![a.clone(), b.scale(c(-1.0, 0.0))]));
binop!(Mul, mul, |a, b| PCSymbol::product(vec![a.clone(), b.clone()]));
binop!(Div, div, |a, b| PCSymbol::product(vec![a.clone(), b.inverse()]));

impl std::ops::Neg for &PCSymbol {
    type Output = PCSymbol;
    fn neg(self) -> PCSymbol {
        self.scale(c(-1.0, 0.0))
    }
}

impl std::ops::Neg for PCSymbol {
    type Output = PCSymbol;
    fn neg(self) -> PCSymbol {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn ex1_a() -> PCSymbol {
        PCSymbol::constant(Complex64::from_polar(1.0, FRAC_PI_4))
            * PCSymbol::power_arc(c(0.25, 0.0), CirclePoint::ONE)
    }

    fn ex4_a() -> PCSymbol {
        PCSymbol::piecewise_const(
            vec![CirclePoint::new(-PI / 2.0), CirclePoint::new(PI / 2.0)],
            vec![c(1.0, 0.0), c(-1.0, 0.0)],
        )
        .unwrap()
    }

    fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
        (x - y).norm() < tol
    }

    #[test]
    fn power_arc_one_sided_limits() {
        let phi = PCSymbol::power_arc(c(0.5, 0.0), CirclePoint::ONE);
        assert!(close(phi.evaluate(CirclePoint::ONE, Side::Right).unwrap(), c(0.0, -1.0), 1e-15));
        assert!(close(phi.evaluate(CirclePoint::ONE, Side::Left).unwrap(), c(0.0, 1.0), 1e-15));
    }

    #[test]
    fn monomial_is_continuous() {
        let m = PCSymbol::monomial(3);
        for side in [Side::Left, Side::Right] {
            let v = m.evaluate(CirclePoint::new(PI / 2.0), side).unwrap();
            assert!(close(v, c(0.0, -1.0), 1e-15));
        }
        assert!(m.jump_set().is_empty());
    }

    #[test]
    fn example_one_symbol_limits() {
        let a = ex1_a();
        assert!(close(a.evaluate(CirclePoint::ONE, Side::Right).unwrap(), c(1.0, 0.0), 1e-15));
        assert!(close(a.evaluate(CirclePoint::ONE, Side::Left).unwrap(), c(0.0, 1.0), 1e-15));
        let jumps = a.jump_set();
        assert_eq!(jumps.len(), 1);
        assert_eq!(jumps[0].point, CirclePoint::ONE);
        assert!(close(jumps[0].left, c(0.0, 1.0), 1e-15));
        assert!(close(jumps[0].right, c(1.0, 0.0), 1e-15));
    }

    #[test]
    fn example_one_product_with_flip_is_constant() {
        let a = ex1_a();
        let prod = &a * &a.tilde();
        for (angle, side) in prod.grid(256) {
            let v = prod.eval_angle(angle, side, 1e-9).unwrap();
            assert!(close(v, c(0.0, 1.0), 1e-13), "{angle} {side:?} {v}");
        }
    }

    #[test]
    fn example_four_jumps() {
        let a = ex4_a();
        let jumps = a.jump_set();
        assert_eq!(jumps.len(), 2);
        assert!(jumps[0].point.is_close(&CirclePoint::new(PI / 2.0)));
        assert!(close(jumps[0].left, c(1.0, 0.0), 1e-15));
        assert!(close(jumps[0].right, c(-1.0, 0.0), 1e-15));
        assert!(jumps[1].point.is_close(&CirclePoint::new(1.5 * PI)));
        assert!(close(jumps[1].left, c(-1.0, 0.0), 1e-15));
        assert!(close(jumps[1].right, c(1.0, 0.0), 1e-15));
        assert!(a.fourier_coefficient(0).unwrap().value.norm() < 1e-15);
        assert!(grid_distance(&a.tilde(), &a, 256, &Tolerances::default()).unwrap() < 1e-15);
    }

    #[test]
    fn tilde_of_monomial() {
        assert_eq!(PCSymbol::monomial(4).tilde(), PCSymbol::monomial(-4));
    }

    #[test]
    fn tilde_reflection_law_for_composite_trees() {
        let g0 = PCSymbol::monomial(2);
        let ext = extend_half_circle(&g0, &Tolerances::default()).unwrap();
        let s = &(&ex1_a() + &ex4_a()) * &ext.inverse();
        let st = s.tilde();
        for (angle, side) in s.grid(512) {
            let lhs = st.eval_angle(angle, side, 1e-9).unwrap();
            let rhs = s.eval_angle(canonical_angle(-angle), side.flip(), 1e-9).unwrap();
            assert!(close(lhs, rhs, 1e-14));
        }
    }

    #[test]
    fn inverse_near_zero_errors() {
        let z = PCSymbol::monomial(1) - PCSymbol::one();
        let inv = z.inverse();
        let err = inv.evaluate(CirclePoint::ONE, Side::Right).unwrap_err();
        assert!(matches!(err, Error::DivisionBySmallModulus { .. }));
    }

    #[test]
    fn monomial_coefficients() {
        let m = PCSymbol::monomial(5);
        assert_eq!(m.fourier_coefficient(5).unwrap().value, c(1.0, 0.0));
        assert_eq!(m.fourier_coefficient(4).unwrap().value, c(0.0, 0.0));
        assert_eq!(m.fourier_coefficient(5).unwrap().provenance, Provenance::Analytic);
    }

    #[test]
    fn power_arc_coefficient_matches_quadrature() {
        let phi = PCSymbol::power_arc(c(0.25, 0.0), CirclePoint::ONE);
        let tol = Tolerances::default();
        let exact = phi.fourier_coefficients(-8..=8, &tol).unwrap();
        let quad = phi.quadrature_coefficients(-8..=8, &tol).unwrap();
        for (e, q) in exact.iter().zip(&quad) {
            assert!(close(e.value, q.value, 1e-10), "{e:?} {q:?}");
            assert!(q.quadrature_error_bound.unwrap() > 0.0);
        }
    }

    #[test]
    fn half_circle_extension_is_matching() {
        let tol = Tolerances::default();
        let g = extend_half_circle(&PCSymbol::monomial(2), &tol).unwrap();
        let prod = &g * &g.tilde();
        for (angle, side) in prod.grid(GRID_SIZE) {
            assert!(close(prod.eval_angle(angle, side, 1e-9).unwrap(), c(1.0, 0.0), 1e-12));
        }
        assert_eq!(extend_half_circle(&PCSymbol::one(), &tol).unwrap(), PCSymbol::one());
    }

    #[test]
    fn half_circle_extension_rejects_bad_endpoint() {
        let tol = Tolerances::default();
        let g0 = PCSymbol::real(2.0) * PCSymbol::monomial(2);
        assert!(matches!(
            extend_half_circle(&g0, &tol),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn piecewise_const_rejects_mismatch() {
        assert!(PCSymbol::piecewise_const(vec![CirclePoint::ONE], vec![]).is_err());
    }
}
