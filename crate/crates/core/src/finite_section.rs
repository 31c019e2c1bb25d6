//! Dense truncations of Toeplitz, Hankel, projection, flip and block operators,
//! the exact entry-level product identities, SVD kernels and the finite-section
//! realization of the kernel formula for matching pairs.

use crate::calculus::{toeplitz_index, HardyExponent};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matching::MatchingPair;
use crate::symbol::PCSymbol;
use crate::tolerance::Tolerances;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use std::io::Write;

type C = Complex64;

fn zero() -> C {
    C::new(0.0, 0.0)
}

/// Which monomials index the rows and columns of a section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// `t^0, ..., t^(n-1)`.
    Analytic,
    /// `t^-half, ..., t^(half-1)`, closed under the flip `t^k -> t^(-k-1)`.
    Laurent { half: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSectionMatrix {
    pub basis: Basis,
    pub matrix: DMatrix<C>,
}

impl FiniteSectionMatrix {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `rows x cols` section `(a_{j-k})` of `T(a)`.
pub fn toeplitz_rect(a: &PCSymbol, rows: usize, cols: usize, tol: &Tolerances) -> Result<DMatrix<C>> {
    if rows == 0 || cols == 0 {
        return Ok(DMatrix::zeros(rows, cols));
    }
    let table = a.coefficient_table(-(cols as i64 - 1)..=(rows as i64 - 1), tol)?;
    Ok(DMatrix::from_fn(rows, cols, |j, k| table.get(j as i64 - k as i64)))
}

pub fn toeplitz_matrix(a: &PCSymbol, n: usize, tol: &Tolerances) -> Result<FiniteSectionMatrix> {
    if n == 0 {
        return Err(Error::PreconditionViolation("section size must be positive".into()));
    }
    Ok(FiniteSectionMatrix {
        basis: Basis::Analytic,
        matrix: toeplitz_rect(a, n, n, tol)?,
    })
}

/// `n x n` section `(b_{j+k+1})` of `H(b)`.
pub fn hankel_matrix(b: &PCSymbol, n: usize, tol: &Tolerances) -> Result<FiniteSectionMatrix> {
    if n == 0 {
        return Err(Error::PreconditionViolation("section size must be positive".into()));
    }
    let table = b.coefficient_table(1..=(2 * n as i64 - 1), tol)?;
    Ok(FiniteSectionMatrix {
        basis: Basis::Analytic,
        matrix: DMatrix::from_fn(n, n, |j, k| table.get((j + k + 1) as i64)),
    })
}

/// Section of `T(a) + sign * H(b)`.
pub fn th_section(a: &PCSymbol, b: &PCSymbol, sign: f64, n: usize, tol: &Tolerances) -> Result<DMatrix<C>> {
    let t = toeplitz_matrix(a, n, tol)?.matrix;
    let h = hankel_matrix(b, n, tol)?.matrix;
    Ok(t + h * C::new(sign, 0.0))
}

/// Section of the multiplication operator by `a` on the Laurent basis.
pub fn laurent_section(a: &PCSymbol, half: usize, tol: &Tolerances) -> Result<FiniteSectionMatrix> {
    let n = 2 * half;
    Ok(FiniteSectionMatrix {
        basis: Basis::Laurent { half },
        matrix: toeplitz_rect(a, n, n, tol)?,
    })
}

/// `P`, `Q = I - P` and the flip `J` on the Laurent basis `t^-half..t^(half-1)`.
#[derive(Debug, Clone)]
pub struct LaurentOps {
    pub p: DMatrix<C>,
    pub q: DMatrix<C>,
    pub j: DMatrix<C>,
}

pub fn laurent_ops(half: usize) -> LaurentOps {
    let n = 2 * half;
    let one = C::new(1.0, 0.0);
    let p = DMatrix::from_fn(n, n, |r, c| if r == c && r >= half { one } else { zero() });
    let q = DMatrix::identity(n, n) - &p;
    // t^k at index k + half goes to t^(-k-1) at index half - k - 1 = n - 1 - index.
    let j = DMatrix::from_fn(n, n, |r, c| if r + c == n - 1 { one } else { zero() });
    LaurentOps { p, q, j }
}

fn max_abs(m: &DMatrix<C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Error of the block identity
/// `[[X, Y], [JYJ, JXJ]] = 1/2 [[I, I], [J, -J]] diag(X + YJ, X - YJ) [[I, J], [I, -J]]`.
pub fn identity3_error(x: &DMatrix<C>, y: &DMatrix<C>, j: &DMatrix<C>) -> f64 {
    let n = x.nrows();
    let id = DMatrix::<C>::identity(n, n);
    let lhs = block(x, y, &(j * y * j), &(j * x * j));
    let left = block(&id, &id, j, &(-j)) * C::new(0.5, 0.0);
    let yj = y * j;
    let mid = block(&(x + &yj), &DMatrix::zeros(n, n), &DMatrix::zeros(n, n), &(x - &yj));
    let right = block(&id, j, &id, &(-j));
    max_abs(&(lhs - left * mid * right))
}

/// Error of `a p + (e - p) = (p a p + (e - p)) (e + (e - p) a p)`.
pub fn identity7_error(a: &DMatrix<C>, p: &DMatrix<C>) -> f64 {
    let n = a.nrows();
    let e = DMatrix::<C>::identity(n, n);
    let ep = &e - p;
    let lhs = a * p + &ep;
    let rhs = (p * a * p + &ep) * (&e + &ep * a * p);
    max_abs(&(lhs - rhs))
}

fn block(a: &DMatrix<C>, b: &DMatrix<C>, c: &DMatrix<C>, d: &DMatrix<C>) -> DMatrix<C> {
    let (r, s) = (a.nrows(), a.ncols());
    let mut out = DMatrix::zeros(r + c.nrows(), s + b.ncols());
    out.view_mut((0, 0), (r, s)).copy_from(a);
    out.view_mut((0, s), (b.nrows(), b.ncols())).copy_from(b);
    out.view_mut((r, 0), (c.nrows(), c.ncols())).copy_from(c);
    out.view_mut((r, s), (d.nrows(), d.ncols())).copy_from(d);
    out
}

/// The block operator `[[PaP + Q, PbQ], [Q b~ P, Q a~ Q + P]]` on the Laurent
/// basis together with the deviations of its two alternative forms.
#[derive(Debug, Clone)]
pub struct BlockAssembly {
    pub operator: DMatrix<C>,
    /// Deviation from `[[X, Y], [JYJ, JXJ]]` with `X = PaP + Q`, `Y = PbQ`.
    pub flip_form_error: f64,
    /// Deviation of the diagonalized factorization.
    pub identity3_error: f64,
    /// Deviation of `p M p + (e - p)` from the operator, `p = diag(P, Q)`, `M = [[a, b], [b~, a~]]`.
    pub projection_form_error: f64,
}

pub fn block_assembly(a: &PCSymbol, b: &PCSymbol, half: usize, tol: &Tolerances) -> Result<BlockAssembly> {
    let ops = laurent_ops(half);
    let ma = laurent_section(a, half, tol)?.matrix;
    let mb = laurent_section(b, half, tol)?.matrix;
    let mat = laurent_section(&a.tilde(), half, tol)?.matrix;
    let mbt = laurent_section(&b.tilde(), half, tol)?.matrix;
    let (p, q, j) = (&ops.p, &ops.q, &ops.j);
    let operator = block(&(p * &ma * p + q), &(p * &mb * q), &(q * &mbt * p), &(q * &mat * q + p));
    let x = p * &ma * p + q;
    let y = p * &mb * q;
    let flip = block(&x, &y, &(j * &y * j), &(j * &x * j));
    let pp = block(p, &DMatrix::zeros(2 * half, 2 * half), &DMatrix::zeros(2 * half, 2 * half), q);
    let m = block(&ma, &mb, &mbt, &mat);
    let e = DMatrix::<C>::identity(4 * half, 4 * half);
    let projected = &pp * m * &pp + (e - &pp);
    Ok(BlockAssembly {
        flip_form_error: max_abs(&(&operator - flip)),
        identity3_error: identity3_error(&x, &y, j),
        projection_form_error: max_abs(&(&operator - projected)),
        operator,
    })
}

/// Entry-level check of `T(ab) = T(a)T(b) + H(a)H(b~)` and
/// `H(ab) = T(a)H(b) + H(a)T(b~)` for Laurent polynomials on a `window x window` corner.
pub fn verify_product_identities(a: &PCSymbol, b: &PCSymbol, window: usize) -> Result<f64> {
    let pa = LaurentPoly::from_symbol(a)?;
    let pb = LaurentPoly::from_symbol(b)?;
    let ab = pa.mul(&pb);
    let span = |p: &LaurentPoly| p.support().map(|(lo, hi)| lo.abs().max(hi.abs())).unwrap_or(0);
    let reach = window as i64 + span(&pa) + span(&pb) + 2;
    let mut worst = 0.0f64;
    for j in 0..window as i64 {
        for k in 0..window as i64 {
            let mut t_prod = zero();
            let mut h_prod = zero();
            for l in 0..reach {
                t_prod += pa.coeff(j - l) * pb.coeff(l - k) + pa.coeff(j + l + 1) * pb.coeff(-(l + k + 1));
                h_prod += pa.coeff(j - l) * pb.coeff(l + k + 1) + pa.coeff(j + l + 1) * pb.coeff(k - l);
            }
            worst = worst
                .max((ab.coeff(j - k) - t_prod).norm())
                .max((ab.coeff(j + k + 1) - h_prod).norm());
        }
    }
    Ok(worst)
}

pub fn singular_values(m: &DMatrix<C>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().cloned().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// SVD kernel with a mandatory spectral gap.
#[derive(Debug, Clone, Serialize)]
pub struct NumericalKernel {
    pub dimension: usize,
    #[serde(skip)]
    pub basis: Vec<DVector<C>>,
    pub sv_threshold: f64,
    pub smallest_kept_sv: Option<f64>,
    pub largest_dropped_sv: Option<f64>,
}

/// Required ratio between the smallest kept and largest dropped singular value.
pub const SPECTRAL_GAP: f64 = 100.0;

fn split_singular_values(s: &[f64], threshold: f64) -> Result<(Option<f64>, Option<f64>)> {
    let kept = s.iter().cloned().filter(|&x| x >= threshold).fold(None, |m: Option<f64>, x| {
        Some(m.map_or(x, |m| m.min(x)))
    });
    let dropped = s.iter().cloned().filter(|&x| x < threshold).fold(None, |m: Option<f64>, x| {
        Some(m.map_or(x, |m| m.max(x)))
    });
    if let (Some(k), Some(d)) = (kept, dropped) {
        if k < SPECTRAL_GAP * d {
            return Err(Error::NoSpectralGap { kept: k, dropped: d });
        }
    }
    Ok((kept, dropped))
}

pub fn numerical_kernel(m: &DMatrix<C>, sv_threshold: f64) -> Result<NumericalKernel> {
    let (rows, cols) = m.shape();
    let square = if rows < cols {
        let mut padded = DMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V");
    let svals: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let (kept, dropped) = split_singular_values(&svals, sv_threshold)?;
    let basis: Vec<DVector<C>> = svals
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < sv_threshold)
        .map(|(i, _)| v_t.row(i).transpose().map(|z| z.conj()))
        .collect();
    Ok(NumericalKernel {
        dimension: basis.len(),
        basis,
        sv_threshold,
        smallest_kept_sv: kept,
        largest_dropped_sv: dropped,
    })
}

/// Numerical rank with the same spectral-gap rule as [`numerical_kernel`].
pub fn numerical_rank(m: &DMatrix<C>, sv_threshold: f64) -> Result<usize> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    let s = singular_values(m);
    split_singular_values(&s, sv_threshold)?;
    Ok(s.iter().filter(|&&x| x >= sv_threshold).count())
}

/// Euclidean distance of `v` from the span of an orthonormal `basis`.
pub fn distance_to_span(v: &DVector<C>, basis: &[DVector<C>]) -> f64 {
    let mut r = v.clone();
    for b in basis {
        let c = b.dotc(&r);
        r -= b * c;
    }
    r.norm()
}

/// First `n_out` coefficients of `(T(a) + sign H(b)) x` for a finite coefficient vector `x`.
pub fn apply_operator(
    a: &PCSymbol,
    b: &PCSymbol,
    sign: f64,
    poly: &[C],
    n_out: usize,
    tol: &Tolerances,
) -> Result<Vec<C>> {
    if poly.is_empty() || n_out == 0 {
        return Ok(vec![zero(); n_out]);
    }
    let len = poly.len() as i64;
    let ta = a.coefficient_table(-(len - 1)..=(n_out as i64 - 1), tol)?;
    let tb = b.coefficient_table(1..=(n_out as i64 + len - 1), tol)?;
    Ok((0..n_out as i64)
        .map(|k| {
            poly.iter().enumerate().fold(zero(), |acc, (j, x)| {
                let j = j as i64;
                acc + (ta.get(k - j) + tb.get(k + j + 1) * sign) * x
            })
        })
        .collect())
}

/// Solve `T_n(psi) x = rhs` and report the residual `|T_n x - rhs|`.
pub fn section_solve(psi: &PCSymbol, rhs: &DVector<C>, tol: &Tolerances) -> Result<(DVector<C>, f64)> {
    let n = rhs.len();
    let t = toeplitz_matrix(psi, n, tol)?.matrix;
    let x = t
        .clone()
        .lu()
        .solve(rhs)
        .ok_or_else(|| Error::NotInvertible("finite section is singular".into()))?;
    let residual = (&t * &x - rhs).norm();
    Ok((x, residual))
}

/// Sign pattern of `(kappa1, kappa2) = (ind T(d), ind T(c))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrant {
    PlusPlus,
    MinusPlus,
    MinusMinus,
    PlusMinus,
}

pub fn quadrant(kappa1: i64, kappa2: i64) -> Quadrant {
    match (kappa1 >= 0, kappa2 >= 0) {
        (true, true) => Quadrant::PlusPlus,
        (false, true) => Quadrant::MinusPlus,
        (false, false) => Quadrant::MinusMinus,
        (true, false) => Quadrant::PlusMinus,
    }
}

/// Predicted `dim ker diag(T(a) + H(b), T(a) - H(b))`.
#[derive(Debug, Clone, Serialize)]
pub struct KernelFormula {
    pub kappa1: i64,
    pub kappa2: i64,
    pub quadrant: Quadrant,
    pub dimension: i64,
    /// Same evaluation with the projection of rank `-kappa2 + 2`.
    pub alternative_dimension: Option<i64>,
    /// The compressed operator as rows of `(re, im)` pairs, when evaluated.
    pub compressed: Option<Vec<Vec<(f64, f64)>>>,
    /// Largest residual of the section solves.
    pub solve_residual: f64,
}

pub fn kernel_formula_eval(pair: &MatchingPair, p: &HardyExponent, n: usize, tol: &Tolerances) -> Result<KernelFormula> {
    let k1 = toeplitz_index(&pair.d, p, tol)?
        .index()
        .ok_or_else(|| Error::NotFredholm("T(d)".into()))?;
    let k2 = toeplitz_index(&pair.c, p, tol)?
        .index()
        .ok_or_else(|| Error::NotFredholm("T(c)".into()))?;
    let q = quadrant(k1, k2);
    let mut out = KernelFormula {
        kappa1: k1,
        kappa2: k2,
        quadrant: q,
        dimension: 0,
        alternative_dimension: None,
        compressed: None,
        solve_residual: 0.0,
    };
    match q {
        Quadrant::PlusPlus => out.dimension = k1 + k2,
        Quadrant::MinusPlus => out.dimension = k2,
        Quadrant::MinusMinus => out.dimension = 0,
        Quadrant::PlusMinus if k1 == 0 => out.dimension = 0,
        Quadrant::PlusMinus => {
            let rows = (-k2) as usize;
            let cols = k1 as usize;
            if n < rows + 2 || n < cols {
                return Err(Error::PreconditionViolation(format!("section size {n} too small")));
            }
            let v0 = &pair.d * &PCSymbol::monomial(k1);
            let u0 = &pair.c * &PCSymbol::monomial(k2);
            let w = pair.a.tilde().inverse();
            let tw = toeplitz_matrix(&w, n, tol)?.matrix;
            let mut z_cols = Vec::with_capacity(cols);
            let mut residual = 0.0f64;
            for j in 0..cols {
                let mut e = DVector::zeros(n);
                e[j] = C::new(1.0, 0.0);
                let (x, r1) = section_solve(&v0, &e, tol)?;
                let y = &tw * x;
                let (z, r2) = section_solve(&u0, &y, tol)?;
                residual = residual.max(r1).max(r2);
                z_cols.push(z);
            }
            let compress = |r: usize| DMatrix::from_fn(r, cols, |i, j| z_cols[j][i]);
            let m = compress(rows);
            let rank = numerical_rank(&m, tol.sv_threshold)?;
            out.dimension = k1 - rank as i64;
            out.alternative_dimension = numerical_rank(&compress(rows + 2), tol.sv_threshold)
                .ok()
                .map(|r| k1 - r as i64);
            out.compressed = Some(
                (0..rows)
                    .map(|i| (0..cols).map(|j| (m[(i, j)].re, m[(i, j)].im)).collect())
                    .collect(),
            );
            out.solve_residual = residual;
        }
    }
    Ok(out)
}

/// Writes `row,col,re,im` rows.
pub fn write_matrix_csv<W: Write>(m: &DMatrix<C>, mut out: W) -> std::io::Result<()> {
    writeln!(out, "row,col,re,im")?;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            writeln!(out, "{r},{c},{:.17e},{:.17e}", z.re, z.im)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::CirclePoint;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn ex1_a() -> PCSymbol {
        PCSymbol::constant(C::from_polar(1.0, FRAC_PI_4)) * PCSymbol::power_arc(c(0.25, 0.0), CirclePoint::ONE)
    }

    #[test]
    fn shift_and_constant_sections() {
        let tol = Tolerances::default();
        let t = toeplitz_matrix(&PCSymbol::monomial(1), 4, &tol).unwrap().matrix;
        for j in 0..4 {
            for k in 0..4 {
                let want = if j == k + 1 { c(1.0, 0.0) } else { zero() };
                assert_eq!(t[(j, k)], want);
            }
        }
        let i = toeplitz_matrix(&PCSymbol::constant(c(0.0, 1.0)), 5, &tol).unwrap().matrix;
        assert_eq!(i, DMatrix::identity(5, 5) * c(0.0, 1.0));
    }

    #[test]
    fn hankel_sections() {
        let tol = Tolerances::default();
        let h = hankel_matrix(&PCSymbol::monomial(1), 3, &tol).unwrap().matrix;
        assert_eq!(h[(0, 0)], c(1.0, 0.0));
        assert_eq!(h.iter().filter(|z| z.norm() != 0.0).count(), 1);
        let h = hankel_matrix(&PCSymbol::monomial(-1), 6, &tol).unwrap().matrix;
        assert_eq!(max_abs(&h), 0.0);
        let b = PCSymbol::monomial(2) + PCSymbol::monomial(1);
        let h = hankel_matrix(&b, 8, &tol).unwrap().matrix;
        assert!(numerical_rank(&h, 1e-8).unwrap() <= 2);
    }

    #[test]
    fn example_one_leading_entry() {
        let tol = Tolerances::default();
        let a = ex1_a();
        let t = toeplitz_matrix(&a, 8, &tol).unwrap().matrix;
        let q = a.quadrature_coefficients(0..=0, &tol).unwrap()[0].value;
        // (1/2pi) int_0^{2pi} e^{i pi/4} e^{i(z - pi)/4} dz = (i - 1)/(i pi / 2) * e^{i pi/4} e^{-i pi/4} / ...
        let closed = (c(0.0, 1.0) - 1.0) / (c(0.0, 0.25) * std::f64::consts::TAU);
        assert!((t[(0, 0)] - q).norm() < 1e-10);
        assert!((t[(0, 0)] - closed).norm() < 1e-14);
    }

    #[test]
    fn flip_relations() {
        let ops = laurent_ops(5);
        let id = DMatrix::<C>::identity(10, 10);
        assert_eq!(&ops.j * &ops.j, id);
        assert_eq!(&ops.j * &ops.p * &ops.j, ops.q);
    }

    #[test]
    fn block_identities_for_polynomials() {
        let tol = Tolerances::default();
        let a = PCSymbol::monomial(2) + PCSymbol::monomial(-1).scale(c(0.5, 0.3)) + PCSymbol::real(2.0);
        let b = PCSymbol::monomial(4).scale(c(0.0, 1.0)) + PCSymbol::monomial(-3);
        let blk = block_assembly(&a, &b, 12, &tol).unwrap();
        assert!(blk.flip_form_error < 1e-12);
        assert!(blk.identity3_error < 1e-12);
        assert!(blk.projection_form_error < 1e-12);
    }

    #[test]
    fn product_identities() {
        let t = PCSymbol::monomial(1);
        assert_eq!(verify_product_identities(&t, &t, 8).unwrap(), 0.0);
        let e = verify_product_identities(&PCSymbol::monomial(2), &PCSymbol::monomial(-3), 10).unwrap();
        assert_eq!(e, 0.0);
        let phi = PCSymbol::power_arc(c(0.5, 0.0), CirclePoint::ONE);
        assert_eq!(verify_product_identities(&phi, &t, 4), Err(Error::NotPolynomial));
    }

    #[test]
    fn shift_kernels() {
        let tol = Tolerances::default();
        let t = toeplitz_matrix(&PCSymbol::monomial(1), 8, &tol).unwrap().matrix;
        assert_eq!(numerical_kernel(&t, 1e-8).unwrap().dimension, 1);
        // The finite section of the forward shift loses its last column; on
        // non-square sections with one extra row the kernel is trivial.
        let rect = toeplitz_rect(&PCSymbol::monomial(1), 9, 8, &tol).unwrap();
        assert_eq!(numerical_kernel(&rect, 1e-8).unwrap().dimension, 0);
        let adj = toeplitz_rect(&PCSymbol::monomial(-1), 8, 9, &tol).unwrap();
        assert_eq!(numerical_kernel(&adj, 1e-8).unwrap().dimension, 1);
    }

    #[test]
    fn adjoint_sections() {
        let tol = Tolerances::default();
        let a = ex1_a();
        let t = toeplitz_matrix(&a, 12, &tol).unwrap().matrix;
        let ta = toeplitz_matrix(&a.conjugate(), 12, &tol).unwrap().matrix;
        assert!(max_abs(&(t.adjoint() - ta)) < 1e-15);
        let b = &a * &PCSymbol::monomial(2);
        let h = hankel_matrix(&b, 12, &tol).unwrap().matrix;
        let hs = hankel_matrix(&b.tilde().conjugate(), 12, &tol).unwrap().matrix;
        assert!(max_abs(&(h.adjoint() - hs)) < 1e-15);
    }

    #[test]
    fn constant_in_kernel_of_example_one_minus() {
        let tol = Tolerances::default();
        let a = ex1_a();
        let b = &a * &PCSymbol::monomial(1);
        let out = apply_operator(&a, &b, -1.0, &[c(1.0, 0.0)], 256, &tol).unwrap();
        assert!(out.iter().all(|z| z.norm() < 1e-10));
        let out = apply_operator(&a, &b, 1.0, &[zero()], 16, &tol).unwrap();
        assert!(out.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn no_gap_is_reported() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0, 0.0), c(1e-9, 0.0), c(5e-8, 0.0)]));
        assert!(matches!(numerical_kernel(&m, 1e-8), Err(Error::NoSpectralGap { .. })));
    }

    #[test]
    fn matrix_csv() {
        let mut buf = Vec::new();
        write_matrix_csv(&DMatrix::<C>::identity(2, 2), &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().count(), 5);
        assert!(s.starts_with("row,col,re,im"));
    }
}
