//! Classification of `T(a) + H(b)` and `T(a) - H(b)` for matching pairs:
//! Fredholmness, indices, kernel and cokernel dimensions, one-sided invertibility,
//! limit indices in `p`, and cross-validation of the independent index routes.

use crate::calculus::{
    block_toeplitz_index, critical_exponents, th_fredholm_check, th_index, toeplitz_index, FredholmIndex,
    HardyExponent,
};
use crate::error::{Error, Result};
use crate::finite_section::{
    apply_operator, kernel_formula_eval, numerical_kernel, th_section, toeplitz_rect, KernelFormula,
};
use crate::matching::MatchingPair;
use crate::symbol::PCSymbol;
use crate::tolerance::Tolerances;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Invertible,
    LeftInvertible,
    RightInvertible,
    FredholmUnclassified,
    NotOneSidedInvertible,
    NotFredholm,
}

impl Classification {
    fn from_dims(ker: i64, coker: i64) -> Self {
        match (ker == 0, coker == 0) {
            (true, true) => Classification::Invertible,
            (true, false) => Classification::LeftInvertible,
            (false, true) => Classification::RightInvertible,
            (false, false) => Classification::NotOneSidedInvertible,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorRecord {
    pub operator: String,
    pub fredholm: bool,
    pub index: Option<i64>,
    pub kernel_dim: Option<i64>,
    pub cokernel_dim: Option<i64>,
    /// Dimension of the verified polynomial kernel elements, when computed.
    pub kernel_witnesses: Option<i64>,
    pub classification: Classification,
}

impl OperatorRecord {
    fn not_fredholm(operator: &str) -> Self {
        OperatorRecord {
            operator: operator.into(),
            fredholm: false,
            index: None,
            kernel_dim: None,
            cokernel_dim: None,
            kernel_witnesses: None,
            classification: Classification::NotFredholm,
        }
    }

    fn fredholm(operator: &str, index: i64) -> Self {
        OperatorRecord {
            operator: operator.into(),
            fredholm: true,
            index: Some(index),
            kernel_dim: None,
            cokernel_dim: None,
            kernel_witnesses: None,
            classification: Classification::FredholmUnclassified,
        }
    }

    fn set_kernel(&mut self, ker: i64) {
        let ind = self.index.expect("Fredholm record");
        self.kernel_dim = Some(ker);
        self.cokernel_dim = Some(ker - ind);
        self.classification = Classification::from_dims(ker, ker - ind);
    }

    /// Uses only `dim ker >= lower`.
    fn set_kernel_lower_bound(&mut self, lower: i64) {
        let ind = self.index.expect("Fredholm record");
        if lower >= 1 && lower - ind >= 1 {
            self.classification = Classification::NotOneSidedInvertible;
        }
    }

    /// Scalar Toeplitz operators have a trivial kernel or cokernel.
    fn toeplitz(operator: &str, idx: FredholmIndex) -> Self {
        match idx {
            FredholmIndex::Fredholm(k) => {
                let mut r = OperatorRecord::fredholm(operator, k);
                r.set_kernel(k.max(0));
                r
            }
            FredholmIndex::NotFredholm { .. } => OperatorRecord::not_fredholm(operator),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probing {
    pub s_used: f64,
    /// `(lim ind T(c), lim ind T(d))` as `s -> p+`.
    pub limit_indices: (i64, i64),
}

#[derive(Debug, Clone, Serialize)]
pub struct FredholmReport {
    pub p: f64,
    pub plus: OperatorRecord,
    pub minus: OperatorRecord,
    pub toeplitz_c: OperatorRecord,
    pub toeplitz_d: OperatorRecord,
    pub kappa1: Option<i64>,
    pub kappa2: Option<i64>,
    /// Classification of `T(a) + H(b)`.
    pub classification: Classification,
    pub kernel_dim: Option<i64>,
    pub cokernel_dim: Option<i64>,
    /// `dim ker diag(T(a) + H(b), T(a) - H(b))` when determined.
    pub diag_kernel_dim: Option<i64>,
    pub kernel_formula: Option<KernelFormula>,
    /// Set when only "at least one of the two operators is not one-sided invertible" is known.
    pub disjunction: Option<String>,
    pub evidence: Vec<String>,
    pub probing: Option<Probing>,
    /// Value of `a*a~` when it is constant on the grid.
    pub normalization: Option<Complex64>,
}

impl FredholmReport {
    pub fn record(&self, sign: f64) -> &OperatorRecord {
        if sign > 0.0 {
            &self.plus
        } else {
            &self.minus
        }
    }

    fn sync_primary(&mut self) {
        self.classification = self.plus.classification;
        self.kernel_dim = self.plus.kernel_dim;
        self.cokernel_dim = self.plus.cokernel_dim;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyzerOptions {
    /// Section size for the kernel formula and kernel witnesses.
    pub section_n: usize,
    pub tolerances: Tolerances,
}

impl Default for AnalyzerOptions {
    fn default() -> Self {
        AnalyzerOptions {
            section_n: 128,
            tolerances: Tolerances::default(),
        }
    }
}

const WITNESS_RESIDUAL: f64 = 1e-8;

/// Number of linearly independent kernel elements of `T(a) + sign H(b)` found
/// among polynomials of degree `< n/2`: the kernel of the `2n x n/2` section,
/// each basis vector re-checked against `4n` output coefficients.
pub fn kernel_witnesses(a: &PCSymbol, b: &PCSymbol, sign: f64, n: usize, tol: &Tolerances) -> Result<usize> {
    let cols = (n / 2).max(1);
    let rows = 2 * n;
    let t = toeplitz_rect(a, rows, cols, tol)?;
    let table = b.coefficient_table(1..=(rows + cols) as i64, tol)?;
    let h = DMatrix::from_fn(rows, cols, |j, k| table.get((j + k + 1) as i64));
    let m = t + h * Complex64::new(sign, 0.0);
    let kernel = match numerical_kernel(&m, tol.sv_threshold) {
        Ok(k) => k,
        Err(Error::NoSpectralGap { .. }) => return Ok(0),
        Err(e) => return Err(e),
    };
    let mut count = 0;
    for v in &kernel.basis {
        let poly: Vec<Complex64> = v.iter().cloned().collect();
        let out = apply_operator(a, b, sign, &poly, 4 * n, tol)?;
        let r = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if r < WITNESS_RESIDUAL {
            count += 1;
        }
    }
    Ok(count)
}

fn signed(b: &PCSymbol, sign: f64) -> PCSymbol {
    if sign > 0.0 {
        b.clone()
    } else {
        -b
    }
}

fn th_record(a: &PCSymbol, b: &PCSymbol, sign: f64, p: &HardyExponent, tol: &Tolerances) -> Result<OperatorRecord> {
    let label = if sign > 0.0 { "T(a)+H(b)" } else { "T(a)-H(b)" };
    let bb = signed(b, sign);
    if !th_fredholm_check(a, &bb, p, tol)?.fredholm {
        return Ok(OperatorRecord::not_fredholm(label));
    }
    Ok(OperatorRecord::fredholm(label, th_index(a, &bb, p, tol)?))
}

fn empty_report(pair: &MatchingPair, p: &HardyExponent, plus: OperatorRecord, minus: OperatorRecord, c: OperatorRecord, d: OperatorRecord) -> FredholmReport {
    FredholmReport {
        p: p.p(),
        kappa1: d.index,
        kappa2: c.index,
        classification: plus.classification,
        kernel_dim: None,
        cokernel_dim: None,
        plus,
        minus,
        toeplitz_c: c,
        toeplitz_d: d,
        diag_kernel_dim: None,
        kernel_formula: None,
        disjunction: None,
        evidence: Vec::new(),
        probing: None,
        normalization: pair.normalization,
    }
}

/// Applies witness lower bounds to whichever of the two records is Fredholm and
/// still unclassified.
fn witness_fallback(report: &mut FredholmReport, pair: &MatchingPair, opts: &AnalyzerOptions) -> Result<()> {
    for sign in [1.0, -1.0] {
        let rec = if sign > 0.0 { &mut report.plus } else { &mut report.minus };
        if rec.classification != Classification::FredholmUnclassified {
            continue;
        }
        let w = kernel_witnesses(&pair.a, &pair.b, sign, opts.section_n, &opts.tolerances)? as i64;
        rec.kernel_witnesses = Some(w);
        let ind = rec.index.unwrap_or(0);
        rec.set_kernel_lower_bound(w);
        if rec.classification == Classification::NotOneSidedInvertible {
            report.evidence.push(format!(
                "witness: {} has {w} verified kernel element(s) and index {ind}, so kernel and cokernel are both nontrivial",
                rec.operator
            ));
        }
    }
    Ok(())
}

/// Full classification at `p`. Falls back to [`classify_with_probing`] when
/// `T(c)` or `T(d)` is not Fredholm.
pub fn classify(pair: &MatchingPair, p: &HardyExponent, opts: &AnalyzerOptions) -> Result<FredholmReport> {
    let tol = &opts.tolerances;
    let c_idx = toeplitz_index(&pair.c, p, tol)?;
    let d_idx = toeplitz_index(&pair.d, p, tol)?;
    let (k2, k1) = match (c_idx.index(), d_idx.index()) {
        (Some(k2), Some(k1)) => (k2, k1),
        _ => return classify_with_probing(pair, p, opts),
    };
    let plus = th_record(&pair.a, &pair.b, 1.0, p, tol)?;
    let minus = th_record(&pair.a, &pair.b, -1.0, p, tol)?;
    let mut report = empty_report(
        pair,
        p,
        plus,
        minus,
        OperatorRecord::toeplitz("T(c)", c_idx),
        OperatorRecord::toeplitz("T(d)", d_idx),
    );
    report.evidence.push(format!(
        "simultaneous-fredholm: T(c), T(d) Fredholm with ind T(c) = {k2}, ind T(d) = {k1}"
    ));
    let (ip, im) = match (report.plus.index, report.minus.index) {
        (Some(ip), Some(im)) => (ip, im),
        _ => {
            return Err(Error::NotFredholm(
                "T(c), T(d) are Fredholm but the symbol of T(a)+H(b) or T(a)-H(b) is not invertible".into(),
            ))
        }
    };
    if ip + im != k1 + k2 {
        report.evidence.push(format!(
            "index-sum: MISMATCH ind(T(a)+H(b)) + ind(T(a)-H(b)) = {} but kappa1 + kappa2 = {}",
            ip + im,
            k1 + k2
        ));
    } else {
        report.evidence.push(format!("index-sum: {ip} + {im} = kappa1 + kappa2 = {}", k1 + k2));
    }

    if k1 >= 0 && k2 >= 0 {
        report.plus.set_kernel(ip.max(0));
        report.minus.set_kernel(im.max(0));
        report.diag_kernel_dim = Some(ip.max(0) + im.max(0));
        report
            .evidence
            .push("sign-rule: kappa1, kappa2 >= 0, both operators are right-invertible".into());
    } else if k1 <= 0 && k2 <= 0 {
        report.plus.set_kernel(0);
        report.minus.set_kernel(0);
        report.diag_kernel_dim = Some(0);
        report
            .evidence
            .push("sign-rule: kappa1, kappa2 <= 0, both operators are left-invertible".into());
    } else {
        let kf = kernel_formula_eval(pair, p, opts.section_n, tol)?;
        let total = kf.dimension;
        report.evidence.push(format!(
            "kernel-formula: mixed signs, dim ker diag(T(a)+H(b), T(a)-H(b)) = {total} ({:?})",
            kf.quadrant
        ));
        report.diag_kernel_dim = Some(total);
        let (lp, lm) = (ip.max(0), im.max(0));
        let (mut wp, mut wm) = (lp, lm);
        if lp + lm < total {
            let n = opts.section_n;
            let xp = kernel_witnesses(&pair.a, &pair.b, 1.0, n, tol)? as i64;
            let xm = kernel_witnesses(&pair.a, &pair.b, -1.0, n, tol)? as i64;
            report.plus.kernel_witnesses = Some(xp);
            report.minus.kernel_witnesses = Some(xm);
            wp = wp.max(xp);
            wm = wm.max(xm);
            report.evidence.push(format!(
                "witness: verified kernel elements {xp} for T(a)+H(b), {xm} for T(a)-H(b)"
            ));
        }
        if wp + wm == total {
            report.plus.set_kernel(wp);
            report.minus.set_kernel(wm);
            report
                .evidence
                .push(format!("kernel-split: dim ker T(a)+H(b) = {wp}, dim ker T(a)-H(b) = {wm}"));
        } else {
            if wp + wm > total {
                report.evidence.push(format!(
                    "kernel-split: MISMATCH lower bounds {wp} + {wm} exceed the kernel formula {total}"
                ));
            }
            report.plus.set_kernel_lower_bound(wp);
            report.minus.set_kernel_lower_bound(wm);
            let coker_u = total - (k1 + k2);
            if total > 0 && coker_u > 0 && ip == im {
                let text = "at least one of T(a)+H(b), T(a)-H(b) is not one-sided invertible".to_string();
                report.evidence.push(format!(
                    "one-sided-disjunction: dim ker T(U) = {total}, dim coker T(U) = {coker_u}, equal indices {ip}"
                ));
                report.disjunction = Some(text);
            }
        }
        report.kernel_formula = Some(kf);
    }
    report.sync_primary();
    Ok(report)
}

/// Result of probing the index of `T(sym)` from the right of `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitIndex {
    pub index: i64,
    pub s_used: f64,
    /// Nearest critical exponent above `p` found by the scan.
    pub scanned_critical: Option<f64>,
    /// Nearest critical exponent above `p` predicted from the jumps.
    pub analytic_critical: Option<f64>,
}

const PROBE_POINTS: usize = 64;
const PROBE_BISECTION_TOL: f64 = 1e-6;

/// `lim_{s -> p+} ind T(sym)`.
pub fn probe_limit_index(sym: &PCSymbol, p: &HardyExponent, tol: &Tolerances) -> Result<LimitIndex> {
    let p0 = p.p();
    let idx_at = |s: f64| -> Result<Option<i64>> { Ok(toeplitz_index(sym, &HardyExponent::new(s)?, tol)?.index()) };
    let ratio = (p0 + 1.0) / p0;
    let grid: Vec<f64> = (1..=PROBE_POINTS)
        .map(|k| p0 * ratio.powf(k as f64 / PROBE_POINTS as f64))
        .collect();
    let mut prev: Option<(f64, i64)> = None;
    let mut scanned = None;
    let mut any_fredholm = false;
    for &s in &grid {
        match idx_at(s)? {
            None => {
                if scanned.is_none() {
                    scanned = Some(s);
                }
            }
            Some(k) => {
                any_fredholm = true;
                if let Some((s_prev, k_prev)) = prev {
                    if k != k_prev && scanned.is_none() {
                        let (mut lo, mut hi) = (s_prev, s);
                        while hi - lo > PROBE_BISECTION_TOL {
                            let mid = 0.5 * (lo + hi);
                            match idx_at(mid)? {
                                Some(m) if m == k_prev => lo = mid,
                                Some(_) => hi = mid,
                                None => {
                                    lo = mid;
                                    hi = mid;
                                }
                            }
                        }
                        scanned = Some(0.5 * (lo + hi));
                    }
                }
                prev = Some((s, k));
            }
        }
    }
    if !any_fredholm {
        return Err(Error::NoFredholmNeighborhood(p0));
    }
    let analytic = critical_exponents(sym).into_iter().find(|&s| s > p0 + 1e-9);
    let nearest = match (scanned, analytic) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    let s_used = match nearest {
        Some(c) => (0.5 * (p0 + c)).min(p0 + 1.0),
        None => p0 + 1.0,
    };
    let index = idx_at(s_used)?.ok_or(Error::NoFredholmNeighborhood(p0))?;
    Ok(LimitIndex {
        index,
        s_used,
        scanned_critical: scanned,
        analytic_critical: analytic,
    })
}

/// Classification of whichever of `T(a) +- H(b)` is Fredholm at `p`, from the
/// limit indices of `T(c)` and `T(d)` as `s -> p+`.
pub fn classify_with_probing(pair: &MatchingPair, p: &HardyExponent, opts: &AnalyzerOptions) -> Result<FredholmReport> {
    let tol = &opts.tolerances;
    let plus = th_record(&pair.a, &pair.b, 1.0, p, tol)?;
    let minus = th_record(&pair.a, &pair.b, -1.0, p, tol)?;
    if !plus.fredholm && !minus.fredholm {
        let mut report = empty_report(
            pair,
            p,
            plus,
            minus,
            OperatorRecord::toeplitz("T(c)", toeplitz_index(&pair.c, p, tol)?),
            OperatorRecord::toeplitz("T(d)", toeplitz_index(&pair.d, p, tol)?),
        );
        report
            .evidence
            .push("simultaneous-fredholm: neither T(a)+H(b) nor T(a)-H(b) has an invertible symbol".into());
        return Ok(report);
    }
    let lc = probe_limit_index(&pair.c, p, tol)?;
    let ld = probe_limit_index(&pair.d, p, tol)?;
    let mut report = empty_report(
        pair,
        p,
        plus,
        minus,
        OperatorRecord::toeplitz("T(c)", toeplitz_index(&pair.c, p, tol)?),
        OperatorRecord::toeplitz("T(d)", toeplitz_index(&pair.d, p, tol)?),
    );
    report.probing = Some(Probing {
        s_used: lc.s_used.min(ld.s_used),
        limit_indices: (lc.index, ld.index),
    });
    report.evidence.push(format!(
        "limit-index: the index of T(c), T(d) is constant on (p, p*); lim ind T(c) = {} (s = {:.6}), lim ind T(d) = {} (s = {:.6})",
        lc.index, lc.s_used, ld.index, ld.s_used
    ));
    for rec in [&mut report.plus, &mut report.minus] {
        if !rec.fredholm {
            continue;
        }
        let ind = rec.index.unwrap_or(0);
        if lc.index >= 0 && ld.index >= 0 {
            rec.set_kernel(ind.max(0));
            if ind < 0 {
                rec.classification = Classification::FredholmUnclassified;
            }
        } else if lc.index <= 0 && ld.index <= 0 {
            rec.set_kernel(0);
        }
    }
    if lc.index >= 0 && ld.index >= 0 {
        report
            .evidence
            .push("limit-sign-rule: both limit indices >= 0, the Fredholm operator is right-invertible".into());
    } else if lc.index <= 0 && ld.index <= 0 {
        report
            .evidence
            .push("limit-sign-rule: both limit indices <= 0, the Fredholm operator is left-invertible".into());
    } else {
        report
            .evidence
            .push("limit-sign-rule: limit indices have mixed signs, falling back to kernel witnesses".into());
        witness_fallback(&mut report, pair, opts)?;
    }
    report.sync_primary();
    Ok(report)
}

/// Agreement of the independent index routes and the finite-section kernels.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub p: f64,
    pub kappa_sum: Option<i64>,
    pub det_winding_index: Option<i64>,
    pub th_index_sum: Option<i64>,
    /// Square-section kernel dimensions of `T(a) + H(b)` and `T(a) - H(b)`.
    pub section_kernels: (Option<usize>, Option<usize>),
    pub report_kernels: (Option<i64>, Option<i64>),
    /// Disagreements among the three index routes.
    pub discrepancies: Vec<String>,
    /// Disagreements between section kernels and the report.
    pub section_discrepancies: Vec<String>,
}

impl CrossCheck {
    pub fn routes_agree(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn consistent(&self) -> bool {
        self.discrepancies.is_empty() && self.section_discrepancies.is_empty()
    }
}

pub fn cross_check(pair: &MatchingPair, p: &HardyExponent, n: usize, opts: &AnalyzerOptions) -> Result<CrossCheck> {
    let tol = &opts.tolerances;
    let mut out = CrossCheck {
        p: p.p(),
        kappa_sum: None,
        det_winding_index: None,
        th_index_sum: None,
        section_kernels: (None, None),
        report_kernels: (None, None),
        discrepancies: Vec::new(),
        section_discrepancies: Vec::new(),
    };
    let k2 = toeplitz_index(&pair.c, p, tol)?.index();
    let k1 = toeplitz_index(&pair.d, p, tol)?.index();
    out.kappa_sum = k1.zip(k2).map(|(x, y)| x + y);
    out.det_winding_index = block_toeplitz_index(&pair.build_u(), p, tol)?.index();
    let report = classify(pair, p, opts)?;
    out.th_index_sum = report.plus.index.zip(report.minus.index).map(|(x, y)| x + y);
    if out.kappa_sum != out.det_winding_index {
        out.discrepancies.push(format!(
            "ind T(c) + ind T(d) = {:?} but the determinant route gives {:?}",
            out.kappa_sum, out.det_winding_index
        ));
    }
    if out.kappa_sum != out.th_index_sum {
        out.discrepancies.push(format!(
            "ind T(c) + ind T(d) = {:?} but the Toeplitz plus Hankel indices sum to {:?}",
            out.kappa_sum, out.th_index_sum
        ));
    }
    out.report_kernels = (report.plus.kernel_dim, report.minus.kernel_dim);
    for (slot, sign) in [(0usize, 1.0), (1, -1.0)] {
        let m = th_section(&pair.a, &pair.b, sign, n, tol)?;
        let dim = match numerical_kernel(&m, tol.sv_threshold) {
            Ok(k) => Some(k.dimension),
            Err(Error::NoSpectralGap { kept, dropped }) => {
                out.section_discrepancies.push(format!(
                    "section of size {n} for sign {sign:+} has no spectral gap ({kept:.3e} vs {dropped:.3e})"
                ));
                None
            }
            Err(e) => return Err(e),
        };
        let want = if slot == 0 { out.report_kernels.0 } else { out.report_kernels.1 };
        if let (Some(d), Some(w)) = (dim, want) {
            if d as i64 != w {
                out.section_discrepancies.push(format!(
                    "section of size {n} for sign {sign:+} has kernel dimension {d}, report says {w}"
                ));
            }
        }
        if slot == 0 {
            out.section_kernels.0 = dim;
        } else {
            out.section_kernels.1 = dim;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::CirclePoint;
    use crate::matching::is_matching_pair;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn hp(p: f64) -> HardyExponent {
        HardyExponent::new(p).unwrap()
    }

    fn pair(a: PCSymbol, b: PCSymbol) -> MatchingPair {
        is_matching_pair(&a, &b, &Tolerances::default()).unwrap().pair().unwrap()
    }

    fn ex1() -> MatchingPair {
        let a = PCSymbol::constant(Complex64::from_polar(1.0, FRAC_PI_4))
            * PCSymbol::power_arc(c(0.25, 0.0), CirclePoint::ONE);
        let b = &a * &PCSymbol::monomial(1);
        pair(a, b)
    }

    #[test]
    fn trivial_pair() {
        let r = classify(&pair(PCSymbol::one(), PCSymbol::one()), &hp(2.5), &AnalyzerOptions::default()).unwrap();
        assert_eq!(r.plus.classification, Classification::Invertible);
        assert_eq!(r.minus.classification, Classification::Invertible);
    }

    #[test]
    fn example_one_classification() {
        let opts = AnalyzerOptions::default();
        let r = classify(&ex1(), &hp(1.5), &opts).unwrap();
        assert_eq!(r.classification, Classification::Invertible);
        assert_eq!(r.minus.classification, Classification::NotOneSidedInvertible);
        let r = classify(&ex1(), &hp(3.0), &opts).unwrap();
        assert_eq!(r.classification, Classification::LeftInvertible);
        assert_eq!(r.cokernel_dim, Some(1));
        assert_eq!(r.minus.index, Some(0));
        let r = classify(&ex1(), &hp(2.0), &opts).unwrap();
        assert!(r.probing.is_some());
        assert_eq!(r.plus.classification, Classification::NotFredholm);
        assert_eq!(r.minus.index, Some(0));
        assert_eq!(r.minus.classification, Classification::NotOneSidedInvertible);
    }

    #[test]
    fn limit_indices() {
        let tol = Tolerances::default();
        let d = ex1().d;
        assert_eq!(probe_limit_index(&d, &hp(2.0), &tol).unwrap().index, -2);
        for n in [-2, 0, 3] {
            assert_eq!(probe_limit_index(&PCSymbol::monomial(n), &hp(1.3), &tol).unwrap().index, -n);
        }
    }

    #[test]
    fn monomial_pairs() {
        let opts = AnalyzerOptions::default();
        for n in [-2i64, -1] {
            let t = PCSymbol::monomial(n);
            let r = classify(&pair(t.clone(), t), &hp(1.8), &opts).unwrap();
            assert!(matches!(
                r.classification,
                Classification::RightInvertible | Classification::Invertible
            ));
        }
    }

    #[test]
    fn example_one_cross_check() {
        let opts = AnalyzerOptions::default();
        let cc = cross_check(&ex1(), &hp(3.0), 64, &opts).unwrap();
        assert_eq!(cc.kappa_sum, Some(-1));
        assert_eq!(cc.det_winding_index, Some(-1));
        assert_eq!(cc.th_index_sum, Some(-1));
    }
}
