//! Laurent polynomials `sum_k c_k t^k` with finitely many nonzero coefficients.

use crate::error::{Error, Result};
use crate::symbol::{Expr, PCSymbol};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    lo: i64,
    coeffs: Vec<Complex64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn monomial(n: i64, value: Complex64) -> Self {
        LaurentPoly {
            lo: n,
            coeffs: vec![value],
        }
    }

    /// Coefficients `coeffs[k]` of `t^(lo + k)`.
    pub fn new(lo: i64, coeffs: Vec<Complex64>) -> Self {
        LaurentPoly { lo, coeffs }
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        let k = n - self.lo;
        if k < 0 || k as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[k as usize]
        }
    }

    /// Lowest and highest exponent carrying a stored coefficient.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some((self.lo, self.lo + self.coeffs.len() as i64 - 1))
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let (Some((a0, a1)), Some((b0, b1))) = (self.support(), other.support()) else {
            return if self.coeffs.is_empty() { other.clone() } else { self.clone() };
        };
        let lo = a0.min(b0);
        let hi = a1.max(b1);
        let coeffs = (lo..=hi).map(|n| self.coeff(n) + other.coeff(n)).collect();
        LaurentPoly { lo, coeffs }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += x * y;
            }
        }
        LaurentPoly {
            lo: self.lo + other.lo,
            coeffs,
        }
    }

    /// `t -> p(1/t)`.
    pub fn tilde(&self) -> LaurentPoly {
        match self.support() {
            None => LaurentPoly::zero(),
            Some((_, hi)) => LaurentPoly {
                lo: -hi,
                coeffs: self.coeffs.iter().rev().cloned().collect(),
            },
        }
    }

    /// Expands a symbol built only from constants and monomials by sums and products.
    pub fn from_symbol(s: &PCSymbol) -> Result<LaurentPoly> {
        match s.expr() {
            Expr::Const(v) => Ok(LaurentPoly::monomial(0, *v)),
            Expr::Monomial(n) => Ok(LaurentPoly::monomial(*n, Complex64::new(1.0, 0.0))),
            Expr::Sum(ts) => ts
                .iter()
                .try_fold(LaurentPoly::zero(), |acc, t| Ok(acc.add(&LaurentPoly::from_symbol(t)?))),
            Expr::Product(fs) => fs.iter().try_fold(LaurentPoly::monomial(0, Complex64::new(1.0, 0.0)), |acc, f| {
                Ok(acc.mul(&LaurentPoly::from_symbol(f)?))
            }),
            Expr::Tilde(x) => Ok(LaurentPoly::from_symbol(x)?.tilde()),
            Expr::Conjugate(x) => {
                let p = LaurentPoly::from_symbol(x)?.tilde();
                Ok(LaurentPoly {
                    lo: p.lo,
                    coeffs: p.coeffs.iter().map(|c| c.conj()).collect(),
                })
            }
            _ => Err(Error::NotPolynomial),
        }
    }

    pub fn to_symbol(&self) -> PCSymbol {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(k, c)| PCSymbol::monomial(self.lo + k as i64).scale(*c))
            .collect::<Vec<_>>();
        if terms.is_empty() {
            PCSymbol::real(0.0)
        } else {
            PCSymbol::sum(terms)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_and_tilde() {
        let p = LaurentPoly::new(-1, vec![c(1.0, 0.0), c(2.0, 0.0)]);
        let q = p.mul(&p);
        assert_eq!(q.coeff(-2), c(1.0, 0.0));
        assert_eq!(q.coeff(-1), c(4.0, 0.0));
        assert_eq!(q.coeff(0), c(4.0, 0.0));
        assert_eq!(p.tilde().coeff(1), c(1.0, 0.0));
        assert_eq!(p.tilde().coeff(0), c(2.0, 0.0));
    }

    #[test]
    fn round_trip_through_symbol() {
        let p = LaurentPoly::new(-2, vec![c(1.0, 1.0), c(0.0, 0.0), c(-3.0, 0.5)]);
        let back = LaurentPoly::from_symbol(&p.to_symbol()).unwrap();
        for n in -4..4 {
            assert_eq!(back.coeff(n), p.coeff(n));
        }
    }

    #[test]
    fn power_function_is_not_polynomial() {
        let s = PCSymbol::power_arc(c(0.5, 0.0), crate::circle::CirclePoint::ONE);
        assert_eq!(LaurentPoly::from_symbol(&s), Err(Error::NotPolynomial));
    }
}
