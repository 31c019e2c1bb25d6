//! Fredholm properties and one-sided invertibility of Toeplitz plus Hankel
//! operators `T(a) + H(b)` on Hardy spaces `H^p`, for piecewise continuous
//! generating functions satisfying the matching condition `a*a~ = b*b~`.

pub mod analyzer;
pub mod calculus;
pub mod catalog;
pub mod circle;
pub mod error;
pub mod finite_section;
pub mod laurent;
pub mod matching;
pub mod quadrature;
pub mod symbol;
pub mod tolerance;
pub mod wiener_hopf;

pub use circle::{CirclePoint, Side};
pub use error::{Error, Result};
pub use symbol::{extend_half_circle, tilde, Expr, FourierCoefficient, Jump, PCSymbol, Provenance};
pub use tolerance::Tolerances;
