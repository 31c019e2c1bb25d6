//! Analysis configuration: named symbol expressions, exponents, tolerances and
//! output paths, read from JSON.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;
use th_core::matching::{is_matching_pair, MatchingCheck, MatchingPair};
use th_core::{extend_half_circle, CirclePoint, PCSymbol, Tolerances};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexSpec> for Complex64 {
    fn from(z: ComplexSpec) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Expression grammar mirroring the symbol constructors. Angles are in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSpec {
    Const {
        re: f64,
        im: f64,
    },
    Monomial {
        n: i64,
    },
    PowerArc {
        beta: ComplexSpec,
        #[serde(default)]
        anchor: f64,
    },
    PiecewiseConst {
        breaks: Vec<f64>,
        values: Vec<ComplexSpec>,
    },
    Sum {
        terms: Vec<SymbolSpec>,
    },
    Product {
        factors: Vec<SymbolSpec>,
    },
    Scale {
        factor: ComplexSpec,
        of: Box<SymbolSpec>,
    },
    Inverse {
        of: Box<SymbolSpec>,
    },
    Conjugate {
        of: Box<SymbolSpec>,
    },
    Tilde {
        of: Box<SymbolSpec>,
    },
    HalfCircleExtension {
        of: Box<SymbolSpec>,
    },
    Ref {
        name: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selftest: Option<PathBuf>,
}

pub const MIN_SECTION: usize = 16;

fn default_section() -> usize {
    128
}

fn default_curve_symbol() -> String {
    "a".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Must define `a` and `b`; other entries may be referenced with `ref`.
    pub symbols: BTreeMap<String, SymbolSpec>,
    pub p_values: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_section")]
    pub finite_section_n: usize,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub seed: u64,
    /// Symbol exported by `curve`: a configured name, or `c` / `d` for the
    /// subordinated functions when not configured.
    #[serde(default = "default_curve_symbol")]
    pub curve_symbol: String,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid field `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("symbol `{name}`: {message}")]
    Symbol { name: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field: field.into(),
        message: message.into(),
    }
}

pub fn validate_p_values(p: &[f64]) -> Result<(), ConfigError> {
    if p.is_empty() {
        return Err(invalid("p_values", "at least one exponent is required"));
    }
    for (i, &x) in p.iter().enumerate() {
        if !(x.is_finite() && x > 1.0) {
            return Err(invalid(&format!("p_values[{i}]"), format!("{x} is not in (1, inf)")));
        }
    }
    Ok(())
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        validate_p_values(&self.p_values)?;
        if self.finite_section_n < MIN_SECTION {
            return Err(invalid(
                "finite_section_n",
                format!("{} is below the minimum {MIN_SECTION}", self.finite_section_n),
            ));
        }
        self.tolerances
            .validate()
            .map_err(|m| invalid("tolerances", m))?;
        for name in ["a", "b"] {
            if !self.symbols.contains_key(name) {
                return Err(invalid("symbols", format!("missing required symbol `{name}`")));
            }
        }
        let env = self.build_symbols()?;
        let cs = &self.curve_symbol;
        if !env.contains_key(cs) && cs != "c" && cs != "d" {
            return Err(invalid("curve_symbol", format!("unknown symbol `{cs}`")));
        }
        Ok(())
    }

    /// Resolves every named expression.
    pub fn build_symbols(&self) -> Result<BTreeMap<String, PCSymbol>, ConfigError> {
        let mut done = BTreeMap::new();
        for name in self.symbols.keys() {
            let mut stack = Vec::new();
            resolve(name, &self.symbols, &mut done, &mut stack, &self.tolerances)?;
        }
        Ok(done)
    }

    /// The configured pair `(a, b)`, which must satisfy the matching condition.
    pub fn pair(&self) -> Result<MatchingPair, ConfigError> {
        let env = self.build_symbols()?;
        let (a, b) = (&env["a"], &env["b"]);
        match is_matching_pair(a, b, &self.tolerances) {
            Ok(MatchingCheck::Yes(p)) => Ok(p),
            Ok(MatchingCheck::No { max_residual }) => Err(invalid(
                "symbols",
                format!("(a, b) is not a matching pair: max |a a~ - b b~| = {max_residual:.3e}"),
            )),
            Err(e) => Err(invalid("symbols", e.to_string())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

fn resolve(
    name: &str,
    specs: &BTreeMap<String, SymbolSpec>,
    done: &mut BTreeMap<String, PCSymbol>,
    stack: &mut Vec<String>,
    tol: &Tolerances,
) -> Result<PCSymbol, ConfigError> {
    if let Some(s) = done.get(name) {
        return Ok(s.clone());
    }
    if stack.iter().any(|n| n == name) {
        return Err(ConfigError::Symbol {
            name: name.into(),
            message: format!("reference cycle through {}", stack.join(" -> ")),
        });
    }
    let spec = specs.get(name).ok_or_else(|| ConfigError::Symbol {
        name: name.into(),
        message: "undefined reference".into(),
    })?;
    stack.push(name.into());
    let sym = build(spec, specs, done, stack, tol).map_err(|e| match e {
        ConfigError::Symbol { .. } => e,
        other => ConfigError::Symbol {
            name: name.into(),
            message: other.to_string(),
        },
    })?;
    stack.pop();
    done.insert(name.into(), sym.clone());
    Ok(sym)
}

fn build(
    spec: &SymbolSpec,
    specs: &BTreeMap<String, SymbolSpec>,
    done: &mut BTreeMap<String, PCSymbol>,
    stack: &mut Vec<String>,
    tol: &Tolerances,
) -> Result<PCSymbol, ConfigError> {
    let owner = stack.last().cloned().unwrap_or_default();
    let fail = |message: String| ConfigError::Symbol {
        name: owner.clone(),
        message,
    };
    let mut rec = |s: &SymbolSpec| build(s, specs, done, stack, tol);
    Ok(match spec {
        SymbolSpec::Const { re, im } => PCSymbol::constant(Complex64::new(*re, *im)),
        SymbolSpec::Monomial { n } => PCSymbol::monomial(*n),
        SymbolSpec::PowerArc { beta, anchor } => PCSymbol::power_arc((*beta).into(), CirclePoint::new(*anchor)),
        SymbolSpec::PiecewiseConst { breaks, values } => PCSymbol::piecewise_const(
            breaks.iter().map(|&t| CirclePoint::new(t)).collect(),
            values.iter().map(|&v| v.into()).collect(),
        )
        .map_err(|e| fail(e.to_string()))?,
        SymbolSpec::Sum { terms } => {
            if terms.is_empty() {
                return Err(fail("empty sum".into()));
            }
            PCSymbol::sum(terms.iter().map(&mut rec).collect::<Result<_, _>>()?)
        }
        SymbolSpec::Product { factors } => {
            if factors.is_empty() {
                return Err(fail("empty product".into()));
            }
            PCSymbol::product(factors.iter().map(&mut rec).collect::<Result<_, _>>()?)
        }
        SymbolSpec::Scale { factor, of } => rec(of)?.scale((*factor).into()),
        SymbolSpec::Inverse { of } => {
            let s = rec(of)?;
            let m = s.min_modulus(tol);
            if m <= tol.invertibility {
                return Err(fail(format!("inverse of a symbol with minimum modulus {m:.3e}")));
            }
            s.inverse()
        }
        SymbolSpec::Conjugate { of } => rec(of)?.conjugate(),
        SymbolSpec::Tilde { of } => rec(of)?.tilde(),
        SymbolSpec::HalfCircleExtension { of } => extend_half_circle(&rec(of)?, tol).map_err(|e| fail(e.to_string()))?,
        SymbolSpec::Ref { name } => resolve(name, specs, done, stack, tol)?,
    })
}

pub fn parse_config(text: &str) -> Result<AnalysisConfig, ConfigError> {
    let cfg: AnalysisConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}
