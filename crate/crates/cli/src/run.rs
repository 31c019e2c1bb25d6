//! Command execution and artifact handling.

use crate::checks::{render_table, selftest_suite, verify_suite, Check};
use crate::config::{validate_p_values, AnalysisConfig, ConfigError};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use th_core::analyzer::{classify, cross_check, AnalyzerOptions, CrossCheck, FredholmReport};
use th_core::calculus::{toeplitz_symbol_curve, HardyExponent};
use th_core::matching::MatchingPair;
use th_core::{PCSymbol, Tolerances};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Curve,
    Verify,
    Selftest,
}

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub p_values: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub n: Option<usize>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("analysis failed: {0}")]
    Analysis(#[from] th_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    /// 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            _ => 1,
        }
    }
}

/// What a command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    /// True when every check passed.
    pub success: bool,
    pub stdout: String,
    pub artifacts: Vec<PathBuf>,
}

#[derive(Debug, Serialize)]
struct AnalyzeDocument<'a> {
    command: &'static str,
    seed: u64,
    finite_section_n: usize,
    p_values: &'a [f64],
    reports: Vec<FredholmReport>,
    cross_checks: Vec<CrossCheck>,
}

/// Writes `text` to `path`, removing every artifact written so far on failure.
fn write_artifact(path: &Path, text: &str, artifacts: &mut Vec<PathBuf>) -> Result<(), RunError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| RunError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    artifacts.push(path.to_path_buf());
    fs::write(path, text).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn remove_artifacts(paths: &[PathBuf]) {
    for p in paths {
        let _ = fs::remove_file(p);
    }
}

fn analyzer_options(n: usize, tol: Tolerances) -> AnalyzerOptions {
    AnalyzerOptions {
        section_n: n,
        tolerances: tol,
    }
}

fn effective_p(cfg: Option<&AnalysisConfig>, ov: &Overrides) -> Result<Vec<f64>, RunError> {
    let p = match (&ov.p_values, cfg) {
        (Some(p), _) => p.clone(),
        (None, Some(c)) => c.p_values.clone(),
        (None, None) => vec![1.5, 2.0, 3.0],
    };
    validate_p_values(&p)?;
    Ok(p)
}

fn effective_n(cfg: Option<&AnalysisConfig>, ov: &Overrides) -> Result<usize, RunError> {
    let n = ov.n.or(cfg.map(|c| c.finite_section_n)).unwrap_or(128);
    if n < crate::config::MIN_SECTION {
        return Err(ConfigError::Validation {
            field: "n".into(),
            message: format!("{n} is below the minimum {}", crate::config::MIN_SECTION),
        }
        .into());
    }
    Ok(n)
}

fn require(cfg: Option<&AnalysisConfig>) -> Result<&AnalysisConfig, RunError> {
    cfg.ok_or_else(|| {
        ConfigError::Validation {
            field: "config".into(),
            message: "this command needs --config".into(),
        }
        .into()
    })
}

fn curve_symbol(cfg: &AnalysisConfig, pair: &MatchingPair) -> Result<PCSymbol, RunError> {
    let env: BTreeMap<String, PCSymbol> = cfg.build_symbols()?;
    let name = cfg.curve_symbol.as_str();
    Ok(match env.get(name) {
        Some(s) => s.clone(),
        None if name == "c" => pair.c.clone(),
        None if name == "d" => pair.d.clone(),
        None => {
            return Err(ConfigError::Validation {
                field: "curve_symbol".into(),
                message: format!("unknown symbol `{name}`"),
            }
            .into())
        }
    })
}

/// Path for the curve at the `i`-th of `count` exponents.
fn curve_path(base: &Path, p: f64, count: usize) -> PathBuf {
    if count == 1 {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("curve");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    base.with_file_name(format!("{stem}_p{p}.{ext}"))
}

fn checks_outcome(checks: Vec<Check>, path: Option<&PathBuf>) -> Result<Outcome, RunError> {
    let table = render_table(&checks);
    let mut out = Outcome {
        success: checks.iter().all(|c| c.passed),
        stdout: table.clone(),
        artifacts: Vec::new(),
    };
    if let Some(p) = path {
        write_artifact(p, &table, &mut out.artifacts)?;
    }
    Ok(out)
}

/// Runs `cmd`. Artifacts are removed again when the run fails.
pub fn run(cmd: Command, cfg: Option<&AnalysisConfig>, ov: &Overrides) -> Result<Outcome, RunError> {
    let mut written = Vec::new();
    let result = run_inner(cmd, cfg, ov, &mut written);
    match result {
        Ok(o) if o.success => Ok(o),
        Ok(o) => {
            remove_artifacts(&o.artifacts);
            Ok(Outcome {
                artifacts: Vec::new(),
                ..o
            })
        }
        Err(e) => {
            remove_artifacts(&written);
            Err(e)
        }
    }
}

fn run_inner(
    cmd: Command,
    cfg: Option<&AnalysisConfig>,
    ov: &Overrides,
    written: &mut Vec<PathBuf>,
) -> Result<Outcome, RunError> {
    let tol = cfg.map(|c| c.tolerances).unwrap_or_default();
    match cmd {
        Command::Analyze => {
            let cfg = require(cfg)?;
            let ps = effective_p(Some(cfg), ov)?;
            let n = effective_n(Some(cfg), ov)?;
            let pair = cfg.pair()?;
            let opts = analyzer_options(n, tol);
            let mut reports = Vec::new();
            let mut checks = Vec::new();
            for &p in &ps {
                let hp = HardyExponent::new(p)?;
                reports.push(classify(&pair, &hp, &opts)?);
                checks.push(cross_check(&pair, &hp, n, &opts)?);
            }
            let success = checks.iter().all(|c| c.routes_agree())
                && reports.iter().all(|r| !r.evidence.iter().any(|e| e.contains("MISMATCH")));
            let doc = AnalyzeDocument {
                command: "analyze",
                seed: cfg.seed,
                finite_section_n: n,
                p_values: &ps,
                reports,
                cross_checks: checks,
            };
            let text = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
            let mut out = Outcome {
                success,
                stdout: String::new(),
                artifacts: Vec::new(),
            };
            match ov.out.as_ref().or(cfg.outputs.report.as_ref()) {
                Some(p) => {
                    write_artifact(p, &text, written)?;
                    out.artifacts = written.clone();
                    out.stdout = format!("wrote {}\n", p.display());
                }
                None => out.stdout = text,
            }
            Ok(out)
        }
        Command::Curve => {
            let cfg = require(cfg)?;
            let ps = effective_p(Some(cfg), ov)?;
            let pair = cfg.pair()?;
            let sym = curve_symbol(cfg, &pair)?;
            let base = ov.out.as_ref().or(cfg.outputs.curve.as_ref());
            let mut out = Outcome {
                success: true,
                ..Outcome::default()
            };
            for &p in &ps {
                let curve = toeplitz_symbol_curve(&sym, &HardyExponent::new(p)?, &tol)?;
                let mut buf = Vec::new();
                curve.write_csv(&mut buf).expect("write to memory");
                let text = String::from_utf8(buf).expect("ascii csv");
                let summary = format!("p = {p}: {} samples, min modulus {:.6e}\n", curve.samples.len(), curve.min_modulus);
                match base {
                    Some(b) => {
                        let path = curve_path(b, p, ps.len());
                        write_artifact(&path, &text, written)?;
                        out.stdout.push_str(&summary);
                    }
                    None => {
                        out.stdout.push_str(&text);
                    }
                }
            }
            out.artifacts = written.clone();
            Ok(out)
        }
        Command::Verify => {
            let seed = cfg.map(|c| c.seed).unwrap_or(0);
            let path = ov.out.as_ref().or(cfg.and_then(|c| c.outputs.verify.as_ref()));
            let o = checks_outcome(verify_suite(seed, &tol), path)?;
            written.extend(o.artifacts.iter().cloned());
            Ok(o)
        }
        Command::Selftest => {
            let n = effective_n(cfg, ov)?;
            let path = ov.out.as_ref().or(cfg.and_then(|c| c.outputs.selftest.as_ref()));
            let o = checks_outcome(selftest_suite(&analyzer_options(n, tol)), path)?;
            written.extend(o.artifacts.iter().cloned());
            Ok(o)
        }
    }
}
