//! Configuration, commands and report serialization for `th-invert`.

pub mod checks;
pub mod config;
pub mod run;

pub use config::{parse_config, AnalysisConfig, ConfigError, SymbolSpec};
pub use run::{run, Command, Outcome, Overrides, RunError};
