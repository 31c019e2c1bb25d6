use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use th_invert::{parse_config, run, AnalysisConfig, Command, Overrides};

#[derive(Parser)]
#[command(name = "th-invert", version, about = "Fredholm and one-sided invertibility of T(a) +- H(b)")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// JSON analysis configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated exponents overriding `p_values`.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Output path overriding the configured one.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Finite section size overriding `finite_section_n`.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify T(a) + H(b) and T(a) - H(b) at each exponent.
    Analyze(Common),
    /// Export the arc-completed curve of a symbol as CSV.
    Curve(Common),
    /// Run the identity suites.
    Verify(Common),
    /// Run the reference regressions.
    Selftest(Common),
}

fn load(path: &PathBuf) -> Result<AnalysisConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Analyze(c) => (Command::Analyze, c),
        Cmd::Curve(c) => (Command::Curve, c),
        Cmd::Verify(c) => (Command::Verify, c),
        Cmd::Selftest(c) => (Command::Selftest, c),
    };
    let cfg = match common.config.as_ref().map(load).transpose() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let overrides = Overrides {
        p_values: common.p,
        out: common.out,
        n: common.n,
    };
    match run(command, cfg.as_ref(), &overrides) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            if outcome.success {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: one or more checks failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
