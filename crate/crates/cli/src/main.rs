use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wakimoto_core::classify::{classify_with, verify_certificate};
use wakimoto_core::fock::enumerate_basis;
use wakimoto_core::scalar::{half_string, Scalar};
use wakimoto_core::schur::schur_rec;
use wakimoto_core::span::ClosureConfig;
use wakimoto_core::suites::{run_suite, SuiteReport, SUITE_NAMES};
use wakimoto_core::weyl::{enumerate_weyl_basis, wakimoto_probe};
use wakimoto_core::{Chi, Rational};

#[derive(Parser)]
#[command(name = "wakimoto", version, about = "Irreducibility of critical-level Wakimoto modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Args)]
struct ChiArg {
    /// Inline JSON `{"coeffs":[{"m":0,"value":"2"}]}` or a path to such a file.
    #[arg(long)]
    chi: String,
}

#[derive(Args)]
struct TruncationArgs {
    /// Weight cutoff, as a rational string.
    #[arg(long, default_value = "4", value_parser = parse_rational)]
    cutoff: Rational,
    /// Charge window half-width Q, giving charges in [-Q, Q].
    #[arg(long, default_value_t = 3)]
    charge_window: i64,
    /// Extra weight allowed for intermediate vectors.
    #[arg(long, default_value = "2", value_parser = parse_rational)]
    excursion: Rational,
}

#[derive(Subcommand)]
enum Command {
    /// Decide irreducibility and print the certificate.
    Classify {
        #[command(flatten)]
        chi: ChiArg,
        #[command(flatten)]
        trunc: TruncationArgs,
        #[arg(long, value_enum, default_value = "json")]
        output: Output,
    },
    /// Classify, then replay the certificate on the engine.
    Verify {
        #[command(flatten)]
        chi: ChiArg,
        #[command(flatten)]
        trunc: TruncationArgs,
        #[arg(long, value_enum, default_value = "json")]
        output: Output,
    },
    /// Evaluate the elementary Schur polynomial S_r(x1, x2, ...).
    Schur {
        #[arg(long)]
        r: usize,
        /// Comma-separated rationals x1,x2,...; missing entries are zero.
        #[arg(long, default_value = "", value_parser = parse_rational_list)]
        xs: RationalList,
    },
    /// List basis states up to a weight.
    Enumerate {
        #[arg(long, value_parser = parse_rational)]
        max_weight: Rational,
        /// Use the full fermionic space rather than the Psi-(1/2) kernel.
        #[arg(long)]
        ambient: bool,
        /// Enumerate Weyl monomials instead of fermionic states.
        #[arg(long, conflicts_with = "ambient")]
        weyl: bool,
        #[arg(long, default_value_t = 3)]
        charge_window: i64,
    },
    /// Cyclicity and singular-vector probe on the Weyl realization.
    ProbeWakimoto {
        #[command(flatten)]
        chi: ChiArg,
        #[command(flatten)]
        trunc: TruncationArgs,
    },
    /// Run the seeded relation suites.
    Relations {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run a single suite.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITE_NAMES))]
        suite: Option<String>,
    },
}

#[derive(Clone, Debug)]
struct RationalList(Vec<Rational>);

fn parse_rational(text: &str) -> Result<Rational, String> {
    let r = Rational::parse_exact(text)?;
    if r < Rational::from_i64(0) {
        return Err(format!("expected a non-negative rational, got `{text}`"));
    }
    Ok(r)
}

fn parse_rational_list(text: &str) -> Result<RationalList, String> {
    if text.trim().is_empty() {
        return Ok(RationalList(Vec::new()));
    }
    text.split(',')
        .map(Rational::parse_exact)
        .collect::<Result<Vec<_>, _>>()
        .map(RationalList)
}

/// Errors that map to exit status 2.
struct UsageError(String);

fn load_chi(arg: &ChiArg) -> Result<Chi, UsageError> {
    let text = if arg.chi.trim_start().starts_with('{') {
        arg.chi.clone()
    } else {
        std::fs::read_to_string(Path::new(&arg.chi))
            .map_err(|e| UsageError(format!("cannot read chi file `{}`: {e}", arg.chi)))?
    };
    Chi::parse_json(&text).map_err(|e| UsageError(e.to_string()))
}

fn config(trunc: &TruncationArgs) -> Result<ClosureConfig, UsageError> {
    if trunc.charge_window < 0 {
        return Err(UsageError("charge window must be non-negative".into()));
    }
    ClosureConfig::new(
        trunc.cutoff.clone(),
        (-trunc.charge_window, trunc.charge_window),
        trunc.excursion.clone(),
    )
    .map_err(|e| UsageError(e.to_string()))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output serializes")
}

#[derive(Serialize)]
struct StateEntry {
    state: String,
    weight: String,
    charge: i64,
}

#[derive(Serialize)]
struct Enumeration {
    space: &'static str,
    max_weight: String,
    count: usize,
    states: Vec<StateEntry>,
}

#[derive(Serialize)]
struct RelationsOutput {
    seed: u64,
    passed: bool,
    suites: Vec<SuiteReport>,
}

/// Runs one command; returns the text to print and the exit status.
fn run(cli: Cli) -> Result<(String, u8), UsageError> {
    match cli.command {
        Command::Classify { chi, trunc, output } => {
            let chi = load_chi(&chi)?;
            let result = classify_with(&chi, &config(&trunc)?);
            let text = match output {
                Output::Json => result.to_json(),
                Output::Text => format!(
                    "chi = {chi}\nverdict: {}\ncase: {}",
                    json(&result.verdict.status).trim_matches('"'),
                    json(&result.verdict.case).trim_matches('"'),
                ),
            };
            Ok((text, 0))
        }
        Command::Verify { chi, trunc, output } => {
            let chi = load_chi(&chi)?;
            let cfg = config(&trunc)?;
            let report = verify_certificate(&chi, &classify_with(&chi, &cfg), &cfg);
            let code = if report.passed { 0 } else { 1 };
            let text = match output {
                Output::Json => json(&report),
                Output::Text => report
                    .checks
                    .iter()
                    .map(|c| format!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            Ok((text, code))
        }
        Command::Schur { r, xs } => Ok((json(&schur_rec(r, &xs.0).to_external()), 0)),
        Command::Enumerate {
            max_weight,
            ambient,
            weyl,
            charge_window,
        } => {
            let window = (-charge_window.abs(), charge_window.abs());
            let out = if weyl {
                let max = max_weight.floor().to_integer();
                let max = i64::try_from(max).map_err(|_| UsageError("max weight too large".into()))?;
                let states = enumerate_weyl_basis(max, window);
                Enumeration {
                    space: "W",
                    max_weight: max_weight.to_external(),
                    count: states.len(),
                    states: states
                        .iter()
                        .map(|s| StateEntry {
                            state: s.to_string(),
                            weight: s.weight().to_string(),
                            charge: s.charge(),
                        })
                        .collect(),
                }
            } else {
                let states = enumerate_basis(&max_weight, ambient);
                let states: Vec<_> = states
                    .into_iter()
                    .filter(|s| window.0 <= s.charge() && s.charge() <= window.1)
                    .collect();
                Enumeration {
                    space: if ambient { "F" } else { "F~" },
                    max_weight: max_weight.to_external(),
                    count: states.len(),
                    states: states
                        .iter()
                        .map(|s| StateEntry {
                            state: s.to_string(),
                            weight: half_string(s.weight2()),
                            charge: s.charge(),
                        })
                        .collect(),
                }
            };
            Ok((json(&out), 0))
        }
        Command::ProbeWakimoto { chi, trunc } => {
            let chi = load_chi(&chi)?;
            Ok((json(&wakimoto_probe(&chi, &config(&trunc)?)), 0))
        }
        Command::Relations { seed, suite } => {
            let names: Vec<&str> = match &suite {
                Some(name) => vec![name.as_str()],
                None => SUITE_NAMES.to_vec(),
            };
            let suites: Vec<SuiteReport> = names
                .iter()
                .map(|n| run_suite(n, seed).expect("suite name validated by clap"))
                .collect();
            let passed = suites.iter().all(|s| s.passed);
            let out = RelationsOutput { seed, passed, suites };
            Ok((json(&out), if passed { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, code)) => {
            println!("{text}");
            ExitCode::from(code)
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
