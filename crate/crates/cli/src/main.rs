//! `qsl`: optimal gate times under a trace-norm control budget.
//!
//! Standard output carries only JSON; a one-line summary goes to standard
//! error. Exit codes: 0 ok, 1 unreadable input, 2 failed precondition,
//! 3 `verify` discrepancy.

mod commands;
mod error;
mod formats;
mod json;

use std::collections::BTreeMap;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qsl_core::Tolerances;

use commands::{Output, Settings};
use error::CliError;
use formats::InputJson;

#[derive(Parser, Debug)]
#[command(name = "qsl", version, about = "Quantum speed limits from the Randers navigation metric")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Seed of the brute-force sampler.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Absolute tolerance for Hermiticity, unitarity and determinant checks.
    #[arg(long, global = true)]
    tol_spec: Option<f64>,
    /// Frobenius distance that counts as reaching the target.
    #[arg(long, global = true)]
    dist_tol: Option<f64>,
    /// Enumerate logarithm branches with eigenphase shifts up to this many turns.
    #[arg(long, global = true)]
    branch_max_shift: Option<u32>,
    /// Accept the target up to an N-th root of unity.
    #[arg(long, global = true)]
    quotient_center: bool,
    /// Allow schedule segments off the budget sphere.
    #[arg(long, global = true)]
    relax_budget: bool,
    /// Write JSON here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Suppress the summary on standard error.
    #[arg(short, long, global = true)]
    quiet: bool,
}

#[derive(Args, Debug)]
struct InputArg {
    /// Input JSON file; `-` or omitted reads standard input.
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal constant-control time for a target gate.
    Tmin(InputArg),
    /// Randers norm of an anti-Hermitian generator.
    Norm(InputArg),
    /// Randers length of a piecewise-constant control schedule.
    Length(InputArg),
    /// Compare the closed form against a brute-force search.
    Verify(InputArg),
    /// Every intermediate quantity of a built-in example.
    PresetReport {
        /// `single-spin` or `swap-chain`.
        name: String,
        /// Preset parameter, e.g. `--param by=0.3`.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
    },
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected key=value")?;
    let v = v.parse::<f64>().map_err(|e| format!("{v:?}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn read_input(arg: &InputArg) -> Result<InputJson, CliError> {
    let text = match &arg.input {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path)?,
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    Ok(serde_json::from_str(&text)?)
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    let mut tol = Tolerances::default();
    if let Some(t) = g.tol_spec {
        tol.spec = t;
    }
    let settings = Settings {
        tol,
        seed: g.seed,
        dist_tol: g.dist_tol,
        branch_max_shift: g.branch_max_shift,
        quotient_center: g.quotient_center,
        relax_budget: g.relax_budget,
    };
    match &cli.command {
        Command::Tmin(a) => commands::tmin(&read_input(a)?, &settings),
        Command::Norm(a) => commands::norm(&read_input(a)?, &settings),
        Command::Length(a) => commands::length(&read_input(a)?, &settings),
        Command::Verify(a) => commands::verify(&read_input(a)?, &settings),
        Command::PresetReport { name, params } => {
            let params: BTreeMap<String, f64> = params.iter().cloned().collect();
            commands::preset_report(name, &params, &settings)
        }
    }
}

fn emit(cli: &Cli, out: &Output) -> io::Result<()> {
    match &cli.global.output {
        Some(path) => std::fs::write(path, &out.json),
        None => io::stdout().lock().write_all(out.json.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out) {
                eprintln!("qsl: cannot write output: {e}");
                return ExitCode::from(1);
            }
            if !cli.global.quiet {
                eprintln!("{}", out.summary);
            }
            match out.failure {
                Some(kind) => ExitCode::from(kind as u8),
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("qsl: {}", e.message.replace('\n', "\nqsl: "));
            ExitCode::from(e.kind as u8)
        }
    }
}
