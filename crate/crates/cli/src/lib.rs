//! Argument handling and orchestration for the `toricstrat` binary.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toricstrat_core::export;
use toricstrat_core::verifier::{fiber_transport, TransportOptions};
use toricstrat_core::{
    parse_input, stratify_with, verify_all, ProblemSpec, Stratification, StratifyError, StratifyOptions,
    Tolerances, VerifyError, VerifyOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_SATURATED: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;
pub const EXIT_USAGE: i32 = 5;

#[derive(Parser, Debug, Clone)]
#[command(name = "toricstrat", version, about = "Whitney stratification of coordinate projections on toric varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Face table, stratum ideals and flags.
    Stratify(Common),
    /// Face lattices of conv(A), cone(A) and the parameter cone.
    Faces(Common),
    /// Run the sampling checks.
    Verify(Common),
    /// Rescale the fibre over one parameter value onto another.
    Transport {
        #[command(flatten)]
        common: Common,
        /// Source parameter values, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        from: Vec<f64>,
        /// Target parameter values, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        to: Vec<f64>,
    },
    /// Macaulay2 script for a symbolic cross-check.
    #[command(name = "export-m2")]
    ExportM2(Common),
    /// Graphviz Hasse diagram of the faces of conv(A).
    #[command(name = "export-dot")]
    ExportDot(Common),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Input file, or `-` for standard input.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stratify the saturation when the exponent lattice is not saturated.
    #[arg(long)]
    pub force_saturate: bool,
    #[arg(long, default_value_t = 1e-9)]
    pub tol_residual: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_rank: f64,
    /// Torus samples for `verify`.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also write the Macaulay2 script here.
    #[arg(long, value_name = "PATH")]
    pub export_m2: Option<PathBuf>,
    /// Also write the Graphviz diagram here.
    #[arg(long, value_name = "PATH")]
    pub export_dot: Option<PathBuf>,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Stratify(c)
            | Command::Faces(c)
            | Command::Verify(c)
            | Command::ExportM2(c)
            | Command::ExportDot(c) => c,
            Command::Transport { common, .. } => common,
        }
    }
}

/// Exit status plus what goes to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: stderr.into(),
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output types serialize");
    s.push('\n');
    s
}

fn tolerances(c: &Common) -> Tolerances {
    Tolerances {
        residual: c.tol_residual,
        rank: c.tol_rank,
    }
}

/// Runs one command on an already-read input document.
pub fn run(cmd: &Command, input: &str) -> Outcome {
    let common = cmd.common();
    let spec = match parse_input(input) {
        Ok(s) => s,
        Err(e) => return Outcome::fail(EXIT_PARSE, format!("error: {e}\n")),
    };
    let opts = StratifyOptions {
        force_saturate: common.force_saturate,
        threads: common.threads,
    };
    let strat = match stratify_with(&spec, &opts) {
        Ok(s) => s,
        Err(e @ StratifyError::NotSaturated { .. }) => {
            return Outcome::fail(EXIT_NOT_SATURATED, format!("error: {e}\n"))
        }
    };
    if let Err(e) = write_side_exports(common, &spec, &strat) {
        return Outcome::fail(EXIT_USAGE, format!("error: {e}\n"));
    }

    match cmd {
        Command::Stratify(c) => Outcome::ok(match c.format {
            Format::Text => export::stratification_text(&strat),
            Format::Json => json(&export::stratification_json(&strat)),
        }),
        Command::Faces(c) => Outcome::ok(match c.format {
            Format::Text => export::faces_text(&strat),
            Format::Json => json(&export::faces_json(&strat)),
        }),
        Command::Verify(c) => {
            let vopts = VerifyOptions {
                seed: c.seed,
                torus_samples: c.samples,
                tol: tolerances(c),
                ..VerifyOptions::default()
            };
            let report = verify_all(&spec, &strat, &vopts);
            let body = match c.format {
                Format::Text => export::report_text(&report),
                Format::Json => json(&report),
            };
            Outcome {
                code: if report.passed() { EXIT_OK } else { EXIT_VERIFY },
                stdout: body,
                stderr: String::new(),
            }
        }
        Command::Transport { common, from, to } => transport(common, &spec, &strat, from, to),
        Command::ExportM2(_) => Outcome::ok(export::m2_script(&spec, &strat)),
        Command::ExportDot(_) => Outcome::ok(export::dot(&strat)),
    }
}

fn transport(c: &Common, spec: &ProblemSpec, strat: &Stratification, from: &[f64], to: &[f64]) -> Outcome {
    let opts = TransportOptions {
        seed: c.seed,
        tol: tolerances(c),
        ..TransportOptions::default()
    };
    match fiber_transport(spec, &strat.config, from, to, &opts) {
        Ok(r) => {
            let code = if r.max_residual < c.tol_residual { EXIT_OK } else { EXIT_VERIFY };
            let body = match c.format {
                Format::Json => json(&r),
                Format::Text => {
                    let s: Vec<String> = r.scaling.iter().map(|x| format!("{x:.12}")).collect();
                    format!(
                        "scaling s = ({})\nmax residual {:.3e} over {} fibre points\n",
                        s.join(", "),
                        r.max_residual,
                        r.samples
                    )
                }
            };
            Outcome {
                code,
                stdout: body,
                stderr: String::new(),
            }
        }
        Err(e @ VerifyError::Arity { .. }) => Outcome::fail(EXIT_USAGE, format!("error: {e}\n")),
        Err(e) => Outcome::fail(EXIT_VERIFY, format!("error: {e}\n")),
    }
}

fn write_side_exports(c: &Common, spec: &ProblemSpec, strat: &Stratification) -> std::io::Result<()> {
    if let Some(p) = &c.export_m2 {
        fs::write(p, export::m2_script(spec, strat))?;
    }
    if let Some(p) = &c.export_dot {
        fs::write(p, export::dot(strat))?;
    }
    Ok(())
}

/// Parses arguments, reads the input and runs. Clap errors map to the usage
/// code, except `--help` and `--version`.
pub fn main_with_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, text)
            };
        }
    };
    let path = &cli.command.common().input;
    let input = if path.as_os_str() == "-" {
        let mut s = String::new();
        match std::io::Read::read_to_string(&mut std::io::stdin(), &mut s) {
            Ok(_) => s,
            Err(e) => return Outcome::fail(EXIT_USAGE, format!("error: reading stdin: {e}\n")),
        }
    } else {
        match fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => return Outcome::fail(EXIT_USAGE, format!("error: {}: {e}\n", path.display())),
        }
    };
    run(&cli.command, &input)
}
