//! The `dehn` command-line tool.
//!
//! Exit codes: `0` success, `1` word not null, `2` usage, parse or
//! configuration error, `3` invalid certificate, `4` internal failure.
//! Diagnostics go to stderr as `error[<code>]: <message>`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dehn_core::bounds::default_caps;
use dehn_core::fillers::budget::{gamma_m_sum, gamma_sum};
use dehn_core::words::PresentationKind;
use dehn_core::{
    area_exact, fibonacci, fill_null_word, fill_null_word_mod, growth_table, h_coords, is_identity,
    AreaSearch, Certificate, DerivationError, Presentation, VerifyMode, Word, DEFAULT_REPLAY_CAP,
};
use num_bigint::BigUint;
use thiserror::Error;

mod parse;
mod report;

pub use parse::{parse_word, ParseError};
pub use report::{emit_report, DistortionRecord, Format, GrowthRecord, Record};

#[derive(Debug, Parser)]
#[command(
    name = "dehn",
    version,
    about = "Word problem, area certificates and lower bounds for Baumslag's metabelian group"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a word represents the identity.
    Check(WordArgs),
    /// Build an area certificate for a null word and write it to a file.
    Fill {
        #[command(flatten)]
        word: WordArgs,
        /// Certificate output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a certificate file.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Largest cost replayed move by move.
        #[arg(long, default_value_t = DEFAULT_REPLAY_CAP)]
        step_cap: u64,
    },
    /// Images of `[a, a^(t^n)]` in the central subgroup, against `F_n`.
    Distortion(TableArgs),
    /// Lower bound, certificate cost and budget for `[a, a^(t^n)]`.
    Growth(TableArgs),
    /// Exhaustive search for the exact area of a short word.
    Oracle {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        max_cost: Option<u64>,
        #[arg(long)]
        max_len: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct WordArgs {
    /// gamma, gamma_m:<m>, gamma_bar or heis.
    #[arg(long, default_value = "gamma")]
    pub group: String,
    #[arg(long)]
    pub word: String,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub max_n: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Structural, plus replay when the cost is within `--step-cap`.
    Auto,
    Structural,
    Replay,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Certificate(DerivationError),
    #[error("word `{word}` is not null in {group}")]
    NotNull { word: Word, group: String },
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse(ParseError::Syntax { .. }) => "syntax",
            CliError::Parse(ParseError::UnknownGenerator { .. }) => "unknown-generator",
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Certificate(_) => "certificate-format",
            CliError::NotNull { .. } => "not-null",
            CliError::Internal(_) => "internal",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NotNull { .. } => 1,
            CliError::Internal(_) => 4,
            _ => 2,
        }
    }
}

/// Resolves a group selector.
pub fn parse_group(name: &str) -> Result<Presentation, CliError> {
    if let Some(m) = name.strip_prefix("gamma_m:") {
        let m: u64 = m
            .parse()
            .map_err(|_| CliError::Config(format!("bad modulus in `{name}`")))?;
        if m < 2 {
            return Err(CliError::Config(format!(
                "modulus must be at least 2, got {m}"
            )));
        }
    } else if !matches!(name, "gamma" | "gamma_bar" | "heis") {
        return Err(CliError::Config(format!(
            "unknown group `{name}` (expected gamma, gamma_m:<m>, gamma_bar or heis)"
        )));
    }
    Presentation::by_name(name).ok_or_else(|| CliError::Config(format!("unknown group `{name}`")))
}

fn load(args: &WordArgs) -> Result<(Presentation, Word), CliError> {
    let pres = parse_group(&args.group)?;
    let word = parse_word(&args.word, pres.alphabet())?;
    Ok((pres, word))
}

fn null(pres: &Presentation, w: &Word) -> Result<bool, CliError> {
    is_identity(w, pres).map_err(|e| CliError::Internal(e.to_string()))
}

fn require_null(pres: &Presentation, w: &Word) -> Result<(), CliError> {
    if null(pres, w)? {
        Ok(())
    } else {
        Err(CliError::NotNull {
            word: w.clone(),
            group: pres.name().to_string(),
        })
    }
}

fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_out(out: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    out.write_all(bytes)
        .map_err(|e| CliError::Internal(format!("writing output: {e}")))
}

fn check(args: &WordArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (pres, w) = load(args)?;
    let is_null = null(&pres, &w)?;
    let verdict = if is_null { "null" } else { "not null" };
    write_out(out, format!("{verdict}\n").as_bytes())?;
    Ok(if is_null { 0 } else { 1 })
}

fn fill(args: &WordArgs, path: &std::path::Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let (pres, w) = load(args)?;
    require_null(&pres, &w)?;
    let n = w.len() as u64;
    let (deriv, budget) = match pres.kind() {
        PresentationKind::Gamma => (fill_null_word(&w), gamma_sum(n)),
        PresentationKind::GammaM(m) => (fill_null_word_mod(&w, m), gamma_m_sum(m, n)),
        _ => {
            return Err(CliError::Config(format!(
                "no filler for {}; use `oracle` for short words",
                pres.name()
            )))
        }
    };
    let deriv = deriv.map_err(|e| CliError::Internal(e.to_string()))?;
    let cost = deriv.cost().clone();
    let cert = Certificate::new(pres, deriv);
    let mut text = cert.to_json();
    text.push('\n');
    std::fs::write(path, text).map_err(io_err(path))?;
    let within = if cost <= budget { "within" } else { "exceeds" };
    write_out(
        out,
        format!(
            "cost: {cost}\nbudget: {budget}\nstatus: {within} budget\ncertificate: {}\n",
            path.display()
        )
        .as_bytes(),
    )?;
    Ok(0)
}

fn verify(
    path: &std::path::Path,
    mode: ModeArg,
    step_cap: u64,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let cert = Certificate::from_json(&text).map_err(CliError::Certificate)?;
    let mut modes = Vec::new();
    if mode != ModeArg::Replay {
        modes.push(VerifyMode::Structural);
    }
    let replay_fits = cert.root.cost() <= &BigUint::from(step_cap);
    match mode {
        ModeArg::Replay if !replay_fits => {
            return Err(CliError::Config(format!(
                "certificate cost {} exceeds --step-cap {step_cap}",
                cert.root.cost()
            )))
        }
        ModeArg::Replay => modes.push(VerifyMode::Replay),
        ModeArg::Auto if replay_fits => modes.push(VerifyMode::Replay),
        _ => {}
    }
    let mut lines = String::new();
    let mut valid = true;
    for m in modes {
        let report = cert
            .verify(m, step_cap)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        let name = match m {
            VerifyMode::Replay => "replay",
            VerifyMode::Structural => "structural",
        };
        match &report.failure {
            None if report.valid => {
                lines.push_str(&format!("{name}: valid, cost {}\n", report.cost))
            }
            Some(f) => lines.push_str(&format!("{name}: invalid {f}\n")),
            None => lines.push_str(&format!("{name}: invalid\n")),
        }
        valid &= report.valid;
        if !valid {
            break;
        }
    }
    if mode == ModeArg::Auto && !replay_fits && valid {
        lines.push_str(&format!(
            "replay: skipped, cost above --step-cap {step_cap}\n"
        ));
    }
    write_out(out, lines.as_bytes())?;
    Ok(if valid { 0 } else { 3 })
}

/// `(n, F_n, λ, μ)` for `n = 1..=max_n`.
pub fn distortion_rows(max_n: u32) -> Result<Vec<DistortionRecord>, CliError> {
    (1..=max_n)
        .map(|n| {
            let c = h_coords(&dehn_core::words::commutator_word(n as i64))
                .map_err(|e| CliError::Internal(e.to_string()))?;
            Ok(DistortionRecord {
                n,
                fibonacci: fibonacci(n as u64),
                lambda: c.lambda,
                mu: c.mu,
            })
        })
        .collect()
}

pub fn growth_rows(max_n: u32) -> Result<Vec<GrowthRecord>, CliError> {
    if max_n == 0 {
        return Ok(Vec::new());
    }
    let rows = growth_table(max_n).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(rows
        .into_iter()
        .map(|r| GrowthRecord {
            n: r.n,
            length: r.word_length,
            lower: r.lower,
            cost: r.cert_cost,
            budget: r.budget,
        })
        .collect())
}

fn oracle(
    args: &WordArgs,
    max_cost: Option<u64>,
    max_len: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let (pres, w) = load(args)?;
    require_null(&pres, &w)?;
    let (dc, dl) = default_caps(&w);
    let (max_cost, max_len) = (max_cost.unwrap_or(dc), max_len.unwrap_or(dl));
    if w.len() > max_len {
        return Err(CliError::Config(format!(
            "word length {} exceeds --max-len {max_len}",
            w.len()
        )));
    }
    let result =
        area_exact(&w, &pres, max_cost, max_len).map_err(|e| CliError::Internal(e.to_string()))?;
    let line = match result {
        AreaSearch::Exact { area, .. } => format!("area: {area}\n"),
        AreaSearch::Unknown { lower } => {
            format!("area: unknown (at least {lower} within max-len {max_len})\n")
        }
    };
    write_out(out, line.as_bytes())?;
    Ok(0)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Check(args) => check(args, out),
        Command::Fill { word, out: path } => fill(word, path, out),
        Command::Verify {
            cert,
            mode,
            step_cap,
        } => verify(cert, *mode, *step_cap, out),
        Command::Distortion(t) => {
            write_out(out, &emit_report(&distortion_rows(t.max_n)?, t.format))?;
            Ok(0)
        }
        Command::Growth(t) => {
            write_out(out, &emit_report(&growth_rows(t.max_n)?, t.format))?;
            Ok(0)
        }
        Command::Oracle {
            word,
            max_cost,
            max_len,
        } => oracle(word, *max_cost, *max_len, out),
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = write!(err, "error[usage]: {text}");
                    2
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            e.exit_code()
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
