//! The `osfol` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use osfol_core::network::Consistency;
use osfol_core::report::{prove_centralized, ReportConfig, Verdict};
use osfol_core::saturation::{saturate, Limits, ProofResult, Trace};
use osfol_core::syntax::Symbol;
use osfol_core::transform::unskolemize;

use crate::parse::{parse_formula, parse_problem, ParseOptions, Problem};
use crate::schedule::{run_report, Deadline, Schedule};

pub const EXIT_PROVED: i32 = 0;
pub const EXIT_SATURATED: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;
pub const EXIT_SEND_FAILURE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "osfol", version, about = "Order-sorted resolution and distributed reporting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Stop once this many clauses are retained.
    #[arg(long, global = true, default_value_t = 100_000)]
    max_clauses: usize,
    /// Wall-clock budget for the whole run; 0 disables it.
    #[arg(long, global = true, default_value_t = 60.0)]
    timeout_secs: f64,
    /// Add synthetic sorts so that every pair of sorts has a meet.
    #[arg(long, global = true)]
    synthesize_glbs: bool,
    /// Write the proof trace to this file instead of standard output.
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    /// Permute agents of equal distance with this seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the signature-tree conditions of a network.
    Validate {
        file: PathBuf,
        /// Also test every symbol set (networks with at most 12 symbols).
        #[arg(long)]
        exhaustive_peak: bool,
        /// Saturate each knowledge base alone to look for inconsistency.
        #[arg(long)]
        check_consistency: bool,
    },
    /// Answer a query, by default with the distributed report procedure.
    Prove {
        file: PathBuf,
        /// File holding the query; defaults to the `[query]` section.
        #[arg(long)]
        query: Option<PathBuf>,
        /// Saturate the combined knowledge base at one agent instead.
        #[arg(long)]
        centralized: bool,
        /// Run agents of equal distance on separate threads.
        #[arg(long)]
        concurrent: bool,
    },
    /// Replace Skolem symbols by quantifiers.
    Unskolemize {
        file: PathBuf,
        /// Comma-separated Skolem symbols.
        #[arg(long, value_delimiter = ',', required = true)]
        skolems: Vec<String>,
    },
    /// Saturate all clauses of a file.
    Saturate { file: PathBuf },
}

struct Failure(i32, String);

impl Common {
    fn limits(&self) -> Limits {
        Limits { max_clauses: self.max_clauses, ..Limits::default() }
    }

    fn deadline(&self) -> Deadline {
        let budget = (self.timeout_secs > 0.0).then(|| Instant::now() + Duration::from_secs_f64(self.timeout_secs));
        Deadline(budget)
    }

    fn options(&self) -> ParseOptions {
        ParseOptions { synthesize_glbs: self.synthesize_glbs }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map(|s| s.replace("\r\n", "\n"))
        .map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn load(path: &Path, common: &Common) -> Result<Problem, Failure> {
    let text = read(path)?;
    parse_problem(&text, &common.options())
        .map_err(|e| Failure(EXIT_INPUT, format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message)))
}

fn emit_trace(trace: &Trace, common: &Common, out: &mut dyn Write) -> Result<(), Failure> {
    match &common.trace {
        Some(path) => {
            fs::write(path, trace.to_string()).map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))
        }
        None => write!(out, "{trace}").map_err(|e| Failure(EXIT_INPUT, e.to_string())),
    }
}

fn result_code(r: &ProofResult) -> i32 {
    match r {
        ProofResult::Proved(_) => EXIT_PROVED,
        ProofResult::Saturated => EXIT_SATURATED,
        ProofResult::ResourceLimit(_) => EXIT_LIMIT,
    }
}

fn result_line(r: &ProofResult) -> String {
    match r {
        ProofResult::Proved(_) => "verdict = proved".into(),
        ProofResult::Saturated => "verdict = saturated".into(),
        ProofResult::ResourceLimit(k) => format!("verdict = resource limit ({k})"),
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let common = cli.common;
    let io = |e: std::io::Error| Failure(EXIT_INPUT, e.to_string());
    match cli.command {
        Command::Validate { file, exhaustive_peak, check_consistency } => {
            let p = load(&file, &common)?;
            let report = p.network.validate_tree();
            write!(out, "{report}").map_err(io)?;
            let mut ok = report.certified();
            if exhaustive_peak {
                match p.network.exhaustive_peak_check(12) {
                    Some(Ok(())) => writeln!(out, "peak-exhaustive = pass").map_err(io)?,
                    Some(Err(omega)) => {
                        ok = false;
                        let names: Vec<&str> = omega.iter().map(Symbol::name).collect();
                        writeln!(out, "peak-exhaustive = fail: no decider for {{{}}}", names.join(", ")).map_err(io)?
                    }
                    None => writeln!(out, "peak-exhaustive = skipped: more than 12 symbols").map_err(io)?,
                }
            }
            if check_consistency {
                let deadline = common.deadline();
                for (a, c) in p.network.consistency_precheck(&common.limits(), &deadline) {
                    writeln!(out, "consistency {a} = {c}").map_err(io)?;
                    ok &= c != Consistency::Inconsistent;
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Prove { file, query, centralized, concurrent } => {
            let p = load(&file, &common)?;
            let q = match query {
                Some(path) => {
                    let text = read(&path)?;
                    parse_formula(&text, &p.network.signature).map_err(|e| {
                        Failure(EXIT_INPUT, format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message))
                    })?
                }
                None => p.query.clone().ok_or_else(|| Failure(EXIT_INPUT, "no query given".into()))?,
            };
            let deadline = common.deadline();
            if centralized {
                let run = prove_centralized(&p.network, &q, &common.limits(), &deadline)
                    .map_err(|e| Failure(EXIT_INPUT, e.to_string()))?;
                writeln!(out, "{}", result_line(&run.result)).map_err(io)?;
                if let ProofResult::Proved(t) = &run.result {
                    emit_trace(t, &common, out)?;
                }
                return Ok(result_code(&run.result));
            }
            let report = p.network.validate_tree();
            if !report.certified() {
                eprintln!("warning: not a signature tree; the verdict carries no completeness guarantee");
            }
            let config = ReportConfig { limits: common.limits() };
            let outcome = run_report(&p.network, &q, config, Schedule { seed: common.seed, concurrent }, deadline)
                .map_err(|e| Failure(EXIT_INPUT, e.to_string()))?;
            for m in &outcome.log {
                writeln!(out, "message {m}").map_err(io)?;
            }
            for (a, k) in &outcome.interior_limits {
                writeln!(out, "limit {a} = {k}").map_err(io)?;
            }
            match &outcome.result {
                Err(e) => {
                    writeln!(out, "verdict = send failure").map_err(io)?;
                    writeln!(out, "failure = {e}").map_err(io)?;
                }
                Ok(r) => {
                    let line = match outcome.verdict() {
                        Verdict::ResourceLimit if matches!(r, ProofResult::Saturated) => {
                            "verdict = resource limit (at a reporting agent)".to_string()
                        }
                        _ => result_line(r),
                    };
                    writeln!(out, "{line}").map_err(io)?;
                    if let ProofResult::Proved(t) = r {
                        emit_trace(t, &common, out)?;
                    }
                }
            }
            Ok(match outcome.verdict() {
                Verdict::Proved => EXIT_PROVED,
                Verdict::Saturated => EXIT_SATURATED,
                Verdict::ResourceLimit => EXIT_LIMIT,
                Verdict::SendFailure => EXIT_SEND_FAILURE,
            })
        }
        Command::Unskolemize { file, skolems } => {
            let p = load(&file, &common)?;
            let skolems = skolems.iter().map(|s| Symbol::new(s.trim())).collect();
            let clauses = p.network.combined_kb();
            match unskolemize(&clauses, &skolems, &p.network.signature) {
                Ok(blocks) => {
                    for b in blocks {
                        writeln!(out, "{b}").map_err(io)?;
                    }
                    Ok(0)
                }
                Err(e) => Err(Failure(EXIT_SEND_FAILURE, e.to_string())),
            }
        }
        Command::Saturate { file } => {
            let p = load(&file, &common)?;
            let run = saturate(&p.network.combined_kb(), &p.network.signature, &common.limits(), &common.deadline());
            writeln!(out, "{}", result_line(&run.result)).map_err(io)?;
            match &run.result {
                ProofResult::Proved(t) => emit_trace(t, &common, out)?,
                _ => {
                    for c in &run.clauses {
                        writeln!(out, "{c}").map_err(io)?;
                    }
                }
            }
            Ok(result_code(&run.result))
        }
    }
}

/// Runs the command line with output to `out`; returns the exit code.
pub fn run_with_output(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

pub fn main(args: impl IntoIterator<Item = OsString>) -> i32 {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_with_output(args, &mut lock)
}
