//! `deacp`: parse, normalise, simulate and verify deACPei processes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};
use thiserror::Error;

use deacp_core::bisim::{self, Bisim, Verdict};
use deacp_core::oracle::{check_truth, replay, OracleError, TruthOptions, TruthVerdict, Witness};
use deacp_core::rg::{load_judgment, load_proof, Checker, Discharge, Mode, RgError};
use deacp_core::semantics::{hnf, is_terminal, step, HnfError, StepError};
use deacp_core::{parse_cond, parse_proc, parse_valuation, DataSpec, EvalError, ParseCtx, ParseError, Proc, SpecError};

const SCHEMA: &str = "deacp-cli/1";

#[derive(Parser)]
#[command(name = "deacp", version, about = "Process algebra with data and a rely/guarantee proof checker")]
struct Cli {
    /// Data specification (TOML); the built-in default has actions a, b, c and variables i, j over [-1, 3].
    #[arg(long, global = true)]
    dataspec: Option<PathBuf>,
    /// Correctness notion; overrides the mode named in a proof or judgment file.
    #[arg(long, global = true)]
    mode: Option<Mode>,
    #[arg(long, global = true, default_value_t = 12)]
    max_len: usize,
    #[arg(long, global = true, default_value_t = 100_000)]
    max_states: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a process term (or a condition) and print it back.
    Parse {
        input: String,
        /// Treat INPUT as the term itself rather than a file name.
        #[arg(short, long)]
        expr: bool,
        #[arg(long)]
        cond: bool,
    },
    /// Print a head normal form.
    Normalize {
        input: String,
        #[arg(short, long)]
        expr: bool,
    },
    /// List the process steps from a valuation.
    Step {
        input: String,
        #[arg(short, long)]
        expr: bool,
        /// Valuation such as `{i: 0, j: 1}`; the lowest value for every variable by default.
        #[arg(long)]
        rho: Option<String>,
    },
    /// Explore the reachable state space.
    Explore {
        input: String,
        #[arg(short, long)]
        expr: bool,
    },
    /// Decide bisimilarity of two terms.
    Bisim {
        left: String,
        right: String,
        #[arg(short, long)]
        expr: bool,
    },
    /// Check a derivation: exit 0 accepted, 1 rejected, 2 malformed.
    Check { proof: PathBuf },
    /// Bounded truth of a judgment: exit 0 holds, 1 refuted, 3 inconclusive.
    Truth {
        judgment: PathBuf,
        /// Write the refuting computation here as JSON.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Do not generate environment steps.
        #[arg(long)]
        no_env: bool,
    },
    /// Re-validate a witness written by `truth`: exit 0 valid, 1 invalid.
    Replay { witness: PathBuf },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Rg(#[from] RgError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(transparent)]
    Hnf(#[from] HnfError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Bisim(#[from] bisim::BisimError),
    #[error("{0}")]
    Usage(String),
}

struct Ctx {
    spec: DataSpec,
    format: Format,
}

impl Ctx {
    fn emit(&self, human: &str, value: Json) {
        match self.format {
            Format::Human => println!("{human}"),
            Format::Json => {
                let mut v = value;
                if let Json::Object(m) = &mut v {
                    m.insert("schema".into(), json!(SCHEMA));
                }
                println!("{}", serde_json::to_string_pretty(&v).expect("json output"));
            }
        }
    }

    fn parse_ctx(&self) -> ParseCtx {
        ParseCtx::from_spec(&self.spec)
    }

    fn term(&self, input: &str, expr: bool) -> Result<Proc, CliError> {
        let (text, path) = source(input, expr)?;
        parse_proc(text.trim(), &self.parse_ctx()).map_err(|source| CliError::Parse { path, source })
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn source(input: &str, expr: bool) -> Result<(String, String), CliError> {
    if expr {
        Ok((input.to_string(), "<expr>".to_string()))
    } else {
        Ok((read(Path::new(input))?, input.to_string()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let spec = match &cli.dataspec {
        Some(p) => DataSpec::from_toml(&read(p)?)?,
        None => DataSpec::default_spec(),
    };
    if cli.max_len == 0 || cli.max_states == 0 {
        return Err(CliError::Usage("bounds must be positive".into()));
    }
    let cx = Ctx { spec, format: cli.format };
    match cli.command {
        Command::Parse { input, expr, cond } => {
            if cond {
                let (text, path) = source(&input, expr)?;
                let c = parse_cond(text.trim(), &cx.parse_ctx()).map_err(|source| CliError::Parse { path, source })?;
                cx.emit(&c.to_string(), json!({"command": "parse", "cond": c.to_string()}));
            } else {
                let p = cx.term(&input, expr)?;
                cx.emit(
                    &p.to_string(),
                    json!({"command": "parse", "term": p.to_string(), "rg": p.is_rg(), "size": p.size(), "depth": p.depth()}),
                );
            }
            Ok(0)
        }
        Command::Normalize { input, expr } => {
            let p = cx.term(&input, expr)?;
            let h = hnf(&cx.spec, &p)?;
            let summands: Vec<String> = h.0.iter().map(|s| s.to_proc().to_string()).collect();
            cx.emit(&h.to_string(), json!({"command": "normalize", "hnf": h.to_string(), "summands": summands}));
            Ok(0)
        }
        Command::Step { input, expr, rho } => {
            let p = cx.term(&input, expr)?;
            let rho = match rho {
                Some(r) => parse_valuation(&r, &cx.parse_ctx())
                    .map_err(|source| CliError::Parse { path: "--rho".into(), source })?,
                None => cx.spec.base_valuation(),
            };
            let steps = step(&cx.spec, &p, &rho)?;
            let terminal = is_terminal(&cx.spec, &p, &rho)?;
            let mut human = format!("({p}, {rho})");
            for (a, q, r) in &steps {
                human.push_str(&format!("\n  --{a}--> ({q}, {r})"));
            }
            if terminal {
                human.push_str("\n  terminated");
            } else if steps.is_empty() {
                human.push_str("\n  deadlocked");
            }
            let js: Vec<Json> = steps
                .iter()
                .map(|(a, q, r)| json!({"label": a.to_string(), "proc": q.to_string(), "rho": r}))
                .collect();
            cx.emit(&human, json!({"command": "step", "proc": p.to_string(), "rho": rho, "terminal": terminal, "steps": js}));
            Ok(0)
        }
        Command::Explore { input, expr } => {
            let p = cx.term(&input, expr)?;
            let sp = bisim::explore(&cx.spec, &p, cli.max_states)?;
            let human = format!(
                "{} states, {} edges over {} valuations{}",
                sp.states.len(),
                sp.edge_count(),
                sp.valuations.len(),
                if sp.complete { "" } else { " (cut off at --max-states)" }
            );
            cx.emit(
                &human,
                json!({"command": "explore", "states": sp.states.len(), "edges": sp.edge_count(),
                       "valuations": sp.valuations.len(), "complete": sp.complete}),
            );
            Ok(if sp.complete { 0 } else { 3 })
        }
        Command::Bisim { left, right, expr } => {
            let l = cx.term(&left, expr)?;
            let r = cx.term(&right, expr)?;
            let v = Bisim::new(&cx.spec).with_max_states(cli.max_states).check(&l, &r)?;
            let (name, code, detail) = match &v {
                Verdict::Yes(rel) => ("yes", 0, json!({"relation_size": rel.len()})),
                Verdict::No(e) => ("no", 1, json!({"experiment": e.to_string()})),
                Verdict::Unknown { states } => ("unknown", 3, json!({"states": states})),
            };
            cx.emit(&v.to_string(), json!({"command": "bisim", "verdict": name, "detail": detail}));
            Ok(code)
        }
        Command::Check { proof } => {
            let (file_mode, d) = load_proof(&cx.spec, &read(&proof)?)?;
            let mode = cli.mode.or(file_mode).unwrap_or(Mode::Partial);
            let report = Checker::new(&cx.spec, mode).check(&d);
            let nodes: Vec<Json> = report
                .nodes
                .iter()
                .map(|n| {
                    let obls: Vec<Json> = n
                        .obligations
                        .iter()
                        .map(|(o, dis)| {
                            let (result, cx_) = match dis {
                                Discharge::Valid => ("valid", Json::Null),
                                Discharge::Skipped => ("skipped", Json::Null),
                                Discharge::Invalid(c) => ("invalid", json!(c)),
                                Discharge::Error(e) => ("error", json!(e)),
                            };
                            json!({"kind": o.kind.name(), "cond": o.cond.to_string(), "result": result, "counterexample": cx_})
                        })
                        .collect();
                    json!({"path": n.path.to_string(), "rule": n.rule.name(), "judgment": n.judgment,
                           "accepted": n.accepted(), "mismatches": n.mismatches, "obligations": obls})
                })
                .collect();
            let rejection = report.rejection().map(|(p, r)| json!({"path": p.to_string(), "reason": r}));
            cx.emit(
                &report.to_string(),
                json!({"command": "check", "mode": mode.name(), "accepted": report.accepted(),
                       "rules": d.rule_count(), "rejection": rejection, "nodes": nodes, "notes": report.notes}),
            );
            Ok(if report.accepted() { 0 } else { 1 })
        }
        Command::Truth { judgment, witness, no_env } => {
            let (file_mode, j) = load_judgment(&cx.spec, &read(&judgment)?)?;
            let mode = cli.mode.or(file_mode).unwrap_or(Mode::Partial);
            if mode == Mode::DeadlockFree && j.enab.is_none() {
                return Err(CliError::Usage("deadlock-free mode needs an enabledness condition `enab`".into()));
            }
            let mut opts = TruthOptions::new(mode, cli.max_len).with_max_states(cli.max_states);
            if no_env {
                opts = opts.without_env();
            }
            let v = check_truth(&cx.spec, &j, &opts)?;
            let (code, detail) = match &v {
                TruthVerdict::Holds(b) => (0, json!({"bounds": b})),
                TruthVerdict::Inconclusive(b) => (3, json!({"bounds": b})),
                TruthVerdict::Refuted(w) => {
                    if let Some(path) = &witness {
                        fs::write(path, w.to_json())
                            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                    }
                    let wj: Json = serde_json::from_str(&w.to_json()).expect("witness json");
                    (1, json!({"violation": w.violation.to_string(), "witness": wj}))
                }
            };
            cx.emit(
                &match &v {
                    TruthVerdict::Refuted(_) => format!("{mode}: {v}\ndata domain [{}, {}]", cx.spec.lo, cx.spec.hi),
                    _ => format!("{mode}: {v}"),
                },
                json!({"command": "truth", "mode": mode.name(), "verdict": v.name().to_lowercase(), "domain": [cx.spec.lo, cx.spec.hi], "detail": detail}),
            );
            Ok(code)
        }
        Command::Replay { witness } => {
            let w = Witness::from_json(&cx.spec, &read(&witness)?)?;
            match replay(&cx.spec, &w) {
                Ok(()) => {
                    cx.emit(
                        &format!("valid witness: {}", w.violation),
                        json!({"command": "replay", "valid": true, "violation": w.violation.to_string(), "steps": w.computation.len()}),
                    );
                    Ok(0)
                }
                Err(OracleError::Witness(reason)) => {
                    cx.emit(&format!("invalid witness: {reason}"), json!({"command": "replay", "valid": false, "reason": reason}));
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}
