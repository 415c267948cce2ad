//! The `timelogic` command line: one subcommand per library entry point.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::countermachine::{
    build_phi_cm, build_phi_iecm, encode_run, encode_run_unchecked, parse_machine_file,
    parse_schedule, phi_9, phi_iecm_conjuncts, run, MachineError,
};
use crate::eval::{EmptyWindowPolicy, EvalError, Evaluator};
use crate::formula::{
    classify, desugar, flatten, parse, print, to_nnf, witness_names, Formula, FormulaError,
};
use crate::reductions::{
    fk_to_rat, fk_to_rat_formula, fuzz, rat_to_fk, rat_to_fk_formula, relativized_formula,
    verify_oversampled_equisat, verify_simple_equisat, ReductionError, ReductionReport, Universe,
};
use crate::timedword::{parse_rational, TimedWord, TimedWordError};

const FORMATS: &str = "\
Formula files (.tl), `#` starts a comment:
  phi   ::= imp ( '<->' phi )?
  imp   ::= dis ( '->' imp )?
  dis   ::= con ( '|' con )*
  con   ::= tmp ( '&' tmp )*
  tmp   ::= un ( ('U' | 'S' | 'Uns' | 'Sns') sub? tmp )?
  un    ::= '!' un | ('F' | 'G' | 'P<>' | 'PG' | 'O' | 'Obar') sub? un
          | ('Fns' | 'Gns') un | var '.' un | prim
  prim  ::= '(' phi ')' | 'true' | 'false' | atom
          | 'T' '-' var 'in' iv | var 'in' iv | var '-' 'T' 'in' iv
          | ('Rat' | 'FRat' | 'PRat') '[' iv ']' set '{' aut '}'
          | ('Fk' | 'Pk') '[' iv (';' iv)* ']' set '{' aut ('|' aut)* '}'
  sub   ::= '[' iv ']'
  iv    ::= ('(' | '[') int ',' (int | 'inf') (')' | ']')
  set   ::= '(' ( phi (';' phi)* )? ')'
  aut   ::= regex | '@{' 'states:' q* ';' 'init:' q ';' 'final:' q* ';' (q '-{' f* '}->' q)* '}'
  regex ::= letters '{f1,f2}' or set names, 'eps', 'empty', 'any', '.', '+', '*', '( )'

Timed words (.tw): one point per line, `time : p q ...`, times as
integers, decimals or n/d, non-decreasing from 0.

Counter machines (.cm):
  counters: k
  N: inc j goto t | N: dec j goto t | N: ifz j goto z else nz | N: halt
  step N: +e1 ... +ek      (incremental errors added after step N)

Exit codes: 0 success or true, 1 false or counterexample, 2 usage error.";

#[derive(Debug, Parser)]
#[command(name = "timelogic", version, about = "Finite timed-word temporal logics", after_long_help = FORMATS)]
struct Cli {
    /// Emit one JSON object per report line.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FormulaArg {
    /// Formula file.
    #[arg(short = 'f', long = "formula")]
    formula: PathBuf,
}

#[derive(Debug, Args)]
struct MachineArg {
    /// Counter machine file.
    #[arg(short = 'm', long = "machine")]
    machine: PathBuf,
    /// Error schedule file replacing the machine file's `step` lines.
    #[arg(long = "schedule")]
    schedule: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Via {
    Flatten,
    Relativize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EmptyWindow {
    Epsilon,
    False,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and pretty-print a formula.
    Parse(FormulaArg),
    /// Report the fragments a formula belongs to.
    Classify(FormulaArg),
    /// Evaluate a formula on a timed word.
    Eval {
        #[command(flatten)]
        f: FormulaArg,
        /// Timed word file.
        #[arg(short = 'w', long = "word")]
        word: PathBuf,
        /// 1-based position; all positions when omitted.
        #[arg(long)]
        pos: Option<usize>,
        /// Truth of an empty time-segment window.
        #[arg(long, value_enum, default_value = "epsilon")]
        empty_window: EmptyWindow,
    },
    /// Negation normal form (MTL operators embedded into 1-TPTL first).
    Nnf(FormulaArg),
    /// Rewrite derived operators into U, S and the booleans.
    Desugar(FormulaArg),
    /// Replace nested modalities by witness propositions.
    Flatten {
        #[command(flatten)]
        f: FormulaArg,
        /// Comma-separated Σ; defaults to the formula's atoms.
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<String>,
    },
    /// `⋁Σ ∧ Rel(Σ, φ)`.
    Relativize {
        #[command(flatten)]
        f: FormulaArg,
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<String>,
    },
    /// Translate every Fᵏ node into Rat modalities.
    Fk2rat {
        #[command(flatten)]
        f: FormulaArg,
        /// Output file; stdout when omitted.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Translate every Rat node into Fᵏ modalities.
    Rat2fk {
        #[command(flatten)]
        f: FormulaArg,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Bounded equisatisfiability of φ and ψ over small timed words.
    EquisatCheck {
        #[command(flatten)]
        f: FormulaArg,
        /// ψ file; use --via to build ψ from φ instead.
        #[arg(long, required_unless_present = "via", conflicts_with = "via")]
        psi: Option<PathBuf>,
        #[arg(long, value_enum)]
        via: Option<Via>,
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<String>,
        /// Comma-separated extra propositions of ψ; one fresh name for --via relativize.
        #[arg(long, value_delimiter = ',')]
        extra: Vec<String>,
        /// Check against oversampled rather than simple projections.
        #[arg(long)]
        oversampled: bool,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Comma-separated timestamp grid.
        #[arg(long, value_delimiter = ',', default_value = "0,1/2,1,3/2,2")]
        grid: Vec<String>,
    },
    /// Simulate a counter machine.
    CmRun {
        #[command(flatten)]
        m: MachineArg,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
    },
    /// Encode a halting run as a timed word.
    CmEncode {
        #[command(flatten)]
        m: MachineArg,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        /// Skip the check of the encoding against φ_IECM.
        #[arg(long)]
        unchecked: bool,
    },
    /// Emit φ_IECM (--errors) or φ_CM (--exact) for a machine.
    CmFormula {
        #[command(flatten)]
        m: MachineArg,
        #[arg(long, conflicts_with = "exact", required_unless_present = "exact")]
        errors: bool,
        #[arg(long)]
        exact: bool,
        /// Print the named conjuncts one per line.
        #[arg(long)]
        conjuncts: bool,
    },
    /// Differential fuzzing of a translation against the evaluator.
    Fuzz {
        #[arg(long)]
        target: fuzz::Target,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 300)]
        cases: u64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {msg}")]
    Read { path: String, msg: String },
    #[error("cannot write {path}: {msg}")]
    Write { path: String, msg: String },
    #[error("{path}: {source}")]
    Formula { path: String, source: FormulaError },
    #[error("{path}: {source}")]
    Word {
        path: String,
        source: TimedWordError,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("{0}")]
    Usage(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Read {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Write {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Reads a formula file, dropping `#` comments.
pub fn read_formula(path: &Path) -> Result<Formula, CliError> {
    let raw = read(path)?;
    let text: Vec<&str> = raw
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect();
    parse(&text.join("\n")).map_err(|source| CliError::Formula {
        path: path.display().to_string(),
        source,
    })
}

fn read_word(path: &Path) -> Result<TimedWord, CliError> {
    read(path)?.parse().map_err(|source| CliError::Word {
        path: path.display().to_string(),
        source,
    })
}

fn sigma_or_atoms(sigma: &[String], f: &Formula) -> BTreeSet<String> {
    if sigma.is_empty() {
        f.atoms()
    } else {
        sigma.iter().cloned().collect()
    }
}

struct Out<'a> {
    out: &'a mut dyn Write,
    json: bool,
}

impl Out<'_> {
    fn text(&mut self, s: impl std::fmt::Display) {
        if !self.json {
            let _ = writeln!(self.out, "{s}");
        }
    }

    fn record(&mut self, v: impl Serialize) {
        if self.json {
            let line = serde_json::to_string(&v).expect("reports serialize");
            let _ = writeln!(self.out, "{line}");
        }
    }

    fn both(&mut self, s: impl std::fmt::Display, v: impl Serialize) {
        self.text(s);
        self.record(v);
    }
}

fn formula_command(o: &mut Out, name: &str, f: &Formula) {
    let text = print(f);
    o.both(
        &text,
        json!({"command": name, "formula": text, "size": f.size()}),
    );
}

fn reduction(
    o: &mut Out,
    name: &str,
    f: &Formula,
    output: Option<&Path>,
    single: fn(&Formula) -> Result<ReductionReport, ReductionError>,
    nested: fn(&Formula) -> Result<Formula, ReductionError>,
) -> Result<i32, CliError> {
    let (result, report) = match single(f) {
        Ok(r) => (r.output.clone(), Some(r)),
        Err(ReductionError::WrongNode { .. }) => (nested(f)?, None),
        Err(e) => return Err(e.into()),
    };
    let text = print(&result);
    match output {
        Some(path) => write_file(path, &format!("{text}\n"))?,
        None => o.text(&text),
    }
    o.text(format!(
        "input size {}, output size {}",
        f.size(),
        result.size()
    ));
    if let Some(r) = &report {
        o.text(format!(
            "windows {}, state tuples before pruning {}",
            r.windows.len(),
            r.tuples_before_pruning
        ));
    }
    o.record(json!({
        "command": name,
        "output": if output.is_some() { None } else { Some(&text) },
        "input_size": f.size(),
        "output_size": result.size(),
        "report": report,
    }));
    Ok(0)
}

fn execute(cli: Cli, o: &mut Out) -> Result<i32, CliError> {
    match cli.command {
        Command::Parse(a) => formula_command(o, "parse", &read_formula(&a.formula)?),
        Command::Classify(a) => {
            let report = classify(&read_formula(&a.formula)?);
            if o.json {
                o.record(&report);
            } else {
                let _ = write!(o.out, "{report}");
            }
        }
        Command::Eval {
            f,
            word,
            pos,
            empty_window,
        } => {
            let phi = read_formula(&f.formula)?;
            let w = read_word(&word)?;
            let policy = match empty_window {
                EmptyWindow::Epsilon => EmptyWindowPolicy::AcceptsEpsilon,
                EmptyWindow::False => EmptyWindowPolicy::False,
            };
            let positions: Vec<usize> = match pos {
                Some(p) => {
                    w.check_position(p).map_err(|source| CliError::Word {
                        path: word.display().to_string(),
                        source,
                    })?;
                    vec![p]
                }
                None => (1..=w.len()).collect(),
            };
            let mut ctx = Evaluator::new(&w).with_policy(policy);
            let values = ctx.eval_all(&phi)?;
            for p in &positions {
                let v = values[p - 1];
                if pos.is_some() {
                    o.text(v);
                } else {
                    o.text(format!("{p}: {v}"));
                }
                o.record(json!({"command": "eval", "pos": p, "value": v}));
            }
            return Ok(if positions.iter().all(|p| values[p - 1]) {
                0
            } else {
                1
            });
        }
        Command::Nnf(a) => formula_command(o, "nnf", &to_nnf(&read_formula(&a.formula)?)),
        Command::Desugar(a) => formula_command(o, "desugar", &desugar(&read_formula(&a.formula)?)),
        Command::Flatten { f, sigma } => {
            let phi = read_formula(&f.formula)?;
            let r = flatten(&phi, &sigma_or_atoms(&sigma, &phi));
            o.text(format!("main: {}", print(&r.main)));
            for (b, beta) in &r.definitions {
                o.text(format!("{b} <-> {}", print(beta)));
            }
            o.text(format!("assembled: {}", print(&r.assembled())));
            let defs: Vec<(String, String)> = r
                .definitions
                .iter()
                .map(|(b, beta)| (b.clone(), print(beta)))
                .collect();
            o.record(json!({
                "command": "flatten",
                "main": print(&r.main),
                "definitions": defs,
                "assembled": print(&r.assembled()),
            }));
        }
        Command::Relativize { f, sigma } => {
            let phi = read_formula(&f.formula)?;
            let r = relativized_formula(&sigma_or_atoms(&sigma, &phi), &phi);
            formula_command(o, "relativize", &r);
        }
        Command::Fk2rat { f, output } => {
            let phi = read_formula(&f.formula)?;
            return reduction(
                o,
                "fk2rat",
                &phi,
                output.as_deref(),
                fk_to_rat,
                fk_to_rat_formula,
            );
        }
        Command::Rat2fk { f, output } => {
            let phi = read_formula(&f.formula)?;
            return reduction(
                o,
                "rat2fk",
                &phi,
                output.as_deref(),
                rat_to_fk,
                rat_to_fk_formula,
            );
        }
        Command::EquisatCheck {
            f,
            psi,
            via,
            sigma,
            extra,
            oversampled,
            max_len,
            grid,
        } => {
            let phi = read_formula(&f.formula)?;
            let sigma = sigma_or_atoms(&sigma, &phi);
            let (psi, extra): (Formula, BTreeSet<String>) = match (psi, via) {
                (Some(path), _) => (read_formula(&path)?, extra.into_iter().collect()),
                (None, Some(Via::Flatten)) => {
                    let r = flatten(&phi, &sigma);
                    (r.assembled(), r.witnesses)
                }
                (None, _) => {
                    let extra: BTreeSet<String> = if extra.is_empty() {
                        let mut taken = sigma.clone();
                        taken.extend(phi.atoms());
                        witness_names(&taken).take(1).collect()
                    } else {
                        extra.into_iter().collect()
                    };
                    (relativized_formula(&sigma, &phi), extra)
                }
            };
            let grid = grid
                .iter()
                .map(|t| parse_rational(t))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(format!("bad --grid: {e}")))?;
            let u = Universe { max_len, grid };
            let report = if oversampled {
                verify_oversampled_equisat(&phi, &psi, &sigma, &extra, &u)
            } else {
                verify_simple_equisat(&phi, &psi, &sigma, &extra, &u)
            };
            o.text(format!(
                "{} extended words, {} psi-models, {} phi-models",
                report.extended_words, report.psi_models, report.phi_models
            ));
            o.text(format!(
                "inadmissible {}, unsound {}, uncovered {}",
                report.inadmissible, report.unsound, report.uncovered
            ));
            match &report.counterexample {
                Some(c) => o.text(format!("counterexample:\n{c}")),
                None => o.text("OK"),
            }
            o.record(&report);
            return Ok(if report.holds() { 0 } else { 1 });
        }
        Command::CmRun { m, max_steps } => {
            let (machine, schedule) = load_machine(&m)?;
            let r = run(&machine, max_steps, &schedule)?;
            o.both(&r, &r);
            return Ok(if r.halted { 0 } else { 1 });
        }
        Command::CmEncode {
            m,
            max_steps,
            unchecked,
        } => {
            let (machine, schedule) = load_machine(&m)?;
            let r = run(&machine, max_steps, &schedule)?;
            let w = if unchecked {
                encode_run_unchecked(&machine, &r)?
            } else {
                encode_run(&machine, &r)?
            };
            if o.json {
                o.record(json!({"command": "cm-encode", "points": w.len(), "word": w.to_string()}));
            } else {
                let _ = write!(o.out, "{w}");
            }
        }
        Command::CmFormula {
            m,
            errors,
            conjuncts,
            ..
        } => {
            let (machine, _) = load_machine(&m)?;
            if conjuncts {
                let mut parts = phi_iecm_conjuncts(&machine);
                if !errors {
                    parts.push(("phi9".to_string(), phi_9(&machine)));
                }
                for (name, f) in parts {
                    let text = print(&f);
                    o.both(
                        format!("{name}: {text}"),
                        json!({"name": name, "formula": text}),
                    );
                }
            } else if errors {
                formula_command(o, "cm-formula", &build_phi_iecm(&machine));
            } else {
                formula_command(o, "cm-formula", &build_phi_cm(&machine));
            }
        }
        Command::Fuzz {
            target,
            seed,
            cases,
        } => {
            let report = fuzz::run(target, seed, cases);
            if report.passed() {
                o.text("OK");
            } else {
                o.text(report.to_string().trim_end());
            }
            o.record(&report);
            return Ok(if report.passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn load_machine(
    m: &MachineArg,
) -> Result<
    (
        crate::countermachine::CounterMachine,
        crate::countermachine::ErrorSchedule,
    ),
    CliError,
> {
    let (machine, schedule) = parse_machine_file(&read(&m.machine)?)?;
    match &m.schedule {
        Some(path) => Ok((
            machine.clone(),
            parse_schedule(&read(path)?, machine.counters())?,
        )),
        None => Ok((machine, schedule)),
    }
}

/// Runs one command, writing reports to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn dispatch_to<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let summary: Vec<&str> = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            let line = summary.join(" ");
            let line = line.strip_prefix("error: ").unwrap_or(&line);
            let _ = writeln!(err, "error: {line}");
            return 2;
        }
    };
    let json = cli.json;
    let mut o = Out { out, json };
    match execute(cli, &mut o) {
        Ok(code) => code,
        Err(e) => {
            let line = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error: {line}");
            2
        }
    }
}

/// [`dispatch_to`] on the process's stdout and stderr.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(argv, &mut stdout.lock(), &mut stderr.lock())
}
