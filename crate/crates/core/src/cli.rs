//! The `luka` command line.
//!
//! Exit codes: 0 for success and true verdicts, 1 for false verdicts or
//! rejected proofs, 2 for usage and input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::axiomatizer::Axiomatizer;
use crate::formula::{parse, Formula};
use crate::parallel::Exec;
use crate::proofs::{check_proof, Proof, Verdict};
use crate::pwl::{PwlFunction, TruthSet};
use crate::rational::{parse_unit, render};
use crate::semantics::{eval, grid_counterexample_with, Assignment};
use crate::theories::{admissible_worlds, consequence_1, member_theta_r, member_theta_t, PremiseSet};

#[derive(Debug, Parser)]
#[command(name = "luka", version, about = "Exact tools for Łukasiewicz infinite-valued logic")]
pub struct Cli {
    /// Disable data-parallel search.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Echo the canonical form of a formula.
    Parse { formula: String },
    /// Evaluate under an assignment such as `X1=1/2 X2=1`.
    Eval {
        formula: String,
        assignment: Vec<String>,
    },
    /// McNaughton function of a one-variable formula.
    Fn {
        formula: String,
        /// Emit `x,y` rows instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Exact one-variable tautology check.
    Taut1 { formula: String },
    /// Exact one-variable equivalence check.
    Equiv1 { left: String, right: String },
    /// Set of points where a one-variable formula takes value 1.
    Oneset { formula: String },
    /// Whether the formula is in the theory of the world `r`.
    Member { formula: String, r: String },
    /// Whether the formula is 1 on every point of a truth set such as `[0,1/2]+[1,1]`.
    #[command(name = "theoryT")]
    TheoryT { formula: String, truth_set: String },
    /// Whether a formula follows from the premises in a file.
    Consequence { premises: PathBuf, formula: String },
    /// A formula whose one-set is exactly `{r}`.
    Axiomatize {
        r: String,
        #[arg(long, default_value_t = crate::axiomatizer::DEFAULT_MAX_DENOMINATOR)]
        max_denominator: u64,
    },
    /// Search the rational grid up to a denominator for an assignment below 1.
    Falsify { formula: String, max_denominator: u32 },
    /// Check a proof file.
    CheckProof { path: PathBuf },
}

/// Outcome of a command: true/false verdict or success.
enum Outcome {
    Done,
    Verdict(bool),
}

type CmdResult = Result<Outcome, String>;

fn formula(text: &str) -> Result<Formula, String> {
    parse(text).map_err(|e| format!("{text:?}: {e}"))
}

fn one_var(text: &str) -> Result<PwlFunction, String> {
    PwlFunction::from_formula(&formula(text)?).map_err(|e| e.to_string())
}

fn assignment(pairs: &[String]) -> Result<Assignment, String> {
    let mut a = Assignment::new();
    for pair in pairs {
        let (var, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("expected `Xn=p/q`, got {pair:?}"))?;
        let index = var
            .strip_prefix('X')
            .and_then(|n| n.parse::<u32>().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| format!("bad variable {var:?}"))?;
        let value = parse_unit(value).map_err(|e| e.to_string())?;
        a.set(index, value).map_err(|e| e.to_string())?;
    }
    Ok(a)
}

fn json_line(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), String> {
    let text = serde_json::to_string(value).map_err(|e| e.to_string())?;
    writeln!(out, "{text}").map_err(|e| e.to_string())
}

fn line(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<(), String> {
    writeln!(out, "{text}").map_err(|e| e.to_string())
}

fn verdict(out: &mut dyn Write, v: bool) -> CmdResult {
    line(out, v)?;
    Ok(Outcome::Verdict(v))
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    match cli.command {
        Command::Parse { formula: f } => {
            line(out, formula(&f)?)?;
            Ok(Outcome::Done)
        }
        Command::Eval {
            formula: f,
            assignment: a,
        } => {
            let value = eval(&formula(&f)?, &assignment(&a)?).map_err(|e| e.to_string())?;
            line(out, render(&value))?;
            Ok(Outcome::Done)
        }
        Command::Fn { formula: f, csv } => {
            let g = one_var(&f)?;
            if csv {
                write!(out, "{}", g.to_csv()).map_err(|e| e.to_string())?;
            } else {
                json_line(out, &g)?;
            }
            Ok(Outcome::Done)
        }
        Command::Taut1 { formula: f } => {
            let g = one_var(&f)?;
            let (x, min) = g.argmin();
            let tautology = g.is_tautology();
            json_line(
                out,
                &json!({
                    "tautology": tautology,
                    "minimum": render(&min),
                    "witness": if tautology { None } else { Some(render(&x)) },
                }),
            )?;
            Ok(Outcome::Verdict(tautology))
        }
        Command::Equiv1 { left, right } => {
            let equal = one_var(&left)? == one_var(&right)?;
            verdict(out, equal)
        }
        Command::Oneset { formula: f } => {
            line(out, one_var(&f)?.one_set())?;
            Ok(Outcome::Done)
        }
        Command::Member { formula: f, r } => {
            let r = parse_unit(&r).map_err(|e| e.to_string())?;
            let v = member_theta_r(&formula(&f)?, &r).map_err(|e| e.to_string())?;
            verdict(out, v)
        }
        Command::TheoryT {
            formula: f,
            truth_set,
        } => {
            let t = TruthSet::parse(&truth_set).map_err(|e| e.to_string())?;
            let v = member_theta_t(&formula(&f)?, &t).map_err(|e| e.to_string())?;
            verdict(out, v)
        }
        Command::Consequence {
            premises,
            formula: f,
        } => {
            let text = std::fs::read_to_string(&premises)
                .map_err(|e| format!("{}: {e}", premises.display()))?;
            let s = PremiseSet::parse(&text).map_err(|e| format!("{}: {e}", premises.display()))?;
            let f = formula(&f)?;
            let worlds = admissible_worlds(&s).map_err(|e| e.to_string())?;
            let v = consequence_1(&s, &f).map_err(|e| e.to_string())?;
            json_line(
                out,
                &json!({ "consequence": v, "admissible_worlds": worlds }),
            )?;
            Ok(Outcome::Verdict(v))
        }
        Command::Axiomatize { r, max_denominator } => {
            let r = parse_unit(&r).map_err(|e| e.to_string())?;
            let (alpha, record) = Axiomatizer::new(max_denominator)
                .axiomatize_with_record(&r)
                .map_err(|e| e.to_string())?;
            line(out, alpha)?;
            json_line(out, &record)?;
            Ok(Outcome::Done)
        }
        Command::Falsify {
            formula: f,
            max_denominator,
        } => {
            if max_denominator == 0 {
                return Err("max denominator must be at least 1".into());
            }
            match grid_counterexample_with(&formula(&f)?, max_denominator, exec) {
                Some(a) => {
                    line(out, a)?;
                    Ok(Outcome::Verdict(false))
                }
                None => {
                    line(out, "none")?;
                    Ok(Outcome::Verdict(true))
                }
            }
        }
        Command::CheckProof { path } => {
            let text =
                std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let proof = Proof::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            match check_proof(&proof) {
                Verdict::Accept => {
                    line(out, "accept")?;
                    Ok(Outcome::Verdict(true))
                }
                rejected => {
                    line(out, "reject")?;
                    line(err, format!("{}: {rejected}", path.display()))?;
                    Ok(Outcome::Verdict(false))
                }
            }
        }
    }
}

/// Run with explicit argv and output streams; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(Outcome::Done) | Ok(Outcome::Verdict(true)) => 0,
        Ok(Outcome::Verdict(false)) => 1,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}
