//! Hilbert-style proofs over the axiom schemata A0–A4 with modus ponens.
//!
//! Proof text is line oriented:
//!
//! ```text
//! hyp: X1
//! 1. X1 ; HYP 1
//! 2. X1 -> X2 -> X1 ; A1
//! 3. X2 -> X1 ; MP 1 2
//! ```
//!
//! `MP i j` concludes `β` from step `i` (`α`) and step `j` (`α → β`).
//! Step and hypothesis indices are 1-based. Blank lines and `#` comments are
//! ignored.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::formula::{parse, Binding, Formula, ParseError};
use crate::parallel::Exec;

/// The five axiom schemata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    /// `⊥ → α`
    A0,
    /// `α → (β → α)`
    A1,
    /// `(α → β) → ((β → γ) → (α → γ))`
    A2,
    /// `((α → β) → β) → ((β → α) → α)`
    A3,
    /// `(¬α → ¬β) → (β → α)`
    A4,
}

impl AxiomId {
    pub const ALL: [AxiomId; 5] = [AxiomId::A0, AxiomId::A1, AxiomId::A2, AxiomId::A3, AxiomId::A4];

    /// The schema with metavariables `α, β, γ` written as `X1, X2, X3`.
    pub fn schema(self) -> Formula {
        let (a, b, c) = (Formula::var(1), Formula::var(2), Formula::var(3));
        match self {
            AxiomId::A0 => Formula::Bottom.implies(a),
            AxiomId::A1 => a.clone().implies(b.implies(a)),
            AxiomId::A2 => a
                .clone()
                .implies(b.clone())
                .implies(b.implies(c.clone()).implies(a.implies(c))),
            AxiomId::A3 => a
                .clone()
                .implies(b.clone())
                .implies(b.clone())
                .implies(b.implies(a.clone()).implies(a)),
            AxiomId::A4 => a
                .clone()
                .not()
                .implies(b.clone().not())
                .implies(b.implies(a)),
        }
    }

    /// Number of metavariables in the schema.
    pub fn arity(self) -> u32 {
        match self {
            AxiomId::A0 => 1,
            AxiomId::A1 | AxiomId::A3 | AxiomId::A4 => 2,
            AxiomId::A2 => 3,
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Literal structural match of `f` against an axiom schema.
///
/// Repeated metavariables must bind identical subtrees.
pub fn match_schema(f: &Formula, id: AxiomId) -> Option<Binding> {
    fn go(pat: &Formula, f: &Formula, b: &mut Binding) -> bool {
        match (pat, f) {
            (Formula::Var(i), _) => match b.get(i) {
                Some(bound) => bound == f,
                None => {
                    b.insert(*i, f.clone());
                    true
                }
            },
            (Formula::Bottom, Formula::Bottom) => true,
            (Formula::Not(p), Formula::Not(g)) => go(p, g, b),
            (Formula::Implies(p1, p2), Formula::Implies(g1, g2)) => go(p1, g1, b) && go(p2, g2, b),
            _ => false,
        }
    }
    let mut b = BTreeMap::new();
    go(&id.schema(), f, &mut b).then_some(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Justification {
    Axiom(AxiomId),
    /// Modus ponens from step `minor` (`α`) and step `major` (`α → β`).
    Mp { minor: usize, major: usize },
    Hyp(usize),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(id) => write!(f, "{id}"),
            Justification::Mp { minor, major } => write!(f, "MP {minor} {major}"),
            Justification::Hyp(k) => write!(f, "HYP {k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProofStep {
    pub formula: Formula,
    pub justification: Justification,
}

/// Hypotheses plus a nonempty list of steps; the last step is the
/// conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Proof {
    hypotheses: Vec<Formula>,
    steps: Vec<ProofStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofParseError {
    #[error("proof has no steps")]
    Empty,
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
}

impl Proof {
    pub fn new(hypotheses: Vec<Formula>, steps: Vec<ProofStep>) -> Result<Self, ProofParseError> {
        if steps.is_empty() {
            return Err(ProofParseError::Empty);
        }
        Ok(Proof { hypotheses, steps })
    }

    pub fn hypotheses(&self) -> &[Formula] {
        &self.hypotheses
    }

    pub fn steps(&self) -> &[ProofStep] {
        &self.steps
    }

    pub fn steps_mut(&mut self) -> &mut [ProofStep] {
        &mut self.steps
    }

    pub fn conclusion(&self) -> &Formula {
        &self.steps.last().expect("proofs are nonempty").formula
    }

    pub fn parse(text: &str) -> Result<Self, ProofParseError> {
        let mut hypotheses = Vec::new();
        let mut steps = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let bad = |message: String| ProofParseError::Line { line, message };
            let formula = |t: &str| parse(t).map_err(|source| ProofParseError::Formula { line, source });

            if let Some(h) = body.strip_prefix("hyp:") {
                if !steps.is_empty() {
                    return Err(bad("hypotheses must precede the steps".into()));
                }
                hypotheses.push(formula(h)?);
                continue;
            }
            let (num, rest) = body
                .split_once('.')
                .ok_or_else(|| bad("expected `n. <formula> ; <justification>`".into()))?;
            let n: usize = num
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad step number `{}`", num.trim())))?;
            if n != steps.len() + 1 {
                return Err(bad(format!("expected step {}, found {n}", steps.len() + 1)));
            }
            let (ftext, jtext) = rest
                .rsplit_once(';')
                .ok_or_else(|| bad("missing `; <justification>`".into()))?;
            let justification = parse_justification(jtext.trim()).map_err(bad)?;
            steps.push(ProofStep {
                formula: formula(ftext)?,
                justification,
            });
        }
        Proof::new(hypotheses, steps)
    }
}

fn parse_justification(text: &str) -> Result<Justification, String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let index = |w: &str| {
        w.parse::<usize>()
            .map_err(|_| format!("bad index `{w}` in `{text}`"))
    };
    Ok(match words.as_slice() {
        ["A0"] => Justification::Axiom(AxiomId::A0),
        ["A1"] => Justification::Axiom(AxiomId::A1),
        ["A2"] => Justification::Axiom(AxiomId::A2),
        ["A3"] => Justification::Axiom(AxiomId::A3),
        ["A4"] => Justification::Axiom(AxiomId::A4),
        ["MP", i, j] => Justification::Mp {
            minor: index(i)?,
            major: index(j)?,
        },
        ["HYP", k] => Justification::Hyp(index(k)?),
        _ => return Err(format!("unknown justification `{text}`")),
    })
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.hypotheses {
            writeln!(f, "hyp: {h}")?;
        }
        for (k, s) in self.steps.iter().enumerate() {
            writeln!(f, "{}. {} ; {}", k + 1, s.formula, s.justification)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RejectReason {
    #[error("not an instance of {0}")]
    BadSchema(AxiomId),
    #[error("modus ponens shape mismatch: step {major} is not step {minor} -> this formula")]
    MpShapeMismatch { minor: usize, major: usize },
    #[error("reference to step {0}, which is not an earlier step")]
    ForwardReference(usize),
    #[error("no hypothesis {0}")]
    BadHypothesisIndex(usize),
    #[error("formula differs from hypothesis {0}")]
    HypothesisMismatch(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    /// `step` is 1-based.
    Reject { step: usize, reason: RejectReason },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => f.write_str("accept"),
            Verdict::Reject { step, reason } => write!(f, "reject at step {step}: {reason}"),
        }
    }
}

/// Check every step; the first failing step is reported.
pub fn check_proof(p: &Proof) -> Verdict {
    for (k, step) in p.steps.iter().enumerate() {
        let n = k + 1;
        let earlier = |i: usize| {
            if i == 0 || i >= n {
                Err(RejectReason::ForwardReference(i))
            } else {
                Ok(&p.steps[i - 1].formula)
            }
        };
        let outcome = match step.justification {
            Justification::Axiom(id) => match_schema(&step.formula, id)
                .map(|_| ())
                .ok_or(RejectReason::BadSchema(id)),
            Justification::Mp { minor, major } => earlier(minor).and_then(|a| {
                let imp = earlier(major)?;
                match imp {
                    Formula::Implies(lhs, rhs) if **lhs == *a && **rhs == step.formula => Ok(()),
                    _ => Err(RejectReason::MpShapeMismatch { minor, major }),
                }
            }),
            Justification::Hyp(h) => match h.checked_sub(1).and_then(|i| p.hypotheses.get(i)) {
                None => Err(RejectReason::BadHypothesisIndex(h)),
                Some(hf) if *hf == step.formula => Ok(()),
                Some(_) => Err(RejectReason::HypothesisMismatch(h)),
            },
        };
        if let Err(reason) = outcome {
            return Verdict::Reject { step: n, reason };
        }
    }
    Verdict::Accept
}

/// Check independent proofs; verdicts are in input order.
pub fn check_proofs(proofs: &[Proof], exec: Exec) -> Vec<Verdict> {
    exec.map(proofs, check_proof)
}
