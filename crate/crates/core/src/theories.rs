//! Semantic side of one-variable theories.
//!
//! `Θ_r` is the set of formulas in `X1` that take value 1 whenever `X1`
//! takes value `r`; `Θ_T` relaxes the single world `r` to a truth set `T`.
//! Theories are never enumerated: membership and consequence are decided
//! exactly from McNaughton functions.

use num_traits::One;
use thiserror::Error;

use crate::axiomatizer::{axiomatize, AxiomatizeError};
use crate::formula::{parse, Formula, ParseError};
use crate::parallel::Exec;
use crate::pwl::{PwlError, PwlFunction, TruthSet};
use crate::rational::{check_unit, Rational, RationalError};

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error(transparent)]
    Pwl(#[from] PwlError),
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error(transparent)]
    Axiomatize(#[from] AxiomatizeError),
    #[error("cannot separate {0} from itself")]
    SameWorld(Rational),
    #[error("line {line}: {source}")]
    Premise { line: usize, source: ParseError },
    #[error("premise {index} mentions variables other than X1")]
    PremiseVariables { index: usize },
}

/// Finite set of premises in the single variable `X1`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PremiseSet {
    premises: Vec<Formula>,
}

impl PremiseSet {
    pub fn new(premises: Vec<Formula>) -> Result<Self, TheoryError> {
        for (index, p) in premises.iter().enumerate() {
            if p.variables().iter().any(|&v| v != 1) {
                return Err(TheoryError::PremiseVariables { index });
            }
        }
        Ok(Self { premises })
    }

    /// One formula per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, TheoryError> {
        let mut premises = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            premises.push(
                parse(body).map_err(|source| TheoryError::Premise { line: k + 1, source })?,
            );
        }
        Self::new(premises)
    }

    pub fn premises(&self) -> &[Formula] {
        &self.premises
    }

    pub fn with(&self, f: Formula) -> Result<Self, TheoryError> {
        let mut premises = self.premises.clone();
        premises.push(f);
        Self::new(premises)
    }
}

/// `f ∈ Θ_r`.
pub fn member_theta_r(f: &Formula, r: &Rational) -> Result<bool, TheoryError> {
    check_unit(r)?;
    let g = PwlFunction::from_formula(f)?;
    Ok(g.eval_at(r)?.is_one())
}

/// `f ∈ Θ_T`: `f` is 1 on all of `T`.
pub fn member_theta_t(f: &Formula, t: &TruthSet) -> Result<bool, TheoryError> {
    Ok(PwlFunction::from_formula(f)?.one_set().contains_set(t))
}

/// Worlds `x ∈ [0,1]` at which every premise takes value 1.
pub fn admissible_worlds(s: &PremiseSet) -> Result<TruthSet, TheoryError> {
    let mut worlds = TruthSet::full();
    for p in &s.premises {
        worlds = worlds.intersect(&PwlFunction::from_formula(p)?.one_set());
        if worlds.is_empty() {
            break;
        }
    }
    Ok(worlds)
}

/// `S ⊨ f` over the one-variable semantics.
pub fn consequence_1(s: &PremiseSet, f: &Formula) -> Result<bool, TheoryError> {
    let worlds = admissible_worlds(s)?;
    Ok(PwlFunction::from_formula(f)?.one_set().contains_set(&worlds))
}

/// A formula in `Θ_r` but not in `Θ_s`, witnessing `Θ_r ≠ Θ_s`.
pub fn separating_formula(r: &Rational, s: &Rational) -> Result<Formula, TheoryError> {
    check_unit(r)?;
    check_unit(s)?;
    if r == s {
        return Err(TheoryError::SameWorld(r.clone()));
    }
    Ok(axiomatize(r)?)
}

/// Batch membership `f ∈ Θ_r` for each `(f, r)`, in input order.
pub fn member_theta_r_many(
    queries: &[(Formula, Rational)],
    exec: Exec,
) -> Vec<Result<bool, TheoryError>> {
    exec.map(queries, |(f, r)| member_theta_r(f, r))
}
