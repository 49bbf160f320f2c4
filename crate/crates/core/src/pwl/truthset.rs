use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{parse_rational, Rational, RationalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruthSetError {
    #[error("interval [{0},{1}] has lower end above upper end")]
    Inverted(Rational, Rational),
    #[error("interval [{0},{1}] leaves [0,1]")]
    OutOfRange(Rational, Rational),
    #[error("malformed truth-set literal `{0}`: expected [a/b,c/d]+[e/f,g/h]")]
    Malformed(String),
    #[error(transparent)]
    Rational(#[from] RationalError),
}

/// Finite union of closed rational intervals inside `[0,1]`.
///
/// Stored sorted, pairwise disjoint and maximal: intervals that overlap or
/// touch are merged. Degenerate intervals `[r,r]` are points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<[String; 2]>", try_from = "Vec<[String; 2]>")]
pub struct TruthSet {
    intervals: Vec<(Rational, Rational)>,
}

impl TruthSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        Self {
            intervals: vec![(Rational::zero(), Rational::one())],
        }
    }

    pub fn point(r: Rational) -> Result<Self, TruthSetError> {
        Self::new(vec![(r.clone(), r)])
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self, TruthSetError> {
        Self::new(vec![(lo, hi)])
    }

    /// Build from arbitrary closed intervals, normalizing order and merging.
    pub fn new(mut intervals: Vec<(Rational, Rational)>) -> Result<Self, TruthSetError> {
        for (lo, hi) in &intervals {
            if lo > hi {
                return Err(TruthSetError::Inverted(lo.clone(), hi.clone()));
            }
            if lo < &Rational::zero() || hi > &Rational::one() {
                return Err(TruthSetError::OutOfRange(lo.clone(), hi.clone()));
            }
        }
        intervals.sort();
        Ok(Self::merge_sorted(intervals))
    }

    fn merge_sorted(sorted: Vec<(Rational, Rational)>) -> Self {
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(sorted.len());
        for (lo, hi) in sorted {
            match out.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        Self { intervals: out }
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|(lo, hi)| lo <= x && x <= hi)
    }

    /// `self ⊇ other`.
    pub fn contains_set(&self, other: &TruthSet) -> bool {
        other.intervals.iter().all(|(lo, hi)| {
            self.intervals
                .iter()
                .any(|(slo, shi)| slo <= lo && hi <= shi)
        })
    }

    pub fn intersect(&self, other: &TruthSet) -> TruthSet {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = (&a[i].0).max(&b[j].0);
            let hi = (&a[i].1).min(&b[j].1);
            if lo <= hi {
                out.push((lo.clone(), hi.clone()));
            }
            match a[i].1.cmp(&b[j].1) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        Self::merge_sorted(out)
    }

    pub fn union(&self, other: &TruthSet) -> TruthSet {
        let mut all: Vec<_> = self
            .intervals
            .iter()
            .chain(&other.intervals)
            .cloned()
            .collect();
        all.sort();
        Self::merge_sorted(all)
    }

    /// Parse the ASCII literal `[a/b,c/d]+[e/f,g/h]`; `{}` is the empty set.
    pub fn parse(text: &str) -> Result<Self, TruthSetError> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "{}" {
            return Ok(Self::empty());
        }
        let malformed = || TruthSetError::Malformed(text.to_string());
        let mut intervals = Vec::new();
        for part in t.split('+') {
            let inner = part
                .strip_prefix('[')
                .and_then(|p| p.strip_suffix(']'))
                .ok_or_else(malformed)?;
            let (lo, hi) = inner.split_once(',').ok_or_else(malformed)?;
            intervals.push((parse_rational(lo)?, parse_rational(hi)?));
        }
        Self::new(intervals)
    }
}

impl fmt::Display for TruthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        for (k, (lo, hi)) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            write!(f, "[{lo},{hi}]")?;
        }
        Ok(())
    }
}

impl From<TruthSet> for Vec<[String; 2]> {
    fn from(t: TruthSet) -> Self {
        t.intervals
            .into_iter()
            .map(|(lo, hi)| [lo.to_string(), hi.to_string()])
            .collect()
    }
}

impl TryFrom<Vec<[String; 2]>> for TruthSet {
    type Error = TruthSetError;

    fn try_from(v: Vec<[String; 2]>) -> Result<Self, Self::Error> {
        let intervals = v
            .iter()
            .map(|[lo, hi]| Ok((parse_rational(lo)?, parse_rational(hi)?)))
            .collect::<Result<Vec<_>, TruthSetError>>()?;
        Self::new(intervals)
    }
}
