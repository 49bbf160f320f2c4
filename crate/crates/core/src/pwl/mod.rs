//! Exact McNaughton functions of one-variable formulas.
//!
//! A [`PwlFunction`] is a continuous piecewise-linear map `[0,1] → [0,1]`
//! stored as its canonical breakpoint list. Every connective acts on these
//! lists exactly: breakpoints are merged and refined at the rational points
//! where the combined expression switches linear piece. Nothing here uses a
//! tolerance.

mod truthset;

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, Node};
use crate::rational::{check_unit, parse_rational, Rational, RationalError};

pub use truthset::{TruthSet, TruthSetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PwlError {
    #[error("formula mentions variables other than X1: {0:?}")]
    ExtraVariables(Vec<u32>),
    #[error("{op:?} takes {expected} operand(s)")]
    Arity { op: PwlOp, expected: usize },
    #[error("point {0} is outside [0,1]")]
    OutOfRange(Rational),
    #[error("invalid breakpoint list: {0}")]
    InvalidBreakpoints(&'static str),
    #[error(transparent)]
    Rational(#[from] RationalError),
}

/// Pointwise operations on McNaughton functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PwlOp {
    Neg,
    Implies,
    Min,
    Max,
    Oplus,
    Odot,
    Ominus,
}

impl PwlOp {
    pub fn arity(self) -> usize {
        match self {
            PwlOp::Neg => 1,
            _ => 2,
        }
    }

    fn apply(self, g: &Rational, h: &Rational) -> Rational {
        let one = Rational::one();
        let zero = Rational::zero();
        match self {
            PwlOp::Neg => &one - g,
            PwlOp::Implies => (&one - g + h).min(one),
            PwlOp::Min => g.min(h).clone(),
            PwlOp::Max => g.max(h).clone(),
            PwlOp::Oplus => (g + h).min(one),
            PwlOp::Odot => (g + h - one).max(zero),
            PwlOp::Ominus => (g - h).max(zero),
        }
    }

    // The binary ops change linear piece exactly where this quantity
    // changes sign.
    fn switch(self, g: &Rational, h: &Rational) -> Rational {
        match self {
            PwlOp::Neg => Rational::one(),
            PwlOp::Implies => h - g,
            PwlOp::Min | PwlOp::Max | PwlOp::Ominus => g - h,
            PwlOp::Oplus | PwlOp::Odot => g + h - Rational::one(),
        }
    }
}

/// Canonical continuous piecewise-linear function on `[0,1]`.
///
/// Breakpoints start at `x = 0`, end at `x = 1`, have strictly increasing
/// `x`, values in `[0,1]`, and no interior breakpoint is collinear with its
/// neighbours. Constants are the two-point list `[(0,c),(1,c)]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "BreakpointsJson", try_from = "BreakpointsJson")]
pub struct PwlFunction {
    points: Vec<(Rational, Rational)>,
}

impl PwlFunction {
    pub fn constant(c: Rational) -> Result<Self, PwlError> {
        check_unit(&c)?;
        Ok(Self {
            points: vec![(Rational::zero(), c.clone()), (Rational::one(), c)],
        })
    }

    pub fn identity() -> Self {
        Self {
            points: vec![
                (Rational::zero(), Rational::zero()),
                (Rational::one(), Rational::one()),
            ],
        }
    }

    /// Build from breakpoints, validating them and removing collinear ones.
    pub fn from_points(points: Vec<(Rational, Rational)>) -> Result<Self, PwlError> {
        if points.len() < 2 {
            return Err(PwlError::InvalidBreakpoints("need at least two breakpoints"));
        }
        if !points[0].0.is_zero() || !points[points.len() - 1].0.is_one() {
            return Err(PwlError::InvalidBreakpoints("domain must be [0,1]"));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(PwlError::InvalidBreakpoints("x must strictly increase"));
        }
        for (_, y) in &points {
            check_unit(y)?;
        }
        Ok(Self::canonical(points))
    }

    fn canonical(points: Vec<(Rational, Rational)>) -> Self {
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
        for p in points {
            while out.len() >= 2 && collinear(&out[out.len() - 2], &out[out.len() - 1], &p) {
                out.pop();
            }
            out.push(p);
        }
        Self { points: out }
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    /// Exact value at `x` by linear interpolation.
    pub fn eval_at(&self, x: &Rational) -> Result<Rational, PwlError> {
        if x.is_negative() || x > &Rational::one() {
            return Err(PwlError::OutOfRange(x.clone()));
        }
        let k = self.points.partition_point(|(px, _)| px < x);
        let (px, py) = &self.points[k];
        if px == x {
            return Ok(py.clone());
        }
        Ok(interpolate(&self.points[k - 1], &self.points[k], x))
    }

    /// Values at the sorted points `xs`, by a single merge pass.
    fn values_at(&self, xs: &[Rational]) -> Vec<Rational> {
        let mut k = 0;
        xs.iter()
            .map(|x| {
                while self.points[k + 1].0 < *x {
                    k += 1;
                }
                if self.points[k].0 == *x {
                    self.points[k].1.clone()
                } else if self.points[k + 1].0 == *x {
                    self.points[k + 1].1.clone()
                } else {
                    interpolate(&self.points[k], &self.points[k + 1], x)
                }
            })
            .collect()
    }

    pub fn minimum(&self) -> Rational {
        self.argmin().1
    }

    /// Leftmost breakpoint attaining the minimum, as `(x, value)`.
    pub fn argmin(&self) -> (Rational, Rational) {
        let mut best = &self.points[0];
        for p in &self.points[1..] {
            if p.1 < best.1 {
                best = p;
            }
        }
        best.clone()
    }

    pub fn maximum(&self) -> Rational {
        self.points
            .iter()
            .map(|p| &p.1)
            .max()
            .expect("at least two breakpoints")
            .clone()
    }

    pub fn is_tautology(&self) -> bool {
        self.minimum().is_one()
    }

    /// `{x : g(x) = 1}`.
    pub fn one_set(&self) -> TruthSet {
        let mut runs: Vec<(Rational, Rational)> = Vec::new();
        let mut open: Option<Rational> = None;
        let mut last = None;
        for (x, y) in &self.points {
            if y.is_one() {
                if open.is_none() {
                    open = Some(x.clone());
                }
                last = Some(x.clone());
            } else if let Some(lo) = open.take() {
                runs.push((lo, last.take().expect("run has an end")));
            }
        }
        if let Some(lo) = open {
            runs.push((lo, last.expect("run has an end")));
        }
        TruthSet::new(runs).expect("breakpoints lie in [0,1]")
    }

    /// `{x : g(x) = 0}`.
    pub fn zero_set(&self) -> TruthSet {
        self.combine(PwlOp::Neg, None)
            .expect("negation is unary")
            .one_set()
    }

    /// Whether every linear piece `y = a·x + b` has integer `a` and `b`.
    pub fn is_integral(&self) -> bool {
        self.pieces()
            .all(|(a, b)| a.is_integer() && b.is_integer())
    }

    /// Slope and intercept of each linear piece, left to right.
    pub fn pieces(&self) -> impl Iterator<Item = (Rational, Rational)> + '_ {
        self.points.windows(2).map(|w| {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            let slope = (y1 - y0) / (x1 - x0);
            let intercept = y0 - &slope * x0;
            (slope, intercept)
        })
    }

    /// Pointwise combination; `h` must be given exactly for binary ops.
    pub fn combine(&self, op: PwlOp, h: Option<&PwlFunction>) -> Result<PwlFunction, PwlError> {
        match (op.arity(), h) {
            (1, None) => Ok(Self {
                points: self
                    .points
                    .iter()
                    .map(|(x, y)| (x.clone(), Rational::one() - y))
                    .collect(),
            }),
            (2, Some(h)) => Ok(self.combine2(op, h)),
            (expected, _) => Err(PwlError::Arity { op, expected }),
        }
    }

    fn combine2(&self, op: PwlOp, h: &PwlFunction) -> PwlFunction {
        let xs = merge_xs(&self.points, &h.points);
        let gv = self.values_at(&xs);
        let hv = h.values_at(&xs);
        let mut out = Vec::with_capacity(xs.len() * 2);
        for k in 0..xs.len() {
            out.push((xs[k].clone(), op.apply(&gv[k], &hv[k])));
            if k + 1 == xs.len() {
                break;
            }
            let s0 = op.switch(&gv[k], &hv[k]);
            let s1 = op.switch(&gv[k + 1], &hv[k + 1]);
            if s0.signum() * s1.signum() < Rational::zero() {
                // both inputs are linear on [x_k, x_{k+1}], so is the switch
                let t = &s0 / (&s0 - &s1);
                let lerp = |a: &Rational, b: &Rational| a + &t * (b - a);
                let x = lerp(&xs[k], &xs[k + 1]);
                let y = op.apply(&lerp(&gv[k], &gv[k + 1]), &lerp(&hv[k], &hv[k + 1]));
                out.push((x, y));
            }
        }
        Self::canonical(out)
    }

    /// The McNaughton function of a formula in (at most) `X1`.
    pub fn from_formula(f: &Formula) -> Result<PwlFunction, PwlError> {
        let extra: Vec<u32> = f.variables().into_iter().filter(|&v| v != 1).collect();
        if !extra.is_empty() {
            return Err(PwlError::ExtraVariables(extra));
        }
        let zero = PwlFunction::constant(Rational::zero())?;
        let id = PwlFunction::identity();
        f.fold(|n| match n {
            Node::Bottom => Ok(zero.clone()),
            Node::Var(_) => Ok(id.clone()),
            Node::Not(g) => g.combine(PwlOp::Neg, None),
            Node::Implies(g, h) => g.combine(PwlOp::Implies, Some(h)),
        })
    }

    /// CSV rows `x,y` under a header line, for plotting.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y\n");
        for (x, y) in &self.points {
            let _ = writeln!(s, "{x},{y}");
        }
        s
    }
}

fn collinear(a: &(Rational, Rational), b: &(Rational, Rational), c: &(Rational, Rational)) -> bool {
    (&b.1 - &a.1) * (&c.0 - &a.0) == (&c.1 - &a.1) * (&b.0 - &a.0)
}

fn interpolate(a: &(Rational, Rational), b: &(Rational, Rational), x: &Rational) -> Rational {
    &a.1 + (&b.1 - &a.1) * (x - &a.0) / (&b.0 - &a.0)
}

fn merge_xs(a: &[(Rational, Rational)], b: &[(Rational, Rational)]) -> Vec<Rational> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(p), Some(q)) if p.0 == q.0 => {
                i += 1;
                j += 1;
                &p.0
            }
            (Some(p), Some(q)) if p.0 < q.0 => {
                i += 1;
                &p.0
            }
            (_, Some(q)) => {
                j += 1;
                &q.0
            }
            (Some(p), None) => {
                i += 1;
                &p.0
            }
            (None, None) => unreachable!(),
        };
        out.push(next.clone());
    }
    out
}

#[derive(Serialize, Deserialize)]
struct BreakpointsJson {
    breakpoints: Vec<[String; 2]>,
}

impl From<PwlFunction> for BreakpointsJson {
    fn from(g: PwlFunction) -> Self {
        BreakpointsJson {
            breakpoints: g
                .points
                .into_iter()
                .map(|(x, y)| [x.to_string(), y.to_string()])
                .collect(),
        }
    }
}

impl TryFrom<BreakpointsJson> for PwlFunction {
    type Error = PwlError;

    fn try_from(j: BreakpointsJson) -> Result<Self, Self::Error> {
        let points = j
            .breakpoints
            .iter()
            .map(|[x, y]| Ok((parse_rational(x)?, parse_rational(y)?)))
            .collect::<Result<Vec<_>, PwlError>>()?;
        PwlFunction::from_points(points)
    }
}
