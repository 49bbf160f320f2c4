//! Exact `[0,1]`-valued evaluation and a grid falsifier for many-variable
//! formulas.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::formula::{Formula, Node};
use crate::parallel::Exec;
use crate::rational::{check_unit, Rational, RationalError};

/// Atomic assignment: variable index to truth value in `[0,1]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<u32, Rational>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Assignment giving `X1` the value `x`.
    pub fn single(x: Rational) -> Result<Self, RationalError> {
        let mut a = Self::new();
        a.set(1, x)?;
        Ok(a)
    }

    pub fn set(&mut self, var: u32, value: Rational) -> Result<(), RationalError> {
        check_unit(&value)?;
        self.0.insert(var, value);
        Ok(())
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self, RationalError>
    where
        I: IntoIterator<Item = (u32, Rational)>,
    {
        let mut a = Self::new();
        for (k, v) in pairs {
            a.set(k, v)?;
        }
        Ok(a)
    }

    pub fn get(&self, var: u32) -> Option<&Rational> {
        self.0.get(&var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.0.iter().map(|(k, v)| (*k, v))
    }
}


impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "X{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable X{0} is not assigned")]
    Unassigned(u32),
}

/// Evaluate `f` exactly under `a`:
/// `w(⊥)=0`, `w(¬α)=1−w(α)`, `w(α→β)=min{1, 1−(w(α)−w(β))}`.
pub fn eval(f: &Formula, a: &Assignment) -> Result<Rational, EvalError> {
    let one = Rational::one();
    f.fold(|n| {
        Ok(match n {
            Node::Bottom => Rational::zero(),
            Node::Var(i) => a.get(i).cloned().ok_or(EvalError::Unassigned(i))?,
            Node::Not(v) => &one - v,
            Node::Implies(v, w) => {
                let t = &one - v + w;
                if t > one {
                    one.clone()
                } else {
                    t
                }
            }
        })
    })
}

/// Every rational in `[0,1]` with denominator at most `max_denominator`,
/// in increasing order.
pub fn unit_grid(max_denominator: u32) -> Vec<Rational> {
    let mut pts: Vec<(u32, u32)> = vec![(0, 1), (1, 1)];
    for q in 2..=max_denominator {
        pts.extend((1..q).filter(|p| p.gcd(&q) == 1).map(|p| (p, q)));
    }
    pts.sort_by(|a, b| (a.0 as u64 * b.1 as u64).cmp(&(b.0 as u64 * a.1 as u64)));
    pts.into_iter()
        .map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
        .collect()
}

/// Search the rational grid of denominator `≤ max_denominator` for an
/// assignment under which `f` takes a value below 1.
///
/// Assignments are tried in lexicographic order of their value tuples,
/// variables in index order, so the returned counterexample is the first one
/// in that order. Only the variables of `f` are assigned. A `None` result
/// certifies nothing for two or more variables.
pub fn grid_counterexample(f: &Formula, max_denominator: u32) -> Option<Assignment> {
    grid_counterexample_with(f, max_denominator, Exec::default())
}

pub fn grid_counterexample_with(
    f: &Formula,
    max_denominator: u32,
    exec: Exec,
) -> Option<Assignment> {
    let max_denominator = max_denominator.max(1);
    let vars: Vec<u32> = f.variables().into_iter().collect();
    let grid = unit_grid(max_denominator);
    let program = Program::compile(f, &vars);

    let hit: Option<Vec<usize>> = match Scaled::new(&grid) {
        Some(scaled) => search(&program, &vars, grid.len(), exec, |digits, buf| {
            program.below_one_scaled(&scaled, digits, buf)
        }),
        None => search(&program, &vars, grid.len(), exec, |digits, _| {
            program.below_one_exact(&grid, digits)
        }),
    };
    hit.map(|digits| {
        Assignment::from_pairs(vars.iter().zip(digits).map(|(v, d)| (*v, grid[d].clone())))
            .expect("grid values lie in [0,1]")
    })
}

// Odometer over grid indices, first variable most significant. The first
// variable's values are the unit of parallel work.
fn search<F>(
    program: &Program,
    vars: &[u32],
    width: usize,
    exec: Exec,
    below_one: F,
) -> Option<Vec<usize>>
where
    F: Fn(&[usize], &mut Vec<i128>) -> bool + Sync + Send,
{
    if vars.is_empty() {
        let mut buf = Vec::with_capacity(program.ops.len());
        return below_one(&[], &mut buf).then(Vec::new);
    }
    let heads: Vec<usize> = (0..width).collect();
    exec.find_map_first(&heads, |&head| {
        let mut digits = vec![0usize; vars.len()];
        digits[0] = head;
        let mut buf = Vec::with_capacity(program.ops.len());
        loop {
            if below_one(&digits, &mut buf) {
                return Some(digits);
            }
            // advance the least significant digit, never touching digit 0
            let mut k = vars.len() - 1;
            loop {
                if k == 0 {
                    return None;
                }
                digits[k] += 1;
                if digits[k] < width {
                    break;
                }
                digits[k] = 0;
                k -= 1;
            }
        }
    })
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Bottom,
    /// Position of the variable in the sorted variable list.
    Var(usize),
    Not(usize),
    Implies(usize, usize),
}

/// A formula flattened into straight-line code over its distinct nodes.
#[derive(Debug)]
struct Program {
    ops: Vec<Op>,
}

impl Program {
    fn compile(f: &Formula, vars: &[u32]) -> Program {
        let slot: HashMap<u32, usize> = vars.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let mut ops = Vec::new();
        let root = f.fold_total(|n: Node<'_, usize>| {
            ops.push(match n {
                Node::Bottom => Op::Bottom,
                Node::Var(i) => Op::Var(slot[&i]),
                Node::Not(a) => Op::Not(*a),
                Node::Implies(a, b) => Op::Implies(*a, *b),
            });
            ops.len() - 1
        });
        debug_assert_eq!(root, ops.len() - 1);
        Program { ops }
    }

    fn below_one_scaled(&self, s: &Scaled, digits: &[usize], buf: &mut Vec<i128>) -> bool {
        buf.clear();
        let one = s.unit;
        for op in &self.ops {
            let v = match *op {
                Op::Bottom => 0,
                Op::Var(k) => s.values[digits[k]],
                Op::Not(a) => one - buf[a],
                Op::Implies(a, b) => (one - buf[a] + buf[b]).min(one),
            };
            buf.push(v);
        }
        *buf.last().expect("nonempty program") < one
    }

    fn below_one_exact(&self, grid: &[Rational], digits: &[usize]) -> bool {
        let one = Rational::one();
        let mut buf: Vec<Rational> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let v = match *op {
                Op::Bottom => Rational::zero(),
                Op::Var(k) => grid[digits[k]].clone(),
                Op::Not(a) => &one - &buf[a],
                Op::Implies(a, b) => {
                    let t = &one - &buf[a] + &buf[b];
                    if t > one {
                        one.clone()
                    } else {
                        t
                    }
                }
            };
            buf.push(v);
        }
        *buf.last().expect("nonempty program") < one
    }
}

/// Grid values as integer multiples of `1/unit`, `unit` the lcm of all grid
/// denominators. Truth values of any formula stay on this lattice, so the
/// arithmetic is exact.
struct Scaled {
    unit: i128,
    values: Vec<i128>,
}

impl Scaled {
    fn new(grid: &[Rational]) -> Option<Scaled> {
        let mut unit = BigInt::one();
        for r in grid {
            unit = unit.lcm(r.denom());
        }
        // headroom for `one - a + b`
        let unit_i = unit.to_i128().filter(|u| *u < i128::MAX / 4)?;
        let values = grid
            .iter()
            .map(|r| (r.numer() * (&unit / r.denom())).to_i128())
            .collect::<Option<Vec<_>>>()?;
        Some(Scaled {
            unit: unit_i,
            values,
        })
    }
}

/// Evaluate `f` at `X1 = x` (convenience for one-variable formulas).
pub fn eval_at_x1(f: &Formula, x: &Rational) -> Result<Rational, EvalError> {
    let a = Assignment::single(x.clone()).map_err(|_| EvalError::Unassigned(1))?;
    eval(f, &a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::rational::ratio;

    fn at(text: &str, pairs: &[(u32, Rational)]) -> Rational {
        let a = Assignment::from_pairs(pairs.iter().cloned()).unwrap();
        eval(&parse(text).unwrap(), &a).unwrap()
    }

    #[test]
    fn evaluates_table_examples() {
        assert_eq!(at("X1 -> X1", &[(1, ratio(2, 7))]), ratio(1, 1));
        assert_eq!(at("X1 (+) X1", &[(1, ratio(3, 10))]), ratio(3, 5));
        assert_eq!(
            at("(~X1 -> X1) /\\ (X1 -> ~X1)", &[(1, ratio(1, 2))]),
            ratio(1, 1)
        );
        assert_eq!(at("0", &[]), ratio(0, 1));
        assert_eq!(at("1", &[]), ratio(1, 1));
    }

    #[test]
    fn unassigned_variable_is_an_error() {
        let a = Assignment::single(ratio(1, 2)).unwrap();
        assert_eq!(
            eval(&parse("X1 -> X2").unwrap(), &a),
            Err(EvalError::Unassigned(2))
        );
    }

    #[test]
    fn assignment_values_must_be_truth_values() {
        let mut a = Assignment::new();
        assert!(a.set(1, ratio(3, 2)).is_err());
        assert!(a.set(1, ratio(-1, 2)).is_err());
        assert!(a.set(1, ratio(1, 1)).is_ok());
    }

    #[test]
    fn grid_is_sorted_farey_sequence() {
        let g: Vec<String> = unit_grid(4).iter().map(|r| r.to_string()).collect();
        assert_eq!(g, ["0", "1/4", "1/3", "1/2", "2/3", "3/4", "1"]);
        assert_eq!(unit_grid(12).len(), 47);
        assert_eq!(unit_grid(1).len(), 2);
    }

    #[test]
    fn finds_first_counterexample_in_grid_order() {
        let cx = grid_counterexample(&parse("X1 \\/ ~X1").unwrap(), 2).unwrap();
        assert_eq!(cx.get(1), Some(&ratio(1, 2)));

        let f = parse("X1 (+) X1 -> X1").unwrap();
        let cx = grid_counterexample(&f, 4).unwrap();
        assert_eq!(cx.get(1), Some(&ratio(1, 4)));
        assert_eq!(eval(&f, &cx).unwrap(), ratio(3, 4));

        assert!(grid_counterexample(&parse("X1 -> (X2 -> X1)").unwrap(), 20).is_none());
    }

    #[test]
    fn multi_variable_counterexample_is_lexicographically_first() {
        // X2 -> X1 fails first at X1=0, X2=1/3 (grid up to 3)
        let f = parse("X2 -> X1").unwrap();
        let cx = grid_counterexample(&f, 3).unwrap();
        assert_eq!(cx.to_string(), "X1=0 X2=1/3");
        let brute = unit_grid(3)
            .into_iter()
            .flat_map(|a| unit_grid(3).into_iter().map(move |b| (a.clone(), b)))
            .find(|(a, b)| at("X2 -> X1", &[(1, a.clone()), (2, b.clone())]) < ratio(1, 1))
            .unwrap();
        assert_eq!((cx.get(1).unwrap(), cx.get(2).unwrap()), (&brute.0, &brute.1));
    }

    #[test]
    fn closed_formulas_have_a_single_grid_point() {
        assert!(grid_counterexample(&parse("1").unwrap(), 5).is_none());
        let cx = grid_counterexample(&parse("0").unwrap(), 5).unwrap();
        assert_eq!(cx, Assignment::new());
    }

    #[test]
    fn exact_fallback_matches_scaled_path() {
        // lcm(1..=100) overflows i128, forcing the exact path
        let f = parse("(X1 (.) X1) (+) ~X1 -> X1").unwrap();
        let scaled = grid_counterexample(&f, 30);
        let exact = grid_counterexample(&f, 100);
        assert!(Scaled::new(&unit_grid(100)).is_none());
        assert!(Scaled::new(&unit_grid(30)).is_some());
        let (s, e) = (scaled.unwrap(), exact.unwrap());
        assert!(eval(&f, &s).unwrap() < ratio(1, 1));
        assert!(eval(&f, &e).unwrap() < ratio(1, 1));
        assert!(e.get(1).unwrap() <= s.get(1).unwrap());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let f = parse("(X1 -> X2) \\/ (X2 (.) X3 -> X1)").unwrap();
        for d in 1..8 {
            assert_eq!(
                grid_counterexample_with(&f, d, Exec::Sequential),
                grid_counterexample_with(&f, d, Exec::Parallel)
            );
        }
    }
}
