//! Core syntax: the four-constructor formula tree over `{⊥, X_i, ¬, →}`.
//!
//! Every derived connective (`⊤ ∧ ∨ ↔ ⊕ ⊙ ⊖`) is expanded into the core
//! constructors at construction time, so a [`Formula`] never carries a
//! derived tag. Children live behind [`Arc`], which lets large formulas
//! (axiomatizations, ramp compositions) share subterms. All whole-tree
//! walks go through [`Formula::fold`], which visits each shared node once.

mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

pub use parse::{parse, ParseError, ParseErrorKind};

/// A propositional formula built from falsum, variables, negation and
/// implication.
#[derive(Debug, Clone, Eq)]
pub enum Formula {
    Bottom,
    /// Variable `X_i`, `i ≥ 1`.
    Var(u32),
    Not(Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        fn same(a: &Arc<Formula>, b: &Arc<Formula>) -> bool {
            Arc::ptr_eq(a, b) || **a == **b
        }
        match (self, other) {
            (Formula::Bottom, Formula::Bottom) => true,
            (Formula::Var(i), Formula::Var(j)) => i == j,
            (Formula::Not(a), Formula::Not(b)) => same(a, b),
            (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => same(a1, a2) && same(b1, b2),
            _ => false,
        }
    }
}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Formula::Bottom => 0u8.hash(state),
            Formula::Var(i) => {
                1u8.hash(state);
                i.hash(state);
            }
            Formula::Not(a) => {
                2u8.hash(state);
                a.hash(state);
            }
            Formula::Implies(a, b) => {
                3u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
        }
    }
}

/// The view of one node handed to a [`Formula::fold`] callback, with the
/// children already folded.
#[derive(Debug)]
pub enum Node<'a, T> {
    Bottom,
    Var(u32),
    Not(&'a T),
    Implies(&'a T, &'a T),
}

impl Formula {
    pub fn bottom() -> Formula {
        Formula::Bottom
    }

    /// Variable `X_index`.
    ///
    /// Panics if `index` is zero; variables are numbered from 1.
    pub fn var(index: u32) -> Formula {
        assert!(index >= 1, "variable indices start at 1");
        Formula::Var(index)
    }

    pub fn x1() -> Formula {
        Formula::Var(1)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Arc::new(self))
    }

    pub fn implies(self, rhs: Formula) -> Formula {
        Formula::Implies(Arc::new(self), Arc::new(rhs))
    }

    pub fn verum() -> Formula {
        Formula::Bottom.not()
    }

    pub fn or(self, rhs: Formula) -> Formula {
        expand_binary(DerivedConnective::Or, self, rhs)
    }

    pub fn and(self, rhs: Formula) -> Formula {
        expand_binary(DerivedConnective::And, self, rhs)
    }

    pub fn iff(self, rhs: Formula) -> Formula {
        expand_binary(DerivedConnective::Iff, self, rhs)
    }

    pub fn oplus(self, rhs: Formula) -> Formula {
        expand_binary(DerivedConnective::Oplus, self, rhs)
    }

    pub fn odot(self, rhs: Formula) -> Formula {
        expand_binary(DerivedConnective::Odot, self, rhs)
    }

    pub fn ominus(self, rhs: Formula) -> Formula {
        expand_binary(DerivedConnective::Ominus, self, rhs)
    }

    /// Bottom-up fold over the formula, visiting every distinct node once.
    ///
    /// Nodes are identified by address, so a subterm shared through an
    /// [`Arc`] is folded a single time however often it occurs. The walk is
    /// iterative and does not grow the call stack with the formula depth.
    pub fn fold<T, E, F>(&self, mut f: F) -> Result<T, E>
    where
        T: Clone,
        F: FnMut(Node<'_, T>) -> Result<T, E>,
    {
        let mut done: HashMap<*const Formula, T> = HashMap::new();
        let mut stack: Vec<(&Formula, bool)> = vec![(self, false)];
        while let Some((node, expanded)) = stack.pop() {
            let key = node as *const Formula;
            if done.contains_key(&key) {
                continue;
            }
            if !expanded {
                stack.push((node, true));
                match node {
                    Formula::Bottom | Formula::Var(_) => {}
                    Formula::Not(a) => stack.push((a, false)),
                    Formula::Implies(a, b) => {
                        stack.push((b, false));
                        stack.push((a, false));
                    }
                }
                continue;
            }
            let value = match node {
                Formula::Bottom => f(Node::Bottom)?,
                Formula::Var(i) => f(Node::Var(*i))?,
                Formula::Not(a) => f(Node::Not(&done[&Arc::as_ptr(a)]))?,
                Formula::Implies(a, b) => f(Node::Implies(
                    &done[&Arc::as_ptr(a)],
                    &done[&Arc::as_ptr(b)],
                ))?,
            };
            done.insert(key, value);
        }
        Ok(done
            .remove(&(self as *const Formula))
            .expect("root is folded last"))
    }

    /// [`Formula::fold`] for callbacks that cannot fail.
    pub fn fold_total<T, F>(&self, mut f: F) -> T
    where
        T: Clone,
        F: FnMut(Node<'_, T>) -> T,
    {
        match self.fold::<T, std::convert::Infallible, _>(|n| Ok(f(n))) {
            Ok(v) => v,
            Err(e) => match e {},
        }
    }

    /// Exact set of variable indices occurring in the formula.
    pub fn variables(&self) -> BTreeSet<u32> {
        let vars = self.fold_total(|n: Node<'_, Arc<BTreeSet<u32>>>| match n {
            Node::Bottom => Arc::new(BTreeSet::new()),
            Node::Var(i) => Arc::new(BTreeSet::from([i])),
            Node::Not(a) => a.clone(),
            Node::Implies(a, b) if a.is_superset(b) => a.clone(),
            Node::Implies(a, b) => Arc::new(a.union(b).copied().collect()),
        });
        Arc::unwrap_or_clone(vars)
    }

    /// Number of nodes when the formula is written out as a tree.
    /// Saturates at `u64::MAX`.
    pub fn size(&self) -> u64 {
        self.fold_total(|n: Node<'_, u64>| match n {
            Node::Bottom | Node::Var(_) => 1,
            Node::Not(a) => a.saturating_add(1),
            Node::Implies(a, b) => a.saturating_add(*b).saturating_add(1),
        })
    }

    pub fn depth(&self) -> u32 {
        self.fold_total(|n: Node<'_, u32>| match n {
            Node::Bottom | Node::Var(_) => 0,
            Node::Not(a) => a + 1,
            Node::Implies(a, b) => (*a).max(*b) + 1,
        })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_formula(self, f)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Print a formula in the concrete grammar with minimal parentheses.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

/// The connectives defined in terms of `⊥`, `¬` and `→`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivedConnective {
    Verum,
    And,
    Or,
    Iff,
    Oplus,
    Odot,
    Ominus,
}

impl DerivedConnective {
    pub const ALL: [DerivedConnective; 7] = [
        DerivedConnective::Verum,
        DerivedConnective::And,
        DerivedConnective::Or,
        DerivedConnective::Iff,
        DerivedConnective::Oplus,
        DerivedConnective::Odot,
        DerivedConnective::Ominus,
    ];

    pub fn arity(self) -> usize {
        match self {
            DerivedConnective::Verum => 0,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("{op:?} takes {expected} operand(s), got {got}")]
    Arity {
        op: DerivedConnective,
        expected: usize,
        got: usize,
    },
}

/// Expand a derived connective applied to `args` into core syntax.
pub fn expand(op: DerivedConnective, args: &[Formula]) -> Result<Formula, ExpandError> {
    if args.len() != op.arity() {
        return Err(ExpandError::Arity {
            op,
            expected: op.arity(),
            got: args.len(),
        });
    }
    Ok(match args {
        [] => Formula::verum(),
        [a, b] => expand_binary(op, a.clone(), b.clone()),
        _ => unreachable!("arity checked above"),
    })
}

fn expand_binary(op: DerivedConnective, a: Formula, b: Formula) -> Formula {
    match op {
        DerivedConnective::Verum => unreachable!("verum is nullary"),
        // (a → b) → b
        DerivedConnective::Or => {
            let b = Arc::new(b);
            Formula::Implies(Arc::new(Formula::Implies(Arc::new(a), b.clone())), b)
        }
        // ¬(¬a ∨ ¬b)
        DerivedConnective::And => a.not().or(b.not()).not(),
        // (a → b) ∧ (b → a)
        DerivedConnective::Iff => {
            let (a, b) = (Arc::new(a), Arc::new(b));
            let ab = Formula::Implies(a.clone(), b.clone());
            let ba = Formula::Implies(b, a);
            ab.and(ba)
        }
        // ¬a → b
        DerivedConnective::Oplus => a.not().implies(b),
        // ¬(a → ¬b)
        DerivedConnective::Odot => a.implies(b.not()).not(),
        // ¬(a → b)
        DerivedConnective::Ominus => a.implies(b).not(),
    }
}

/// Replacement map for [`substitute`]: variable index to formula.
pub type Binding = BTreeMap<u32, Formula>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstituteError {
    #[error("metavariable {0} is not bound")]
    Unbound(u32),
}

/// Simultaneously replace every variable `X_i` of `f` by `binding[i]`.
///
/// Each replacement is shared between its occurrences rather than copied.
pub fn substitute(f: &Formula, binding: &Binding) -> Result<Formula, SubstituteError> {
    let shared: BTreeMap<u32, Arc<Formula>> = binding
        .iter()
        .map(|(k, v)| (*k, Arc::new(v.clone())))
        .collect();
    let out = f.fold(|n: Node<'_, Arc<Formula>>| {
        Ok(match n {
            Node::Bottom => Arc::new(Formula::Bottom),
            Node::Var(i) => shared.get(&i).cloned().ok_or(SubstituteError::Unbound(i))?,
            Node::Not(a) => Arc::new(Formula::Not(a.clone())),
            Node::Implies(a, b) => Arc::new(Formula::Implies(a.clone(), b.clone())),
        })
    })?;
    Ok(Arc::unwrap_or_clone(out))
}
