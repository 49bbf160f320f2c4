#![allow(dead_code)]

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use lukasiewicz::formula::{substitute, Binding, Formula};
use lukasiewicz::proofs::{AxiomId, Justification, Proof, ProofStep};
use lukasiewicz::pwl::TruthSet;
use lukasiewicz::rational::ratio;
use lukasiewicz::Rational;
use proptest::prelude::*;
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// All bundled `.proof` files, sorted by name.
pub fn corpus() -> Vec<(String, Proof)> {
    let mut entries: Vec<_> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "proof"))
        .collect();
    entries.sort();
    entries
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let proof = Proof::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, proof)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// bounded proof search

enum Origin {
    Axiom(AxiomId),
    Mp(Formula, Formula),
}

/// Implications over `0` and `X1` with at most `arrows` arrows.
pub fn implication_pool(arrows: usize) -> Vec<Formula> {
    let mut by_arrows: Vec<Vec<Formula>> = vec![vec![Formula::Bottom, Formula::x1()]];
    for n in 1..=arrows {
        let mut layer = Vec::new();
        for i in 0..n {
            for a in &by_arrows[i] {
                for b in &by_arrows[n - 1 - i] {
                    layer.push(a.clone().implies(b.clone()));
                }
            }
        }
        by_arrows.push(layer);
    }
    by_arrows.concat()
}

/// Forward-chaining search: every axiom instance over `pool`, closed under
/// modus ponens for at most `rounds` rounds. Returns a proof of `goal`
/// without unused steps or repeated formulas.
pub fn search_proof(goal: &Formula, pool: &[Formula], rounds: usize) -> Option<Proof> {
    let mut known: HashMap<Formula, Origin> = HashMap::new();
    let mut order: Vec<Formula> = Vec::new();
    for id in AxiomId::ALL {
        let arity = id.arity();
        let tuples = pool.len().pow(arity);
        for code in 0..tuples {
            let mut rest = code;
            let mut binding = Binding::new();
            for var in (1..=arity).rev() {
                binding.insert(var, pool[rest % pool.len()].clone());
                rest /= pool.len();
            }
            let inst = substitute(&id.schema(), &binding).unwrap();
            if let Entry::Vacant(slot) = known.entry(inst.clone()) {
                slot.insert(Origin::Axiom(id));
                order.push(inst);
            }
        }
    }
    for _ in 0..rounds {
        if known.contains_key(goal) {
            break;
        }
        let mut fresh = Vec::new();
        for t in &order {
            if let Formula::Implies(a, b) = t {
                if known.contains_key(a.as_ref()) && !known.contains_key(b.as_ref()) {
                    fresh.push(((**b).clone(), (**a).clone(), t.clone()));
                }
            }
        }
        for (b, a, t) in fresh {
            if let Entry::Vacant(slot) = known.entry(b.clone()) {
                slot.insert(Origin::Mp(a, t));
                order.push(b);
            }
        }
    }
    known.get(goal)?;

    // post-order extraction
    let mut steps: Vec<ProofStep> = Vec::new();
    let mut index: HashMap<Formula, usize> = HashMap::new();
    let mut stack = vec![(goal.clone(), false)];
    while let Some((f, expanded)) = stack.pop() {
        if index.contains_key(&f) {
            continue;
        }
        match &known[&f] {
            Origin::Axiom(id) => {
                steps.push(ProofStep {
                    formula: f.clone(),
                    justification: Justification::Axiom(*id),
                });
                index.insert(f, steps.len());
            }
            Origin::Mp(a, t) => {
                if expanded {
                    let justification = Justification::Mp {
                        minor: index[a],
                        major: index[t],
                    };
                    steps.push(ProofStep {
                        formula: f.clone(),
                        justification,
                    });
                    index.insert(f, steps.len());
                } else {
                    stack.push((f.clone(), true));
                    stack.push((t.clone(), false));
                    stack.push((a.clone(), false));
                }
            }
        }
    }
    Proof::new(Vec::new(), steps).ok()
}

// ---------------------------------------------------------------------------
// single-step mutations

/// Preorder node count.
pub fn tree_size(f: &Formula) -> usize {
    match f {
        Formula::Bottom | Formula::Var(_) => 1,
        Formula::Not(g) => 1 + tree_size(g),
        Formula::Implies(a, b) => 1 + tree_size(a) + tree_size(b),
    }
}

/// Rewrite the subterm at preorder position `pos`.
pub fn rewrite_at(f: &Formula, pos: usize, edit: &dyn Fn(&Formula) -> Formula) -> Formula {
    fn go(f: &Formula, pos: &mut usize, edit: &dyn Fn(&Formula) -> Formula) -> Formula {
        if *pos == 0 {
            *pos = usize::MAX;
            return edit(f);
        }
        *pos -= 1;
        match f {
            Formula::Bottom | Formula::Var(_) => f.clone(),
            Formula::Not(g) => Formula::Not(Arc::new(go(g, pos, edit))),
            Formula::Implies(a, b) => {
                let a2 = go(a, pos, edit);
                let b2 = if *pos == usize::MAX {
                    (**b).clone()
                } else {
                    go(b, pos, edit)
                };
                Formula::Implies(Arc::new(a2), Arc::new(b2))
            }
        }
    }
    let mut pos = pos;
    go(f, &mut pos, edit)
}

/// One random edit to one step: a connective added or removed in its
/// formula, or one justification index changed.
pub fn mutate(proof: &Proof, rng: &mut impl Rng) -> Proof {
    let mut p = proof.clone();
    let n = p.steps().len();
    let hyps = p.hypotheses().len();
    loop {
        let k = rng.random_range(0..n);
        let step = &mut p.steps_mut()[k];
        match rng.random_range(0..3) {
            0 => {
                let pos = rng.random_range(0..tree_size(&step.formula));
                step.formula = rewrite_at(&step.formula, pos, &|g| g.clone().not());
                return p;
            }
            1 => {
                // strip a negation, if there is one
                let negs: Vec<usize> = (0..tree_size(&step.formula))
                    .filter(|&i| is_not_at(&step.formula, i))
                    .collect();
                if negs.is_empty() {
                    continue;
                }
                let pos = negs[rng.random_range(0..negs.len())];
                step.formula = rewrite_at(&step.formula, pos, &|g| match g {
                    Formula::Not(inner) => (**inner).clone(),
                    other => other.clone(),
                });
                return p;
            }
            _ => match step.justification {
                Justification::Axiom(_) => continue,
                Justification::Hyp(h) => {
                    let alt = rng.random_range(1..=hyps + 1);
                    if alt == h {
                        continue;
                    }
                    step.justification = Justification::Hyp(alt);
                    return p;
                }
                Justification::Mp { minor, major } => {
                    let alt = rng.random_range(1..=k + 1);
                    step.justification = if rng.random_bool(0.5) {
                        if alt == minor {
                            continue;
                        }
                        Justification::Mp { minor: alt, major }
                    } else {
                        if alt == major {
                            continue;
                        }
                        Justification::Mp { minor, major: alt }
                    };
                    return p;
                }
            },
        }
    }
}

fn is_not_at(f: &Formula, pos: usize) -> bool {
    fn go<'a>(f: &'a Formula, pos: &mut usize) -> Option<&'a Formula> {
        if *pos == 0 {
            return Some(f);
        }
        *pos -= 1;
        match f {
            Formula::Bottom | Formula::Var(_) => None,
            Formula::Not(g) => go(g, pos),
            Formula::Implies(a, b) => go(a, pos).or_else(|| go(b, pos)),
        }
    }
    let mut pos = pos;
    matches!(go(f, &mut pos), Some(Formula::Not(_)))
}

// ---------------------------------------------------------------------------
// random generation

/// Random core formula of depth at most `depth` over `X1..=Xvars`.
pub fn random_formula(rng: &mut impl Rng, depth: u32, vars: u32) -> Formula {
    if depth == 0 || rng.random_bool(0.2) {
        return if rng.random_bool(0.1) {
            Formula::Bottom
        } else {
            Formula::var(rng.random_range(1..=vars))
        };
    }
    if rng.random_bool(0.35) {
        random_formula(rng, depth - 1, vars).not()
    } else {
        random_formula(rng, depth - 1, vars).implies(random_formula(rng, depth - 1, vars))
    }
}

/// Random rational in `[0,1]` with denominator at most `max_q`.
pub fn random_unit(rng: &mut impl Rng, max_q: i64) -> Rational {
    let q = rng.random_range(1..=max_q);
    ratio(rng.random_range(0..=q), q)
}

/// Random truth set of up to three intervals with grid endpoints.
pub fn random_truth_set(rng: &mut impl Rng, max_q: i64) -> TruthSet {
    let pieces = rng.random_range(0..=3);
    let intervals = (0..pieces)
        .map(|_| {
            let (a, b) = (random_unit(rng, max_q), random_unit(rng, max_q));
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    TruthSet::new(intervals).unwrap()
}

/// Random subset of `t` built directly from sub-intervals of its pieces.
pub fn random_subset(rng: &mut impl Rng, t: &TruthSet) -> TruthSet {
    let mut parts = Vec::new();
    for (a, b) in t.intervals() {
        if rng.random_bool(0.3) {
            continue;
        }
        let mut u = [rng.random_range(0..=4), rng.random_range(0..=4)];
        u.sort();
        let at = |k: i64| a + (b - a) * ratio(k, 4);
        parts.push((at(u[0]), at(u[1])));
    }
    TruthSet::new(parts).unwrap()
}

// proptest strategies

pub fn unit_rational(max_q: i64) -> impl Strategy<Value = Rational> {
    (1..=max_q).prop_flat_map(|q| (0..=q).prop_map(move |p| ratio(p, q)))
}

/// Core formulas over `X1..=Xvars`, optionally built with derived connectives.
pub fn formula(vars: u32, depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Bottom),
        6 => (1..=vars).prop_map(Formula::var),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            3 => inner.clone().prop_map(Formula::not),
            4 => (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            1 => (inner.clone(), inner.clone()).prop_map(|(a, b)| a.oplus(b)),
            1 => (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            1 => (inner.clone(), inner).prop_map(|(a, b)| a.ominus(b)),
        ]
    })
}

pub fn truth_set(max_q: i64) -> impl Strategy<Value = TruthSet> {
    prop::collection::vec((unit_rational(max_q), unit_rational(max_q)), 0..=3).prop_map(|pairs| {
        TruthSet::new(
            pairs
                .into_iter()
                .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
                .collect(),
        )
        .unwrap()
    })
}
