//! Single-formula axiomatizations of the theories `Θ_r`, `r` rational.
//!
//! For `r = p/q` strictly inside `(0,1)` the Stern–Brocot descent from
//! `(0/1, 1/1)` ends at the Farey interval `(a/b, c/d)` whose mediant is
//! `r`. The Schauder hat at `r` is the minimum of the two boundary ramps of
//! that interval,
//!
//! ```text
//! hat(x) = max(0, min(b·x − a, c − d·x))
//! ```
//!
//! which peaks at `r` with value `1/q` and vanishes outside `(a/b, c/d)`.
//! The q-fold strong disjunction of the hat equals 1 exactly at `r`, so it
//! axiomatizes `Θ_r`. Every result is checked against the PWL engine before
//! it is returned.
//!
//! Ramps `max(0, min(1, n·x − k))` are built from two identities on the
//! truncation `t(y) = max(0, min(1, y))`:
//!
//! - composition: `t(m·t(y) − j) = t(m·y − j)` for `0 ≤ j < m`, so ramps of
//!   slope `m·n` are ramps of slope `m` with a slope-`n` ramp substituted;
//! - increment: `t(y + x) = t(y) ⊕ (t(y + 1) ⊙ x)` for `x ∈ [0,1]`.
//!
//! Subterms are shared, so formulas stay small as DAGs.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::formula::{substitute, Binding, Formula};
use crate::parallel::Exec;
use crate::pwl::{PwlError, PwlFunction, TruthSet};
use crate::rational::Rational;

/// Largest denominator accepted by default.
pub const DEFAULT_MAX_DENOMINATOR: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomatizeError {
    #[error("{0} is outside [0,1]")]
    OutOfRange(Rational),
    #[error("{0} is an endpoint of [0,1] and has no Stern-Brocot path")]
    Endpoint(Rational),
    #[error("denominator {denominator} exceeds the configured limit {limit}")]
    DenominatorGuard { denominator: BigInt, limit: u64 },
    #[error("internal error: constructed formula for {0} failed verification")]
    SelfVerification(Rational),
    #[error(transparent)]
    Pwl(#[from] PwlError),
}

/// One step of the mediant descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Move {
    L,
    R,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::L => "L",
            Move::R => "R",
        })
    }
}

/// Interval between Farey neighbours `a/b < c/d` with `b·c − a·d = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FareyInterval {
    pub left: (u64, u64),
    pub right: (u64, u64),
}

impl FareyInterval {
    /// `(0/1, 1/1)`.
    pub fn unit() -> Self {
        FareyInterval {
            left: (0, 1),
            right: (1, 1),
        }
    }

    pub fn mediant(&self) -> (u64, u64) {
        (self.left.0 + self.right.0, self.left.1 + self.right.1)
    }

    pub fn descend(&self, mv: Move) -> Self {
        let m = self.mediant();
        match mv {
            Move::L => FareyInterval {
                left: self.left,
                right: m,
            },
            Move::R => FareyInterval {
                left: m,
                right: self.right,
            },
        }
    }

    pub fn is_unimodular(&self) -> bool {
        let (a, b) = self.left;
        let (c, d) = self.right;
        (b as u128) * (c as u128) == (a as u128) * (d as u128) + 1
    }
}

fn to_u64_pair(r: &Rational) -> Option<(u64, u64)> {
    Some((r.numer().to_u64()?, r.denom().to_u64()?))
}

fn check_range(r: &Rational) -> Result<(), AxiomatizeError> {
    if r < &Rational::zero() || r > &Rational::one() {
        Err(AxiomatizeError::OutOfRange(r.clone()))
    } else {
        Ok(())
    }
}

/// Mediant-descent path from `(0/1, 1/1)` to the interval whose mediant is
/// `r`, for `0 < r < 1`.
pub fn stern_brocot_path(r: &Rational) -> Result<Vec<Move>, AxiomatizeError> {
    Ok(descend_to(r, u64::MAX)?.0)
}

fn descend_to(r: &Rational, limit: u64) -> Result<(Vec<Move>, FareyInterval), AxiomatizeError> {
    check_range(r)?;
    if r.is_zero() || r.is_one() {
        return Err(AxiomatizeError::Endpoint(r.clone()));
    }
    let (p, q) = to_u64_pair(r)
        .filter(|&(_, q)| q <= limit)
        .ok_or_else(|| AxiomatizeError::DenominatorGuard {
            denominator: r.denom().clone(),
            limit,
        })?;
    let mut path = Vec::new();
    let mut iv = FareyInterval::unit();
    loop {
        let (mp, mq) = iv.mediant();
        let (lhs, rhs) = ((p as u128) * (mq as u128), (mp as u128) * (q as u128));
        let mv = match lhs.cmp(&rhs) {
            std::cmp::Ordering::Equal => return Ok((path, iv)),
            std::cmp::Ordering::Less => Move::L,
            std::cmp::Ordering::Greater => Move::R,
        };
        path.push(mv);
        iv = iv.descend(mv);
    }
}

/// Memoized builder for truncated ramps `max(0, min(1, n·x − k))`.
#[derive(Debug, Default)]
pub struct Ramps {
    memo: HashMap<(u64, u64), Arc<Formula>>,
}

impl Ramps {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rising ramp `max(0, min(1, n·X1 − k))` for `0 ≤ k < n`.
    pub fn rising(&mut self, n: u64, k: u64) -> Formula {
        (*self.rising_arc(n, k)).clone()
    }

    /// Falling ramp `max(0, min(1, k − n·X1))` for `1 ≤ k ≤ n`.
    pub fn falling(&mut self, n: u64, k: u64) -> Formula {
        assert!(k >= 1, "falling ramp needs k >= 1");
        self.rising(n, k - 1).not()
    }

    fn rising_arc(&mut self, n: u64, k: u64) -> Arc<Formula> {
        assert!(k < n, "ramp offset {k} out of range for slope {n}");
        if let Some(f) = self.memo.get(&(n, k)) {
            return f.clone();
        }
        let f = if n == 1 {
            Formula::x1()
        } else {
            let m = smallest_prime_factor(n);
            if m < n {
                let outer = self.rising_arc(m, k % m);
                let inner = self.rising_arc(n / m, k / m);
                substitute(&outer, &Binding::from([(1, (*inner).clone())]))
                    .expect("ramps only mention X1")
            } else {
                // t(n·x − k) = t((n−1)·x − k) ⊕ (t((n−1)·x − k + 1) ⊙ x)
                let x = Formula::x1();
                let carry = if k == 0 {
                    x
                } else {
                    (*self.rising_arc(n - 1, k - 1)).clone().odot(x)
                };
                if k + 1 == n {
                    carry
                } else {
                    (*self.rising_arc(n - 1, k)).clone().oplus(carry)
                }
            }
        };
        let f = Arc::new(f);
        self.memo.insert((n, k), f.clone());
        f
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return p;
        }
        p += 2;
    }
    n
}

/// Descent state: the current Farey interval with its two boundary ramps.
///
/// `hat_left` falls from `1/b` at `a/b` to 0 at `c/d`; `hat_right` rises
/// from 0 at `a/b` to `1/d` at `c/d`. Their minimum is the Schauder hat at
/// the mediant.
#[derive(Debug, Clone)]
pub struct HatState {
    pub interval: FareyInterval,
    pub hat_left: Formula,
    pub hat_right: Formula,
}

impl HatState {
    /// State for `(0/1, 1/1)`: `hat_left = ~X1`, `hat_right = X1`.
    pub fn initial() -> Self {
        HatState {
            interval: FareyInterval::unit(),
            hat_left: Formula::x1().not(),
            hat_right: Formula::x1(),
        }
    }

    pub fn for_interval(interval: FareyInterval, ramps: &mut Ramps) -> Self {
        let (a, b) = interval.left;
        let (c, d) = interval.right;
        HatState {
            interval,
            hat_left: ramps.falling(d, c),
            hat_right: ramps.rising(b, a),
        }
    }

    pub fn mediant_hat(&self) -> Formula {
        self.hat_left.clone().and(self.hat_right.clone())
    }

    /// Step into the left or right half; only the ramp at the new
    /// mediant endpoint changes.
    pub fn descend(&self, mv: Move, ramps: &mut Ramps) -> Self {
        let interval = self.interval.descend(mv);
        let (a, b) = interval.left;
        let (c, d) = interval.right;
        match mv {
            Move::L => HatState {
                interval,
                hat_left: ramps.falling(d, c),
                hat_right: self.hat_right.clone(),
            },
            Move::R => HatState {
                interval,
                hat_left: self.hat_left.clone(),
                hat_right: ramps.rising(b, a),
            },
        }
    }
}

/// Schauder hat at `r`: peak `1/q` at `r`, zero outside the Farey interval
/// whose mediant is `r`. `0` and `1` get `~X1` and `X1`.
pub fn schauder_hat(r: &Rational) -> Result<Formula, AxiomatizeError> {
    Axiomatizer::default().schauder_hat(r)
}

/// A formula `α_r` with one-set exactly `{r}`, hence `Θ_r = {α_r}⊢`.
pub fn axiomatize(r: &Rational) -> Result<Formula, AxiomatizeError> {
    Axiomatizer::default().axiomatize(r)
}

/// Axiomatizer with a configurable denominator guard.
#[derive(Debug, Clone, Copy)]
pub struct Axiomatizer {
    pub max_denominator: u64,
}

impl Default for Axiomatizer {
    fn default() -> Self {
        Axiomatizer {
            max_denominator: DEFAULT_MAX_DENOMINATOR,
        }
    }
}

/// Verification record emitted next to `α_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomRecord {
    pub r: String,
    pub q: String,
    pub path: Vec<Move>,
    pub one_set: TruthSet,
}

impl Axiomatizer {
    pub fn new(max_denominator: u64) -> Self {
        Axiomatizer { max_denominator }
    }

    fn guard(&self, r: &Rational) -> Result<(), AxiomatizeError> {
        check_range(r)?;
        if r.denom() > &BigInt::from(self.max_denominator) {
            return Err(AxiomatizeError::DenominatorGuard {
                denominator: r.denom().clone(),
                limit: self.max_denominator,
            });
        }
        Ok(())
    }

    pub fn schauder_hat(&self, r: &Rational) -> Result<Formula, AxiomatizeError> {
        self.guard(r)?;
        if r.is_zero() {
            return Ok(Formula::x1().not());
        }
        if r.is_one() {
            return Ok(Formula::x1());
        }
        let (_, interval) = descend_to(r, self.max_denominator)?;
        let mut ramps = Ramps::new();
        Ok(HatState::for_interval(interval, &mut ramps).mediant_hat())
    }

    pub fn axiomatize(&self, r: &Rational) -> Result<Formula, AxiomatizeError> {
        self.guard(r)?;
        let alpha = if r.is_zero() {
            Formula::x1().not()
        } else if r.is_one() {
            Formula::x1()
        } else {
            let hat = self.schauder_hat(r)?;
            let q = r.denom().to_u64().expect("guarded denominator fits u64");
            strong_power(hat, q)
        };
        if !verify(r, &alpha)? {
            return Err(AxiomatizeError::SelfVerification(r.clone()));
        }
        Ok(alpha)
    }

    /// `α_r` together with its verification record.
    pub fn axiomatize_with_record(
        &self,
        r: &Rational,
    ) -> Result<(Formula, AxiomRecord), AxiomatizeError> {
        let alpha = self.axiomatize(r)?;
        let path = if r.is_zero() || r.is_one() {
            Vec::new()
        } else {
            descend_to(r, self.max_denominator)?.0
        };
        let record = AxiomRecord {
            r: r.to_string(),
            q: r.denom().to_string(),
            path,
            one_set: PwlFunction::from_formula(&alpha)?.one_set(),
        };
        Ok((alpha, record))
    }

    /// Axiomatize a batch of values; results are in input order.
    pub fn axiomatize_many(
        &self,
        rs: &[Rational],
        exec: Exec,
    ) -> Vec<Result<Formula, AxiomatizeError>> {
        exec.map(rs, |r| self.axiomatize(r))
    }
}

/// Whether the one-set of `alpha` is exactly `{r}`.
pub fn verify(r: &Rational, alpha: &Formula) -> Result<bool, AxiomatizeError> {
    let g = PwlFunction::from_formula(alpha)?;
    Ok(g.one_set() == TruthSet::point(r.clone()).map_err(|_| AxiomatizeError::OutOfRange(r.clone()))?)
}

// q-fold strong disjunction, split in halves so the depth is logarithmic in q
// and equal halves are shared.
fn strong_power(f: Formula, q: u64) -> Formula {
    fn go(q: u64, base: &Arc<Formula>, memo: &mut HashMap<u64, Arc<Formula>>) -> Arc<Formula> {
        if q == 1 {
            return base.clone();
        }
        if let Some(f) = memo.get(&q) {
            return f.clone();
        }
        let lo = go(q / 2, base, memo);
        let hi = go(q - q / 2, base, memo);
        // a ⊕ b = ¬a → b
        let f = Arc::new(Formula::Implies(Arc::new(Formula::Not(lo)), hi));
        memo.insert(q, f.clone());
        f
    }
    let base = Arc::new(f);
    Arc::unwrap_or_clone(go(q, &base, &mut HashMap::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::rational::{int, ratio};
    use crate::semantics::unit_grid;

    fn path(p: i64, q: i64) -> String {
        stern_brocot_path(&ratio(p, q))
            .unwrap()
            .iter()
            .map(|m| m.to_string())
            .collect()
    }

    #[test]
    fn stern_brocot_examples() {
        assert_eq!(path(1, 2), "");
        assert_eq!(path(1, 3), "L");
        assert_eq!(path(3, 5), "RL");
        assert_eq!(path(1, 5), "LLL");
        assert_eq!(path(5, 8), "RLR");
        assert_eq!(path(2, 7), "LLR");
    }

    #[test]
    fn stern_brocot_rejects_endpoints_and_out_of_range() {
        assert!(matches!(
            stern_brocot_path(&int(0)),
            Err(AxiomatizeError::Endpoint(_))
        ));
        assert!(matches!(
            stern_brocot_path(&int(1)),
            Err(AxiomatizeError::Endpoint(_))
        ));
        assert!(matches!(
            stern_brocot_path(&ratio(4, 3)),
            Err(AxiomatizeError::OutOfRange(_))
        ));
    }

    #[test]
    fn descent_preserves_unimodularity_and_ends_at_r() {
        for r in unit_grid(40) {
            if r.is_zero() || r.is_one() {
                continue;
            }
            let mut iv = FareyInterval::unit();
            assert!(iv.is_unimodular());
            let moves = stern_brocot_path(&r).unwrap();
            assert!(moves.len() as u64 <= to_u64_pair(&r).map(|(p, q)| p + q).unwrap());
            for mv in moves {
                iv = iv.descend(mv);
                assert!(iv.is_unimodular(), "{r}: {iv:?}");
            }
            let (p, q) = iv.mediant();
            assert_eq!(ratio(p as i64, q as i64), r);
        }
    }

    #[test]
    fn ramps_are_truncated_lines() {
        let mut ramps = Ramps::new();
        for n in 1..=24u64 {
            for k in 0..n {
                let g = PwlFunction::from_formula(&ramps.rising(n, k)).unwrap();
                for x in unit_grid(30) {
                    let y = (int(n as i64) * &x - int(k as i64)).clamp(int(0), int(1));
                    assert_eq!(g.eval_at(&x).unwrap(), y, "n={n} k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn hat_examples() {
        assert_eq!(schauder_hat(&int(0)).unwrap(), parse("~X1").unwrap());
        assert_eq!(schauder_hat(&int(1)).unwrap(), parse("X1").unwrap());

        let half = schauder_hat(&ratio(1, 2)).unwrap();
        assert_eq!(half, parse("~X1 /\\ X1").unwrap());
        let g = PwlFunction::from_formula(&half).unwrap();
        assert_eq!(g, PwlFunction::from_formula(&parse("X1 /\\ ~X1").unwrap()).unwrap());
        assert_eq!(g.maximum(), ratio(1, 2));

        let third = PwlFunction::from_formula(&schauder_hat(&ratio(1, 3)).unwrap()).unwrap();
        let reference =
            PwlFunction::from_formula(&parse("(~X1 (-) (X1/\\~X1)) /\\ (X1/\\~X1)").unwrap())
                .unwrap();
        assert_eq!(third, reference);
        assert_eq!(third.eval_at(&ratio(1, 3)).unwrap(), ratio(1, 3));
    }

    #[test]
    fn hat_state_descent_matches_direct_construction() {
        let mut ramps = Ramps::new();
        let mut st = HatState::initial();
        for mv in [Move::R, Move::L, Move::L, Move::R] {
            st = st.descend(mv, &mut ramps);
            let direct = HatState::for_interval(st.interval, &mut ramps);
            let a = PwlFunction::from_formula(&st.mediant_hat()).unwrap();
            let b = PwlFunction::from_formula(&direct.mediant_hat()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn axiomatize_examples() {
        assert_eq!(axiomatize(&int(1)).unwrap(), parse("X1").unwrap());
        assert_eq!(axiomatize(&int(0)).unwrap(), parse("~X1").unwrap());
        let half = axiomatize(&ratio(1, 2)).unwrap();
        assert_eq!(half, parse("(~X1 /\\ X1) (+) (~X1 /\\ X1)").unwrap());
        assert_eq!(
            PwlFunction::from_formula(&half).unwrap(),
            PwlFunction::from_formula(&parse("(~X1 -> X1) /\\ (X1 -> ~X1)").unwrap()).unwrap()
        );
    }

    #[test]
    fn denominator_guard() {
        let ax = Axiomatizer::new(10);
        assert!(ax.axiomatize(&ratio(3, 10)).is_ok());
        assert!(matches!(
            ax.axiomatize(&ratio(1, 11)),
            Err(AxiomatizeError::DenominatorGuard { .. })
        ));
        assert!(matches!(
            axiomatize(&ratio(-1, 2)),
            Err(AxiomatizeError::OutOfRange(_))
        ));
    }

    #[test]
    fn large_denominators_stay_tractable() {
        let r = ratio(123_457, 1_000_000);
        let alpha = axiomatize(&r).unwrap();
        assert!(verify(&r, &alpha).unwrap());
        let one_over = ratio(1, 999_983);
        assert!(axiomatize(&one_over).is_ok());
    }

    #[test]
    fn record_lists_path_and_one_set() {
        let (_, rec) = Axiomatizer::default()
            .axiomatize_with_record(&ratio(3, 5))
            .unwrap();
        assert_eq!(
            serde_json::to_string(&rec).unwrap(),
            r#"{"r":"3/5","q":"5","path":["R","L"],"one_set":[["3/5","3/5"]]}"#
        );
    }

    #[test]
    fn verify_rejects_wrong_formulas() {
        assert!(!verify(&ratio(1, 3), &parse("X1").unwrap()).unwrap());
        assert!(verify(&int(1), &parse("X1").unwrap()).unwrap());
    }
}
