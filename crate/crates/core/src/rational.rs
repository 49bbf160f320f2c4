//! Exact rationals and their `p/q` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("`{0}` is not a rational of the form p/q")]
    Malformed(String),
    #[error("{0} is outside [0,1]")]
    OutOfUnitInterval(Rational),
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `p/q` or `p` (an optional leading sign on `p`).
pub fn parse_rational(text: &str) -> Result<Rational, RationalError> {
    let t = text.trim();
    let ok = !t.is_empty()
        && t.split('/').count() <= 2
        && t.split('/').all(|part| {
            let digits = part.strip_prefix('-').unwrap_or(part);
            !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
        });
    if !ok {
        return Err(RationalError::Malformed(text.to_string()));
    }
    t.parse::<Rational>()
        .map_err(|_| RationalError::Malformed(text.to_string()))
}

/// Parse a rational and require it to lie in `[0,1]`.
pub fn parse_unit(text: &str) -> Result<Rational, RationalError> {
    let r = parse_rational(text)?;
    check_unit(&r)?;
    Ok(r)
}

pub fn check_unit(r: &Rational) -> Result<(), RationalError> {
    if r < &Rational::zero() || r > &Rational::one() {
        Err(RationalError::OutOfUnitInterval(r.clone()))
    } else {
        Ok(())
    }
}

/// Render as `p/q`, or `p` when the denominator is 1.
pub fn render(r: &Rational) -> String {
    r.to_string()
}
