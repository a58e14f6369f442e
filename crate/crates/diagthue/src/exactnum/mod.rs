//! Numeric foundations: exact rationals, quadratic field elements, dyadic
//! floats, certified balls, and power products.
//!
//! Everything downstream follows one discipline: quantities stay exact
//! (rational or quadratic) for as long as possible, and a certified interval
//! is introduced only at the final irrational step. Verdicts come from exact
//! comparisons; balls exist for embeddings, margins, and display.

pub mod ball;
pub mod dyadic;
pub mod power;
pub mod quad;

use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, the base scalar of the whole crate.
pub type Rational = num_rational::BigRational;

pub const DEFAULT_START_PRECISION_BITS: u32 = 64;
pub const DEFAULT_MAX_PRECISION_BITS: u32 = 4096;
pub const DEFAULT_DIGIT_BUDGET: u64 = 1_000_000;

/// Working-precision policy: start cheap, escalate to `max`, then fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub start: u32,
    pub max: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start: DEFAULT_START_PRECISION_BITS,
            max: DEFAULT_MAX_PRECISION_BITS,
        }
    }
}

impl Precision {
    pub fn with_max(max: u32) -> Self {
        let max = max.max(16);
        Precision { start: DEFAULT_START_PRECISION_BITS.min(max), max }
    }
}

pub fn rational_from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Render as `p/q`, or plain `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `p`, `p/q`, or `-p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidSpec(format!("not a rational: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidSpec(format!("zero denominator: {s:?}")));
        }
        Ok(Rational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
    }
}

/// Exact square root of a rational if it is a perfect square.
pub fn rational_sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let ns = num_integer::Roots::sqrt(q.numer());
    let ds = num_integer::Roots::sqrt(q.denom());
    if &(&ns * &ns) == q.numer() && &(&ds * &ds) == q.denom() {
        Some(Rational::new(ns, ds))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for s in ["0", "7", "-3", "22/7", "-9/4", "1000000000000000000000/7"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(format_rational(&q), s);
        }
        // Reduction and sign normalization happen on parse.
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(
            rational_sqrt_exact(&parse_rational("9/4").unwrap()),
            Some(parse_rational("3/2").unwrap())
        );
        assert_eq!(rational_sqrt_exact(&parse_rational("2").unwrap()), None);
        assert_eq!(rational_sqrt_exact(&parse_rational("-4").unwrap()), None);
        assert_eq!(
            rational_sqrt_exact(&parse_rational("0").unwrap()),
            Some(Rational::zero())
        );
    }
}
