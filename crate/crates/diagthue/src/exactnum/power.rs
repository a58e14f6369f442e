//! Products of rational powers with exact comparison.
//!
//! A [`PowerProduct`] is `prod base_i^(e_i)` with positive rational bases and
//! rational exponents. Comparison runs a certified-logarithm fast path at a
//! few precisions, and when the gap is invisible there, clears the exponent
//! denominators and compares exact big rationals. The exact route also
//! decides equality, so a comparison never guesses; on adversarially close
//! inputs it fails loudly with the precision or digit budget that would have
//! been needed.

use super::ball::{ln_rational, RealBall};
use super::{Precision, Rational};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerProduct {
    factors: Vec<(Rational, Rational)>,
}

impl PowerProduct {
    pub fn one() -> Self {
        PowerProduct { factors: Vec::new() }
    }

    pub fn from_factor(base: Rational, exp: Rational) -> Self {
        let mut p = PowerProduct::one();
        p.push(base, exp);
        p
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_factor(q, Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_int_pow(base: i64, exp: Rational) -> Self {
        Self::from_factor(Rational::from_integer(BigInt::from(base)), exp)
    }

    pub fn push(&mut self, base: Rational, exp: Rational) {
        assert!(base.is_positive(), "power product bases must be positive");
        if base.is_one() || exp.is_zero() {
            return;
        }
        self.factors.push((base, exp));
    }

    pub fn factors(&self) -> &[(Rational, Rational)] {
        &self.factors
    }

    pub fn mul(&self, other: &PowerProduct) -> Self {
        let mut p = self.clone();
        for (b, e) in &other.factors {
            p.push(b.clone(), e.clone());
        }
        p
    }

    /// Raise the whole product to the rational power `t`.
    pub fn pow(&self, t: &Rational) -> Self {
        if t.is_zero() {
            return PowerProduct::one();
        }
        PowerProduct {
            factors: self.factors.iter().map(|(b, e)| (b.clone(), e * t)).collect(),
        }
    }

    pub fn recip(&self) -> Self {
        self.pow(&-Rational::one())
    }

    /// Canonical base -> exponent map of `self / other`.
    fn ratio_map(&self, other: &PowerProduct) -> BTreeMap<Rational, Rational> {
        let mut m: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (b, e) in &self.factors {
            *m.entry(b.clone()).or_insert_with(Rational::zero) += e;
        }
        for (b, e) in &other.factors {
            *m.entry(b.clone()).or_insert_with(Rational::zero) -= e;
        }
        m.retain(|b, e| !e.is_zero() && !b.is_one());
        m
    }

    /// Natural log as a certified ball.
    pub fn ln_ball(&self, prec: u32) -> RealBall {
        let mut acc = RealBall::zero(prec);
        for (b, e) in &self.factors {
            acc = acc.add(&ln_rational(b, prec).mul_rational(e));
        }
        acc
    }

    /// Base-10 log as a certified ball. Reporting quantity only.
    pub fn log10_ball(&self, prec: u32) -> RealBall {
        let ln = self.ln_ball(prec + 8);
        let ln10 = ln_rational(&Rational::from_integer(BigInt::from(10)), prec + 8);
        ln.div_pos(&ln10)
    }

    /// Certified numeric enclosure of the value. Reporting quantity: verdicts
    /// go through [`PowerProduct::compare`].
    pub fn eval_ball(&self, prec: u32) -> RealBall {
        let mut acc = RealBall::from_rational(&Rational::one(), prec);
        for (b, e) in &self.factors {
            let n = e
                .numer()
                .to_i64()
                .expect("exponent numerator too large for numeric evaluation");
            let base_pow = rational_int_pow(b, n);
            let root = RealBall::from_rational(&base_pow, prec + 16);
            let factor = if e.denom().is_one() {
                root
            } else {
                let m = e
                    .denom()
                    .to_u32()
                    .expect("exponent denominator too large for numeric evaluation");
                root.nth_root_nonneg(m)
            };
            acc = acc.mul(&factor);
        }
        acc
    }

    /// Order against `other`, certified. Never wrong: either a proven
    /// ordering or an error naming the exhausted resource.
    pub fn compare(
        &self,
        other: &PowerProduct,
        precision: Precision,
        digit_budget: u64,
    ) -> Result<Ordering> {
        let ratio = self.ratio_map(other);
        if ratio.is_empty() {
            return Ok(Ordering::Equal);
        }
        let mut prec = precision.start;
        for _ in 0..3 {
            if let Some(sign) = ln_sign(&ratio, prec) {
                return Ok(sign);
            }
            if prec >= precision.max {
                break;
            }
            prec = (prec * 2).min(precision.max);
        }
        match exact_compare(&ratio, digit_budget) {
            ExactOutcome::Decided(ord) => Ok(ord),
            ExactOutcome::TooLarge { needed } => {
                while prec < precision.max {
                    prec = (prec * 2).min(precision.max);
                    if let Some(sign) = ln_sign(&ratio, prec) {
                        return Ok(sign);
                    }
                }
                Err(Error::DigitBudgetExceeded { needed, budget: digit_budget })
            }
        }
    }

    pub fn compare_rational(
        &self,
        q: &Rational,
        precision: Precision,
        digit_budget: u64,
    ) -> Result<Ordering> {
        assert!(q.is_positive(), "comparison against a non-positive rational");
        self.compare(&PowerProduct::from_rational(q.clone()), precision, digit_budget)
    }
}

/// base^n for integer n, exact. base must be positive when n < 0.
pub fn rational_int_pow(base: &Rational, n: i64) -> Rational {
    if n >= 0 {
        num_traits::pow(base.clone(), n as usize)
    } else {
        let inv = Rational::one() / base;
        num_traits::pow(inv, (-n) as usize)
    }
}

fn ln_sign(ratio: &BTreeMap<Rational, Rational>, prec: u32) -> Option<Ordering> {
    let mut acc = RealBall::zero(prec);
    for (b, e) in ratio {
        acc = acc.add(&ln_rational(b, prec).mul_rational(e));
    }
    match acc.certified_sign() {
        Some(Ordering::Greater) => Some(Ordering::Greater),
        Some(Ordering::Less) => Some(Ordering::Less),
        // An exact zero log would need radius zero, which transcendental
        // evaluation never produces for a nontrivial ratio.
        Some(Ordering::Equal) => Some(Ordering::Equal),
        None => None,
    }
}

enum ExactOutcome {
    Decided(Ordering),
    TooLarge { needed: u64 },
}

/// Compare `prod base^e` against 1 by raising to the lcm of exponent
/// denominators and splitting into two exact rational products.
fn exact_compare(ratio: &BTreeMap<Rational, Rational>, digit_budget: u64) -> ExactOutcome {
    let mut l = BigInt::one();
    for e in ratio.values() {
        l = l.lcm(e.denom());
    }
    let l_rat = Rational::from_integer(l);
    let mut powered: Vec<(&Rational, BigInt)> = Vec::new();
    let mut total_bits: u64 = 0;
    for (b, e) in ratio {
        let n = (e * &l_rat).to_integer();
        let n_abs = n.magnitude().to_u64().unwrap_or(u64::MAX);
        let base_bits = (b.numer().bits() + b.denom().bits()) as u64;
        total_bits = total_bits.saturating_add(n_abs.saturating_mul(base_bits));
        powered.push((b, n));
    }
    // bits * log10(2), rounded up: an upper estimate of the decimal digits
    // the cleared comparison would materialize.
    let needed = total_bits.saturating_mul(30103) / 100_000 + 1;
    if needed > digit_budget {
        return ExactOutcome::TooLarge { needed };
    }
    let mut lhs = Rational::one();
    let mut rhs = Rational::one();
    for (b, n) in powered {
        let n_abs = n
            .magnitude()
            .to_usize()
            .expect("exponent overflow after digit budget check");
        let p = num_traits::pow(b.clone(), n_abs);
        if n.is_negative() {
            rhs *= p;
        } else {
            lhs *= p;
        }
    }
    ExactOutcome::Decided(lhs.cmp(&rhs))
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (b, e) in &self.factors {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            let bs = if b.denom().is_one() {
                format!("{}", b.numer())
            } else {
                format!("({b})")
            };
            if e.is_one() {
                write!(f, "{bs}")?;
            } else if e.denom().is_one() && !e.is_negative() {
                write!(f, "{bs}^{}", e.numer())?;
            } else {
                write!(f, "{bs}^({e})")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::dyadic::Dyadic;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cmp_default(a: &PowerProduct, b: &PowerProduct) -> Ordering {
        a.compare(b, Precision::default(), super::super::DEFAULT_DIGIT_BUDGET)
            .unwrap()
    }

    #[test]
    fn fast_path_separates_clear_gaps() {
        // 2 * 7^(91/12) is strictly between 5.0e6 and 5.2e6.
        let p = PowerProduct::from_int(2).mul(&PowerProduct::from_int_pow(7, rat(91, 12)));
        assert_eq!(cmp_default(&p, &PowerProduct::from_int(5_200_000)), Ordering::Less);
        assert_eq!(cmp_default(&p, &PowerProduct::from_int(5_000_000)), Ordering::Greater);
    }

    #[test]
    fn exact_path_decides_equality() {
        // 4^(3/2) = 8: the log gap is exactly zero, so only the cleared
        // comparison can settle it.
        let a = PowerProduct::from_int_pow(4, rat(3, 2));
        let b = PowerProduct::from_int(8);
        assert_eq!(cmp_default(&a, &b), Ordering::Equal);
        // (27/8)^(2/3) = 9/4
        let c = PowerProduct::from_factor(rat(27, 8), rat(2, 3));
        let d = PowerProduct::from_rational(rat(9, 4));
        assert_eq!(cmp_default(&c, &d), Ordering::Equal);
    }

    #[test]
    fn exact_path_separates_tiny_gaps() {
        // 2^(1/2) vs 3^(1/3): cleared to 2^3 = 8 vs 3^2 = 9.
        let a = PowerProduct::from_int_pow(2, rat(1, 2));
        let b = PowerProduct::from_int_pow(3, rat(1, 3));
        assert_eq!(cmp_default(&a, &b), Ordering::Less);
        // Force the exact route with a precision cap too low for the fast
        // path to certify anything interesting.
        let tight = Precision { start: 8, max: 8 };
        let ord = a.compare(&b, tight, 1_000_000).unwrap();
        assert_eq!(ord, Ordering::Less);
    }

    #[test]
    fn antisymmetry() {
        let samples = [
            PowerProduct::from_int_pow(2, rat(1, 2)),
            PowerProduct::from_int_pow(3, rat(1, 3)),
            PowerProduct::from_factor(rat(5, 2), rat(7, 4)),
            PowerProduct::from_int(10),
            PowerProduct::from_int_pow(4, rat(3, 2)),
            PowerProduct::from_int(8),
        ];
        for a in &samples {
            for b in &samples {
                assert_eq!(cmp_default(a, b), cmp_default(b, a).reverse());
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        // 4^250000 = 2^500000 exactly; with the digit budget pinned below the
        // cleared size and a low precision cap, comparison must fail loudly
        // rather than guess.
        let a = PowerProduct::from_int_pow(4, rat(250_000, 1));
        let b = PowerProduct::from_int_pow(2, rat(500_000, 1));
        let tight = Precision { start: 64, max: 256 };
        match a.compare(&b, tight, 100) {
            Err(Error::DigitBudgetExceeded { needed, budget }) => {
                assert_eq!(budget, 100);
                assert!(needed > 100);
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
        // With the default budget the same comparison succeeds exactly.
        assert_eq!(cmp_default(&a, &b), Ordering::Equal);
    }

    #[test]
    fn fast_path_agrees_with_exact_path() {
        // Deterministic sweep over small products: whenever the 64-bit log
        // sign is certified it must match the cleared exact comparison.
        let bases = [rat(2, 1), rat(3, 1), rat(5, 2), rat(7, 3), rat(10, 1)];
        let exps = [rat(1, 1), rat(1, 2), rat(2, 3), rat(-1, 1), rat(5, 4), rat(-3, 2)];
        let mut checked = 0;
        for (i, b1) in bases.iter().enumerate() {
            for e1 in &exps {
                for (j, b2) in bases.iter().enumerate() {
                    for e2 in &exps {
                        if i == j {
                            continue;
                        }
                        let a = PowerProduct::from_factor(b1.clone(), e1.clone());
                        let b = PowerProduct::from_factor(b2.clone(), e2.clone());
                        let ratio = a.ratio_map(&b);
                        if let Some(fast) = ln_sign(&ratio, 64) {
                            if let ExactOutcome::Decided(exact) =
                                exact_compare(&ratio, 1_000_000)
                            {
                                assert_eq!(fast, exact, "{a} vs {b}");
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 100, "sweep too small: {checked}");
    }

    #[test]
    fn eval_ball_encloses_value() {
        let p = PowerProduct::from_int(2).mul(&PowerProduct::from_int_pow(7, rat(91, 12)));
        let v = p.eval_ball(128);
        let lo = RealBall::from_rational(&rat(5_000_000, 1), 128);
        let hi = RealBall::from_rational(&rat(5_200_000, 1), 128);
        assert_eq!(
            v.lower_bound().cmp_value(&lo.upper_bound()),
            Ordering::Greater
        );
        assert_eq!(v.upper_bound().cmp_value(&hi.lower_bound()), Ordering::Less);
    }

    #[test]
    fn log10_is_certified() {
        let p = PowerProduct::from_int(1000);
        let l = p.log10_ball(96);
        let three = RealBall::from_rational(&rat(3, 1), 96);
        let diff = l.sub(&three);
        assert!(diff.contains_zero());
        assert!(diff.rad().cmp_value(&Dyadic::power_of_two(-80)) == Ordering::Less);
        // log10(1/10) = -1
        let q = PowerProduct::from_rational(rat(1, 10));
        let l = q.log10_ball(96);
        let neg_one = RealBall::from_rational(&rat(-1, 1), 96);
        assert!(l.sub(&neg_one).contains_zero());
    }

    #[test]
    fn pow_and_mul_compose() {
        // (2^(1/2))^4 = 4
        let p = PowerProduct::from_int_pow(2, rat(1, 2)).pow(&rat(4, 1));
        assert_eq!(cmp_default(&p, &PowerProduct::from_int(4)), Ordering::Equal);
        let q = p.mul(&p.recip());
        assert_eq!(cmp_default(&q, &PowerProduct::one()), Ordering::Equal);
    }
}
