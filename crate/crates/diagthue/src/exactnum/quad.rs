//! Exact arithmetic in a quadratic field.
//!
//! A [`QuadElem`] is `a + b*sqrt(d)` with rational `a, b` and a squarefree
//! integer `d`. `d = 0` means the element is plain rational (and then `b` is
//! folded to zero). Elements of distinct nonzero `d` cannot be combined;
//! mixing is a caller bug and panics. `d < 0` makes the element complex with
//! real part `a` and imaginary part `b*sqrt(|d|)`.
//!
//! Sign queries are exact: comparing `a` with `-b*sqrt(d)` by squaring after
//! a sign triage never touches approximate arithmetic.

use super::ball::{sqrt_rational, Ball, RealBall};
use super::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Strip square factors: returns (squarefree part, square root of cofactor).
/// Trial division up to a bound, then one perfect-square check on what is
/// left; inputs here are small user-provided discriminant parameters.
fn squarefree_decompose(n: i64) -> (i64, i64) {
    assert!(n != 0);
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut square_root: u64 = 1;
    let mut p: u64 = 2;
    while p * p <= m && p < 1_000_000 {
        while m % (p * p) == 0 {
            m /= p * p;
            square_root *= p;
        }
        p += 1;
    }
    // Whatever remains may itself be a perfect square (large prime squared).
    let r = (m as f64).sqrt() as u64;
    for cand in r.saturating_sub(1)..=r + 1 {
        if cand * cand == m {
            m = 1;
            square_root *= cand;
            break;
        }
    }
    (sign * m as i64, square_root as i64)
}

/// `a + b*sqrt(d)` with `d` squarefree, `d = 0` iff the element is rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadElem {
    a: Rational,
    b: Rational,
    d: i64,
}

impl QuadElem {
    /// Build from raw parts, normalizing `d` to squarefree form and folding
    /// rational elements onto `d = 0`.
    pub fn new(a: Rational, b: Rational, d: i64) -> Self {
        if d == 0 || b.is_zero() {
            return QuadElem { a, b: Rational::zero(), d: 0 };
        }
        let (sf, root) = squarefree_decompose(d);
        if sf == 1 {
            // sqrt(d) is the integer `root`: the element is rational.
            let a = a + &b * Rational::from_integer(BigInt::from(root));
            return QuadElem { a, b: Rational::zero(), d: 0 };
        }
        let b = b * Rational::from_integer(BigInt::from(root));
        QuadElem { a, b, d: sf }
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadElem { a, b: Rational::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        QuadElem::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        QuadElem::from_int(0)
    }

    pub fn one() -> Self {
        QuadElem::from_int(1)
    }

    /// sqrt(d) itself as an element.
    pub fn sqrt_d(d: i64) -> Self {
        QuadElem::new(Rational::zero(), Rational::one(), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    /// True when the element lies outside the real line.
    pub fn is_complex(&self) -> bool {
        self.d < 0 && !self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.d == 0 { Some(&self.a) } else { None }
    }

    /// Common field for a binary operation. `d = 0` embeds everywhere;
    /// distinct nonzero `d` is a programming error upstream.
    fn join_field(&self, other: &QuadElem) -> i64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) if d1 == d2 => d1,
            (d1, d2) => panic!("mixed quadratic fields: sqrt({d1}) and sqrt({d2})"),
        }
    }

    pub fn add(&self, other: &QuadElem) -> Self {
        let d = self.join_field(other);
        QuadElem::new(&self.a + &other.a, &self.b + &other.b, d)
    }

    pub fn sub(&self, other: &QuadElem) -> Self {
        let d = self.join_field(other);
        QuadElem::new(&self.a - &other.a, &self.b - &other.b, d)
    }

    pub fn neg(&self) -> Self {
        QuadElem { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    pub fn mul(&self, other: &QuadElem) -> Self {
        let d = self.join_field(other);
        let dd = Rational::from_integer(BigInt::from(d));
        let a = &self.a * &other.a + (&self.b * &other.b) * &dd;
        let b = &self.a * &other.b + &self.b * &other.a;
        QuadElem::new(a, b, d)
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        QuadElem::new(&self.a * q, &self.b * q, self.d)
    }

    /// Galois conjugate `a - b*sqrt(d)`. For `d < 0` this is the complex
    /// conjugate.
    pub fn conjugate(&self) -> Self {
        QuadElem { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm `a^2 - d*b^2`, always rational.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(BigInt::from(self.d)) * &self.b * &self.b
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        debug_assert!(!n.is_zero(), "nonzero element with zero norm");
        Some(self.conjugate().mul_rational(&(Rational::one() / n)))
    }

    pub fn div(&self, other: &QuadElem) -> Option<Self> {
        other.inverse().map(|inv| self.mul(&inv))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = QuadElem::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact sign as a real number. Panics on complex input (`d < 0` with
    /// `b != 0`): such elements have no real sign.
    pub fn sign_real(&self) -> Ordering {
        assert!(!self.is_complex(), "sign of a non-real element");
        if self.b.is_zero() {
            return rational_sign(&self.a);
        }
        // d > 0 here. Compare a with -b*sqrt(d) exactly by sign triage,
        // then squaring.
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            _ => {
                // Opposite signs: sign(a + b sqrt(d)) = sign(a) * sign(a^2 - d b^2).
                let n = self.norm();
                match (sa, rational_sign(&n)) {
                    (s, Ordering::Greater) => s,
                    (s, Ordering::Less) => s.reverse(),
                    (_, Ordering::Equal) => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_real(&self) -> bool {
        !self.is_complex()
    }

    /// Rational real part (the imaginary case: `a` alone).
    pub fn real_coeff(&self) -> &Rational {
        if self.d < 0 { &self.a } else { panic!("real_coeff on a real element") }
    }

    /// Coefficient of `i*sqrt(|d|)` for complex elements.
    pub fn imag_coeff(&self) -> &Rational {
        if self.d < 0 { &self.b } else { panic!("imag_coeff on a real element") }
    }

    /// Certified enclosure as a complex ball.
    pub fn embed(&self, prec: u32) -> Ball {
        if self.d >= 0 {
            let re = self.embed_real(prec);
            Ball::from_real(&re)
        } else {
            let re = RealBall::from_rational(&self.a, prec);
            let root = sqrt_rational(&Rational::from_integer(BigInt::from(-self.d)), prec);
            let im = RealBall::from_rational(&self.b, prec).mul(&root);
            Ball::from_parts(&re, &im)
        }
    }

    /// Certified real enclosure; requires a real element.
    pub fn embed_real(&self, prec: u32) -> RealBall {
        assert!(!self.is_complex(), "real embedding of a complex element");
        if self.b.is_zero() {
            return RealBall::from_rational(&self.a, prec);
        }
        let root = sqrt_rational(&Rational::from_integer(BigInt::from(self.d)), prec);
        RealBall::from_rational(&self.a, prec)
            .add(&RealBall::from_rational(&self.b, prec).mul(&root))
    }

    /// |self|^2 as an exact rational: a^2 - d b^2 for d < 0 equals
    /// a^2 + |d| b^2; for real elements the square of the element is not
    /// rational in general, so this is only defined for complex `d`.
    pub fn abs_square_complex(&self) -> Rational {
        assert!(self.d < 0, "abs_square_complex requires d < 0");
        self.norm()
    }
}

pub fn rational_sign(q: &Rational) -> Ordering {
    if q.is_zero() {
        Ordering::Equal
    } else if q.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            if self.b.is_one() {
                return write!(f, "sqrt({})", self.d);
            }
            return write!(f, "{}*sqrt({})", self.b, self.d);
        }
        if self.b.is_positive() {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        } else {
            write!(f, "{} - {}*sqrt({})", self.a, -self.b.clone(), self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn q(a: (i64, i64), b: (i64, i64), d: i64) -> QuadElem {
        QuadElem::new(rat(a.0, a.1), rat(b.0, b.1), d)
    }

    #[test]
    fn squarefree_normalization() {
        // sqrt(8) = 2 sqrt(2)
        let e = q((0, 1), (1, 1), 8);
        assert_eq!(e.d(), 2);
        assert_eq!(e.b(), &rat(2, 1));
        // sqrt(9) = 3 folds to rational.
        let e = q((1, 1), (1, 1), 9);
        assert_eq!(e.d(), 0);
        assert_eq!(e.a(), &rat(4, 1));
        // sqrt(-12) = 2 sqrt(-3)
        let e = q((0, 1), (1, 1), -12);
        assert_eq!(e.d(), -3);
        assert_eq!(e.b(), &rat(2, 1));
        // Large prime squared: 1002001 = 7^2 * 11^2 * 13^2
        let e = q((0, 1), (1, 1), 1_002_001);
        assert_eq!(e.d(), 0);
        assert_eq!(e.a(), &rat(1001, 1));
    }

    #[test]
    fn field_operations() {
        let x = q((1, 2), (3, 1), 5);
        let y = q((2, 1), (-1, 3), 5);
        // (1/2 + 3 sqrt5)(2 - (1/3) sqrt5) = 1 - 5 + (6 - 1/6) sqrt5
        let p = x.mul(&y);
        assert_eq!(p.a(), &rat(-4, 1));
        assert_eq!(p.b(), &rat(35, 6));
        // x * x^{-1} = 1
        let inv = x.inverse().unwrap();
        assert_eq!(x.mul(&inv), QuadElem::one());
        // Norm is multiplicative.
        assert_eq!(p.norm(), x.norm() * y.norm());
        // Rational elements combine with any field.
        let r = QuadElem::from_int(7);
        assert_eq!(r.mul(&x).a(), &rat(7, 2));
        assert_eq!(r.mul(&x).d(), 5);
    }

    #[test]
    #[should_panic(expected = "mixed quadratic fields")]
    fn mixing_fields_panics() {
        let x = q((0, 1), (1, 1), 2);
        let y = q((0, 1), (1, 1), 3);
        let _ = x.add(&y);
    }

    #[test]
    fn exact_sign() {
        // 3 - 2 sqrt(2) > 0 since 9 > 8.
        assert_eq!(q((3, 1), (-2, 1), 2).sign_real(), Ordering::Greater);
        // 2 - 3 sqrt(2) < 0.
        assert_eq!(q((2, 1), (-3, 1), 2).sign_real(), Ordering::Less);
        // -3 + 2 sqrt(2) < 0.
        assert_eq!(q((-3, 1), (2, 1), 2).sign_real(), Ordering::Less);
        // 1 + sqrt(5) > 0 (both positive).
        assert_eq!(q((1, 1), (1, 1), 5).sign_real(), Ordering::Greater);
        // Zero.
        assert_eq!(QuadElem::zero().sign_real(), Ordering::Equal);
        // 7 - sqrt(49) would fold to rational zero at construction.
        let z = q((7, 1), (-1, 1), 49);
        assert!(z.is_zero());
    }

    #[test]
    fn conjugate_and_complex_parts() {
        let z = q((1, 2), (3, 4), -7);
        assert!(z.is_complex());
        assert_eq!(z.conjugate().imag_coeff(), &rat(-3, 4));
        // |z|^2 = (1/2)^2 + 7 (3/4)^2 = 1/4 + 63/16 = 67/16
        assert_eq!(z.abs_square_complex(), rat(67, 16));
        // z * conj(z) = |z|^2 as a rational element.
        let p = z.mul(&z.conjugate());
        assert_eq!(p.as_rational().unwrap(), &rat(67, 16));
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let x = q((1, 1), (1, 1), 2);
        let mut acc = QuadElem::one();
        for _ in 0..7 {
            acc = acc.mul(&x);
        }
        assert_eq!(x.pow(7), acc);
        // (1 + sqrt2)^2 = 3 + 2 sqrt2
        let s = x.pow(2);
        assert_eq!(s.a(), &rat(3, 1));
        assert_eq!(s.b(), &rat(2, 1));
    }

    #[test]
    fn embedding_encloses_value() {
        use super::super::dyadic::Dyadic;
        // 1 + sqrt(2) ~ 2.41421356...
        let x = q((1, 1), (1, 1), 2);
        let b = x.embed_real(100);
        let approx = RealBall::from_rational(&rat(2414213562373095, 1_000_000_000_000_000), 100);
        assert!(b.sub(&approx).rad().cmp_value(&Dyadic::power_of_two(-40)) == Ordering::Less
            || b.sub(&approx).contains_zero()
            || b.sub(&approx).abs_ub().cmp_value(&Dyadic::power_of_two(-48)) == Ordering::Less);
        // Complex embedding of i = sqrt(-1).
        let i = QuadElem::sqrt_d(-1);
        let e = i.embed(64);
        assert!(e.real_part().contains_zero());
        assert!(e
            .imag_part()
            .sub(&RealBall::from_rational(&rat(1, 1), 64))
            .contains_zero());
    }

    #[test]
    fn display_forms() {
        assert_eq!(q((1, 2), (0, 1), 5).to_string(), "1/2");
        assert_eq!(q((0, 1), (1, 1), 5).to_string(), "sqrt(5)");
        assert_eq!(q((1, 1), (-2, 3), 5).to_string(), "1 - 2/3*sqrt(5)");
        assert_eq!(q((3, 1), (1, 1), -1).to_string(), "3 + 1*sqrt(-1)");
    }
}
