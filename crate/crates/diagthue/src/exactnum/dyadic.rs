//! Dyadic rationals `mant * 2^exp` with exact add/mul and directed rounding.
//!
//! These back the certified ball kernel: dyadics are closed under addition,
//! subtraction and multiplication, so those stay exact; only precision
//! trimming and division introduce error, and both report an upper bound on
//! the error they introduced.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

/// `mant * 2^exp`, normalized so `mant` is odd or zero (zero has `exp = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.mant.trailing_zeros() {
            if tz > 0 {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::from(1), exp: 0 }
    }

    /// `2^k`.
    pub fn power_of_two(k: i64) -> Self {
        Dyadic { mant: BigInt::from(1), exp: k }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Dyadic::new(n.clone(), 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    /// Significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Smallest `k` with `|self| < 2^k`; `None` for zero.
    pub fn mag_ub_log2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64)
        }
    }

    /// Largest `k` with `2^k <= |self|`; `None` for zero.
    pub fn mag_lb_log2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64 - 1)
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Exact sum. The caller is responsible for trimming afterwards; aligning
    /// exponents can grow the mantissa by the exponent gap.
    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - exp) as u64;
        let b = &other.mant << (other.exp - exp) as u64;
        Dyadic::new(a + b, exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    /// Exact product.
    pub fn mul(&self, other: &Dyadic) -> Self {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: &self.mant * &other.mant, exp: self.exp + other.exp }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        Dyadic::new(&self.mant * k, self.exp)
    }

    /// `self * 2^k`, exact.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic { mant: self.mant.clone(), exp: self.exp + k }
        }
    }

    pub fn cmp_value(&self, other: &Dyadic) -> Ordering {
        // Cheap sign triage before an exact subtraction.
        match (self.mant.sign(), other.mant.sign()) {
            (num_bigint::Sign::Minus, num_bigint::Sign::NoSign | num_bigint::Sign::Plus) => {
                if other.is_zero() && self.is_zero() {
                    Ordering::Equal
                } else {
                    Ordering::Less
                }
            }
            (num_bigint::Sign::NoSign | num_bigint::Sign::Plus, num_bigint::Sign::Minus) => {
                Ordering::Greater
            }
            _ => {
                let d = self.sub(other);
                if d.mant.is_zero() {
                    Ordering::Equal
                } else if d.mant.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    /// Keep at most `prec` mantissa bits, truncating toward zero.
    /// Returns `(approx, err)` with `|self - approx| <= err` and
    /// `|approx| <= |self|`.
    pub fn trim(&self, prec: u32) -> (Dyadic, Dyadic) {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return (self.clone(), Dyadic::zero());
        }
        let k = bits - prec as u64;
        // Truncate toward zero so magnitudes never grow.
        let (q, r) = {
            let m = self.mant.abs() >> k;
            let m = if self.mant.is_negative() { -m } else { m };
            let back = &m << k;
            (m, self.mant.clone() - back)
        };
        let approx = Dyadic::new(q, self.exp + k as i64);
        let err = if r.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic::power_of_two(self.exp + k as i64)
        };
        (approx, err)
    }

    /// Round away from zero to at most `prec` mantissa bits: `|result| >= |self|`
    /// with the same sign. Used for radius bookkeeping, which must only grow.
    pub fn round_up_mag(&self, prec: u32) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = bits - prec as u64;
        let m = self.mant.abs();
        let shifted = &m >> k;
        let exact = (&shifted << k) == m;
        let q = if exact { shifted } else { shifted + 1u8 };
        let q = if self.mant.is_negative() { -q } else { q };
        Dyadic::new(q, self.exp + k as i64)
    }

    /// `self / den` truncated toward zero to about `prec` significant bits.
    /// Returns `(approx, err)` with `|self/den - approx| <= err`.
    /// `den` must be nonzero.
    pub fn div_int(&self, den: &BigInt, prec: u32) -> (Dyadic, Dyadic) {
        assert!(!den.is_zero(), "division by zero");
        if self.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        // Scale the numerator so the quotient carries ~prec significant bits.
        let num_bits = self.mant.bits() as i64;
        let den_bits = den.bits() as i64;
        let s = (prec as i64 + den_bits - num_bits + 2).max(0) as u64;
        let scaled = &self.mant << s;
        let (q, r) = num_integer::Integer::div_rem(&scaled, den);
        // div_rem truncates toward zero, so |q| <= |scaled/den|.
        let exp = self.exp - s as i64;
        let approx = Dyadic::new(q, exp);
        let err = if r.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic::power_of_two(exp)
        };
        (approx, err)
    }

    /// Floor of the square root: greatest dyadic `g` representable with
    /// ~`prec` bits such that `g <= sqrt(self)`. Requires `self >= 0`.
    pub fn sqrt_floor(&self, prec: u32) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Write self = M * 2^(e - s) with e - s even and M about 2*prec bits.
        let bits = self.mant.bits() as i64;
        let mut s = (2 * prec as i64 + 2 - bits).max(0);
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let m = &self.mant << s as u64;
        let root = num_integer::Roots::sqrt(&m);
        Dyadic::new(root, (self.exp - s) / 2)
    }

    /// Ceiling counterpart of [`Dyadic::sqrt_floor`].
    pub fn sqrt_ceil(&self, prec: u32) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let bits = self.mant.bits() as i64;
        let mut s = (2 * prec as i64 + 2 - bits).max(0);
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let m = &self.mant << s as u64;
        let root = num_integer::Roots::sqrt(&m);
        let exact = &root * &root == m;
        let root = if exact { root } else { root + 1u8 };
        Dyadic::new(root, (self.exp - s) / 2)
    }

    /// Floor of the n-th root (n >= 1), ~`prec` significant bits. `self >= 0`.
    pub fn nth_root_floor(&self, n: u32, prec: u32) -> Dyadic {
        assert!(n >= 1);
        assert!(!self.is_negative(), "nth root of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let n64 = n as i64;
        let bits = self.mant.bits() as i64;
        let mut s = (n64 * (prec as i64 + 2) - bits).max(0);
        let rem = (self.exp - s).rem_euclid(n64);
        if rem != 0 {
            s += rem; // keeps exp - s divisible by n, s grows so still >= 0
        }
        let m = &self.mant << s as u64;
        let root = num_integer::Roots::nth_root(&m, n);
        Dyadic::new(root, (self.exp - s) / n64)
    }

    /// Ceiling counterpart of [`Dyadic::nth_root_floor`].
    pub fn nth_root_ceil(&self, n: u32, prec: u32) -> Dyadic {
        assert!(n >= 1);
        assert!(!self.is_negative(), "nth root of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let n64 = n as i64;
        let bits = self.mant.bits() as i64;
        let mut s = (n64 * (prec as i64 + 2) - bits).max(0);
        let rem = (self.exp - s).rem_euclid(n64);
        if rem != 0 {
            s += rem;
        }
        let m = &self.mant << s as u64;
        let root = num_integer::Roots::nth_root(&m, n);
        let exact = num_traits::Pow::pow(&root, n) == m;
        let root = if exact { root } else { root + 1u8 };
        Dyadic::new(root, (self.exp - s) / n64)
    }

    /// Decimal rendering with `sig` significant digits, suitable for reports.
    /// Display only; never used in comparisons.
    pub fn to_decimal(&self, sig: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.mant.is_negative();
        let m = self.mant.abs();
        // value = m * 2^exp; produce scientific notation.
        // dec_exp ~ log10(value)
        let log2 = m.bits() as i64 - 1 + self.exp;
        let dec_exp = ((log2 as f64) * std::f64::consts::LOG10_2).floor() as i64;
        // digits = round(value / 10^(dec_exp - sig + 1))
        let shift = dec_exp - sig as i64 + 1;
        let ten = BigInt::from(10);
        let mut digits = if self.exp >= 0 {
            let v = &m << self.exp as u64;
            if shift >= 0 {
                v / num_traits::Pow::pow(&ten, shift as u32)
            } else {
                v * num_traits::Pow::pow(&ten, (-shift) as u32)
            }
        } else {
            // m * 10^(-shift) / 2^(-exp) when shift <= 0; otherwise divide twice.
            if shift <= 0 {
                (m.clone() * num_traits::Pow::pow(&ten, (-shift) as u32)) >> (-self.exp) as u64
            } else {
                (m.clone() / num_traits::Pow::pow(&ten, shift as u32)) >> (-self.exp) as u64
            }
        };
        let mut dec_exp = dec_exp;
        // Renormalize digit count (the log10 estimate can be off by one).
        let target_lo = num_traits::Pow::pow(&ten, (sig.max(1) - 1) as u32);
        let target_hi = &target_lo * &ten;
        while digits >= target_hi {
            digits /= &ten;
            dec_exp += 1;
        }
        while digits < target_lo && !digits.is_zero() {
            digits *= &ten;
            dec_exp -= 1;
        }
        let s = digits.to_string();
        let (first, rest) = s.split_at(1);
        let body = if rest.is_empty() {
            first.to_string()
        } else {
            format!("{first}.{rest}")
        };
        let sign = if neg { "-" } else { "" };
        format!("{sign}{body}e{dec_exp}")
    }
}
