//! Certified midpoint-radius arithmetic on dyadic numbers.
//!
//! [`RealBall`] is the workhorse: a real interval `mid +/- rad` whose radius
//! only ever rounds outward. [`Ball`] is the public complex variant (center
//! re/im plus one radius) used for embeddings, lemma margins, and reports.
//!
//! The transcendental kernels follow one pattern: an exact rational reduction
//! step, then a series whose truncation error is bounded by an explicit term,
//! evaluated in ball arithmetic so rounding error is carried automatically.
//! pi uses Machin's formula 16 atan(1/5) - 4 atan(1/239); sin/cos reduce the
//! angle to [0, pi/4] exactly (the input is a rational multiple of pi) before
//! the alternating Taylor series; ln reduces to atanh on [0, 1/3].

use super::dyadic::Dyadic;
use super::Rational;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

/// Extra working bits so user-visible radii land well under `2^-prec`.
const GUARD: u32 = 16;
/// Radii are rounded up to this many mantissa bits.
const RAD_BITS: u32 = 32;

/// Real interval `mid +/- rad`, `rad >= 0`.
#[derive(Clone, Debug)]
pub struct RealBall {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl RealBall {
    pub fn exact(mid: Dyadic, prec: u32) -> Self {
        RealBall { mid, rad: Dyadic::zero(), prec }
    }

    pub fn new(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        assert!(!rad.is_negative());
        RealBall { mid, rad, prec }
    }

    pub fn zero(prec: u32) -> Self {
        RealBall::exact(Dyadic::zero(), prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let num = Dyadic::from_bigint(q.numer());
        let (mid, err) = num.div_int(q.denom(), prec + GUARD);
        RealBall::new(mid, err, prec)
    }

    pub fn from_endpoints(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo.cmp_value(&hi) != Ordering::Greater);
        // mid = (lo+hi)/2, rad = (hi-lo)/2; halving a dyadic is exact.
        let mid = lo.add(&hi).shift(-1);
        let rad = hi.sub(&lo).shift(-1);
        let (mid, trim_err) = mid.trim(prec + GUARD);
        let rad = rad.add(&trim_err).round_up_mag(RAD_BITS);
        RealBall::new(mid, rad, prec)
    }

    pub fn lower_bound(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper_bound(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    /// `Some(sign)` when the interval excludes zero (or is exactly zero).
    pub fn certified_sign(&self) -> Option<Ordering> {
        if self.rad.is_zero() {
            return Some(self.mid.cmp_value(&Dyadic::zero()));
        }
        if self.lower_bound().is_positive() {
            Some(Ordering::Greater)
        } else if self.upper_bound().is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.certified_sign().map_or(true, |s| s == Ordering::Equal)
    }

    fn settle(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        let (mid, trim_err) = mid.trim(prec + GUARD);
        let rad = rad.add(&trim_err);
        let rad = rad.round_up_mag(RAD_BITS);
        RealBall::new(mid, rad, prec)
    }

    pub fn add(&self, other: &RealBall) -> Self {
        let prec = self.prec.max(other.prec);
        RealBall::settle(self.mid.add(&other.mid), self.rad.add(&other.rad), prec)
    }

    pub fn sub(&self, other: &RealBall) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RealBall { mid: self.mid.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn mul(&self, other: &RealBall) -> Self {
        let prec = self.prec.max(other.prec);
        let mid = self.mid.mul(&other.mid);
        // |x*y - mx*my| <= |mx|*ry + |my|*rx + rx*ry
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        RealBall::settle(mid, rad, prec)
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        let num = Dyadic::from_bigint(q.numer());
        let exact_mid = self.mid.mul(&num);
        let (mid, mid_err) = exact_mid.div_int(q.denom(), self.prec + GUARD);
        // rad * |q|, rounded outward by scaling up the integer division.
        let rad_num = self.rad.mul(&num.abs());
        let (rad_q, rad_err) = rad_num.div_int(q.denom(), RAD_BITS);
        let rad = rad_q.add(&rad_err).add(&mid_err);
        RealBall::settle(mid, rad, self.prec)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = RealBall::exact(Dyadic::one(), self.prec);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Interval square root. The interval must not extend below zero by more
    /// than its radius; any negative part is clamped to zero (callers pass
    /// mathematically nonnegative quantities).
    pub fn sqrt_nonneg(&self) -> Self {
        let prec = self.prec;
        let lo = {
            let l = self.lower_bound();
            if l.is_negative() { Dyadic::zero() } else { l }
        };
        let hi = self.upper_bound();
        assert!(
            !hi.is_negative(),
            "sqrt of an interval that is certainly negative"
        );
        let slo = lo.sqrt_floor(prec + GUARD);
        let shi = hi.sqrt_ceil(prec + GUARD);
        RealBall::from_endpoints(slo, shi, prec)
    }

    /// Interval n-th root, same clamping convention as [`RealBall::sqrt_nonneg`].
    pub fn nth_root_nonneg(&self, n: u32) -> Self {
        let prec = self.prec;
        let lo = {
            let l = self.lower_bound();
            if l.is_negative() { Dyadic::zero() } else { l }
        };
        let hi = self.upper_bound();
        assert!(!hi.is_negative(), "root of an interval that is certainly negative");
        let rlo = lo.nth_root_floor(n, prec + GUARD);
        let rhi = hi.nth_root_ceil(n, prec + GUARD);
        RealBall::from_endpoints(rlo, rhi, prec)
    }

    /// Upper bound on |self| as a dyadic.
    pub fn abs_ub(&self) -> Dyadic {
        let lo = self.lower_bound().abs();
        let hi = self.upper_bound().abs();
        if lo.cmp_value(&hi) == Ordering::Greater { lo } else { hi }
    }

    /// Divide by an interval that is certainly positive. Monotonicity in the
    /// denominator gives the endpoints directly; each reciprocal is bracketed
    /// by a directed integer division and the endpoint products are exact.
    pub fn div_pos(&self, den: &RealBall) -> Self {
        let prec = self.prec.max(den.prec);
        let dlo = den.lower_bound();
        let dhi = den.upper_bound();
        assert!(dlo.is_positive(), "div_pos by an interval not proven positive");
        let (rlo_hi, _) = recip_bounds(&dhi, prec + GUARD);
        let (_, rhi_lo) = recip_bounds(&dlo, prec + GUARD);
        let nlo = self.lower_bound();
        let nhi = self.upper_bound();
        // den > 0, so x/d is increasing in x and decreasing in d.
        let lo = if nlo.is_negative() { nlo.mul(&rhi_lo) } else { nlo.mul(&rlo_hi) };
        let hi = if nhi.is_negative() { nhi.mul(&rlo_hi) } else { nhi.mul(&rhi_lo) };
        RealBall::from_endpoints(lo, hi, prec)
    }
}

/// `(lower, upper)` dyadic brackets of `1/x` for positive `x`.
fn recip_bounds(x: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    debug_assert!(x.is_positive());
    // 1/(m * 2^e) = (1/m) * 2^(-e); truncation toward zero under-shoots a
    // positive quotient, so approx is the lower bracket.
    let (approx, err) = Dyadic::one().div_int(x.mant(), prec);
    let lo = approx.shift(-x.exp());
    let hi = approx.add(&err).shift(-x.exp());
    (lo, hi)
}

/// sqrt of a nonnegative rational as a certified ball. Exact (radius zero)
/// when the value is a perfect square of a dyadic.
pub fn sqrt_rational(q: &Rational, prec: u32) -> RealBall {
    assert!(!q.is_negative(), "sqrt_rational of negative input");
    // Perfect-square fast path keeps e.g. sqrt(1), sqrt(9/4) exact.
    let ns = num_integer::Roots::sqrt(q.numer());
    let ds = num_integer::Roots::sqrt(q.denom());
    if &(&ns * &ns) == q.numer() && &(&ds * &ds) == q.denom() {
        return RealBall::from_rational(&Rational::new(ns, ds), prec);
    }
    RealBall::from_rational(q, prec + GUARD).sqrt_nonneg()
}

/// atan(1/n) for integer n >= 2 by the alternating Taylor series, as exact
/// directed arithmetic on scaled integers. Error < (terms_used + 2) ulp.
fn atan_inv(n: i64, prec: u32) -> RealBall {
    let work = prec + GUARD;
    let one = BigInt::from(1) << work;
    let n2 = BigInt::from(n) * BigInt::from(n);
    let mut term_denom = BigInt::from(n);
    let mut k: i64 = 0;
    let mut sum = BigInt::zero();
    let mut ulps: u64 = 1;
    loop {
        let t = &one / (&term_denom * BigInt::from(2 * k + 1));
        if t.is_zero() {
            break;
        }
        if k % 2 == 0 {
            sum += &t;
        } else {
            sum -= &t;
        }
        ulps += 1;
        term_denom *= &n2;
        k += 1;
    }
    // Each floor-division loses < 1 ulp; the alternating tail is < 1 ulp.
    RealBall::new(
        Dyadic::new(sum, -(work as i64)),
        Dyadic::new(BigInt::from(ulps + 1), -(work as i64)),
        prec,
    )
}

static PI_CACHE: LazyLock<Mutex<HashMap<u32, (Dyadic, Dyadic)>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// pi as a certified ball: 16 atan(1/5) - 4 atan(1/239).
pub fn pi(prec: u32) -> RealBall {
    if let Some((m, r)) = PI_CACHE.lock().unwrap().get(&prec) {
        return RealBall::new(m.clone(), r.clone(), prec);
    }
    let a = atan_inv(5, prec + 8);
    let b = atan_inv(239, prec + 8);
    let val = RealBall::settle(
        a.mid().mul_i64(16).sub(&b.mid().mul_i64(4)),
        a.rad().mul_i64(16).add(&b.rad().mul_i64(4)),
        prec,
    );
    PI_CACHE
        .lock()
        .unwrap()
        .insert(prec, (val.mid().clone(), val.rad().clone()));
    val
}

/// cos and sin of `t` where `t` is a ball known to lie in `[0, pi/4 + eps]`.
/// Alternating series; with t <= 0.79 the terms decrease from the start, so
/// the truncation error is bounded by the first omitted term.
fn cos_sin_small(t: &RealBall, prec: u32) -> (RealBall, RealBall) {
    let t2 = t.square();
    let threshold = Dyadic::power_of_two(-(prec as i64) - 8);
    let mut cos = RealBall::exact(Dyadic::one(), prec);
    let mut sin = t.clone();
    // cos term: (-1)^k t^(2k) / (2k)!;  sin term: (-1)^k t^(2k+1) / (2k+1)!
    let mut cos_term = RealBall::exact(Dyadic::one(), prec);
    let mut sin_term = t.clone();
    let mut k: i64 = 1;
    loop {
        cos_term = cos_term
            .mul(&t2)
            .mul_rational(&Rational::new(BigInt::from(-1), BigInt::from((2 * k - 1) * (2 * k))));
        sin_term = sin_term
            .mul(&t2)
            .mul_rational(&Rational::new(BigInt::from(-1), BigInt::from((2 * k) * (2 * k + 1))));
        cos = cos.add(&cos_term);
        sin = sin.add(&sin_term);
        let cb = cos_term.abs_ub();
        let sb = sin_term.abs_ub();
        if cb.cmp_value(&threshold) == Ordering::Less && sb.cmp_value(&threshold) == Ordering::Less
        {
            // Tail of an alternating series with decreasing terms: bounded by
            // the next term, itself below the current one.
            let tail = cb.add(&sb).add(&threshold);
            cos = RealBall::new(cos.mid().clone(), cos.rad().add(&tail).round_up_mag(RAD_BITS), prec);
            sin = RealBall::new(sin.mid().clone(), sin.rad().add(&tail).round_up_mag(RAD_BITS), prec);
            return (cos, sin);
        }
        k += 1;
        assert!(k < 100_000, "cos/sin series failed to converge");
    }
}

/// `(cos(pi q), sin(pi q))` for rational `q`, fully certified. The reduction
/// to the first octant is exact because `q` is exact.
pub fn cos_sin_pi(q: &Rational, prec: u32) -> (RealBall, RealBall) {
    // Reduce q into [0, 2).
    let two = Rational::from_integer(BigInt::from(2));
    let mut q = q - (q / &two).floor() * &two;
    debug_assert!(!q.is_negative());
    // Peel symmetries down to [0, 1/4].
    let mut neg_cos = false;
    let mut neg_sin = false;
    let mut swapped = false;
    let one = Rational::from_integer(BigInt::from(1));
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let quarter = Rational::new(BigInt::from(1), BigInt::from(4));
    if q >= one {
        // angle - pi: both flip
        q -= &one;
        neg_cos = !neg_cos;
        neg_sin = !neg_sin;
    }
    if q > half {
        // pi - angle: cos flips
        q = &one - &q;
        neg_cos = !neg_cos;
    }
    if q > quarter {
        // pi/2 - angle: co-function swap
        q = &half - &q;
        swapped = true;
    }
    let t = pi(prec + GUARD).mul_rational(&q);
    let (c, s) = cos_sin_small(&t, prec);
    let (mut c, mut s) = if swapped { (s, c) } else { (c, s) };
    if neg_cos {
        c = c.neg();
    }
    if neg_sin {
        s = s.neg();
    }
    (c, s)
}

static LN2_CACHE: LazyLock<Mutex<HashMap<u32, (Dyadic, Dyadic)>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// atanh(z) = sum z^(2k+1)/(2k+1) for exact rational z with |z| <= 1/3.
/// Positive-term tail bounded geometrically: tail <= next_term * 9/8.
fn atanh_small(z: &Rational, prec: u32) -> RealBall {
    let z_ball = RealBall::from_rational(z, prec + GUARD);
    let z2 = z_ball.square();
    let threshold = Dyadic::power_of_two(-(prec as i64) - 8);
    let mut sum = z_ball.clone();
    let mut pow = z_ball.clone();
    let mut k: i64 = 1;
    loop {
        pow = pow.mul(&z2);
        let term = pow.mul_rational(&Rational::new(BigInt::from(1), BigInt::from(2 * k + 1)));
        sum = sum.add(&term);
        if term.abs_ub().cmp_value(&threshold) == Ordering::Less {
            // |z| <= 1/3 so the tail is below term * (1/9)/(1-1/9) * safety.
            let tail = term.abs_ub().add(&threshold).mul_i64(2);
            return RealBall::new(
                sum.mid().clone(),
                sum.rad().add(&tail).round_up_mag(RAD_BITS),
                prec,
            );
        }
        k += 1;
        assert!(k < 1_000_000, "atanh series failed to converge");
    }
}

fn ln2(prec: u32) -> RealBall {
    if let Some((m, r)) = LN2_CACHE.lock().unwrap().get(&prec) {
        return RealBall::new(m.clone(), r.clone(), prec);
    }
    // ln 2 = 2 atanh(1/3)
    let v = atanh_small(&Rational::new(BigInt::from(1), BigInt::from(3)), prec + 4);
    let v = RealBall::settle(v.mid().shift(1), v.rad().shift(1), prec);
    LN2_CACHE
        .lock()
        .unwrap()
        .insert(prec, (v.mid().clone(), v.rad().clone()));
    v
}

/// Natural log of a positive rational as a certified ball.
/// Reduction: x = m * 2^e with m in [1, 2), then ln m = 2 atanh((m-1)/(m+1)).
pub fn ln_rational(q: &Rational, prec: u32) -> RealBall {
    assert!(q.is_positive(), "ln of non-positive rational");
    // e = floor(log2 q) via bit lengths, corrected by at most one.
    let mut e = q.numer().bits() as i64 - q.denom().bits() as i64;
    let two = Rational::from_integer(BigInt::from(2));
    let pow2 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(BigInt::from(1) << k as u64)
        } else {
            Rational::new(BigInt::from(1), BigInt::from(1) << (-k) as u64)
        }
    };
    let mut m = q / &pow2(e);
    while m < Rational::from_integer(BigInt::from(1)) {
        m *= &two;
        e -= 1;
    }
    while m >= two {
        m /= &two;
        e += 1;
    }
    // z = (m-1)/(m+1) in [0, 1/3)
    let one = Rational::from_integer(BigInt::from(1));
    let z = (&m - &one) / (&m + &one);
    let lnm = atanh_small(&z, prec + 4);
    let lnm = RealBall::settle(lnm.mid().shift(1), lnm.rad().shift(1), prec + 4);
    let l2 = ln2(prec + 4);
    let scaled = RealBall::settle(l2.mid().mul_i64(e), l2.rad().mul_i64(e.abs().max(1)), prec + 4);
    RealBall::settle(
        lnm.mid().add(scaled.mid()),
        lnm.rad().add(scaled.rad()),
        prec,
    )
}

/// Complex ball: center `re + i*im` with one radius covering both parts.
#[derive(Clone, Debug)]
pub struct Ball {
    re: Dyadic,
    im: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl Ball {
    pub fn from_real(r: &RealBall) -> Self {
        Ball {
            re: r.mid().clone(),
            im: Dyadic::zero(),
            rad: r.rad().clone(),
            prec: r.prec(),
        }
    }

    /// Combine independent real/imaginary enclosures; the joint radius
    /// `rr + ri` dominates `sqrt(rr^2 + ri^2)`.
    pub fn from_parts(re: &RealBall, im: &RealBall) -> Self {
        Ball {
            re: re.mid().clone(),
            im: im.mid().clone(),
            rad: re.rad().add(im.rad()).round_up_mag(RAD_BITS),
            prec: re.prec().max(im.prec()),
        }
    }

    pub fn re(&self) -> &Dyadic {
        &self.re
    }

    pub fn im(&self) -> &Dyadic {
        &self.im
    }

    pub fn radius(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_real_centered(&self) -> bool {
        self.im.is_zero()
    }

    pub fn real_part(&self) -> RealBall {
        RealBall::new(self.re.clone(), self.rad.clone(), self.prec)
    }

    pub fn imag_part(&self) -> RealBall {
        RealBall::new(self.im.clone(), self.rad.clone(), self.prec)
    }

    pub fn neg(&self) -> Self {
        Ball { re: self.re.neg(), im: self.im.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn conj(&self) -> Self {
        Ball { re: self.re.clone(), im: self.im.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn add(&self, other: &Ball) -> Self {
        let prec = self.prec.max(other.prec);
        let (re, e1) = self.re.add(&other.re).trim(prec + GUARD);
        let (im, e2) = self.im.add(&other.im).trim(prec + GUARD);
        let rad = self
            .rad
            .add(&other.rad)
            .add(&e1)
            .add(&e2)
            .round_up_mag(RAD_BITS);
        Ball { re, im, rad, prec }
    }

    pub fn sub(&self, other: &Ball) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Ball) -> Self {
        let prec = self.prec.max(other.prec);
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        // |z| <= |re| + |im| bounds each center's modulus.
        let m1 = self.re.abs().add(&self.im.abs());
        let m2 = other.re.abs().add(&other.im.abs());
        let rad = m1
            .mul(&other.rad)
            .add(&m2.mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        let (re, e1) = re.trim(prec + GUARD);
        let (im, e2) = im.trim(prec + GUARD);
        let rad = rad.add(&e1).add(&e2).round_up_mag(RAD_BITS);
        Ball { re, im, rad, prec }
    }

    /// Certified upper bound on the distance between the two centers plus
    /// radii: true when the balls certainly intersect.
    pub fn intersects(&self, other: &Ball) -> bool {
        // |c1 - c2|^2 <= (r1 + r2)^2 assures intersection; compare exactly.
        let dr = self.re.sub(&other.re);
        let di = self.im.sub(&other.im);
        let dist2 = dr.mul(&dr).add(&di.mul(&di));
        let rsum = self.rad.add(&other.rad);
        dist2.cmp_value(&rsum.mul(&rsum)) != Ordering::Greater
    }

    pub fn contains_zero(&self) -> bool {
        let dist2 = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        dist2.cmp_value(&self.rad.mul(&self.rad)) != Ordering::Greater
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    // Reference digits generated independently with mpmath (dps = 60).
    const PI_REF: &str = "3.14159265358979323846264338327950288419716939937510582097494";
    const SQRT2_REF: &str = "1.41421356237309504880168872420969807856967187537694807317668";
    const LN2_REF: &str = "0.69314718055994530941723212145817656807550013436025525412068";
    const COS_2PI7_REF: &str = "0.623489801858733530525004884004239810632274730896402105365549";
    const SIN_2PI7_REF: &str = "0.781831482468029808708444526674057750232334518708687528980635";

    /// Check that `ball` encloses the decimal reference value and its radius
    /// is below 2^-(prec-8).
    fn assert_encloses(ball: &RealBall, decimal: &str, prec: u32) {
        // Parse the decimal into an exact rational.
        let neg = decimal.starts_with('-');
        let s = decimal.trim_start_matches('-');
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        let scale = num_traits::Pow::pow(&BigInt::from(10), frac_part.len() as u32);
        let num: BigInt = format!("{int_part}{frac_part}").parse().unwrap();
        let num = if neg { -num } else { num };
        let v = Rational::new(num, scale);
        // Reference has ~60 digits; treat it as exact to within 10^-58.
        let tol = Rational::new(BigInt::from(1), num_traits::Pow::pow(&BigInt::from(10), 58u32));
        let lo = RealBall::from_rational(&(&v - &tol), prec + 64);
        let hi = RealBall::from_rational(&(&v + &tol), prec + 64);
        assert!(
            ball.lower_bound().cmp_value(&hi.upper_bound()) == Ordering::Less,
            "lower bound above reference"
        );
        assert!(
            ball.upper_bound().cmp_value(&lo.lower_bound()) == Ordering::Greater,
            "upper bound below reference"
        );
        let max_rad = Dyadic::power_of_two(-((prec as i64) - 8));
        assert!(
            ball.rad().cmp_value(&max_rad) == Ordering::Less,
            "radius too large: {:?} at prec {}",
            ball.rad(),
            prec
        );
    }

    #[test]
    fn pi_matches_reference() {
        for prec in [64, 128, 190] {
            assert_encloses(&pi(prec), PI_REF, prec);
        }
    }

    #[test]
    fn sqrt_two_matches_reference() {
        for prec in [64, 128, 190] {
            let b = sqrt_rational(&rat(2, 1), prec);
            assert_encloses(&b, SQRT2_REF, prec);
        }
    }

    #[test]
    fn sqrt_perfect_square_is_exact() {
        let b = sqrt_rational(&rat(9, 4), 64);
        assert!(b.rad().is_zero());
        assert_eq!(b.mid(), &Dyadic::new(BigInt::from(3), -1));
        let one = sqrt_rational(&rat(1, 1), 64);
        assert!(one.rad().is_zero());
        assert_eq!(one.mid(), &Dyadic::one());
    }

    #[test]
    fn ln_matches_reference() {
        for prec in [64, 150] {
            assert_encloses(&ln_rational(&rat(2, 1), prec), LN2_REF, prec);
        }
        // ln(1) = 0 exactly representable: interval must contain 0 tightly.
        let one = ln_rational(&rat(1, 1), 96);
        assert!(one.contains_zero());
        assert!(one.rad().cmp_value(&Dyadic::power_of_two(-88)) == Ordering::Less);
        // ln(1/2) = -ln 2
        let half = ln_rational(&rat(1, 2), 96);
        let sum = half.add(&ln_rational(&rat(2, 1), 96));
        assert!(sum.contains_zero());
    }

    #[test]
    fn cos_sin_pi_matches_reference() {
        // 2pi/7 = pi * (2/7)
        let (c, s) = cos_sin_pi(&rat(2, 7), 128);
        assert_encloses(&c, COS_2PI7_REF, 128);
        assert_encloses(&s, SIN_2PI7_REF, 128);
    }

    #[test]
    fn cos_sin_pi_special_angles_are_tight() {
        let prec = 96;
        // cos(pi) = -1, sin(pi) = 0
        let (c, s) = cos_sin_pi(&rat(1, 1), prec);
        assert!(c.add(&RealBall::exact(Dyadic::one(), prec)).contains_zero());
        assert!(s.contains_zero());
        // cos(pi/2) = 0, sin(pi/2) = 1
        let (c, s) = cos_sin_pi(&rat(1, 2), prec);
        assert!(c.contains_zero());
        assert!(s.sub(&RealBall::exact(Dyadic::one(), prec)).contains_zero());
        // Pythagorean identity at a few angles.
        for (n, d) in [(1i64, 3i64), (5, 7), (3, 11), (9, 5), (13, 8)] {
            let (c, s) = cos_sin_pi(&rat(n, d), prec);
            let id = c.square().add(&s.square()).sub(&RealBall::exact(Dyadic::one(), prec));
            assert!(id.contains_zero(), "identity failed at pi*{n}/{d}");
            assert!(id.rad().cmp_value(&Dyadic::power_of_two(-80)) == Ordering::Less);
        }
    }

    #[test]
    fn ln_additivity_property() {
        let prec = 110;
        // ln(6) = ln(2) + ln(3)
        let l6 = ln_rational(&rat(6, 1), prec);
        let l2 = ln_rational(&rat(2, 1), prec);
        let l3 = ln_rational(&rat(3, 1), prec);
        let diff = l6.sub(&l2.add(&l3));
        assert!(diff.contains_zero());
        assert!(diff.rad().cmp_value(&Dyadic::power_of_two(-100)) == Ordering::Less);
    }

    #[test]
    fn interval_arithmetic_soundness() {
        // (sqrt 2)^2 - 2 must contain zero with small radius.
        let s = sqrt_rational(&rat(2, 1), 128);
        let d = s.square().sub(&RealBall::from_rational(&rat(2, 1), 128));
        assert!(d.contains_zero());
        assert!(d.rad().cmp_value(&Dyadic::power_of_two(-110)) == Ordering::Less);
    }

    #[test]
    fn nth_root_interval() {
        // 7th root of 128 = 2 exactly.
        let b = RealBall::from_rational(&rat(128, 1), 80).nth_root_nonneg(7);
        let two = RealBall::from_rational(&rat(2, 1), 80);
        assert!(b.sub(&two).contains_zero());
        assert!(b.rad().cmp_value(&Dyadic::power_of_two(-70)) == Ordering::Less);
    }

    #[test]
    fn complex_ball_mul() {
        // (1 + i)^2 = 2i
        let one_i = Ball::from_parts(
            &RealBall::from_rational(&rat(1, 1), 64),
            &RealBall::from_rational(&rat(1, 1), 64),
        );
        let sq = one_i.mul(&one_i);
        assert!(sq.real_part().contains_zero());
        assert!(sq
            .imag_part()
            .sub(&RealBall::from_rational(&rat(2, 1), 64))
            .contains_zero());
    }
}
