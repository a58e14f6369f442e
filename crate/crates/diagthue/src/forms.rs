//! Diagonalizable binary forms and their algebraic invariants.
//!
//! A [`DiagForm`] is F(x,y) = (ax + by)^r - (cx + dy)^r with entries from one
//! quadratic field and a nonzero determinant j = ad - bc. Construction is
//! eager: the binomial expansion must produce integer coefficients, the
//! product of the two linear forms must split as chi*(Ax^2 + Bxy + Cy^2) with
//! integer (A,B,C), and chi^2 must be rational. A value of this type is
//! therefore always a valid integer form with its whole invariant set
//! (j, chi, A, B, C, D, Delta) precomputed.
//!
//! [`IntBinaryForm`] is the expanded coefficient vector; it also accepts raw
//! integer forms that never came from a diagonalization, which is what the
//! definiteness classifier needs to see its definite row at all.

use crate::exactnum::quad::QuadElem;
use crate::exactnum::{rational_from_int, Rational};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// The diagonal datum (alpha, beta, gamma, delta, r) with every invariant
/// computed and validated at construction.
#[derive(Clone, Debug)]
pub struct DiagForm {
    r: u32,
    alpha: QuadElem,
    beta: QuadElem,
    gamma: QuadElem,
    delta: QuadElem,
    d: i64,
    j: QuadElem,
    chi: QuadElem,
    quad_a: BigInt,
    quad_b: BigInt,
    quad_c: BigInt,
    big_d: BigInt,
    disc: BigInt,
    coeffs: Vec<BigInt>,
}

/// All h-independent invariants plus the h-normalized discriminant.
#[derive(Clone, Debug)]
pub struct InvariantSet {
    pub j: QuadElem,
    pub chi: QuadElem,
    pub quad_a: BigInt,
    pub quad_b: BigInt,
    pub quad_c: BigInt,
    pub big_d: BigInt,
    pub delta: BigInt,
    pub delta_prime: Rational,
}

impl DiagForm {
    pub fn new(
        alpha: QuadElem,
        beta: QuadElem,
        gamma: QuadElem,
        delta: QuadElem,
        r: u32,
    ) -> Result<DiagForm> {
        if r < 3 {
            return Err(Error::ParameterOutOfRange(format!(
                "degree r must be at least 3, got {r}"
            )));
        }
        let d = common_field(&[&alpha, &beta, &gamma, &delta])?;
        let j = alpha.mul(&delta).sub(&beta.mul(&gamma));
        if j.is_zero() {
            return Err(Error::DegenerateForm);
        }
        let coeffs = expand_coeffs(&alpha, &beta, &gamma, &delta, r)?;

        // uv = alpha*gamma x^2 + (alpha*delta + beta*gamma) xy + beta*delta y^2
        //    = chi (A x^2 + B xy + C y^2)
        let p = [
            alpha.mul(&gamma),
            alpha.mul(&delta).add(&beta.mul(&gamma)),
            beta.mul(&delta),
        ];
        let pivot = p
            .iter()
            .position(|e| !e.is_zero())
            .expect("uv vanishes identically despite j != 0");
        let mut ratios = Vec::with_capacity(3);
        for (i, pi) in p.iter().enumerate() {
            let q = pi.div(&p[pivot]).expect("pivot is nonzero");
            match q.as_rational() {
                Some(v) => ratios.push(v.clone()),
                None => {
                    return Err(Error::NotCommensurable(format!(
                        "uv coefficient ratio {} / {} = {} is irrational",
                        p[i], p[pivot], q
                    )))
                }
            }
        }
        let lcm_den = ratios
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let m: Vec<BigInt> = ratios
            .iter()
            .map(|q| (q * Rational::from_integer(lcm_den.clone())).to_integer())
            .collect();
        let g = m[0].gcd(&m[1]).gcd(&m[2]);
        let sign = m
            .iter()
            .find(|v| !v.is_zero())
            .map(|v| if v.is_negative() { -1 } else { 1 })
            .unwrap_or(1);
        let unit = BigInt::from(sign);
        let quad: Vec<BigInt> = m.iter().map(|v| v * &unit / &g).collect();
        let chi = p[pivot].mul_rational(&Rational::new(&g * &unit, lcm_den));

        let big_d = &quad[1] * &quad[1] - BigInt::from(4) * &quad[0] * &quad[2];
        if big_d.is_zero() {
            return Err(Error::DegenerateForm);
        }
        let chi_sq = chi.mul(&chi);
        let chi_sq = chi_sq
            .as_rational()
            .ok_or_else(|| Error::IrrationalChiSquare(chi.to_string()))?
            .clone();
        let j_sq = j
            .mul(&j)
            .as_rational()
            .expect("j^2 irrational for a form with integer coefficients")
            .clone();
        // The identity j^2 = chi^2 * D ties the three invariants together;
        // a mismatch would mean the normalization above is wrong.
        assert_eq!(
            j_sq,
            &chi_sq * Rational::from_integer(big_d.clone()),
            "invariant identity j^2 = chi^2 * D failed"
        );

        let disc = discriminant_from_j(&j_sq, r);
        Ok(DiagForm {
            r,
            alpha,
            beta,
            gamma,
            delta,
            d,
            j,
            chi,
            quad_a: quad[0].clone(),
            quad_b: quad[1].clone(),
            quad_c: quad[2].clone(),
            big_d,
            disc,
            coeffs,
        })
    }

    /// Convenience constructor for all-rational quadruples.
    pub fn from_rationals(
        alpha: Rational,
        beta: Rational,
        gamma: Rational,
        delta: Rational,
        r: u32,
    ) -> Result<DiagForm> {
        DiagForm::new(
            QuadElem::from_rational(alpha),
            QuadElem::from_rational(beta),
            QuadElem::from_rational(gamma),
            QuadElem::from_rational(delta),
            r,
        )
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn field_d(&self) -> i64 {
        self.d
    }

    pub fn alpha(&self) -> &QuadElem {
        &self.alpha
    }

    pub fn beta(&self) -> &QuadElem {
        &self.beta
    }

    pub fn gamma(&self) -> &QuadElem {
        &self.gamma
    }

    pub fn delta(&self) -> &QuadElem {
        &self.delta
    }

    pub fn j(&self) -> &QuadElem {
        &self.j
    }

    /// j^2, always rational.
    pub fn j_squared(&self) -> Rational {
        self.j
            .mul(&self.j)
            .as_rational()
            .expect("j^2 is rational by construction")
            .clone()
    }

    pub fn chi(&self) -> &QuadElem {
        &self.chi
    }

    pub fn quadratic_coeffs(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.quad_a, &self.quad_b, &self.quad_c)
    }

    pub fn big_d(&self) -> &BigInt {
        &self.big_d
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn expand(&self) -> IntBinaryForm {
        IntBinaryForm::new(self.r, self.coeffs.clone()).expect("expansion is a valid form")
    }

    /// u = alpha*x + beta*y.
    pub fn u_at(&self, x: i64, y: i64) -> QuadElem {
        self.alpha
            .mul_rational(&rational_from_int(x))
            .add(&self.beta.mul_rational(&rational_from_int(y)))
    }

    /// v = gamma*x + delta*y.
    pub fn v_at(&self, x: i64, y: i64) -> QuadElem {
        self.gamma
            .mul_rational(&rational_from_int(x))
            .add(&self.delta.mul_rational(&rational_from_int(y)))
    }

    /// F(x,y) by integer Horner evaluation of the expanded coefficients.
    pub fn eval(&self, x: i64, y: i64) -> BigInt {
        eval_coeffs(&self.coeffs, &BigInt::from(x), &BigInt::from(y))
    }

    pub fn invariants(&self, h: u64) -> Result<InvariantSet> {
        if h == 0 {
            return Err(Error::ParameterOutOfRange(
                "bound h must be at least 1".into(),
            ));
        }
        // DeltaPrime = |Delta| / (2^(r^2-r) r^r h^(2r-2))
        let r = self.r as u64;
        let denom = (BigInt::one() << (r * r - r))
            * BigInt::from(r).pow(self.r)
            * BigInt::from(h).pow(2 * self.r - 2);
        let delta_prime = Rational::new(self.disc.abs(), denom);
        Ok(InvariantSet {
            j: self.j.clone(),
            chi: self.chi.clone(),
            quad_a: self.quad_a.clone(),
            quad_b: self.quad_b.clone(),
            quad_c: self.quad_c.clone(),
            big_d: self.big_d.clone(),
            delta: self.disc.clone(),
            delta_prime,
        })
    }
}

impl fmt::Display for DiagForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({})x + ({})y)^{} - (({})x + ({})y)^{}",
            self.alpha, self.beta, self.r, self.gamma, self.delta, self.r
        )
    }
}

fn common_field(elems: &[&QuadElem]) -> Result<i64> {
    let mut field = 0i64;
    for e in elems {
        if e.d() != 0 {
            if field != 0 && field != e.d() {
                return Err(Error::MixedFields(field, e.d()));
            }
            field = e.d();
        }
    }
    Ok(field)
}

/// Binomial expansion of (ax+by)^r - (cx+dy)^r; every coefficient must be a
/// rational integer.
fn expand_coeffs(
    alpha: &QuadElem,
    beta: &QuadElem,
    gamma: &QuadElem,
    delta: &QuadElem,
    r: u32,
) -> Result<Vec<BigInt>> {
    let n = r as usize;
    let pow = |e: &QuadElem| -> Vec<QuadElem> {
        let mut v = Vec::with_capacity(n + 1);
        v.push(QuadElem::one());
        for i in 1..=n {
            v.push(v[i - 1].mul(e));
        }
        v
    };
    let pa = pow(alpha);
    let pb = pow(beta);
    let pc = pow(gamma);
    let pd = pow(delta);
    let mut binom = BigInt::one();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            // C(r,k) = C(r,k-1) * (r-k+1) / k, exact at every step
            binom = binom * BigInt::from(r - k as u32 + 1) / BigInt::from(k);
        }
        let term = pa[n - k].mul(&pb[k]).sub(&pc[n - k].mul(&pd[k]));
        let ck = term.mul_rational(&Rational::from_integer(binom.clone()));
        let value = match ck.as_rational() {
            Some(q) if q.denom().is_one() => q.to_integer(),
            _ => {
                return Err(Error::NotIntegral {
                    power_x: r - k as u32,
                    power_y: k as u32,
                    value: ck.to_string(),
                })
            }
        };
        out.push(value);
    }
    Ok(out)
}

/// Delta = (-1)^((r-1)(r+2)/2) r^r j^(r(r-1)), with j^(r(r-1)) computed as
/// (j^2)^(r(r-1)/2); the result must be a rational integer.
fn discriminant_from_j(j_sq: &Rational, r: u32) -> BigInt {
    let half_exp = (r * (r - 1) / 2) as usize;
    let j_pow = num_traits::pow(j_sq.clone(), half_exp);
    let sign_exp = ((r as u64 - 1) * (r as u64 + 2) / 2) % 2;
    let sign = if sign_exp == 1 { -1 } else { 1 };
    let delta = j_pow
        * Rational::from_integer(BigInt::from(r).pow(r))
        * Rational::from_integer(BigInt::from(sign));
    assert!(
        delta.denom().is_one(),
        "discriminant of an integer form must be an integer, got {delta}"
    );
    delta.to_integer()
}

fn eval_coeffs(coeffs: &[BigInt], x: &BigInt, y: &BigInt) -> BigInt {
    // F(x,y) = sum c_k x^(r-k) y^k == Horner in x with ascending y powers.
    let mut acc = coeffs[0].clone();
    let mut ypow = BigInt::one();
    for c in &coeffs[1..] {
        acc *= x;
        ypow *= y;
        acc += c * &ypow;
    }
    acc
}

/// Expanded integer binary form of degree r: coefficient of x^(r-k) y^k at
/// index k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntBinaryForm {
    r: u32,
    coeffs: Vec<BigInt>,
}

/// Definiteness and degree parity of an integer binary form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormClass {
    pub definite: bool,
    pub even_degree: bool,
}

impl IntBinaryForm {
    pub fn new(r: u32, coeffs: Vec<BigInt>) -> Result<IntBinaryForm> {
        if coeffs.len() != r as usize + 1 {
            return Err(Error::InvalidSpec(format!(
                "degree {r} form needs {} coefficients, got {}",
                r + 1,
                coeffs.len()
            )));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidSpec("form is identically zero".into()));
        }
        Ok(IntBinaryForm { r, coeffs })
    }

    pub fn from_i64(r: u32, coeffs: &[i64]) -> Result<IntBinaryForm> {
        IntBinaryForm::new(r, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        eval_coeffs(&self.coeffs, x, y)
    }

    pub fn eval_i64(&self, x: i64, y: i64) -> BigInt {
        self.eval(&BigInt::from(x), &BigInt::from(y))
    }

    /// Swap the roles of x and y (coefficient vector reversed).
    pub fn swapped(&self) -> IntBinaryForm {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntBinaryForm { r: self.r, coeffs: c }
    }

    /// Definite iff the degree is even, F(1,0) and F(0,1) share a sign, and
    /// F(t,1) has no real root (exact Sturm count). Odd degree is always
    /// indefinite.
    pub fn classify(&self) -> FormClass {
        let even = self.r % 2 == 0;
        if !even {
            return FormClass { definite: false, even_degree: false };
        }
        let c0 = &self.coeffs[0];
        let cr = &self.coeffs[self.r as usize];
        if (c0 * cr).sign() != num_bigint::Sign::Plus {
            return FormClass { definite: false, even_degree: true };
        }
        let poly: Vec<Rational> = self
            .coeffs
            .iter()
            .rev()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let definite = sturm_distinct_real_roots(poly) == 0;
        FormClass { definite, even_degree: true }
    }
}

impl fmt::Display for IntBinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let px = self.r as usize - k;
            if first {
                write!(f, "{c}")?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}", -c)?;
            } else {
                write!(f, " + {c}")?;
            }
            if px > 0 {
                write!(f, "*x^{px}")?;
            }
            if k > 0 {
                write!(f, "*y^{k}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Sturm machinery on dense rational polynomials, ascending degree order.

fn poly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_deriv(p: &[Rational]) -> Vec<Rational> {
    if p.len() <= 1 {
        return Vec::new();
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
        .collect()
}

/// Remainder of polynomial long division.
fn poly_rem(num: &[Rational], den: &[Rational]) -> Vec<Rational> {
    let mut rem: Vec<Rational> = num.to_vec();
    let dn = den.len();
    debug_assert!(dn >= 1 && !den[dn - 1].is_zero());
    while rem.len() >= dn {
        let k = rem.len() - dn;
        let factor = rem.last().unwrap() / &den[dn - 1];
        for i in 0..dn {
            let t = &den[i] * &factor;
            rem[k + i] -= t;
        }
        rem.pop();
        rem = poly_trim(rem);
        if rem.is_empty() {
            break;
        }
    }
    rem
}

fn sign_at_infinity(p: &[Rational], positive: bool) -> i32 {
    let lead = p.last().expect("nonzero polynomial");
    let s = if lead.is_positive() { 1 } else { -1 };
    if positive || (p.len() - 1) % 2 == 0 {
        s
    } else {
        -s
    }
}

fn sign_variations(signs: &[i32]) -> usize {
    let mut count = 0;
    let mut prev = 0;
    for &s in signs {
        if s == 0 {
            continue;
        }
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

/// Number of distinct real roots via the canonical Sturm chain.
fn sturm_distinct_real_roots(p: Vec<Rational>) -> usize {
    let p = poly_trim(p);
    if p.len() <= 1 {
        return 0;
    }
    let mut chain = vec![p.clone(), poly_trim(poly_deriv(&p))];
    while let Some(last) = chain.last() {
        if last.is_empty() || last.len() == 1 && chain.len() >= 2 && last[0].is_zero() {
            break;
        }
        let prev = &chain[chain.len() - 2];
        let rem = poly_rem(prev, last);
        if rem.is_empty() {
            break;
        }
        let neg: Vec<Rational> = rem.iter().map(|c| -c.clone()).collect();
        chain.push(neg);
    }
    let at_neg: Vec<i32> = chain
        .iter()
        .filter(|q| !q.is_empty())
        .map(|q| sign_at_infinity(q, false))
        .collect();
    let at_pos: Vec<i32> = chain
        .iter()
        .filter(|q| !q.is_empty())
        .map(|q| sign_at_infinity(q, true))
        .collect();
    sign_variations(&at_neg) - sign_variations(&at_pos)
}
