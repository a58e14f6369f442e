//! Solution functionals and the related-root-of-unity classification.
//!
//! Every primitive pair (x,y) yields u = alpha*x + beta*y, v = gamma*x +
//! delta*y, the r-th powers xi and eta, the ratio mu = eta/xi, the height
//! Z = max(|u|,|v|), and the size functional zeta = |F|/Z^r. All of these
//! stay exact: magnitudes live in [`RealMag`], which is either a nonnegative
//! real quadratic element or the square root of a nonnegative rational, and
//! both kinds compare exactly by squaring.
//!
//! The related root of w = u/v is the r-th root of unity minimizing
//! |u - v*omega|. The decision runs on exact signs first: w^r is an exact
//! field element, and its sign pattern tells whether w lies on a root ray
//! (unique minimizer), on a bisector ray (exact two-way tie, resolved by the
//! lower-boundary convention), or strictly inside a sector (unique minimizer
//! found by certified ball refinement). No verdict is ever read off an
//! unproven approximation.

use crate::exactnum::ball::{cos_sin_pi, sqrt_rational, RealBall};
use crate::exactnum::quad::QuadElem;
use crate::exactnum::{rational_from_int, Precision, Rational};
use crate::forms::DiagForm;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exact nonnegative real magnitude: either a real quadratic element or the
/// square root of a nonnegative rational.
#[derive(Clone, Debug)]
pub enum RealMag {
    Quad(QuadElem),
    Sqrt(Rational),
}

impl RealMag {
    /// |e| for any field element: real elements keep their kind, complex
    /// elements become the square root of their norm.
    pub fn abs_of(e: &QuadElem) -> RealMag {
        if e.is_complex() {
            RealMag::Sqrt(e.norm())
        } else {
            match e.sign_real() {
                Ordering::Less => RealMag::Quad(e.neg()),
                _ => RealMag::Quad(e.clone()),
            }
        }
    }

    pub fn from_rational(q: &Rational) -> RealMag {
        assert!(!q.is_negative());
        RealMag::Quad(QuadElem::from_rational(q.clone()))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RealMag::Quad(e) => e.is_zero(),
            RealMag::Sqrt(q) => q.is_zero(),
        }
    }

    /// The square of the magnitude, rational whenever the kind allows.
    pub fn squared_rational(&self) -> Option<Rational> {
        match self {
            RealMag::Quad(e) => e.mul(e).as_rational().cloned(),
            RealMag::Sqrt(q) => Some(q.clone()),
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            RealMag::Quad(e) => e.as_rational().cloned(),
            RealMag::Sqrt(q) => crate::exactnum::rational_sqrt_exact(q),
        }
    }

    pub fn mul(&self, other: &RealMag) -> RealMag {
        match (self, other) {
            (RealMag::Quad(a), RealMag::Quad(b)) => RealMag::Quad(a.mul(b)),
            (RealMag::Sqrt(a), RealMag::Sqrt(b)) => RealMag::Sqrt(a * b),
            (RealMag::Quad(a), RealMag::Sqrt(b)) | (RealMag::Sqrt(b), RealMag::Quad(a)) => {
                let a2 = a
                    .mul(a)
                    .as_rational()
                    .expect("mixed-kind magnitude product with irrational square")
                    .clone();
                RealMag::Sqrt(a2 * b)
            }
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> RealMag {
        assert!(!q.is_negative());
        match self {
            RealMag::Quad(e) => RealMag::Quad(e.mul_rational(q)),
            RealMag::Sqrt(s) => RealMag::Sqrt(q * q * s),
        }
    }

    pub fn div(&self, other: &RealMag) -> RealMag {
        assert!(!other.is_zero(), "division of magnitudes by zero");
        match (self, other) {
            (RealMag::Quad(a), RealMag::Quad(b)) => {
                RealMag::Quad(a.div(b).expect("nonzero divisor"))
            }
            (RealMag::Sqrt(a), RealMag::Sqrt(b)) => RealMag::Sqrt(a / b),
            (RealMag::Quad(a), RealMag::Sqrt(b)) => {
                let a2 = a
                    .mul(a)
                    .as_rational()
                    .expect("mixed-kind magnitude quotient with irrational square")
                    .clone();
                RealMag::Sqrt(a2 / b)
            }
            (RealMag::Sqrt(a), RealMag::Quad(b)) => {
                let b2 = b
                    .mul(b)
                    .as_rational()
                    .expect("mixed-kind magnitude quotient with irrational square")
                    .clone();
                RealMag::Sqrt(a / b2)
            }
        }
    }

    pub fn pow(&self, n: u32) -> RealMag {
        match self {
            RealMag::Quad(e) => RealMag::Quad(e.pow(n)),
            RealMag::Sqrt(q) => RealMag::Sqrt(num_traits::pow(q.clone(), n as usize)),
        }
    }

    /// Exact order between two magnitudes. Same-kind compares directly;
    /// mixed kinds compare by squaring (both sides are nonnegative).
    pub fn cmp_mag(&self, other: &RealMag) -> Ordering {
        match (self, other) {
            (RealMag::Quad(a), RealMag::Quad(b)) => a.sub(b).sign_real(),
            (RealMag::Sqrt(a), RealMag::Sqrt(b)) => a.cmp(b),
            (RealMag::Quad(a), RealMag::Sqrt(b)) => {
                let a2 = a.mul(a);
                a2.sub(&QuadElem::from_rational(b.clone())).sign_real()
            }
            (RealMag::Sqrt(_), RealMag::Quad(_)) => other.cmp_mag(self).reverse(),
        }
    }

    pub fn max(self, other: RealMag) -> RealMag {
        if self.cmp_mag(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn embed(&self, prec: u32) -> RealBall {
        match self {
            RealMag::Quad(e) => e.embed_real(prec),
            RealMag::Sqrt(q) => sqrt_rational(q, prec),
        }
    }
}

impl fmt::Display for RealMag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealMag::Quad(e) => write!(f, "{e}"),
            RealMag::Sqrt(q) => {
                if let Some(r) = crate::exactnum::rational_sqrt_exact(q) {
                    write!(f, "{}", crate::exactnum::format_rational(&r))
                } else {
                    write!(f, "sqrt({})", crate::exactnum::format_rational(q))
                }
            }
        }
    }
}

/// One primitive solution with every functional the lemma machinery needs.
#[derive(Clone, Debug)]
pub struct SolutionRecord {
    pub x: i64,
    pub y: i64,
    pub f_value: BigInt,
    pub u: QuadElem,
    pub v: QuadElem,
    pub xi: QuadElem,
    pub eta: QuadElem,
    /// eta/xi; None when xi = 0 (the pole case, u = 0).
    pub mu: Option<QuadElem>,
    /// xi/eta; None when eta = 0 (v = 0).
    pub mu_inv: Option<QuadElem>,
    pub z: RealMag,
    pub zeta: RealMag,
    /// Sign flag for positive-D forms: 0 when mu > 0 (or mu degenerate),
    /// 1 when mu < 0. None for negative D.
    pub epsilon: Option<u8>,
    /// Index k of the related root e^(2 pi i k / r), 1-based, k = r for 1.
    pub omega_index: u32,
    pub tie_flag: bool,
    pub note: Option<String>,
}

/// Outcome of the related-root search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootChoice {
    pub omega_index: u32,
    pub tie_flag: bool,
    pub note: Option<String>,
}

/// Solutions grouped by related root, each class sorted zeta-descending.
#[derive(Clone, Debug, Default)]
pub struct OmegaPartition {
    pub classes: BTreeMap<u32, Vec<SolutionRecord>>,
}

impl OmegaPartition {
    pub fn total(&self) -> usize {
        self.classes.values().map(|v| v.len()).sum()
    }
}

/// Compute every functional of one primitive pair. The input is normalized
/// to the representative with x > 0, or x = 0 and y > 0.
pub fn solution_profile(
    form: &DiagForm,
    x: i64,
    y: i64,
    precision: Precision,
) -> Result<SolutionRecord> {
    let g = x.unsigned_abs().gcd(&y.unsigned_abs());
    if g != 1 {
        return Err(Error::NotPrimitive { x, y, gcd: g.to_string() });
    }
    let (x, y) = if x < 0 || (x == 0 && y < 0) { (-x, -y) } else { (x, y) };
    let f_value = form.eval(x, y);
    if f_value.is_zero() {
        return Err(Error::ZeroValue { x, y });
    }
    let r = form.r();
    let u = form.u_at(x, y);
    let v = form.v_at(x, y);
    let xi = u.pow(r);
    let eta = v.pow(r);
    // The expanded coefficients and the diagonal shape must agree exactly.
    let functional = xi.sub(&eta);
    assert_eq!(
        functional.as_rational(),
        Some(&Rational::from_integer(f_value.clone())),
        "Horner evaluation disagrees with u^r - v^r at ({x},{y})"
    );

    let abs_u = RealMag::abs_of(&u);
    let abs_v = RealMag::abs_of(&v);
    let d_negative = form.big_d().is_negative();
    if d_negative {
        // Conjugate linear forms: both heights agree exactly.
        assert_eq!(
            abs_u.cmp_mag(&abs_v),
            Ordering::Equal,
            "negative-D form without |u| = |v| at ({x},{y})"
        );
    }
    let z = abs_u.clone().max(abs_v);
    let abs_f = RealMag::from_rational(&Rational::from_integer(f_value.abs()));
    let zeta = abs_f.div(&z.pow(r));
    // |F| = |xi - eta| <= 2 Z^r always.
    assert_ne!(
        zeta.cmp_mag(&RealMag::from_rational(&rational_from_int(2))),
        Ordering::Greater,
        "zeta above 2 at ({x},{y})"
    );

    let mu = if xi.is_zero() { None } else { Some(eta.div(&xi).expect("xi nonzero")) };
    let mu_inv = if eta.is_zero() { None } else { Some(xi.div(&eta).expect("eta nonzero")) };

    let mut note = None;
    let epsilon = if d_negative {
        None
    } else {
        match &mu {
            Some(m) if !m.is_zero() => {
                // Positive D keeps mu real; its sign is exact.
                let s = m.sign_real();
                check_zeta_identity(&zeta, m, mu_inv.as_ref(), x, y);
                Some(if s == Ordering::Less { 1 } else { 0 })
            }
            Some(_) => {
                // mu = 0 (v = 0): zeta = 1 - mu = 1, and epsilon defaults 0.
                note = Some("mu = 0 (v = 0): epsilon set to 0 by convention".to_string());
                check_zeta_identity(&zeta, &QuadElem::zero(), None, x, y);
                Some(0)
            }
            None => {
                // Pole mu -> infinity (u = 0): records carry mu_inv = 0.
                note = Some("mu has a pole (u = 0): epsilon set to 0 by convention".to_string());
                assert_eq!(
                    zeta.cmp_mag(&RealMag::from_rational(&Rational::one())),
                    Ordering::Equal,
                    "zeta must be 1 at a mu pole"
                );
                Some(0)
            }
        }
    };

    let root = related_root(&u, &v, r, precision)?;
    if note.is_none() {
        note = root.note.clone();
    }
    Ok(SolutionRecord {
        x,
        y,
        f_value,
        u,
        v,
        xi,
        eta,
        mu,
        mu_inv,
        z,
        zeta,
        epsilon,
        omega_index: root.omega_index,
        tie_flag: root.tie_flag,
        note,
    })
}

/// Piecewise identity for positive D: zeta = 1 - mu when |mu| <= 1 and
/// zeta = 1 - 1/mu when |mu| > 1. This covers the four strict cases of the
/// defining equation and the boundary values mu in {0, -1}.
fn check_zeta_identity(
    zeta: &RealMag,
    mu: &QuadElem,
    mu_inv: Option<&QuadElem>,
    x: i64,
    y: i64,
) {
    let one = QuadElem::one();
    let abs_mu_le_one = {
        let upper = one.sub(mu).sign_real() != Ordering::Less;
        let lower = mu.add(&one).sign_real() != Ordering::Less;
        upper && lower
    };
    let expected = if abs_mu_le_one {
        one.sub(mu)
    } else {
        one.sub(mu_inv.expect("|mu| > 1 implies eta != 0"))
    };
    let expected_mag = RealMag::Quad(expected.clone());
    assert_eq!(
        zeta.cmp_mag(&expected_mag),
        Ordering::Equal,
        "piecewise zeta identity failed at ({x},{y}): zeta = {zeta}, expected {expected}"
    );
}

/// Find the r-th root of unity nearest to w = u/v, with the exact tie
/// convention: a tie on a bisector resolves to the lower arc boundary.
pub fn related_root(
    u: &QuadElem,
    v: &QuadElem,
    r: u32,
    precision: Precision,
) -> Result<RootChoice> {
    if v.is_zero() {
        return Ok(RootChoice {
            omega_index: r,
            tie_flag: true,
            note: Some("v = 0: all roots equidistant, omega = 1 by convention".to_string()),
        });
    }
    if u.is_zero() {
        return Ok(RootChoice {
            omega_index: r,
            tie_flag: true,
            note: Some("u = 0: all roots equidistant, omega = 1 by convention".to_string()),
        });
    }
    let w = u.div(v).expect("v nonzero");
    if !w.is_complex() {
        // Real w: nearest root is 1 for positive w; for negative w it is -1
        // when r is even, and the bisector tie at angle pi resolves to the
        // lower boundary e^(2 pi i (r-1)/2 / r) when r is odd.
        return Ok(match w.sign_real() {
            Ordering::Greater => RootChoice { omega_index: r, tie_flag: false, note: None },
            Ordering::Less if r % 2 == 0 => {
                RootChoice { omega_index: r / 2, tie_flag: false, note: None }
            }
            Ordering::Less => RootChoice {
                omega_index: (r - 1) / 2,
                tie_flag: true,
                note: Some(
                    "u/v is negative real: exact bisector tie resolved to the lower boundary"
                        .to_string(),
                ),
            },
            Ordering::Equal => unreachable!("u is nonzero"),
        });
    }

    // Complex w. The sign structure of the exact power w^r locates w:
    // w^r positive real    -> w lies on the ray of exactly one root;
    // w^r negative real    -> w lies on a bisector ray (exact two-way tie);
    // w^r complex          -> w lies strictly inside a sector.
    let wr = w.pow(r);
    if !wr.is_complex() {
        match wr.sign_real() {
            Ordering::Greater => {
                let k = isolate_nearest_root(&w, r, precision)?;
                return Ok(RootChoice { omega_index: k, tie_flag: false, note: None });
            }
            Ordering::Less => {
                let pair_low = isolate_tie_pair(&w, r, precision)?;
                return Ok(RootChoice {
                    omega_index: pair_low,
                    tie_flag: true,
                    note: Some(
                        "(u/v)^r is negative real: exact bisector tie resolved to the lower \
                         boundary"
                            .to_string(),
                    ),
                });
            }
            Ordering::Equal => unreachable!("w is nonzero"),
        }
    }
    let k = isolate_nearest_root(&w, r, precision)?;
    Ok(RootChoice { omega_index: k, tie_flag: false, note: None })
}

/// Distance-squared enclosures from w to every r-th root of unity.
fn root_distances(w: &QuadElem, r: u32, prec: u32) -> Vec<RealBall> {
    let wb = w.embed(prec);
    let wre = wb.real_part();
    let wim = wb.imag_part();
    (1..=r)
        .map(|k| {
            let angle = Rational::new(BigInt::from(2 * k as i64), BigInt::from(r as i64));
            let (c, s) = cos_sin_pi(&angle, prec);
            let dr = wre.sub(&c);
            let di = wim.sub(&s);
            dr.square().add(&di.square())
        })
        .collect()
}

/// Certified unique nearest root (index 1..=r). Terminates because the
/// caller has excluded the exact-tie configurations.
fn isolate_nearest_root(w: &QuadElem, r: u32, precision: Precision) -> Result<u32> {
    let mut prec = precision.start;
    loop {
        let d2 = root_distances(w, r, prec);
        let best = (0..d2.len())
            .min_by(|&a, &b| d2[a].upper_bound().cmp_value(&d2[b].upper_bound()))
            .unwrap();
        let certified = (0..d2.len()).all(|i| {
            i == best
                || d2[best].upper_bound().cmp_value(&d2[i].lower_bound()) == Ordering::Less
        });
        if certified {
            return Ok(best as u32 + 1);
        }
        if prec >= precision.max {
            return Err(Error::PrecisionExhausted { max_bits: precision.max });
        }
        prec = (prec * 2).min(precision.max);
    }
}

/// Certified adjacent pair of equidistant nearest roots; returns the lower
/// arc boundary index (pair (r,1) maps to r, i.e. omega = 1).
fn isolate_tie_pair(w: &QuadElem, r: u32, precision: Precision) -> Result<u32> {
    let n = r as usize;
    let mut prec = precision.start;
    loop {
        let d2 = root_distances(w, r, prec);
        for i in 0..n {
            let partner = (i + 1) % n;
            let pair_ub = {
                let a = d2[i].upper_bound();
                let b = d2[partner].upper_bound();
                if a.cmp_value(&b) == Ordering::Greater { a } else { b }
            };
            let certified = (0..n)
                .filter(|&j| j != i && j != partner)
                .all(|j| pair_ub.cmp_value(&d2[j].lower_bound()) == Ordering::Less);
            if certified {
                // Roots are 1-indexed; the pair (i+1, i+2) resolves to i+1,
                // and the wrap-around pair (r, 1) resolves to r (omega = 1).
                return Ok(i as u32 + 1);
            }
        }
        if prec >= precision.max {
            return Err(Error::PrecisionExhausted { max_bits: precision.max });
        }
        prec = (prec * 2).min(precision.max);
    }
}

/// Group records by related root; within a class sort by zeta descending,
/// breaking exact zeta ties by (|x|, |y|, sign(y)).
pub fn partition(form: &DiagForm, records: Vec<SolutionRecord>) -> OmegaPartition {
    let r = form.r();
    let mut classes: BTreeMap<u32, Vec<SolutionRecord>> = BTreeMap::new();
    for rec in records {
        assert!(rec.omega_index >= 1 && rec.omega_index <= r, "omega index out of range");
        classes.entry(rec.omega_index).or_default().push(rec);
    }
    for list in classes.values_mut() {
        list.sort_by(|a, b| {
            b.zeta
                .cmp_mag(&a.zeta)
                .then_with(|| a.x.abs().cmp(&b.x.abs()))
                .then_with(|| a.y.abs().cmp(&b.y.abs()))
                .then_with(|| a.y.signum().cmp(&b.y.signum()))
        });
    }
    OmegaPartition { classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::DiagForm;

    fn rat(n: i64) -> Rational {
        rational_from_int(n)
    }

    fn pure_power_form() -> DiagForm {
        DiagForm::from_rationals(rat(1), rat(0), rat(0), rat(1), 7).unwrap()
    }

    fn conjugate_form() -> DiagForm {
        let i = QuadElem::sqrt_d(-1);
        DiagForm::new(QuadElem::one(), i.clone(), QuadElem::one().neg(), i, 7).unwrap()
    }

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn profile_of_generic_solution() {
        let f = pure_power_form();
        let rec = solution_profile(&f, 2, 1, prec()).unwrap();
        assert_eq!(rec.f_value, BigInt::from(127));
        assert_eq!(rec.u, QuadElem::from_int(2));
        assert_eq!(rec.v, QuadElem::from_int(1));
        assert_eq!(
            rec.z.cmp_mag(&RealMag::from_rational(&rat(2))),
            Ordering::Equal
        );
        assert_eq!(rec.zeta.as_rational(), Some(Rational::new(127.into(), 128.into())));
        assert_eq!(
            rec.mu.unwrap().as_rational().unwrap(),
            &Rational::new(1.into(), 128.into())
        );
        assert_eq!(rec.epsilon, Some(0));
        assert_eq!(rec.omega_index, 7);
        assert!(!rec.tie_flag);
    }

    #[test]
    fn profile_of_degenerate_v() {
        let f = pure_power_form();
        let rec = solution_profile(&f, 1, 0, prec()).unwrap();
        assert_eq!(rec.f_value, BigInt::from(1));
        assert_eq!(rec.zeta.as_rational(), Some(Rational::one()));
        assert_eq!(rec.mu.unwrap(), QuadElem::zero());
        assert!(rec.mu_inv.is_none());
        assert_eq!(rec.omega_index, 7);
        assert!(rec.tie_flag);
        assert!(rec.note.is_some());
    }

    #[test]
    fn profile_of_mu_pole() {
        let f = pure_power_form();
        let rec = solution_profile(&f, 0, 1, prec()).unwrap();
        // Normalized representative keeps y positive; u = 0 here.
        assert!(rec.u.is_zero());
        assert!(rec.mu.is_none());
        assert_eq!(rec.mu_inv.unwrap(), QuadElem::zero());
        assert_eq!(rec.epsilon, Some(0));
        assert_eq!(rec.omega_index, 7);
        assert!(rec.tie_flag);
    }

    #[test]
    fn profile_of_conjugate_form() {
        let f = conjugate_form();
        let rec = solution_profile(&f, 1, 0, prec()).unwrap();
        assert_eq!(rec.f_value, BigInt::from(2));
        assert_eq!(rec.u, QuadElem::from_int(1));
        assert_eq!(rec.v, QuadElem::from_int(-1));
        assert_eq!(
            rec.zeta.cmp_mag(&RealMag::from_rational(&rat(2))),
            Ordering::Equal
        );
        assert_eq!(rec.mu.unwrap(), QuadElem::from_int(-1));
        assert_eq!(rec.epsilon, None);
        // u/v = -1 with r = 7: bisector tie, lower boundary k = 3.
        assert_eq!(rec.omega_index, 3);
        assert!(rec.tie_flag);
        // A complex-entry point: (1,1) gives u = 1+i, v = -1+i.
        let rec = solution_profile(&f, 1, 1, prec()).unwrap();
        assert_eq!(rec.f_value, BigInt::from(2 - 42 + 70 - 14));
        assert!(rec.u.is_complex());
        assert_eq!(rec.z.squared_rational(), Some(rat(2)));
    }

    #[test]
    fn rejects_invalid_inputs() {
        let f = pure_power_form();
        assert!(matches!(
            solution_profile(&f, 2, 4, prec()),
            Err(Error::NotPrimitive { .. })
        ));
        assert!(matches!(
            solution_profile(&f, 0, 0, prec()),
            Err(Error::NotPrimitive { .. })
        ));
        assert!(matches!(
            solution_profile(&f, 1, 1, prec()),
            Err(Error::ZeroValue { .. })
        ));
    }

    #[test]
    fn normalization_to_representative() {
        let f = pure_power_form();
        let rec = solution_profile(&f, -2, -1, prec()).unwrap();
        assert_eq!((rec.x, rec.y), (2, 1));
        let rec = solution_profile(&f, 0, -1, prec()).unwrap();
        assert_eq!((rec.x, rec.y), (0, 1));
    }

    #[test]
    fn related_root_real_cases() {
        let p = prec();
        let two = QuadElem::from_int(2);
        let one = QuadElem::one();
        // Positive real ratio: omega = 1 (index r).
        let c = related_root(&two, &one, 7, p).unwrap();
        assert_eq!((c.omega_index, c.tie_flag), (7, false));
        // Negative real ratio, odd r: tie at the lower boundary.
        let c = related_root(&one.neg(), &one, 7, p).unwrap();
        assert_eq!((c.omega_index, c.tie_flag), (3, true));
        // Negative real ratio, even r: -1 is itself a root.
        let c = related_root(&one.neg(), &one, 8, p).unwrap();
        assert_eq!((c.omega_index, c.tie_flag), (4, false));
        // Degenerate directions.
        let c = related_root(&one, &QuadElem::zero(), 7, p).unwrap();
        assert_eq!((c.omega_index, c.tie_flag), (7, true));
        let c = related_root(&QuadElem::zero(), &one, 7, p).unwrap();
        assert_eq!((c.omega_index, c.tie_flag), (7, true));
    }

    #[test]
    fn related_root_exact_complex_roots() {
        let p = prec();
        let i = QuadElem::sqrt_d(-1);
        let one = QuadElem::one();
        // w = i, r = 8: i = e^(2 pi i 2/8), index 2, distance zero.
        let c = related_root(&i, &one, 8, p).unwrap();
        assert_eq!((c.omega_index, c.tie_flag), (2, false));
        // w = i, r = 4: index 1.
        let c = related_root(&i, &one, 4, p).unwrap();
        assert_eq!((c.omega_index, c.tie_flag), (1, false));
        // w = -i, r = 4: index 3.
        let c = related_root(&i.neg(), &one, 4, p).unwrap();
        assert_eq!((c.omega_index, c.tie_flag), (3, false));
    }

    #[test]
    fn related_root_exact_complex_ties() {
        let p = prec();
        let one = QuadElem::one();
        // w = i, r = 4k+2: w^r = i^r = -1, bisector tie. For r = 6 the
        // neighbors of angle pi/2 are the roots at angles 1/3 pi (k=1) and
        // 2/3 pi (k=2); the convention picks k = 1.
        let i = QuadElem::sqrt_d(-1);
        let c = related_root(&i, &one, 6, p).unwrap();
        assert_eq!((c.omega_index, c.tie_flag), (1, true));
        // w = e^(i pi / 3) = (1 + sqrt(-3))/2, r = 3: w^3 = -1, tie between
        // roots at angles 0 and 2 pi/3; lower boundary is omega = 1 (k = 3).
        let w = QuadElem::new(
            Rational::new(1.into(), 2.into()),
            Rational::new(1.into(), 2.into()),
            -3,
        );
        assert_eq!(w.pow(3), QuadElem::from_int(-1));
        let c = related_root(&w, &one, 3, p).unwrap();
        assert_eq!((c.omega_index, c.tie_flag), (3, true));
        // Same w under r = 6: e^(i pi/3) is the root of index 1 itself.
        let c = related_root(&w, &one, 6, p).unwrap();
        assert_eq!((c.omega_index, c.tie_flag), (1, false));
    }

    #[test]
    fn related_root_generic_complex() {
        let p = prec();
        let one = QuadElem::one();
        // w = (3 + 4i)/5 on the unit circle, r = 7: theta = atan2(4,3) ~
        // 0.9273, sector angles 2 pi k/7; nearest is k = 1 (0.8976).
        let w = QuadElem::new(
            Rational::new(3.into(), 5.into()),
            Rational::new(4.into(), 5.into()),
            -1,
        );
        let c = related_root(&w, &one, 7, p).unwrap();
        assert_eq!((c.omega_index, c.tie_flag), (1, false));
        // Off-circle complex point: 2i at r = 8 is nearest to i (k = 2).
        let c = related_root(&QuadElem::sqrt_d(-1).mul_rational(&rat(2)), &one, 8, p).unwrap();
        assert_eq!((c.omega_index, c.tie_flag), (2, false));
    }

    #[test]
    fn classification_is_precision_stable() {
        let samples: Vec<(QuadElem, u32)> = vec![
            (QuadElem::new(Rational::new(3.into(), 5.into()), Rational::new(4.into(), 5.into()), -1), 7),
            (QuadElem::sqrt_d(-1), 6),
            (QuadElem::new(Rational::new(1.into(), 2.into()), Rational::new(1.into(), 2.into()), -3), 3),
            (QuadElem::from_int(-1), 9),
            (QuadElem::new(rat(1), rat(1), -7), 7),
        ];
        let one = QuadElem::one();
        for (w, r) in samples {
            let mut outcomes = Vec::new();
            for start in [64u32, 256, 1024] {
                let p = Precision { start, max: 4096 };
                outcomes.push(related_root(&w, &one, r, p).unwrap());
            }
            assert!(outcomes.windows(2).all(|o| o[0] == o[1]), "{w} at r={r}");
        }
    }

    #[test]
    fn partition_groups_and_sorts() {
        let f = pure_power_form();
        let p = prec();
        let recs = vec![
            solution_profile(&f, 2, 1, p).unwrap(),
            solution_profile(&f, 1, 0, p).unwrap(),
            solution_profile(&f, 1, -1, p).unwrap(),
            solution_profile(&f, 0, 1, p).unwrap(),
        ];
        let part = partition(&f, recs);
        assert_eq!(part.total(), 4);
        // (1,-1) has u/v = -1: class 3. The rest are class 7.
        assert_eq!(part.classes[&3].len(), 1);
        let class7 = &part.classes[&7];
        assert_eq!(class7.len(), 3);
        // zeta values: (1,0) and (0,1) give 1, (2,1) gives 127/128; the two
        // zeta ties order by (|x|,|y|).
        assert_eq!((class7[0].x, class7[0].y), (0, 1));
        assert_eq!((class7[1].x, class7[1].y), (1, 0));
        assert_eq!((class7[2].x, class7[2].y), (2, 1));
    }

    #[test]
    fn magnitude_arithmetic() {
        let a = RealMag::Sqrt(rat(2));
        let b = RealMag::Sqrt(rat(8));
        assert_eq!(a.mul(&b).as_rational(), Some(rat(4)));
        assert_eq!(b.div(&a).as_rational(), Some(rat(2)));
        assert_eq!(a.pow(2).as_rational(), Some(rat(2)));
        assert_eq!(a.cmp_mag(&RealMag::from_rational(&rat(1))), Ordering::Greater);
        assert_eq!(a.cmp_mag(&RealMag::from_rational(&rat(2))), Ordering::Less);
        // Quad vs Sqrt with an irrational quad side: 1 + sqrt(2) vs sqrt(6).
        let q = RealMag::Quad(QuadElem::new(rat(1), rat(1), 2));
        assert_eq!(q.cmp_mag(&RealMag::Sqrt(rat(6))), Ordering::Less);
        assert_eq!(q.cmp_mag(&RealMag::Sqrt(rat(5))), Ordering::Greater);
        // (1+sqrt2)^2 = 3 + 2 sqrt2 vs 34/4... squared comparison is exact.
        assert_eq!(
            RealMag::abs_of(&QuadElem::new(rat(-1), rat(-1), 2)).cmp_mag(&q),
            Ordering::Equal
        );
    }

    #[test]
    fn weird_mixed_kind_form_profiles() {
        // (i x)^8 - (-i y)^8 = x^8 - y^8: positive D with complex entries.
        let i = QuadElem::sqrt_d(-1);
        let f = DiagForm::new(i.clone(), QuadElem::zero(), QuadElem::zero(), i.neg(), 8).unwrap();
        assert_eq!(f.big_d(), &BigInt::from(1));
        let rec = solution_profile(&f, 2, 1, prec()).unwrap();
        assert_eq!(rec.f_value, BigInt::from(255));
        // |u| = 2 via a norm square root, |v| = 1.
        assert_eq!(rec.z.squared_rational(), Some(rat(4)));
        assert_eq!(
            rec.zeta.cmp_mag(&RealMag::from_rational(&Rational::new(255.into(), 256.into()))),
            Ordering::Equal
        );
        // u/v = 2i/(-i) = -2: negative real, even r: root -1, index 4.
        assert_eq!(rec.omega_index, 4);
        // mu = eta/xi = 1/256 is positive.
        assert_eq!(rec.epsilon, Some(0));
    }
}
