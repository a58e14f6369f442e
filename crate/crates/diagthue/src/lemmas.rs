//! Mechanical verification of the solution-counting inequalities and the
//! induction machinery on concrete solution data.
//!
//! Every verdict is decided by exact arithmetic: inequalities between
//! magnitudes are cleared of fractional exponents by raising both sides to
//! a common power inside the quadratic field (or by the rational power
//! comparison engine), so HOLDS/VIOLATED is never read off an approximation.
//! Certified balls appear only as reported margins and in the one place a
//! verdict genuinely needs a transcendental quantity (distance to a root of
//! unity), where precision escalates until the sign is certain.

use crate::analysis::{related_root, RealMag, SolutionRecord};
use crate::exactnum::ball::{cos_sin_pi, RealBall};
use crate::exactnum::power::{rational_int_pow, PowerProduct};
use crate::exactnum::quad::QuadElem;
use crate::exactnum::{
    rational_from_int, Precision, Rational, DEFAULT_DIGIT_BUDGET,
};
use crate::forms::DiagForm;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Every public checker takes the bound h; casts below assume it fits well
/// inside i64 after doubling.
pub(crate) fn guard_h(h: u64) -> Result<()> {
    if h == 0 || h > (i64::MAX / 4) as u64 {
        return Err(Error::ParameterOutOfRange(format!("h out of range: {h}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaId {
    RealMu,
    AllD,
    ZStar,
    Gap,
    ZetaNote,
    Iteration,
    ZkBound,
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LemmaId::RealMu => "REALMU",
            LemmaId::AllD => "ALL_D",
            LemmaId::ZStar => "ZSTAR",
            LemmaId::Gap => "GAP",
            LemmaId::ZetaNote => "ZETA_NOTE",
            LemmaId::Iteration => "ITERATION",
            LemmaId::ZkBound => "ZK_BOUND",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaStatus {
    Holds,
    Violated,
    NotApplicable,
}

impl fmt::Display for LemmaStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LemmaStatus::Holds => "HOLDS",
            LemmaStatus::Violated => "VIOLATED",
            LemmaStatus::NotApplicable => "NOT_APPLICABLE",
        };
        f.write_str(s)
    }
}

/// One checked inequality. The margin is the certified slack of the
/// inequality (nonnegative exactly when it holds); for equality statements
/// it encloses the distance between the two sides.
#[derive(Clone, Debug)]
pub struct LemmaVerdict {
    pub lemma_id: LemmaId,
    pub status: LemmaStatus,
    pub hypothesis_trace: String,
    pub margin: Option<RealBall>,
}

/// Shared knobs for the checkers: ball precision policy and the budget for
/// exact big-power comparisons.
#[derive(Clone, Copy, Debug)]
pub struct CheckCtx {
    pub precision: Precision,
    pub digit_budget: u64,
}

impl Default for CheckCtx {
    fn default() -> Self {
        CheckCtx { precision: Precision::default(), digit_budget: DEFAULT_DIGIT_BUDGET }
    }
}

/// One related-root class with the derived gap quantities.
#[derive(Clone, Debug)]
pub struct GapChain {
    pub omega_index: u32,
    /// Class members sorted zeta-descending.
    pub records: Vec<SolutionRecord>,
    /// Certified enclosure of 2 h^(2/r) / |j|.
    pub h_quantity: RealBall,
    /// Exact floor (|j|/2h) Z_{i-1}^{r-1} for each member after the first.
    pub z_lower_bounds: Vec<RealMag>,
}

impl GapChain {
    pub fn from_class(
        form: &DiagForm,
        mut records: Vec<SolutionRecord>,
        h: u64,
        ctx: CheckCtx,
    ) -> Result<GapChain> {
        guard_h(h)?;
        if records.is_empty() {
            return Err(Error::InvalidSpec("empty solution class".to_string()));
        }
        let omega_index = records[0].omega_index;
        if records.iter().any(|r| r.omega_index != omega_index) {
            return Err(Error::InvalidSpec(
                "class members relate to different roots".to_string(),
            ));
        }
        records.sort_by(|a, b| {
            b.zeta
                .cmp_mag(&a.zeta)
                .then_with(|| a.x.abs().cmp(&b.x.abs()))
                .then_with(|| a.y.abs().cmp(&b.y.abs()))
                .then_with(|| a.y.signum().cmp(&b.y.signum()))
        });
        let jm = j_magnitude(form);
        let h_quantity = h_quantity_ball(&jm, form.r(), h, ctx.precision)?;
        let scale = Rational::new(BigInt::one(), BigInt::from(2 * h as i64));
        let z_lower_bounds = records
            .windows(2)
            .map(|w| jm.mul_rational(&scale).mul(&w[0].z.pow(form.r() - 1)))
            .collect();
        Ok(GapChain { omega_index, records, h_quantity, z_lower_bounds })
    }
}

pub(crate) fn j_magnitude(form: &DiagForm) -> RealMag {
    RealMag::abs_of(form.j())
}

/// Certified 2 h^(2/r) / |j|.
fn h_quantity_ball(jm: &RealMag, r: u32, h: u64, precision: Precision) -> Result<RealBall> {
    let h2 = rational_from_int(h as i64) * rational_from_int(h as i64);
    let mut prec = precision.start;
    loop {
        let jb = jm.embed(prec);
        if jb.lower_bound().is_positive() {
            let numer = RealBall::from_rational(&h2, prec)
                .nth_root_nonneg(r)
                .mul_rational(&rational_from_int(2));
            return Ok(numer.div_pos(&jb));
        }
        if prec >= precision.max {
            return Err(Error::PrecisionExhausted { max_bits: precision.max });
        }
        prec = (prec * 2).min(precision.max);
    }
}

fn approx(mag: &RealMag) -> String {
    mag.embed(64).mid().to_decimal(6)
}

fn approx_ball(b: &RealBall) -> String {
    b.mid().to_decimal(6)
}

fn same_solution(a: &SolutionRecord, b: &SolutionRecord) -> bool {
    a.x == b.x && a.y == b.y
}

/// Compare an exact magnitude against a positive rational power product.
/// Rational-square magnitudes route through the power comparison engine;
/// a genuine quadratic irrational is certified by balls first and, if the
/// sides could be equal, by clearing denominators inside the field.
fn cmp_mag_vs_product(lhs: &RealMag, rhs: &PowerProduct, ctx: CheckCtx) -> Result<Ordering> {
    if let Some(q) = lhs.squared_rational() {
        let lhs_pp = PowerProduct::from_factor(q, Rational::new(1.into(), 2.into()));
        return lhs_pp.compare(rhs, ctx.precision, ctx.digit_budget);
    }
    let mut prec = ctx.precision.start;
    loop {
        let diff = lhs.embed(prec).sub(&rhs.eval_ball(prec));
        if let Some(sign) = diff.certified_sign() {
            return Ok(sign);
        }
        if prec >= ctx.precision.max {
            break;
        }
        prec = (prec * 2).min(ctx.precision.max);
    }
    let mut m = BigInt::one();
    for (_, e) in rhs.factors() {
        m = m.lcm(e.denom());
    }
    let m_u32 = m
        .to_u32()
        .filter(|&m| m <= 1_000_000)
        .ok_or(Error::DigitBudgetExceeded { needed: u64::MAX, budget: ctx.digit_budget })?;
    let est = est_digits(lhs) * m_u32 as u64;
    if est > ctx.digit_budget {
        return Err(Error::DigitBudgetExceeded { needed: est, budget: ctx.digit_budget });
    }
    let lhs_pow = lhs.pow(m_u32);
    let mut rhs_val = Rational::one();
    for (b, e) in rhs.factors() {
        let ie = (e * Rational::from_integer(m.clone())).to_integer();
        let ie = ie
            .to_i64()
            .ok_or(Error::DigitBudgetExceeded { needed: u64::MAX, budget: ctx.digit_budget })?;
        rhs_val *= rational_int_pow(b, ie);
    }
    Ok(lhs_pow.cmp_mag(&RealMag::from_rational(&rhs_val)))
}

fn est_digits(mag: &RealMag) -> u64 {
    let bits = match mag {
        RealMag::Quad(e) => {
            e.a().numer().bits()
                + e.a().denom().bits()
                + e.b().numer().bits()
                + e.b().denom().bits()
        }
        RealMag::Sqrt(q) => q.numer().bits() + q.denom().bits(),
    };
    (bits.max(8) * 30103) / 100_000 + 1
}

/// Exact test of |j| > 2 h^(2/r), equivalently |j|^r > 2^r h^2.
pub(crate) fn j_exceeds_gap_floor(jm: &RealMag, r: u32, h: u64) -> bool {
    let rhs = rational_int_pow(&rational_from_int(2), r as i64)
        * rational_from_int(h as i64)
        * rational_from_int(h as i64);
    jm.pow(r).cmp_mag(&RealMag::from_rational(&rhs)) == Ordering::Greater
}

/// Size floor for the second of two distinct class members:
/// Z_* >= |j| / (2 h^(1/r)), checked as 2^r h Z_*^r >= |j|^r, together with
/// the intermediate bound |j| <= 2 Z Z_*.
pub fn check_pair(
    rec: &SolutionRecord,
    rec_star: &SolutionRecord,
    form: &DiagForm,
    h: u64,
    ctx: CheckCtx,
) -> Result<LemmaVerdict> {
    guard_h(h)?;
    if same_solution(rec, rec_star) {
        return Err(Error::SameSolution);
    }
    if rec.omega_index != rec_star.omega_index {
        return Ok(LemmaVerdict {
            lemma_id: LemmaId::ZStar,
            status: LemmaStatus::NotApplicable,
            hypothesis_trace: format!(
                "solutions ({},{}) and ({},{}) relate to different roots ({} vs {})",
                rec.x, rec.y, rec_star.x, rec_star.y, rec.omega_index, rec_star.omega_index
            ),
            margin: None,
        });
    }
    // Orient the pair so the starred solution has the smaller zeta.
    let (rec, rec_star, swapped) = if rec.zeta.cmp_mag(&rec_star.zeta) == Ordering::Less {
        (rec_star, rec, true)
    } else {
        (rec, rec_star, false)
    };
    let r = form.r();
    let jm = j_magnitude(form);
    let intermediate_ok = {
        let bound = rec.z.mul(&rec_star.z).mul_rational(&rational_from_int(2));
        jm.cmp_mag(&bound) != Ordering::Greater
    };
    let lhs = rec_star
        .z
        .pow(r)
        .mul_rational(&(rational_int_pow(&rational_from_int(2), r as i64)
            * rational_from_int(h as i64)));
    let main_ok = lhs.cmp_mag(&jm.pow(r)) != Ordering::Less;
    let prec = ctx.precision.start;
    let floor = {
        let den = RealBall::from_rational(&rational_from_int(h as i64), prec)
            .nth_root_nonneg(r)
            .mul_rational(&rational_from_int(2));
        jm.embed(prec).div_pos(&den)
    };
    let margin = rec_star.z.embed(prec).sub(&floor);
    let mut trace = format!(
        "pair ({},{}) and ({},{}) in class {}: Z* = {} vs |j|/(2 h^(1/r)) = {}",
        rec.x,
        rec.y,
        rec_star.x,
        rec_star.y,
        rec.omega_index,
        approx(&rec_star.z),
        approx_ball(&floor)
    );
    if swapped {
        trace.push_str("; inputs reordered so zeta* <= zeta");
    }
    if !intermediate_ok {
        trace.push_str("; intermediate bound |j| <= 2 Z Z* failed");
    }
    Ok(LemmaVerdict {
        lemma_id: LemmaId::ZStar,
        status: if main_ok && intermediate_ok {
            LemmaStatus::Holds
        } else {
            LemmaStatus::Violated
        },
        hypothesis_trace: trace,
        margin: Some(margin),
    })
}

/// Geometric growth of consecutive class members:
/// Z_i >= (|j| / 2h) Z_{i-1}^{r-1}, under the hypothesis |j| > 2 h^(2/r)
/// whenever D > 0 (no hypothesis for negative D).
pub fn check_gap(
    prev: &SolutionRecord,
    curr: &SolutionRecord,
    form: &DiagForm,
    h: u64,
    ctx: CheckCtx,
) -> Result<LemmaVerdict> {
    guard_h(h)?;
    if same_solution(prev, curr) {
        return Err(Error::SameSolution);
    }
    if prev.omega_index != curr.omega_index {
        return Ok(LemmaVerdict {
            lemma_id: LemmaId::Gap,
            status: LemmaStatus::NotApplicable,
            hypothesis_trace: format!(
                "solutions relate to different roots ({} vs {})",
                prev.omega_index, curr.omega_index
            ),
            margin: None,
        });
    }
    assert_ne!(
        curr.zeta.cmp_mag(&prev.zeta),
        Ordering::Greater,
        "gap check requires zeta-descending order"
    );
    let r = form.r();
    let jm = j_magnitude(form);
    let d_positive = form.big_d().is_positive();
    if d_positive && !j_exceeds_gap_floor(&jm, r, h) {
        return Ok(LemmaVerdict {
            lemma_id: LemmaId::Gap,
            status: LemmaStatus::NotApplicable,
            hypothesis_trace: format!(
                "positive D requires |j| > 2 h^(2/r): |j| = {} fails the floor (|j|^r = {} vs 2^r h^2 = {})",
                approx(&jm),
                approx(&jm.pow(r)),
                approx(&RealMag::from_rational(
                    &(rational_int_pow(&rational_from_int(2), r as i64)
                        * rational_from_int(h as i64)
                        * rational_from_int(h as i64))
                ))
            ),
            margin: None,
        });
    }
    // 2 h Z_i >= |j| Z_{i-1}^{r-1}, exactly.
    let lhs = curr.z.mul_rational(&rational_from_int(2 * h as i64));
    let rhs = jm.mul(&prev.z.pow(r - 1));
    let ok = lhs.cmp_mag(&rhs) != Ordering::Less;
    let prec = ctx.precision.start;
    let floor = jm
        .embed(prec)
        .mul(&prev.z.embed(prec).pow(r - 1))
        .mul_rational(&Rational::new(BigInt::one(), BigInt::from(2 * h as i64)));
    let margin = curr.z.embed(prec).sub(&floor);
    let trace = format!(
        "consecutive members ({},{}) -> ({},{}) of class {}: Z_i = {} vs (|j|/2h) Z_(i-1)^(r-1) = {}{}",
        prev.x,
        prev.y,
        curr.x,
        curr.y,
        curr.omega_index,
        approx(&curr.z),
        approx_ball(&floor),
        if d_positive { "; hypothesis |j| > 2 h^(2/r) verified" } else { "; D < 0: unconditional" }
    );
    Ok(LemmaVerdict {
        lemma_id: LemmaId::Gap,
        status: if ok { LemmaStatus::Holds } else { LemmaStatus::Violated },
        hypothesis_trace: trace,
        margin: Some(margin),
    })
}

/// Per-record and per-class checks: the exact polar form of u/v for
/// positive D, the root-distance bound, the smallness of zeta from the
/// second member on, and the iterated smallness bound.
pub fn check_class(
    chain: &GapChain,
    form: &DiagForm,
    h: u64,
    ctx: CheckCtx,
) -> Result<Vec<LemmaVerdict>> {
    guard_h(h)?;
    let mut out = Vec::new();
    for rec in &chain.records {
        out.push(realmu_verdict(rec, form, ctx)?);
    }
    for rec in &chain.records {
        out.push(alld_verdict(rec, form, ctx)?);
    }
    out.push(zeta_note_verdict(chain, form, h, ctx));
    out.push(iteration_verdict(chain, form, h, ctx)?);
    Ok(out)
}

/// u/v = |mu^-1|^(1/r) e^(pi i eps / r) omega for positive D, verified by
/// exact sign structure of (u/v)^r plus the recomputed root assignment.
fn realmu_verdict(rec: &SolutionRecord, form: &DiagForm, ctx: CheckCtx) -> Result<LemmaVerdict> {
    let who = format!("({},{})", rec.x, rec.y);
    if !form.big_d().is_positive() {
        return Ok(LemmaVerdict {
            lemma_id: LemmaId::RealMu,
            status: LemmaStatus::NotApplicable,
            hypothesis_trace: format!("{who}: requires D > 0"),
            margin: None,
        });
    }
    if rec.v.is_zero() {
        return Ok(LemmaVerdict {
            lemma_id: LemmaId::RealMu,
            status: LemmaStatus::NotApplicable,
            hypothesis_trace: format!("{who}: v = 0, the ratio u/v is undefined"),
            margin: None,
        });
    }
    if rec.u.is_zero() {
        return Ok(LemmaVerdict {
            lemma_id: LemmaId::RealMu,
            status: LemmaStatus::Holds,
            hypothesis_trace: format!("{who}: u = 0 and |mu^-1| = 0, both sides vanish"),
            margin: Some(RealBall::zero(ctx.precision.start)),
        });
    }
    let r = form.r();
    let eps = rec.epsilon.unwrap_or(0);
    let w = rec.u.div(&rec.v).expect("v nonzero");
    let wr = w.pow(r);
    let mu_inv = rec.mu_inv.clone().expect("eta nonzero since v nonzero");
    let mut failures = Vec::new();
    if wr != mu_inv {
        failures.push("(u/v)^r != xi/eta".to_string());
    }
    if wr.is_complex() {
        failures.push("(u/v)^r is not real".to_string());
    } else {
        let sign = wr.sign_real();
        let want = if eps == 0 { Ordering::Greater } else { Ordering::Less };
        if sign != want {
            failures.push(format!("sign of (u/v)^r contradicts epsilon = {eps}"));
        }
    }
    let recomputed = related_root(&rec.u, &rec.v, r, ctx.precision)?;
    if recomputed.omega_index != rec.omega_index || recomputed.tie_flag != rec.tie_flag {
        failures.push(format!(
            "root assignment mismatch: recomputed {} (tie {}) vs stored {} (tie {})",
            recomputed.omega_index, recomputed.tie_flag, rec.omega_index, rec.tie_flag
        ));
    }
    // Reported margin: enclosure of |u/v - |mu^-1|^(1/r) e^(pi i (eps+2k)/r)|.
    let prec = ctx.precision.start;
    let mag_root = RealMag::abs_of(&mu_inv).embed(prec).nth_root_nonneg(r);
    let angle = Rational::new(
        BigInt::from(eps as i64 + 2 * rec.omega_index as i64),
        BigInt::from(r as i64),
    );
    let (c, s) = cos_sin_pi(&angle, prec);
    let wb = w.embed(prec);
    let dr = wb.real_part().sub(&mag_root.mul(&c));
    let di = wb.imag_part().sub(&mag_root.mul(&s));
    let margin = dr.square().add(&di.square()).sqrt_nonneg();
    let trace = if failures.is_empty() {
        format!(
            "{who}: (u/v)^r = xi/eta is real with the sign demanded by epsilon = {eps}; root index {} matches the arc convention",
            rec.omega_index
        )
    } else {
        format!("{who}: {}", failures.join("; "))
    };
    Ok(LemmaVerdict {
        lemma_id: LemmaId::RealMu,
        status: if failures.is_empty() { LemmaStatus::Holds } else { LemmaStatus::Violated },
        hypothesis_trace: trace,
        margin: Some(margin),
    })
}

/// |u/v - omega| <= (Z/|v|) zeta, assuming epsilon = 0 whenever D > 0.
fn alld_verdict(rec: &SolutionRecord, form: &DiagForm, ctx: CheckCtx) -> Result<LemmaVerdict> {
    let who = format!("({},{})", rec.x, rec.y);
    let d_positive = form.big_d().is_positive();
    if d_positive && rec.epsilon == Some(1) {
        return Ok(LemmaVerdict {
            lemma_id: LemmaId::AllD,
            status: LemmaStatus::NotApplicable,
            hypothesis_trace: format!("{who}: requires epsilon = 0 when D > 0, record has epsilon = 1"),
            margin: None,
        });
    }
    if rec.v.is_zero() {
        return Ok(LemmaVerdict {
            lemma_id: LemmaId::AllD,
            status: LemmaStatus::NotApplicable,
            hypothesis_trace: format!("{who}: v = 0, the ratio u/v is undefined"),
            margin: None,
        });
    }
    let r = form.r();
    let k = rec.omega_index;
    let w = rec.u.div(&rec.v).expect("v nonzero");
    let rhs = rec.z.div(&RealMag::abs_of(&rec.v)).mul(&rec.zeta);
    // Exact route when omega is rational (+1 or -1) and u/v is real.
    let omega_rational: Option<QuadElem> = if k == r {
        Some(QuadElem::one())
    } else if r % 2 == 0 && k == r / 2 {
        Some(QuadElem::one().neg())
    } else {
        None
    };
    if let Some(om) = omega_rational {
        if !w.is_complex() {
            let lhs = RealMag::abs_of(&w.sub(&om));
            let ok = lhs.cmp_mag(&rhs) != Ordering::Greater;
            let prec = ctx.precision.start;
            let margin = rhs.embed(prec).sub(&lhs.embed(prec));
            return Ok(LemmaVerdict {
                lemma_id: LemmaId::AllD,
                status: if ok { LemmaStatus::Holds } else { LemmaStatus::Violated },
                hypothesis_trace: format!(
                    "{who}: exact comparison |u/v - omega| = {} vs (Z/|v|) zeta = {}",
                    approx(&lhs),
                    approx(&rhs)
                ),
                margin: Some(margin),
            });
        }
    }
    let mut prec = ctx.precision.start;
    loop {
        let wb = w.embed(prec);
        let angle = Rational::new(BigInt::from(2 * k as i64), BigInt::from(r as i64));
        let (c, s) = cos_sin_pi(&angle, prec);
        let dr = wb.real_part().sub(&c);
        let di = wb.imag_part().sub(&s);
        let lhs = dr.square().add(&di.square()).sqrt_nonneg();
        let margin = rhs.embed(prec).sub(&lhs);
        if let Some(sign) = margin.certified_sign() {
            return Ok(LemmaVerdict {
                lemma_id: LemmaId::AllD,
                status: if sign == Ordering::Less {
                    LemmaStatus::Violated
                } else {
                    LemmaStatus::Holds
                },
                hypothesis_trace: format!(
                    "{who}: certified ball comparison |u/v - omega| = {} vs (Z/|v|) zeta = {} at {} bits",
                    approx_ball(&lhs),
                    approx(&rhs),
                    prec
                ),
                margin: Some(margin),
            });
        }
        if prec >= ctx.precision.max {
            return Err(Error::PrecisionExhausted { max_bits: ctx.precision.max });
        }
        prec = (prec * 2).min(ctx.precision.max);
    }
}

/// zeta_i < 1 for every member after the first, provided |j| > 2 h^(2/r).
fn zeta_note_verdict(chain: &GapChain, form: &DiagForm, h: u64, ctx: CheckCtx) -> LemmaVerdict {
    let r = form.r();
    let jm = j_magnitude(form);
    if !j_exceeds_gap_floor(&jm, r, h) {
        return LemmaVerdict {
            lemma_id: LemmaId::ZetaNote,
            status: LemmaStatus::NotApplicable,
            hypothesis_trace: format!(
                "class {}: requires |j| > 2 h^(2/r); |j| = {} fails the floor",
                chain.omega_index,
                approx(&jm)
            ),
            margin: None,
        };
    }
    if chain.records.len() < 2 {
        return LemmaVerdict {
            lemma_id: LemmaId::ZetaNote,
            status: LemmaStatus::Holds,
            hypothesis_trace: format!(
                "class {}: no member beyond the first, conclusion is vacuous",
                chain.omega_index
            ),
            margin: None,
        };
    }
    // Sorted descending, so the largest zeta with i >= 2 is the second one.
    let zeta2 = &chain.records[1].zeta;
    let ok = zeta2.cmp_mag(&RealMag::from_rational(&Rational::one())) == Ordering::Less;
    let prec = ctx.precision.start;
    let margin = RealBall::from_rational(&Rational::one(), prec).sub(&zeta2.embed(prec));
    LemmaVerdict {
        lemma_id: LemmaId::ZetaNote,
        status: if ok { LemmaStatus::Holds } else { LemmaStatus::Violated },
        hypothesis_trace: format!(
            "class {}: |j| > 2 h^(2/r) verified; largest zeta beyond the first member is {}",
            chain.omega_index,
            approx(zeta2)
        ),
        margin: Some(margin),
    }
}

/// zeta_{t-1} < 1/2 for a class of t >= 3 members under the strengthened
/// size hypothesis on |j|. The iteration exponent function R(k) is taken to
/// be (r-1)^(k-1), matching the geometric sum in the underlying estimate;
/// this adopted definition is surfaced in every trace.
fn iteration_verdict(
    chain: &GapChain,
    form: &DiagForm,
    h: u64,
    ctx: CheckCtx,
) -> Result<LemmaVerdict> {
    let r = form.r();
    let t = chain.records.len();
    let adoption = "with R(k) adopted as (r-1)^(k-1)";
    if t < 3 {
        return Ok(LemmaVerdict {
            lemma_id: LemmaId::Iteration,
            status: LemmaStatus::NotApplicable,
            hypothesis_trace: format!(
                "class {}: needs at least 3 members, has {} ({adoption})",
                chain.omega_index, t
            ),
            margin: None,
        });
    }
    // R(t-1) - 1 = (r-1)^(t-2) - 1.
    let r_cap_minus_one =
        num_traits::pow(BigInt::from(r as i64 - 1), t - 2) - BigInt::one();
    let e2 = Rational::one()
        + Rational::new(
            BigInt::from(r as i64 - 2),
            BigInt::from(r as i64) * r_cap_minus_one,
        );
    let gate = PowerProduct::from_factor(rational_from_int(2), e2.clone()).mul(
        &PowerProduct::from_int_pow(
            h as i64,
            Rational::new(2.into(), BigInt::from(r as i64)),
        ),
    );
    let jm = j_magnitude(form);
    if cmp_mag_vs_product(&jm, &gate, ctx)? != Ordering::Greater {
        return Ok(LemmaVerdict {
            lemma_id: LemmaId::Iteration,
            status: LemmaStatus::NotApplicable,
            hypothesis_trace: format!(
                "class {}: requires |j| > 2^({}) h^(2/r) = {}; |j| = {} fails ({adoption})",
                chain.omega_index,
                crate::exactnum::format_rational(&e2),
                approx_ball(&gate.eval_ball(64)),
                approx(&jm)
            ),
            margin: None,
        });
    }
    let zeta_last = &chain.records[t - 2].zeta;
    let half = Rational::new(1.into(), 2.into());
    let ok = zeta_last.cmp_mag(&RealMag::from_rational(&half)) == Ordering::Less;
    let prec = ctx.precision.start;
    let margin = RealBall::from_rational(&half, prec).sub(&zeta_last.embed(prec));
    Ok(LemmaVerdict {
        lemma_id: LemmaId::Iteration,
        status: if ok { LemmaStatus::Holds } else { LemmaStatus::Violated },
        hypothesis_trace: format!(
            "class {}: t = {}, |j| clears the strengthened floor; zeta_(t-1) = {} vs 1/2 ({adoption})",
            chain.omega_index,
            t,
            approx(zeta_last)
        ),
        margin: Some(margin),
    })
}

/// Exact sign of Z_3 - Z_2^{nr} / (2^{n+4} r^{(3nr+2)/(r-2)} |j|^{(nr+2)/(r-2)} h^{2n+1}),
/// decided by raising both sides to the power 2(r-2).
fn zk_compare(
    z2: &RealMag,
    z3: &RealMag,
    jm: &RealMag,
    r: u32,
    h: u64,
    n: u32,
) -> Ordering {
    let e_z3 = 2 * (r - 2);
    let e_j = 2 * (n * r + 2);
    let e_two = 2 * (n + 4) * (r - 2);
    let e_r = 2 * (3 * n * r + 2);
    let e_h = 2 * (2 * n + 1) * (r - 2);
    let e_z2 = 2 * n * r * (r - 2);
    let k = rational_int_pow(&rational_from_int(2), e_two as i64)
        * rational_int_pow(&rational_from_int(r as i64), e_r as i64)
        * rational_int_pow(&rational_from_int(h as i64), e_h as i64);
    let lhs = z3.pow(e_z3).mul(&jm.pow(e_j)).mul_rational(&k);
    let rhs = z2.pow(e_z2);
    lhs.cmp_mag(&rhs)
}

/// Lower bound for the third member of a three-element class, with the
/// divergence scan that exhibits how the right-hand side eventually
/// overtakes any fixed Z_3.
pub fn zk_bound(
    chain: &GapChain,
    form: &DiagForm,
    h: u64,
    n: u32,
    ctx: CheckCtx,
) -> Result<LemmaVerdict> {
    let r = form.r();
    if r < 7 {
        return Err(Error::ParameterOutOfRange(format!(
            "power bound check requires r >= 7, got {r}"
        )));
    }
    guard_h(h)?;
    if n == 0 || n > 10_000 {
        return Err(Error::ParameterOutOfRange(
            "need 1 <= n <= 10000".to_string(),
        ));
    }
    if chain.records.len() != 3 {
        return Err(Error::WrongClassSize { got: chain.records.len(), want: 3 });
    }
    let jm = j_magnitude(form);
    let rr = r as i64;
    let denom = Rational::new(BigInt::from(rr * rr - 5 * rr - 2), BigInt::one());
    let i7 = Rational::new(BigInt::from(13 * rr * rr), BigInt::one()) / &denom;
    let i8 = Rational::new(BigInt::from(2 * (3 * rr - 1) * (rr - 2)), BigInt::one()) / &denom;
    let r_rat = Rational::new(BigInt::from(rr), BigInt::one());
    let gate = PowerProduct::from_int(2)
        .mul(&PowerProduct::from_int_pow(rr, &i7 / &r_rat))
        .mul(&PowerProduct::from_int_pow(h as i64, &i8 / &r_rat));
    if cmp_mag_vs_product(&jm, &gate, ctx)? == Ordering::Less {
        return Ok(LemmaVerdict {
            lemma_id: LemmaId::ZkBound,
            status: LemmaStatus::NotApplicable,
            hypothesis_trace: format!(
                "class {}: requires |j| >= 2 r^(i7/r) h^(i8/r) = {}; |j| = {} fails",
                chain.omega_index,
                approx_ball(&gate.eval_ball(64)),
                approx(&jm)
            ),
            margin: None,
        });
    }
    let z2 = &chain.records[1].z;
    let z3 = &chain.records[2].z;
    let ok = zk_compare(z2, z3, &jm, r, h, n) != Ordering::Less;
    // Reported margin: Z_3 minus the right-hand side at the given n.
    let prec = ctx.precision.start;
    let denom_ball = PowerProduct::from_int_pow(2, rational_from_int(n as i64 + 4))
        .mul(&PowerProduct::from_int_pow(
            rr,
            Rational::new(BigInt::from(3 * n as i64 * rr + 2), BigInt::from(rr - 2)),
        ))
        .mul(&PowerProduct::from_int_pow(
            h as i64,
            rational_from_int(2 * n as i64 + 1),
        ))
        .eval_ball(prec)
        .mul(&jm.embed(prec).pow(n * r + 2).nth_root_nonneg(r - 2));
    let rhs_ball = z2.embed(prec).pow(n * r).div_pos(&denom_ball);
    let margin = z3.embed(prec).sub(&rhs_ball);
    // Divergence scan: first n at which the right-hand side overtakes Z_3.
    let mut exceed_at = None;
    for np in 1..=64u32 {
        if zk_compare(z2, z3, &jm, r, h, np) == Ordering::Less {
            exceed_at = Some(np);
            break;
        }
    }
    let divergence = match exceed_at {
        Some(np) => format!("right-hand side exceeds Z_3 from n = {np}"),
        None => "right-hand side stays below Z_3 for n <= 64".to_string(),
    };
    Ok(LemmaVerdict {
        lemma_id: LemmaId::ZkBound,
        status: if ok { LemmaStatus::Holds } else { LemmaStatus::Violated },
        hypothesis_trace: format!(
            "class {}: size gate on |j| verified; at n = {}, Z_3 = {} vs bound = {}; {}",
            chain.omega_index,
            n,
            approx(z3),
            approx_ball(&rhs_ball),
            divergence
        ),
        margin: Some(margin),
    })
}

/// Exponent quintuple for the inductive size argument, together with the
/// branch parameters (n, g) and the externally supplied nonvanishing flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyQuintuple {
    pub a1: Rational,
    pub a2: Rational,
    pub a3: Rational,
    pub a4: Rational,
    pub a5: Rational,
    pub n: u32,
    pub g: u8,
    pub sigma_nonzero: bool,
}

/// The recomputed bound values for one quintuple at a given r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedBounds {
    pub a_one: Rational,
    pub b1: Rational,
    pub b2: Rational,
    pub b3: Rational,
    pub b4: Rational,
}

#[derive(Clone, Debug)]
pub struct InductionOutcome {
    pub bounds: DerivedBounds,
    /// Successor quintuple for the next level (n+1, same branch); None when
    /// the nonvanishing flag is not asserted.
    pub successor: Option<PropertyQuintuple>,
}

impl PropertyQuintuple {
    pub fn new(
        a: [Rational; 5],
        n: u32,
        g: u8,
        sigma_nonzero: bool,
    ) -> Result<PropertyQuintuple> {
        if n == 0 {
            return Err(Error::ParameterOutOfRange("n must be at least 1".to_string()));
        }
        if g > 1 {
            return Err(Error::ParameterOutOfRange("g must be 0 or 1".to_string()));
        }
        let [a1, a2, a3, a4, a5] = a;
        Ok(PropertyQuintuple { a1, a2, a3, a4, a5, n, g, sigma_nonzero })
    }

    /// Base quintuple [r-1, 1, 0, -1, 1] at branch (n, g) = (1, 0).
    pub fn seed(r: u32) -> PropertyQuintuple {
        PropertyQuintuple {
            a1: rational_from_int(r as i64 - 1),
            a2: Rational::one(),
            a3: Rational::zero(),
            a4: -Rational::one(),
            a5: Rational::one(),
            n: 1,
            g: 0,
            sigma_nonzero: true,
        }
    }

    /// Recompute the bound values; nothing is cached.
    pub fn derived(&self, r: u32) -> Result<DerivedBounds> {
        if r < 7 {
            return Err(Error::ParameterOutOfRange(format!(
                "induction machinery requires r >= 7, got {r}"
            )));
        }
        let rr = rational_from_int(r as i64);
        let rm1 = rational_from_int(r as i64 - 1);
        let rm2 = rational_from_int(r as i64 - 2);
        let n = rational_from_int(self.n as i64);
        let g = rational_from_int(self.g as i64);
        let a_one = &self.a1 * &rm1 - &n * &rr - Rational::one() + &g;
        let b1 = &a_one
            - &self.a4 * &rm1
            - (&rr * (&g + &n) + rational_from_int(2)) / &rm2;
        let b2 = &a_one + &self.a2 * &rm1 + rational_from_int(3) * &n + rational_from_int(4);
        let b3 = &self.a3 * &rm1
            + (&rr * (rational_from_int(2) * &g + rational_from_int(3) * &n)
                + rational_from_int(2))
                / &rm2;
        let b4 = &a_one / &rr + &self.a5 * &rm1 + Rational::one();
        Ok(DerivedBounds { a_one, b1, b2, b3, b4 })
    }
}

/// Check the four growth conditions and emit the successor quintuple.
pub fn induction_step(p: &PropertyQuintuple, r: u32) -> Result<InductionOutcome> {
    let bounds = p.derived(r)?;
    let rr = rational_from_int(r as i64);
    let rm2 = rational_from_int(r as i64 - 2);
    let qr = rational_from_int((r as i64) * (r as i64) - 5 * (r as i64) - 2);
    let c13 = rational_from_int(13) * &rr * &rr / &qr;
    let c_iv = rational_from_int(2)
        * rational_from_int(3 * r as i64 - 1)
        * &rm2
        / &qr;
    let two = rational_from_int(2);
    let cond = [
        bounds.a_one > Rational::zero(),
        bounds.b1 > Rational::zero(),
        &bounds.b1 * &c13 >= &rr * &(&bounds.b3 + &((&bounds.b2 - &bounds.b1) / &two)),
        &bounds.b1 * &c_iv >= &rr * &bounds.b4,
    ];
    if cond.iter().any(|c| !c) {
        let labels = ["i", "ii", "iii", "iv"];
        let failed = cond
            .iter()
            .zip(labels)
            .filter(|(ok, _)| !**ok)
            .map(|(_, l)| l.to_string())
            .collect();
        return Err(Error::ConditionFailed { failed });
    }
    let successor = if p.sigma_nonzero {
        let n = rational_from_int(p.n as i64);
        let g = rational_from_int(p.g as i64);
        Some(PropertyQuintuple {
            a1: &rr * &(&n + &Rational::one() - &g) - Rational::one() + &g,
            a2: &n + &rational_from_int(4),
            a3: (&rr * &(rational_from_int(2) * &g + rational_from_int(3) * &n)
                + rational_from_int(2))
                / &rm2,
            a4: (&rr * &(&g + &n) + rational_from_int(2)) / &rm2,
            a5: rational_from_int(2) * &n + Rational::one() - &g,
            n: p.n + 1,
            g: p.g,
            sigma_nonzero: p.sigma_nonzero,
        })
    } else {
        None
    };
    Ok(InductionOutcome { bounds, successor })
}
