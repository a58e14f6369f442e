//! Exact arithmetic for diagonalizable Thue inequalities `0 < |F(x,y)| <= h`
//! where `F = (alpha*x + beta*y)^r - (gamma*x + delta*y)^r` with entries in a
//! quadratic field `Q(sqrt(d))`.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactnum`]: rationals, quadratic field elements, certified balls on a
//!   dyadic kernel, and exact comparison of power products `prod b_i^{e_i}`.
//! - [`forms`]: diagonal forms, expansion to integer binary forms, the
//!   invariant set (j, chi, (A,B,C), D, Delta, Delta'), and definiteness.
//! - [`analysis`]: per-solution functionals (u, v, xi, eta, Z, zeta, mu,
//!   epsilon), related-root classification, and the omega partition.
//! - [`lemmas`]: mechanical verification of the size/gap/class lemmas and the
//!   exponent-tuple induction step.
//! - [`thresholds`]: theorem hypothesis thresholds and solution-count tables.
//! - [`solver`]: bounded exhaustive search, saturation heuristics, and
//!   theorem consistency checks.
//!
//! Every inequality verdict is produced by exact arithmetic (quadratic-field
//! signs, big-integer cross multiplication) and is accompanied by a certified
//! ball margin; floating point is never consulted for a decision.

pub mod analysis;
pub mod exactnum;
pub mod forms;
pub mod lemmas;
pub mod report;
pub mod solver;
pub mod thresholds;

/// Crate-wide error type. Variants mirror the failure modes of the public
/// operations; internal invariant breaches panic instead.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degenerate form: j = alpha*delta - beta*gamma = 0")]
    DegenerateForm,
    #[error("expansion has a non-integer coefficient at x^{power_x} y^{power_y}: {value}")]
    NotIntegral {
        power_x: u32,
        power_y: u32,
        value: String,
    },
    #[error("uv does not factor through a rational quadratic: {0}")]
    NotCommensurable(String),
    #[error("chi^2 is irrational ({0}); quadruple lies outside the supported structure")]
    IrrationalChiSquare(String),
    #[error("quadruple mixes distinct fields: d = {0} and d = {1}")]
    MixedFields(i64, i64),
    #[error("F({x}, {y}) = 0; zero values are excluded")]
    ZeroValue { x: i64, y: i64 },
    #[error("({x}, {y}) is not primitive: gcd = {gcd}")]
    NotPrimitive { x: i64, y: i64, gcd: String },
    #[error("precision exhausted at {max_bits} bits without a certified sign")]
    PrecisionExhausted { max_bits: u32 },
    #[error("the two solutions are identical; two distinct ones are required")]
    SameSolution,
    #[error("class has {got} members, expected exactly {want}")]
    WrongClassSize { got: usize, want: usize },
    #[error("induction conditions failed: {}", failed.join(", "))]
    ConditionFailed { failed: Vec<String> },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("digit budget exceeded: needs about {needed} digits, budget is {budget}")]
    DigitBudgetExceeded { needed: u64, budget: u64 },
    #[error("found {found} solutions, exceeding the predicted bound {bound}")]
    BoundExceeded { found: usize, bound: u64 },
    #[error("invalid form description: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
