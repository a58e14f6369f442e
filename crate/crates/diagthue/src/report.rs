//! JSON and CSV rendering plus form-file parsing.
//!
//! Every numeric value is emitted exactly: integers and rationals as decimal
//! strings, algebraic quantities as quadratic-field coordinates, and certified
//! enclosures as {center, radius} pairs. serde_json's default map keeps keys
//! sorted, so a fixed tree renders to fixed bytes.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::analysis::{OmegaPartition, RealMag, SolutionRecord};
use crate::exactnum::ball::RealBall;
use crate::exactnum::power::PowerProduct;
use crate::exactnum::quad::QuadElem;
use crate::exactnum::{format_rational, parse_rational, Rational};
use crate::forms::{DiagForm, IntBinaryForm, InvariantSet};
use crate::lemmas::{DerivedBounds, InductionOutcome, LemmaVerdict, PropertyQuintuple};
use crate::solver::{ClassSaturation, ConsistencyVerdict, SaturationStatus, SolveReport};
use crate::thresholds::{HypothesisReport, TableRow};
use crate::{Error, Result};

/// Significant digits used when an enclosure is rendered in decimal.
const CENTER_DIGITS: usize = 25;
const RADIUS_DIGITS: usize = 6;

/// Provenance block embedded in every report.
#[derive(Clone, Debug)]
pub struct RunManifest {
    pub command: String,
    pub form_path: Option<String>,
    pub params: BTreeMap<String, String>,
    pub out_paths: Vec<String>,
    pub version: String,
    pub timing_ms: u64,
}

impl RunManifest {
    pub fn new(command: &str) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            form_path: None,
            params: BTreeMap::new(),
            out_paths: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timing_ms: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

pub fn manifest_json(m: &RunManifest) -> Value {
    let params: Map<String, Value> = m
        .params
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    json!({
        "command": m.command,
        "form": m.form_path,
        "parameters": params,
        "outputs": m.out_paths,
        "version": m.version,
        "timing_ms": m.timing_ms,
    })
}

/// Wrap a payload object with the manifest under a stable top-level shape.
pub fn with_manifest(manifest: &RunManifest, mut payload: Map<String, Value>) -> Value {
    payload.insert("manifest".into(), manifest_json(manifest));
    Value::Object(payload)
}

pub fn rational_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn bigint_json(n: &num_bigint::BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn quad_json(e: &QuadElem) -> Value {
    json!({
        "a": format_rational(e.a()),
        "b": format_rational(e.b()),
        "d": e.d(),
    })
}

pub fn ball_json(b: &RealBall) -> Value {
    json!({
        "center": b.mid().to_decimal(CENTER_DIGITS),
        "radius": b.rad().to_decimal(RADIUS_DIGITS),
    })
}

/// Exact display form plus a 64-bit enclosure for human consumption.
pub fn mag_json(m: &RealMag) -> Value {
    json!({
        "exact": m.to_string(),
        "approx": ball_json(&m.embed(64)),
    })
}

pub fn power_product_json(p: &PowerProduct, prec: u32) -> Value {
    let factors: Vec<Value> = p
        .factors()
        .iter()
        .map(|(base, exp)| {
            json!({
                "base": format_rational(base),
                "exponent": format_rational(exp),
            })
        })
        .collect();
    json!({
        "factors": factors,
        "log10": ball_json(&p.log10_ball(prec)),
    })
}

pub fn diag_form_json(f: &DiagForm) -> Value {
    json!({
        "kind": "diagonal",
        "r": f.r(),
        "d": f.field_d(),
        "alpha": quad_json(f.alpha()),
        "beta": quad_json(f.beta()),
        "gamma": quad_json(f.gamma()),
        "delta": quad_json(f.delta()),
    })
}

pub fn int_form_json(f: &IntBinaryForm) -> Value {
    let coeffs: Vec<Value> = f.coeffs().iter().map(bigint_json).collect();
    json!({
        "kind": "integer",
        "r": f.r(),
        "coeffs": coeffs,
    })
}

pub fn invariants_json(inv: &InvariantSet) -> Value {
    json!({
        "j": quad_json(&inv.j),
        "chi": quad_json(&inv.chi),
        "A": bigint_json(&inv.quad_a),
        "B": bigint_json(&inv.quad_b),
        "C": bigint_json(&inv.quad_c),
        "D": bigint_json(&inv.big_d),
        "Delta": bigint_json(&inv.delta),
        "DeltaPrime": rational_json(&inv.delta_prime),
    })
}

pub fn record_json(rec: &SolutionRecord) -> Value {
    json!({
        "x": rec.x,
        "y": rec.y,
        "F": bigint_json(&rec.f_value),
        "u": quad_json(&rec.u),
        "v": quad_json(&rec.v),
        "xi": quad_json(&rec.xi),
        "eta": quad_json(&rec.eta),
        "mu": rec.mu.as_ref().map(quad_json),
        "mu_inv": rec.mu_inv.as_ref().map(quad_json),
        "Z": mag_json(&rec.z),
        "zeta": mag_json(&rec.zeta),
        "epsilon": rec.epsilon,
        "omega_index": rec.omega_index,
        "tie": rec.tie_flag,
        "note": rec.note,
    })
}

pub fn partition_json(p: &OmegaPartition) -> Value {
    let classes: Map<String, Value> = p
        .classes
        .iter()
        .map(|(k, members)| {
            let rows: Vec<Value> = members.iter().map(record_json).collect();
            (k.to_string(), Value::Array(rows))
        })
        .collect();
    json!({
        "classes": classes,
        "class_count": p.classes.len(),
        "total": p.classes.values().map(Vec::len).sum::<usize>(),
    })
}

pub fn verdict_json(v: &LemmaVerdict) -> Value {
    json!({
        "lemma": v.lemma_id.to_string(),
        "status": v.status.to_string(),
        "hypothesis_trace": v.hypothesis_trace,
        "margin": v.margin.as_ref().map(ball_json),
    })
}

pub fn saturation_json(s: &ClassSaturation) -> Value {
    let status = match &s.status {
        SaturationStatus::Floor { z_floor, coord_floor, saturated_within_box } => json!({
            "kind": "floor",
            "z_floor": ball_json(z_floor),
            "coord_floor": coord_floor,
            "saturated_within_box": saturated_within_box,
        }),
        SaturationStatus::NotApplicable { reason } => json!({
            "kind": "not_applicable",
            "reason": reason,
        }),
    };
    json!({
        "omega_index": s.omega_index,
        "members": s.members,
        "status": status,
        "note": s.note,
    })
}

pub fn consistency_json(c: &ConsistencyVerdict) -> Value {
    json!({
        "covered": c.covered,
        "n": c.n,
        "predicted_bound": c.predicted_bound,
        "case_row": c.case_row.map(|row| row.to_string()),
        "evidence": c.evidence,
    })
}

pub fn solve_report_json(rep: &SolveReport) -> Map<String, Value> {
    let solutions: Vec<Value> = rep.solutions.iter().map(record_json).collect();
    let saturation: Vec<Value> = rep.saturation.iter().map(saturation_json).collect();
    let mut out = Map::new();
    out.insert("solutions".into(), Value::Array(solutions));
    out.insert("n".into(), json!(rep.n));
    out.insert("partition".into(), partition_json(&rep.partition));
    out.insert("saturation".into(), Value::Array(saturation));
    out.insert(
        "theorem_consistency".into(),
        rep.theorem_consistency
            .as_ref()
            .map(consistency_json)
            .unwrap_or(Value::Null),
    );
    out.insert("searched_box".into(), json!(rep.searched_box));
    out
}

pub fn hypothesis_json(rep: &HypothesisReport, prec: u32) -> Value {
    let mut obj = Map::new();
    obj.insert("theorem".into(), json!(rep.spec.theorem.to_string()));
    obj.insert("r".into(), json!(rep.spec.r));
    obj.insert("h".into(), json!(rep.spec.h));
    obj.insert("threshold".into(), power_product_json(&rep.spec.value, prec));
    obj.insert("delta_prime".into(), rational_json(&rep.delta_prime));
    obj.insert("verdict".into(), json!(rep.verdict));
    obj.insert("case_row".into(), json!(rep.case_row.to_string()));
    obj.insert("predicted_bound".into(), json!(rep.predicted_bound));
    obj.insert("notes".into(), json!(rep.notes));
    if let Some(w) = rep.spec.range_warning() {
        obj.insert("range_warning".into(), json!(w));
    }
    Value::Object(obj)
}

pub fn table_row_json(row: &TableRow) -> Value {
    json!({
        "r": row.r,
        "h": row.h,
        "log10_main": ball_json(&row.log10_main),
        "log10_akss_ii_m4": ball_json(&row.log10_akss_ii_m4),
        "log10_siegel_l1": ball_json(&row.log10_siegel_l1),
        "min_theorem": row.min_theorem,
    })
}

fn csv_decimal(b: &RealBall) -> String {
    b.mid().to_decimal(17)
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("r,h,log10_main,log10_akss_ii_m4,log10_siegel_l1,min_theorem\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.r,
            row.h,
            csv_decimal(&row.log10_main),
            csv_decimal(&row.log10_akss_ii_m4),
            csv_decimal(&row.log10_siegel_l1),
            row.min_theorem,
        ));
    }
    out
}

pub fn solutions_csv(records: &[SolutionRecord]) -> String {
    let mut out = String::from("x,y,F,Z,zeta,omega_index\n");
    for rec in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            rec.x,
            rec.y,
            rec.f_value,
            csv_decimal(&rec.z.embed(64)),
            csv_decimal(&rec.zeta.embed(64)),
            rec.omega_index,
        ));
    }
    out
}

/// Render a quintuple the way the induction literature prints it:
/// a parenthesized comma list with exact rationals.
pub fn quintuple_tuple_string(p: &PropertyQuintuple) -> String {
    format!(
        "({},{},{},{},{})",
        format_rational(&p.a1),
        format_rational(&p.a2),
        format_rational(&p.a3),
        format_rational(&p.a4),
        format_rational(&p.a5),
    )
}

pub fn quintuple_json(p: &PropertyQuintuple) -> Value {
    json!({
        "a1": rational_json(&p.a1),
        "a2": rational_json(&p.a2),
        "a3": rational_json(&p.a3),
        "a4": rational_json(&p.a4),
        "a5": rational_json(&p.a5),
        "n": p.n,
        "g": p.g,
        "sigma_nonzero": p.sigma_nonzero,
        "tuple": quintuple_tuple_string(p),
    })
}

pub fn bounds_json(b: &DerivedBounds) -> Value {
    json!({
        "A1": rational_json(&b.a_one),
        "B1": rational_json(&b.b1),
        "B2": rational_json(&b.b2),
        "B3": rational_json(&b.b3),
        "B4": rational_json(&b.b4),
    })
}

pub fn induction_outcome_json(out: &InductionOutcome) -> Value {
    json!({
        "bounds": bounds_json(&out.bounds),
        "successor": out.successor.as_ref().map(quintuple_json),
    })
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DegenerateForm => "degenerate_form",
        Error::NotIntegral { .. } => "not_integral",
        Error::NotCommensurable(_) => "not_commensurable",
        Error::IrrationalChiSquare(_) => "irrational_chi_square",
        Error::MixedFields(..) => "mixed_fields",
        Error::ZeroValue { .. } => "zero_value",
        Error::NotPrimitive { .. } => "not_primitive",
        Error::PrecisionExhausted { .. } => "precision_exhausted",
        Error::SameSolution => "same_solution",
        Error::WrongClassSize { .. } => "wrong_class_size",
        Error::ConditionFailed { .. } => "condition_failed",
        Error::ParameterOutOfRange(_) => "parameter_out_of_range",
        Error::DigitBudgetExceeded { .. } => "digit_budget_exceeded",
        Error::BoundExceeded { .. } => "bound_exceeded",
        Error::InvalidSpec(_) => "invalid_spec",
    }
}

/// Structured domain-error payload for stderr.
pub fn error_json(e: &Error) -> Value {
    json!({
        "error": {
            "kind": error_kind(e),
            "message": e.to_string(),
        }
    })
}

/// Pretty-print with a trailing newline. Keys arrive sorted from the
/// underlying map, so equal trees give equal bytes.
pub fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON tree is serializable");
    s.push('\n');
    s
}

/// A parsed `--form` file: either the diagonal datum or a raw expanded form.
#[derive(Clone, Debug)]
pub enum FormInput {
    Diagonal(DiagForm),
    Integer(IntBinaryForm),
}

impl FormInput {
    pub fn as_diagonal(&self) -> Result<&DiagForm> {
        match self {
            FormInput::Diagonal(f) => Ok(f),
            FormInput::Integer(_) => Err(Error::InvalidSpec(
                "this operation needs a diagonal form (kind \"diagonal\")".into(),
            )),
        }
    }

    pub fn expanded(&self) -> IntBinaryForm {
        match self {
            FormInput::Diagonal(f) => f.expand(),
            FormInput::Integer(f) => f.clone(),
        }
    }
}

pub fn form_input_json(input: &FormInput) -> Value {
    match input {
        FormInput::Diagonal(f) => diag_form_json(f),
        FormInput::Integer(f) => int_form_json(f),
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

fn value_rational(v: &Value, what: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                Err(bad(format!("{what} must be an integer or a \"p/q\" string, got {n}")))
            }
        }
        other => Err(bad(format!("{what} must be an integer or a \"p/q\" string, got {other}"))),
    }
}

fn value_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| bad(format!("{what} must be a nonnegative integer, got {v}")))
}

/// One linear-form entry: either a bare rational or {"a": .., "b": .., ["d": ..]}.
fn value_quad(v: &Value, field_d: i64, what: &str) -> Result<QuadElem> {
    match v {
        Value::Object(map) => {
            let a = map
                .get("a")
                .map(|x| value_rational(x, &format!("{what}.a")))
                .transpose()?
                .unwrap_or_else(Rational::zero);
            let b = map
                .get("b")
                .map(|x| value_rational(x, &format!("{what}.b")))
                .transpose()?
                .unwrap_or_else(Rational::zero);
            if let Some(dv) = map.get("d") {
                let d = dv
                    .as_i64()
                    .ok_or_else(|| bad(format!("{what}.d must be an integer")))?;
                if !b.is_zero() && d != field_d {
                    return Err(bad(format!(
                        "{what}.d = {d} disagrees with the top-level field d = {field_d}"
                    )));
                }
            }
            for key in map.keys() {
                if key != "a" && key != "b" && key != "d" {
                    return Err(bad(format!("unknown key {key:?} in {what}")));
                }
            }
            Ok(QuadElem::new(a, b, field_d))
        }
        Value::String(_) | Value::Number(_) => {
            Ok(QuadElem::new(value_rational(v, what)?, Rational::zero(), field_d))
        }
        other => Err(bad(format!("{what} must be a rational or an object, got {other}"))),
    }
}

fn parse_diagonal(map: &Map<String, Value>) -> Result<FormInput> {
    let r = value_u64(map.get("r").ok_or_else(|| bad("missing \"r\""))?, "r")?;
    let r = u32::try_from(r).map_err(|_| bad("r is too large"))?;
    let d = match map.get("d") {
        Some(v) => v.as_i64().ok_or_else(|| bad("\"d\" must be an integer"))?,
        None => 0,
    };
    let entry = |name: &str| -> Result<QuadElem> {
        let v = map
            .get(name)
            .ok_or_else(|| bad(format!("missing linear-form entry {name:?}")))?;
        value_quad(v, d, name)
    };
    let form = DiagForm::new(entry("alpha")?, entry("beta")?, entry("gamma")?, entry("delta")?, r)?;
    Ok(FormInput::Diagonal(form))
}

fn parse_integer(map: &Map<String, Value>) -> Result<FormInput> {
    let r = value_u64(map.get("r").ok_or_else(|| bad("missing \"r\""))?, "r")?;
    let r = u32::try_from(r).map_err(|_| bad("r is too large"))?;
    let coeffs_v = map
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"coeffs\" array"))?;
    let mut coeffs = Vec::with_capacity(coeffs_v.len());
    for (k, v) in coeffs_v.iter().enumerate() {
        let q = value_rational(v, &format!("coeffs[{k}]"))?;
        if !q.is_integer() {
            return Err(bad(format!("coeffs[{k}] = {} is not an integer", format_rational(&q))));
        }
        coeffs.push(q.to_integer());
    }
    Ok(FormInput::Integer(IntBinaryForm::new(r, coeffs)?))
}

/// Parse a form spec file. The "kind" tag selects the variant; when absent,
/// the presence of "alpha" versus "coeffs" decides.
pub fn parse_form_json(text: &str) -> Result<FormInput> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| bad(format!("form file is not JSON: {e}")))?;
    let map = value
        .as_object()
        .ok_or_else(|| bad("form file must be a JSON object"))?;
    match map.get("kind").and_then(Value::as_str) {
        Some("diagonal") => parse_diagonal(map),
        Some("integer") => parse_integer(map),
        Some(other) => Err(bad(format!(
            "unknown form kind {other:?}; expected \"diagonal\" or \"integer\""
        ))),
        None => {
            let has_alpha = map.contains_key("alpha");
            let has_coeffs = map.contains_key("coeffs");
            match (has_alpha, has_coeffs) {
                (true, false) => parse_diagonal(map),
                (false, true) => parse_integer(map),
                (true, true) => Err(bad("form file has both \"alpha\" and \"coeffs\"")),
                (false, false) => Err(bad(
                    "form file needs \"alpha\".. entries (diagonal) or \"coeffs\" (integer)",
                )),
            }
        }
    }
}
