//! Python bindings for the solver: forms, solutions, thresholds, and the
//! exponent-tuple induction. Exact values cross the boundary as strings;
//! convenience approximations as floats.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyAny, PyDict};

use num_bigint::BigInt;
use std::collections::BTreeMap;

use diagthue::analysis::{solution_profile, SolutionRecord};
use diagthue::exactnum::quad::QuadElem;
use diagthue::exactnum::{parse_rational, rational_from_int, Precision, Rational};
use diagthue::forms::DiagForm;
use diagthue::lemmas::{
    check_class, check_gap, check_pair, induction_step, CheckCtx, GapChain, LemmaStatus,
    PropertyQuintuple,
};
use diagthue::report::quintuple_tuple_string;
use diagthue::solver::{solve, verify_theorem, SearchConfig};
use diagthue::thresholds::{check_hypothesis, compare_table, Theorem, ThresholdSpec};

fn err(e: diagthue::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn coord(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(n) = obj.extract::<i64>() {
        return Ok(rational_from_int(n));
    }
    if let Ok(s) = obj.extract::<String>() {
        return parse_rational(&s).map_err(err);
    }
    Err(PyValueError::new_err(
        "coordinate must be an int or a rational string like '3/2'",
    ))
}

/// Entry of the linear factors: an int, a rational string, or an (a, b)
/// pair meaning a + b*sqrt(d).
fn entry(obj: &Bound<'_, PyAny>, d: i64) -> PyResult<QuadElem> {
    if let Ok((a, b)) = obj.extract::<(Bound<'_, PyAny>, Bound<'_, PyAny>)>() {
        return Ok(QuadElem::new(coord(&a)?, coord(&b)?, d));
    }
    Ok(QuadElem::from_rational(coord(obj)?))
}

fn parse_theorem(s: &str) -> PyResult<Theorem> {
    if s == "main" {
        return Ok(Theorem::Main);
    }
    if s == "akss1" {
        return Ok(Theorem::AkssI);
    }
    if let Some(m) = s.strip_prefix("akss2:") {
        let m: u32 = m
            .parse()
            .map_err(|_| PyValueError::new_err(format!("bad akss2 parameter in {s:?}")))?;
        return Ok(Theorem::AkssII { m });
    }
    if let Some(l) = s.strip_prefix("siegel:") {
        let l: u8 = l
            .parse()
            .map_err(|_| PyValueError::new_err(format!("bad siegel parameter in {s:?}")))?;
        return Ok(Theorem::Siegel { l });
    }
    Err(PyValueError::new_err(format!(
        "unknown theorem {s:?}: expected main, akss1, akss2:<m>, or siegel:<l>"
    )))
}

fn ball_to_f64(ball: &diagthue::exactnum::ball::RealBall) -> f64 {
    ball.mid().to_decimal(17).parse().unwrap_or(f64::NAN)
}

/// One primitive solution, reported as the representative with x > 0
/// (or x = 0, y > 0). `value` is F(x, y); `z` and `zeta` describe the
/// size and the normalized form value, `omega_index` the related root.
#[pyclass]
struct Solution {
    #[pyo3(get)]
    x: i64,
    #[pyo3(get)]
    y: i64,
    #[pyo3(get)]
    value: BigInt,
    #[pyo3(get)]
    omega_index: u32,
    #[pyo3(get)]
    tie_flag: bool,
    #[pyo3(get)]
    epsilon: Option<u8>,
    #[pyo3(get)]
    z: String,
    #[pyo3(get)]
    zeta: f64,
}

impl Solution {
    fn from_record(rec: &SolutionRecord) -> Solution {
        Solution {
            x: rec.x,
            y: rec.y,
            value: rec.f_value.clone(),
            omega_index: rec.omega_index,
            tie_flag: rec.tie_flag,
            epsilon: rec.epsilon,
            z: rec.z.to_string(),
            zeta: ball_to_f64(&rec.zeta.embed(64)),
        }
    }
}

#[pymethods]
impl Solution {
    fn __repr__(&self) -> String {
        format!(
            "Solution(x={}, y={}, F={}, omega={})",
            self.x, self.y, self.value, self.omega_index
        )
    }
}

/// A diagonalizable form (alpha*x + beta*y)^r - (gamma*x + delta*y)^r with
/// entries in Q(sqrt(d)), constrained to expand to an integer form with
/// nonzero j = alpha*delta - beta*gamma.
///
/// Entries are ints, rational strings, or (a, b) pairs for a + b*sqrt(d):
///
/// ```text
/// Form(1, 0, 0, 1, r=7)                   # x^7 - y^7
/// Form(1, 3000000, 1, -3000000, r=7)      # (x+ky)^7 - (x-ky)^7
/// Form((1, 0), (0, 1), (-1, 0), (0, 1), r=7, d=-1)
/// ```
#[pyclass]
struct Form {
    inner: DiagForm,
}

#[pymethods]
impl Form {
    #[new]
    #[pyo3(signature = (alpha, beta, gamma, delta, r, d=0))]
    fn new(
        alpha: &Bound<'_, PyAny>,
        beta: &Bound<'_, PyAny>,
        gamma: &Bound<'_, PyAny>,
        delta: &Bound<'_, PyAny>,
        r: u32,
        d: i64,
    ) -> PyResult<Self> {
        let inner = DiagForm::new(
            entry(alpha, d)?,
            entry(beta, d)?,
            entry(gamma, d)?,
            entry(delta, d)?,
            r,
        )
        .map_err(err)?;
        Ok(Form { inner })
    }

    #[getter]
    fn r(&self) -> u32 {
        self.inner.r()
    }

    #[getter]
    fn d(&self) -> i64 {
        self.inner.field_d()
    }

    /// Integer coefficients of the expansion, degree-descending in x.
    fn coefficients(&self) -> Vec<BigInt> {
        self.inner.coefficients().to_vec()
    }

    fn eval(&self, x: i64, y: i64) -> BigInt {
        self.inner.eval(x, y)
    }

    /// Exact invariants at bound h, every value a decimal/rational string:
    /// j, chi, the quadratic factor (A, B, C), D, Delta, and Delta'.
    fn invariants(&self, h: u64) -> PyResult<BTreeMap<String, String>> {
        let inv = self.inner.invariants(h).map_err(err)?;
        let mut out = BTreeMap::new();
        out.insert("j".to_string(), inv.j.to_string());
        out.insert("chi".to_string(), inv.chi.to_string());
        out.insert("A".to_string(), inv.quad_a.to_string());
        out.insert("B".to_string(), inv.quad_b.to_string());
        out.insert("C".to_string(), inv.quad_c.to_string());
        out.insert("D".to_string(), inv.big_d.to_string());
        out.insert("Delta".to_string(), inv.delta.to_string());
        out.insert("DeltaPrime".to_string(), inv.delta_prime.to_string());
        Ok(out)
    }

    /// All primitive solutions of 0 < |F(x, y)| <= h with max(|x|, |y|)
    /// within the box, one representative per sign pair.
    #[pyo3(signature = (h, box_h=40))]
    fn solve(&self, h: u64, box_h: u64) -> PyResult<Vec<Solution>> {
        let cfg = SearchConfig { box_h, ..SearchConfig::default() };
        let rep = solve(&self.inner, h, &cfg, CheckCtx::default()).map_err(err)?;
        Ok(rep.solutions.iter().map(Solution::from_record).collect())
    }

    /// Solutions grouped by related root index.
    #[pyo3(signature = (h, box_h=40))]
    fn partition(&self, h: u64, box_h: u64) -> PyResult<BTreeMap<u32, Vec<(i64, i64)>>> {
        let cfg = SearchConfig { box_h, ..SearchConfig::default() };
        let rep = solve(&self.inner, h, &cfg, CheckCtx::default()).map_err(err)?;
        Ok(rep
            .partition
            .classes
            .iter()
            .map(|(k, members)| (*k, members.iter().map(|m| (m.x, m.y)).collect()))
            .collect())
    }

    /// Run every applicable lemma check on the solutions in the box and
    /// count the verdicts. Raises if any check is violated.
    #[pyo3(signature = (h, box_h=40))]
    fn check_lemmas(&self, h: u64, box_h: u64) -> PyResult<BTreeMap<String, usize>> {
        let ctx = CheckCtx::default();
        let cfg = SearchConfig { box_h, ..SearchConfig::default() };
        let rep = solve(&self.inner, h, &cfg, ctx).map_err(err)?;
        let mut holds = 0usize;
        let mut not_applicable = 0usize;
        for members in rep.partition.classes.values() {
            let chain =
                GapChain::from_class(&self.inner, members.clone(), h, ctx).map_err(err)?;
            let mut verdicts = check_class(&chain, &self.inner, h, ctx).map_err(err)?;
            for i in 0..chain.records.len() {
                for k in (i + 1)..chain.records.len() {
                    verdicts.push(
                        check_pair(&chain.records[i], &chain.records[k], &self.inner, h, ctx)
                            .map_err(err)?,
                    );
                }
            }
            for w in chain.records.windows(2) {
                verdicts.push(check_gap(&w[0], &w[1], &self.inner, h, ctx).map_err(err)?);
            }
            for v in verdicts {
                match v.status {
                    LemmaStatus::Holds => holds += 1,
                    LemmaStatus::NotApplicable => not_applicable += 1,
                    LemmaStatus::Violated => {
                        return Err(PyValueError::new_err(format!(
                            "{} violated: {}",
                            v.lemma_id, v.hypothesis_trace
                        )))
                    }
                }
            }
        }
        let mut out = BTreeMap::new();
        out.insert("solutions".to_string(), rep.n);
        out.insert("classes".to_string(), rep.partition.classes.len());
        out.insert("holds".to_string(), holds);
        out.insert("not_applicable".to_string(), not_applicable);
        out.insert("checks".to_string(), holds + not_applicable);
        Ok(out)
    }

    /// Check a theorem's hypothesis for this form at bound h.
    fn hypothesis<'py>(
        &self,
        py: Python<'py>,
        theorem: &str,
        h: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let spec =
            ThresholdSpec::new(parse_theorem(theorem)?, self.inner.r(), h).map_err(err)?;
        let rep = check_hypothesis(&self.inner, h, &spec, CheckCtx::default()).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("verdict", rep.verdict)?;
        out.set_item("predicted_bound", rep.predicted_bound)?;
        out.set_item("case", rep.case_row.to_string())?;
        out.set_item("delta_prime", rep.delta_prime.to_string())?;
        out.set_item("threshold", rep.spec.value.to_string())?;
        out.set_item("threshold_log10", ball_to_f64(&rep.spec.value.log10_ball(64)))?;
        out.set_item("notes", rep.notes)?;
        Ok(out)
    }

    /// Search the box and compare the count against the main statement's
    /// predicted bound.
    #[pyo3(signature = (h, box_h=40))]
    fn verify<'py>(&self, py: Python<'py>, h: u64, box_h: u64) -> PyResult<Bound<'py, PyDict>> {
        let cfg = SearchConfig { box_h, ..SearchConfig::default() };
        let rep = verify_theorem(&self.inner, h, &cfg, CheckCtx::default()).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("n", rep.n)?;
        out.set_item("searched_box", rep.searched_box)?;
        if let Some(cons) = &rep.theorem_consistency {
            out.set_item("covered", cons.covered)?;
            out.set_item("predicted_bound", cons.predicted_bound)?;
            out.set_item(
                "case",
                cons.case_row.as_ref().map(|c| c.to_string()),
            )?;
            out.set_item("evidence", cons.evidence.clone())?;
        }
        Ok(out)
    }

    /// Related root index and tie flag for one solution pair.
    fn related_root(&self, x: i64, y: i64) -> PyResult<(u32, bool)> {
        let p = solution_profile(&self.inner, x, y, Precision::default()).map_err(err)?;
        Ok((p.omega_index, p.tie_flag))
    }

    fn __repr__(&self) -> String {
        format!("Form({})", self.inner)
    }
}

/// Exact threshold of a theorem at (r, h): the power-product expression
/// and a float of its log10.
#[pyfunction]
fn threshold(theorem: &str, r: u32, h: u64) -> PyResult<(String, f64)> {
    let spec = ThresholdSpec::new(parse_theorem(theorem)?, r, h).map_err(err)?;
    let log10 = ball_to_f64(&spec.value.log10_ball(64));
    Ok((spec.value.to_string(), log10))
}

/// Threshold comparison rows (r, h, log10 each route, minimal theorem),
/// minima decided by exact comparison.
#[pyfunction]
fn comparison_table(
    r_values: Vec<u32>,
    h_values: Vec<u64>,
) -> PyResult<Vec<(u32, u64, f64, f64, f64, String)>> {
    let rows = compare_table(&r_values, &h_values, CheckCtx::default()).map_err(err)?;
    Ok(rows
        .iter()
        .map(|row| {
            (
                row.r,
                row.h,
                ball_to_f64(&row.log10_main),
                ball_to_f64(&row.log10_akss_ii_m4),
                ball_to_f64(&row.log10_siegel_l1),
                row.min_theorem.clone(),
            )
        })
        .collect())
}

/// Iterate the exponent-tuple induction from the seed, returning the tuple
/// at each level as "(a1,a2,a3,a4,a5)". Raises when a step's conditions
/// fail, naming the first failing condition.
#[pyfunction]
#[pyo3(signature = (r, steps, g=0))]
fn induction_chain(r: u32, steps: u32, g: u8) -> PyResult<Vec<String>> {
    if g > 1 {
        return Err(PyValueError::new_err("g must be 0 or 1"));
    }
    let mut p = PropertyQuintuple::seed(r);
    p.g = g;
    let mut out = vec![quintuple_tuple_string(&p)];
    for _ in 0..steps {
        let step = induction_step(&p, r).map_err(err)?;
        let Some(next) = step.successor else {
            return Err(PyValueError::new_err(format!(
                "induction halted at level n = {}: nonvanishing flag not asserted",
                p.n
            )));
        };
        out.push(quintuple_tuple_string(&next));
        p = next;
    }
    Ok(out)
}

#[pymodule]
fn diagthue_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Form>()?;
    m.add_class::<Solution>()?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(comparison_table, m)?)?;
    m.add_function(wrap_pyfunction!(induction_chain, m)?)?;
    Ok(())
}
