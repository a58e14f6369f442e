//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on domain errors (structured JSON on stderr),
//! 2 on usage errors. `verify-lemmas` also exits 1 when any check reports
//! VIOLATED. The precision ceiling (DIAGTHUE_MAX_PRECISION, bits) and the
//! exact-comparison digit budget (DIAGTHUE_DIGIT_BUDGET) are read from the
//! environment here and nowhere else.

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use diagthue::exactnum::{parse_rational, Precision, Rational, DEFAULT_DIGIT_BUDGET};
use diagthue::lemmas::{
    check_class, check_gap, check_pair, induction_step, zk_bound, CheckCtx, GapChain, LemmaStatus,
    PropertyQuintuple,
};
use diagthue::report::{
    self, bounds_json, error_json, form_input_json, hypothesis_json, int_form_json,
    invariants_json, manifest_json, partition_json, quintuple_json, render, solutions_csv,
    solve_report_json, table_csv, table_row_json, verdict_json, with_manifest, FormInput,
    RunManifest,
};
use diagthue::solver::{enumerate, solve, verify_theorem, SearchConfig};
use diagthue::thresholds::{check_hypothesis, compare_table, Theorem, ThresholdSpec};
use diagthue::Error;

const DEFAULT_MAX_PRECISION: u32 = 4096;
const DEFAULT_START_PRECISION: u32 = 64;

#[derive(Parser)]
#[command(
    name = "diagthue",
    version,
    about = "Exact solver and lemma verifier for diagonalizable Thue inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand a form spec into integer coefficients.
    Expand(ExpandArgs),
    /// Print the invariant set of a diagonal form.
    Invariants(InvariantsArgs),
    /// Check a bound statement's hypothesis against a form.
    Check(CheckArgs),
    /// Enumerate primitive solutions and build the full report.
    Solve(SolveArgs),
    /// Group enumerated solutions by related root of unity.
    Partition(PartitionArgs),
    /// Run every applicable lemma check over the enumerated solutions.
    #[command(name = "verify-lemmas")]
    VerifyLemmas(VerifyLemmasArgs),
    /// Evaluate the three-solution growth inequality on each class of three.
    Zk(ZkArgs),
    /// Drive the exponent-quintuple induction from a seed.
    Induction(InductionArgs),
    /// Tabulate bound thresholds across r and h.
    Table(TableArgs),
}

#[derive(Args)]
struct ExpandArgs {
    /// Form spec file (JSON).
    #[arg(long)]
    form: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct InvariantsArgs {
    #[arg(long)]
    form: String,
    /// Value bound of the inequality.
    #[arg(long)]
    h: u64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    form: String,
    #[arg(long)]
    h: u64,
    /// One of: main, akss1, akss2:m, siegel:l.
    #[arg(long)]
    theorem: String,
    /// Also enumerate up to this box and report count consistency.
    #[arg(long = "H")]
    box_h: Option<u64>,
    /// Starting ball precision in bits.
    #[arg(long, default_value_t = DEFAULT_START_PRECISION)]
    precision: u32,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    form: String,
    #[arg(long)]
    h: u64,
    /// Search box: x in [1, H], y in [-H, H], plus (0, 1).
    #[arg(long = "H")]
    box_h: u64,
    #[arg(long, default_value_t = DEFAULT_START_PRECISION)]
    precision: u32,
    /// json or csv.
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long)]
    form: String,
    #[arg(long)]
    h: u64,
    #[arg(long = "H")]
    box_h: u64,
    #[arg(long, default_value_t = DEFAULT_START_PRECISION)]
    precision: u32,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyLemmasArgs {
    #[arg(long)]
    form: String,
    #[arg(long)]
    h: u64,
    #[arg(long = "H")]
    box_h: u64,
    #[arg(long, default_value_t = DEFAULT_START_PRECISION)]
    precision: u32,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct ZkArgs {
    #[arg(long)]
    form: String,
    #[arg(long)]
    h: u64,
    #[arg(long = "H")]
    box_h: u64,
    /// Exponent-tuple index of the inequality to instantiate.
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = DEFAULT_START_PRECISION)]
    precision: u32,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct InductionArgs {
    /// Degree of the form family.
    #[arg(long)]
    r: u32,
    /// "default" or five comma-separated rationals a1..a5.
    #[arg(long, default_value = "default")]
    seed: String,
    /// Number of induction steps to apply.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Branch flag (0 or 1).
    #[arg(long, default_value_t = 0)]
    g: u8,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct TableArgs {
    /// Degrees: "7..12" (inclusive) or a comma list "7,9,11".
    #[arg(long)]
    r: String,
    /// Bounds: a single value or a comma list "1,10,100".
    #[arg(long)]
    h: String,
    #[arg(long, default_value_t = DEFAULT_START_PRECISION)]
    precision: u32,
    /// json or csv.
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<String>,
}

/// Domain failures exit 1 with a JSON payload; post-parse usage problems
/// (bad flag syntax, bad environment values) exit 2 like clap's own errors.
enum RunError {
    Domain(Error),
    Usage(String),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Domain(e)
    }
}

fn usage(msg: impl Into<String>) -> RunError {
    RunError::Usage(msg.into())
}

type RunResult<T> = std::result::Result<T, RunError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(RunError::Domain(e)) => {
            eprint!("{}", render(&error_json(&e)));
            ExitCode::from(1)
        }
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> RunResult<ExitCode> {
    match cmd {
        Cmd::Expand(a) => cmd_expand(a),
        Cmd::Invariants(a) => cmd_invariants(a),
        Cmd::Check(a) => cmd_check(a),
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Partition(a) => cmd_partition(a),
        Cmd::VerifyLemmas(a) => cmd_verify_lemmas(a),
        Cmd::Zk(a) => cmd_zk(a),
        Cmd::Induction(a) => cmd_induction(a),
        Cmd::Table(a) => cmd_table(a),
    }
}

fn read_form(path: &str) -> RunResult<FormInput> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot read {path}: {e}")))?;
    Ok(report::parse_form_json(&text)?)
}

fn env_number<T: std::str::FromStr>(name: &str, default: T) -> RunResult<T> {
    match std::env::var(name) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| usage(format!("{name} must be a number, got {s:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(default),
        Err(e) => Err(usage(format!("{name}: {e}"))),
    }
}

fn context(start_bits: u32) -> RunResult<CheckCtx> {
    let max: u32 = env_number("DIAGTHUE_MAX_PRECISION", DEFAULT_MAX_PRECISION)?;
    let budget: u64 = env_number("DIAGTHUE_DIGIT_BUDGET", DEFAULT_DIGIT_BUDGET)?;
    let max = max.max(16);
    let start = start_bits.clamp(16, max);
    Ok(CheckCtx { precision: Precision { start, max }, digit_budget: budget })
}

fn parse_theorem(s: &str) -> RunResult<Theorem> {
    match s {
        "main" => Ok(Theorem::Main),
        "akss1" => Ok(Theorem::AkssI),
        _ => {
            if let Some(m) = s.strip_prefix("akss2:") {
                let m = m
                    .parse()
                    .map_err(|_| usage(format!("bad multiplicity in --theorem {s:?}")))?;
                Ok(Theorem::AkssII { m })
            } else if let Some(l) = s.strip_prefix("siegel:") {
                let l = l
                    .parse()
                    .map_err(|_| usage(format!("bad level in --theorem {s:?}")))?;
                Ok(Theorem::Siegel { l })
            } else {
                Err(usage(format!(
                    "unknown theorem {s:?}; expected main, akss1, akss2:m, or siegel:l"
                )))
            }
        }
    }
}

/// true for csv, false for json.
fn parse_format(s: &str) -> RunResult<bool> {
    match s {
        "json" => Ok(false),
        "csv" => Ok(true),
        other => Err(usage(format!("unknown format {other:?}; expected json or csv"))),
    }
}

/// "a..b" (inclusive) or a comma list.
fn parse_r_values(s: &str) -> RunResult<Vec<u32>> {
    let bad = || usage(format!("bad --r value {s:?}; expected \"7..12\" or \"7,9,11\""));
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        s.split(',').map(|part| part.trim().parse().map_err(|_| bad())).collect()
    }
}

fn parse_h_values(s: &str) -> RunResult<Vec<u64>> {
    let bad = || usage(format!("bad --h value {s:?}; expected \"1\" or \"1,10,100\""));
    s.split(',').map(|part| part.trim().parse().map_err(|_| bad())).collect()
}

fn search_config(box_h: u64, ctx: CheckCtx) -> SearchConfig {
    SearchConfig { box_h, precision: ctx.precision, ..SearchConfig::default() }
}

/// Stamp timing and output paths, render, and deliver to --out or stdout.
fn emit<F>(
    manifest: &mut RunManifest,
    started: Instant,
    out: &Option<String>,
    build: F,
) -> RunResult<()>
where
    F: FnOnce(&RunManifest) -> String,
{
    manifest.timing_ms = started.elapsed().as_millis() as u64;
    if let Some(path) = out {
        manifest.out_paths = vec![path.clone()];
    }
    let text = build(manifest);
    match out {
        Some(path) => fs::write(path, &text)
            .map_err(|e| Error::InvalidSpec(format!("cannot write {path}: {e}")).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn csv_with_manifest(manifest: &RunManifest, body: &str) -> String {
    let compact =
        serde_json::to_string(&manifest_json(manifest)).expect("manifest is serializable");
    format!("# {compact}\n{body}")
}

fn cmd_expand(a: ExpandArgs) -> RunResult<ExitCode> {
    let started = Instant::now();
    let input = read_form(&a.form)?;
    let mut manifest = RunManifest::new("expand");
    manifest.form_path = Some(a.form.clone());
    let mut payload = Map::new();
    payload.insert("form".into(), form_input_json(&input));
    payload.insert("expanded".into(), int_form_json(&input.expanded()));
    emit(&mut manifest, started, &a.out, |m| render(&with_manifest(m, payload)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_invariants(a: InvariantsArgs) -> RunResult<ExitCode> {
    let started = Instant::now();
    let input = read_form(&a.form)?;
    let form = input.as_diagonal()?;
    let inv = form.invariants(a.h)?;
    let mut manifest = RunManifest::new("invariants");
    manifest.form_path = Some(a.form.clone());
    manifest.param("h", a.h);
    let mut payload = Map::new();
    payload.insert("form".into(), form_input_json(&input));
    payload.insert("invariants".into(), invariants_json(&inv));
    emit(&mut manifest, started, &a.out, |m| render(&with_manifest(m, payload)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(a: CheckArgs) -> RunResult<ExitCode> {
    let started = Instant::now();
    let theorem = parse_theorem(&a.theorem)?;
    let ctx = context(a.precision)?;
    let input = read_form(&a.form)?;
    let form = input.as_diagonal()?;
    let spec = ThresholdSpec::new(theorem, form.r(), a.h)?;
    let rep = check_hypothesis(form, a.h, &spec, ctx)?;
    let mut manifest = RunManifest::new("check");
    manifest.form_path = Some(a.form.clone());
    manifest.param("h", a.h).param("theorem", &a.theorem).param("precision", a.precision);
    let mut payload = Map::new();
    payload.insert("form".into(), form_input_json(&input));
    payload.insert("hypothesis".into(), hypothesis_json(&rep, ctx.precision.start));
    if let Some(box_h) = a.box_h {
        if theorem != Theorem::Main {
            return Err(Error::InvalidSpec(
                "count consistency (--H) is wired to the main statement only".into(),
            )
            .into());
        }
        manifest.param("H", box_h);
        let cfg = search_config(box_h, ctx);
        let full = verify_theorem(form, a.h, &cfg, ctx)?;
        payload.insert(
            "consistency".into(),
            full.theorem_consistency
                .as_ref()
                .map(report::consistency_json)
                .unwrap_or(Value::Null),
        );
        payload.insert("n".into(), json!(full.n));
    }
    emit(&mut manifest, started, &a.out, |m| render(&with_manifest(m, payload)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(a: SolveArgs) -> RunResult<ExitCode> {
    let started = Instant::now();
    let csv = parse_format(&a.format)?;
    let ctx = context(a.precision)?;
    let input = read_form(&a.form)?;
    let cfg = search_config(a.box_h, ctx);
    let mut manifest = RunManifest::new("solve");
    manifest.form_path = Some(a.form.clone());
    manifest
        .param("h", a.h)
        .param("H", a.box_h)
        .param("precision", a.precision)
        .param("format", &a.format);
    match &input {
        FormInput::Diagonal(form) => {
            let rep = solve(form, a.h, &cfg, ctx)?;
            if csv {
                let body = solutions_csv(&rep.solutions);
                emit(&mut manifest, started, &a.out, |m| csv_with_manifest(m, &body))?;
            } else {
                let mut payload = solve_report_json(&rep);
                payload.insert("form".into(), form_input_json(&input));
                emit(&mut manifest, started, &a.out, |m| render(&with_manifest(m, payload)))?;
            }
        }
        FormInput::Integer(f) => {
            // Raw expanded form: enumeration only, no diagonal functionals.
            let raw = enumerate(f, a.h, &cfg)?;
            if csv {
                let mut body = String::from("x,y,F\n");
                for s in &raw {
                    body.push_str(&format!("{},{},{}\n", s.x, s.y, s.value));
                }
                emit(&mut manifest, started, &a.out, |m| csv_with_manifest(m, &body))?;
            } else {
                let rows: Vec<Value> = raw
                    .iter()
                    .map(|s| json!({"x": s.x, "y": s.y, "F": s.value.to_string()}))
                    .collect();
                let mut payload = Map::new();
                payload.insert("form".into(), form_input_json(&input));
                payload.insert("solutions".into(), Value::Array(rows));
                payload.insert("n".into(), json!(raw.len()));
                payload.insert("searched_box".into(), json!(a.box_h));
                payload.insert(
                    "note".into(),
                    json!("raw integer form: enumeration only, no class analysis"),
                );
                emit(&mut manifest, started, &a.out, |m| render(&with_manifest(m, payload)))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_partition(a: PartitionArgs) -> RunResult<ExitCode> {
    let started = Instant::now();
    let ctx = context(a.precision)?;
    let input = read_form(&a.form)?;
    let form = input.as_diagonal()?;
    let cfg = search_config(a.box_h, ctx);
    let rep = solve(form, a.h, &cfg, ctx)?;
    let mut manifest = RunManifest::new("partition");
    manifest.form_path = Some(a.form.clone());
    manifest.param("h", a.h).param("H", a.box_h).param("precision", a.precision);
    let mut payload = Map::new();
    payload.insert("form".into(), form_input_json(&input));
    payload.insert("n".into(), json!(rep.n));
    payload.insert("partition".into(), partition_json(&rep.partition));
    emit(&mut manifest, started, &a.out, |m| render(&with_manifest(m, payload)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_lemmas(a: VerifyLemmasArgs) -> RunResult<ExitCode> {
    let started = Instant::now();
    let ctx = context(a.precision)?;
    let input = read_form(&a.form)?;
    let form = input.as_diagonal()?;
    let cfg = search_config(a.box_h, ctx);
    let rep = solve(form, a.h, &cfg, ctx)?;

    let mut classes = Vec::new();
    let mut violated = 0usize;
    let mut total = 0usize;
    for (omega, members) in &rep.partition.classes {
        let chain = GapChain::from_class(form, members.clone(), a.h, ctx)?;
        let mut verdicts = check_class(&chain, form, a.h, ctx)?;
        for i in 0..chain.records.len() {
            for k in (i + 1)..chain.records.len() {
                verdicts.push(check_pair(&chain.records[i], &chain.records[k], form, a.h, ctx)?);
            }
        }
        for w in chain.records.windows(2) {
            verdicts.push(check_gap(&w[0], &w[1], form, a.h, ctx)?);
        }
        violated += verdicts.iter().filter(|v| v.status == LemmaStatus::Violated).count();
        total += verdicts.len();
        let rows: Vec<Value> = verdicts.iter().map(verdict_json).collect();
        classes.push(json!({"omega_index": omega, "verdicts": rows}));
    }

    let mut manifest = RunManifest::new("verify-lemmas");
    manifest.form_path = Some(a.form.clone());
    manifest.param("h", a.h).param("H", a.box_h).param("precision", a.precision);
    let mut payload = Map::new();
    payload.insert("form".into(), form_input_json(&input));
    payload.insert("n".into(), json!(rep.n));
    payload.insert("classes".into(), Value::Array(classes));
    payload.insert("checks".into(), json!(total));
    payload.insert("violated".into(), json!(violated));
    emit(&mut manifest, started, &a.out, |m| render(&with_manifest(m, payload)))?;
    Ok(if violated > 0 { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn cmd_zk(a: ZkArgs) -> RunResult<ExitCode> {
    let started = Instant::now();
    let ctx = context(a.precision)?;
    let input = read_form(&a.form)?;
    let form = input.as_diagonal()?;
    let cfg = search_config(a.box_h, ctx);
    let rep = solve(form, a.h, &cfg, ctx)?;

    let mut classes = Vec::new();
    let mut evaluated = 0usize;
    for (omega, members) in &rep.partition.classes {
        if members.len() != 3 {
            classes.push(json!({
                "omega_index": omega,
                "members": members.len(),
                "skipped": "needs a class of exactly three solutions",
            }));
            continue;
        }
        let chain = GapChain::from_class(form, members.clone(), a.h, ctx)?;
        let verdict = zk_bound(&chain, form, a.h, a.n, ctx)?;
        evaluated += 1;
        classes.push(json!({
            "omega_index": omega,
            "members": 3,
            "verdict": verdict_json(&verdict),
        }));
    }

    let mut manifest = RunManifest::new("zk");
    manifest.form_path = Some(a.form.clone());
    manifest
        .param("h", a.h)
        .param("H", a.box_h)
        .param("n", a.n)
        .param("precision", a.precision);
    let mut payload = Map::new();
    payload.insert("form".into(), form_input_json(&input));
    payload.insert("classes".into(), Value::Array(classes));
    payload.insert("evaluated".into(), json!(evaluated));
    if evaluated == 0 {
        payload.insert("note".into(), json!("no class of exactly three members within the box"));
    }
    emit(&mut manifest, started, &a.out, |m| render(&with_manifest(m, payload)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_induction(a: InductionArgs) -> RunResult<ExitCode> {
    let started = Instant::now();
    if a.g > 1 {
        return Err(usage("--g must be 0 or 1"));
    }
    let start = match a.seed.as_str() {
        "default" => {
            let mut p = PropertyQuintuple::seed(a.r);
            p.g = a.g;
            p
        }
        other => {
            let parts: Vec<&str> = other.split(',').collect();
            if parts.len() != 5 {
                return Err(usage(format!(
                    "--seed needs \"default\" or five comma-separated rationals, got {other:?}"
                )));
            }
            let mut vals: Vec<Rational> = Vec::with_capacity(5);
            for part in parts {
                vals.push(
                    parse_rational(part)
                        .map_err(|e| usage(format!("bad --seed entry {part:?}: {e}")))?,
                );
            }
            let arr: [Rational; 5] = vals.try_into().expect("length checked");
            PropertyQuintuple::new(arr, 1, a.g, true)?
        }
    };

    let mut steps = Vec::new();
    let mut current = start.clone();
    let mut halted = None;
    for _ in 0..a.n {
        let outcome = induction_step(&current, a.r)?;
        steps.push(json!({
            "input": quintuple_json(&current),
            "bounds": bounds_json(&outcome.bounds),
            "successor": outcome.successor.as_ref().map(quintuple_json),
        }));
        match outcome.successor {
            Some(next) => current = next,
            None => {
                halted = Some("nonvanishing flag not asserted; chain stops");
                break;
            }
        }
    }

    let mut manifest = RunManifest::new("induction");
    manifest.param("r", a.r).param("seed", &a.seed).param("n", a.n).param("g", a.g);
    let mut payload = Map::new();
    payload.insert("r".into(), json!(a.r));
    payload.insert("start".into(), quintuple_json(&start));
    payload.insert("steps".into(), Value::Array(steps));
    payload.insert("final".into(), quintuple_json(&current));
    if let Some(note) = halted {
        payload.insert("note".into(), json!(note));
    }
    emit(&mut manifest, started, &a.out, |m| render(&with_manifest(m, payload)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(a: TableArgs) -> RunResult<ExitCode> {
    let started = Instant::now();
    let csv = parse_format(&a.format)?;
    let r_values = parse_r_values(&a.r)?;
    let h_values = parse_h_values(&a.h)?;
    let ctx = context(a.precision)?;
    let rows = compare_table(&r_values, &h_values, ctx)?;
    let mut manifest = RunManifest::new("table");
    manifest
        .param("r", &a.r)
        .param("h", &a.h)
        .param("precision", a.precision)
        .param("format", &a.format);
    if csv {
        let body = table_csv(&rows);
        emit(&mut manifest, started, &a.out, |m| csv_with_manifest(m, &body))?;
    } else {
        let mut payload = Map::new();
        payload.insert("rows".into(), Value::Array(rows.iter().map(table_row_json).collect()));
        emit(&mut manifest, started, &a.out, |m| render(&with_manifest(m, payload)))?;
    }
    Ok(ExitCode::SUCCESS)
}
