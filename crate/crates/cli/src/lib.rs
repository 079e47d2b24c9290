//! Workflows behind the `cofix` binary. Every command returns an
//! [`Outcome`]: the exit code, a plain-text report and a JSON report.

use std::fmt::Write as _;
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};

use cofix_core::conditions::{check_condition, classify, feasibility, pair_terms, ConditionKind};
use cofix_core::explorer::{search_open_problem_1, verify_candidate, CounterexampleCandidate, ExplorerError};
use cofix_core::fixtures::FixtureId;
use cofix_core::interval::Bound;
use cofix_core::iterate::{t_sequence, Termination};
use cofix_core::metric::{PointRef, Space};
use cofix_core::problem::{Problem, ProblemError, ProblemFile};
use cofix_core::selfmaps::{
    coincidence_points, common_fixed_points, is_weakly_compatible, range_contained, CoincidenceValues, MapPair,
    PointSet, SelfMap,
};
use cofix_core::ExactScalar;
use serde_json::{json, Value};
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// The checked inequality fails at some pair, or a candidate does not reproduce.
    pub const VIOLATED: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const HYPOTHESIS: i32 = 3;
    pub const NO_CONVERGENCE: i32 = 4;
}

pub const DEFAULT_MAX_ITER: usize = 10_000;

pub fn default_epsilon() -> ExactScalar {
    ExactScalar::new(1, 1_000_000)
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{origin}: {source}")]
    Problem { origin: String, source: ProblemError },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        exit::INPUT
    }
}

#[derive(Clone, Debug)]
pub enum Source {
    Fixture(FixtureId),
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

pub fn load(source: &Source, grid_step: Option<&ExactScalar>) -> Result<Problem, CliError> {
    let (origin, text) = match source {
        Source::Fixture(id) => (id.name().to_string(), id.source().to_string()),
        Source::File(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
            (path.display().to_string(), text)
        }
    };
    let mut problem = Problem::parse(&text).map_err(|e| CliError::Problem { origin, source: e })?;
    if let Some(step) = grid_step {
        if !step.is_positive() {
            return Err(CliError::Usage(format!("--grid-step must be positive, got {step}")));
        }
        problem.sampler.step = step.clone();
    }
    Ok(problem)
}

pub fn parse_kind(s: &str) -> Result<ConditionKind, String> {
    ConditionKind::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = ConditionKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown condition kind {s:?}; expected one of {}", names.join(", "))
    })
}

/// `"a..b"` with `a <= b`.
pub fn parse_seeds(s: &str) -> Result<Range<u64>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let a: u64 = a.trim().parse().map_err(|_| format!("bad seed range start {a:?}"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("bad seed range end {b:?}"))?;
    if a > b {
        return Err(format!("empty-or-reversed seed range {s:?}"));
    }
    Ok(a..b)
}

/// A point by label, then by index, on finite spaces; a rational on intervals.
pub fn parse_point(space: &Space, s: &str) -> Result<PointRef, CliError> {
    let p = match space {
        Space::Finite(fs) => match fs.index_of_label(s) {
            Some(i) => PointRef::Index(i),
            None => PointRef::Index(
                s.parse::<usize>().map_err(|_| CliError::Usage(format!("no point labelled {s:?} and not an index")))?,
            ),
        },
        Space::Interval(_) => PointRef::Coord(s.parse().map_err(|e| CliError::Usage(format!("bad point {s:?}: {e}")))?),
    };
    if !space.contains(&p) {
        return Err(CliError::Usage(format!("point {s} is not in the space")));
    }
    Ok(p)
}

pub fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
    fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

fn describe_pair(space: &Space, w: &Option<(PointRef, PointRef)>) -> String {
    match w {
        Some((x, y)) => format!("({}, {})", space.describe(x), space.describe(y)),
        None => "-".into(),
    }
}

fn describe_set(space: &Space, set: &PointSet) -> String {
    let mut parts: Vec<String> = set.points.iter().map(|p| space.describe(p)).collect();
    parts.extend(set.intervals.iter().map(|i| i.to_string()));
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(", ")
    }
}

/// Checks the inequality at the given constants, falling back to the
/// condition stored in the problem for anything not given.
pub fn cmd_verify(
    problem: &Problem,
    kind: Option<ConditionKind>,
    delta: Option<ExactScalar>,
    l: Option<ExactScalar>,
) -> Result<Outcome, CliError> {
    let stored = problem.condition.clone();
    let missing = |what: &str| CliError::Usage(format!("no {what} given and the problem has no condition"));
    let kind = kind.or(stored.as_ref().map(|c| c.0)).ok_or_else(|| missing("--kind"))?;
    let delta = delta.or(stored.as_ref().map(|c| c.1.clone())).ok_or_else(|| missing("--delta"))?;
    let l = l.or(stored.as_ref().map(|c| c.2.clone())).ok_or_else(|| missing("--L"))?;
    let pair = &problem.pair;
    let space = pair.space();
    let out = check_condition(kind, pair, &delta, &l, &problem.sampler).map_err(|e| CliError::Usage(e.to_string()))?;

    let mut text = String::new();
    writeln!(text, "condition  {kind}").unwrap();
    writeln!(text, "delta      {delta}").unwrap();
    writeln!(text, "L          {l}").unwrap();
    writeln!(text, "pairs      {} ({})", out.pairs_checked, out.coverage.label()).unwrap();
    let mut terms = Value::Null;
    match &out.witness {
        None => writeln!(text, "result     holds").unwrap(),
        Some((x, y)) => {
            let t = pair_terms(kind, pair, x, y).expect("witness lies in the space");
            writeln!(text, "result     violated at (x, y) = {}", describe_pair(space, &out.witness)).unwrap();
            writeln!(text, "           d(Tx,Ty) = {} > {} * {} + {} * {}", t.lhs, delta, t.a, l, t.b).unwrap();
            terms = json!({"lhs": t.lhs.to_string(), "A": t.a.to_string(), "B": t.b.to_string()});
        }
    }
    let json = json!({
        "kind": kind.name(),
        "delta": delta.to_string(),
        "L": l.to_string(),
        "holds": out.holds,
        "witness": out.witness.as_ref().map(|(x, y)| json!([space.describe(x), space.describe(y)])),
        "terms": terms,
        "pairs": out.pairs_checked,
        "grid": out.coverage.to_json(),
    });
    Ok(Outcome { code: if out.holds { exit::OK } else { exit::VIOLATED }, text, json })
}

pub fn cmd_classify(problem: &Problem) -> Outcome {
    let pair = &problem.pair;
    let space = pair.space();
    let c = classify(pair, &problem.sampler);
    let mut text = String::new();
    writeln!(text, "{:<16} {:<9} {:<10} {:<10} {:<10} witness", "kind", "feasible", "delta_inf", "delta", "L").unwrap();
    for r in &c.reports {
        let (d, l) = match r.certified_constants() {
            Some((d, l)) => (d.to_string(), l.to_string()),
            None => ("-".into(), "-".into()),
        };
        let inf = r.delta_inf.as_ref().map_or("-".to_string(), |v| v.to_string());
        writeln!(
            text,
            "{:<16} {:<9} {:<10} {:<10} {:<10} {}",
            r.kind.name(),
            if r.feasible { "yes" } else { "no" },
            inf,
            d,
            l,
            describe_pair(space, &r.hard_witness)
        )
        .unwrap();
    }
    if let Some(r) = c.reports.first() {
        writeln!(text, "pairs: {} ({})", r.sample_count, r.coverage.label()).unwrap();
    }
    for e in &c.consistency_errors {
        writeln!(text, "INCONSISTENT: {e}").unwrap();
    }
    Outcome { code: exit::OK, text, json: c.to_json(space) }
}

fn completeness_note(pair: &MapPair) -> String {
    match pair.space() {
        Space::Finite(_) => "finite space, complete".into(),
        Space::Interval(s) => {
            let dom = s.domain();
            if !dom.lo.is_open() && !dom.hi.is_open() {
                return "X is closed in R, complete".into();
            }
            let t_finite = match pair.t() {
                SelfMap::PiecewiseAffine(m) => m.pieces().iter().all(|p| p.slope.is_zero()),
                _ => false,
            };
            if t_finite {
                "T(X) is finite, complete".into()
            } else {
                let end = |b: &Bound| b.value().map_or("inf".to_string(), |v| v.to_string());
                format!("not established: X has an open end ({} or {}) and T(X) is infinite", end(&dom.lo), end(&dom.hi))
            }
        }
    }
}

/// Checks the hypotheses, runs the T-sequence from `x0`, then reports the
/// exact coincidence set, weak compatibility and common fixed points.
pub fn cmd_solve(
    problem: &Problem,
    kind: Option<ConditionKind>,
    x0: Option<&str>,
    epsilon: &ExactScalar,
    max_iter: usize,
) -> Result<Outcome, CliError> {
    let pair = &problem.pair;
    let space = pair.space();
    if epsilon.is_negative() {
        return Err(CliError::Usage(format!("--epsilon must be nonnegative, got {epsilon}")));
    }
    if max_iter == 0 {
        return Err(CliError::Usage("--max-iter must be positive".into()));
    }
    let x0 = match x0 {
        Some(s) => parse_point(space, s)?,
        None => match space {
            Space::Finite(_) => PointRef::Index(0),
            Space::Interval(s) => PointRef::Coord(s.domain().representative().expect("spaces are nonempty")),
        },
    };
    let kind = kind.or(problem.condition.as_ref().map(|c| c.0)).unwrap_or(ConditionKind::GeneralizedConditionB);
    let mut text = String::new();
    let fail = |text: String, hypothesis: &str, detail: Value| Outcome {
        code: exit::HYPOTHESIS,
        text,
        json: json!({"hypothesis_failed": hypothesis, "detail": detail}),
    };

    writeln!(text, "hypotheses").unwrap();
    let range = range_contained(pair);
    if let Some(w) = &range.witness {
        writeln!(text, "  range containment   FAILED: {} is in T(X) but not in f(X)", space.describe(w)).unwrap();
        return Ok(fail(text, "range containment", json!({"witness": space.describe(w)})));
    }
    writeln!(text, "  range containment   T(X) is contained in f(X)").unwrap();
    if !kind.composes_f() && !pair.f_is_identity() {
        writeln!(text, "  condition           FAILED: {kind} is stated for f = identity").unwrap();
        return Ok(fail(text, "condition", json!({"kind": kind.name(), "reason": "requires f = identity"})));
    }
    let report = feasibility(kind, pair, &problem.sampler);
    let Some((delta, l)) = report.certified_constants() else {
        let inf = report.delta_inf.as_ref().map_or("undefined".to_string(), |v| v.to_string());
        writeln!(
            text,
            "  condition           FAILED: {kind} infeasible (delta_inf = {inf}, witness {})",
            describe_pair(space, &report.hard_witness)
        )
        .unwrap();
        return Ok(fail(text, "condition", report.to_json(space)));
    };
    writeln!(
        text,
        "  condition           {kind} holds with delta = {delta}, L = {l} ({}, {} pairs)",
        report.coverage.label(),
        report.sample_count
    )
    .unwrap();
    let completeness = completeness_note(pair);
    writeln!(text, "  completeness        {completeness}").unwrap();

    let rate = if kind == ConditionKind::FiveTermMForm { &delta / (ExactScalar::one() - &delta) } else { delta.clone() };
    let rate = if rate.is_positive() { rate } else { ExactScalar::new(1, 2) };
    let trace = t_sequence(pair, &x0, &rate, epsilon, max_iter).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(text, "iteration from x0 = {} at rate {rate}, epsilon = {epsilon}", space.describe(&x0)).unwrap();
    writeln!(text, "  steps               {}", trace.steps()).unwrap();
    writeln!(text, "  terminated by       {}", trace.terminated_by).unwrap();
    let limit = space.describe(trace.limit_estimate());
    match trace.terminated_by {
        Termination::GapZero => {
            let (x, v) = trace.coincidence().unwrap();
            writeln!(text, "  coincidence         x = {}, Tx = fx = {} (exact)", space.describe(x), space.describe(v)).unwrap();
        }
        Termination::ToleranceMet => {
            writeln!(text, "  coincidence value   {limit} within {}", trace.error_bound()).unwrap();
        }
        Termination::MaxIterations => {
            writeln!(text, "  no coincidence within {max_iter} steps; last value {limit}, bound {}", trace.error_bound()).unwrap();
        }
    }

    writeln!(text, "exact analysis").unwrap();
    let coin = coincidence_points(pair);
    let mut coin_desc: Vec<String> =
        coin.points.iter().map(|c| format!("{} -> {}", space.describe(&c.x), space.describe(&c.value))).collect();
    coin_desc.extend(coin.segments.iter().map(|s| format!("{} -> {}x + {}", s.domain, s.slope, s.intercept)));
    writeln!(text, "  coincidence points  {}", if coin_desc.is_empty() { "none".into() } else { coin_desc.join(", ") }).unwrap();
    let compat = is_weakly_compatible(pair);
    match &compat.witness {
        None => writeln!(text, "  weakly compatible   yes").unwrap(),
        Some(w) => writeln!(
            text,
            "  weakly compatible   no: at x = {}, fTx = {} but Tfx = {}",
            space.describe(&w.x),
            space.describe(&w.ft),
            space.describe(&w.tf)
        )
        .unwrap(),
    }
    let common = common_fixed_points(pair);
    let unique = match coin.values() {
        CoincidenceValues::Finite(v) if v.len() == 1 => Some(v[0].clone()),
        _ => None,
    };
    match (&unique, compat.compatible) {
        (Some(w), true) => writeln!(text, "  common fixed point  {} (unique)", space.describe(w)).unwrap(),
        _ => writeln!(text, "  common fixed points {}", describe_set(space, &common)).unwrap(),
    }

    let json = json!({
        "kind": kind.name(),
        "delta": delta.to_string(),
        "L": l.to_string(),
        "completeness": completeness,
        "x0": space.describe(&x0),
        "trace": trace.summary_json(space),
        "coincidence_points": coin.points.iter().map(|c| json!({"x": space.describe(&c.x), "value": space.describe(&c.value)})).collect::<Vec<_>>(),
        "coincidence_segments": coin.segments.iter().map(|s| s.domain.to_string()).collect::<Vec<_>>(),
        "weakly_compatible": compat.compatible,
        "commutation_witness": compat.witness.as_ref().map(|w| json!({
            "x": space.describe(&w.x), "fTx": space.describe(&w.ft), "Tfx": space.describe(&w.tf)
        })),
        "common_fixed_points": common.points.iter().map(|p| space.describe(p)).collect::<Vec<_>>(),
    });
    let code = match trace.terminated_by {
        Termination::MaxIterations => exit::NO_CONVERGENCE,
        _ => exit::OK,
    };
    Ok(Outcome { code, text, json })
}

pub fn cmd_search(seeds: Range<u64>, n_max: usize, magnitude: i64) -> Result<Outcome, CliError> {
    if n_max < 2 {
        return Err(CliError::Usage(format!("--n-max must be at least 2, got {n_max}")));
    }
    if magnitude < 1 {
        return Err(CliError::Usage(format!("--magnitude must be positive, got {magnitude}")));
    }
    let report = search_open_problem_1(seeds.clone(), n_max, magnitude);
    let mut text = String::new();
    writeln!(text, "seeds       {}..{}", seeds.start, seeds.end).unwrap();
    writeln!(text, "n_max       {n_max}").unwrap();
    writeln!(text, "pool        five_term_m with least delta in [1/2, 1)").unwrap();
    writeln!(text, "examined    {}", report.examined).unwrap();
    writeln!(text, "applicable  {}", report.applicable).unwrap();
    writeln!(text, "pass        {}", report.pass).unwrap();
    writeln!(text, "candidates  {}", report.candidates.len()).unwrap();
    for c in &report.candidates {
        writeln!(text, "  seed {} n = {} delta = {} L = {} {:?}", c.instance.seed, c.instance.len(), c.delta, c.l, c.defect).unwrap();
    }
    if !report.rejected.is_empty() {
        writeln!(text, "REJECTED on re-verification: {:?}", report.rejected).unwrap();
    }
    Ok(Outcome { code: exit::OK, text, json: report.to_json() })
}

/// Re-verifies a single candidate or every candidate in a search report.
pub fn cmd_recheck(text: &str) -> Result<Outcome, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed candidate file: {e}")))?;
    let items: Vec<Value> = match v.get("candidates") {
        Some(Value::Array(items)) => items.clone(),
        _ => vec![v],
    };
    let mut out = String::new();
    let mut results = Vec::new();
    let mut code = exit::OK;
    for item in &items {
        let raw = CounterexampleCandidate::from_json(item).map_err(|e| CliError::Usage(e.to_string()))?;
        let verdict = match verify_candidate(&raw) {
            Ok(true) => "reproduced".to_string(),
            Ok(false) => {
                code = code.max(exit::VIOLATED);
                "not reproduced".to_string()
            }
            Err(e @ ExplorerError::CorruptCandidate(_)) | Err(e @ ExplorerError::Malformed(_)) => {
                code = exit::INPUT;
                e.to_string()
            }
        };
        writeln!(out, "seed {}: {verdict}", raw.seed).unwrap();
        results.push(json!({"seed": raw.seed, "result": verdict}));
    }
    if items.is_empty() {
        writeln!(out, "no candidates").unwrap();
    }
    Ok(Outcome { code, text: out, json: json!({ "results": results }) })
}

pub fn cmd_fixtures(id: Option<FixtureId>) -> Outcome {
    match id {
        Some(id) => {
            let file: ProblemFile = id.file();
            let json = serde_json::to_value(&file).expect("problem files serialize");
            Outcome { code: exit::OK, text: file.to_json_pretty() + "\n", json }
        }
        None => {
            let mut text = String::new();
            for id in FixtureId::ALL {
                let p = id.problem();
                let shape = match p.pair.space() {
                    Space::Finite(s) => format!("{} points", s.len()),
                    Space::Interval(s) => format!("interval {}", s.domain()),
                };
                writeln!(text, "{:<14} {shape}", id.name()).unwrap();
            }
            let names: Vec<&str> = FixtureId::ALL.iter().map(|id| id.name()).collect();
            Outcome { code: exit::OK, text, json: json!(names) }
        }
    }
}
