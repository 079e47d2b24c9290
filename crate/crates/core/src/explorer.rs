//! Seeded random finite instances, brute-force checks of the unique
//! coincidence theorems, and the search over rates in `[1/2, 1)` for the
//! five-term condition.

use std::fmt;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::conditions::{check_inequality, feasibility, ConditionKind, DomainSampler};
use crate::iterate::{t_sequence, Termination};
use crate::metric::{metric_closure, validate_metric, FiniteMetricSpace, PointRef, Space};
use crate::scalar::ExactScalar;
use crate::selfmaps::{
    coincidence_points, common_fixed_points, is_weakly_compatible, CoincidenceValues, MapPair,
    SelfMap, TableMap,
};

pub const DEFAULT_MAGNITUDE: i64 = 8;
pub const DEFAULT_N_MAX: usize = 6;
const TRACE_BUDGET: usize = 10_000;

/// A random finite space with tables `f` and `T`, where `T(X) ⊆ f(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSample {
    pub seed: u64,
    pub space: FiniteMetricSpace,
    pub f: TableMap,
    pub t: TableMap,
}

impl InstanceSample {
    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn pair(&self) -> MapPair {
        MapPair::new(
            Space::Finite(self.space.clone()),
            SelfMap::Table(self.t.clone()),
            SelfMap::Table(self.f.clone()),
        )
        .expect("instances are valid by construction")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "dist": self.space.matrix().iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "f": self.f.image(),
            "T": self.t.image(),
        })
    }
}

/// Draws `n ∈ [2, n_max]`, integer weights in `[1, magnitude]` closed under
/// shortest paths, `f` uniform, and each `T(i)` uniform over `f(X)`.
pub fn random_instance(seed: u64, n_max: usize, magnitude: i64) -> InstanceSample {
    assert!(n_max >= 2, "n_max must be at least 2");
    assert!(magnitude >= 1, "magnitude must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=n_max);
    let mut m = vec![vec![ExactScalar::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = ExactScalar::from_integer(rng.gen_range(1..=magnitude));
            m[i][j] = w.clone();
            m[j][i] = w;
        }
    }
    let space = metric_closure(m).expect("positive symmetric weights close to a metric");
    let f: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let mut image = f.clone();
    image.sort_unstable();
    image.dedup();
    let t: Vec<usize> = (0..n).map(|_| image[rng.gen_range(0..image.len())]).collect();
    InstanceSample { seed, space, f: TableMap::new(f), t: TableMap::new(t) }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailReason {
    NoCoincidence,
    MultipleValues(Vec<PointRef>),
    /// The T-sequence from `start` ran out of budget or hit a missing preimage.
    NoConvergence { start: PointRef },
    WrongLimit { start: PointRef, value: PointRef },
    /// `gap[step] > rate * gap[step - 1]`.
    RateViolated { start: PointRef, step: usize },
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailReason::NoCoincidence => write!(f, "no point of coincidence"),
            FailReason::MultipleValues(v) => {
                let v: Vec<String> = v.iter().map(|p| p.to_string()).collect();
                write!(f, "several points of coincidence: {}", v.join(", "))
            }
            FailReason::NoConvergence { start } => write!(f, "T-sequence from {start} did not reach a coincidence"),
            FailReason::WrongLimit { start, value } => write!(f, "T-sequence from {start} ended at {value}"),
            FailReason::RateViolated { start, step } => write!(f, "T-sequence from {start} breaks the rate at step {step}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass { value: PointRef, delta_inf: ExactScalar },
    Fail(FailReason),
    /// The condition is not satisfiable at admissible constants.
    NotApplicable { delta_inf: Option<ExactScalar> },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn is_applicable(&self) -> bool {
        !matches!(self, Verdict::NotApplicable { .. })
    }
}

fn rate_for_trace(rate: &ExactScalar) -> ExactScalar {
    if rate.is_positive() {
        rate.clone()
    } else {
        ExactScalar::new(1, 2)
    }
}

/// Shared driver: unique coincidence value, and every T-sequence reaches
/// it with `gap[n] <= rate * gap[n-1]`.
fn validate_unique_coincidence(
    pair: &MapPair,
    kind: ConditionKind,
    rate_of: impl Fn(&ExactScalar) -> ExactScalar,
) -> Verdict {
    let n = pair.space().as_finite().expect("finite instances only").len();
    let report = feasibility(kind, pair, &DomainSampler::default());
    let delta_inf = match (&report.delta_inf, report.feasible) {
        (Some(d), true) => d.clone(),
        (d, _) => return Verdict::NotApplicable { delta_inf: d.clone() },
    };
    let value = match coincidence_points(pair).values() {
        CoincidenceValues::Finite(v) if v.is_empty() => return Verdict::Fail(FailReason::NoCoincidence),
        CoincidenceValues::Finite(v) if v.len() == 1 => v[0].clone(),
        CoincidenceValues::Finite(v) => return Verdict::Fail(FailReason::MultipleValues(v)),
        CoincidenceValues::Continuum => unreachable!("finite spaces have finitely many coincidences"),
    };
    let rate = rate_of(&delta_inf);
    let zero = ExactScalar::zero();
    for i in 0..n {
        let start = PointRef::Index(i);
        let trace = match t_sequence(pair, &start, &rate_for_trace(&rate), &zero, TRACE_BUDGET) {
            Ok(t) if t.terminated_by == Termination::GapZero => t,
            _ => return Verdict::Fail(FailReason::NoConvergence { start }),
        };
        if let Some(step) = (1..trace.gaps.len()).find(|&k| trace.gaps[k] > &rate * &trace.gaps[k - 1]) {
            return Verdict::Fail(FailReason::RateViolated { start, step });
        }
        let (_, reached) = trace.coincidence().unwrap();
        if reached != &value {
            return Verdict::Fail(FailReason::WrongLimit { start, value: reached.clone() });
        }
    }
    Verdict::Pass { value, delta_inf }
}

/// Generalized condition (B) with `delta < 1` implies a unique point of
/// coincidence, reached by every T-sequence at rate `delta_inf`.
pub fn validate_theorem_2_1(pair: &MapPair) -> Verdict {
    validate_unique_coincidence(pair, ConditionKind::GeneralizedConditionB, |d| d.clone())
}

/// The five-term condition with `delta < 1/2` implies a unique point of
/// coincidence; T-sequence gaps shrink at rate `delta/(1-delta)`.
pub fn validate_theorem_3_1(pair: &MapPair) -> Verdict {
    validate_unique_coincidence(pair, ConditionKind::FiveTermMForm, |d| d / (ExactScalar::one() - d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Defect {
    NoPointOfCoincidence,
    MultiplePointsOfCoincidence,
    NoCommonFixedPointDespiteWeakCompatibility,
}

/// An instance satisfying the five-term condition only with `delta` in
/// `[1/2, 1)` whose coincidence structure is defective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleCandidate {
    pub instance: InstanceSample,
    pub kind: ConditionKind,
    pub delta: ExactScalar,
    pub l: ExactScalar,
    pub defect: Defect,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExplorerError {
    #[error("corrupt candidate: {0}")]
    CorruptCandidate(String),
    #[error("malformed candidate file: {0}")]
    Malformed(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CandidateFile {
    version: String,
    seed: u64,
    dist: Vec<Vec<ExactScalar>>,
    f: Vec<usize>,
    #[serde(rename = "T")]
    t: Vec<usize>,
    kind: String,
    delta: ExactScalar,
    #[serde(rename = "L")]
    l: ExactScalar,
    defect: Defect,
}

impl CounterexampleCandidate {
    pub fn to_json(&self) -> Value {
        let file = CandidateFile {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: self.instance.seed,
            dist: self.instance.space.matrix().to_vec(),
            f: self.instance.f.image().to_vec(),
            t: self.instance.t.image().to_vec(),
            kind: self.kind.name().to_string(),
            delta: self.delta.clone(),
            l: self.l.clone(),
            defect: self.defect,
        };
        serde_json::to_value(file).expect("candidates serialize")
    }

    /// Reads a candidate back. The metric and tables are checked by
    /// [`verify_candidate`], not here.
    pub fn from_json(v: &Value) -> Result<RawCandidate, ExplorerError> {
        let file: CandidateFile = serde_json::from_value(v.clone()).map_err(|e| ExplorerError::Malformed(e.to_string()))?;
        let kind = ConditionKind::from_name(&file.kind)
            .ok_or_else(|| ExplorerError::Malformed(format!("unknown kind {:?}", file.kind)))?;
        Ok(RawCandidate {
            seed: file.seed,
            dist: file.dist,
            f: file.f,
            t: file.t,
            kind,
            delta: file.delta,
            l: file.l,
            defect: file.defect,
        })
    }

    pub fn raw(&self) -> RawCandidate {
        RawCandidate {
            seed: self.instance.seed,
            dist: self.instance.space.matrix().to_vec(),
            f: self.instance.f.image().to_vec(),
            t: self.instance.t.image().to_vec(),
            kind: self.kind,
            delta: self.delta.clone(),
            l: self.l.clone(),
            defect: self.defect,
        }
    }
}

/// A candidate as stored, before any validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawCandidate {
    pub seed: u64,
    pub dist: Vec<Vec<ExactScalar>>,
    pub f: Vec<usize>,
    pub t: Vec<usize>,
    pub kind: ConditionKind,
    pub delta: ExactScalar,
    pub l: ExactScalar,
    pub defect: Defect,
}

/// Coincidence defect by direct table scans, independent of the
/// selfmaps analysis routines.
fn table_defect(f: &[usize], t: &[usize]) -> Option<Defect> {
    let coincident: Vec<usize> = (0..f.len()).filter(|&i| f[i] == t[i]).collect();
    let mut values: Vec<usize> = coincident.iter().map(|&i| t[i]).collect();
    values.sort_unstable();
    values.dedup();
    match values.len() {
        0 => return Some(Defect::NoPointOfCoincidence),
        1 => {}
        _ => return Some(Defect::MultiplePointsOfCoincidence),
    }
    let weakly_compatible = coincident.iter().all(|&i| f[t[i]] == t[f[i]]);
    let has_common_fixed = (0..f.len()).any(|i| f[i] == i && t[i] == i);
    (weakly_compatible && !has_common_fixed).then_some(Defect::NoCommonFixedPointDespiteWeakCompatibility)
}

fn in_search_range(delta: &ExactScalar) -> bool {
    delta >= &ExactScalar::new(1, 2) && delta < &ExactScalar::one()
}

/// Recomputes the candidate from its raw data: the metric, range
/// containment, the inequality at the stored `(delta, L)` over all ordered
/// pairs, and the defect by direct table scans.
pub fn verify_candidate(c: &RawCandidate) -> Result<bool, ExplorerError> {
    let space = validate_metric(c.dist.clone()).map_err(|e| ExplorerError::CorruptCandidate(e.to_string()))?;
    let n = space.len();
    if c.f.len() != n || c.t.len() != n || c.f.iter().chain(&c.t).any(|&v| v >= n) {
        return Err(ExplorerError::CorruptCandidate("map tables do not match the space".into()));
    }
    if c.t.iter().any(|v| !c.f.contains(v)) {
        return Err(ExplorerError::CorruptCandidate("T(X) is not contained in f(X)".into()));
    }
    if !in_search_range(&c.delta) || c.l.is_negative() {
        return Ok(false);
    }
    let pair = MapPair::new(Space::Finite(space), SelfMap::Table(TableMap::new(c.t.clone())), SelfMap::Table(TableMap::new(c.f.clone())))
        .map_err(|e| ExplorerError::CorruptCandidate(e.to_string()))?;
    if !check_inequality(c.kind, &pair, &c.delta, &c.l, &DomainSampler::default()).holds {
        return Ok(false);
    }
    Ok(table_defect(&c.f, &c.t) == Some(c.defect))
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum SeedOutcome {
    Excluded,
    Pass,
    Candidate(Box<CounterexampleCandidate>),
    /// A defect that failed independent re-verification.
    Rejected(u64),
}

/// Counts and candidates of a search run, ordered by seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub seeds: Range<u64>,
    pub n_max: usize,
    pub magnitude: i64,
    pub examined: usize,
    pub applicable: usize,
    pub pass: usize,
    pub candidates: Vec<CounterexampleCandidate>,
    /// Seeds whose defect did not survive re-verification; nonempty means a bug.
    pub rejected: Vec<u64>,
}

impl SearchReport {
    pub fn to_json(&self) -> Value {
        json!({
            "version": env!("CARGO_PKG_VERSION"),
            "seeds": [self.seeds.start, self.seeds.end],
            "n_max": self.n_max,
            "magnitude": self.magnitude,
            "kind": ConditionKind::FiveTermMForm.name(),
            "pool": "instances whose least admissible delta lies in [1/2, 1)",
            "counts": {
                "examined": self.examined,
                "applicable": self.applicable,
                "pass": self.pass,
                "candidates": self.candidates.len(),
                "rejected": self.rejected.len(),
            },
            "candidates": self.candidates.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "rejected": self.rejected,
        })
    }
}

fn search_seed(seed: u64, n_max: usize, magnitude: i64) -> SeedOutcome {
    let instance = random_instance(seed, n_max, magnitude);
    let pair = instance.pair();
    let kind = ConditionKind::FiveTermMForm;
    let report = feasibility(kind, &pair, &DomainSampler::default());
    let delta = match report.delta_inf {
        Some(d) if in_search_range(&d) => d,
        _ => return SeedOutcome::Excluded,
    };
    let l = report.l_of_delta.eval(&delta);
    let defect = match coincidence_points(&pair).values() {
        CoincidenceValues::Finite(v) if v.is_empty() => Some(Defect::NoPointOfCoincidence),
        CoincidenceValues::Finite(v) if v.len() > 1 => Some(Defect::MultiplePointsOfCoincidence),
        _ if is_weakly_compatible(&pair).compatible && common_fixed_points(&pair).is_empty() => {
            Some(Defect::NoCommonFixedPointDespiteWeakCompatibility)
        }
        _ => None,
    };
    let Some(defect) = defect else {
        return SeedOutcome::Pass;
    };
    let candidate = CounterexampleCandidate { instance, kind, delta, l, defect };
    match verify_candidate(&candidate.raw()) {
        Ok(true) => SeedOutcome::Candidate(Box::new(candidate)),
        _ => SeedOutcome::Rejected(seed),
    }
}

/// Collects per-seed results in any order and sorts them by seed on finish.
#[derive(Default)]
struct SeedSink {
    entries: Vec<(u64, SeedOutcome)>,
}

impl SeedSink {
    fn finish(mut self, seeds: Range<u64>, n_max: usize, magnitude: i64) -> SearchReport {
        self.entries.sort_by_key(|(s, _)| *s);
        let mut report = SearchReport {
            seeds,
            n_max,
            magnitude,
            examined: self.entries.len(),
            applicable: 0,
            pass: 0,
            candidates: Vec::new(),
            rejected: Vec::new(),
        };
        for (_, outcome) in self.entries {
            match outcome {
                SeedOutcome::Excluded => continue,
                SeedOutcome::Pass => report.pass += 1,
                SeedOutcome::Candidate(c) => report.candidates.push(*c),
                SeedOutcome::Rejected(s) => report.rejected.push(s),
            }
            report.applicable += 1;
        }
        report
    }
}

/// Searches the seeds for instances that satisfy the five-term condition
/// only with `delta ∈ [1/2, 1)` and lack a unique point of coincidence (or
/// a common fixed point despite weak compatibility). Every candidate is
/// re-verified before it is reported.
pub fn search_open_problem_1(seeds: Range<u64>, n_max: usize, magnitude: i64) -> SearchReport {
    let entries = seeds.clone().into_par_iter().map(|s| (s, search_seed(s, n_max, magnitude))).collect();
    SeedSink { entries }.finish(seeds, n_max, magnitude)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::selfmaps::range_contained;

    fn instance(dist: &[&[&str]], f: Vec<usize>, t: Vec<usize>) -> InstanceSample {
        let m = dist.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect();
        InstanceSample { seed: 0, space: validate_metric(m).unwrap(), f: TableMap::new(f), t: TableMap::new(t) }
    }

    const THREE: &[&[&str]] = &[&["0", "1/2", "1"], &["1/2", "0", "1/2"], &["1", "1/2", "0"]];

    #[test]
    fn instances_are_reproducible_and_valid() {
        for seed in 0..200 {
            let a = random_instance(seed, 6, DEFAULT_MAGNITUDE);
            assert_eq!(a, random_instance(seed, 6, DEFAULT_MAGNITUDE));
            assert!((2..=6).contains(&a.len()));
            assert!(validate_metric(a.space.matrix().to_vec()).is_ok());
            assert!(range_contained(&a.pair()).contained);
        }
        assert_eq!(random_instance(0, 3, 8).to_json().to_string(), random_instance(0, 3, 8).to_json().to_string());
        assert_ne!(random_instance(0, 6, 8), random_instance(1, 6, 8));
    }

    #[test]
    fn three_point_example_passes() {
        let pair = instance(THREE, vec![0, 1, 2], vec![1, 1, 0]).pair();
        assert_eq!(validate_theorem_2_1(&pair), Verdict::Pass { value: 1.into(), delta_inf: q("1/2") });
    }

    #[test]
    fn identity_pair_is_not_applicable() {
        let pair = instance(&[&["0", "1"], &["1", "0"]], vec![0, 1], vec![0, 1]).pair();
        assert_eq!(validate_theorem_2_1(&pair), Verdict::NotApplicable { delta_inf: Some(q("1")) });
    }

    #[test]
    fn constant_maps_meet() {
        let pair = instance(THREE, vec![2, 0, 2], vec![2, 2, 2]).pair();
        match validate_theorem_2_1(&pair) {
            Verdict::Pass { value, .. } => assert_eq!(value, 2.into()),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn five_term_gate() {
        let one = instance(&[&["0"]], vec![0], vec![0]).pair();
        assert!(validate_theorem_3_1(&one).is_pass());
        let swap = instance(&[&["0", "1"], &["1", "0"]], vec![0, 1], vec![1, 0]).pair();
        assert!(!validate_theorem_3_1(&swap).is_applicable());
    }

    #[test]
    fn candidate_round_trip_and_tampering() {
        // T swaps two points: no coincidence at all.
        let inst = instance(&[&["0", "1"], &["1", "0"]], vec![0, 1], vec![1, 0]);
        let report = feasibility(ConditionKind::FiveTermMForm, &inst.pair(), &DomainSampler::default());
        assert_eq!(report.delta_inf, Some(q("1")));
        let c = CounterexampleCandidate {
            instance: inst,
            kind: ConditionKind::FiveTermMForm,
            delta: q("1/2"),
            l: q("100"),
            defect: Defect::NoPointOfCoincidence,
        };
        // delta below delta_inf: the inequality fails, so this is not a candidate
        assert_eq!(verify_candidate(&c.raw()), Ok(false));
        let back = CounterexampleCandidate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c.raw());

        let mut bad = c.raw();
        bad.dist[0][1] = q("2");
        assert!(matches!(verify_candidate(&bad), Err(ExplorerError::CorruptCandidate(_))));
        let mut bad = c.raw();
        bad.f = vec![0, 0];
        assert!(matches!(verify_candidate(&bad), Err(ExplorerError::CorruptCandidate(_))));
    }

    #[test]
    fn verify_detects_edited_defect() {
        // coincidence values 0 and 2
        let inst = instance(THREE, vec![0, 1, 2], vec![0, 0, 2]);
        let pair = inst.pair();
        assert_eq!(table_defect(inst.f.image(), inst.t.image()), Some(Defect::MultiplePointsOfCoincidence));
        let report = feasibility(ConditionKind::FiveTermMForm, &pair, &DomainSampler::default());
        let delta = q("1/2");
        let l = report.l_of_delta.eval(&delta);
        let holds = check_inequality(ConditionKind::FiveTermMForm, &pair, &delta, &l, &DomainSampler::default()).holds;
        let c = RawCandidate {
            seed: 0,
            dist: inst.space.matrix().to_vec(),
            f: inst.f.image().to_vec(),
            t: inst.t.image().to_vec(),
            kind: ConditionKind::FiveTermMForm,
            delta,
            l,
            defect: Defect::MultiplePointsOfCoincidence,
        };
        assert_eq!(verify_candidate(&c), Ok(holds));
        let mut edited = c.clone();
        edited.defect = Defect::NoPointOfCoincidence;
        assert_eq!(verify_candidate(&edited), Ok(false));
    }

    #[test]
    fn four_cycle_meets_five_term_condition_above_half() {
        // T∘f⁻¹ is the cycle 0 → 1 → 2 → 3 → 0: no coincidence point, yet the
        // five-term inequality holds at delta = 6/7.
        let dist: &[&[&str]] = &[&["0", "6", "4", "1"], &["6", "0", "2", "7"], &["4", "2", "0", "5"], &["1", "7", "5", "0"]];
        let inst = instance(dist, vec![1, 3, 0, 2], vec![2, 0, 1, 3]);
        let pair = inst.pair();
        let fr = feasibility(ConditionKind::FiveTermMForm, &pair, &DomainSampler::default());
        assert_eq!(fr.delta_inf, Some(q("6/7")));
        assert_eq!(fr.l_of_delta.eval(&q("6/7")), q("13/7"));
        let c = CounterexampleCandidate {
            instance: inst.clone(),
            kind: ConditionKind::FiveTermMForm,
            delta: q("6/7"),
            l: q("13/7"),
            defect: Defect::NoPointOfCoincidence,
        };
        assert_eq!(verify_candidate(&c.raw()), Ok(true));
        // the same cycle as a single map on the relabelled space
        let cycle = instance(dist, vec![0, 1, 2, 3], vec![1, 2, 3, 0]).pair();
        let k = ConditionKind::BerindeThm111;
        assert!(check_inequality(k, &cycle, &q("6/7"), &q("13/7"), &DomainSampler::default()).holds);
        assert!(common_fixed_points(&cycle).is_empty());
    }

    #[test]
    fn search_is_deterministic() {
        let a = search_open_problem_1(0..300, 4, DEFAULT_MAGNITUDE);
        let b = search_open_problem_1(0..300, 4, DEFAULT_MAGNITUDE);
        assert_eq!(a, b);
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
        assert_eq!(a.examined, 300);
        assert!(a.rejected.is_empty());
        assert_eq!(a.applicable, a.pass + a.candidates.len());
        for c in &a.candidates {
            assert_eq!(verify_candidate(&c.raw()), Ok(true));
        }
        let empty = search_open_problem_1(0..0, 4, DEFAULT_MAGNITUDE);
        assert_eq!((empty.examined, empty.applicable, empty.candidates.len()), (0, 0, 0));
    }

    #[test]
    fn search_excludes_low_rates() {
        let report = search_open_problem_1(0..200, 5, DEFAULT_MAGNITUDE);
        for seed in 0..200 {
            let pair = random_instance(seed, 5, DEFAULT_MAGNITUDE).pair();
            let fr = feasibility(ConditionKind::FiveTermMForm, &pair, &DomainSampler::default());
            if fr.delta_inf.as_ref().is_some_and(|d| d < &q("1/2")) {
                assert!(report.candidates.iter().all(|c| c.instance.seed != seed));
            }
        }
    }
}
