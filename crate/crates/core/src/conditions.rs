//! Contractive conditions of the form `d(Tx,Ty) <= delta*A(x,y) + L*B(x,y)`
//! and their exact feasibility analysis over `(delta, L)`.
//!
//! Every condition is quantified over ordered pairs: several `B` terms
//! (`d(fy,Tx)`, `d(y,Tx)`) are not symmetric in `x` and `y`.
//!
//! For a fixed sample of pairs the feasible region is described exactly:
//! pairs with `B = 0` force `delta >= lhs/A`, so `delta_inf` is the largest
//! such ratio; for admissible `delta` the smallest `L` is the upper envelope
//! of the lines `(lhs - delta*A)/B` over pairs with `B > 0`, clamped at 0.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::metric::{PointRef, Space};
use crate::scalar::ExactScalar;
use crate::selfmaps::{MapError, MapPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionKind {
    /// `A = d(fx,fy)`, `B = 0`, `delta ∈ [0,1)`.
    FContraction,
    /// `A = d(fx,fy)`, `B = d(fy,Tx)`, `delta ∈ (0,1)`.
    AlmostContractionWrtF,
    /// `A = d(x,y)`, `B = d(x,Tx)`, `delta ∈ (0,1)`.
    Thm13Extra,
    /// `A = d(x,y)`, `B = min{d(x,Tx), d(y,Ty), d(x,Ty), d(y,Tx)}`, `delta ∈ (0,1)`.
    ConditionB,
    /// `A = max{d(fx,fy), d(fx,Tx), d(fy,Ty), [d(fx,Ty)+d(fy,Tx)]/2}`,
    /// `B = min{d(fx,Tx), d(fy,Ty), d(fx,Ty), d(fy,Tx)}`, `delta ∈ (0,1)`.
    GeneralizedConditionB,
    /// `A = max{d(fx,fy), [d(fx,Tx)+d(fy,Ty)]/2, [d(fy,Tx)+d(fx,Ty)]/2}`,
    /// `B` as for the generalized condition (B), `delta ∈ (0,1)`.
    CorollaryMForm,
    /// `A = max{d(fx,fy), d(fx,Tx), d(fy,Ty), d(fx,Ty), d(fy,Tx)}`,
    /// `B` as for the generalized condition (B), `delta ∈ (0,1/2)`.
    FiveTermMForm,
    /// `A = max{d(x,y), d(x,Tx), d(y,Ty), d(x,Ty), d(y,Tx)}`, `B = d(y,Tx)`,
    /// `delta ∈ [0,1)`.
    CiricAlmost,
    /// `A` as for `CiricAlmost`, `B = min{d(x,Tx), d(y,Ty), d(x,Ty), d(y,Tx)}`,
    /// `delta ∈ (0,1)`.
    BerindeThm111,
}

/// Admissible constants: `0 <= delta < upper`, with 0 itself excluded
/// unless `zero_allowed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaRange {
    pub zero_allowed: bool,
    pub upper: ExactScalar,
}

impl DeltaRange {
    pub fn contains(&self, delta: &ExactScalar) -> bool {
        let above = if self.zero_allowed { !delta.is_negative() } else { delta.is_positive() };
        above && delta < &self.upper
    }
}

impl fmt::Display for DeltaRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.zero_allowed { '[' } else { '(' };
        write!(f, "{open}0, {})", self.upper)
    }
}

impl ConditionKind {
    pub const ALL: [ConditionKind; 9] = [
        ConditionKind::FContraction,
        ConditionKind::AlmostContractionWrtF,
        ConditionKind::Thm13Extra,
        ConditionKind::ConditionB,
        ConditionKind::GeneralizedConditionB,
        ConditionKind::CorollaryMForm,
        ConditionKind::FiveTermMForm,
        ConditionKind::CiricAlmost,
        ConditionKind::BerindeThm111,
    ];

    /// Stable short name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            ConditionKind::FContraction => "f_contraction",
            ConditionKind::AlmostContractionWrtF => "almost_wrt_f",
            ConditionKind::Thm13Extra => "thm13_extra",
            ConditionKind::ConditionB => "condition_b",
            ConditionKind::GeneralizedConditionB => "generalized_b",
            ConditionKind::CorollaryMForm => "corollary_m",
            ConditionKind::FiveTermMForm => "five_term_m",
            ConditionKind::CiricAlmost => "ciric_almost",
            ConditionKind::BerindeThm111 => "berinde_thm111",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn delta_range(self) -> DeltaRange {
        let (zero_allowed, upper) = match self {
            ConditionKind::FContraction | ConditionKind::CiricAlmost => (true, ExactScalar::one()),
            ConditionKind::FiveTermMForm => (false, ExactScalar::new(1, 2)),
            _ => (false, ExactScalar::one()),
        };
        DeltaRange { zero_allowed, upper }
    }

    /// Whether the functionals read `fx` (otherwise they read `x`).
    pub fn composes_f(self) -> bool {
        !matches!(
            self,
            ConditionKind::Thm13Extra
                | ConditionKind::ConditionB
                | ConditionKind::CiricAlmost
                | ConditionKind::BerindeThm111
        )
    }
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConditionError {
    #[error("delta = {delta} is outside {range} for {kind}")]
    DeltaOutOfRange { kind: ConditionKind, delta: ExactScalar, range: Box<DeltaRange> },
    #[error("L = {0} must be nonnegative")]
    NegativeL(ExactScalar),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// One ordered pair instantiated against a condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairTerms {
    pub x: PointRef,
    pub y: PointRef,
    /// `d(Tx,Ty)`
    pub lhs: ExactScalar,
    pub a: ExactScalar,
    pub b: ExactScalar,
}

impl PairTerms {
    pub fn holds(&self, delta: &ExactScalar, l: &ExactScalar) -> bool {
        self.lhs <= delta * &self.a + l * &self.b
    }
}

/// A sample point with its images, evaluated once and reused for all pairs.
#[derive(Clone, Debug)]
struct Sample {
    x: PointRef,
    tx: PointRef,
    fx: PointRef,
}

fn two(v: ExactScalar) -> ExactScalar {
    v / ExactScalar::from_integer(2)
}

fn max_of<const N: usize>(vals: [ExactScalar; N]) -> ExactScalar {
    vals.into_iter().max().unwrap()
}

fn min_of<const N: usize>(vals: [ExactScalar; N]) -> ExactScalar {
    vals.into_iter().min().unwrap()
}

fn terms_for(kind: ConditionKind, space: &Space, p: &Sample, r: &Sample) -> PairTerms {
    let d = |a: &PointRef, b: &PointRef| space.distance_unchecked(a, b);
    let (ux, uy) = if kind.composes_f() { (&p.fx, &r.fx) } else { (&p.x, &r.x) };
    let (tx, ty) = (&p.tx, &r.tx);
    let lhs = d(tx, ty);
    let (a, b) = match kind {
        ConditionKind::FContraction => (d(ux, uy), ExactScalar::zero()),
        ConditionKind::AlmostContractionWrtF => (d(ux, uy), d(uy, tx)),
        ConditionKind::Thm13Extra => (d(ux, uy), d(ux, tx)),
        ConditionKind::CiricAlmost => {
            let a = max_of([d(ux, uy), d(ux, tx), d(uy, ty), d(ux, ty), d(uy, tx)]);
            (a, d(uy, tx))
        }
        _ => {
            let (uu, u_tx, v_ty, u_ty, v_tx) = (d(ux, uy), d(ux, tx), d(uy, ty), d(ux, ty), d(uy, tx));
            let b = min_of([u_tx.clone(), v_ty.clone(), u_ty.clone(), v_tx.clone()]);
            let a = match kind {
                ConditionKind::ConditionB => uu,
                ConditionKind::GeneralizedConditionB => max_of([uu, u_tx, v_ty, two(u_ty + v_tx)]),
                ConditionKind::CorollaryMForm => max_of([uu, two(u_tx + v_ty), two(v_tx + u_ty)]),
                ConditionKind::FiveTermMForm | ConditionKind::BerindeThm111 => {
                    max_of([uu, u_tx, v_ty, u_ty, v_tx])
                }
                _ => unreachable!(),
            };
            (a, b)
        }
    };
    PairTerms { x: p.x.clone(), y: r.x.clone(), lhs, a, b }
}

fn sample_of(pair: &MapPair, x: PointRef) -> Result<Sample, MapError> {
    let tx = pair.eval_t(&x)?;
    let fx = pair.eval_f(&x)?;
    Ok(Sample { x, tx, fx })
}

/// The left side and both functionals of `kind` at the ordered pair `(x, y)`.
pub fn pair_terms(kind: ConditionKind, pair: &MapPair, x: &PointRef, y: &PointRef) -> Result<PairTerms, MapError> {
    let p = sample_of(pair, x.clone())?;
    let r = sample_of(pair, y.clone())?;
    Ok(terms_for(kind, pair.space(), &p, &r))
}

/// Which pairs a check ran over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// All ordered pairs of a finite space.
    Exhaustive,
    /// All ordered pairs of grid nodes `k*step` within `[lo, hi]` plus any
    /// pinned points; a grid pass is evidence, not proof.
    Grid { step: ExactScalar, lo: ExactScalar, hi: ExactScalar, pinned: usize },
}

impl Coverage {
    pub fn to_json(&self) -> Value {
        match self {
            Coverage::Exhaustive => json!("exhaustive"),
            Coverage::Grid { step, lo, hi, pinned } => json!({
                "step": step.to_string(),
                "bounds": [lo.to_string(), hi.to_string()],
                "pinned_points": pinned,
            }),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Coverage::Exhaustive => "exhaustive",
            Coverage::Grid { .. } => "grid-verified",
        }
    }
}

/// How continuous domains are discretized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainSampler {
    /// Grid spacing; nodes are the multiples of `step` inside the space.
    pub step: ExactScalar,
    /// Half-width of the window used in place of an unbounded side.
    pub clip: ExactScalar,
    /// Extra points checked alongside the grid (analytic pairs of interest).
    pub pinned: Vec<ExactScalar>,
}

impl Default for DomainSampler {
    fn default() -> Self {
        DomainSampler { step: ExactScalar::new(1, 600), clip: ExactScalar::from_integer(64), pinned: Vec::new() }
    }
}

impl DomainSampler {
    pub fn with_step(step: ExactScalar) -> Self {
        DomainSampler { step, ..Self::default() }
    }

    /// The sample points of `space` and a description of the coverage.
    pub fn points(&self, space: &Space) -> (Vec<PointRef>, Coverage) {
        match space {
            Space::Finite(s) => ((0..s.len()).map(PointRef::Index).collect(), Coverage::Exhaustive),
            Space::Interval(s) => {
                assert!(self.step.is_positive(), "grid step must be positive");
                let dom = s.domain();
                let lo = dom.lo.value().cloned().unwrap_or_else(|| -&self.clip);
                let hi = dom.hi.value().cloned().unwrap_or_else(|| self.clip.clone());
                let first = (&lo / &self.step).floor();
                let last = (&hi / &self.step).floor();
                let mut pts = Vec::new();
                let mut k = first;
                let one = ExactScalar::one();
                while k <= last {
                    let x = &k * &self.step;
                    if x >= lo && s.contains(&x) {
                        pts.push(x);
                    }
                    k = &k + &one;
                }
                let pinned: Vec<ExactScalar> = self.pinned.iter().filter(|x| s.contains(x)).cloned().collect();
                let n_pinned = pinned.len();
                pts.extend(pinned);
                pts.sort();
                pts.dedup();
                let cov = Coverage::Grid { step: self.step.clone(), lo, hi, pinned: n_pinned };
                (pts.into_iter().map(PointRef::Coord).collect(), cov)
            }
        }
    }
}

fn samples(pair: &MapPair, sampler: &DomainSampler) -> (Vec<Sample>, Coverage) {
    let (pts, cov) = sampler.points(pair.space());
    let samples = pts
        .into_iter()
        .map(|x| sample_of(pair, x).expect("sample points lie in the space"))
        .collect();
    (samples, cov)
}

/// Result of checking one `(delta, L)` against every sampled ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub holds: bool,
    /// First violating ordered pair in row-major sample order.
    pub witness: Option<(PointRef, PointRef)>,
    pub pairs_checked: usize,
    pub coverage: Coverage,
}

fn scan_inequality(
    kind: ConditionKind,
    space: &Space,
    samples: &[Sample],
    delta: &ExactScalar,
    l: &ExactScalar,
) -> Option<(PointRef, PointRef)> {
    samples.iter().find_map(|p| {
        samples.iter().find_map(|r| {
            let t = terms_for(kind, space, p, r);
            (!t.holds(delta, l)).then_some((t.x, t.y))
        })
    })
}

/// Checks the inequality at `(delta, L)` without enforcing the kind's
/// admissible range for `delta`.
pub fn check_inequality(
    kind: ConditionKind,
    pair: &MapPair,
    delta: &ExactScalar,
    l: &ExactScalar,
    sampler: &DomainSampler,
) -> CheckOutcome {
    let (samples, coverage) = samples(pair, sampler);
    let witness = scan_inequality(kind, pair.space(), &samples, delta, l);
    CheckOutcome { holds: witness.is_none(), witness, pairs_checked: samples.len() * samples.len(), coverage }
}

/// Checks the condition at admissible constants `(delta, L)`.
pub fn check_condition(
    kind: ConditionKind,
    pair: &MapPair,
    delta: &ExactScalar,
    l: &ExactScalar,
    sampler: &DomainSampler,
) -> Result<CheckOutcome, ConditionError> {
    let range = kind.delta_range();
    if !range.contains(delta) {
        return Err(ConditionError::DeltaOutOfRange { kind, delta: delta.clone(), range: Box::new(range) });
    }
    if l.is_negative() {
        return Err(ConditionError::NegativeL(l.clone()));
    }
    Ok(check_inequality(kind, pair, delta, l, sampler))
}

/// `δ ↦ max(0, max_i (intercept_i + slope_i·δ))`: the least `L` that makes
/// every pair with `B > 0` hold at `δ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LEnvelope {
    /// Upper hull lines `(intercept, slope)` sorted by increasing slope.
    lines: Vec<(ExactScalar, ExactScalar)>,
}

impl LEnvelope {
    /// Builds the upper envelope of `lines` given as `(intercept, slope)`.
    pub fn from_lines(mut lines: Vec<(ExactScalar, ExactScalar)>) -> Self {
        lines.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        // keep the highest line of each slope
        let mut uniq: Vec<(ExactScalar, ExactScalar)> = Vec::with_capacity(lines.len());
        for l in lines {
            if let Some(last) = uniq.last_mut() {
                if last.1 == l.1 {
                    *last = l;
                    continue;
                }
            }
            uniq.push(l);
        }
        // x where line a meets line b (slopes differ)
        let meet = |a: &(ExactScalar, ExactScalar), b: &(ExactScalar, ExactScalar)| (&a.0 - &b.0) / (&b.1 - &a.1);
        let mut hull: Vec<(ExactScalar, ExactScalar)> = Vec::new();
        for l in uniq {
            while hull.len() >= 2 {
                let (l1, l2) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
                if meet(l1, &l) <= meet(l1, l2) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(l);
        }
        LEnvelope { lines: hull }
    }

    pub fn lines(&self) -> &[(ExactScalar, ExactScalar)] {
        &self.lines
    }

    pub fn eval(&self, delta: &ExactScalar) -> ExactScalar {
        self.lines
            .iter()
            .map(|(c, m)| c + &(m * delta))
            .fold(ExactScalar::zero(), |acc, v| if v > acc { v } else { acc })
    }
}

/// Exact feasible `(delta, L)` region of one condition over the sampled
/// pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub kind: ConditionKind,
    pub feasible: bool,
    /// `None` when a pair has `A = B = 0 < lhs`, which no constants satisfy.
    pub delta_inf: Option<ExactScalar>,
    /// The degenerate pair, or the first pair attaining `delta_inf > 0`.
    pub hard_witness: Option<(PointRef, PointRef)>,
    pub l_of_delta: LEnvelope,
    /// Number of ordered pairs examined.
    pub sample_count: usize,
    pub coverage: Coverage,
}

impl FeasibilityReport {
    /// Least `L` at `delta`, or `None` when `delta < delta_inf` or the
    /// instance is degenerate.
    pub fn min_l(&self, delta: &ExactScalar) -> Option<ExactScalar> {
        let inf = self.delta_inf.as_ref()?;
        (delta >= inf).then(|| self.l_of_delta.eval(delta))
    }

    /// The recommended admissible constants: `delta_inf` itself when it is
    /// admissible, otherwise the middle of the range; with the least `L`.
    pub fn certified_constants(&self) -> Option<(ExactScalar, ExactScalar)> {
        if !self.feasible {
            return None;
        }
        let range = self.kind.delta_range();
        let inf = self.delta_inf.clone()?;
        let delta = if range.contains(&inf) { inf } else { two(range.upper.clone()) };
        let l = self.l_of_delta.eval(&delta);
        Some((delta, l))
    }

    pub fn to_json(&self, space: &Space) -> Value {
        let witness = self
            .hard_witness
            .as_ref()
            .map(|(x, y)| json!([space.describe(x), space.describe(y)]));
        let constants = self.certified_constants();
        json!({
            "kind": self.kind.name(),
            "feasible": self.feasible,
            "delta_inf": self.delta_inf.as_ref().map(|d| d.to_string()),
            "witness": witness,
            "delta": constants.as_ref().map(|c| c.0.to_string()),
            "L": constants.as_ref().map(|c| c.1.to_string()),
            "pairs": self.sample_count,
            "grid": self.coverage.to_json(),
        })
    }
}

fn feasibility_on(kind: ConditionKind, space: &Space, samples: &[Sample], coverage: Coverage) -> FeasibilityReport {
    let mut delta_inf = ExactScalar::zero();
    let mut witness: Option<(PointRef, PointRef)> = None;
    let mut degenerate: Option<(PointRef, PointRef)> = None;
    let mut lines = Vec::new();
    'scan: for p in samples {
        for r in samples {
            let t = terms_for(kind, space, p, r);
            if !t.lhs.is_positive() {
                continue;
            }
            if t.b.is_zero() {
                if t.a.is_zero() {
                    degenerate = Some((t.x, t.y));
                    break 'scan;
                }
                let ratio = &t.lhs / &t.a;
                if ratio > delta_inf {
                    delta_inf = ratio;
                    witness = Some((t.x, t.y));
                }
            } else {
                lines.push((&t.lhs / &t.b, -(&t.a / &t.b)));
            }
        }
    }
    let sample_count = samples.len() * samples.len();
    if let Some(w) = degenerate {
        return FeasibilityReport {
            kind,
            feasible: false,
            delta_inf: None,
            hard_witness: Some(w),
            l_of_delta: LEnvelope::default(),
            sample_count,
            coverage,
        };
    }
    let feasible = delta_inf < kind.delta_range().upper;
    FeasibilityReport {
        kind,
        feasible,
        delta_inf: Some(delta_inf),
        hard_witness: witness,
        l_of_delta: LEnvelope::from_lines(lines),
        sample_count,
        coverage,
    }
}

/// Exact `delta_inf` and least-`L` map of `kind` for the pair.
pub fn feasibility(kind: ConditionKind, pair: &MapPair, sampler: &DomainSampler) -> FeasibilityReport {
    let (samples, coverage) = samples(pair, sampler);
    feasibility_on(kind, pair.space(), &samples, coverage)
}

/// Feasibility of every kind, in [`ConditionKind::ALL`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub reports: Vec<FeasibilityReport>,
    /// Broken implications between kinds; nonempty means a bug.
    pub consistency_errors: Vec<String>,
}

impl Classification {
    pub fn report(&self, kind: ConditionKind) -> &FeasibilityReport {
        self.reports.iter().find(|r| r.kind == kind).expect("every kind is classified")
    }

    pub fn to_json(&self, space: &Space) -> Value {
        json!({
            "reports": self.reports.iter().map(|r| r.to_json(space)).collect::<Vec<_>>(),
            "consistency_errors": self.consistency_errors,
        })
    }
}

/// Runs [`feasibility`] for every kind and cross-checks that constants
/// certified for condition (B) also satisfy the generalized condition (B)
/// when `f` is the identity.
pub fn classify(pair: &MapPair, sampler: &DomainSampler) -> Classification {
    let (samples, coverage) = samples(pair, sampler);
    let space = pair.space();
    let reports: Vec<FeasibilityReport> = ConditionKind::ALL
        .par_iter()
        .map(|&k| feasibility_on(k, space, &samples, coverage.clone()))
        .collect();
    let mut consistency_errors = Vec::new();
    if pair.f_is_identity() {
        let b = reports.iter().find(|r| r.kind == ConditionKind::ConditionB).unwrap();
        if let Some((delta, l)) = b.certified_constants() {
            let gen = ConditionKind::GeneralizedConditionB;
            if let Some((x, y)) = scan_inequality(gen, space, &samples, &delta, &l) {
                consistency_errors.push(format!(
                    "condition_b holds at (delta={delta}, L={l}) but generalized_b fails at ({}, {})",
                    space.describe(&x),
                    space.describe(&y)
                ));
            }
        }
    }
    Classification { reports, consistency_errors }
}
