//! T-sequence and Picard iteration with certified error bounds.
//!
//! A T-sequence starts at `x0` and picks `x_{k+1}` with `f(x_{k+1}) = T(x_k)`
//! using the canonical preimage selector. Under a rate `delta` on the gaps
//! `d(fx_k, fx_{k+1})`, the limit `p` satisfies
//!
//! * `d(fx_n, p) <= delta^n / (1 - delta) * d(fx_0, fx_1)` (a priori),
//! * `d(fx_n, p) <= delta / (1 - delta) * d(fx_{n-1}, fx_n)` (a posteriori).

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::metric::{PointRef, Space};
use crate::scalar::ExactScalar;
use crate::selfmaps::{common_fixed_points, MapError, MapPair, SelfMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IterateError {
    #[error("delta = {0} must lie in (0, 1)")]
    DeltaOutOfRange(ExactScalar),
    #[error("tolerance {0} must be positive")]
    NonPositiveTolerance(ExactScalar),
    #[error("tolerance {0} must be nonnegative")]
    NegativeTolerance(ExactScalar),
    #[error("d(x0, x1) = {0} must be nonnegative")]
    NegativeDistance(ExactScalar),
    #[error("bounds are stated for n >= 1")]
    ZeroIterations,
    #[error("no x with f(x) = {0}: the range of T is not contained in the range of f")]
    PreimageMissing(PointRef),
    #[error("no convergence within {0} steps")]
    MaxIterationsExceeded(usize),
    #[error("{0} is not a common fixed point")]
    NotACommonFixedPoint(PointRef),
    #[error("probe sequence {0} is empty")]
    EmptySequence(usize),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// `fx_n = T(x_n)`: `x_n` is an exact coincidence point.
    GapZero,
    /// The a-posteriori bound dropped to the tolerance.
    ToleranceMet,
    MaxIterations,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::GapZero => "gap_zero",
            Termination::ToleranceMet => "tolerance_met",
            Termination::MaxIterations => "max_iterations",
        })
    }
}

/// Full history of a T-sequence run.
///
/// `x` holds `x_0..=x_N`; `fx` holds `fx_0..=fx_{N+1}` where
/// `fx_{k+1} = T(x_k)`; `gaps[k] = d(fx_k, fx_{k+1})`. Both bound vectors
/// are indexed like `gaps` and bound `d(fx_{k+1}, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSequenceTrace {
    pub x: Vec<PointRef>,
    pub fx: Vec<PointRef>,
    pub gaps: Vec<ExactScalar>,
    pub delta_used: ExactScalar,
    pub a_priori: Vec<ExactScalar>,
    pub a_posteriori: Vec<ExactScalar>,
    pub terminated_by: Termination,
}

impl TSequenceTrace {
    pub fn steps(&self) -> usize {
        self.gaps.len()
    }

    /// The last computed point of the T-sequence.
    pub fn limit_estimate(&self) -> &PointRef {
        self.fx.last().expect("trace has at least one step")
    }

    /// Certified distance from [`limit_estimate`](Self::limit_estimate) to the limit.
    pub fn error_bound(&self) -> ExactScalar {
        if self.terminated_by == Termination::GapZero {
            return ExactScalar::zero();
        }
        let prio = self.a_priori.last().unwrap();
        let post = self.a_posteriori.last().unwrap();
        prio.min(post).clone()
    }

    /// `(x_N, fx_N)` when the run ended on an exact coincidence.
    pub fn coincidence(&self) -> Option<(&PointRef, &PointRef)> {
        (self.terminated_by == Termination::GapZero).then(|| (self.x.last().unwrap(), &self.fx[self.x.len() - 1]))
    }

    /// Err when the run stopped on the iteration budget.
    pub fn converged(&self) -> Result<&Self, IterateError> {
        match self.terminated_by {
            Termination::MaxIterations => Err(IterateError::MaxIterationsExceeded(self.steps())),
            _ => Ok(self),
        }
    }

    /// Re-checks `f(x_k) = fx_k` and `T(x_k) = fx_{k+1}` for every step.
    pub fn is_consistent_with(&self, pair: &MapPair) -> bool {
        self.x.len() + 1 == self.fx.len()
            && self.x.iter().enumerate().all(|(k, xk)| {
                pair.eval_f(xk).ok().as_ref() == Some(&self.fx[k])
                    && pair.eval_t(xk).ok().as_ref() == Some(&self.fx[k + 1])
            })
    }

    /// One JSON object per step, then a final summary record.
    pub fn to_json_lines(&self, space: &Space) -> String {
        let mut out = String::new();
        for k in 0..self.steps() {
            let rec = json!({
                "k": k,
                "x": space.describe(&self.x[k]),
                "fx": space.describe(&self.fx[k]),
                "gap": self.gaps[k].to_string(),
                "a_posteriori": self.a_posteriori[k].to_string(),
            });
            out.push_str(&rec.to_string());
            out.push('\n');
        }
        out.push_str(&self.summary_json(space).to_string());
        out.push('\n');
        out
    }

    pub fn summary_json(&self, space: &Space) -> Value {
        json!({
            "terminated_by": self.terminated_by.to_string(),
            "steps": self.steps(),
            "limit": space.describe(self.limit_estimate()),
            "delta": self.delta_used.to_string(),
            "certificates": {
                "a_priori": self.a_priori.last().map(|v| v.to_string()),
                "a_posteriori": self.a_posteriori.last().map(|v| v.to_string()),
                "error_bound": self.error_bound().to_string(),
            },
        })
    }
}

fn check_delta(delta: &ExactScalar) -> Result<(), IterateError> {
    if delta.is_positive() && delta < &ExactScalar::one() {
        Ok(())
    } else {
        Err(IterateError::DeltaOutOfRange(delta.clone()))
    }
}

/// Runs the T-sequence from `x0` at rate `delta`.
///
/// Stops on a zero gap (exact coincidence), when the a-posteriori bound is
/// at most `epsilon`, or after `max_iter` evaluations of `T`. With
/// `epsilon = 0` only an exact coincidence or the budget ends the run.
pub fn t_sequence(
    pair: &MapPair,
    x0: &PointRef,
    delta: &ExactScalar,
    epsilon: &ExactScalar,
    max_iter: usize,
) -> Result<TSequenceTrace, IterateError> {
    check_delta(delta)?;
    if epsilon.is_negative() {
        return Err(IterateError::NegativeTolerance(epsilon.clone()));
    }
    let one = ExactScalar::one();
    let inv = (&one - delta).recip();
    let post_factor = delta * &inv;
    let space = pair.space();

    let mut trace = TSequenceTrace {
        x: vec![x0.clone()],
        fx: vec![pair.eval_f(x0)?],
        gaps: Vec::new(),
        delta_used: delta.clone(),
        a_priori: Vec::new(),
        a_posteriori: Vec::new(),
        terminated_by: Termination::MaxIterations,
    };
    let mut power = delta.clone();
    loop {
        let k = trace.gaps.len();
        let xk = &trace.x[k];
        let next = pair.t().apply(xk);
        let gap = space.distance_unchecked(&trace.fx[k], &next);
        trace.fx.push(next);
        let gap0 = trace.gaps.first().unwrap_or(&gap).clone();
        trace.a_priori.push(&power * &inv * &gap0);
        trace.a_posteriori.push(&post_factor * &gap);
        power = &power * delta;
        let zero_gap = gap.is_zero();
        trace.gaps.push(gap);
        if zero_gap {
            trace.terminated_by = Termination::GapZero;
            break;
        }
        if epsilon.is_positive() && trace.a_posteriori.last().unwrap() <= epsilon {
            trace.terminated_by = Termination::ToleranceMet;
            break;
        }
        if trace.gaps.len() >= max_iter {
            trace.terminated_by = Termination::MaxIterations;
            break;
        }
        let target = trace.fx.last().unwrap();
        let chosen = pair.select_preimage(target).ok_or_else(|| IterateError::PreimageMissing(target.clone()))?;
        trace.x.push(chosen);
    }
    Ok(trace)
}

/// Picard iteration `x_{n+1} = T(x_n)`: the T-sequence with `f` the identity.
pub fn picard(
    t: &SelfMap,
    space: &Space,
    x0: &PointRef,
    delta: &ExactScalar,
    epsilon: &ExactScalar,
    max_iter: usize,
) -> Result<TSequenceTrace, IterateError> {
    let pair = MapPair::single(space.clone(), t.clone())?;
    t_sequence(&pair, x0, delta, epsilon, max_iter)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// `delta^n / (1 - delta) * d01`
    Banach,
    /// `delta^n / (1 - delta)^2 * d01`
    Ciric,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCertificate {
    pub kind: BoundKind,
    pub delta: ExactScalar,
    pub d01: ExactScalar,
    pub n: u32,
    pub value: ExactScalar,
}

fn bound_value(kind: BoundKind, delta: &ExactScalar, d01: &ExactScalar, n: u32) -> ExactScalar {
    let gap = ExactScalar::one() - delta;
    let denom = match kind {
        BoundKind::Banach => gap,
        BoundKind::Ciric => &gap * &gap,
    };
    delta.pow(n) / denom * d01
}

/// A-priori distance bound after `n` steps, given `d01 = d(x_0, x_1)`.
pub fn a_priori_bound(kind: BoundKind, delta: &ExactScalar, d01: &ExactScalar, n: u32) -> Result<BoundCertificate, IterateError> {
    check_delta(delta)?;
    if d01.is_negative() {
        return Err(IterateError::NegativeDistance(d01.clone()));
    }
    if n == 0 {
        return Err(IterateError::ZeroIterations);
    }
    Ok(BoundCertificate { kind, delta: delta.clone(), d01: d01.clone(), n, value: bound_value(kind, delta, d01, n) })
}

/// The Cauchy tail `delta^n/(1-delta) * d(fx_0, fx_1)` bounding
/// `d(fx_m, fx_n)` for every `m > n`.
pub fn cauchy_tail_bound(delta: &ExactScalar, d01: &ExactScalar, n: u32) -> Result<ExactScalar, IterateError> {
    a_priori_bound(BoundKind::Banach, delta, d01, n).map(|c| c.value)
}

/// `delta / (1 - delta) * gap`.
pub fn a_posteriori_bound(delta: &ExactScalar, gap: &ExactScalar) -> Result<ExactScalar, IterateError> {
    check_delta(delta)?;
    if gap.is_negative() {
        return Err(IterateError::NegativeDistance(gap.clone()));
    }
    Ok(delta / (ExactScalar::one() - delta) * gap)
}

/// `theta * d(x_{n-1}, x*)`, the one-step rate estimate for a
/// caller-supplied `theta`.
pub fn rate_bound(theta: &ExactScalar, previous_error: &ExactScalar) -> Result<ExactScalar, IterateError> {
    check_delta(theta)?;
    Ok(theta * previous_error)
}

/// Smallest `n >= 1` whose a-priori bound is at most `epsilon`, by exact
/// comparison.
pub fn required_iterations(kind: BoundKind, delta: &ExactScalar, d01: &ExactScalar, epsilon: &ExactScalar) -> Result<u32, IterateError> {
    check_delta(delta)?;
    if !epsilon.is_positive() {
        return Err(IterateError::NonPositiveTolerance(epsilon.clone()));
    }
    if d01.is_negative() {
        return Err(IterateError::NegativeDistance(d01.clone()));
    }
    let mut n = 1u32;
    let mut value = bound_value(kind, delta, d01, 1);
    while &value > epsilon {
        n += 1;
        value = &value * delta;
    }
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// Both `f(z_n)` and `T(z_n)` approach the fixed point.
    Continuous,
    /// `f(z_n)` does not approach `f(p)`, so nothing is claimed about `T`.
    HypothesisNotSatisfied,
    /// `f(z_n) -> f(p)` but `T(z_n)` stays away from `T(p)`.
    Discontinuous,
}

/// Empirical decay of `d(T z_n, T p)` and `d(f z_n, f p)` along one sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeVerdict {
    pub t_max: ExactScalar,
    pub f_max: ExactScalar,
    /// Maxima over the last quarter of the sequence.
    pub t_tail: ExactScalar,
    pub f_tail: ExactScalar,
    pub outcome: ProbeOutcome,
}

/// Probes continuity of `T` and `f` at a common fixed point `p` along the
/// given sequences. Sequences are assumed to converge to `p`; the verdict
/// reads the tail maxima against `tolerance`. This is evidence, not proof.
pub fn continuity_probe(
    pair: &MapPair,
    p: &PointRef,
    sequences: &[Vec<PointRef>],
    tolerance: &ExactScalar,
) -> Result<Vec<ProbeVerdict>, IterateError> {
    pair.space().check(p).map_err(MapError::from)?;
    if !common_fixed_points(pair).contains(p) {
        return Err(IterateError::NotACommonFixedPoint(p.clone()));
    }
    let space = pair.space();
    let tp = pair.eval_t(p)?;
    let fp = pair.eval_f(p)?;
    sequences
        .iter()
        .enumerate()
        .map(|(idx, seq)| {
            if seq.is_empty() {
                return Err(IterateError::EmptySequence(idx));
            }
            let mut t_d = Vec::with_capacity(seq.len());
            let mut f_d = Vec::with_capacity(seq.len());
            for z in seq {
                t_d.push(space.distance_unchecked(&pair.eval_t(z)?, &tp));
                f_d.push(space.distance_unchecked(&pair.eval_f(z)?, &fp));
            }
            let tail_from = seq.len() - seq.len().div_ceil(4);
            let max = |v: &[ExactScalar]| v.iter().max().unwrap().clone();
            let (t_tail, f_tail) = (max(&t_d[tail_from..]), max(&f_d[tail_from..]));
            let outcome = if &f_tail > tolerance {
                ProbeOutcome::HypothesisNotSatisfied
            } else if &t_tail > tolerance {
                ProbeOutcome::Discontinuous
            } else {
                ProbeOutcome::Continuous
            };
            Ok(ProbeVerdict { t_max: max(&t_d), f_max: max(&f_d), t_tail, f_tail, outcome })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{Bound, Interval};
    use crate::metric::{validate_metric, IntervalSpace};
    use crate::scalar::q;
    use crate::selfmaps::{AffinePiece, PiecewiseAffineMap, TableMap};

    fn half_open(a: &str, b: &str) -> Interval {
        Interval::new(Bound::Closed(q(a)), Bound::Open(q(b)))
    }

    fn step_pair() -> MapPair {
        let space = Space::Interval(IntervalSpace::new(Bound::Closed(q("0")), Bound::Open(q("1"))).unwrap());
        let t = PiecewiseAffineMap::new(vec![
            AffinePiece::new(half_open("0", "2/3"), q("0"), q("1/2")),
            AffinePiece::new(half_open("2/3", "1"), q("0"), q("2/3")),
        ]);
        let f = PiecewiseAffineMap::new(vec![
            AffinePiece::new(half_open("0", "2/3"), q("0"), q("5/6")),
            AffinePiece::new(half_open("2/3", "1"), q("-1"), q("4/3")),
        ]);
        MapPair::new(space, SelfMap::PiecewiseAffine(t), SelfMap::PiecewiseAffine(f)).unwrap()
    }

    fn line_pair() -> MapPair {
        let space = Space::Interval(IntervalSpace::real_line());
        let t = PiecewiseAffineMap::affine(Interval::real_line(), q("1/4"), q("1/4"));
        let f = PiecewiseAffineMap::affine(Interval::real_line(), q("1/2"), q("0"));
        MapPair::new(space, SelfMap::PiecewiseAffine(t), SelfMap::PiecewiseAffine(f)).unwrap()
    }

    fn three_points() -> Space {
        let m = [["0", "1/2", "1"], ["1/2", "0", "1/2"], ["1", "1/2", "0"]];
        Space::Finite(validate_metric(m.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect()).unwrap())
    }

    #[test]
    fn t_sequence_on_the_line() {
        let pair = line_pair();
        let tr = t_sequence(&pair, &q("0").into(), &q("1/2"), &q("0"), 12).unwrap();
        assert_eq!(tr.terminated_by, Termination::MaxIterations);
        assert!(tr.converged().is_err());
        // x_{k+1} = (x_k + 1)/2
        let xs: Vec<PointRef> = ["0", "1/2", "3/4", "7/8", "15/16"].iter().map(|s| q(s).into()).collect();
        assert_eq!(&tr.x[..5], xs.as_slice());
        for w in tr.gaps.windows(2) {
            assert_eq!(&w[1] * &q("2"), w[0]);
        }
        assert!(tr.is_consistent_with(&pair));
        let tr = t_sequence(&pair, &q("0").into(), &q("1/2"), &q("1/1000000"), 10_000).unwrap();
        assert_eq!(tr.terminated_by, Termination::ToleranceMet);
        let est = tr.limit_estimate().coord().unwrap().clone();
        assert!(est.abs_diff(&q("1/2")) <= tr.error_bound());
        assert!(tr.error_bound() <= q("1/1000000"));
    }

    #[test]
    fn t_sequence_hits_coincidence_exactly() {
        let pair = step_pair();
        let tr = t_sequence(&pair, &q("0").into(), &q("1/2"), &q("1/1000000"), 100).unwrap();
        assert_eq!(tr.terminated_by, Termination::GapZero);
        let xs: Vec<PointRef> = ["0", "5/6", "2/3"].iter().map(|s| q(s).into()).collect();
        assert_eq!(tr.x, xs);
        let fxs: Vec<PointRef> = ["5/6", "1/2", "2/3", "2/3"].iter().map(|s| q(s).into()).collect();
        assert_eq!(tr.fx, fxs);
        assert_eq!(tr.gaps, vec![q("1/3"), q("1/6"), q("0")]);
        assert_eq!(tr.coincidence(), Some((&q("2/3").into(), &q("2/3").into())));
        assert_eq!(tr.error_bound(), q("0"));
    }

    #[test]
    fn start_at_coincidence_stops_at_once() {
        let tr = t_sequence(&line_pair(), &q("1").into(), &q("1/2"), &q("1/100"), 10).unwrap();
        assert_eq!(tr.terminated_by, Termination::GapZero);
        assert_eq!(tr.steps(), 1);
    }

    #[test]
    fn missing_preimage_is_reported() {
        let pair = MapPair::new(
            three_points(),
            SelfMap::Table(TableMap::constant(3, 2)),
            SelfMap::Table(TableMap::constant(3, 0)),
        )
        .unwrap();
        let err = t_sequence(&pair, &0.into(), &q("1/2"), &q("0"), 10).unwrap_err();
        assert_eq!(err, IterateError::PreimageMissing(2.into()));
    }

    #[test]
    fn rejects_bad_delta() {
        for d in ["0", "1", "3/2", "-1/2"] {
            assert!(matches!(
                t_sequence(&line_pair(), &q("0").into(), &q(d), &q("0"), 3),
                Err(IterateError::DeltaOutOfRange(_))
            ));
        }
    }

    #[test]
    fn picard_examples() {
        let dom = Interval::closed(q("0"), q("2"));
        let space = Space::Interval(IntervalSpace::new(dom.lo.clone(), dom.hi.clone()).unwrap());
        let half = SelfMap::PiecewiseAffine(PiecewiseAffineMap::affine(dom, q("1/2"), q("0")));
        let tr = picard(&half, &space, &q("1").into(), &q("1/2"), &q("0"), 20).unwrap();
        for (n, x) in tr.x.iter().enumerate() {
            assert_eq!(x, &PointRef::Coord(q("1/2").pow(n as u32)));
        }
        let t = SelfMap::Table(TableMap::new(vec![1, 1, 0]));
        let tr = picard(&t, &three_points(), &2.into(), &q("1/2"), &q("0"), 10).unwrap();
        assert_eq!(tr.x, vec![2.into(), 0.into(), 1.into()]);
        assert_eq!(tr.coincidence().unwrap().1, &PointRef::Index(1));
        let tr = picard(&t, &three_points(), &1.into(), &q("1/2"), &q("0"), 10).unwrap();
        assert_eq!(tr.steps(), 1);
        assert_eq!(tr.terminated_by, Termination::GapZero);
    }

    #[test]
    fn bound_formulas() {
        let c = a_priori_bound(BoundKind::Banach, &q("1/2"), &q("1/2"), 3).unwrap();
        assert_eq!(c.value, q("1/8"));
        assert_eq!(a_priori_bound(BoundKind::Ciric, &q("1/2"), &q("1"), 2).unwrap().value, q("1"));
        for n in 1..6 {
            assert_eq!(a_priori_bound(BoundKind::Ciric, &q("2/3"), &q("0"), n).unwrap().value, q("0"));
        }
        assert_eq!(cauchy_tail_bound(&q("1/2"), &q("1/2"), 3).unwrap(), q("1/8"));
        assert_eq!(a_priori_bound(BoundKind::Banach, &q("1/2"), &q("1"), 0), Err(IterateError::ZeroIterations));
        assert!(a_priori_bound(BoundKind::Banach, &q("1"), &q("1"), 1).is_err());
        assert_eq!(a_posteriori_bound(&q("1/2"), &q("1/4")).unwrap(), q("1/4"));
        assert_eq!(a_posteriori_bound(&q("1/2"), &q("0")).unwrap(), q("0"));
        assert_eq!(a_posteriori_bound(&q("2/3"), &q("1")).unwrap(), q("2"));
        assert!(a_posteriori_bound(&q("0"), &q("1")).is_err());
        assert_eq!(rate_bound(&q("1/3"), &q("3")).unwrap(), q("1"));
    }

    #[test]
    fn required_iterations_examples() {
        assert_eq!(required_iterations(BoundKind::Banach, &q("1/2"), &q("1"), &q("1/100")).unwrap(), 8);
        assert_eq!(required_iterations(BoundKind::Banach, &q("1/2"), &q("0"), &q("1/100")).unwrap(), 1);
        assert_eq!(required_iterations(BoundKind::Ciric, &q("1/2"), &q("1"), &q("1")).unwrap(), 2);
        assert!(required_iterations(BoundKind::Ciric, &q("1/2"), &q("1"), &q("0")).is_err());
        // minimality against the closed form
        for (d, e) in [("3/4", "1/1000"), ("9/10", "1/7"), ("1/3", "1/3")] {
            for kind in [BoundKind::Banach, BoundKind::Ciric] {
                let n = required_iterations(kind, &q(d), &q("5/2"), &q(e)).unwrap();
                assert!(a_priori_bound(kind, &q(d), &q("5/2"), n).unwrap().value <= q(e));
                if n > 1 {
                    assert!(a_priori_bound(kind, &q(d), &q("5/2"), n - 1).unwrap().value > q(e));
                }
            }
        }
    }

    #[test]
    fn continuity_probe_examples() {
        let pair = step_pair();
        let p: PointRef = q("2/3").into();
        let left: Vec<PointRef> = (2..400).map(|n| (q("2/3") - ExactScalar::new(1, n)).into()).collect();
        let right: Vec<PointRef> = (2..400).map(|n| (q("2/3") + ExactScalar::new(1, 3 * n)).into()).collect();
        let v = continuity_probe(&pair, &p, &[left, right], &q("1/500")).unwrap();
        assert_eq!(v[0].outcome, ProbeOutcome::HypothesisNotSatisfied);
        assert_eq!(v[0].f_tail, q("1/6"));
        assert_eq!(v[1].outcome, ProbeOutcome::Continuous);
        assert_eq!(v[1].t_max, q("0"));
        assert!(v[1].f_tail <= q("1/500"));
        assert_eq!(
            continuity_probe(&pair, &q("1/2").into(), &[], &q("1")),
            Err(IterateError::NotACommonFixedPoint(q("1/2").into()))
        );
        assert_eq!(continuity_probe(&pair, &p, &[vec![]], &q("1")), Err(IterateError::EmptySequence(0)));
    }

    #[test]
    fn continuity_on_finite_space() {
        let pair = MapPair::single(three_points(), SelfMap::Table(TableMap::new(vec![1, 1, 0]))).unwrap();
        let seq: Vec<PointRef> = vec![0.into(), 2.into(), 1.into(), 1.into(), 1.into(), 1.into()];
        let v = continuity_probe(&pair, &1.into(), &[seq], &q("0")).unwrap();
        assert_eq!(v[0].outcome, ProbeOutcome::Continuous);
        assert_eq!(v[0].t_max, q("1/2"));
    }

    #[test]
    fn json_lines_export() {
        let pair = step_pair();
        let tr = t_sequence(&pair, &q("0").into(), &q("1/2"), &q("0"), 100).unwrap();
        let text = tr.to_json_lines(pair.space());
        let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1]["x"], "5/6");
        assert_eq!(lines[1]["gap"], "1/6");
        assert_eq!(lines[3]["terminated_by"], "gap_zero");
        assert_eq!(lines[3]["limit"], "2/3");
    }
}
