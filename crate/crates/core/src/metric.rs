//! Finite and interval metric spaces with exact distances.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::interval::{Bound, Interval};
use crate::scalar::ExactScalar;

/// One failed metric axiom, with the indices that witness it.
///
/// `TriangleViolation { i, j, k }` means `d(i,k) > d(i,j) + d(j,k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricViolation {
    NotSquare { row: usize, len: usize, expected: usize },
    AsymmetricEntry { i: usize, j: usize },
    NegativeDistance { i: usize, j: usize },
    NonzeroDiagonal { i: usize },
    ZeroOffDiagonal { i: usize, j: usize },
    TriangleViolation { i: usize, j: usize, k: usize },
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricViolation::NotSquare { row, len, expected } => {
                write!(f, "row {row} has {len} entries, expected {expected}")
            }
            MetricViolation::AsymmetricEntry { i, j } => write!(f, "d({i},{j}) != d({j},{i})"),
            MetricViolation::NegativeDistance { i, j } => write!(f, "d({i},{j}) < 0"),
            MetricViolation::NonzeroDiagonal { i } => write!(f, "d({i},{i}) != 0"),
            MetricViolation::ZeroOffDiagonal { i, j } => write!(f, "d({i},{j}) = 0 for distinct points"),
            MetricViolation::TriangleViolation { i, j, k } => {
                write!(f, "d({i},{k}) > d({i},{j}) + d({j},{k})")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("not a metric: {}", summarize(.0))]
    Invalid(Vec<MetricViolation>),
    #[error("empty distance matrix")]
    Empty,
    #[error("{labels} labels given for {points} points")]
    LabelCount { labels: usize, points: usize },
    #[error("interval must satisfy lo < hi, got {0}")]
    DegenerateInterval(Box<Interval>),
    #[error("point {0} does not belong to the space")]
    PointOutOfSpace(PointRef),
}

fn summarize(v: &[MetricViolation]) -> String {
    let mut s: Vec<String> = v.iter().take(4).map(|x| x.to_string()).collect();
    if v.len() > 4 {
        s.push(format!("and {} more", v.len() - 4));
    }
    s.join("; ")
}

impl MetricError {
    pub fn violations(&self) -> &[MetricViolation] {
        match self {
            MetricError::Invalid(v) => v,
            _ => &[],
        }
    }
}

/// A point of a [`Space`]: an index for finite spaces, a coordinate for
/// intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointRef {
    Index(usize),
    Coord(ExactScalar),
}

impl PointRef {
    pub fn index(&self) -> Option<usize> {
        match self {
            PointRef::Index(i) => Some(*i),
            PointRef::Coord(_) => None,
        }
    }

    pub fn coord(&self) -> Option<&ExactScalar> {
        match self {
            PointRef::Index(_) => None,
            PointRef::Coord(c) => Some(c),
        }
    }
}

impl From<usize> for PointRef {
    fn from(i: usize) -> Self {
        PointRef::Index(i)
    }
}

impl From<ExactScalar> for PointRef {
    fn from(c: ExactScalar) -> Self {
        PointRef::Coord(c)
    }
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointRef::Index(i) => write!(f, "#{i}"),
            PointRef::Coord(c) => write!(f, "{c}"),
        }
    }
}

impl Serialize for PointRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            PointRef::Index(i) => serializer.serialize_u64(*i as u64),
            PointRef::Coord(c) => c.serialize(serializer),
        }
    }
}

/// A finite metric space given by a validated distance matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<ExactScalar>>,
}

impl FiniteMetricSpace {
    /// Validates `matrix` and labels the points `0..n`.
    pub fn new(matrix: Vec<Vec<ExactScalar>>) -> Result<Self, MetricError> {
        let labels = (0..matrix.len()).map(|i| i.to_string()).collect();
        Self::with_labels(labels, matrix)
    }

    pub fn with_labels(labels: Vec<String>, matrix: Vec<Vec<ExactScalar>>) -> Result<Self, MetricError> {
        if labels.len() != matrix.len() {
            return Err(MetricError::LabelCount { labels: labels.len(), points: matrix.len() });
        }
        let violations = metric_violations(&matrix);
        if !violations.is_empty() {
            return Err(MetricError::Invalid(violations));
        }
        if matrix.is_empty() {
            return Err(MetricError::Empty);
        }
        Ok(FiniteMetricSpace { labels, dist: matrix })
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Panics when an index is out of range.
    pub fn dist(&self, i: usize, j: usize) -> &ExactScalar {
        &self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<ExactScalar>] {
        &self.dist
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn shape_violations(matrix: &[Vec<ExactScalar>]) -> Vec<MetricViolation> {
    let n = matrix.len();
    matrix
        .iter()
        .enumerate()
        .filter(|(_, row)| row.len() != n)
        .map(|(row, r)| MetricViolation::NotSquare { row, len: r.len(), expected: n })
        .collect()
}

// Pointwise axioms: zero diagonal, positivity, symmetry.
fn entry_violations(matrix: &[Vec<ExactScalar>]) -> Vec<MetricViolation> {
    let n = matrix.len();
    let mut out = Vec::new();
    for i in 0..n {
        if !matrix[i][i].is_zero() {
            out.push(MetricViolation::NonzeroDiagonal { i });
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = &matrix[i][j];
            if d.is_negative() {
                out.push(MetricViolation::NegativeDistance { i, j });
            } else if d.is_zero() {
                out.push(MetricViolation::ZeroOffDiagonal { i, j });
            }
            if i < j && matrix[i][j] != matrix[j][i] {
                out.push(MetricViolation::AsymmetricEntry { i, j });
            }
        }
    }
    out
}

fn metric_violations(matrix: &[Vec<ExactScalar>]) -> Vec<MetricViolation> {
    let shape = shape_violations(matrix);
    if !shape.is_empty() {
        return shape;
    }
    let n = matrix.len();
    let mut out = entry_violations(matrix);
    for i in 0..n {
        for k in 0..n {
            if i == k {
                continue;
            }
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                if matrix[i][k] > &matrix[i][j] + &matrix[j][k] {
                    out.push(MetricViolation::TriangleViolation { i, j, k });
                }
            }
        }
    }
    out
}

/// Checks every metric axiom exactly and returns the space, or every
/// violated axiom with its witnesses.
pub fn validate_metric(matrix: Vec<Vec<ExactScalar>>) -> Result<FiniteMetricSpace, MetricError> {
    FiniteMetricSpace::new(matrix)
}

/// Shortest-path closure of a symmetric premetric.
///
/// The result satisfies the triangle inequality and is entrywise no larger
/// than the input. Inputs that are not symmetric, have negative entries or
/// a nonzero diagonal are rejected with their violations; a zero
/// off-diagonal entry yields `ZeroOffDiagonal`.
pub fn metric_closure(matrix: Vec<Vec<ExactScalar>>) -> Result<FiniteMetricSpace, MetricError> {
    let shape = shape_violations(&matrix);
    if !shape.is_empty() {
        return Err(MetricError::Invalid(shape));
    }
    let pre = entry_violations(&matrix);
    if !pre.is_empty() {
        return Err(MetricError::Invalid(pre));
    }
    let n = matrix.len();
    let mut d = matrix;
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    validate_metric(d)
}

/// A real interval with the absolute-value metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSpace {
    domain: Interval,
}

impl IntervalSpace {
    pub fn new(lo: Bound, hi: Bound) -> Result<Self, MetricError> {
        let domain = Interval::new(lo, hi);
        let degenerate = match (domain.lo.value(), domain.hi.value()) {
            (Some(a), Some(b)) => a >= b,
            _ => false,
        };
        if degenerate {
            return Err(MetricError::DegenerateInterval(Box::new(domain)));
        }
        Ok(IntervalSpace { domain })
    }

    pub fn real_line() -> Self {
        IntervalSpace { domain: Interval::real_line() }
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn contains(&self, x: &ExactScalar) -> bool {
        self.domain.contains(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Space {
    Finite(FiniteMetricSpace),
    Interval(IntervalSpace),
}

impl Space {
    pub fn contains(&self, p: &PointRef) -> bool {
        match (self, p) {
            (Space::Finite(s), PointRef::Index(i)) => *i < s.len(),
            (Space::Interval(s), PointRef::Coord(x)) => s.contains(x),
            _ => false,
        }
    }

    pub fn check(&self, p: &PointRef) -> Result<(), MetricError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(MetricError::PointOutOfSpace(p.clone()))
        }
    }

    pub fn distance(&self, p: &PointRef, q: &PointRef) -> Result<ExactScalar, MetricError> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.distance_unchecked(p, q))
    }

    /// Distance between two points already known to be members.
    pub(crate) fn distance_unchecked(&self, p: &PointRef, q: &PointRef) -> ExactScalar {
        match (self, p, q) {
            (Space::Finite(s), PointRef::Index(i), PointRef::Index(j)) => s.dist(*i, *j).clone(),
            (Space::Interval(_), PointRef::Coord(x), PointRef::Coord(y)) => x.abs_diff(y),
            _ => unreachable!("point kind does not match space kind"),
        }
    }

    /// Human-readable name of a point: its label, or its coordinate.
    pub fn describe(&self, p: &PointRef) -> String {
        match (self, p) {
            (Space::Finite(s), PointRef::Index(i)) if *i < s.len() => s.label(*i).to_string(),
            (_, p) => p.to_string(),
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteMetricSpace> {
        match self {
            Space::Finite(s) => Some(s),
            Space::Interval(_) => None,
        }
    }

    pub fn as_interval(&self) -> Option<&IntervalSpace> {
        match self {
            Space::Interval(s) => Some(s),
            Space::Finite(_) => None,
        }
    }
}

/// `d(p, q)` in either kind of space.
pub fn distance(space: &Space, p: &PointRef, q: &PointRef) -> Result<ExactScalar, MetricError> {
    space.distance(p, q)
}
