//! Real intervals with open, closed or unbounded endpoints.

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Unbounded,
    Closed(ExactScalar),
    Open(ExactScalar),
}

impl Bound {
    pub fn value(&self) -> Option<&ExactScalar> {
        match self {
            Bound::Unbounded => None,
            Bound::Closed(v) | Bound::Open(v) => Some(v),
        }
    }

    pub fn is_open(&self) -> bool {
        matches!(self, Bound::Open(_))
    }

    /// The same endpoint seen from the other side: `[a` becomes `a)`.
    fn flipped(&self) -> Option<Bound> {
        match self {
            Bound::Unbounded => None,
            Bound::Closed(v) => Some(Bound::Open(v.clone())),
            Bound::Open(v) => Some(Bound::Closed(v.clone())),
        }
    }

    fn map_affine(&self, slope: &ExactScalar, intercept: &ExactScalar) -> Bound {
        match self {
            Bound::Unbounded => Bound::Unbounded,
            Bound::Closed(v) => Bound::Closed(slope * v + intercept),
            Bound::Open(v) => Bound::Open(slope * v + intercept),
        }
    }
}

// Order of lower bounds by how much they admit: smaller admits more.
fn cmp_lower(a: &Bound, b: &Bound) -> Ordering {
    match (a, b) {
        (Bound::Unbounded, Bound::Unbounded) => Ordering::Equal,
        (Bound::Unbounded, _) => Ordering::Less,
        (_, Bound::Unbounded) => Ordering::Greater,
        (x, y) => {
            let (vx, vy) = (x.value().unwrap(), y.value().unwrap());
            vx.cmp(vy).then_with(|| x.is_open().cmp(&y.is_open()))
        }
    }
}

// Order of upper bounds: larger admits more.
fn cmp_upper(a: &Bound, b: &Bound) -> Ordering {
    match (a, b) {
        (Bound::Unbounded, Bound::Unbounded) => Ordering::Equal,
        (Bound::Unbounded, _) => Ordering::Greater,
        (_, Bound::Unbounded) => Ordering::Less,
        (x, y) => {
            let (vx, vy) = (x.value().unwrap(), y.value().unwrap());
            vx.cmp(vy).then_with(|| y.is_open().cmp(&x.is_open()))
        }
    }
}

/// A possibly empty, possibly unbounded interval of the real line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Self {
        Interval { lo, hi }
    }

    pub fn closed(lo: ExactScalar, hi: ExactScalar) -> Self {
        Interval::new(Bound::Closed(lo), Bound::Closed(hi))
    }

    pub fn point(v: ExactScalar) -> Self {
        Interval::closed(v.clone(), v)
    }

    pub fn real_line() -> Self {
        Interval::new(Bound::Unbounded, Bound::Unbounded)
    }

    pub fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Bound::Unbounded, _) | (_, Bound::Unbounded) => false,
            (lo, hi) => match lo.value().unwrap().cmp(hi.value().unwrap()) {
                Ordering::Less => false,
                Ordering::Equal => lo.is_open() || hi.is_open(),
                Ordering::Greater => true,
            },
        }
    }

    /// True for a nonempty interval with a single element.
    pub fn is_point(&self) -> bool {
        matches!((&self.lo, &self.hi), (Bound::Closed(a), Bound::Closed(b)) if a == b)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo != Bound::Unbounded && self.hi != Bound::Unbounded
    }

    pub fn contains(&self, x: &ExactScalar) -> bool {
        let above = match &self.lo {
            Bound::Unbounded => true,
            Bound::Closed(a) => a <= x,
            Bound::Open(a) => a < x,
        };
        let below = match &self.hi {
            Bound::Unbounded => true,
            Bound::Closed(b) => x <= b,
            Bound::Open(b) => x < b,
        };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = match cmp_lower(&self.lo, &other.lo) {
            Ordering::Less => other.lo.clone(),
            _ => self.lo.clone(),
        };
        let hi = match cmp_upper(&self.hi, &other.hi) {
            Ordering::Greater => other.hi.clone(),
            _ => self.hi.clone(),
        };
        Interval { lo, hi }
    }

    /// `self \ other`, as at most two nonempty pieces.
    pub fn minus(&self, other: &Interval) -> Vec<Interval> {
        if other.is_empty() {
            return if self.is_empty() { vec![] } else { vec![self.clone()] };
        }
        let mut out = Vec::with_capacity(2);
        if let Some(hi) = other.lo.flipped() {
            let left = self.intersect(&Interval::new(Bound::Unbounded, hi));
            if !left.is_empty() {
                out.push(left);
            }
        }
        if let Some(lo) = other.hi.flipped() {
            let right = self.intersect(&Interval::new(lo, Bound::Unbounded));
            if !right.is_empty() {
                out.push(right);
            }
        }
        out
    }

    /// `self` minus the union of `others`.
    pub fn minus_all(&self, others: &[Interval]) -> Vec<Interval> {
        let mut rest = if self.is_empty() { vec![] } else { vec![self.clone()] };
        for o in others {
            rest = rest.iter().flat_map(|piece| piece.minus(o)).collect();
            if rest.is_empty() {
                break;
            }
        }
        rest
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.minus(other).is_empty()
    }

    /// A deterministic member: the left endpoint when it is included,
    /// otherwise the midpoint (or a unit step inside an unbounded side).
    pub fn representative(&self) -> Option<ExactScalar> {
        if self.is_empty() {
            return None;
        }
        let one = ExactScalar::one();
        Some(match (&self.lo, &self.hi) {
            (Bound::Closed(a), _) => a.clone(),
            (Bound::Open(a), Bound::Unbounded) => a + &one,
            (Bound::Open(a), hi) => a.midpoint(hi.value().unwrap()),
            (Bound::Unbounded, Bound::Closed(b)) => b.clone(),
            (Bound::Unbounded, Bound::Open(b)) => b - &one,
            (Bound::Unbounded, Bound::Unbounded) => ExactScalar::zero(),
        })
    }

    /// Image of the interval under `x ↦ slope·x + intercept`.
    pub fn affine_image(&self, slope: &ExactScalar, intercept: &ExactScalar) -> Interval {
        if self.is_empty() {
            return self.clone();
        }
        if slope.is_zero() {
            return Interval::point(intercept.clone());
        }
        let lo = self.lo.map_affine(slope, intercept);
        let hi = self.hi.map_affine(slope, intercept);
        if slope.is_positive() {
            Interval { lo, hi }
        } else {
            Interval { lo: hi, hi: lo }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo.value().unwrap());
        }
        match &self.lo {
            Bound::Unbounded => write!(f, "(-inf")?,
            Bound::Closed(a) => write!(f, "[{a}")?,
            Bound::Open(a) => write!(f, "({a}")?,
        }
        match &self.hi {
            Bound::Unbounded => write!(f, ", inf)"),
            Bound::Closed(b) => write!(f, ", {b}]"),
            Bound::Open(b) => write!(f, ", {b})"),
        }
    }
}
