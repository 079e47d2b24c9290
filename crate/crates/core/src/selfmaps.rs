//! Selfmaps of finite and interval spaces, and the structural predicates
//! about pairs `(T, f)`: range containment, coincidence points, weak
//! compatibility and common fixed points.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::interval::{Bound, Interval};
use crate::metric::{IntervalSpace, MetricError, PointRef, Space};
use crate::scalar::ExactScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("point {0} does not belong to the space")]
    PointOutOfSpace(PointRef),
    #[error("no piece covers x = {0}")]
    DomainGap(ExactScalar),
    #[error("table has {got} entries but the space has {expected} points")]
    TableLength { expected: usize, got: usize },
    #[error("table entry {index} maps to {image}, outside the space")]
    TableImageOutOfRange { index: usize, image: usize },
    #[error("pieces do not partition the domain: {0}")]
    BadPartition(String),
    #[error("piece on {domain} has image {image}, outside the space")]
    ImageOutsideSpace { domain: Box<Interval>, image: Box<Interval> },
    #[error("{0} map cannot act on a {1} space")]
    KindMismatch(&'static str, &'static str),
}

impl From<MetricError> for MapError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::PointOutOfSpace(p) => MapError::PointOutOfSpace(p),
            other => MapError::BadPartition(other.to_string()),
        }
    }
}

/// A selfmap of a finite space as its table of images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableMap {
    image: Vec<usize>,
}

impl TableMap {
    pub fn new(image: Vec<usize>) -> Self {
        TableMap { image }
    }

    pub fn identity(n: usize) -> Self {
        TableMap { image: (0..n).collect() }
    }

    pub fn constant(n: usize, value: usize) -> Self {
        TableMap { image: vec![value; n] }
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }
}

/// `x ↦ slope·x + intercept` on `domain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePiece {
    pub domain: Interval,
    pub slope: ExactScalar,
    pub intercept: ExactScalar,
}

impl AffinePiece {
    pub fn new(domain: Interval, slope: ExactScalar, intercept: ExactScalar) -> Self {
        AffinePiece { domain, slope, intercept }
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        &self.slope * x + &self.intercept
    }

    pub fn image(&self) -> Interval {
        self.domain.affine_image(&self.slope, &self.intercept)
    }

    /// Solutions of `self(x) = y` inside the domain.
    fn solve(&self, y: &ExactScalar) -> PointSet {
        let mut out = PointSet::default();
        if self.slope.is_zero() {
            if &self.intercept == y {
                out.push_interval(self.domain.clone());
            }
        } else {
            let x = (y - &self.intercept) / &self.slope;
            if self.domain.contains(&x) {
                out.points.push(PointRef::Coord(x));
            }
        }
        out
    }
}

/// A map of an interval given by affine pieces over consecutive subintervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseAffineMap {
    pieces: Vec<AffinePiece>,
}

impl PiecewiseAffineMap {
    pub fn new(pieces: Vec<AffinePiece>) -> Self {
        PiecewiseAffineMap { pieces }
    }

    /// A single affine piece over `domain`.
    pub fn affine(domain: Interval, slope: ExactScalar, intercept: ExactScalar) -> Self {
        PiecewiseAffineMap { pieces: vec![AffinePiece::new(domain, slope, intercept)] }
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    fn piece_at(&self, x: &ExactScalar) -> Option<&AffinePiece> {
        self.pieces.iter().find(|p| p.domain.contains(x))
    }

    pub fn eval(&self, x: &ExactScalar) -> Result<ExactScalar, MapError> {
        self.piece_at(x).map(|p| p.eval(x)).ok_or_else(|| MapError::DomainGap(x.clone()))
    }

    /// Checks that the pieces tile `space` without gaps or overlaps and map
    /// into it.
    pub fn validate(&self, space: &IntervalSpace) -> Result<(), MapError> {
        let domain = space.domain();
        let first = self.pieces.first().ok_or_else(|| MapError::BadPartition("no pieces".into()))?;
        if first.domain.lo != domain.lo {
            return Err(MapError::BadPartition(format!("first piece {} does not start at {}", first.domain, domain)));
        }
        let last = self.pieces.last().unwrap();
        if last.domain.hi != domain.hi {
            return Err(MapError::BadPartition(format!("last piece {} does not end at {}", last.domain, domain)));
        }
        for p in &self.pieces {
            if p.domain.is_empty() {
                return Err(MapError::BadPartition(format!("empty piece {}", p.domain)));
            }
        }
        for w in self.pieces.windows(2) {
            let joined = match (&w[0].domain.hi, &w[1].domain.lo) {
                (Bound::Closed(a), Bound::Open(b)) | (Bound::Open(a), Bound::Closed(b)) => a == b,
                _ => false,
            };
            if !joined {
                return Err(MapError::BadPartition(format!(
                    "pieces {} and {} overlap or leave a gap",
                    w[0].domain, w[1].domain
                )));
            }
        }
        for p in &self.pieces {
            let image = p.image();
            if !image.is_subset_of(domain) {
                return Err(MapError::ImageOutsideSpace { domain: Box::new(p.domain.clone()), image: Box::new(image) });
            }
        }
        Ok(())
    }
}

/// A selfmap in one of the supported representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelfMap {
    Identity,
    Table(TableMap),
    PiecewiseAffine(PiecewiseAffineMap),
}

impl SelfMap {
    pub fn is_identity(&self) -> bool {
        match self {
            SelfMap::Identity => true,
            SelfMap::Table(t) => t.image.iter().enumerate().all(|(i, &v)| i == v),
            SelfMap::PiecewiseAffine(m) => m
                .pieces
                .iter()
                .all(|p| p.slope == ExactScalar::one() && p.intercept.is_zero()),
        }
    }

    fn validate(&self, space: &Space) -> Result<(), MapError> {
        match (self, space) {
            (SelfMap::Identity, _) => Ok(()),
            (SelfMap::Table(t), Space::Finite(s)) => {
                if t.image.len() != s.len() {
                    return Err(MapError::TableLength { expected: s.len(), got: t.image.len() });
                }
                match t.image.iter().enumerate().find(|(_, &v)| v >= s.len()) {
                    Some((index, &image)) => Err(MapError::TableImageOutOfRange { index, image }),
                    None => Ok(()),
                }
            }
            (SelfMap::PiecewiseAffine(m), Space::Interval(s)) => m.validate(s),
            (SelfMap::Table(_), Space::Interval(_)) => Err(MapError::KindMismatch("table", "interval")),
            (SelfMap::PiecewiseAffine(_), Space::Finite(_)) => {
                Err(MapError::KindMismatch("piecewise-affine", "finite"))
            }
        }
    }

    /// The map's affine pieces over an interval space (identity included).
    fn pieces_on(&self, space: &IntervalSpace) -> Vec<AffinePiece> {
        match self {
            SelfMap::Identity => {
                vec![AffinePiece::new(space.domain().clone(), ExactScalar::one(), ExactScalar::zero())]
            }
            SelfMap::PiecewiseAffine(m) => m.pieces.clone(),
            SelfMap::Table(_) => unreachable!("validated pair"),
        }
    }

    // Caller guarantees `x` is a member of the space the map was validated on.
    pub(crate) fn apply(&self, x: &PointRef) -> PointRef {
        match (self, x) {
            (SelfMap::Identity, _) => x.clone(),
            (SelfMap::Table(t), PointRef::Index(i)) => PointRef::Index(t.image[*i]),
            (SelfMap::PiecewiseAffine(m), PointRef::Coord(c)) => {
                PointRef::Coord(m.eval(c).expect("validated partition covers the space"))
            }
            _ => unreachable!("point kind does not match map kind"),
        }
    }
}

/// `map(x)`, exactly.
pub fn evaluate(map: &SelfMap, space: &Space, x: &PointRef) -> Result<PointRef, MapError> {
    space.check(x)?;
    match (map, x) {
        (SelfMap::PiecewiseAffine(m), PointRef::Coord(c)) => Ok(PointRef::Coord(m.eval(c)?)),
        (SelfMap::Table(t), PointRef::Index(i)) if *i >= t.image.len() => {
            Err(MapError::PointOutOfSpace(x.clone()))
        }
        _ => Ok(map.apply(x)),
    }
}

/// A subset of a space: isolated points plus, on interval spaces,
/// nondegenerate intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointSet {
    pub points: Vec<PointRef>,
    pub intervals: Vec<Interval>,
}

impl PointSet {
    fn push_interval(&mut self, iv: Interval) {
        if iv.is_empty() {
            return;
        }
        if iv.is_point() {
            self.points.push(PointRef::Coord(iv.lo.value().unwrap().clone()));
        } else {
            self.intervals.push(iv);
        }
    }

    fn normalize(mut self) -> Self {
        self.points.sort();
        self.points.dedup();
        self
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.intervals.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, p: &PointRef) -> bool {
        self.points.contains(p)
            || p.coord().is_some_and(|c| self.intervals.iter().any(|iv| iv.contains(c)))
    }

    /// The deterministic choice from the set: the smallest isolated point or
    /// interval representative (left endpoint when included, else the
    /// midpoint).
    pub fn canonical(&self) -> Option<PointRef> {
        let from_intervals = self.intervals.iter().filter_map(|iv| iv.representative()).map(PointRef::Coord);
        self.points.iter().cloned().chain(from_intervals).min()
    }

    fn as_intervals(&self) -> Vec<Interval> {
        self.points
            .iter()
            .filter_map(|p| p.coord().cloned().map(Interval::point))
            .chain(self.intervals.iter().cloned())
            .collect()
    }
}

/// A selfmap pair `(T, f)` over a common space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapPair {
    space: Space,
    t: SelfMap,
    f: SelfMap,
}

impl MapPair {
    pub fn new(space: Space, t: SelfMap, f: SelfMap) -> Result<Self, MapError> {
        t.validate(&space)?;
        f.validate(&space)?;
        Ok(MapPair { space, t, f })
    }

    /// `(T, identity)`.
    pub fn single(space: Space, t: SelfMap) -> Result<Self, MapError> {
        Self::new(space, t, SelfMap::Identity)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn t(&self) -> &SelfMap {
        &self.t
    }

    pub fn f(&self) -> &SelfMap {
        &self.f
    }

    pub fn f_is_identity(&self) -> bool {
        self.f.is_identity()
    }

    pub fn eval_t(&self, x: &PointRef) -> Result<PointRef, MapError> {
        evaluate(&self.t, &self.space, x)
    }

    pub fn eval_f(&self, x: &PointRef) -> Result<PointRef, MapError> {
        evaluate(&self.f, &self.space, x)
    }

    /// The canonical `x` with `f(x) = y`, if any.
    pub fn select_preimage(&self, y: &PointRef) -> Option<PointRef> {
        preimages(&self.f, &self.space, y).canonical()
    }
}

/// Outcome of a range-containment check with a witness `y ∈ T(X) \ f(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeCheck {
    pub contained: bool,
    pub witness: Option<PointRef>,
}

fn image_intervals(map: &SelfMap, space: &IntervalSpace) -> Vec<Interval> {
    map.pieces_on(space).iter().map(AffinePiece::image).collect()
}

/// Whether `T(X) ⊆ f(X)`.
pub fn range_contained(pair: &MapPair) -> RangeCheck {
    let witness = match &pair.space {
        Space::Finite(s) => {
            let f_img: BTreeSet<PointRef> = (0..s.len()).map(|i| pair.f.apply(&PointRef::Index(i))).collect();
            let t_img: BTreeSet<PointRef> = (0..s.len()).map(|i| pair.t.apply(&PointRef::Index(i))).collect();
            t_img.into_iter().find(|y| !f_img.contains(y))
        }
        Space::Interval(s) => {
            let f_img = image_intervals(&pair.f, s);
            image_intervals(&pair.t, s)
                .iter()
                .find_map(|t| t.minus_all(&f_img).first().and_then(Interval::representative))
                .map(PointRef::Coord)
        }
    };
    RangeCheck { contained: witness.is_none(), witness }
}

/// All `x` with `f(x) = y`; empty when `y ∉ f(X)`.
pub fn preimages(f: &SelfMap, space: &Space, y: &PointRef) -> PointSet {
    if !space.contains(y) {
        return PointSet::default();
    }
    let mut out = PointSet::default();
    match (space, f) {
        (_, SelfMap::Identity) => out.points.push(y.clone()),
        (Space::Finite(_), SelfMap::Table(t)) => {
            let target = y.index().unwrap();
            out.points = (0..t.image.len()).filter(|&i| t.image[i] == target).map(PointRef::Index).collect();
        }
        (Space::Interval(_), SelfMap::PiecewiseAffine(m)) => {
            let y = y.coord().unwrap();
            for p in &m.pieces {
                let sol = p.solve(y);
                out.points.extend(sol.points);
                out.intervals.extend(sol.intervals);
            }
        }
        _ => {}
    }
    out.normalize()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coincidence {
    pub x: PointRef,
    pub value: PointRef,
}

/// A nondegenerate interval on which `Tx = fx = slope·x + intercept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidenceSegment {
    pub domain: Interval,
    pub slope: ExactScalar,
    pub intercept: ExactScalar,
}

/// Distinct points of coincidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoincidenceValues {
    Finite(Vec<PointRef>),
    /// A segment with nonzero slope produces a continuum of values.
    Continuum,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoincidenceSet {
    pub points: Vec<Coincidence>,
    pub segments: Vec<CoincidenceSegment>,
}

impl CoincidenceSet {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.segments.is_empty()
    }

    pub fn values(&self) -> CoincidenceValues {
        if self.segments.iter().any(|s| !s.slope.is_zero()) {
            return CoincidenceValues::Continuum;
        }
        let vals: BTreeSet<PointRef> = self
            .points
            .iter()
            .map(|c| c.value.clone())
            .chain(self.segments.iter().map(|s| PointRef::Coord(s.intercept.clone())))
            .collect();
        CoincidenceValues::Finite(vals.into_iter().collect())
    }

    /// The point of coincidence, when there is exactly one.
    pub fn unique_value(&self) -> Option<PointRef> {
        match self.values() {
            CoincidenceValues::Finite(v) if v.len() == 1 => v.into_iter().next(),
            _ => None,
        }
    }

    fn as_point_set(&self) -> PointSet {
        PointSet {
            points: self.points.iter().map(|c| c.x.clone()).collect(),
            intervals: self.segments.iter().map(|s| s.domain.clone()).collect(),
        }
    }
}

/// Every `x` with `Tx = fx`, with the common value.
pub fn coincidence_points(pair: &MapPair) -> CoincidenceSet {
    let mut out = CoincidenceSet::default();
    match &pair.space {
        Space::Finite(s) => {
            for i in 0..s.len() {
                let x = PointRef::Index(i);
                let tx = pair.t.apply(&x);
                if tx == pair.f.apply(&x) {
                    out.points.push(Coincidence { x, value: tx });
                }
            }
        }
        Space::Interval(s) => {
            let f_pieces = pair.f.pieces_on(s);
            for pt in pair.t.pieces_on(s) {
                for pf in &f_pieces {
                    let dom = pt.domain.intersect(&pf.domain);
                    if dom.is_empty() {
                        continue;
                    }
                    let ds = &pt.slope - &pf.slope;
                    let dc = &pf.intercept - &pt.intercept;
                    if !ds.is_zero() {
                        let x = dc / ds;
                        if dom.contains(&x) {
                            let value = PointRef::Coord(pt.eval(&x));
                            out.points.push(Coincidence { x: PointRef::Coord(x), value });
                        }
                    } else if dc.is_zero() {
                        if dom.is_point() {
                            let x = dom.lo.value().unwrap().clone();
                            let value = PointRef::Coord(pt.eval(&x));
                            out.points.push(Coincidence { x: PointRef::Coord(x), value });
                        } else {
                            out.segments.push(CoincidenceSegment {
                                domain: dom,
                                slope: pt.slope.clone(),
                                intercept: pt.intercept.clone(),
                            });
                        }
                    }
                }
            }
            out.points.sort_by(|a, b| a.x.cmp(&b.x));
        }
    }
    out
}

/// A coincidence point at which `fTx ≠ Tfx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationWitness {
    pub x: PointRef,
    pub ft: PointRef,
    pub tf: PointRef,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compatibility {
    pub compatible: bool,
    pub witness: Option<CommutationWitness>,
}

fn commutation_at(pair: &MapPair, x: &PointRef) -> Option<CommutationWitness> {
    let ft = pair.f.apply(&pair.t.apply(x));
    let tf = pair.t.apply(&pair.f.apply(x));
    (ft != tf).then(|| CommutationWitness { x: x.clone(), ft, tf })
}

/// Whether `T` and `f` commute at every coincidence point.
///
/// At a coincidence point with value `v`, `fTx = f(v)` and `Tfx = T(v)`, so
/// on a coincidence segment the pair commutes everywhere exactly when the
/// segment's image lies inside the coincidence set.
pub fn is_weakly_compatible(pair: &MapPair) -> Compatibility {
    let coin = coincidence_points(pair);
    let mut witness = coin.points.iter().find_map(|c| commutation_at(pair, &c.x));
    if witness.is_none() && !coin.segments.is_empty() {
        let covered = coin.as_point_set().as_intervals();
        witness = coin.segments.iter().find_map(|seg| {
            let piece = AffinePiece::new(seg.domain.clone(), seg.slope.clone(), seg.intercept.clone());
            let bad = piece.image().minus_all(&covered).first()?.representative()?;
            let x = if seg.slope.is_zero() {
                seg.domain.representative()?
            } else {
                (bad - &seg.intercept) / &seg.slope
            };
            commutation_at(pair, &PointRef::Coord(x))
        });
    }
    Compatibility { compatible: witness.is_none(), witness }
}

/// `{x : Tx = x = fx}`.
pub fn common_fixed_points(pair: &MapPair) -> PointSet {
    let coin = coincidence_points(pair);
    let mut out = PointSet {
        points: coin.points.iter().filter(|c| c.x == c.value).map(|c| c.x.clone()).collect(),
        intervals: Vec::new(),
    };
    let one = ExactScalar::one();
    for seg in &coin.segments {
        if seg.slope != one {
            let x = &seg.intercept / (&one - &seg.slope);
            if seg.domain.contains(&x) {
                out.points.push(PointRef::Coord(x));
            }
        } else if seg.intercept.is_zero() {
            out.push_interval(seg.domain.clone());
        }
    }
    out.normalize()
}
