//! Exact verification toolkit for common fixed points of selfmap pairs.
//!
//! A pair `(T, f)` of selfmaps of a metric space is checked against a
//! catalogue of contractive conditions of the form
//! `d(Tx,Ty) <= delta*A(x,y) + L*B(x,y)`, with exact minimal constants.
//! Coincidence points are computed by T-sequence iteration with certified
//! error bounds, and small random instances are searched for failures of
//! the coincidence theorem outside its proven constant range.
//!
//! All arithmetic is exact rational; see [`scalar::ExactScalar`].

#![allow(clippy::needless_range_loop)]

pub mod conditions;
pub mod explorer;
pub mod fixtures;
pub mod interval;
pub mod iterate;
pub mod metric;
pub mod problem;
pub mod scalar;
pub mod selfmaps;

pub use conditions::{ConditionKind, DomainSampler, FeasibilityReport};
pub use interval::{Bound, Interval};
pub use metric::{FiniteMetricSpace, IntervalSpace, PointRef, Space};
pub use scalar::{q, ExactScalar};
pub use selfmaps::{MapPair, PiecewiseAffineMap, SelfMap, TableMap};
