//! JSON problem files: a space, the maps `T` and `f`, optional condition
//! constants and optional grid overrides.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::conditions::{ConditionKind, DomainSampler};
use crate::interval::{Bound, Interval};
use crate::metric::{FiniteMetricSpace, IntervalSpace, MetricError, Space};
use crate::scalar::ExactScalar;
use crate::selfmaps::{AffinePiece, MapError, MapPair, PiecewiseAffineMap, SelfMap, TableMap};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("malformed problem file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid space: {0}")]
    Space(#[from] MetricError),
    #[error("invalid map: {0}")]
    Map(#[from] MapError),
    #[error("unknown condition kind {0:?}")]
    UnknownKind(String),
    #[error("grid step must be positive, got {0}")]
    BadStep(ExactScalar),
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Interval endpoints as they appear in the file. A missing endpoint is
/// unbounded.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<ExactScalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<ExactScalar>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub lo_open: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub hi_open: bool,
}

impl IntervalSpec {
    pub fn to_interval(&self) -> Interval {
        let bound = |v: &Option<ExactScalar>, open: bool| match v {
            None => Bound::Unbounded,
            Some(v) if open => Bound::Open(v.clone()),
            Some(v) => Bound::Closed(v.clone()),
        };
        Interval::new(bound(&self.lo, self.lo_open), bound(&self.hi, self.hi_open))
    }

    pub fn from_interval(iv: &Interval) -> Self {
        IntervalSpec {
            lo: iv.lo.value().cloned(),
            hi: iv.hi.value().cloned(),
            lo_open: iv.lo.is_open(),
            hi_open: iv.hi.is_open(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    Finite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        dist: Vec<Vec<ExactScalar>>,
    },
    Interval {
        #[serde(flatten)]
        bounds: IntervalSpec,
    },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<Space, MetricError> {
        match self {
            SpaceSpec::Finite { labels: None, dist } => Ok(Space::Finite(FiniteMetricSpace::new(dist.clone())?)),
            SpaceSpec::Finite { labels: Some(l), dist } => {
                Ok(Space::Finite(FiniteMetricSpace::with_labels(l.clone(), dist.clone())?))
            }
            SpaceSpec::Interval { bounds } => {
                let iv = bounds.to_interval();
                Ok(Space::Interval(IntervalSpace::new(iv.lo, iv.hi)?))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    #[serde(flatten)]
    pub domain: IntervalSpec,
    pub slope: ExactScalar,
    pub intercept: ExactScalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum MapObject {
    Table { image: Vec<usize> },
    PiecewiseAffine { pieces: Vec<PieceSpec> },
}

/// `"identity"`, a table, or a list of affine pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapSpec {
    Identity,
    Table(Vec<usize>),
    PiecewiseAffine(Vec<PieceSpec>),
}

impl MapSpec {
    pub fn build(&self) -> SelfMap {
        match self {
            MapSpec::Identity => SelfMap::Identity,
            MapSpec::Table(image) => SelfMap::Table(TableMap::new(image.clone())),
            MapSpec::PiecewiseAffine(pieces) => SelfMap::PiecewiseAffine(PiecewiseAffineMap::new(
                pieces
                    .iter()
                    .map(|p| AffinePiece::new(p.domain.to_interval(), p.slope.clone(), p.intercept.clone()))
                    .collect(),
            )),
        }
    }
}

impl Serialize for MapSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MapSpec::Identity => s.serialize_str("identity"),
            MapSpec::Table(image) => MapObject::Table { image: image.clone() }.serialize(s),
            MapSpec::PiecewiseAffine(pieces) => MapObject::PiecewiseAffine { pieces: pieces.clone() }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for MapSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(name) if name == "identity" => Ok(MapSpec::Identity),
            Value::String(name) => Err(D::Error::custom(format!("unknown map name {name:?}, expected \"identity\""))),
            v @ Value::Object(_) => match serde_json::from_value(v).map_err(D::Error::custom)? {
                MapObject::Table { image } => Ok(MapSpec::Table(image)),
                MapObject::PiecewiseAffine { pieces } => Ok(MapSpec::PiecewiseAffine(pieces)),
            },
            _ => Err(D::Error::custom("a map is \"identity\" or an object with a \"type\" field")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionSpec {
    pub kind: String,
    pub delta: ExactScalar,
    #[serde(rename = "L")]
    pub l: ExactScalar,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<ExactScalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clip: Option<ExactScalar>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pinned: Vec<ExactScalar>,
}

fn identity_map() -> MapSpec {
    MapSpec::Identity
}

fn is_identity(m: &MapSpec) -> bool {
    *m == MapSpec::Identity
}

/// The file as written.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub space: SpaceSpec,
    #[serde(rename = "T")]
    pub t: MapSpec,
    #[serde(default = "identity_map", skip_serializing_if = "is_identity")]
    pub f: MapSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<ConditionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

/// A validated problem ready to analyse.
#[derive(Clone, Debug)]
pub struct Problem {
    pub pair: MapPair,
    pub condition: Option<(ConditionKind, ExactScalar, ExactScalar)>,
    pub sampler: DomainSampler,
    pub file: ProblemFile,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, ProblemError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    pub fn build(&self) -> Result<Problem, ProblemError> {
        let space = self.space.build()?;
        let pair = MapPair::new(space, self.t.build(), self.f.build())?;
        let condition = match &self.condition {
            None => None,
            Some(c) => {
                let kind = ConditionKind::from_name(&c.kind).ok_or_else(|| ProblemError::UnknownKind(c.kind.clone()))?;
                Some((kind, c.delta.clone(), c.l.clone()))
            }
        };
        let mut sampler = DomainSampler::default();
        if let Some(g) = &self.grid {
            if let Some(step) = &g.step {
                if !step.is_positive() {
                    return Err(ProblemError::BadStep(step.clone()));
                }
                sampler.step = step.clone();
            }
            if let Some(clip) = &g.clip {
                sampler.clip = clip.clone();
            }
            sampler.pinned = g.pinned.clone();
        }
        Ok(Problem { pair, condition, sampler, file: self.clone() })
    }
}

impl Problem {
    pub fn parse(text: &str) -> Result<Self, ProblemError> {
        ProblemFile::parse(text)?.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    const STEP: &str = r#"{
        "space": {"type": "interval", "lo": "0", "hi": "1", "hi_open": true},
        "T": {"type": "piecewise_affine", "pieces": [
            {"lo": "0", "hi": "2/3", "hi_open": true, "slope": "0", "intercept": "1/2"},
            {"lo": "2/3", "hi": "1", "hi_open": true, "slope": "0", "intercept": "2/3"}]},
        "f": {"type": "piecewise_affine", "pieces": [
            {"lo": "0", "hi": "2/3", "hi_open": true, "slope": "0", "intercept": "5/6"},
            {"lo": "2/3", "hi": "1", "hi_open": true, "slope": "-1", "intercept": "4/3"}]},
        "grid": {"step": "1/60", "pinned": ["1/2", "2/3"]}
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let file = ProblemFile::parse(STEP).unwrap();
        let p = file.build().unwrap();
        assert_eq!(p.pair.eval_f(&q("2/3").into()).unwrap(), q("2/3").into());
        assert_eq!(p.sampler.step, q("1/60"));
        assert_eq!(p.sampler.pinned.len(), 2);
        let again = ProblemFile::parse(&file.to_json_pretty()).unwrap();
        assert_eq!(again, file);
    }

    #[test]
    fn finite_with_defaults() {
        let text = r#"{"space": {"type": "finite", "labels": ["0", "1/2", "1"],
            "dist": [["0", "1/2", "1"], ["1/2", "0", "1/2"], ["1", "1/2", 0]]},
            "T": {"type": "table", "image": [1, 1, 0]},
            "condition": {"kind": "generalized_b", "delta": "1/2", "L": "0"}}"#;
        let p = Problem::parse(text).unwrap();
        assert!(p.pair.f_is_identity());
        assert_eq!(p.condition.unwrap().0, ConditionKind::GeneralizedConditionB);
        assert!(!ProblemFile::parse(text).unwrap().to_json_pretty().contains("\"f\""));
    }

    #[test]
    fn real_line_space() {
        let text = r#"{"space": {"type": "interval"}, "T": "identity"}"#;
        let p = Problem::parse(text).unwrap();
        assert_eq!(p.pair.space().as_interval().unwrap().domain(), &Interval::real_line());
    }

    #[test]
    fn rejections() {
        let bad = [
            r#"{"space": {"type": "interval"}, "T": "identity", "extra": 1}"#,
            r#"{"space": {"type": "interval", "lo": 0.5}, "T": "identity"}"#,
            r#"{"space": {"type": "interval"}, "T": "square"}"#,
            r#"{"space": {"type": "interval"}, "T": {"type": "table", "image": [0], "x": 1}}"#,
            r#"{"space": {"type": "finite", "dist": [["0", "1"], ["2", "0"]]}, "T": "identity"}"#,
            r#"{"space": {"type": "finite", "dist": [["0"]]}, "T": {"type": "table", "image": [1]}}"#,
            r#"{"space": {"type": "interval"}, "T": "identity", "condition": {"kind": "nope", "delta": "1/2", "L": "0"}}"#,
            r#"{"space": {"type": "interval"}, "T": "identity", "grid": {"step": "0"}}"#,
        ];
        for text in bad {
            assert!(Problem::parse(text).is_err(), "{text}");
        }
        let err = ProblemFile::parse("{\n  \"space\": 3\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
