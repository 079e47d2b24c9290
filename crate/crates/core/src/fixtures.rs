//! Bundled example problems.

use std::fmt;
use std::str::FromStr;

use crate::problem::{Problem, ProblemFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixtureId {
    /// `T` on the three points `{0, 1/2, 1}`: satisfies the generalized
    /// condition but not the plain one.
    Example1_10,
    /// Step maps on `[0, 1)` with common fixed point `2/3`.
    Example2_4,
    /// `Tx = (x+1)/4`, `fx = x/2` on `[-64, 64]`: coincidence at 1 but no
    /// common fixed point.
    Example3_4,
}

impl FixtureId {
    pub const ALL: [FixtureId; 3] = [FixtureId::Example1_10, FixtureId::Example2_4, FixtureId::Example3_4];

    pub fn name(self) -> &'static str {
        match self {
            FixtureId::Example1_10 => "example_1_10",
            FixtureId::Example2_4 => "example_2_4",
            FixtureId::Example3_4 => "example_3_4",
        }
    }

    pub fn source(self) -> &'static str {
        match self {
            FixtureId::Example1_10 => include_str!("../fixtures/example_1_10.json"),
            FixtureId::Example2_4 => include_str!("../fixtures/example_2_4.json"),
            FixtureId::Example3_4 => include_str!("../fixtures/example_3_4.json"),
        }
    }

    pub fn file(self) -> ProblemFile {
        ProblemFile::parse(self.source()).expect("bundled fixtures parse")
    }

    pub fn problem(self) -> Problem {
        self.file().build().expect("bundled fixtures are valid")
    }
}

impl fmt::Display for FixtureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixtureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FixtureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown fixture {s:?}; expected one of example_1_10, example_2_4, example_3_4"))
    }
}
