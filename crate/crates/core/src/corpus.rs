//! Built-in instances, addressable by name from the CLI.

use crate::fibers::Bound;
use crate::problem::{GeneratorsFile, InputSpec};

#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub about: &'static str,
    pub input: &'static str,
    pub generators: Option<&'static str>,
    /// A scan bound that clears every bound warning.
    pub bound: i64,
}

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "rational-quartic",
        about: "semigroup generated by (4,0), (3,1), (1,3), (0,4)",
        input: include_str!("../corpus/rational-quartic.json"),
        generators: None,
        bound: 24,
    },
    CorpusEntry {
        name: "total-degree",
        about: "L = span{(1,-1,0), (0,1,-1)}: three variables graded by total degree",
        input: include_str!("../corpus/total-degree.json"),
        generators: Some(include_str!("../corpus/total-degree.gens.json")),
        bound: 4,
    },
    CorpusEntry {
        name: "twisted-cubic",
        about: "semigroup generated by (3,0), (2,1), (1,2), (0,3)",
        input: include_str!("../corpus/twisted-cubic.json"),
        generators: None,
        bound: 12,
    },
    CorpusEntry {
        name: "torsion",
        about: "L = span{(2,-2)}: grading group Z + Z/2",
        input: include_str!("../corpus/torsion.json"),
        generators: None,
        bound: 6,
    },
    CorpusEntry {
        name: "ci-incomparable",
        about: "complete intersection x1^2 - x2x3, x4^2 - x5x6 with incomparable degrees",
        input: include_str!("../corpus/ci-incomparable.json"),
        generators: Some(include_str!("../corpus/ci-incomparable.gens.json")),
        bound: 6,
    },
];

impl CorpusEntry {
    pub fn spec(&self) -> InputSpec {
        InputSpec::parse(self.input).expect("corpus input parses")
    }

    pub fn generators(&self) -> Option<GeneratorsFile> {
        self.generators
            .map(|g| GeneratorsFile::parse(g).expect("corpus generators parse"))
    }

    pub fn default_bound(&self) -> Bound {
        Bound::integer(self.bound)
    }
}

pub fn lookup(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

pub fn names() -> Vec<&'static str> {
    CORPUS.iter().map(|e| e.name).collect()
}
