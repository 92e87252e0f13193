//! Input files and the command specification echoed into every report.

use serde::{Deserialize, Serialize};

use crate::fibers::{Bound, FiberStore};
use crate::lattice::{GradingMap, LatticeError, LatticePresentation};
use crate::syzygy::{Binomial, SyzygyError};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("generator {index}: {source}")]
    Generator { index: usize, source: SyzygyError },
    #[error("{0}")]
    Invalid(String),
}

/// How the grading is given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputSource {
    /// Basis rows of `L`.
    LatticeBasis(Vec<Vec<i64>>),
    /// One free-part degree per variable; `L` is the kernel.
    GradingColumns(Vec<Vec<i64>>),
}

/// `{"n": .., "lattice_basis": [..]}` or `{"n": .., "grading_columns": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInput", into = "RawInput")]
pub struct InputSpec {
    pub n: usize,
    pub source: InputSource,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lattice_basis: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grading_columns: Option<Vec<Vec<i64>>>,
}

impl TryFrom<RawInput> for InputSpec {
    type Error = String;

    fn try_from(raw: RawInput) -> Result<Self, String> {
        let source = match (raw.lattice_basis, raw.grading_columns) {
            (Some(b), None) => InputSource::LatticeBasis(b),
            (None, Some(c)) => InputSource::GradingColumns(c),
            _ => return Err("exactly one of \"lattice_basis\" and \"grading_columns\" is required".into()),
        };
        Ok(InputSpec { n: raw.n, source })
    }
}

impl From<InputSpec> for RawInput {
    fn from(s: InputSpec) -> Self {
        let (lattice_basis, grading_columns) = match s.source {
            InputSource::LatticeBasis(b) => (Some(b), None),
            InputSource::GradingColumns(c) => (None, Some(c)),
        };
        RawInput {
            n: s.n,
            lattice_basis,
            grading_columns,
        }
    }
}

impl InputSpec {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Validates the shape of the input without deciding pointedness.
    pub fn validate(&self) -> Result<(), LatticeError> {
        match &self.source {
            InputSource::LatticeBasis(b) => LatticePresentation::new(self.n, b.clone()).map(|_| ()),
            InputSource::GradingColumns(c) => {
                if self.n == 0 {
                    return Err(LatticeError::NoVariables);
                }
                if c.len() != self.n {
                    return Err(LatticeError::RowLength {
                        row: c.len(),
                        len: c.len(),
                        expected: self.n,
                    });
                }
                let d = c.first().map_or(0, Vec::len);
                match c.iter().position(|col| col.len() != d) {
                    Some(i) => Err(LatticeError::RowLength {
                        row: i,
                        len: c[i].len(),
                        expected: d,
                    }),
                    None => Ok(()),
                }
            }
        }
    }

    pub fn grading(&self) -> Result<GradingMap, LatticeError> {
        match &self.source {
            InputSource::LatticeBasis(b) => GradingMap::from_lattice(&LatticePresentation::new(self.n, b.clone())?),
            InputSource::GradingColumns(c) => GradingMap::from_columns(self.n, c.clone()),
        }
    }

    pub fn store(&self) -> Result<FiberStore, LatticeError> {
        self.grading().map(FiberStore::new)
    }
}

/// One binomial as given in a generators file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinomialInput {
    pub plus: Vec<u32>,
    pub minus: Vec<u32>,
}

/// `{"binomials": [{"plus": [..], "minus": [..]}, ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsFile {
    pub binomials: Vec<BinomialInput>,
}

impl GeneratorsFile {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn resolve(&self, g: &GradingMap) -> Result<Vec<Binomial>, InputError> {
        self.binomials
            .iter()
            .enumerate()
            .map(|(index, b)| {
                Binomial::new(b.plus.clone(), b.minus.clone(), g)
                    .map_err(|source| InputError::Generator { index, source })
            })
            .collect()
    }
}

fn default_resamples() -> usize {
    50
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    Check,
    Fiber {
        degree: String,
    },
    Complex {
        degree: String,
        kind: String,
    },
    Betti {
        bound: Bound,
        oracle: String,
    },
    Census {
        bound: Bound,
    },
    Indispensable {
        bound: Bound,
        /// Randomized minimal generating sets drawn for the cross-check.
        #[serde(default = "default_resamples")]
        resamples: usize,
    },
    CheckStrong {
        bound: Bound,
    },
    KoszulCi {
        bound: Bound,
        generators: GeneratorsFile,
    },
    VerifyAll {
        bound: Bound,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Fiber { .. } => "fiber",
            Command::Complex { .. } => "complex",
            Command::Betti { .. } => "betti",
            Command::Census { .. } => "census",
            Command::Indispensable { .. } => "indispensable",
            Command::CheckStrong { .. } => "check-strong",
            Command::KoszulCi { .. } => "koszul-ci",
            Command::VerifyAll { .. } => "verify-all",
        }
    }
}

pub const DEFAULT_FIELD: &str = "q";

/// Everything a report depends on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub input: InputSpec,
    pub command: Command,
    pub field: String,
    pub seed: u64,
    pub allow_warnings: bool,
}
