use serde::Serialize;

/// Non-fatal findings attached to reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// A nonzero entry sits within one generator step of the scan bound, so
    /// entries just above the bound may have been missed.
    BoundTooSmall {
        context: String,
        i: usize,
        degree: String,
        weight: i64,
        bound: String,
    },
    /// A degree was skipped by a size-limited check.
    Skipped {
        context: String,
        degree: String,
        reason: String,
    },
}
