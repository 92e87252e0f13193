use serde::Serialize;

use crate::betti::{classify_degrees, BettiTable, HOMOLOGY_SHIFT};
use crate::complexes::{build_delta_b, reduced_homology, ComplexError, DEFAULT_FACE_LIMIT};
use crate::fibers::{Bound, FiberStore};
use crate::lattice::Degree;
use crate::linalg::RankField;
use crate::warning::Warning;

use super::{census, Binomial};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndispensableReport {
    pub bound: Bound,
    pub binomials: Vec<Binomial>,
    pub warnings: Vec<Warning>,
}

/// Binomials at minimal 1-Betti degrees whose fiber is two coprime monomials.
pub fn indispensable_binomials(store: &FiberStore, bound: Bound) -> IndispensableReport {
    let c = census(store, bound);
    let betti_degrees: Vec<&Degree> = c.degrees.iter().map(|d| &d.degree).collect();
    let mut binomials = Vec::new();
    for d in &c.degrees {
        let fiber = store.fiber(&d.degree);
        if fiber.len() != 2 || betti_degrees.iter().any(|other| store.lt(other, &d.degree)) {
            continue;
        }
        let (u, v) = (&fiber.monomials[0], &fiber.monomials[1]);
        if u.iter().zip(v).any(|(a, b)| *a > 0 && *b > 0) {
            continue;
        }
        binomials.push(d.representatives[0].clone());
    }
    IndispensableReport {
        bound,
        binomials,
        warnings: c.warnings,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongStatus {
    pub i: usize,
    pub degree: Degree,
    pub betti: usize,
    pub minimal: bool,
    /// Reduced homology of `Δ_gcd(b)` in the dimension matched to `i`.
    pub homology: usize,
}

impl StrongStatus {
    pub fn holds(&self) -> bool {
        self.minimal && self.homology == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolatedCondition {
    NotMinimal,
    HomologyDimension,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub i: usize,
    pub degree: Degree,
    pub condition: ViolatedCondition,
    /// The offending homology dimension, or `β_{i,b}` for a non-minimal degree.
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongCheck {
    pub verdict: bool,
    pub statuses: Vec<StrongStatus>,
    pub first_violation: Option<Violation>,
}

/// Evaluates, for every nonzero `β_{i,b}` in `t`, minimality of `b` among
/// `i`-Betti degrees and `dim ~H_{i-1}(Δ_gcd(b)) = 1`.
///
/// Homology is recomputed on `Δ_b` rather than read back from `t`.
pub fn strongly_indispensable_check(
    t: &BettiTable,
    store: &FiberStore,
    field: &dyn RankField,
) -> Result<StrongCheck, ComplexError> {
    let classes = classify_degrees(t, store);
    let mut statuses = Vec::with_capacity(t.entries.len());
    for e in &t.entries {
        let h = reduced_homology(&build_delta_b(&store.fiber(&e.degree)), field, DEFAULT_FACE_LIMIT)?;
        statuses.push(StrongStatus {
            i: e.i,
            degree: e.degree.clone(),
            betti: e.value,
            minimal: classes.is_minimal(e.i, &e.degree),
            homology: h.reduced(e.i as isize - HOMOLOGY_SHIFT),
        });
    }
    let first_violation = statuses.iter().find(|s| !s.holds()).map(|s| {
        let (condition, value) = if s.minimal {
            (ViolatedCondition::HomologyDimension, s.homology)
        } else {
            (ViolatedCondition::NotMinimal, s.betti)
        };
        Violation {
            i: s.i,
            degree: s.degree.clone(),
            condition,
            value,
        }
    });
    Ok(StrongCheck {
        verdict: first_violation.is_none(),
        statuses,
        first_violation,
    })
}
