//! The cross-oracle pipeline behind `verify-all`.

use rayon::prelude::*;
use serde::Serialize;

use crate::betti::{BettiOracle, GcdOracle, TorOracle, TorStrand};
use crate::complexes::{boundary_matrix, build_delta_b, build_gcd_complex, components, reduced_homology, ComplexError};
use crate::fibers::{Bound, FiberStore};
use crate::linalg::RankField;
use crate::syzygy::{brute_force_minimal_pairs, census, fiber_graph_components};
use crate::warning::Warning;

/// Size limits for the expensive checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyLimits {
    /// Faces allowed when materializing `Δ_gcd(b)`.
    pub gcd_face_limit: usize,
    /// Largest fiber for the brute-force census.
    pub brute_force_fiber: usize,
    /// Most scanned degrees for the brute-force census.
    pub brute_force_degrees: usize,
}

impl Default for VerifyLimits {
    fn default() -> Self {
        VerifyLimits {
            gcd_face_limit: crate::complexes::DEFAULT_FACE_LIMIT,
            brute_force_fiber: 8,
            brute_force_degrees: 30,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub skipped: usize,
    /// First failing case, or why the check was skipped.
    pub witness: Option<String>,
}

impl CheckResult {
    fn new(name: &'static str) -> Self {
        CheckResult {
            name,
            passed: true,
            checked: 0,
            skipped: 0,
            witness: None,
        }
    }

    fn fail(&mut self, witness: String) {
        if self.passed {
            self.passed = false;
            self.witness = Some(witness);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub bound: Bound,
    pub degrees_scanned: usize,
    pub checks: Vec<CheckResult>,
    pub warnings: Vec<Warning>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

pub fn verify_all(store: &FiberStore, bound: Bound, field: &dyn RankField, limits: VerifyLimits) -> VerifyReport {
    let g = store.grading();
    let degrees = store.degrees_up_to(bound);
    let mut checks = Vec::new();
    let mut warnings = Vec::new();

    let mut pointed = CheckResult::new("pointedness");
    for (i, &w) in g.column_weights().iter().enumerate() {
        pointed.checked += 1;
        if w <= 0 {
            pointed.fail(format!("y . a_{} = {w}", i + 1));
        }
    }
    checks.push(pointed);

    let mut betti = CheckResult::new("betti_oracles_agree");
    match (
        GcdOracle::default().table(store, bound, field),
        TorOracle.table(store, bound, field),
    ) {
        (Ok(a), Ok(b)) => {
            betti.checked = degrees.len();
            if let Some(d) = a.first_difference(&b) {
                betti.fail(format!(
                    "beta_{{{},{}}}: gcd {} vs tor {}",
                    d.i, d.degree, d.left, d.right
                ));
            }
            warnings.extend(a.bound_warnings(g, "betti"));
        }
        (Err(e), _) | (_, Err(e)) => betti.fail(e.to_string()),
    }
    checks.push(betti);

    let mut graph = CheckResult::new("fiber_graph_components");
    let graph_failures: Vec<String> = degrees
        .par_iter()
        .filter_map(|b| {
            let from_graph = fiber_graph_components(b, store);
            let from_complex = components(&build_gcd_complex(&store.fiber(b)));
            (from_graph != from_complex).then(|| format!("{b}: graph {from_graph:?} vs complex {from_complex:?}"))
        })
        .collect();
    graph.checked = degrees.len();
    if let Some(w) = graph_failures.into_iter().next() {
        graph.fail(w);
    }
    checks.push(graph);

    let mut count = CheckResult::new("census_brute_force");
    match brute_force_minimal_pairs(store, bound, limits.brute_force_fiber, limits.brute_force_degrees) {
        Some(brute) => {
            let c = census(store, bound);
            count.checked = degrees.len();
            let formula: Vec<_> = c.degrees.iter().map(|d| (d.degree.clone(), d.cross_pairs)).collect();
            if c.total != brute.total || formula != brute.per_degree {
                count.fail(format!("formula total {} vs brute force {}", c.total, brute.total));
            }
        }
        None => {
            count.skipped = 1;
            count.witness = Some(format!(
                "instance exceeds {} monomials per fiber or {} degrees",
                limits.brute_force_fiber, limits.brute_force_degrees
            ));
        }
    }
    checks.push(count);

    let mut nerve = CheckResult::new("nerve_equivalence");
    let outcomes: Vec<Result<Option<String>, (String, ComplexError)>> = degrees
        .par_iter()
        .map(|b| {
            let fiber = store.fiber(b);
            let small = reduced_homology(&build_delta_b(&fiber), field, usize::MAX).map_err(|e| (b.to_string(), e))?;
            let big = reduced_homology(&build_gcd_complex(&fiber), field, limits.gcd_face_limit)
                .map_err(|e| (b.to_string(), e))?;
            Ok((!small.same_dims(&big)).then(|| format!("{b}: delta_b {small:?} vs gcd {big:?}")))
        })
        .collect();
    for o in outcomes {
        match o {
            Ok(None) => nerve.checked += 1,
            Ok(Some(w)) => {
                nerve.checked += 1;
                nerve.fail(w);
            }
            Err((degree, e)) => {
                nerve.skipped += 1;
                warnings.push(Warning::Skipped {
                    context: "nerve_equivalence".into(),
                    degree,
                    reason: e.to_string(),
                });
            }
        }
    }
    checks.push(nerve);

    let mut strands = CheckResult::new("koszul_strands");
    let strand_failures: Vec<String> = degrees
        .par_iter()
        .filter_map(|b| {
            let s = TorStrand::build(store, b);
            if !s.squares_to_zero() {
                return Some(format!("{b}: d^2 != 0"));
            }
            (!s.homology(field).euler_balanced()).then(|| format!("{b}: Euler characteristic mismatch"))
        })
        .collect();
    strands.checked = degrees.len();
    if let Some(w) = strand_failures.into_iter().next() {
        strands.fail(w);
    }
    checks.push(strands);

    let mut boundaries = CheckResult::new("simplicial_boundaries");
    let boundary_failures: Vec<String> = degrees
        .par_iter()
        .filter_map(|b| {
            let levels = build_delta_b(&store.fiber(b)).faces_by_size(usize::MAX).ok()?;
            let ds: Vec<_> = (1..levels.len())
                .map(|s| boundary_matrix(&levels[s - 1], &levels[s]))
                .collect();
            ds.windows(2)
                .any(|w| !w[0].mul(&w[1]).is_zero())
                .then(|| format!("{b}: boundary of boundary is nonzero"))
        })
        .collect();
    boundaries.checked = degrees.len();
    if let Some(w) = boundary_failures.into_iter().next() {
        boundaries.fail(w);
    }
    checks.push(boundaries);

    VerifyReport {
        bound,
        degrees_scanned: degrees.len(),
        checks,
        warnings,
    }
}
