//! Command execution and the JSON report.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::betti::{classify_degrees, oracle_registry, BettiTable};
use crate::complexes::{complex_registry, components, reduced_homology, DEFAULT_FACE_LIMIT};
use crate::fibers::{format_monomial, variable_name, Bound, FiberStore};
use crate::lattice::{GradingMap, LatticeError};
use crate::linalg::{field_registry, RankField};
use crate::problem::{Command, InputError, ProblemSpec};
use crate::syzygy::{
    census, indispensable_binomials, koszul_ci_verify, sample_minimal_generating_set, strongly_indispensable_check,
};
use crate::verify::{verify_all, VerifyLimits};
use crate::warning::Warning;

pub const TOOL: &str = "lsz";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Record wall-clock time; reports are then no longer reproducible.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradingSummary {
    pub n: usize,
    pub free_rank: usize,
    pub torsion_moduli: Vec<i64>,
    /// The positive functional `y`.
    pub y: Vec<i64>,
    pub legend: Vec<String>,
    pub generator_degrees: Vec<String>,
    pub generator_weights: Vec<i64>,
    pub lattice_rank: usize,
}

impl GradingSummary {
    pub fn of(g: &GradingMap) -> Self {
        GradingSummary {
            n: g.n(),
            free_rank: g.free_rank(),
            torsion_moduli: g.torsion_moduli().to_vec(),
            y: g.functional().to_vec(),
            legend: g.legend(),
            generator_degrees: (0..g.n()).map(|i| g.generator(i).to_string()).collect(),
            generator_weights: g.column_weights().to_vec(),
            lattice_rank: g.lattice_rank(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub spec: ProblemSpec,
    pub grading: Option<GradingSummary>,
    pub ok: bool,
    /// First failed assertion or disagreement.
    pub failure: Option<String>,
    pub warnings: Vec<Warning>,
    pub result: Value,
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if !self.ok || (!self.spec.allow_warnings && !self.warnings.is_empty()) {
            EXIT_FAILED
        } else {
            EXIT_OK
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Outcome {
    ok: bool,
    failure: Option<String>,
    warnings: Vec<Warning>,
    result: Value,
}

impl Outcome {
    fn pass(result: Value) -> Self {
        Outcome {
            ok: true,
            failure: None,
            warnings: Vec::new(),
            result,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result serializes")
}

fn field_for(spec: &ProblemSpec) -> Result<std::sync::Arc<dyn RankField>, InputError> {
    field_registry()
        .get(&spec.field)
        .map_err(|e| InputError::Invalid(e.to_string()))
}

/// Runs one command. `Err` is a usage error (exit code 2); every other
/// outcome, including a non-pointed grading, is a report.
pub fn run(spec: &ProblemSpec, opts: RunOptions) -> Result<Report, InputError> {
    let start = Instant::now();
    spec.input.validate()?;
    let field = field_for(spec)?;
    let report = |grading: Option<GradingSummary>, o: Outcome| Report {
        tool: TOOL,
        version: VERSION,
        spec: spec.clone(),
        grading,
        ok: o.ok,
        failure: o.failure,
        warnings: o.warnings,
        result: o.result,
        timing_ms: opts.timing.then(|| start.elapsed().as_millis()),
    };
    let g = match spec.input.grading() {
        Ok(g) => g,
        Err(LatticeError::NotPointed { witness }) => {
            let o = Outcome {
                ok: false,
                failure: Some(format!("grading is not pointed: u = {witness:?} maps to 0")),
                warnings: Vec::new(),
                result: json!({ "pointed": false, "witness": witness }),
            };
            return Ok(report(None, o));
        }
        Err(e) => return Err(e.into()),
    };
    let summary = GradingSummary::of(&g);
    let store = FiberStore::new(g);
    let o = execute(spec, &store, field.as_ref())?;
    Ok(report(Some(summary), o))
}

fn betti_tables(
    store: &FiberStore,
    bound: Bound,
    field: &dyn RankField,
    names: &[&str],
) -> Result<Vec<BettiTable>, InputError> {
    let oracles = oracle_registry();
    names
        .iter()
        .map(|n| {
            let o = oracles.get(n).map_err(|e| InputError::Invalid(e.to_string()))?;
            o.table(store, bound, field)
                .map_err(|e| InputError::Invalid(e.to_string()))
        })
        .collect()
}

fn agreement(tables: &[BettiTable]) -> Option<String> {
    let d = tables[0].first_difference(&tables[1])?;
    Some(format!(
        "oracles disagree at beta_{{{},{}}}: gcd {} vs tor {}",
        d.i, d.degree, d.left, d.right
    ))
}

fn execute(spec: &ProblemSpec, store: &FiberStore, field: &dyn RankField) -> Result<Outcome, InputError> {
    let g = store.grading();
    let parse = |s: &str| g.parse_degree(s).map_err(InputError::from);
    Ok(match &spec.command {
        Command::Check => Outcome::pass(json!({
            "pointed": true,
            "positivity_verified": g.column_weights().iter().all(|&w| w > 0),
        })),
        Command::Fiber { degree } => {
            let b = parse(degree)?;
            let f = store.fiber(&b);
            Outcome::pass(json!({
                "degree": b,
                "weight": g.weight(&b),
                "size": f.len(),
                "monomials": f.monomials.iter().map(|u| format_monomial(u)).collect::<Vec<_>>(),
                "exponents": f.monomials,
            }))
        }
        Command::Complex { degree, kind } => {
            let b = parse(degree)?;
            let builder = complex_registry()
                .get(kind)
                .map_err(|e| InputError::Invalid(e.to_string()))?;
            let f = store.fiber(&b);
            let c = builder.build(&f);
            let label = |v: usize| match kind.as_str() {
                "delta" => variable_name(v, g.n()),
                _ => format_monomial(&f.monomials[v]),
            };
            let facets: Vec<Vec<String>> = c
                .facets
                .iter()
                .map(|fc| fc.iter().map(|&v| label(v)).collect())
                .collect();
            let comps: Vec<Vec<String>> = components(&c)
                .iter()
                .map(|cc| cc.iter().map(|&v| label(v)).collect())
                .collect();
            match reduced_homology(&c, field, DEFAULT_FACE_LIMIT) {
                Ok(h) => Outcome::pass(json!({
                    "degree": b,
                    "kind": kind,
                    "vertices": c.vertices.iter().map(|&v| label(v)).collect::<Vec<_>>(),
                    "facets": facets,
                    "components": comps,
                    "homology": h,
                })),
                Err(e) => Outcome {
                    ok: false,
                    failure: Some(e.to_string()),
                    warnings: Vec::new(),
                    result: json!({ "degree": b, "kind": kind, "facets": facets }),
                },
            }
        }
        Command::Betti { bound, oracle } => {
            let names: Vec<&str> = match oracle.as_str() {
                "both" => vec!["gcd", "tor"],
                one => vec![one],
            };
            let tables = betti_tables(store, *bound, field, &names)?;
            let failure = if tables.len() == 2 { agreement(&tables) } else { None };
            let classes = classify_degrees(&tables[0], store);
            Outcome {
                ok: failure.is_none(),
                failure,
                warnings: tables[0].bound_warnings(g, "betti"),
                result: json!({
                    "oracles": names,
                    "totals": tables[0].totals(),
                    "table": tables[0],
                    "agree": tables.len() == 2 && tables[0].same_entries(&tables[1]),
                    "classification": classes,
                }),
            }
        }
        Command::Census { bound } => {
            let c = census(store, *bound);
            Outcome {
                ok: true,
                failure: None,
                warnings: c.warnings.clone(),
                result: to_value(&c),
            }
        }
        Command::Indispensable { bound, resamples } => {
            let r = indispensable_binomials(store, *bound);
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let mut appearances = vec![0usize; r.binomials.len()];
            for _ in 0..*resamples {
                let sample = sample_minimal_generating_set(store, *bound, &mut rng);
                for (k, f) in r.binomials.iter().enumerate() {
                    if sample.iter().any(|s| s.equivalent(f)) {
                        appearances[k] += 1;
                    }
                }
            }
            let missing = appearances.iter().position(|&a| a != *resamples);
            Outcome {
                ok: missing.is_none(),
                failure: missing.map(|k| {
                    format!(
                        "{} is missing from {} of {resamples} sampled minimal generating sets",
                        r.binomials[k],
                        resamples - appearances[k]
                    )
                }),
                warnings: r.warnings.clone(),
                result: json!({
                    "bound": bound,
                    "binomials": r.binomials,
                    "seed": spec.seed,
                    "resamples": resamples,
                    "appearances": appearances,
                }),
            }
        }
        Command::CheckStrong { bound } => {
            let tables = betti_tables(store, *bound, field, &["gcd", "tor"])?;
            let failure = agreement(&tables);
            let check = strongly_indispensable_check(&tables[1], store, field)
                .map_err(|e| InputError::Invalid(e.to_string()))?;
            Outcome {
                ok: failure.is_none(),
                failure,
                warnings: tables[1].bound_warnings(g, "check-strong"),
                result: to_value(&check),
            }
        }
        Command::KoszulCi { bound, generators } => {
            let fs = generators.resolve(g)?;
            let r = koszul_ci_verify(&fs, store, *bound, field).map_err(|e| InputError::Invalid(e.to_string()))?;
            Outcome {
                ok: r.all_squares_zero,
                failure: (!r.all_squares_zero)
                    .then(|| "a Koszul differential pair does not compose to zero".to_string()),
                warnings: Vec::new(),
                result: to_value(&r),
            }
        }
        Command::VerifyAll { bound } => {
            let r = verify_all(store, *bound, field, VerifyLimits::default());
            Outcome {
                ok: r.passed(),
                failure: r
                    .first_failure()
                    .map(|c| format!("{}: {}", c.name, c.witness.as_deref().unwrap_or(""))),
                warnings: r.warnings.clone(),
                result: to_value(&r),
            }
        }
    })
}
