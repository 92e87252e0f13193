//! Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned
//! below. Run with `cargo test -p lsz-core --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{corpus_instances, random_instances, Instance};
use lsz_core::betti::{classify_degrees, GcdOracle, TorOracle, TorStrand};
use lsz_core::complexes::{
    boundary_matrix, build_delta_b, build_gcd_complex, components, reduced_homology, DEFAULT_FACE_LIMIT,
};
use lsz_core::corpus;
use lsz_core::fibers::format_monomial;
use lsz_core::linalg::RationalField;
use lsz_core::problem::{Command, ProblemSpec};
use lsz_core::syzygy::{
    brute_force_minimal_pairs, census, fiber_graph_components, indispensable_binomials, koszul_ci_verify,
    sample_minimal_generating_set, strongly_indispensable_check, Binomial,
};
use lsz_core::{run, BettiOracle, Bound, FiberStore, RunOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QUARTIC_BUDGET: Duration = Duration::from_secs(1);
const NERVE_BUDGET: Duration = Duration::from_secs(300);
const RANDOM_GRADINGS: usize = 200;
const RANDOM_CENSUS: usize = 50;
const RESAMPLES: usize = 50;
const MAX_ENTRY: i64 = 4;
const MAX_BOUND: i64 = 12;
const MAX_FIBER: usize = 20;
const INSTANCE_SEED: u64 = 20_241;
const CENSUS_SEED: u64 = 7_919;
const RESAMPLE_SEED: u64 = 31;

type Verdict = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn store(name: &str) -> FiberStore {
    corpus::lookup(name).unwrap().spec().store().unwrap()
}

fn sorted(mut v: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    v.sort();
    v
}

fn quartic_example() -> Verdict {
    let start = Instant::now();
    let s = store("rational-quartic");
    let b = s.grading().parse_degree("6,10").unwrap();
    let fiber = s.fiber(&b);
    let got: BTreeSet<String> = fiber.monomials.iter().map(|u| format_monomial(u)).collect();
    let want: BTreeSet<String> = ["bc^3", "ac^2d", "b^2d^2"].iter().map(|x| x.to_string()).collect();
    ensure(got == want, || format!("fiber {got:?}"))?;
    let gcd = build_gcd_complex(&fiber);
    ensure(
        sorted(gcd.facets.clone()) == vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        || format!("gcd facets {:?}", gcd.facets),
    )?;
    let delta = build_delta_b(&fiber);
    ensure(
        sorted(delta.facets.clone()) == vec![vec![0, 2, 3], vec![1, 2], vec![1, 3]],
        || format!("delta_b facets {:?}", delta.facets),
    )?;
    for (name, c) in [("gcd", &gcd), ("delta_b", &delta)] {
        let h = reduced_homology(c, &RationalField, DEFAULT_FACE_LIMIT).unwrap();
        ensure(
            h.h_minus_one == 0 && h.reduced(0) == 0 && h.reduced(1) == 1 && h.dims.len() == 2,
            || format!("{name} homology {h:?}"),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < QUARTIC_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("exact match in {elapsed:?}"))
}

fn nerve_equivalence(instances: &[Instance]) -> Verdict {
    let start = Instant::now();
    let mut degrees = 0;
    let mut largest = 0;
    for inst in instances {
        for b in inst.store.degrees_up_to(inst.bound) {
            let f = inst.store.fiber(&b);
            largest = largest.max(f.len());
            let small = reduced_homology(&build_delta_b(&f), &RationalField, usize::MAX).unwrap();
            let big = reduced_homology(&build_gcd_complex(&f), &RationalField, usize::MAX)
                .map_err(|e| format!("{} at {b}: {e}", inst.label))?;
            ensure(small.same_dims(&big), || {
                format!("{} at {b}: {small:?} vs {big:?}", inst.label)
            })?;
            degrees += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < NERVE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} instances, {degrees} degrees, largest fiber {largest}, {elapsed:?}",
        instances.len()
    ))
}

fn cross_oracle(instances: &[Instance]) -> Verdict {
    let mut entries = 0;
    let mut nontrivial = 0;
    for inst in instances {
        let a = GcdOracle::default()
            .table(&inst.store, inst.bound, &RationalField)
            .unwrap();
        let b = TorOracle.table(&inst.store, inst.bound, &RationalField).unwrap();
        if let Some(d) = a.first_difference(&b) {
            return Err(format!("{}: {d:?}", inst.label));
        }
        entries += a.entries.len();
        nontrivial += usize::from(a.max_index() >= 2);
    }
    Ok(format!(
        "{} instances ({nontrivial} with second syzygies), {entries} nonzero entries agree",
        instances.len()
    ))
}

fn total_degree_example() -> Verdict {
    let s = store("total-degree");
    let g = s.grading();
    let bound = Bound::integer(4);
    let t = TorOracle.table(&s, bound, &RationalField).unwrap();
    let (one, two) = (g.parse_degree("1").unwrap(), g.parse_degree("2").unwrap());
    ensure(t.get(1, &one) == 2, || format!("beta_(1,1) = {}", t.get(1, &one)))?;
    ensure(t.get(2, &two) == 1, || format!("beta_(2,2) = {}", t.get(2, &two)))?;
    ensure(classify_degrees(&t, &s).is_minimal(2, &two), || {
        "degree 2 is not a minimal 2-Betti degree".into()
    })?;
    let ind = indispensable_binomials(&s, bound);
    ensure(ind.binomials.is_empty(), || {
        format!("indispensable {:?}", ind.binomials)
    })?;
    let strong = strongly_indispensable_check(&t, &s, &RationalField).unwrap();
    let v = strong.first_violation.clone();
    ensure(
        !strong.verdict && v.as_ref().is_some_and(|v| v.i == 1 && v.degree == one),
        || format!("strong check {v:?}"),
    )?;
    Ok("beta_(1,1) = 2, beta_(2,2) = 1, no indispensable binomials, strong check fails at (1, 1)".into())
}

fn census_formula(instances: &[Instance]) -> Verdict {
    for inst in instances {
        let c = census(&inst.store, inst.bound);
        let brute = brute_force_minimal_pairs(&inst.store, inst.bound, usize::MAX, usize::MAX).unwrap();
        ensure(c.total == brute.total, || {
            format!("{}: formula {} vs brute force {}", inst.label, c.total, brute.total)
        })?;
    }
    let c = census(&store("total-degree"), Bound::integer(4));
    ensure(c.total == 6, || format!("total-degree census total {}", c.total))?;
    Ok(format!("{} instances agree; total-degree total = 6", instances.len()))
}

fn component_partitions(instances: &[Instance]) -> Verdict {
    let mut degrees = 0;
    for inst in instances {
        for b in inst.store.degrees_up_to(inst.bound) {
            let graph = fiber_graph_components(&b, &inst.store);
            let complex = components(&build_gcd_complex(&inst.store.fiber(&b)));
            ensure(graph == complex, || {
                format!("{} at {b}: {graph:?} vs {complex:?}", inst.label)
            })?;
            degrees += 1;
        }
    }
    Ok(format!("{degrees} degrees"))
}

fn indispensability() -> Verdict {
    let s = store("twisted-cubic");
    let bound = Bound::integer(12);
    let g = s.grading();
    let quadrics: Vec<Binomial> = [
        ([1, 0, 1, 0], [0, 2, 0, 0]),
        ([1, 0, 0, 1], [0, 1, 1, 0]),
        ([0, 1, 0, 1], [0, 0, 2, 0]),
    ]
    .iter()
    .map(|(p, m)| Binomial::new(p.to_vec(), m.to_vec(), g).unwrap().canonical())
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(RESAMPLE_SEED);
    let samples: Vec<Vec<Binomial>> = (0..RESAMPLES)
        .map(|_| sample_minimal_generating_set(&s, bound, &mut rng))
        .collect();
    // binomials common to every sampled minimal generating set
    let common: BTreeSet<Binomial> = samples[0]
        .iter()
        .filter(|f| samples.iter().all(|smp| smp.iter().any(|h| h.equivalent(f))))
        .cloned()
        .collect();
    ensure(common == quadrics.iter().cloned().collect(), || {
        format!("sampled intersection {common:?}")
    })?;
    let found: BTreeSet<Binomial> = indispensable_binomials(&s, bound).binomials.into_iter().collect();
    ensure(found == common, || format!("indispensable_binomials {found:?}"))?;
    Ok(format!(
        "{} quadrics, each in all {RESAMPLES} sampled generating sets",
        found.len()
    ))
}

fn koszul_ci() -> Verdict {
    let e = corpus::lookup("ci-incomparable").unwrap();
    let s = e.spec().store().unwrap();
    let fs = e.generators().unwrap().resolve(s.grading()).unwrap();
    let r = koszul_ci_verify(&fs, &s, e.default_bound(), &RationalField).unwrap();
    ensure(r.incomparable, || "ci-incomparable: degrees are comparable".into())?;
    ensure(r.exact_up_to_bound, || "ci-incomparable: not exact".into())?;
    ensure(r.shape_matches_tor, || {
        format!("ci-incomparable: shape {:?}", r.shape_difference)
    })?;
    ensure(r.strong.verdict, || {
        format!("ci-incomparable: strong {:?}", r.strong.first_violation)
    })?;
    let e = corpus::lookup("total-degree").unwrap();
    let s = e.spec().store().unwrap();
    let fs = e.generators().unwrap().resolve(s.grading()).unwrap();
    let r = koszul_ci_verify(&fs, &s, e.default_bound(), &RationalField).unwrap();
    ensure(!r.incomparable, || "total-degree: degrees reported incomparable".into())?;
    Ok("ci-incomparable: incomparable, exact, Koszul shape, strongly indispensable; total-degree: comparable".into())
}

fn determinism_and_differentials(instances: &[Instance]) -> Verdict {
    let mut reports = 0;
    for e in corpus::CORPUS {
        let b = e.default_bound();
        let mut commands = vec![
            Command::Check,
            Command::Betti {
                bound: b,
                oracle: "both".into(),
            },
            Command::Census { bound: b },
            Command::Indispensable { bound: b, resamples: 5 },
            Command::CheckStrong { bound: b },
            Command::VerifyAll { bound: b },
        ];
        if let Some(generators) = e.generators() {
            commands.push(Command::KoszulCi { bound: b, generators });
        }
        for command in commands {
            let spec = ProblemSpec {
                input: e.spec(),
                command,
                field: "q".into(),
                seed: 3,
                allow_warnings: false,
            };
            let first = run(&spec, RunOptions::default()).unwrap().to_json();
            let second = run(&spec, RunOptions::default()).unwrap().to_json();
            ensure(first == second, || {
                format!("{} {}: reports differ", e.name, spec.command.name())
            })?;
            reports += 1;
        }
    }
    let mut pairs = 0usize;
    for inst in instances {
        for b in inst.store.degrees_up_to(inst.bound) {
            let strand = TorStrand::build(&inst.store, &b);
            ensure(strand.squares_to_zero(), || {
                format!("{} at {b}: Koszul strand", inst.label)
            })?;
            pairs += strand.differentials.len().saturating_sub(2);
            let f = inst.store.fiber(&b);
            for c in [build_delta_b(&f), build_gcd_complex(&f)] {
                let levels = c.faces_by_size(usize::MAX).unwrap();
                let ds: Vec<_> = (1..levels.len())
                    .map(|s| boundary_matrix(&levels[s - 1], &levels[s]))
                    .collect();
                for w in ds.windows(2) {
                    ensure(w[0].mul(&w[1]).is_zero(), || {
                        format!("{} at {b}: simplicial boundary", inst.label)
                    })?;
                    pairs += 1;
                }
            }
        }
    }
    for name in ["total-degree", "ci-incomparable"] {
        let e = corpus::lookup(name).unwrap();
        let s = e.spec().store().unwrap();
        let fs = e.generators().unwrap().resolve(s.grading()).unwrap();
        let r = koszul_ci_verify(&fs, &s, e.default_bound(), &RationalField).unwrap();
        ensure(r.all_squares_zero, || format!("{name}: Koszul complex on generators"))?;
        pairs += r.exactness.len() * fs.len().saturating_sub(1);
    }
    Ok(format!(
        "{reports} reports byte-identical; {pairs} differential pairs compose to zero"
    ))
}

fn main() {
    let mut instances = corpus_instances();
    instances.extend(random_instances(
        INSTANCE_SEED,
        RANDOM_GRADINGS,
        MAX_ENTRY,
        MAX_BOUND,
        MAX_FIBER,
    ));
    let mut census_set = corpus_instances();
    census_set.extend(random_instances(CENSUS_SEED, RANDOM_CENSUS, 3, 8, 8));

    let criteria: Vec<Criterion> = vec![
        ("1 rational quartic at degree (6,10) (exact, < 1 s)", Box::new(quartic_example)),
        (
            "2 nerve equivalence (zero tolerance, < 5 min)",
            Box::new(|| nerve_equivalence(&instances)),
        ),
        (
            "3 cross-oracle Betti equality (zero tolerance)",
            Box::new(|| cross_oracle(&instances)),
        ),
        ("4 total-degree example (exact)", Box::new(total_degree_example)),
        (
            "5 census formula vs brute force (zero tolerance)",
            Box::new(|| census_formula(&census_set)),
        ),
        (
            "6 fiber graph components (zero tolerance)",
            Box::new(|| component_partitions(&instances)),
        ),
        ("7 indispensable binomials (zero tolerance)", Box::new(indispensability)),
        ("8 Koszul complete intersection (zero tolerance)", Box::new(koszul_ci)),
        (
            "9 determinism and d^2 = 0 (zero tolerance)",
            Box::new(|| determinism_and_differentials(&instances)),
        ),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(witness) => {
                failed += 1;
                println!("FAIL  {name}: {witness}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
