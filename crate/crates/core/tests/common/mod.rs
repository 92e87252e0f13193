#![allow(dead_code)]

use lsz_core::corpus::CORPUS;
use lsz_core::{Bound, FiberStore, GradingMap, LatticePresentation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Instance {
    pub label: String,
    pub store: FiberStore,
    pub bound: Bound,
}

pub fn corpus_instances() -> Vec<Instance> {
    CORPUS
        .iter()
        .map(|e| Instance {
            label: e.name.to_string(),
            store: e.spec().store().expect("corpus entry is pointed"),
            bound: e.default_bound(),
        })
        .collect()
}

fn random_grading(rng: &mut ChaCha8Rng, max_entry: i64) -> Option<GradingMap> {
    let n = rng.gen_range(2..=5);
    if rng.gen_bool(0.5) {
        let d = rng.gen_range(1..=2);
        let columns: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(-1..=max_entry)).collect())
            .collect();
        GradingMap::from_columns(n, columns).ok()
    } else {
        let r = rng.gen_range(1..n);
        let basis: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        GradingMap::from_lattice(&LatticePresentation::new(n, basis).ok()?).ok()
    }
}

/// Random pointed gradings on at most five variables with generator entries
/// at most `max_entry` and every fiber below the bound of size at most
/// `max_fiber`. The bound is drawn from `4..=max_bound`, then lowered until
/// the fiber cap holds.
pub fn random_instances(seed: u64, count: usize, max_entry: i64, max_bound: i64, max_fiber: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let Some(g) = random_grading(&mut rng, max_entry) else {
            continue;
        };
        // keep the scan nontrivial: at least one generator step inside
        let step = g.max_column_weight();
        let mut b = rng.gen_range(4..=max_bound).max(step);
        if b > max_bound {
            continue;
        }
        let store = FiberStore::new(g);
        while b >= step
            && store
                .degrees_up_to(Bound::integer(b))
                .iter()
                .any(|d| store.fiber(d).len() > max_fiber)
        {
            b -= 1;
        }
        if b < step {
            continue;
        }
        out.push(Instance {
            label: format!("random #{} (seed {seed})", out.len()),
            store,
            bound: Bound::integer(b),
        });
    }
    out
}
