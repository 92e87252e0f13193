use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::fibers::{Bound, FiberStore};
use crate::lattice::Degree;
use crate::union_find::DisjointSets;

use super::Binomial;

/// A degree where the given binomials fall short of `I_L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenerationGap {
    pub degree: Degree,
    pub fiber_size: usize,
    /// Dimension of the span of the shifted binomials; full is `fiber_size - 1`.
    pub span_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenerationCheck {
    pub ok: bool,
    pub degrees_checked: usize,
    pub first_failure: Option<GenerationGap>,
}

// Graph on C_c with an edge for every x^a f of degree c. The span of the
// edge vectors e_u - e_v has dimension |C_c| - #components.
fn shifted_graph(store: &FiberStore, c: &Degree, bins: &[&Binomial]) -> DisjointSets {
    let g = store.grading();
    let fiber = store.fiber(c);
    let mut ds = DisjointSets::new(fiber.len());
    for f in bins {
        let lower = store.fiber(&g.sub(c, &f.degree));
        for a in &lower.monomials {
            let p: Vec<u32> = a.iter().zip(&f.plus).map(|(x, y)| x + y).collect();
            let m: Vec<u32> = a.iter().zip(&f.minus).map(|(x, y)| x + y).collect();
            let (Some(i), Some(j)) = (fiber.index_of(&p), fiber.index_of(&m)) else {
                unreachable!("shifted binomial leaves its fiber");
            };
            ds.union(i, j);
        }
    }
    ds
}

fn component_count(ds: &mut DisjointSets) -> usize {
    (0..ds.len()).filter(|&i| ds.find(i) == i).count()
}

/// Whether `bins` span every graded piece of `I_L` up to `bound`.
pub fn generation_check(bins: &[Binomial], store: &FiberStore, bound: Bound) -> GenerationCheck {
    let degrees = store.degrees_up_to(bound);
    let refs: Vec<&Binomial> = bins.iter().collect();
    let mut checked = 0;
    for c in &degrees {
        checked += 1;
        let mut ds = shifted_graph(store, c, &refs);
        let size = ds.len();
        let span_dim = size - component_count(&mut ds);
        if span_dim + 1 != size {
            return GenerationCheck {
                ok: false,
                degrees_checked: checked,
                first_failure: Some(GenerationGap {
                    degree: c.clone(),
                    fiber_size: size,
                    span_dim,
                }),
            };
        }
    }
    GenerationCheck {
        ok: true,
        degrees_checked: checked,
        first_failure: None,
    }
}

/// One minimal binomial generating set of `I_L` up to `bound`, chosen
/// greedily degree by degree with candidate pairs in random order.
pub fn sample_minimal_generating_set<R: Rng + ?Sized>(store: &FiberStore, bound: Bound, rng: &mut R) -> Vec<Binomial> {
    let g = store.grading();
    let mut chosen: Vec<Binomial> = Vec::new();
    // degrees_up_to is sorted by weight, a linear extension of the order
    for b in store.degrees_up_to(bound) {
        let fiber = store.fiber(&b);
        if fiber.len() < 2 {
            continue;
        }
        let below: Vec<&Binomial> = chosen.iter().filter(|f| store.leq(&f.degree, &b)).collect();
        let mut ds = shifted_graph(store, &b, &below);
        let mut pairs: Vec<(usize, usize)> = (0..fiber.len())
            .flat_map(|i| (i + 1..fiber.len()).map(move |j| (i, j)))
            .collect();
        pairs.shuffle(rng);
        for (i, j) in pairs {
            if ds.union(i, j) {
                let f = Binomial::new(fiber.monomials[i].clone(), fiber.monomials[j].clone(), g)
                    .expect("fiber monomials share a degree");
                chosen.push(f.canonical());
            }
        }
    }
    chosen
}
