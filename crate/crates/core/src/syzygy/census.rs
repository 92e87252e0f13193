use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::complexes::{build_gcd_complex, components};
use crate::fibers::{Bound, Exponent, FiberStore};
use crate::lattice::Degree;
use crate::linalg::RationalSpan;
use crate::warning::Warning;

use super::{nonzero_divisors, shifted_difference, Binomial};

/// Component data of `Δ_gcd(b)` at one disconnected degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCensus {
    pub degree: Degree,
    pub weight: i64,
    /// `t_1(b), t_2(b), ...`, components ordered by their lex-min monomial.
    pub component_sizes: Vec<usize>,
    /// `Σ_{i != j} t_i t_j` over ordered pairs of components.
    pub cross_pairs: usize,
    /// One canonical binomial per unordered pair of components, joining
    /// their lex-min monomials.
    pub representatives: Vec<Binomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorCensus {
    pub bound: Bound,
    pub degrees: Vec<DegreeCensus>,
    /// `Σ_b Σ_{i != j} t_i(b) t_j(b)`.
    pub total: usize,
    /// `total / 2`: minimal binomials counted up to sign.
    pub total_up_to_sign: usize,
    pub warnings: Vec<Warning>,
}

impl GeneratorCensus {
    pub fn representatives(&self) -> Vec<Binomial> {
        self.degrees
            .iter()
            .flat_map(|d| d.representatives.iter().cloned())
            .collect()
    }
}

pub fn census(store: &FiberStore, bound: Bound) -> GeneratorCensus {
    let g = store.grading();
    let degrees = store.degrees_up_to(bound);
    let mut found: Vec<DegreeCensus> = degrees
        .par_iter()
        .filter(|b| !b.is_zero())
        .filter_map(|b| {
            let fiber = store.fiber(b);
            let comps = components(&build_gcd_complex(&fiber));
            if comps.len() < 2 {
                return None;
            }
            let sizes: Vec<usize> = comps.iter().map(|c| c.len()).collect();
            let sum: usize = sizes.iter().sum();
            let cross = sum * sum - sizes.iter().map(|t| t * t).sum::<usize>();
            let mut reps = Vec::new();
            for (i, ci) in comps.iter().enumerate() {
                for cj in &comps[i + 1..] {
                    let (u, v) = (&fiber.monomials[ci[0]], &fiber.monomials[cj[0]]);
                    let bin = Binomial::new(u.clone(), v.clone(), g).expect("fiber monomials share a degree");
                    reps.push(bin.canonical());
                }
            }
            Some(DegreeCensus {
                degree: (*b).clone(),
                weight: g.weight(b),
                component_sizes: sizes,
                cross_pairs: cross,
                representatives: reps,
            })
        })
        .collect();
    found.sort_by(|a, b| (a.weight, &a.degree).cmp(&(b.weight, &b.degree)));
    let total = found.iter().map(|d| d.cross_pairs).sum();
    let step = g.max_column_weight();
    let warnings = found
        .iter()
        .filter(|d| d.weight + step > bound.floor())
        .map(|d| Warning::BoundTooSmall {
            context: "census".to_string(),
            i: 1,
            degree: d.degree.to_string(),
            weight: d.weight,
            bound: bound.to_string(),
        })
        .collect();
    GeneratorCensus {
        bound,
        degrees: found,
        total,
        total_up_to_sign: total / 2,
        warnings,
    }
}

/// Rank-test count of minimal binomials, independent of any complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteForceCensus {
    /// Ordered pairs `(u, v)`, `u != v`, whose difference is minimal.
    pub total: usize,
    pub per_degree: Vec<(Degree, usize)>,
}

/// Counts ordered pairs `(u, v)` in each fiber with `e_u - e_v` outside the
/// span of `x^a (x^r - x^s)`, `a != 0`, i.e. outside the degree-`b` part of
/// the ideal generated by lower-degree binomials.
///
/// Returns `None` when a fiber exceeds `max_fiber` or the scan has more than
/// `max_degrees` degrees.
pub fn brute_force_minimal_pairs(
    store: &FiberStore,
    bound: Bound,
    max_fiber: usize,
    max_degrees: usize,
) -> Option<BruteForceCensus> {
    let g = store.grading();
    let degrees = store.degrees_up_to(bound);
    if degrees.len() > max_degrees || degrees.iter().any(|b| store.fiber(b).len() > max_fiber) {
        return None;
    }
    let mut per_degree = Vec::new();
    for b in degrees.iter().filter(|b| !b.is_zero()) {
        let fiber = store.fiber(b);
        let mut span = RationalSpan::new(fiber.len());
        // a star of pairs spans the same space as all pairs of a lower fiber
        let divisors: BTreeSet<Exponent> = fiber.monomials.iter().flat_map(|m| nonzero_divisors(m)).collect();
        'outer: for a in &divisors {
            let lower = store.fiber(&g.sub(b, &g.degree_of(a)));
            for s in lower.monomials.iter().skip(1) {
                span.insert(&shifted_difference(&fiber, a, &lower.monomials[0], s));
                if span.dim() + 1 == fiber.len() {
                    break 'outer;
                }
            }
        }
        let zeros = vec![0u32; g.n()];
        let mut count = 0;
        for u in &fiber.monomials {
            for v in &fiber.monomials {
                if u != v && !span.contains(&shifted_difference(&fiber, &zeros, u, v)) {
                    count += 1;
                }
            }
        }
        if count > 0 {
            per_degree.push((b.clone(), count));
        }
    }
    Some(BruteForceCensus {
        total: per_degree.iter().map(|(_, c)| c).sum(),
        per_degree,
    })
}
