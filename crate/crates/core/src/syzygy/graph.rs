use crate::fibers::{Exponent, FiberStore};
use crate::lattice::Degree;
use crate::union_find::DisjointSets;

use super::nonzero_divisors;

/// Components of the graph on `C_b` whose edges are the binomials of degree
/// `b` lying in the ideal generated by binomials of strictly smaller degree.
///
/// That degree-`b` piece is spanned by `x^a (x^r - x^s)` with `a != 0` and
/// `r, s` in a common fiber, so each monomial `m` is joined to every
/// `a + w` with `a | m`, `a != 0` and `w ∈ C_{b - deg a}`. Returned as
/// sorted fiber positions, ordered by smallest member.
pub fn fiber_graph_components(b: &Degree, store: &FiberStore) -> Vec<Vec<usize>> {
    let g = store.grading();
    let fiber = store.fiber(b);
    let mut ds = DisjointSets::new(fiber.len());
    for (k, m) in fiber.monomials.iter().enumerate() {
        for a in nonzero_divisors(m) {
            let lower = store.fiber(&g.sub(b, &g.degree_of(&a)));
            for w in &lower.monomials {
                let shifted: Exponent = a.iter().zip(w).map(|(x, y)| x + y).collect();
                let idx = fiber.index_of(&shifted).expect("shifted monomial lies in the fiber");
                ds.union(k, idx);
            }
        }
    }
    ds.classes()
}
