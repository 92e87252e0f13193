//! Multigraded Betti tables of `R/I_L`, computed by interchangeable oracles.
//!
//! * `gcd`: `β_{i,b} = dim ~H_{i-1}(Δ_gcd(b))`, evaluated on `Δ_b`, which has
//!   the same homology and lives on at most `n` vertices.
//! * `tor`: the degree-`b` strand of the Koszul complex on the variables
//!   tensored with `R/I_L`. Each `(R/I_L)_c` is one-dimensional when
//!   `C_c` is nonempty and zero otherwise, so the strand is a complex of
//!   signed subset incidences.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::complexes::{build_delta_b, reduced_homology, ComplexError, HomologyProfile, DEFAULT_FACE_LIMIT};
use crate::fibers::{Bound, FiberStore};
use crate::lattice::{Degree, GradingMap};
use crate::linalg::{RankField, SparseMatrix};
use crate::registry::{Named, Registry};
use crate::warning::Warning;

/// Offset between the homological index of `R/I_L` and reduced simplicial
/// homology: `β_{i,b} = dim ~H_{i - HOMOLOGY_SHIFT}`. Frozen after
/// calibration against the Tor oracle; see the `calibrate_shift` test.
pub const HOMOLOGY_SHIFT: isize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BettiSource {
    GcdComplex,
    TorOracle,
    /// Predicted shape of a Koszul resolution.
    KoszulShape,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiEntry {
    pub i: usize,
    pub degree: Degree,
    pub weight: i64,
    pub value: usize,
}

/// Nonzero Betti numbers found below a scan bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub entries: Vec<BettiEntry>,
    pub bound: Bound,
    pub source: BettiSource,
}

impl BettiTable {
    pub(crate) fn assemble(mut entries: Vec<BettiEntry>, bound: Bound, source: BettiSource) -> Self {
        entries.retain(|e| e.value > 0);
        entries.sort_by(|a, b| (a.i, a.weight, &a.degree).cmp(&(b.i, b.weight, &b.degree)));
        BettiTable { entries, bound, source }
    }

    pub fn get(&self, i: usize, b: &Degree) -> usize {
        self.entries
            .iter()
            .find(|e| e.i == i && &e.degree == b)
            .map_or(0, |e| e.value)
    }

    /// Degrees with `β_{i,b} != 0`, in table order.
    pub fn degrees_at(&self, i: usize) -> Vec<&Degree> {
        self.entries.iter().filter(|e| e.i == i).map(|e| &e.degree).collect()
    }

    pub fn max_index(&self) -> usize {
        self.entries.iter().map(|e| e.i).max().unwrap_or(0)
    }

    /// Total Betti number at each homological index.
    pub fn totals(&self) -> Vec<usize> {
        let mut t = vec![0; self.max_index() + 1];
        for e in &self.entries {
            t[e.i] += e.value;
        }
        t
    }

    /// Same entries, ignoring provenance.
    pub fn same_entries(&self, other: &BettiTable) -> bool {
        self.first_difference(other).is_none()
    }

    /// First `(i, b)` in table order where the two tables differ.
    pub fn first_difference(&self, other: &BettiTable) -> Option<Disagreement> {
        let key = |e: &BettiEntry| (e.i, e.weight, e.degree.clone());
        let mut keys: Vec<(usize, i64, Degree)> = self.entries.iter().chain(&other.entries).map(key).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|(i, _, degree)| {
            let (l, r) = (self.get(i, &degree), other.get(i, &degree));
            (l != r).then(|| Disagreement {
                i,
                degree: degree.to_string(),
                left: l,
                right: r,
            })
        })
    }

    /// Entries close enough to the bound that later entries could be missed.
    pub fn bound_warnings(&self, g: &GradingMap, context: &str) -> Vec<Warning> {
        let step = g.max_column_weight();
        self.entries
            .iter()
            .filter(|e| e.i >= 1 && e.weight + step > self.bound.floor())
            .map(|e| Warning::BoundTooSmall {
                context: context.to_string(),
                i: e.i,
                degree: e.degree.to_string(),
                weight: e.weight,
                bound: self.bound.to_string(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub i: usize,
    pub degree: String,
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BettiError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A way of computing the Betti table below a bound.
pub trait BettiOracle: Named + Send + Sync {
    fn source(&self) -> BettiSource;

    /// Betti numbers `β_{i,b}` for one degree, indexed by `i`.
    fn betti_at(&self, store: &FiberStore, b: &Degree, field: &dyn RankField) -> Result<Vec<usize>, BettiError>;

    fn table(&self, store: &FiberStore, bound: Bound, field: &dyn RankField) -> Result<BettiTable, BettiError> {
        let g = store.grading();
        if g.lattice_rank() == 0 {
            return Ok(free_module_table(g, bound, self.source()));
        }
        let degrees = store.degrees_up_to(bound);
        let per_degree: Vec<Result<Vec<BettiEntry>, BettiError>> = degrees
            .par_iter()
            .map(|b| {
                let betti = self.betti_at(store, b, field)?;
                Ok(betti
                    .into_iter()
                    .enumerate()
                    .map(|(i, value)| BettiEntry {
                        i,
                        degree: b.clone(),
                        weight: g.weight(b),
                        value,
                    })
                    .collect())
            })
            .collect();
        let mut entries = Vec::new();
        for r in per_degree {
            entries.extend(r?);
        }
        Ok(BettiTable::assemble(entries, bound, self.source()))
    }
}

fn free_module_table(g: &GradingMap, bound: Bound, source: BettiSource) -> BettiTable {
    let entry = BettiEntry {
        i: 0,
        degree: g.zero(),
        weight: 0,
        value: 1,
    };
    BettiTable::assemble(vec![entry], bound, source)
}

/// Betti numbers from the reduced homology of a complex with the
/// homology of `Δ_gcd(b)`.
pub fn betti_from_profile(h: &HomologyProfile) -> Vec<usize> {
    let mut out = Vec::new();
    let mut put = |k: isize, v: usize| {
        let i = (k + HOMOLOGY_SHIFT) as usize;
        if out.len() <= i {
            out.resize(i + 1, 0);
        }
        out[i] = v;
    };
    put(-1, h.h_minus_one);
    for (k, &v) in h.dims.iter().enumerate() {
        put(k as isize, v);
    }
    out
}

pub struct GcdOracle {
    pub face_limit: usize,
}

impl Default for GcdOracle {
    fn default() -> Self {
        GcdOracle {
            face_limit: DEFAULT_FACE_LIMIT,
        }
    }
}

impl Named for GcdOracle {
    fn name(&self) -> &'static str {
        "gcd"
    }
}

impl BettiOracle for GcdOracle {
    fn source(&self) -> BettiSource {
        BettiSource::GcdComplex
    }

    fn betti_at(&self, store: &FiberStore, b: &Degree, field: &dyn RankField) -> Result<Vec<usize>, BettiError> {
        let f = store.fiber(b);
        let h = reduced_homology(&build_delta_b(&f), field, self.face_limit)?;
        Ok(betti_from_profile(&h))
    }
}

pub struct TorOracle;

impl Named for TorOracle {
    fn name(&self) -> &'static str {
        "tor"
    }
}

impl BettiOracle for TorOracle {
    fn source(&self) -> BettiSource {
        BettiSource::TorOracle
    }

    fn betti_at(&self, store: &FiberStore, b: &Degree, field: &dyn RankField) -> Result<Vec<usize>, BettiError> {
        let cx = TorStrand::build(store, b);
        let h = cx.homology(field);
        debug_assert!(cx.squares_to_zero());
        Ok(h.betti)
    }
}

pub fn oracle_registry() -> Registry<dyn BettiOracle> {
    let mut reg: Registry<dyn BettiOracle> = Registry::new();
    reg.register(Arc::new(GcdOracle::default()))
        .register(Arc::new(TorOracle));
    reg
}

/// The degree-`b` strand of `K(x_1..x_n) ⊗ R/I_L`.
///
/// Basis of the `s`-th term: subsets `J` of size `s` (as bitmasks) with
/// `C_{b - deg x^J}` nonempty.
#[derive(Debug, Clone)]
pub struct TorStrand {
    pub terms: Vec<Vec<u64>>,
    /// `differentials[s]`: term `s` to term `s - 1` (`differentials[0]` is empty).
    pub differentials: Vec<SparseMatrix>,
}

/// Homology of a [`TorStrand`] with rank bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrandHomology {
    pub betti: Vec<usize>,
    pub term_dims: Vec<usize>,
    pub ranks: Vec<usize>,
}

impl StrandHomology {
    /// `Σ (-1)^i dim K_i == Σ (-1)^i dim H_i`.
    pub fn euler_balanced(&self) -> bool {
        let alt = |v: &[usize]| -> i64 {
            v.iter()
                .enumerate()
                .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
                .sum()
        };
        alt(&self.term_dims) == alt(&self.betti)
    }
}

impl TorStrand {
    pub fn build(store: &FiberStore, b: &Degree) -> Self {
        let g = store.grading();
        let n = g.n();
        assert!(n < 64, "at most 63 variables");
        let mut terms: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
        // nonempty subsets form a down-closed family; grow J by larger indices
        let mut stack: Vec<(u64, usize, Degree)> = Vec::new();
        if store.fiber_nonempty(b) {
            terms[0].push(0);
            stack.push((0, 0, b.clone()));
        }
        while let Some((mask, next, deg)) = stack.pop() {
            for j in next..n {
                let d = g.sub(&deg, &g.generator(j));
                if store.fiber_nonempty(&d) {
                    let m = mask | 1 << j;
                    terms[m.count_ones() as usize].push(m);
                    stack.push((m, j + 1, d));
                }
            }
        }
        while terms.len() > 1 && terms.last().is_some_and(|t| t.is_empty()) {
            terms.pop();
        }
        for t in terms.iter_mut() {
            t.sort_unstable();
        }
        let mut differentials = vec![SparseMatrix::new(0)];
        for s in 1..terms.len() {
            let index: HashMap<u64, usize> = terms[s - 1].iter().enumerate().map(|(i, &m)| (m, i)).collect();
            let mut d = SparseMatrix::new(terms[s - 1].len());
            for &mask in &terms[s] {
                let mut col = Vec::with_capacity(s);
                let mut pos = 0;
                for j in 0..n {
                    if mask >> j & 1 == 1 {
                        let row = index[&(mask & !(1 << j))];
                        col.push((row, if pos % 2 == 0 { 1 } else { -1 }));
                        pos += 1;
                    }
                }
                d.push_col(col);
            }
            differentials.push(d);
        }
        TorStrand { terms, differentials }
    }

    pub fn squares_to_zero(&self) -> bool {
        (2..self.differentials.len()).all(|s| self.differentials[s - 1].mul(&self.differentials[s]).is_zero())
    }

    pub fn homology(&self, field: &dyn RankField) -> StrandHomology {
        let len = self.terms.len();
        let mut ranks = vec![0; len + 1];
        for s in 1..len {
            ranks[s] = field.rank(&self.differentials[s]);
        }
        let term_dims: Vec<usize> = self.terms.iter().map(|t| t.len()).collect();
        let mut betti: Vec<usize> = (0..len).map(|s| term_dims[s] - ranks[s] - ranks[s + 1]).collect();
        while betti.last() == Some(&0) {
            betti.pop();
        }
        StrandHomology {
            betti,
            term_dims,
            ranks,
        }
    }
}

/// Minimality of each Betti degree within its homological index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifiedDegree {
    pub i: usize,
    pub degree: Degree,
    pub is_betti: bool,
    pub is_minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeClassification {
    pub entries: Vec<ClassifiedDegree>,
}

impl DegreeClassification {
    pub fn is_minimal(&self, i: usize, b: &Degree) -> bool {
        self.entries.iter().any(|e| e.i == i && &e.degree == b && e.is_minimal)
    }
}

pub fn classify_degrees(t: &BettiTable, store: &FiberStore) -> DegreeClassification {
    let entries = t
        .entries
        .iter()
        .map(|e| {
            let is_minimal = !t.degrees_at(e.i).into_iter().any(|other| store.lt(other, &e.degree));
            ClassifiedDegree {
                i: e.i,
                degree: e.degree.clone(),
                is_betti: true,
                is_minimal,
            }
        })
        .collect();
    DegreeClassification { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticePresentation;
    use crate::linalg::RationalField;

    fn koszul_example() -> FiberStore {
        let lat = LatticePresentation::new(3, vec![vec![1, -1, 0], vec![0, 1, -1]]).unwrap();
        FiberStore::new(GradingMap::from_lattice(&lat).unwrap())
    }

    fn twisted_cubic() -> FiberStore {
        FiberStore::new(GradingMap::from_columns(4, vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]).unwrap())
    }

    fn shape(t: &BettiTable) -> Vec<(usize, String, usize)> {
        t.entries.iter().map(|e| (e.i, e.degree.to_string(), e.value)).collect()
    }

    #[test]
    fn koszul_example_both_oracles() {
        let s = koszul_example();
        let bound = Bound::integer(4);
        for oracle in oracle_registry().iter() {
            let t = oracle.table(&s, bound, &RationalField).unwrap();
            assert_eq!(
                shape(&t),
                vec![(0, "0".into(), 1), (1, "1".into(), 2), (2, "2".into(), 1)],
                "oracle {}",
                oracle.name()
            );
        }
    }

    #[test]
    fn zero_lattice_is_free() {
        let s = FiberStore::new(GradingMap::from_columns(2, vec![vec![1, 0], vec![0, 1]]).unwrap());
        for oracle in oracle_registry().iter() {
            let t = oracle.table(&s, Bound::integer(5), &RationalField).unwrap();
            assert_eq!(shape(&t), vec![(0, "0,0".into(), 1)]);
        }
        // the Tor strand agrees without the short circuit
        let b = s.grading().parse_degree("2,1").unwrap();
        assert!(TorOracle.betti_at(&s, &b, &RationalField).unwrap().is_empty());
    }

    #[test]
    fn tor_strand_at_zero() {
        let s = twisted_cubic();
        let cx = TorStrand::build(&s, &s.grading().zero());
        assert_eq!(cx.homology(&RationalField).betti, vec![1]);
    }

    #[test]
    fn twisted_cubic_resolution_shape() {
        let s = twisted_cubic();
        // y = (1,1): generators weigh 3, bound 12 covers polynomial degree 4
        let t = TorOracle.table(&s, Bound::integer(12), &RationalField).unwrap();
        assert_eq!(t.totals(), vec![1, 3, 2]);
        assert!(t.entries.iter().all(|e| e.value == 1));
        assert_eq!(
            t.degrees_at(1).iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            vec!["2,4", "3,3", "4,2"]
        );
        assert_eq!(
            t.degrees_at(2).iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            vec!["4,5", "5,4"]
        );
        let g = GcdOracle::default()
            .table(&s, Bound::integer(12), &RationalField)
            .unwrap();
        assert!(g.same_entries(&t));
        assert!(t.bound_warnings(s.grading(), "betti").is_empty());
    }

    #[test]
    fn classification() {
        let s = koszul_example();
        let t = TorOracle.table(&s, Bound::integer(4), &RationalField).unwrap();
        let c = classify_degrees(&t, &s);
        assert!(c.entries.iter().all(|e| e.is_minimal && e.is_betti));
        // two comparable degrees at the same index
        let g = s.grading();
        let fake = BettiTable::assemble(
            vec![
                BettiEntry {
                    i: 1,
                    degree: g.parse_degree("1").unwrap(),
                    weight: 1,
                    value: 1,
                },
                BettiEntry {
                    i: 1,
                    degree: g.parse_degree("3").unwrap(),
                    weight: 3,
                    value: 1,
                },
            ],
            Bound::integer(4),
            BettiSource::TorOracle,
        );
        let c = classify_degrees(&fake, &s);
        assert_eq!(
            c.entries.iter().map(|e| e.is_minimal).collect::<Vec<_>>(),
            vec![true, false]
        );
    }

    #[test]
    fn first_difference_reports_lowest_entry() {
        let s = koszul_example();
        let t = TorOracle.table(&s, Bound::integer(4), &RationalField).unwrap();
        let mut u = t.clone();
        u.entries[1].value = 3;
        let d = t.first_difference(&u).unwrap();
        assert_eq!((d.i, d.degree.as_str(), d.left, d.right), (1, "1", 2, 3));
    }

    #[test]
    fn profile_shift() {
        let h = HomologyProfile {
            field: "Q".into(),
            h_minus_one: 0,
            dims: vec![2, 0, 1],
        };
        assert_eq!(betti_from_profile(&h), vec![0, 2, 0, 1]);
    }
}
