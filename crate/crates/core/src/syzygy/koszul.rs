use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::betti::{BettiEntry, BettiError, BettiOracle, BettiSource, BettiTable, Disagreement, TorOracle};
use crate::complexes::ComplexError;
use crate::fibers::{format_monomial, Bound, Fiber, FiberStore};
use crate::lattice::Degree;
use crate::linalg::{RankField, SparseMatrix};

use super::{
    generation_check, strongly_indispensable_check, Binomial, GenerationCheck, StrongCheck, StrongStatus, SyzygyError,
};

pub const MAX_KOSZUL_GENERATORS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KoszulError {
    #[error(transparent)]
    Syzygy(#[from] SyzygyError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("at most {MAX_KOSZUL_GENERATORS} generators are supported, got {0}")]
    TooManyGenerators(usize),
}

impl From<BettiError> for KoszulError {
    fn from(e: BettiError) -> Self {
        match e {
            BettiError::Complex(c) => KoszulError::Complex(c),
        }
    }
}

/// The Koszul complex on `f_1..f_s` in one degree `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeExactness {
    pub degree: Degree,
    pub weight: i64,
    /// `dim K_t` in degree `c`, for `t = 0..=s`.
    pub piece_dims: Vec<usize>,
    /// `dim H_t`.
    pub homology: Vec<usize>,
    pub squares_to_zero: bool,
    /// `dim (R/I_L)_c`, to compare with `H_0 = (R/(f))_c`.
    pub quotient_dim: usize,
    /// `H_t = 0` for `t >= 1`.
    pub acyclic: bool,
}

/// A Koszul basis degree `b_J` with the strong-indispensability conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelDegree {
    /// Generator numbers in `J`, starting at 1.
    pub subset: Vec<usize>,
    pub level: usize,
    pub degree: Degree,
    pub weight: i64,
    /// `None` when `β_{|J|, b_J} = 0`.
    pub status: Option<StrongStatus>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KoszulReport {
    pub generators: Vec<Binomial>,
    pub degrees: Vec<Degree>,
    /// `comparable[i][j]`: `b_i <= b_j` for `i != j`.
    pub comparable: Vec<Vec<bool>>,
    pub incomparable: bool,
    pub bound: Bound,
    pub exactness: Vec<DegreeExactness>,
    /// Acyclic with `H_0 = (R/I_L)_c` in every scanned degree. Verified up
    /// to the bound only.
    pub exact_up_to_bound: bool,
    pub all_squares_zero: bool,
    pub generation: GenerationCheck,
    /// Bound used for the Betti comparison; raised to cover every `b_J`.
    pub table_bound: Bound,
    pub levels: Vec<LevelDegree>,
    pub shape_matches_tor: bool,
    /// First entry where `tor` (left) differs from the Koszul shape (right).
    pub shape_difference: Option<Disagreement>,
    pub strong: StrongCheck,
}

fn subset_degree(store: &FiberStore, degrees: &[Degree], mask: u32) -> Degree {
    let g = store.grading();
    (0..degrees.len())
        .filter(|j| mask >> j & 1 == 1)
        .fold(g.zero(), |acc, j| g.add(&acc, &degrees[j]))
}

struct Level {
    blocks: Vec<(u32, Arc<Fiber>)>,
    offsets: HashMap<u32, usize>,
    dim: usize,
}

fn level(store: &FiberStore, c: &Degree, kdeg: &[Degree], t: usize) -> Level {
    let g = store.grading();
    let mut blocks = Vec::new();
    let mut offsets = HashMap::new();
    let mut dim = 0;
    for mask in 0..kdeg.len() as u32 {
        if mask.count_ones() as usize != t {
            continue;
        }
        let fiber = store.fiber(&g.sub(c, &kdeg[mask as usize]));
        offsets.insert(mask, dim);
        dim += fiber.len();
        blocks.push((mask, fiber));
    }
    Level { blocks, offsets, dim }
}

fn add(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

// φ_t: K_t -> K_{t-1}, e_J x^m ↦ Σ_k (-1)^k f_{j_k} x^m e_{J \ j_k}, k from 0
fn differential(fs: &[Binomial], upper: &Level, lower: &Level) -> SparseMatrix {
    let mut d = SparseMatrix::new(lower.dim);
    for (mask, fiber) in &upper.blocks {
        for m in &fiber.monomials {
            let mut col = Vec::new();
            let mut pos = 0;
            for (j, f) in fs.iter().enumerate() {
                if mask >> j & 1 == 0 {
                    continue;
                }
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                pos += 1;
                let target = mask & !(1 << j);
                let off = lower.offsets[&target];
                let block = &lower.blocks.iter().find(|(k, _)| *k == target).expect("block exists").1;
                let at = |u: Vec<u32>| off + block.index_of(&u).expect("product stays in its fiber");
                col.push((at(add(m, &f.plus)), sign));
                col.push((at(add(m, &f.minus)), -sign));
            }
            d.push_col(col);
        }
    }
    d
}

fn exactness_at(
    store: &FiberStore,
    c: &Degree,
    fs: &[Binomial],
    kdeg: &[Degree],
    field: &dyn RankField,
) -> DegreeExactness {
    let s = fs.len();
    let levels: Vec<Level> = (0..=s).map(|t| level(store, c, kdeg, t)).collect();
    let diffs: Vec<SparseMatrix> = (1..=s).map(|t| differential(fs, &levels[t], &levels[t - 1])).collect();
    let squares_to_zero = diffs.windows(2).all(|w| w[0].mul(&w[1]).is_zero());
    // rank[t] = rank φ_t, with φ_0 = φ_{s+1} = 0
    let mut rank = vec![0usize; s + 2];
    for t in 1..=s {
        rank[t] = field.rank(&diffs[t - 1]);
    }
    let piece_dims: Vec<usize> = levels.iter().map(|l| l.dim).collect();
    let homology: Vec<usize> = (0..=s).map(|t| piece_dims[t] - rank[t] - rank[t + 1]).collect();
    let quotient_dim = usize::from(!store.fiber(c).is_empty());
    DegreeExactness {
        degree: c.clone(),
        weight: store.grading().weight(c),
        acyclic: homology[1..].iter().all(|&h| h == 0),
        piece_dims,
        homology,
        squares_to_zero,
        quotient_dim,
    }
}

/// Builds the Koszul complex on `fs` and checks it against every claim of
/// the complete-intersection criterion up to `bound`.
pub fn koszul_ci_verify(
    fs: &[Binomial],
    store: &FiberStore,
    bound: Bound,
    field: &dyn RankField,
) -> Result<KoszulReport, KoszulError> {
    let g = store.grading();
    let s = fs.len();
    if s > MAX_KOSZUL_GENERATORS {
        return Err(KoszulError::TooManyGenerators(s));
    }
    for f in fs {
        let checked = Binomial::new(f.plus.clone(), f.minus.clone(), g)?;
        if checked.degree != f.degree {
            return Err(SyzygyError::NotHomogeneous {
                term: format_monomial(&f.plus),
                degree: f.degree.to_string(),
            }
            .into());
        }
    }
    let degrees: Vec<Degree> = fs.iter().map(|f| f.degree.clone()).collect();
    let comparable: Vec<Vec<bool>> = (0..s)
        .map(|i| (0..s).map(|j| i != j && store.leq(&degrees[i], &degrees[j])).collect())
        .collect();
    let incomparable = comparable.iter().flatten().all(|&x| !x);
    let kdeg: Vec<Degree> = (0u32..1 << s)
        .map(|mask| subset_degree(store, &degrees, mask))
        .collect();

    let exactness: Vec<DegreeExactness> = store
        .degrees_up_to(bound)
        .par_iter()
        .map(|c| exactness_at(store, c, fs, &kdeg, field))
        .collect();
    let exact_up_to_bound = exactness.iter().all(|e| e.acyclic && e.homology[0] == e.quotient_dim);
    let all_squares_zero = exactness.iter().all(|e| e.squares_to_zero);
    let generation = generation_check(fs, store, bound);

    let top = g.weight(&kdeg[(1usize << s) - 1]);
    let table_bound = bound.max(Bound::integer(top));
    let tor = TorOracle.table(store, table_bound, field)?;
    let mut shape: BTreeMap<(usize, Degree), usize> = BTreeMap::new();
    for (mask, b) in kdeg.iter().enumerate() {
        *shape.entry((mask.count_ones() as usize, b.clone())).or_default() += 1;
    }
    let shape_table = BettiTable::assemble(
        shape
            .into_iter()
            .map(|((i, degree), value)| BettiEntry {
                i,
                weight: g.weight(&degree),
                degree,
                value,
            })
            .collect(),
        table_bound,
        BettiSource::KoszulShape,
    );
    let shape_difference = tor.first_difference(&shape_table);
    let strong = strongly_indispensable_check(&tor, store, field)?;

    let levels = (1u32..1 << s)
        .map(|mask| {
            let level = mask.count_ones() as usize;
            let degree = kdeg[mask as usize].clone();
            let status = strong
                .statuses
                .iter()
                .find(|st| st.i == level && st.degree == degree)
                .cloned();
            LevelDegree {
                subset: (0..s).filter(|j| mask >> j & 1 == 1).map(|j| j + 1).collect(),
                level,
                weight: g.weight(&degree),
                degree,
                holds: status.as_ref().is_some_and(|st| st.holds()),
                status,
            }
        })
        .collect();

    Ok(KoszulReport {
        generators: fs.to_vec(),
        degrees,
        comparable,
        incomparable,
        bound,
        exactness,
        exact_up_to_bound,
        all_squares_zero,
        generation,
        table_bound,
        levels,
        shape_matches_tor: shape_difference.is_none(),
        shape_difference,
        strong,
    })
}
