//! Simplicial complexes attached to a fiber and their reduced homology.
//!
//! `Δ_b` lives on the variables: its faces are the subsets of supports of
//! fiber monomials. `Δ_gcd(b)` lives on the monomials: a set of monomials is
//! a face when some variable divides all of them, so its facets are among
//! the sets `V_i = {x^u ∈ C_b : u_i > 0}`.
//!
//! A complex with no facets is void (no faces at all). The complex whose
//! only face is the empty set is stored with the single facet `[]`; its
//! reduced homology is concentrated in degree -1.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::fibers::Fiber;
use crate::linalg::{RankField, SparseMatrix};
use crate::registry::{Named, Registry};
use crate::union_find::DisjointSets;

pub const DEFAULT_FACE_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("complex has more than {limit} faces")]
    FaceLimitExceeded { limit: usize },
}

/// A facet-listed simplicial complex on integer vertex ids.
///
/// Vertices that lie in no facet are ghost vertices: they are recorded but
/// are not faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialComplex {
    pub vertices: Vec<usize>,
    pub facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn void() -> Self {
        SimplicialComplex {
            vertices: Vec::new(),
            facets: Vec::new(),
        }
    }

    /// Builds a complex from arbitrary generating faces, keeping the maximal ones.
    pub fn from_faces(vertices: Vec<usize>, faces: Vec<Vec<usize>>) -> Self {
        SimplicialComplex {
            vertices,
            facets: maximal_sets(faces),
        }
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn ghost_vertices(&self) -> Vec<usize> {
        let covered: HashSet<usize> = self.facets.iter().flatten().copied().collect();
        self.vertices.iter().copied().filter(|v| !covered.contains(v)).collect()
    }

    pub fn is_antichain(&self) -> bool {
        self.facets
            .iter()
            .enumerate()
            .all(|(i, a)| self.facets.iter().enumerate().all(|(j, b)| i == j || !is_subset(a, b)))
    }

    /// Upper bound on the number of faces, without enumerating them.
    pub fn face_count_bound(&self) -> u128 {
        self.facets
            .iter()
            .map(|f| 1u128.checked_shl(f.len() as u32).unwrap_or(u128::MAX))
            .fold(0u128, |a, b| a.saturating_add(b))
    }

    /// All faces grouped by cardinality (index 0 holds the empty face), each
    /// level sorted lexicographically.
    pub fn faces_by_size(&self, limit: usize) -> Result<Vec<Vec<Vec<usize>>>, ComplexError> {
        if self.is_void() {
            return Ok(Vec::new());
        }
        let top = self.facets.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut levels: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); top + 1];
        let mut total = 0usize;
        for facet in &self.facets {
            if facet.len() >= usize::BITS as usize - 1 {
                return Err(ComplexError::FaceLimitExceeded { limit });
            }
            for mask in 0usize..(1 << facet.len()) {
                let face: Vec<usize> = facet
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                let size = face.len();
                if levels[size].insert(face) {
                    total += 1;
                    if total > limit {
                        return Err(ComplexError::FaceLimitExceeded { limit });
                    }
                }
            }
        }
        Ok(levels
            .into_iter()
            .map(|set| {
                let mut v: Vec<Vec<usize>> = set.into_iter().collect();
                v.sort();
                v
            })
            .collect())
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut it = b.iter();
    a.iter().all(|x| it.by_ref().any(|y| y == x))
}

/// Deduplicates and keeps only inclusion-maximal sets; output is lex sorted.
pub fn maximal_sets(mut sets: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for s in sets.iter_mut() {
        s.sort_unstable();
        s.dedup();
    }
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| is_subset(&s, k)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// `Δ_b`: vertices are the variables occurring in some fiber monomial.
pub fn build_delta_b(f: &Fiber) -> SimplicialComplex {
    if f.is_empty() {
        return SimplicialComplex::void();
    }
    let supports: Vec<Vec<usize>> = f.monomials.iter().map(|u| support(u)).collect();
    let mut vertices: Vec<usize> = supports.iter().flatten().copied().collect();
    vertices.sort_unstable();
    vertices.dedup();
    SimplicialComplex::from_faces(vertices, supports)
}

/// `Δ_gcd(b)`: vertices are fiber positions, facets the maximal `V_i`.
pub fn build_gcd_complex(f: &Fiber) -> SimplicialComplex {
    if f.is_empty() {
        return SimplicialComplex::void();
    }
    let n = f.monomials[0].len();
    let covers: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            f.monomials
                .iter()
                .enumerate()
                .filter(|(_, u)| u[i] > 0)
                .map(|(k, _)| k)
                .collect::<Vec<_>>()
        })
        .filter(|v| !v.is_empty())
        .collect();
    let vertices = (0..f.len()).collect();
    if covers.is_empty() {
        // only the monomial 1: a ghost vertex and the empty face
        return SimplicialComplex {
            vertices,
            facets: vec![Vec::new()],
        };
    }
    SimplicialComplex::from_faces(vertices, covers)
}

pub fn support(u: &[u32]) -> Vec<usize> {
    u.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i).collect()
}

/// Reduced homology dimensions over a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    /// Field label (`Q`, `F_32003`).
    pub field: String,
    /// `dim ~H_{-1}`: 1 exactly for the complex whose only face is empty.
    pub h_minus_one: usize,
    /// `dim ~H_0, dim ~H_1, ...`, trailing zeros trimmed.
    pub dims: Vec<usize>,
}

impl HomologyProfile {
    /// `dim ~H_i` for `i >= -1`.
    pub fn reduced(&self, i: isize) -> usize {
        match i {
            -1 => self.h_minus_one,
            i if i >= 0 => self.dims.get(i as usize).copied().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn same_dims(&self, other: &HomologyProfile) -> bool {
        self.h_minus_one == other.h_minus_one && self.dims == other.dims
    }

    pub fn is_acyclic(&self) -> bool {
        self.h_minus_one == 0 && self.dims.is_empty()
    }
}

/// Boundary matrix from faces of size `s` to faces of size `s - 1`.
pub fn boundary_matrix(lower: &[Vec<usize>], upper: &[Vec<usize>]) -> SparseMatrix {
    let index: std::collections::HashMap<&[usize], usize> =
        lower.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let mut m = SparseMatrix::new(lower.len());
    let mut scratch = Vec::new();
    for face in upper {
        let mut col = Vec::with_capacity(face.len());
        for k in 0..face.len() {
            scratch.clear();
            scratch.extend(face.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &v)| v));
            let row = index[scratch.as_slice()];
            col.push((row, if k % 2 == 0 { 1 } else { -1 }));
        }
        m.push_col(col);
    }
    m
}

pub fn reduced_homology(
    c: &SimplicialComplex,
    field: &dyn RankField,
    face_limit: usize,
) -> Result<HomologyProfile, ComplexError> {
    let levels = c.faces_by_size(face_limit)?;
    let mut profile = HomologyProfile {
        field: field.label(),
        h_minus_one: 0,
        dims: Vec::new(),
    };
    if levels.is_empty() {
        return Ok(profile);
    }
    let top = levels.len() - 1;
    // rank[s] = rank of ∂_s : C_s -> C_{s-1}, s = size
    let mut rank = vec![0usize; top + 2];
    let mut cleared: Vec<bool> = Vec::new();
    for s in (1..=top).rev() {
        let m = boundary_matrix(&levels[s - 1], &levels[s]);
        let red = field.reduce(&m, &cleared);
        rank[s] = red.rank;
        cleared = vec![false; levels[s - 1].len()];
        for r in red.pivot_rows {
            cleared[r] = true;
        }
    }
    let mut h: Vec<usize> = (0..=top).map(|s| levels[s].len() - rank[s] - rank[s + 1]).collect();
    profile.h_minus_one = h.remove(0);
    while h.last() == Some(&0) {
        h.pop();
    }
    profile.dims = h;
    Ok(profile)
}

/// Connected components as vertex-id sets, ordered by smallest member.
pub fn components(c: &SimplicialComplex) -> Vec<Vec<usize>> {
    let mut ids = c.vertices.clone();
    ids.sort_unstable();
    let pos = |v: usize| ids.binary_search(&v).expect("facet vertex not in vertex list");
    let mut ds = DisjointSets::new(ids.len());
    for facet in &c.facets {
        for w in facet.windows(2) {
            ds.union(pos(w[0]), pos(w[1]));
        }
    }
    ds.classes()
        .into_iter()
        .map(|cls| cls.into_iter().map(|k| ids[k]).collect())
        .collect()
}

/// A rule turning a fiber into a simplicial complex.
pub trait ComplexBuilder: Named + Send + Sync {
    fn build(&self, f: &Fiber) -> SimplicialComplex;
}

pub struct GcdComplex;
pub struct DeltaComplex;

impl Named for GcdComplex {
    fn name(&self) -> &'static str {
        "gcd"
    }
}

impl ComplexBuilder for GcdComplex {
    fn build(&self, f: &Fiber) -> SimplicialComplex {
        build_gcd_complex(f)
    }
}

impl Named for DeltaComplex {
    fn name(&self) -> &'static str {
        "delta"
    }
}

impl ComplexBuilder for DeltaComplex {
    fn build(&self, f: &Fiber) -> SimplicialComplex {
        build_delta_b(f)
    }
}

pub fn complex_registry() -> Registry<dyn ComplexBuilder> {
    let mut reg: Registry<dyn ComplexBuilder> = Registry::new();
    reg.register(Arc::new(GcdComplex)).register(Arc::new(DeltaComplex));
    reg
}
