//! Exact rank of sparse integer matrices over Q or a prime field.
//!
//! Both fields use the same column reduction: each column is reduced against
//! earlier columns until its lowest nonzero row is not yet claimed as a
//! pivot. The set of claimed rows is returned so that callers computing
//! homology can skip ("clear") columns known to reduce to zero.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::registry::{Named, Registry};
use std::sync::Arc;

/// Column-major sparse matrix with small integer entries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize) -> Self {
        SparseMatrix {
            nrows,
            cols: Vec::new(),
        }
    }

    /// Appends a column; entries may be unsorted and may repeat a row (summed).
    pub fn push_col(&mut self, entries: impl IntoIterator<Item = (usize, i64)>) {
        let mut col: Vec<(usize, i64)> = entries.into_iter().collect();
        col.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(col.len());
        for (r, x) in col {
            assert!(r < self.nrows, "row {r} out of range {}", self.nrows);
            match merged.last_mut() {
                Some(last) if last.0 == r => last.1 += x,
                _ => merged.push((r, x)),
            }
        }
        merged.retain(|e| e.1 != 0);
        self.cols.push(merged);
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::new(nrows);
        for j in 0..ncols {
            m.push_col((0..nrows).map(|i| (i, rows[i][j])));
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &[(usize, i64)] {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// `self * other`, exact over Z (panics on i64 overflow).
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), other.nrows(), "dimension mismatch");
        let mut out = SparseMatrix::new(self.nrows);
        for col in &other.cols {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for &(k, b) in col {
                for &(i, a) in &self.cols[k] {
                    let e = acc.entry(i).or_insert(0);
                    *e = e.checked_add(a.checked_mul(b).expect("overflow")).expect("overflow");
                }
            }
            out.push_col(acc);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }
}

/// Outcome of a column reduction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Reduction {
    pub rank: usize,
    /// Lowest rows of the surviving columns, in column order.
    pub pivot_rows: Vec<usize>,
}

/// A coefficient field in which exact ranks can be computed.
pub trait RankField: Named + Send + Sync {
    /// Column-reduces `m`, skipping columns `j` with `skip[j]` set.
    fn reduce(&self, m: &SparseMatrix, skip: &[bool]) -> Reduction;

    fn rank(&self, m: &SparseMatrix) -> usize {
        self.reduce(m, &[]).rank
    }

    /// Human readable field label for reports (`Q`, `F_32003`).
    fn label(&self) -> String;
}

pub const DEFAULT_PRIME: u64 = 32003;

/// Rationals, via fraction-free elimination with content removal. Entries
/// start in `i128` and the whole reduction is redone with big integers if
/// any intermediate overflows.
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalField;

/// Integers modulo a prime `p < 2^31` (primality is the caller's responsibility).
#[derive(Debug, Clone, Copy)]
pub struct PrimeField {
    pub p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl Named for RationalField {
    fn name(&self) -> &'static str {
        "q"
    }
}

impl Named for PrimeField {
    fn name(&self) -> &'static str {
        "fp"
    }
}

pub fn field_registry() -> Registry<dyn RankField> {
    let mut reg: Registry<dyn RankField> = Registry::new();
    reg.register(Arc::new(RationalField))
        .register(Arc::new(PrimeField::default()));
    reg
}

impl RankField for RationalField {
    fn reduce(&self, m: &SparseMatrix, skip: &[bool]) -> Reduction {
        reduce_small(m, skip).unwrap_or_else(|| reduce_big(m, skip))
    }

    fn label(&self) -> String {
        "Q".to_string()
    }
}

impl RankField for PrimeField {
    fn reduce(&self, m: &SparseMatrix, skip: &[bool]) -> Reduction {
        let p = self.p;
        let to_fp = |x: i64| -> u64 { x.rem_euclid(p as i64) as u64 };
        let mut reduced: Vec<Vec<(usize, u64)>> = Vec::new();
        let mut owner: HashMap<usize, usize> = HashMap::new();
        let mut out = Reduction::default();
        for j in 0..m.ncols() {
            if skip.get(j).copied().unwrap_or(false) {
                continue;
            }
            let mut col: Vec<(usize, u64)> = m
                .col(j)
                .iter()
                .map(|&(r, x)| (r, to_fp(x)))
                .filter(|e| e.1 != 0)
                .collect();
            while let Some(&(low, a)) = col.last() {
                let Some(&k) = owner.get(&low) else { break };
                let piv = &reduced[k];
                // pivots are normalised to 1
                col = merge(&col, piv, |x, y| (x + (p - a) * y % p) % p);
            }
            if let Some(&(low, a)) = col.last() {
                let inv = mod_inverse(a, p);
                for e in col.iter_mut() {
                    e.1 = e.1 * inv % p;
                }
                owner.insert(low, reduced.len());
                reduced.push(col);
                out.rank += 1;
                out.pivot_rows.push(low);
            }
        }
        out
    }

    fn label(&self) -> String {
        format!("F_{}", self.p)
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

// Sparse `f(x, y)` over the union of supports, dropping zeros.
fn merge<T: Copy + Default + PartialEq>(
    a: &[(usize, T)],
    b: &[(usize, T)],
    mut f: impl FnMut(T, T) -> T,
) -> Vec<(usize, T)> {
    let zero = T::default();
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (row, v) = match (a.get(i), b.get(j)) {
            (Some(&(ra, xa)), Some(&(rb, _))) if ra < rb => {
                i += 1;
                (ra, f(xa, zero))
            }
            (Some(&(ra, _)), Some(&(rb, xb))) if rb < ra => {
                j += 1;
                (rb, f(zero, xb))
            }
            (Some(&(ra, xa)), Some(&(_, xb))) => {
                i += 1;
                j += 1;
                (ra, f(xa, xb))
            }
            (Some(&(ra, xa)), None) => {
                i += 1;
                (ra, f(xa, zero))
            }
            (None, Some(&(rb, xb))) => {
                j += 1;
                (rb, f(zero, xb))
            }
            (None, None) => unreachable!(),
        };
        if v != zero {
            out.push((row, v));
        }
    }
    out
}

fn reduce_small(m: &SparseMatrix, skip: &[bool]) -> Option<Reduction> {
    let mut reduced: Vec<Vec<(usize, i128)>> = Vec::new();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut out = Reduction::default();
    for j in 0..m.ncols() {
        if skip.get(j).copied().unwrap_or(false) {
            continue;
        }
        let mut col: Vec<(usize, i128)> = m.col(j).iter().map(|&(r, x)| (r, x as i128)).collect();
        while let Some(&(low, a)) = col.last() {
            let Some(&k) = owner.get(&low) else { break };
            let piv = &reduced[k];
            let p = piv.last().unwrap().1;
            let g = a.gcd(&p);
            let (ca, cp) = (p / g, a / g);
            let mut overflow = false;
            col = merge(&col, piv, |x, y| {
                match x
                    .checked_mul(ca)
                    .and_then(|u| y.checked_mul(cp).and_then(|v| u.checked_sub(v)))
                {
                    Some(z) => z,
                    None => {
                        overflow = true;
                        0
                    }
                }
            });
            if overflow {
                return None;
            }
            make_primitive_small(&mut col);
        }
        if let Some(&(low, _)) = col.last() {
            owner.insert(low, reduced.len());
            reduced.push(col);
            out.rank += 1;
            out.pivot_rows.push(low);
        }
    }
    Some(out)
}

fn make_primitive_small(col: &mut [(usize, i128)]) {
    let g = col.iter().fold(0i128, |g, e| g.gcd(&e.1));
    if g > 1 {
        for e in col.iter_mut() {
            e.1 /= g;
        }
    }
}

fn reduce_big(m: &SparseMatrix, skip: &[bool]) -> Reduction {
    let mut reduced: Vec<Vec<(usize, BigInt)>> = Vec::new();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut out = Reduction::default();
    for j in 0..m.ncols() {
        if skip.get(j).copied().unwrap_or(false) {
            continue;
        }
        let mut col: Vec<(usize, BigInt)> = m.col(j).iter().map(|&(r, x)| (r, BigInt::from(x))).collect();
        while let Some((low, a)) = col.last().cloned() {
            let Some(&k) = owner.get(&low) else { break };
            let piv = &reduced[k];
            let p = piv.last().unwrap().1.clone();
            let g = a.gcd(&p);
            let (ca, cp) = (&p / &g, &a / &g);
            col = merge_big(&col, piv, &ca, &cp);
            let content = col.iter().fold(BigInt::zero(), |g, e| g.gcd(&e.1));
            if content.abs() > BigInt::from(1) {
                for e in col.iter_mut() {
                    e.1 = &e.1 / &content;
                }
            }
        }
        if let Some(&(low, _)) = col.last() {
            owner.insert(low, reduced.len());
            reduced.push(col);
            out.rank += 1;
            out.pivot_rows.push(low);
        }
    }
    out
}

// ca * a - cp * b
fn merge_big(a: &[(usize, BigInt)], b: &[(usize, BigInt)], ca: &BigInt, cp: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        let (row, v) = if take_a {
            i += 1;
            (a[i - 1].0, ca * &a[i - 1].1)
        } else if take_b {
            j += 1;
            (b[j - 1].0, -(cp * &b[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (a[i - 1].0, ca * &a[i - 1].1 - cp * &b[j - 1].1)
        };
        if !v.is_zero() {
            out.push((row, v));
        }
    }
    out
}

/// Dense rank over Q of a small integer matrix by Bareiss elimination.
///
/// Kept separate from the sparse reduction so tests can check one against
/// the other.
pub fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..nrows {
            for j in c + 1..ncols {
                let v = (&a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ranks_of_small_matrices() {
        let m = SparseMatrix::from_dense(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(RationalField.rank(&m), 2);
        assert_eq!(PrimeField::default().rank(&m), 2);
        // rank drops mod 2 only
        let m = SparseMatrix::from_dense(&[vec![2, 0], vec![0, 1]]);
        assert_eq!(RationalField.rank(&m), 2);
        assert_eq!(PrimeField { p: 2 }.rank(&m), 1);
        assert_eq!(RationalField.rank(&SparseMatrix::new(3)), 0);
    }

    #[test]
    fn big_path_matches_small_path() {
        let m = SparseMatrix::from_dense(&[
            vec![i64::MAX / 3, 7, 1],
            vec![5, i64::MAX / 5, 1],
            vec![1, 1, i64::MAX / 7],
        ]);
        assert_eq!(reduce_big(&m, &[]).rank, 3);
        assert_eq!(RationalField.rank(&m), 3);
    }

    #[test]
    fn skipped_columns_do_not_count() {
        let m = SparseMatrix::from_dense(&[vec![1, 0], vec![0, 1]]);
        let r = RationalField.reduce(&m, &[true, false]);
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivot_rows, vec![1]);
    }

    proptest! {
        #[test]
        fn sparse_rank_matches_bareiss(
            rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 5), 1..7)
        ) {
            let m = SparseMatrix::from_dense(&rows);
            let expected = bareiss_rank(&rows);
            prop_assert_eq!(RationalField.rank(&m), expected);
            prop_assert_eq!(reduce_big(&m, &[]).rank, expected);
            // a large prime cannot lose rank on entries this small
            prop_assert_eq!(PrimeField { p: 1_000_003 }.rank(&m), expected);
        }
    }
}
