//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Sized for pointedness certificates: a handful of rows, a few dozen columns.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<BigRational>, value: BigRational },
    Infeasible,
    Unbounded,
}

/// Minimises `c . x` subject to `a x = b`, `x >= 0`.
pub fn minimize(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|r| r.len() == n));

    // rows: [original | artificial | rhs]
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![BigRational::zero(); width];
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = BigRational::from_integer(1.into());
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut phase1 = vec![BigRational::zero(); n + m];
    for v in phase1.iter_mut().skip(n) {
        *v = BigRational::from_integer(1.into());
    }
    let all: Vec<bool> = vec![true; n + m];
    run(&mut t, &mut basis, &phase1, &all).expect("phase one is bounded");
    let infeasibility: BigRational = basis
        .iter()
        .zip(&t)
        .filter(|(&bj, _)| bj >= n)
        .map(|(_, row)| row[width - 1].clone())
        .sum();
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }

    // drive artificial variables out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= n {
            match (0..n).find(|&j| !t[i][j].is_zero()) {
                Some(j) => pivot(&mut t, &mut basis, i, j),
                None => {
                    t.remove(i);
                    basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut phase2 = vec![BigRational::zero(); n + m];
    phase2[..n].clone_from_slice(c);
    let allowed: Vec<bool> = (0..n + m).map(|j| j < n).collect();
    if run(&mut t, &mut basis, &phase2, &allowed).is_err() {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (row, &bj) in t.iter().zip(&basis) {
        if bj < n {
            x[bj] = row[width - 1].clone();
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { x, value }
}

#[derive(Debug)]
struct Unbounded;

fn run(
    t: &mut [Vec<BigRational>],
    basis: &mut [usize],
    cost: &[BigRational],
    allowed: &[bool],
) -> Result<(), Unbounded> {
    let ncols = cost.len();
    loop {
        let entering = (0..ncols).find(|&j| {
            if !allowed[j] || basis.contains(&j) {
                return false;
            }
            let mut r = cost[j].clone();
            for (row, &bj) in t.iter().zip(basis.iter()) {
                if !row[j].is_zero() {
                    r -= &cost[bj] * &row[j];
                }
            }
            r.is_negative()
        });
        let Some(j) = entering else { return Ok(()) };
        let rhs = t.first().map_or(0, |r| r.len() - 1);
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[j].is_positive() {
                continue;
            }
            let ratio = &row[rhs] / &row[j];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((i, _)) = leave else { return Err(Unbounded) };
        pivot(t, basis, i, j);
    }
}

fn pivot(t: &mut [Vec<BigRational>], basis: &mut [usize], pr: usize, pc: usize) {
    let p = t[pr][pc].clone();
    for x in t[pr].iter_mut() {
        *x /= &p;
    }
    let prow = t[pr].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (x, y) in row.iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
    basis[pr] = pc;
}
