use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Result of `U * M * V = D` for an `r x n` integer matrix `M`.
///
/// Only the column transform `V` is tracked; the row transform is not needed
/// to describe the cokernel of the row space.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Nonzero invariant factors `d_1 | d_2 | ... | d_rank`, all positive.
    pub invariant_factors: Vec<BigInt>,
    /// Unimodular `n x n` column transform, row-major.
    pub column_transform: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

pub fn smith_normal_form(rows: &[Vec<BigInt>], ncols: usize) -> SmithForm {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = m.len();
    let mut v: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| {
            (0..ncols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();

    let mut factors = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        let Some((pr, pc)) = min_abs_entry(&m, t) else {
            break;
        };
        m.swap(t, pr);
        swap_cols(&mut m, t, pc);
        swap_cols(&mut v, t, pc);

        loop {
            let mut dirty = false;
            // clear column t below the pivot
            for i in t + 1..nrows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..ncols {
                    let delta = &q * &m[t][j];
                    m[i][j] -= delta;
                }
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..ncols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                col_axpy(&mut m, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pr, pc) = min_abs_in_cross(&m, t);
                m.swap(t, pr);
                swap_cols(&mut m, t, pc);
                swap_cols(&mut v, t, pc);
                continue;
            }
            // divisibility: pivot must divide the remaining block
            let bad = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| !m[i][j].is_multiple_of(&m[t][t])));
            match bad {
                Some(i) => {
                    for j in t..ncols {
                        let add = m[i][j].clone();
                        m[t][j] += add;
                    }
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for j in t..ncols {
                m[t][j] = -m[t][j].clone();
            }
        }
        factors.push(m[t][t].clone());
        t += 1;
    }
    SmithForm {
        invariant_factors: factors,
        column_transform: v,
    }
}

fn min_abs_entry(m: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < m[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

// smallest nonzero entry in row t or column t (the pivot itself included)
fn min_abs_in_cross(m: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let mut best = (t, t);
    for i in t..m.len() {
        let x = &m[i][t];
        if !x.is_zero() && (m[best.0][best.1].is_zero() || x.abs() < m[best.0][best.1].abs()) {
            best = (i, t);
        }
    }
    for j in t..m[t].len() {
        let x = &m[t][j];
        if !x.is_zero() && (m[best.0][best.1].is_zero() || x.abs() < m[best.0][best.1].abs()) {
            best = (t, j);
        }
    }
    best
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

// col[dst] -= q * col[src]
fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let delta = q * &row[src];
            row[dst] -= delta;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let inner = b.len();
        let cols = b[0].len();
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn single_row() {
        let snf = smith_normal_form(&big(&[&[2, -2]]), 2);
        assert_eq!(snf.invariant_factors, vec![BigInt::from(2)]);
        // M V has the form (2, 0)
        let mv = mul(&big(&[&[2, -2]]), &snf.column_transform);
        assert_eq!(mv, big(&[&[2, 0]]));
    }

    #[test]
    fn factors_divide_and_transform_diagonalises_row_space() {
        let m = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let snf = smith_normal_form(&m, 3);
        let f: Vec<i64> = snf
            .invariant_factors
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect();
        assert_eq!(f, vec![2, 2, 156]);
        // every row of M V is supported on the diagonal positions' span
        let mv = mul(&m, &snf.column_transform);
        for row in &mv {
            for (j, x) in row.iter().enumerate() {
                assert!(x.is_multiple_of(&snf.invariant_factors[j]));
            }
        }
    }

    #[test]
    fn rank_deficient() {
        let m = big(&[&[1, -1, 0], &[2, -2, 0]]);
        assert_eq!(smith_normal_form(&m, 3).rank(), 1);
    }
}
