//! Lattices `L ⊂ Z^n`, the grading `Z^n → Z^n/L` and degree arithmetic.
//!
//! The quotient is realised through the Smith normal form of the basis
//! matrix: after the column change `V`, the row space becomes
//! `d_1 Z ⊕ ... ⊕ d_r Z ⊕ 0`, so the image of `e_i` is the `i`-th row of `V`
//! read modulo the invariant factors (torsion) and verbatim on the last
//! `n - r` coordinates (free part).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::linalg::lp::{minimize, LpOutcome};
use crate::linalg::{smith_normal_form, RankField, RationalField, SparseMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("the number of variables must be positive")]
    NoVariables,
    #[error("row {row} has length {len}, expected {expected}")]
    RowLength { row: usize, len: usize, expected: usize },
    #[error("lattice basis is dependent: rank {rank} for {rows} rows")]
    DependentBasis { rank: usize, rows: usize },
    #[error("grading is not pointed; nonnegative kernel witness {witness:?}")]
    NotPointed {
        /// A nonzero `u ∈ N^n` of degree zero, i.e. an element of `L ∩ N^n`.
        witness: Vec<u64>,
    },
    #[error("integer overflow while building the grading")]
    Overflow,
    #[error("cannot parse degree `{0}`")]
    BadDegree(String),
}

/// A lattice given by independent basis rows in `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticePresentation {
    n: usize,
    basis: Vec<Vec<i64>>,
}

impl LatticePresentation {
    pub fn new(n: usize, basis: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::NoVariables);
        }
        check_rows(&basis, n)?;
        let rank = RationalField.rank(&SparseMatrix::from_dense(&transpose(&basis, n)));
        if rank < basis.len() {
            return Err(LatticeError::DependentBasis {
                rank,
                rows: basis.len(),
            });
        }
        Ok(LatticePresentation { n, basis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

fn check_rows(rows: &[Vec<i64>], expected: usize) -> Result<(), LatticeError> {
    for (row, r) in rows.iter().enumerate() {
        if r.len() != expected {
            return Err(LatticeError::RowLength {
                row,
                len: r.len(),
                expected,
            });
        }
    }
    Ok(())
}

fn transpose(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    (0..ncols).map(|j| rows.iter().map(|r| r[j]).collect()).collect()
}

/// An element of `Z^d × Π Z/m_j`. Serialises as its comma-separated
/// coordinates, free part first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
}

impl Degree {
    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(|&x| x == 0)
    }

    /// All coordinates, free part first.
    pub fn coords(&self) -> Vec<i64> {
        self.free.iter().chain(&self.torsion).copied().collect()
    }
}

impl Serialize for Degree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Outcome of the pointedness test on the free parts of the generator degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pointedness {
    /// Primitive integer `y` with `y . a_i > 0` for every column.
    Positive(Vec<i64>),
    /// Nonzero `u ∈ N^n` with `Σ u_i a_i = 0` (Gordan alternative).
    Gordan(Vec<u64>),
}

/// Decides whether the cone spanned by `columns` is pointed with no zero
/// generator.
///
/// First maximises `Σ λ_i` over `Σ λ_i a_i = 0, 0 <= λ <= 1`; a positive
/// optimum is a Gordan certificate. Otherwise the functional minimising
/// `Σ y . a_i` subject to `y . a_i >= 1` is returned, scaled to a primitive
/// integer vector, so gradings with a common generator weight get the
/// all-equal functional.
pub fn pointedness_certificate(columns: &[Vec<i64>]) -> Pointedness {
    let n = columns.len();
    let d = columns.first().map_or(0, |c| c.len());
    let q = |x: i64| BigRational::from_integer(x.into());
    let zero = BigRational::zero;

    // variables: λ_0..λ_n, s_0..s_n
    let mut a = Vec::new();
    let mut b = Vec::new();
    for k in 0..d {
        let mut row = vec![zero(); 2 * n];
        for i in 0..n {
            row[i] = q(columns[i][k]);
        }
        a.push(row);
        b.push(zero());
    }
    for i in 0..n {
        let mut row = vec![zero(); 2 * n];
        row[i] = q(1);
        row[n + i] = q(1);
        a.push(row);
        b.push(q(1));
    }
    let mut c = vec![q(-1); n];
    c.extend(std::iter::repeat_with(zero).take(n));
    match minimize(&c, &a, &b) {
        LpOutcome::Optimal { x, value } if value.is_negative() => {
            let witness = primitive(&x[..n]);
            return Pointedness::Gordan(witness.iter().map(|v| v.to_u64().unwrap()).collect());
        }
        LpOutcome::Optimal { .. } => {}
        other => unreachable!("bounded feasible program returned {other:?}"),
    }

    // variables: p_0..p_d, q_0..q_d, s_0..s_n with y = p - q
    let mut a = Vec::new();
    for col in columns {
        let mut row = vec![zero(); 2 * d + n];
        for k in 0..d {
            row[k] = q(col[k]);
            row[d + k] = q(-col[k]);
        }
        a.push(row);
    }
    for (i, row) in a.iter_mut().enumerate() {
        row[2 * d + i] = q(-1);
    }
    let b = vec![q(1); n];
    let mut c = vec![zero(); 2 * d + n];
    for k in 0..d {
        let s: i64 = columns.iter().map(|col| col[k]).sum();
        c[k] = q(s);
        c[d + k] = q(-s);
    }
    let LpOutcome::Optimal { x, .. } = minimize(&c, &a, &b) else {
        unreachable!("a positive functional exists by Gordan's alternative");
    };
    let y: Vec<BigRational> = (0..d).map(|k| &x[k] - &x[d + k]).collect();
    let y = primitive(&y);
    let y: Vec<i64> = y.iter().map(|v| v.to_i64().expect("functional fits in i64")).collect();
    debug_assert!(columns
        .iter()
        .all(|col| col.iter().zip(&y).map(|(a, b)| a * b).sum::<i64>() > 0));
    Pointedness::Positive(y)
}

// Scales a rational vector to the primitive integer vector on the same ray.
fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// The degree map `u ↦ Σ u_i a_i` onto `Z^d × Π Z/m_j`, with its positive
/// functional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradingMap {
    n: usize,
    free_rank: usize,
    torsion_moduli: Vec<i64>,
    free_columns: Vec<Vec<i64>>,
    torsion_columns: Vec<Vec<i64>>,
    functional: Vec<i64>,
    column_weights: Vec<i64>,
    lattice_rank: usize,
}

impl GradingMap {
    /// Builds the grading from the Smith normal form of the lattice basis.
    pub fn from_lattice(lat: &LatticePresentation) -> Result<Self, LatticeError> {
        smith_presentation(lat)
    }

    /// Builds the grading from explicit free-part generator degrees; the
    /// lattice is the kernel of the column map.
    pub fn from_columns(n: usize, columns: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::NoVariables);
        }
        if columns.len() != n {
            return Err(LatticeError::RowLength {
                row: columns.len(),
                len: columns.len(),
                expected: n,
            });
        }
        let d = columns[0].len();
        check_rows(&columns, d)?;
        let rank = RationalField.rank(&SparseMatrix::from_dense(&transpose(&columns, d)));
        Self::assemble(n, d, Vec::new(), columns, vec![Vec::new(); n], n - rank)
    }

    fn assemble(
        n: usize,
        free_rank: usize,
        torsion_moduli: Vec<i64>,
        free_columns: Vec<Vec<i64>>,
        torsion_columns: Vec<Vec<i64>>,
        lattice_rank: usize,
    ) -> Result<Self, LatticeError> {
        match pointedness_certificate(&free_columns) {
            Pointedness::Positive(functional) => {
                let column_weights = free_columns.iter().map(|col| dot(col, &functional)).collect();
                Ok(GradingMap {
                    n,
                    free_rank,
                    torsion_moduli,
                    free_columns,
                    torsion_columns,
                    functional,
                    column_weights,
                    lattice_rank,
                })
            }
            Pointedness::Gordan(u) => {
                let scale = torsion_moduli.iter().fold(1u64, |l, &m| l.lcm(&(m as u64)));
                Err(LatticeError::NotPointed {
                    witness: u.iter().map(|x| x * scale).collect(),
                })
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_moduli(&self) -> &[i64] {
        &self.torsion_moduli
    }

    pub fn free_column(&self, i: usize) -> &[i64] {
        &self.free_columns[i]
    }

    pub fn torsion_column(&self, i: usize) -> &[i64] {
        &self.torsion_columns[i]
    }

    /// Degree of the `i`-th variable.
    pub fn generator(&self, i: usize) -> Degree {
        Degree {
            free: self.free_columns[i].clone(),
            torsion: self.torsion_columns[i].clone(),
        }
    }

    /// The positive functional `y` (primitive integer vector).
    pub fn functional(&self) -> &[i64] {
        &self.functional
    }

    /// `y . a_i` for each variable, all positive.
    pub fn column_weights(&self) -> &[i64] {
        &self.column_weights
    }

    pub fn max_column_weight(&self) -> i64 {
        self.column_weights.iter().copied().max().unwrap_or(0)
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn zero(&self) -> Degree {
        Degree {
            free: vec![0; self.free_rank],
            torsion: vec![0; self.torsion_moduli.len()],
        }
    }

    pub fn degree_of(&self, u: &[u32]) -> Degree {
        assert_eq!(u.len(), self.n, "exponent vector length");
        let mut deg = self.zero();
        for (i, &e) in u.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let e = e as i64;
            for (x, a) in deg.free.iter_mut().zip(&self.free_columns[i]) {
                *x += e * a;
            }
            for (x, a) in deg.torsion.iter_mut().zip(&self.torsion_columns[i]) {
                *x += e * a;
            }
        }
        self.reduce(deg)
    }

    pub fn reduce(&self, mut deg: Degree) -> Degree {
        for (x, &m) in deg.torsion.iter_mut().zip(&self.torsion_moduli) {
            *x = x.rem_euclid(m);
        }
        deg
    }

    pub fn add(&self, a: &Degree, b: &Degree) -> Degree {
        self.reduce(Degree {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a.torsion.iter().zip(&b.torsion).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn sub(&self, a: &Degree, b: &Degree) -> Degree {
        self.reduce(Degree {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x - y).collect(),
            torsion: a.torsion.iter().zip(&b.torsion).map(|(x, y)| x - y).collect(),
        })
    }

    /// `y . (free part of b)`.
    pub fn weight(&self, b: &Degree) -> i64 {
        dot(&b.free, &self.functional)
    }

    /// Parses `"6,10"` style coordinates (free part, then torsion residues).
    pub fn parse_degree(&self, s: &str) -> Result<Degree, LatticeError> {
        let bad = || LatticeError::BadDegree(s.to_string());
        let coords: Vec<i64> = if s.trim().is_empty() {
            Vec::new()
        } else {
            s.split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        };
        if coords.len() != self.free_rank + self.torsion_moduli.len() {
            return Err(bad());
        }
        let (free, torsion) = coords.split_at(self.free_rank);
        Ok(self.reduce(Degree {
            free: free.to_vec(),
            torsion: torsion.to_vec(),
        }))
    }

    /// Coordinate legend for reports: `free[0]`, ..., `torsion[0] mod m`, ...
    pub fn legend(&self) -> Vec<String> {
        (0..self.free_rank)
            .map(|k| format!("free[{k}]"))
            .chain(
                self.torsion_moduli
                    .iter()
                    .enumerate()
                    .map(|(k, m)| format!("torsion[{k}] mod {m}")),
            )
            .collect()
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Realises `Z^n / L` through the Smith normal form of the basis matrix.
pub fn smith_presentation(lat: &LatticePresentation) -> Result<GradingMap, LatticeError> {
    let n = lat.n();
    let rows: Vec<Vec<BigInt>> = lat
        .basis()
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let snf = smith_normal_form(&rows, n);
    if snf.rank() < rows.len() {
        return Err(LatticeError::DependentBasis {
            rank: snf.rank(),
            rows: rows.len(),
        });
    }
    let r = snf.rank();
    let v = &snf.column_transform;
    let fits = |x: &BigInt| x.to_i64().ok_or(LatticeError::Overflow);

    let mut torsion_moduli = Vec::new();
    let mut torsion_coords = Vec::new();
    for (k, d) in snf.invariant_factors.iter().enumerate() {
        if !d.is_one() {
            torsion_moduli.push(fits(d)?);
            torsion_coords.push(k);
        }
    }
    let mut free_columns = vec![Vec::with_capacity(n - r); n];
    let mut torsion_columns = vec![Vec::with_capacity(torsion_coords.len()); n];
    for i in 0..n {
        for k in r..n {
            free_columns[i].push(fits(&v[i][k])?);
        }
        for (&k, &m) in torsion_coords.iter().zip(&torsion_moduli) {
            let x: BigInt = v[i][k].mod_floor(&BigInt::from(m));
            torsion_columns[i].push(fits(&x)?);
        }
    }
    // orient each free coordinate so its first nonzero generator entry is positive
    for k in 0..n - r {
        if let Some(first) = free_columns.iter().map(|c| c[k]).find(|&x| x != 0) {
            if first < 0 {
                for col in free_columns.iter_mut() {
                    col[k] = -col[k];
                }
            }
        }
    }
    let g = GradingMap::assemble(n, n - r, torsion_moduli, free_columns, torsion_columns, r)?;
    for row in lat.basis() {
        let (plus, minus) = split_signs(row);
        debug_assert_eq!(g.degree_of(&plus), g.degree_of(&minus));
    }
    Ok(g)
}

/// Splits `u` into `(u+, u-)` with `u = u+ - u-`.
pub fn split_signs(u: &[i64]) -> (Vec<u32>, Vec<u32>) {
    let plus = u.iter().map(|&x| x.max(0) as u32).collect();
    let minus = u.iter().map(|&x| (-x).max(0) as u32).collect();
    (plus, minus)
}
