use num_rational::BigRational;
use num_traits::{One, Zero};

/// A subspace of `Q^len` kept in reduced echelon form, grown one vector at a time.
#[derive(Debug, Clone)]
pub struct RationalSpan {
    len: usize,
    // (pivot column, row with a 1 at the pivot and zeros at the other pivots)
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl RationalSpan {
    pub fn new(len: usize) -> Self {
        RationalSpan { len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    fn reduce(&self, v: &[i64]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let mut w: Vec<BigRational> = v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        for (pc, row) in &self.rows {
            if w[*pc].is_zero() {
                continue;
            }
            let c = w[*pc].clone();
            for (x, r) in w.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &c * r;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns true if the dimension grew.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        let mut w = self.reduce(v);
        let Some(pc) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = BigRational::one() / &w[pc];
        for x in w.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[pc].is_zero() {
                continue;
            }
            let c = row[pc].clone();
            for (x, r) in row.iter_mut().zip(&w) {
                if !r.is_zero() {
                    *x -= &c * r;
                }
            }
        }
        self.rows.push((pc, w));
        true
    }
}
