//! Binomial generators and syzygy diagnostics.
//!
//! Every statement about a degree `b` is reduced to linear algebra on
//! `k^{C_b}`: the degree-`b` part of `I_L` is the sum-zero hyperplane, since
//! all monomials of one fiber are congruent modulo `I_L` and `I_L` contains
//! no monomial.

mod census;
mod generators;
mod graph;
mod indispensable;
mod koszul;

pub use census::{brute_force_minimal_pairs, census, BruteForceCensus, DegreeCensus, GeneratorCensus};
pub use generators::{generation_check, sample_minimal_generating_set, GenerationCheck, GenerationGap};
pub use graph::fiber_graph_components;
pub use indispensable::{
    indispensable_binomials, strongly_indispensable_check, IndispensableReport, StrongCheck, StrongStatus,
    ViolatedCondition, Violation,
};
pub use koszul::{koszul_ci_verify, DegreeExactness, KoszulError, KoszulReport, LevelDegree, MAX_KOSZUL_GENERATORS};

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::fibers::{format_monomial, Exponent};
use crate::lattice::{Degree, GradingMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyzygyError {
    #[error("exponent vector has length {len}, expected {expected}")]
    BadLength { len: usize, expected: usize },
    #[error("term {term} does not have degree {degree}")]
    NotHomogeneous { term: String, degree: String },
    #[error("polynomial is not in the lattice ideal: {reason}")]
    NotInIdeal { reason: String },
}

/// A binomial `x^plus - x^minus` with both terms of the same degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binomial {
    pub plus: Exponent,
    pub minus: Exponent,
    pub degree: Degree,
}

impl Binomial {
    pub fn new(plus: Exponent, minus: Exponent, g: &GradingMap) -> Result<Self, SyzygyError> {
        for u in [&plus, &minus] {
            if u.len() != g.n() {
                return Err(SyzygyError::BadLength {
                    len: u.len(),
                    expected: g.n(),
                });
            }
        }
        if plus == minus {
            return Err(SyzygyError::NotInIdeal {
                reason: "the two terms cancel".to_string(),
            });
        }
        let (dp, dm) = (g.degree_of(&plus), g.degree_of(&minus));
        if dp != dm {
            return Err(SyzygyError::NotInIdeal {
                reason: format!(
                    "{} has degree {dp} but {} has degree {dm}",
                    format_monomial(&plus),
                    format_monomial(&minus)
                ),
            });
        }
        Ok(Binomial {
            plus,
            minus,
            degree: dp,
        })
    }

    /// Sign-normalised form: the lex-greater monomial carries coefficient +1.
    pub fn canonical(mut self) -> Self {
        if self.plus < self.minus {
            std::mem::swap(&mut self.plus, &mut self.minus);
        }
        self
    }

    pub fn is_reduced(&self) -> bool {
        self.plus.iter().zip(&self.minus).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Equal up to a nonzero scalar (for binomials, up to sign).
    pub fn equivalent(&self, other: &Binomial) -> bool {
        self.clone().canonical() == other.clone().canonical()
    }
}

impl std::fmt::Display for Binomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} - {}", format_monomial(&self.plus), format_monomial(&self.minus))
    }
}

impl Serialize for Binomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Binomial", 4)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("plus", &self.plus)?;
        st.serialize_field("minus", &self.minus)?;
        st.serialize_field("degree", &self.degree)?;
        st.end()
    }
}

/// Whether the homogeneous polynomial `terms` (monomial, coefficient) of
/// degree `b` is a simple 0-syzygy of `R/I_L`.
///
/// Inside the sum-zero hyperplane every two-element support carries a
/// nonzero vector (`e_u - e_v`), so a vector is support-minimal exactly when
/// its support has two elements.
pub fn is_simple_0syzygy(b: &Degree, terms: &[(Exponent, Rational64)], g: &GradingMap) -> Result<bool, SyzygyError> {
    let mut coeffs: BTreeMap<&Exponent, Rational64> = BTreeMap::new();
    for (u, c) in terms {
        if u.len() != g.n() {
            return Err(SyzygyError::BadLength {
                len: u.len(),
                expected: g.n(),
            });
        }
        if &g.degree_of(u) != b {
            return Err(SyzygyError::NotHomogeneous {
                term: format_monomial(u),
                degree: b.to_string(),
            });
        }
        *coeffs.entry(u).or_insert_with(Rational64::zero) += *c;
    }
    coeffs.retain(|_, c| !c.is_zero());
    let sum: Rational64 = coeffs.values().copied().sum();
    if !sum.is_zero() {
        return Err(SyzygyError::NotInIdeal {
            reason: format!("coefficients sum to {sum}"),
        });
    }
    Ok(coeffs.len() == 2)
}

// e_{a+plus} - e_{a+minus} for a binomial shifted by a, as dense fiber coordinates
pub(crate) fn shifted_difference(fiber: &crate::fibers::Fiber, shift: &[u32], plus: &[u32], minus: &[u32]) -> Vec<i64> {
    let mut v = vec![0i64; fiber.len()];
    let p: Exponent = shift.iter().zip(plus).map(|(a, b)| a + b).collect();
    let m: Exponent = shift.iter().zip(minus).map(|(a, b)| a + b).collect();
    v[fiber.index_of(&p).expect("shifted term lies in the fiber")] += 1;
    v[fiber.index_of(&m).expect("shifted term lies in the fiber")] -= 1;
    v
}

/// All nonzero exponent vectors `a <= m` componentwise.
pub(crate) fn nonzero_divisors(m: &[u32]) -> Vec<Exponent> {
    let mut out = vec![vec![0u32; m.len()]];
    for (i, &e) in m.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for a in &out {
            for k in 0..=e {
                let mut b = a.clone();
                b[i] = k;
                next.push(b);
            }
        }
        out = next;
    }
    out.retain(|a| a.iter().any(|&x| x > 0));
    out
}
