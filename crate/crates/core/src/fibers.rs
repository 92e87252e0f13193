//! Fibers `C_b`: all monomials of a given degree.
//!
//! Enumeration is a depth-first search over the exponents in variable order,
//! pruned by the positive functional: `y . u` is constant on a fiber, so the
//! remaining weight bounds every later exponent.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::lattice::{Degree, GradingMap};

/// Exponent vector of a monomial.
pub type Exponent = Vec<u32>;

/// The complete set of monomials of one degree, lex ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub degree: Degree,
    pub monomials: Vec<Exponent>,
}

impl Fiber {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Lex-minimal monomial.
    pub fn canonical(&self) -> Option<&Exponent> {
        self.monomials.first()
    }

    pub fn index_of(&self, u: &[u32]) -> Option<usize> {
        self.monomials.binary_search_by(|m| m.as_slice().cmp(u)).ok()
    }
}

/// A nonnegative scan bound in units of the positive functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bound(pub Rational64);

impl Bound {
    pub fn integer(b: i64) -> Self {
        Bound(Rational64::from_integer(b))
    }

    /// Largest integer weight within the bound.
    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid bound `{0}`: expected a nonnegative integer or fraction p/q")]
pub struct BadBound(pub String);

impl FromStr for Bound {
    type Err = BadBound;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r: Rational64 = s.trim().parse().map_err(|_| BadBound(s.to_string()))?;
        if r < Rational64::from_integer(0) {
            return Err(BadBound(s.to_string()));
        }
        Ok(Bound(r))
    }
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A grading together with a shared memo of computed fibers.
///
/// Cached fibers are complete enumerations, so concurrent inserts of the
/// same degree always carry equal values.
#[derive(Debug)]
pub struct FiberStore {
    grading: GradingMap,
    cache: RwLock<HashMap<Degree, Arc<Fiber>>>,
}

impl FiberStore {
    pub fn new(grading: GradingMap) -> Self {
        FiberStore {
            grading,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn grading(&self) -> &GradingMap {
        &self.grading
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    /// The fiber of `b`, memoised.
    pub fn fiber(&self, b: &Degree) -> Arc<Fiber> {
        if let Some(f) = self.cache.read().unwrap().get(b) {
            return f.clone();
        }
        let f = Arc::new(enumerate_fiber(b, &self.grading));
        self.cache.write().unwrap().insert(b.clone(), f.clone());
        f
    }

    pub fn fiber_nonempty(&self, b: &Degree) -> bool {
        if let Some(f) = self.cache.read().unwrap().get(b) {
            return !f.is_empty();
        }
        fiber_nonempty(b, &self.grading)
    }

    /// `c <= b` in the semigroup order: `b - c` is the degree of a monomial.
    pub fn leq(&self, c: &Degree, b: &Degree) -> bool {
        self.fiber_nonempty(&self.grading.sub(b, c))
    }

    /// Strict order `c < b`.
    pub fn lt(&self, c: &Degree, b: &Degree) -> bool {
        c != b && self.leq(c, b)
    }

    /// Every realised degree of weight at most `bound`, sorted by
    /// (weight, lex). Fills the cache with the fibers found on the way.
    pub fn degrees_up_to(&self, bound: Bound) -> Vec<Degree> {
        let g = &self.grading;
        let limit = bound.floor();
        let mut found: HashMap<Degree, Vec<Exponent>> = HashMap::new();
        if limit >= 0 {
            let mut u = vec![0u32; g.n()];
            walk_all(g, 0, limit, &mut u, &mut |u| {
                found.entry(g.degree_of(u)).or_default().push(u.to_vec());
            });
        }
        let mut degrees: Vec<Degree> = found.keys().cloned().collect();
        degrees.sort_by_cached_key(|d| (g.weight(d), d.clone()));
        let mut cache = self.cache.write().unwrap();
        for (degree, mut monomials) in found {
            monomials.sort();
            cache
                .entry(degree.clone())
                .or_insert_with(|| Arc::new(Fiber { degree, monomials }));
        }
        degrees
    }
}

/// Enumerates `{u ∈ N^n : Σ u_i a_i = b}`, lex ascending.
pub fn enumerate_fiber(b: &Degree, g: &GradingMap) -> Fiber {
    let mut monomials = Vec::new();
    search(b, g, &mut |u| {
        monomials.push(u.to_vec());
        true
    });
    monomials.sort();
    Fiber {
        degree: b.clone(),
        monomials,
    }
}

pub fn fiber_nonempty(b: &Degree, g: &GradingMap) -> bool {
    let mut found = false;
    search(b, g, &mut |_| {
        found = true;
        false
    });
    found
}

// Calls `visit` on each solution; stops early when `visit` returns false.
fn search(b: &Degree, g: &GradingMap, visit: &mut dyn FnMut(&[u32]) -> bool) {
    let target = g.weight(b);
    if target < 0 || g.n() == 0 {
        return;
    }
    let mut u = vec![0u32; g.n()];
    let mut partial = g.zero();
    dfs(b, g, 0, target, &mut u, &mut partial, visit);
}

fn dfs(
    b: &Degree,
    g: &GradingMap,
    i: usize,
    remaining: i64,
    u: &mut Vec<u32>,
    partial: &mut Degree,
    visit: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    let w = g.column_weights()[i];
    let last = i + 1 == g.n();
    let range: Box<dyn Iterator<Item = i64>> = if last {
        if remaining % w != 0 {
            return true;
        }
        Box::new(std::iter::once(remaining / w))
    } else {
        Box::new(0..=remaining / w)
    };
    for e in range {
        u[i] = e as u32;
        let step = scaled(g, i, e);
        let next = g.add(partial, &step);
        if last {
            if next == *b && !visit(u) {
                return false;
            }
        } else {
            let mut next = next;
            if !dfs(b, g, i + 1, remaining - e * w, u, &mut next, visit) {
                return false;
            }
        }
    }
    u[i] = 0;
    true
}

fn scaled(g: &GradingMap, i: usize, e: i64) -> Degree {
    Degree {
        free: g.free_column(i).iter().map(|a| a * e).collect(),
        torsion: g.torsion_column(i).iter().map(|a| a * e).collect(),
    }
}

// Visits every u with y . u <= limit.
fn walk_all(g: &GradingMap, i: usize, limit: i64, u: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    if i == g.n() {
        visit(u);
        return;
    }
    let w = g.column_weights()[i];
    for e in 0..=limit / w {
        u[i] = e as u32;
        walk_all(g, i + 1, limit - e * w, u, visit);
    }
    u[i] = 0;
}

/// Writes a monomial in the letters `a..z` (`n <= 26`) or `x1..xn`.
pub fn format_monomial(u: &[u32]) -> String {
    let letters = u.len() <= 26;
    let mut out = String::new();
    for (i, &e) in u.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if letters {
            out.push((b'a' + i as u8) as char);
        } else {
            out.push_str(&format!("x{}", i + 1));
        }
        if e > 1 {
            out.push_str(&format!("^{e}"));
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// Name of the `i`-th variable in the same alphabet as [`format_monomial`].
pub fn variable_name(i: usize, n: usize) -> String {
    if n <= 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{}", i + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational_quartic() -> FiberStore {
        FiberStore::new(GradingMap::from_columns(4, vec![vec![4, 0], vec![3, 1], vec![1, 3], vec![0, 4]]).unwrap())
    }

    #[test]
    fn quartic_fiber() {
        let s = rational_quartic();
        let b = s.grading().parse_degree("6,10").unwrap();
        let f = s.fiber(&b);
        let names: Vec<String> = f.monomials.iter().map(|u| format_monomial(u)).collect();
        assert_eq!(names, vec!["bc^3", "b^2d^2", "ac^2d"]);
        assert_eq!(f.canonical(), Some(&vec![0, 1, 3, 0]));
        assert!(s.fiber_nonempty(&b));
    }

    #[test]
    fn zero_and_empty_fibers() {
        let s = rational_quartic();
        let zero = s.grading().zero();
        assert_eq!(s.fiber(&zero).monomials, vec![vec![0, 0, 0, 0]]);
        let b = s.grading().parse_degree("1,1").unwrap();
        assert!(s.fiber(&b).is_empty());
        assert!(!fiber_nonempty(&b, s.grading()));
    }

    #[test]
    fn order_examples() {
        let s = rational_quartic();
        let g = s.grading();
        let b = g.parse_degree("6,10").unwrap();
        let c = g.parse_degree("4,0").unwrap();
        assert!(s.leq(&b, &b));
        // (2,10) = c^2 d
        assert!(s.leq(&c, &b));
        let t = FiberStore::new(GradingMap::from_columns(3, vec![vec![1]; 3]).unwrap());
        let d1 = t.grading().parse_degree("1").unwrap();
        let d3 = t.grading().parse_degree("3").unwrap();
        assert!(!t.leq(&d3, &d1));
        assert!(t.leq(&d1, &d3));
    }

    #[test]
    fn total_degree_scan() {
        let t = FiberStore::new(GradingMap::from_columns(3, vec![vec![1]; 3]).unwrap());
        let degs: Vec<String> = t
            .degrees_up_to(Bound::integer(2))
            .iter()
            .map(|d| d.to_string())
            .collect();
        assert_eq!(degs, vec!["0", "1", "2"]);
        assert_eq!(t.degrees_up_to(Bound::integer(0)), vec![t.grading().zero()]);
        let b2 = t.grading().parse_degree("2").unwrap();
        assert_eq!(t.fiber(&b2).len(), 6);
    }

    #[test]
    fn bound_parsing() {
        assert_eq!("7/2".parse::<Bound>().unwrap().floor(), 3);
        assert_eq!("12".parse::<Bound>().unwrap(), Bound::integer(12));
        assert!("-1".parse::<Bound>().is_err());
        assert!("x".parse::<Bound>().is_err());
    }

    #[test]
    fn monomial_names() {
        assert_eq!(format_monomial(&[0, 0]), "1");
        assert_eq!(format_monomial(&[1, 0, 2, 1]), "ac^2d");
        let mut u = vec![0; 27];
        u[26] = 3;
        assert_eq!(format_monomial(&u), "x27^3");
    }
}
