mod common;

use std::collections::BTreeMap;

use lsz_core::betti::{GcdOracle, TorOracle};
use lsz_core::complexes::{build_delta_b, build_gcd_complex, components, reduced_homology};
use lsz_core::lattice::{pointedness_certificate, split_signs, Pointedness};
use lsz_core::linalg::{PrimeField, RationalField};
use lsz_core::syzygy::{
    brute_force_minimal_pairs, census, fiber_graph_components, generation_check, indispensable_binomials,
    koszul_ci_verify, sample_minimal_generating_set, Binomial,
};
use lsz_core::{BettiOracle, Bound, FiberStore, GradingMap, LatticePresentation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn columns() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (2usize..=4, 1usize..=2).prop_flat_map(|(n, d)| prop::collection::vec(prop::collection::vec(-1i64..=3, d), n))
}

fn pointed_store() -> impl Strategy<Value = FiberStore> {
    prop_oneof![
        columns().prop_filter_map("not pointed", |c| GradingMap::from_columns(c.len(), c).ok()),
        (2usize..=4)
            .prop_flat_map(|n| (
                Just(n),
                prop::collection::vec(prop::collection::vec(-2i64..=2, n), 1..n)
            ))
            .prop_filter_map("dependent or not pointed", |(n, basis)| {
                GradingMap::from_lattice(&LatticePresentation::new(n, basis).ok()?).ok()
            }),
    ]
    .prop_map(FiberStore::new)
}

// every exponent vector with entries at most `k`, grouped by degree
fn brute_fibers(g: &GradingMap, k: u32) -> BTreeMap<String, Vec<Vec<u32>>> {
    let mut out: BTreeMap<String, Vec<Vec<u32>>> = BTreeMap::new();
    let mut u = vec![0u32; g.n()];
    loop {
        out.entry(g.degree_of(&u).to_string()).or_default().push(u.clone());
        let Some(i) = (0..u.len()).find(|&i| u[i] < k) else {
            break;
        };
        u[i] += 1;
        u[..i].iter_mut().for_each(|x| *x = 0);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certificate_is_checkable(cols in columns()) {
        match pointedness_certificate(&cols) {
            Pointedness::Positive(y) => {
                for c in &cols {
                    prop_assert!(c.iter().zip(&y).map(|(a, b)| a * b).sum::<i64>() > 0);
                }
            }
            Pointedness::Gordan(u) => {
                prop_assert!(u.iter().any(|&x| x > 0));
                for k in 0..cols[0].len() {
                    prop_assert_eq!(cols.iter().zip(&u).map(|(c, &x)| c[k] * x as i64).sum::<i64>(), 0);
                }
            }
        }
    }

    #[test]
    fn lattice_rows_are_homogeneous(n in 2usize..=4, rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..3)) {
        let basis: Vec<Vec<i64>> = rows.into_iter().map(|r| r[..n].to_vec()).collect();
        let Ok(lat) = LatticePresentation::new(n, basis.clone()) else { return Ok(()) };
        let Ok(g) = GradingMap::from_lattice(&lat) else { return Ok(()) };
        for row in &basis {
            let (p, m) = split_signs(row);
            prop_assert_eq!(g.degree_of(&p), g.degree_of(&m));
        }
    }

    #[test]
    fn fibers_match_exhaustive_search(s in pointed_store()) {
        let g = s.grading();
        let k = 3;
        for (deg, mut expected) in brute_fibers(g, k) {
            let b = g.parse_degree(&deg).unwrap();
            let mut got: Vec<Vec<u32>> = s.fiber(&b).monomials.iter().filter(|u| u.iter().all(|&e| e <= k)).cloned().collect();
            expected.sort();
            got.sort();
            prop_assert_eq!(got, expected, "degree {}", deg);
        }
    }

    #[test]
    fn leq_is_a_partial_order(s in pointed_store()) {
        let ds = s.degrees_up_to(Bound::integer(6));
        let ds = &ds[..ds.len().min(25)];
        for a in ds {
            prop_assert!(s.leq(a, a));
            for b in ds {
                if a != b && s.leq(a, b) {
                    prop_assert!(!s.leq(b, a));
                }
                for c in ds {
                    if s.leq(a, b) && s.leq(b, c) {
                        prop_assert!(s.leq(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn nerve_and_component_partitions(s in pointed_store()) {
        for b in s.degrees_up_to(Bound::integer(8)) {
            let f = s.fiber(&b);
            if f.len() > 16 { continue; }
            let gcd = build_gcd_complex(&f);
            let small = reduced_homology(&build_delta_b(&f), &RationalField, usize::MAX).unwrap();
            let big = reduced_homology(&gcd, &RationalField, usize::MAX).unwrap();
            prop_assert!(small.same_dims(&big), "{}: {:?} vs {:?}", b, small, big);
            prop_assert_eq!(fiber_graph_components(&b, &s), components(&gcd));
        }
    }

    #[test]
    fn oracles_agree_over_both_fields(s in pointed_store()) {
        let bound = Bound::integer(8);
        for field in [&RationalField as &dyn lsz_core::linalg::RankField, &PrimeField::default()] {
            let a = GcdOracle::default().table(&s, bound, field).unwrap();
            let b = TorOracle.table(&s, bound, field).unwrap();
            prop_assert!(a.first_difference(&b).is_none(), "{:?}", a.first_difference(&b));
        }
    }

    #[test]
    fn census_matches_brute_force(s in pointed_store()) {
        let bound = Bound::integer(6);
        if let Some(brute) = brute_force_minimal_pairs(&s, bound, 8, 30) {
            prop_assert_eq!(census(&s, bound).total, brute.total);
        }
    }

    #[test]
    fn census_representatives_generate(s in pointed_store()) {
        let bound = Bound::integer(8);
        let c = census(&s, bound);
        if c.warnings.is_empty() {
            prop_assert!(generation_check(&c.representatives(), &s, bound).ok);
        }
    }

    #[test]
    fn indispensables_lie_in_every_sample(s in pointed_store(), seed in any::<u64>()) {
        let bound = Bound::integer(8);
        let ind = indispensable_binomials(&s, bound).binomials;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            let sample = sample_minimal_generating_set(&s, bound, &mut rng);
            prop_assert!(generation_check(&sample, &s, bound).ok);
            for f in &ind {
                prop_assert!(sample.iter().any(|h| h.equivalent(f)), "{} missing", f);
            }
        }
    }

    #[test]
    fn koszul_differentials_square_to_zero(s in pointed_store(), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..=3)) {
        let bound = Bound::integer(6);
        let g = s.grading();
        let candidates: Vec<Binomial> = s
            .degrees_up_to(bound)
            .iter()
            .filter_map(|b| {
                let f = s.fiber(b);
                (f.len() >= 2).then(|| Binomial::new(f.monomials[0].clone(), f.monomials[1].clone(), g).unwrap())
            })
            .collect();
        if candidates.is_empty() { return Ok(()) }
        let fs: Vec<Binomial> = picks.iter().map(|i| i.get(&candidates).clone()).collect();
        let r = koszul_ci_verify(&fs, &s, bound, &RationalField).unwrap();
        prop_assert!(r.all_squares_zero);
    }
}
