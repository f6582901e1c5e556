mod common;

use std::collections::BTreeMap;

use polysig::{RingParams, SparsePoly, Var};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::{oracle_case, to_dense, to_sparse, Dense};

#[test]
fn dense_oracle_agrees_on_ten_thousand_cases() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for i in 0..10_000 {
        if let Err(e) = oracle_case(&mut rng) {
            panic!("case {i}: {e}");
        }
    }
}

fn raw_terms(n: usize) -> impl Strategy<Value = Vec<(Vec<usize>, u64)>> {
    prop::collection::vec((prop::collection::vec(0usize..=2, n), 0u64..6), 0..6)
}

fn poly3() -> impl Strategy<Value = SparsePoly> {
    raw_terms(3).prop_map(|t| to_sparse(RingParams { q: 6, n: 3 }, &t))
}

proptest! {
    #[test]
    fn canonical_form_matches_dense(t in raw_terms(3)) {
        let p = to_sparse(RingParams { q: 6, n: 3 }, &t);
        prop_assert_eq!(Dense::from_sparse(&p, 3), to_dense(3, 6, &t));
        prop_assert!(p.terms().windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(p.terms().iter().all(|(_, c)| *c != 0 && *c < 6));
    }

    #[test]
    fn ring_laws(a in poly3(), b in poly3(), c in poly3()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.mul(&SparsePoly::one(a.ring())).unwrap(), a.clone());
    }

    #[test]
    fn substitution_is_a_homomorphism(a in poly3(), b in poly3(), images in prop::collection::vec(poly3(), 3)) {
        let map: BTreeMap<Var, SparsePoly> = images.into_iter().enumerate().map(|(i, p)| ((i + 1) as Var, p)).collect();
        let s = |p: &SparsePoly| p.substitute(&map).unwrap();
        prop_assert_eq!(s(&a.add(&b).unwrap()), s(&a).add(&s(&b)).unwrap());
        prop_assert_eq!(s(&a.mul(&b).unwrap()), s(&a).mul(&s(&b)).unwrap());
    }

    #[test]
    fn evaluation_respects_products(a in poly3(), b in poly3(), point in prop::collection::vec(0u64..6, 3)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.evaluate(&point).unwrap(), a.evaluate(&point).unwrap() * b.evaluate(&point).unwrap() % 6);
    }

    #[test]
    fn powers_are_repeated_products(a in poly3(), e in 0u32..4) {
        let mut expect = SparsePoly::one(a.ring());
        for _ in 0..e {
            expect = expect.mul(&a).unwrap();
        }
        prop_assert_eq!(a.pow(e), expect);
    }
}
