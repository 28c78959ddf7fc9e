use proptest::prelude::*;

use knotcone::complex::split::split_acyclic;
use knotcone::complex::maps::is_isomorphic_bounded;
use knotcone::complex::{is_isomorphic, ChainComplex, Generator};
use knotcone::invariants::{alexander_from_complex, invariants, tau};
use knotcone::ring::{Monomial, RingElement, RingMode};
use knotcone::staircase::{staircase, LSpaceKnotData};
use knotcone::surgery::surgery_dual_complex;

fn exps(max_len: usize) -> impl Strategy<Value = LSpaceKnotData> {
    prop::collection::btree_set(1i64..8, 1..=max_len)
        .prop_map(|s| LSpaceKnotData::new(s.into_iter().collect()).expect("increasing positive"))
}

fn stair(max_len: usize) -> impl Strategy<Value = ChainComplex> {
    exps(max_len).prop_map(|d| staircase(&d).complex)
}

fn element() -> impl Strategy<Value = RingElement> {
    prop::collection::vec((0i64..4, 0i64..4), 0..4).prop_map(|ts| {
        RingElement::from_terms(RingMode::Polynomial, ts.into_iter().map(|(u, v)| Monomial::new(u, v))).unwrap()
    })
}

/// An acyclic square `a → b, c → d`.
fn square(du: i64) -> ChainComplex {
    let gens = vec![
        Generator::new("sq_a", du, du),
        Generator::new("sq_b", du + 1, du - 1),
        Generator::new("sq_c", du - 1, du + 1),
        Generator::new("sq_d", du, du),
    ];
    ChainComplex::from_forced_arrows(RingMode::Polynomial, gens, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
}

fn by_name(c: &ChainComplex) -> ChainComplex {
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by_key(|&k| c.gen(k).name.clone());
    c.permuted(&order)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in element(), b in element(), c in element()) {
        let l = a.mul(&b.add(&c).unwrap()).unwrap();
        let r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert!(a.add(&a).unwrap().is_zero());
    }

    #[test]
    fn staircase_euler_characteristic(d in exps(4)) {
        prop_assert_eq!(alexander_from_complex(&staircase(&d).complex), d.alexander_polynomial());
    }

    #[test]
    fn dual_is_an_involution(c in stair(3)) {
        let dd = c.dual().dual();
        prop_assert!(dd.verify_d_squared());
        prop_assert!(is_isomorphic(&dd, &c).unwrap());
    }

    #[test]
    fn tensor_products(a in stair(1), b in stair(2)) {
        let ab = a.tensor(&b).unwrap();
        let ba = b.tensor(&a).unwrap();
        prop_assert!(ab.verify_d_squared());
        prop_assert!(ab.tensor(&a.dual()).unwrap().verify_d_squared());
        prop_assert!(is_isomorphic_bounded(&ab, &ba, 15).unwrap());
        prop_assert!(ab.homology_engines_agree());
        prop_assert_eq!(ab.localized_homology_rank(), 1);
    }

    #[test]
    fn tensor_is_associative(a in stair(1), b in stair(1), c in stair(1)) {
        let l = a.tensor(&b).unwrap().tensor(&c).unwrap();
        let r = a.tensor(&b.tensor(&c).unwrap()).unwrap();
        // the identity on a ⊗ b ⊗ c is a chain isomorphism
        prop_assert_eq!(by_name(&l), by_name(&r));
    }

    #[test]
    fn reduction(d in exps(2)) {
        let cone = surgery_dual_complex(&d).cone.complex;
        let red = cone.reduce();
        prop_assert!(red.is_reduced());
        prop_assert_eq!(red.homology(), cone.homology());
        prop_assert_eq!(red.reduce(), red.clone());
        prop_assert!(cone.homology_engines_agree());
    }

    #[test]
    fn json_round_trip(a in stair(2), b in stair(1)) {
        let c = a.tensor(&b.dual()).unwrap();
        let back = ChainComplex::from_json(&c.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn conn_ignores_acyclic_summands(c in stair(2), shift in -2i64..3) {
        let padded = c.direct_sum(&square(2 * shift)).unwrap();
        let with = split_acyclic(&padded).unwrap();
        let without = split_acyclic(&c).unwrap();
        prop_assert_eq!(with.acyclic.localized_homology_rank(), 0);
        prop_assert!(is_isomorphic(&with.conn, &without.conn).unwrap());
    }

    #[test]
    fn tau_of_staircases(d in exps(3)) {
        let c = staircase(&d).complex;
        let i = invariants(&c).unwrap();
        // L-space knots have τ = genus
        prop_assert_eq!(i.tau, d.genus());
        let j = invariants(&c.dual()).unwrap();
        prop_assert_eq!(j.tau, -i.tau);
        prop_assert_eq!(j.epsilon, -i.epsilon);
    }

    #[test]
    fn tau_is_additive(a in exps(1), b in exps(2)) {
        let (ca, cb) = (staircase(&a).complex, staircase(&b).complex);
        let t = tau(&ca.tensor(&cb.dual()).unwrap()).unwrap();
        prop_assert_eq!(t, a.genus() - b.genus());
    }
}
