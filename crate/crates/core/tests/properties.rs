mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use mgideal::gin::gin;
use mgideal::theory;
use mgideal::{BlockRing, Ideal, MonomialIdeal, TermOrder};

fn small_ring(seed: u64) -> BlockRing {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ring(&random_blocks(&mut rng, 3, 3, 6))
}

fn monomial_case(seed: u64) -> (BlockRing, MonomialIdeal, MonomialIdeal) {
    let ring = small_ring(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let a = random_monomial_ideal(&mut rng, &ring, 4, 2);
    let b = random_monomial_ideal(&mut rng, &ring, 4, 2);
    (ring, a, b)
}

fn graded_case(seed: u64) -> Ideal {
    let ring = small_ring(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
    random_graded_ideal(&mut rng, &ring, 3, 2, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn monomial_operations_agree_with_polynomial_ones(seed in any::<u64>()) {
        let (ring, a, b) = monomial_case(seed);
        let order = TermOrder::degrevlex(&ring);
        let meet = a.to_ideal().intersect(&b.to_ideal()).unwrap();
        prop_assert_eq!(meet.initial_ideal(&order).unwrap(), a.intersect(&b));
        let sum = a.to_ideal().sum(&b.to_ideal());
        prop_assert_eq!(sum.initial_ideal(&order).unwrap(), a.sum(&b));
        for m in b.generators() {
            let colon = a.to_ideal().colon(&mgideal::Polynomial::monomial(&ring, m.clone())).unwrap();
            prop_assert_eq!(colon.initial_ideal(&order).unwrap(), a.colon_monomial(m));
        }
    }

    #[test]
    fn hilbert_numerator_is_additive_over_pivots(seed in any::<u64>()) {
        // K(S/I) = K(S/(I + (u))) + y^deg(u) K(S/(I : u)) for any monomial u.
        let (ring, a, b) = monomial_case(seed);
        let u = &b.generators()[0];
        let deg = ring.multidegree_of(u).unwrap();
        let mut rhs = a.sum(&MonomialIdeal::new(&ring, vec![u.clone()])).hilbert_numerator();
        rhs.add_assign(&a.colon_monomial(u).hilbert_numerator().shift(&deg));
        prop_assert_eq!(a.hilbert_numerator(), rhs);
    }

    #[test]
    fn alexander_dual_is_an_involution_and_reverses_inclusion(seed in any::<u64>()) {
        let ring = small_ring(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_squarefree_ideal(&mut rng, &ring, 4);
        let b = a.sum(&random_squarefree_ideal(&mut rng, &ring, 2));
        let (da, db) = (a.alexander_dual().unwrap(), b.alexander_dual().unwrap());
        prop_assert_eq!(da.alexander_dual().unwrap(), a.clone());
        // a ⊆ b implies b* ⊆ a*.
        prop_assert!(db.generators().iter().all(|g| da.contains(g)));
    }

    #[test]
    fn polarization_is_squarefree_and_keeps_generator_count(seed in any::<u64>()) {
        let ring = ring(&[4, 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_t_ideal(&mut rng, &ring, 4, 3, false);
        let p = a.polarize().unwrap();
        prop_assert!(p.is_radical());
        prop_assert_eq!(p.generators().len(), a.generators().len());
        let degrees = |m: &MonomialIdeal| {
            let mut d = m.multidegrees();
            d.sort();
            d
        };
        prop_assert_eq!(degrees(&p), degrees(&a));
    }

    #[test]
    fn borel_fixed_and_strongly_stable_coincide_in_large_characteristic(seed in any::<u64>()) {
        let (ring, a, _) = monomial_case(seed);
        prop_assert_eq!(a.is_borel_fixed(ring.characteristic()), a.is_strongly_stable());
        let sb = random_squarefree_borel(&mut ChaCha8Rng::seed_from_u64(seed), &ring, 3);
        prop_assert!(sb.is_strongly_stable() && sb.is_radical());
    }

    #[test]
    fn gin_is_strongly_stable_and_preserves_hilbert_series(seed in any::<u64>()) {
        let ideal = graded_case(seed);
        let order = TermOrder::degrevlex(ideal.ring());
        let report = gin(&ideal, &order, 3, seed).unwrap();
        prop_assert!(report.is_conclusive());
        prop_assert!(report.result.is_strongly_stable());
        prop_assert_eq!(report.result.hilbert_numerator(), ideal.hilbert_series(&order).unwrap());
    }

    #[test]
    fn reduced_bases_are_reduced_and_generate(seed in any::<u64>()) {
        let ideal = graded_case(seed);
        let ring = ideal.ring().clone();
        for order in theory::sample_orders(&ring, 2, seed, false) {
            let gb = ideal.groebner_basis(&order).unwrap();
            let leads = gb.lead_monomials();
            for (k, g) in gb.elements().iter().enumerate() {
                prop_assert_eq!(g.lead_term(&order).unwrap().1, 1);
                for m in g.monomials() {
                    prop_assert!(leads.iter().enumerate().all(|(j, l)| j == k || !l.divides(m)));
                }
                prop_assert!(ideal.contains(g).unwrap());
            }
            for f in ideal.generators() {
                prop_assert!(mgideal::groebner::normal_form(f, &gb).is_zero());
            }
        }
    }
}
