use std::sync::Arc;

use proptest::prelude::*;

use sectional_core::actions::{germ_quotient, validate_rigid_congruence, LandPreaction};
use sectional_core::bundles::{ring_algebra, validate_bundle, Bundle, BundleSpec};
use sectional_core::rings::Ring;
use sectional_core::semigroupoid::{samples, validate_homomorphism};
use sectional_core::theorems::{
    crossed_theorem, germ_corollary, quotient_map_and_kernel, smash_product, smash_theorem, tensor_theorem,
    validate_bundle_action, validate_bundle_congruence,
};

mod common;
use common::{corpus, involution, involution_action, partial_involution_action, restriction_action, space};

fn trivial(ring: &Ring, k: usize) -> Arc<Bundle> {
    let g = space(&corpus()[k % 5]);
    Arc::new(validate_bundle(&BundleSpec::trivial("t", &g), ring, g).unwrap())
}

fn field_or_zmod(k: u8) -> Ring {
    [Ring::rationals(), Ring::zmod(5), Ring::zmod(4), Ring::integers()][k as usize % 4].clone()
}

fn partial_action(family: u8, n: usize, bits: &[bool]) -> LandPreaction {
    match family % 3 {
        0 => restriction_action(n, &(0..n).map(|i| bits[i % bits.len()]).collect::<Vec<_>>()),
        1 => involution_action(&involution(n, bits)),
        _ => partial_involution_action(
            &involution(n, bits),
            &bits[1..].iter().chain([&true]).copied().collect::<Vec<_>>(),
        ),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_ranks_multiply(k in 0usize..5, l in 0usize..5, r in any::<u8>()) {
        let ring = field_or_zmod(r);
        let b = trivial(&ring, k);
        let e = space(&corpus()[l]);
        let t = tensor_theorem(&b, e.clone()).unwrap();
        prop_assert!(t.verdict.passed, "{:?}", t.verdict.first_failure());
        prop_assert_eq!(t.verdict.ranks["product-bundle"], b.total_rank() * e.arrow_count());
    }

    #[test]
    fn crossed_products_certify(family in any::<u8>(), n in 1usize..4, bits in prop::collection::vec(any::<bool>(), 2..5), r in any::<u8>()) {
        let ring = field_or_zmod(r);
        let theta = Arc::new(partial_action(family, n, &bits));
        let b = Arc::new(validate_bundle(&BundleSpec::trivial("t", theta.space()), &ring, theta.space().clone()).unwrap());
        let action = validate_bundle_action("a", b, theta.clone(), Vec::new()).unwrap();
        let t = crossed_theorem(&action).unwrap();
        prop_assert!(t.verdict.passed, "{:?}", t.verdict.first_failure());
        let pairs: usize = theta.actor().base().arrows().map(|s| theta.domain(s).len()).sum();
        prop_assert_eq!(t.verdict.ranks["crossed-product"], pairs);
    }

    #[test]
    fn smash_is_a_graded_isomorphism(k in 0usize..5, map in prop::collection::vec(0usize..2, 4), r in any::<u8>()) {
        let ring = field_or_zmod(r);
        let b = trivial(&ring, k);
        let n = b.base().arrow_count();
        let Ok(d) = validate_homomorphism("d", b.base().clone(), space(&samples::z2()), map[..n].to_vec()) else { return Ok(()) };
        let t = smash_theorem(&b, &d).unwrap();
        prop_assert!(t.verdict.passed, "{:?}", t.verdict.first_failure());
        let graded = t.map.certify().unwrap();
        prop_assert!(graded.check("graded").is_some_and(|c| c.passed));
        prop_assert!(smash_product(t.map.source()).unwrap().algebra.check_graded_closure().is_valid());
    }

    #[test]
    fn germ_congruence_kernels_are_generated(family in any::<u8>(), n in 1usize..4, bits in prop::collection::vec(any::<bool>(), 2..5), r in 0u8..3) {
        let ring = field_or_zmod(r);
        let theta = partial_action(family, n, &bits);
        let gq = germ_quotient(&theta).unwrap();
        let sp = gq.semidirect.semigroupoid.clone();
        let b = Arc::new(validate_bundle(&BundleSpec::trivial("t", &sp), &ring, sp).unwrap());
        let c = validate_bundle_congruence("germ", b, gq.congruence.clone(), Vec::new()).unwrap();
        let t = quotient_map_and_kernel(&c).unwrap();
        prop_assert!(t.verdict.passed, "{:?}", t.verdict.first_failure());
        prop_assert_eq!(t.kernel.rank() + t.map.target().rank(), t.map.source().rank());
    }

    #[test]
    fn germ_rank_identity(family in any::<u8>(), n in 1usize..4, bits in prop::collection::vec(any::<bool>(), 2..5), r in 0u8..3) {
        let ring = field_or_zmod(r);
        let theta = partial_action(family, n, &bits);
        let g = germ_corollary(&theta, &ring_algebra(&ring)).unwrap();
        prop_assert!(g.verdict.passed, "{:?}", g.verdict.first_failure());
        prop_assert_eq!(g.verdict.ranks["crossed-product"], g.ideal.rank() + g.verdict.ranks["germ-algebra"]);
    }
}

#[test]
fn sign_transport_on_z2_over_two_rings() {
    for ring in [Ring::rationals(), Ring::zmod(5)] {
        let b = trivial(&ring, 2);
        let total = validate_rigid_congruence(b.base().clone(), vec![vec![0, 1]]).unwrap();
        let minus = sectional_core::rings::Matrix::new(1, 1, vec![ring.from_int(-1)]).unwrap();
        let c = validate_bundle_congruence("sign", b, total, vec![((0, 1), minus.clone()), ((1, 0), minus)]).unwrap();
        let t = quotient_map_and_kernel(&c).unwrap();
        assert!(t.verdict.passed);
        assert!(t.kernel.contains(&[ring.one(), ring.one()]));
    }
}
