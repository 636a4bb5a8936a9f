use std::sync::Arc;

use super::{expect, LinearMapOnBasis, Verdict};
use crate::actions::{germ_quotient, GermQuotient, LandPreaction};
use crate::bundles::{
    ideal_closure, naive_crossed_product, semigroupoid_algebra, validate_algebra_action, AlgebraPresentation,
};
use crate::error::{Error, Result, StageExt};
use crate::rings::{solve_linear, Span};

#[derive(Clone, Debug)]
pub struct GermCorollary {
    pub germs: GermQuotient,
    /// `A𝒢 ⋆ 𝒮 → A[germs]`.
    pub map: LinearMapOnBasis,
    /// Ideal generated by `δ_s x − δ_t x` for `s ≤ t`.
    pub ideal: Span,
    pub verdict: Verdict,
}

/// For an action of `𝒮` on a groupoid `𝒢` and an algebra `A`, checks that
/// `A𝒢 ⋆ 𝒮` modulo the order ideal is the germ groupoid algebra.
pub fn germ_corollary(theta: &LandPreaction, a: &AlgebraPresentation) -> Result<GermCorollary> {
    let germs = germ_quotient(theta).stage("germ-quotient")?;
    let ring = a.ring();
    let m = a.rank();
    let space = theta.space().clone();
    let actor = theta.actor().clone();
    let sg = actor.base();

    let ag = Arc::new(semigroupoid_algebra(a, space.clone()).stage("coefficient-algebra")?);
    let mut domains = Vec::new();
    let mut images = Vec::new();
    for s in sg.arrows() {
        let dom: Vec<usize> = theta.domain(s).into_iter().flat_map(|x| (0..m).map(move |i| x * m + i)).collect();
        let img = dom.iter().map(|&u| ag.unit_vec(theta.apply(s, u / m).expect("in domain") * m + u % m)).collect();
        domains.push(dom);
        images.push(img);
    }
    let induced = validate_algebra_action(format!("Θ[{}]", theta.name()), actor.clone(), ag.clone(), domains, images)
        .stage("induced-action")?;
    let crossed = naive_crossed_product(&induced, None).stage("crossed-product")?;

    let mut generators = Vec::new();
    for s in sg.arrows() {
        for t in sg.arrows().filter(|&t| actor.lt(s, t)) {
            for &u in induced.domain(s) {
                let (p, q) = (crossed.index(s, u), crossed.index(t, u));
                let (Some(p), Some(q)) = (p, q) else {
                    return Err(Error::internal("order generator outside the crossed product")).stage("order-ideal");
                };
                generators.push(ring.vec_sub(&crossed.algebra.unit_vec(p), &crossed.algebra.unit_vec(q)));
            }
        }
    }
    let ideal = ideal_closure(&crossed.algebra, generators).stage("order-ideal")?;

    let target = semigroupoid_algebra(a, germs.germs().clone()).stage("germ-algebra")?;
    let images = crossed
        .pairs
        .iter()
        .map(|&(s, u)| {
            let arrow = germs
                .semidirect
                .arrow(s, u / m)
                .ok_or_else(|| Error::internal("crossed basis outside the semidirect product"))?;
            Ok(target.unit_vec(germs.congruence.class_of(arrow) * m + u % m))
        })
        .collect::<Result<Vec<_>>>()
        .stage("germ-map")?;
    let (rc, rt) = (crossed.algebra.rank(), target.rank());
    let map = LinearMapOnBasis::new(
        format!("Q[{}]", theta.name()),
        Arc::new(crossed.algebra),
        Arc::new(target),
        images,
        None,
    )
    .stage("germ-map")?;
    let certificate = map.certify_surjection().stage("germ-map")?;
    let kernel = Span::new(ring, rc, solve_linear(&map.matrix(), ring)?.kernel).stage("germ-map")?;
    let verdict = Verdict::new("germ", theta.name().to_string())
        .rank("crossed-product", rc)
        .rank("ideal", ideal.rank())
        .rank("germ-algebra", rt)
        .certificate(certificate)
        .check(expect("kernel-is-ideal", kernel.same_as(&ideal), || {
            format!("kernel rank {} but ideal rank {}", kernel.rank(), ideal.rank())
        }))
        .check(expect("rank-identity", rc == ideal.rank() + rt, || format!("{rc} != {} + {rt}", ideal.rank())));
    Ok(GermCorollary { germs, map, ideal, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::fixtures::{inverse, semilattice_on_points};
    use crate::bundles::algebra::fixtures::group_algebra_z2;
    use crate::bundles::fixtures::base;
    use crate::bundles::ring_algebra;
    use crate::rings::Ring;
    use crate::semigroupoid::samples;

    #[test]
    fn semilattice_on_points_is_three_one_two() {
        let r = Ring::rationals();
        let theta = semilattice_on_points(&[("x", "x")]).unwrap();
        let g = germ_corollary(&theta, &ring_algebra(&r)).unwrap();
        assert!(g.verdict.passed, "{:?}", g.verdict.first_failure());
        assert_eq!(g.verdict.ranks["crossed-product"], 3);
        assert_eq!(g.verdict.ranks["ideal"], 1);
        assert_eq!(g.verdict.ranks["germ-algebra"], 2);
    }

    #[test]
    fn coefficients_scale_the_ranks() {
        let r = Ring::zmod(5);
        let theta = semilattice_on_points(&[("x", "x")]).unwrap();
        let g = germ_corollary(&theta, &group_algebra_z2(&r).without_grading()).unwrap();
        assert!(g.verdict.passed);
        assert_eq!(g.verdict.ranks["crossed-product"], 6);
        assert_eq!(g.verdict.ranks["germ-algebra"], 4);
    }

    #[test]
    fn group_action_has_no_ideal() {
        let r = Ring::integers();
        let theta = LandPreaction::trivial(inverse(&samples::z2()), base(&samples::unit_groupoid(&["p"]))).unwrap();
        let g = germ_corollary(&theta, &ring_algebra(&r)).unwrap();
        assert!(g.verdict.passed);
        assert_eq!(g.ideal.rank(), 0);
    }

    #[test]
    fn empty_domain_gives_no_generators() {
        let r = Ring::rationals();
        let theta = semilattice_on_points(&[]).unwrap();
        let g = germ_corollary(&theta, &ring_algebra(&r)).unwrap();
        assert!(g.verdict.passed);
        assert_eq!(g.ideal.rank(), 0);
        assert_eq!(g.verdict.ranks["crossed-product"], g.verdict.ranks["germ-algebra"]);
    }

    #[test]
    fn non_groupoid_space_fails_in_its_stage() {
        let r = Ring::rationals();
        let theta = LandPreaction::trivial(inverse(&samples::z2()), base(&samples::semilattice())).unwrap();
        let err = germ_corollary(&theta, &ring_algebra(&r)).unwrap_err();
        assert!(err.to_string().starts_with("stage germ-quotient"), "{err}");
    }
}
