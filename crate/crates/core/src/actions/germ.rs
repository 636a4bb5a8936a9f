use std::sync::Arc;

use super::{
    quotient_semigroupoid, semidirect_product, validate_rigid_congruence, LandPreaction, Quotient, RigidCongruence,
    SemidirectProduct,
};
use crate::error::{Error, Result, Rule, Violation};
use crate::semigroupoid::{ArrowId, FiniteSemigroupoid, GroupoidTables};

#[derive(Clone, Debug)]
pub struct GermQuotient {
    pub semidirect: SemidirectProduct,
    pub congruence: RigidCongruence,
    pub quotient: Quotient,
    /// Unit and inverse tables when the quotient is a groupoid.
    pub groupoid: Option<GroupoidTables>,
}

impl GermQuotient {
    pub fn germs(&self) -> &Arc<FiniteSemigroupoid> {
        &self.quotient.semigroupoid
    }
}

/// Quotient of `𝒮 ⋉ 𝒢` by the germ relation; transitivity is checked, not assumed.
pub fn germ_quotient(theta: &LandPreaction) -> Result<GermQuotient> {
    let subject = format!("germ relation of {}", theta.name());
    if let Err(why) = theta.space().groupoid_tables() {
        return Err(Error::structural(format!("{subject}: space is not a groupoid ({why})")));
    }
    let sp = semidirect_product(theta)?;
    let actor = theta.actor();
    let n = sp.pairs.len();
    let ns = actor.base().arrow_count();
    let related = |p: ArrowId, q: ArrowId| {
        let ((s1, g1), (s2, g2)) = (sp.pairs[p], sp.pairs[q]);
        g1 == g2 && (0..ns).any(|u| actor.leq(u, s1) && actor.leq(u, s2) && theta.in_dom(u, g1))
    };
    let rel: Vec<bool> = (0..n).flat_map(|p| (0..n).map(move |q| (p, q))).map(|(p, q)| related(p, q)).collect();
    let name = |p: ArrowId| sp.semigroupoid.arrow_name(p).to_string();
    for p in 0..n {
        for q in 0..n {
            if !rel[p * n + q] {
                continue;
            }
            if let Some(r) = (0..n).find(|&r| rel[q * n + r] && !rel[p * n + r]) {
                return Err(Error::refused(
                    &subject,
                    Violation::new(
                        Rule::GermTransitivity,
                        vec![name(p), name(q), name(r)],
                        format!(
                            "{} ~ {} and {} ~ {} but not {} ~ {}",
                            name(p),
                            name(q),
                            name(q),
                            name(r),
                            name(p),
                            name(r)
                        ),
                    ),
                ));
            }
        }
    }
    let mut classes: Vec<Vec<ArrowId>> = Vec::new();
    let mut placed = vec![false; n];
    for p in 0..n {
        if placed[p] {
            continue;
        }
        let class: Vec<ArrowId> = (p..n).filter(|&q| rel[p * n + q]).collect();
        for &q in &class {
            placed[q] = true;
        }
        classes.push(class);
    }
    let congruence = validate_rigid_congruence(sp.semigroupoid.clone(), classes).map_err(|e| match e {
        Error::Invalid(mut r) => {
            r.subject = subject.clone();
            Error::Refused(r)
        }
        other => other,
    })?;
    let quotient = quotient_semigroupoid(&congruence)?;
    let groupoid = quotient.semigroupoid.groupoid_tables().ok();
    Ok(GermQuotient { semidirect: sp, congruence, quotient, groupoid })
}
