use std::collections::HashMap;
use std::sync::Arc;

use super::LandPreaction;
use crate::error::{Error, Result};
use crate::semigroupoid::{ArrowId, FiniteSemigroupoid};

/// `𝒮 ⋉ Λ` together with the pair behind each arrow.
#[derive(Clone, Debug)]
pub struct SemidirectProduct {
    pub semigroupoid: Arc<FiniteSemigroupoid>,
    /// Arrow id → `(s, a)` with `a ∈ dom θ_s`, ordered by `s` then `a`.
    pub pairs: Vec<(ArrowId, ArrowId)>,
    index: HashMap<(ArrowId, ArrowId), ArrowId>,
}

impl SemidirectProduct {
    pub fn arrow(&self, s: ArrowId, a: ArrowId) -> Option<ArrowId> {
        self.index.get(&(s, a)).copied()
    }
}

/// Builds `𝒮 ⋉ Λ`; refuses non-associative actions.
pub fn semidirect_product(theta: &LandPreaction) -> Result<SemidirectProduct> {
    theta.require_associative()?;
    let actor = theta.actor();
    let s_base = actor.base();
    let space = theta.space();
    let pairs: Vec<(ArrowId, ArrowId)> =
        s_base.arrows().flat_map(|s| theta.domain(s).into_iter().map(move |a| (s, a))).collect();
    let index: HashMap<_, _> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let nlv = space.vertex_count();
    let vertex = |v: usize, w: usize| v * nlv + w;
    let vertices = (0..s_base.vertex_count())
        .flat_map(|v| (0..nlv).map(move |w| (v, w)))
        .map(|(v, w)| format!("({},{})", s_base.vertex_name(v), space.vertex_name(w)))
        .collect();
    let names = pairs.iter().map(|&(s, a)| format!("({},{})", s_base.arrow_name(s), space.arrow_name(a))).collect();
    let src = pairs.iter().map(|&(s, a)| vertex(s_base.src(s), space.src(a))).collect();
    let rng = pairs
        .iter()
        .map(|&(s, a)| vertex(s_base.rng(s), space.rng(theta.apply(s, a).expect("a in dom θ_s"))))
        .collect();
    let mut escaped = None;
    let product = |p: ArrowId, q: ArrowId| {
        let ((s, a), (t, b)) = (pairs[p], pairs[q]);
        let st = s_base.prod(s, t)?;
        let tb = theta.apply(t, b)?;
        let x = theta.apply(actor.inv(t), space.prod(a, tb)?)?;
        index.get(&(st, x)).copied()
    };
    // The product is total on composable pairs; a gap means the action data is inconsistent.
    for (p, &(s, a)) in pairs.iter().enumerate() {
        for (q, &(t, b)) in pairs.iter().enumerate() {
            let tb = theta.apply(t, b).expect("b in dom θ_t");
            if s_base.src(s) == s_base.rng(t) && space.src(a) == space.rng(tb) && product(p, q).is_none() {
                escaped.get_or_insert((p, q));
            }
        }
    }
    if let Some((p, q)) = escaped {
        return Err(Error::internal(format!(
            "semidirect product of {}: composable pair ({}, {}) has no product in the arrow set",
            theta.name(),
            pairs[p].0,
            pairs[q].0
        )));
    }
    let semigroupoid =
        FiniteSemigroupoid::build(format!("{}⋉{}", s_base.name(), space.name()), vertices, names, src, rng, product)?;
    Ok(SemidirectProduct { semigroupoid: Arc::new(semigroupoid), pairs, index })
}
