//! The isomorphism pipelines, each materialized as an explicit map on bases
//! and certified by enumeration.

mod crossed;
mod germ;
mod map;
mod quotient;
mod sampling;
mod smash;
mod tensor;

pub use crossed::{
    bundle_semidirect, crossed_theorem, induced_theta, validate_bundle_action, BundleAction, BundleSemidirect,
    CrossedTheorem,
};
pub use germ::{germ_corollary, GermCorollary};
pub use map::{Certificate, Check, LinearMapOnBasis, LinearSummary};
pub use quotient::{
    quotient_bundle, quotient_map_and_kernel, validate_bundle_congruence, BundleCongruence, QuotientBundle,
    QuotientTheorem,
};
pub use sampling::{random_section, sample_associativity};
pub use smash::{skew_product, smash_product, smash_theorem, SkewProduct, SmashProduct, SmashTheorem};
pub use tensor::{product_bundle, tensor_product_algebra, tensor_theorem, TensorTheorem};

use std::collections::BTreeMap;

use serde::Serialize;

/// Serializable summary of one theorem instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub theorem: String,
    pub instance: String,
    pub passed: bool,
    pub ranks: BTreeMap<String, usize>,
    pub certificates: Vec<Certificate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
}

impl Verdict {
    pub fn new(theorem: &str, instance: impl Into<String>) -> Verdict {
        Verdict {
            theorem: theorem.into(),
            instance: instance.into(),
            passed: true,
            ranks: BTreeMap::new(),
            certificates: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn rank(mut self, key: &str, value: usize) -> Verdict {
        self.ranks.insert(key.into(), value);
        self
    }

    pub fn certificate(mut self, c: Certificate) -> Verdict {
        self.passed &= c.passed();
        self.certificates.push(c);
        self
    }

    pub fn check(mut self, c: Check) -> Verdict {
        self.passed &= c.passed;
        self.checks.push(c);
        self
    }

    /// First failing check across certificates and standalone checks.
    pub fn first_failure(&self) -> Option<&Check> {
        self.certificates.iter().flat_map(|c| c.first_failure()).chain(self.checks.iter().filter(|c| !c.passed)).next()
    }
}

/// A check that passes when `ok`, failing with `detail` otherwise.
pub(crate) fn expect(name: &str, ok: bool, detail: impl FnOnce() -> String) -> Check {
    if ok {
        Check::pass(name)
    } else {
        Check::fail(name, Vec::new(), detail())
    }
}

/// Fiber `π⁻¹(f(h))` over each arrow `h` of `base`; `f` must send composable pairs to composable pairs.
pub(crate) fn pullback(
    b: &crate::bundles::Bundle,
    name: String,
    base: std::sync::Arc<crate::semigroupoid::FiniteSemigroupoid>,
    f: impl Fn(crate::semigroupoid::ArrowId) -> crate::semigroupoid::ArrowId,
) -> crate::error::Result<crate::bundles::Bundle> {
    use crate::bundles::{validate_bundle, BundleSpec, FiberMode};
    use crate::error::Error;
    let ranks = base.arrows().map(|h| b.rank(f(h))).collect();
    let mut constants = Vec::new();
    let mut twists = Vec::new();
    for &(p, q) in base.composable_pairs() {
        let missing = || Error::internal(format!("pullback {name}: images of a composable pair do not compose"));
        match b.mode() {
            FiberMode::StructureConstants => {
                constants.push(((p, q), b.constants(f(p), f(q)).ok_or_else(missing)?.clone()))
            }
            FiberMode::RingFiber => twists.push(((p, q), b.twist(f(p), f(q)).ok_or_else(missing)?.clone())),
        }
    }
    let spec = BundleSpec { name, mode: b.mode(), ranks, constants, twists };
    validate_bundle(&spec, b.ring(), base)
}
