use std::sync::Arc;

use super::{expect, LinearMapOnBasis, Verdict};
use crate::actions::{semidirect_product, LandPreaction, SemidirectProduct};
use crate::bundles::sectional::fiber_basis;
use crate::bundles::{
    lscript_iso, naive_crossed_product, sectional_algebra, validate_algebra_action, validate_bundle, AlgebraAction,
    AlgebraPresentation, Bundle, BundleSpec, FiberMode,
};
use crate::error::{Error, Result, Rule, ValidationReport, Violation};
use crate::rings::Matrix;
use crate::semigroupoid::ArrowId;

/// An action on a bundle: an action on its base plus fiber maps
/// `L_{s,γ}: π⁻¹(γ) → π⁻¹(θ_s(γ))` for `γ ∈ dom θ_s`.
#[derive(Clone, Debug)]
pub struct BundleAction {
    name: String,
    bundle: Arc<Bundle>,
    base_action: Arc<LandPreaction>,
    fibers: Vec<Vec<Option<Matrix>>>,
}

/// Unlisted fiber maps default to the identity when the ranks agree.
pub fn validate_bundle_action(
    name: impl Into<String>,
    bundle: Arc<Bundle>,
    base_action: Arc<LandPreaction>,
    fiber_maps: Vec<((ArrowId, ArrowId), Matrix)>,
) -> Result<BundleAction> {
    let name = name.into();
    let g = bundle.base().clone();
    let ring = bundle.ring().clone();
    if !base_action.space().same_tables(&g) {
        return Err(Error::structural(format!(
            "action {name}: base action does not act on the base of {}",
            bundle.name()
        )));
    }
    let actor = base_action.actor().clone();
    let sg = actor.base();
    let (ns, ng) = (sg.arrow_count(), g.arrow_count());
    let sn = |s: ArrowId| sg.arrow_name(s).to_string();
    let gn = |x: ArrowId| g.arrow_name(x).to_string();
    let mut fibers: Vec<Vec<Option<Matrix>>> = vec![vec![None; ng]; ns];
    for ((s, x), m) in fiber_maps {
        if s >= ns || x >= ng {
            return Err(Error::structural(format!("action {name}: fiber map on an unknown arrow")));
        }
        let Some(y) = base_action.apply(s, x) else {
            return Err(Error::structural(format!("action {name}: fiber map for {} outside dom θ_{}", gn(x), sn(s))));
        };
        if m.rows() != bundle.rank(y) || m.cols() != bundle.rank(x) {
            return Err(Error::structural(format!(
                "action {name}: L_{},{} must be {}x{}",
                sn(s),
                gn(x),
                bundle.rank(y),
                bundle.rank(x)
            )));
        }
        if fibers[s][x].replace(m).is_some() {
            return Err(Error::structural(format!("action {name}: L_{},{} given twice", sn(s), gn(x))));
        }
    }
    for s in 0..ns {
        for x in 0..ng {
            let Some(y) = base_action.apply(s, x) else { continue };
            if fibers[s][x].is_none() {
                if bundle.rank(x) != bundle.rank(y) {
                    return Err(Error::structural(format!("action {name}: missing fiber map L_{},{}", sn(s), gn(x))));
                }
                fibers[s][x] = Some(Matrix::identity(&ring, bundle.rank(x)));
            }
        }
    }
    let action = BundleAction { name, bundle, base_action, fibers };
    action.check().into_result()?;
    Ok(action)
}

impl BundleAction {
    fn check(&self) -> ValidationReport {
        let b = &*self.bundle;
        let g = b.base();
        let ring = b.ring();
        let theta = &*self.base_action;
        let actor = theta.actor();
        let sg = actor.base();
        let sn = |s: ArrowId| sg.arrow_name(s).to_string();
        let gn = |x: ArrowId| g.arrow_name(x).to_string();
        let mut report = ValidationReport::new(format!("bundle action {}", self.name));
        for s in sg.arrows() {
            for x in theta.domain(s) {
                let y = theta.apply(s, x).expect("x in dom θ_s");
                let back = self.fiber(actor.inv(s), y).mul(ring, self.fiber(s, x));
                if !back.is_ok_and(|m| m.is_identity(ring)) {
                    report.push(Violation::new(
                        Rule::FiberInvertibility,
                        vec![sn(s), gn(x)],
                        format!("L_{}*,{} · L_{},{} is not the identity", sn(s), gn(y), sn(s), gn(x)),
                    ));
                    return report;
                }
            }
        }
        for s in sg.arrows() {
            for &(x1, x2) in g.composable_pairs() {
                if !theta.in_dom(s, x1) || !theta.in_dom(s, x2) {
                    continue;
                }
                let x = g.prod(x1, x2).expect("validated semigroupoid");
                let (y1, y2) = (theta.apply(s, x1).unwrap(), theta.apply(s, x2).unwrap());
                let Some(lx) = self.fibers[s][x].as_ref() else { continue };
                for i in 0..b.rank(x1) {
                    for j in 0..b.rank(x2) {
                        let (ei, ej) = (ring.unit_vec(b.rank(x1), i), ring.unit_vec(b.rank(x2), j));
                        let left = lx.mul_vec(ring, &b.mul(x1, x2, &ei, &ej));
                        let right =
                            b.mul(y1, y2, &self.fiber(s, x1).mul_vec(ring, &ei), &self.fiber(s, x2).mul_vec(ring, &ej));
                        if left != right {
                            report.push(Violation::new(
                                Rule::FiberIntertwining,
                                vec![sn(s), gn(x1), gn(x2)],
                                format!("L_{} does not preserve e{i}·e{j} over ({}, {})", sn(s), gn(x1), gn(x2)),
                            ));
                            return report;
                        }
                    }
                }
            }
        }
        for &(s, t) in sg.composable_pairs() {
            let st = sg.prod(s, t).expect("validated semigroupoid");
            for x in theta.domain(t) {
                let y = theta.apply(t, x).unwrap();
                if !theta.in_dom(s, y) {
                    continue;
                }
                let composite = self.fiber(s, y).mul(ring, self.fiber(t, x));
                let ok = composite.is_ok_and(|m| self.fibers[st][x].as_ref() == Some(&m));
                if !ok {
                    report.push(Violation::new(
                        Rule::ExtensionLaw,
                        vec![sn(s), sn(t), gn(x)],
                        format!("L_{},{} · L_{},{} != L_{}·{},{}", sn(s), gn(y), sn(t), gn(x), sn(s), sn(t), gn(x)),
                    ));
                    return report;
                }
            }
        }
        report
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bundle(&self) -> &Arc<Bundle> {
        &self.bundle
    }

    pub fn base_action(&self) -> &Arc<LandPreaction> {
        &self.base_action
    }

    /// `L_{s,γ}`; panics outside `dom θ_s`.
    pub fn fiber(&self, s: ArrowId, x: ArrowId) -> &Matrix {
        self.fibers[s][x].as_ref().expect("fiber map inside dom θ_s")
    }
}

#[derive(Clone, Debug)]
pub struct BundleSemidirect {
    pub semidirect: SemidirectProduct,
    pub bundle: Bundle,
}

/// `𝒮 ⋉ π` over `𝒮 ⋉ Γ`, fiber `π⁻¹(γ)` over `(s, γ)`, with the product
/// `(s,x)(t,y) = (st, θ_{t*}(x·θ_t(y)))` read off on fibers.
pub fn bundle_semidirect(theta: &BundleAction) -> Result<BundleSemidirect> {
    let b = &*theta.bundle;
    let ring = b.ring();
    if !ring.is_commutative() {
        return Err(Error::capability(format!("semidirect bundles need a commutative ring, not {}", ring.describe())));
    }
    let base = &*theta.base_action;
    let sp = semidirect_product(base)?;
    let actor = base.actor();
    let g = b.base();
    let ranks: Vec<usize> = sp.pairs.iter().map(|&(_, x)| b.rank(x)).collect();
    let mut constants = Vec::new();
    for &(p, q) in sp.semigroupoid.composable_pairs() {
        let ((_, x), (t, y)) = (sp.pairs[p], sp.pairs[q]);
        let ty = base.apply(t, y).expect("y in dom θ_t");
        let xty = g.prod(x, ty).expect("composable in the semidirect product");
        let back = theta.fiber(actor.inv(t), xty);
        let c = (0..b.rank(x))
            .map(|i| {
                (0..b.rank(y))
                    .map(|j| {
                        let ei = ring.unit_vec(b.rank(x), i);
                        let lj = theta.fiber(t, y).mul_vec(ring, &ring.unit_vec(b.rank(y), j));
                        back.mul_vec(ring, &b.mul(x, ty, &ei, &lj))
                    })
                    .collect()
            })
            .collect();
        constants.push(((p, q), c));
    }
    let spec = BundleSpec {
        name: format!("{}⋉{}", actor.name(), b.name()),
        mode: FiberMode::StructureConstants,
        ranks,
        constants,
        twists: Vec::new(),
    };
    let bundle = validate_bundle(&spec, ring, sp.semigroupoid.clone())?;
    Ok(BundleSemidirect { semidirect: sp, bundle })
}

/// `Θ_s(f)(γ) = L_s(f(θ_{s*}(γ)))` on `𝒜(π)`, with `dom Θ_s` the sections supported in `dom θ_s`.
pub fn induced_theta(theta: &BundleAction) -> Result<AlgebraAction> {
    let b = &*theta.bundle;
    let ring = b.ring();
    let base = &*theta.base_action;
    let algebra: Arc<AlgebraPresentation> = Arc::new(sectional_algebra(b, None)?);
    let basis = fiber_basis(b);
    let sg = base.actor().base();
    let mut domains = Vec::with_capacity(sg.arrow_count());
    let mut images = Vec::with_capacity(sg.arrow_count());
    for s in sg.arrows() {
        let dom: Vec<usize> = (0..basis.len()).filter(|&u| base.in_dom(s, basis[u].0)).collect();
        let img = dom
            .iter()
            .map(|&u| {
                let (x, i) = basis[u];
                let y = base.apply(s, x).expect("x in dom θ_s");
                let column = theta.fiber(s, x).column(i);
                let mut v = ring.zero_vec(algebra.rank());
                v[b.offset(y)..b.offset(y) + b.rank(y)].clone_from_slice(&column);
                v
            })
            .collect();
        domains.push(dom);
        images.push(img);
    }
    validate_algebra_action(format!("Θ[{}]", theta.name), base.actor().clone(), algebra, domains, images)
}

#[derive(Clone, Debug)]
pub struct CrossedTheorem {
    /// `𝒜(𝒮⋉π) → 𝒮⋆𝒜(π)`.
    pub phi: LinearMapOnBasis,
    /// `𝒮⋆𝒜(π) → 𝒜(𝒮⋉π)`, `Ψ(f)(s,γ) = (s, f(s)(γ))`.
    pub psi: LinearMapOnBasis,
    /// `𝒮⋆𝒜(π) → ℒ(Θ)`.
    pub lscript: LinearMapOnBasis,
    pub verdict: Verdict,
}

pub fn crossed_theorem(theta: &BundleAction) -> Result<CrossedTheorem> {
    let bs = bundle_semidirect(theta)?;
    let left = sectional_algebra(&bs.bundle, None)?;
    let induced = induced_theta(theta)?;
    let cp = naive_crossed_product(&induced, None)?;
    let basis = fiber_basis(&theta.bundle);
    let mut images = Vec::with_capacity(cp.pairs.len());
    let mut inverse = vec![Vec::new(); left.rank()];
    for (p, &(s, u)) in cp.pairs.iter().enumerate() {
        let (x, i) = basis[u];
        let arrow = bs
            .semidirect
            .arrow(s, x)
            .ok_or_else(|| Error::internal(format!("({s}, {x}) missing from the semidirect product")))?;
        let k = bs.bundle.offset(arrow) + i;
        images.push(left.unit_vec(k));
        inverse[k] = cp.algebra.unit_vec(p);
    }
    if inverse.iter().any(Vec::is_empty) {
        return Err(Error::internal("Ψ is not onto the semidirect sectional basis"));
    }
    let (rl, rr) = (left.rank(), cp.algebra.rank());
    let psi = LinearMapOnBasis::new(
        format!("Psi[{}]", theta.name),
        Arc::new(cp.algebra),
        Arc::new(left),
        images,
        Some(inverse),
    )?;
    let phi = psi.inverted(format!("Phi[{}]", theta.name)).expect("declared above");
    let lscript = lscript_iso(&induced)?;
    let verdict = Verdict::new("crossed", theta.name.clone())
        .rank("semidirect-sectional", rl)
        .rank("crossed-product", rr)
        .certificate(psi.certify()?)
        .certificate(phi.certify()?)
        .certificate(lscript.certify()?)
        .check(expect("induced-associative", induced.is_associative(), || {
            format!("Θ[{}] is not associative", theta.name)
        }));
    Ok(CrossedTheorem { phi, psi, lscript, verdict })
}
