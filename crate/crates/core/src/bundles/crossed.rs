use std::collections::HashMap;
use std::sync::Arc;

use super::{AlgebraPresentation, Grading};
use crate::error::{Error, Result, Rule, ValidationReport, Violation};
use crate::rings::Elem;
use crate::semigroupoid::{ArrowId, FiniteInverseSemigroupoid, Homomorphism};
use crate::theorems::LinearMapOnBasis;

/// An action of an inverse semigroupoid on an algebra by partial isomorphisms
/// between coordinate ideals.
#[derive(Clone, Debug)]
pub struct AlgebraAction {
    name: String,
    actor: Arc<FiniteInverseSemigroupoid>,
    algebra: Arc<AlgebraPresentation>,
    /// Sorted basis indices spanning `dom Θ_s`.
    domains: Vec<Vec<usize>>,
    /// `images[s][k] = Θ_s(e_{domains[s][k]})`.
    images: Vec<Vec<Vec<Elem>>>,
    in_dom: Vec<Vec<bool>>,
    /// `(t, a, b, c)` basis indices where associativity fails.
    assoc_failure: Option<(ArrowId, usize, usize, usize)>,
}

/// Checks the ideal, inverse, multiplicativity and extension conditions.
pub fn validate_algebra_action(
    name: impl Into<String>,
    actor: Arc<FiniteInverseSemigroupoid>,
    algebra: Arc<AlgebraPresentation>,
    domains: Vec<Vec<usize>>,
    images: Vec<Vec<Vec<Elem>>>,
) -> Result<AlgebraAction> {
    let name = name.into();
    let sg = actor.base();
    let (ns, n) = (sg.arrow_count(), algebra.rank());
    if domains.len() != ns || images.len() != ns {
        return Err(Error::structural(format!("action {name}: need a domain and images for each of {ns} arrows")));
    }
    let mut in_dom = vec![vec![false; n]; ns];
    for s in 0..ns {
        let d = &domains[s];
        if d.windows(2).any(|w| w[0] >= w[1]) || d.iter().any(|&u| u >= n) {
            return Err(Error::structural(format!(
                "action {name}: domain of {} must be sorted distinct basis indices",
                sg.arrow_name(s)
            )));
        }
        if images[s].len() != d.len()
            || images[s].iter().any(|v| v.len() != n || v.iter().any(|x| !algebra.ring().contains(x)))
        {
            return Err(Error::structural(format!(
                "action {name}: images of {} have the wrong shape",
                sg.arrow_name(s)
            )));
        }
        for &u in d {
            in_dom[s][u] = true;
        }
    }
    let mut action = AlgebraAction { name, actor, algebra, domains, images, in_dom, assoc_failure: None };
    action.check().into_result()?;
    action.assoc_failure = action.find_associativity_failure();
    Ok(action)
}

impl AlgebraAction {
    fn supported_in(&self, v: &[Elem], set: &[bool]) -> Option<usize> {
        let ring = self.algebra.ring();
        v.iter().enumerate().position(|(i, x)| !ring.is_zero(x) && !set[i])
    }

    fn check(&self) -> ValidationReport {
        let a = &*self.algebra;
        let sg = self.actor.base();
        let (ns, n) = (sg.arrow_count(), a.rank());
        let sn = |s: ArrowId| sg.arrow_name(s).to_string();
        let bl = |u: usize| a.label(u).to_string();
        let mut report = ValidationReport::new(format!("action {}", self.name));

        let mut ideal_at = vec![vec![false; n]; sg.vertex_count()];
        for s in 0..ns {
            for &u in &self.domains[s] {
                ideal_at[sg.src(s)][u] = true;
            }
        }
        let everything = vec![true; n];
        let ideal_witness = |sub: &[bool], within: &[bool]| -> Option<(usize, usize)> {
            for u in (0..n).filter(|&u| sub[u]) {
                if !within[u] {
                    return Some((u, u));
                }
                for e in (0..n).filter(|&e| within[e]) {
                    if self.supported_in(&a.basis_product(e, u), sub).is_some()
                        || self.supported_in(&a.basis_product(u, e), sub).is_some()
                    {
                        return Some((u, e));
                    }
                }
            }
            None
        };
        for v in 0..sg.vertex_count() {
            if let Some((u, e)) = ideal_witness(&ideal_at[v], &everything) {
                report.push(Violation::new(
                    Rule::DomainNotIdeal,
                    vec![sg.vertex_name(v).to_string(), bl(u), bl(e)],
                    format!("product of {} and {} leaves I(Θ,{})", bl(u), bl(e), sg.vertex_name(v)),
                ));
                return report;
            }
        }
        for s in 0..ns {
            if let Some((u, e)) = ideal_witness(&self.in_dom[s], &ideal_at[sg.src(s)]) {
                report.push(Violation::new(
                    Rule::DomainNotIdeal,
                    vec![sn(s), bl(u), bl(e)],
                    format!("product of {} and {} leaves dom Θ_{}", bl(u), bl(e), sn(s)),
                ));
                return report;
            }
        }
        for s in 0..ns {
            let t = self.actor.inv(s);
            for (k, &u) in self.domains[s].iter().enumerate() {
                let img = &self.images[s][k];
                let back = self.apply(t, img);
                if back.as_deref() != Some(&a.unit_vec(u)[..]) {
                    report.push(Violation::new(
                        Rule::InverseCompatibility,
                        vec![sn(s), bl(u)],
                        format!("Θ_{}*(Θ_{}({})) != {}", sn(s), sn(s), bl(u), bl(u)),
                    ));
                    return report;
                }
            }
        }
        for s in 0..ns {
            for &u in &self.domains[s] {
                for &v in &self.domains[s] {
                    let left = self.apply(s, &a.basis_product(u, v));
                    let right = a.mul(&self.apply_basis(s, u), &self.apply_basis(s, v));
                    if left.as_deref() != Some(&right[..]) {
                        report.push(Violation::new(
                            Rule::ActionMultiplicativity,
                            vec![sn(s), bl(u), bl(v)],
                            format!(
                                "Θ_{}({}·{}) != Θ_{}({})·Θ_{}({})",
                                sn(s),
                                bl(u),
                                bl(v),
                                sn(s),
                                bl(u),
                                sn(s),
                                bl(v)
                            ),
                        ));
                        return report;
                    }
                }
            }
        }
        // Θ_s∘Θ_t ⊆ Θ_st: the composite is defined exactly on Θ_t*(dom Θ_s ∩ dom Θ_t*).
        for &(s, t) in sg.composable_pairs() {
            let st = sg.prod(s, t).expect("validated semigroupoid");
            let ts = self.actor.inv(t);
            for w in (0..n).filter(|&w| self.in_dom[s][w] && self.in_dom[ts][w]) {
                let v = self.apply_basis(ts, w);
                let ok = self.apply(st, &v).is_some_and(|x| x == self.apply_basis(s, w));
                if !ok {
                    report.push(Violation::new(
                        Rule::ExtensionLaw,
                        vec![sn(s), sn(t), bl(w)],
                        format!(
                            "Θ_{}·{} does not extend Θ_{}∘Θ_{} at Θ_{}*({})",
                            sn(s),
                            sn(t),
                            sn(s),
                            sn(t),
                            sn(t),
                            bl(w)
                        ),
                    ));
                    return report;
                }
            }
        }
        report
    }

    /// `Θ_{t*}(a·Θ_t(b))·c = Θ_{t*}(a·Θ_t(b·c))` for `a ∈ I(rng t)`, `b ∈ dom Θ_t`, `c ∈ I(src t)`.
    fn find_associativity_failure(&self) -> Option<(ArrowId, usize, usize, usize)> {
        let a = &*self.algebra;
        let sg = self.actor.base();
        let n = a.rank();
        let ideal = |v: usize| -> Vec<usize> {
            (0..n).filter(|&u| sg.arrows().any(|s| sg.src(s) == v && self.in_dom[s][u])).collect()
        };
        for t in sg.arrows() {
            let ts = self.actor.inv(t);
            let left_ideal = ideal(sg.rng(t));
            let right_ideal = ideal(sg.src(t));
            for &x in &left_ideal {
                for &b in &self.domains[t] {
                    let inner = self.apply(ts, &a.mul(&a.unit_vec(x), &self.apply_basis(t, b)));
                    for &c in &right_ideal {
                        let left = inner.as_ref().map(|v| a.mul(v, &a.unit_vec(c)));
                        let right = self
                            .apply(t, &a.basis_product(b, c))
                            .and_then(|y| self.apply(ts, &a.mul(&a.unit_vec(x), &y)));
                        if left.is_none() || left != right {
                            return Some((t, x, b, c));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn actor(&self) -> &Arc<FiniteInverseSemigroupoid> {
        &self.actor
    }

    pub fn algebra(&self) -> &Arc<AlgebraPresentation> {
        &self.algebra
    }

    pub fn domain(&self, s: ArrowId) -> &[usize] {
        &self.domains[s]
    }

    pub fn in_dom(&self, s: ArrowId, u: usize) -> bool {
        self.in_dom[s][u]
    }

    pub fn images(&self, s: ArrowId) -> &[Vec<Elem>] {
        &self.images[s]
    }

    pub fn is_associative(&self) -> bool {
        self.assoc_failure.is_none()
    }

    pub fn require_associative(&self) -> Result<()> {
        let Some((t, x, b, c)) = self.assoc_failure else { return Ok(()) };
        let a = &self.algebra;
        Err(Error::refused(
            &format!("action {}", self.name),
            Violation::new(
                Rule::ActionAssociativity,
                vec![
                    self.actor.base().arrow_name(t).to_string(),
                    a.label(x).into(),
                    a.label(b).into(),
                    a.label(c).into(),
                ],
                "Θ_t*(a·Θ_t(b))·c != Θ_t*(a·Θ_t(b·c))",
            ),
        ))
    }

    /// `Θ_s(e_u)` for `u ∈ dom Θ_s`.
    pub fn apply_basis(&self, s: ArrowId, u: usize) -> Vec<Elem> {
        let k = self.domains[s].binary_search(&u).expect("basis element in the domain");
        self.images[s][k].clone()
    }

    /// `Θ_s(v)`, or `None` when `v` leaves `dom Θ_s`.
    pub fn apply(&self, s: ArrowId, v: &[Elem]) -> Option<Vec<Elem>> {
        if self.supported_in(v, &self.in_dom[s]).is_some() {
            return None;
        }
        let ring = self.algebra.ring();
        let mut out = ring.zero_vec(self.algebra.rank());
        for (k, &u) in self.domains[s].iter().enumerate() {
            if !ring.is_zero(&v[u]) {
                ring.axpy(&mut out, &v[u], &self.images[s][k]);
            }
        }
        Some(out)
    }

    /// `Θ_s = id` on the whole algebra for every `s`.
    pub fn trivial(actor: Arc<FiniteInverseSemigroupoid>, algebra: Arc<AlgebraPresentation>) -> Result<AlgebraAction> {
        let ns = actor.base().arrow_count();
        let n = algebra.rank();
        let domains = vec![(0..n).collect(); ns];
        let images = vec![(0..n).map(|u| algebra.unit_vec(u)).collect(); ns];
        validate_algebra_action("trivial", actor, algebra, domains, images)
    }
}

/// An algebra whose basis is indexed by pairs `(s, u)`.
#[derive(Clone, Debug)]
pub struct CrossedProduct {
    pub algebra: AlgebraPresentation,
    pub pairs: Vec<(ArrowId, usize)>,
    index: HashMap<(ArrowId, usize), usize>,
}

impl CrossedProduct {
    pub fn index(&self, s: ArrowId, u: usize) -> Option<usize> {
        self.index.get(&(s, u)).copied()
    }
}

fn assemble(
    name: String,
    theta: &AlgebraAction,
    grading: Option<&Homomorphism>,
    slots: impl Fn(ArrowId) -> Vec<usize>,
    product: impl Fn(ArrowId, usize, ArrowId, usize) -> Option<Vec<Elem>>,
) -> Result<CrossedProduct> {
    let sg = theta.actor.base();
    let a = &*theta.algebra;
    let ring = a.ring();
    let pairs: Vec<(ArrowId, usize)> = sg.arrows().flat_map(|s| slots(s).into_iter().map(move |u| (s, u))).collect();
    let index: HashMap<_, _> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let labels = pairs.iter().map(|&(s, u)| format!("{}·{}", sg.arrow_name(s), a.label(u))).collect();
    let m = pairs.len();
    let algebra = AlgebraPresentation::from_dense(name.clone(), ring, labels, |p, q| {
        let ((x, u), (y, v)) = (pairs[p], pairs[q]);
        let mut out = ring.zero_vec(m);
        let Some(xy) = sg.prod(x, y) else { return Ok(out) };
        let value = product(x, u, y, v).ok_or_else(|| {
            Error::internal(format!("{name}: product of ({}, {}) leaves the action domains", pairs[p].0, pairs[q].0))
        })?;
        for (w, c) in value.iter().enumerate().filter(|(_, c)| !ring.is_zero(c)) {
            let Some(&i) = index.get(&(xy, w)) else {
                return Err(Error::internal(format!(
                    "{name}: product lands outside the slot of {}",
                    sg.arrow_name(xy)
                )));
            };
            out[i] = c.clone();
        }
        Ok(out)
    })?;
    let algebra = match grading {
        None => algebra,
        Some(c) => {
            if !c.source().same_tables(sg) {
                return Err(Error::structural(format!(
                    "grading {} does not start at the acting semigroupoid",
                    c.name()
                )));
            }
            let degrees = pairs.iter().map(|&(s, _)| c.apply(s)).collect();
            algebra.with_grading(Grading { semigroupoid: c.target().clone(), degrees })?
        }
    };
    Ok(CrossedProduct { algebra, pairs, index })
}

/// `𝒮⋆A` on basis `δ_s·v` with `(δ_x a)(δ_y b) = δ_{xy} Θ_{y*}(a·Θ_y(b))`.
pub fn naive_crossed_product(theta: &AlgebraAction, grading: Option<&Homomorphism>) -> Result<CrossedProduct> {
    theta.require_associative()?;
    let a = &*theta.algebra;
    let cp = assemble(
        format!("{}⋆{}", theta.actor.name(), a.name()),
        theta,
        grading,
        |s| theta.domains[s].clone(),
        |_, u, y, v| {
            let yb = theta.apply_basis(y, v);
            theta.apply(theta.actor.inv(y), &a.mul(&a.unit_vec(u), &yb))
        },
    )?;
    Ok(CrossedProduct {
        algebra: cp.algebra.with_provenance(format!("crossed product of {} by {}", a.name(), theta.name)),
        ..cp
    })
}

/// `ℒ(Θ)` on basis `δ_s·w`, `w ∈ ran Θ_s`, with `(δ_x a)(δ_y b) = δ_{xy} Θ_x(Θ_{x*}(a)·b)`.
pub fn lscript_algebra(theta: &AlgebraAction, grading: Option<&Homomorphism>) -> Result<CrossedProduct> {
    theta.require_associative()?;
    let a = &*theta.algebra;
    let cp = assemble(
        format!("L({})", theta.name),
        theta,
        grading,
        |s| theta.domains[theta.actor.inv(s)].clone(),
        |x, u, _, v| {
            let xa = theta.apply_basis(theta.actor.inv(x), u);
            theta.apply(x, &a.mul(&xa, &a.unit_vec(v)))
        },
    )?;
    Ok(CrossedProduct {
        algebra: cp.algebra.with_provenance(format!("range-side crossed product of {}", theta.name)),
        ..cp
    })
}

/// `φ(δ_s a) = δ_s Θ_s(a)` from `𝒮⋆A` to `ℒ(Θ)`, with inverse `δ_s b ↦ δ_s Θ_{s*}(b)`.
pub fn lscript_iso(theta: &AlgebraAction) -> Result<LinearMapOnBasis> {
    let naive = naive_crossed_product(theta, None)?;
    let ell = lscript_algebra(theta, None)?;
    let ring = theta.algebra.ring();
    let spread = |target: &CrossedProduct, s: ArrowId, v: &[Elem]| -> Result<Vec<Elem>> {
        let mut out = ring.zero_vec(target.pairs.len());
        for (w, c) in v.iter().enumerate().filter(|(_, c)| !ring.is_zero(c)) {
            let i = target.index(s, w).ok_or_else(|| Error::internal("Θ_s leaves its range"))?;
            out[i] = c.clone();
        }
        Ok(out)
    };
    let images =
        naive.pairs.iter().map(|&(s, u)| spread(&ell, s, &theta.apply_basis(s, u))).collect::<Result<Vec<_>>>()?;
    let inverse = ell
        .pairs
        .iter()
        .map(|&(s, w)| spread(&naive, s, &theta.apply_basis(theta.actor.inv(s), w)))
        .collect::<Result<Vec<_>>>()?;
    LinearMapOnBasis::new(
        format!("phi({})", theta.name),
        Arc::new(naive.algebra),
        Arc::new(ell.algebra),
        images,
        Some(inverse),
    )
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::actions::fixtures::inverse;
    use crate::bundles::sectional::ring_algebra;
    use crate::bundles::semigroupoid_algebra;
    use crate::rings::Ring;
    use crate::semigroupoid::{samples, validate_semigroupoid};

    /// `RX` for `X` a set of points: pointwise functions.
    pub fn points(ring: &Ring, pts: &[&str]) -> Arc<AlgebraPresentation> {
        let g = Arc::new(validate_semigroupoid(&samples::unit_groupoid(pts)).unwrap());
        Arc::new(semigroupoid_algebra(&ring_algebra(ring), g).unwrap().without_grading())
    }

    /// `{1, e}` on `R{x, y}` with `Θ_1 = id`, `Θ_e = id` on the functions supported at `x`.
    pub fn semilattice(ring: &Ring) -> AlgebraAction {
        let a = points(ring, &["x", "y"]);
        let domains = vec![vec![0, 1], vec![0]];
        let images = vec![vec![a.unit_vec(0), a.unit_vec(1)], vec![a.unit_vec(0)]];
        validate_algebra_action("semilattice", inverse(&samples::semilattice()), a, domains, images).unwrap()
    }

    /// ℤ/2 acting on `R²` by swapping the two points.
    pub fn swap(ring: &Ring) -> AlgebraAction {
        let a = points(ring, &["p", "q"]);
        let domains = vec![vec![0, 1], vec![0, 1]];
        let images = vec![vec![a.unit_vec(0), a.unit_vec(1)], vec![a.unit_vec(1), a.unit_vec(0)]];
        validate_algebra_action("swap", inverse(&samples::z2()), a, domains, images).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::actions::fixtures::{inverse, space};
    use crate::bundles::sectional::ring_algebra;
    use crate::bundles::semigroupoid_algebra;
    use crate::rings::Ring;
    use crate::semigroupoid::samples;

    #[test]
    fn semilattice_crossed_product_has_rank_three() {
        let theta = semilattice(&Ring::rationals());
        let cp = naive_crossed_product(&theta, None).unwrap();
        assert_eq!(cp.algebra.labels(), ["1·x", "1·y", "e·x"]);
        cp.algebra.validate().unwrap();
    }

    #[test]
    fn trivial_action_matches_semigroupoid_algebra() {
        let r = Ring::zmod(6);
        let z2 = inverse(&samples::z2());
        let a = Arc::new(semigroupoid_algebra(&ring_algebra(&r), space(&samples::klein())).unwrap().without_grading());
        let theta = AlgebraAction::trivial(z2.clone(), a.clone()).unwrap();
        let cp = naive_crossed_product(&theta, None).unwrap();
        let direct = semigroupoid_algebra(&a, z2.base_arc().clone()).unwrap();
        assert!(cp.algebra.same_table(&direct));
    }

    #[test]
    fn swap_gives_matrix_units() {
        let r = Ring::rationals();
        let theta = swap(&r);
        let cp = naive_crossed_product(&theta, None).unwrap();
        assert_eq!(cp.algebra.rank(), 4);
        cp.algebra.validate().unwrap();
        // δ_u·p, δ_u·q, δ_g·p, δ_g·q ↦ e11, e22, e21, e12
        let m2 = Arc::new(crate::bundles::algebra::fixtures::matrix_units(&r).without_grading());
        let images = [0, 3, 2, 1].map(|k| m2.unit_vec(k)).to_vec();
        let inverse = [0, 3, 2, 1].map(|k| cp.algebra.unit_vec(k)).to_vec();
        let t = LinearMapOnBasis::new("m2", Arc::new(cp.algebra), m2, images, Some(inverse)).unwrap();
        assert!(t.certify().unwrap().passed());
    }

    #[test]
    fn lscript_maps_certify() {
        let r = Ring::rationals();
        for theta in [semilattice(&r), swap(&r)] {
            let phi = lscript_iso(&theta).unwrap();
            let c = phi.certify().unwrap();
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn non_ideal_domain_is_rejected() {
        let r = Ring::rationals();
        // on R[ℤ/2] the span of g is not an ideal
        let a = Arc::new(semigroupoid_algebra(&ring_algebra(&r), space(&samples::z2())).unwrap().without_grading());
        let domains = vec![vec![0, 1], vec![1]];
        let images = vec![vec![a.unit_vec(0), a.unit_vec(1)], vec![a.unit_vec(1)]];
        let err = validate_algebra_action("bad", inverse(&samples::semilattice()), a, domains, images).unwrap_err();
        assert!(err.report().unwrap().has(Rule::DomainNotIdeal));
    }
}
