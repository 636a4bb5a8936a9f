//! ∧-preactions of inverse semigroupoids on semigroupoids, semidirect
//! products, rigid congruences with their quotients, and germ quotients.

mod congruence;
mod germ;
mod semidirect;

pub use congruence::{quotient_semigroupoid, validate_rigid_congruence, Quotient, RigidCongruence};
pub use germ::{germ_quotient, GermQuotient};
pub use semidirect::{semidirect_product, SemidirectProduct};

use std::sync::Arc;

use crate::error::{Error, Result, Rule, ValidationReport, Violation};
use crate::semigroupoid::{ArrowId, FiniteInverseSemigroupoid, FiniteSemigroupoid};

/// Witness triple for a failed associativity condition: `(s, t, u, a, b, c)`.
pub type AssociativityWitness = [ArrowId; 6];

/// A validated family of partial isomorphisms `θ_s` with its classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LandPreaction {
    name: String,
    actor: Arc<FiniteInverseSemigroupoid>,
    space: Arc<FiniteSemigroupoid>,
    maps: Vec<Vec<Option<ArrowId>>>,
    partial: bool,
    global: bool,
    assoc_failure: Option<AssociativityWitness>,
}

/// `sub` is an ideal of `within` (both as arrow sets of `g`).
fn ideal_witness(g: &FiniteSemigroupoid, sub: &[bool], within: &[bool]) -> Option<(ArrowId, ArrowId, bool)> {
    for x in g.arrows() {
        if !sub[x] {
            continue;
        }
        if !within[x] {
            return Some((x, x, false));
        }
        for y in g.arrows().filter(|&y| within[y]) {
            if let Some(xy) = g.prod(x, y) {
                if !sub[xy] {
                    return Some((x, y, true));
                }
            }
            if let Some(yx) = g.prod(y, x) {
                if !sub[yx] {
                    return Some((y, x, true));
                }
            }
        }
    }
    None
}

/// Checks the four ∧-preaction axioms and classifies the result.
///
/// `maps[s][x] = Some(y)` records `θ_s(x) = y`; absent entries are outside `dom θ_s`.
pub fn validate_preaction(
    name: impl Into<String>,
    actor: Arc<FiniteInverseSemigroupoid>,
    space: Arc<FiniteSemigroupoid>,
    maps: Vec<Vec<Option<ArrowId>>>,
) -> Result<LandPreaction> {
    let name = name.into();
    let s_base = actor.base();
    let (ns, nl) = (s_base.arrow_count(), space.arrow_count());
    if maps.len() != ns || maps.iter().any(|m| m.len() != nl || m.iter().flatten().any(|&y| y >= nl)) {
        return Err(Error::structural(format!(
            "action {name}: maps must cover {ns} actor arrows over {nl} space arrows"
        )));
    }
    let sn = |s: ArrowId| s_base.arrow_name(s).to_string();
    let ln = |x: ArrowId| space.arrow_name(x).to_string();
    let mut report = ValidationReport::new(format!("action {name}"));
    let first = |report: &mut ValidationReport, rule: Rule, w: Vec<String>, d: String| {
        if !report.has(rule) {
            report.push(Violation::new(rule, w, d));
        }
    };

    let dom: Vec<Vec<bool>> = maps.iter().map(|m| m.iter().map(Option::is_some).collect()).collect();
    let mut ran: Vec<Vec<bool>> = vec![vec![false; nl]; ns];
    for s in 0..ns {
        for y in maps[s].iter().flatten() {
            ran[s][*y] = true;
        }
    }
    let nv = s_base.vertex_count();
    let mut ideal_at: Vec<Vec<bool>> = vec![vec![false; nl]; nv];
    for s in 0..ns {
        for x in 0..nl {
            ideal_at[s_base.src(s)][x] |= dom[s][x];
        }
    }
    let everything = vec![true; nl];

    // (i)
    for v in 0..nv {
        if let Some((x, y, _)) = ideal_witness(&space, &ideal_at[v], &everything) {
            first(
                &mut report,
                Rule::IdealProperty,
                vec![s_base.vertex_name(v).to_string(), ln(x), ln(y)],
                format!("I(θ,{}) is not an ideal: {}·{} leaves it", s_base.vertex_name(v), ln(x), ln(y)),
            );
        }
    }
    // (ii)
    for s in 0..ns {
        if let Some((x, y, _)) = ideal_witness(&space, &dom[s], &ideal_at[s_base.src(s)]) {
            first(
                &mut report,
                Rule::DomainIdeal,
                vec![sn(s), ln(x), ln(y)],
                format!("dom θ_{} is not an ideal of I(θ,src {}) at ({}, {})", sn(s), sn(s), ln(x), ln(y)),
            );
        }
        if let Some((x, y, _)) = ideal_witness(&space, &ran[s], &ideal_at[s_base.rng(s)]) {
            first(
                &mut report,
                Rule::RangeIdeal,
                vec![sn(s), ln(x), ln(y)],
                format!("ran θ_{} is not an ideal of I(θ,rng {}) at ({}, {})", sn(s), sn(s), ln(x), ln(y)),
            );
        }
        let m = &maps[s];
        let mut seen = vec![None; nl];
        for x in 0..nl {
            let Some(y) = m[x] else { continue };
            if let Some(prev) = seen[y] {
                first(
                    &mut report,
                    Rule::PartialIsomorphism,
                    vec![sn(s), ln(prev), ln(x)],
                    format!("θ_{} maps both {} and {} to {}", sn(s), ln(prev), ln(x), ln(y)),
                );
            }
            seen[y] = Some(x);
        }
        'iso: for x in 0..nl {
            let Some(fx) = m[x] else { continue };
            for y in 0..nl {
                let Some(fy) = m[y] else { continue };
                let left = space.prod(x, y).map(|xy| m[xy]);
                let right = space.prod(fx, fy);
                let ok = match (left, right) {
                    (None, None) => true,
                    (Some(img), Some(r)) => img == Some(r),
                    _ => false,
                };
                if !ok {
                    first(
                        &mut report,
                        Rule::PartialIsomorphism,
                        vec![sn(s), ln(x), ln(y)],
                        format!("θ_{} does not preserve the product of ({}, {})", sn(s), ln(x), ln(y)),
                    );
                    break 'iso;
                }
            }
        }
    }
    // (iii)
    'inv: for s in 0..ns {
        let t = actor.inv(s);
        for x in 0..nl {
            if let Some(y) = maps[s][x] {
                if maps[t][y] != Some(x) {
                    first(
                        &mut report,
                        Rule::InverseCompatibility,
                        vec![sn(s), ln(x)],
                        format!("θ_{}*(θ_{}({})) != {}", sn(s), sn(s), ln(x), ln(x)),
                    );
                    break 'inv;
                }
            }
        }
        for y in 0..nl {
            if maps[t][y].is_some() && !ran[s][y] {
                first(
                    &mut report,
                    Rule::InverseCompatibility,
                    vec![sn(s), ln(y)],
                    format!("{} is in dom θ_{}* but not in ran θ_{}", ln(y), sn(s), sn(s)),
                );
                break 'inv;
            }
        }
    }
    // (iv)
    let mut global = true;
    'ext: for &(s, t) in s_base.composable_pairs() {
        let st = s_base.prod(s, t).expect("validated semigroupoid");
        for x in 0..nl {
            let through = maps[t][x].and_then(|y| maps[s][y]);
            match through {
                Some(z) if maps[st][x] != Some(z) => {
                    first(
                        &mut report,
                        Rule::ExtensionLaw,
                        vec![sn(s), sn(t), ln(x)],
                        format!(
                            "θ_{}(θ_{}({})) = {} but θ_{}·{} does not agree",
                            sn(s),
                            sn(t),
                            ln(x),
                            ln(z),
                            sn(s),
                            sn(t)
                        ),
                    );
                    break 'ext;
                }
                None if maps[st][x].is_some() => global = false,
                _ => {}
            }
        }
    }
    report.into_result()?;

    let mut partial = true;
    for s in 0..ns {
        for t in 0..ns {
            if actor.leq(s, t) && (0..nl).any(|x| dom[s][x] && !dom[t][x]) {
                partial = false;
            }
        }
    }
    let mut action = LandPreaction { name, actor, space, maps, partial, global, assoc_failure: None };
    action.assoc_failure = action.find_associativity_failure();
    if action.global && !action.partial {
        return Err(Error::internal(format!("action {} classified global but not partial", action.name)));
    }
    Ok(action)
}

impl LandPreaction {
    /// `θ_{t*}(a·θ_t(b))·c` against `θ_{t*}(a·θ_t(b·c))`; both must be defined together.
    fn find_associativity_failure(&self) -> Option<AssociativityWitness> {
        let s_base = self.actor.base();
        let g = &*self.space;
        let nl = g.arrow_count();
        for &(s, t) in s_base.composable_pairs() {
            let ts = self.actor.inv(t);
            for u in s_base.arrows().filter(|&u| s_base.composable(t, u)) {
                for a in (0..nl).filter(|&a| self.in_dom(s, a)) {
                    for b in (0..nl).filter(|&b| self.in_dom(t, b)) {
                        let inner = self.apply(t, b).and_then(|tb| g.prod(a, tb)).and_then(|x| self.apply(ts, x));
                        for c in (0..nl).filter(|&c| self.in_ran(u, c)) {
                            let left = inner.and_then(|x| g.prod(x, c));
                            let right = g
                                .prod(b, c)
                                .and_then(|bc| self.apply(t, bc))
                                .and_then(|y| g.prod(a, y))
                                .and_then(|x| self.apply(ts, x));
                            if left != right {
                                return Some([s, t, u, a, b, c]);
                            }
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

    pub fn space(&self) -> &Arc<FiniteSemigroupoid> {
        &self.space
    }

    pub fn apply(&self, s: ArrowId, x: ArrowId) -> Option<ArrowId> {
        self.maps[s][x]
    }

    pub fn in_dom(&self, s: ArrowId, x: ArrowId) -> bool {
        self.maps[s][x].is_some()
    }

    pub fn in_ran(&self, s: ArrowId, y: ArrowId) -> bool {
        self.maps[self.actor.inv(s)][y].is_some()
    }

    pub fn domain(&self, s: ArrowId) -> Vec<ArrowId> {
        (0..self.space.arrow_count()).filter(|&x| self.in_dom(s, x)).collect()
    }

    pub fn maps(&self) -> &[Vec<Option<ArrowId>>] {
        &self.maps
    }

    pub fn is_partial(&self) -> bool {
        self.partial
    }

    pub fn is_global(&self) -> bool {
        self.global
    }

    pub fn is_associative(&self) -> bool {
        self.assoc_failure.is_none()
    }

    pub fn associativity_failure(&self) -> Option<AssociativityWitness> {
        self.assoc_failure
    }

    /// Refusal carrying the failing triple, for constructions that need associativity.
    pub fn require_associative(&self) -> Result<()> {
        let Some([s, t, u, a, b, c]) = self.assoc_failure else { return Ok(()) };
        let sn = |x| self.actor.base().arrow_name(x).to_string();
        let ln = |x| self.space.arrow_name(x).to_string();
        Err(Error::refused(
            &format!("action {}", self.name),
            Violation::new(
                Rule::ActionAssociativity,
                vec![sn(s), sn(t), sn(u), ln(a), ln(b), ln(c)],
                format!("θ_t*(a·θ_t(b))·c != θ_t*(a·θ_t(b·c)) at a={}, b={}, c={}", ln(a), ln(b), ln(c)),
            ),
        ))
    }

    /// The action with `θ_s = id` for all `s` (one-vertex actors only).
    pub fn trivial(actor: Arc<FiniteInverseSemigroupoid>, space: Arc<FiniteSemigroupoid>) -> Result<LandPreaction> {
        let ns = actor.base().arrow_count();
        let maps = vec![space.arrows().map(Some).collect(); ns];
        validate_preaction("trivial", actor, space, maps)
    }
}

/// Name-keyed action description: `maps[s] = (dom, img)` with `img` parallel to `dom`.
pub fn preaction_from_names(
    name: &str,
    actor: Arc<FiniteInverseSemigroupoid>,
    space: Arc<FiniteSemigroupoid>,
    maps: &[(String, Vec<String>, Vec<String>)],
) -> Result<LandPreaction> {
    let ns = actor.base().arrow_count();
    let mut table = vec![vec![None; space.arrow_count()]; ns];
    let mut seen = vec![false; ns];
    for (s, dom, img) in maps {
        let s = actor.base().arrow_id(s)?;
        if std::mem::replace(&mut seen[s], true) {
            return Err(Error::structural(format!("action {name}: arrow {} listed twice", actor.base().arrow_name(s))));
        }
        if dom.len() != img.len() {
            return Err(Error::structural(format!(
                "action {name}: dom and img of {} differ in length",
                actor.base().arrow_name(s)
            )));
        }
        for (x, y) in dom.iter().zip(img) {
            let (x, y) = (space.arrow_id(x)?, space.arrow_id(y)?);
            if table[s][x].replace(y).is_some() {
                return Err(Error::structural(format!(
                    "action {name}: {} appears twice in a domain",
                    space.arrow_name(x)
                )));
            }
        }
    }
    validate_preaction(name, actor, space, table)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::semigroupoid::{infer_inverse, samples, validate_inverse_semigroupoid, validate_semigroupoid};

    pub fn inverse(t: &crate::semigroupoid::SemigroupoidTables) -> Arc<FiniteInverseSemigroupoid> {
        let g = Arc::new(validate_semigroupoid(t).unwrap());
        let inv = infer_inverse(&g).unwrap();
        Arc::new(validate_inverse_semigroupoid(g, inv).unwrap())
    }

    pub fn space(t: &crate::semigroupoid::SemigroupoidTables) -> Arc<FiniteSemigroupoid> {
        Arc::new(validate_semigroupoid(t).unwrap())
    }

    /// `{1, e}` on the unit groupoid `{x, y}` with `θ_1 = id`, `θ_e = id_{x}`.
    pub fn semilattice_on_points(e_dom: &[(&str, &str)]) -> Result<LandPreaction> {
        let maps = vec![
            ("1".to_string(), vec!["x".to_string(), "y".to_string()], vec!["x".to_string(), "y".to_string()]),
            (
                "e".to_string(),
                e_dom.iter().map(|p| p.0.to_string()).collect(),
                e_dom.iter().map(|p| p.1.to_string()).collect(),
            ),
        ];
        preaction_from_names(
            "semilattice-on-points",
            inverse(&samples::semilattice()),
            space(&samples::unit_groupoid(&["x", "y"])),
            &maps,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::semigroupoid::samples;

    #[test]
    fn semilattice_example_is_global() {
        let a = semilattice_on_points(&[("x", "x")]).unwrap();
        assert!(a.is_partial());
        assert!(a.is_global());
        assert!(a.is_associative());
    }

    #[test]
    fn moving_point_breaks_inverse_compatibility() {
        let err = semilattice_on_points(&[("x", "y")]).unwrap_err();
        let report = err.report().unwrap();
        let v = report.violations.iter().find(|v| v.rule == Rule::InverseCompatibility).unwrap();
        assert_eq!(v.witness, vec!["e".to_string(), "x".to_string()]);
    }

    #[test]
    fn trivial_action_is_global() {
        let a = LandPreaction::trivial(inverse(&samples::klein()), space(&samples::pair_groupoid(2))).unwrap();
        assert!(a.is_global() && a.is_partial() && a.is_associative());
    }

    #[test]
    fn non_ideal_domain_is_rejected() {
        // θ_e defined only on (1,2) inside P₂: not an ideal.
        let maps = vec![
            ("1".to_string(), samples_names(), samples_names()),
            ("e".to_string(), vec!["(1,2)".to_string()], vec!["(1,2)".to_string()]),
        ];
        let err =
            preaction_from_names("bad", inverse(&samples::semilattice()), space(&samples::pair_groupoid(2)), &maps)
                .unwrap_err();
        assert!(err.report().unwrap().has(Rule::DomainIdeal));
    }

    fn samples_names() -> Vec<String> {
        ["(1,1)", "(1,2)", "(2,1)", "(2,2)"].iter().map(|s| s.to_string()).collect()
    }
}
