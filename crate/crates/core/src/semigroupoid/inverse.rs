use std::sync::Arc;

use super::{ArrowId, FiniteSemigroupoid};
use crate::error::{Error, Result, Rule, ValidationReport, Violation};

/// A semigroupoid with its unique generalized inverse, idempotents and natural order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteInverseSemigroupoid {
    base: Arc<FiniteSemigroupoid>,
    inv: Vec<ArrowId>,
    idempotent: Vec<bool>,
    leq: Vec<bool>,
}

/// `t` satisfies the four inverse conditions for `s`.
fn is_inverse_of(g: &FiniteSemigroupoid, s: ArrowId, t: ArrowId) -> bool {
    if g.src(t) != g.rng(s) || g.rng(t) != g.src(s) {
        return false;
    }
    let sts = g.prod(s, t).and_then(|st| g.prod(st, s));
    let tst = g.prod(t, s).and_then(|ts| g.prod(ts, t));
    sts == Some(s) && tst == Some(t)
}

/// Finds the inverse table by search when every arrow has exactly one candidate.
pub fn infer_inverse(g: &FiniteSemigroupoid) -> Result<Vec<ArrowId>> {
    g.arrows()
        .map(|s| {
            let mut c = g.arrows().filter(|&t| is_inverse_of(g, s, t));
            match (c.next(), c.next()) {
                (Some(t), None) => Ok(t),
                (None, _) => Err(Error::structural(format!(
                    "arrow {} of {} has no generalized inverse",
                    g.arrow_name(s),
                    g.name()
                ))),
                (Some(_), Some(_)) => Err(Error::structural(format!(
                    "arrow {} of {} has several generalized inverses",
                    g.arrow_name(s),
                    g.name()
                ))),
            }
        })
        .collect()
}

/// Checks the inverse laws, uniqueness, the usual rules and builds the natural order.
pub fn validate_inverse_semigroupoid(
    base: Arc<FiniteSemigroupoid>,
    inv: Vec<ArrowId>,
) -> Result<FiniteInverseSemigroupoid> {
    let g = &*base;
    let n = g.arrow_count();
    if inv.len() != n || inv.iter().any(|&t| t >= n) {
        return Err(Error::structural(format!("inverse table of {} must map each of its {n} arrows", g.name())));
    }
    let nm = |a: ArrowId| g.arrow_name(a).to_string();
    let mut report = ValidationReport::new(format!("inverse semigroupoid {}", g.name()));
    let first = |report: &mut ValidationReport, rule: Rule, w: Vec<String>, d: String| {
        if !report.has(rule) {
            report.push(Violation::new(rule, w, d));
        }
    };
    for s in 0..n {
        let t = inv[s];
        if g.src(t) != g.rng(s) || g.rng(t) != g.src(s) {
            first(
                &mut report,
                Rule::InverseShape,
                vec![nm(s), nm(t)],
                format!("{}* = {} has the wrong source or range", nm(s), nm(t)),
            );
            continue;
        }
        if !is_inverse_of(g, s, t) {
            first(
                &mut report,
                Rule::InverseLaw,
                vec![nm(s), nm(t)],
                format!("{0}·{1}·{0} != {0} or {1}·{0}·{1} != {1}", nm(s), nm(t)),
            );
            continue;
        }
        if let Some(other) = (0..n).find(|&u| u != t && is_inverse_of(g, s, u)) {
            first(
                &mut report,
                Rule::InverseNotUnique,
                vec![nm(s), nm(t), nm(other)],
                format!("both {} and {} are inverses of {}", nm(t), nm(other), nm(s)),
            );
        }
        if inv[t] != s {
            first(
                &mut report,
                Rule::InverseInvolution,
                vec![nm(s)],
                format!("({}*)* = {} != {}", nm(s), nm(inv[t]), nm(s)),
            );
        }
    }
    if report.is_valid() {
        for &(s, t) in g.composable_pairs() {
            let st = g.prod(s, t).expect("validated semigroupoid");
            if g.prod(inv[t], inv[s]) != Some(inv[st]) {
                first(
                    &mut report,
                    Rule::InverseOfProduct,
                    vec![nm(s), nm(t)],
                    format!("({}·{})* != {}*·{}*", nm(s), nm(t), nm(t), nm(s)),
                );
                break;
            }
        }
    }
    let idempotent: Vec<bool> = (0..n).map(|a| g.src(a) == g.rng(a) && g.is_idempotent(a)).collect();
    'idem: for e in (0..n).filter(|&e| idempotent[e]) {
        for f in (0..n).filter(|&f| idempotent[f]) {
            if let Some(ef) = g.prod(e, f) {
                if g.prod(f, e) != Some(ef) {
                    first(
                        &mut report,
                        Rule::IdempotentsCommute,
                        vec![nm(e), nm(f)],
                        format!("{}·{} != {}·{}", nm(e), nm(f), nm(f), nm(e)),
                    );
                    break 'idem;
                }
            }
        }
    }
    report.into_result()?;

    let leq = natural_order(g, &inv, &idempotent)?;
    let s = FiniteInverseSemigroupoid { base, inv, idempotent, leq };
    s.check_order_rules().into_result()?;
    Ok(s)
}

/// The four characterizations of `s ≤ t`, computed independently and compared.
fn natural_order(g: &FiniteSemigroupoid, inv: &[ArrowId], idem: &[bool]) -> Result<Vec<bool>> {
    let n = g.arrow_count();
    let es: Vec<ArrowId> = (0..n).filter(|&e| idem[e]).collect();
    let mut leq = vec![false; n * n];
    for s in 0..n {
        for t in 0..n {
            // s = t s* s
            let c1 = g.prod(inv[s], s).and_then(|ss| g.prod(t, ss)) == Some(s);
            // s = t e for some idempotent e
            let c2 = es.iter().any(|&e| g.prod(t, e) == Some(s));
            // s = s s* t
            let c3 = g.prod(s, inv[s]).and_then(|ss| g.prod(ss, t)) == Some(s);
            // s = f t for some idempotent f
            let c4 = es.iter().any(|&f| g.prod(f, t) == Some(s));
            if !(c1 == c2 && c2 == c3 && c3 == c4) {
                return Err(Error::internal(format!(
                    "natural order characterizations disagree on ({}, {}): {:?}",
                    g.arrow_name(s),
                    g.arrow_name(t),
                    [c1, c2, c3, c4]
                )));
            }
            leq[s * n + t] = c1;
        }
    }
    Ok(leq)
}

impl FiniteInverseSemigroupoid {
    fn check_order_rules(&self) -> ValidationReport {
        let g = &*self.base;
        let n = g.arrow_count();
        let nm = |a: ArrowId| g.arrow_name(a).to_string();
        let mut report = ValidationReport::new(format!("natural order on {}", g.name()));
        for s in 0..n {
            for t in 0..n {
                if self.leq(s, t) != self.leq(self.inv[s], self.inv[t]) {
                    report.push(Violation::new(
                        Rule::OrderCompatibility,
                        vec![nm(s), nm(t)],
                        format!("{} <= {} does not match {}* <= {}*", nm(s), nm(t), nm(s), nm(t)),
                    ));
                    return report;
                }
            }
        }
        let pairs: Vec<(ArrowId, ArrowId)> =
            (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).filter(|&(s, t)| self.leq(s, t)).collect();
        for &(s1, t1) in &pairs {
            for &(s2, t2) in &pairs {
                let Some(s12) = g.prod(s1, s2) else { continue };
                let ok = g.prod(t1, t2).is_some_and(|t12| self.leq(s12, t12));
                if !ok {
                    report.push(Violation::new(
                        Rule::OrderCompatibility,
                        vec![nm(s1), nm(t1), nm(s2), nm(t2)],
                        format!("{}·{} is not below {}·{}", nm(s1), nm(s2), nm(t1), nm(t2)),
                    ));
                    return report;
                }
            }
        }
        report
    }

    pub fn base(&self) -> &FiniteSemigroupoid {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<FiniteSemigroupoid> {
        &self.base
    }

    pub fn inv(&self, s: ArrowId) -> ArrowId {
        self.inv[s]
    }

    pub fn inverse_table(&self) -> &[ArrowId] {
        &self.inv
    }

    pub fn is_idempotent(&self, a: ArrowId) -> bool {
        self.idempotent[a]
    }

    pub fn idempotents(&self) -> Vec<ArrowId> {
        (0..self.inv.len()).filter(|&a| self.idempotent[a]).collect()
    }

    /// Natural partial order `s ≤ t`.
    pub fn leq(&self, s: ArrowId, t: ArrowId) -> bool {
        self.leq[s * self.inv.len() + t]
    }

    /// Strictly below: `s ≤ t` and `s ≠ t`.
    pub fn lt(&self, s: ArrowId, t: ArrowId) -> bool {
        s != t && self.leq(s, t)
    }

    pub fn name(&self) -> &str {
        self.base.name()
    }
}
