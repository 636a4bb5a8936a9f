//! Turns stanzas into validated core structures, resolving ids on demand.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::Value;

use sectional_core::actions::{preaction_from_names, validate_rigid_congruence, LandPreaction};
use sectional_core::bundles::{validate_bundle, AlgebraPresentation, Bundle, BundleSpec, FiberMode, Grading};
use sectional_core::rings::{Elem, Matrix, Ring};
use sectional_core::semigroupoid::{
    infer_inverse, validate_homomorphism, validate_inverse_semigroupoid, validate_semigroupoid, ArrowId, ArrowSpec,
    FiniteInverseSemigroupoid, FiniteSemigroupoid, Homomorphism, SemigroupoidTables,
};
use sectional_core::theorems::{validate_bundle_action, validate_bundle_congruence, BundleAction, BundleCongruence};
use sectional_core::{Error, Result};

use crate::workspace::{split_pair, ActionStanza, WorkspaceFile};

/// Either kind of action a stanza can describe.
pub enum Action {
    Base(LandPreaction),
    Bundle(BundleAction),
}

pub struct Resolver<'a> {
    ws: &'a WorkspaceFile,
    ring: Ring,
}

fn missing(kind: &str, id: &str) -> Error {
    Error::structural(format!("no {kind} named {id:?}"))
}

fn pair(key: &str, left: &FiniteSemigroupoid, right: &FiniteSemigroupoid) -> Result<(ArrowId, ArrowId)> {
    let (a, b) = split_pair(key, left.arrow_names(), right.arrow_names())
        .ok_or_else(|| Error::structural(format!("key {key:?} is not a unique pair of arrow names")))?;
    Ok((left.arrow_id(a)?, right.arrow_id(b)?))
}

impl<'a> Resolver<'a> {
    pub fn new(ws: &'a WorkspaceFile, ring: Ring) -> Resolver<'a> {
        Resolver { ws, ring }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    fn elem(&self, v: &Value) -> Result<Elem> {
        self.ring.parse_elem(v)
    }

    fn matrix(&self, rows: &[Vec<Value>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows.iter().map(|r| r.iter().map(|x| self.elem(x)).collect()).collect::<Result<Vec<Vec<Elem>>>>()?;
        Matrix::from_rows(rows, cols)
    }

    pub fn semigroupoid(&self, id: &str) -> Result<Arc<FiniteSemigroupoid>> {
        let s = self.ws.semigroupoids.iter().find(|s| s.id == id).ok_or_else(|| missing("semigroupoid", id))?;
        let tables = SemigroupoidTables {
            name: s.id.clone(),
            vertices: s.vertices.clone(),
            arrows: s
                .arrows
                .iter()
                .map(|a| ArrowSpec { name: a.id.clone(), src: a.src.clone(), rng: a.rng.clone() })
                .collect(),
            prod: s.prod.clone(),
            inv: None,
        };
        Ok(Arc::new(validate_semigroupoid(&tables)?))
    }

    /// The inverse structure from the `inv` table, or inferred when it is absent.
    pub fn inverse(&self, id: &str) -> Result<Arc<FiniteInverseSemigroupoid>> {
        let base = self.semigroupoid(id)?;
        let stanza = self.ws.semigroupoids.iter().find(|s| s.id == id).expect("resolved above");
        let inv = match &stanza.inv {
            None => infer_inverse(&base)?,
            Some(table) => {
                let mut inv = vec![None; base.arrow_count()];
                for (a, b) in table {
                    inv[base.arrow_id(a)?] = Some(base.arrow_id(b)?);
                }
                inv.into_iter()
                    .enumerate()
                    .map(|(a, t)| {
                        t.ok_or_else(|| Error::structural(format!("inv of {id} omits {}", base.arrow_name(a))))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        Ok(Arc::new(validate_inverse_semigroupoid(base, inv)?))
    }

    pub fn homomorphism(&self, id: &str) -> Result<Homomorphism> {
        let h = self.ws.homomorphisms.iter().find(|h| h.id == id).ok_or_else(|| missing("homomorphism", id))?;
        let (src, tgt) = (self.semigroupoid(&h.source)?, self.semigroupoid(&h.target)?);
        let map = src
            .arrows()
            .map(|a| {
                let b = h
                    .map
                    .get(src.arrow_name(a))
                    .ok_or_else(|| Error::structural(format!("homomorphism {id} omits {}", src.arrow_name(a))))?;
                tgt.arrow_id(b)
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = h.map.keys().find(|k| src.arrow_by_name(k).is_none()) {
            return Err(Error::structural(format!("homomorphism {id} maps unknown arrow {extra:?}")));
        }
        validate_homomorphism(id, src, tgt, map)
    }

    pub fn bundle(&self, id: &str) -> Result<Bundle> {
        let b = self.ws.bundles.iter().find(|b| b.id == id).ok_or_else(|| missing("bundle", id))?;
        let base = self.semigroupoid(&b.base)?;
        let mode = match b.mode.as_deref() {
            None | Some("sc") => FiberMode::StructureConstants,
            Some("ringfiber") => FiberMode::RingFiber,
            Some(other) => return Err(Error::structural(format!("bundle {id}: unknown mode {other:?}"))),
        };
        if let Some(extra) = b.ranks.keys().find(|k| base.arrow_by_name(k).is_none()) {
            return Err(Error::structural(format!("bundle {id}: rank given for unknown arrow {extra:?}")));
        }
        let ranks = base.arrows().map(|a| b.ranks.get(base.arrow_name(a)).copied().unwrap_or(1)).collect();
        let constants = b
            .constants
            .iter()
            .map(|(key, c)| {
                let c = c
                    .iter()
                    .map(|row| row.iter().map(|v| v.iter().map(|x| self.elem(x)).collect()).collect())
                    .collect::<Result<Vec<Vec<Vec<Elem>>>>>()?;
                Ok((pair(key, &base, &base)?, c))
            })
            .collect::<Result<Vec<_>>>()?;
        let twists =
            b.twist.iter().map(|(key, t)| Ok((pair(key, &base, &base)?, self.elem(t)?))).collect::<Result<Vec<_>>>()?;
        let spec = BundleSpec { name: id.to_string(), mode, ranks, constants, twists };
        validate_bundle(&spec, &self.ring, base)
    }

    fn preaction(&self, a: &ActionStanza, space: Arc<FiniteSemigroupoid>) -> Result<LandPreaction> {
        let actor = self.inverse(&a.actor)?;
        let maps: Vec<(String, Vec<String>, Vec<String>)> =
            a.maps.iter().map(|(s, m)| (s.clone(), m.dom.clone(), m.img.clone())).collect();
        preaction_from_names(&a.id, actor, space, &maps)
    }

    pub fn action(&self, id: &str) -> Result<Action> {
        let a = self.ws.actions.iter().find(|a| a.id == id).ok_or_else(|| missing("action", id))?;
        match (&a.space, &a.bundle) {
            (Some(space), _) => Ok(Action::Base(self.preaction(a, self.semigroupoid(space)?)?)),
            (None, Some(bundle)) => {
                let bundle = Arc::new(self.bundle(bundle)?);
                let base = self.preaction(a, bundle.base().clone())?;
                let actor = base.actor().base_arc().clone();
                let fibers = a
                    .fibers
                    .iter()
                    .map(|(key, rows)| Ok((pair(key, &actor, bundle.base())?, self.matrix(rows)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Action::Bundle(validate_bundle_action(id, bundle, Arc::new(base), fibers)?))
            }
            (None, None) => Err(Error::structural(format!("action {id} acts on nothing"))),
        }
    }

    pub fn preaction_named(&self, id: &str) -> Result<LandPreaction> {
        match self.action(id)? {
            Action::Base(p) => Ok(p),
            Action::Bundle(b) => Ok((**b.base_action()).clone()),
        }
    }

    pub fn bundle_action(&self, id: &str) -> Result<BundleAction> {
        match self.action(id)? {
            Action::Bundle(b) => Ok(b),
            Action::Base(_) => Err(Error::structural(format!("action {id} acts on a semigroupoid, not a bundle"))),
        }
    }

    pub fn congruence(&self, id: &str) -> Result<BundleCongruence> {
        let c = self.ws.congruences.iter().find(|c| c.id == id).ok_or_else(|| missing("congruence", id))?;
        let bundle = Arc::new(self.bundle(&c.bundle)?);
        let g = bundle.base().clone();
        let mut listed = vec![false; g.arrow_count()];
        let mut classes = Vec::new();
        for class in &c.classes {
            let ids = class.iter().map(|x| g.arrow_id(x)).collect::<Result<Vec<_>>>()?;
            for &x in &ids {
                if std::mem::replace(&mut listed[x], true) {
                    return Err(Error::structural(format!("congruence {id}: {} is in two classes", g.arrow_name(x))));
                }
            }
            classes.push(ids);
        }
        classes.extend(g.arrows().filter(|&x| !listed[x]).map(|x| vec![x]));
        let rigid = validate_rigid_congruence(g.clone(), classes)?;
        let transports = c
            .transports
            .iter()
            .map(|(key, rows)| Ok((pair(key, &g, &g)?, self.matrix(rows)?)))
            .collect::<Result<Vec<_>>>()?;
        validate_bundle_congruence(id, bundle, rigid, transports)
    }

    pub fn algebra(&self, id: &str) -> Result<AlgebraPresentation> {
        let a = self.ws.algebras.iter().find(|a| a.id == id).ok_or_else(|| missing("algebra", id))?;
        let n = a.basis.len();
        let index: BTreeMap<&str, usize> = a.basis.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let label = |l: &str| {
            index.get(l).copied().ok_or_else(|| Error::structural(format!("algebra {id}: unknown basis label {l:?}")))
        };
        let mut products = vec![Vec::new(); n * n];
        let mut seen = vec![false; n * n];
        for (u, v, terms) in &a.products {
            let k = label(u)? * n + label(v)?;
            if std::mem::replace(&mut seen[k], true) {
                return Err(Error::structural(format!("algebra {id}: product {u}·{v} listed twice")));
            }
            for (w, c) in terms {
                products[k].push((label(w)?, self.elem(c)?));
            }
        }
        let out = AlgebraPresentation::from_sparse(id, &self.ring, a.basis.clone(), products)?;
        let out = match &a.note {
            Some(note) => out.with_provenance(note.clone()),
            None => out,
        };
        match &a.grading {
            None if a.degrees.is_empty() => Ok(out),
            None => Err(Error::structural(format!("algebra {id}: degrees without a grading"))),
            Some(g) => {
                let g = self.semigroupoid(g)?;
                let degrees = a
                    .basis
                    .iter()
                    .map(|l| {
                        let d = a
                            .degrees
                            .get(l)
                            .ok_or_else(|| Error::structural(format!("algebra {id}: {l} has no degree")))?;
                        g.arrow_id(d)
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.with_grading(Grading { semigroupoid: g, degrees })
            }
        }
    }
}
