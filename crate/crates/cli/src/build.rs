//! Constructions and canonical stanzas, emitted as self-contained structure files.

use serde::de::DeserializeOwned;
use serde_json::Value;

use sectional_core::actions::{germ_quotient, semidirect_product};
use sectional_core::bundles::{naive_crossed_product, sectional_algebra, AlgebraPresentation, Bundle};
use sectional_core::rings::{Matrix, Ring};
use sectional_core::semigroupoid::{FiniteSemigroupoid, Homomorphism};
use sectional_core::theorems::{bundle_semidirect, induced_theta, quotient_bundle, skew_product, smash_product};
use sectional_core::{Error, Result};

use crate::materialize::{Action, Resolver};
use crate::workspace::{
    ActionStanza, ArrowStanza, CongruenceStanza, HomomorphismStanza, PartialMap, SemigroupoidStanza, TaskKind,
    WorkspaceFile,
};

fn from_json<T: DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::internal(format!("emitted stanza does not re-parse: {e}")))
}

fn matrix_json(ring: &Ring, m: &Matrix) -> Vec<Vec<Value>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| ring.elem_to_json(x)).collect()).collect()
}

/// A structure file under construction; stanzas are kept unique by id.
pub struct Document {
    file: WorkspaceFile,
}

impl Document {
    pub fn new(ring: &Ring) -> Document {
        Document {
            file: WorkspaceFile {
                ring: ring.to_json(),
                note: None,
                semigroupoids: Vec::new(),
                homomorphisms: Vec::new(),
                actions: Vec::new(),
                bundles: Vec::new(),
                congruences: Vec::new(),
                algebras: Vec::new(),
                tasks: Vec::new(),
            },
        }
    }

    pub fn finish(self) -> WorkspaceFile {
        self.file
    }

    pub fn semigroupoid(&mut self, g: &FiniteSemigroupoid, inv: Option<Vec<(String, String)>>) {
        if self.file.semigroupoids.iter().any(|s| s.id == g.name()) {
            return;
        }
        let t = g.to_tables();
        self.file.semigroupoids.push(SemigroupoidStanza {
            id: t.name,
            vertices: t.vertices,
            arrows: t.arrows.into_iter().map(|a| ArrowStanza { id: a.name, src: a.src, rng: a.rng }).collect(),
            prod: t.prod,
            inv: inv.map(|v| v.into_iter().collect()),
        });
    }

    pub fn homomorphism(&mut self, h: &Homomorphism) {
        self.semigroupoid(h.source(), None);
        self.semigroupoid(h.target(), None);
        if self.file.homomorphisms.iter().any(|s| s.id == h.name()) {
            return;
        }
        let (s, t) = (h.source(), h.target());
        self.file.homomorphisms.push(HomomorphismStanza {
            id: h.name().to_string(),
            source: s.name().to_string(),
            target: t.name().to_string(),
            map: s.arrows().map(|a| (s.arrow_name(a).to_string(), t.arrow_name(h.apply(a)).to_string())).collect(),
        });
    }

    pub fn bundle(&mut self, b: &Bundle) -> Result<()> {
        self.semigroupoid(b.base(), None);
        if !self.file.bundles.iter().any(|s| s.id == b.name()) {
            self.file.bundles.push(from_json(b.to_json())?);
        }
        Ok(())
    }

    pub fn algebra(&mut self, a: &AlgebraPresentation) -> Result<()> {
        if let Some(g) = a.grading() {
            self.semigroupoid(&g.semigroupoid, None);
        }
        if !self.file.algebras.iter().any(|s| s.id == a.name()) {
            self.file.algebras.push(from_json(a.to_json())?);
        }
        Ok(())
    }
}

/// Runs build task `index` of `ws` and returns the structures it produces.
pub fn run_construction(r: &Resolver, ws: &WorkspaceFile, index: usize) -> Result<WorkspaceFile> {
    let task = &ws.tasks[index];
    if task.kind != TaskKind::Build {
        return Err(Error::structural(format!("task {} is not a build task", ws.task_name(index))));
    }
    let target = |k: usize| task.targets.get(k).map(String::as_str).ok_or_else(|| Error::structural("missing target"));
    let mut doc = Document::new(r.ring());
    match task.what().unwrap_or_default() {
        "semidirect" => match r.action(target(0)?)? {
            Action::Base(theta) => doc.semigroupoid(&semidirect_product(&theta)?.semigroupoid, None),
            Action::Bundle(theta) => doc.bundle(&bundle_semidirect(&theta)?.bundle)?,
        },
        "germ-quotient" => doc.semigroupoid(germ_quotient(&r.preaction_named(target(0)?)?)?.germs(), None),
        "quotient-bundle" => doc.bundle(&quotient_bundle(&r.congruence(target(0)?)?)?.bundle)?,
        "skew-product" => {
            let skew = skew_product(&r.homomorphism(target(0)?)?)?;
            doc.homomorphism(&skew.grading);
        }
        "sectional-algebra" => {
            let b = r.bundle(target(0)?)?;
            doc.algebra(&sectional_algebra(&b, Some(&Homomorphism::identity(b.base().clone())))?)?;
        }
        "smash-product" => doc.algebra(&smash_product(&r.algebra(target(0)?)?)?.algebra)?,
        "crossed-product" => {
            let theta = induced_theta(&r.bundle_action(target(0)?)?)?;
            doc.algebra(&naive_crossed_product(&theta, None)?.algebra)?;
        }
        other => return Err(Error::structural(format!("unknown construction {other:?}"))),
    }
    Ok(doc.finish())
}

/// The structure `id` with everything it references, in canonical form.
pub fn canonical(r: &Resolver, ws: &WorkspaceFile, id: &str) -> Result<WorkspaceFile> {
    let mut doc = Document::new(r.ring());
    let ring = r.ring();
    let with_inverse = |doc: &mut Document, sid: &str| -> Result<()> {
        let stanza = ws
            .semigroupoids
            .iter()
            .find(|s| s.id == sid)
            .ok_or_else(|| Error::structural(format!("no semigroupoid {sid:?}")))?;
        let g = r.semigroupoid(sid)?;
        let inv = match stanza.inv {
            Some(_) => {
                let inv = r.inverse(sid)?;
                Some(g.arrows().map(|a| (g.arrow_name(a).to_string(), g.arrow_name(inv.inv(a)).to_string())).collect())
            }
            None => None,
        };
        doc.semigroupoid(&g, inv);
        Ok(())
    };
    match ws.kind_of(id) {
        Some("semigroupoid") => with_inverse(&mut doc, id)?,
        Some("homomorphism") => doc.homomorphism(&r.homomorphism(id)?),
        Some("bundle") => doc.bundle(&r.bundle(id)?)?,
        Some("algebra") => {
            let a = r.algebra(id)?;
            a.validate()?;
            doc.algebra(&a)?;
        }
        Some("action") => {
            let stanza = ws.actions.iter().find(|a| a.id == id).expect("kind_of found it");
            with_inverse(&mut doc, &stanza.actor)?;
            let (theta, fibers) = match r.action(id)? {
                Action::Base(theta) => {
                    doc.semigroupoid(theta.space(), None);
                    (theta, None)
                }
                Action::Bundle(b) => {
                    doc.bundle(b.bundle())?;
                    let theta = (**b.base_action()).clone();
                    let (sg, g) = (theta.actor().base().clone(), theta.space().clone());
                    let fibers = sg
                        .arrows()
                        .flat_map(|s| theta.domain(s).into_iter().map(move |x| (s, x)))
                        .map(|(s, x)| {
                            (format!("{},{}", sg.arrow_name(s), g.arrow_name(x)), matrix_json(ring, b.fiber(s, x)))
                        })
                        .collect();
                    (theta, Some(fibers))
                }
            };
            let (sg, g) = (theta.actor().base(), theta.space());
            let maps = sg
                .arrows()
                .map(|s| {
                    let dom = theta.domain(s);
                    let img =
                        dom.iter().map(|&x| g.arrow_name(theta.apply(s, x).expect("in domain")).to_string()).collect();
                    let dom = dom.iter().map(|&x| g.arrow_name(x).to_string()).collect();
                    (sg.arrow_name(s).to_string(), PartialMap { dom, img })
                })
                .collect();
            let (space, bundle) = match fibers {
                None => (Some(g.name().to_string()), None),
                Some(_) => (None, stanza.bundle.clone()),
            };
            doc.file.actions.push(ActionStanza {
                id: id.to_string(),
                actor: stanza.actor.clone(),
                space,
                bundle,
                maps,
                fibers: fibers.unwrap_or_default(),
            });
        }
        Some("congruence") => {
            let c = r.congruence(id)?;
            let b = c.bundle();
            doc.bundle(b)?;
            let g = b.base();
            let classes: Vec<Vec<String>> = c
                .congruence()
                .classes()
                .iter()
                .filter(|cl| cl.len() > 1)
                .map(|cl| cl.iter().map(|&x| g.arrow_name(x).to_string()).collect())
                .collect();
            let mut transports = std::collections::BTreeMap::new();
            for class in c.congruence().classes() {
                for &x in class {
                    for &y in class.iter().filter(|&&y| y != x) {
                        transports.insert(
                            format!("{},{}", g.arrow_name(x), g.arrow_name(y)),
                            matrix_json(ring, c.transport(x, y)),
                        );
                    }
                }
            }
            doc.file.congruences.push(CongruenceStanza {
                id: id.to_string(),
                bundle: b.name().to_string(),
                classes,
                transports,
            });
        }
        _ => return Err(Error::structural(format!("no structure named {id:?}"))),
    }
    Ok(doc.finish())
}
