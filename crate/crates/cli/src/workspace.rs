//! The structure file: one JSON document with a ring and named stanzas.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{referrer} references undeclared {kind} {id:?}")]
    Dangling { referrer: String, kind: &'static str, id: String },
    #[error("duplicate {kind} id {id:?}")]
    Duplicate { kind: &'static str, id: String },
    #[error("{0}")]
    Shape(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowStanza {
    pub id: String,
    pub src: String,
    pub rng: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupoidStanza {
    pub id: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowStanza>,
    pub prod: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomomorphismStanza {
    pub id: String,
    pub source: String,
    pub target: String,
    pub map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialMap {
    pub dom: Vec<String>,
    pub img: Vec<String>,
}

/// An action on a semigroupoid (`space`) or on a bundle (`bundle`, with fiber matrices).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionStanza {
    pub id: String,
    pub actor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<String>,
    pub maps: BTreeMap<String, PartialMap>,
    /// `"s,γ"` → matrix rows.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fibers: BTreeMap<String, Vec<Vec<Value>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleStanza {
    pub id: String,
    pub base: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default)]
    pub ranks: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, Vec<Vec<Vec<Value>>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub twist: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CongruenceStanza {
    pub id: String,
    pub bundle: String,
    /// Arrows not listed form singleton classes.
    pub classes: Vec<Vec<String>>,
    /// `"x,y"` → matrix rows of `T_{x→y}`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub transports: BTreeMap<String, Vec<Vec<Value>>>,
}

/// `[a, b, [[c, coefficient], ...]]`
pub type Product = (String, String, Vec<(String, Value)>);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraStanza {
    pub id: String,
    pub basis: Vec<String>,
    /// `[u, v, [[w, c], ...]]`: `u·v = Σ c·w`.
    pub products: Vec<Product>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub degrees: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Validate,
    Build,
    Verify,
}

impl TaskKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::Validate => "validate",
            TaskKind::Build => "build",
            TaskKind::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ranks: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskStanza {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub kind: TaskKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(default)]
    pub targets: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    pub ring: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub semigroupoids: Vec<SemigroupoidStanza>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub homomorphisms: Vec<HomomorphismStanza>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub actions: Vec<ActionStanza>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bundles: Vec<BundleStanza>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub congruences: Vec<CongruenceStanza>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub algebras: Vec<AlgebraStanza>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<TaskStanza>,
}

pub const THEOREMS: [&str; 6] = ["tensor", "crossed", "smash", "quotient", "germ", "associativity"];
pub const CONSTRUCTIONS: [&str; 7] = [
    "semidirect",
    "germ-quotient",
    "quotient-bundle",
    "skew-product",
    "sectional-algebra",
    "smash-product",
    "crossed-product",
];

/// What each target slot of a task must name.
fn target_kinds(kind: TaskKind, what: Option<&str>) -> Result<Vec<&'static str>, String> {
    Ok(match (kind, what) {
        (TaskKind::Validate, _) => Vec::new(),
        (TaskKind::Verify, Some("tensor")) => vec!["bundle", "semigroupoid"],
        (TaskKind::Verify, Some("crossed")) => vec!["action"],
        (TaskKind::Verify, Some("smash")) => vec!["bundle", "homomorphism"],
        (TaskKind::Verify, Some("quotient")) => vec!["congruence"],
        (TaskKind::Verify, Some("germ")) => vec!["action", "algebra"],
        (TaskKind::Verify, Some("associativity")) => vec!["bundle"],
        (TaskKind::Build, Some("semidirect" | "germ-quotient")) => vec!["action"],
        (TaskKind::Build, Some("quotient-bundle")) => vec!["congruence"],
        (TaskKind::Build, Some("skew-product")) => vec!["homomorphism"],
        (TaskKind::Build, Some("sectional-algebra")) => vec!["bundle"],
        (TaskKind::Build, Some("smash-product")) => vec!["algebra"],
        (TaskKind::Build, Some("crossed-product")) => vec!["action"],
        (TaskKind::Verify, Some(other)) => {
            return Err(format!("unknown theorem {other:?}; expected one of {}", THEOREMS.join(", ")))
        }
        (TaskKind::Build, Some(other)) => {
            return Err(format!("unknown construction {other:?}; expected one of {}", CONSTRUCTIONS.join(", ")))
        }
        (TaskKind::Verify, None) => return Err("verify task needs \"theorem\"".into()),
        (TaskKind::Build, None) => return Err("build task needs \"construction\"".into()),
    })
}

impl TaskStanza {
    /// The theorem of a verify task or the construction of a build task.
    pub fn what(&self) -> Option<&str> {
        match self.kind {
            TaskKind::Verify => self.theorem.as_deref(),
            TaskKind::Build => self.construction.as_deref(),
            TaskKind::Validate => None,
        }
    }
}

impl WorkspaceFile {
    fn ids(&self, kind: &str) -> Vec<&str> {
        match kind {
            "semigroupoid" => self.semigroupoids.iter().map(|s| s.id.as_str()).collect(),
            "homomorphism" => self.homomorphisms.iter().map(|s| s.id.as_str()).collect(),
            "action" => self.actions.iter().map(|s| s.id.as_str()).collect(),
            "bundle" => self.bundles.iter().map(|s| s.id.as_str()).collect(),
            "congruence" => self.congruences.iter().map(|s| s.id.as_str()).collect(),
            "algebra" => self.algebras.iter().map(|s| s.id.as_str()).collect(),
            _ => Vec::new(),
        }
    }

    /// Kind of the stanza named `id`, if any.
    pub fn kind_of(&self, id: &str) -> Option<&'static str> {
        ["semigroupoid", "homomorphism", "action", "bundle", "congruence", "algebra"]
            .into_iter()
            .find(|k| self.ids(k).contains(&id))
    }

    /// Every id reference resolves and every task is well formed.
    pub fn check_references(&self) -> Result<(), ParseError> {
        let mut all = HashSet::new();
        for kind in ["semigroupoid", "homomorphism", "action", "bundle", "congruence", "algebra"] {
            for id in self.ids(kind) {
                if !all.insert(id) {
                    return Err(ParseError::Duplicate { kind, id: id.to_string() });
                }
            }
        }
        let need = |referrer: String, kind: &'static str, id: &str| -> Result<(), ParseError> {
            if self.ids(kind).contains(&id) {
                Ok(())
            } else {
                Err(ParseError::Dangling { referrer, kind, id: id.to_string() })
            }
        };
        for h in &self.homomorphisms {
            need(format!("homomorphism {}", h.id), "semigroupoid", &h.source)?;
            need(format!("homomorphism {}", h.id), "semigroupoid", &h.target)?;
        }
        for a in &self.actions {
            let who = format!("action {}", a.id);
            need(who.clone(), "semigroupoid", &a.actor)?;
            match (&a.space, &a.bundle) {
                (Some(s), None) => need(who.clone(), "semigroupoid", s)?,
                (None, Some(b)) => need(who.clone(), "bundle", b)?,
                _ => return Err(ParseError::Shape(format!("{who} needs exactly one of \"space\" and \"bundle\""))),
            }
            if a.bundle.is_none() && !a.fibers.is_empty() {
                return Err(ParseError::Shape(format!("{who}: fiber matrices need a bundle")));
            }
        }
        for b in &self.bundles {
            need(format!("bundle {}", b.id), "semigroupoid", &b.base)?;
        }
        for c in &self.congruences {
            need(format!("congruence {}", c.id), "bundle", &c.bundle)?;
        }
        for a in &self.algebras {
            if let Some(g) = &a.grading {
                need(format!("algebra {}", a.id), "semigroupoid", g)?;
            }
        }
        for (i, t) in self.tasks.iter().enumerate() {
            let who = format!("task {i}");
            let kinds = target_kinds(t.kind, t.what()).map_err(|m| ParseError::Shape(format!("{who}: {m}")))?;
            match t.kind {
                TaskKind::Validate => {
                    for id in &t.targets {
                        if self.kind_of(id).is_none() {
                            return Err(ParseError::Dangling { referrer: who, kind: "structure", id: id.clone() });
                        }
                    }
                }
                _ => {
                    // the algebra of a germ task is optional
                    let optional = usize::from(t.what() == Some("germ"));
                    if t.targets.len() > kinds.len() || t.targets.len() + optional < kinds.len() {
                        return Err(ParseError::Shape(format!("{who}: expects targets {}", kinds.join(", "))));
                    }
                    for (id, kind) in t.targets.iter().zip(&kinds) {
                        need(who.clone(), kind, id)?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn task_name(&self, i: usize) -> String {
        self.tasks[i].id.clone().unwrap_or_else(|| format!("task{i}"))
    }
}

/// Parses a structure file and resolves its references; semantics are left to the validators.
pub fn parse_workspace(text: &str) -> Result<WorkspaceFile, ParseError> {
    let ws: WorkspaceFile = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    ws.check_references()?;
    Ok(ws)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(k) => msg[..k].to_string(),
        None => msg.to_string(),
    }
}

/// Splits `"a,b"` into a name from `left` and one from `right`; names may themselves contain commas.
pub fn split_pair<'a>(key: &'a str, left: &[String], right: &[String]) -> Option<(&'a str, &'a str)> {
    let mut found = None;
    for (k, _) in key.match_indices(',') {
        let (a, b) = (&key[..k], &key[k + 1..]);
        if left.iter().any(|n| n == a) && right.iter().any(|n| n == b) {
            if found.is_some() {
                return None;
            }
            found = Some((a, b));
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "ring": {"kind": "q"},
        "semigroupoids": [{"id": "one", "vertices": ["*"], "arrows": [{"id": "1", "src": "*", "rng": "*"}], "prod": [["1", "1", "1"]]}]
    }"#;

    #[test]
    fn minimal_file_parses() {
        let ws = parse_workspace(MINIMAL).unwrap();
        assert_eq!(ws.semigroupoids.len(), 1);
        assert_eq!(ws.kind_of("one"), Some("semigroupoid"));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_workspace("{\n  \"ring\": {\"kind\": \"q\"},\n  \"semigroupoids\": [,]\n}").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, .. }), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = parse_workspace(r#"{"ring": {"kind": "q"}, "bundels": []}"#).unwrap_err();
        assert!(err.to_string().contains("bundels"), "{err}");
    }

    #[test]
    fn dangling_bundle_is_named() {
        let text = MINIMAL.trim_end().trim_end_matches('}').to_string()
            + r#", "tasks": [{"kind": "verify", "theorem": "associativity", "targets": ["b9"]}]}"#;
        let err = parse_workspace(&text).unwrap_err();
        assert_eq!(err, ParseError::Dangling { referrer: "task 0".into(), kind: "bundle", id: "b9".into() });
    }

    #[test]
    fn pairs_split_on_the_right_comma() {
        let names = vec!["(1,2)".to_string(), "(2,1)".to_string(), "(1,1)".to_string()];
        assert_eq!(split_pair("(1,2),(2,1)", &names, &names), Some(("(1,2)", "(2,1)")));
        assert_eq!(split_pair("(1,2)(2,1)", &names, &names), None);
        let plain = vec!["a".to_string(), "b".to_string()];
        assert_eq!(split_pair("a,b", &plain, &plain), Some(("a", "b")));
    }
}
