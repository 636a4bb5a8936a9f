//! Finite semigroupoids: directed graphs with an associative product defined
//! exactly on composable pairs.

mod constructions;
mod homomorphism;
mod inverse;

pub use constructions::{direct_product, find_isomorphism, GroupoidTables};
pub use homomorphism::{validate_homomorphism, Homomorphism};
pub use inverse::{infer_inverse, validate_inverse_semigroupoid, FiniteInverseSemigroupoid};

use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result, Rule, ValidationReport, Violation};

pub type ArrowId = usize;
pub type VertexId = usize;

/// Largest arrow count accepted by the validators.
pub const MAX_ARROWS: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowSpec {
    pub name: String,
    pub src: String,
    pub rng: String,
}

/// Raw, name-based tables as they appear in a structure file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SemigroupoidTables {
    pub name: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    /// `(a, b, ab)` for every defined product.
    pub prod: Vec<[String; 3]>,
    /// Optional inverse table `(s, s*)`.
    pub inv: Option<Vec<(String, String)>>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSemigroupoid {
    name: String,
    vertex_names: Vec<String>,
    arrow_names: Vec<String>,
    arrow_index: HashMap<String, ArrowId>,
    src: Vec<VertexId>,
    rng: Vec<VertexId>,
    table: Vec<Option<ArrowId>>,
    composable: Vec<(ArrowId, ArrowId)>,
}

impl fmt::Debug for FiniteSemigroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSemigroupoid")
            .field("name", &self.name)
            .field("vertices", &self.vertex_names.len())
            .field("arrows", &self.arrow_names)
            .finish()
    }
}

fn index_names(kind: &str, names: &[String]) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.clone(), i).is_some() {
            return Err(Error::structural(format!("duplicate {kind} id {n:?}")));
        }
    }
    Ok(map)
}

fn lookup(map: &HashMap<String, usize>, kind: &str, name: &str) -> Result<usize> {
    map.get(name).copied().ok_or_else(|| Error::structural(format!("unknown {kind} {name:?}")))
}

/// Checks every semigroupoid axiom by enumeration and builds the validated structure.
pub fn validate_semigroupoid(tables: &SemigroupoidTables) -> Result<FiniteSemigroupoid> {
    if tables.arrows.len() > MAX_ARROWS {
        return Err(Error::structural(format!("{} arrows exceeds limit {MAX_ARROWS}", tables.arrows.len())));
    }
    let vindex = index_names("vertex", &tables.vertices)?;
    let arrow_names: Vec<String> = tables.arrows.iter().map(|a| a.name.clone()).collect();
    let aindex = index_names("arrow", &arrow_names)?;
    let src = tables.arrows.iter().map(|a| lookup(&vindex, "vertex", &a.src)).collect::<Result<Vec<_>>>()?;
    let rng = tables.arrows.iter().map(|a| lookup(&vindex, "vertex", &a.rng)).collect::<Result<Vec<_>>>()?;
    let n = arrow_names.len();
    let mut table = vec![None; n * n];
    for [a, b, c] in &tables.prod {
        let (a, b, c) = (lookup(&aindex, "arrow", a)?, lookup(&aindex, "arrow", b)?, lookup(&aindex, "arrow", c)?);
        match table[a * n + b] {
            Some(old) if old != c => {
                return Err(Error::structural(format!(
                    "product {}·{} listed twice with different values",
                    arrow_names[a], arrow_names[b]
                )))
            }
            _ => table[a * n + b] = Some(c),
        }
    }
    FiniteSemigroupoid::from_table(tables.name.clone(), tables.vertices.clone(), arrow_names, src, rng, table)
}

impl FiniteSemigroupoid {
    /// Builds from id-based tables and runs the full validator.
    pub fn from_table(
        name: String,
        vertex_names: Vec<String>,
        arrow_names: Vec<String>,
        src: Vec<VertexId>,
        rng: Vec<VertexId>,
        table: Vec<Option<ArrowId>>,
    ) -> Result<FiniteSemigroupoid> {
        let n = arrow_names.len();
        if n > MAX_ARROWS {
            return Err(Error::structural(format!("{n} arrows exceeds limit {MAX_ARROWS}")));
        }
        if src.len() != n || rng.len() != n || table.len() != n * n {
            return Err(Error::structural("semigroupoid tables have inconsistent sizes"));
        }
        let nv = vertex_names.len();
        if src.iter().chain(&rng).any(|&v| v >= nv) || table.iter().flatten().any(|&c| c >= n) {
            return Err(Error::structural("semigroupoid table references an unknown id"));
        }
        index_names("vertex", &vertex_names)?;
        let arrow_index = index_names("arrow", &arrow_names)?;
        let composable = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| src[a] == rng[b]).collect();
        let s = FiniteSemigroupoid { name, vertex_names, arrow_names, arrow_index, src, rng, table, composable };
        s.check_axioms().into_result()?;
        Ok(s)
    }

    /// Builds from a product function evaluated on composable pairs.
    pub fn build(
        name: impl Into<String>,
        vertex_names: Vec<String>,
        arrow_names: Vec<String>,
        src: Vec<VertexId>,
        rng: Vec<VertexId>,
        product: impl Fn(ArrowId, ArrowId) -> Option<ArrowId>,
    ) -> Result<FiniteSemigroupoid> {
        let n = arrow_names.len();
        if n > MAX_ARROWS {
            return Err(Error::structural(format!("{n} arrows exceeds limit {MAX_ARROWS}")));
        }
        if src.len() != n || rng.len() != n {
            return Err(Error::structural("semigroupoid tables have inconsistent sizes"));
        }
        let mut table = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                if src[a] == rng[b] {
                    table[a * n + b] = product(a, b);
                }
            }
        }
        FiniteSemigroupoid::from_table(name.into(), vertex_names, arrow_names, src, rng, table)
    }

    fn check_axioms(&self) -> ValidationReport {
        let mut report = ValidationReport::new(format!("semigroupoid {}", self.name));
        let n = self.arrow_count();
        let nm = |a: ArrowId| self.arrow_names[a].clone();
        let mut first = |rule: Rule, witness: Vec<String>, detail: String| {
            if !report.has(rule) {
                report.push(Violation::new(rule, witness, detail));
            }
        };
        for a in 0..n {
            for b in 0..n {
                let composable = self.src[a] == self.rng[b];
                match (composable, self.table[a * n + b]) {
                    (true, None) => first(
                        Rule::MissingProduct,
                        vec![nm(a), nm(b)],
                        format!("{}·{} is composable but undefined", nm(a), nm(b)),
                    ),
                    (false, Some(_)) => first(
                        Rule::ProductOnNonComposable,
                        vec![nm(a), nm(b)],
                        format!("{}·{} is defined but src({}) != rng({})", nm(a), nm(b), nm(a), nm(b)),
                    ),
                    (true, Some(c)) => {
                        if self.rng[c] != self.rng[a] {
                            first(
                                Rule::RangeOfProduct,
                                vec![nm(a), nm(b)],
                                format!("rng({}·{}) = rng({}) != rng({})", nm(a), nm(b), nm(c), nm(a)),
                            );
                        }
                        if self.src[c] != self.src[b] {
                            first(
                                Rule::SourceOfProduct,
                                vec![nm(a), nm(b)],
                                format!("src({}·{}) = src({}) != src({})", nm(a), nm(b), nm(c), nm(b)),
                            );
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        'assoc: for &(a, b) in &self.composable {
            let Some(ab) = self.table[a * n + b] else { continue };
            for c in 0..n {
                if self.src[b] != self.rng[c] {
                    continue;
                }
                let Some(bc) = self.table[b * n + c] else { continue };
                let left = self.table[ab * n + c];
                let right = self.table[a * n + bc];
                if left != right {
                    let show = |x: Option<ArrowId>| x.map_or("undefined".to_string(), nm);
                    first(
                        Rule::Associativity,
                        vec![nm(a), nm(b), nm(c)],
                        format!(
                            "({}·{})·{} = {} but {}·({}·{}) = {}",
                            nm(a),
                            nm(b),
                            nm(c),
                            show(left),
                            nm(a),
                            nm(b),
                            nm(c),
                            show(right)
                        ),
                    );
                    break 'assoc;
                }
            }
        }
        report
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn arrow_count(&self) -> usize {
        self.arrow_names.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn arrows(&self) -> std::ops::Range<ArrowId> {
        0..self.arrow_count()
    }

    pub fn src(&self, a: ArrowId) -> VertexId {
        self.src[a]
    }

    pub fn rng(&self, a: ArrowId) -> VertexId {
        self.rng[a]
    }

    pub fn composable(&self, a: ArrowId, b: ArrowId) -> bool {
        self.src[a] == self.rng[b]
    }

    pub fn prod(&self, a: ArrowId, b: ArrowId) -> Option<ArrowId> {
        self.table[a * self.arrow_count() + b]
    }

    /// All composable pairs in lexicographic order.
    pub fn composable_pairs(&self) -> &[(ArrowId, ArrowId)] {
        &self.composable
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrow_names[a]
    }

    pub fn arrow_names(&self) -> &[String] {
        &self.arrow_names
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<ArrowId> {
        self.arrow_index.get(name).copied()
    }

    pub fn arrow_id(&self, name: &str) -> Result<ArrowId> {
        self.arrow_by_name(name)
            .ok_or_else(|| Error::structural(format!("semigroupoid {} has no arrow {name:?}", self.name)))
    }

    pub fn is_idempotent(&self, a: ArrowId) -> bool {
        self.prod(a, a) == Some(a)
    }

    /// Name-based tables; validating them reproduces `self`.
    pub fn to_tables(&self) -> SemigroupoidTables {
        let n = self.arrow_count();
        SemigroupoidTables {
            name: self.name.clone(),
            vertices: self.vertex_names.clone(),
            arrows: (0..n)
                .map(|a| ArrowSpec {
                    name: self.arrow_names[a].clone(),
                    src: self.vertex_names[self.src[a]].clone(),
                    rng: self.vertex_names[self.rng[a]].clone(),
                })
                .collect(),
            prod: self
                .composable
                .iter()
                .filter_map(|&(a, b)| {
                    self.prod(a, b).map(|c| {
                        [self.arrow_names[a].clone(), self.arrow_names[b].clone(), self.arrow_names[c].clone()]
                    })
                })
                .collect(),
            inv: None,
        }
    }

    pub fn to_json(&self) -> Value {
        tables_to_json(&self.to_tables())
    }

    /// Same vertex/arrow names and identical product tables.
    pub fn same_tables(&self, other: &FiniteSemigroupoid) -> bool {
        self.vertex_names == other.vertex_names
            && self.arrow_names == other.arrow_names
            && self.src == other.src
            && self.rng == other.rng
            && self.table == other.table
    }

    pub fn is_groupoid(&self) -> bool {
        self.groupoid_tables().is_ok()
    }
}

pub fn tables_to_json(t: &SemigroupoidTables) -> Value {
    let mut v = json!({
        "id": t.name,
        "vertices": t.vertices,
        "arrows": t.arrows.iter().map(|a| json!({"id": a.name, "src": a.src, "rng": a.rng})).collect::<Vec<_>>(),
        "prod": t.prod,
    });
    if let Some(inv) = &t.inv {
        let mut m = serde_json::Map::new();
        for (a, b) in inv {
            m.insert(a.clone(), json!(b));
        }
        v["inv"] = Value::Object(m);
    }
    v
}

/// Handy constructors used by tests and fixtures.
pub mod samples {
    use super::*;

    fn single_vertex(name: &str, arrows: &[&str], prod: impl Fn(usize, usize) -> usize) -> SemigroupoidTables {
        let n = arrows.len();
        SemigroupoidTables {
            name: name.into(),
            vertices: vec!["*".into()],
            arrows: arrows
                .iter()
                .map(|a| ArrowSpec { name: a.to_string(), src: "*".into(), rng: "*".into() })
                .collect(),
            prod: (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .map(|(a, b)| [arrows[a].to_string(), arrows[b].to_string(), arrows[prod(a, b)].to_string()])
                .collect(),
            inv: None,
        }
    }

    pub fn trivial_monoid() -> SemigroupoidTables {
        let mut t = single_vertex("trivial", &["1"], |_, _| 0);
        t.inv = Some(vec![("1".into(), "1".into())]);
        t
    }

    /// ℤ/2 as a one-vertex groupoid with arrows `u` (unit) and `g`.
    pub fn z2() -> SemigroupoidTables {
        let mut t = single_vertex("z2", &["u", "g"], |a, b| a ^ b);
        t.inv = Some(vec![("u".into(), "u".into()), ("g".into(), "g".into())]);
        t
    }

    /// The two-element semilattice `{1, e}` with `e² = e`.
    pub fn semilattice() -> SemigroupoidTables {
        let mut t = single_vertex("semilattice", &["1", "e"], |a, b| a | b);
        t.inv = Some(vec![("1".into(), "1".into()), ("e".into(), "e".into())]);
        t
    }

    /// Klein four-group `{u, a, b, c}`.
    pub fn klein() -> SemigroupoidTables {
        let mut t = single_vertex("klein", &["u", "a", "b", "c"], |a, b| a ^ b);
        t.inv = Some(["u", "a", "b", "c"].iter().map(|x| (x.to_string(), x.to_string())).collect());
        t
    }

    /// Pair groupoid on `n` vertices; arrow `(i,j)` has range `i` and source `j`.
    pub fn pair_groupoid(n: usize) -> SemigroupoidTables {
        let v: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let name = |i: usize, j: usize| format!("({},{})", i, j);
        let mut arrows = Vec::new();
        let mut prod = Vec::new();
        let mut inv = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                arrows.push(ArrowSpec { name: name(i, j), src: j.to_string(), rng: i.to_string() });
                inv.push((name(i, j), name(j, i)));
                for k in 1..=n {
                    prod.push([name(i, j), name(j, k), name(i, k)]);
                }
            }
        }
        SemigroupoidTables { name: format!("pair{n}"), vertices: v, arrows, prod, inv: Some(inv) }
    }

    /// Unit groupoid on the given points: one idempotent loop per vertex.
    pub fn unit_groupoid(points: &[&str]) -> SemigroupoidTables {
        SemigroupoidTables {
            name: "units".into(),
            vertices: points.iter().map(|p| p.to_string()).collect(),
            arrows: points
                .iter()
                .map(|p| ArrowSpec { name: p.to_string(), src: p.to_string(), rng: p.to_string() })
                .collect(),
            prod: points.iter().map(|p| [p.to_string(), p.to_string(), p.to_string()]).collect(),
            inv: Some(points.iter().map(|p| (p.to_string(), p.to_string())).collect()),
        }
    }
}
