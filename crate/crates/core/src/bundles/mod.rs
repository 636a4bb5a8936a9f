//! R-bundles with free fibers over finite semigroupoids, sections and
//! convolution, algebra presentations and the constructions built from them.

pub(crate) mod algebra;
pub(crate) mod crossed;
pub(crate) mod sectional;

pub use algebra::ideal_closure;
pub use algebra::{AlgebraPresentation, Grading, SparseProduct};
pub use crossed::{
    lscript_algebra, lscript_iso, naive_crossed_product, validate_algebra_action, AlgebraAction, CrossedProduct,
};
pub use sectional::{
    bundle_from_graded, graded_roundtrip_iso, homogeneous_component, ring_algebra, sectional_algebra,
    semigroupoid_algebra,
};

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result, Rule, ValidationReport, Violation};
use crate::rings::{Elem, Ring};
use crate::semigroupoid::{ArrowId, FiniteSemigroupoid};

/// Largest fiber rank accepted.
pub const MAX_FIBER_RANK: usize = 64;
/// Largest total rank (sum of fiber ranks) accepted.
pub const MAX_TOTAL_RANK: usize = 2048;

/// How fiber products are described.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberMode {
    /// Structure constants `c[i][j] ∈ R^{k_ab}`; needs a commutative ring.
    StructureConstants,
    /// Rank-1 fibers, product `x·t·y` for a central twist `t`.
    RingFiber,
}

impl FiberMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FiberMode::StructureConstants => "sc",
            FiberMode::RingFiber => "ringfiber",
        }
    }
}

/// `c[i][j]` is the coordinate vector of `e_i · e_j`.
pub type Constants = Vec<Vec<Vec<Elem>>>;

/// Raw bundle data before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSpec {
    pub name: String,
    pub mode: FiberMode,
    pub ranks: Vec<usize>,
    pub constants: Vec<((ArrowId, ArrowId), Constants)>,
    pub twists: Vec<((ArrowId, ArrowId), Elem)>,
}

impl BundleSpec {
    /// Rank-1 fibers everywhere with every constant 1.
    pub fn trivial(name: impl Into<String>, base: &FiniteSemigroupoid) -> BundleSpec {
        BundleSpec {
            name: name.into(),
            mode: FiberMode::StructureConstants,
            ranks: vec![1; base.arrow_count()],
            constants: Vec::new(),
            twists: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    name: String,
    ring: Ring,
    base: Arc<FiniteSemigroupoid>,
    mode: FiberMode,
    ranks: Vec<usize>,
    offsets: Vec<usize>,
    /// Per composable pair, indexed like `base.composable_pairs()`.
    constants: Vec<Constants>,
    twists: Vec<Elem>,
    pair_index: Vec<usize>,
}

/// Checks shapes, mode requirements and associativity of the total product.
pub fn validate_bundle(spec: &BundleSpec, ring: &Ring, base: Arc<FiniteSemigroupoid>) -> Result<Bundle> {
    let n = base.arrow_count();
    let name = spec.name.clone();
    if spec.ranks.len() != n {
        return Err(Error::structural(format!("bundle {name}: {} ranks for {n} arrows", spec.ranks.len())));
    }
    if let Some(k) = spec.ranks.iter().find(|&&k| k > MAX_FIBER_RANK) {
        return Err(Error::structural(format!("bundle {name}: fiber rank {k} exceeds {MAX_FIBER_RANK}")));
    }
    let total: usize = spec.ranks.iter().sum();
    if total > MAX_TOTAL_RANK {
        return Err(Error::structural(format!("bundle {name}: total rank {total} exceeds {MAX_TOTAL_RANK}")));
    }
    if spec.mode == FiberMode::StructureConstants && !ring.is_commutative() {
        return Err(Error::capability(format!(
            "bundle {name}: structure constants need a commutative ring; use ringfiber mode over {}",
            ring.describe()
        )));
    }
    let nm = |a: ArrowId| base.arrow_name(a).to_string();
    let mut report = ValidationReport::new(format!("bundle {name}"));
    let pairs = base.composable_pairs();
    let mut pair_index = vec![usize::MAX; n * n];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        pair_index[a * n + b] = i;
    }
    let k = &spec.ranks;
    let mut constants: Vec<Option<Constants>> = vec![None; pairs.len()];
    let mut twists: Vec<Option<Elem>> = vec![None; pairs.len()];
    for ((a, b), c) in &spec.constants {
        let (a, b) = (*a, *b);
        if a >= n || b >= n {
            return Err(Error::structural(format!("bundle {name}: constants reference unknown arrow")));
        }
        let idx = pair_index[a * n + b];
        if idx == usize::MAX {
            return Err(Error::structural(format!(
                "bundle {name}: constants given for non-composable pair ({}, {})",
                nm(a),
                nm(b)
            )));
        }
        if spec.mode != FiberMode::StructureConstants {
            return Err(Error::structural(format!("bundle {name}: constants given in ringfiber mode")));
        }
        let ab = base.prod(a, b).expect("validated semigroupoid");
        let shaped = c.len() == k[a]
            && c.iter().all(|row| {
                row.len() == k[b] && row.iter().all(|v| v.len() == k[ab] && v.iter().all(|x| ring.contains(x)))
            });
        if !shaped {
            report.push(Violation::new(
                Rule::RankMismatch,
                vec![nm(a), nm(b)],
                format!("constants on ({}, {}) must be {}x{} vectors of length {}", nm(a), nm(b), k[a], k[b], k[ab]),
            ));
            continue;
        }
        if constants[idx].replace(c.clone()).is_some() {
            return Err(Error::structural(format!("bundle {name}: constants for ({}, {}) listed twice", nm(a), nm(b))));
        }
    }
    for ((a, b), t) in &spec.twists {
        let (a, b) = (*a, *b);
        if a >= n || b >= n || pair_index[a * n + b] == usize::MAX {
            return Err(Error::structural(format!("bundle {name}: twist on a non-composable or unknown pair")));
        }
        if spec.mode != FiberMode::RingFiber {
            return Err(Error::structural(format!("bundle {name}: twists given in structure-constant mode")));
        }
        if !ring.contains(t) {
            return Err(Error::structural(format!("bundle {name}: twist is not a ring element")));
        }
        twists[pair_index[a * n + b]] = Some(t.clone());
    }
    if spec.mode == FiberMode::RingFiber {
        if let Some(a) = (0..n).find(|&a| k[a] != 1) {
            report.push(Violation::new(
                Rule::RankMismatch,
                vec![nm(a)],
                format!("ringfiber mode needs rank 1 at {}", nm(a)),
            ));
        }
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if let Some(t) = &twists[i] {
                if !ring.is_central(t) {
                    report.push(Violation::new(
                        Rule::CentralTwist,
                        vec![nm(a), nm(b)],
                        format!("twist {} on ({}, {}) is not central", ring.display(t), nm(a), nm(b)),
                    ));
                    break;
                }
            }
        }
    }
    report.into_result()?;
    // defaults for unlisted pairs
    let mut final_constants = Vec::with_capacity(pairs.len());
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let ab = base.prod(a, b).expect("validated semigroupoid");
        let c = match constants[i].take() {
            Some(c) => c,
            None if spec.mode == FiberMode::RingFiber => vec![vec![vec![ring.one()]]],
            None if k[a] == 0 || k[b] == 0 => vec![vec![Vec::new(); k[b]]; k[a]],
            None if k[a] == 1 && k[b] == 1 && k[ab] == 1 => vec![vec![vec![ring.one()]]],
            None if k[ab] == 0 => vec![vec![Vec::new(); k[b]]; k[a]],
            None => {
                return Err(Error::structural(format!("bundle {name}: missing constants for ({}, {})", nm(a), nm(b))));
            }
        };
        final_constants.push(c);
    }
    let mut offsets = Vec::with_capacity(n);
    let mut acc = 0;
    for &r in k {
        offsets.push(acc);
        acc += r;
    }
    let bundle = Bundle {
        name,
        ring: ring.clone(),
        base,
        mode: spec.mode,
        ranks: k.clone(),
        offsets,
        constants: final_constants,
        twists: twists.into_iter().map(|t| t.unwrap_or_else(|| ring.one())).collect(),
        pair_index,
    };
    bundle.check_associativity().into_result()?;
    Ok(bundle)
}

impl Bundle {
    fn check_associativity(&self) -> ValidationReport {
        let mut report = ValidationReport::new(format!("bundle {}", self.name));
        let g = &*self.base;
        let ring = &self.ring;
        for &(a, b) in g.composable_pairs() {
            let ab = g.prod(a, b).expect("validated semigroupoid");
            for c in g.arrows().filter(|&c| g.composable(b, c)) {
                let bc = g.prod(b, c).expect("validated semigroupoid");
                for i in 0..self.ranks[a] {
                    for j in 0..self.ranks[b] {
                        for l in 0..self.ranks[c] {
                            let ei = ring.unit_vec(self.ranks[a], i);
                            let ej = ring.unit_vec(self.ranks[b], j);
                            let el = ring.unit_vec(self.ranks[c], l);
                            let left = self.mul(ab, c, &self.mul(a, b, &ei, &ej), &el);
                            let right = self.mul(a, bc, &ei, &self.mul(b, c, &ej, &el));
                            if left != right {
                                let names = [g.arrow_name(a), g.arrow_name(b), g.arrow_name(c)].map(str::to_string);
                                report.push(Violation::new(
                                    Rule::BundleAssociativity,
                                    names.to_vec(),
                                    format!(
                                        "(e{i}·e{j})·e{l} = {} but e{i}·(e{j}·e{l}) = {} over ({}, {}, {})",
                                        ring.vec_display(&left),
                                        ring.vec_display(&right),
                                        names[0],
                                        names[1],
                                        names[2]
                                    ),
                                ));
                                return report;
                            }
                        }
                    }
                }
            }
        }
        report
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn base(&self) -> &Arc<FiniteSemigroupoid> {
        &self.base
    }

    pub fn mode(&self) -> FiberMode {
        self.mode
    }

    pub fn rank(&self, a: ArrowId) -> usize {
        self.ranks[a]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Index of `(a, i)` in the flattened basis of all fibers.
    pub fn offset(&self, a: ArrowId) -> usize {
        self.offsets[a]
    }

    fn pair(&self, a: ArrowId, b: ArrowId) -> Option<usize> {
        let i = self.pair_index[a * self.base.arrow_count() + b];
        (i != usize::MAX).then_some(i)
    }

    pub fn constants(&self, a: ArrowId, b: ArrowId) -> Option<&Constants> {
        self.pair(a, b).map(|i| &self.constants[i])
    }

    pub fn twist(&self, a: ArrowId, b: ArrowId) -> Option<&Elem> {
        self.pair(a, b).map(|i| &self.twists[i])
    }

    /// `μ_{(a,b)}(x ⊗ y)` in the fiber over `ab`; panics on non-composable pairs.
    pub fn mul(&self, a: ArrowId, b: ArrowId, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let ring = &self.ring;
        let idx = self.pair(a, b).expect("fiber product on a non-composable pair");
        let ab = self.base.prod(a, b).expect("validated semigroupoid");
        match self.mode {
            FiberMode::RingFiber => vec![ring.mul(&ring.mul(&x[0], &self.twists[idx]), &y[0])],
            FiberMode::StructureConstants => {
                let c = &self.constants[idx];
                let mut out = ring.zero_vec(self.ranks[ab]);
                for (i, xi) in x.iter().enumerate() {
                    if ring.is_zero(xi) {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        if ring.is_zero(yj) {
                            continue;
                        }
                        ring.axpy(&mut out, &ring.mul(xi, yj), &c[i][j]);
                    }
                }
                out
            }
        }
    }

    pub fn to_spec(&self) -> BundleSpec {
        let pairs = self.base.composable_pairs();
        BundleSpec {
            name: self.name.clone(),
            mode: self.mode,
            ranks: self.ranks.clone(),
            constants: match self.mode {
                FiberMode::StructureConstants => pairs.iter().copied().zip(self.constants.iter().cloned()).collect(),
                FiberMode::RingFiber => Vec::new(),
            },
            twists: match self.mode {
                FiberMode::RingFiber => pairs.iter().copied().zip(self.twists.iter().cloned()).collect(),
                FiberMode::StructureConstants => Vec::new(),
            },
        }
    }

    /// Structure-file stanza for this bundle.
    pub fn to_json(&self) -> Value {
        let g = &self.base;
        let ranks: serde_json::Map<String, Value> =
            g.arrows().map(|a| (g.arrow_name(a).to_string(), json!(self.ranks[a]))).collect();
        let key = |a: ArrowId, b: ArrowId| format!("{},{}", g.arrow_name(a), g.arrow_name(b));
        let mut v = json!({"id": self.name, "base": g.name(), "mode": self.mode.as_str(), "ranks": ranks});
        let spec = self.to_spec();
        match self.mode {
            FiberMode::StructureConstants => {
                let consts: serde_json::Map<String, Value> = spec
                    .constants
                    .iter()
                    .map(|((a, b), c)| {
                        let c: Vec<Vec<Vec<Value>>> = c
                            .iter()
                            .map(|row| {
                                row.iter().map(|v| v.iter().map(|x| self.ring.elem_to_json(x)).collect()).collect()
                            })
                            .collect();
                        (key(*a, *b), json!(c))
                    })
                    .collect();
                v["constants"] = Value::Object(consts);
            }
            FiberMode::RingFiber => {
                let twists: serde_json::Map<String, Value> =
                    spec.twists.iter().map(|((a, b), t)| (key(*a, *b), self.ring.elem_to_json(t))).collect();
                v["twist"] = Value::Object(twists);
            }
        }
        v
    }
}

/// A finitely supported section; absent arrows carry the zero vector.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Section {
    values: BTreeMap<ArrowId, Vec<Elem>>,
}

impl Section {
    pub fn zero() -> Section {
        Section::default()
    }

    /// Checks vector lengths against the bundle and prunes zero entries.
    pub fn new(bundle: &Bundle, values: impl IntoIterator<Item = (ArrowId, Vec<Elem>)>) -> Result<Section> {
        let mut out = BTreeMap::new();
        for (a, v) in values {
            if a >= bundle.base.arrow_count() || v.len() != bundle.rank(a) {
                return Err(Error::structural(format!("section value at arrow {a} has the wrong shape")));
            }
            if !bundle.ring.vec_is_zero(&v) {
                out.insert(a, v);
            }
        }
        Ok(Section { values: out })
    }

    /// The basis section `e_i` at `a`.
    pub fn basis(bundle: &Bundle, a: ArrowId, i: usize) -> Section {
        Section::new(bundle, [(a, bundle.ring.unit_vec(bundle.rank(a), i))]).expect("basis index in range")
    }

    pub fn get(&self, a: ArrowId) -> Option<&Vec<Elem>> {
        self.values.get(&a)
    }

    pub fn support(&self) -> impl Iterator<Item = ArrowId> + '_ {
        self.values.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Flattened coordinates in the bundle's basis order.
    pub fn coordinates(&self, bundle: &Bundle) -> Vec<Elem> {
        let mut out = bundle.ring.zero_vec(bundle.total_rank());
        for (&a, v) in &self.values {
            let o = bundle.offset(a);
            out[o..o + v.len()].clone_from_slice(v);
        }
        out
    }

    pub fn from_coordinates(bundle: &Bundle, coords: &[Elem]) -> Result<Section> {
        if coords.len() != bundle.total_rank() {
            return Err(Error::structural("coordinate vector has the wrong length"));
        }
        let values =
            bundle.base.arrows().map(|a| (a, coords[bundle.offset(a)..bundle.offset(a) + bundle.rank(a)].to_vec()));
        Section::new(bundle, values)
    }
}

/// `(α∗β)(γ) = Σ_{ab=γ} μ_{(a,b)}(α(a) ⊗ β(b))`.
pub fn convolve(bundle: &Bundle, alpha: &Section, beta: &Section) -> Result<Section> {
    let g = &*bundle.base;
    let ring = &bundle.ring;
    let mut acc: BTreeMap<ArrowId, Vec<Elem>> = BTreeMap::new();
    for (&a, x) in &alpha.values {
        if x.len() != bundle.rank(a) {
            return Err(Error::structural("section does not belong to this bundle"));
        }
        for (&b, y) in &beta.values {
            if y.len() != bundle.rank(b) {
                return Err(Error::structural("section does not belong to this bundle"));
            }
            let Some(ab) = g.prod(a, b) else { continue };
            let term = bundle.mul(a, b, x, y);
            let slot = acc.entry(ab).or_insert_with(|| ring.zero_vec(bundle.rank(ab)));
            *slot = ring.vec_add(slot, &term);
        }
    }
    Section::new(bundle, acc)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::semigroupoid::{samples, validate_semigroupoid, SemigroupoidTables};

    pub fn base(t: &SemigroupoidTables) -> Arc<FiniteSemigroupoid> {
        Arc::new(validate_semigroupoid(t).unwrap())
    }

    pub fn trivial(ring: &Ring, t: &SemigroupoidTables) -> Bundle {
        let g = base(t);
        validate_bundle(&BundleSpec::trivial("triv", &g), ring, g).unwrap()
    }

    /// Rank-4 fiber over the trivial monoid holding the 2×2 matrix units `e11, e12, e21, e22`.
    pub fn matrix_units(ring: &Ring) -> Bundle {
        let g = base(&samples::trivial_monoid());
        let mut c = vec![vec![ring.zero_vec(4); 4]; 4];
        for (p, (i, j)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
            for (q, (k, l)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
                if j == k {
                    c[p][q][i * 2 + l] = ring.one();
                }
            }
        }
        let spec = BundleSpec {
            name: "m2".into(),
            mode: FiberMode::StructureConstants,
            ranks: vec![4],
            constants: vec![((0, 0), c)],
            twists: Vec::new(),
        };
        validate_bundle(&spec, ring, g).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::semigroupoid::samples;

    #[test]
    fn trivial_bundle_over_p2() {
        let b = trivial(&Ring::integers(), &samples::pair_groupoid(2));
        assert_eq!(b.total_rank(), 4);
        // δ_(1,2) ∗ δ_(2,1) = δ_(1,1)
        let x = convolve(&b, &Section::basis(&b, 1, 0), &Section::basis(&b, 2, 0)).unwrap();
        assert_eq!(x, Section::basis(&b, 0, 0));
        assert!(convolve(&b, &Section::zero(), &x).unwrap().is_zero());
    }

    #[test]
    fn zero_constant_breaks_associativity() {
        let ring = Ring::zmod(4);
        let g = base(&samples::pair_groupoid(2));
        let mut spec = BundleSpec::trivial("broken", &g);
        spec.constants.push(((1, 2), vec![vec![vec![ring.zero()]]]));
        let err = validate_bundle(&spec, &ring, g).unwrap_err();
        let v = err.report().unwrap().first().unwrap().clone();
        assert_eq!(v.rule, Rule::BundleAssociativity);
        assert_eq!(v.witness, vec!["(1,2)", "(2,1)", "(1,2)"]);
    }

    #[test]
    fn matrix_units_are_associative() {
        let b = matrix_units(&Ring::rationals());
        let r = b.ring().clone();
        // e12 · e21 = e11
        assert_eq!(b.mul(0, 0, &r.unit_vec(4, 1), &r.unit_vec(4, 2)), r.unit_vec(4, 0));
        assert_eq!(b.mul(0, 0, &r.unit_vec(4, 2), &r.unit_vec(4, 2)), r.zero_vec(4));
    }

    #[test]
    fn rank_mismatch_is_reported() {
        let ring = Ring::rationals();
        let g = base(&samples::trivial_monoid());
        let spec = BundleSpec {
            name: "bad".into(),
            mode: FiberMode::StructureConstants,
            ranks: vec![2],
            constants: vec![((0, 0), vec![vec![vec![ring.one()]]])],
            twists: Vec::new(),
        };
        let err = validate_bundle(&spec, &ring, g).unwrap_err();
        assert!(err.report().unwrap().has(Rule::RankMismatch));
    }

    #[test]
    fn unit_groupoid_convolution_is_pointwise() {
        let b = trivial(&Ring::zmod(4), &samples::unit_groupoid(&["p", "q"]));
        let r = b.ring().clone();
        let a = Section::new(&b, [(0, vec![r.from_int(3)]), (1, vec![r.from_int(2)])]).unwrap();
        let c = Section::new(&b, [(0, vec![r.from_int(3)]), (1, vec![r.from_int(2)])]).unwrap();
        let prod = convolve(&b, &a, &c).unwrap();
        assert_eq!(prod.get(0), Some(&vec![r.from_int(1)]));
        assert_eq!(prod.get(1), None);
    }
}
