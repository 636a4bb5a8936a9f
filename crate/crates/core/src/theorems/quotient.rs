use std::sync::Arc;

use super::{expect, LinearMapOnBasis, Verdict};
use crate::actions::{quotient_semigroupoid, Quotient, RigidCongruence};
use crate::bundles::sectional::fiber_basis;
use crate::bundles::{sectional_algebra, validate_bundle, Bundle, BundleSpec, FiberMode};
use crate::error::{Error, Result, Rule, ValidationReport, Violation};
use crate::rings::{solve_linear, Elem, Matrix, Span};
use crate::semigroupoid::ArrowId;

/// A rigid congruence on the base together with fiber transports `T_{x→y}` for `x ∼ y`.
#[derive(Clone, Debug)]
pub struct BundleCongruence {
    name: String,
    bundle: Arc<Bundle>,
    congruence: RigidCongruence,
    transports: Vec<Vec<Option<Matrix>>>,
}

/// Unlisted transports default to the identity.
pub fn validate_bundle_congruence(
    name: impl Into<String>,
    bundle: Arc<Bundle>,
    congruence: RigidCongruence,
    transports: Vec<((ArrowId, ArrowId), Matrix)>,
) -> Result<BundleCongruence> {
    let name = name.into();
    let g = bundle.base().clone();
    let ring = bundle.ring().clone();
    if !congruence.base().same_tables(&g) {
        return Err(Error::structural(format!("congruence {name} is not on the base of {}", bundle.name())));
    }
    let n = g.arrow_count();
    let nm = |x: ArrowId| g.arrow_name(x).to_string();
    let mut report = ValidationReport::new(format!("bundle congruence {name}"));
    for x in 0..n {
        if let Some(y) = (x + 1..n).find(|&y| congruence.related(x, y) && bundle.rank(x) != bundle.rank(y)) {
            report.push(Violation::new(
                Rule::RankMismatch,
                vec![nm(x), nm(y)],
                format!("{} ∼ {} but their fibers have ranks {} and {}", nm(x), nm(y), bundle.rank(x), bundle.rank(y)),
            ));
            return Err(Error::Invalid(report));
        }
    }
    let mut table: Vec<Vec<Option<Matrix>>> = vec![vec![None; n]; n];
    for ((x, y), m) in transports {
        if x >= n || y >= n {
            return Err(Error::structural(format!("congruence {name}: transport on an unknown arrow")));
        }
        if !congruence.related(x, y) {
            return Err(Error::structural(format!(
                "congruence {name}: transport between unrelated {} and {}",
                nm(x),
                nm(y)
            )));
        }
        let k = bundle.rank(x);
        if m.rows() != k || m.cols() != k {
            return Err(Error::structural(format!("congruence {name}: T_{}→{} must be {k}x{k}", nm(x), nm(y))));
        }
        if bundle.mode() == FiberMode::RingFiber && !ring.is_central(m.get(0, 0)) {
            return Err(Error::structural(format!("congruence {name}: ring-fiber transports must be central")));
        }
        if table[x][y].replace(m).is_some() {
            return Err(Error::structural(format!("congruence {name}: T_{}→{} given twice", nm(x), nm(y))));
        }
    }
    for x in 0..n {
        for y in 0..n {
            if congruence.related(x, y) && table[x][y].is_none() {
                table[x][y] = Some(Matrix::identity(&ring, bundle.rank(x)));
            }
        }
    }
    let c = BundleCongruence { name, bundle, congruence, transports: table };
    c.check().into_result()?;
    Ok(c)
}

impl BundleCongruence {
    fn check(&self) -> ValidationReport {
        let b = &*self.bundle;
        let g = b.base();
        let ring = b.ring();
        let nm = |x: ArrowId| g.arrow_name(x).to_string();
        let mut report = ValidationReport::new(format!("bundle congruence {}", self.name));
        let n = g.arrow_count();
        'cocycle: for x in 0..n {
            if !self.transport(x, x).is_identity(ring) {
                report.push(Violation::new(
                    Rule::TransportCocycle,
                    vec![nm(x), nm(x)],
                    format!("T_{}→{} is not the identity", nm(x), nm(x)),
                ));
                break;
            }
            for y in self.congruence.classes()[self.congruence.class_of(x)].clone() {
                for z in self.congruence.classes()[self.congruence.class_of(x)].clone() {
                    let composite = self.transport(y, z).mul(ring, self.transport(x, y));
                    if !composite.is_ok_and(|m| &m == self.transport(x, z)) {
                        report.push(Violation::new(
                            Rule::TransportCocycle,
                            vec![nm(x), nm(y), nm(z)],
                            format!("T_{}→{} · T_{}→{} != T_{}→{}", nm(y), nm(z), nm(x), nm(y), nm(x), nm(z)),
                        ));
                        break 'cocycle;
                    }
                }
            }
        }
        if !report.is_valid() {
            return report;
        }
        for &(x1, x2) in g.composable_pairs() {
            let x = g.prod(x1, x2).expect("validated semigroupoid");
            for &y1 in &self.congruence.classes()[self.congruence.class_of(x1)] {
                for &y2 in &self.congruence.classes()[self.congruence.class_of(x2)] {
                    let Some(y) = g.prod(y1, y2) else { continue };
                    for i in 0..b.rank(x1) {
                        for j in 0..b.rank(x2) {
                            let (ei, ej) = (ring.unit_vec(b.rank(x1), i), ring.unit_vec(b.rank(x2), j));
                            let left = self.transport(x, y).mul_vec(ring, &b.mul(x1, x2, &ei, &ej));
                            let right = b.mul(
                                y1,
                                y2,
                                &self.transport(x1, y1).mul_vec(ring, &ei),
                                &self.transport(x2, y2).mul_vec(ring, &ej),
                            );
                            if left != right {
                                report.push(Violation::new(
                                    Rule::FiberIntertwining,
                                    vec![nm(x1), nm(x2), nm(y1), nm(y2)],
                                    format!(
                                        "transport from ({}, {}) to ({}, {}) does not preserve e{i}·e{j}",
                                        nm(x1),
                                        nm(x2),
                                        nm(y1),
                                        nm(y2)
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

    pub fn bundle(&self) -> &Arc<Bundle> {
        &self.bundle
    }

    pub fn congruence(&self) -> &RigidCongruence {
        &self.congruence
    }

    /// `T_{x→y}`; panics unless `x ∼ y`.
    pub fn transport(&self, x: ArrowId, y: ArrowId) -> &Matrix {
        self.transports[x][y].as_ref().expect("related arrows")
    }
}

#[derive(Clone, Debug)]
pub struct QuotientBundle {
    pub quotient: Quotient,
    pub bundle: Bundle,
}

/// `π/∼` over `Λ/∼`, with the fiber of the representative over each class.
pub fn quotient_bundle(c: &BundleCongruence) -> Result<QuotientBundle> {
    let b = &*c.bundle;
    let ring = b.ring();
    let g = b.base();
    let quotient = quotient_semigroupoid(&c.congruence)?;
    let q = quotient.semigroupoid.clone();
    let rep = |k: usize| c.congruence.classes()[k][0];
    let name = format!("{}/{}", b.name(), c.name);
    // the representative product, transported to the representative of its class
    let product_at = |x1: ArrowId, x2: ArrowId, u: &[Elem], v: &[Elem]| {
        let x = g.prod(x1, x2).expect("composable");
        c.transport(x, c.congruence.representative(x)).mul_vec(ring, &b.mul(x1, x2, u, v))
    };
    for &(x1, x2) in g.composable_pairs() {
        let (r1, r2) = (c.congruence.representative(x1), c.congruence.representative(x2));
        for i in 0..b.rank(x1) {
            for j in 0..b.rank(x2) {
                let (ei, ej) = (ring.unit_vec(b.rank(x1), i), ring.unit_vec(b.rank(x2), j));
                let direct = product_at(r1, r2, &ei, &ej);
                let moved = product_at(
                    x1,
                    x2,
                    &c.transport(r1, x1).mul_vec(ring, &ei),
                    &c.transport(r2, x2).mul_vec(ring, &ej),
                );
                if direct != moved {
                    return Err(Error::internal(format!(
                        "quotient fiber product depends on the representative at ({}, {})",
                        g.arrow_name(x1),
                        g.arrow_name(x2)
                    )));
                }
            }
        }
    }
    let ranks = q.arrows().map(|k| b.rank(rep(k))).collect();
    let mut constants = Vec::new();
    let mut twists = Vec::new();
    for &(k1, k2) in q.composable_pairs() {
        let (r1, r2) = (rep(k1), rep(k2));
        match b.mode() {
            FiberMode::StructureConstants => {
                let m: Vec<Vec<Vec<Elem>>> = (0..b.rank(r1))
                    .map(|i| {
                        (0..b.rank(r2))
                            .map(|j| product_at(r1, r2, &ring.unit_vec(b.rank(r1), i), &ring.unit_vec(b.rank(r2), j)))
                            .collect()
                    })
                    .collect();
                constants.push(((k1, k2), m));
            }
            FiberMode::RingFiber => {
                let one = [ring.one()];
                twists.push(((k1, k2), product_at(r1, r2, &one, &one).remove(0)));
            }
        }
    }
    let spec = BundleSpec { name, mode: b.mode(), ranks, constants, twists };
    let bundle = validate_bundle(&spec, ring, q)?;
    Ok(QuotientBundle { quotient, bundle })
}

#[derive(Clone, Debug)]
pub struct QuotientTheorem {
    pub map: LinearMapOnBasis,
    pub kernel: Span,
    pub verdict: Verdict,
}

/// `𝒜(π) → 𝒜(π/∼)`, certified onto, with kernel spanned by `e_{x,i} − T_{x→y}e_{x,i}` for `x ∼ y`.
pub fn quotient_map_and_kernel(c: &BundleCongruence) -> Result<QuotientTheorem> {
    let b = &*c.bundle;
    let ring = b.ring();
    if !ring.supports_linear_algebra() {
        return Err(Error::capability(format!("kernels need linear algebra over {}", ring.describe())));
    }
    let qb = quotient_bundle(c)?;
    let source = sectional_algebra(b, None)?;
    let target = sectional_algebra(&qb.bundle, None)?;
    let n = source.rank();
    let place = |x: ArrowId, v: &[Elem]| {
        let mut w = ring.zero_vec(n);
        w[b.offset(x)..b.offset(x) + b.rank(x)].clone_from_slice(v);
        w
    };
    let images = fiber_basis(b)
        .into_iter()
        .map(|(x, i)| {
            let k = c.congruence.class_of(x);
            let v = c.transport(x, c.congruence.representative(x)).column(i);
            let mut w = ring.zero_vec(target.rank());
            w[qb.bundle.offset(k)..qb.bundle.offset(k) + v.len()].clone_from_slice(&v);
            w
        })
        .collect();
    let map = LinearMapOnBasis::new(format!("q[{}]", c.name), Arc::new(source), Arc::new(target), images, None)?;
    let certificate = map.certify_surjection()?;
    let kernel = Span::new(ring, n, solve_linear(&map.matrix(), ring)?.kernel)?;
    let mut generators = Vec::new();
    for class in c.congruence.classes() {
        for &x in class {
            for &y in class.iter().filter(|&&y| y != x) {
                for i in 0..b.rank(x) {
                    let e = ring.unit_vec(b.rank(x), i);
                    generators.push(ring.vec_sub(&place(x, &e), &place(y, &c.transport(x, y).mul_vec(ring, &e))));
                }
            }
        }
    }
    let generated = Span::new(ring, n, generators.clone())?;
    let outside = generators.iter().position(|v| !kernel.contains(v));
    let verdict = Verdict::new("quotient", c.name.clone())
        .rank("sectional", map.source().rank())
        .rank("quotient-sectional", map.target().rank())
        .rank("kernel", kernel.rank())
        .certificate(certificate)
        .check(expect("generators-in-kernel", outside.is_none(), || {
            format!("generator {} is not killed", outside.unwrap_or(0))
        }))
        .check(expect("kernel-generated", generated.same_as(&kernel), || {
            format!("generators span rank {} but the kernel has rank {}", generated.rank(), kernel.rank())
        }));
    Ok(QuotientTheorem { map, kernel, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::fixtures::semilattice_on_points;
    use crate::actions::{germ_quotient, validate_rigid_congruence};
    use crate::bundles::fixtures::trivial;
    use crate::rings::Ring;
    use crate::semigroupoid::{samples, FiniteSemigroupoid};

    fn run(c: &BundleCongruence) -> QuotientTheorem {
        let t = quotient_map_and_kernel(c).unwrap();
        assert!(t.verdict.passed, "{:?}", t.verdict.first_failure());
        t
    }

    #[test]
    fn identity_congruence_has_zero_kernel() {
        let r = Ring::rationals();
        let b = Arc::new(trivial(&r, &samples::pair_groupoid(2)));
        let c = validate_bundle_congruence("id", b.clone(), RigidCongruence::identity(b.base().clone()), Vec::new())
            .unwrap();
        let t = run(&c);
        assert_eq!(t.kernel.rank(), 0);
        assert_eq!(t.verdict.ranks["quotient-sectional"], 4);
    }

    #[test]
    fn germ_congruence_kills_one_direction() {
        let r = Ring::rationals();
        let theta = semilattice_on_points(&[("x", "x")]).unwrap();
        let gq = germ_quotient(&theta).unwrap();
        let sp = gq.semidirect.semigroupoid.clone();
        let b = Arc::new(validate_bundle(&BundleSpec::trivial("t", &sp), &r, sp.clone()).unwrap());
        let c = validate_bundle_congruence("germ", b, gq.congruence.clone(), Vec::new()).unwrap();
        let t = run(&c);
        assert_eq!(t.kernel.rank(), 1);
        assert_eq!(t.verdict.ranks["quotient-sectional"], 2);
    }

    #[test]
    fn total_congruence_with_sign() {
        let r = Ring::integers();
        let b = Arc::new(trivial(&r, &samples::z2()));
        let total = validate_rigid_congruence(b.base().clone(), vec![vec![0, 1]]).unwrap();
        let minus = Matrix::new(1, 1, vec![r.from_int(-1)]).unwrap();
        let c = validate_bundle_congruence("sign", b, total, vec![((0, 1), minus.clone()), ((1, 0), minus)]).unwrap();
        let t = run(&c);
        assert_eq!(t.kernel.rank(), 1);
        assert!(t.kernel.contains(&[r.one(), r.one()]));
    }

    #[test]
    fn parallel_arrows_collapse() {
        let r = Ring::zmod(5);
        let g = Arc::new(
            FiniteSemigroupoid::build(
                "par",
                vec!["v".into(), "w".into()],
                vec!["a".into(), "b".into()],
                vec![0, 0],
                vec![1, 1],
                |_, _| None,
            )
            .unwrap(),
        );
        let b = Arc::new(validate_bundle(&BundleSpec::trivial("t", &g), &r, g.clone()).unwrap());
        let both = validate_rigid_congruence(g, vec![vec![0, 1]]).unwrap();
        let c = validate_bundle_congruence("par", b, both, Vec::new()).unwrap();
        let t = run(&c);
        assert_eq!(t.kernel.rank(), 1);
        assert_eq!(t.map.target().rank(), 1);
    }

    #[test]
    fn broken_cocycle_is_reported() {
        let r = Ring::rationals();
        let b = Arc::new(trivial(&r, &samples::z2()));
        let total = validate_rigid_congruence(b.base().clone(), vec![vec![0, 1]]).unwrap();
        let two = Matrix::new(1, 1, vec![r.from_int(2)]).unwrap();
        let err = validate_bundle_congruence("bad", b, total, vec![((0, 1), two)]).unwrap_err();
        assert_eq!(err.report().unwrap().first().unwrap().rule, Rule::TransportCocycle);
    }
}
