use std::sync::Arc;

use crate::error::{Error, Result, Rule, ValidationReport, Violation};
use crate::semigroupoid::{validate_homomorphism, ArrowId, FiniteSemigroupoid, Homomorphism};

/// A partition of the arrows compatible with source, range and product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidCongruence {
    base: Arc<FiniteSemigroupoid>,
    /// Class index per arrow; classes are numbered by their minimal arrow.
    class_of: Vec<usize>,
    classes: Vec<Vec<ArrowId>>,
}

/// Checks that `classes` partitions the arrows and is a rigid congruence.
pub fn validate_rigid_congruence(base: Arc<FiniteSemigroupoid>, classes: Vec<Vec<ArrowId>>) -> Result<RigidCongruence> {
    let n = base.arrow_count();
    let mut class_of = vec![usize::MAX; n];
    for (i, class) in classes.iter().enumerate() {
        if class.is_empty() {
            return Err(Error::structural("congruence has an empty class"));
        }
        for &a in class {
            if a >= n {
                return Err(Error::structural(format!("congruence references unknown arrow id {a}")));
            }
            if class_of[a] != usize::MAX {
                return Err(Error::structural(format!("arrow {} lies in two classes", base.arrow_name(a))));
            }
            class_of[a] = i;
        }
    }
    if let Some(a) = class_of.iter().position(|&c| c == usize::MAX) {
        return Err(Error::structural(format!("arrow {} is in no class", base.arrow_name(a))));
    }
    // renumber by minimal member
    let mut classes: Vec<Vec<ArrowId>> = classes
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect();
    classes.sort_by_key(|c| c[0]);
    for (i, c) in classes.iter().enumerate() {
        for &a in c {
            class_of[a] = i;
        }
    }

    let nm = |a: ArrowId| base.arrow_name(a).to_string();
    let mut report = ValidationReport::new(format!("congruence on {}", base.name()));
    'shape: for x in 0..n {
        for y in x + 1..n {
            if class_of[x] == class_of[y] && (base.src(x) != base.src(y) || base.rng(x) != base.rng(y)) {
                report.push(Violation::new(
                    Rule::CongruenceShape,
                    vec![nm(x), nm(y)],
                    format!("{} ~ {} but their source or range differ", nm(x), nm(y)),
                ));
                break 'shape;
            }
        }
    }
    if report.is_valid() {
        'prod: for &(x1, x2) in base.composable_pairs() {
            let x = base.prod(x1, x2).expect("validated semigroupoid");
            for &y1 in &classes[class_of[x1]] {
                for &y2 in &classes[class_of[x2]] {
                    let ok = base.prod(y1, y2).is_some_and(|y| class_of[y] == class_of[x]);
                    if !ok {
                        report.push(Violation::new(
                            Rule::CongruenceProduct,
                            vec![nm(x1), nm(x2), nm(y1), nm(y2)],
                            format!("{}·{} is not related to {}·{}", nm(x1), nm(x2), nm(y1), nm(y2)),
                        ));
                        break 'prod;
                    }
                }
            }
        }
    }
    report.into_result()?;
    Ok(RigidCongruence { base, class_of, classes })
}

impl RigidCongruence {
    pub fn identity(base: Arc<FiniteSemigroupoid>) -> RigidCongruence {
        let classes = base.arrows().map(|a| vec![a]).collect();
        validate_rigid_congruence(base, classes).expect("identity partition is a congruence")
    }

    pub fn base(&self) -> &Arc<FiniteSemigroupoid> {
        &self.base
    }

    pub fn class_of(&self, a: ArrowId) -> usize {
        self.class_of[a]
    }

    pub fn classes(&self) -> &[Vec<ArrowId>] {
        &self.classes
    }

    pub fn related(&self, a: ArrowId, b: ArrowId) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Minimal arrow of the class of `a`.
    pub fn representative(&self, a: ArrowId) -> ArrowId {
        self.classes[self.class_of[a]][0]
    }
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub semigroupoid: Arc<FiniteSemigroupoid>,
    pub projection: Homomorphism,
}

/// `Λ/∼` with arrows the classes (named by their representatives) and the projection.
pub fn quotient_semigroupoid(c: &RigidCongruence) -> Result<Quotient> {
    let base = &c.base;
    let reps: Vec<ArrowId> = c.classes.iter().map(|cl| cl[0]).collect();
    let names = reps.iter().map(|&r| format!("[{}]", base.arrow_name(r))).collect();
    let src = reps.iter().map(|&r| base.src(r)).collect();
    let rng = reps.iter().map(|&r| base.rng(r)).collect();
    // well-definedness: every pair of representatives agrees
    for &(x, y) in base.composable_pairs() {
        let xy = base.prod(x, y).expect("validated semigroupoid");
        let via_reps = base.prod(c.representative(x), c.representative(y)).map(|z| c.class_of(z));
        if via_reps != Some(c.class_of(xy)) {
            return Err(Error::internal(format!(
                "quotient product is not well defined at ({}, {})",
                base.arrow_name(x),
                base.arrow_name(y)
            )));
        }
    }
    let q = FiniteSemigroupoid::build(
        format!("{}/~", base.name()),
        base.vertex_names().to_vec(),
        names,
        src,
        rng,
        |i, j| base.prod(reps[i], reps[j]).map(|z| c.class_of(z)),
    )?;
    let q = Arc::new(q);
    let projection = validate_homomorphism("p", base.clone(), q.clone(), c.class_of.clone())
        .map_err(|e| Error::internal(format!("quotient projection is not a homomorphism: {e}")))?;
    if !projection.is_rigid() {
        return Err(Error::internal("quotient projection is not rigid"));
    }
    Ok(Quotient { semigroupoid: q, projection })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::semidirect_product;
    use super::*;
    use crate::semigroupoid::{find_isomorphism, samples};

    #[test]
    fn identity_congruence_gives_a_copy() {
        let p2 = space(&samples::pair_groupoid(2));
        let q = quotient_semigroupoid(&RigidCongruence::identity(p2.clone())).unwrap();
        assert!(find_isomorphism(&q.semigroupoid, &p2).is_some());
    }

    #[test]
    fn germ_partition_on_semidirect_product() {
        let theta = semilattice_on_points(&[("x", "x")]).unwrap();
        let sp = semidirect_product(&theta).unwrap();
        let g = sp.semigroupoid.clone();
        let c = validate_rigid_congruence(g.clone(), vec![vec![0, 2], vec![1]]).unwrap();
        let q = quotient_semigroupoid(&c).unwrap();
        assert_eq!(q.semigroupoid.arrow_count(), 2);
        assert!(find_isomorphism(&q.semigroupoid, &space(&samples::unit_groupoid(&["x", "y"]))).is_some());

        let err = validate_rigid_congruence(g, vec![vec![0, 1], vec![2]]).unwrap_err();
        assert!(err.report().unwrap().has(Rule::CongruenceShape));
    }

    #[test]
    fn total_congruence_on_z2() {
        let z2 = space(&samples::z2());
        let c = validate_rigid_congruence(z2, vec![vec![0, 1]]).unwrap();
        let q = quotient_semigroupoid(&c).unwrap();
        assert_eq!(q.semigroupoid.arrow_count(), 1);
        assert_eq!(q.semigroupoid.prod(0, 0), Some(0));
    }
}
