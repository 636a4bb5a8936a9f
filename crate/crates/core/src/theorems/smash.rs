use std::sync::Arc;

use super::{expect, pullback, LinearMapOnBasis, Verdict};
use crate::bundles::sectional::fiber_basis;
use crate::bundles::{sectional_algebra, AlgebraPresentation, Bundle, Grading};
use crate::error::{Error, Result};
use crate::semigroupoid::{validate_homomorphism, ArrowId, FiniteSemigroupoid, GroupoidTables, Homomorphism};

fn groupoid(g: &FiniteSemigroupoid) -> Result<GroupoidTables> {
    g.groupoid_tables().map_err(|why| Error::structural(format!("{} is not a groupoid: {why}", g.name())))
}

#[derive(Clone, Debug)]
pub struct SkewProduct {
    pub semigroupoid: Arc<FiniteSemigroupoid>,
    /// `(γ, g) ↦ d(γ)`.
    pub grading: Homomorphism,
    pub pairs: Vec<(ArrowId, ArrowId)>,
}

impl SkewProduct {
    pub fn arrow(&self, x: ArrowId, g: ArrowId) -> Option<ArrowId> {
        self.pairs.binary_search(&(x, g)).ok()
    }
}

/// `Γ ×_d 𝒢`: arrows `(γ, g)` with `src d(γ) = rng g`, from `(src γ, g)` to `(rng γ, d(γ)g)`.
pub fn skew_product(d: &Homomorphism) -> Result<SkewProduct> {
    let (base, g) = (d.source(), d.target());
    groupoid(g)?;
    let ng = g.arrow_count();
    let pairs: Vec<(ArrowId, ArrowId)> = base
        .arrows()
        .flat_map(|x| g.arrows().map(move |h| (x, h)))
        .filter(|&(x, h)| g.src(d.apply(x)) == g.rng(h))
        .collect();
    let vertex = |v: usize, h: ArrowId| v * ng + h;
    let vnames = (0..base.vertex_count())
        .flat_map(|v| g.arrows().map(move |h| (v, h)))
        .map(|(v, h)| format!("({},{})", base.vertex_name(v), g.arrow_name(h)))
        .collect();
    let anames = pairs.iter().map(|&(x, h)| format!("({},{})", base.arrow_name(x), g.arrow_name(h))).collect();
    let src = pairs.iter().map(|&(x, h)| vertex(base.src(x), h)).collect();
    let rng = pairs
        .iter()
        .map(|&(x, h)| vertex(base.rng(x), g.prod(d.apply(x), h).expect("filtered on composability")))
        .collect();
    let find = |x, h| pairs.binary_search(&(x, h)).ok();
    let sg = FiniteSemigroupoid::build(format!("{}x{}", base.name(), g.name()), vnames, anames, src, rng, |p, q| {
        let ((x1, _), (x2, h2)) = (pairs[p], pairs[q]);
        find(base.prod(x1, x2)?, h2)
    })?;
    let sg = Arc::new(sg);
    let grading = validate_homomorphism(
        format!("{}~", d.name()),
        sg.clone(),
        g.clone(),
        pairs.iter().map(|&(x, _)| d.apply(x)).collect(),
    )?;
    Ok(SkewProduct { semigroupoid: sg, grading, pairs })
}

#[derive(Clone, Debug)]
pub struct SmashProduct {
    pub algebra: AlgebraPresentation,
    /// `(basis index of A, g)` for each basis element `v δ_g`.
    pub pairs: Vec<(usize, ArrowId)>,
}

impl SmashProduct {
    pub fn index(&self, u: usize, g: ArrowId) -> Option<usize> {
        self.pairs.binary_search(&(u, g)).ok()
    }
}

/// `A # 𝒢` for `A` graded by a groupoid: `(u δ_g)(v δ_h) = uv δ_h` when `deg v = g h⁻¹`, else 0.
pub fn smash_product(a: &AlgebraPresentation) -> Result<SmashProduct> {
    let grading = a.grading().ok_or_else(|| Error::structural(format!("algebra {} carries no grading", a.name())))?;
    let g = grading.semigroupoid.clone();
    let tables = groupoid(&g)?;
    a.check_graded_closure().into_result()?;
    let deg = &grading.degrees;
    let pairs: Vec<(usize, ArrowId)> = (0..a.rank())
        .flat_map(|u| g.arrows().map(move |h| (u, h)))
        .filter(|&(u, h)| g.src(deg[u]) == g.rng(h))
        .collect();
    let ring = a.ring();
    let n = pairs.len();
    let labels = pairs.iter().map(|&(u, h)| format!("{}#{}", a.label(u), g.arrow_name(h))).collect();
    let out = AlgebraPresentation::from_dense(format!("{}#{}", a.name(), g.name()), ring, labels, |p, q| {
        let ((u, x), (v, h)) = (pairs[p], pairs[q]);
        let mut w = ring.zero_vec(n);
        if g.prod(x, tables.inverse[h]) == Some(deg[v]) {
            for (k, c) in a.sparse_product(u, v) {
                let r = pairs.binary_search(&(*k, h)).map_err(|_| Error::internal("smash product left its basis"))?;
                w[r] = c.clone();
            }
        }
        Ok(w)
    })?
    .with_provenance(format!("smash product of {} by {}", a.name(), g.name()));
    let degrees = pairs.iter().map(|&(u, _)| deg[u]).collect();
    let algebra = out.with_grading(Grading { semigroupoid: g, degrees })?;
    Ok(SmashProduct { algebra, pairs })
}

#[derive(Clone, Debug)]
pub struct SmashTheorem {
    pub skew: SkewProduct,
    pub map: LinearMapOnBasis,
    pub verdict: Verdict,
}

/// `𝒜(π) # 𝒢 → 𝒜(π ×_d 𝒢)`, `e_{γ,i} δ_g ↦ e_{(γ,g),i}`, certified as a graded isomorphism.
pub fn smash_theorem(b: &Bundle, d: &Homomorphism) -> Result<SmashTheorem> {
    if !d.source().same_tables(b.base()) {
        return Err(Error::structural(format!("grading {} does not start at the base of {}", d.name(), b.name())));
    }
    let skew = skew_product(d)?;
    let left = sectional_algebra(b, Some(d))?;
    let smash = smash_product(&left)?;
    let pb =
        pullback(b, format!("{}x{}", b.name(), d.target().name()), skew.semigroupoid.clone(), |p| skew.pairs[p].0)?;
    let right = sectional_algebra(&pb, Some(&skew.grading))?;
    let basis = fiber_basis(b);
    let mut images = Vec::with_capacity(smash.pairs.len());
    let mut inverse = vec![Vec::new(); right.rank()];
    for (p, &(u, h)) in smash.pairs.iter().enumerate() {
        let (x, i) = basis[u];
        let arrow = skew.arrow(x, h).ok_or_else(|| Error::internal("smash basis outside the skew product"))?;
        let k = pb.offset(arrow) + i;
        images.push(right.unit_vec(k));
        inverse[k] = smash.algebra.unit_vec(p);
    }
    if inverse.iter().any(Vec::is_empty) {
        return Err(Error::internal("smash map misses part of the skew sectional basis"));
    }
    let (rs, rr) = (smash.algebra.rank(), right.rank());
    let associative = smash.algebra.check_associativity();
    let map = LinearMapOnBasis::new(
        format!("T[{}#{}]", b.name(), d.target().name()),
        Arc::new(smash.algebra),
        Arc::new(right),
        images,
        Some(inverse),
    )?;
    let verdict = Verdict::new("smash", format!("{} by {}", b.name(), d.name()))
        .rank("smash", rs)
        .rank("skew-sectional", rr)
        .certificate(map.certify()?)
        .check(expect("smash-associative", associative.is_valid(), || associative.to_string()));
    Ok(SmashTheorem { skew, map, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::algebra::fixtures::group_algebra_z2;
    use crate::bundles::fixtures::{base, trivial};
    use crate::rings::Ring;
    use crate::semigroupoid::{find_isomorphism, samples};

    #[test]
    fn z2_graded_by_itself_is_the_pair_groupoid() {
        let r = Ring::rationals();
        let b = trivial(&r, &samples::z2());
        let d = Homomorphism::identity(b.base().clone());
        let t = smash_theorem(&b, &d).unwrap();
        assert!(t.verdict.passed, "{:?}", t.verdict.first_failure());
        assert_eq!(t.verdict.ranks["smash"], 4);
        assert_eq!(t.verdict.ranks["skew-sectional"], 4);
        assert!(t.map.certify().unwrap().check("graded").unwrap().passed);
        let p2 = base(&samples::pair_groupoid(2));
        assert!(find_isomorphism(&t.skew.semigroupoid, &p2).is_some());
    }

    #[test]
    fn trivial_group_changes_nothing() {
        let r = Ring::zmod(6);
        let b = trivial(&r, &samples::pair_groupoid(2));
        let one = base(&samples::trivial_monoid());
        let d = validate_homomorphism("c", b.base().clone(), one, vec![0; 4]).unwrap();
        let t = smash_theorem(&b, &d).unwrap();
        assert!(t.verdict.passed);
        assert!(find_isomorphism(&t.skew.semigroupoid, b.base()).is_some());
    }

    #[test]
    fn pair_groupoid_by_parity() {
        let r = Ring::integers();
        let b = trivial(&r, &samples::pair_groupoid(2));
        let d = validate_homomorphism("parity", b.base().clone(), base(&samples::z2()), vec![0, 1, 1, 0]).unwrap();
        let t = smash_theorem(&b, &d).unwrap();
        assert!(t.verdict.passed, "{:?}", t.verdict.first_failure());
        assert_eq!(t.verdict.ranks["smash"], 8);
    }

    #[test]
    fn group_algebra_smash() {
        let r = Ring::rationals();
        let s = smash_product(&group_algebra_z2(&r)).unwrap();
        assert_eq!(s.algebra.rank(), 4);
        let (uu, ug) = (s.index(0, 0).unwrap(), s.index(0, 1).unwrap());
        assert_eq!(s.algebra.basis_product(uu, ug), r.zero_vec(4));
        assert_eq!(s.algebra.basis_product(uu, uu), s.algebra.unit_vec(uu));
        s.algebra.validate().unwrap();
    }

    #[test]
    fn non_groupoid_grading_is_rejected() {
        let r = Ring::rationals();
        let b = trivial(&r, &samples::semilattice());
        let d = Homomorphism::identity(b.base().clone());
        assert!(matches!(smash_theorem(&b, &d), Err(Error::Structural(_))));
    }
}
