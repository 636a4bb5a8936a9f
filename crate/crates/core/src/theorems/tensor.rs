use std::sync::Arc;

use super::{expect, pullback, Certificate, LinearMapOnBasis, Verdict};
use crate::bundles::{ring_algebra, sectional_algebra, semigroupoid_algebra, AlgebraPresentation, Bundle};
use crate::error::{Error, Result};
use crate::semigroupoid::{direct_product, FiniteSemigroupoid};

/// `A ⊗_R B` on pairs of basis elements; needs a commutative ring.
pub fn tensor_product_algebra(a: &AlgebraPresentation, b: &AlgebraPresentation) -> Result<AlgebraPresentation> {
    let ring = a.ring();
    if ring != b.ring() {
        return Err(Error::structural(format!("{} and {} live over different rings", a.name(), b.name())));
    }
    if !ring.is_commutative() {
        return Err(Error::capability(format!(
            "tensor products of algebras need a commutative ring, not {}",
            ring.describe()
        )));
    }
    let (m, n) = (a.rank(), b.rank());
    let labels = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| format!("{}⊗{}", a.label(i), b.label(j)))
        .collect();
    AlgebraPresentation::from_dense(format!("{}⊗{}", a.name(), b.name()), ring, labels, |p, q| {
        let (i1, j1, i2, j2) = (p / n, p % n, q / n, q % n);
        let mut out = ring.zero_vec(m * n);
        for (l, x) in a.sparse_product(i1, i2) {
            for (k, y) in b.sparse_product(j1, j2) {
                out[l * n + k] = ring.mul(x, y);
            }
        }
        Ok(out)
    })
    .map(|t| t.with_provenance(format!("tensor product of {} and {}", a.name(), b.name())))
}

/// `π × 𝓔 → Γ × 𝓔` with fiber `π⁻¹(γ)` over `(γ, e)`.
pub fn product_bundle(b: &Bundle, e: &FiniteSemigroupoid) -> Result<Bundle> {
    let ne = e.arrow_count();
    let base = Arc::new(direct_product(b.base(), e)?);
    pullback(b, format!("{}x{}", b.name(), e.name()), base, |p| p / ne)
}

#[derive(Clone, Debug)]
pub struct TensorTheorem {
    pub map: LinearMapOnBasis,
    pub certificate: Certificate,
    pub verdict: Verdict,
}

/// `T((γ,i) ⊗ δ_e) = e_{(γ,e),i}` from `𝒜(π) ⊗ R𝓔` to `𝒜(π × 𝓔)`, certified.
pub fn tensor_theorem(b: &Bundle, e: Arc<FiniteSemigroupoid>) -> Result<TensorTheorem> {
    let ring = b.ring();
    let left = sectional_algebra(b, None)?;
    let re = semigroupoid_algebra(&ring_algebra(ring), e.clone())?.without_grading();
    let source = tensor_product_algebra(&left, &re)?;
    let pb = product_bundle(b, &e)?;
    let target = sectional_algebra(&pb, None)?;
    let ne = e.arrow_count();
    let mut images = vec![Vec::new(); source.rank()];
    let mut inverse = vec![Vec::new(); target.rank()];
    for g in b.base().arrows() {
        for i in 0..b.rank(g) {
            for x in 0..ne {
                let s = (b.offset(g) + i) * ne + x;
                let t = pb.offset(g * ne + x) + i;
                images[s] = target.unit_vec(t);
                inverse[t] = source.unit_vec(s);
            }
        }
    }
    let (rs, rl, rr) = (source.rank(), left.rank(), re.rank());
    let rank_target = target.rank();
    let map = LinearMapOnBasis::new(
        format!("T[{}x{}]", b.name(), e.name()),
        Arc::new(source),
        Arc::new(target),
        images,
        Some(inverse),
    )?;
    let certificate = map.certify()?;
    let verdict = Verdict::new("tensor", format!("{} x {}", b.name(), e.name()))
        .rank("sectional", rl)
        .rank("semigroupoid-algebra", rr)
        .rank("tensor", rs)
        .rank("product-bundle", rank_target)
        .certificate(certificate.clone())
        .check(expect("rank-identity", rank_target == rl * rr, || format!("{rank_target} != {rl}·{rr}")));
    Ok(TensorTheorem { map, certificate, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::fixtures::{base, matrix_units, trivial};
    use crate::rings::Ring;
    use crate::semigroupoid::samples;

    #[test]
    fn unit_base_with_pair_groupoid() {
        let r = Ring::rationals();
        let t = tensor_theorem(&trivial(&r, &samples::trivial_monoid()), base(&samples::pair_groupoid(2))).unwrap();
        assert!(t.verdict.passed, "{:?}", t.verdict.first_failure());
        assert_eq!(t.verdict.ranks["product-bundle"], 4);
    }

    #[test]
    fn pair_groupoid_with_z2_has_rank_eight() {
        let r = Ring::zmod(4);
        let t = tensor_theorem(&trivial(&r, &samples::pair_groupoid(2)), base(&samples::z2())).unwrap();
        assert!(t.verdict.passed, "{:?}", t.verdict.first_failure());
        assert_eq!(t.certificate.source_rank, 8);
        assert_eq!(t.certificate.target_rank, 8);
    }

    #[test]
    fn matrix_units_over_two_points() {
        let r = Ring::rationals();
        let t = tensor_theorem(&matrix_units(&r), base(&samples::unit_groupoid(&["p", "q"]))).unwrap();
        assert!(t.verdict.passed);
        assert_eq!(t.certificate.linear.as_ref().unwrap().rank, 8);
    }

    #[test]
    fn tensor_with_ring_is_identity_shaped() {
        let r = Ring::integers();
        let a = crate::bundles::algebra::fixtures::matrix_units(&r);
        let t = tensor_product_algebra(&a, &ring_algebra(&r)).unwrap();
        assert_eq!(t.rank(), 4);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(t.basis_product(i, j), a.basis_product(i, j));
            }
        }
    }
}
