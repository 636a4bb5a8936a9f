use std::sync::Arc;

use super::{convolve, validate_bundle, AlgebraPresentation, Bundle, BundleSpec, FiberMode, Grading, Section};
use crate::error::{Error, Result};
use crate::rings::Ring;
use crate::semigroupoid::{ArrowId, FiniteSemigroupoid, Homomorphism};
use crate::theorems::LinearMapOnBasis;

/// Basis label of `(γ, i)`: the arrow name alone for rank-1 fibers.
pub(crate) fn fiber_label(bundle: &Bundle, a: ArrowId, i: usize) -> String {
    let name = bundle.base().arrow_name(a);
    if bundle.rank(a) == 1 {
        name.to_string()
    } else {
        format!("{name}[{i}]")
    }
}

/// Basis `(γ, i)` of the sectional algebra, in flattened order.
pub(crate) fn fiber_basis(bundle: &Bundle) -> Vec<(ArrowId, usize)> {
    bundle.base().arrows().flat_map(|a| (0..bundle.rank(a)).map(move |i| (a, i))).collect()
}

fn check_grading(bundle: &Bundle, c: &Homomorphism) -> Result<()> {
    if !c.source().same_tables(bundle.base()) {
        return Err(Error::structural(format!(
            "grading {} does not start at the base {} of bundle {}",
            c.name(),
            bundle.base().name(),
            bundle.name()
        )));
    }
    Ok(())
}

/// Finitely supported sections under convolution, on the basis of single-fiber
/// basis sections; graded by `c(γ)` when a grading is supplied.
pub fn sectional_algebra(bundle: &Bundle, grading: Option<&Homomorphism>) -> Result<AlgebraPresentation> {
    let basis = fiber_basis(bundle);
    let labels = basis.iter().map(|&(a, i)| fiber_label(bundle, a, i)).collect();
    let sections: Vec<Section> = basis.iter().map(|&(a, i)| Section::basis(bundle, a, i)).collect();
    let alg = AlgebraPresentation::from_dense(format!("A({})", bundle.name()), bundle.ring(), labels, |p, q| {
        Ok(convolve(bundle, &sections[p], &sections[q])?.coordinates(bundle))
    })?
    .with_provenance(format!("sectional algebra of {}", bundle.name()));
    match grading {
        None => Ok(alg),
        Some(c) => {
            check_grading(bundle, c)?;
            let degrees = basis.iter().map(|&(a, _)| c.apply(a)).collect();
            alg.with_grading(Grading { semigroupoid: c.target().clone(), degrees })
        }
    }
}

/// Basis indices of the sections vanishing outside `c⁻¹(g)`.
pub fn homogeneous_component(bundle: &Bundle, c: &Homomorphism, g: ArrowId) -> Result<Vec<usize>> {
    check_grading(bundle, c)?;
    Ok(fiber_basis(bundle).iter().enumerate().filter(|(_, (a, _))| c.apply(*a) == g).map(|(p, _)| p).collect())
}

/// Rank-1 algebra `R` on the basis `1`.
pub fn ring_algebra(ring: &Ring) -> AlgebraPresentation {
    AlgebraPresentation::from_dense("R", ring, vec!["1".into()], |_, _| Ok(vec![ring.one()]))
        .expect("rank one")
        .with_provenance("ground ring")
}

/// Fiber mode for constants taken from an algebra over `ring`.
fn mode_for(ring: &Ring, ranks: &[usize], subject: &str) -> Result<FiberMode> {
    if ring.is_commutative() {
        Ok(FiberMode::StructureConstants)
    } else if ranks.iter().all(|&k| k == 1) {
        Ok(FiberMode::RingFiber)
    } else {
        Err(Error::capability(format!(
            "{subject}: fibers of rank other than 1 need a commutative ring, not {}",
            ring.describe()
        )))
    }
}

/// `AΓ`: the sectional algebra of the projection `A × Γ → Γ`, graded by `Γ`.
pub fn semigroupoid_algebra(a: &AlgebraPresentation, base: Arc<FiniteSemigroupoid>) -> Result<AlgebraPresentation> {
    let ring = a.ring();
    let m = a.rank();
    let ranks = vec![m; base.arrow_count()];
    let name = format!("{}{}", a.name(), base.name());
    let mode = mode_for(ring, &ranks, &name)?;
    let consts: Vec<Vec<Vec<_>>> = (0..m).map(|i| (0..m).map(|j| a.basis_product(i, j)).collect()).collect();
    let pairs = base.composable_pairs().to_vec();
    let spec = BundleSpec {
        name: name.clone(),
        mode,
        ranks,
        constants: match mode {
            FiberMode::StructureConstants => pairs.iter().map(|&p| (p, consts.clone())).collect(),
            FiberMode::RingFiber => Vec::new(),
        },
        twists: match mode {
            FiberMode::RingFiber => pairs.iter().map(|&p| (p, consts[0][0][0].clone())).collect(),
            FiberMode::StructureConstants => Vec::new(),
        },
    };
    let bundle = validate_bundle(&spec, ring, base.clone())?;
    let alg = sectional_algebra(&bundle, Some(&Homomorphism::identity(base.clone())))?;
    let labels = fiber_basis(&bundle)
        .into_iter()
        .map(|(g, i)| match a.label(i) {
            "1" if m == 1 => base.arrow_name(g).to_string(),
            l => format!("{}·{}", base.arrow_name(g), l),
        })
        .collect();
    AlgebraPresentation::from_dense(name.clone(), ring, labels, |p, q| Ok(alg.basis_product(p, q)))?
        .with_grading(alg.grading().expect("graded above").clone())
        .map(|x| x.with_provenance(format!("semigroupoid algebra of {} over {}", base.name(), a.name())))
}

/// Position of each basis element inside its homogeneous component.
fn components(a: &AlgebraPresentation) -> Result<(Arc<FiniteSemigroupoid>, Vec<Vec<usize>>, Vec<usize>)> {
    let g = a.grading().ok_or_else(|| Error::structural(format!("algebra {} carries no grading", a.name())))?;
    let mut comps = vec![Vec::new(); g.semigroupoid.arrow_count()];
    let mut pos = vec![0; a.rank()];
    for u in 0..a.rank() {
        let d = g.degrees[u];
        pos[u] = comps[d].len();
        comps[d].push(u);
    }
    Ok((g.semigroupoid.clone(), comps, pos))
}

/// The bundle over the grading semigroupoid whose fiber at `g` is `A_g`.
pub fn bundle_from_graded(a: &AlgebraPresentation) -> Result<Bundle> {
    let (g, comps, _) = components(a)?;
    a.check_graded_closure().into_result()?;
    let ring = a.ring();
    let ranks: Vec<usize> = comps.iter().map(Vec::len).collect();
    let name = format!("S({})", a.name());
    let mode = mode_for(ring, &ranks, &name)?;
    let mut constants = Vec::new();
    let mut twists = Vec::new();
    for &(x, y) in g.composable_pairs() {
        let xy = g.prod(x, y).expect("validated semigroupoid");
        let c: Vec<Vec<Vec<_>>> = comps[x]
            .iter()
            .map(|&u| {
                comps[y]
                    .iter()
                    .map(|&v| {
                        let p = a.basis_product(u, v);
                        comps[xy].iter().map(|&w| p[w].clone()).collect()
                    })
                    .collect()
            })
            .collect();
        match mode {
            FiberMode::StructureConstants => constants.push(((x, y), c)),
            FiberMode::RingFiber => twists.push(((x, y), c[0][0][0].clone())),
        }
    }
    let spec = BundleSpec { name, mode, ranks, constants, twists };
    validate_bundle(&spec, ring, g)
}

/// `𝒜(η_A) → A`, sending the `i`-th basis section over `g` to the `i`-th basis
/// element of degree `g`, with its inverse.
pub fn graded_roundtrip_iso(a: &AlgebraPresentation) -> Result<LinearMapOnBasis> {
    let (g, comps, pos) = components(a)?;
    let bundle = bundle_from_graded(a)?;
    let sectional = sectional_algebra(&bundle, Some(&Homomorphism::identity(g.clone())))?;
    let images = fiber_basis(&bundle).into_iter().map(|(d, i)| a.unit_vec(comps[d][i])).collect();
    let degrees = &a.grading().expect("components checked the grading").degrees;
    let inverse = (0..a.rank()).map(|u| sectional.unit_vec(bundle.offset(degrees[u]) + pos[u])).collect();
    LinearMapOnBasis::new(
        format!("roundtrip({})", a.name()),
        Arc::new(sectional),
        Arc::new(a.clone()),
        images,
        Some(inverse),
    )
}
