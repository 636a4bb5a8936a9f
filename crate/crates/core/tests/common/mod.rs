#![allow(dead_code)]

use std::sync::Arc;

use sectional_core::actions::{validate_preaction, LandPreaction};
use sectional_core::semigroupoid::{
    infer_inverse, samples, validate_inverse_semigroupoid, validate_semigroupoid, FiniteInverseSemigroupoid,
    FiniteSemigroupoid, SemigroupoidTables,
};

pub fn space(t: &SemigroupoidTables) -> Arc<FiniteSemigroupoid> {
    Arc::new(validate_semigroupoid(t).unwrap())
}

pub fn inverse(t: &SemigroupoidTables) -> Arc<FiniteInverseSemigroupoid> {
    let g = space(t);
    let inv = infer_inverse(&g).unwrap();
    Arc::new(validate_inverse_semigroupoid(g, inv).unwrap())
}

pub fn corpus() -> Vec<SemigroupoidTables> {
    vec![samples::trivial_monoid(), samples::pair_groupoid(2), samples::z2(), samples::semilattice(), samples::klein()]
}

pub fn points(n: usize) -> Arc<FiniteSemigroupoid> {
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    space(&samples::unit_groupoid(&refs))
}

/// ℤ/2 acting on `n` points through the involution `sigma`.
pub fn involution_action(sigma: &[usize]) -> LandPreaction {
    let n = sigma.len();
    let maps = vec![(0..n).map(Some).collect(), sigma.iter().map(|&j| Some(j)).collect()];
    validate_preaction("involution", inverse(&samples::z2()), points(n), maps).unwrap()
}

/// `{1, e}` acting on `n` points with `θ_e` the identity of `dom`.
pub fn restriction_action(n: usize, dom: &[bool]) -> LandPreaction {
    let maps = vec![(0..n).map(Some).collect(), (0..n).map(|i| dom[i].then_some(i)).collect()];
    validate_preaction("restriction", inverse(&samples::semilattice()), points(n), maps).unwrap()
}

/// Involution built from a list of disjoint swaps read off `seed`.
pub fn involution(n: usize, seed: &[bool]) -> Vec<usize> {
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut i = 0;
    while i + 1 < n {
        if seed[i % seed.len()] {
            sigma.swap(i, i + 1);
            i += 2;
        } else {
            i += 1;
        }
    }
    sigma
}

/// ℤ/2 acting on `n` points with `θ_g = sigma` restricted to the orbits flagged in `keep`.
pub fn partial_involution_action(sigma: &[usize], keep: &[bool]) -> LandPreaction {
    let n = sigma.len();
    let kept = |i: usize| keep[i.min(sigma[i]) % keep.len()];
    let maps = vec![(0..n).map(Some).collect(), (0..n).map(|i| kept(i).then_some(sigma[i])).collect()];
    validate_preaction("partial-involution", inverse(&samples::z2()), points(n), maps).unwrap()
}
