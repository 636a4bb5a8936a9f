use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Check, Verdict};
use crate::bundles::{convolve, Bundle, Section};
use crate::error::Result;

/// A section with each fiber present with probability 1/2 and small integer coordinates.
pub fn random_section(bundle: &Bundle, rng: &mut impl Rng) -> Section {
    let ring = bundle.ring();
    let mut values = Vec::new();
    for a in bundle.base().arrows() {
        if rng.gen_bool(0.5) {
            values.push((a, (0..bundle.rank(a)).map(|_| ring.from_int(rng.gen_range(-3..=3))).collect()));
        }
    }
    Section::new(bundle, values).expect("coordinates sized by rank")
}

/// `(α∗β)∗γ = α∗(β∗γ)` on `samples` seeded random triples.
pub fn sample_associativity(bundle: &Bundle, samples: usize, seed: u64) -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = Check::pass("convolution-associativity");
    for k in 0..samples {
        let (a, b, c) =
            (random_section(bundle, &mut rng), random_section(bundle, &mut rng), random_section(bundle, &mut rng));
        let left = convolve(bundle, &convolve(bundle, &a, &b)?, &c)?;
        let right = convolve(bundle, &a, &convolve(bundle, &b, &c)?)?;
        if left != right {
            let ring = bundle.ring();
            check = Check::fail(
                "convolution-associativity",
                vec![format!("sample {k}")],
                format!(
                    "(αβ)γ = {} but α(βγ) = {}",
                    ring.vec_display(&left.coordinates(bundle)),
                    ring.vec_display(&right.coordinates(bundle))
                ),
            );
            break;
        }
    }
    Ok(Verdict::new("associativity", bundle.name())
        .rank("sectional", bundle.total_rank())
        .rank("samples", samples)
        .check(check))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::fixtures::trivial;
    use crate::rings::Ring;
    use crate::semigroupoid::samples;

    #[test]
    fn seeded_runs_agree() {
        let b = trivial(&Ring::zmod(4), &samples::pair_groupoid(2));
        let mut r1 = ChaCha8Rng::seed_from_u64(3);
        let mut r2 = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(random_section(&b, &mut r1), random_section(&b, &mut r2));
        assert!(sample_associativity(&b, 50, 3).unwrap().passed);
    }
}
