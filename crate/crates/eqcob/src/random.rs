//! Seeded random elements of the coefficient ring of torus characters.

use eqcob_core::symmetric::degree_columns;
use eqcob_core::{GradedSeries, LawSpec, Scalar};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn generators(law: &LawSpec) -> usize {
    match law {
        LawSpec::Universal { generators } => *generators,
        _ => 0,
    }
}

/// A homogeneous element of degree `degree` with up to `max_terms` terms and
/// coefficients in `[-5, 5]`. Lazard coefficients appear only if `with_b`.
pub fn homogeneous<R: Rng>(
    rng: &mut R,
    nvars: usize,
    law: &LawSpec,
    degree: usize,
    precision: usize,
    with_b: bool,
    max_terms: usize,
) -> GradedSeries {
    let gens = if with_b { generators(law) } else { 0 };
    let cols = degree_columns(nvars, gens, degree, if gens > 0 { precision } else { degree.min(precision) });
    let n = rng.random_range(1..=max_terms.max(1));
    let terms: Vec<_> = (0..n)
        .map(|_| {
            let m = cols[rng.random_range(0..cols.len())];
            let mut c = rng.random_range(-5i64..=4);
            if c >= 0 {
                c += 1;
            }
            (m, Scalar::from(c))
        })
        .collect();
    GradedSeries::from_terms(nvars, precision, terms).expect("columns fit the series")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_homogeneous() {
        let law = LawSpec::Universal { generators: 4 };
        let a = homogeneous(&mut rng(7, 1), 3, &law, 2, 5, true, 6);
        let b = homogeneous(&mut rng(7, 1), 3, &law, 2, 5, true, 6);
        assert_eq!(a, b);
        assert!(a.is_homogeneous(2));
        let c = homogeneous(&mut rng(7, 2), 3, &law, 0, 5, false, 6);
        assert!(c.is_b_free() && c.is_homogeneous(0));
    }
}
