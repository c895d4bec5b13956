//! Seeded random generators for instances, disutility tables, weights and formulas.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{DisutilityFunction, GgiWeights, Instance};
use crate::rational::{int, ratio, Rational};
use crate::reduction::{Literal, TwoSatInstance};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Instance with independent uniformly random preference lists.
pub fn random_instance<R: Rng>(n: usize, rng: &mut R) -> Instance {
    let mut list = |_| {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        p
    };
    let men = (0..n).map(&mut list).collect();
    let women = (0..n).map(&mut list).collect();
    Instance::new(men, women).expect("permutations form a valid instance")
}

/// Strictly increasing nonnegative table over ranks `1..=n` with small rational steps.
pub fn random_disutility<R: Rng>(n: usize, rng: &mut R) -> DisutilityFunction {
    let mut value = ratio(rng.gen_range(0..4), rng.gen_range(1..4));
    let mut table = Vec::with_capacity(n);
    for _ in 0..n {
        table.push(value.clone());
        value += ratio(rng.gen_range(1..7), rng.gen_range(1..5));
    }
    DisutilityFunction::table(table).expect("strictly increasing by construction")
}

/// Nonincreasing nonnegative weights of length `len`, with a random number of
/// trailing zeros (at least one positive weight).
pub fn random_weights<R: Rng>(len: usize, rng: &mut R) -> GgiWeights {
    let positive = rng.gen_range(1..=len);
    let mut lambda: Vec<Rational> = (0..positive)
        .map(|_| ratio(rng.gen_range(1..20), rng.gen_range(1..6)))
        .collect();
    lambda.sort_by(|a, b| b.cmp(a));
    lambda.resize(len, int(0));
    GgiWeights::new(lambda).expect("sorted nonnegative weights")
}

/// Formula with `n_clauses` clauses of one or two literals over `n_vars` variables.
pub fn random_2sat<R: Rng>(n_vars: usize, n_clauses: usize, rng: &mut R) -> TwoSatInstance {
    let lit = |rng: &mut R| Literal {
        var: rng.gen_range(0..n_vars),
        positive: rng.gen_bool(0.5),
    };
    let clauses = (0..n_clauses)
        .map(|_| {
            let first = lit(rng);
            if rng.gen_bool(0.15) {
                vec![first]
            } else {
                vec![first, lit(rng)]
            }
        })
        .collect();
    TwoSatInstance::new(n_vars, clauses).expect("literals drawn in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_and_valid() {
        let a = random_instance(6, &mut seeded(7));
        let b = random_instance(6, &mut seeded(7));
        assert_eq!(a, b);
        let mut rng = seeded(11);
        for n in 1..8 {
            let d = random_disutility(n, &mut rng);
            d.check_covers(n).unwrap();
            let w = random_weights(2 * n, &mut rng);
            assert!(w.k() >= 1);
            let f = random_2sat(n, n + 2, &mut rng);
            assert_eq!(f.n_clauses(), n + 2);
        }
    }
}
