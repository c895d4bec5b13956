//! Reference instances used by tests, the acceptance suite and the CLI docs.

use crate::instance::{DisutilityFunction, Instance};
use crate::matching::Matching;
use crate::rational::{int, Rational};

pub const EXAMPLE1_TEXT: &str = include_str!("../data/example1.sm");
pub const TIGHTNESS_TEXT: &str = include_str!("../data/tightness.sm");

/// The 10 x 10 instance with five stable matchings.
pub fn example1() -> Instance {
    Instance::parse(EXAMPLE1_TEXT).expect("bundled instance parses")
}

/// Its stable matchings x1..x5, in the order they are usually listed.
pub fn example1_matchings() -> Vec<Matching> {
    let rows: [[usize; 10]; 5] = [
        [1, 2, 3, 7, 6, 4, 5, 8, 10, 9],
        [1, 2, 3, 7, 6, 5, 4, 8, 10, 9],
        [1, 2, 3, 6, 7, 4, 5, 8, 10, 9],
        [1, 2, 3, 6, 7, 5, 4, 8, 10, 9],
        [1, 2, 3, 6, 7, 5, 4, 10, 9, 8],
    ];
    rows.iter()
        .map(|r| Matching::new(r.iter().map(|w| w - 1).collect()).expect("valid"))
        .collect()
}

/// 3 x 3 instance with two chained rotations.
pub fn tightness() -> Instance {
    Instance::parse(TIGHTNESS_TEXT).expect("bundled instance parses")
}

/// `d(1) = 0, d(2) = 1 + eps, d(3) = 2`.
pub fn tightness_disutility(eps: Rational) -> DisutilityFunction {
    DisutilityFunction::table(vec![int(0), int(1) + eps, int(2)]).expect("increasing for eps in (0, 1)")
}
