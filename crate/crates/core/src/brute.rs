//! Exhaustive optimization over all stable matchings via closed-set enumeration.

use crate::error::{Error, Result};
use crate::instance::{DisutilityFunction, Instance};
use crate::matching::{evaluate, Criterion, Matching};
use crate::rational::Rational;
use crate::rotation::{ClosedSet, RotationPoset};

#[derive(Debug, Clone)]
pub struct BruteResult {
    pub matching: Matching,
    pub rotations: ClosedSet,
    pub value: Rational,
    /// Number of stable matchings examined.
    pub examined: usize,
}

/// Minimizes `criterion` over every stable matching; ties go to the first one in
/// enumeration order.
pub fn brute_solve(inst: &Instance, dfun: &DisutilityFunction, criterion: &Criterion) -> Result<BruteResult> {
    dfun.check_covers(inst.n())?;
    let poset = RotationPoset::build(inst);
    let mut best: Option<BruteResult> = None;
    let mut examined = 0;
    for (set, matching) in poset.enumerate_stable() {
        examined += 1;
        let value = evaluate(criterion, inst, dfun, &matching)?;
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(BruteResult {
                matching,
                rotations: set,
                value,
                examined: 0,
            });
        }
    }
    let mut best = best.ok_or_else(|| Error::Internal("no stable matching enumerated".into()))?;
    best.examined = examined;
    Ok(best)
}
