//! LP relaxation of the GGI stable marriage program, and its rounding.

use num_traits::Zero;

use super::{LinearProgram, Sense, SolveMode};
use crate::error::{Error, Result};
use crate::instance::{Agent, DisutilityFunction, GgiWeights, Instance};
use crate::matching::{disutility_vector, ggi, Matching};
use crate::rational::{int, ratio, Rational};
use crate::rotation::{ClosedSet, RotationPoset, RotationSet};

/// Positions of the model variables inside the linear program.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationLayout {
    /// One per rotation, by rotation id.
    pub y: Vec<usize>,
    /// One per stable pair `(m, w)`, sorted by pair.
    pub x: Vec<((usize, usize), usize)>,
    /// One per agent, men first then women.
    pub d: Vec<usize>,
    /// `(k, t_k)` for every weight step `λ_k > λ_{k+1}` (`k` is 1-based).
    pub t: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct Relaxation {
    pub lp: LinearProgram,
    pub layout: RelaxationLayout,
}

/// Optimal solution of the relaxation, read back into model terms.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    pub y_hat: Vec<f64>,
    pub x_hat: Vec<((usize, usize), f64)>,
    /// Men first, then women.
    pub d_hat: Vec<f64>,
    pub objective: f64,
    /// Exact values when solved in rational mode.
    pub exact: Option<ExactFractional>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactFractional {
    pub y_hat: Vec<Rational>,
    pub d_hat: Vec<Rational>,
    pub objective: Rational,
}

/// Builds the relaxation over a precomputed poset. Constraint families:
///
/// * `y(ρ') <= y(ρ)` for each immediate edge `ρ -> ρ'`, with `0 <= y <= 1`;
/// * `x` over the stable pairs tied to `y` through the get/break rotations;
/// * `d_i + Σ_ρ ω_i(ρ) y(ρ) = d_i(x^m)`, `d >= 0`;
/// * the GGI objective `Σ_k (λ_k − λ_{k+1}) (k t_k + Σ_i u_{i,k})` with
///   `d_i − t_k − u_{i,k} <= 0`, `u >= 0`, `t_k` free.
pub fn build_relaxation(
    poset: &RotationPoset,
    inst: &Instance,
    dfun: &DisutilityFunction,
    weights: &GgiWeights,
) -> Result<Relaxation> {
    let n = inst.n();
    let agents = 2 * n;
    if weights.len() != agents {
        return Err(Error::arg(format!("{} weights for {agents} agents", weights.len())));
    }
    let zero = || Some(int(0));
    let one = || Some(int(1));
    let mut lp = LinearProgram::new();

    let y: Vec<usize> = (0..poset.len())
        .map(|r| lp.add_variable(format!("y{}", r + 1), zero(), one()))
        .collect();
    for &(a, b) in poset.immediate_edges() {
        lp.add_constraint(
            format!("poset_{}_{}", a + 1, b + 1),
            vec![(y[b], int(1)), (y[a], int(-1))],
            Sense::Le,
            int(0),
        )?;
    }

    let mut x = Vec::new();
    for (m, w) in poset.stable_pairs() {
        let xv = lp.add_variable(format!("x_{}_{}", m + 1, w + 1), zero(), one());
        // x = [get taken or pair is man-optimal] - [break taken]
        let mut terms = vec![(xv, int(1))];
        let mut rhs = int(0);
        match poset.get_rotation(m, w) {
            Some(g) => terms.push((y[g], int(-1))),
            None => rhs = int(1),
        }
        if let Some(b) = poset.break_rotation(m, w) {
            terms.push((y[b], int(1)));
        }
        lp.add_constraint(format!("pair_{}_{}", m + 1, w + 1), terms, Sense::Eq, rhs)?;
        x.push(((m, w), xv));
    }

    let omega = poset.rotation_weights(inst, dfun)?;
    let base = disutility_vector(inst, dfun, poset.man_optimal())?;
    let mut d = Vec::with_capacity(agents);
    for slot in 0..agents {
        let agent = Agent::from_slot(slot, n);
        let dv = lp.add_variable(format!("d_{agent}"), zero(), None);
        let mut terms = vec![(dv, int(1))];
        for (r, &yr) in y.iter().enumerate() {
            let w = if slot < n { &omega.men[r][slot] } else { &omega.women[r][slot - n] };
            if !w.is_zero() {
                terms.push((yr, w.clone()));
            }
        }
        lp.add_constraint(format!("dis_{agent}"), terms, Sense::Eq, base.values()[slot].clone())?;
        d.push(dv);
    }

    let lambda = weights.as_slice();
    let mut objective = Vec::new();
    let mut t = Vec::new();
    for k in 1..=agents {
        let next = lambda.get(k).cloned().unwrap_or_else(|| int(0));
        let step = &lambda[k - 1] - next;
        if step <= Rational::zero() {
            continue;
        }
        let tk = lp.add_variable(format!("t{k}"), None, None);
        objective.push((tk, &step * int(k as i64)));
        for (slot, &dv) in d.iter().enumerate() {
            let u = lp.add_variable(format!("u_{}_{k}", Agent::from_slot(slot, n)), zero(), None);
            objective.push((u, step.clone()));
            lp.add_constraint(
                format!("lin_{}_{k}", Agent::from_slot(slot, n)),
                vec![(dv, int(1)), (tk, int(-1)), (u, int(-1))],
                Sense::Le,
                int(0),
            )?;
        }
        t.push((k, tk));
    }
    lp.set_objective(objective)?;

    Ok(Relaxation {
        lp,
        layout: RelaxationLayout { y, x, d, t },
    })
}

/// Solves the relaxation and reads back `ŷ`, `x̂`, `d̂`.
pub fn solve_relaxation(relax: &Relaxation, mode: SolveMode) -> Result<FractionalSolution> {
    let sol = relax.lp.solve(mode)?;
    let pick = |ids: &[usize]| ids.iter().map(|&j| sol.values[j]).collect::<Vec<f64>>();
    let exact = sol.exact.as_ref().map(|e| ExactFractional {
        y_hat: relax.layout.y.iter().map(|&j| e.values[j].clone()).collect(),
        d_hat: relax.layout.d.iter().map(|&j| e.values[j].clone()).collect(),
        objective: e.objective.clone(),
    });
    Ok(FractionalSolution {
        y_hat: pick(&relax.layout.y),
        x_hat: relax.layout.x.iter().map(|&(p, j)| (p, sol.values[j])).collect(),
        d_hat: pick(&relax.layout.d),
        objective: sol.objective,
        exact,
    })
}

/// Keeps every rotation with `ŷ >= 1/2`. Float values within `1e-9` of the
/// threshold count as reaching it.
pub fn round_solution(poset: &RotationPoset, f: &FractionalSolution) -> Result<(ClosedSet, Matching)> {
    let half = ratio(1, 2);
    let mut set = RotationSet::empty(poset.len());
    for r in 0..poset.len() {
        let take = match &f.exact {
            Some(e) => e.y_hat[r] >= half,
            None => f.y_hat[r] >= 0.5 - 1e-9,
        };
        if take {
            set.insert(r);
        }
    }
    let closed = poset
        .closed(set)
        .map_err(|e| Error::Internal(format!("rounded rotation set is not closed: {e}")))?;
    let matching = poset.matching_of(&closed);
    Ok((closed, matching))
}

#[derive(Debug, Clone)]
pub struct ApproxResult {
    pub matching: Matching,
    pub rotations: ClosedSet,
    /// GGI of the rounded matching.
    pub value: Rational,
    /// Optimal value of the relaxation.
    pub lp_bound: f64,
    pub fractional: FractionalSolution,
}

/// Relax, solve, round. The returned value is at most twice the LP bound.
pub fn approx_solve(
    inst: &Instance,
    dfun: &DisutilityFunction,
    weights: &GgiWeights,
    mode: SolveMode,
) -> Result<ApproxResult> {
    dfun.check_covers(inst.n())?;
    let poset = RotationPoset::build(inst);
    let relax = build_relaxation(&poset, inst, dfun, weights)?;
    let fractional = solve_relaxation(&relax, mode)?;
    let (rotations, matching) = round_solution(&poset, &fractional)?;
    let value = ggi(weights, disutility_vector(inst, dfun, &matching)?.values())?;
    Ok(ApproxResult {
        matching,
        rotations,
        value,
        lp_bound: fractional.objective,
        fractional,
    })
}
