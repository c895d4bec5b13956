//! Exact solver for GGI weights with `K` nonzero entries, by enumerating the
//! `K`-prefixes of sorted (dissatisfaction, agent, partner) vectors over all
//! stable matchings.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Agent, DisutilityFunction, GgiWeights, Instance, Side};
use crate::matching::{disutility_vector, ggi, ggi_sorted, Matching};
use crate::rational::{format_rational, Rational};
use crate::rotation::{RotationId, RotationPoset, RotationSet};

/// `(d(agent, partner), agent, partner)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub dis: Rational,
    pub agent: Agent,
    pub partner: usize,
}

impl Triple {
    /// The underlying couple as `(man, woman)`.
    pub fn pair(&self) -> (usize, usize) {
        match self.agent.side {
            Side::Man => (self.agent.index, self.partner),
            Side::Woman => (self.partner, self.agent.index),
        }
    }

    fn partner_agent(&self) -> Agent {
        match self.agent.side {
            Side::Man => Agent::woman(self.partner),
            Side::Woman => Agent::man(self.partner),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", format_rational(&self.dis), self.agent, self.partner_agent())
    }
}

/// Ordered triples with nonincreasing dissatisfaction and distinct agents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TripleVector {
    pub entries: Vec<Triple>,
}

impl TripleVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Dissatisfaction of the last entry, `None` when empty (no threshold).
    pub fn d_min(&self) -> Option<&Rational> {
        self.entries.last().map(|t| &t.dis)
    }

    pub fn dis(&self) -> Vec<Rational> {
        self.entries.iter().map(|t| t.dis.clone()).collect()
    }

    fn pushed(&self, t: Triple) -> TripleVector {
        let mut entries = self.entries.clone();
        entries.push(t);
        TripleVector { entries }
    }

    /// Representative of all reorderings among equal dissatisfactions.
    fn canonical(&self) -> TripleVector {
        let mut entries = self.entries.clone();
        entries.sort_by(|a, b| b.dis.cmp(&a.dis).then(a.agent.cmp(&b.agent)));
        TripleVector { entries }
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out {
            dis: String,
            agent: String,
            partner: String,
        }
        let entries: Vec<Out> = self
            .entries
            .iter()
            .map(|t| Out {
                dis: format_rational(&t.dis),
                agent: t.agent.to_string(),
                partner: t.partner_agent().to_string(),
            })
            .collect();
        serde_json::json!(entries)
    }
}

impl fmt::Display for TripleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(Triple::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Mandatory (`in_set`) and forbidden (`out_set`) rotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationConstraints {
    pub in_set: RotationSet,
    pub out_set: RotationSet,
}

impl RotationConstraints {
    pub fn is_consistent(&self) -> bool {
        !self.in_set.intersects(&self.out_set)
    }
}

/// Precomputed data shared by every expansion step.
#[derive(Debug, Clone)]
pub struct XpContext {
    n: usize,
    poset: RotationPoset,
    /// `man_dis[m][w] = d(rank of w for m)`
    man_dis: Vec<Vec<Rational>>,
    /// `woman_dis[w][m] = d(rank of m for w)`
    woman_dis: Vec<Vec<Rational>>,
    anc: Vec<RotationSet>,
    desc: Vec<RotationSet>,
    /// Highest woman dissatisfaction in each rotation before its elimination.
    dmax_w: Vec<Rational>,
    /// Highest man dissatisfaction in each rotation after its elimination.
    dmax_m: Vec<Rational>,
}

impl XpContext {
    pub fn new(inst: &Instance, dfun: &DisutilityFunction) -> Result<Self> {
        Self::with_poset(inst, dfun, RotationPoset::build(inst))
    }

    pub fn with_poset(inst: &Instance, dfun: &DisutilityFunction, poset: RotationPoset) -> Result<Self> {
        let n = inst.n();
        dfun.check_covers(n)?;
        let table = |rank: usize| dfun.value(rank);
        let man_dis = (0..n)
            .map(|m| (0..n).map(|w| table(inst.man_rank(m, w))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let woman_dis = (0..n)
            .map(|w| (0..n).map(|m| table(inst.woman_rank(w, m))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let p = poset.len();
        let anc = (0..p).map(|r| poset.ancestors(r)).collect();
        let desc = (0..p).map(|r| poset.descendants(r)).collect();
        let mut dmax_w = Vec::with_capacity(p);
        let mut dmax_m = Vec::with_capacity(p);
        for rho in poset.rotations() {
            let before = rho.pairs().iter().map(|&(m, w)| woman_dis[w][m].clone()).max();
            let after = rho.new_pairs().iter().map(|&(m, w)| man_dis[m][w].clone()).max();
            dmax_w.push(before.expect("rotations are nonempty"));
            dmax_m.push(after.expect("rotations are nonempty"));
        }
        Ok(XpContext {
            n,
            poset,
            man_dis,
            woman_dis,
            anc,
            desc,
            dmax_w,
            dmax_m,
        })
    }

    pub fn poset(&self) -> &RotationPoset {
        &self.poset
    }

    fn with_ancestors(&self, r: RotationId) -> RotationSet {
        let mut s = self.anc[r].clone();
        s.insert(r);
        s
    }

    fn with_descendants(&self, r: RotationId) -> RotationSet {
        let mut s = self.desc[r].clone();
        s.insert(r);
        s
    }

    fn agent_dis(&self, m: &Matching) -> Vec<Rational> {
        let men = (0..self.n).map(|i| self.man_dis[i][m.wife(i)].clone());
        let women = (0..self.n).map(|j| self.woman_dis[j][m.husband(j)].clone());
        men.chain(women).collect()
    }

    /// `d↓_k(x)`, 1-based `k`.
    fn kth_largest(dis: &[Rational], k: usize) -> Rational {
        let mut sorted = dis.to_vec();
        sorted.sort_by(|a, b| b.cmp(a));
        sorted[k - 1].clone()
    }

    /// Mandatory and forbidden rotations implied by a prefix `v`: each listed
    /// couple must be kept, and every other agent must stay at or below the
    /// last listed dissatisfaction. Also returns the agents not in `v`.
    pub fn constraints_for(&self, v: &TripleVector) -> (RotationConstraints, Vec<bool>) {
        let p = self.poset.len();
        let mut in_set = RotationSet::empty(p);
        let mut out_set = RotationSet::empty(p);
        let mut remaining = vec![true; 2 * self.n];
        for t in &v.entries {
            remaining[t.agent.slot(self.n)] = false;
            let (m, w) = t.pair();
            if let Some(g) = self.poset.get_rotation(m, w) {
                in_set.union_with(&self.with_ancestors(g));
            }
            if let Some(b) = self.poset.break_rotation(m, w) {
                out_set.union_with(&self.with_descendants(b));
            }
        }
        if let Some(d_min) = v.d_min() {
            for r in 0..p {
                if !out_set.contains(r) && &self.dmax_w[r] > d_min {
                    in_set.union_with(&self.with_ancestors(r));
                }
            }
            for r in 0..p {
                if !in_set.contains(r) && &self.dmax_m[r] > d_min {
                    out_set.union_with(&self.with_descendants(r));
                }
            }
        }
        (RotationConstraints { in_set, out_set }, remaining)
    }
}

/// Per-iteration record of the improvement loops: the value `d↓_k(x_i)` and the
/// agents found at that level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopStep {
    pub level: Rational,
    pub agents: Vec<Agent>,
}

/// Woman triples that can sit at position `k`, found by improving the women
/// step by step from the men-best compatible matching.
pub fn next_women(c: &RotationConstraints, k: usize, remaining: &[bool], ctx: &XpContext) -> Vec<Triple> {
    next_women_traced(c, k, remaining, ctx).0
}

pub fn next_women_traced(
    c: &RotationConstraints,
    k: usize,
    remaining: &[bool],
    ctx: &XpContext,
) -> (Vec<Triple>, Vec<LoopStep>) {
    let n = ctx.n;
    let poset = &ctx.poset;
    let women_best = poset.matching_of_set(&c.out_set.complement());
    let mut found = BTreeSet::new();
    let mut trace = Vec::new();
    let mut r = c.in_set.clone();
    loop {
        let x = poset.matching_of_set(&r);
        let dis = ctx.agent_dis(&x);
        let level = XpContext::kth_largest(&dis, k);
        let tier: Vec<usize> = (0..n).filter(|&w| remaining[n + w] && dis[n + w] == level).collect();
        if tier.is_empty() {
            break;
        }
        trace.push(LoopStep {
            level: level.clone(),
            agents: tier.iter().map(|&w| Agent::woman(w)).collect(),
        });
        let mut flag = false;
        for &w in &tier {
            let m = x.husband(w);
            found.insert(Triple {
                dis: dis[n + w].clone(),
                agent: Agent::woman(w),
                partner: m,
            });
            match poset.break_rotation(m, w) {
                Some(b) if !women_best.contains(m, w) => r.union_with(&ctx.with_ancestors(b)),
                _ => flag = true,
            }
        }
        if flag {
            break;
        }
    }
    (found.into_iter().collect(), trace)
}

/// Man triples that can sit at position `k`, found by worsening the men step by
/// step from the women-best compatible matching.
pub fn next_men(c: &RotationConstraints, k: usize, remaining: &[bool], ctx: &XpContext) -> Vec<Triple> {
    next_men_traced(c, k, remaining, ctx).0
}

pub fn next_men_traced(
    c: &RotationConstraints,
    k: usize,
    remaining: &[bool],
    ctx: &XpContext,
) -> (Vec<Triple>, Vec<LoopStep>) {
    let n = ctx.n;
    let poset = &ctx.poset;
    let men_best = poset.matching_of_set(&c.in_set);
    let mut found = BTreeSet::new();
    let mut trace = Vec::new();
    let mut r = c.out_set.complement();
    loop {
        let x = poset.matching_of_set(&r);
        let dis = ctx.agent_dis(&x);
        let level = XpContext::kth_largest(&dis, k);
        let tier: Vec<usize> = (0..n).filter(|&m| remaining[m] && dis[m] == level).collect();
        if tier.is_empty() {
            break;
        }
        trace.push(LoopStep {
            level: level.clone(),
            agents: tier.iter().map(|&m| Agent::man(m)).collect(),
        });
        let mut flag = false;
        for &m in &tier {
            let w = x.wife(m);
            found.insert(Triple {
                dis: dis[m].clone(),
                agent: Agent::man(m),
                partner: w,
            });
            match poset.get_rotation(m, w) {
                Some(g) if !men_best.contains(m, w) => r.subtract(&ctx.with_descendants(g)),
                _ => flag = true,
            }
        }
        if flag {
            break;
        }
    }
    (found.into_iter().collect(), trace)
}

/// Every triple that can extend `v` (of length `k - 1`) to a length-`k` prefix.
pub fn next_triples(v: &TripleVector, k: usize, ctx: &XpContext) -> Vec<Triple> {
    debug_assert_eq!(v.len() + 1, k);
    let (c, remaining) = ctx.constraints_for(v);
    if !c.is_consistent() {
        return Vec::new();
    }
    let mut out: BTreeSet<Triple> = next_women(&c, k, &remaining, ctx).into_iter().collect();
    out.extend(next_men(&c, k, &remaining, ctx));
    out.into_iter().collect()
}

/// Execution knobs for the enumeration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct XpOptions {
    /// Expand each level on this many worker threads; `None` runs sequentially.
    /// Results do not depend on the setting.
    pub threads: Option<usize>,
}

fn expand_level<F>(states: Vec<TripleVector>, k: usize, ctx: &XpContext, opts: XpOptions, key: F) -> Result<Vec<TripleVector>>
where
    F: Fn(TripleVector) -> TripleVector + Sync,
{
    let expand = |v: &TripleVector| -> Vec<TripleVector> {
        next_triples(v, k, ctx).into_iter().map(|t| key(v.pushed(t))).collect()
    };
    let batches: Vec<Vec<TripleVector>> = match opts.threads {
        Some(t) if t > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
            pool.install(|| states.par_iter().map(expand).collect())
        }
        _ => states.iter().map(expand).collect(),
    };
    let merged: BTreeSet<TripleVector> = batches.into_iter().flatten().collect();
    Ok(merged.into_iter().collect())
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > 2 * n {
        return Err(Error::arg(format!("K must lie in 1..={}, got {k}", 2 * n)));
    }
    Ok(())
}

/// All length-`K` prefixes, keeping every ordering of equal dissatisfactions.
/// The set grows factorially with tie sizes; meant for small `K`.
pub fn enumerate_topk(ctx: &XpContext, k_max: usize, opts: XpOptions) -> Result<Vec<TripleVector>> {
    check_k(k_max, ctx.n)?;
    let mut level = vec![TripleVector::default()];
    for k in 1..=k_max {
        level = expand_level(level, k, ctx, opts, |v| v)?;
    }
    Ok(level)
}

/// Like [`enumerate_topk`] but keeps one representative per set of triples.
/// Expansion only depends on that set, so nothing reachable is lost.
pub fn enumerate_topk_sets(ctx: &XpContext, k_max: usize, opts: XpOptions) -> Result<Vec<TripleVector>> {
    check_k(k_max, ctx.n)?;
    let mut level = vec![TripleVector::default()];
    for k in 1..=k_max {
        level = expand_level(level, k, ctx, opts, |v| v.canonical())?;
    }
    Ok(level)
}

#[derive(Debug, Clone)]
pub struct XpResult {
    pub matching: Matching,
    pub value: Rational,
    /// Number of nonzero weights.
    pub k: usize,
    /// Minimizing prefix (empty when `k == 0`).
    pub best: TripleVector,
    /// Size of the final enumeration level.
    pub candidates: usize,
}

/// Minimizes the GGI exactly. Cost grows like `n^{O(K)}` with `K` the number of
/// positive weights.
pub fn xp_solve(inst: &Instance, dfun: &DisutilityFunction, weights: &GgiWeights, opts: XpOptions) -> Result<XpResult> {
    let n = inst.n();
    if weights.len() != 2 * n {
        return Err(Error::arg(format!("{} weights for {} agents", weights.len(), 2 * n)));
    }
    let ctx = XpContext::new(inst, dfun)?;
    let k = weights.k();
    if k == 0 {
        let matching = ctx.poset.man_optimal().clone();
        let value = ggi(weights, disutility_vector(inst, dfun, &matching)?.values())?;
        return Ok(XpResult {
            matching,
            value,
            k,
            best: TripleVector::default(),
            candidates: 1,
        });
    }
    let level = enumerate_topk_sets(&ctx, k, opts)?;
    let lambda = weights.as_slice();
    let best = level
        .iter()
        .map(|v| (ggi_sorted(lambda, &v.dis()), v))
        .min_by(|a, b| a.0.cmp(&b.0))
        .ok_or_else(|| Error::Internal("enumeration produced no prefix".into()))?;
    let (cost, best) = (best.0, best.1.clone());
    let matching = witness(&ctx, &best)?;
    let value = ggi(weights, disutility_vector(inst, dfun, &matching)?.values())?;
    if value != cost {
        return Err(Error::Internal(format!(
            "witness value {} differs from prefix value {}",
            format_rational(&value),
            format_rational(&cost)
        )));
    }
    Ok(XpResult {
        matching,
        value,
        k,
        candidates: level.len(),
        best,
    })
}

/// The men-best stable matching whose sorted triples start with `v`.
pub fn witness(ctx: &XpContext, v: &TripleVector) -> Result<Matching> {
    let (c, _) = ctx.constraints_for(v);
    if !c.is_consistent() {
        return Err(Error::Internal(format!("prefix {v} has no compatible stable matching")));
    }
    Ok(ctx.poset.matching_of_set(&c.in_set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, parse_rational};

    fn t(dis: i64, agent: &str, partner: usize) -> Triple {
        let idx: usize = agent[1..].parse().unwrap();
        let agent = if agent.starts_with('m') { Agent::man(idx - 1) } else { Agent::woman(idx - 1) };
        Triple {
            dis: int(dis),
            agent,
            partner: partner - 1,
        }
    }

    fn ctx() -> XpContext {
        XpContext::new(&fixtures::example1(), &DisutilityFunction::Identity).unwrap()
    }

    fn set(v: Vec<Triple>) -> BTreeSet<Triple> {
        v.into_iter().collect()
    }

    #[test]
    fn first_position_on_example() {
        let ctx = ctx();
        let got = next_triples(&TripleVector::default(), 1, &ctx);
        assert_eq!(set(got), set(vec![t(10, "w10", 9), t(9, "w10", 8)]));
    }

    #[test]
    fn second_position_after_w10_m9() {
        let ctx = ctx();
        let v = TripleVector {
            entries: vec![t(10, "w10", 9)],
        };
        let (c, remaining) = ctx.constraints_for(&v);
        let women = next_women(&c, 2, &remaining, &ctx);
        assert_eq!(
            set(women),
            set(vec![t(7, "w4", 6), t(7, "w5", 7), t(7, "w6", 5), t(7, "w7", 4)])
        );
        let men = next_men(&c, 2, &remaining, &ctx);
        assert_eq!(
            set(men),
            set(vec![t(5, "m4", 6), t(5, "m5", 7), t(5, "m6", 5), t(5, "m7", 4)])
        );
        assert_eq!(next_triples(&v, 2, &ctx).len(), 8);
    }

    #[test]
    fn second_position_after_w10_m8() {
        let ctx = ctx();
        let v = TripleVector {
            entries: vec![t(9, "w10", 8)],
        };
        let (c, remaining) = ctx.constraints_for(&v);
        let men = next_men(&c, 2, &remaining, &ctx);
        assert_eq!(
            set(men),
            set(vec![
                t(5, "m4", 6),
                t(5, "m5", 7),
                t(5, "m6", 5),
                t(5, "m7", 4),
                t(5, "m8", 10),
                t(5, "m9", 9),
                t(5, "m10", 8)
            ])
        );
        for tr in next_triples(&v, 2, &ctx) {
            assert_ne!(tr.agent, Agent::woman(9));
        }
    }

    #[test]
    fn k2_enumeration_has_fifteen_vectors() {
        let ctx = ctx();
        let all = enumerate_topk(&ctx, 2, XpOptions::default()).unwrap();
        assert_eq!(all.len(), 15);
        let k1 = enumerate_topk(&ctx, 1, XpOptions::default()).unwrap();
        assert_eq!(k1.len(), 2);
        let par = enumerate_topk(&ctx, 2, XpOptions { threads: Some(3) }).unwrap();
        assert_eq!(par, all);
    }

    #[test]
    fn solve_with_two_weights_exactly() {
        let inst = fixtures::example1();
        let mut lambda = vec![parse_rational("0.0975").unwrap(), parse_rational("0.0925").unwrap()];
        lambda.resize(20, int(0));
        let w = GgiWeights::new(lambda).unwrap();
        let res = xp_solve(&inst, &DisutilityFunction::Identity, &w, XpOptions::default()).unwrap();
        assert_eq!(res.value, int(9) * parse_rational("0.0975").unwrap() + int(5) * parse_rational("0.0925").unwrap());
        assert_eq!(res.matching, fixtures::example1_matchings()[4]);
    }

    #[test]
    fn solve_full_gini_and_egalitarian() {
        let inst = fixtures::example1();
        let res = xp_solve(&inst, &DisutilityFunction::Identity, &GgiWeights::gini(20).unwrap(), XpOptions::default())
            .unwrap();
        assert_eq!(res.matching, fixtures::example1_matchings()[3]);
        assert_eq!(res.value, parse_rational("4.3925").unwrap());
        let res = xp_solve(&inst, &DisutilityFunction::Identity, &GgiWeights::head(20, 1).unwrap(), XpOptions::default())
            .unwrap();
        assert_eq!(res.value, int(9));
    }

    #[test]
    fn zero_weights_and_bad_k() {
        let inst = fixtures::example1();
        let w = GgiWeights::new(vec![int(0); 20]).unwrap();
        let res = xp_solve(&inst, &DisutilityFunction::Identity, &w, XpOptions::default()).unwrap();
        assert_eq!(res.value, int(0));
        assert!(enumerate_topk(&ctx(), 0, XpOptions::default()).is_err());
        assert!(enumerate_topk(&ctx(), 21, XpOptions::default()).is_err());
    }

    #[test]
    fn loop_levels_strictly_decrease() {
        let ctx = ctx();
        let (c, remaining) = ctx.constraints_for(&TripleVector::default());
        for k in 1..=20 {
            for trace in [
                next_women_traced(&c, k, &remaining, &ctx).1,
                next_men_traced(&c, k, &remaining, &ctx).1,
            ] {
                assert!(trace.len() <= 10);
                for pair in trace.windows(2) {
                    assert!(pair[1].level < pair[0].level);
                }
            }
        }
    }
}
