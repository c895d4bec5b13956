//! Independent oracles shared by the integration tests. Nothing here calls the
//! library's solvers; only data types and parsing are reused.

#![allow(dead_code)]

use std::collections::BTreeSet;

use ggism::instance::{Agent, DisutilityFunction, Instance};
use ggism::Rational;

/// All stable matchings (as wife-per-man vectors) by backtracking over
/// permutations, pruning as soon as two assigned couples block each other.
pub fn stable_by_permutation(inst: &Instance) -> BTreeSet<Vec<usize>> {
    fn blocks(inst: &Instance, m: usize, w: usize, wife_of_m: usize, husband_of_w: usize) -> bool {
        inst.man_rank(m, w) < inst.man_rank(m, wife_of_m) && inst.woman_rank(w, m) < inst.woman_rank(w, husband_of_w)
    }
    fn go(inst: &Instance, wife: &mut Vec<usize>, used: &mut [bool], out: &mut BTreeSet<Vec<usize>>) {
        let n = inst.n();
        let m = wife.len();
        if m == n {
            out.insert(wife.clone());
            return;
        }
        for w in 0..n {
            if used[w] {
                continue;
            }
            let clash = (0..m).any(|m2| blocks(inst, m, wife[m2], w, m2) || blocks(inst, m2, w, wife[m2], m));
            if clash {
                continue;
            }
            used[w] = true;
            wife.push(w);
            go(inst, wife, used, out);
            wife.pop();
            used[w] = false;
        }
    }
    let mut out = BTreeSet::new();
    go(inst, &mut Vec::new(), &mut vec![false; inst.n()], &mut out);
    out
}

/// Disutilities `(men..., women...)` straight from the preference lists.
pub fn disutilities(inst: &Instance, dfun: &DisutilityFunction, wife: &[usize]) -> Vec<Rational> {
    let n = inst.n();
    let mut husband = vec![0; n];
    for (m, &w) in wife.iter().enumerate() {
        husband[w] = m;
    }
    let rank = |list: &[usize], x: usize| list.iter().position(|&y| y == x).unwrap() + 1;
    let mut out = Vec::with_capacity(2 * n);
    for m in 0..n {
        out.push(dfun.value(rank(&inst.men_prefs()[m], wife[m])).unwrap());
    }
    for w in 0..n {
        out.push(dfun.value(rank(&inst.women_prefs()[w], husband[w])).unwrap());
    }
    out
}

/// GGI by repeated extraction of the largest remaining value.
pub fn ggi_oracle(lambda: &[Rational], values: &[Rational]) -> Rational {
    let mut rest = values.to_vec();
    let mut total = Rational::from_integer(0.into());
    for l in lambda {
        let (pos, _) = rest.iter().enumerate().fold((0, &rest[0]), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
        let v = rest.swap_remove(pos);
        total += l * v;
        if rest.is_empty() {
            break;
        }
    }
    total
}

pub type TripleKey = (Rational, Agent, usize);

/// Every length-`k` prefix of every nonincreasing ordering of the matching's
/// (dissatisfaction, agent, partner) triples.
pub fn prefixes(inst: &Instance, dfun: &DisutilityFunction, wife: &[usize], k: usize) -> BTreeSet<Vec<TripleKey>> {
    let n = inst.n();
    let dis = disutilities(inst, dfun, wife);
    let mut husband = vec![0; n];
    for (m, &w) in wife.iter().enumerate() {
        husband[w] = m;
    }
    let mut triples: Vec<TripleKey> = (0..n)
        .map(|m| (dis[m].clone(), Agent::man(m), wife[m]))
        .chain((0..n).map(|w| (dis[n + w].clone(), Agent::woman(w), husband[w])))
        .collect();
    triples.sort_by(|a, b| b.0.cmp(&a.0));
    let mut groups: Vec<Vec<TripleKey>> = Vec::new();
    for t in triples {
        match groups.last_mut() {
            Some(g) if g[0].0 == t.0 => g.push(t),
            _ => groups.push(vec![t]),
        }
    }
    fn arrangements(pool: &[TripleKey], len: usize) -> Vec<Vec<TripleKey>> {
        if len == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 0..pool.len() {
            let mut rest = pool.to_vec();
            let head = rest.remove(i);
            for mut tail in arrangements(&rest, len - 1) {
                tail.insert(0, head.clone());
                out.push(tail);
            }
        }
        out
    }
    let mut acc: Vec<Vec<TripleKey>> = vec![vec![]];
    let mut left = k;
    for g in groups {
        if left == 0 {
            break;
        }
        let take = left.min(g.len());
        let options = arrangements(&g, take);
        acc = acc
            .into_iter()
            .flat_map(|p| {
                options.iter().map(move |o| {
                    let mut q = p.clone();
                    q.extend(o.iter().cloned());
                    q
                })
            })
            .collect();
        left -= take;
    }
    acc.into_iter().collect()
}
