//! Rotations, the rotation poset, and the closed-set / stable-matching bijection.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gale_shapley::{man_optimal, woman_optimal, Shortlists};
use crate::instance::{DisutilityFunction, Instance};
use crate::matching::Matching;
use crate::rational::Rational;

pub type RotationId = usize;

/// A cyclic sequence `(m_0, w_0), ..., (m_{r-1}, w_{r-1})`: eliminating it moves
/// every `m_k` from `w_k` to `w_{k+1}`. Stored with its smallest man first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rotation {
    pairs: Vec<(usize, usize)>,
}

impl Rotation {
    /// Canonicalizes the cyclic order so that the smallest man index comes first.
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Self {
        if let Some(start) = pairs.iter().enumerate().min_by_key(|(_, p)| p.0).map(|(i, _)| i) {
            pairs.rotate_left(start);
        }
        Rotation { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn position_of_man(&self, m: usize) -> Option<usize> {
        self.pairs.iter().position(|p| p.0 == m)
    }

    /// Woman that man `m` moves to when the rotation is eliminated.
    pub fn new_partner_of_man(&self, m: usize) -> Option<usize> {
        let k = self.position_of_man(m)?;
        Some(self.pairs[(k + 1) % self.len()].1)
    }

    /// Man that woman `w` moves to when the rotation is eliminated.
    pub fn new_partner_of_woman(&self, w: usize) -> Option<usize> {
        let k = self.pairs.iter().position(|p| p.1 == w)?;
        Some(self.pairs[(k + self.len() - 1) % self.len()].0)
    }

    /// Pairs present after elimination: `(m_k, w_{k+1})`.
    pub fn new_pairs(&self) -> Vec<(usize, usize)> {
        let r = self.len();
        (0..r).map(|k| (self.pairs[k].0, self.pairs[(k + 1) % r].1)).collect()
    }

    /// `rho: (m,w),(m,w)` with 1-based indices.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.pairs.iter().map(|(m, w)| format!("({},{})", m + 1, w + 1)).collect();
        parts.join(",")
    }
}

/// Every rotation exposed in the shortlists: the cycles of the map sending a man
/// with at least two entries to the current partner of his second woman.
pub fn find_exposed(s: &Shortlists) -> Vec<Rotation> {
    let n = s.n();
    let next: Vec<Option<usize>> = (0..n)
        .map(|m| {
            let list = s.man_list(m);
            if list.len() < 2 {
                return None;
            }
            s.woman_list(list[1]).last().copied()
        })
        .collect();
    // 0 = unseen, 1 = on the current walk, 2 = finished
    let mut state = vec![0u8; n];
    let mut found = Vec::new();
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = Some(start);
        while let Some(m) = cur {
            match state[m] {
                0 => {
                    state[m] = 1;
                    path.push(m);
                    cur = next[m];
                }
                1 => {
                    let from = path.iter().position(|&x| x == m).expect("on path");
                    let pairs = path[from..].iter().map(|&x| (x, s.man_list(x)[0])).collect();
                    found.push(Rotation::new(pairs));
                    break;
                }
                _ => break,
            }
        }
        for m in path {
            state[m] = 2;
        }
    }
    found.sort();
    found
}

/// True iff every `w_k` heads `m_k`'s list and `w_{k+1}` is second in it.
pub fn is_exposed(s: &Shortlists, rho: &Rotation) -> bool {
    let r = rho.len();
    r >= 2
        && (0..r).all(|k| {
            let (m, w) = rho.pairs[k];
            let list = s.man_list(m);
            list.len() >= 2 && list[0] == w && list[1] == rho.pairs[(k + 1) % r].1
        })
}

/// Eliminates an exposed rotation: each `w_k` drops every man she ranks below `m_{k-1}`.
pub fn eliminate(s: &Shortlists, rho: &Rotation) -> Result<Shortlists> {
    let mut out = s.clone();
    eliminate_in_place(&mut out, rho)?;
    Ok(out)
}

pub(crate) fn eliminate_in_place(s: &mut Shortlists, rho: &Rotation) -> Result<()> {
    if !is_exposed(s, rho) {
        return Err(Error::NotExposed);
    }
    let r = rho.len();
    for k in 0..r {
        let w = rho.pairs[k].1;
        let new_man = rho.pairs[(k + r - 1) % r].0;
        s.truncate_after(w, new_man);
    }
    Ok(())
}

/// Subset of rotation ids, stored as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RotationSet {
    bits: Vec<bool>,
}

impl RotationSet {
    pub fn empty(size: usize) -> Self {
        RotationSet { bits: vec![false; size] }
    }

    pub fn full(size: usize) -> Self {
        RotationSet { bits: vec![true; size] }
    }

    pub fn from_ids(size: usize, ids: &[RotationId]) -> Result<Self> {
        let mut s = Self::empty(size);
        for &id in ids {
            if id >= size {
                return Err(Error::arg(format!("rotation {} does not exist", id + 1)));
            }
            s.bits[id] = true;
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, id: RotationId) -> bool {
        self.bits[id]
    }

    pub fn insert(&mut self, id: RotationId) {
        self.bits[id] = true;
    }

    pub fn remove(&mut self, id: RotationId) {
        self.bits[id] = false;
    }

    pub fn union_with(&mut self, other: &RotationSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= *b;
        }
    }

    pub fn subtract(&mut self, other: &RotationSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= !*b;
        }
    }

    pub fn intersects(&self, other: &RotationSet) -> bool {
        self.bits.iter().zip(&other.bits).any(|(a, b)| *a && *b)
    }

    pub fn complement(&self) -> RotationSet {
        RotationSet {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn ids(&self) -> Vec<RotationId> {
        self.iter().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = RotationId> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }
}

/// A downward-closed rotation set; only built through [`RotationPoset::closed`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedSet(RotationSet);

impl ClosedSet {
    pub fn set(&self) -> &RotationSet {
        &self.0
    }

    pub fn ids(&self) -> Vec<RotationId> {
        self.0.ids()
    }

    pub fn contains(&self, id: RotationId) -> bool {
        self.0.contains(id)
    }
}

/// All rotations of an instance with their precedence order and the
/// `get`/`break` maps over the stable pairs.
#[derive(Debug, Clone)]
pub struct RotationPoset {
    n: usize,
    rotations: Vec<Rotation>,
    /// `below[a][b]` iff rotation `a` strictly precedes rotation `b`.
    below: Vec<Vec<bool>>,
    immediate: Vec<(RotationId, RotationId)>,
    get_map: Vec<Option<RotationId>>,
    break_map: Vec<Option<RotationId>>,
    man_optimal: Matching,
    woman_optimal: Matching,
    base: Shortlists,
}

impl RotationPoset {
    /// Discovers all rotations by exhaustive elimination from the man-optimal
    /// shortlists, then probes precedence: eliminating everything exposable except
    /// `pi` leaves exactly `pi` and its strict descendants untouched.
    pub fn build(inst: &Instance) -> Self {
        let n = inst.n();
        let (xm, base) = man_optimal(inst);

        let mut rotations = Vec::new();
        let mut lists = base.clone();
        while let Some(rho) = find_exposed(&lists).into_iter().next() {
            eliminate_in_place(&mut lists, &rho).expect("freshly found rotation is exposed");
            rotations.push(rho);
        }
        let ids: HashMap<Rotation, RotationId> =
            rotations.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();

        let p = rotations.len();
        let mut below = vec![vec![false; p]; p];
        for pi in 0..p {
            let mut eliminated = vec![false; p];
            let mut lists = base.clone();
            loop {
                let next = find_exposed(&lists).into_iter().find(|r| ids[r] != pi);
                let Some(rho) = next else { break };
                eliminated[ids[&rho]] = true;
                eliminate_in_place(&mut lists, &rho).expect("exposed");
            }
            for rho in 0..p {
                if rho != pi && !eliminated[rho] {
                    below[pi][rho] = true;
                }
            }
        }

        let mut immediate = Vec::new();
        for a in 0..p {
            for b in 0..p {
                if below[a][b] && !(0..p).any(|c| below[a][c] && below[c][b]) {
                    immediate.push((a, b));
                }
            }
        }

        let mut get_map = vec![None; n * n];
        let mut break_map = vec![None; n * n];
        for (id, rho) in rotations.iter().enumerate() {
            for &(m, w) in rho.pairs() {
                break_map[m * n + w] = Some(id);
            }
            for (m, w) in rho.new_pairs() {
                get_map[m * n + w] = Some(id);
            }
        }

        RotationPoset {
            n,
            rotations,
            below,
            immediate,
            get_map,
            break_map,
            man_optimal: xm,
            woman_optimal: woman_optimal(inst),
            base,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    /// Rotation id whose pairs equal `rho` up to cyclic order.
    pub fn id_of(&self, rho: &Rotation) -> Option<RotationId> {
        self.rotations.iter().position(|r| r == rho)
    }

    pub fn precedes(&self, a: RotationId, b: RotationId) -> bool {
        self.below[a][b]
    }

    /// Transitive reduction of the precedence order.
    pub fn immediate_edges(&self) -> &[(RotationId, RotationId)] {
        &self.immediate
    }

    /// Strict ancestors of `id`.
    pub fn ancestors(&self, id: RotationId) -> RotationSet {
        let mut s = RotationSet::empty(self.len());
        for a in 0..self.len() {
            if self.below[a][id] {
                s.insert(a);
            }
        }
        s
    }

    /// Strict descendants of `id`.
    pub fn descendants(&self, id: RotationId) -> RotationSet {
        let mut s = RotationSet::empty(self.len());
        for b in 0..self.len() {
            if self.below[id][b] {
                s.insert(b);
            }
        }
        s
    }

    /// Rotation that creates pair `(m, w)`; `None` for pairs of the man-optimal
    /// matching and for pairs outside every stable matching.
    pub fn get_rotation(&self, m: usize, w: usize) -> Option<RotationId> {
        self.get_map[m * self.n + w]
    }

    /// Rotation that breaks pair `(m, w)`; `None` for woman-optimal pairs and
    /// for pairs outside every stable matching.
    pub fn break_rotation(&self, m: usize, w: usize) -> Option<RotationId> {
        self.break_map[m * self.n + w]
    }

    /// Pairs belonging to at least one stable matching, sorted.
    pub fn stable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.n).map(|m| (m, self.man_optimal.wife(m))).collect();
        for rho in &self.rotations {
            out.extend(rho.new_pairs());
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn man_optimal(&self) -> &Matching {
        &self.man_optimal
    }

    pub fn woman_optimal(&self) -> &Matching {
        &self.woman_optimal
    }

    /// Shortlists at the man-optimal matching.
    pub fn base_shortlists(&self) -> &Shortlists {
        &self.base
    }

    /// Validates downward closure.
    pub fn closed(&self, set: RotationSet) -> Result<ClosedSet> {
        if set.universe() != self.len() {
            return Err(Error::arg(format!(
                "rotation set over {} rotations, poset has {}",
                set.universe(),
                self.len()
            )));
        }
        for member in set.iter() {
            if let Some(missing) = (0..self.len()).find(|&a| self.below[a][member] && !set.contains(a)) {
                return Err(Error::NotClosed { member, missing });
            }
        }
        Ok(ClosedSet(set))
    }

    pub fn closed_from_ids(&self, ids: &[RotationId]) -> Result<ClosedSet> {
        self.closed(RotationSet::from_ids(self.len(), ids)?)
    }

    /// Matching of a closed set through the pair/rotation equations: a pair of
    /// the man-optimal matching survives unless its breaking rotation is taken,
    /// and a created pair survives iff its creating rotation is taken and its
    /// breaking one is not.
    pub fn matching_of(&self, r: &ClosedSet) -> Matching {
        self.matching_of_set(r.set())
    }

    /// Same as [`matching_of`](Self::matching_of) for a set known to be closed.
    pub(crate) fn matching_of_set(&self, r: &RotationSet) -> Matching {
        let partners = (0..self.n)
            .map(|m| {
                let mut w = self.man_optimal.wife(m);
                while let Some(id) = self.break_rotation(m, w).filter(|&id| r.contains(id)) {
                    w = self.rotations[id].new_partner_of_man(m).expect("man in rotation");
                }
                w
            })
            .collect();
        Matching::new(partners).expect("closed set yields a perfect matching")
    }

    /// Closed set of a stable matching: a rotation is taken iff its men sit
    /// strictly below their rotation partners in the matching. Errors when the
    /// matching is not stable.
    pub fn closed_set_of(&self, m: &Matching) -> Result<ClosedSet> {
        if m.n() != self.n {
            return Err(Error::arg(format!("matching has {} men, instance has {}", m.n(), self.n)));
        }
        let position = |man: usize, w: usize| self.base.man_list(man).iter().position(|&x| x == w);
        let mut set = RotationSet::empty(self.len());
        for (id, rho) in self.rotations.iter().enumerate() {
            let (man, w) = rho.pairs()[0];
            let taken = match (position(man, m.wife(man)), position(man, w)) {
                (Some(now), Some(at)) => now > at,
                _ => return Err(Error::arg("matching is not stable")),
            };
            if taken {
                set.insert(id);
            }
        }
        let closed = self.closed(set).map_err(|_| Error::arg("matching is not stable"))?;
        if &self.matching_of(&closed) != m {
            return Err(Error::arg("matching is not stable"));
        }
        Ok(closed)
    }

    /// Matching of a closed set by eliminating its rotations one by one from the
    /// man-optimal shortlists, in id order (a linear extension of the poset).
    pub fn matching_by_elimination(&self, r: &ClosedSet) -> Result<Matching> {
        let mut lists = self.base.clone();
        for id in r.ids() {
            eliminate_in_place(&mut lists, &self.rotations[id])?;
        }
        lists
            .heads()
            .ok_or_else(|| Error::Internal("elimination left an empty shortlist".into()))
    }

    /// Streams every closed set with its stable matching, exactly once each.
    pub fn enumerate_stable(&self) -> ClosedSets<'_> {
        ClosedSets {
            poset: self,
            stack: vec![(0, RotationSet::empty(self.len()))],
        }
    }

    /// Man and woman weights of every rotation.
    pub fn rotation_weights(&self, inst: &Instance, dfun: &DisutilityFunction) -> Result<RotationWeights> {
        let n = self.n;
        let zero = Rational::from_integer(0.into());
        let mut men = vec![vec![zero.clone(); n]; self.len()];
        let mut women = vec![vec![zero; n]; self.len()];
        for (id, rho) in self.rotations.iter().enumerate() {
            let r = rho.len();
            for k in 0..r {
                let (m, w) = rho.pairs[k];
                let next_w = rho.pairs[(k + 1) % r].1;
                let prev_m = rho.pairs[(k + r - 1) % r].0;
                men[id][m] = dfun.value(inst.man_rank(m, w))? - dfun.value(inst.man_rank(m, next_w))?;
                women[id][w] = dfun.value(inst.woman_rank(w, m))? - dfun.value(inst.woman_rank(w, prev_m))?;
            }
        }
        Ok(RotationWeights { men, women })
    }

    /// Graphviz rendering of the transitive reduction.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph rotations {\n");
        for (id, rho) in self.rotations.iter().enumerate() {
            out.push_str(&format!("  r{} [label=\"ρ{}: {}\"];\n", id + 1, id + 1, rho.label()));
        }
        for &(a, b) in &self.immediate {
            out.push_str(&format!("  r{} -> r{};\n", a + 1, b + 1));
        }
        out.push_str("}\n");
        out
    }

    /// JSON export of rotations, immediate edges and the get/break maps (1-based).
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct RotationOut {
            id: usize,
            pairs: Vec<[usize; 2]>,
            new_pairs: Vec<[usize; 2]>,
            immediate_predecessors: Vec<usize>,
        }
        #[derive(Serialize)]
        struct PairOut {
            pair: [usize; 2],
            get: Option<usize>,
            #[serde(rename = "break")]
            brk: Option<usize>,
        }
        let one = |v: &[(usize, usize)]| v.iter().map(|&(m, w)| [m + 1, w + 1]).collect::<Vec<_>>();
        let rotations: Vec<RotationOut> = self
            .rotations
            .iter()
            .enumerate()
            .map(|(id, rho)| RotationOut {
                id: id + 1,
                pairs: one(rho.pairs()),
                new_pairs: one(&rho.new_pairs()),
                immediate_predecessors: self
                    .immediate
                    .iter()
                    .filter(|e| e.1 == id)
                    .map(|e| e.0 + 1)
                    .collect(),
            })
            .collect();
        let pairs: Vec<PairOut> = self
            .stable_pairs()
            .into_iter()
            .map(|(m, w)| PairOut {
                pair: [m + 1, w + 1],
                get: self.get_rotation(m, w).map(|r| r + 1),
                brk: self.break_rotation(m, w).map(|r| r + 1),
            })
            .collect();
        serde_json::json!({
            "rotations": rotations,
            "edges": self.immediate.iter().map(|&(a, b)| [a + 1, b + 1]).collect::<Vec<_>>(),
            "stable_pairs": pairs,
        })
    }
}

/// Per-rotation disutility changes: `men[rho][i]` is `d(before) - d(after)` for
/// man `i` (never positive), `women[rho][j]` likewise for woman `j` (never negative).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationWeights {
    pub men: Vec<Vec<Rational>>,
    pub women: Vec<Vec<Rational>>,
}

/// Depth-first stream over closed sets; rotations are decided in id order,
/// "leave out" before "take".
pub struct ClosedSets<'a> {
    poset: &'a RotationPoset,
    stack: Vec<(usize, RotationSet)>,
}

impl Iterator for ClosedSets<'_> {
    type Item = (ClosedSet, Matching);

    fn next(&mut self) -> Option<Self::Item> {
        let p = self.poset.len();
        while let Some((depth, set)) = self.stack.pop() {
            if depth == p {
                let matching = self.poset.matching_of_set(&set);
                return Some((ClosedSet(set), matching));
            }
            let can_take = (0..depth).all(|a| !self.poset.below[a][depth] || set.contains(a));
            if can_take {
                let mut taken = set.clone();
                taken.insert(depth);
                self.stack.push((depth + 1, taken));
            }
            self.stack.push((depth + 1, set));
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gale_shapley::man_optimal;
    use crate::matching::{disutility_vector, is_stable};
    use crate::rational::int;

    fn rot(pairs: &[(usize, usize)]) -> Rotation {
        Rotation::new(pairs.iter().map(|&(m, w)| (m - 1, w - 1)).collect())
    }

    #[test]
    fn exposed_in_example_shortlists() {
        let (_, s) = man_optimal(&fixtures::example1());
        let exposed = find_exposed(&s);
        assert_eq!(exposed, vec![rot(&[(4, 7), (5, 6)]), rot(&[(6, 4), (7, 5)])]);
        let s = eliminate(&s, &exposed[0]).unwrap();
        assert_eq!(s.heads().unwrap(), fixtures::example1_matchings()[2]);
        let s = eliminate(&s, &exposed[1]).unwrap();
        let third = find_exposed(&s);
        assert_eq!(third, vec![rot(&[(8, 8), (9, 10), (10, 9)])]);
        let s = eliminate(&s, &third[0]).unwrap();
        assert!(find_exposed(&s).is_empty());
        assert_eq!(s.heads().unwrap(), fixtures::example1_matchings()[4]);
    }

    #[test]
    fn eliminate_requires_exposure() {
        let (_, s) = man_optimal(&fixtures::example1());
        let rho3 = rot(&[(8, 8), (9, 10), (10, 9)]);
        assert_eq!(eliminate(&s, &rho3), Err(Error::NotExposed));
        let single = Instance::parse("1\n1\n1\n").unwrap();
        let (_, s1) = man_optimal(&single);
        assert!(find_exposed(&s1).is_empty());
        assert_eq!(eliminate(&s1, &Rotation::new(vec![(0, 0)])), Err(Error::NotExposed));
    }

    #[test]
    fn example_poset() {
        let inst = fixtures::example1();
        let p = RotationPoset::build(&inst);
        assert_eq!(p.len(), 3);
        assert_eq!(p.immediate_edges(), &[(0, 2), (1, 2)]);
        assert!(p.precedes(0, 2) && p.precedes(1, 2) && !p.precedes(0, 1));
        assert_eq!(p.break_rotation(3, 6), Some(0));
        assert_eq!(p.get_rotation(7, 9), Some(2));
        assert_eq!(p.get_rotation(0, 0), None);
        assert_eq!(p.break_rotation(0, 0), None);
        assert_eq!(p.stable_pairs().len(), 17);
    }

    #[test]
    fn closed_set_of_inverts_matching_of() {
        let p = RotationPoset::build(&fixtures::example1());
        for (c, m) in p.enumerate_stable() {
            assert_eq!(p.closed_set_of(&m).unwrap(), c);
        }
        let unstable = Matching::new((0..10).collect()).unwrap();
        assert!(p.closed_set_of(&unstable).is_err());
        let wrong_size = Matching::new(vec![0]).unwrap();
        assert!(p.closed_set_of(&wrong_size).is_err());
    }

    #[test]
    fn tightness_poset_is_a_chain() {
        let p = RotationPoset::build(&fixtures::tightness());
        assert_eq!(p.len(), 2);
        assert_eq!(p.rotations()[0], rot(&[(1, 1), (2, 2), (3, 3)]));
        assert_eq!(p.rotations()[1], rot(&[(1, 2), (2, 3), (3, 1)]));
        assert!(p.precedes(0, 1));
    }

    #[test]
    fn closed_sets_of_example() {
        let inst = fixtures::example1();
        let p = RotationPoset::build(&inst);
        let xs = fixtures::example1_matchings();
        let got: Vec<(Vec<usize>, Matching)> = p.enumerate_stable().map(|(c, m)| (c.ids(), m)).collect();
        let want = vec![
            (vec![], xs[0].clone()),
            (vec![1], xs[1].clone()),
            (vec![0], xs[2].clone()),
            (vec![0, 1], xs[3].clone()),
            (vec![0, 1, 2], xs[4].clone()),
        ];
        assert_eq!(got, want);
        for (c, m) in p.enumerate_stable() {
            assert_eq!(p.matching_by_elimination(&c).unwrap(), m);
            assert!(is_stable(&inst, &m).unwrap());
        }
        assert!(matches!(p.closed_from_ids(&[2]), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn example_rotation_weights() {
        let inst = fixtures::example1();
        let p = RotationPoset::build(&inst);
        let w = p.rotation_weights(&inst, &DisutilityFunction::Identity).unwrap();
        assert_eq!(w.men[0][3], int(-4));
        assert_eq!(w.women[0][6], int(3));
        assert_eq!(w.men[0][0], int(0));
    }

    #[test]
    fn telescoping_on_example() {
        let inst = fixtures::example1();
        let p = RotationPoset::build(&inst);
        let d = DisutilityFunction::Squared;
        let w = p.rotation_weights(&inst, &d).unwrap();
        let base = disutility_vector(&inst, &d, p.man_optimal()).unwrap();
        for (c, m) in p.enumerate_stable() {
            let v = disutility_vector(&inst, &d, &m).unwrap();
            for i in 0..inst.n() {
                let men: Rational = c.ids().iter().map(|&r| w.men[r][i].clone()).sum();
                let women: Rational = c.ids().iter().map(|&r| w.women[r][i].clone()).sum();
                assert_eq!(v.men()[i], &base.men()[i] - men);
                assert_eq!(v.women()[i], &base.women()[i] - women);
            }
        }
    }

    #[test]
    fn exports() {
        let p = RotationPoset::build(&fixtures::example1());
        let dot = p.to_dot();
        assert!(dot.contains("r1 -> r3") && dot.contains("r2 -> r3"));
        assert!(dot.contains("ρ3: (8,8),(9,10),(10,9)"));
        let json = p.to_json();
        assert_eq!(json["rotations"].as_array().unwrap().len(), 3);
        assert_eq!(json["stable_pairs"].as_array().unwrap().len(), 17);
    }
}
