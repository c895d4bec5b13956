//! Extended Gale-Shapley: man-optimal matching plus the reduced shortlists.

use std::collections::VecDeque;

use crate::instance::Instance;
use crate::matching::Matching;

/// Preference lists after the extended Gale-Shapley deletions (and, later,
/// rotation eliminations). Symmetric: `w` is in `m`'s list iff `m` is in `w`'s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shortlists {
    men: Vec<Vec<usize>>,
    women: Vec<Vec<usize>>,
}

impl Shortlists {
    /// Full preference lists, before any deletion.
    pub fn full(inst: &Instance) -> Self {
        Shortlists {
            men: inst.men_prefs().to_vec(),
            women: inst.women_prefs().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.men.len()
    }

    pub fn men(&self) -> &[Vec<usize>] {
        &self.men
    }

    pub fn women(&self) -> &[Vec<usize>] {
        &self.women
    }

    pub fn man_list(&self, m: usize) -> &[usize] {
        &self.men[m]
    }

    pub fn woman_list(&self, w: usize) -> &[usize] {
        &self.women[w]
    }

    /// Deletes every man that `w` ranks below `m` (and the mirror entries).
    pub(crate) fn truncate_after(&mut self, w: usize, m: usize) {
        let Some(pos) = self.women[w].iter().position(|&x| x == m) else {
            return;
        };
        let removed: Vec<usize> = self.women[w].drain(pos + 1..).collect();
        for r in removed {
            self.men[r].retain(|&x| x != w);
        }
    }

    /// Matches every man to the head of his list.
    pub fn heads(&self) -> Option<Matching> {
        let partners: Option<Vec<usize>> = self.men.iter().map(|l| l.first().copied()).collect();
        Matching::new(partners?).ok()
    }

    /// Checks symmetry and that original preference order is preserved.
    pub fn is_consistent_with(&self, inst: &Instance) -> bool {
        let n = inst.n();
        if self.men.len() != n || self.women.len() != n {
            return false;
        }
        let ordered = |list: &[usize], rank: &dyn Fn(usize) -> usize| list.windows(2).all(|p| rank(p[0]) < rank(p[1]));
        for m in 0..n {
            if self.men[m].is_empty() || !ordered(&self.men[m], &|w| inst.man_rank(m, w)) {
                return false;
            }
            if self.men[m].iter().any(|&w| !self.women[w].contains(&m)) {
                return false;
            }
        }
        for w in 0..n {
            if self.women[w].is_empty() || !ordered(&self.women[w], &|m| inst.woman_rank(w, m)) {
                return false;
            }
            if self.women[w].iter().any(|&m| !self.men[m].contains(&w)) {
                return false;
            }
        }
        true
    }
}

/// Order in which free men are taken from the pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheduler {
    #[default]
    Fifo,
    Lifo,
}

/// Man-optimal stable matching and the fully reduced shortlists.
pub fn man_optimal(inst: &Instance) -> (Matching, Shortlists) {
    man_optimal_with(inst, Scheduler::Fifo)
}

pub fn man_optimal_with(inst: &Instance, scheduler: Scheduler) -> (Matching, Shortlists) {
    let n = inst.n();
    let mut lists = Shortlists::full(inst);
    let mut held_by: Vec<Option<usize>> = vec![None; n];
    let mut free: VecDeque<usize> = (0..n).collect();
    loop {
        let next = match scheduler {
            Scheduler::Fifo => free.pop_front(),
            Scheduler::Lifo => free.pop_back(),
        };
        let Some(m) = next else { break };
        // Every deleted pair is mirrored, so the head always accepts.
        let w = lists.men[m][0];
        if let Some(prev) = held_by[w] {
            free.push_back(prev);
        }
        held_by[w] = Some(m);
        lists.truncate_after(w, m);
    }
    let matching = lists.heads().expect("extended Gale-Shapley ends with a perfect matching");
    (matching, lists)
}

/// Woman-optimal stable matching (women propose).
pub fn woman_optimal(inst: &Instance) -> Matching {
    let (swapped, _) = man_optimal(&inst.swapped());
    let mut partner_of_man = vec![0; inst.n()];
    for (w, &m) in swapped.partner_of_man().iter().enumerate() {
        partner_of_man[m] = w;
    }
    Matching::new(partner_of_man).expect("inverse of a permutation")
}
