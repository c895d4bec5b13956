//! Perfect matchings, stability, disutility vectors and aggregation criteria.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Agent, DisutilityFunction, GgiWeights, Instance};
use crate::rational::{int, Rational};

/// A perfect man-woman assignment. Stability is checked separately.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    partner_of_man: Vec<usize>,
    partner_of_woman: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct MatchingJson {
    pairs: Vec<[usize; 2]>,
}

impl Matching {
    /// `partner_of_man[m]` is the (0-based) woman matched to man `m`.
    pub fn new(partner_of_man: Vec<usize>) -> Result<Self> {
        let n = partner_of_man.len();
        let mut partner_of_woman = vec![usize::MAX; n];
        for (m, &w) in partner_of_man.iter().enumerate() {
            if w >= n {
                return Err(Error::arg(format!("woman {} out of range", w + 1)));
            }
            if partner_of_woman[w] != usize::MAX {
                return Err(Error::arg(format!("woman {} matched twice", w + 1)));
            }
            partner_of_woman[w] = m;
        }
        Ok(Matching {
            partner_of_man,
            partner_of_woman,
        })
    }

    /// From 1-based `(man, woman)` pairs in any order.
    pub fn from_pairs(n: usize, pairs: &[[usize; 2]]) -> Result<Self> {
        if pairs.len() != n {
            return Err(Error::arg(format!("expected {n} pairs, found {}", pairs.len())));
        }
        let mut partner = vec![usize::MAX; n];
        for &[m, w] in pairs {
            if m == 0 || m > n || w == 0 || w > n {
                return Err(Error::arg(format!("pair ({m},{w}) out of range 1..={n}")));
            }
            if partner[m - 1] != usize::MAX {
                return Err(Error::arg(format!("man {m} matched twice")));
            }
            partner[m - 1] = w - 1;
        }
        Matching::new(partner)
    }

    pub fn from_json(n: usize, text: &str) -> Result<Self> {
        let raw: MatchingJson =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        Self::from_pairs(n, &raw.pairs)
    }

    /// `{"pairs": [[i, j], ...]}`, 1-based, men ascending.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MatchingJson { pairs: self.pairs_one_based() }).expect("matching serializes")
    }

    pub fn pairs_one_based(&self) -> Vec<[usize; 2]> {
        self.partner_of_man
            .iter()
            .enumerate()
            .map(|(m, &w)| [m + 1, w + 1])
            .collect()
    }

    pub fn n(&self) -> usize {
        self.partner_of_man.len()
    }

    pub fn wife(&self, m: usize) -> usize {
        self.partner_of_man[m]
    }

    pub fn husband(&self, w: usize) -> usize {
        self.partner_of_woman[w]
    }

    pub fn partner_of(&self, agent: Agent) -> usize {
        match agent.side {
            crate::instance::Side::Man => self.wife(agent.index),
            crate::instance::Side::Woman => self.husband(agent.index),
        }
    }

    pub fn contains(&self, m: usize, w: usize) -> bool {
        self.partner_of_man[m] == w
    }

    pub fn partner_of_man(&self) -> &[usize] {
        &self.partner_of_man
    }
}

impl std::fmt::Display for Matching {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .partner_of_man
            .iter()
            .enumerate()
            .map(|(m, w)| format!("(m{},w{})", m + 1, w + 1))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn check_size(inst: &Instance, m: &Matching) -> Result<()> {
    if inst.n() != m.n() {
        return Err(Error::arg(format!(
            "matching has {} pairs but the instance has n = {}",
            m.n(),
            inst.n()
        )));
    }
    Ok(())
}

/// Stability through the linear constraint form: for every `(i, j)`,
/// `x_ij + sum_{j' >_i j} x_ij' + sum_{i' >_j i} x_i'j >= 1`.
pub fn is_stable(inst: &Instance, m: &Matching) -> Result<bool> {
    check_size(inst, m)?;
    let n = inst.n();
    for i in 0..n {
        for j in 0..n {
            let mut lhs = usize::from(m.contains(i, j));
            for &j2 in inst.men_prefs()[i].iter().take_while(|&&j2| j2 != j) {
                lhs += usize::from(m.contains(i, j2));
            }
            for &i2 in inst.women_prefs()[j].iter().take_while(|&&i2| i2 != i) {
                lhs += usize::from(m.contains(i2, j));
            }
            if lhs == 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All 0-based `(man, woman)` pairs that prefer each other to their partners.
pub fn blocking_pairs(inst: &Instance, m: &Matching) -> Result<Vec<(usize, usize)>> {
    check_size(inst, m)?;
    let n = inst.n();
    let mut out = Vec::new();
    for man in 0..n {
        for woman in 0..n {
            if inst.man_prefers(man, woman, m.wife(man)) && inst.woman_prefers(woman, man, m.husband(woman)) {
                out.push((man, woman));
            }
        }
    }
    Ok(out)
}

/// `(d(m_1), ..., d(m_n), d(w_1), ..., d(w_n))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisutilityVector {
    n: usize,
    values: Vec<Rational>,
}

impl DisutilityVector {
    pub fn new(n: usize, values: Vec<Rational>) -> Result<Self> {
        if values.len() != 2 * n {
            return Err(Error::arg(format!("expected {} components, got {}", 2 * n, values.len())));
        }
        Ok(DisutilityVector { n, values })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn men(&self) -> &[Rational] {
        &self.values[..self.n]
    }

    pub fn women(&self) -> &[Rational] {
        &self.values[self.n..]
    }

    pub fn get(&self, agent: Agent) -> &Rational {
        &self.values[agent.slot(self.n)]
    }

    /// Components sorted nonincreasingly.
    pub fn sorted_desc(&self) -> Vec<Rational> {
        sorted_desc(&self.values)
    }

    pub fn sum(&self) -> Rational {
        self.values.iter().sum()
    }

    pub fn max(&self) -> Rational {
        self.values.iter().max().cloned().unwrap_or_else(|| int(0))
    }
}

pub(crate) fn sorted_desc(values: &[Rational]) -> Vec<Rational> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.cmp(a));
    v
}

pub fn disutility_vector(inst: &Instance, dfun: &DisutilityFunction, m: &Matching) -> Result<DisutilityVector> {
    check_size(inst, m)?;
    let n = inst.n();
    let mut values = Vec::with_capacity(2 * n);
    for man in 0..n {
        values.push(dfun.value(inst.man_rank(man, m.wife(man)))?);
    }
    for woman in 0..n {
        values.push(dfun.value(inst.woman_rank(woman, m.husband(woman)))?);
    }
    DisutilityVector::new(n, values)
}

/// `sum_i lambda_i * v_(i)` with `v` sorted nonincreasingly.
pub fn ggi(weights: &GgiWeights, values: &[Rational]) -> Result<Rational> {
    if weights.len() != values.len() {
        return Err(Error::arg(format!(
            "weight vector has {} entries but the disutility vector has {}",
            weights.len(),
            values.len()
        )));
    }
    Ok(ggi_sorted(weights.as_slice(), &sorted_desc(values)))
}

/// Weighted sum over an already sorted prefix; missing weights count as zero.
pub(crate) fn ggi_sorted(lambda: &[Rational], sorted: &[Rational]) -> Rational {
    lambda
        .iter()
        .zip(sorted)
        .fold(int(0), |acc, (l, v)| acc + l * v)
}

/// Aggregators over a disutility vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Criterion {
    Utilitarian,
    Egalitarian,
    SexEqual,
    Balanced,
    Ggi(GgiWeights),
}

impl Criterion {
    pub fn name(&self) -> &'static str {
        match self {
            Criterion::Utilitarian => "utilitarian",
            Criterion::Egalitarian => "egalitarian",
            Criterion::SexEqual => "sex_equal",
            Criterion::Balanced => "balanced",
            Criterion::Ggi(_) => "ggi",
        }
    }

    pub fn apply(&self, v: &DisutilityVector) -> Result<Rational> {
        let men: Rational = v.men().iter().sum();
        let women: Rational = v.women().iter().sum();
        Ok(match self {
            Criterion::Utilitarian => men + women,
            Criterion::Egalitarian => v.max(),
            Criterion::SexEqual => {
                if men > women {
                    men - women
                } else {
                    women - men
                }
            }
            Criterion::Balanced => men.max(women),
            Criterion::Ggi(w) => ggi(w, v.values())?,
        })
    }
}

pub fn evaluate(criterion: &Criterion, inst: &Instance, dfun: &DisutilityFunction, m: &Matching) -> Result<Rational> {
    criterion.apply(&disutility_vector(inst, dfun, m)?)
}
