//! Preference profiles, disutility functions and GGI weight vectors.
//!
//! Agents are 0-based inside the crate; every textual or JSON surface is 1-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, parse_rational, ratio, Rational};

/// Which side of the market an agent belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Man,
    Woman,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Man => Side::Woman,
            Side::Woman => Side::Man,
        }
    }
}

/// A man or a woman, 0-based index within its side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Agent {
    pub side: Side,
    pub index: usize,
}

impl Agent {
    pub fn man(index: usize) -> Self {
        Agent { side: Side::Man, index }
    }

    pub fn woman(index: usize) -> Self {
        Agent { side: Side::Woman, index }
    }

    /// Position in the disutility vector layout (men first, then women).
    pub fn slot(self, n: usize) -> usize {
        match self.side {
            Side::Man => self.index,
            Side::Woman => n + self.index,
        }
    }

    pub fn from_slot(slot: usize, n: usize) -> Self {
        if slot < n {
            Agent::man(slot)
        } else {
            Agent::woman(slot - n)
        }
    }
}

impl std::fmt::Display for Agent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.side {
            Side::Man => write!(f, "m{}", self.index + 1),
            Side::Woman => write!(f, "w{}", self.index + 1),
        }
    }
}

/// A complete, strict, balanced stable marriage instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    men_prefs: Vec<Vec<usize>>,
    women_prefs: Vec<Vec<usize>>,
    men_rank: Vec<Vec<usize>>,
    women_rank: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    n: usize,
    men: Vec<Vec<usize>>,
    women: Vec<Vec<usize>>,
}

impl Instance {
    /// Builds an instance from 0-based preference lists (best first).
    pub fn new(men_prefs: Vec<Vec<usize>>, women_prefs: Vec<Vec<usize>>) -> Result<Self> {
        let n = men_prefs.len();
        if n == 0 {
            return Err(Error::arg("instance must have at least one agent per side"));
        }
        if women_prefs.len() != n {
            return Err(Error::arg(format!(
                "{} men but {} women",
                n,
                women_prefs.len()
            )));
        }
        let men_rank = inverse_tables(&men_prefs, n, "man")?;
        let women_rank = inverse_tables(&women_prefs, n, "woman")?;
        Ok(Instance {
            n,
            men_prefs,
            women_prefs,
            men_rank,
            women_rank,
        })
    }

    /// Builds an instance from 1-based preference lists, as written in files.
    pub fn from_one_based(men: &[Vec<usize>], women: &[Vec<usize>]) -> Result<Self> {
        let shift = |rows: &[Vec<usize>], who: &str| -> Result<Vec<Vec<usize>>> {
            rows.iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .map(|&v| {
                            v.checked_sub(1).ok_or_else(|| {
                                Error::arg(format!("{who} {}: index 0 is out of range", i + 1))
                            })
                        })
                        .collect()
                })
                .collect()
        };
        Instance::new(shift(men, "man")?, shift(women, "woman")?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Disutility vector length, `2n`.
    pub fn agents(&self) -> usize {
        2 * self.n
    }

    pub fn men_prefs(&self) -> &[Vec<usize>] {
        &self.men_prefs
    }

    pub fn women_prefs(&self) -> &[Vec<usize>] {
        &self.women_prefs
    }

    /// 1-based rank of woman `w` in man `m`'s list.
    pub fn man_rank(&self, m: usize, w: usize) -> usize {
        self.men_rank[m][w] + 1
    }

    /// 1-based rank of man `m` in woman `w`'s list.
    pub fn woman_rank(&self, w: usize, m: usize) -> usize {
        self.women_rank[w][m] + 1
    }

    /// 1-based rank that `agent` gives to `partner` (an index on the other side).
    pub fn rank_of(&self, agent: Agent, partner: usize) -> usize {
        match agent.side {
            Side::Man => self.man_rank(agent.index, partner),
            Side::Woman => self.woman_rank(agent.index, partner),
        }
    }

    /// True iff man `m` strictly prefers woman `a` to woman `b`.
    pub fn man_prefers(&self, m: usize, a: usize, b: usize) -> bool {
        self.men_rank[m][a] < self.men_rank[m][b]
    }

    /// True iff woman `w` strictly prefers man `a` to man `b`.
    pub fn woman_prefers(&self, w: usize, a: usize, b: usize) -> bool {
        self.women_rank[w][a] < self.women_rank[w][b]
    }

    /// Parses the text format, or its JSON mirror when the first non-blank
    /// character is `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return Self::parse_json(text);
        }
        let mut rows: Vec<(usize, Vec<usize>)> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut row = Vec::new();
            for tok in line.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(no + 1, format!("not a positive integer: {tok:?}")))?;
                row.push(v);
            }
            rows.push((no + 1, row));
        }
        let Some((first_line, header)) = rows.first() else {
            return Err(Error::parse(1, "empty instance"));
        };
        if header.len() != 1 || header[0] == 0 {
            return Err(Error::parse(*first_line, "first line must be a single positive count n"));
        }
        let n = header[0];
        if rows.len() != 2 * n + 1 {
            let line = rows.last().map(|r| r.0).unwrap_or(1);
            return Err(Error::parse(
                line,
                format!("expected {} preference rows, found {}", 2 * n, rows.len() - 1),
            ));
        }
        let mut lists = Vec::with_capacity(2 * n);
        for (line, row) in &rows[1..] {
            lists.push(check_row(row, n, *line)?);
        }
        let women = lists.split_off(n);
        Instance::new(lists, women)
    }

    fn parse_json(text: &str) -> Result<Self> {
        let raw: InstanceJson = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        if raw.men.len() != raw.n || raw.women.len() != raw.n {
            return Err(Error::parse(1, format!("n = {} does not match list counts", raw.n)));
        }
        let mut men = Vec::with_capacity(raw.n);
        for row in &raw.men {
            men.push(check_row(row, raw.n, 1)?);
        }
        let mut women = Vec::with_capacity(raw.n);
        for row in &raw.women {
            women.push(check_row(row, raw.n, 1)?);
        }
        Instance::new(men, women)
    }

    /// Text format, 1-based.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.men_prefs.iter().chain(&self.women_prefs) {
            let line: Vec<String> = row.iter().map(|v| (v + 1).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let one = |rows: &[Vec<usize>]| -> Vec<Vec<usize>> {
            rows.iter().map(|r| r.iter().map(|v| v + 1).collect()).collect()
        };
        serde_json::to_value(InstanceJson {
            n: self.n,
            men: one(&self.men_prefs),
            women: one(&self.women_prefs),
        })
        .expect("instance serializes")
    }

    /// The instance with the roles of men and women exchanged.
    pub fn swapped(&self) -> Instance {
        Instance {
            n: self.n,
            men_prefs: self.women_prefs.clone(),
            women_prefs: self.men_prefs.clone(),
            men_rank: self.women_rank.clone(),
            women_rank: self.men_rank.clone(),
        }
    }
}

fn check_row(row: &[usize], n: usize, line: usize) -> Result<Vec<usize>> {
    if row.len() != n {
        return Err(Error::parse(line, format!("expected {n} entries, found {}", row.len())));
    }
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for &v in row {
        if v == 0 || v > n {
            return Err(Error::parse(line, format!("index {v} out of range 1..={n}")));
        }
        if seen[v - 1] {
            return Err(Error::parse(line, format!("index {v} repeated; row is not a permutation")));
        }
        seen[v - 1] = true;
        out.push(v - 1);
    }
    Ok(out)
}

fn inverse_tables(prefs: &[Vec<usize>], n: usize, who: &str) -> Result<Vec<Vec<usize>>> {
    prefs
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != n {
                return Err(Error::arg(format!("{who} {} has {} entries, expected {n}", i + 1, row.len())));
            }
            let mut rank = vec![usize::MAX; n];
            for (pos, &v) in row.iter().enumerate() {
                if v >= n || rank[v] != usize::MAX {
                    return Err(Error::arg(format!("{who} {}'s list is not a permutation", i + 1)));
                }
                rank[v] = pos;
            }
            Ok(rank)
        })
        .collect()
}

/// Strictly increasing map from partner rank to dissatisfaction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DisutilityFunction {
    /// `d(i) = i`
    Identity,
    /// `d(i) = (i - 1)^2`
    Squared,
    /// `d(i) = table[i - 1]`; the domain is `1..=table.len()`.
    Table(Vec<Rational>),
}

impl DisutilityFunction {
    /// A table-backed function; rejects empty, negative or non-increasing tables.
    pub fn table(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::arg("disutility table is empty"));
        }
        if values[0] < int(0) {
            return Err(Error::arg("disutility values must be nonnegative"));
        }
        if let Some(i) = values.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::arg(format!(
                "disutility table not strictly increasing at ranks {} and {}",
                i + 1,
                i + 2
            )));
        }
        Ok(DisutilityFunction::Table(values))
    }

    /// Reads one value per line (`#` comments and blank lines ignored).
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            values.push(parse_rational(line).map_err(|e| Error::parse(no + 1, e.to_string()))?);
        }
        Self::table(values)
    }

    /// Largest rank the function is defined for, `None` when unbounded.
    pub fn domain(&self) -> Option<usize> {
        match self {
            DisutilityFunction::Table(t) => Some(t.len()),
            _ => None,
        }
    }

    /// Errors unless ranks `1..=n` are all in the domain.
    pub fn check_covers(&self, n: usize) -> Result<()> {
        match self.domain() {
            Some(len) if len < n => Err(Error::arg(format!(
                "disutility table covers ranks 1..={len} but the instance needs 1..={n}"
            ))),
            _ => Ok(()),
        }
    }

    /// `d(rank)` for a 1-based rank.
    pub fn value(&self, rank: usize) -> Result<Rational> {
        if rank == 0 {
            return Err(Error::arg("ranks start at 1"));
        }
        match self {
            DisutilityFunction::Identity => Ok(int(rank as i64)),
            DisutilityFunction::Squared => {
                let r = rank as i64 - 1;
                Ok(int(r * r))
            }
            DisutilityFunction::Table(t) => t
                .get(rank - 1)
                .cloned()
                .ok_or_else(|| Error::arg(format!("rank {rank} outside disutility table of length {}", t.len()))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DisutilityFunction::Identity => "identity",
            DisutilityFunction::Squared => "squared",
            DisutilityFunction::Table(_) => "table",
        }
    }
}

/// Nonincreasing, nonnegative weight vector of a generalized Gini index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GgiWeights {
    lambda: Vec<Rational>,
    k: usize,
}

impl GgiWeights {
    pub fn new(lambda: Vec<Rational>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::arg("weight vector is empty"));
        }
        let zero = int(0);
        if lambda.iter().any(|l| *l < zero) {
            return Err(Error::arg("weights must be nonnegative"));
        }
        if let Some(i) = lambda.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::arg(format!("weights increase between positions {} and {}", i + 1, i + 2)));
        }
        let k = lambda.iter().rposition(|l| *l > zero).map_or(0, |i| i + 1);
        Ok(GgiWeights { lambda, k })
    }

    /// Classical Gini weights `(2(N - i) + 1) / N^2`, `i = 1..N`.
    pub fn gini(big_n: usize) -> Result<Self> {
        if big_n < 2 || !big_n.is_multiple_of(2) {
            return Err(Error::arg(format!("Gini weights need an even N >= 2, got {big_n}")));
        }
        let nn = (big_n * big_n) as i64;
        let lambda = (1..=big_n)
            .map(|i| ratio(2 * (big_n - i) as i64 + 1, nn))
            .collect();
        Self::new(lambda)
    }

    /// `K` leading ones followed by zeros.
    pub fn head(big_n: usize, k: usize) -> Result<Self> {
        if k > big_n {
            return Err(Error::arg(format!("head:{k} exceeds vector length {big_n}")));
        }
        Self::new((0..big_n).map(|i| int((i < k) as i64)).collect())
    }

    /// All-ones weights (the utilitarian sum).
    pub fn ones(big_n: usize) -> Result<Self> {
        Self::head(big_n, big_n)
    }

    /// One value per line; shorter files are padded with zeros up to `big_n`.
    pub fn parse(text: &str, big_n: usize) -> Result<Self> {
        let mut lambda = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            lambda.push(parse_rational(line).map_err(|e| Error::parse(no + 1, e.to_string()))?);
        }
        if lambda.len() > big_n {
            return Err(Error::arg(format!("{} weights given but N = {big_n}", lambda.len())));
        }
        lambda.resize(big_n, int(0));
        Self::new(lambda)
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.lambda
    }

    /// Number of leading positive weights, `max{i : lambda_i > 0}`.
    pub fn k(&self) -> usize {
        self.k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gini_values() {
        let w = GgiWeights::gini(20).unwrap();
        assert_eq!(w.as_slice()[0], ratio(39, 400));
        assert_eq!(w.as_slice()[19], ratio(1, 400));
        assert_eq!(w.k(), 20);
        let w = GgiWeights::gini(2).unwrap();
        assert_eq!(w.as_slice(), &[ratio(3, 4), ratio(1, 4)]);
        assert!(GgiWeights::gini(3).is_err());
        assert!(GgiWeights::gini(0).is_err());
    }

    #[test]
    fn gini_sums_to_one_and_decreases() {
        for big_n in (2..=60).step_by(2) {
            let w = GgiWeights::gini(big_n).unwrap();
            let total: Rational = w.as_slice().iter().sum();
            assert_eq!(total, int(1));
            assert!(w.as_slice().windows(2).all(|p| p[0] > p[1]));
        }
    }

    #[test]
    fn weights_k_and_validation() {
        let w = GgiWeights::new(vec![int(3), int(1), int(0), int(0)]).unwrap();
        assert_eq!(w.k(), 2);
        assert!(GgiWeights::new(vec![int(1), int(2)]).is_err());
        assert!(GgiWeights::new(vec![int(1), int(-1)]).is_err());
        let padded = GgiWeights::parse("0.5\n# c\n1/4\n", 4).unwrap();
        assert_eq!(padded.as_slice(), &[ratio(1, 2), ratio(1, 4), int(0), int(0)]);
        assert_eq!(GgiWeights::head(4, 1).unwrap().k(), 1);
    }

    #[test]
    fn disutility_values() {
        assert_eq!(DisutilityFunction::Squared.value(3).unwrap(), int(4));
        assert_eq!(DisutilityFunction::Identity.value(1).unwrap(), int(1));
        assert!(DisutilityFunction::Identity.value(0).is_err());
        let t = DisutilityFunction::table(vec![int(0), int(1), int(2), ratio(11, 5)]).unwrap();
        assert_eq!(t.value(4).unwrap(), ratio(11, 5));
        assert!(t.value(5).is_err());
        assert!(DisutilityFunction::table(vec![int(1), int(1)]).is_err());
        assert!(DisutilityFunction::table(vec![int(-1), int(1)]).is_err());
        assert!(t.check_covers(5).is_err());
        assert!(t.check_covers(4).is_ok());
    }

    #[test]
    fn disutility_strictly_monotone_exhaustive() {
        for f in [DisutilityFunction::Identity, DisutilityFunction::Squared] {
            for a in 1..40 {
                for b in a + 1..=40 {
                    assert!(f.value(a).unwrap() < f.value(b).unwrap());
                }
            }
        }
    }

    #[test]
    fn parse_single_agent() {
        let inst = Instance::parse("1\n1\n1\n").unwrap();
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.man_rank(0, 0), 1);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = Instance::parse("3\n1 1 2\n1 2 3\n1 2 3\n1 2 3\n1 2 3\n1 2 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = Instance::parse("2\n1 2\n1 3\n1 2\n1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = Instance::parse("2\n1 2\n2 1\n1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err:?}");
        assert!(Instance::parse("x\n").is_err());
    }

    #[test]
    fn json_mirror_and_text_round_trip() {
        let inst = Instance::parse("# c\n2\n2 1\n1 2\n\n1 2\n2 1\n").unwrap();
        let again = Instance::parse(&inst.to_json().to_string()).unwrap();
        assert_eq!(inst, again);
        assert_eq!(Instance::parse(&inst.to_text()).unwrap(), inst);
        assert!(Instance::parse(r#"{"n":2,"men":[[1,1],[1,2]],"women":[[1,2],[2,1]]}"#).is_err());
    }
}
