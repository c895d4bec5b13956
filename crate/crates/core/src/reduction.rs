//! Min 2-SAT to GGI stable marriage: one rotation per variable, fictitious
//! agents that pin each clause's decisive agents to known ranks, and weights
//! from which the number of unsatisfied clauses can be read off the GGI value.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Agent, DisutilityFunction, GgiWeights, Instance, Side};
use crate::rational::{format_rational, int, pow, Rational};
use crate::rotation::{Rotation, RotationId, RotationPoset, RotationSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// 0-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn eval(&self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "v{}", self.var + 1)
        } else {
            write!(f, "¬v{}", self.var + 1)
        }
    }
}

/// A conjunction of clauses with one or two literals each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSatInstance {
    pub n_vars: usize,
    pub clauses: Vec<Vec<Literal>>,
}

impl TwoSatInstance {
    pub fn new(n_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        for (j, c) in clauses.iter().enumerate() {
            if c.is_empty() || c.len() > 2 {
                return Err(Error::arg(format!("clause {} has {} literals", j + 1, c.len())));
            }
            if let Some(l) = c.iter().find(|l| l.var >= n_vars) {
                return Err(Error::arg(format!("clause {} uses variable {} of {n_vars}", j + 1, l.var + 1)));
            }
        }
        Ok(TwoSatInstance { n_vars, clauses })
    }

    /// Builds from signed 1-based literals, DIMACS style.
    pub fn from_signed(n_vars: usize, clauses: &[Vec<i64>]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&l| {
                        if l == 0 {
                            return Err(Error::arg("literal 0"));
                        }
                        Ok(Literal {
                            var: (l.unsigned_abs() - 1) as usize,
                            positive: l > 0,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_vars, clauses)
    }

    pub fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clause_satisfied(&self, j: usize, assignment: &[bool]) -> bool {
        self.clauses[j].iter().any(|l| l.eval(assignment))
    }

    pub fn count_unsatisfied(&self, assignment: &[bool]) -> usize {
        (0..self.n_clauses()).filter(|&j| !self.clause_satisfied(j, assignment)).count()
    }

    /// Distinct clauses in which each variable appears.
    fn clause_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_vars];
        for c in &self.clauses {
            let mut vars: Vec<usize> = c.iter().map(|l| l.var).collect();
            vars.dedup();
            for v in vars {
                counts[v] += 1;
            }
        }
        counts
    }

    /// True when every clause has two literals and every variable occurs in at
    /// least two clauses.
    pub fn is_preprocessed(&self) -> bool {
        self.clauses.iter().all(|c| c.len() == 2) && self.clause_counts().iter().all(|&c| c >= 2)
    }

    /// Reads DIMACS CNF restricted to clauses of one or two literals.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current: Vec<i64> = Vec::new();
        let mut current_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(Error::parse(line_no, "expected `p cnf <vars> <clauses>`"));
                }
                let v = parts[2].parse().map_err(|_| Error::parse(line_no, "bad variable count"))?;
                let c = parts[3].parse().map_err(|_| Error::parse(line_no, "bad clause count"))?;
                header = Some((v, c));
                continue;
            }
            let Some((n_vars, _)) = header else {
                return Err(Error::parse(line_no, "clause before the `p cnf` header"));
            };
            for tok in line.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad literal {tok:?}")))?;
                if current.is_empty() {
                    current_line = line_no;
                }
                if lit == 0 {
                    if current.is_empty() {
                        return Err(Error::parse(line_no, "empty clause"));
                    }
                    if current.len() > 2 {
                        return Err(Error::parse(current_line, "clause with more than two literals"));
                    }
                    clauses.push(std::mem::take(&mut current));
                } else {
                    if lit.unsigned_abs() as usize > n_vars {
                        return Err(Error::parse(line_no, format!("literal {lit} exceeds {n_vars} variables")));
                    }
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            return Err(Error::parse(current_line, "clause not terminated by 0"));
        }
        let Some((n_vars, n_clauses)) = header else {
            return Err(Error::parse(1, "missing `p cnf` header"));
        };
        if clauses.len() != n_clauses {
            return Err(Error::parse(
                text.lines().count().max(1),
                format!("header announces {n_clauses} clauses, found {}", clauses.len()),
            ));
        }
        Self::from_signed(n_vars, &clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.n_vars, self.n_clauses());
        for c in &self.clauses {
            for l in c {
                let v = (l.var + 1) as i64;
                out.push_str(&format!("{} ", if l.positive { v } else { -v }));
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Outcome of [`preprocess_2sat`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preprocessed {
    pub instance: TwoSatInstance,
    /// Original index of every remaining variable.
    pub original_var: Vec<usize>,
    /// Variables fixed during preprocessing, with their value.
    pub fixed: Vec<(usize, bool)>,
    /// Clauses removed because all their literals were fixed to false.
    pub dropped_unsatisfied: usize,
    /// Clauses removed because a fixed literal made them true.
    pub dropped_satisfied: usize,
}

/// Repeatedly fixes every variable confined to a single clause so that its
/// literals there are false, then duplicates the literal of unit clauses.
pub fn preprocess_2sat(raw: &TwoSatInstance) -> Result<Preprocessed> {
    let mut clauses: Vec<Vec<Literal>> = raw.clauses.clone();
    let mut fixed = Vec::new();
    let mut dropped_unsatisfied = 0;
    let mut dropped_satisfied = 0;
    loop {
        let tmp = TwoSatInstance {
            n_vars: raw.n_vars,
            clauses: clauses.clone(),
        };
        let counts = tmp.clause_counts();
        let Some(var) = (0..raw.n_vars).find(|&v| counts[v] == 1) else {
            break;
        };
        let j = clauses.iter().position(|c| c.iter().any(|l| l.var == var)).expect("counted");
        let lits: Vec<Literal> = clauses[j].iter().filter(|l| l.var == var).copied().collect();
        // A variable appearing with both signs leaves the clause true whatever its value.
        if lits.iter().any(|l| l.positive) && lits.iter().any(|l| !l.positive) {
            fixed.push((var, false));
            clauses.remove(j);
            dropped_satisfied += 1;
            continue;
        }
        fixed.push((var, !lits[0].positive));
        clauses[j].retain(|l| l.var != var);
        if clauses[j].is_empty() {
            clauses.remove(j);
            dropped_unsatisfied += 1;
        }
    }
    let counts = TwoSatInstance {
        n_vars: raw.n_vars,
        clauses: clauses.clone(),
    }
    .clause_counts();
    let original_var: Vec<usize> = (0..raw.n_vars).filter(|&v| counts[v] > 0).collect();
    let mut new_index = vec![usize::MAX; raw.n_vars];
    for (i, &v) in original_var.iter().enumerate() {
        new_index[v] = i;
    }
    let clauses: Vec<Vec<Literal>> = clauses
        .into_iter()
        .map(|c| {
            let mut c: Vec<Literal> = c
                .into_iter()
                .map(|l| Literal {
                    var: new_index[l.var],
                    positive: l.positive,
                })
                .collect();
            if c.len() == 1 {
                c.push(c[0]);
            }
            c
        })
        .collect();
    if clauses.is_empty() {
        return Err(Error::EmptyReduction);
    }
    Ok(Preprocessed {
        instance: TwoSatInstance {
            n_vars: original_var.len(),
            clauses,
        },
        original_var,
        fixed,
        dropped_unsatisfied,
        dropped_satisfied,
    })
}

/// One literal occurrence: clause `clause`, variable `var`, `primed` for the
/// second occurrence of a variable repeated within one clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Occurrence {
    var: usize,
    clause: usize,
    primed: bool,
    positive: bool,
}

/// Generated instance with everything needed to decode GGI values.
#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub instance: Instance,
    pub dfun: DisutilityFunction,
    pub weights: GgiWeights,
    pub n_vars: usize,
    pub n_clauses: usize,
    /// Rotation carried by each variable.
    pub variable_rotation: Vec<Rotation>,
    /// Id in the built rotation poset of each variable's rotation.
    pub variable_rotation_id: Vec<RotationId>,
    /// The two decisive agents of each clause.
    pub decisive_agents: Vec<[Agent; 2]>,
    /// Display name of every man, then of every woman.
    pub labels: Vec<String>,
    pub delta_u: Rational,
    pub delta_l: Rational,
    pub formula: TwoSatInstance,
}

/// Builds the stable marriage instance of a preprocessed formula with at least
/// two clauses, and checks that its rotations are exactly one isolated rotation
/// per variable.
pub fn reduce(ts: &TwoSatInstance) -> Result<ReductionOutput> {
    if !ts.is_preprocessed() {
        return Err(Error::arg(
            "formula must have two literals per clause and every variable in two clauses",
        ));
    }
    let nc = ts.n_clauses();
    if nc < 2 {
        return Err(Error::arg("at least two clauses are required"));
    }
    let n = 4 * nc;
    let fict = 2 * nc;

    let mut occurrences = Vec::with_capacity(2 * nc);
    for (j, c) in ts.clauses.iter().enumerate() {
        let repeated = c[0].var == c[1].var;
        for (pos, l) in c.iter().enumerate() {
            occurrences.push(Occurrence {
                var: l.var,
                clause: j,
                primed: repeated && pos == 1,
                positive: l.positive,
            });
        }
    }
    occurrences.sort();
    // Agent index of occurrence `o` on either side.
    let index_of = |o: usize| fict + o;

    let mut men_head: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut women_head: Vec<Vec<usize>> = vec![Vec::new(); n];
    for j in 0..nc {
        for k in [2 * j, 2 * j + 1] {
            men_head[k] = vec![k];
            women_head[k] = vec![k];
        }
    }
    let prefix = |j: usize| (0..2 * (j + 1)).collect::<Vec<usize>>();
    let mut variable_rotation = Vec::with_capacity(ts.n_vars);
    let mut decisive: Vec<Vec<Agent>> = vec![Vec::new(); nc];
    for var in 0..ts.n_vars {
        let occ: Vec<usize> = (0..occurrences.len()).filter(|&o| occurrences[o].var == var).collect();
        let r = occ.len();
        let mut pairs = Vec::with_capacity(r);
        for k in 0..r {
            let o = occ[k];
            let me = index_of(o);
            let next = index_of(occ[(k + 1) % r]);
            let prev = index_of(occ[(k + r - 1) % r]);
            let Occurrence { clause, positive, .. } = occurrences[o];
            let (mut man_list, mut woman_list) = (Vec::new(), Vec::new());
            if positive {
                man_list.extend(prefix(clause));
                decisive[clause].push(Agent::man(me));
            } else {
                woman_list.extend(prefix(clause));
                decisive[clause].push(Agent::woman(me));
            }
            man_list.extend([me, next]);
            woman_list.extend([prev, me]);
            men_head[me] = man_list;
            women_head[me] = woman_list;
            pairs.push((me, me));
        }
        variable_rotation.push(Rotation::new(pairs));
    }
    let complete = |head: Vec<usize>| {
        let mut list = head;
        let mut seen = vec![false; n];
        for &x in &list {
            seen[x] = true;
        }
        list.extend((0..n).filter(|&x| !seen[x]));
        list
    };
    let men: Vec<Vec<usize>> = men_head.into_iter().map(complete).collect();
    let women: Vec<Vec<usize>> = women_head.into_iter().map(complete).collect();
    let instance = Instance::new(men, women)?;

    let nci = nc as i64;
    let mut table = vec![int(0), int(1)];
    for j in 1..=nc {
        let base = int(j as i64 + 1);
        table.push(base.clone());
        table.push(base + pow(nci, -(j as i32)));
    }
    let top = table.last().cloned().expect("nonempty");
    for i in (2 * nc + 3)..=n {
        table.push(&top + int((i - 2 * nc - 2) as i64));
    }
    let dfun = DisutilityFunction::table(table)?;

    let mut lambda = vec![int(0); 2 * n];
    for j in 1..=nc {
        lambda[2 * (nc - j)] = pow(nci, j as i32 + 1);
        lambda[2 * (nc - j) + 1] = pow(nci, j as i32);
    }
    let weights = GgiWeights::new(lambda)?;

    let mut delta_u = int(0);
    for j in 1..=nc {
        delta_u += (pow(nci, j as i32) + pow(nci, j as i32 + 1)) * dfun.value(2 * j + 2)?;
    }
    let delta_l = &delta_u - int(nci * (nci + 1));

    let decisive_agents = decisive
        .into_iter()
        .map(|d| {
            let mut d = d;
            d.sort();
            [d[0], d[1]]
        })
        .collect();

    let mut labels = Vec::with_capacity(2 * n);
    for side in ["m", "w"] {
        for j in 0..nc {
            labels.push(format!("{side}{}", j + 1));
            labels.push(format!("{side}{}'", j + 1));
        }
        for o in &occurrences {
            let prime = if o.primed { "'" } else { "" };
            labels.push(format!("{side}({},{}){prime}", o.var + 1, o.clause + 1));
        }
    }

    let poset = RotationPoset::build(&instance);
    if poset.len() != ts.n_vars || !poset.immediate_edges().is_empty() {
        return Err(Error::Internal(format!(
            "generated instance has {} rotations and {} precedence edges, expected {} isolated rotations",
            poset.len(),
            poset.immediate_edges().len(),
            ts.n_vars
        )));
    }
    let variable_rotation_id = variable_rotation
        .iter()
        .map(|rho| {
            poset
                .id_of(rho)
                .ok_or_else(|| Error::Internal(format!("variable rotation {} not found", rho.label())))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ReductionOutput {
        instance,
        dfun,
        weights,
        n_vars: ts.n_vars,
        n_clauses: nc,
        variable_rotation,
        variable_rotation_id,
        decisive_agents,
        labels,
        delta_u,
        delta_l,
        formula: ts.clone(),
    })
}

impl ReductionOutput {
    pub fn label(&self, agent: Agent) -> &str {
        &self.labels[agent.slot(self.instance.n())]
    }

    /// Truth assignment of a rotation set: a variable is true iff its rotation is taken.
    pub fn assignment_of(&self, set: &RotationSet) -> Vec<bool> {
        self.variable_rotation_id.iter().map(|&id| set.contains(id)).collect()
    }

    /// Rotation set of a truth assignment.
    pub fn rotations_of(&self, assignment: &[bool]) -> RotationSet {
        let mut set = RotationSet::empty(self.n_vars);
        for (v, &on) in assignment.iter().enumerate() {
            if on {
                set.insert(self.variable_rotation_id[v]);
            }
        }
        set
    }

    /// JSON sidecar with the decoding data.
    pub fn sidecar(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct DecisiveOut {
            clause: usize,
            agents: Vec<String>,
            indices: Vec<[usize; 2]>,
        }
        let n = self.instance.n();
        let side_code = |a: &Agent| match a.side {
            Side::Man => 0,
            Side::Woman => 1,
        };
        let decisive: Vec<DecisiveOut> = self
            .decisive_agents
            .iter()
            .enumerate()
            .map(|(j, ds)| DecisiveOut {
                clause: j + 1,
                agents: ds.iter().map(|a| format!("{a} {}", self.label(*a))).collect(),
                indices: ds.iter().map(|a| [side_code(a), a.index + 1]).collect(),
            })
            .collect();
        let table: Vec<String> = (1..=n)
            .map(|r| format_rational(&self.dfun.value(r).expect("table covers n")))
            .collect();
        serde_json::json!({
            "n_vars": self.n_vars,
            "n_clauses": self.n_clauses,
            "agents_per_side": n,
            "disutility": table,
            "weights": self.weights.as_slice().iter().map(format_rational).collect::<Vec<_>>(),
            "delta_u": format_rational(&self.delta_u),
            "delta_l": format_rational(&self.delta_l),
            "decisive_agents": decisive,
            "variable_rotations": self.variable_rotation.iter().map(|r| r.label()).collect::<Vec<_>>(),
            "labels": {
                "men": self.labels[..n].to_vec(),
                "women": self.labels[n..].to_vec(),
            },
            "formula": self.formula.to_dimacs(),
        })
    }
}

/// `⌊(Δ_u − value) / (n_c + 1)⌋`.
pub fn unsat_count_from_ggi(out: &ReductionOutput, value: &Rational) -> Result<usize> {
    let gap = &out.delta_u - value;
    if gap.is_negative() {
        return Err(Error::arg("GGI value exceeds the upper bound Δ_u"));
    }
    let q = gap / int(out.n_clauses as i64 + 1);
    let floor = q.numer().div_floor(q.denom());
    floor
        .to_usize()
        .ok_or_else(|| Error::Internal("unsatisfied clause count does not fit".into()))
}
