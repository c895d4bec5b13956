//! Linear programs with rational data, an in-repo simplex solver, and the
//! relaxation/rounding pipeline for the 2-approximation.

mod relaxation;
mod simplex;

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

pub use relaxation::{
    approx_solve, build_relaxation, round_solution, solve_relaxation, ApproxResult, FractionalSolution,
    Relaxation, RelaxationLayout,
};
pub use simplex::LpScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// Solver arithmetic: `Float` uses `f64` with a `1e-9` tolerance, `Exact` uses
/// arbitrary-precision rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMode {
    #[default]
    Float,
    Exact,
}

/// A minimization problem over bounded real variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearProgram {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Vec<(usize, Rational)>,
}

/// Optimal point of a linear program.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub values: Vec<f64>,
    pub objective: f64,
    /// Present when solved in [`SolveMode::Exact`].
    pub exact: Option<ExactLpSolution>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactLpSolution {
    pub values: Vec<Rational>,
    pub objective: Rational,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>, lower: Option<Rational>, upper: Option<Rational>) -> usize {
        self.variables.push(Variable {
            name: name.into(),
            lower,
            upper,
        });
        self.variables.len() - 1
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, Rational)>,
        sense: Sense,
        rhs: Rational,
    ) -> Result<()> {
        if let Some((j, _)) = terms.iter().find(|(j, _)| *j >= self.variables.len()) {
            return Err(Error::arg(format!("constraint refers to unknown variable {j}")));
        }
        self.constraints.push(Constraint {
            name: name.into(),
            terms,
            sense,
            rhs,
        });
        Ok(())
    }

    pub fn set_objective(&mut self, terms: Vec<(usize, Rational)>) -> Result<()> {
        if let Some((j, _)) = terms.iter().find(|(j, _)| *j >= self.variables.len()) {
            return Err(Error::arg(format!("objective refers to unknown variable {j}")));
        }
        self.objective = terms;
        Ok(())
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(usize, Rational)] {
        &self.objective
    }

    /// Objective value at an exact point.
    pub fn objective_at(&self, point: &[Rational]) -> Rational {
        self.objective.iter().map(|(j, c)| c * &point[*j]).sum()
    }

    /// Largest bound or constraint violation at a floating-point point.
    pub fn max_violation(&self, point: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (v, x) in self.variables.iter().zip(point) {
            if let Some(l) = &v.lower {
                worst = worst.max(crate::rational::to_f64(l) - x);
            }
            if let Some(u) = &v.upper {
                worst = worst.max(x - crate::rational::to_f64(u));
            }
        }
        for c in &self.constraints {
            let lhs: f64 = c.terms.iter().map(|(j, a)| crate::rational::to_f64(a) * point[*j]).sum();
            let rhs = crate::rational::to_f64(&c.rhs);
            let gap = match c.sense {
                Sense::Le => lhs - rhs,
                Sense::Ge => rhs - lhs,
                Sense::Eq => (lhs - rhs).abs(),
            };
            worst = worst.max(gap);
        }
        worst
    }

    pub fn solve(&self, mode: SolveMode) -> Result<LpSolution> {
        match mode {
            SolveMode::Float => {
                let values: Vec<f64> = simplex::solve::<f64>(self)?;
                let violation = self.max_violation(&values);
                if violation > 1e-6 {
                    return Err(Error::Solver(format!(
                        "float simplex returned a point violating constraints by {violation:e}"
                    )));
                }
                let objective = self
                    .objective
                    .iter()
                    .map(|(j, c)| crate::rational::to_f64(c) * values[*j])
                    .sum();
                Ok(LpSolution {
                    values,
                    objective,
                    exact: None,
                })
            }
            SolveMode::Exact => {
                let values: Vec<Rational> = simplex::solve::<Rational>(self)?;
                let objective = self.objective_at(&values);
                Ok(LpSolution {
                    values: values.iter().map(crate::rational::to_f64).collect(),
                    objective: crate::rational::to_f64(&objective),
                    exact: Some(ExactLpSolution { values, objective }),
                })
            }
        }
    }

    /// Renders the program in CPLEX LP text format.
    pub fn to_lp_format(&self) -> String {
        let term_list = |terms: &[(usize, Rational)]| {
            if terms.is_empty() {
                return "0".to_string();
            }
            let mut s = String::new();
            for (i, (j, c)) in terms.iter().enumerate() {
                let neg = c < &Rational::from_integer(0.into());
                let mag = format_rational(&if neg { -c.clone() } else { c.clone() });
                let sign = match (i, neg) {
                    (0, false) => "",
                    (0, true) => "- ",
                    (_, false) => " + ",
                    (_, true) => " - ",
                };
                let _ = write!(s, "{sign}{mag} {}", self.variables[*j].name);
            }
            s
        };
        let mut out = String::from("\\ generated linear program\nMinimize\n obj: ");
        out.push_str(&term_list(&self.objective));
        out.push_str("\nSubject To\n");
        for c in &self.constraints {
            let op = match c.sense {
                Sense::Le => "<=",
                Sense::Eq => "=",
                Sense::Ge => ">=",
            };
            let _ = writeln!(out, " {}: {} {op} {}", c.name, term_list(&c.terms), format_rational(&c.rhs));
        }
        out.push_str("Bounds\n");
        for v in &self.variables {
            match (&v.lower, &v.upper) {
                (None, None) => {
                    let _ = writeln!(out, " {} free", v.name);
                }
                (Some(l), None) => {
                    let _ = writeln!(out, " {} >= {}", v.name, format_rational(l));
                }
                (None, Some(u)) => {
                    let _ = writeln!(out, " -inf <= {} <= {}", v.name, format_rational(u));
                }
                (Some(l), Some(u)) => {
                    let _ = writeln!(out, " {} <= {} <= {}", format_rational(l), v.name, format_rational(u));
                }
            }
        }
        out.push_str("End\n");
        out
    }
}
