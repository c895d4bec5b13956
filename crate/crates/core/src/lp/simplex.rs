//! Dense two-phase primal simplex over a generic scalar.
//!
//! Pivoting uses the most negative reduced cost and switches to Bland's
//! smallest-index rule while the method is stuck on degenerate pivots, which
//! rules out cycling.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::{LinearProgram, Sense};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub trait LpScalar:
    Clone
    + PartialOrd
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Strictly positive beyond the tolerance.
    fn is_pos(&self) -> bool;
    /// Strictly negative beyond the tolerance.
    fn is_neg(&self) -> bool;
    fn is_negligible(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
}

const EPS: f64 = 1e-9;

impl LpScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        crate::rational::to_f64(r)
    }
    fn is_pos(&self) -> bool {
        *self > EPS
    }
    fn is_neg(&self) -> bool {
        *self < -EPS
    }
}

impl LpScalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

/// How an original variable is expressed through nonnegative columns.
enum Map<T> {
    /// `x = offset + col`
    Shift(usize, T),
    /// `x = offset - col`
    Mirror(usize, T),
    /// `x = pos - neg`
    Split(usize, usize),
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    /// Reduced costs, with the negated objective value in the last entry.
    obj: Vec<T>,
    basis: Vec<usize>,
    width: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl<T: LpScalar> Tableau<T> {
    fn rhs(&self, r: usize) -> &T {
        &self.rows[r][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        self.rows[r][c] = T::one();
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<T>| {
            let f = row[c].clone();
            if f == T::zero() {
                return;
            }
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if *pv != T::zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            row[c] = T::zero();
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    fn set_costs(&mut self, cost: &[T]) {
        let mut obj: Vec<T> = cost.to_vec();
        obj.push(T::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb == T::zero() {
                continue;
            }
            for (v, a) in obj.iter_mut().zip(&self.rows[r]) {
                *v = v.clone() - cb.clone() * a.clone();
            }
        }
        self.obj = obj;
    }

    fn optimize(&mut self, allowed: &[bool], max_iter: usize) -> Result<Outcome> {
        let mut degenerate_streak = 0usize;
        for _ in 0..max_iter {
            let bland = degenerate_streak > 10;
            let mut entering: Option<usize> = None;
            for j in 0..self.width {
                if !allowed[j] || !self.obj[j].is_neg() {
                    continue;
                }
                match entering {
                    None => entering = Some(j),
                    Some(e) if !bland && self.obj[j] < self.obj[e] => entering = Some(j),
                    _ => {}
                }
                if bland {
                    break;
                }
            }
            let Some(c) = entering else {
                return Ok(Outcome::Optimal);
            };

            let mut leaving: Option<(usize, T)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][c];
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.rhs(r).clone() / a.clone();
                let better = match &leaving {
                    None => true,
                    Some((lr, best)) => {
                        let diff = ratio.clone() - best.clone();
                        diff.is_neg() || (diff.is_negligible() && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            let Some((r, ratio)) = leaving else {
                return Ok(Outcome::Unbounded);
            };
            if ratio.is_pos() {
                degenerate_streak = 0;
            } else {
                degenerate_streak += 1;
            }
            self.pivot(r, c);
        }
        Err(Error::Solver(format!("simplex did not converge within {max_iter} pivots")))
    }
}

/// Solves `lp` to optimality, returning the value of every original variable.
pub(super) fn solve<T: LpScalar>(lp: &LinearProgram) -> Result<Vec<T>> {
    // Nonnegative columns for the original variables.
    let mut maps = Vec::with_capacity(lp.variables.len());
    let mut ncols = 0usize;
    let mut bound_rows: Vec<(usize, T)> = Vec::new();
    for v in &lp.variables {
        match (&v.lower, &v.upper) {
            (Some(l), u) => {
                let l = T::from_rational(l);
                if let Some(u) = u {
                    let span = T::from_rational(u) - l.clone();
                    if span.is_neg() {
                        return Err(Error::Internal(format!("variable {} has empty bounds", v.name)));
                    }
                    bound_rows.push((ncols, span));
                }
                maps.push(Map::Shift(ncols, l));
                ncols += 1;
            }
            (None, Some(u)) => {
                maps.push(Map::Mirror(ncols, T::from_rational(u)));
                ncols += 1;
            }
            (None, None) => {
                maps.push(Map::Split(ncols, ncols + 1));
                ncols += 2;
            }
        }
    }
    let structural = ncols;

    // Rows over structural columns, then sign-normalized so every right-hand side is nonnegative.
    struct Row<T> {
        coef: Vec<(usize, T)>,
        sense: Sense,
        rhs: T,
    }
    let mut rows: Vec<Row<T>> = Vec::new();
    for c in &lp.constraints {
        let mut coef: Vec<(usize, T)> = Vec::new();
        let mut rhs = T::from_rational(&c.rhs);
        for (j, a) in &c.terms {
            let a = T::from_rational(a);
            match &maps[*j] {
                Map::Shift(col, off) => {
                    rhs = rhs - a.clone() * off.clone();
                    coef.push((*col, a));
                }
                Map::Mirror(col, off) => {
                    rhs = rhs - a.clone() * off.clone();
                    coef.push((*col, -a));
                }
                Map::Split(p, n) => {
                    coef.push((*p, a.clone()));
                    coef.push((*n, -a));
                }
            }
        }
        rows.push(Row {
            coef,
            sense: c.sense,
            rhs,
        });
    }
    for (col, span) in bound_rows {
        rows.push(Row {
            coef: vec![(col, T::one())],
            sense: Sense::Le,
            rhs: span,
        });
    }
    for row in rows.iter_mut() {
        let flip = row.rhs.is_neg() || (row.sense == Sense::Ge && !row.rhs.is_pos());
        if flip {
            row.rhs = -row.rhs.clone();
            for (_, a) in row.coef.iter_mut() {
                *a = -a.clone();
            }
            row.sense = match row.sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
    }

    let slacks = rows.iter().filter(|r| r.sense != Sense::Eq).count();
    let artificials = rows.iter().filter(|r| r.sense != Sense::Le).count();
    let width = structural + slacks + artificials;
    let m = rows.len();
    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        obj: Vec::new(),
        basis: Vec::with_capacity(m),
        width,
    };
    let mut next_slack = structural;
    let mut next_art = structural + slacks;
    for row in rows {
        let mut dense = vec![T::zero(); width + 1];
        for (j, a) in row.coef {
            dense[j] = dense[j].clone() + a;
        }
        dense[width] = row.rhs;
        match row.sense {
            Sense::Le => {
                dense[next_slack] = T::one();
                tab.basis.push(next_slack);
                next_slack += 1;
            }
            Sense::Ge => {
                dense[next_slack] = -T::one();
                next_slack += 1;
                dense[next_art] = T::one();
                tab.basis.push(next_art);
                next_art += 1;
            }
            Sense::Eq => {
                dense[next_art] = T::one();
                tab.basis.push(next_art);
                next_art += 1;
            }
        }
        tab.rows.push(dense);
    }
    let is_art = |j: usize| j >= structural + slacks;
    let max_iter = 50_000 + 50 * (m + width);

    if artificials > 0 {
        let cost: Vec<T> = (0..width).map(|j| if is_art(j) { T::one() } else { T::zero() }).collect();
        tab.set_costs(&cost);
        let allowed = vec![true; width];
        tab.optimize(&allowed, max_iter)?;
        let phase_one = -tab.obj[width].clone();
        if phase_one.is_pos() {
            return Err(Error::Internal("linear program is infeasible".into()));
        }
        for r in 0..m {
            if !is_art(tab.basis[r]) {
                continue;
            }
            if let Some(c) = (0..structural + slacks).find(|&j| !tab.rows[r][j].is_negligible()) {
                tab.pivot(r, c);
            }
        }
    }

    let mut cost = vec![T::zero(); width];
    for (j, a) in &lp.objective {
        let a = T::from_rational(a);
        match &maps[*j] {
            Map::Shift(col, _) => cost[*col] = cost[*col].clone() + a,
            Map::Mirror(col, _) => cost[*col] = cost[*col].clone() - a,
            Map::Split(p, n) => {
                cost[*p] = cost[*p].clone() + a.clone();
                cost[*n] = cost[*n].clone() - a;
            }
        }
    }
    tab.set_costs(&cost);
    let allowed: Vec<bool> = (0..width).map(|j| !is_art(j)).collect();
    if let Outcome::Unbounded = tab.optimize(&allowed, max_iter)? {
        return Err(Error::Internal("linear program is unbounded".into()));
    }

    let mut col_value = vec![T::zero(); width];
    for (r, &b) in tab.basis.iter().enumerate() {
        col_value[b] = tab.rows[r][width].clone();
    }
    Ok(maps
        .into_iter()
        .map(|map| match map {
            Map::Shift(c, off) => off + col_value[c].clone(),
            Map::Mirror(c, off) => off - col_value[c].clone(),
            Map::Split(p, n) => col_value[p].clone() - col_value[n].clone(),
        })
        .collect())
}
