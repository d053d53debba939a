//! Dense full tableau over exact rationals.
//!
//! Every tracked variable (structural variables first, then one slack per
//! `<=` row) is stored as an affine function of the current nonbasic
//! variables: `v = value[v] + Σ_j coef[v][j]·t_j` with `t_j >= 0`. Rows of
//! nonbasic variables are unit vectors, so the structural block always gives
//! the full primal point and the columns used by the lexicographic rules.
//!
//! The objective row is kept in minimization form. Lexicographic rules order
//! quantities as `(objective, x_0, x_1, ..., x_{n-1})`; a column is
//! lex-positive when the first nonzero entry of that vector is positive.

use std::cmp::Ordering;

use super::rational::{denominator_lcm, numerator_gcd, Rational};
use super::system::{Constraint, LinearSystem, Objective, Relation};
use super::SimplexError;

/// Where a tableau row came from, used to map multipliers back onto the
/// original system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOrigin {
    /// `factor · (a, b)` of original constraint `index`, where `(a, b)` is
    /// the constraint read in its `<=`-oriented form (`>=` rows negated).
    Constraint { index: usize, factor: Rational },
    /// `x_var <= bound`.
    UpperBound { var: usize },
    /// Gomory cut added in cutting-plane `round`.
    Cut { round: u64 },
    /// Row added by a caller without a mapping back to a system.
    External { label: usize },
}

/// Outcome of one lexicographic dual simplex step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualStep {
    Pivoted { leaving: usize, entering: usize },
    /// Primal feasible: the tableau is lexicographically optimal.
    Optimal,
    /// Tracked row `row` is negative and has no positive coefficient.
    Infeasible { row: usize },
}

/// Outcome of one primal simplex step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimalStep {
    Pivoted { leaving: usize, entering: usize },
    Optimal,
    /// Column `column` improves the objective without bound.
    Unbounded { column: usize },
}

/// Affine definition `b - a·x` of a slack in terms of structural variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlackDef {
    pub a: Vec<Rational>,
    pub b: Rational,
}

#[derive(Debug, Clone)]
pub struct Tableau {
    n: usize,
    coef: Vec<Vec<Rational>>,
    value: Vec<Rational>,
    col_var: Vec<usize>,
    var_col: Vec<Option<usize>>,
    /// Definitions of tracked variables `n..`; index `v - n`.
    slack_def: Vec<SlackDef>,
    origin: Vec<RowOrigin>,
    obj: Vec<Rational>,
    obj_value: Rational,
    pivots: u64,
}

/// Scales `(a, b)` by a positive factor so that every entry is an integer
/// with no common divisor. Returns the scaled row and the factor.
pub(crate) fn integer_scale(a: &[Rational], b: &Rational) -> (Vec<Rational>, Rational, Rational) {
    let lcm = denominator_lcm(a.iter().chain(std::iter::once(b)));
    let lcm = Rational::from_integer(lcm);
    let scaled: Vec<Rational> = a.iter().map(|x| x * &lcm).collect();
    let sb = b * &lcm;
    let g = numerator_gcd(scaled.iter().chain(std::iter::once(&sb)));
    if g <= num_bigint::BigInt::from(1) {
        return (scaled, sb, lcm);
    }
    let g = Rational::from_integer(g);
    let scaled = scaled.iter().map(|x| x / &g).collect();
    (scaled, &sb / &g, &lcm / &g)
}

impl Tableau {
    /// Tableau with every structural variable nonbasic at zero and one slack
    /// per `<=` row. Equalities become two rows, `>=` rows are negated, upper
    /// bounds become rows, and every row is scaled to integer data.
    pub fn from_system(system: &LinearSystem) -> Tableau {
        let n = system.num_vars();
        let mut t = Tableau::empty(n);
        for (index, c) in system.constraints.iter().enumerate() {
            t.push_constraint(index, c);
        }
        for (k, var) in system.variables.iter().enumerate() {
            if let Some(u) = var.upper {
                let mut a = vec![Rational::zero(); n];
                a[k] = Rational::one();
                t.push_row(a, Rational::from(u), RowOrigin::UpperBound { var: k });
            }
        }
        t
    }

    /// Adds constraint `index` of a system, oriented and scaled as in
    /// [`Tableau::from_system`].
    pub(crate) fn push_constraint(&mut self, index: usize, c: &Constraint) {
        let mut a = vec![Rational::zero(); self.n];
        for (v, coeff) in &c.coeffs {
            a[v.0] = coeff.clone();
        }
        let orientations: &[i32] = match c.relation {
            Relation::Le => &[1],
            Relation::Ge => &[-1],
            Relation::Eq => &[1, -1],
        };
        for &o in orientations {
            let sign = Rational::from(o);
            let oa: Vec<Rational> = a.iter().map(|x| x * &sign).collect();
            let ob = &c.rhs * &sign;
            let (sa, sb, scale) = integer_scale(&oa, &ob);
            // factor relative to the <=-oriented constraint
            let factor = if c.relation == Relation::Ge {
                scale
            } else {
                &scale * &sign
            };
            self.push_row(sa, sb, RowOrigin::Constraint { index, factor });
        }
    }

    /// Tableau over `n` structural variables with no rows.
    pub fn empty(n: usize) -> Tableau {
        let mut coef = Vec::with_capacity(n);
        for k in 0..n {
            let mut row = vec![Rational::zero(); n];
            row[k] = Rational::one();
            coef.push(row);
        }
        Tableau {
            n,
            coef,
            value: vec![Rational::zero(); n],
            col_var: (0..n).collect(),
            var_col: (0..n).map(Some).collect(),
            slack_def: Vec::new(),
            origin: Vec::new(),
            obj: vec![Rational::zero(); n],
            obj_value: Rational::zero(),
            pivots: 0,
        }
    }

    /// Adds the row `a·x <= b` (structural coordinates) as a new basic slack.
    /// Returns the tracked index of the slack.
    pub fn push_row(&mut self, a: Vec<Rational>, b: Rational, origin: RowOrigin) -> usize {
        assert_eq!(a.len(), self.n);
        let mut value = b.clone();
        let mut row = vec![Rational::zero(); self.n];
        for (k, ak) in a.iter().enumerate() {
            if ak.is_zero() {
                continue;
            }
            value -= &(ak * &self.value[k]);
            for (j, c) in self.coef[k].iter().enumerate() {
                if !c.is_zero() {
                    row[j] -= &(ak * c);
                }
            }
        }
        self.coef.push(row);
        self.value.push(value);
        self.var_col.push(None);
        self.slack_def.push(SlackDef { a, b });
        self.origin.push(origin);
        self.coef.len() - 1
    }

    /// Adds a row given directly in nonbasic coordinates: the new slack is
    /// `value + Σ_j coef_j·t_j`. Its structural definition is derived from the
    /// definitions of the current nonbasic variables.
    pub(crate) fn push_column_row(
        &mut self,
        value: Rational,
        coef: Vec<Rational>,
        origin: RowOrigin,
    ) -> usize {
        // slack = value + Σ coef_j t_j with t_j = b_j - a_j·x (structural:
        // b = 0, a = -e_k) gives slack = b - a·x.
        let mut a = vec![Rational::zero(); self.n];
        let mut b = value.clone();
        for (j, cj) in coef.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let v = self.col_var[j];
            if v < self.n {
                a[v] -= cj;
            } else {
                let def = &self.slack_def[v - self.n];
                b += cj * &def.b;
                for (k, ak) in def.a.iter().enumerate() {
                    if !ak.is_zero() {
                        a[k] += cj * ak;
                    }
                }
            }
        }
        self.coef.push(coef);
        self.value.push(value);
        self.var_col.push(None);
        self.slack_def.push(SlackDef { a, b });
        self.origin.push(origin);
        self.coef.len() - 1
    }

    /// Removes a basic tracked slack row.
    pub(crate) fn remove_basic_row(&mut self, v: usize) {
        assert!(v >= self.n && self.var_col[v].is_none());
        self.coef.remove(v);
        self.value.remove(v);
        self.var_col.remove(v);
        self.slack_def.remove(v - self.n);
        self.origin.remove(v - self.n);
        for cv in self.col_var.iter_mut() {
            if *cv > v {
                *cv -= 1;
            }
        }
    }

    pub fn num_structural(&self) -> usize {
        self.n
    }

    pub fn num_tracked(&self) -> usize {
        self.coef.len()
    }

    pub fn pivots(&self) -> u64 {
        self.pivots
    }

    pub fn value(&self, v: usize) -> &Rational {
        &self.value[v]
    }

    pub fn row(&self, v: usize) -> &[Rational] {
        &self.coef[v]
    }

    pub fn column_variable(&self, j: usize) -> usize {
        self.col_var[j]
    }

    pub fn is_basic(&self, v: usize) -> bool {
        self.var_col[v].is_none()
    }

    pub fn origin(&self, v: usize) -> Option<&RowOrigin> {
        v.checked_sub(self.n).map(|i| &self.origin[i])
    }

    pub fn slack_definition(&self, v: usize) -> Option<&SlackDef> {
        v.checked_sub(self.n).map(|i| &self.slack_def[i])
    }

    pub fn objective_value(&self) -> &Rational {
        &self.obj_value
    }

    pub fn objective_row(&self) -> &[Rational] {
        &self.obj
    }

    /// Current values of the structural variables.
    pub fn point(&self) -> Vec<Rational> {
        self.value[..self.n].to_vec()
    }

    pub fn is_primal_feasible(&self) -> bool {
        self.value.iter().all(|v| !v.is_negative())
    }

    /// Installs `minimize Σ c_k x_k`.
    pub fn set_min_objective(&mut self, c: &[Rational]) {
        assert_eq!(c.len(), self.n);
        let mut obj = vec![Rational::zero(); self.n];
        let mut val = Rational::zero();
        for (k, ck) in c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            val += ck * &self.value[k];
            for (j, x) in self.coef[k].iter().enumerate() {
                if !x.is_zero() {
                    obj[j] += ck * x;
                }
            }
        }
        self.obj = obj;
        self.obj_value = val;
    }

    /// Installs `objective` (either sense), returning the positive integer
    /// scale applied to it so that the objective row has integer data.
    pub fn set_objective(&mut self, objective: &Objective) -> Rational {
        let max_c = objective.max_form(self.n);
        let lcm = Rational::from_integer(denominator_lcm(&max_c));
        let min_c: Vec<Rational> = max_c.iter().map(|c| -(c * &lcm)).collect();
        self.set_min_objective(&min_c);
        lcm
    }

    /// Entry `i` of column `j` in lexicographic order: 0 is the objective,
    /// `1 + k` is structural variable `k`.
    fn lex_entry(&self, i: usize, j: usize) -> &Rational {
        if i == 0 {
            &self.obj[j]
        } else {
            &self.coef[i - 1][j]
        }
    }

    fn column_lex_sign(&self, j: usize) -> Ordering {
        for i in 0..=self.n {
            let e = self.lex_entry(i, j);
            if !e.is_zero() {
                return if e.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        Ordering::Equal
    }

    /// Every column is lexicographically positive.
    pub fn is_lex_dual_feasible(&self) -> bool {
        (0..self.n).all(|j| self.column_lex_sign(j) == Ordering::Greater)
    }

    /// The vector `(objective, x_0, ..., x_{n-1})` in minimization form. It
    /// strictly increases (lexicographically) with every dual pivot.
    pub fn lex_values(&self) -> Vec<Rational> {
        std::iter::once(self.obj_value.clone())
            .chain(self.value[..self.n].iter().cloned())
            .collect()
    }

    /// Replaces basic variable `r` by nonbasic column `j`.
    pub fn pivot(&mut self, r: usize, j: usize) {
        let alpha = self.coef[r][j].clone();
        assert!(!alpha.is_zero(), "pivot on zero entry");
        let inv = alpha.recip();
        let beta = self.value[r].clone();
        // new representation of t_j: (v_r - beta - Σ_{k≠j} α_rk t_k) / α_rj
        let mut tj_row: Vec<Rational> = self.coef[r].iter().map(|x| -(x * &inv)).collect();
        tj_row[j] = inv.clone();
        let tj_value = -(&beta * &inv);

        let update = |row: &mut Vec<Rational>, value: &mut Rational| {
            let rho = std::mem::take(&mut row[j]);
            if rho.is_zero() {
                row[j] = rho;
                return;
            }
            *value += &rho * &tj_value;
            for (k, x) in row.iter_mut().enumerate() {
                if k != j && !tj_row[k].is_zero() {
                    *x += &rho * &tj_row[k];
                }
            }
            row[j] = &rho * &inv;
        };
        for q in 0..self.coef.len() {
            let (row, value) = (&mut self.coef[q], &mut self.value[q]);
            update(row, value);
        }
        update(&mut self.obj, &mut self.obj_value);

        let entering = self.col_var[j];
        self.col_var[j] = r;
        self.var_col[r] = Some(j);
        self.var_col[entering] = None;
        self.pivots += 1;
    }

    /// Lexicographic dual simplex step. The leaving row is the negative basic
    /// variable of smallest index; the entering column is the lexicographic
    /// minimum of `column / α` over positive `α` in that row.
    pub fn lex_dual_step(&mut self) -> Result<DualStep, SimplexError> {
        if !self.is_lex_dual_feasible() {
            return Err(SimplexError::NotDualFeasible);
        }
        Ok(self.lex_dual_step_unchecked())
    }

    pub(crate) fn lex_dual_step_unchecked(&mut self) -> DualStep {
        let Some(r) = (0..self.coef.len()).find(|&v| self.value[v].is_negative()) else {
            return DualStep::Optimal;
        };
        let mut best: Option<usize> = None;
        for j in 0..self.n {
            if !self.coef[r][j].is_positive() {
                continue;
            }
            best = match best {
                None => Some(j),
                Some(b) => {
                    if self.ratio_cmp(r, j, b) == Ordering::Less {
                        Some(j)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        match best {
            None => DualStep::Infeasible { row: r },
            Some(j) => {
                let entering = self.col_var[j];
                self.pivot(r, j);
                DualStep::Pivoted {
                    leaving: r,
                    entering,
                }
            }
        }
    }

    /// Compares `column_j / α_rj` with `column_l / α_rl` lexicographically.
    fn ratio_cmp(&self, r: usize, j: usize, l: usize) -> Ordering {
        let aj = &self.coef[r][j];
        let al = &self.coef[r][l];
        for i in 0..=self.n {
            let lhs = self.lex_entry(i, j) * al;
            let rhs = self.lex_entry(i, l) * aj;
            match lhs.cmp(&rhs) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        j.cmp(&l)
    }

    /// Primal simplex step minimizing the lexicographic objective with
    /// Bland's rule (smallest variable index among improving columns, then
    /// among tied leaving rows).
    pub fn primal_step(&mut self) -> PrimalStep {
        let entering = (0..self.n)
            .filter(|&j| self.column_lex_sign(j) == Ordering::Less)
            .min_by_key(|&j| self.col_var[j]);
        let Some(j) = entering else {
            return PrimalStep::Optimal;
        };
        let mut best: Option<(usize, Rational)> = None;
        for q in 0..self.coef.len() {
            let c = &self.coef[q][j];
            if !c.is_negative() {
                continue;
            }
            let ratio = &self.value[q] / &-c;
            let better = match &best {
                None => true,
                Some((bq, br)) => ratio < *br || (ratio == *br && q < *bq),
            };
            if better {
                best = Some((q, ratio));
            }
        }
        match best {
            None => PrimalStep::Unbounded { column: j },
            Some((r, _)) => {
                let entering = self.col_var[j];
                self.pivot(r, j);
                PrimalStep::Pivoted {
                    leaving: r,
                    entering,
                }
            }
        }
    }

    /// Runs dual steps until optimal, infeasible, or `limit` pivots.
    pub(crate) fn run_dual(&mut self, limit: u64) -> DualRun {
        let start = self.pivots;
        loop {
            if self.pivots - start >= limit {
                return DualRun::Limit;
            }
            match self.lex_dual_step_unchecked() {
                DualStep::Optimal => return DualRun::Feasible,
                DualStep::Infeasible { row } => return DualRun::Infeasible(row),
                DualStep::Pivoted { .. } => {}
            }
        }
    }

    /// Runs primal steps until optimal, unbounded, or `limit` pivots.
    pub(crate) fn run_primal(&mut self, limit: u64) -> PrimalRun {
        let start = self.pivots;
        loop {
            if self.pivots - start >= limit {
                return PrimalRun::Limit;
            }
            match self.primal_step() {
                PrimalStep::Optimal => return PrimalRun::Optimal,
                PrimalStep::Unbounded { column } => return PrimalRun::Unbounded(column),
                PrimalStep::Pivoted { .. } => {}
            }
        }
    }

    /// Direction in structural space obtained by increasing column `j`.
    pub fn column_direction(&self, j: usize) -> Vec<Rational> {
        (0..self.n).map(|k| self.coef[k][j].clone()).collect()
    }

    /// Nonnegative combination proving infeasibility of tracked row `row`:
    /// `(multiplier, tracked variable)` pairs with `Σ μ_u·u ≡ value[row] < 0`.
    pub(crate) fn infeasibility_combination(&self, row: usize) -> Vec<(Rational, usize)> {
        let mut out = vec![(Rational::one(), row)];
        for j in 0..self.n {
            let c = &self.coef[row][j];
            if !c.is_zero() {
                out.push((-c, self.col_var[j]));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum DualRun {
    Feasible,
    Infeasible(usize),
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PrimalRun {
    Optimal,
    Unbounded(usize),
    Limit,
}
