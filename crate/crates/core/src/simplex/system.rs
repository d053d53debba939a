//! Linear systems over nonnegative variables with exact rational data.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use super::rational::Rational;

/// Index of a variable inside its [`LinearSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    TransitionCount,
    Indicator,
    CapacityZ,
    Auxiliary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    /// Optional integral upper bound. Every variable is bounded below by 0.
    pub upper: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

/// An affine expression `constant + Σ coeff·var`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LinExpr {
    pub terms: BTreeMap<VarId, Rational>,
    pub constant: Rational,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        LinExpr {
            terms: BTreeMap::new(),
            constant: c.into(),
        }
    }

    pub fn var(v: VarId) -> Self {
        let mut e = LinExpr::new();
        e.add_term(v, Rational::one());
        e
    }

    pub fn add_term(&mut self, v: VarId, coeff: impl Into<Rational>) {
        let coeff = coeff.into();
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(v).or_insert_with(Rational::zero);
        *slot += &coeff;
        if slot.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn add_constant(&mut self, c: impl Into<Rational>) {
        self.constant += c.into();
    }

    pub fn add_expr(&mut self, other: &LinExpr, scale: &Rational) {
        for (v, c) in &other.terms {
            self.add_term(*v, c * scale);
        }
        self.constant += &other.constant * scale;
    }

    pub fn scaled(&self, scale: &Rational) -> LinExpr {
        let mut e = LinExpr::new();
        e.add_expr(self, scale);
        e
    }

    pub fn minus(&self, other: &LinExpr) -> LinExpr {
        let mut e = self.clone();
        e.add_expr(other, &-Rational::one());
        e
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = self.constant.clone();
        for (v, c) in &self.terms {
            acc += c * &point[v.0];
        }
        acc
    }

    /// Turns `self REL rhs` into a constraint by moving the constant to the right.
    pub fn into_constraint(
        self,
        relation: Relation,
        rhs: impl Into<Rational>,
        tag: impl Into<String>,
    ) -> Constraint {
        Constraint {
            rhs: rhs.into() - &self.constant,
            coeffs: self.terms,
            relation,
            tag: tag.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: BTreeMap<VarId, Rational>,
    pub relation: Relation,
    pub rhs: Rational,
    /// Origin annotation, e.g. `conservation[A.s0]`.
    pub tag: String,
}

impl Constraint {
    pub fn lhs(&self, point: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(v, c)| c * &point[v.0]).sum()
    }

    pub fn is_satisfied(&self, point: &[Rational]) -> bool {
        self.relation.holds(&self.lhs(point), &self.rhs)
    }

    /// Coefficients and right-hand side with the tag ignored, for deduplication.
    pub fn key(&self) -> (Vec<(VarId, Rational)>, Relation, Rational) {
        (
            self.coeffs.iter().map(|(v, c)| (*v, c.clone())).collect(),
            self.relation,
            self.rhs.clone(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub sense: Sense,
    pub coeffs: BTreeMap<VarId, Rational>,
}

impl Objective {
    pub fn zero() -> Self {
        Objective {
            sense: Sense::Maximize,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn maximize(coeffs: impl IntoIterator<Item = (VarId, Rational)>) -> Self {
        Objective {
            sense: Sense::Maximize,
            coeffs: coeffs.into_iter().collect(),
        }
    }

    pub fn minimize(coeffs: impl IntoIterator<Item = (VarId, Rational)>) -> Self {
        Objective {
            sense: Sense::Minimize,
            coeffs: coeffs.into_iter().collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(v, c)| c * &point[v.0]).sum()
    }

    /// Coefficients of the equivalent maximization objective.
    pub(crate) fn max_form(&self, n: usize) -> Vec<Rational> {
        let mut c = vec![Rational::zero(); n];
        for (v, coeff) in &self.coeffs {
            c[v.0] = match self.sense {
                Sense::Maximize => coeff.clone(),
                Sense::Minimize => -coeff,
            };
        }
        c
    }
}

/// Variables (all `>= 0`) plus linear constraints.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        upper: Option<u64>,
    ) -> VarId {
        let upper = if kind == VarKind::Indicator {
            Some(upper.unwrap_or(1).min(1))
        } else {
            upper
        };
        self.variables.push(Variable {
            name: name.into(),
            kind,
            upper,
        });
        VarId(self.variables.len() - 1)
    }

    /// Appends a constraint.
    ///
    /// Panics if the constraint references an undeclared variable.
    pub fn add_constraint(&mut self, constraint: Constraint) {
        for v in constraint.coeffs.keys() {
            assert!(
                v.0 < self.variables.len(),
                "constraint '{}' references undeclared variable {}",
                constraint.tag,
                v.0
            );
        }
        self.constraints.push(constraint);
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .map(VarId)
    }

    /// Checks bounds and every constraint by exact substitution.
    pub fn is_feasible_point(&self, point: &[Rational]) -> bool {
        point.len() == self.variables.len()
            && self.variables.iter().zip(point).all(|(var, x)| {
                !x.is_negative() && var.upper.is_none_or(|u| *x <= Rational::from(u))
            })
            && self.constraints.iter().all(|c| c.is_satisfied(point))
    }

    pub fn is_integral_point(&self, point: &[Rational]) -> bool {
        point.iter().all(Rational::is_integer)
    }

    /// Audit dump: one constraint per line, `<tag>: <coef>*<var> ... <rel> <rhs>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for c in &self.constraints {
            let _ = write!(out, "{}:", c.tag);
            if c.coeffs.is_empty() {
                out.push_str(" 0");
            }
            for (v, coeff) in &c.coeffs {
                let _ = write!(out, " {}*{}", coeff, self.variables[v.0].name);
            }
            let _ = writeln!(out, " {} {}", c.relation.symbol(), c.rhs);
        }
        for v in &self.variables {
            if let Some(u) = v.upper {
                let _ = writeln!(out, "bound[{}]: 1*{} <= {}", v.name, v.name, u);
            }
        }
        out
    }

    /// Names the entries of `point` by variable.
    pub fn named_point(&self, point: &[Rational]) -> BTreeMap<String, Rational> {
        self.variables
            .iter()
            .zip(point)
            .map(|(v, x)| (v.name.clone(), x.clone()))
            .collect()
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}
