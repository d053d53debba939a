//! Exact linear programming.
//!
//! Phase 1 runs the lexicographic dual simplex from the all-slack basis
//! (always dual feasible for the lexicographic objective `(0, x_0, ...)`),
//! which either reaches a feasible point or exhibits a Farkas certificate.
//! Phase 2 runs the primal simplex with Bland's rule on the lexicographic
//! objective `(objective, x_0, ...)`. The final tableau is therefore
//! lexicographically optimal, which is what the cutting-plane solver needs.

pub mod rational;
pub mod system;
pub mod tableau;

pub use rational::Rational;
pub use system::{
    Constraint, LinExpr, LinearSystem, Objective, Relation, Sense, VarId, VarKind, Variable,
};
pub use tableau::{DualStep, PrimalStep, RowOrigin, Tableau};

use tableau::{DualRun, PrimalRun};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimplexError {
    #[error("tableau is not lexicographically dual feasible")]
    NotDualFeasible,
}

/// Multipliers proving `{x >= 0, x <= upper, constraints}` empty.
///
/// With every constraint read in `<=` orientation (`>=` rows negated),
/// `Σ_i y_i·a_i + Σ_k μ_k·e_k - Σ_k λ_k·e_k = 0` and
/// `Σ_i y_i·b_i + Σ_k μ_k·u_k = -1`, where `y_i >= 0` for inequality rows
/// (free for equalities), `μ` are upper-bound multipliers and `λ`
/// nonnegativity multipliers. Summing the scaled rows yields `0 <= -1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub constraint_multipliers: Vec<Rational>,
    pub upper_bound_multipliers: Vec<Rational>,
    pub nonnegativity_multipliers: Vec<Rational>,
}

impl FarkasCertificate {
    /// Exact re-verification against `system`.
    pub fn verify(&self, system: &LinearSystem) -> bool {
        let n = system.num_vars();
        if self.constraint_multipliers.len() != system.constraints.len()
            || self.upper_bound_multipliers.len() != n
            || self.nonnegativity_multipliers.len() != n
        {
            return false;
        }
        let mut combo = vec![Rational::zero(); n];
        let mut rhs = Rational::zero();
        for (c, y) in system.constraints.iter().zip(&self.constraint_multipliers) {
            if y.is_zero() {
                continue;
            }
            let sign = match c.relation {
                Relation::Le => Rational::one(),
                Relation::Ge => -Rational::one(),
                Relation::Eq => Rational::one(),
            };
            if c.relation != Relation::Eq && y.is_negative() {
                return false;
            }
            let ys = y * &sign;
            for (v, a) in &c.coeffs {
                combo[v.0] += &ys * a;
            }
            rhs += &ys * &c.rhs;
        }
        for (k, var) in system.variables.iter().enumerate() {
            let mu = &self.upper_bound_multipliers[k];
            let lambda = &self.nonnegativity_multipliers[k];
            if mu.is_negative() || lambda.is_negative() {
                return false;
            }
            if !mu.is_zero() {
                let Some(u) = var.upper else { return false };
                combo[k] += mu;
                rhs += mu * &Rational::from(u);
            }
            combo[k] -= lambda;
        }
        combo.iter().all(Rational::is_zero) && rhs == -Rational::one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
    Infeasible {
        certificate: FarkasCertificate,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible { point: Vec<Rational> },
    Infeasible { certificate: FarkasCertificate },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

/// Checks that `ray` is a recession direction of `system` along which
/// `objective` strictly improves.
pub fn verify_ray(system: &LinearSystem, objective: &Objective, ray: &[Rational]) -> bool {
    if ray.len() != system.num_vars() {
        return false;
    }
    let bounds_ok = system.variables.iter().zip(ray).all(|(var, d)| {
        !d.is_negative() && (var.upper.is_none() || d.is_zero())
    });
    let rows_ok = system.constraints.iter().all(|c| {
        let lhs = c.lhs(ray);
        c.relation.holds(&lhs, &Rational::zero())
    });
    let gain = objective.eval(ray);
    let improving = match objective.sense {
        Sense::Maximize => gain.is_positive(),
        Sense::Minimize => gain.is_negative(),
    };
    bounds_ok && rows_ok && improving
}

/// Converts an infeasible tableau row into a certificate on `system`.
pub(crate) fn farkas_from_tableau(
    system: &LinearSystem,
    tableau: &Tableau,
    row: usize,
) -> Option<FarkasCertificate> {
    let n = system.num_vars();
    let mut cert = FarkasCertificate {
        constraint_multipliers: vec![Rational::zero(); system.constraints.len()],
        upper_bound_multipliers: vec![Rational::zero(); n],
        nonnegativity_multipliers: vec![Rational::zero(); n],
    };
    let norm = (-tableau.value(row)).recip();
    for (mu, v) in tableau.infeasibility_combination(row) {
        let mu = &mu * &norm;
        match tableau.origin(v) {
            None => cert.nonnegativity_multipliers[v] += &mu,
            Some(RowOrigin::Constraint { index, factor }) => {
                cert.constraint_multipliers[*index] += &(&mu * factor);
            }
            Some(RowOrigin::UpperBound { var }) => cert.upper_bound_multipliers[*var] += &mu,
            Some(RowOrigin::Cut { .. }) | Some(RowOrigin::External { .. }) => return None,
        }
    }
    Some(cert)
}

/// Phase 1: lexicographic dual simplex from the slack basis.
pub(crate) fn phase_one(system: &LinearSystem) -> (Tableau, Result<(), FarkasCertificate>) {
    let mut t = Tableau::from_system(system);
    match t.run_dual(u64::MAX) {
        DualRun::Feasible => (t, Ok(())),
        DualRun::Infeasible(row) => {
            let cert = farkas_from_tableau(system, &t, row)
                .expect("phase-1 rows always map back to the system");
            (t, Err(cert))
        }
        DualRun::Limit => unreachable!("unlimited run"),
    }
}

pub fn check_feasible(system: &LinearSystem) -> Feasibility {
    match phase_one(system) {
        (t, Ok(())) => Feasibility::Feasible { point: t.point() },
        (_, Err(certificate)) => Feasibility::Infeasible { certificate },
    }
}

/// Result of phase 2 on a feasible tableau.
pub(crate) enum PhaseTwo {
    Optimal,
    Unbounded { column: usize },
}

pub(crate) fn phase_two(t: &mut Tableau, objective: &Objective) -> PhaseTwo {
    t.set_objective(objective);
    match t.run_primal(u64::MAX) {
        PrimalRun::Optimal => PhaseTwo::Optimal,
        PrimalRun::Unbounded(column) => PhaseTwo::Unbounded { column },
        PrimalRun::Limit => unreachable!("unlimited run"),
    }
}

/// Solves `objective` over `system` exactly.
pub fn solve_lp(system: &LinearSystem, objective: &Objective) -> LpOutcome {
    solve_lp_with_tableau(system, objective).0
}

pub(crate) fn solve_lp_with_tableau(
    system: &LinearSystem,
    objective: &Objective,
) -> (LpOutcome, Tableau) {
    let (mut t, phase1) = phase_one(system);
    if let Err(certificate) = phase1 {
        return (LpOutcome::Infeasible { certificate }, t);
    }
    let outcome = match phase_two(&mut t, objective) {
        PhaseTwo::Optimal => {
            let point = t.point();
            LpOutcome::Optimal {
                value: objective.eval(&point),
                point,
            }
        }
        PhaseTwo::Unbounded { column } => LpOutcome::Unbounded {
            point: t.point(),
            ray: t.column_direction(column),
        },
    };
    (outcome, t)
}

/// A feasible system that can be extended one constraint at a time, each
/// extension re-optimized by the dual simplex from the previous basis.
#[derive(Debug, Clone)]
pub struct IncrementalLp {
    system: LinearSystem,
    tableau: Tableau,
}

impl IncrementalLp {
    /// Runs phase 1 on `system`; fails with its certificate when empty.
    pub fn new(system: LinearSystem) -> Result<Self, FarkasCertificate> {
        let (tableau, phase1) = phase_one(&system);
        phase1.map(|()| IncrementalLp { system, tableau })
    }

    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    /// Lexicographically smallest feasible point.
    pub fn point(&self) -> Vec<Rational> {
        self.tableau.point()
    }

    pub fn pivots(&self) -> u64 {
        self.tableau.pivots()
    }

    /// Adds `constraint`. On infeasibility the certificate refers to the
    /// extended system, which stays available through [`IncrementalLp::system`].
    pub fn add_constraint(&mut self, constraint: Constraint) -> Result<(), FarkasCertificate> {
        let index = self.system.constraints.len();
        self.tableau.push_constraint(index, &constraint);
        self.system.add_constraint(constraint);
        match self.tableau.run_dual(u64::MAX) {
            DualRun::Feasible => Ok(()),
            DualRun::Infeasible(row) => Err(farkas_from_tableau(&self.system, &self.tableau, row)
                .expect("rows all map back to the system")),
            DualRun::Limit => unreachable!("unlimited run"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn box_optimum() {
        let mut s = LinearSystem::new();
        let x1 = s.add_variable("x1", VarKind::Auxiliary, None);
        let x2 = s.add_variable("x2", VarKind::Auxiliary, None);
        s.add_constraint(LinExpr::var(x1).into_constraint(Relation::Le, 1, "c1"));
        s.add_constraint(LinExpr::var(x2).into_constraint(Relation::Le, 1, "c2"));
        let obj = Objective::maximize([(x1, r(1)), (x2, r(1))]);
        match solve_lp(&s, &obj) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, r(2));
                assert_eq!(point, vec![r(1), r(1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unconstrained_maximization_is_unbounded() {
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", VarKind::Auxiliary, None);
        let obj = Objective::maximize([(x, r(1))]);
        match solve_lp(&s, &obj) {
            LpOutcome::Unbounded { point, ray } => {
                assert_eq!(point, vec![r(0)]);
                assert_eq!(ray, vec![r(1)]);
                assert!(verify_ray(&s, &obj, &ray));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn contradictory_bounds_give_farkas_certificate() {
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", VarKind::Auxiliary, None);
        s.add_constraint(LinExpr::var(x).into_constraint(Relation::Le, -1, "neg"));
        s.add_constraint(LinExpr::var(x).into_constraint(Relation::Ge, 0, "nonneg"));
        match check_feasible(&s) {
            Feasibility::Infeasible { certificate } => {
                assert!(certificate.verify(&s));
                assert_eq!(certificate.constraint_multipliers[0], r(1));
                // the second unit comes from x >= 0, either as the row or the bound
                let second = &certificate.constraint_multipliers[1]
                    + &certificate.nonnegativity_multipliers[0];
                assert_eq!(second, r(1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_system_is_feasible_at_origin() {
        let mut s = LinearSystem::new();
        s.add_variable("x", VarKind::Auxiliary, None);
        assert_eq!(
            check_feasible(&s),
            Feasibility::Feasible { point: vec![r(0)] }
        );
    }

    #[test]
    fn equality_certificate_may_be_negative() {
        // x + y = -2 is infeasible over x, y >= 0
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", VarKind::Auxiliary, None);
        let y = s.add_variable("y", VarKind::Auxiliary, None);
        let mut e = LinExpr::var(x);
        e.add_term(y, 1);
        s.add_constraint(e.into_constraint(Relation::Eq, -2, "eq"));
        match check_feasible(&s) {
            Feasibility::Infeasible { certificate } => assert!(certificate.verify(&s)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn upper_bounds_enter_certificates() {
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", VarKind::Auxiliary, Some(2));
        s.add_constraint(LinExpr::var(x).into_constraint(Relation::Ge, 3, "lo"));
        match check_feasible(&s) {
            Feasibility::Infeasible { certificate } => {
                assert!(certificate.verify(&s));
                assert!(certificate.upper_bound_multipliers[0].is_positive());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn incremental_rows_match_batch_solve() {
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", VarKind::Auxiliary, None);
        let y = s.add_variable("y", VarKind::Auxiliary, None);
        let mut e = LinExpr::var(x);
        e.add_term(y, 1);
        s.add_constraint(e.clone().into_constraint(Relation::Ge, 2, "sum"));
        let mut inc = IncrementalLp::new(s).unwrap();
        assert_eq!(inc.point(), vec![r(0), r(2)]);
        inc.add_constraint(LinExpr::var(y).into_constraint(Relation::Le, 1, "y"))
            .unwrap();
        assert_eq!(inc.point(), vec![r(1), r(1)]);
        let mut probe = inc.clone();
        let cert = probe
            .add_constraint(e.into_constraint(Relation::Le, 1, "cap"))
            .unwrap_err();
        assert!(cert.verify(probe.system()));
        assert_eq!(inc.system().constraints.len(), 2);
    }

    #[test]
    fn deterministic_outcome() {
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", VarKind::Auxiliary, None);
        let y = s.add_variable("y", VarKind::Auxiliary, None);
        let mut e = LinExpr::var(x);
        e.add_term(y, 1);
        s.add_constraint(e.into_constraint(Relation::Le, 4, "sum"));
        let obj = Objective::maximize([(x, r(1)), (y, r(1))]);
        let a = solve_lp_with_tableau(&s, &obj);
        let b = solve_lp_with_tableau(&s, &obj);
        assert_eq!(a.0, b.0);
        assert_eq!(a.1.pivots(), b.1.pivots());
    }
}
