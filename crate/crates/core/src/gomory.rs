//! Pure integer programming by Gomory fractional cuts.
//!
//! The LP relaxation is solved to a lexicographically optimal tableau; each
//! round takes the first fractional row in the order `(objective, x_0, ...)`,
//! appends its fractional cut and re-optimizes with the lexicographic dual
//! simplex. Cut rows whose slack returns to the basis are dropped.
//!
//! Cutting planes cannot certify unboundedness, so an unbounded relaxation is
//! settled by searching for one integral point: a nonempty integer hull of a
//! rational polyhedron is bounded in the objective exactly when the
//! polyhedron is.

use crate::simplex::tableau::{DualRun, PrimalRun, RowOrigin, Tableau};
use crate::simplex::{
    phase_one, LinearSystem, LpOutcome, Objective, Rational, VarKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutConfig {
    pub max_cuts: u64,
    pub max_pivots: u64,
}

impl Default for CutConfig {
    fn default() -> Self {
        CutConfig {
            max_cuts: 10_000,
            max_pivots: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InconclusiveReason {
    CutLimit,
    IterationLimit,
}

impl std::fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InconclusiveReason::CutLimit => "cut limit reached",
            InconclusiveReason::IterationLimit => "pivot limit reached",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IlpOutcome {
    IntOptimal {
        value: Rational,
        point: Vec<Rational>,
    },
    IntInfeasible,
    /// The relaxation is unbounded along `ray` and `witness` is integral and
    /// feasible.
    IntUnbounded {
        witness: Vec<Rational>,
        ray: Vec<Rational>,
    },
    Inconclusive {
        reason: InconclusiveReason,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntFeasibility {
    Point(Vec<Rational>),
    IntInfeasible,
    Inconclusive { reason: InconclusiveReason },
}

/// Which tableau row a cut was read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSource {
    Objective,
    Variable(usize),
}

/// A cut `coeffs·x <= rhs` in the structural variables of the system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutRecord {
    pub round: u64,
    pub source: CutSource,
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl CutRecord {
    /// Log line: `round <r> source <row> cut <c0> <c1> ... <= <rhs>`.
    pub fn log_line(&self, system: &LinearSystem) -> String {
        let source = match self.source {
            CutSource::Objective => "objective".to_string(),
            CutSource::Variable(k) => system.variables[k].name.clone(),
        };
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{}*{}", c, system.variables[k].name))
            .collect();
        format!(
            "round {} source {} cut {} <= {}",
            self.round,
            source,
            if terms.is_empty() { "0".to_string() } else { terms.join(" ") },
            self.rhs
        )
    }

    pub fn is_satisfied(&self, point: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
        lhs <= self.rhs
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IlpStats {
    pub cuts: u64,
    pub pivots: u64,
}

#[derive(Debug, Clone)]
pub struct IlpSolution {
    pub outcome: IlpOutcome,
    pub stats: IlpStats,
    pub cuts: Vec<CutRecord>,
}

/// Fractional cut from tracked row `source`: with the row read as
/// `q = β + Σ a_j t_j`, returns `(-frac(-β), frac(a_j))`, the value and
/// column coefficients of the cut slack `Σ frac(a_j) t_j - frac(-β) >= 0`.
/// With lexicographically positive columns, re-optimizing after this cut
/// raises `q` to at least `ceil(β)` unless an earlier row moves first.
pub fn gomory_cut(tableau: &Tableau, source: CutSource) -> (Rational, Vec<Rational>) {
    let (beta, alpha) = match source {
        CutSource::Objective => (tableau.objective_value(), tableau.objective_row()),
        CutSource::Variable(k) => (tableau.value(k), tableau.row(k)),
    };
    let coefs = alpha.iter().map(Rational::fract_floor).collect();
    (-(-beta).fract_floor(), coefs)
}

/// First fractional row in lexicographic order.
pub fn fractional_source(tableau: &Tableau) -> Option<CutSource> {
    if !tableau.objective_value().is_integer() {
        return Some(CutSource::Objective);
    }
    (0..tableau.num_structural())
        .find(|&k| !tableau.value(k).is_integer())
        .map(CutSource::Variable)
}

pub(crate) enum LoopEnd {
    Integral,
    Infeasible,
    Limit(InconclusiveReason),
}

/// Cut-and-reoptimize rounds on a primal feasible, lexicographically dual
/// feasible tableau. Pivots are budgeted per tableau.
pub(crate) fn cut_loop(
    t: &mut Tableau,
    config: &CutConfig,
    stats: &mut IlpStats,
    log: &mut Vec<CutRecord>,
    mut on_round: impl FnMut(&Tableau),
) -> LoopEnd {
    loop {
        let Some(source) = fractional_source(t) else {
            return LoopEnd::Integral;
        };
        if stats.cuts >= config.max_cuts {
            return LoopEnd::Limit(InconclusiveReason::CutLimit);
        }
        stats.cuts += 1;
        let round = stats.cuts;
        let (value, coefs) = gomory_cut(t, source);
        let v = t.push_column_row(value, coefs, RowOrigin::Cut { round });
        let def = t.slack_definition(v).expect("cut is a slack row");
        log.push(CutRecord {
            round,
            source,
            coeffs: def.a.clone(),
            rhs: def.b.clone(),
        });
        let budget = config.max_pivots.saturating_sub(t.pivots());
        match t.run_dual(budget) {
            DualRun::Feasible => {}
            DualRun::Infeasible(_) => return LoopEnd::Infeasible,
            DualRun::Limit => return LoopEnd::Limit(InconclusiveReason::IterationLimit),
        }
        for v in (t.num_structural()..t.num_tracked()).rev() {
            if t.is_basic(v) && matches!(t.origin(v), Some(RowOrigin::Cut { .. })) {
                t.remove_basic_row(v);
            }
        }
        on_round(t);
    }
}

/// Maximizes or minimizes `objective` over the integral points of `system`.
/// Every variable is treated as integer.
pub fn solve_ilp(system: &LinearSystem, objective: &Objective, config: &CutConfig) -> IlpOutcome {
    solve_ilp_logged(system, objective, config).outcome
}

pub fn solve_ilp_logged(
    system: &LinearSystem,
    objective: &Objective,
    config: &CutConfig,
) -> IlpSolution {
    solve_ilp_observed(system, objective, config, |_| {})
}

/// As [`solve_ilp_logged`], calling `on_round` with the re-optimized tableau
/// after every cut round of the main optimization.
pub fn solve_ilp_observed(
    system: &LinearSystem,
    objective: &Objective,
    config: &CutConfig,
    on_round: impl FnMut(&Tableau),
) -> IlpSolution {
    let mut stats = IlpStats::default();
    let mut cuts = Vec::new();
    let outcome = optimize(system, objective, config, &mut stats, &mut cuts, on_round);
    let outcome = match outcome {
        Optimized::Relaxation(LpOutcome::Unbounded { ray, .. }) => {
            match feasible_point(system, config, &mut stats, &mut cuts) {
                IntFeasibility::Point(witness) => IlpOutcome::IntUnbounded { witness, ray },
                IntFeasibility::IntInfeasible => IlpOutcome::IntInfeasible,
                IntFeasibility::Inconclusive { reason } => IlpOutcome::Inconclusive { reason },
            }
        }
        Optimized::Relaxation(_) => unreachable!("only unbounded relaxations are returned"),
        Optimized::Done(o) => o,
    };
    IlpSolution {
        outcome,
        stats,
        cuts,
    }
}

pub(crate) enum Optimized {
    Done(IlpOutcome),
    Relaxation(LpOutcome),
}

/// LP relaxation followed by cutting planes. Returns the relaxation outcome
/// unchanged when it is unbounded.
pub(crate) fn optimize(
    system: &LinearSystem,
    objective: &Objective,
    config: &CutConfig,
    stats: &mut IlpStats,
    log: &mut Vec<CutRecord>,
    on_round: impl FnMut(&Tableau),
) -> Optimized {
    let (mut t, phase1) = phase_one(system);
    if phase1.is_err() {
        stats.pivots += t.pivots();
        return Optimized::Done(IlpOutcome::IntInfeasible);
    }
    t.set_objective(objective);
    let budget = config.max_pivots.saturating_sub(t.pivots());
    match t.run_primal(budget) {
        PrimalRun::Optimal => {}
        PrimalRun::Unbounded(column) => {
            stats.pivots += t.pivots();
            return Optimized::Relaxation(LpOutcome::Unbounded {
                point: t.point(),
                ray: t.column_direction(column),
            });
        }
        PrimalRun::Limit => {
            stats.pivots += t.pivots();
            return Optimized::Done(IlpOutcome::Inconclusive {
                reason: InconclusiveReason::IterationLimit,
            });
        }
    }
    let end = cut_loop(&mut t, config, stats, log, on_round);
    stats.pivots += t.pivots();
    Optimized::Done(match end {
        LoopEnd::Integral => {
            let point = t.point();
            IlpOutcome::IntOptimal {
                value: objective.eval(&point),
                point,
            }
        }
        LoopEnd::Infeasible => IlpOutcome::IntInfeasible,
        LoopEnd::Limit(reason) => IlpOutcome::Inconclusive { reason },
    })
}

/// Objective used to search for one integral point: minimize the capacity
/// variable when there is one, else the zero objective (the lexicographic
/// order then minimizes `x_0`, `x_1`, ... in turn).
pub fn feasibility_objective(system: &LinearSystem) -> Objective {
    match system
        .variables
        .iter()
        .position(|v| v.kind == VarKind::CapacityZ)
    {
        Some(k) => Objective::minimize([(crate::simplex::VarId(k), Rational::one())]),
        None => Objective::zero(),
    }
}

fn feasible_point(
    system: &LinearSystem,
    config: &CutConfig,
    stats: &mut IlpStats,
    log: &mut Vec<CutRecord>,
) -> IntFeasibility {
    let objective = feasibility_objective(system);
    match optimize(system, &objective, config, stats, log, |_| {}) {
        Optimized::Done(IlpOutcome::IntOptimal { point, .. }) => IntFeasibility::Point(point),
        Optimized::Done(IlpOutcome::IntInfeasible) => IntFeasibility::IntInfeasible,
        Optimized::Done(IlpOutcome::Inconclusive { reason }) => {
            IntFeasibility::Inconclusive { reason }
        }
        Optimized::Done(IlpOutcome::IntUnbounded { .. }) | Optimized::Relaxation(_) => {
            unreachable!("the feasibility objective is bounded below by zero")
        }
    }
}

/// Finds an integral point of `system`, or proves there is none.
pub fn integer_feasible(system: &LinearSystem, config: &CutConfig) -> IntFeasibility {
    integer_feasible_logged(system, config).0
}

pub fn integer_feasible_logged(
    system: &LinearSystem,
    config: &CutConfig,
) -> (IntFeasibility, IlpStats, Vec<CutRecord>) {
    let mut stats = IlpStats::default();
    let mut log = Vec::new();
    let r = feasible_point(system, config, &mut stats, &mut log);
    (r, stats, log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{LinExpr, Relation, VarId};

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn single_cut_rounds_down() {
        let mut s = LinearSystem::new();
        let z = s.add_variable("z", VarKind::CapacityZ, None);
        let mut e = LinExpr::new();
        e.add_term(z, 2);
        s.add_constraint(e.into_constraint(Relation::Le, 3, "half"));
        let sol = solve_ilp_logged(&s, &Objective::maximize([(z, r(1))]), &CutConfig::default());
        assert_eq!(
            sol.outcome,
            IlpOutcome::IntOptimal {
                value: r(1),
                point: vec![r(1)]
            }
        );
        assert_eq!(sol.stats.cuts, 1);
        assert_eq!(sol.cuts[0].log_line(&s), "round 1 source objective cut 1*z <= 1");
    }

    #[test]
    fn free_ray_is_integer_unbounded() {
        let mut s = LinearSystem::new();
        let z = s.add_variable("z", VarKind::CapacityZ, None);
        match solve_ilp(&s, &Objective::maximize([(z, r(1))]), &CutConfig::default()) {
            IlpOutcome::IntUnbounded { witness, ray } => {
                assert_eq!(witness, vec![r(0)]);
                assert_eq!(ray, vec![r(1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn half_integral_equality_has_no_integer_point() {
        // x = y/2, y = 1
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", VarKind::Auxiliary, None);
        let y = s.add_variable("y", VarKind::Auxiliary, None);
        let mut e = LinExpr::var(x);
        e.add_term(y, Rational::new(-1, 2));
        s.add_constraint(e.into_constraint(Relation::Eq, 0, "half"));
        s.add_constraint(LinExpr::var(y).into_constraint(Relation::Ge, 1, "lo"));
        s.add_constraint(LinExpr::var(y).into_constraint(Relation::Le, 1, "hi"));
        assert_eq!(
            integer_feasible(&s, &CutConfig::default()),
            IntFeasibility::IntInfeasible
        );
    }

    #[test]
    fn homogeneous_system_yields_origin() {
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", VarKind::Auxiliary, None);
        let y = s.add_variable("y", VarKind::Auxiliary, None);
        let mut e = LinExpr::var(x);
        e.add_term(y, 3);
        s.add_constraint(e.into_constraint(Relation::Le, 0, "h"));
        assert_eq!(
            integer_feasible(&s, &CutConfig::default()),
            IntFeasibility::Point(vec![r(0), r(0)])
        );
    }

    #[test]
    fn cut_limit_is_inconclusive() {
        let mut s = LinearSystem::new();
        let z = s.add_variable("z", VarKind::CapacityZ, None);
        let mut e = LinExpr::new();
        e.add_term(z, 2);
        s.add_constraint(e.into_constraint(Relation::Le, 3, "half"));
        let cfg = CutConfig {
            max_cuts: 0,
            max_pivots: 100,
        };
        assert_eq!(
            solve_ilp(&s, &Objective::maximize([(VarId(0), r(1))]), &cfg),
            IlpOutcome::Inconclusive {
                reason: InconclusiveReason::CutLimit
            }
        );
    }

    #[test]
    fn reoptimization_after_one_cut_takes_one_pivot() {
        let mut s = LinearSystem::new();
        let z = s.add_variable("z", VarKind::CapacityZ, None);
        let mut e = LinExpr::new();
        e.add_term(z, 2);
        s.add_constraint(e.into_constraint(Relation::Le, 3, "half"));
        let (mut t, ok) = phase_one(&s);
        assert!(ok.is_ok());
        t.set_objective(&Objective::maximize([(z, r(1))]));
        assert_eq!(t.run_primal(10), PrimalRun::Optimal);
        assert_eq!(t.point(), vec![Rational::new(3, 2)]);
        let (value, coefs) = gomory_cut(&t, fractional_source(&t).unwrap());
        t.push_column_row(value, coefs, RowOrigin::Cut { round: 1 });
        let before = t.pivots();
        assert!(matches!(
            t.lex_dual_step().unwrap(),
            crate::simplex::DualStep::Pivoted { .. }
        ));
        assert_eq!(t.lex_dual_step().unwrap(), crate::simplex::DualStep::Optimal);
        assert_eq!(t.pivots() - before, 1);
        assert_eq!(t.point(), vec![r(1)]);
    }
}
