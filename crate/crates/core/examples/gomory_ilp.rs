// Integer optimum by fractional cutting planes, with the cut log.

use dpnlive::gomory::{solve_ilp_logged, CutConfig, IlpOutcome};
use dpnlive::simplex::{solve_lp, LinExpr, LinearSystem, LpOutcome, Objective, Rational, Relation, VarKind};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    // max y  s.t.  -x + y <= 1,  3x + 2y <= 12,  2x + 3y <= 12
    let mut s = LinearSystem::new();
    let x = s.add_variable("x", VarKind::Auxiliary, None);
    let y = s.add_variable("y", VarKind::Auxiliary, None);
    for (i, (a, b, rhs)) in [(-1, 1, 1), (3, 2, 12), (2, 3, 12)].into_iter().enumerate() {
        let mut e = LinExpr::new();
        e.add_term(x, a);
        e.add_term(y, b);
        s.add_constraint(e.into_constraint(Relation::Le, rhs, format!("r{i}")));
    }
    let obj = Objective::maximize([(y, Rational::one())]);

    if let LpOutcome::Optimal { value, .. } = solve_lp(&s, &obj) {
        println!("relaxation optimum {value}");
    }
    let solution = solve_ilp_logged(&s, &obj, &CutConfig::default());
    for cut in &solution.cuts {
        println!("  {}", cut.log_line(&s));
    }
    match &solution.outcome {
        IlpOutcome::IntOptimal { value, point } => println!(
            "integer optimum {value} at x={} y={} after {} cuts",
            point[0], point[1], solution.stats.cuts
        ),
        other => println!("{other:?}"),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
