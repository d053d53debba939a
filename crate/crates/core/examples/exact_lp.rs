// The exact simplex on its own: an optimum, an unbounded ray and an
// infeasibility certificate, each checked by substitution.

use dpnlive::simplex::{solve_lp, verify_ray, LinExpr, LinearSystem, LpOutcome, Objective, Rational, Relation, VarKind};

fn report(system: &LinearSystem, objective: &Objective) {
    match solve_lp(system, objective) {
        LpOutcome::Optimal { value, point } => {
            println!("optimal {value} at {point:?}", point = point.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        }
        LpOutcome::Unbounded { point, ray } => {
            println!(
                "unbounded from {:?} along {:?}, ray verified: {}",
                point.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                ray.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                verify_ray(system, objective, &ray)
            );
        }
        LpOutcome::Infeasible { certificate } => {
            println!(
                "infeasible, multipliers {:?}, certificate verified: {}",
                certificate.constraint_multipliers.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                certificate.verify(system)
            );
        }
    }
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    // max x + y  s.t.  2x + 3y <= 7,  3x - y <= 2
    let mut s = LinearSystem::new();
    let x = s.add_variable("x", VarKind::Auxiliary, None);
    let y = s.add_variable("y", VarKind::Auxiliary, None);
    let mut r1 = LinExpr::new();
    r1.add_term(x, 2);
    r1.add_term(y, 3);
    s.add_constraint(r1.into_constraint(Relation::Le, 7, "r1"));
    let mut r2 = LinExpr::new();
    r2.add_term(x, 3);
    r2.add_term(y, -1);
    s.add_constraint(r2.into_constraint(Relation::Le, 2, "r2"));
    let obj = Objective::maximize([(x, Rational::one()), (y, Rational::one())]);
    print!("{s}");
    report(&s, &obj);

    // dropping the first row leaves y free to grow
    let mut open = s.clone();
    open.constraints.remove(0);
    report(&open, &obj);

    // x + y >= 4 together with 2x + 3y <= 7 forces y < 0
    let mut r3 = LinExpr::new();
    r3.add_term(x, 1);
    r3.add_term(y, 1);
    s.add_constraint(r3.into_constraint(Relation::Ge, 4, "r3"));
    report(&s, &obj);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
