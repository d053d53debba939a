//! Random small LP/ILP instances.

use dpnlive::simplex::{LinExpr, LinearSystem, Objective, Rational, Relation, VarId, VarKind};
use rand::Rng;

pub fn random_lp(rng: &mut impl Rng, boxed: bool) -> (LinearSystem, Objective) {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=6);
    let mut s = LinearSystem::new();
    for k in 0..n {
        let upper = boxed.then(|| rng.gen_range(1..=6));
        s.add_variable(format!("x{k}"), VarKind::Auxiliary, upper);
    }
    for i in 0..m {
        let mut e = LinExpr::new();
        for k in 0..n {
            if rng.gen_bool(0.7) {
                let num = rng.gen_range(-3..=3);
                let den = if rng.gen_bool(0.2) { 2 } else { 1 };
                e.add_term(VarId(k), Rational::new(num, den));
            }
        }
        let rel = match rng.gen_range(0..10) {
            0 => Relation::Eq,
            1 | 2 => Relation::Ge,
            _ => Relation::Le,
        };
        let rhs = Rational::new(rng.gen_range(-2..=8), if rng.gen_bool(0.2) { 3 } else { 1 });
        s.add_constraint(e.into_constraint(rel, rhs, format!("r{i}")));
    }
    let obj = Objective::maximize(
        (0..n).map(|k| (VarId(k), Rational::from(rng.gen_range(-3..=3)))),
    );
    (s, obj)
}

/// Pure integer program with every variable bounded by `bound`.
pub fn random_ilp(rng: &mut impl Rng, bound: u64) -> (LinearSystem, Objective) {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=4);
    let mut s = LinearSystem::new();
    for k in 0..n {
        s.add_variable(format!("x{k}"), VarKind::Auxiliary, Some(bound));
    }
    for i in 0..m {
        let mut e = LinExpr::new();
        for k in 0..n {
            if rng.gen_bool(0.8) {
                e.add_term(VarId(k), rng.gen_range(-4..=5));
            }
        }
        let rel = if rng.gen_bool(0.2) { Relation::Ge } else { Relation::Le };
        let rhs = Rational::new(rng.gen_range(-3..=20), rng.gen_range(1..=3));
        s.add_constraint(e.into_constraint(rel, rhs, format!("r{i}")));
    }
    let obj = Objective::maximize(
        (0..n).map(|k| (VarId(k), Rational::from(rng.gen_range(-2..=5)))),
    );
    (s, obj)
}
