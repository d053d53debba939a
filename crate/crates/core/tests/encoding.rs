//! Relations between the big-M system, the branch expansion and the
//! dimensioning program on generated networks.

use dpnlive::encoder::{
    build_base_system, build_block_clauses, build_dimensioning_branches, encode_big_m,
    enumerate_branches, BlockingOverride, Capacities,
};
use dpnlive::gomory::{integer_feasible, CutConfig, IntFeasibility};
use dpnlive::model::Dimensioning;
use dpnlive::random::{seeded_network, GeneratorConfig};
use dpnlive::simplex::{check_feasible, Feasibility, LinExpr, Rational, Relation};

const PRODUCT_LIMIT: u128 = 512;

#[test]
fn branch_points_lift_to_big_m_points() {
    let gen = GeneratorConfig::default();
    let mut lifted = 0;
    for i in 0..60 {
        let n = seeded_network(41, i, &gen);
        let clauses = build_block_clauses(&n, BlockingOverride::FromModel);
        if clauses.product_size() > PRODUCT_LIMIT {
            continue;
        }
        for d in 0..=2 {
            let Ok(base) = build_base_system(&n, Capacities::Concrete(Dimensioning::uniform(&n, d))) else {
                continue;
            };
            let big = encode_big_m(&base, &clauses).unwrap();
            let set = enumerate_branches(&base, &clauses).unwrap();
            let mut any_branch = false;
            for b in &set.branches {
                let Feasibility::Feasible { point } = check_feasible(&b.system) else { continue };
                any_branch = true;
                let mut p = point.clone();
                p.resize(big.system.num_vars(), Rational::zero());
                for &(ci, di, y) in &big.indicators {
                    if b.choice[ci] == di {
                        p[y.0] = Rational::one();
                    }
                }
                assert!(big.system.is_feasible_point(&p), "{} d={d}: branch point does not lift", n.name);
                lifted += 1;
            }
            // the relaxation is never stronger than the expansion
            if any_branch {
                assert!(check_feasible(&big.system).is_feasible(), "{} d={d}", n.name);
            }
        }
    }
    assert!(lifted > 50, "only {lifted} branch points checked");
}

#[test]
fn integral_big_m_points_lie_in_a_branch() {
    let gen = GeneratorConfig::default();
    let mut checked = 0;
    for i in 0..80 {
        let n = seeded_network(43, i, &gen);
        let clauses = build_block_clauses(&n, BlockingOverride::FromModel);
        for d in 0..=2 {
            let Ok(base) = build_base_system(&n, Capacities::Concrete(Dimensioning::uniform(&n, d))) else {
                continue;
            };
            let big = encode_big_m(&base, &clauses).unwrap();
            let IntFeasibility::Point(p) = integer_feasible(&big.system, &CutConfig::default()) else {
                continue;
            };
            for (ci, clause) in clauses.clauses.iter().enumerate() {
                let hit = big.indicators.iter().any(|&(c, di, y)| {
                    c == ci && p[y.0] == Rational::one() && base.disjunct_constraint(&clause.disjuncts[di]).is_satisfied(&p)
                });
                assert!(hit, "{} d={d}: clause {} has no active disjunct", n.name, clause.owner);
            }
            checked += 1;
        }
    }
    assert!(checked > 20, "only {checked} integral points");
}

#[test]
fn fixing_z_recovers_the_concrete_branches() {
    let gen = GeneratorConfig::default();
    for i in 0..30 {
        let n = seeded_network(47, i, &gen);
        let clauses = build_block_clauses(&n, BlockingOverride::FromModel);
        if clauses.product_size() > PRODUCT_LIMIT {
            continue;
        }
        let symbolic = build_dimensioning_branches(&n, BlockingOverride::FromModel).unwrap();
        let z = symbolic.branches[0].system.var_by_name("z").unwrap();
        for d in n.max_initial_tokens()..=2 {
            let base = build_base_system(&n, Capacities::Concrete(Dimensioning::uniform(&n, d))).unwrap();
            let concrete = enumerate_branches(&base, &clauses).unwrap();
            let feasible_concrete = concrete.branches.iter().filter(|b| check_feasible(&b.system).is_feasible()).count() > 0;
            let feasible_symbolic = symbolic.branches.iter().any(|b| {
                let mut s = b.system.clone();
                s.add_constraint(LinExpr::var(z).into_constraint(Relation::Eq, d, "fix z"));
                check_feasible(&s).is_feasible()
            });
            assert_eq!(feasible_concrete, feasible_symbolic, "{} d={d}", n.name);
        }
    }
}
