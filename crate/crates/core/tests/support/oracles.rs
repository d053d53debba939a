//! Brute-force oracles that share no code with the solvers.

use dpnlive::simplex::{LinearSystem, Objective, Rational, Relation};

/// All rows of `system` as `a·x <= b`, including `-x_k <= 0` and upper bounds.
pub fn le_rows(system: &LinearSystem) -> Vec<(Vec<Rational>, Rational)> {
    let n = system.num_vars();
    let mut rows = Vec::new();
    for c in &system.constraints {
        let mut a = vec![Rational::zero(); n];
        for (v, coeff) in &c.coeffs {
            a[v.0] = coeff.clone();
        }
        let neg = |a: &Vec<Rational>| a.iter().map(|x| -x).collect::<Vec<_>>();
        match c.relation {
            Relation::Le => rows.push((a, c.rhs.clone())),
            Relation::Ge => rows.push((neg(&a), -&c.rhs)),
            Relation::Eq => {
                rows.push((neg(&a), -&c.rhs));
                rows.push((a, c.rhs.clone()));
            }
        }
    }
    for k in 0..n {
        let mut a = vec![Rational::zero(); n];
        a[k] = -Rational::one();
        rows.push((a, Rational::zero()));
        if let Some(u) = system.variables[k].upper {
            let mut a = vec![Rational::zero(); n];
            a[k] = Rational::one();
            rows.push((a, Rational::from(u)));
        }
    }
    rows
}

/// Unique solution of the square system `m·x = rhs`, if any.
pub fn solve_square(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].recip();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let d = &f * &m[col][c];
                m[r][c] = &m[r][c] - &d;
            }
            let d = &f * &rhs[col];
            rhs[r] = &rhs[r] - &d;
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Feasible vertices obtained by making every `n`-subset of rows tight.
pub fn feasible_vertices(system: &LinearSystem) -> Vec<Vec<Rational>> {
    let n = system.num_vars();
    let rows = le_rows(system);
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for subset in combinations(rows.len(), n) {
        let m = subset.iter().map(|&i| rows[i].0.clone()).collect();
        let rhs = subset.iter().map(|&i| rows[i].1.clone()).collect();
        let Some(x) = solve_square(m, rhs) else { continue };
        let ok = rows.iter().all(|(a, b)| {
            let lhs: Rational = a.iter().zip(&x).map(|(p, q)| p * q).sum();
            lhs <= *b
        });
        if ok && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Best objective value over the feasible vertices (maximization form).
pub fn vertex_optimum(system: &LinearSystem, objective: &Objective) -> Option<Rational> {
    let sign = match objective.sense {
        dpnlive::simplex::Sense::Maximize => Rational::one(),
        dpnlive::simplex::Sense::Minimize => -Rational::one(),
    };
    feasible_vertices(system)
        .iter()
        .map(|x| &objective.eval(x) * &sign)
        .max()
        .map(|v| &v * &sign)
}

/// Every integral point of `system` within `0..=bound` per coordinate.
pub fn box_points(system: &LinearSystem, bound: i64) -> Vec<Vec<Rational>> {
    let n = system.num_vars();
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        let x: Vec<Rational> = cur.iter().map(|&v| Rational::from(v)).collect();
        if system.is_feasible_point(&x) {
            out.push(x);
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            cur[k] += 1;
            if cur[k] <= bound {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}
