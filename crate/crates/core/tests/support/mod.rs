//! Independent oracles and instance generators shared by the integration
//! tests. Nothing here calls the library's solvers.

#![allow(dead_code)]

use ambicon::rational::{int, rat, Rational};
use ambicon::Instance;
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// Solves the square system `a x = b` by Gauss-Jordan elimination; `None`
/// when singular.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for k in col..n {
            a[col][k] = &a[col][k] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..n {
                    let delta = &f * &a[col][k];
                    a[r][k] -= delta;
                }
                let delta = &f * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some(b)
}

fn subsets(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..n {
            cur.push(s);
            go(s + 1, k, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, k, n, &mut Vec::new(), &mut out);
    out
}

/// Minimum payment for `i` by enumerating every vertex of the feasible
/// region `{t ≥ 0 : IC, IR[, monotone]}`.
pub fn vertex_min_payment(inst: &Instance, i: usize, monotone: bool) -> Option<Rational> {
    let m = inst.m();
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for k in 0..inst.n() {
        if k != i {
            let a = (0..m).map(|j| inst.p(i, j) - inst.p(k, j)).collect();
            rows.push((a, inst.cost(i) - inst.cost(k)));
        }
    }
    rows.push((inst.row(i).to_vec(), inst.cost(i).clone()));
    for j in 0..m {
        let a = (0..m).map(|k| int(i64::from(k == j))).collect();
        rows.push((a, Rational::zero()));
    }
    if monotone {
        for j in 0..m - 1 {
            let mut a = vec![Rational::zero(); m];
            a[j] = -Rational::one();
            a[j + 1] = Rational::one();
            rows.push((a, Rational::zero()));
        }
    }
    let feasible = |t: &[Rational]| {
        rows.iter().all(|(a, b)| a.iter().zip(t).map(|(x, y)| x * y).sum::<Rational>() >= *b)
    };
    let mut best: Option<Rational> = None;
    for s in subsets(m, rows.len()) {
        let a = s.iter().map(|&r| rows[r].0.clone()).collect();
        let b = s.iter().map(|&r| rows[r].1.clone()).collect();
        let Some(t) = solve_square(a, b) else { continue };
        if !feasible(&t) {
            continue;
        }
        let value: Rational = inst.row(i).iter().zip(&t).map(|(p, x)| p * x).sum();
        if best.as_ref().is_none_or(|b| value < *b) {
            best = Some(value);
        }
    }
    best
}

/// Does the family of every SOP contract paying `θ` in expectation to `i`
/// incentivise `i`?
pub fn sop_family_feasible(inst: &Instance, i: usize, theta: &Rational) -> bool {
    if theta < inst.cost(i) {
        return false;
    }
    let target = theta - inst.cost(i);
    (0..inst.n()).filter(|&k| k != i).all(|k| {
        (0..inst.m()).filter(|&j| inst.p(i, j).is_positive()).any(|j| {
            inst.p(k, j) * theta / inst.p(i, j) - inst.cost(k) <= target
        })
    })
}

fn tails(row: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); row.len()];
    let mut acc = Rational::zero();
    for j in (0..row.len()).rev() {
        acc += &row[j];
        out[j] = acc.clone();
    }
    out
}

/// Does the family of every step contract paying `θ` in expectation to `i`
/// incentivise `i`?
pub fn step_family_feasible(inst: &Instance, i: usize, theta: &Rational) -> bool {
    if theta < inst.cost(i) {
        return false;
    }
    let target = theta - inst.cost(i);
    let ti = tails(inst.row(i));
    (0..inst.n()).filter(|&k| k != i).all(|k| {
        let tk = tails(inst.row(k));
        (0..inst.m()).filter(|&j| ti[j].is_positive()).any(|j| {
            &tk[j] * theta / &ti[j] - inst.cost(k) <= target
        })
    })
}

/// Checks that `θ` is the least feasible level for a monotone family
/// predicate: feasible at `θ`, infeasible just below it and on a grid below.
pub fn is_least_level(
    feasible: impl Fn(&Rational) -> bool,
    theta: &Rational,
) -> bool {
    let k = Rational::from_integer(theta.denom() * num_bigint::BigInt::from(1_000_000));
    let just_below = theta - k.recip();
    let grid_ok = theta.is_zero() || (0..50).all(|g| !feasible(&(theta * rat(g, 50))));
    feasible(theta) && !feasible(&just_below) && grid_ok
}

/// Random instance: up to `max_n` actions and `max_m` outcomes with entries
/// of small denominator.
pub fn random_instance(rng: &mut impl Rng, max_n: usize, max_m: usize) -> Instance {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let rewards: Vec<Rational> = (0..m).map(|_| int(rng.gen_range(0..=10))).collect();
    let costs: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(0..=12), 4)).collect();
    let probs = (0..n).map(|_| random_row(rng, m)).collect();
    Instance::new(costs, rewards, probs).expect("valid by construction")
}

pub fn random_row(rng: &mut impl Rng, m: usize) -> Vec<Rational> {
    let mut w: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=4)).collect();
    if w.iter().all(|&x| x == 0) {
        w[rng.gen_range(0..m)] = 1;
    }
    let total: i64 = w.iter().sum();
    w.iter().map(|&x| rat(x, total)).collect()
}

/// Random MLRP instance with strictly increasing costs: each action lives
/// on a window `[lo, hi]` whose ends never move left, with weights tilted
/// by an increasing base raised to the action's rank.
pub fn random_mlrp_instance(rng: &mut impl Rng, max_n: usize, max_m: usize) -> Instance {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let base: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
    let tilt: Vec<i64> = {
        let mut v: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
        v.sort();
        v
    };
    let mut lo = 0;
    let mut hi = rng.gen_range(0..m);
    let mut probs = Vec::new();
    for i in 0..n {
        if i > 0 {
            hi = rng.gen_range(hi..m);
            lo = rng.gen_range(lo..=hi);
        }
        let weights: Vec<i64> = (0..m)
            .map(|j| if j < lo || j > hi { 0 } else { base[j] * tilt[j].pow(i as u32) })
            .collect();
        let total: i64 = weights.iter().sum();
        probs.push(weights.iter().map(|&x| rat(x, total)).collect());
    }
    let mut costs = Vec::new();
    let mut c = Rational::zero();
    for _ in 0..n {
        costs.push(c.clone());
        c += rat(rng.gen_range(1..=8), 4);
    }
    let mut rewards: Vec<Rational> = (0..m).map(|_| int(rng.gen_range(0..=10))).collect();
    rewards.sort();
    Instance::new(costs, rewards, probs).expect("valid by construction")
}
