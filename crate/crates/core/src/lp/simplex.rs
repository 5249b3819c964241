use num_traits::{Signed, Zero};

use super::LpError;
use crate::rational::{dot, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Self { coeffs, relation, rhs }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// `min objective · x` subject to the constraints and `x ≥ lower_bounds`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    pub constraints: Vec<LinearConstraint>,
    pub lower_bounds: Vec<Rational>,
}

impl LpProblem {
    /// Problem with all lower bounds at zero.
    pub fn new(objective: Vec<Rational>, constraints: Vec<LinearConstraint>) -> Self {
        let lower_bounds = vec![Rational::zero(); objective.len()];
        Self { objective, constraints, lower_bounds }
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.objective.len()
            && x.iter().zip(&self.lower_bounds).all(|(v, lb)| v >= lb)
            && self.constraints.iter().all(|c| c.holds(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpSolution {
    Optimal { value: Rational, assignment: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            Self::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Dense simplex tableau with Bland's anti-cycling rule.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs; the last entry holds minus the objective value.
    z: Vec<Rational>,
}

struct Unbounded;

impl Tableau {
    fn cols(&self) -> usize {
        self.z.len() - 1
    }

    fn price(&mut self, objective: &[Rational]) {
        let width = self.cols() + 1;
        let mut z = vec![Rational::zero(); width];
        z[..objective.len()].clone_from_slice(objective);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = objective.get(b).cloned().unwrap_or_else(Rational::zero);
            if cb.is_zero() {
                continue;
            }
            for (zk, a) in z.iter_mut().zip(row) {
                *zk -= &cb * a;
            }
        }
        self.z = z;
    }

    fn pivot(&mut self, r: usize, k: usize) {
        let inv = self.rows[r][k].recip();
        for a in self.rows[r].iter_mut() {
            if !a.is_zero() {
                *a *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let eliminate = |target: &mut Vec<Rational>| {
            let factor = target[k].clone();
            if factor.is_zero() {
                return;
            }
            for (t, p) in target.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *t -= &factor * p;
                }
            }
        };
        for (s, row) in self.rows.iter_mut().enumerate() {
            if s != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.z);
        self.rows[r] = pivot_row;
        self.basis[r] = k;
    }

    fn optimize(&mut self, allowed: impl Fn(usize) -> bool) -> Result<(), Unbounded> {
        let rhs = self.cols();
        loop {
            let chosen = (0..rhs).find(|&k| allowed(k) && self.z[k].is_negative());
            let Some(k) = chosen else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[k].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[k];
                let better = match &leave {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[r] < self.basis[*best])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else { return Err(Unbounded) };
            self.pivot(r, k);
        }
    }

    fn basic_values(&self, count: usize) -> Vec<Rational> {
        let rhs = self.cols();
        let mut x = vec![Rational::zero(); count];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < count {
                x[b] = row[rhs].clone();
            }
        }
        x
    }
}

/// Solves a general LP exactly with the two-phase simplex method.
pub fn simplex_solve(problem: &LpProblem) -> Result<LpSolution, LpError> {
    let n = problem.objective.len();
    if problem.lower_bounds.len() != n {
        return Err(LpError::Dimension { expected: n, found: problem.lower_bounds.len() });
    }
    if let Some(c) = problem.constraints.iter().find(|c| c.coeffs.len() != n) {
        return Err(LpError::Dimension { expected: n, found: c.coeffs.len() });
    }

    // Shift to x' = x − lb ≥ 0 and make every right-hand side non-negative.
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = problem
        .constraints
        .iter()
        .map(|c| {
            let rhs = &c.rhs - dot(&c.coeffs, &problem.lower_bounds);
            if rhs.is_negative() {
                let flipped = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|a| -a).collect(), flipped, -rhs)
            } else {
                (c.coeffs.clone(), c.relation, rhs)
            }
        })
        .collect();

    let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let artificial_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let first_artificial = n + slack_count;
    let cols = first_artificial + artificial_count;

    let mut tableau_rows = Vec::with_capacity(rows.len());
    let mut basis = Vec::with_capacity(rows.len());
    let (mut next_slack, mut next_artificial) = (n, first_artificial);
    for (coeffs, relation, rhs) in rows.drain(..) {
        let mut row = vec![Rational::zero(); cols + 1];
        row[..n].clone_from_slice(&coeffs);
        row[cols] = rhs;
        match relation {
            Relation::Le => {
                row[next_slack] = Rational::from_integer(1.into());
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = Rational::from_integer((-1).into());
                next_slack += 1;
                row[next_artificial] = Rational::from_integer(1.into());
                basis.push(next_artificial);
                next_artificial += 1;
            }
            Relation::Eq => {
                row[next_artificial] = Rational::from_integer(1.into());
                basis.push(next_artificial);
                next_artificial += 1;
            }
        }
        tableau_rows.push(row);
    }
    let mut tab = Tableau { rows: tableau_rows, basis, z: vec![Rational::zero(); cols + 1] };

    if artificial_count > 0 {
        let mut phase_one = vec![Rational::zero(); cols];
        for c in phase_one.iter_mut().skip(first_artificial) {
            *c = Rational::from_integer(1.into());
        }
        tab.price(&phase_one);
        if tab.optimize(|_| true).is_err() {
            return Err(LpError::Verification("phase one reported unbounded".into()));
        }
        if !tab.z[cols].is_zero() {
            return Ok(LpSolution::Infeasible);
        }
        // Drive artificial variables out of the basis; drop redundant rows.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= first_artificial {
                match (0..first_artificial).find(|&k| !tab.rows[r][k].is_zero()) {
                    Some(k) => tab.pivot(r, k),
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut objective = problem.objective.clone();
    objective.resize(cols, Rational::zero());
    tab.price(&objective);
    if tab.optimize(|k| k < first_artificial).is_err() {
        return Ok(LpSolution::Unbounded);
    }

    let shifted = tab.basic_values(n);
    let assignment: Vec<Rational> =
        shifted.iter().zip(&problem.lower_bounds).map(|(x, lb)| x + lb).collect();
    if !problem.is_feasible_point(&assignment) {
        return Err(LpError::Verification("simplex point violates a constraint".into()));
    }
    let value = dot(&problem.objective, &assignment);
    Ok(LpSolution::Optimal { value, assignment })
}

/// Solution of a covering LP together with its dual certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringSolution {
    pub value: Rational,
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
}

/// `min c · x` subject to `A x ≥ b`, `x ≥ 0`, for `c ≥ 0`.
///
/// Tall systems are solved by row generation: a small active set is solved
/// exactly and the most violated remaining rows are added until none is
/// left. The returned primal and dual are checked for feasibility and equal
/// objective values against the full system. `Ok(None)` means the primal is
/// infeasible.
pub fn solve_covering(
    c: &[Rational],
    a: &[Vec<Rational>],
    b: &[Rational],
) -> Result<Option<CoveringSolution>, LpError> {
    let n = c.len();
    let k = a.len();
    if b.len() != k {
        return Err(LpError::Dimension { expected: k, found: b.len() });
    }
    if let Some(row) = a.iter().find(|row| row.len() != n) {
        return Err(LpError::Dimension { expected: n, found: row.len() });
    }
    if c.iter().any(Signed::is_negative) {
        return Err(LpError::NegativeCovering);
    }
    let batch = n.max(1);
    if k <= 4 * batch {
        let all: Vec<usize> = (0..k).collect();
        return match solve_active(c, a, b, &all) {
            Some((primal, dual)) => certify(c, a, b, primal, dual).map(Some),
            None => Ok(None),
        };
    }

    let mut active: Vec<usize> = (0..k).collect();
    active.sort_by(|&x, &y| b[y].cmp(&b[x]));
    active.truncate(batch);
    let mut in_active = vec![false; k];
    for &r in &active {
        in_active[r] = true;
    }
    loop {
        let Some((primal, sub_dual)) = solve_active(c, a, b, &active) else {
            return Ok(None);
        };
        let mut violated: Vec<(Rational, usize)> = (0..k)
            .filter(|&r| !in_active[r])
            .filter_map(|r| {
                let covered = dot(&a[r], &primal);
                (covered < b[r]).then(|| (&b[r] - covered, r))
            })
            .collect();
        if violated.is_empty() {
            let mut dual = vec![Rational::zero(); k];
            for (&r, y) in active.iter().zip(sub_dual) {
                dual[r] = y;
            }
            return certify(c, a, b, primal, dual).map(Some);
        }
        violated.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        for (_, r) in violated.into_iter().take(batch) {
            in_active[r] = true;
            active.push(r);
        }
    }
}

/// Runs the simplex method on the dual of the covering LP restricted to
/// the `active` rows: `max b · y`, `Aᵀ y ≤ c`, `y ≥ 0`, whose slack basis is
/// feasible from the start. The primal point is read off the reduced costs.
fn solve_active(
    c: &[Rational],
    a: &[Vec<Rational>],
    b: &[Rational],
    active: &[usize],
) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let n = c.len();
    let k = active.len();
    let cols = k + n;
    let rows = (0..n)
        .map(|j| {
            let mut row = Vec::with_capacity(cols + 1);
            row.extend(active.iter().map(|&r| a[r][j].clone()));
            row.extend((0..n).map(|s| Rational::from_integer(i32::from(s == j).into())));
            row.push(c[j].clone());
            row
        })
        .collect();
    let mut tab = Tableau { rows, basis: (k..cols).collect(), z: vec![Rational::zero(); cols + 1] };
    let objective: Vec<Rational> = active.iter().map(|&r| -&b[r]).collect();
    tab.price(&objective);
    tab.optimize(|_| true).ok()?;
    Some((tab.z[k..cols].to_vec(), tab.basic_values(k)))
}

fn certify(
    c: &[Rational],
    a: &[Vec<Rational>],
    b: &[Rational],
    primal: Vec<Rational>,
    dual: Vec<Rational>,
) -> Result<CoveringSolution, LpError> {
    let value = dot(c, &primal);
    let primal_ok = primal.iter().all(|x| !x.is_negative())
        && a.iter().zip(b).all(|(row, bi)| dot(row, &primal) >= *bi);
    let dual_ok = dual.iter().all(|y| !y.is_negative())
        && (0..c.len()).all(|j| {
            let column: Rational =
                a.iter().zip(&dual).filter(|(_, y)| !y.is_zero()).map(|(row, y)| &row[j] * y).sum();
            column <= c[j]
        });
    if !primal_ok || !dual_ok || value != dot(b, &dual) {
        return Err(LpError::Verification("covering LP certificate does not close".into()));
    }
    Ok(CoveringSolution { value, primal, dual })
}
