//! Manipulability of contract classes.
//!
//! A class is manipulable when some instance lets an ambiguous contract built
//! from the class beat every single contract of the class. For classes
//! closed under scaling this happens exactly when two members cross
//! properly, and any crossing pair yields an explicit witness instance.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ambiguous::{self, validate, AmbiguousError};
use crate::gap::{self, GapError};
use crate::lp::{self, LpError};
use crate::model::{AmbiguousContract, Certificate, Contract, Instance, ModelError};
use crate::rational::{int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManipError {
    #[error("the evaluation grid is empty")]
    EmptyGrid,
    #[error("invalid contract curve: {0}")]
    InvalidCurve(String),
    #[error("curve is not defined at {0}")]
    NotDefinedAt(Rational),
    #[error("the points do not witness a crossing")]
    NotCrossing,
    #[error("weights do not form a distribution over the rewards")]
    BadDistribution,
    #[error("the two contracts have different expected payments under the weights")]
    Unbalanced,
    #[error("the two contracts agree on the support of the weights")]
    Indistinguishable,
    #[error("witness failed verification: {0}")]
    WitnessFailed(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Ambiguous(#[from] AmbiguousError),
    #[error(transparent)]
    Gap(#[from] GapError),
}

/// A contract written as a function of the realised reward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractCurve {
    /// `α · x`
    Linear { alpha: Rational },
    /// `α · x^d`
    Power { alpha: Rational, degree: u32 },
    /// `Σ_k a_k x^k`
    Polynomial { coeffs: Vec<Rational> },
    /// Payments listed at finitely many rewards.
    Table { points: Vec<(Rational, Rational)> },
}

impl ContractCurve {
    pub fn linear(alpha: Rational) -> Result<Self, ManipError> {
        non_negative(&alpha, "slope")?;
        Ok(Self::Linear { alpha })
    }

    pub fn power(alpha: Rational, degree: u32) -> Result<Self, ManipError> {
        non_negative(&alpha, "scale")?;
        Ok(Self::Power { alpha, degree })
    }

    pub fn polynomial(coeffs: Vec<Rational>) -> Result<Self, ManipError> {
        for a in &coeffs {
            non_negative(a, "coefficient")?;
        }
        Ok(Self::Polynomial { coeffs })
    }

    pub fn table(points: Vec<(Rational, Rational)>) -> Result<Self, ManipError> {
        for (k, (x, t)) in points.iter().enumerate() {
            non_negative(t, "payment")?;
            if points[..k].iter().any(|(y, _)| y == x) {
                return Err(ManipError::InvalidCurve(format!("repeated reward {x}")));
            }
        }
        Ok(Self::Table { points })
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        match self {
            Self::Linear { alpha } => Some(alpha * x),
            Self::Power { alpha, degree } => Some(alpha * num_traits::pow(x.clone(), *degree as usize)),
            Self::Polynomial { coeffs } => {
                Some(coeffs.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a))
            }
            Self::Table { points } => points.iter().find(|(y, _)| y == x).map(|(_, t)| t.clone()),
        }
    }

    fn at(&self, x: &Rational) -> Result<Rational, ManipError> {
        self.eval(x).ok_or_else(|| ManipError::NotDefinedAt(x.clone()))
    }

    /// Payment vector over the given rewards.
    pub fn restrict(&self, rewards: &[Rational]) -> Result<Contract, ManipError> {
        Ok(Contract::new(rewards.iter().map(|r| self.at(r)).collect::<Result<_, _>>()?)?)
    }
}

fn non_negative(v: &Rational, what: &str) -> Result<(), ManipError> {
    if v.is_negative() {
        return Err(ManipError::InvalidCurve(format!("negative {what} {v}")));
    }
    Ok(())
}

/// A contract class closed under non-negative scaling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractClass {
    /// `{α x : α ≥ 0}`
    Linear,
    /// `{α x^d : α ≥ 0}` for a fixed `d`.
    Power { degree: u32 },
    /// The scaling closure of finitely many curves.
    Curves(Vec<ContractCurve>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NpcVerdict {
    /// Members are totally ordered pointwise, so no pair can cross.
    HoldsAnalytically,
    /// No pair crosses on the supplied grid.
    HoldsOnGrid,
    /// Curves `first` and `second` cross: `first` is higher at `above` and
    /// lower at `below`.
    Violated { first: usize, second: usize, above: Rational, below: Rational },
}

/// Grid points `(x₁, x₂)` with `t(x₁) > t'(x₁)` and `t(x₂) < t'(x₂)`, the
/// first of each in grid order.
pub fn crossing_points(
    t: &ContractCurve,
    t_prime: &ContractCurve,
    grid: &[Rational],
) -> Result<Option<(Rational, Rational)>, ManipError> {
    if grid.is_empty() {
        return Err(ManipError::EmptyGrid);
    }
    let mut above = None;
    let mut below = None;
    for x in grid {
        let (a, b) = (t.at(x)?, t_prime.at(x)?);
        if a > b && above.is_none() {
            above = Some(x.clone());
        }
        if a < b && below.is_none() {
            below = Some(x.clone());
        }
    }
    Ok(above.zip(below))
}

/// Checks the no-proper-crossing condition.
pub fn npc_check(class: &ContractClass, grid: &[Rational]) -> Result<NpcVerdict, ManipError> {
    let curves = match class {
        ContractClass::Linear | ContractClass::Power { .. } => {
            return Ok(NpcVerdict::HoldsAnalytically)
        }
        ContractClass::Curves(curves) => curves,
    };
    if curves.iter().all(|c| matches!(c, ContractCurve::Linear { .. })) {
        return Ok(NpcVerdict::HoldsAnalytically);
    }
    if let Some(ContractCurve::Power { degree, .. }) = curves.first() {
        if curves.iter().all(|c| matches!(c, ContractCurve::Power { degree: d, .. } if d == degree)) {
            return Ok(NpcVerdict::HoldsAnalytically);
        }
    }
    for a in 0..curves.len() {
        for b in a + 1..curves.len() {
            if let Some((above, below)) = crossing_points(&curves[a], &curves[b], grid)? {
                return Ok(NpcVerdict::Violated { first: a, second: b, above, below });
            }
        }
    }
    if grid.is_empty() {
        return Err(ManipError::EmptyGrid);
    }
    Ok(NpcVerdict::HoldsOnGrid)
}

/// Weights on `(x₁, x₂)` under which `t` and `t'` have equal expectation.
pub fn q_from_crossing(
    t: &ContractCurve,
    t_prime: &ContractCurve,
    x1: &Rational,
    x2: &Rational,
) -> Result<(Rational, Rational), ManipError> {
    let d1 = t.at(x1)? - t_prime.at(x1)?;
    let d2 = t.at(x2)? - t_prime.at(x2)?;
    if !d1.is_positive() || !d2.is_negative() {
        return Err(ManipError::NotCrossing);
    }
    let total = &d1 - &d2;
    Ok((-d2 / &total, d1 / total))
}

/// Balancing weights over `rewards`, supported on the first point where `t`
/// is above `t'` and the first where it is below.
pub fn balancing_weights(
    t: &ContractCurve,
    t_prime: &ContractCurve,
    rewards: &[Rational],
) -> Result<Vec<Rational>, ManipError> {
    let (x1, x2) = crossing_points(t, t_prime, rewards)?.ok_or(ManipError::NotCrossing)?;
    let (q1, q2) = q_from_crossing(t, t_prime, &x1, &x2)?;
    let mut q = vec![Rational::zero(); rewards.len()];
    q[rewards.iter().position(|r| *r == x1).expect("grid point")] = q1;
    q[rewards.iter().position(|r| *r == x2).expect("grid point")] = q2;
    Ok(q)
}

/// An instance on which `{t, t'}` implements an action that no single
/// contract implements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub instance: Instance,
    pub tau: AmbiguousContract,
    /// Sorted index of the mixed action.
    pub target: usize,
    pub target_cost: Rational,
    pub certificate: Certificate,
    pub target_implementable: bool,
}

/// Builds the witness: a point-mass action per reward costing
/// `min(t(r_j), t'(r_j))`, plus the `q`-mixture costing `Σ q_j t(r_j)`.
pub fn build_witness(
    t: &ContractCurve,
    t_prime: &ContractCurve,
    rewards: &[Rational],
    q: &[Rational],
) -> Result<Witness, ManipError> {
    let m = rewards.len();
    if q.len() != m || q.iter().any(Signed::is_negative) || !q.iter().sum::<Rational>().is_one() {
        return Err(ManipError::BadDistribution);
    }
    let a: Vec<Rational> = rewards.iter().map(|r| t.at(r)).collect::<Result<_, _>>()?;
    let b: Vec<Rational> = rewards.iter().map(|r| t_prime.at(r)).collect::<Result<_, _>>()?;
    let expected = |v: &[Rational]| q.iter().zip(v).map(|(x, y)| x * y).sum::<Rational>();
    let target_cost = expected(&a);
    if target_cost != expected(&b) {
        return Err(ManipError::Unbalanced);
    }
    if !(0..m).any(|j| q[j].is_positive() && a[j] != b[j]) {
        return Err(ManipError::Indistinguishable);
    }

    let mut costs: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x.min(y).clone()).collect();
    costs.push(target_cost.clone());
    let mut probs: Vec<Vec<Rational>> = (0..m)
        .map(|j| (0..m).map(|k| int(i64::from(j == k))).collect())
        .collect();
    probs.push(q.to_vec());
    let instance = Instance::new(costs, rewards.to_vec(), probs)?;
    let target = instance.action_position(m).expect("mixed action present");
    let tau = AmbiguousContract::new(vec![
        Contract::new(instance.payments_from_original(&a))?,
        Contract::new(instance.payments_from_original(&b))?,
    ])?;

    let certificate = validate(&instance, &tau, target);
    let target_implementable = lp::implementable(&instance, target)?;
    let payment = crate::model::expected_payment(&instance, target, &tau.contracts()[0]);
    if !certificate.passed() {
        return Err(ManipError::WitnessFailed("pair does not incentivise the mixed action".into()));
    }
    if target_implementable {
        return Err(ManipError::WitnessFailed("a single contract implements the mixed action".into()));
    }
    if payment != target_cost {
        return Err(ManipError::WitnessFailed("pair does not pay exactly the cost".into()));
    }
    Ok(Witness { instance, tau, target, target_cost, certificate, target_implementable })
}

/// Witness from the first crossing of two curves on a grid, using the two
/// crossing points as the rewards.
pub fn witness_from_grid(
    t: &ContractCurve,
    t_prime: &ContractCurve,
    grid: &[Rational],
) -> Result<Option<Witness>, ManipError> {
    let Some((x1, x2)) = crossing_points(t, t_prime, grid)? else {
        return Ok(None);
    };
    let (q1, q2) = q_from_crossing(t, t_prime, &x1, &x2)?;
    let (rewards, q) = if x1 < x2 { (vec![x1, x2], vec![q1, q2]) } else { (vec![x2, x1], vec![q2, q1]) };
    build_witness(t, t_prime, &rewards, &q).map(Some)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Witness(Box<Witness>),
    /// Utilities of the best single and best ambiguous contract on a fixture.
    Gap { fixture: String, single: Rational, ambiguous: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassVerdict {
    NonManipulable { analytic: bool },
    Manipulable { evidence: Vec<Evidence> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub class: String,
    pub verdict: ClassVerdict,
}

/// Grid used when the caller does not supply one.
pub fn default_grid() -> Vec<Rational> {
    vec![rat(1, 4), rat(1, 2), int(1), int(2), int(4)]
}

/// Verdicts for linear, quadratic, polynomial, monotone and unrestricted
/// contracts.
pub fn analyze_builtin_classes(grid: &[Rational]) -> Result<Vec<ClassReport>, ManipError> {
    let mut reports = Vec::new();
    for (name, class) in
        [("linear", ContractClass::Linear), ("power(d=2)", ContractClass::Power { degree: 2 })]
    {
        let analytic = npc_check(&class, grid)? == NpcVerdict::HoldsAnalytically;
        reports.push(ClassReport { class: name.into(), verdict: ClassVerdict::NonManipulable { analytic } });
    }

    let square = ContractCurve::power(int(1), 2)?;
    let quartic = ContractCurve::power(int(1), 4)?;
    let polynomial = ContractClass::Curves(vec![square.clone(), quartic.clone()]);
    let verdict = match npc_check(&polynomial, grid)? {
        NpcVerdict::Violated { .. } => {
            let witness = witness_from_grid(&square, &quartic, grid)?.ok_or(ManipError::NotCrossing)?;
            ClassVerdict::Manipulable { evidence: vec![Evidence::Witness(Box::new(witness))] }
        }
        v => ClassVerdict::NonManipulable { analytic: v == NpcVerdict::HoldsAnalytically },
    };
    reports.push(ClassReport { class: "polynomial".into(), verdict });

    let rewards = vec![int(0), int(4), int(8)];
    let flat = ContractCurve::table(rewards.iter().cloned().zip([int(0), int(2), int(2)]).collect())?;
    let steep = ContractCurve::table(rewards.iter().cloned().zip([int(0), int(0), int(4)]).collect())?;
    let q = balancing_weights(&flat, &steep, &rewards)?;
    let witness = build_witness(&flat, &steep, &rewards, &q)?;
    let omega = gap::gen_fixture(&gap::FixtureSpec::MonotoneOmega {
        n: 5,
        eps: rat(1, 10),
        gamma: rat(1, 100),
        delta: rat(1, 100),
    })?;
    let single = lp::optimal_single(&omega.instance, true)?.principal_utility;
    let amb = ambiguous::solve_monotone(&omega.instance)?.principal_utility;
    reports.push(ClassReport {
        class: "monotone".into(),
        verdict: ClassVerdict::Manipulable {
            evidence: vec![
                Evidence::Witness(Box::new(witness)),
                Evidence::Gap { fixture: "monotone_omega".into(), single, ambiguous: amb },
            ],
        },
    });

    let example = gap::gen_fixture(&gap::FixtureSpec::Example1)?;
    let single = lp::optimal_single(&example.instance, false)?.principal_utility;
    let amb = ambiguous::solve_general(&example.instance)?.principal_utility;
    reports.push(ClassReport {
        class: "all".into(),
        verdict: ClassVerdict::Manipulable {
            evidence: vec![Evidence::Gap { fixture: "example1".into(), single, ambiguous: amb }],
        },
    });
    Ok(reports)
}
