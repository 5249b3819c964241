use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use super::ModelError;
use crate::rational::Rational;

/// A non-negative payment per outcome, in sorted outcome order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Contract(Vec<Rational>);

impl Contract {
    pub fn new(payments: Vec<Rational>) -> Result<Self, ModelError> {
        if payments.is_empty() {
            return Err(ModelError::NoOutcomes);
        }
        if let Some(j) = payments.iter().position(Signed::is_negative) {
            return Err(ModelError::NegativePayment { outcome: j });
        }
        Ok(Self(payments))
    }

    pub fn zero(m: usize) -> Self {
        Self(vec![Rational::zero(); m])
    }

    /// Single-outcome-payment contract paying `amount` on outcome `j`.
    pub fn sop(m: usize, j: usize, amount: Rational) -> Self {
        assert!(!amount.is_negative(), "payments are non-negative");
        let mut t = vec![Rational::zero(); m];
        t[j] = amount;
        Self(t)
    }

    /// Step contract paying `amount` on every outcome `j ≥ k`.
    pub fn step(m: usize, k: usize, amount: Rational) -> Self {
        assert!(!amount.is_negative(), "payments are non-negative");
        let t = (0..m)
            .map(|j| if j >= k { amount.clone() } else { Rational::zero() })
            .collect();
        Self(t)
    }

    pub fn payments(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_payments(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_sop(&self) -> bool {
        self.0.iter().filter(|t| !t.is_zero()).count() == 1
    }

    pub fn is_step(&self) -> bool {
        let Some(k) = self.0.iter().position(|t| !t.is_zero()) else {
            return false;
        };
        self.0[k..].iter().all(|t| *t == self.0[k])
    }

    pub fn is_monotone(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Weakly higher everywhere and different somewhere.
    pub fn dominates(&self, other: &Contract) -> bool {
        self != other && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// The two contracts cross in both directions.
    pub fn has_proper_crossing(&self, other: &Contract) -> bool {
        let above = self.0.iter().zip(&other.0).any(|(a, b)| a > b);
        let below = self.0.iter().zip(&other.0).any(|(a, b)| a < b);
        above && below
    }
}

impl fmt::Display for Contract {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, t) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// A non-empty set of distinct contracts over the same outcomes.
///
/// Members are kept in lexicographic order, so equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AmbiguousContract(Vec<Contract>);

impl AmbiguousContract {
    /// Builds the set, merging exact duplicates.
    pub fn new(mut contracts: Vec<Contract>) -> Result<Self, ModelError> {
        let Some(first) = contracts.first() else {
            return Err(ModelError::EmptyAmbiguousContract);
        };
        let m = first.len();
        if let Some(bad) = contracts.iter().find(|t| t.len() != m) {
            return Err(ModelError::Ragged { row: 0, expected: m, found: bad.len() });
        }
        contracts.sort();
        contracts.dedup();
        Ok(Self(contracts))
    }

    pub fn single(contract: Contract) -> Self {
        Self(vec![contract])
    }

    pub fn contracts(&self) -> &[Contract] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn m(&self) -> usize {
        self.0[0].len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Contract> {
        self.0.iter()
    }

    pub fn contains(&self, t: &Contract) -> bool {
        self.0.binary_search(t).is_ok()
    }

    pub fn all_sop(&self) -> bool {
        self.0.iter().all(Contract::is_sop)
    }

    pub fn all_step(&self) -> bool {
        self.0.iter().all(Contract::is_step)
    }

    pub fn all_monotone(&self) -> bool {
        self.0.iter().all(Contract::is_monotone)
    }

    /// Repeatedly drops a member that dominates another member, taking the
    /// lexicographically largest such member first.
    pub fn prune_dominated(&self) -> Self {
        let mut kept = self.0.clone();
        loop {
            let victim = (0..kept.len())
                .filter(|&a| (0..kept.len()).any(|b| kept[a].dominates(&kept[b])))
                .max_by(|&a, &b| kept[a].cmp(&kept[b]));
            match victim {
                Some(a) => {
                    kept.remove(a);
                }
                None => return Self(kept),
            }
        }
    }
}

impl<'a> IntoIterator for &'a AmbiguousContract {
    type Item = &'a Contract;
    type IntoIter = std::slice::Iter<'a, Contract>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A ratio `p / q` of non-negative rationals where `q = 0 < p` reads as `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtendedRatio {
    Finite(Rational),
    Infinite,
}

impl ExtendedRatio {
    /// `None` for the excluded `0 / 0` case.
    pub fn of(num: &Rational, den: &Rational) -> Option<Self> {
        match (num.is_zero(), den.is_zero()) {
            (true, true) => None,
            (false, true) => Some(Self::Infinite),
            _ => Some(Self::Finite(num / den)),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinite)
    }
}

impl Ord for ExtendedRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => a.cmp(b),
            (Self::Finite(_), Self::Infinite) => Ordering::Less,
            (Self::Infinite, Self::Finite(_)) => Ordering::Greater,
            (Self::Infinite, Self::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtendedRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtendedRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(r) => write!(f, "{r}"),
            Self::Infinite => write!(f, "inf"),
        }
    }
}
