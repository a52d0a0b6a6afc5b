//! Probability measures on finite state spaces.

use crate::rational::Rational;
use crate::space::Hypothesis;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("weight at state {state} is negative: {value}")]
    NegativeWeight { state: usize, value: Rational },
    #[error("weights sum to {total}, expected 1")]
    NotNormalized { total: Rational },
    #[error("measure has no states")]
    Empty,
}

/// A probability measure: nonnegative state weights summing to one.
/// `mu(H)` is the sum of the weights of the states in `H` (additive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    weights: Vec<Rational>,
}

impl Measure {
    pub fn new(weights: Vec<Rational>) -> Result<Self, MeasureError> {
        if weights.is_empty() {
            return Err(MeasureError::Empty);
        }
        for (state, value) in weights.iter().enumerate() {
            if value.is_negative() {
                return Err(MeasureError::NegativeWeight {
                    state,
                    value: value.clone(),
                });
            }
        }
        let total: Rational = weights.iter().sum();
        if total != Rational::one() {
            return Err(MeasureError::NotNormalized { total });
        }
        Ok(Self { weights })
    }

    pub fn uniform(n: usize) -> Result<Self, MeasureError> {
        if n == 0 {
            return Err(MeasureError::Empty);
        }
        Self::new(vec![Rational::ratio(1, n as i64); n])
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, state: usize) -> &Rational {
        &self.weights[state]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// `mu(H)`.
    pub fn of(&self, h: Hypothesis) -> Rational {
        h.states().map(|i| &self.weights[i]).sum()
    }

    /// States with positive weight.
    pub fn support(&self) -> Hypothesis {
        let mut s = Hypothesis::EMPTY;
        for (i, w) in self.weights.iter().enumerate() {
            if !w.is_zero() {
                s = s.union(Hypothesis::singleton(i));
            }
        }
        s
    }

    pub fn full_support(&self) -> bool {
        self.support() == Hypothesis::full(self.n())
    }
}
