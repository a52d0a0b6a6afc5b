//! State-contingent acts with nonnegative rational payoffs in utils.

use crate::rational::Rational;
use crate::space::Hypothesis;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActError {
    #[error("payoff at state {state} is negative: {value}")]
    NegativePayoff { state: usize, value: Rational },
    #[error("acts live on different state spaces ({left} vs {right} states)")]
    DimensionMismatch { left: usize, right: usize },
    #[error("mixture weight must lie in [0, 1], got {0}")]
    BadAlpha(Rational),
}

/// An act `f: states -> utils`, one nonnegative payoff per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Act {
    payoffs: Vec<Rational>,
}

impl Act {
    pub fn new(payoffs: Vec<Rational>) -> Result<Self, ActError> {
        for (state, value) in payoffs.iter().enumerate() {
            if value.is_negative() {
                return Err(ActError::NegativePayoff {
                    state,
                    value: value.clone(),
                });
            }
        }
        Ok(Self { payoffs })
    }

    /// The constant act paying `x` in every state.
    pub fn constant(n: usize, x: Rational) -> Result<Self, ActError> {
        Self::new(vec![x; n])
    }

    /// The bet `b_H`: pays 1 on `h`, 0 elsewhere.
    pub fn bet(n: usize, h: Hypothesis) -> Self {
        let payoffs = (0..n)
            .map(|i| {
                if h.contains(i) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Self { payoffs }
    }

    pub fn n(&self) -> usize {
        self.payoffs.len()
    }

    pub fn payoff(&self, state: usize) -> &Rational {
        &self.payoffs[state]
    }

    pub fn payoffs(&self) -> &[Rational] {
        &self.payoffs
    }

    fn check_dims(&self, other: &Act) -> Result<(), ActError> {
        if self.n() != other.n() {
            return Err(ActError::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// Pointwise maximum `f ∨ g`.
    pub fn pointwise_max(&self, other: &Act) -> Result<Act, ActError> {
        self.check_dims(other)?;
        Ok(Act {
            payoffs: self
                .payoffs
                .iter()
                .zip(&other.payoffs)
                .map(|(a, b)| if a >= b { a.clone() } else { b.clone() })
                .collect(),
        })
    }

    /// Pointwise minimum `f ∧ g`.
    pub fn pointwise_min(&self, other: &Act) -> Result<Act, ActError> {
        self.check_dims(other)?;
        Ok(Act {
            payoffs: self
                .payoffs
                .iter()
                .zip(&other.payoffs)
                .map(|(a, b)| if a <= b { a.clone() } else { b.clone() })
                .collect(),
        })
    }

    /// The mixture `alpha·f + (1−alpha)·g`.
    pub fn mix(&self, alpha: &Rational, other: &Act) -> Result<Act, ActError> {
        self.check_dims(other)?;
        if alpha.is_negative() || *alpha > Rational::one() {
            return Err(ActError::BadAlpha(alpha.clone()));
        }
        let beta = Rational::one() - alpha;
        Ok(Act {
            payoffs: self
                .payoffs
                .iter()
                .zip(&other.payoffs)
                .map(|(a, b)| alpha * a + &beta * b)
                .collect(),
        })
    }

    /// The splice `f_H g`: agrees with `self` on `h`, with `other` elsewhere.
    pub fn splice(&self, h: Hypothesis, other: &Act) -> Result<Act, ActError> {
        self.check_dims(other)?;
        Ok(Act {
            payoffs: self
                .payoffs
                .iter()
                .zip(&other.payoffs)
                .enumerate()
                .map(|(i, (a, b))| if h.contains(i) { a.clone() } else { b.clone() })
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn construction_rejects_negative_payoffs() {
        let err = Act::new(vec![r(1, 2), r(-1, 3)]).unwrap_err();
        assert!(matches!(err, ActError::NegativePayoff { state: 1, .. }));
    }

    #[test]
    fn bet_lattice_identities() {
        // b_G ∨ b_H = b_{G∪H} and b_G ∧ b_H = b_{G∩H}, exhaustive on 4 states
        let n = 4;
        for g in Hypothesis::all(n) {
            for h in Hypothesis::all(n) {
                let bg = Act::bet(n, g);
                let bh = Act::bet(n, h);
                assert_eq!(
                    bg.pointwise_max(&bh).unwrap(),
                    Act::bet(n, g.union(h)),
                    "∨ failed at {g:?}, {h:?}"
                );
                assert_eq!(
                    bg.pointwise_min(&bh).unwrap(),
                    Act::bet(n, g.intersection(h)),
                    "∧ failed at {g:?}, {h:?}"
                );
            }
        }
    }

    #[test]
    fn splice_and_mix_edges() {
        let f = Act::new(vec![r(3, 1), r(1, 1)]).unwrap();
        let g = Act::new(vec![r(0, 1), r(2, 1)]).unwrap();
        // empty-event splice yields g
        assert_eq!(f.splice(Hypothesis::EMPTY, &g).unwrap(), g);
        assert_eq!(f.splice(Hypothesis::full(2), &g).unwrap(), f);
        // idempotent max
        assert_eq!(f.pointwise_max(&f).unwrap(), f);
        let half = r(1, 2);
        let m = f.mix(&half, &g).unwrap();
        assert_eq!(m.payoff(0), &r(3, 2));
        assert_eq!(m.payoff(1), &r(3, 2));
        assert!(f.mix(&r(3, 2), &g).is_err());
        assert!(f
            .mix(&half, &Act::constant(3, Rational::zero()).unwrap())
            .is_err());
    }
}
