//! Capacities (monotone normalized set functions) and the Choquet integral.
//!
//! A capacity stores one value per subset in a dense table of length `2^n`,
//! so it is capped at [`MAX_TABLE_STATES`] states. A probability measure is
//! the special case of an additive capacity; the Choquet integral against
//! an additive capacity reduces to ordinary expectation.

use crate::act::Act;
use crate::measure::Measure;
use crate::rational::Rational;
use crate::space::{Hypothesis, MAX_TABLE_STATES};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CapacityError {
    #[error("table is missing an entry for mask {missing:#b}")]
    MissingEntry { missing: u32 },
    #[error("table has {got} entries, expected {expected}")]
    WrongTableSize { got: usize, expected: usize },
    #[error("not grounded: value at the empty set is {value}, expected 0")]
    NotGrounded { value: Rational },
    #[error("not normalized: value at the full set is {value}, expected 1")]
    NotNormalized { value: Rational },
    #[error(
        "not monotone: value {smaller_value} at {smaller:#b} exceeds value {larger_value} at {larger:#b}"
    )]
    NotMonotone {
        smaller: u32,
        smaller_value: Rational,
        larger: u32,
        larger_value: Rational,
    },
    #[error("{n} states exceeds the dense-table limit of {MAX_TABLE_STATES}")]
    TooLarge { n: usize },
    #[error("operands live on different state spaces ({left} vs {right} states)")]
    DimensionMismatch { left: usize, right: usize },
}

/// A capacity `nu: 2^Omega -> [0,1]`: grounded, normalized, monotone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Capacity {
    n: usize,
    values: Vec<Rational>,
}

impl Capacity {
    /// Validate a dense table indexed by mask. Checks groundedness at the
    /// empty set, normalization at the full set, and monotonicity, in that
    /// order; the monotonicity witness is the lexicographically smallest
    /// violating pair `(smaller, larger)` by ascending masks.
    pub fn from_values(n: usize, values: Vec<Rational>) -> Result<Self, CapacityError> {
        if n > MAX_TABLE_STATES {
            return Err(CapacityError::TooLarge { n });
        }
        let size = 1usize << n;
        if values.len() != size {
            return Err(CapacityError::WrongTableSize {
                got: values.len(),
                expected: size,
            });
        }
        if !values[0].is_zero() {
            return Err(CapacityError::NotGrounded {
                value: values[0].clone(),
            });
        }
        if values[size - 1] != Rational::one() {
            return Err(CapacityError::NotNormalized {
                value: values[size - 1].clone(),
            });
        }
        // Detect violations on covers (adding one state); by transitivity this
        // is complete. Only on failure do the full ordered scan for the
        // lexicographically smallest witness pair.
        let mut violated = false;
        'detect: for m in 0..size {
            for i in 0..n {
                if m & (1 << i) == 0 && values[m] > values[m | (1 << i)] {
                    violated = true;
                    break 'detect;
                }
            }
        }
        if violated {
            for h in Hypothesis::all(n) {
                for g in h.supersets(n) {
                    if values[h.mask() as usize] > values[g.mask() as usize] {
                        return Err(CapacityError::NotMonotone {
                            smaller: h.mask(),
                            smaller_value: values[h.mask() as usize].clone(),
                            larger: g.mask(),
                            larger_value: values[g.mask() as usize].clone(),
                        });
                    }
                }
            }
            unreachable!("cover scan found a violation but the full scan did not");
        }
        Ok(Self { n, values })
    }

    /// Validate a sparse entry list; every one of the `2^n` masks must be
    /// present exactly once.
    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = (Hypothesis, Rational)>,
    ) -> Result<Self, CapacityError> {
        if n > MAX_TABLE_STATES {
            return Err(CapacityError::TooLarge { n });
        }
        let size = 1usize << n;
        let mut values: Vec<Option<Rational>> = vec![None; size];
        for (h, v) in entries {
            if (h.mask() as usize) < size {
                values[h.mask() as usize] = Some(v);
            }
        }
        let mut table = Vec::with_capacity(size);
        for (mask, v) in values.into_iter().enumerate() {
            match v {
                Some(v) => table.push(v),
                None => {
                    return Err(CapacityError::MissingEntry {
                        missing: mask as u32,
                    })
                }
            }
        }
        Self::from_values(n, table)
    }

    /// The additive capacity induced by a probability measure.
    pub fn from_measure(mu: &Measure) -> Self {
        let n = mu.n();
        let values = Hypothesis::all(n).map(|h| mu.of(h)).collect();
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, h: Hypothesis) -> &Rational {
        &self.values[h.mask() as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Whether `nu(H)` equals the sum of its singleton values for every `H`.
    pub fn is_additive(&self) -> bool {
        Hypothesis::all(self.n).all(|h| {
            let sum: Rational = h
                .states()
                .map(|i| self.value(Hypothesis::singleton(i)))
                .sum();
            *self.value(h) == sum
        })
    }

    /// The Choquet integral of `f` against this capacity: with the distinct
    /// payoff values `x_1 < … < x_k` of `f` and `x_0 = 0`,
    /// `sum_i (x_i − x_{i−1}) · nu({f >= x_i})`.
    pub fn choquet(&self, f: &Act) -> Result<Rational, CapacityError> {
        if f.n() != self.n {
            return Err(CapacityError::DimensionMismatch {
                left: f.n(),
                right: self.n,
            });
        }
        let mut levels: Vec<&Rational> = f.payoffs().iter().collect();
        levels.sort();
        levels.dedup();
        let mut total = Rational::zero();
        let mut prev = Rational::zero();
        for x in levels {
            if x.is_zero() {
                // x_0 = 0 is always the base level
                continue;
            }
            let mut upper = Hypothesis::EMPTY;
            for i in 0..self.n {
                if f.payoff(i) >= x {
                    upper = upper.union(Hypothesis::singleton(i));
                }
            }
            total = total + (x - &prev) * self.value(upper);
            prev = x.clone();
        }
        Ok(total)
    }
}

/// Free-function form of [`Capacity::choquet`].
pub fn choquet_integral(f: &Act, nu: &Capacity) -> Result<Rational, CapacityError> {
    nu.choquet(f)
}
