//! Finite state spaces and hypotheses.
//!
//! A hypothesis is a subset of the state space, encoded as a bitmask with
//! bit `i` standing for state `i`. Mask algebra supports up to
//! [`MAX_SPACE_STATES`] states; operations that materialize a full
//! `2^n`-entry table (capacities, interpretation tables) are capped at
//! [`MAX_TABLE_STATES`], and explicit implication matrices at
//! [`MAX_RELATION_STATES`].

use std::fmt;
use thiserror::Error;

/// Mask algebra works up to this many states.
pub const MAX_SPACE_STATES: usize = 30;
/// Dense `2^n` tables (capacities, interpretations) are capped here.
pub const MAX_TABLE_STATES: usize = 16;
/// Explicit implication bit-matrices are capped here.
pub const MAX_RELATION_STATES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("state space must have at least one state")]
    Empty,
    #[error("state space has {0} states, limit is {MAX_SPACE_STATES}")]
    TooLarge(usize),
    #[error("duplicate state label {0:?}")]
    DuplicateLabel(String),
}

/// A subset of a finite state space, as a bitmask. Bit `i` = state `i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Hypothesis(u32);

impl Hypothesis {
    pub const EMPTY: Hypothesis = Hypothesis(0);

    pub fn from_mask(mask: u32) -> Self {
        Hypothesis(mask)
    }

    pub fn singleton(state: usize) -> Self {
        debug_assert!(state < MAX_SPACE_STATES);
        Hypothesis(1 << state)
    }

    /// The full set on an `n`-state space.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_SPACE_STATES);
        if n == 32 {
            Hypothesis(u32::MAX)
        } else {
            Hypothesis((1u32 << n) - 1)
        }
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn card(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, state: usize) -> bool {
        self.0 & (1 << state) != 0
    }

    pub fn is_subset_of(self, other: Hypothesis) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Hypothesis) -> Hypothesis {
        Hypothesis(self.0 | other.0)
    }

    pub fn intersection(self, other: Hypothesis) -> Hypothesis {
        Hypothesis(self.0 & other.0)
    }

    pub fn difference(self, other: Hypothesis) -> Hypothesis {
        Hypothesis(self.0 & !other.0)
    }

    pub fn symmetric_difference(self, other: Hypothesis) -> Hypothesis {
        Hypothesis(self.0 ^ other.0)
    }

    pub fn complement(self, n: usize) -> Hypothesis {
        Hypothesis(!self.0 & Hypothesis::full(n).0)
    }

    /// Indices of the states in this hypothesis, ascending.
    pub fn states(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    /// All `2^n` hypotheses on an `n`-state space, in ascending mask order.
    pub fn all(n: usize) -> impl Iterator<Item = Hypothesis> {
        debug_assert!(n <= MAX_SPACE_STATES);
        (0..(1u64 << n)).map(|m| Hypothesis(m as u32))
    }

    /// All subsets of `self`, in ascending mask order.
    pub fn subsets(self) -> impl Iterator<Item = Hypothesis> {
        let m = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let s = next?;
            // (s - m) & m steps through the submasks of m in ascending order
            next = if s == m {
                None
            } else {
                Some(s.wrapping_sub(m) & m)
            };
            Some(Hypothesis(s))
        })
    }

    /// All supersets of `self` within an `n`-state space, ascending.
    pub fn supersets(self, n: usize) -> impl Iterator<Item = Hypothesis> {
        let h = self;
        h.complement(n).subsets().map(move |s| h.union(s))
    }

    /// Little-endian binary string (`"01011"`: char `i` = state `i`).
    pub fn to_bit_string(self, n: usize) -> String {
        (0..n)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    /// Parse a little-endian binary string produced by [`Self::to_bit_string`].
    pub fn from_bit_string(s: &str) -> Option<(Hypothesis, usize)> {
        if s.is_empty() || s.len() > MAX_SPACE_STATES {
            return None;
        }
        let mut mask = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => mask |= 1 << i,
                '0' => {}
                _ => return None,
            }
        }
        Some((Hypothesis(mask), s.len()))
    }
}

impl fmt::Debug for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({:#b})", self.0)
    }
}

/// An ordered finite set of named states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    labels: Vec<String>,
}

impl StateSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, SpaceError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(SpaceError::Empty);
        }
        if labels.len() > MAX_SPACE_STATES {
            return Err(SpaceError::TooLarge(labels.len()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(SpaceError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// `n` anonymous states `s0..s{n-1}`.
    pub fn anonymous(n: usize) -> Result<Self, SpaceError> {
        Self::new((0..n).map(|i| format!("s{i}")))
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, state: usize) -> &str {
        &self.labels[state]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full(&self) -> Hypothesis {
        Hypothesis::full(self.n())
    }

    /// Event named by a list of labels.
    pub fn event(&self, labels: &[&str]) -> Option<Hypothesis> {
        let mut h = Hypothesis::EMPTY;
        for l in labels {
            h = h.union(Hypothesis::singleton(self.index_of(l)?));
        }
        Some(h)
    }

    /// Render a hypothesis as `{label, label}`.
    pub fn describe(&self, h: Hypothesis) -> String {
        let names: Vec<&str> = h.states().map(|i| self.label(i)).collect();
        format!("{{{}}}", names.join(", "))
    }
}
