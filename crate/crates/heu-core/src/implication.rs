//! Subjective implication relations over hypotheses.
//!
//! A relation `H ⟹ G` records that the agent perceives `H` to entail `G`.
//! Four axioms characterize the relations that arise from interpretation
//! maps:
//!
//! - `I1` transitivity: `H ⟹ G` and `G ⟹ F` imply `H ⟹ F`;
//! - `I2` deduction: `H ⟹ G` and `H' ⟹ G` imply `H ∪ H' ⟹ G`
//!   (pairwise suffices on finite spaces);
//! - `I3` monotonicity: `H ⊆ G` implies `H ⟹ G`;
//! - `I4` decomposition: `F ⟹ H ∪ H'` implies `F` splits as `G ∪ G'`
//!   with `G ⟹ H` and `G' ⟹ H'`.
//!
//! `I1`–`I3` hold exactly when the relation is derived from a (unique)
//! weakly coherent interpretation, namely `H ↦ ⋃ ↓[H]` where
//! `↓[H] = {G : G ⟹ H}`; adding `I4` makes that map coherent.
//!
//! Relations are stored as an explicit `2^n × 2^n` bit-matrix, so `n` is
//! capped at [`MAX_RELATION_STATES`].

use crate::check::Check;
use crate::interpretation::{Interpretation, InterpretationError};
use crate::space::{Hypothesis, MAX_RELATION_STATES};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImplicationError {
    #[error("{n} states exceeds the relation-matrix limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("pair mask {mask:#b} is out of range for {n} states")]
    MaskOutOfRange { mask: u32, n: usize },
    #[error("relation violates the implication axioms")]
    AxiomViolation(Box<AxiomReport>),
    #[error("meet requires at least one member hypothesis")]
    EmptyMembers,
    #[error(transparent)]
    Interpretation(#[from] InterpretationError),
}

/// Fixed-width bitset over the `2^n` masks of a state space.
#[derive(Clone, PartialEq, Eq)]
struct MaskSet {
    words: Vec<u64>,
}

impl MaskSet {
    fn new(size: usize) -> Self {
        Self {
            words: vec![0; size.div_ceil(64)],
        }
    }

    fn insert(&mut self, mask: u32) {
        self.words[(mask / 64) as usize] |= 1u64 << (mask % 64);
    }

    fn contains(&self, mask: u32) -> bool {
        self.words[(mask / 64) as usize] & (1u64 << (mask % 64)) != 0
    }

    fn is_subset_of(&self, other: &MaskSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut rest = bits;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros();
                    rest &= rest - 1;
                    Some(w as u32 * 64 + b)
                }
            })
        })
    }

    /// Bitwise OR of all member masks: the union of the sets they denote.
    fn union_of_members(&self) -> u32 {
        let mut out = 0u32;
        for m in self.iter() {
            out |= m;
        }
        out
    }

    fn intersect_with(&mut self, other: &MaskSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }
}

/// Axiom report. Witness tuples are the first violations in ascending
/// mask-tuple order: `(H, G, F)` for transitivity, `(H, H', G)` for
/// deduction, `(H, G)` for monotonicity, `(F, H, H')` for decomposition
/// (pair-first scan order above 8 states, where the lexicographic triple
/// scan would be too slow).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub transitivity: Check<(Hypothesis, Hypothesis, Hypothesis)>,
    pub deduction: Check<(Hypothesis, Hypothesis, Hypothesis)>,
    pub monotonicity: Check<(Hypothesis, Hypothesis)>,
    pub decomposition: Check<(Hypothesis, Hypothesis, Hypothesis)>,
}

impl AxiomReport {
    pub fn passes_i1_i3(&self) -> bool {
        self.transitivity.holds && self.deduction.holds && self.monotonicity.holds
    }

    pub fn all_hold(&self) -> bool {
        self.passes_i1_i3() && self.decomposition.holds
    }
}

/// A binary relation `⟹` over the hypotheses of an `n`-state space.
/// Nothing is presumed at construction; axioms are checked, not assumed.
#[derive(Clone, PartialEq, Eq)]
pub struct ImplicationRelation {
    n: usize,
    /// `down[g]` is the down-set `↓[G] = {H : H ⟹ G}`.
    down: Vec<MaskSet>,
}

impl std::fmt::Debug for ImplicationRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ImplicationRelation(n={}, pairs={:?})",
            self.n,
            self.pairs().len()
        )
    }
}

impl ImplicationRelation {
    pub fn from_pairs(
        n: usize,
        pairs: &[(Hypothesis, Hypothesis)],
    ) -> Result<Self, ImplicationError> {
        if n == 0 || n > MAX_RELATION_STATES {
            return Err(ImplicationError::TooLarge {
                n,
                limit: MAX_RELATION_STATES,
            });
        }
        let size = 1usize << n;
        let mut down = vec![MaskSet::new(size); size];
        for &(h, g) in pairs {
            if h.mask() as usize >= size {
                return Err(ImplicationError::MaskOutOfRange { mask: h.mask(), n });
            }
            if g.mask() as usize >= size {
                return Err(ImplicationError::MaskOutOfRange { mask: g.mask(), n });
            }
            down[g.mask() as usize].insert(h.mask());
        }
        Ok(Self { n, down })
    }

    /// Materialize the relation defined by a predicate.
    ///
    /// Panics when `n` exceeds [`MAX_RELATION_STATES`]; callers on larger
    /// spaces must keep relations implicit.
    pub fn from_fn(n: usize, implies: impl Fn(Hypothesis, Hypothesis) -> bool) -> Self {
        assert!(
            (1..=MAX_RELATION_STATES).contains(&n),
            "relation matrices are capped at {MAX_RELATION_STATES} states"
        );
        let size = 1usize << n;
        let mut down = vec![MaskSet::new(size); size];
        for g in 0..size as u32 {
            for h in 0..size as u32 {
                if implies(Hypothesis::from_mask(h), Hypothesis::from_mask(g)) {
                    down[g as usize].insert(h);
                }
            }
        }
        Self { n, down }
    }

    /// The subset relation itself (derived from the identity map).
    pub fn subset_relation(n: usize) -> Self {
        Self::from_fn(n, |h, g| h.is_subset_of(g))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether `h ⟹ g`.
    pub fn holds(&self, h: Hypothesis, g: Hypothesis) -> bool {
        self.down[g.mask() as usize].contains(h.mask())
    }

    /// The down-set `↓[H]`, ascending by mask.
    pub fn down_set(&self, h: Hypothesis) -> Vec<Hypothesis> {
        self.down[h.mask() as usize]
            .iter()
            .map(Hypothesis::from_mask)
            .collect()
    }

    /// All related pairs `(H, G)`, ascending by `(H, G)`.
    pub fn pairs(&self) -> Vec<(Hypothesis, Hypothesis)> {
        let size = 1u32 << self.n;
        let mut out = Vec::new();
        for h in 0..size {
            for g in 0..size {
                if self.down[g as usize].contains(h) {
                    out.push((Hypothesis::from_mask(h), Hypothesis::from_mask(g)));
                }
            }
        }
        out
    }

    /// The constructive map `H ↦ ⋃ ↓[H]` as raw masks, defined for any
    /// relation; it equals the derived weakly coherent interpretation when
    /// `I1`–`I3` hold.
    fn union_of_down_sets(&self) -> Vec<Hypothesis> {
        self.down
            .iter()
            .map(|row| Hypothesis::from_mask(row.union_of_members()))
            .collect()
    }

    fn check_transitivity(&self) -> Check<(Hypothesis, Hypothesis, Hypothesis)> {
        let size = 1u32 << self.n;
        // fast detection: H ⟹ G requires ↓[H] ⊆ ↓[G] ... transitivity in
        // down-set form: g ∈ ↓[f] implies ↓[g] ⊆ ↓[f]
        let mut violated = false;
        'detect: for f in 0..size {
            for g in self.down[f as usize].iter() {
                if !self.down[g as usize].is_subset_of(&self.down[f as usize]) {
                    violated = true;
                    break 'detect;
                }
            }
        }
        if !violated {
            return Check::pass();
        }
        // lexicographic pinpoint (error path only)
        for h in 0..size {
            for g in 0..size {
                if !self.down[g as usize].contains(h) {
                    continue;
                }
                for f in 0..size {
                    if self.down[f as usize].contains(g) && !self.down[f as usize].contains(h) {
                        return Check::fail((
                            Hypothesis::from_mask(h),
                            Hypothesis::from_mask(g),
                            Hypothesis::from_mask(f),
                        ));
                    }
                }
            }
        }
        unreachable!("detection found a transitivity violation the scan missed")
    }

    fn check_deduction(&self) -> Check<(Hypothesis, Hypothesis, Hypothesis)> {
        let size = 1u32 << self.n;
        let mut violated = false;
        'detect: for g in 0..size {
            let members: Vec<u32> = self.down[g as usize].iter().collect();
            for &a in &members {
                for &b in &members {
                    if !self.down[g as usize].contains(a | b) {
                        violated = true;
                        break 'detect;
                    }
                }
            }
        }
        if !violated {
            return Check::pass();
        }
        for h in 0..size {
            for h2 in 0..size {
                for g in 0..size {
                    let row = &self.down[g as usize];
                    if row.contains(h) && row.contains(h2) && !row.contains(h | h2) {
                        return Check::fail((
                            Hypothesis::from_mask(h),
                            Hypothesis::from_mask(h2),
                            Hypothesis::from_mask(g),
                        ));
                    }
                }
            }
        }
        unreachable!("detection found a deduction violation the scan missed")
    }

    fn check_monotonicity(&self) -> Check<(Hypothesis, Hypothesis)> {
        for h in Hypothesis::all(self.n) {
            for g in h.supersets(self.n) {
                if !self.holds(h, g) {
                    return Check::fail((h, g));
                }
            }
        }
        Check::pass()
    }

    fn check_decomposition(&self) -> Check<(Hypothesis, Hypothesis, Hypothesis)> {
        let size = 1u32 << self.n;
        let pihat = self.union_of_down_sets();
        let split_ok = |f: Hypothesis, h: Hypothesis, h2: Hypothesis| -> bool {
            // canonical candidates from the derived map, then exhaustive
            // 3^|F| ordered covers
            let g = f.intersection(pihat[h.mask() as usize]);
            let g2 = f.intersection(pihat[h2.mask() as usize]);
            if g.union(g2) == f && self.holds(g, h) && self.holds(g2, h2) {
                return true;
            }
            let states: Vec<usize> = f.states().collect();
            let mut assignment = vec![0u8; states.len()];
            loop {
                let mut g = Hypothesis::EMPTY;
                let mut g2 = Hypothesis::EMPTY;
                for (k, &w) in states.iter().enumerate() {
                    match assignment[k] {
                        0 => g = g.union(Hypothesis::singleton(w)),
                        1 => g2 = g2.union(Hypothesis::singleton(w)),
                        _ => {
                            g = g.union(Hypothesis::singleton(w));
                            g2 = g2.union(Hypothesis::singleton(w));
                        }
                    }
                }
                if self.holds(g, h) && self.holds(g2, h2) {
                    return true;
                }
                let mut k = 0;
                loop {
                    if k == assignment.len() {
                        return false;
                    }
                    assignment[k] += 1;
                    if assignment[k] < 3 {
                        break;
                    }
                    assignment[k] = 0;
                    k += 1;
                }
            }
        };
        if self.n <= 8 {
            for f in 0..size {
                let fh = Hypothesis::from_mask(f);
                for h in 0..size {
                    for h2 in 0..size {
                        let hh = Hypothesis::from_mask(h);
                        let hh2 = Hypothesis::from_mask(h2);
                        if self.holds(fh, hh.union(hh2)) && !split_ok(fh, hh, hh2) {
                            return Check::fail((fh, hh, hh2));
                        }
                    }
                }
            }
        } else {
            // pair-first order keeps the scan quadratic in the number of
            // hypotheses; witness order documented on AxiomReport
            for h in 0..size {
                for h2 in 0..size {
                    let hh = Hypothesis::from_mask(h);
                    let hh2 = Hypothesis::from_mask(h2);
                    let union = hh.union(hh2);
                    for f in self.down[union.mask() as usize].iter() {
                        let fh = Hypothesis::from_mask(f);
                        if !split_ok(fh, hh, hh2) {
                            return Check::fail((fh, hh, hh2));
                        }
                    }
                }
            }
        }
        Check::pass()
    }

    /// Check all four implication axioms.
    pub fn check_axioms(&self) -> AxiomReport {
        AxiomReport {
            transitivity: self.check_transitivity(),
            deduction: self.check_deduction(),
            monotonicity: self.check_monotonicity(),
            decomposition: self.check_decomposition(),
        }
    }

    /// The unique weakly coherent interpretation from which this relation
    /// is derived: `pi(H) = ⋃ ↓[H]`. Requires `I1`–`I3`; with `I4` the
    /// result is coherent.
    pub fn to_interpretation(&self) -> Result<Interpretation, ImplicationError> {
        let i1 = self.check_transitivity();
        let i2 = self.check_deduction();
        let i3 = self.check_monotonicity();
        if !(i1.holds && i2.holds && i3.holds) {
            let report = AxiomReport {
                transitivity: i1,
                deduction: i2,
                monotonicity: i3,
                decomposition: self.check_decomposition(),
            };
            return Err(ImplicationError::AxiomViolation(Box::new(report)));
        }
        Ok(Interpretation::new(self.n, self.union_of_down_sets())?)
    }

    /// A meet representative `H_I` with `↓[H_I] = ⋂ ↓[H_i]`: canonically
    /// the intersection of the derived images. Requires `I1`–`I3`.
    pub fn meet_hypothesis(&self, members: &[Hypothesis]) -> Result<Hypothesis, ImplicationError> {
        if members.is_empty() {
            return Err(ImplicationError::EmptyMembers);
        }
        let pi = self.to_interpretation()?;
        let meet = members.iter().fold(Hypothesis::full(self.n), |acc, &h| {
            acc.intersection(pi.apply(h))
        });
        debug_assert!({
            let mut expect = self.down[members[0].mask() as usize].clone();
            for m in &members[1..] {
                expect.intersect_with(&self.down[m.mask() as usize]);
            }
            expect == self.down[meet.mask() as usize]
        });
        Ok(meet)
    }
}

/// Free-function forms of the relation operations.
pub fn check_axioms(rel: &ImplicationRelation) -> AxiomReport {
    rel.check_axioms()
}

pub fn down_set(rel: &ImplicationRelation, h: Hypothesis) -> Vec<Hypothesis> {
    rel.down_set(h)
}

pub fn interpretation_from_relation(
    rel: &ImplicationRelation,
) -> Result<Interpretation, ImplicationError> {
    rel.to_interpretation()
}

pub fn meet_hypothesis(
    rel: &ImplicationRelation,
    members: &[Hypothesis],
) -> Result<Hypothesis, ImplicationError> {
    rel.meet_hypothesis(members)
}
