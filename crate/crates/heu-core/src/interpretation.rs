//! Interpretation maps `pi: 2^Omega -> 2^Omega` and their structure.
//!
//! An interpretation encodes what a decision maker takes each hypothesis to
//! mean. The properties checked here:
//!
//! - truth `T`: `H ⊆ pi(H)` — the reading never rules out contingencies
//!   actually compatible with `H`;
//! - introspection `I`: `pi(pi(H)) = pi(H)` — a hypothesis and its reading
//!   are indistinguishable to the agent;
//! - monotonicity `M`: `H ⊆ G` implies `pi(H) ⊆ pi(G)`;
//! - consistency `C`: `pi(H ∪ G) ⊆ pi(H) ∪ pi(G)`;
//! - distribution `D`: `pi(H ∪ G) = pi(H) ∪ pi(G)` (equivalent to `M ∧ C`);
//! - the dual pair `T'` (`pi(H) ⊆ H`) and `C'`
//!   (`pi(H) ∩ pi(G) ⊆ pi(H ∩ G)`).
//!
//! *Weakly coherent* means `T ∧ I ∧ M`; *coherent* adds `C`; *dual-coherent*
//! is `T' ∧ I ∧ M ∧ C'`. Coherent maps are exactly the union-extensions of a
//! base set plus singleton images ([`GeneratorForm`]), which is what makes
//! exhaustive enumeration feasible.

use crate::capacity::{Capacity, CapacityError};
use crate::check::Check;
use crate::implication::ImplicationRelation;
use crate::measure::Measure;
use crate::space::{Hypothesis, MAX_TABLE_STATES};
use thiserror::Error;

/// Exhaustive enumeration is capped here by default; the CLI can override
/// via `HEU_MAX_N` at the caller's own runtime risk.
pub const DEFAULT_ENUMERATION_CAP: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpretationError {
    #[error("table has {got} entries, expected {expected}")]
    WrongTableSize { got: usize, expected: usize },
    #[error("table entry {entry:#b} is out of range for {n} states")]
    MaskOutOfRange { entry: u32, n: usize },
    #[error("{n} states exceeds the dense-table limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("bad generators: {0}")]
    BadGenerators(GeneratorDefect),
    #[error("interpretation is not weakly coherent")]
    NotWeaklyCoherent,
    #[error(
        "no coherent interpretation satisfies the constraints; minimal conflicting set: {0:?}"
    )]
    Infeasible(Vec<(Hypothesis, Hypothesis)>),
}

/// Witness for a generator-form invariant violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorDefect {
    /// State `state` is missing from its own singleton image.
    MissingSelf {
        state: usize,
    },
    /// The base is not contained in the singleton image of `state`.
    BaseEscapes {
        state: usize,
    },
    /// `via` lies in the image of `from`, but the image of `via` is not
    /// contained in the image of `from`.
    NotTransitive {
        from: usize,
        via: usize,
    },
    /// `state` lies in the base but its image leaves the base.
    BaseNotClosed {
        state: usize,
    },
    WrongLength {
        got: usize,
        expected: usize,
    },
    MaskOutOfRange {
        state: usize,
    },
}

impl std::fmt::Display for GeneratorDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::MissingSelf { state } => write!(f, "state {state} missing from its own image"),
            Self::BaseEscapes { state } => {
                write!(f, "base not contained in image of state {state}")
            }
            Self::NotTransitive { from, via } => write!(
                f,
                "image of state {via} not contained in image of state {from} that reaches it"
            ),
            Self::BaseNotClosed { state } => {
                write!(f, "base state {state} has an image outside the base")
            }
            Self::WrongLength { got, expected } => {
                write!(f, "{got} singleton images, expected {expected}")
            }
            Self::MaskOutOfRange { state } => write!(f, "image of state {state} is out of range"),
        }
    }
}

/// Result of [`Interpretation::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Coherent,
    WeaklyCoherent,
    DualCoherent,
    None,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Coherent => "coherent",
            Self::WeaklyCoherent => "weakly_coherent",
            Self::DualCoherent => "dual_coherent",
            Self::None => "none",
        }
    }
}

/// Property report for an interpretation. Witnesses are the
/// lexicographically smallest violating masks (pairs ordered by `(H, G)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub truth: Check<Hypothesis>,
    pub introspection: Check<Hypothesis>,
    pub monotonicity: Check<(Hypothesis, Hypothesis)>,
    pub consistency: Check<(Hypothesis, Hypothesis)>,
    pub distribution: Check<(Hypothesis, Hypothesis)>,
    pub truth_dual: Check<Hypothesis>,
    pub consistency_dual: Check<(Hypothesis, Hypothesis)>,
}

impl PropertyReport {
    pub fn weakly_coherent(&self) -> bool {
        self.truth.holds && self.introspection.holds && self.monotonicity.holds
    }

    pub fn coherent(&self) -> bool {
        self.weakly_coherent() && self.consistency.holds
    }

    pub fn dual_coherent(&self) -> bool {
        self.truth_dual.holds
            && self.introspection.holds
            && self.monotonicity.holds
            && self.consistency_dual.holds
    }

    pub fn classification(&self) -> Classification {
        if self.coherent() {
            Classification::Coherent
        } else if self.weakly_coherent() {
            Classification::WeaklyCoherent
        } else if self.dual_coherent() {
            Classification::DualCoherent
        } else {
            Classification::None
        }
    }
}

/// A total map from hypotheses to hypotheses, stored densely by mask.
/// No property is assumed at construction; properties are checked, never
/// presumed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation {
    n: usize,
    table: Vec<Hypothesis>,
}

impl Interpretation {
    pub fn new(n: usize, table: Vec<Hypothesis>) -> Result<Self, InterpretationError> {
        if n > MAX_TABLE_STATES {
            return Err(InterpretationError::TooLarge {
                n,
                limit: MAX_TABLE_STATES,
            });
        }
        let size = 1usize << n;
        if table.len() != size {
            return Err(InterpretationError::WrongTableSize {
                got: table.len(),
                expected: size,
            });
        }
        let full = Hypothesis::full(n);
        for h in &table {
            if !h.is_subset_of(full) {
                return Err(InterpretationError::MaskOutOfRange { entry: h.mask(), n });
            }
        }
        Ok(Self { n, table })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            table: Hypothesis::all(n).collect(),
        }
    }

    /// The map sending every hypothesis to `target`.
    pub fn constant(n: usize, target: Hypothesis) -> Self {
        Self {
            n,
            table: vec![target; 1 << n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[Hypothesis] {
        &self.table
    }

    /// `pi(H)`.
    pub fn apply(&self, h: Hypothesis) -> Hypothesis {
        self.table[h.mask() as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.table
            .iter()
            .enumerate()
            .all(|(m, h)| h.mask() as usize == m)
    }

    /// Exhaustive property check: single-hypothesis quantifiers for `T`,
    /// `I`, `T'`; pair quantifiers for `M`, `C`, `D`, `C'`. Cost is
    /// `O(4^n)`; the harness uses small `n`, larger tables are desk-scale.
    pub fn check_properties(&self) -> PropertyReport {
        let truth =
            Check::from_witness(Hypothesis::all(self.n).find(|&h| !h.is_subset_of(self.apply(h))));
        let introspection = Check::from_witness(
            Hypothesis::all(self.n).find(|&h| self.apply(self.apply(h)) != self.apply(h)),
        );
        let truth_dual =
            Check::from_witness(Hypothesis::all(self.n).find(|&h| !self.apply(h).is_subset_of(h)));

        let mut monotonicity = None;
        'mono: for h in Hypothesis::all(self.n) {
            for g in h.supersets(self.n) {
                if !self.apply(h).is_subset_of(self.apply(g)) {
                    monotonicity = Some((h, g));
                    break 'mono;
                }
            }
        }

        let mut consistency = None;
        let mut distribution = None;
        let mut consistency_dual = None;
        for h in Hypothesis::all(self.n) {
            for g in Hypothesis::all(self.n) {
                let image_union = self.apply(h).union(self.apply(g));
                let union_image = self.apply(h.union(g));
                if consistency.is_none() && !union_image.is_subset_of(image_union) {
                    consistency = Some((h, g));
                }
                if distribution.is_none() && union_image != image_union {
                    distribution = Some((h, g));
                }
                if consistency_dual.is_none() {
                    let image_meet = self.apply(h).intersection(self.apply(g));
                    if !image_meet.is_subset_of(self.apply(h.intersection(g))) {
                        consistency_dual = Some((h, g));
                    }
                }
                if consistency.is_some() && distribution.is_some() && consistency_dual.is_some() {
                    break;
                }
            }
        }

        PropertyReport {
            truth,
            introspection,
            monotonicity: Check::from_witness(monotonicity),
            consistency: Check::from_witness(consistency),
            distribution: Check::from_witness(distribution),
            truth_dual,
            consistency_dual: Check::from_witness(consistency_dual),
        }
    }

    /// Coherence classification. A map that is both coherent and
    /// dual-coherent is the identity and reports as coherent.
    pub fn classify(&self) -> Classification {
        self.check_properties().classification()
    }

    /// The image lattice `Pi = { pi(H) : H ⊆ Omega }`, ascending by mask.
    /// Requires weak coherence, which guarantees closure under
    /// intersection (and, for coherent maps, under union).
    pub fn image_lattice(&self) -> Result<Vec<Hypothesis>, InterpretationError> {
        let report = self.check_properties();
        if !report.weakly_coherent() {
            return Err(InterpretationError::NotWeaklyCoherent);
        }
        let images = self.images();
        // closure under intersection is a theorem for weakly coherent
        // maps (and under union for coherent ones); verify when cheap
        debug_assert!(
            images.len() > 1024
                || images.iter().all(|&p| images
                    .iter()
                    .all(|&q| images.binary_search(&p.intersection(q)).is_ok())),
            "image family of a weakly coherent map must be meet-closed"
        );
        Ok(images)
    }

    /// Distinct table values, ascending by mask, with no coherence gate.
    pub(crate) fn images(&self) -> Vec<Hypothesis> {
        let mut images: Vec<Hypothesis> = self.table.clone();
        images.sort();
        images.dedup();
        images
    }

    /// The implication relation derived from this map:
    /// `H ⟹ G` iff `pi(H) ⊆ pi(G)`.
    pub fn derive_implication(&self) -> ImplicationRelation {
        ImplicationRelation::from_fn(self.n, |h, g| self.apply(h).is_subset_of(self.apply(g)))
    }

    /// The complement-conjugate map `pi*(H) = Omega \ pi(Omega \ H)`.
    /// An involution; sends coherent maps to dual-coherent ones.
    pub fn dualize(&self) -> Interpretation {
        let n = self.n;
        let table = Hypothesis::all(n)
            .map(|h| self.apply(h.complement(n)).complement(n))
            .collect();
        Interpretation { n, table }
    }

    /// Base and singleton images. Round-trips with
    /// [`Interpretation::from_generators`] exactly on coherent maps.
    pub fn extract_generators(&self) -> GeneratorForm {
        GeneratorForm {
            n: self.n,
            base: self.apply(Hypothesis::EMPTY),
            singletons: (0..self.n)
                .map(|i| self.apply(Hypothesis::singleton(i)))
                .collect(),
        }
    }

    /// Union-extension of a validated generator form:
    /// `pi(H) = base ∪ ⋃_{w ∈ H} c_w`. The result is always coherent.
    pub fn from_generators(g: &GeneratorForm) -> Result<Self, InterpretationError> {
        g.validate().map_err(InterpretationError::BadGenerators)?;
        if g.n > MAX_TABLE_STATES {
            return Err(InterpretationError::TooLarge {
                n: g.n,
                limit: MAX_TABLE_STATES,
            });
        }
        let size = 1usize << g.n;
        let mut table = vec![Hypothesis::EMPTY; size];
        table[0] = g.base;
        for m in 1..size {
            let low = m.trailing_zeros() as usize;
            table[m] = table[m & (m - 1)].union(g.singletons[low]);
        }
        Ok(Self { n: g.n, table })
    }
}

/// Compact description of a coherent interpretation: the image of the empty
/// set plus one image per singleton; the full map is their union-extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorForm {
    pub n: usize,
    pub base: Hypothesis,
    pub singletons: Vec<Hypothesis>,
}

impl GeneratorForm {
    pub fn new(n: usize, base: Hypothesis, singletons: Vec<Hypothesis>) -> Self {
        Self {
            n,
            base,
            singletons,
        }
    }

    /// Identity generators: empty base, `c_w = {w}`.
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            base: Hypothesis::EMPTY,
            singletons: (0..n).map(Hypothesis::singleton).collect(),
        }
    }

    /// Check the four invariants: each state in its own image, base
    /// contained in every image, reachability transitive, base closed.
    pub fn validate(&self) -> Result<(), GeneratorDefect> {
        if self.singletons.len() != self.n {
            return Err(GeneratorDefect::WrongLength {
                got: self.singletons.len(),
                expected: self.n,
            });
        }
        let full = Hypothesis::full(self.n);
        if !self.base.is_subset_of(full) {
            return Err(GeneratorDefect::MaskOutOfRange { state: self.n });
        }
        for (w, c) in self.singletons.iter().enumerate() {
            if !c.is_subset_of(full) {
                return Err(GeneratorDefect::MaskOutOfRange { state: w });
            }
            if !c.contains(w) {
                return Err(GeneratorDefect::MissingSelf { state: w });
            }
            if !self.base.is_subset_of(*c) {
                return Err(GeneratorDefect::BaseEscapes { state: w });
            }
            if self.base.contains(w) && !c.is_subset_of(self.base) {
                return Err(GeneratorDefect::BaseNotClosed { state: w });
            }
        }
        for (from, c) in self.singletons.iter().enumerate() {
            for via in c.states() {
                if !self.singletons[via].is_subset_of(*c) {
                    return Err(GeneratorDefect::NotTransitive { from, via });
                }
            }
        }
        Ok(())
    }

    /// Evaluate the union-extension at `h` without materializing a table.
    /// Works on spaces too large for dense tables.
    pub fn apply(&self, h: Hypothesis) -> Hypothesis {
        let mut out = self.base;
        for w in h.states() {
            out = out.union(self.singletons[w]);
        }
        out
    }

    pub fn to_interpretation(&self) -> Result<Interpretation, InterpretationError> {
        Interpretation::from_generators(self)
    }
}

/// Compose a measure with an interpretation: `nu(H) = mu(pi(H))`, validated
/// as a capacity. A positive-mass `pi(empty)` surfaces as `NotGrounded`; a
/// non-monotone or truth-violating map can also fail monotonicity or
/// normalization, which is reported rather than silently repaired.
pub fn compose_capacity(mu: &Measure, pi: &Interpretation) -> Result<Capacity, CapacityError> {
    if mu.n() != pi.n() {
        return Err(CapacityError::DimensionMismatch {
            left: mu.n(),
            right: pi.n(),
        });
    }
    let values = Hypothesis::all(pi.n())
        .map(|h| mu.of(pi.apply(h)))
        .collect();
    Capacity::from_values(pi.n(), values)
}

/// Streaming enumeration of every coherent interpretation on `n` states,
/// each exactly once, via generator forms: a base set plus singleton images
/// satisfying the reachability and closure invariants. Order: ascending
/// base mask, then odometer order over singleton-image choices.
pub fn enumerate_coherent(n: usize) -> Result<CoherentInterpretations, InterpretationError> {
    enumerate_coherent_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

/// [`enumerate_coherent`] with a caller-chosen cap (the CLI wires
/// `HEU_MAX_N` here). The dense-table limit still applies.
pub fn enumerate_coherent_with_cap(
    n: usize,
    cap: usize,
) -> Result<CoherentInterpretations, InterpretationError> {
    let limit = cap.min(MAX_TABLE_STATES);
    if n == 0 || n > limit {
        return Err(InterpretationError::TooLarge { n, limit });
    }
    Ok(CoherentInterpretations::new(n))
}

pub struct CoherentInterpretations {
    n: usize,
    next_base: u32,
    current: Option<BaseBlock>,
}

struct BaseBlock {
    base: Hypothesis,
    free: Vec<usize>,
    choices: Vec<Vec<Hypothesis>>,
    odometer: Vec<usize>,
    exhausted: bool,
}

impl CoherentInterpretations {
    fn new(n: usize) -> Self {
        Self {
            n,
            next_base: 0,
            current: None,
        }
    }

    fn open_base(&mut self, base: Hypothesis) -> BaseBlock {
        let free: Vec<usize> = (0..self.n).filter(|&w| !base.contains(w)).collect();
        let choices: Vec<Vec<Hypothesis>> = free
            .iter()
            .map(|&w| {
                base.union(Hypothesis::singleton(w))
                    .supersets(self.n)
                    .collect()
            })
            .collect();
        let odometer = vec![0; free.len()];
        BaseBlock {
            base,
            free,
            choices,
            odometer,
            exhausted: false,
        }
    }
}

impl BaseBlock {
    /// Singleton images for the current odometer position; states inside
    /// the base are pinned to the base itself.
    fn assignment(&self, n: usize) -> Vec<Hypothesis> {
        let mut c = vec![self.base; n];
        for (k, &w) in self.free.iter().enumerate() {
            c[w] = self.choices[k][self.odometer[k]];
        }
        c
    }

    fn transitive(&self, c: &[Hypothesis]) -> bool {
        for &w in &self.free {
            for &v in &self.free {
                if c[w].contains(v) && !c[v].is_subset_of(c[w]) {
                    return false;
                }
            }
        }
        true
    }

    fn advance(&mut self) {
        for k in (0..self.odometer.len()).rev() {
            self.odometer[k] += 1;
            if self.odometer[k] < self.choices[k].len() {
                return;
            }
            self.odometer[k] = 0;
        }
        self.exhausted = true;
    }
}

impl Iterator for CoherentInterpretations {
    type Item = Interpretation;

    fn next(&mut self) -> Option<Interpretation> {
        let size = 1u32 << self.n;
        loop {
            if self.current.is_none() {
                if self.next_base >= size {
                    return None;
                }
                let base = Hypothesis::from_mask(self.next_base);
                self.next_base += 1;
                self.current = Some(self.open_base(base));
            }
            let block = self.current.as_mut().expect("just opened");
            if block.exhausted {
                self.current = None;
                continue;
            }
            let c = block.assignment(self.n);
            let ok = block.transitive(&c);
            let base = block.base;
            block.advance();
            if block.exhausted {
                self.current = None;
            }
            if ok {
                let form = GeneratorForm {
                    n: self.n,
                    base,
                    singletons: c,
                };
                let pi = Interpretation::from_generators(&form)
                    .expect("enumerated generators satisfy the invariants");
                return Some(pi);
            }
        }
    }
}

/// Every weakly coherent interpretation on `n` states, each exactly once.
///
/// Weakly coherent maps are exactly the closure operators of
/// intersection-closed set families containing the full set: the map
/// sends `H` to the smallest family member containing it. Enumerating
/// those families is exhaustive and cheap at harness sizes.
pub fn enumerate_weakly_coherent(n: usize) -> Result<Vec<Interpretation>, InterpretationError> {
    if n == 0 || n > DEFAULT_ENUMERATION_CAP {
        return Err(InterpretationError::TooLarge {
            n,
            limit: DEFAULT_ENUMERATION_CAP,
        });
    }
    let size = 1usize << n;
    let full = (size - 1) as u32;
    let mut out = Vec::new();
    // families encoded as bitsets over the non-full masks; the full set is
    // always a member
    for family in 0u32..(1u32 << (size - 1)) {
        let is_member = |m: u32| m == full || family & (1 << m) != 0;
        let members: Vec<u32> = (0..size as u32).filter(|&m| is_member(m)).collect();
        let closed = members
            .iter()
            .all(|&a| members.iter().all(|&b| is_member(a & b)));
        if !closed {
            continue;
        }
        let table: Vec<Hypothesis> = (0..size as u32)
            .map(|h| {
                let mut image = full;
                for &m in &members {
                    if h & !m == 0 {
                        image &= m;
                    }
                }
                Hypothesis::from_mask(image)
            })
            .collect();
        out.push(Interpretation { n, table });
    }
    Ok(out)
}

/// Find the coherent interpretation agreeing with every `(H, pi(H))`
/// constraint, minimal by total image cardinality and then by
/// lexicographic table order; or report a minimal conflicting constraint
/// subset. Exhaustive over generator forms, so capped at small `n`.
pub fn complete_to_coherent(
    n: usize,
    constraints: &[(Hypothesis, Hypothesis)],
) -> Result<Interpretation, InterpretationError> {
    if n == 0 || n > DEFAULT_ENUMERATION_CAP {
        return Err(InterpretationError::TooLarge {
            n,
            limit: DEFAULT_ENUMERATION_CAP,
        });
    }
    match best_completion(n, constraints) {
        Some(pi) => Ok(pi),
        None => {
            // Greedy minimization: drop any constraint whose removal keeps
            // the remainder infeasible. Deterministic in input order.
            let mut core: Vec<(Hypothesis, Hypothesis)> = constraints.to_vec();
            let mut i = 0;
            while i < core.len() {
                let mut reduced = core.clone();
                reduced.remove(i);
                if best_completion(n, &reduced).is_none() {
                    core = reduced;
                } else {
                    i += 1;
                }
            }
            Err(InterpretationError::Infeasible(core))
        }
    }
}

fn best_completion(n: usize, constraints: &[(Hypothesis, Hypothesis)]) -> Option<Interpretation> {
    let mut best: Option<(u64, Interpretation)> = None;
    for pi in enumerate_coherent_with_cap(n, DEFAULT_ENUMERATION_CAP).ok()? {
        if !constraints.iter().all(|&(h, s)| pi.apply(h) == s) {
            continue;
        }
        let weight: u64 = pi.table().iter().map(|h| u64::from(h.card())).sum();
        let better = match &best {
            None => true,
            Some((w, p)) => weight < *w || (weight == *w && pi < *p),
        };
        if better {
            best = Some((weight, pi));
        }
    }
    best.map(|(_, pi)| pi)
}
