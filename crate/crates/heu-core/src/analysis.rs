//! Downstream diagnostics: HEU valuation, conditional evaluation,
//! comparative hypothetical reasoning, and ambiguity attitudes.

use crate::act::Act;
use crate::capacity::{Capacity, CapacityError};
use crate::check::Check;
use crate::interpretation::{compose_capacity, Classification, Interpretation};
use crate::measure::Measure;
use crate::rational::Rational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("conditioning event has zero interpreted mass")]
    NullConditioningEvent,
    #[error("interpretation must be coherent")]
    NotCoherent,
    #[error("interpretation is neither coherent nor dual-coherent")]
    NotCoherentEither,
    #[error("operands live on different state spaces ({left} vs {right} states)")]
    SpaceMismatch { left: usize, right: usize },
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error("comparative-reasoning biconditional failed (internal error)")]
    TheoremViolation,
}

/// HEU value of an act: the Choquet integral of `f` against `mu ∘ pi`.
/// Needs only a valid composed capacity, so it also evaluates merely
/// weakly coherent (or classified-none) maps whose composition validates;
/// callers wanting the coherence warning should classify separately.
pub fn heu_value(f: &Act, mu: &Measure, pi: &Interpretation) -> Result<Rational, AnalysisError> {
    let nu = compose_capacity(mu, pi)?;
    Ok(nu.choquet(f)?)
}

/// Classical conditional probability `mu(H ∩ O) / mu(O)`.
pub fn conditional_probability(
    mu: &Measure,
    h: crate::space::Hypothesis,
    o: crate::space::Hypothesis,
) -> Result<Rational, AnalysisError> {
    let denom = mu.of(o);
    if denom.is_zero() {
        return Err(AnalysisError::NullConditioningEvent);
    }
    Ok(mu.of(h.intersection(o)) / denom)
}

/// Conditional HEU evaluation with both events interpreted:
/// `mu(pi(H) ∩ pi(O)) / mu(pi(O))`.
pub fn conditional_heu(
    h: crate::space::Hypothesis,
    o: crate::space::Hypothesis,
    mu: &Measure,
    pi: &Interpretation,
) -> Result<Rational, AnalysisError> {
    conditional_probability(mu, pi.apply(h), pi.apply(o))
}

/// Conditional evaluation of an *objective* payoff event against an
/// interpreted conditioning event: `mu(H ∩ pi(O)) / mu(pi(O))`. This is
/// the reading under which a buyer who treats silence as no information
/// keeps her prior over quality.
pub fn conditional_objective(
    h: crate::space::Hypothesis,
    o: crate::space::Hypothesis,
    mu: &Measure,
    pi: &Interpretation,
) -> Result<Rational, AnalysisError> {
    conditional_probability(mu, h, pi.apply(o))
}

/// Variant interpreting the joint event: `mu(pi(H ∩ O)) / mu(pi(O))`.
/// Computable on request; not used by the fixtures.
pub fn conditional_joint(
    h: crate::space::Hypothesis,
    o: crate::space::Hypothesis,
    mu: &Measure,
    pi: &Interpretation,
) -> Result<Rational, AnalysisError> {
    let denom = mu.of(pi.apply(o));
    if denom.is_zero() {
        return Err(AnalysisError::NullConditioningEvent);
    }
    Ok(mu.of(pi.apply(h.intersection(o))) / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The first map is pointwise closer to the truth (strictly somewhere).
    Better,
    Worse,
    Equal,
    Incomparable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Better => "better",
            Self::Worse => "worse",
            Self::Equal => "equal",
            Self::Incomparable => "incomparable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonResult {
    pub verdict: Verdict,
    /// For incomparable pairs: the first hypothesis where inclusion fails
    /// in both directions across the scan.
    pub witness: Option<crate::space::Hypothesis>,
}

/// Compare two coherent interpretations pointwise: the first is the better
/// hypothetical reasoner when `pi1(H) ⊆ pi2(H)` everywhere.
pub fn better_reasoner(
    pi1: &Interpretation,
    pi2: &Interpretation,
) -> Result<ComparisonResult, AnalysisError> {
    if pi1.n() != pi2.n() {
        return Err(AnalysisError::SpaceMismatch {
            left: pi1.n(),
            right: pi2.n(),
        });
    }
    if pi1.classify() != Classification::Coherent || pi2.classify() != Classification::Coherent {
        return Err(AnalysisError::NotCoherent);
    }
    let mut forward = true; // pi1 ⊆ pi2 pointwise
    let mut backward = true;
    let mut first_cross = None;
    for h in crate::space::Hypothesis::all(pi1.n()) {
        let a = pi1.apply(h);
        let b = pi2.apply(h);
        if !a.is_subset_of(b) {
            forward = false;
        }
        if !b.is_subset_of(a) {
            backward = false;
        }
        if !forward && !backward && first_cross.is_none() {
            first_cross = Some(h);
        }
    }
    let verdict = match (forward, backward) {
        (true, true) => Verdict::Equal,
        (true, false) => Verdict::Better,
        (false, true) => Verdict::Worse,
        (false, false) => Verdict::Incomparable,
    };
    Ok(ComparisonResult {
        verdict,
        witness: if verdict == Verdict::Incomparable {
            first_cross
        } else {
            None
        },
    })
}

/// The comparative-reasoning biconditional: pointwise inclusion of images
/// holds exactly when the first map's derived implications are a subset of
/// the second's. Asserts the equivalence and returns the shared truth
/// value; divergence is an internal theorem violation and errors loudly.
pub fn comparative_biconditional(
    pi1: &Interpretation,
    pi2: &Interpretation,
) -> Result<bool, AnalysisError> {
    let comparison = better_reasoner(pi1, pi2)?;
    let pointwise = matches!(comparison.verdict, Verdict::Better | Verdict::Equal);
    let rel1 = pi1.derive_implication();
    let rel2 = pi2.derive_implication();
    let mut relation_subset = true;
    'outer: for h in crate::space::Hypothesis::all(pi1.n()) {
        for g in crate::space::Hypothesis::all(pi1.n()) {
            if rel1.holds(h, g) && !rel2.holds(h, g) {
                relation_subset = false;
                break 'outer;
            }
        }
    }
    if pointwise != relation_subset {
        return Err(AnalysisError::TheoremViolation);
    }
    Ok(pointwise)
}

/// Concavity: `nu(G ∩ H) + nu(G ∪ H) <= nu(G) + nu(H)` for all pairs.
/// Witness is the first violating pair in ascending mask order.
pub fn is_concave(nu: &Capacity) -> Check<(crate::space::Hypothesis, crate::space::Hypothesis)> {
    for g in crate::space::Hypothesis::all(nu.n()) {
        for h in crate::space::Hypothesis::all(nu.n()) {
            let lhs = nu.value(g.intersection(h)) + nu.value(g.union(h));
            let rhs = nu.value(g) + nu.value(h);
            if lhs > rhs {
                return Check::fail((g, h));
            }
        }
    }
    Check::pass()
}

/// Convexity: the reversed inequality; the signature of the dual model.
pub fn is_convex(nu: &Capacity) -> Check<(crate::space::Hypothesis, crate::space::Hypothesis)> {
    for g in crate::space::Hypothesis::all(nu.n()) {
        for h in crate::space::Hypothesis::all(nu.n()) {
            let lhs = nu.value(g.intersection(h)) + nu.value(g.union(h));
            let rhs = nu.value(g) + nu.value(h);
            if lhs < rhs {
                return Check::fail((g, h));
            }
        }
    }
    Check::pass()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HedgeAxiom {
    /// `f ≽ g` implies `f ≽ ½f + ½g` (ambiguity loving; coherent maps).
    AversionToHedging,
    /// `f ≽ g` implies `½f + ½g ≽ g` (ambiguity averse; dual-coherent maps).
    PreferenceForHedging,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HedgingOutcome {
    pub axiom: HedgeAxiom,
    pub value_f: Rational,
    pub value_g: Rational,
    pub value_mix: Rational,
    pub consistent: bool,
}

/// Evaluate one hedging instance under `V = Choquet(mu ∘ pi)`. Coherent
/// maps are checked against aversion to hedging, dual-coherent maps
/// against preference for hedging.
pub fn hedging_check(
    mu: &Measure,
    pi: &Interpretation,
    f: &Act,
    g: &Act,
) -> Result<HedgingOutcome, AnalysisError> {
    let axiom = match pi.classify() {
        Classification::Coherent => HedgeAxiom::AversionToHedging,
        Classification::DualCoherent => HedgeAxiom::PreferenceForHedging,
        _ => return Err(AnalysisError::NotCoherentEither),
    };
    let nu = compose_capacity(mu, pi)?;
    let value_f = nu.choquet(f)?;
    let value_g = nu.choquet(g)?;
    let half = Rational::ratio(1, 2);
    let mix = f.mix(&half, g).map_err(|_| AnalysisError::SpaceMismatch {
        left: f.n(),
        right: g.n(),
    })?;
    let value_mix = nu.choquet(&mix)?;
    let consistent = match axiom {
        HedgeAxiom::AversionToHedging => value_f < value_g || value_f >= value_mix,
        HedgeAxiom::PreferenceForHedging => value_f < value_g || value_mix >= value_g,
    };
    Ok(HedgingOutcome {
        axiom,
        value_f,
        value_g,
        value_mix,
        consistent,
    })
}
