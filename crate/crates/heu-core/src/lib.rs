//! Hypothetical expected utility (HEU) on finite state spaces.
//!
//! A decision maker who misreads hypotheses acts as if each event `H` were
//! some other event `pi(H)`; the map `pi` is her *interpretation*. An HEU
//! maximizer is a pair `(pi, mu)` of a coherent interpretation and a
//! probability measure, valuing a state-contingent act `f` by the Choquet
//! integral of `f` against the (generally non-additive) capacity `mu ∘ pi`.
//!
//! The crate provides, in exact rational arithmetic throughout:
//!
//! - [`space`]: finite state spaces and hypotheses as bitmasks;
//! - [`act`], [`measure`], [`capacity`]: acts, probability measures,
//!   capacities, and the Choquet integral;
//! - [`interpretation`]: interpretation maps, their property checks
//!   (truth, introspection, monotonicity, consistency, distribution and
//!   the dual variants), coherence classification, generator forms,
//!   exhaustive enumeration, and composition with measures;
//! - [`implication`]: subjective implication relations, the four
//!   implication axioms, down-sets, and the constructive map between
//!   relations and (weakly) coherent interpretations;
//! - [`elicitation`]: the identification pipeline from observed betting
//!   capacities back to an interpretation and a measure, with axiom gates
//!   and machine-checkable failure certificates;
//! - [`analysis`]: HEU valuation, conditional evaluation, comparative
//!   hypothetical reasoning, and ambiguity-attitude diagnostics;
//! - [`scenarios`]: executable fixtures for four classic decision
//!   puzzles (Monty Hall, pivotal voting, the winner's curse, disclosure);
//! - [`verify`]: the exhaustive theorem-checking harness behind
//!   `heu verify-theorems`;
//! - [`json`]: the JSON document formats used by the CLI.
//!
//! # Quick start
//!
//! Build the Monty Hall contestant who reads "door 2 was opened" as "the
//! prize is not behind door 2", and watch her switch indifference and her
//! taste for ambiguity fall out of the Choquet valuation:
//!
//! ```
//! use heu_core::{conditional_heu, heu_value, scenarios, Act, Rational};
//!
//! let s = scenarios::monty_hall();
//! let behavioral = s.pi_behavioral.as_dense().unwrap();
//! let (p1, o2) = (s.event("P1").unwrap(), s.event("O2").unwrap());
//!
//! // sticking and switching look equally good to her
//! assert_eq!(
//!     conditional_heu(p1, o2, &s.mu, behavioral).unwrap(),
//!     Rational::ratio(1, 2),
//! );
//! // each opened-door bet is worth 2/3, but their mixture only 1/2
//! let bet = Act::bet(4, o2);
//! assert_eq!(heu_value(&bet, &s.mu, behavioral).unwrap(), Rational::ratio(2, 3));
//! ```
//!
//! Identification runs the other way — from betting data back to the pair:
//!
//! ```
//! use heu_core::{compose_capacity, recover_representation, GeneratorForm, Hypothesis};
//! use heu_core::{Interpretation, Measure, Rational};
//!
//! // an agent who cannot tell the last two of four states apart
//! let merge = GeneratorForm::new(4, Hypothesis::EMPTY, vec![
//!     Hypothesis::from_mask(0b0001),
//!     Hypothesis::from_mask(0b0010),
//!     Hypothesis::from_mask(0b1100),
//!     Hypothesis::from_mask(0b1100),
//! ]);
//! let pi = Interpretation::from_generators(&merge).unwrap();
//! let mu = Measure::new(
//!     ["1/6", "1/6", "1/3", "1/3"].map(|w| w.parse::<Rational>().unwrap()).to_vec(),
//! ).unwrap();
//!
//! let observed = compose_capacity(&mu, &pi).unwrap();
//! let recovered = recover_representation(&observed).unwrap();
//! assert_eq!(recovered.pi, pi);
//! // the merged block's mass is pinned; its split is conventional
//! assert_eq!(recovered.mu.of(Hypothesis::from_mask(0b1100)), Rational::ratio(2, 3));
//! ```

// error types double as failure certificates and carry their witnesses
// inline, so Err variants are larger than clippy's default budget
#![allow(clippy::result_large_err)]

pub mod act;
pub mod analysis;
pub mod capacity;
pub mod check;
pub mod elicitation;
pub mod implication;
pub mod interpretation;
pub mod json;
pub mod measure;
pub mod rational;
mod rng;
pub mod scenarios;
pub mod space;
pub mod verify;

pub use act::{Act, ActError};
pub use analysis::{
    better_reasoner, comparative_biconditional, conditional_heu, conditional_joint,
    conditional_objective, conditional_probability, hedging_check, heu_value, is_concave,
    is_convex, AnalysisError, ComparisonResult, HedgeAxiom, HedgingOutcome, Verdict,
};
pub use capacity::{choquet_integral, Capacity, CapacityError};
pub use check::Check;
pub use elicitation::{
    check_inclusion_exclusion, check_modularity, check_relevance, implication_from_capacity,
    normalize_interpretation, recover_representation, verify_representation, Block, ElicitError,
    IeReport, IeWitness, Representation, VerificationReport,
};
pub use implication::{
    check_axioms, down_set, interpretation_from_relation, meet_hypothesis, AxiomReport,
    ImplicationError, ImplicationRelation,
};
pub use interpretation::{
    complete_to_coherent, compose_capacity, enumerate_coherent, enumerate_coherent_with_cap,
    enumerate_weakly_coherent, Classification, GeneratorForm, Interpretation, InterpretationError,
    PropertyReport,
};
pub use measure::{Measure, MeasureError};
pub use rational::{Rational, RationalError};
pub use space::{Hypothesis, SpaceError, StateSpace};
