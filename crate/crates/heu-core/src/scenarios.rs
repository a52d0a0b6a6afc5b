//! Executable fixtures for four classic hypothetical-reasoning puzzles.
//!
//! Each scenario packages a state space, a probability measure, the
//! rational (identity) and behavioral interpretations, named events, and a
//! headline table of quantities computed two independent ways: `computed`
//! runs through the library machinery, `expected` is the closed-form
//! value. A fixture is healthy when every row agrees exactly.
//!
//! Spaces too large for dense tables (the disclosure game at `n = 5` has
//! 30 states) carry their maps in generator form and evaluate them on
//! demand.

use crate::act::Act;
use crate::analysis::{conditional_heu, conditional_probability, heu_value};
use crate::interpretation::{
    complete_to_coherent, Classification, GeneratorForm, Interpretation, PropertyReport,
};
use crate::measure::Measure;
use crate::rational::Rational;
use crate::space::{Hypothesis, StateSpace};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("bad dimensions: {0}")]
    BadDimensions(String),
}

/// An interpretation carried either as a dense table or, on spaces too
/// large for tables, as a validated generator form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PiMap {
    Dense(Interpretation),
    Generators(GeneratorForm),
}

impl PiMap {
    pub fn n(&self) -> usize {
        match self {
            Self::Dense(pi) => pi.n(),
            Self::Generators(g) => g.n,
        }
    }

    pub fn apply(&self, h: Hypothesis) -> Hypothesis {
        match self {
            Self::Dense(pi) => pi.apply(h),
            Self::Generators(g) => g.apply(h),
        }
    }

    pub fn as_dense(&self) -> Option<&Interpretation> {
        match self {
            Self::Dense(pi) => Some(pi),
            Self::Generators(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadlineRow {
    pub description: String,
    pub computed: Rational,
    pub expected: Rational,
}

/// Derived quantities reported alongside the headline (no pinned value).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtraRow {
    pub description: String,
    pub value: Rational,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub space: StateSpace,
    pub mu: Measure,
    pub pi_rational: PiMap,
    pub pi_behavioral: PiMap,
    /// Honest classification of the behavioral map: checked exhaustively
    /// for dense maps, guaranteed-by-construction for generator forms.
    pub behavioral_classification: Classification,
    /// Property report when the behavioral map is dense.
    pub behavioral_report: Option<PropertyReport>,
    pub named_events: Vec<(String, Hypothesis)>,
    pub headline: Vec<HeadlineRow>,
    pub extras: Vec<ExtraRow>,
    /// Coherent repair of a non-coherent behavioral map, when one exists.
    pub repair: Option<Interpretation>,
}

impl Scenario {
    pub fn headline_ok(&self) -> bool {
        self.headline.iter().all(|row| row.computed == row.expected)
    }

    pub fn event(&self, name: &str) -> Option<Hypothesis> {
        self.named_events
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, h)| h)
    }

    /// Aligned text rendering of the headline table.
    pub fn render_headline(&self) -> String {
        let width = self
            .headline
            .iter()
            .map(|r| r.description.len())
            .chain(self.extras.iter().map(|r| r.description.len()))
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        out.push_str(&format!("scenario: {}\n", self.name));
        for row in &self.headline {
            let mark = if row.computed == row.expected {
                "ok"
            } else {
                "MISMATCH"
            };
            out.push_str(&format!(
                "  {:width$}  computed {}  expected {}  [{}]\n",
                row.description,
                row.computed,
                row.expected,
                mark,
                width = width
            ));
        }
        for row in &self.extras {
            out.push_str(&format!(
                "  {:width$}  value    {}\n",
                row.description,
                row.value,
                width = width
            ));
        }
        out
    }
}

fn r(num: i64, den: i64) -> Rational {
    Rational::ratio(num, den)
}

/// Conditional expectation of a state-payoff vector given an event,
/// classical on the given measure. `None` when the event is null.
fn conditional_expectation(values: &Act, mu: &Measure, event: Hypothesis) -> Option<Rational> {
    let denom = mu.of(event);
    if denom.is_zero() {
        return None;
    }
    let numer: Rational = event
        .states()
        .map(|i| values.payoff(i) * mu.weight(i))
        .sum();
    Some(numer / denom)
}

/// The Monty Hall paradox on the four states (prize door, opened door):
/// w12, w13, w23, w32, with the contestant having picked door 1. The
/// behavioral map reads "door 2 was opened" as "the prize is not behind
/// door 2" (and symmetrically for door 3); taken literally it is not even
/// weakly coherent, which the fixture records together with a coherent
/// repair pinned to the same two images.
pub fn monty_hall() -> Scenario {
    let space = StateSpace::new(vec!["w12", "w13", "w23", "w32"]).expect("static labels");
    let mu = Measure::new(vec![r(1, 6), r(1, 6), r(1, 3), r(1, 3)]).expect("static weights");

    let p1 = Hypothesis::from_mask(0b0011);
    let p2 = Hypothesis::from_mask(0b0100);
    let p3 = Hypothesis::from_mask(0b1000);
    let o2 = Hypothesis::from_mask(0b1001);
    let o3 = Hypothesis::from_mask(0b0110);

    let mut table: Vec<Hypothesis> = Hypothesis::all(4).collect();
    table[o2.mask() as usize] = Hypothesis::from_mask(0b1011); // not-P2
    table[o3.mask() as usize] = Hypothesis::from_mask(0b0111); // not-P3
    let behavioral = Interpretation::new(4, table).expect("static table");
    let report = behavioral.check_properties();
    let classification = report.classification();
    let identity = Interpretation::identity(4);

    let repair = complete_to_coherent(
        4,
        &[
            (o2, Hypothesis::from_mask(0b1011)),
            (o3, Hypothesis::from_mask(0b0111)),
        ],
    )
    .expect("a coherent completion exists for the two pinned images");

    let half = r(1, 2);
    let hedge = Act::bet(4, o2)
        .mix(&half, &Act::bet(4, o3))
        .expect("same space");

    let headline = vec![
        HeadlineRow {
            description: "V(b_P1 | O2), rational".into(),
            computed: conditional_heu(p1, o2, &mu, &identity).expect("positive mass"),
            expected: r(1, 3),
        },
        HeadlineRow {
            description: "V(b_P3 | O2), rational".into(),
            computed: conditional_heu(p3, o2, &mu, &identity).expect("positive mass"),
            expected: r(2, 3),
        },
        HeadlineRow {
            description: "V(b_P1 | O2), behavioral".into(),
            computed: conditional_heu(p1, o2, &mu, &behavioral).expect("positive mass"),
            expected: half.clone(),
        },
        HeadlineRow {
            description: "V(b_P3 | O2), behavioral".into(),
            computed: conditional_heu(p3, o2, &mu, &behavioral).expect("positive mass"),
            expected: half.clone(),
        },
        HeadlineRow {
            description: "V(b_O2), behavioral".into(),
            computed: heu_value(&Act::bet(4, o2), &mu, &behavioral).expect("valid capacity"),
            expected: r(2, 3),
        },
        HeadlineRow {
            description: "V(b_O3), behavioral".into(),
            computed: heu_value(&Act::bet(4, o3), &mu, &behavioral).expect("valid capacity"),
            expected: r(2, 3),
        },
        HeadlineRow {
            description: "V(half b_O2 + half b_O3), behavioral".into(),
            computed: heu_value(&hedge, &mu, &behavioral).expect("valid capacity"),
            expected: half,
        },
    ];

    let extras = vec![
        ExtraRow {
            description: "repair: V(b_P1 | O2)".into(),
            value: conditional_heu(p1, o2, &mu, &repair).expect("positive mass"),
        },
        ExtraRow {
            description: "repair: V(b_P3 | O2)".into(),
            value: conditional_heu(p3, o2, &mu, &repair).expect("positive mass"),
        },
    ];

    Scenario {
        name: "monty-hall".into(),
        space,
        mu,
        pi_rational: PiMap::Dense(identity),
        pi_behavioral: PiMap::Dense(behavioral),
        behavioral_classification: classification,
        behavioral_report: Some(report),
        named_events: vec![
            ("P1".into(), p1),
            ("P2".into(), p2),
            ("P3".into(), p3),
            ("O2".into(), o2),
            ("O3".into(), o3),
        ],
        headline,
        extras,
        repair: Some(repair),
    }
}

/// Pivotal voting: the state records the true state (B or R), the
/// subject's signal (b or r), and whether her vote is pivotal (p or np).
/// The behavioral map ignores pivotality, pairing each state with its
/// p/np partner.
pub fn pivotal_voting() -> Scenario {
    let space = StateSpace::new(vec![
        "B.b.p", "B.r.p", "B.b.np", "B.r.np", "R.b.p", "R.r.p", "R.b.np", "R.r.np",
    ])
    .expect("static labels");
    let mu = Measure::new(vec![
        r(8, 54),
        r(4, 54),
        r(10, 54),
        r(5, 54),
        Rational::zero(),
        Rational::zero(),
        r(1, 6),
        r(2, 6),
    ])
    .expect("static weights");

    // p <-> np partner with the same (state, signal)
    let partner = |i: usize| if i % 4 < 2 { i + 2 } else { i - 2 };
    let singletons: Vec<Hypothesis> = (0..8)
        .map(|i| Hypothesis::singleton(i).union(Hypothesis::singleton(partner(i))))
        .collect();
    let form = GeneratorForm::new(8, Hypothesis::EMPTY, singletons);
    let behavioral = Interpretation::from_generators(&form).expect("pairing generators are valid");
    let report = behavioral.check_properties();
    let classification = report.classification();
    let identity = Interpretation::identity(8);

    let b_states = Hypothesis::from_mask(0b0000_1111);
    let r_states = Hypothesis::from_mask(0b1111_0000);
    let r_signal = Hypothesis::from_mask(0b1010_1010);
    let pivotal = Hypothesis::from_mask(0b0011_0011);
    let rp = r_signal.intersection(pivotal);

    let headline = vec![
        HeadlineRow {
            description: "mu(B | {r,p}), rational".into(),
            computed: conditional_heu(b_states, rp, &mu, &identity).expect("positive mass"),
            expected: Rational::one(),
        },
        HeadlineRow {
            description: "mu(R | pi({r,p})), behavioral".into(),
            computed: conditional_heu(r_states, rp, &mu, &behavioral).expect("positive mass"),
            expected: r(2, 3),
        },
        HeadlineRow {
            description: "mu(B | pi({r,p})), behavioral".into(),
            computed: conditional_heu(b_states, rp, &mu, &behavioral).expect("positive mass"),
            expected: r(1, 3),
        },
        HeadlineRow {
            description: "total probability mass".into(),
            computed: mu.of(Hypothesis::full(8)),
            expected: Rational::one(),
        },
    ];

    Scenario {
        name: "pivotal-voting".into(),
        space,
        mu,
        pi_rational: PiMap::Dense(identity),
        pi_behavioral: PiMap::Dense(behavioral),
        behavioral_classification: classification,
        behavioral_report: Some(report),
        named_events: vec![
            ("B".into(), b_states),
            ("R".into(), r_states),
            ("r-signal".into(), r_signal),
            ("pivotal".into(), pivotal),
            ("r-and-p".into(), rp),
        ],
        headline,
        extras: Vec::new(),
        repair: None,
    }
}

/// The winner's curse: states are (object value, private signal, upper
/// bound of the other bids), ordered value-major. The behavioral bidder
/// collapses the upper-bound coordinate, so her conditional value estimate
/// given a signal and the event of winning equals her estimate given the
/// signal alone — the structural identity carried in the headline.
pub fn winners_curse(
    values: &[Rational],
    signals: usize,
    weights: Measure,
) -> Result<Scenario, ScenarioError> {
    let nv = values.len();
    if nv == 0 {
        return Err(ScenarioError::BadParameters(
            "need at least one value".into(),
        ));
    }
    if signals == 0 {
        return Err(ScenarioError::BadParameters(
            "need at least one signal".into(),
        ));
    }
    if values.iter().any(|v| v.is_negative()) {
        return Err(ScenarioError::BadParameters(
            "values must be nonnegative".into(),
        ));
    }
    let n = nv * signals * nv;
    if weights.n() != n {
        return Err(ScenarioError::BadDimensions(format!(
            "weights cover {} states, the value/signal grid needs {}",
            weights.n(),
            n
        )));
    }
    if n > crate::space::MAX_SPACE_STATES {
        return Err(ScenarioError::BadDimensions(format!(
            "{n} states exceeds the mask-algebra limit"
        )));
    }

    let index = |vi: usize, si: usize, ui: usize| (vi * signals + si) * nv + ui;
    let labels: Vec<String> = (0..n)
        .map(|i| {
            let ui = i % nv;
            let si = (i / nv) % signals;
            let vi = i / (nv * signals);
            format!("v{vi}.s{si}.u{ui}")
        })
        .collect();
    let space = StateSpace::new(labels).map_err(|e| ScenarioError::BadDimensions(e.to_string()))?;

    // behavioral generators: collapse the upper-bound coordinate
    let singletons: Vec<Hypothesis> = (0..n)
        .map(|i| {
            let si = (i / nv) % signals;
            let vi = i / (nv * signals);
            let mut block = Hypothesis::EMPTY;
            for ui in 0..nv {
                block = block.union(Hypothesis::singleton(index(vi, si, ui)));
            }
            block
        })
        .collect();
    let form = GeneratorForm::new(n, Hypothesis::EMPTY, singletons);
    debug_assert!(form.validate().is_ok());

    let value_act = Act::new((0..n).map(|i| values[i / (nv * signals)].clone()).collect())
        .expect("values validated nonnegative");

    let mut win = Hypothesis::EMPTY;
    for vi in 0..nv {
        for si in 0..signals {
            win = win.union(Hypothesis::singleton(index(vi, si, 0)));
        }
    }
    let signal_event = |si: usize| {
        let mut e = Hypothesis::EMPTY;
        for vi in 0..nv {
            for ui in 0..nv {
                e = e.union(Hypothesis::singleton(index(vi, si, ui)));
            }
        }
        e
    };

    let mut headline = Vec::new();
    let mut extras = Vec::new();
    for si in 0..signals {
        let sig = signal_event(si);
        let behavioral_win =
            conditional_expectation(&value_act, &weights, form.apply(sig.intersection(win)));
        let behavioral_sig = conditional_expectation(&value_act, &weights, form.apply(sig));
        if let (Some(with_win), Some(signal_only)) = (behavioral_win, behavioral_sig) {
            headline.push(HeadlineRow {
                description: format!("E[v | s{si}, win] = E[v | s{si}], behavioral"),
                computed: with_win,
                expected: signal_only,
            });
        }
        if let Some(rational_win) =
            conditional_expectation(&value_act, &weights, sig.intersection(win))
        {
            extras.push(ExtraRow {
                description: format!("E[v | s{si}, win], rational"),
                value: rational_win,
            });
        }
    }

    let named_events = (0..signals)
        .map(|si| (format!("s{si}"), signal_event(si)))
        .chain(std::iter::once(("win".to_string(), win)))
        .collect();

    let (pi_rational, pi_behavioral, classification, report) =
        if n <= crate::space::MAX_TABLE_STATES {
            let dense = form.to_interpretation().expect("validated generators");
            let report = dense.check_properties();
            let class = report.classification();
            (
                PiMap::Dense(Interpretation::identity(n)),
                PiMap::Dense(dense),
                class,
                Some(report),
            )
        } else {
            (
                PiMap::Generators(GeneratorForm::identity(n)),
                PiMap::Generators(form),
                Classification::Coherent,
                None,
            )
        };

    Ok(Scenario {
        name: "winners-curse".into(),
        space,
        mu: weights,
        pi_rational,
        pi_behavioral,
        behavioral_classification: classification,
        behavioral_report: report,
        named_events,
        headline,
        extras,
        repair: None,
    })
}

/// The 2-value, 2-signal, 2-bound instance in which winning is bad news:
/// low values make low competing bids (and low signals) more likely.
pub fn winners_curse_default() -> Scenario {
    let values = vec![Rational::one(), Rational::from_int(2)];
    let weights = Measure::new(vec![
        // v = 1 (low): signal low w.p. 2/3, low bound w.p. 2/3
        r(4, 18),
        r(2, 18),
        r(2, 18),
        r(1, 18),
        // v = 2 (high): signal high w.p. 2/3, high bound w.p. 2/3
        r(1, 18),
        r(2, 18),
        r(2, 18),
        r(4, 18),
    ])
    .expect("static weights");
    winners_curse(&values, 2, weights).expect("static parameters")
}

/// Disclosure: states are (object value `v_i`, report `r_j`) with `r_0`
/// meaning no disclosure; sellers reveal truthfully with probability
/// `beta_i`. The behavioral buyer treats any hypothesis touching the
/// no-disclosure event as completely uninformative, so her posterior on
/// the top value after silence stays at the prior `1/n`.
pub fn disclosure(n: usize, beta: &[Rational]) -> Result<Scenario, ScenarioError> {
    if n < 2 {
        return Err(ScenarioError::BadParameters(
            "need at least two value types".into(),
        ));
    }
    if beta.len() != n {
        return Err(ScenarioError::BadParameters(format!(
            "{} disclosure probabilities for {} types",
            beta.len(),
            n
        )));
    }
    if beta.iter().any(|b| b.is_negative() || *b > Rational::one()) {
        return Err(ScenarioError::BadParameters(
            "disclosure probabilities must lie in [0, 1]".into(),
        ));
    }
    let states = n * (n + 1);
    if states > crate::space::MAX_SPACE_STATES {
        return Err(ScenarioError::BadDimensions(format!(
            "{states} states exceeds the mask-algebra limit"
        )));
    }

    let index = |i: usize, j: usize| (i - 1) * (n + 1) + j; // i in 1..=n, j in 0..=n
    let labels: Vec<String> = (1..=n)
        .flat_map(|i| (0..=n).map(move |j| format!("v{i}.r{j}")))
        .collect();
    let space = StateSpace::new(labels).map_err(|e| ScenarioError::BadDimensions(e.to_string()))?;

    let frac_n = Rational::ratio(1, n as i64);
    let mut weights = vec![Rational::zero(); states];
    for i in 1..=n {
        weights[index(i, i)] = &beta[i - 1] * &frac_n;
        weights[index(i, 0)] = (Rational::one() - &beta[i - 1]) * &frac_n;
    }
    let mu = Measure::new(weights).map_err(|e| ScenarioError::BadParameters(e.to_string()))?;

    let mut r0 = Hypothesis::EMPTY;
    for i in 1..=n {
        r0 = r0.union(Hypothesis::singleton(index(i, 0)));
    }
    let value_event = |i: usize| {
        let mut e = Hypothesis::EMPTY;
        for j in 0..=n {
            e = e.union(Hypothesis::singleton(index(i, j)));
        }
        e
    };

    // behavioral generators: no-disclosure states blow up to Omega
    let full = Hypothesis::full(states);
    let singletons: Vec<Hypothesis> = (0..states)
        .map(|s| {
            if r0.contains(s) {
                full
            } else {
                Hypothesis::singleton(s)
            }
        })
        .collect();
    let form = GeneratorForm::new(states, Hypothesis::EMPTY, singletons);
    debug_assert!(form.validate().is_ok());

    let v_top = value_event(n);
    let full_disclosers: Vec<usize> = (1..=n)
        .filter(|&i| beta[i - 1] == Rational::one())
        .collect();
    let top_block = full_disclosers
        .iter()
        .fold(Hypothesis::EMPTY, |acc, &i| acc.union(value_event(i)));

    let mut headline = vec![HeadlineRow {
        description: format!("mu(V_{n} | pi(R_0)), behavioral"),
        computed: {
            let interpreted = form.apply(r0);
            mu.of(v_top.intersection(interpreted)) / mu.of(interpreted)
        },
        expected: frac_n.clone(),
    }];
    let silent_mass: Rational = beta.iter().map(|b| (Rational::one() - b) * &frac_n).sum();
    if !silent_mass.is_zero() {
        headline.push(HeadlineRow {
            description: format!("mu(V_{n} | R_0), rational"),
            computed: conditional_probability(&mu, v_top, r0).expect("positive mass"),
            expected: (Rational::one() - &beta[n - 1]) * &frac_n / &silent_mass,
        });
        if !full_disclosers.is_empty() {
            headline.push(HeadlineRow {
                description: "mu(full-discloser values | R_0), rational".into(),
                computed: conditional_probability(&mu, top_block, r0).expect("positive mass"),
                expected: Rational::zero(),
            });
        }
    }

    let mut named_events = vec![("R_0".to_string(), r0)];
    for i in 1..=n {
        named_events.push((format!("V_{i}"), value_event(i)));
    }
    if !full_disclosers.is_empty() {
        named_events.push(("full-disclosers".to_string(), top_block));
    }

    let (pi_rational, pi_behavioral, classification, report) =
        if states <= crate::space::MAX_TABLE_STATES {
            let dense = form.to_interpretation().expect("validated generators");
            let rep = dense.check_properties();
            let class = rep.classification();
            (
                PiMap::Dense(Interpretation::identity(states)),
                PiMap::Dense(dense),
                class,
                Some(rep),
            )
        } else {
            (
                PiMap::Generators(GeneratorForm::identity(states)),
                PiMap::Generators(form),
                Classification::Coherent,
                None,
            )
        };

    Ok(Scenario {
        name: "disclosure".into(),
        space,
        mu,
        pi_rational,
        pi_behavioral,
        behavioral_classification: classification,
        behavioral_report: report,
        named_events,
        headline,
        extras: Vec::new(),
        repair: None,
    })
}

/// Five value types; every type above the lowest always discloses.
pub fn disclosure_default() -> Scenario {
    let beta = vec![
        Rational::zero(),
        Rational::one(),
        Rational::one(),
        Rational::one(),
        Rational::one(),
    ];
    disclosure(5, &beta).expect("static parameters")
}

/// Scenario registry for the CLI.
pub fn by_name(name: &str, params: Option<&serde_json::Value>) -> Result<Scenario, ScenarioError> {
    match (name, params) {
        ("monty-hall", None) => Ok(monty_hall()),
        ("pivotal-voting", None) => Ok(pivotal_voting()),
        ("winners-curse", None) => Ok(winners_curse_default()),
        ("disclosure", None) => Ok(disclosure_default()),
        ("monty-hall" | "pivotal-voting", Some(_)) => Err(ScenarioError::BadParameters(
            format!("scenario {name} takes no parameters"),
        )),
        ("winners-curse", Some(p)) => crate::json::parse_winners_curse_params(p)
            .map_err(|e| ScenarioError::BadParameters(e.to_string()))
            .and_then(|(values, signals, weights)| winners_curse(&values, signals, weights)),
        ("disclosure", Some(p)) => crate::json::parse_disclosure_params(p)
            .map_err(|e| ScenarioError::BadParameters(e.to_string()))
            .and_then(|(n, beta)| disclosure(n, &beta)),
        _ => Err(ScenarioError::BadParameters(format!(
            "unknown scenario {name:?}; available: monty-hall, pivotal-voting, winners-curse, disclosure"
        ))),
    }
}

pub fn scenario_names() -> &'static [&'static str] {
    &[
        "monty-hall",
        "pivotal-voting",
        "winners-curse",
        "disclosure",
    ]
}

/// The behavioral capacity `mu ∘ pi` of a dense-map scenario, when valid.
pub fn behavioral_capacity(s: &Scenario) -> Option<crate::capacity::Capacity> {
    let pi = s.pi_behavioral.as_dense()?;
    crate::interpretation::compose_capacity(&s.mu, pi).ok()
}

/// A disclosure instance small enough for dense tables, used by the
/// round-trip harness.
pub fn disclosure_small() -> Scenario {
    disclosure(2, &[Rational::zero(), Rational::one()]).expect("static parameters")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monty_hall_headline() {
        let s = monty_hall();
        assert!(s.headline_ok(), "{}", s.render_headline());
        assert_eq!(s.behavioral_classification, Classification::None);
        let report = s.behavioral_report.as_ref().unwrap();
        assert!(!report.monotonicity.holds);
        // repair satisfies the pinned images and is coherent
        let repair = s.repair.as_ref().unwrap();
        assert_eq!(repair.classify(), Classification::Coherent);
        assert_eq!(
            repair.apply(s.event("O2").unwrap()),
            Hypothesis::from_mask(0b1011)
        );
        assert_eq!(
            repair.apply(s.event("O3").unwrap()),
            Hypothesis::from_mask(0b0111)
        );
        // repair conditionals reported
        assert_eq!(s.extras.len(), 2);
    }

    #[test]
    fn pivotal_voting_headline() {
        let s = pivotal_voting();
        assert!(s.headline_ok(), "{}", s.render_headline());
        assert_eq!(s.behavioral_classification, Classification::Coherent);
        // the rational voter sees no red state given (r, pivotal)
        let identity = Interpretation::identity(8);
        assert_eq!(
            conditional_heu(
                s.event("R").unwrap(),
                s.event("r-and-p").unwrap(),
                &s.mu,
                &identity
            )
            .unwrap(),
            Rational::zero()
        );
    }

    #[test]
    fn pivotal_voting_structure() {
        let s = pivotal_voting();
        let pi = s.pi_behavioral.as_dense().unwrap();
        // the down-set of a single pivotal state is the powerset of its
        // pair block
        let rel = pi.derive_implication();
        let brp = Hypothesis::singleton(1); // (B, r, p)
        let block = Hypothesis::from_mask(0b0000_1010); // with (B, r, np)
        let down = rel.down_set(brp);
        assert_eq!(down.len(), 4);
        assert!(down.iter().all(|g| g.is_subset_of(block)));
        assert_eq!(pi.apply(brp), block);

        // the image lattice consists of all unions of the four pair blocks
        let lattice = pi.image_lattice().unwrap();
        assert_eq!(lattice.len(), 16);

        // bets on lattice members are worth their block-mass sums
        for &p in &lattice {
            let direct = heu_value(&Act::bet(8, p), &s.mu, pi).unwrap();
            assert_eq!(direct, s.mu.of(p));
        }

        // dualizing deletes any state whose pair partner is absent
        let dual = pi.dualize();
        for h in Hypothesis::all(8) {
            let kept = dual.apply(h);
            for state in 0..8 {
                let partner = if state % 4 < 2 { state + 2 } else { state - 2 };
                let expect = h.contains(state) && h.contains(partner);
                assert_eq!(kept.contains(state), expect);
            }
        }
        assert_eq!(dual.classify(), Classification::DualCoherent);
    }

    #[test]
    fn winners_curse_headline_and_bad_news() {
        let s = winners_curse_default();
        assert!(s.headline_ok(), "{}", s.render_headline());
        assert_eq!(s.behavioral_classification, Classification::Coherent);
        // rational value after winning is strictly below the behavioral one
        let rational_win = s
            .extras
            .iter()
            .find(|e| e.description.starts_with("E[v | s1"))
            .unwrap();
        let behavioral = s
            .headline
            .iter()
            .find(|h| h.description.starts_with("E[v | s1"))
            .unwrap();
        assert!(rational_win.value < behavioral.computed);
        assert_eq!(rational_win.value, Rational::ratio(3, 2));
        assert_eq!(behavioral.computed, Rational::ratio(5, 3));
    }

    #[test]
    fn winners_curse_degenerate_single_value() {
        let values = vec![Rational::one()];
        let weights = Measure::new(vec![Rational::ratio(1, 2), Rational::ratio(1, 2)]).unwrap();
        let s = winners_curse(&values, 2, weights).unwrap();
        assert!(s.headline_ok());
        // one value: every conditional expectation is that value
        for row in &s.headline {
            assert_eq!(row.computed, Rational::one());
        }
        for row in &s.extras {
            assert_eq!(row.value, Rational::one());
        }
    }

    #[test]
    fn disclosure_headline() {
        let s = disclosure_default();
        assert!(s.headline_ok(), "{}", s.render_headline());
        assert_eq!(s.space.n(), 30);
        assert_eq!(s.behavioral_classification, Classification::Coherent);
        // behavioral posterior stays at the prior 1/5; rational drops to 0
        assert_eq!(s.headline[0].computed, Rational::ratio(1, 5));
        assert_eq!(s.headline[1].computed, Rational::zero());
        assert_eq!(s.headline[2].computed, Rational::zero());
    }

    #[test]
    fn disclosure_interpreted_masses() {
        let s = disclosure_default();
        // any hypothesis touching the no-disclosure event reads as the
        // whole space, so its interpreted mass is one; the prior on the
        // top type is 1/5
        let r0 = s.event("R_0").unwrap();
        let v5 = s.event("V_5").unwrap();
        assert_eq!(s.pi_behavioral.apply(v5), Hypothesis::full(30));
        assert_eq!(s.mu.of(s.pi_behavioral.apply(v5)), Rational::one());
        assert_eq!(s.mu.of(v5), Rational::ratio(1, 5));
        // disclosure-only events are read literally
        let disclosed_only = v5.difference(r0);
        assert_eq!(s.pi_behavioral.apply(disclosed_only), disclosed_only);
        // the small dense variant dualizes to a dual-coherent map
        let small = disclosure_small();
        let dense = small.pi_behavioral.as_dense().unwrap();
        assert_eq!(dense.classify(), Classification::Coherent);
        assert_eq!(dense.dualize().classify(), Classification::DualCoherent);
    }

    #[test]
    fn disclosure_all_silent_matches_prior() {
        let beta = vec![Rational::zero(), Rational::zero(), Rational::zero()];
        let s = disclosure(3, &beta).unwrap();
        assert!(s.headline_ok());
        // nothing ever disclosed: rational and behavioral coincide at 1/3
        assert_eq!(s.headline[0].computed, Rational::ratio(1, 3));
        assert_eq!(s.headline[1].computed, Rational::ratio(1, 3));
    }

    #[test]
    fn disclosure_parameter_gates() {
        assert!(disclosure(1, &[Rational::one()]).is_err());
        assert!(disclosure(2, &[Rational::one()]).is_err());
        assert!(disclosure(2, &[Rational::from_int(2), Rational::zero()]).is_err());
        // n = 5 is exactly the 30-state mask limit; n = 6 is over it
        assert!(disclosure(5, &vec![Rational::one(); 5]).is_ok());
        assert!(matches!(
            disclosure(6, &vec![Rational::one(); 6]),
            Err(ScenarioError::BadDimensions(_))
        ));
    }
}
