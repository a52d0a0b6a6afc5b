//! JSON document formats for the CLI.
//!
//! Bitmasks serialize as little-endian binary strings indexed by state
//! order (`"01011"` = states 1, 3, 4); rationals as `"p/q"` strings (plain
//! integers allowed on input, and exact decimals such as `"0.25"`).
//! Serialization uses sorted object keys throughout, so output is
//! byte-deterministic.

use crate::act::Act;
use crate::analysis::{ComparisonResult, HedgingOutcome};
use crate::capacity::{Capacity, CapacityError};
use crate::check::Check;
use crate::elicitation::{ElicitError, IeWitness, Representation, VerificationReport};
use crate::implication::{AxiomReport, ImplicationRelation};
use crate::interpretation::{GeneratorForm, Interpretation, PropertyReport};
use crate::measure::Measure;
use crate::rational::Rational;
use crate::scenarios::{PiMap, Scenario};
use crate::space::{Hypothesis, StateSpace, MAX_TABLE_STATES};
use crate::verify::TheoremCheck;
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0}")]
pub struct JsonError(pub String);

fn err<T>(message: impl Into<String>) -> Result<T, JsonError> {
    Err(JsonError(message.into()))
}

/// Capacity documents split malformed input from semantic validation
/// failures, which carry witnesses and map to a different exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CapacityDocError {
    #[error(transparent)]
    Parse(JsonError),
    #[error(transparent)]
    Invalid(CapacityError),
}

/// Interpretation documents: malformed shapes versus generator-invariant
/// violations, which carry a witness.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PiDocError {
    #[error(transparent)]
    Parse(JsonError),
    #[error("bad generators: {0}")]
    BadGenerators(crate::interpretation::GeneratorDefect),
}

pub fn mask_to_string(h: Hypothesis, n: usize) -> String {
    h.to_bit_string(n)
}

pub fn mask_from_string(s: &str, expect_n: Option<usize>) -> Result<Hypothesis, JsonError> {
    match Hypothesis::from_bit_string(s) {
        Some((h, n)) => match expect_n {
            Some(e) if e != n => err(format!("mask {s:?} has {n} positions, expected {e}")),
            _ => Ok(h),
        },
        None => err(format!("malformed bitmask {s:?} (want e.g. \"0101\")")),
    }
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, JsonError> {
    v.as_object()
        .ok_or_else(|| JsonError(format!("{what} must be a JSON object")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array()
        .ok_or_else(|| JsonError(format!("{what} must be a JSON array")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str, JsonError> {
    v.as_str()
        .ok_or_else(|| JsonError(format!("{what} must be a JSON string")))
}

fn rational_from(v: &Value, what: &str) -> Result<Rational, JsonError> {
    match v {
        Value::String(s) => s.parse().map_err(|e| JsonError(format!("{what}: {e}"))),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_int(i))
            } else {
                err(format!(
                    "{what}: non-integer JSON numbers are not exact; write \"p/q\" instead"
                ))
            }
        }
        _ => err(format!("{what} must be a rational string like \"2/3\"")),
    }
}

fn rationals_from(v: &Value, what: &str) -> Result<Vec<Rational>, JsonError> {
    as_array(v, what)?
        .iter()
        .enumerate()
        .map(|(i, x)| rational_from(x, &format!("{what}[{i}]")))
        .collect()
}

pub fn parse_state_space(v: &Value) -> Result<StateSpace, JsonError> {
    let obj = as_object(v, "state space document")?;
    let states = obj
        .get("states")
        .ok_or_else(|| JsonError("missing \"states\"".into()))?;
    let labels: Vec<String> = as_array(states, "\"states\"")?
        .iter()
        .map(|s| as_str(s, "state label").map(String::from))
        .collect::<Result<_, _>>()?;
    StateSpace::new(labels).map_err(|e| JsonError(e.to_string()))
}

pub fn parse_act(v: &Value) -> Result<Act, JsonError> {
    let obj = as_object(v, "act document")?;
    let payoffs = obj
        .get("payoffs")
        .ok_or_else(|| JsonError("missing \"payoffs\"".into()))?;
    Act::new(rationals_from(payoffs, "\"payoffs\"")?).map_err(|e| JsonError(e.to_string()))
}

pub fn parse_measure(v: &Value) -> Result<Measure, JsonError> {
    let obj = as_object(v, "measure document")?;
    let weights = obj
        .get("weights")
        .ok_or_else(|| JsonError("missing \"weights\"".into()))?;
    Measure::new(rationals_from(weights, "\"weights\"")?).map_err(|e| JsonError(e.to_string()))
}

/// Parse a capacity document: either `{"entries": {mask: value}}` covering
/// every subset, or `{"weights": [...]}` for the additive capacity of a
/// measure. `snap` pre-rounds every value to the nearest multiple of
/// `1/snap`.
pub fn parse_capacity(v: &Value, snap: Option<u64>) -> Result<Capacity, CapacityDocError> {
    let obj = as_object(v, "capacity document").map_err(CapacityDocError::Parse)?;
    let snap_value = |r: Rational| match snap {
        Some(d) => r.snap(d),
        None => r,
    };
    if let Some(entries) = obj.get("entries") {
        let map = as_object(entries, "\"entries\"").map_err(CapacityDocError::Parse)?;
        let mut n: Option<usize> = None;
        let mut parsed: Vec<(Hypothesis, Rational)> = Vec::with_capacity(map.len());
        for (key, value) in map {
            let h = mask_from_string(key, n).map_err(CapacityDocError::Parse)?;
            n = Some(key.len());
            let r =
                rational_from(value, &format!("entry {key:?}")).map_err(CapacityDocError::Parse)?;
            parsed.push((h, snap_value(r)));
        }
        let n = n.ok_or_else(|| CapacityDocError::Parse(JsonError("empty \"entries\"".into())))?;
        Capacity::from_entries(n, parsed).map_err(CapacityDocError::Invalid)
    } else if let Some(weights) = obj.get("weights") {
        let raw = rationals_from(weights, "\"weights\"").map_err(CapacityDocError::Parse)?;
        let raw: Vec<Rational> = raw.into_iter().map(snap_value).collect();
        if raw.len() > MAX_TABLE_STATES {
            return Err(CapacityDocError::Invalid(CapacityError::TooLarge {
                n: raw.len(),
            }));
        }
        let mu =
            Measure::new(raw).map_err(|e| CapacityDocError::Parse(JsonError(e.to_string())))?;
        Ok(Capacity::from_measure(&mu))
    } else {
        Err(CapacityDocError::Parse(JsonError(
            "capacity document needs \"entries\" or \"weights\"".into(),
        )))
    }
}

/// Parse an interpretation carried either as a dense `{"table": ...}` or a
/// compact `{"generators": ...}` document.
pub fn parse_pi_map(v: &Value) -> Result<PiMap, PiDocError> {
    let parse = |e: JsonError| PiDocError::Parse(e);
    let obj = as_object(v, "interpretation document").map_err(parse)?;
    if let Some(table) = obj.get("table") {
        let map = as_object(table, "\"table\"").map_err(parse)?;
        let mut n: Option<usize> = None;
        let mut entries: Vec<(Hypothesis, Hypothesis)> = Vec::with_capacity(map.len());
        for (key, value) in map {
            let h = mask_from_string(key, n).map_err(parse)?;
            n = Some(key.len());
            let img =
                mask_from_string(as_str(value, "table image").map_err(parse)?, n).map_err(parse)?;
            entries.push((h, img));
        }
        let n = n.ok_or_else(|| parse(JsonError("empty \"table\"".into())))?;
        let size = 1usize << n;
        if entries.len() != size {
            return Err(parse(JsonError(format!(
                "table has {} entries, expected {} for {} states",
                entries.len(),
                size,
                n
            ))));
        }
        let mut table = vec![None; size];
        for (h, img) in entries {
            table[h.mask() as usize] = Some(img);
        }
        let table: Vec<Hypothesis> = table
            .into_iter()
            .enumerate()
            .map(|(m, slot)| {
                slot.ok_or_else(|| {
                    parse(JsonError(format!(
                        "table is missing mask {}",
                        Hypothesis::from_mask(m as u32).to_bit_string(n)
                    )))
                })
            })
            .collect::<Result<_, _>>()?;
        Interpretation::new(n, table)
            .map(PiMap::Dense)
            .map_err(|e| parse(JsonError(e.to_string())))
    } else if let Some(generators) = obj.get("generators") {
        let gobj = as_object(generators, "\"generators\"").map_err(parse)?;
        let base_str = as_str(
            gobj.get("base")
                .ok_or_else(|| parse(JsonError("missing \"base\"".into())))?,
            "\"base\"",
        )
        .map_err(parse)?;
        let base = mask_from_string(base_str, None).map_err(parse)?;
        let n = base_str.len();
        let singletons: Vec<Hypothesis> = as_array(
            gobj.get("singletons")
                .ok_or_else(|| parse(JsonError("missing \"singletons\"".into())))?,
            "\"singletons\"",
        )
        .map_err(parse)?
        .iter()
        .map(|s| {
            mask_from_string(as_str(s, "singleton image").map_err(parse)?, Some(n)).map_err(parse)
        })
        .collect::<Result<_, _>>()?;
        let form = GeneratorForm::new(n, base, singletons);
        form.validate().map_err(PiDocError::BadGenerators)?;
        Ok(PiMap::Generators(form))
    } else {
        Err(parse(JsonError(
            "interpretation document needs \"table\" or \"generators\"".into(),
        )))
    }
}

/// Parse an interpretation and force the dense form.
pub fn parse_interpretation(v: &Value) -> Result<Interpretation, PiDocError> {
    match parse_pi_map(v)? {
        PiMap::Dense(pi) => Ok(pi),
        PiMap::Generators(form) => form
            .to_interpretation()
            .map_err(|e| PiDocError::Parse(JsonError(e.to_string()))),
    }
}

pub fn parse_relation(v: &Value) -> Result<ImplicationRelation, JsonError> {
    let obj = as_object(v, "relation document")?;
    let pairs_value = obj
        .get("pairs")
        .ok_or_else(|| JsonError("missing \"pairs\"".into()))?;
    let rows = as_array(pairs_value, "\"pairs\"")?;
    let mut n: Option<usize> = obj
        .get("n")
        .map(|x| {
            x.as_u64()
                .map(|k| k as usize)
                .ok_or_else(|| JsonError("\"n\" must be a positive integer".into()))
        })
        .transpose()?;
    let mut pairs = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let pair = as_array(row, &format!("pairs[{i}]"))?;
        if pair.len() != 2 {
            return err(format!("pairs[{i}] must be [\"<mask>\", \"<mask>\"]"));
        }
        let h_str = as_str(&pair[0], "pair source")?;
        let h = mask_from_string(h_str, n)?;
        n = Some(h_str.len());
        let g = mask_from_string(as_str(&pair[1], "pair target")?, n)?;
        pairs.push((h, g));
    }
    let n = n.ok_or_else(|| JsonError("relation needs \"n\" when \"pairs\" is empty".into()))?;
    ImplicationRelation::from_pairs(n, &pairs).map_err(|e| JsonError(e.to_string()))
}

/// Parse the `pi` and `mu` halves of a representation document. The `pi`
/// member may be a table document, a generators document, or (as written
/// by `elicit`) a bare table object.
pub fn parse_representation_parts(v: &Value) -> Result<(Interpretation, Measure), PiDocError> {
    let obj = as_object(v, "representation document").map_err(PiDocError::Parse)?;
    let pi_value = obj
        .get("pi")
        .ok_or_else(|| PiDocError::Parse(JsonError("missing \"pi\"".into())))?;
    let pi_doc = if pi_value.get("table").is_some() || pi_value.get("generators").is_some() {
        pi_value.clone()
    } else {
        json!({ "table": pi_value })
    };
    let pi = parse_interpretation(&pi_doc)?;
    let mu_value = obj
        .get("mu")
        .ok_or_else(|| PiDocError::Parse(JsonError("missing \"mu\"".into())))?;
    let mu_doc = if mu_value.is_array() {
        json!({ "weights": mu_value })
    } else {
        mu_value.clone()
    };
    let mu = parse_measure(&mu_doc).map_err(PiDocError::Parse)?;
    if pi.n() != mu.n() {
        return Err(PiDocError::Parse(JsonError(format!(
            "pi has {} states but mu has {}",
            pi.n(),
            mu.n()
        ))));
    }
    Ok((pi, mu))
}

pub fn parse_winners_curse_params(v: &Value) -> Result<(Vec<Rational>, usize, Measure), JsonError> {
    let obj = as_object(v, "winners-curse parameters")?;
    let values = rationals_from(
        obj.get("values")
            .ok_or_else(|| JsonError("missing \"values\"".into()))?,
        "\"values\"",
    )?;
    let signals = obj
        .get("signals")
        .and_then(Value::as_u64)
        .ok_or_else(|| JsonError("missing or non-integer \"signals\"".into()))?
        as usize;
    let weights = Measure::new(rationals_from(
        obj.get("weights")
            .ok_or_else(|| JsonError("missing \"weights\"".into()))?,
        "\"weights\"",
    )?)
    .map_err(|e| JsonError(e.to_string()))?;
    Ok((values, signals, weights))
}

pub fn parse_disclosure_params(v: &Value) -> Result<(usize, Vec<Rational>), JsonError> {
    let obj = as_object(v, "disclosure parameters")?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| JsonError("missing or non-integer \"n\"".into()))? as usize;
    let beta = rationals_from(
        obj.get("beta")
            .ok_or_else(|| JsonError("missing \"beta\"".into()))?,
        "\"beta\"",
    )?;
    Ok((n, beta))
}

// ---- serializers ----

pub fn state_space_to_json(space: &StateSpace) -> Value {
    json!({ "states": space.labels() })
}

pub fn act_to_json(act: &Act) -> Value {
    json!({ "payoffs": act.payoffs().iter().map(|r| r.to_string()).collect::<Vec<_>>() })
}

pub fn measure_to_json(mu: &Measure) -> Value {
    json!({ "weights": mu.weights().iter().map(|r| r.to_string()).collect::<Vec<_>>() })
}

pub fn capacity_to_json(nu: &Capacity) -> Value {
    let mut entries = Map::new();
    for h in Hypothesis::all(nu.n()) {
        entries.insert(h.to_bit_string(nu.n()), json!(nu.value(h).to_string()));
    }
    json!({ "entries": entries })
}

pub fn interpretation_to_json(pi: &Interpretation) -> Value {
    let mut table = Map::new();
    for h in Hypothesis::all(pi.n()) {
        table.insert(
            h.to_bit_string(pi.n()),
            json!(pi.apply(h).to_bit_string(pi.n())),
        );
    }
    json!({ "table": table })
}

pub fn generator_form_to_json(form: &GeneratorForm) -> Value {
    json!({
        "generators": {
            "base": form.base.to_bit_string(form.n),
            "singletons": form
                .singletons
                .iter()
                .map(|c| c.to_bit_string(form.n))
                .collect::<Vec<_>>(),
        }
    })
}

pub fn pi_map_to_json(map: &PiMap) -> Value {
    match map {
        PiMap::Dense(pi) => interpretation_to_json(pi),
        PiMap::Generators(form) => generator_form_to_json(form),
    }
}

pub fn relation_to_json(rel: &ImplicationRelation) -> Value {
    json!({
        "n": rel.n(),
        "pairs": rel
            .pairs()
            .iter()
            .map(|&(h, g)| json!([h.to_bit_string(rel.n()), g.to_bit_string(rel.n())]))
            .collect::<Vec<_>>(),
    })
}

fn check_to_json<W>(check: &Check<W>, witness: impl Fn(&W) -> Value) -> Value {
    match &check.witness {
        None => json!({ "holds": check.holds }),
        Some(w) => json!({ "holds": check.holds, "witness": witness(w) }),
    }
}

fn one_mask(n: usize) -> impl Fn(&Hypothesis) -> Value {
    move |h| json!({ "h": h.to_bit_string(n) })
}

fn pair_mask(n: usize) -> impl Fn(&(Hypothesis, Hypothesis)) -> Value {
    move |(h, g)| json!({ "h": h.to_bit_string(n), "g": g.to_bit_string(n) })
}

pub fn property_report_to_json(report: &PropertyReport, n: usize) -> Value {
    json!({
        "truth": check_to_json(&report.truth, one_mask(n)),
        "introspection": check_to_json(&report.introspection, one_mask(n)),
        "monotonicity": check_to_json(&report.monotonicity, pair_mask(n)),
        "consistency": check_to_json(&report.consistency, pair_mask(n)),
        "distribution": check_to_json(&report.distribution, pair_mask(n)),
        "truth_dual": check_to_json(&report.truth_dual, one_mask(n)),
        "consistency_dual": check_to_json(&report.consistency_dual, pair_mask(n)),
        "classification": report.classification().as_str(),
    })
}

pub fn axiom_report_to_json(report: &AxiomReport, n: usize) -> Value {
    let triple = |labels: [&'static str; 3]| {
        move |(a, b, c): &(Hypothesis, Hypothesis, Hypothesis)| {
            json!({
                labels[0]: a.to_bit_string(n),
                labels[1]: b.to_bit_string(n),
                labels[2]: c.to_bit_string(n),
            })
        }
    };
    json!({
        "transitivity": check_to_json(&report.transitivity, triple(["h", "g", "f"])),
        "deduction": check_to_json(&report.deduction, triple(["h", "h2", "g"])),
        "monotonicity": check_to_json(&report.monotonicity, pair_mask(n)),
        "decomposition": check_to_json(&report.decomposition, triple(["f", "h", "h2"])),
        "all_hold": report.all_hold(),
    })
}

pub fn representation_to_json(rep: &Representation) -> Value {
    let n = rep.pi.n();
    json!({
        "pi": interpretation_to_json(&rep.pi)["table"].clone(),
        "mu": measure_to_json(&rep.mu)["weights"].clone(),
        "algebra": rep
            .algebra()
            .iter()
            .map(|a| a.to_bit_string(n))
            .collect::<Vec<_>>(),
        "blocks": rep
            .blocks
            .iter()
            .map(|b| {
                json!({
                    "block": b.states.to_bit_string(n),
                    "mass": b.mass.to_string(),
                    "identified": b.identified,
                })
            })
            .collect::<Vec<_>>(),
        "unique_on_algebra": rep.unique_on_algebra,
    })
}

pub fn ie_witness_to_json(w: &IeWitness, n: usize) -> Value {
    json!({
        "collection": w
            .collection
            .iter()
            .map(|h| h.to_bit_string(n))
            .collect::<Vec<_>>(),
        "coefficients": w
            .coefficients
            .iter()
            .map(|(indices, alpha)| json!({ "indices": indices, "alpha": alpha.to_string() }))
            .collect::<Vec<_>>(),
        "expected": w.expected.to_string(),
        "observed": w.observed.to_string(),
    })
}

pub fn verification_report_to_json(report: &VerificationReport, n: usize) -> Value {
    json!({
        "dimensions_match": report.dimensions_match,
        "capacity_match": check_to_json(&report.capacity_match, one_mask(n)),
        "heucond": check_to_json(&report.heucond, pair_mask(n)),
        "choquet_sample": check_to_json(&report.choquet_sample, |t| json!({ "trial": t })),
        "all_pass": report.all_pass(),
    })
}

pub fn comparison_to_json(result: &ComparisonResult, n: usize) -> Value {
    match result.witness {
        Some(w) => json!({ "verdict": result.verdict.as_str(), "witness": w.to_bit_string(n) }),
        None => json!({ "verdict": result.verdict.as_str() }),
    }
}

pub fn hedging_to_json(outcome: &HedgingOutcome) -> Value {
    json!({
        "axiom": match outcome.axiom {
            crate::analysis::HedgeAxiom::AversionToHedging => "aversion_to_hedging",
            crate::analysis::HedgeAxiom::PreferenceForHedging => "preference_for_hedging",
        },
        "value_f": outcome.value_f.to_string(),
        "value_g": outcome.value_g.to_string(),
        "value_mix": outcome.value_mix.to_string(),
        "consistent": outcome.consistent,
    })
}

pub fn elicit_error_to_json(err: &ElicitError, n: usize) -> Value {
    match err {
        ElicitError::AxiomViolation(report) => json!({
            "error": "axiom_violation",
            "axioms": axiom_report_to_json(report, n),
        }),
        ElicitError::ExtensionInfeasible(witness) => json!({
            "error": "extension_infeasible",
            "identity": ie_witness_to_json(witness, n),
        }),
        ElicitError::HeucondViolation { left, right } => json!({
            "error": "heucond_violation",
            "left": left.to_bit_string(n),
            "right": right.to_bit_string(n),
        }),
        ElicitError::NotModular { witness: (g, h, f) } => json!({
            "error": "prerequisite_failed",
            "requirement": "modularity",
            "witness": {
                "g": g.to_bit_string(n),
                "h": h.to_bit_string(n),
                "f": f.to_bit_string(n),
            },
        }),
        ElicitError::DerivedAxiomsFail(report) => json!({
            "error": "prerequisite_failed",
            "requirement": "derived-relation-axioms",
            "axioms": axiom_report_to_json(report, n),
        }),
        ElicitError::NotCoherent => json!({ "error": "not_coherent" }),
        ElicitError::TooManySets { n_max } => {
            json!({ "error": "too_many_sets", "n_max": n_max })
        }
        ElicitError::Implication(e) => json!({ "error": "relation", "message": e.to_string() }),
    }
}

pub fn scenario_to_json(s: &Scenario) -> Value {
    let n = s.space.n();
    let mut events = Map::new();
    for (name, h) in &s.named_events {
        events.insert(name.clone(), json!(h.to_bit_string(n)));
    }
    let mut doc = json!({
        "name": s.name,
        "states": s.space.labels(),
        "mu": measure_to_json(&s.mu),
        "pi_rational": pi_map_to_json(&s.pi_rational),
        "pi_behavioral": pi_map_to_json(&s.pi_behavioral),
        "behavioral_classification": s.behavioral_classification.as_str(),
        "events": events,
        "headline": s
            .headline
            .iter()
            .map(|row| {
                json!({
                    "description": row.description,
                    "computed": row.computed.to_string(),
                    "expected": row.expected.to_string(),
                    "ok": row.computed == row.expected,
                })
            })
            .collect::<Vec<_>>(),
        "extras": s
            .extras
            .iter()
            .map(|row| json!({ "description": row.description, "value": row.value.to_string() }))
            .collect::<Vec<_>>(),
    });
    let obj = doc.as_object_mut().expect("built as object");
    if let Some(report) = &s.behavioral_report {
        obj.insert(
            "behavioral_report".into(),
            property_report_to_json(report, n),
        );
    }
    if let Some(repair) = &s.repair {
        obj.insert("repair".into(), interpretation_to_json(repair));
    }
    doc
}

pub fn theorem_checks_to_json(n_max: usize, checks: &[TheoremCheck]) -> Value {
    json!({
        "max_n": n_max,
        "all_passed": checks.iter().all(TheoremCheck::passed),
        "checks": checks
            .iter()
            .map(|c| {
                let mut entry = json!({
                    "name": c.name,
                    "instances": c.instances,
                    "failures": c.failures,
                    "passed": c.passed(),
                });
                if let Some(detail) = &c.detail {
                    entry
                        .as_object_mut()
                        .expect("built as object")
                        .insert("detail".into(), json!(detail));
                }
                entry
            })
            .collect::<Vec<_>>(),
    })
}
