use heu_core::json::{self, CapacityDocError, PiDocError};
use heu_core::{
    analysis, better_reasoner, check_modularity, comparative_biconditional,
    enumerate_coherent_with_cap, is_concave, is_convex, recover_representation, scenarios, verify,
    Act, Capacity, CapacityError, ElicitError, Hypothesis, ImplicationError, Interpretation,
    Measure, Rational,
};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fs;

const USAGE: &str = "\
heu — hypothetical expected utility toolkit

USAGE:
  heu <command> [flags]

COMMANDS:
  check-pi           --in PI.json                check interpretation properties (exit 0 iff coherent)
  classify           --in PI.json                classify an interpretation (always exit 0)
  derive-implication --in PI.json                derive the implication relation of a map
  check-relation     --in REL.json               check the four implication axioms
  build-pi           --in REL-or-GEN.json        build the dense map from a relation or generators
  elicit             --capacity CAP.json [--snap D]   recover the (pi, mu) representation
  value              --act F.json (--rep R.json | --pi PI.json --mu MU.json)
  conditional        --h MASK --o MASK --mu MU.json --pi PI.json [--formula interpreted|objective|joint]
  compare            --pi1 A.json --pi2 B.json   comparative hypothetical reasoning
  diagnose           --capacity CAP.json [--snap D]   concavity, modularity, hedging spot checks
  scenario           NAME [--params P.json]      monty-hall | pivotal-voting | winners-curse | disclosure
  enumerate          --n K                       stream every coherent interpretation on K states
  verify-theorems    [--n K]                     run the exhaustive theorem report (default K = 4)

Every command accepts --out FILE to write the JSON report to a file instead
of stdout, and --help. Masks are little-endian binary strings (\"0101\");
rationals are strings like \"2/3\". The HEU_MAX_N environment variable
raises the enumeration cap for enumerate/verify-theorems at your own risk.

EXIT CODES:
  0  success
  1  a property, axiom, or feasibility check failed (certificate on stdout)
  2  malformed input, dimension mismatch, or usage error
";

/// Flag parser: `--name value` pairs plus bare positionals.
struct Args {
    flags: BTreeMap<String, String>,
    positionals: Vec<String>,
}

enum Outcome {
    /// (exit code, JSON report)
    Report(u8, Value),
    Usage(String),
}

fn usage_error(message: impl Into<String>) -> Outcome {
    Outcome::Usage(message.into())
}

fn input_error(message: impl std::fmt::Display) -> Outcome {
    Outcome::Report(
        2,
        json!({ "error": { "kind": "input", "message": message.to_string() } }),
    )
}

pub fn dispatch(args: &[String]) -> u8 {
    if args.is_empty() {
        eprint!("{USAGE}");
        return 2;
    }
    if args.iter().any(|a| a == "--help" || a == "-h") || args[0] == "help" {
        print!("{USAGE}");
        return 0;
    }
    let command = args[0].as_str();
    let parsed = match parse_args(&args[1..]) {
        Ok(p) => p,
        Err(msg) => return finish(Outcome::Usage(msg), None),
    };
    let out_path = parsed.flags.get("out").cloned();
    let outcome = match command {
        "check-pi" => check_pi(&parsed),
        "classify" => classify(&parsed),
        "derive-implication" => derive_implication(&parsed),
        "check-relation" => check_relation(&parsed),
        "build-pi" => build_pi(&parsed),
        "elicit" => elicit(&parsed),
        "value" => value(&parsed),
        "conditional" => conditional(&parsed),
        "compare" => compare(&parsed),
        "diagnose" => diagnose(&parsed),
        "scenario" => scenario(&parsed),
        "enumerate" => enumerate(&parsed),
        "verify-theorems" => verify_theorems(&parsed),
        other => usage_error(format!("unknown command {other:?}")),
    };
    finish(outcome, out_path.as_deref())
}

fn parse_args(args: &[String]) -> Result<Args, String> {
    let mut flags = BTreeMap::new();
    let mut positionals = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let a = &args[i];
        if let Some(name) = a.strip_prefix("--") {
            let value = args
                .get(i + 1)
                .ok_or_else(|| format!("flag --{name} needs a value"))?;
            if flags.insert(name.to_string(), value.clone()).is_some() {
                return Err(format!("flag --{name} given twice"));
            }
            i += 2;
        } else {
            positionals.push(a.clone());
            i += 1;
        }
    }
    Ok(Args { flags, positionals })
}

fn finish(outcome: Outcome, out_path: Option<&str>) -> u8 {
    match outcome {
        Outcome::Usage(message) => {
            eprintln!("error: {message}");
            eprint!("{USAGE}");
            let doc = json!({ "error": { "kind": "usage", "message": message } });
            emit(&doc, None);
            2
        }
        Outcome::Report(code, doc) => {
            emit(&doc, out_path);
            code
        }
    }
}

fn emit(doc: &Value, out_path: Option<&str>) {
    let rendered = format!(
        "{}\n",
        serde_json::to_string_pretty(doc).expect("reports are valid JSON")
    );
    match out_path {
        Some(path) => {
            if let Err(e) = fs::write(path, rendered) {
                eprintln!("error: cannot write {path}: {e}");
            }
        }
        None => print!("{rendered}"),
    }
}

fn load_json(args: &Args, flag: &str) -> Result<Value, Outcome> {
    let path = args
        .flags
        .get(flag)
        .ok_or_else(|| usage_error(format!("missing --{flag} FILE")))?;
    let text =
        fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| input_error(format!("{path}: invalid JSON: {e}")))
}

fn load_pi(args: &Args, flag: &str) -> Result<Interpretation, Outcome> {
    let doc = load_json(args, flag)?;
    json::parse_interpretation(&doc).map_err(|e| match e {
        PiDocError::Parse(msg) => input_error(msg),
        PiDocError::BadGenerators(defect) => Outcome::Report(
            1,
            json!({ "error": "bad_generators", "defect": defect_to_json(&defect) }),
        ),
    })
}

fn defect_to_json(defect: &heu_core::interpretation::GeneratorDefect) -> Value {
    json!({ "message": defect.to_string() })
}

/// Capacity validity failures carry witnesses and exit 1; size and shape
/// problems are input errors.
fn capacity_error_outcome(err: CapacityError) -> Outcome {
    match &err {
        CapacityError::DimensionMismatch { .. }
        | CapacityError::TooLarge { .. }
        | CapacityError::WrongTableSize { .. } => input_error(err),
        CapacityError::MissingEntry { missing } => Outcome::Report(
            1,
            json!({ "error": "invalid_capacity", "kind": "missing_entry",
                    "mask": format!("{missing:b}") }),
        ),
        CapacityError::NotGrounded { value } => Outcome::Report(
            1,
            json!({ "error": "invalid_capacity", "kind": "not_grounded",
                    "value": value.to_string() }),
        ),
        CapacityError::NotNormalized { value } => Outcome::Report(
            1,
            json!({ "error": "invalid_capacity", "kind": "not_normalized",
                    "value": value.to_string() }),
        ),
        CapacityError::NotMonotone {
            smaller,
            smaller_value,
            larger,
            larger_value,
        } => Outcome::Report(
            1,
            json!({ "error": "invalid_capacity", "kind": "not_monotone",
                    "smaller": format!("{smaller:b}"),
                    "smaller_value": smaller_value.to_string(),
                    "larger": format!("{larger:b}"),
                    "larger_value": larger_value.to_string() }),
        ),
    }
}

fn load_capacity(args: &Args, flag: &str) -> Result<Capacity, Outcome> {
    let doc = load_json(args, flag)?;
    let snap = match args.flags.get("snap") {
        None => None,
        Some(raw) => {
            let denom: u64 = raw
                .parse()
                .map_err(|_| usage_error("--snap needs a positive integer"))?;
            if denom == 0 || denom > 1_000_000 {
                return Err(usage_error("--snap denominator must be in 1..=1000000"));
            }
            Some(denom)
        }
    };
    json::parse_capacity(&doc, snap).map_err(|e| match e {
        CapacityDocError::Parse(msg) => input_error(msg),
        CapacityDocError::Invalid(err) => capacity_error_outcome(err),
    })
}

fn relation_cap_guard(n: usize) -> Result<(), Outcome> {
    if n > heu_core::space::MAX_RELATION_STATES {
        Err(input_error(format!(
            "{n} states exceeds the relation-matrix limit of {}",
            heu_core::space::MAX_RELATION_STATES
        )))
    } else {
        Ok(())
    }
}

fn check_pi(args: &Args) -> Outcome {
    let pi = match load_pi(args, "in") {
        Ok(pi) => pi,
        Err(o) => return o,
    };
    let report = pi.check_properties();
    let mut doc = json::property_report_to_json(&report, pi.n());
    doc.as_object_mut()
        .expect("report object")
        .insert("identity".into(), json!(pi.is_identity()));
    let code = u8::from(!report.coherent());
    Outcome::Report(code, doc)
}

fn classify(args: &Args) -> Outcome {
    let pi = match load_pi(args, "in") {
        Ok(pi) => pi,
        Err(o) => return o,
    };
    let report = pi.check_properties();
    Outcome::Report(
        0,
        json!({
            "classification": report.classification().as_str(),
            "identity": pi.is_identity(),
            "report": json::property_report_to_json(&report, pi.n()),
        }),
    )
}

fn derive_implication(args: &Args) -> Outcome {
    let pi = match load_pi(args, "in") {
        Ok(pi) => pi,
        Err(o) => return o,
    };
    if let Err(o) = relation_cap_guard(pi.n()) {
        return o;
    }
    Outcome::Report(0, json::relation_to_json(&pi.derive_implication()))
}

fn check_relation(args: &Args) -> Outcome {
    let doc = match load_json(args, "in") {
        Ok(doc) => doc,
        Err(o) => return o,
    };
    let rel = match json::parse_relation(&doc) {
        Ok(rel) => rel,
        Err(e) => return input_error(e),
    };
    let report = rel.check_axioms();
    let code = u8::from(!report.all_hold());
    Outcome::Report(code, json::axiom_report_to_json(&report, rel.n()))
}

fn build_pi(args: &Args) -> Outcome {
    let doc = match load_json(args, "in") {
        Ok(doc) => doc,
        Err(o) => return o,
    };
    if doc.get("pairs").is_some() {
        let rel = match json::parse_relation(&doc) {
            Ok(rel) => rel,
            Err(e) => return input_error(e),
        };
        match rel.to_interpretation() {
            Ok(pi) => Outcome::Report(0, json::interpretation_to_json(&pi)),
            Err(ImplicationError::AxiomViolation(report)) => Outcome::Report(
                1,
                json!({
                    "error": "axiom_violation",
                    "axioms": json::axiom_report_to_json(&report, rel.n()),
                }),
            ),
            Err(e) => input_error(e),
        }
    } else {
        match load_pi(args, "in") {
            Ok(pi) => Outcome::Report(0, json::interpretation_to_json(&pi)),
            Err(o) => o,
        }
    }
}

fn elicit(args: &Args) -> Outcome {
    let nu = match load_capacity(args, "capacity") {
        Ok(nu) => nu,
        Err(o) => return o,
    };
    match recover_representation(&nu) {
        Ok(rep) => Outcome::Report(0, json::representation_to_json(&rep)),
        Err(ElicitError::Implication(e)) => input_error(e),
        Err(err) => Outcome::Report(1, json::elicit_error_to_json(&err, nu.n())),
    }
}

fn value(args: &Args) -> Outcome {
    let act_doc = match load_json(args, "act") {
        Ok(doc) => doc,
        Err(o) => return o,
    };
    let act = match json::parse_act(&act_doc) {
        Ok(act) => act,
        Err(e) => return input_error(e),
    };
    let (pi, mu) = match load_pair(args) {
        Ok(parts) => parts,
        Err(o) => return o,
    };
    if act.n() != pi.n() {
        return input_error(format!(
            "act has {} states but the representation has {}",
            act.n(),
            pi.n()
        ));
    }
    match analysis::heu_value(&act, &mu, &pi) {
        Ok(v) => Outcome::Report(
            0,
            json!({
                "value": v.to_string(),
                "classification": pi.classify().as_str(),
            }),
        ),
        Err(analysis::AnalysisError::Capacity(e)) => capacity_error_outcome(e),
        Err(e) => input_error(e),
    }
}

/// `--rep FILE` or the `--pi FILE --mu FILE` pair.
fn load_pair(args: &Args) -> Result<(Interpretation, Measure), Outcome> {
    if args.flags.contains_key("rep") {
        let doc = load_json(args, "rep")?;
        json::parse_representation_parts(&doc).map_err(|e| match e {
            PiDocError::Parse(msg) => input_error(msg),
            PiDocError::BadGenerators(defect) => Outcome::Report(
                1,
                json!({ "error": "bad_generators", "defect": defect_to_json(&defect) }),
            ),
        })
    } else {
        let pi = load_pi(args, "pi")?;
        let mu_doc = load_json(args, "mu")?;
        let mu = json::parse_measure(&mu_doc).map_err(input_error)?;
        if pi.n() != mu.n() {
            return Err(input_error(format!(
                "pi has {} states but mu has {}",
                pi.n(),
                mu.n()
            )));
        }
        Ok((pi, mu))
    }
}

fn conditional(args: &Args) -> Outcome {
    let pi_doc = match load_json(args, "pi") {
        Ok(doc) => doc,
        Err(o) => return o,
    };
    let pi = match json::parse_pi_map(&pi_doc) {
        Ok(pi) => pi,
        Err(PiDocError::Parse(e)) => return input_error(e),
        Err(PiDocError::BadGenerators(defect)) => {
            return Outcome::Report(
                1,
                json!({ "error": "bad_generators", "defect": defect_to_json(&defect) }),
            )
        }
    };
    let mu_doc = match load_json(args, "mu") {
        Ok(doc) => doc,
        Err(o) => return o,
    };
    let mu = match json::parse_measure(&mu_doc) {
        Ok(mu) => mu,
        Err(e) => return input_error(e),
    };
    if pi.n() != mu.n() {
        return input_error(format!("pi has {} states but mu has {}", pi.n(), mu.n()));
    }
    let mask = |flag: &str| -> Result<Hypothesis, Outcome> {
        let raw = args
            .flags
            .get(flag)
            .ok_or_else(|| usage_error(format!("missing --{flag} MASK")))?;
        json::mask_from_string(raw, Some(mu.n())).map_err(input_error)
    };
    let h = match mask("h") {
        Ok(h) => h,
        Err(o) => return o,
    };
    let o = match mask("o") {
        Ok(o) => o,
        Err(out) => return out,
    };
    let formula = args
        .flags
        .get("formula")
        .map(String::as_str)
        .unwrap_or("interpreted");
    let interpreted_o = pi.apply(o);
    let denom = mu.of(interpreted_o);
    if denom.is_zero() {
        return Outcome::Report(
            1,
            json!({
                "error": "null_conditioning_event",
                "conditioning": json::mask_to_string(o, mu.n()),
                "interpreted": json::mask_to_string(interpreted_o, mu.n()),
            }),
        );
    }
    let numerator = match formula {
        "interpreted" => mu.of(pi.apply(h).intersection(interpreted_o)),
        "objective" => mu.of(h.intersection(interpreted_o)),
        "joint" => mu.of(pi.apply(h.intersection(o))),
        other => return usage_error(format!("unknown --formula {other:?}")),
    };
    Outcome::Report(
        0,
        json!({ "formula": formula, "value": (numerator / denom).to_string() }),
    )
}

fn compare(args: &Args) -> Outcome {
    let pi1 = match load_pi(args, "pi1") {
        Ok(pi) => pi,
        Err(o) => return o,
    };
    let pi2 = match load_pi(args, "pi2") {
        Ok(pi) => pi,
        Err(o) => return o,
    };
    if let Err(o) = relation_cap_guard(pi1.n().max(pi2.n())) {
        return o;
    }
    match better_reasoner(&pi1, &pi2) {
        Ok(result) => {
            let biconditional = comparative_biconditional(&pi1, &pi2)
                .expect("comparison succeeded, biconditional is a theorem");
            let mut doc = json::comparison_to_json(&result, pi1.n());
            doc.as_object_mut().expect("comparison object").insert(
                "weakly_better_iff_fewer_implications".into(),
                json!(biconditional),
            );
            Outcome::Report(0, doc)
        }
        Err(analysis::AnalysisError::NotCoherent) => {
            Outcome::Report(1, json!({ "error": "not_coherent" }))
        }
        Err(e) => input_error(e),
    }
}

fn diagnose(args: &Args) -> Outcome {
    let nu = match load_capacity(args, "capacity") {
        Ok(nu) => nu,
        Err(o) => return o,
    };
    let concave = is_concave(&nu);
    let convex = is_convex(&nu);
    let modular = check_modularity(&nu);
    let pair = |w: &(Hypothesis, Hypothesis)| {
        json!({
            "g": json::mask_to_string(w.0, nu.n()),
            "h": json::mask_to_string(w.1, nu.n()),
        })
    };
    let triple = |w: &(Hypothesis, Hypothesis, Hypothesis)| {
        json!({
            "g": json::mask_to_string(w.0, nu.n()),
            "h": json::mask_to_string(w.1, nu.n()),
            "f": json::mask_to_string(w.2, nu.n()),
        })
    };
    let recovery = if nu.n() <= heu_core::space::MAX_RELATION_STATES {
        match recover_representation(&nu) {
            Ok(rep) => json!({
                "status": "representable",
                "representation": json::representation_to_json(&rep),
            }),
            Err(err) => {
                let mut doc = json::elicit_error_to_json(&err, nu.n());
                doc.as_object_mut()
                    .expect("error object")
                    .insert("status".into(), json!("not_representable"));
                doc
            }
        }
    } else {
        json!({ "status": "skipped", "reason": "space above the relation-matrix limit" })
    };
    // hedging spot checks directly on the capacity's Choquet preferences
    let mut hedging_violations = 0u32;
    let mut first_violation = None;
    let mut state: u64 = 0xd1a6_05e5;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let trials = 200u32;
    for _ in 0..trials {
        let f = Act::new(
            (0..nu.n())
                .map(|_| Rational::ratio((next() % 9) as i64, (next() % 4 + 1) as i64))
                .collect(),
        )
        .expect("nonnegative payoffs");
        let g = Act::new(
            (0..nu.n())
                .map(|_| Rational::ratio((next() % 9) as i64, (next() % 4 + 1) as i64))
                .collect(),
        )
        .expect("nonnegative payoffs");
        let vf = nu.choquet(&f).expect("same space");
        let vg = nu.choquet(&g).expect("same space");
        let mix = f.mix(&Rational::ratio(1, 2), &g).expect("same space");
        let vmix = nu.choquet(&mix).expect("same space");
        if vf >= vg && vf < vmix {
            hedging_violations += 1;
            if first_violation.is_none() {
                first_violation = Some(json!({
                    "value_f": vf.to_string(),
                    "value_g": vg.to_string(),
                    "value_mix": vmix.to_string(),
                }));
            }
        }
    }
    let mut hedging = json!({ "trials": trials, "violations": hedging_violations });
    if let Some(v) = first_violation {
        hedging
            .as_object_mut()
            .expect("hedging object")
            .insert("first_violation".into(), v);
    }
    let code = u8::from(!concave.holds);
    Outcome::Report(
        code,
        json!({
            "concave": match &concave.witness {
                None => json!({ "holds": true }),
                Some(w) => json!({ "holds": false, "witness": pair(w) }),
            },
            "convex": match &convex.witness {
                None => json!({ "holds": true }),
                Some(w) => json!({ "holds": false, "witness": pair(w) }),
            },
            "modularity": match &modular.witness {
                None => json!({ "holds": true }),
                Some(w) => json!({ "holds": false, "witness": triple(w) }),
            },
            "recovery": recovery,
            "hedging": hedging,
        }),
    )
}

fn scenario(args: &Args) -> Outcome {
    let name = match args.positionals.first() {
        Some(name) => name.as_str(),
        None => return usage_error("scenario needs a name, e.g. `heu scenario monty-hall`"),
    };
    let params = match args.flags.get("params") {
        None => None,
        Some(_) => match load_json(args, "params") {
            Ok(doc) => Some(doc),
            Err(o) => return o,
        },
    };
    match scenarios::by_name(name, params.as_ref()) {
        Ok(s) => {
            eprint!("{}", s.render_headline());
            let code = u8::from(!s.headline_ok());
            Outcome::Report(code, json::scenario_to_json(&s))
        }
        Err(e) => input_error(e),
    }
}

fn enumeration_cap() -> usize {
    std::env::var("HEU_MAX_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(heu_core::interpretation::DEFAULT_ENUMERATION_CAP)
        .max(heu_core::interpretation::DEFAULT_ENUMERATION_CAP)
}

fn enumerate(args: &Args) -> Outcome {
    let n: usize = match args.flags.get("n").map(|v| v.parse()) {
        Some(Ok(n)) => n,
        _ => return usage_error("enumerate needs --n K"),
    };
    match enumerate_coherent_with_cap(n, enumeration_cap()) {
        Ok(stream) => {
            let maps: Vec<Value> = stream.map(|pi| json::interpretation_to_json(&pi)).collect();
            Outcome::Report(
                0,
                json!({ "n": n, "count": maps.len(), "interpretations": maps }),
            )
        }
        Err(e) => input_error(e),
    }
}

fn verify_theorems(args: &Args) -> Outcome {
    let n: usize = match args.flags.get("n").map(|v| v.parse()) {
        None => 4,
        Some(Ok(n)) => n,
        Some(Err(_)) => return usage_error("--n needs a positive integer"),
    };
    let cap = enumeration_cap();
    if n == 0 || n > cap {
        return input_error(format!(
            "--n {n} is outside 1..={cap} (raise HEU_MAX_N to go further)"
        ));
    }
    let checks = verify::run_all(n);
    for check in &checks {
        if check.passed() {
            eprintln!("PASS {:44} {:>8} instances", check.name, check.instances);
        } else {
            eprintln!(
                "FAIL {:44} {:>8} instances, {} failures: {}",
                check.name,
                check.instances,
                check.failures,
                check.detail.as_deref().unwrap_or("")
            );
        }
    }
    let all_passed = checks.iter().all(verify::TheoremCheck::passed);
    Outcome::Report(
        u8::from(!all_passed),
        json::theorem_checks_to_json(n, &checks),
    )
}
