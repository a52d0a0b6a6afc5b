//! End-to-end tests of the `heu` binary: exit codes, JSON reports, and
//! byte-determinism.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn heu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heu"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

struct Workdir(PathBuf);

impl Workdir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("heu-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).expect("temp dir");
        Workdir(dir)
    }

    fn file(&self, name: &str, contents: &Value) -> String {
        let path = self.0.join(name);
        std::fs::write(&path, serde_json::to_string_pretty(contents).unwrap()).expect("write");
        path.to_string_lossy().into_owned()
    }

    fn raw_file(&self, name: &str, contents: &str) -> String {
        let path = self.0.join(name);
        std::fs::write(&path, contents).expect("write");
        path.to_string_lossy().into_owned()
    }
}

impl Drop for Workdir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn scenario_is_deterministic_and_exact() {
    let a = heu(&["scenario", "monty-hall"]);
    let b = heu(&["scenario", "monty-hall"]);
    assert_eq!(exit_code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "stdout must be byte-identical");
    assert_eq!(a.stderr, b.stderr);
    let doc = stdout_json(&a);
    let headline = doc["headline"].as_array().unwrap();
    let values: Vec<&str> = headline
        .iter()
        .map(|row| row["computed"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["1/3", "2/3", "1/2", "1/2", "2/3", "2/3", "1/2"]);
    assert!(headline.iter().all(|row| row["ok"].as_bool().unwrap()));
    let table = String::from_utf8_lossy(&a.stderr);
    assert!(table.contains("scenario: monty-hall"));
    assert!(table.contains("[ok]"));
}

#[test]
fn scenario_accepts_parameters() {
    let dir = Workdir::new("scenario-params");
    let params = dir.file(
        "disclosure.json",
        &serde_json::json!({ "n": 3, "beta": ["0", "1", "1"] }),
    );
    let out = heu(&["scenario", "disclosure", "--params", &params]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["headline"][0]["computed"], "1/3");

    // a custom winner's-curse instance on a 1-signal grid
    let params = dir.file(
        "wc.json",
        &serde_json::json!({
            "values": ["1", "3"],
            "signals": 1,
            "weights": ["1/4", "1/4", "1/4", "1/4"],
        }),
    );
    let out = heu(&["scenario", "winners-curse", "--params", &params]);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let doc = stdout_json(&out);
    // independent weights: conditioning on winning changes nothing even
    // for the rational bidder, and the behavioral identity row holds
    assert_eq!(doc["headline"][0]["computed"], "2");
    assert_eq!(doc["extras"][0]["value"], "2");

    // unknown scenario is an input error
    let out = heu(&["scenario", "no-such-thing"]);
    assert_eq!(exit_code(&out), 2);
    // parameters for a parameterless scenario are rejected
    let out = heu(&["scenario", "monty-hall", "--params", &params]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn check_pi_gates_on_coherence() {
    let dir = Workdir::new("check-pi");
    let identity = dir.file(
        "identity.json",
        &heu_core::json::interpretation_to_json(&heu_core::Interpretation::identity(3)),
    );
    let out = heu(&["check-pi", "--in", &identity]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["classification"], "coherent");
    assert_eq!(doc["identity"], true);
    for key in [
        "truth",
        "introspection",
        "monotonicity",
        "consistency",
        "distribution",
    ] {
        assert_eq!(doc[key]["holds"], true, "{key}");
    }

    // the literal Monty Hall map fails monotonicity with a witness
    let monty = heu_core::scenarios::monty_hall();
    let literal = dir.file(
        "literal.json",
        &heu_core::json::interpretation_to_json(monty.pi_behavioral.as_dense().unwrap()),
    );
    let out = heu(&["check-pi", "--in", &literal]);
    assert_eq!(exit_code(&out), 1);
    let doc = stdout_json(&out);
    assert_eq!(doc["classification"], "none");
    assert_eq!(doc["monotonicity"]["holds"], false);
    assert_eq!(doc["monotonicity"]["witness"]["h"], "0110");
    assert_eq!(doc["monotonicity"]["witness"]["g"], "0111");
}

#[test]
fn elicit_round_trips_a_composed_capacity() {
    let dir = Workdir::new("elicit");
    let s = heu_core::scenarios::pivotal_voting();
    let pi = s.pi_behavioral.as_dense().unwrap();
    let nu = heu_core::compose_capacity(&s.mu, pi).unwrap();
    let cap = dir.file("cap.json", &heu_core::json::capacity_to_json(&nu));
    let out = heu(&["elicit", "--capacity", &cap]);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["unique_on_algebra"], true);
    // recovered interpretation equals the scenario map
    let rep_pi =
        heu_core::json::parse_interpretation(&serde_json::json!({ "table": doc["pi"].clone() }))
            .unwrap();
    assert_eq!(&rep_pi, pi);
    // four pair blocks, none identified to the state level
    let blocks = doc["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 4);
    assert!(blocks.iter().all(|b| b["identified"] == false));
}

#[test]
fn elicit_rejects_non_modular_capacity_with_certificate() {
    let dir = Workdir::new("elicit-bad");
    let entries = serde_json::json!({ "entries": {
        "000": "0",   "100": "1/2", "010": "1/4", "110": "1/2",
        "001": "1/4", "101": "3/4", "011": "1/2", "111": "1",
    }});
    let cap = dir.file("cap.json", &entries);
    let out = heu(&["elicit", "--capacity", &cap]);
    assert_eq!(exit_code(&out), 1);
    let doc = stdout_json(&out);
    assert_eq!(doc["error"], "axiom_violation");
    assert_eq!(doc["axioms"]["all_hold"], false);
}

#[test]
fn elicit_snaps_noisy_input() {
    let dir = Workdir::new("elicit-snap");
    let entries = serde_json::json!({ "entries": {
        "00": "0.000001", "10": "0.333333", "01": "0.666667", "11": "0.999999",
    }});
    let cap = dir.file("cap.json", &entries);
    // raw values violate groundedness
    let out = heu(&["elicit", "--capacity", &cap]);
    assert_eq!(exit_code(&out), 1);
    // snapped onto thirds they make an additive capacity
    let out = heu(&["elicit", "--capacity", &cap, "--snap", "3"]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["mu"][0], "1/3");
    assert_eq!(doc["mu"][1], "2/3");
    // snap bound is enforced
    let out = heu(&["elicit", "--capacity", &cap, "--snap", "2000000"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn value_computes_the_heu_worth() {
    let dir = Workdir::new("value");
    let s = heu_core::scenarios::monty_hall();
    let pi = dir.file(
        "pi.json",
        &heu_core::json::interpretation_to_json(s.pi_behavioral.as_dense().unwrap()),
    );
    let mu = dir.file("mu.json", &heu_core::json::measure_to_json(&s.mu));
    let bet = dir.file(
        "bet.json",
        &heu_core::json::act_to_json(&heu_core::Act::bet(4, s.event("O2").unwrap())),
    );
    let out = heu(&["value", "--act", &bet, "--pi", &pi, "--mu", &mu]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["value"], "2/3");
    assert_eq!(doc["classification"], "none");

    // the same via a representation document
    let nu = heu_core::compose_capacity(
        &s.mu,
        &heu_core::complete_to_coherent(
            4,
            &[
                (
                    s.event("O2").unwrap(),
                    heu_core::Hypothesis::from_mask(0b1011),
                ),
                (
                    s.event("O3").unwrap(),
                    heu_core::Hypothesis::from_mask(0b0111),
                ),
            ],
        )
        .unwrap(),
    )
    .unwrap();
    let rep = heu_core::recover_representation(&nu).unwrap();
    let rep_file = dir.file("rep.json", &heu_core::json::representation_to_json(&rep));
    let out = heu(&["value", "--act", &bet, "--rep", &rep_file]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["value"], "2/3");
    assert_eq!(doc["classification"], "coherent");
}

#[test]
fn conditional_supports_generator_maps_on_large_spaces() {
    let dir = Workdir::new("conditional");
    let s = heu_core::scenarios::disclosure_default();
    let pi_doc = match &s.pi_behavioral {
        heu_core::scenarios::PiMap::Generators(form) => {
            heu_core::json::generator_form_to_json(form)
        }
        heu_core::scenarios::PiMap::Dense(_) => panic!("disclosure at n=5 is generator-backed"),
    };
    let pi = dir.file("pi.json", &pi_doc);
    let mu = dir.file("mu.json", &heu_core::json::measure_to_json(&s.mu));
    let v5 = heu_core::json::mask_to_string(s.event("V_5").unwrap(), 30);
    let r0 = heu_core::json::mask_to_string(s.event("R_0").unwrap(), 30);
    let out = heu(&[
        "conditional",
        "--h",
        &v5,
        "--o",
        &r0,
        "--mu",
        &mu,
        "--pi",
        &pi,
        "--formula",
        "objective",
    ]);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["value"], "1/5");

    // the fully-interpreted formula collapses to certainty here
    let out = heu(&[
        "conditional",
        "--h",
        &v5,
        "--o",
        &r0,
        "--mu",
        &mu,
        "--pi",
        &pi,
    ]);
    assert_eq!(stdout_json(&out)["value"], "1");

    // conditioning on an event of interpreted mass zero is a certificate
    let identity = dir.file(
        "id.json",
        &heu_core::json::generator_form_to_json(&heu_core::GeneratorForm::identity(30)),
    );
    let empty = "0".repeat(30);
    let out = heu(&[
        "conditional",
        "--h",
        &v5,
        "--o",
        &empty,
        "--mu",
        &mu,
        "--pi",
        &identity,
    ]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout_json(&out)["error"], "null_conditioning_event");
}

#[test]
fn compare_reports_verdict_and_biconditional() {
    let dir = Workdir::new("compare");
    let id = dir.file(
        "id.json",
        &heu_core::json::interpretation_to_json(&heu_core::Interpretation::identity(3)),
    );
    let top = dir.file(
        "top.json",
        &heu_core::json::interpretation_to_json(&heu_core::Interpretation::constant(
            3,
            heu_core::Hypothesis::full(3),
        )),
    );
    let out = heu(&["compare", "--pi1", &id, "--pi2", &top]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["verdict"], "better");
    assert_eq!(doc["weakly_better_iff_fewer_implications"], true);

    let out = heu(&["compare", "--pi1", &top, "--pi2", &id]);
    assert_eq!(stdout_json(&out)["verdict"], "worse");

    // non-coherent inputs are a certificate failure
    let monty = heu_core::scenarios::monty_hall();
    let literal = dir.file(
        "literal.json",
        &heu_core::json::interpretation_to_json(monty.pi_behavioral.as_dense().unwrap()),
    );
    let id4 = dir.file(
        "id4.json",
        &heu_core::json::interpretation_to_json(&heu_core::Interpretation::identity(4)),
    );
    let out = heu(&["compare", "--pi1", &literal, "--pi2", &id4]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout_json(&out)["error"], "not_coherent");
    // mismatched spaces are an input error
    let out = heu(&["compare", "--pi1", &literal, "--pi2", &id]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn relation_commands() {
    let dir = Workdir::new("relation");
    let rel = heu_core::ImplicationRelation::subset_relation(2);
    let rel_file = dir.file("rel.json", &heu_core::json::relation_to_json(&rel));
    let out = heu(&["check-relation", "--in", &rel_file]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_json(&out)["all_hold"], true);

    let out = heu(&["build-pi", "--in", &rel_file]);
    assert_eq!(exit_code(&out), 0);
    let built = heu_core::json::parse_interpretation(&stdout_json(&out)).unwrap();
    assert!(built.is_identity());

    // break transitivity: subset plus the pair (Omega, empty)
    let mut pairs = rel.pairs();
    pairs.push((heu_core::Hypothesis::full(2), heu_core::Hypothesis::EMPTY));
    let broken = heu_core::ImplicationRelation::from_pairs(2, &pairs).unwrap();
    let broken_file = dir.file("broken.json", &heu_core::json::relation_to_json(&broken));
    let out = heu(&["check-relation", "--in", &broken_file]);
    assert_eq!(exit_code(&out), 1);
    let doc = stdout_json(&out);
    assert_eq!(doc["transitivity"]["holds"], false);
    assert_eq!(doc["transitivity"]["witness"]["h"], "10");
    let out = heu(&["build-pi", "--in", &broken_file]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout_json(&out)["error"], "axiom_violation");

    // derive-implication round-trips through check-relation
    let s = heu_core::scenarios::pivotal_voting();
    let pi_file = dir.file(
        "pi.json",
        &heu_core::json::interpretation_to_json(s.pi_behavioral.as_dense().unwrap()),
    );
    let out = heu(&["derive-implication", "--in", &pi_file]);
    assert_eq!(exit_code(&out), 0);
    let rel_doc = stdout_json(&out);
    let rel_file = dir.file("derived.json", &rel_doc);
    let out = heu(&["check-relation", "--in", &rel_file]);
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn enumerate_counts_match() {
    let out = heu(&["enumerate", "--n", "2"]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["count"], 7);
    assert_eq!(doc["interpretations"].as_array().unwrap().len(), 7);
    // above the default cap without HEU_MAX_N: input error
    let out = heu(&["enumerate", "--n", "5"]);
    assert_eq!(exit_code(&out), 2);
    // raised cap
    let out = Command::new(env!("CARGO_BIN_EXE_heu"))
        .args(["enumerate", "--n", "5"])
        .env("HEU_MAX_N", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn diagnose_flags_convex_capacities() {
    let dir = Workdir::new("diagnose");
    let entries = serde_json::json!({ "entries": {
        "00": "0", "10": "1/4", "01": "1/4", "11": "1",
    }});
    let cap = dir.file("cap.json", &entries);
    let out = heu(&["diagnose", "--capacity", &cap]);
    assert_eq!(exit_code(&out), 1);
    let doc = stdout_json(&out);
    assert_eq!(doc["concave"]["holds"], false);
    assert_eq!(doc["convex"]["holds"], true);
    assert_eq!(doc["recovery"]["status"], "not_representable");

    // an additive capacity diagnoses clean
    let additive = serde_json::json!({ "weights": ["1/2", "1/2"] });
    let cap = dir.file("additive.json", &additive);
    let out = heu(&["diagnose", "--capacity", &cap]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["concave"]["holds"], true);
    assert_eq!(doc["modularity"]["holds"], true);
    assert_eq!(doc["recovery"]["status"], "representable");
    assert_eq!(doc["hedging"]["violations"], 0);
}

#[test]
fn verify_theorems_small() {
    let out = heu(&["verify-theorems", "--n", "2"]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["all_passed"], true);
    assert_eq!(doc["max_n"], 2);
    let lines = String::from_utf8_lossy(&out.stderr);
    assert!(lines.lines().all(|l| l.starts_with("PASS")));
    assert!(lines.lines().count() >= 10);
}

#[test]
fn malformed_input_and_usage_errors() {
    let dir = Workdir::new("errors");
    let bad = dir.raw_file("bad.json", "{ not json");
    let out = heu(&["check-pi", "--in", &bad]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(stdout_json(&out)["error"]["kind"], "input");

    let out = heu(&["frobnicate"]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(stdout_json(&out)["error"]["kind"], "usage");

    let out = heu(&["check-pi"]);
    assert_eq!(exit_code(&out), 2);

    let out = heu(&["--help"]);
    assert_eq!(exit_code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("USAGE"));

    // out-flag writes the report to a file, stdout stays empty
    let identity = dir.file(
        "id.json",
        &heu_core::json::interpretation_to_json(&heu_core::Interpretation::identity(2)),
    );
    let target = dir.0.join("report.json");
    let out = heu(&[
        "classify",
        "--in",
        &identity,
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(written["classification"], "coherent");
}

#[test]
fn junk_input_never_panics_and_exit_codes_are_exhaustive() {
    let dir = Workdir::new("junk");
    let junk_docs = [
        ("null.json", "null"),
        ("num.json", "42"),
        ("list.json", "[1,2,3]"),
        ("empty-obj.json", "{}"),
        ("bad-mask.json", r#"{"table": {"0x": "00", "10": "01"}}"#),
        ("short-table.json", r#"{"table": {"00": "00"}}"#),
        (
            "ragged.json",
            r#"{"table": {"00": "00", "10": "10", "01": "01", "11": "111"}}"#,
        ),
        ("float.json", r#"{"weights": [0.5, 0.5]}"#),
        ("neg.json", r#"{"payoffs": ["-1", "2"]}"#),
        ("zero-den.json", r#"{"weights": ["1/0", "1"]}"#),
        (
            "huge.json",
            r#"{"generators": {"base": "0000000000000000000000000000000",
                "singletons": []}}"#,
        ),
    ];
    for (name, text) in junk_docs {
        let path = dir.raw_file(name, text);
        for command in ["check-pi", "classify", "derive-implication", "build-pi"] {
            let out = heu(&[command, "--in", &path]);
            let code = exit_code(&out);
            assert!(
                (0..=2).contains(&code),
                "{command} on {name}: exit {code}, stderr: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            // stdout stays a single valid JSON document even on failure
            stdout_json(&out);
        }
        let out = heu(&["elicit", "--capacity", &path]);
        assert!((0..=2).contains(&exit_code(&out)), "elicit on {name}");
        stdout_json(&out);
        let out = heu(&["check-relation", "--in", &path]);
        assert!(
            (0..=2).contains(&exit_code(&out)),
            "check-relation on {name}"
        );
        stdout_json(&out);
    }
    // flags without values, duplicate flags, missing files
    for argv in [
        vec!["check-pi", "--in"],
        vec!["check-pi", "--in", "a.json", "--in", "b.json"],
        vec!["check-pi", "--in", "/nonexistent/nope.json"],
        vec!["enumerate", "--n", "not-a-number"],
        vec!["conditional", "--h", "10"],
        vec!["scenario"],
    ] {
        let out = heu(&argv);
        assert_eq!(exit_code(&out), 2, "{argv:?}");
        stdout_json(&out);
    }
}
