mod common;

use common::{fixtures, read, run_json};
use fwlab::{format_scenario, parse_scenario, RunConfig};
use serde_json::Value;

fn file_named(stem: &str) -> String {
    let path = fixtures("corpus")
        .into_iter()
        .find(|p| p.file_stem().unwrap().to_str().unwrap().starts_with(stem))
        .unwrap_or_else(|| panic!("no corpus file {stem}"));
    read(&path)
}

fn report(stem: &str) -> Value {
    serde_json::from_str(&run_json(&file_named(stem), &RunConfig::default())).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn corpus_is_large_enough() {
    assert!(fixtures("corpus").len() >= 20);
}

#[test]
fn corpus_round_trips() {
    for path in fixtures("corpus") {
        let text = read(&path);
        let ast = parse_scenario(&text).unwrap();
        let formatted = format_scenario(&ast);
        let again = parse_scenario(&formatted)
            .unwrap_or_else(|e| panic!("{}: formatted text fails to parse: {e:?}", path.display()));
        assert_eq!(again, ast, "{}", path.display());
        assert_eq!(format_scenario(&again), formatted, "{}", path.display());
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let config = RunConfig {
        seed: 17,
        ..RunConfig::default()
    };
    for path in fixtures("corpus") {
        let text = read(&path);
        assert_eq!(
            run_json(&text, &config),
            run_json(&text, &config),
            "{}",
            path.display()
        );
    }
}

#[test]
fn formatted_scenarios_report_identically() {
    let config = RunConfig::default();
    for path in fixtures("corpus") {
        let text = read(&path);
        let formatted = format_scenario(&parse_scenario(&text).unwrap());
        let strip_lines = |s: String| {
            let mut v: Value = serde_json::from_str(&s).unwrap();
            for q in v["queries"].as_array_mut().unwrap() {
                q.as_object_mut().unwrap().remove("line");
            }
            v.to_string()
        };
        assert_eq!(
            strip_lines(run_json(&text, &config)),
            strip_lines(run_json(&formatted, &config)),
            "{}",
            path.display()
        );
    }
}

const EXPECTED: &[(&str, &[Option<&str>])] = &[
    ("01", &[None]),
    ("02", &[None, None]),
    ("03", &[None; 6]),
    ("04", &[None, None]),
    ("05", &[None]),
    ("06", &[None, None]),
    ("07", &[Some("IncompatibleFrameworks"); 2]),
    ("08", &[Some("IncompatibleProjectors"); 4]),
    ("09", &[None, None, None]),
    ("10", &[Some("NotAProjector")]),
    ("11", &[None]),
    ("12", &[None, Some("InconsistentFamily")]),
    ("13", &[None, None]),
    ("14", &[None, None]),
    ("15", &[None]),
    ("16", &[None]),
    ("17", &[None]),
    ("18", &[None]),
    ("19", &[None, None]),
    ("20", &[None, None]),
    ("21", &[Some("MeaninglessCombination")]),
    ("22", &[Some("IndexOutOfRange")]),
    ("23", &[None, None, None]),
    ("24", &[None, None]),
    ("25", &[None, Some("InconsistentFamily")]),
];

#[test]
fn query_statuses() {
    assert_eq!(EXPECTED.len(), fixtures("corpus").len());
    for (stem, expected) in EXPECTED {
        let r = report(stem);
        let queries = r["queries"].as_array().unwrap();
        assert_eq!(queries.len(), expected.len(), "corpus {stem}");
        for (q, want) in queries.iter().zip(expected.iter()) {
            match want {
                None => {
                    assert_eq!(q["status"], "ok", "corpus {stem}: {q}");
                    assert!(q["error"].is_null());
                }
                Some(kind) => {
                    assert_eq!(q["status"], "error", "corpus {stem}: {q}");
                    assert_eq!(q["error"]["kind"], *kind, "corpus {stem}");
                    assert!(q["result"].is_null());
                }
            }
        }
    }
}

#[test]
fn every_query_kind_is_covered() {
    let mut kinds = std::collections::BTreeSet::new();
    for path in fixtures("corpus") {
        let ast = parse_scenario(&read(&path)).unwrap();
        kinds.extend(ast.queries().map(|q| q.keyword()));
    }
    let all = [
        "prob",
        "eventprob",
        "compat",
        "refine",
        "conj",
        "consistent",
        "histprob",
        "channelcheck",
        "teleport",
    ];
    assert_eq!(kinds, all.into_iter().collect());
}

#[test]
fn grammar_example_shape() {
    let ast = parse_scenario(&file_named("01")).unwrap();
    assert_eq!(ast.declarations().count(), 4);
    assert_eq!(ast.queries().count(), 1);
}

#[test]
fn x_plus_over_z_is_even() {
    let r = report("02");
    let p = &r["queries"][0]["result"]["probabilities"];
    assert!((f(&p[0]) - 0.5).abs() < 1e-12);
    assert!((f(&p[1]) - 0.5).abs() < 1e-12);
    let p = &r["queries"][1]["result"]["probabilities"];
    assert!((f(&p[0]) - 1.0).abs() < 1e-12);
}

#[test]
fn event_probabilities_add() {
    let r = report("03");
    let q = r["queries"].as_array().unwrap();
    let p = |i: usize| f(&q[i]["result"]["probability"]);
    assert!((p(1) + p(2) - p(3)).abs() < 1e-12);
    assert_eq!(p(4), 0.0);
    assert!((p(5) - 1.0).abs() < 1e-12);
}

#[test]
fn z_and_x_are_incompatible() {
    let r = report("04");
    let res = &r["queries"][0]["result"];
    assert_eq!(res["compatible"], false);
    assert!((f(&res["max_commutator_norm"]) - 0.5).abs() < 1e-12);
    assert_eq!(r["queries"][1]["result"]["compatible"], true);
}

#[test]
fn product_refinement() {
    let r = report("06");
    let blocks = r["queries"][0]["result"]["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 4);
    assert!(blocks.iter().all(|b| b["rank"] == 1));
}

#[test]
fn conjunction_verdicts() {
    let r = report("08");
    assert_eq!(
        r["queries"][1]["error"]["verdict"],
        "meaningless (single framework rule)"
    );
    let r = report("09");
    assert_eq!(r["queries"][0]["result"]["zero"], true);
    assert_eq!(r["queries"][0]["result"]["rank"], 0);
    assert_eq!(r["queries"][1]["result"]["rank"], 1);
    assert_eq!(r["queries"][2]["result"]["rank"], 1);
}

#[test]
fn inconsistent_family_values() {
    let r = report("12");
    let c = &r["queries"][0]["result"];
    assert_eq!(c["consistent"], false);
    assert!((f(&c["max_offdiag"]) - 0.25).abs() < 1e-12);
    assert!((f(&c["diagonal_sum"]) - 1.0).abs() < 1e-12);
}

#[test]
fn hadamard_family_is_deterministic() {
    let r = report("14");
    let h = r["queries"][1]["result"]["histories"].as_array().unwrap();
    assert_eq!(h[0]["history"], serde_json::json!([0, 0]));
    assert!((f(&h[0]["probability"]) - 1.0).abs() < 1e-12);
}

#[test]
fn channel_verdicts() {
    assert_eq!(report("15")["queries"][0]["result"]["verdict"], "pass");
    let pf = report("16");
    let res = &pf["queries"][0]["result"];
    assert_eq!(res["verdict"], "fail");
    assert_eq!(res["failure"]["basis"], "X");
    assert!((f(&res["failure"]["flips"]["p_plus_to_minus"]) - 0.25).abs() < 1e-12);
    let z = &res["checks"][0]["flips"];
    assert!(f(&z["p_plus_to_minus"]).abs() < 1e-12 && f(&z["p_minus_to_plus"]).abs() < 1e-12);
    let bf = report("17");
    let res = &bf["queries"][0]["result"];
    assert_eq!(res["failure"]["basis"], "Z");
    assert!((f(&res["failure"]["flips"]["p_plus_to_minus"]) - 0.1).abs() < 1e-12);
    assert_eq!(report("18")["queries"][0]["result"]["verdict"], "fail");
}

#[test]
fn teleport_reports() {
    for stem in ["19", "20", "24"] {
        let r = report(stem);
        for q in r["queries"].as_array().unwrap() {
            let res = &q["result"];
            for m in 0..4 {
                assert!((f(&res["outcome_probs"][m]) - 0.25).abs() < 1e-12);
                assert!((f(&res["conditional_match"][m]) - 1.0).abs() < 1e-12);
            }
            assert_eq!(res["consistency"]["consistent"], true);
        }
    }
}

#[test]
fn report_schema() {
    let r = report("01");
    let top: Vec<&String> = r.as_object().unwrap().keys().collect();
    assert_eq!(top, ["queries", "seed", "tolerances", "version"]);
    let q: Vec<&String> = r["queries"][0].as_object().unwrap().keys().collect();
    assert_eq!(q, ["error", "inputs", "kind", "line", "result", "status"]);
}

#[test]
fn seed_changes_only_sampled_estimates() {
    let text = file_named("17");
    let a: Value = serde_json::from_str(&run_json(
        &text,
        &RunConfig {
            seed: 1,
            ..RunConfig::default()
        },
    ))
    .unwrap();
    let b: Value = serde_json::from_str(&run_json(
        &text,
        &RunConfig {
            seed: 2,
            ..RunConfig::default()
        },
    ))
    .unwrap();
    assert_eq!(
        a["queries"][0]["result"]["checks"],
        b["queries"][0]["result"]["checks"]
    );
    assert_ne!(a["seed"], b["seed"]);
}

#[test]
fn empty_scenario_formats_to_empty_text() {
    let ast = parse_scenario("").unwrap();
    assert_eq!(format_scenario(&ast), "");
    let ast = parse_scenario("# only a comment\n\n").unwrap();
    assert_eq!(format_scenario(&ast), "");
}

#[test]
fn declaration_order_is_preserved() {
    let ast = parse_scenario(&file_named("08")).unwrap();
    let names: Vec<&str> = ast.declarations().map(|d| d.name()).collect();
    assert_eq!(names, ["Pz+", "Pz-", "Px+", "Px-"]);
}
