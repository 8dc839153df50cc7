use std::path::PathBuf;

use braess_cli::{run_command, Outcome, EXIT_CAPACITY, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Outcome {
    run_command(std::iter::once("braess").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> braess_cli::ResultDocument {
    let o = run(args);
    assert_eq!(o.exit_code, EXIT_OK, "{args:?}: {}", o.stderr);
    o.document.expect("successful runs carry a document")
}

fn out<'a>(doc: &'a braess_cli::ResultDocument, key: &str) -> &'a Value {
    doc.outputs.get(key).unwrap_or_else(|| panic!("missing output {key}"))
}

fn temp_file(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("braess-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn poa_on_theta() {
    let doc = ok(&["poa", "-i", &fixture("theta.json")]);
    assert_eq!(out(&doc, "poa"), "2/1");
    assert_eq!(out(&doc, "optimal_cost"), "1/2");
    assert_eq!(out(&doc, "worst_nash_cost"), "1/1");
    assert_eq!(doc.command, "poa");
    assert_eq!(doc.input_digest.as_ref().map(String::len), Some(64));
}

#[test]
fn classify_yes_gadget() {
    let doc = ok(&["classify", "-i", &fixture("gap_yes_r12.json")]);
    assert_eq!(out(&doc, "classification"), "paradox-ridden");
    assert_eq!(out(&doc, "best_worst_cost"), "3/1");
    assert_eq!(out(&doc, "contains_good_subnetwork"), "true");
}

#[test]
fn paths_and_cuts_on_theta() {
    let doc = ok(&["paths", "-i", &fixture("theta.json")]);
    assert_eq!(doc.counts["paths"], 3);
    let doc = ok(&["cuts", "-i", &fixture("theta.json")]);
    assert_eq!(doc.counts["cuts"], 4);
}

#[test]
fn worst_nash_and_dot_labels() {
    let doc = ok(&["worst-nash", "-i", &fixture("theta.json")]);
    assert_eq!(out(&doc, "worst_nash_cost"), "1/1");
    assert_eq!(out(&doc, "flow")["paths"]["su,uv,vt"], "1/1");
    let doc = ok(&["export-dot", "-i", &fixture("theta.json"), "--flow", "worst-nash"]);
    let dot = out(&doc, "dot").as_str().unwrap();
    for id in ["su", "uv", "vt"] {
        assert!(dot.contains(&format!("label=\"{id}: 1 / 1\"")), "{dot}");
    }
}

#[test]
fn results_are_deterministic() {
    let a = ok(&["best-subnet", "-i", &fixture("theta.json")]);
    let b = ok(&["best-subnet", "-i", &fixture("theta.json")]);
    assert_eq!((a.outputs, a.counts, a.input_digest), (b.outputs, b.counts, b.input_digest));
}

#[test]
fn tables() {
    let o = run(&["poa", "-i", &fixture("theta.json"), "--table", "csv"]);
    assert!(o.stdout.ends_with("quantity,value\noptimal_cost,1/2\nworst_nash_cost,1/1\npoa,2/1\n"), "{}", o.stdout);
    let o = run(&["paths", "-i", &fixture("theta.json"), "--table", "md"]);
    assert!(o.stdout.contains("| paths | 3 |"));
}

#[test]
fn gen_gap_round_trips_through_witness_flows() {
    let dir = std::env::temp_dir().join(format!("braess-cli-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.json").display().to_string();
    let doc = ok(&["gen-gap", "--ddp", "no", "--levels", "1", "--rate", "16", "-o", &path]);
    assert_eq!(out(&doc, "gamma1"), "16/1");
    assert_eq!(out(&doc, "ddp_yes"), "false");
    let doc = ok(&["witness-flows", "-i", &path]);
    let ws = out(&doc, "witnesses").as_array().unwrap();
    assert_eq!(ws.len(), 2);
    let bad = &ws[1];
    assert_eq!(bad["role"], "bad-equilibrium");
    assert_eq!(bad["cost"], "16/9");
    assert_eq!(bad["is_nash"], true);
}

#[test]
fn gen_gap_matches_fixture() {
    let doc = ok(&["gen-gap", "--ddp", "yes", "--rate", "12", "--eps", "1/8"]);
    let fixture: Value = serde_json::from_str(&std::fs::read_to_string(fixture("gap_yes_r12.json")).unwrap()).unwrap();
    assert_eq!(out(&doc, "instance"), &fixture);
}

#[test]
fn sparsify_and_approx() {
    let doc = ok(&["sparsify", "-i", &fixture("theta.json"), "--eps", "1/4", "--flow", "opt"]);
    assert_eq!(doc.counts["k"], 19);
    assert!(doc.counts["support"] <= 19);
    let doc = ok(&["approx-best-subnet", "-i", &fixture("theta.json"), "--eps", "1/2", "--delta", "1/4"]);
    assert_eq!(doc.counts["k"], 74);
    assert_eq!(doc.parameters["xi"], "1/1");
}

#[test]
fn usage_errors_exit_2() {
    let theta = fixture("theta.json");
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["bogus"],
        vec!["poa"],
        vec!["poa", "-i", "/nonexistent/theta.json"],
        vec!["poa", "-i", &theta, "--table", "xml"],
        vec!["sparsify", "-i", &theta, "--eps", "0.25"],
        vec!["sparsify", "-i", &theta, "--eps", "0"],
        vec!["witness-flows", "-i", &theta],
        vec!["approx-best-subnet", "-i", &theta, "--eps", "1/2"],
        vec!["gen-gap", "--ddp", "yes", "--eps", "1/2"],
    ];
    for args in cases {
        let o = run(&args);
        assert_eq!(o.exit_code, EXIT_USAGE, "{args:?}: {}", o.stderr);
        assert!(o.document.is_none());
    }
}

#[test]
fn parse_errors_exit_2() {
    let docs = [
        ("dangling.json", r#"{"schema_version":1,"nodes":["s","t"],"source":"s","sink":"t","edges":[{"id":"e","tail":"x","head":"t","latency":{"type":"linear","a":"1"}}]}"#),
        ("rational.json", r#"{"schema_version":1,"nodes":["s","t"],"source":"s","sink":"t","edges":[{"id":"e","tail":"s","head":"t","latency":{"type":"linear","a":"0.5"}}]}"#),
        ("kind.json", r#"{"schema_version":1,"nodes":["s","t"],"source":"s","sink":"t","edges":[{"id":"e","tail":"s","head":"t","latency":{"type":"cubic","a":"1"}}]}"#),
        ("nopath.json", r#"{"schema_version":1,"nodes":["s","t"],"source":"s","sink":"t","edges":[{"id":"e","tail":"t","head":"s","latency":{"type":"linear","a":"1"}}]}"#),
        ("json.json", "{"),
    ];
    for (name, text) in docs {
        let o = run(&["poa", "-i", &temp_file(name, text)]);
        assert_eq!(o.exit_code, EXIT_USAGE, "{name}: {}", o.stderr);
    }
}

#[test]
fn capacity_errors_exit_3() {
    let o = run(&["approx-best-subnet", "-i", &fixture("theta.json"), "--eps", "1/200", "--delta", "1/400"]);
    assert_eq!(o.exit_code, EXIT_CAPACITY, "{}", o.stderr);
    assert!(o.stderr.contains("capacity"));
}

#[test]
fn unsupported_and_degenerate_exit_4() {
    let o = run(&["worst-nash", "-i", &fixture("affine_pair.json")]);
    assert_eq!(o.exit_code, EXIT_INFEASIBLE, "{}", o.stderr);
    let zero = temp_file(
        "zero.json",
        r#"{"schema_version":1,"nodes":["s","t"],"source":"s","sink":"t","rate":"0/1","edges":[{"id":"e","tail":"s","head":"t","latency":{"type":"linear","a":"1"}}]}"#,
    );
    let o = run(&["poa", "-i", &zero]);
    assert_eq!(o.exit_code, EXIT_INFEASIBLE, "{}", o.stderr);
}

#[test]
fn non_linear_optimum() {
    let doc = ok(&["solve-opt", "-i", &fixture("affine_pair.json")]);
    assert_eq!(out(&doc, "optimal_cost"), "4/3");
    let doc = ok(&["solve-opt", "-i", &fixture("table_link.json")]);
    assert_eq!(out(&doc, "optimal_cost"), "8/11");
}
