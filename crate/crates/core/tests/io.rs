use std::path::PathBuf;

use braess::constructions::{build_gap_tower, TwoDDPInstance};
use braess::equilibrium::{optimal_bottleneck_cost, worst_nash_flow};
use braess::fixtures::theta;
use braess::io::{emit_document, emit_instance, export_dot, parse_document, parse_instance, InstanceDocument, ParseError};
use braess::rational::{q, qi};
use braess::Flow;

fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    assert!(files.len() >= 5, "fixture corpus missing from {}", dir.display());
    files.into_iter().map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(p).unwrap())).collect()
}

#[test]
fn parse_emit_identity_on_corpus() {
    for (name, text) in corpus() {
        let doc = parse_document(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let canonical = emit_document(&doc);
        let again = parse_document(&canonical).unwrap();
        assert_eq!(again, doc, "{name}");
        assert_eq!(emit_document(&again), canonical, "{name}");
        assert!(!canonical.contains('.') || name.contains('.'), "{name}: no decimals");
    }
}

#[test]
fn generated_gadgets_are_canonical() {
    for (name, text) in corpus().into_iter().filter(|(n, _)| n.starts_with("gap_")) {
        let doc = parse_document(&text).unwrap();
        assert!(doc.gadget.is_some(), "{name}");
        assert_eq!(emit_document(&doc), text, "{name}");
    }
}

#[test]
fn theta_document() {
    let (_, text) = corpus().into_iter().find(|(n, _)| n == "theta.json").unwrap();
    let g = parse_instance(&text).unwrap();
    assert_eq!((g.node_count(), g.edge_count()), (4, 5));
    assert_eq!(g, theta(qi(1)));
    assert_eq!(parse_instance(&emit_instance(&g)).unwrap(), g);
}

#[test]
fn gadget_document_at_rate_12() {
    let (_, text) = corpus().into_iter().find(|(n, _)| n == "gap_yes_r12.json").unwrap();
    assert!(text.contains("\"rate\": \"12/1\""));
    assert!(text.contains("\"a\": \"1/2\"") && text.contains("\"a\": \"1/1\""));
    let doc = parse_document(&text).unwrap();
    let gap = doc.gadget.unwrap();
    assert_eq!((gap.gamma1.clone(), gap.gamma2.clone(), gap.level), (qi(4), qi(3), 0));
    assert_eq!(optimal_bottleneck_cost(&doc.instance).unwrap().0, qi(3));
}

#[test]
fn default_rate_is_one() {
    let text = r#"{"schema_version":1,"nodes":["s","t"],"source":"s","sink":"t",
        "edges":[{"id":"e","tail":"s","head":"t","latency":{"type":"linear","a":"3/2"}}]}"#;
    let g = parse_instance(text).unwrap();
    assert_eq!(g.rate(), &qi(1));
    assert!(emit_instance(&g).contains("\"rate\": \"1/1\""));
}

fn err(text: &str) -> ParseError {
    parse_instance(text).unwrap_err()
}

fn one_edge(latency: &str) -> String {
    format!(
        r#"{{"schema_version":1,"nodes":["s","t"],"source":"s","sink":"t","rate":"1/1",
        "edges":[{{"id":"e","tail":"s","head":"t","latency":{latency}}}]}}"#
    )
}

#[test]
fn each_parse_error_is_distinct() {
    assert!(matches!(err("{"), ParseError::Json(_)));
    assert!(matches!(err(&one_edge(r#"{"type":"linear","a":"0.5"}"#)), ParseError::MalformedRational { .. }));
    assert!(matches!(err(&one_edge(r#"{"type":"quadratic","a":"1"}"#)), ParseError::UnknownLatencyType { .. }));
    assert!(matches!(err(&one_edge(r#"{"type":"affine","a":"1"}"#)), ParseError::MissingField { .. }));
    assert!(matches!(err(&one_edge(r#"{"type":"linear","a":"-1"}"#)), ParseError::InvalidLatency { .. }));
    assert!(matches!(
        err(&one_edge(r#"{"type":"table","table":[["0","0"],["1","1"],["1","2"]]}"#)),
        ParseError::InvalidLatency { .. }
    ));
    let dangling = r#"{"schema_version":1,"nodes":["s","t"],"source":"s","sink":"t",
        "edges":[{"id":"e","tail":"x","head":"t","latency":{"type":"linear","a":"1"}}]}"#;
    assert_eq!(err(dangling), ParseError::DanglingReference { role: "tail of `e`".into(), node: "x".into() });
    let no_path = r#"{"schema_version":1,"nodes":["s","m","t"],"source":"s","sink":"t",
        "edges":[{"id":"e","tail":"s","head":"m","latency":{"type":"linear","a":"1"}}]}"#;
    assert_eq!(err(no_path), ParseError::MissingStPath);
    let schema = one_edge(r#"{"type":"linear","a":"1"}"#).replace("\"schema_version\":1", "\"schema_version\":9");
    assert_eq!(err(&schema), ParseError::UnsupportedSchema(9));
}

#[test]
fn tampered_metadata_is_rejected() {
    let d = TwoDDPInstance::from_edges(&[("a", "s1", "t1"), ("b", "s2", "t2"), ("c", "s1", "t2"), ("d", "s2", "t1")]).unwrap();
    let gap = build_gap_tower(&d, 0).unwrap();
    let text = emit_document(&InstanceDocument::from_gap(&gap, qi(12)).unwrap());
    let bad = text.replacen("\"gamma1\": \"4/1\"", "\"gamma1\": \"5/1\"", 1);
    assert!(matches!(parse_document(&bad), Err(ParseError::InvalidMetadata(_))));
    let bad = text.replacen("\"a\": \"1/1\",\n        \"xi\": \"1/1\"", "\"a\": \"2/1\",\n        \"xi\": \"2/1\"", 1);
    assert_ne!(bad, text);
    let e = parse_document(&bad).unwrap_err();
    assert!(matches!(e, ParseError::InvalidMetadata(_)), "{e}");
}

#[test]
fn dot_export() {
    let g = theta(qi(1));
    let plain = export_dot(&g, None);
    assert!(plain.starts_with("digraph"));
    assert_eq!(plain.matches("->").count(), 5);
    let w = worst_nash_flow(&g).unwrap().flow;
    let dot = export_dot(&g, Some(&w));
    for id in ["su", "uv", "vt"] {
        assert!(dot.contains(&format!("\"{id}: 1 / 1\"")), "{dot}");
    }
    assert_eq!(dot.matches("color=red").count(), 2);
    let empty = Flow::new(&g.with_rate(qi(0)).unwrap(), vec![]).unwrap();
    let dot = export_dot(empty.instance(), Some(&empty));
    assert_eq!(dot.matches(": 0 / 0\"").count(), 5);
    let half = braess::fixtures::parallel_links(&[q(1, 2)], qi(1));
    assert!(export_dot(&half, None).contains("e0: "));
}
