mod common;

use common::{example, examples};
use sectional_cli::{parse_workspace, ParseError};

#[test]
fn germ_fixture_shape() {
    let ws = parse_workspace(&std::fs::read_to_string(example("germ.json")).unwrap()).unwrap();
    assert!(ws.ring.is_object());
    assert_eq!(ws.semigroupoids.len(), 2);
    assert_eq!(ws.actions.len(), 1);
    assert_eq!(ws.tasks.len(), 1);
}

#[test]
fn every_example_parses() {
    for p in examples() {
        parse_workspace(&std::fs::read_to_string(&p).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
}

#[test]
fn dangling_references_name_the_missing_id() {
    let text = r#"{"ring": {"kind": "q"},
        "semigroupoids": [{"id": "g", "vertices": ["*"], "arrows": [{"id": "1", "src": "*", "rng": "*"}], "prod": [["1","1","1"]]}],
        "bundles": [{"id": "b", "base": "h"}]}"#;
    match parse_workspace(text) {
        Err(ParseError::Dangling { kind, id, .. }) => assert_eq!((kind, id.as_str()), ("semigroupoid", "h")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn duplicate_ids_across_kinds() {
    let text = r#"{"ring": {"kind": "q"},
        "semigroupoids": [{"id": "g", "vertices": ["*"], "arrows": [{"id": "1", "src": "*", "rng": "*"}], "prod": [["1","1","1"]]}],
        "bundles": [{"id": "g", "base": "g"}]}"#;
    assert!(matches!(parse_workspace(text), Err(ParseError::Duplicate { .. })));
}

#[test]
fn unknown_task_kind_is_a_syntax_error() {
    let err = parse_workspace(r#"{"ring": {"kind": "q"}, "tasks": [{"kind": "prove"}]}"#).unwrap_err();
    assert!(matches!(err, ParseError::Syntax { line: 1, .. }), "{err}");
}

#[test]
fn unknown_theorem_is_rejected() {
    let err =
        parse_workspace(r#"{"ring": {"kind": "q"}, "tasks": [{"kind": "verify", "theorem": "fermat"}]}"#).unwrap_err();
    assert!(err.to_string().contains("fermat"), "{err}");
}

#[test]
fn action_needs_one_carrier() {
    let text = r#"{"ring": {"kind": "q"},
        "semigroupoids": [{"id": "g", "vertices": ["*"], "arrows": [{"id": "1", "src": "*", "rng": "*"}], "prod": [["1","1","1"]]}],
        "actions": [{"id": "a", "actor": "g", "maps": {}}]}"#;
    assert!(matches!(parse_workspace(text), Err(ParseError::Shape(_))));
}

#[test]
fn germ_targets_may_omit_the_algebra() {
    let text = std::fs::read_to_string(example("germ.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["tasks"][0]["targets"] = serde_json::json!([]);
    assert!(matches!(parse_workspace(&v.to_string()), Err(ParseError::Shape(_))));
}
