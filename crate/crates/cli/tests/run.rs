mod common;

use common::{example, examples, fixture, run_files, source};
use sectional_cli::{run, RunOptions, Selection, Status};

#[test]
fn germ_fixture_reports_three_one_two() {
    let r = run_files(&[example("germ.json")], Selection::All, 0);
    assert_eq!(r.exit_code, 0, "{}", r.to_text());
    let v = r.tasks[0].verdict.as_ref().unwrap();
    assert_eq!((v.ranks["crossed-product"], v.ranks["ideal"], v.ranks["germ-algebra"]), (3, 1, 2));
    assert!(v.certificates.iter().all(|c| c.passed()));
}

#[test]
fn broken_associativity_exits_one_with_a_triple() {
    let r = run_files(&[fixture("broken_associativity.json")], Selection::All, 0);
    assert_eq!(r.exit_code, 1);
    let t = &r.tasks[0];
    assert_eq!((t.status, t.code.as_str(), t.rule.as_deref()), (Status::Fail, "invalid", Some("associativity")));
    assert_eq!(t.witness.as_ref().unwrap().len(), 3);
}

#[test]
fn structural_errors_exit_two() {
    let r = run_files(&[fixture("unknown_arrow.json")], Selection::All, 0);
    assert_eq!(r.exit_code, 2);
    assert_eq!(r.tasks[0].code, "structural");
}

#[test]
fn capability_errors_have_their_own_code() {
    let r = run_files(&[fixture("table_ring_quotient.json")], Selection::All, 0);
    assert_eq!(r.exit_code, 1);
    assert_eq!((r.tasks[0].status, r.tasks[0].code.as_str()), (Status::Fail, "capability"));
}

#[test]
fn unmet_expectations_fail() {
    let r = run_files(&[fixture("wrong_expectation.json")], Selection::All, 0);
    assert_eq!(r.exit_code, 1);
    assert_eq!(r.tasks[0].rule.as_deref(), Some("expected-ideal"));
}

#[test]
fn parse_errors_are_file_entries() {
    let sources = vec![sectional_cli::Source { path: "bad.json".into(), text: Ok("{\"ring\": }".into()) }];
    let r = run("test", &sources, &RunOptions::default());
    assert_eq!(r.exit_code, 2);
    assert_eq!((r.tasks[0].index, r.tasks[0].code.as_str()), (None, "parse"));
    assert!(r.tasks[0].message.as_ref().unwrap().starts_with("line 1, column"));
}

#[test]
fn missing_files_are_reported() {
    let sources = vec![sectional_cli::Source { path: "nowhere.json".into(), text: Err("not found".into()) }];
    let r = run("test", &sources, &RunOptions::default());
    assert_eq!((r.exit_code, r.tasks[0].code.as_str()), (2, "io"));
}

#[test]
fn theorem_selection_filters_tasks() {
    let r = run_files(&examples(), Selection::Theorem("crossed".into()), 0);
    assert_eq!(r.tasks.len(), 3);
    assert!(r.tasks.iter().all(|t| t.theorem.as_deref() == Some("crossed")));
}

#[test]
fn ring_override_replaces_the_file_ring() {
    let sources = vec![source(&example("quotient.json"))];
    let opts = RunOptions {
        selection: Selection::Theorem("quotient".into()),
        ring: Some("zmod:5".into()),
        ..RunOptions::default()
    };
    let r = run("test", &sources, &opts);
    assert_eq!(r.exit_code, 0, "{}", r.to_text());
    assert_eq!(r.ring_override.as_deref(), Some("zmod:5"));
}

#[test]
fn parallel_runs_keep_the_report_order() {
    let sources: Vec<_> = examples().iter().map(source).collect();
    let serial = run("test", &sources, &RunOptions::default());
    let parallel = run("test", &sources, &RunOptions { parallel: true, ..RunOptions::default() });
    assert_eq!(serial.to_json(), parallel.to_json());
}

#[test]
fn seeds_come_from_the_task_first() {
    let r = run_files(&[example("associativity.json")], Selection::Theorem("associativity".into()), 5);
    let seeds: Vec<_> = r.tasks.iter().map(|t| t.seed).collect();
    assert_eq!(seeds, vec![Some(5), Some(11)]);
}

#[test]
fn text_and_json_carry_the_same_data() {
    let r = run_files(&examples(), Selection::All, 3);
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let text = r.to_text();
    for t in json["tasks"].as_array().unwrap() {
        let line = text
            .lines()
            .find(|l| {
                l.contains(&format!("{}#{} {} ", t["file"].as_str().unwrap(), t["index"], t["id"].as_str().unwrap()))
            })
            .unwrap_or_else(|| panic!("no line for {t}"));
        assert!(line.starts_with(&format!("[{}]", t["status"].as_str().unwrap())));
        assert!(line.contains(&format!("code={}", t["code"].as_str().unwrap())));
        if let Some(ranks) = t["verdict"]["ranks"].as_object() {
            for (k, v) in ranks {
                assert!(text.contains(&format!("{k}={v}")), "{k}={v} missing");
            }
        }
    }
    let s = &json["summary"];
    assert!(text.contains(&format!(
        "{} passed, {} failed, {} errors; exit {}",
        s["passed"], s["failed"], s["errors"], json["exit_code"]
    )));
}
