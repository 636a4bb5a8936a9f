#![no_main]

use libfuzzer_sys::fuzz_target;
use sectional_cli::{run, RunOptions, Selection, Source};

// whole pipeline: load, resolve, validate and verify every task
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let sources = [Source { path: "fuzz.json".into(), text: Ok(text.to_string()) }];
        let opts = RunOptions { selection: Selection::All, ..RunOptions::default() };
        let report = run("fuzz", &sources, &opts);
        assert!(report.exit_code <= 2);
    }
});
