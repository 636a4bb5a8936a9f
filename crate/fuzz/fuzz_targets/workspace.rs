#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(ws) = sectional_cli::parse_workspace(text) {
            let again = serde_json::to_string(&ws).unwrap();
            sectional_cli::parse_workspace(&again).expect("serialized workspace re-parses");
        }
    }
});
